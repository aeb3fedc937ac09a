//! Q-linear algebra on vectors of rational functions.
//!
//! A vector of rational functions is flattened into rational coordinates by
//! putting each component over the common denominator of that component across
//! all vectors involved and reading off polynomial coefficients.

use super::mono::Mono;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::rational::Q;
use crate::linalg::Matrix;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Rows are (component, monomial) pairs, columns the input vectors.
fn flatten(vectors: &[&[RatFunc]]) -> Matrix<Q> {
    let k = vectors.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut rows: BTreeMap<(usize, Mono), Vec<Q>> = BTreeMap::new();
    let n = vectors.len();
    for comp in 0..k {
        let mut l = Poly::one();
        for v in vectors {
            if let Some(f) = v.get(comp) {
                if !f.is_zero() && !f.is_polynomial() {
                    l = Poly::lcm(&l, f.den());
                }
            }
        }
        for (a, v) in vectors.iter().enumerate() {
            let Some(f) = v.get(comp) else { continue };
            if f.is_zero() {
                continue;
            }
            let scaled = &f.num().clone() * &l.div_exact(f.den()).expect("lcm is a multiple");
            for (m, c) in scaled.terms() {
                rows.entry((comp, m.clone())).or_insert_with(|| vec![Q::zero(); n])[a] = c.clone();
            }
        }
    }
    Matrix::from_rows(rows.into_values().collect(), n)
}

/// Coordinates x with Σ x_a basis_a = target, if any exist.
pub fn q_coords(target: &[RatFunc], basis: &[Vec<RatFunc>]) -> Option<Vec<Q>> {
    let mut all: Vec<&[RatFunc]> = basis.iter().map(|b| b.as_slice()).collect();
    all.push(target);
    let m = flatten(&all);
    let n = basis.len();
    let a = Matrix::from_rows((0..m.nrows()).map(|i| m.row(i)[..n].to_vec()).collect(), n);
    a.solve(&m.col(n))
}

/// Basis of the Q-linear relations among the vectors.
pub fn q_relations(vectors: &[Vec<RatFunc>]) -> Vec<Vec<Q>> {
    let all: Vec<&[RatFunc]> = vectors.iter().map(|b| b.as_slice()).collect();
    flatten(&all).kernel()
}

pub fn q_rank(vectors: &[Vec<RatFunc>]) -> usize {
    let all: Vec<&[RatFunc]> = vectors.iter().map(|b| b.as_slice()).collect();
    flatten(&all).rank()
}
