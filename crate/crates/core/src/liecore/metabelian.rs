//! Metabelian quotients: Ihara's syzygy description of [L,L], injectivity of
//! ad(v), and eigenspaces of an involution on iterated brackets.

use super::lie::{LieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::exactalg::{qi, Mono, Q};
use crate::linalg::Matrix;
use num_traits::Zero;
use serde::Serialize;
use std::collections::HashMap;

/// Monomials of total degree `k` in `m` variables.
fn monomials(m: usize, k: usize) -> Vec<Mono> {
    fn rec(m: usize, k: usize, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if i + 1 == m {
            cur.push(k as u32);
            out.push(Mono::from_exps(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=k).rev() {
            cur.push(e as u32);
            rec(m, k - e, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Dimension of the degree-k syzygies {(v_j) ∈ Sym^k(Q^m)^m : Σ v_j x_j = 0},
/// computed as the nullity of the multiplication map.
pub fn syzygy_dim(m: usize, k: usize) -> usize {
    let src = monomials(m, k);
    let tgt = monomials(m, k + 1);
    let index: HashMap<Mono, usize> = tgt.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
    let mut a = Matrix::<Q>::zeros(tgt.len(), m * src.len());
    for j in 0..m {
        for (s, mono) in src.iter().enumerate() {
            let t = mono.mul(&Mono::var(j));
            a.set(index[&t], j * src.len() + s, qi(1));
        }
    }
    m * src.len() - a.rank()
}

fn sym_dim(m: usize, k: usize) -> usize {
    monomials(m, k).len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IharaRow {
    pub degree: usize,
    pub lie_dim: usize,
    pub module_dim: usize,
    pub matches: bool,
}

/// Compares dim gr_i [L,L] with the degree-(i−1) part of the syzygy module,
/// less the multiples of the symplectic syzygy in the surface case, for
/// 2 ≤ i ≤ class.
pub fn ihara_check(alg: &LieAlgebra) -> Result<Vec<IharaRow>> {
    let spec = alg.spec();
    if !spec.quotient.metabelian || !spec.quotient.ideal.is_empty() {
        return Err(Error::UnsupportedQuotient("the syzygy description needs a free or surface metabelian quotient".into()));
    }
    let m = spec.gens;
    let dims = alg.graded_dims();
    Ok((2..=spec.class)
        .map(|i| {
            let mut module_dim = syzygy_dim(m, i - 1);
            if spec.quotient.surface.is_some() {
                module_dim -= sym_dim(m, i - 2);
            }
            IharaRow { degree: i, lie_dim: dims[i - 1], module_dim, matches: dims[i - 1] == module_dim }
        })
        .collect())
}

fn check_injectivity_hypotheses(alg: &LieAlgebra) -> Result<()> {
    let spec = alg.spec();
    if !spec.quotient.metabelian || !spec.quotient.ideal.is_empty() {
        return Err(Error::DegenerateSpec("ad(v) injectivity needs a free or surface metabelian quotient".into()));
    }
    match spec.quotient.surface {
        None if spec.gens <= 1 => Err(Error::DegenerateSpec("free metabelian case needs more than one generator".into())),
        Some(_) if spec.gens <= 2 => Err(Error::DegenerateSpec("surface case needs more than two generators".into())),
        _ => Ok(()),
    }
}

/// Matrix of ad(v): gr_i → gr_{i+1} in Hall coordinates.
pub fn ad_matrix(alg: &LieAlgebra, v: &LieElement<Q>, i: usize) -> Matrix<Q> {
    let src = alg.slice(i);
    let cols: Vec<Vec<Q>> = src.map(|j| alg.dense(&alg.bracket(v, &LieElement::basis(j)), i + 1)).collect();
    Matrix::from_cols(&cols, alg.slice(i + 1).len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityRow {
    pub degree: usize,
    pub source_dim: usize,
    pub rank: usize,
    pub injective: bool,
}

/// For each i in `degrees`, whether ad(v): gr_i → gr_{i+1} has full column
/// rank. Needs 2 ≤ i < class and v a nonzero element of degree one.
pub fn ad_injectivity(alg: &LieAlgebra, v: &LieElement<Q>, degrees: std::ops::RangeInclusive<usize>) -> Result<Vec<InjectivityRow>> {
    check_injectivity_hypotheses(alg)?;
    alg.check(v)?;
    if v.is_zero() || v.c.keys().any(|&i| alg.degree(i) != 1) {
        return Err(Error::InvalidInput("v must be a nonzero element of degree one".into()));
    }
    if *degrees.start() < 2 || *degrees.end() >= alg.class() {
        return Err(Error::InvalidInput(format!("degrees must lie in 2..={}", alg.class() - 1)));
    }
    Ok(degrees
        .map(|i| {
            let rank = ad_matrix(alg, v, i).rank();
            let source_dim = alg.slice(i).len();
            InjectivityRow { degree: i, source_dim, rank, injective: rank == source_dim }
        })
        .collect())
}

/// A basis of the span of the given vectors.
fn span_basis(vs: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    if vs.is_empty() || dim == 0 {
        return Vec::new();
    }
    let (r, piv) = Matrix::from_rows(vs.to_vec(), dim).rref();
    (0..piv.len()).map(|i| r.row(i)).collect()
}

/// Bases of W_1..W_n where W_1 = W and W_i = [W, W_{i−1}], as dense vectors
/// on gr_i.
pub fn bracket_powers(alg: &LieAlgebra, w: &[LieElement<Q>], n: usize) -> Result<Vec<Vec<Vec<Q>>>> {
    for x in w {
        alg.check(x)?;
        if x.c.keys().any(|&i| alg.degree(i) != 1) {
            return Err(Error::InvalidInput("W must be spanned by degree-one vectors".into()));
        }
    }
    let n = n.min(alg.class());
    let mut out = vec![span_basis(&w.iter().map(|x| alg.dense(x, 1)).collect::<Vec<_>>(), alg.slice(1).len())];
    let w1: Vec<LieElement<Q>> = out[0].iter().map(|v| alg.from_dense(v, 1)).collect();
    for i in 2..=n {
        let prev: Vec<LieElement<Q>> = out[i - 2].iter().map(|v| alg.from_dense(v, i - 1)).collect();
        let mut vs = Vec::new();
        for a in &w1 {
            for b in &prev {
                vs.push(alg.dense(&alg.bracket(a, b), i));
            }
        }
        out.push(span_basis(&vs, alg.slice(i).len()));
    }
    Ok(out)
}

/// Basis of {x ∈ span(basis) : c x = eps x}.
fn eigen_basis(alg: &LieAlgebra, basis: &[Vec<Q>], i: usize, eps: i64) -> Result<Vec<Vec<Q>>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let dim = alg.slice(i).len();
    let mut cols = Vec::with_capacity(basis.len());
    for b in basis {
        let cb = alg.dense(&alg.involute(&alg.from_dense(b, i))?, i);
        cols.push(cb.iter().zip(b).map(|(x, y)| x - y * qi(eps)).collect::<Vec<Q>>());
    }
    let ker = Matrix::from_cols(&cols, dim).kernel();
    Ok(ker
        .iter()
        .map(|a| (0..dim).map(|r| basis.iter().zip(a).fold(Q::zero(), |acc, (b, x)| acc + &b[r] * x)).collect())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenDims {
    pub degree: usize,
    pub dim: usize,
    pub plus: usize,
    pub minus: usize,
}

/// Dimensions of W_i and of its c = ±1 eigenspaces.
pub fn c_eigenspaces(alg: &LieAlgebra, w: &[LieElement<Q>], i: usize) -> Result<EigenDims> {
    if !alg.has_involution() {
        return Err(Error::InvalidInput("no involution declared".into()));
    }
    if i == 0 || i > alg.class() {
        return Err(Error::InvalidInput(format!("degree must lie in 1..={}", alg.class())));
    }
    let pw = bracket_powers(alg, w, i)?;
    let b = &pw[i - 1];
    Ok(EigenDims { degree: i, dim: b.len(), plus: eigen_basis(alg, b, i, 1)?.len(), minus: eigen_basis(alg, b, i, -1)?.len() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistedInjection {
    pub degree: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub target_minus_dim: usize,
    /// A degree-one v ∈ W for which ad(v) realizes the injection, in Hall
    /// coordinates on gr_1.
    pub witness: Option<Vec<String>>,
    pub injective: bool,
}

/// Whether ad(v) embeds W_i^{c=−1} into W_{i+1}/W_{i+1}^{c=−1} for some v ∈ W.
/// Candidates for v are integer combinations of the basis of W with
/// coefficients in −2..=2, tried in a fixed order.
pub fn twisted_injection(alg: &LieAlgebra, w: &[LieElement<Q>], i: usize) -> Result<TwistedInjection> {
    if !alg.has_involution() {
        return Err(Error::InvalidInput("no involution declared".into()));
    }
    if i == 0 || i >= alg.class() {
        return Err(Error::InvalidInput(format!("degree must lie in 1..={}", alg.class() - 1)));
    }
    let pw = bracket_powers(alg, w, i + 1)?;
    let src = eigen_basis(alg, &pw[i - 1], i, -1)?;
    let tgt_minus = eigen_basis(alg, &pw[i], i + 1, -1)?;
    let dim1 = alg.slice(i + 1).len();
    let c_rank = span_basis(&tgt_minus, dim1).len();
    let mut report = TwistedInjection {
        degree: i,
        source_dim: src.len(),
        target_dim: pw[i].len(),
        target_minus_dim: tgt_minus.len(),
        witness: None,
        injective: src.is_empty(),
    };
    if src.is_empty() {
        return Ok(report);
    }
    let w1 = &pw[0];
    let k = w1.len();
    let total = 5usize.saturating_pow(k as u32).min(5usize.pow(6));
    for code in 1..total {
        let mut coeffs = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            coeffs.push(qi((c % 5) as i64 - 2));
            c /= 5;
        }
        let dense: Vec<Q> = (0..alg.slice(1).len()).map(|r| w1.iter().zip(&coeffs).fold(Q::zero(), |acc, (b, x)| acc + &b[r] * x)).collect();
        if dense.iter().all(|x| x.is_zero()) {
            continue;
        }
        let v = alg.from_dense(&dense, 1);
        let mut rows: Vec<Vec<Q>> = src.iter().map(|b| alg.dense(&alg.bracket(&v, &alg.from_dense(b, i)), i + 1)).collect();
        rows.extend(tgt_minus.iter().cloned());
        if span_basis(&rows, dim1).len() == src.len() + c_rank {
            report.witness = Some(dense.iter().map(|x| x.to_string()).collect());
            report.injective = true;
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::spec::{LieAlgebraSpec, Quotient};

    #[test]
    fn syzygies_of_two_and_three_variables() {
        assert_eq!((1..5).map(|k| syzygy_dim(2, k)).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        // 3·dim Sym^2 − dim Sym^3 = 18 − 10
        assert_eq!(syzygy_dim(3, 2), 8);
    }

    #[test]
    fn ihara_matches_metabelian_dims() {
        let a = LieAlgebra::new(LieAlgebraSpec::new(2, 5, Quotient::metabelian())).unwrap();
        assert!(ihara_check(&a).unwrap().iter().all(|r| r.matches));
        let g1 = LieAlgebra::new(LieAlgebraSpec::new(2, 3, Quotient { metabelian: true, surface: Some(1), ideal: vec![] })).unwrap();
        let rows = ihara_check(&g1).unwrap();
        assert_eq!(rows[0].lie_dim, 0);
        assert!(rows.iter().all(|r| r.matches));
    }

    #[test]
    fn injectivity_and_degenerate_specs() {
        let a = LieAlgebra::new(LieAlgebraSpec::new(2, 5, Quotient::metabelian())).unwrap();
        let x1 = LieElement::basis(0);
        assert!(ad_injectivity(&a, &x1, 2..=4).unwrap().iter().all(|r| r.injective));
        let one = LieAlgebra::new(LieAlgebraSpec::new(1, 3, Quotient::metabelian())).unwrap();
        assert!(matches!(ad_injectivity(&one, &x1, 2..=2), Err(Error::DegenerateSpec(_))));
        let free = LieAlgebra::new(LieAlgebraSpec::free(2, 4)).unwrap();
        assert!(matches!(ad_injectivity(&free, &x1, 2..=3), Err(Error::DegenerateSpec(_))));
    }

    #[test]
    fn sign_involution_parity() {
        let a = LieAlgebra::new(LieAlgebraSpec::free(2, 3).with_involution(vec![-1, -2])).unwrap();
        let w = [LieElement::basis(0), LieElement::basis(1)];
        let e2 = c_eigenspaces(&a, &w, 2).unwrap();
        assert_eq!((e2.dim, e2.plus, e2.minus), (1, 1, 0));
        let e3 = c_eigenspaces(&a, &w, 3).unwrap();
        assert_eq!((e3.dim, e3.plus, e3.minus), (2, 0, 2));
    }

    #[test]
    fn swap_involution_diagonal() {
        let a = LieAlgebra::new(LieAlgebraSpec::free(4, 2).with_involution(vec![3, 4, 1, 2])).unwrap();
        let w = [a.parse_element("x1 + x3").unwrap(), a.parse_element("x2 + x4").unwrap()];
        let e1 = c_eigenspaces(&a, &w, 1).unwrap();
        assert_eq!((e1.dim, e1.plus, e1.minus), (2, 2, 0));
        // [x1+x3, x2+x4] is c-fixed
        let e2 = c_eigenspaces(&a, &w, 2).unwrap();
        assert_eq!((e2.dim, e2.plus, e2.minus), (1, 1, 0));
    }
}
