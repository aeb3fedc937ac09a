//! Unipotent flat connections d + Λ with Λ a block-nilpotent matrix of
//! 1-forms, their gauge action, reduced forms and the universal connection on
//! punctured lines and their products.

mod io;
mod reduce;
mod schain;
mod universal;

pub use io::{connection_from_json, connection_to_json, formspace_from_json, gauge_from_json, gauge_to_json, ConnectionFile};
pub use reduce::{reduce_to_reduced_form, s_membership, ReducedConnection};
pub use schain::{build_s_chain, SChain};
pub use universal::{build_universal, chart_lie_spec, chart_space, Chart, UniversalConnection};

use crate::error::{Error, Result};
use crate::exactalg::{OneForm, RatFunc, Ring, TwoForm};
use crate::linalg::Matrix;

/// Square matrix of 1-forms on an `nvars`-coordinate chart.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix {
    pub size: usize,
    pub nvars: usize,
    data: Vec<OneForm<RatFunc>>,
}

impl FormMatrix {
    pub fn zeros(size: usize, nvars: usize) -> Self {
        FormMatrix { size, nvars, data: vec![OneForm::zero(nvars); size * size] }
    }

    pub fn get(&self, r: usize, c: usize) -> &OneForm<RatFunc> {
        &self.data[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, w: OneForm<RatFunc>) {
        self.data[r * self.size + c] = w;
    }

    pub fn add(&self, o: &Self) -> Self {
        FormMatrix { size: self.size, nvars: self.nvars, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    /// F·Λ for a matrix of functions F.
    pub fn left_mul(&self, f: &Matrix<RatFunc>) -> Self {
        let mut out = Self::zeros(self.size, self.nvars);
        for r in 0..self.size {
            for k in 0..self.size {
                let a = f.get(r, k);
                if a.ris_zero() {
                    continue;
                }
                for c in 0..self.size {
                    let w = self.get(k, c);
                    if !w.is_zero() {
                        let v = out.get(r, c).add(&w.mul_fn(a));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    /// Λ·F for a matrix of functions F.
    pub fn right_mul(&self, f: &Matrix<RatFunc>) -> Self {
        let mut out = Self::zeros(self.size, self.nvars);
        for r in 0..self.size {
            for k in 0..self.size {
                let w = self.get(r, k);
                if w.is_zero() {
                    continue;
                }
                for c in 0..self.size {
                    let a = f.get(k, c);
                    if !a.ris_zero() {
                        let v = out.get(r, c).add(&w.mul_fn(a));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    /// Entrywise differential of a matrix of functions.
    pub fn d_of(f: &Matrix<RatFunc>, nvars: usize) -> Self {
        let n = f.nrows();
        let mut out = Self::zeros(n, nvars);
        for r in 0..n {
            for c in 0..n {
                let a = f.get(r, c);
                if !a.ris_zero() {
                    out.set(r, c, OneForm::d0(a, nvars));
                }
            }
        }
        out
    }
}

/// A connection d + Λ on a trivial bundle ⊕ V_i, with Λ strictly
/// block-lower-triangular: the entry in row r and column c may be nonzero
/// only when block(r) > block(c), and block(r) − block(c) is its depth.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    pub blocks: Vec<usize>,
    pub lambda: FormMatrix,
}

/// A unipotent change of basis g = 1 + M with M strictly block-lower.
/// It acts by Λ ↦ g⁻¹Λg + g⁻¹dg.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransform {
    pub m: Matrix<RatFunc>,
}

impl GaugeTransform {
    pub fn identity(size: usize) -> Self {
        GaugeTransform { m: Matrix::zeros(size, size) }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.m.nrows()).all(|r| (0..self.m.ncols()).all(|c| self.m.get(r, c).ris_zero()))
    }

    pub fn g(&self) -> Matrix<RatFunc> {
        let n = self.m.nrows();
        let mut g = self.m.clone();
        for i in 0..n {
            let v = g.get(i, i).radd(&RatFunc::rone());
            g.set(i, i, v);
        }
        g
    }

    /// g⁻¹ = Σ (−M)^k, finite by nilpotence.
    pub fn g_inv(&self) -> Matrix<RatFunc> {
        let n = self.m.nrows();
        let mut neg = self.m.clone();
        for r in 0..n {
            for c in 0..n {
                let v = neg.get(r, c).rneg();
                neg.set(r, c, v);
            }
        }
        let mut out: Matrix<RatFunc> = Matrix::identity(n);
        let mut term: Matrix<RatFunc> = Matrix::identity(n);
        for _ in 0..n {
            term = term.mul(&neg);
            if (0..n).all(|r| (0..n).all(|c| term.get(r, c).ris_zero())) {
                break;
            }
            for r in 0..n {
                for c in 0..n {
                    let v = out.get(r, c).radd(term.get(r, c));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// The transform `self` followed by `o`: g = g_self · g_o.
    pub fn then(&self, o: &Self) -> Self {
        let g = self.g().mul(&o.g());
        let n = g.nrows();
        let mut m = g;
        for i in 0..n {
            let v = m.get(i, i).rsub(&RatFunc::rone());
            m.set(i, i, v);
        }
        GaugeTransform { m }
    }
}

impl Connection {
    pub fn new(blocks: Vec<usize>, lambda: FormMatrix) -> Result<Self> {
        let size: usize = blocks.iter().sum();
        if lambda.size != size {
            return Err(Error::DimensionMismatch(format!("blocks add up to {size}, matrix has size {}", lambda.size)));
        }
        let c = Connection { blocks, lambda };
        for r in 0..size {
            for col in 0..size {
                if c.block_of(r) <= c.block_of(col) && !c.lambda.get(r, col).is_zero() {
                    return Err(Error::InvalidInput(format!("entry ({r}, {col}) is not strictly below the block diagonal")));
                }
            }
        }
        Ok(c)
    }

    pub fn size(&self) -> usize {
        self.lambda.size
    }

    pub fn nvars(&self) -> usize {
        self.lambda.nvars
    }

    /// Nilpotency length n, so that the blocks are V_0..V_n.
    pub fn depth(&self) -> usize {
        self.blocks.len().saturating_sub(1)
    }

    pub fn block_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (b, &s) in self.blocks.iter().enumerate() {
            acc += s;
            if i < acc {
                return b;
            }
        }
        self.blocks.len()
    }

    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        let start: usize = self.blocks[..b].iter().sum();
        start..start + self.blocks[b]
    }

    /// dΛ + Λ∧Λ, entrywise.
    pub fn flatness_residual(&self) -> Vec<Vec<TwoForm<RatFunc>>> {
        let n = self.size();
        let nv = self.nvars();
        let mut out = vec![vec![TwoForm::zero(nv); n]; n];
        for r in 0..n {
            for c in 0..n {
                let mut t = self.lambda.get(r, c).d();
                for k in 0..n {
                    let a = self.lambda.get(r, k);
                    let b = self.lambda.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        t = t.add(&a.wedge(b));
                    }
                }
                out[r][c] = t;
            }
        }
        out
    }

    pub fn is_flat(&self) -> bool {
        self.flatness_residual().iter().all(|row| row.iter().all(|t| t.is_zero()))
    }

    /// Λ ↦ g⁻¹Λg + g⁻¹dg.
    pub fn gauge(&self, t: &GaugeTransform) -> Connection {
        let g = t.g();
        let gi = t.g_inv();
        let lam = self.lambda.left_mul(&gi).right_mul(&g).add(&FormMatrix::d_of(&t.m, self.nvars()).left_mul(&gi));
        Connection { blocks: self.blocks.clone(), lambda: lam }
    }

    /// Projection onto the first k+1 blocks.
    pub fn truncate_blocks(&self, k: usize) -> Connection {
        let keep: usize = self.blocks[..=k.min(self.depth())].iter().sum();
        let mut lam = FormMatrix::zeros(keep, self.nvars());
        for r in 0..keep {
            for c in 0..keep {
                lam.set(r, c, self.lambda.get(r, c).clone());
            }
        }
        Connection { blocks: self.blocks[..=k.min(self.depth())].to_vec(), lambda: lam }
    }
}

/// Checks that a matrix of 2-forms vanishes.
pub fn residual_is_zero(r: &[Vec<TwoForm<RatFunc>>]) -> bool {
    r.iter().all(|row| row.iter().all(|t| t.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_ratfunc, VarNames};

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s, &VarNames::new(&["z1", "z2"])).unwrap()
    }

    fn form(a: &str, b: &str) -> OneForm<RatFunc> {
        OneForm { c: vec![rf(a), rf(b)] }
    }

    /// Blocks [1, 2, 1] with Λ = A dz1/z1 + B dz2/z2.
    fn ab_connection(commuting: bool) -> Connection {
        let mut lam = FormMatrix::zeros(4, 2);
        lam.set(1, 0, form("1/z1", "0"));
        lam.set(2, 0, form("0", "1/z2"));
        if commuting {
            lam.set(3, 1, form("0", "1/z2"));
            lam.set(3, 2, form("1/z1", "0"));
        } else {
            lam.set(3, 1, form("0", "1/z2"));
        }
        Connection::new(vec![1, 2, 1], lam).unwrap()
    }

    #[test]
    fn commutator_of_residues_is_the_curvature() {
        assert!(ab_connection(true).is_flat());
        let bad = ab_connection(false);
        let r = bad.flatness_residual();
        // [A, B] has a single entry at (3, 0)
        assert_eq!(r[3][0].c, vec![rf("-1/(z1*z2)")]);
        assert!(r.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, t)| (i, j) == (3, 0) || t.is_zero())));
    }

    #[test]
    fn gauge_keeps_flatness_and_composes() {
        let c = ab_connection(true);
        let mut m = Matrix::zeros(4, 4);
        m.set(1, 0, rf("z1*z2"));
        m.set(3, 2, rf("z2 + 1/2"));
        m.set(3, 0, rf("z1^2"));
        let t = GaugeTransform { m };
        let g = c.gauge(&t);
        assert!(g.is_flat());
        let mut m2 = Matrix::zeros(4, 4);
        m2.set(2, 0, rf("z1 - z2"));
        let t2 = GaugeTransform { m: m2 };
        assert_eq!(g.gauge(&t2), c.gauge(&t.then(&t2)));
        assert!(GaugeTransform::identity(4).is_identity());
    }

    #[test]
    fn rejects_entries_on_the_diagonal_blocks() {
        let mut lam = FormMatrix::zeros(2, 2);
        lam.set(0, 1, form("1/z1", "0"));
        assert!(Connection::new(vec![1, 1], lam).is_err());
    }
}
