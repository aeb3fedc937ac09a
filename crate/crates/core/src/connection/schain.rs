use crate::error::{Error, Result};
use crate::exactalg::{DifferentialForm, FormSpace, OneForm, RatFunc, Q};
use crate::linalg::Matrix;
use num_traits::Zero;

/// The subspaces S_1..S_n of the declared 1-forms, each given by a basis of
/// coordinate vectors over the 1-form atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct SChain {
    pub s: Vec<Vec<Vec<Q>>>,
}

impl SChain {
    pub fn depth(&self) -> usize {
        self.s.len()
    }

    /// Basis of S_i, 1 ≤ i ≤ depth.
    pub fn get(&self, i: usize) -> &[Vec<Q>] {
        &self.s[i - 1]
    }
}

fn rows_basis(vs: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let (r, piv) = Matrix::from_rows(vs.to_vec(), dim).rref();
    (0..piv.len()).map(|i| r.row(i)).collect()
}

fn rank(vs: &[Vec<Q>], dim: usize) -> usize {
    rows_basis(vs, dim).len()
}

/// Coordinates of the differentials of the function atoms that land in the
/// declared 1-form span.
pub(crate) fn exact_coords(space: &FormSpace) -> Vec<Vec<Q>> {
    let n = space.nvars();
    space.fn_atoms.iter().filter_map(|(_, f)| space.one_coords(&OneForm::d0(f, n))).filter(|v| v.iter().any(|x| !x.is_zero())).collect()
}

/// Matrix of d from 1-form atom coordinates to 2-form atom coordinates.
fn d_matrix(space: &FormSpace) -> Result<Matrix<Q>> {
    let cols = (0..space.n_one())
        .map(|a| space.d_atom(a).map_err(|e| Error::NotClosedUnderD(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_cols(&cols, space.n_two()))
}

/// Builds S_1..S_n from a basis of S_1.
///
/// For i > 1, P_i is the set of declared 1-forms whose differential lies in
/// Σ_{j+k=i} S_j∧S_k. S_i consists of S_1 together with an echelon
/// complement, in the declared atom order, of the closed and exact forms
/// inside P_i.
pub fn build_s_chain(space: &FormSpace, s1: &[Vec<Q>], n: usize) -> Result<SChain> {
    let na = space.n_one();
    for v in s1 {
        if v.len() != na {
            return Err(Error::DimensionMismatch(format!("S_1 vector has {} coordinates, the space has {na} atoms", v.len())));
        }
        match space.d(&DifferentialForm::One(v.clone())) {
            Ok(DifferentialForm::Two(t)) if t.iter().all(|x| x.is_zero()) => {}
            Ok(_) => return Err(Error::InvalidInput("S_1 must consist of closed forms".into())),
            Err(e) => return Err(Error::NotClosedUnderD(e.to_string())),
        }
    }
    let exact = exact_coords(space);
    let mut with_exact = exact.clone();
    with_exact.extend(s1.iter().cloned());
    if rank(&with_exact, na) != rank(&exact, na) + s1.len() {
        return Err(Error::InvalidInput("S_1 classes are not independent modulo exact forms".into()));
    }
    let mut chain: Vec<Vec<Vec<Q>>> = vec![s1.to_vec()];
    if n <= 1 {
        return Ok(SChain { s: chain });
    }
    let d = d_matrix(space)?;
    let closed = d.kernel();
    let nt = space.n_two();
    for i in 2..=n {
        let mut wedges: Vec<Vec<Q>> = Vec::new();
        for j in 1..i {
            let k = i - j;
            for a in &chain[j - 1] {
                for b in &chain[k - 1] {
                    match space.wedge(&DifferentialForm::One(a.clone()), &DifferentialForm::One(b.clone())) {
                        Ok(DifferentialForm::Two(t)) => {
                            if t.iter().any(|x| !x.is_zero()) {
                                wedges.push(t);
                            }
                        }
                        Ok(_) => unreachable!("wedge of 1-forms is a 2-form"),
                        Err(e) => return Err(Error::NotClosedUnderD(format!("S_{j}∧S_{k}: {e}"))),
                    }
                }
            }
        }
        let wedges = rows_basis(&wedges, nt);
        // Solve D v = W y; the v-parts span P_i.
        let mut cols: Vec<Vec<Q>> = (0..na).map(|a| d.col(a)).collect();
        for w in &wedges {
            cols.push(w.iter().map(|x| -x.clone()).collect());
        }
        let p_i: Vec<Vec<Q>> = if nt == 0 {
            (0..na).map(|a| (0..na).map(|b| if a == b { Q::from_integer(1.into()) } else { Q::zero() }).collect()).collect()
        } else {
            Matrix::from_cols(&cols, nt).kernel().into_iter().map(|v| v[..na].to_vec()).collect()
        };
        let p_i = rows_basis(&p_i, na);
        let mut span: Vec<Vec<Q>> = closed.clone();
        span.extend(exact.iter().cloned());
        let mut r = rank(&span, na);
        let mut s_i = s1.to_vec();
        for v in p_i {
            span.push(v.clone());
            let r2 = rank(&span, na);
            if r2 > r {
                s_i.push(v);
                r = r2;
            } else {
                span.pop();
            }
        }
        chain.push(s_i);
    }
    Ok(SChain { s: chain })
}

/// Explicit 1-forms for the concrete vectors of a basis; vectors involving
/// abstract atoms are skipped.
pub(crate) fn explicit_forms(space: &FormSpace, basis: &[Vec<Q>]) -> Vec<OneForm<RatFunc>> {
    basis.iter().filter_map(|v| space.concrete_one(v).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_ratfunc, qi, OneAtom, TwoForm, VarNames};

    fn product_space(with_primitive: bool, with_two_forms: bool) -> FormSpace {
        let v = VarNames::new(&["z1", "z2"]);
        let rf = |s: &str| parse_ratfunc(s, &v).unwrap();
        let mut one = vec![
            ("dz1/z1".to_string(), OneAtom::Concrete(OneForm::basis(2, 0, rf("1/z1")))),
            ("dz2/z2".to_string(), OneAtom::Concrete(OneForm::basis(2, 1, rf("1/z2")))),
        ];
        if with_primitive {
            one.push(("eta".to_string(), OneAtom::Abstract { d: TwoForm { n: 2, c: vec![rf("1/(z1*z2)")] } }));
        }
        let two = if with_two_forms { vec![("dlog z1^dlog z2".to_string(), TwoForm { n: 2, c: vec![rf("1/(z1*z2)")] })] } else { vec![] };
        FormSpace::new(v.clone(), vec![("z1".into(), rf("z1"))], one, two).unwrap()
    }

    #[test]
    fn primitive_of_wedge_joins_s2() {
        let s = product_space(true, true);
        let s1 = vec![vec![qi(1), qi(0), qi(0)], vec![qi(0), qi(1), qi(0)]];
        let c = build_s_chain(&s, &s1, 2).unwrap();
        assert_eq!(c.get(2).len(), 3);
        // η∧dz1/z1 has no declared 2-form atom
        assert!(matches!(build_s_chain(&s, &s1, 3), Err(Error::NotClosedUnderD(_))));
        assert_eq!(c.get(2)[2], vec![qi(0), qi(0), qi(1)]);
        let plain = product_space(false, true);
        let s1 = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        assert_eq!(build_s_chain(&plain, &s1, 2).unwrap().get(2).len(), 2);
        let bare = product_space(false, false);
        assert!(matches!(build_s_chain(&bare, &s1, 2), Err(Error::NotClosedUnderD(_))));
    }

    #[test]
    fn empty_s1_gives_empty_chain() {
        let s = product_space(true, true);
        let c = build_s_chain(&s, &[], 3).unwrap();
        assert!(c.s.iter().all(|b| b.is_empty()));
    }
}
