//! The dimension inequality behind finiteness at depth n, and the growth of
//! its deficit along the lower central series.

use crate::cohomdim::{artin_tate_h1, RepDescriptor};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoreInequality {
    pub depth: usize,
    pub lhs: i64,
    pub rhs: i64,
    /// lhs − rhs.
    pub margin: i64,
    pub finite: bool,
}

fn sum(v: &[usize]) -> i64 {
    v.iter().map(|&x| x as i64).sum()
}

/// Σ_{i≤n} dim W_i^{dR}/F⁰ ≥ dim Z + Σ_{i≤n} h¹(W̄_i) + Σ_{i<n} dim ker loc_p.
pub fn more_inequality_eval(dims_dr: &[usize], h1: &[usize], kernel: &[usize], dim_z: usize) -> Result<MoreInequality> {
    let n = dims_dr.len();
    if h1.len() != n {
        return Err(Error::LengthMismatch(format!("{n} de Rham dimensions but {} h¹ bounds", h1.len())));
    }
    if kernel.len() != n.saturating_sub(1) {
        return Err(Error::LengthMismatch(format!("depth {n} needs {} kernel dimensions, got {}", n.saturating_sub(1), kernel.len())));
    }
    let lhs = sum(dims_dr);
    let rhs = dim_z as i64 + sum(h1) + sum(kernel);
    Ok(MoreInequality { depth: n, lhs, rhs, margin: lhs - rhs, finite: lhs >= rhs })
}

/// The smallest depth at which the inequality holds, with kernel dimensions
/// beyond the supplied list taken to be zero.
pub fn first_finite_depth(dims_dr: &[usize], h1: &[usize], kernel: &[usize], dim_z: usize) -> Result<Option<usize>> {
    if h1.len() != dims_dr.len() {
        return Err(Error::LengthMismatch(format!("{} de Rham dimensions but {} h¹ bounds", dims_dr.len(), h1.len())));
    }
    for n in 1..=dims_dr.len() {
        let ker: Vec<usize> = (0..n - 1).map(|i| kernel.get(i).copied().unwrap_or(0)).collect();
        if more_inequality_eval(&dims_dr[..n], &h1[..n], &ker, dim_z)?.finite {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthCase {
    /// The projective line minus points, over Q.
    PuncturedLine,
    /// A CM elliptic curve minus the origin.
    CmElliptic,
    /// A curve covering a curve with CM Jacobian.
    CmCover,
}

impl GrowthCase {
    pub fn from_number(k: u32) -> Result<Self> {
        match k {
            1 => Ok(GrowthCase::PuncturedLine),
            3 => Ok(GrowthCase::CmElliptic),
            4 => Ok(GrowthCase::CmCover),
            _ => Err(Error::InvalidInput(format!("growth case {k} is not one of 1, 3, 4"))),
        }
    }
}

/// Per-degree data for degrees 1..=n, indexed from degree 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthParams {
    /// dim W_i.
    pub dims: Vec<usize>,
    /// Dimensions of the c = +1 eigenspaces (of the untwisted Artin
    /// representation in the punctured-line case).
    #[serde(default)]
    pub c_plus: Option<Vec<usize>>,
    #[serde(default)]
    pub c_minus: Option<Vec<usize>>,
    /// h¹_{f,S} in degree 1 for the punctured line.
    #[serde(default)]
    pub h1_degree1: Option<usize>,
    /// Dimensions of ker loc_p; missing degrees count as zero.
    #[serde(default)]
    pub kernel: Vec<usize>,
    /// The finitely many nonzero h¹ of V_π^{⊗i}(1); missing degrees count as zero.
    #[serde(default)]
    pub h1_exceptions: Vec<usize>,
    /// h²(Q_p(n)) = 0 for n > 1.
    #[serde(default)]
    pub soule: bool,
    /// Localisation at p is injective in all but finitely many degrees.
    #[serde(default)]
    pub iwasawa: bool,
    /// A constant B with Σ_{j≤n} h² ≤ B n^{2g−1}.
    #[serde(default)]
    pub ck_constant: Option<u64>,
    #[serde(default)]
    pub genus: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub case: GrowthCase,
    /// Per-degree contributions.
    pub terms: Vec<i128>,
    /// D(1), ..., D(n).
    pub deficits: Vec<i128>,
    pub nondecreasing: bool,
    /// First n (1-based) with D(n) > 0.
    pub first_positive: Option<usize>,
}

fn need(flag: bool, name: &str) -> Result<()> {
    if flag {
        Ok(())
    } else {
        Err(Error::MissingFlag(format!("the {name} input is required for this case")))
    }
}

fn eigen(v: &Option<Vec<usize>>, n: usize, name: &str) -> Result<Option<Vec<usize>>> {
    match v {
        Some(x) if x.len() != n => Err(Error::LengthMismatch(format!("{name} has {} entries for {n} degrees", x.len()))),
        other => Ok(other.clone()),
    }
}

fn at(v: &[usize], i: usize) -> i128 {
    v.get(i).copied().unwrap_or(0) as i128
}

/// Partial sums of the deficit whose unboundedness gives finiteness.
///
/// * Punctured line: dim W_i − h¹(W_i(i)) − dim ker_i, with h¹ from the
///   Artin–Tate formula for i ≥ 2 and the kernel counted below depth n.
/// * CM elliptic curve: Σ_{i≤N} h⁰(G_R, W_i) − Σ_{i≤N−2} h¹(V_π^{⊗i}(1)).
/// * CM cover: Σ_{i≤n} (dim W_i − dim W_i^{c=−1}) − 2B n^{2g−1}.
pub fn growth_deficit(case: GrowthCase, p: &GrowthParams) -> Result<GrowthReport> {
    let n = p.dims.len();
    let plus = eigen(&p.c_plus, n, "c_plus")?;
    let minus = eigen(&p.c_minus, n, "c_minus")?;
    let mut terms: Vec<i128> = Vec::with_capacity(n);
    let mut deficits: Vec<i128> = Vec::with_capacity(n);
    match case {
        GrowthCase::PuncturedLine => {
            need(p.soule, "Soulé vanishing")?;
            need(p.iwasawa, "Iwasawa injectivity")?;
            let h1_1 = p.h1_degree1.ok_or_else(|| Error::InvalidInput("h1_degree1 is required".into()))?;
            let mut acc: i128 = 0;
            for i in 0..n {
                let d = p.dims[i];
                let h1 = if i == 0 {
                    h1_1
                } else {
                    let (a, b) = match (&plus, &minus) {
                        (Some(pl), Some(mi)) => (pl[i], mi[i]),
                        (Some(pl), None) => (pl[i], d.saturating_sub(pl[i])),
                        (None, Some(mi)) => (d.saturating_sub(mi[i]), mi[i]),
                        (None, None) => (d, 0),
                    };
                    artin_tate_h1(&RepDescriptor { dim: d, ..RepDescriptor::artin_over_q(a, b) }, i as i64 + 1)?
                };
                acc += d as i128 - h1 as i128;
                // The kernel in degree i enters once depth i + 1 is reached.
                let d_n = acc - (0..i).map(|j| at(&p.kernel, j)).sum::<i128>();
                terms.push(d as i128 - h1 as i128 - if i > 0 { at(&p.kernel, i - 1) } else { 0 });
                deficits.push(d_n);
            }
        }
        GrowthCase::CmElliptic => {
            need(p.iwasawa, "Iwasawa torsion")?;
            let pl = plus.ok_or_else(|| Error::InvalidInput("c_plus (dimensions of h⁰(G_R, W_i)) is required".into()))?;
            let mut acc: i128 = 0;
            for i in 0..n {
                if pl[i] > p.dims[i] {
                    return Err(Error::InvalidData(format!("c_plus exceeds the dimension in degree {}", i + 1)));
                }
                // Degree N brings in h⁰(W_N) and the h¹ term of index N − 2.
                let t = pl[i] as i128 - if i >= 2 { at(&p.h1_exceptions, i - 2) } else { 0 };
                acc += t;
                terms.push(t);
                deficits.push(acc);
            }
        }
        GrowthCase::CmCover => {
            let b = p.ck_constant.ok_or_else(|| Error::MissingFlag("the Coates–Kim constant B is required".into()))?;
            let g = p.genus.ok_or_else(|| Error::InvalidInput("genus is required".into()))?;
            if g < 1 {
                return Err(Error::InvalidInput("genus must be positive".into()));
            }
            let mi = minus.ok_or_else(|| Error::InvalidInput("c_minus is required".into()))?;
            let mut acc: i128 = 0;
            for i in 0..n {
                if mi[i] > p.dims[i] {
                    return Err(Error::InvalidData(format!("c_minus exceeds the dimension in degree {}", i + 1)));
                }
                let t = p.dims[i] as i128 - mi[i] as i128;
                acc += t;
                terms.push(t);
                let h2 = (i as i128 + 1)
                    .checked_pow(2 * g as u32 - 1)
                    .and_then(|x| x.checked_mul(2 * b as i128))
                    .ok_or_else(|| Error::InvalidInput("the h² bound overflows".into()))?;
                deficits.push(acc - h2);
            }
        }
    }
    let nondecreasing = deficits.windows(2).all(|w| w[0] <= w[1]);
    let first_positive = deficits.iter().position(|&x| x > 0).map(|k| k + 1);
    Ok(GrowthReport { case, terms, deficits, nondecreasing, first_positive })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_examples() {
        let r = more_inequality_eval(&[2, 1, 2, 3], &[1, 0, 1, 0], &[0, 0, 0], 1).unwrap();
        assert_eq!((r.margin, r.finite), (5, true));
        let r = more_inequality_eval(&[0, 0, 0], &[0, 0, 0], &[0, 0], 2).unwrap();
        assert_eq!((r.margin, r.finite), (-2, false));
        assert!(matches!(more_inequality_eval(&[1, 2], &[1], &[0], 0), Err(Error::LengthMismatch(_))));
        assert!(matches!(more_inequality_eval(&[1, 2], &[1, 0], &[], 0), Err(Error::LengthMismatch(_))));
    }

    #[test]
    fn margin_is_additive_over_concatenation() {
        let (a, ha, ka) = ([3usize, 1, 4], [1usize, 1, 2], [1usize, 0]);
        let (b, hb, kb) = ([5usize, 9], [2usize, 6], [3usize]);
        let ma = more_inequality_eval(&a, &ha, &ka, 0).unwrap().margin;
        let mb = more_inequality_eval(&b, &hb, &kb, 0).unwrap().margin;
        let cat = |x: &[usize], y: &[usize]| x.iter().chain(y).copied().collect::<Vec<_>>();
        let kc = cat(&cat(&ka, &[0]), &kb);
        let m = more_inequality_eval(&cat(&a, &b), &cat(&ha, &hb), &kc, 0).unwrap().margin;
        assert_eq!(m, ma + mb);
    }

    #[test]
    fn punctured_line_deficit() {
        let p = GrowthParams { dims: vec![2, 1, 2, 3, 4, 5], h1_degree1: Some(0), soule: true, iwasawa: true, ..Default::default() };
        let r = growth_deficit(GrowthCase::PuncturedLine, &p).unwrap();
        // Odd twists of a trivial Artin representation have h¹ = dim, even ones 0.
        assert_eq!(r.deficits, vec![2, 3, 3, 6, 6, 11]);
        assert!(r.nondecreasing);
        assert_eq!(r.first_positive, Some(1));
        let short = GrowthParams { dims: vec![2], ..p.clone() };
        assert_eq!(growth_deficit(GrowthCase::PuncturedLine, &short).unwrap().deficits, vec![2]);
        let missing = GrowthParams { soule: false, ..p };
        assert!(matches!(growth_deficit(GrowthCase::PuncturedLine, &missing), Err(Error::MissingFlag(_))));
    }

    #[test]
    fn cm_cases() {
        let p = GrowthParams {
            dims: vec![2, 1, 1, 1, 1, 1, 1],
            c_plus: Some(vec![1, 0, 1, 0, 1, 0, 1]),
            h1_exceptions: vec![1],
            iwasawa: true,
            ..Default::default()
        };
        let r = growth_deficit(GrowthCase::CmElliptic, &p).unwrap();
        assert_eq!(r.deficits, vec![1, 1, 1, 1, 2, 2, 3]);
        let q = GrowthParams {
            dims: vec![4, 6, 16, 40],
            c_minus: Some(vec![2, 3, 8, 20]),
            ck_constant: Some(1),
            genus: Some(1),
            ..Default::default()
        };
        let r = growth_deficit(GrowthCase::CmCover, &q).unwrap();
        assert_eq!(r.deficits, vec![0, 1, 7, 25]);
        let q2 = GrowthParams { ck_constant: None, ..q };
        assert!(matches!(growth_deficit(GrowthCase::CmCover, &q2), Err(Error::MissingFlag(_))));
        assert!(GrowthCase::from_number(2).is_err());
    }
}
