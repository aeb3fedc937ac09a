//! Dimension bookkeeping for Galois cohomology: the Euler characteristic
//! formula, Artin–Tate twists, local vanishing by weights, induced
//! representations and intersections of rational subspaces.

use crate::error::{Error, Result};
use crate::exactalg::Q;
use crate::linalg::Matrix;
use serde::{Deserialize, Serialize};

/// A representation W of a number field's Galois group, known through the
/// dimensions the formulas consume.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepDescriptor {
    #[serde(default)]
    pub label: String,
    pub dim: usize,
    /// Weight; Q_p(n) has weight −2n.
    #[serde(default)]
    pub weight: i64,
    /// (dim W^{c=1}, dim W^{c=−1}) at each real place.
    #[serde(default)]
    pub real_places: Vec<(usize, usize)>,
    #[serde(default)]
    pub complex_places: usize,
    #[serde(default)]
    pub h0: usize,
    #[serde(default)]
    pub h2: usize,
    /// Forces h² = 0, for Q_p(n) with n > 1.
    #[serde(default)]
    pub soule: bool,
    /// Degree of the subfield the representation is induced from, if any.
    #[serde(default)]
    pub induced_from: Option<usize>,
}

impl RepDescriptor {
    /// The trivial representation Q_p of G_Q.
    pub fn trivial_over_q() -> Self {
        RepDescriptor {
            label: "Q_p".into(),
            dim: 1,
            weight: 0,
            real_places: vec![(1, 0)],
            complex_places: 0,
            h0: 1,
            h2: 0,
            soule: false,
            induced_from: None,
        }
    }

    /// An Artin representation of G_Q with the given c-eigenspace dimensions.
    pub fn artin_over_q(plus: usize, minus: usize) -> Self {
        RepDescriptor {
            label: format!("W({plus},{minus})"),
            dim: plus + minus,
            weight: 0,
            real_places: vec![(plus, minus)],
            complex_places: 0,
            h0: 0,
            h2: 0,
            soule: false,
            induced_from: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (k, &(p, m)) in self.real_places.iter().enumerate() {
            if p + m != self.dim {
                return Err(Error::InvalidData(format!(
                    "{}: eigenspaces at real place {k} have dimensions {p} + {m}, not {}",
                    self.label, self.dim
                )));
            }
        }
        Ok(())
    }

    pub fn h2_value(&self) -> usize {
        if self.soule {
            0
        } else {
            self.h2
        }
    }

    /// W(n): complex conjugation acts on Q_p(n) by (−1)^n. The global
    /// invariants of an Artin representation vanish after a nonzero twist,
    /// and h² is zero by Soulé for n > 1.
    pub fn twist(&self, n: i64) -> Self {
        let real_places = if n % 2 == 0 { self.real_places.clone() } else { self.real_places.iter().map(|&(p, m)| (m, p)).collect() };
        RepDescriptor {
            label: format!("{}({n})", self.label),
            dim: self.dim,
            weight: self.weight - 2 * n,
            real_places,
            complex_places: self.complex_places,
            h0: if n == 0 { self.h0 } else { 0 },
            h2: if n > 1 { 0 } else { self.h2 },
            soule: n > 1 || self.soule,
            induced_from: self.induced_from,
        }
    }

    /// W ⊕ W'; both must live over the same field.
    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        if self.real_places.len() != o.real_places.len() || self.complex_places != o.complex_places {
            return Err(Error::DimensionMismatch("direct summands must be over the same field".into()));
        }
        Ok(RepDescriptor {
            label: format!("{}+{}", self.label, o.label),
            dim: self.dim + o.dim,
            weight: if self.weight == o.weight { self.weight } else { 0 },
            real_places: self.real_places.iter().zip(&o.real_places).map(|(a, b)| (a.0 + b.0, a.1 + b.1)).collect(),
            complex_places: self.complex_places,
            h0: self.h0 + o.h0,
            h2: self.h2_value() + o.h2_value(),
            soule: false,
            induced_from: None,
        })
    }
}

/// h¹ = h² + h⁰ + Σ_{v real} dim W^{c_v=−1} + r₂·dim W.
pub fn euler_h1(w: &RepDescriptor) -> Result<usize> {
    w.validate()?;
    let minus: usize = w.real_places.iter().map(|&(_, m)| m).sum();
    Ok(w.h2_value() + w.h0 + minus + w.complex_places * w.dim)
}

/// h¹(G_Q, W(n)) for an Artin representation W of G_Q and n > 1.
pub fn artin_tate_h1(w: &RepDescriptor, n: i64) -> Result<usize> {
    if n <= 1 {
        return Err(Error::BadTwist(format!("twist {n} must exceed 1")));
    }
    if w.real_places.len() != 1 || w.complex_places != 0 {
        return Err(Error::InvalidData("an Artin–Tate descriptor must be over Q, with one real place".into()));
    }
    if w.weight != 0 {
        return Err(Error::InvalidData(format!("{} has weight {}, not an Artin representation", w.label, w.weight)));
    }
    euler_h1(&w.twist(n))
}

/// Whether H¹(G_{Q_v}, W) vanishes for v ∤ p when W is pure of weight w:
/// neither W nor W*(1), of weight −w − 2, may have weight 0.
pub fn local_h1_vanishing_weight(w: i64) -> bool {
    w != 0 && -w - 2 != 0
}

/// The same for a quotient of gr_i, which has weight −2i.
pub fn local_h1_vanishing(i: i64) -> bool {
    local_h1_vanishing_weight(-2 * i)
}

/// Dimensions for Ind_{G_L}^{G_K} U with [L : K] = d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedDims {
    pub base_dim: usize,
    pub degree: usize,
    pub induced_dim: usize,
    /// Dimension of the summand for each place of L above the prime.
    pub local_factors: Vec<usize>,
}

/// Shapiro's lemma at the level of dimensions. `local_degrees` lists the
/// local degrees of the places above a prime, all 1 at a split prime.
pub fn induced_dims(base_dim: usize, d: usize, local_degrees: Option<&[usize]>) -> Result<InducedDims> {
    if d == 0 {
        return Err(Error::InvalidInput("subfield degree must be at least 1".into()));
    }
    let degs: Vec<usize> = match local_degrees {
        Some(f) => f.to_vec(),
        None => vec![1; d],
    };
    if degs.iter().sum::<usize>() != d || degs.contains(&0) {
        return Err(Error::InvalidInput(format!("local degrees {degs:?} do not add up to {d}")));
    }
    Ok(InducedDims { base_dim, degree: d, induced_dim: base_dim * d, local_factors: degs.iter().map(|f| f * base_dim).collect() })
}

/// Two subspaces of Q^ambient given by spanning columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceData {
    pub ambient: usize,
    pub a: Vec<Vec<Q>>,
    pub b: Vec<Vec<Q>>,
}

/// (dim A∩B, codim of A∩B inside A), from the kernel of [A | −B].
pub fn intersection_codim(s: &SubspaceData) -> Result<(usize, usize)> {
    for v in s.a.iter().chain(&s.b) {
        if v.len() != s.ambient {
            return Err(Error::DimensionMismatch(format!("basis vector of length {} in Q^{}", v.len(), s.ambient)));
        }
    }
    let rank = |vs: &[Vec<Q>]| if vs.is_empty() { 0 } else { Matrix::from_rows(vs.to_vec(), s.ambient).rank() };
    if rank(&s.a) != s.a.len() || rank(&s.b) != s.b.len() {
        return Err(Error::InvalidInput("subspace bases must be linearly independent".into()));
    }
    let mut cols = s.a.clone();
    cols.extend(s.b.iter().map(|v| v.iter().map(|x| -x).collect()));
    let inter = if cols.is_empty() || s.ambient == 0 { cols.len() } else { Matrix::from_cols(&cols, s.ambient).kernel().len() };
    Ok((inter, s.a.len() - inter))
}

/// Plain-text ledger of h¹ per grading degree.
pub fn h1_ledger(rows: &[(usize, RepDescriptor)]) -> Result<String> {
    let mut out = String::from("degree\tlabel\tdim\th0\th2\th1\tlocal_vanishing\n");
    for (i, w) in rows {
        out.push_str(&format!(
            "{i}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            w.label,
            w.dim,
            w.h0,
            w.h2_value(),
            euler_h1(w)?,
            local_h1_vanishing(*i as i64)
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::qi;

    #[test]
    fn euler_examples() {
        let mut qp1 = RepDescriptor::trivial_over_q().twist(1);
        qp1.h2 = 5;
        assert_eq!(qp1.real_places, vec![(0, 1)]);
        assert_eq!(euler_h1(&qp1).unwrap(), 6);
        let imag = RepDescriptor { complex_places: 1, real_places: vec![], h0: 0, ..RepDescriptor::artin_over_q(1, 1) };
        assert_eq!(euler_h1(&imag).unwrap(), 2);
        let mut qp3 = RepDescriptor::trivial_over_q().twist(3);
        qp3.h2 = 7;
        qp3.soule = true;
        assert_eq!(euler_h1(&qp3).unwrap(), 1);
    }

    #[test]
    fn artin_tate_examples() {
        let t = RepDescriptor::trivial_over_q();
        assert_eq!(artin_tate_h1(&t, 3).unwrap(), 1);
        assert_eq!(artin_tate_h1(&t, 2).unwrap(), 0);
        assert_eq!(artin_tate_h1(&RepDescriptor::artin_over_q(1, 1), 2).unwrap(), 1);
        assert!(matches!(artin_tate_h1(&t, 1), Err(Error::BadTwist(_))));
    }

    #[test]
    fn local_vanishing() {
        assert!(local_h1_vanishing(2));
        assert!(!local_h1_vanishing(1));
        assert!(local_h1_vanishing(5));
    }

    #[test]
    fn induced() {
        assert_eq!(induced_dims(2, 3, None).unwrap().local_factors, vec![2, 2, 2]);
        assert_eq!(induced_dims(5, 1, None).unwrap().induced_dim, 5);
        let r = induced_dims(4, 2, None).unwrap();
        assert_eq!((r.induced_dim, r.local_factors), (8, vec![4, 4]));
        assert_eq!(induced_dims(3, 3, Some(&[1, 2])).unwrap().local_factors, vec![3, 6]);
        assert!(induced_dims(3, 3, Some(&[2, 2])).is_err());
    }

    #[test]
    fn intersections() {
        let e = |i: usize, n: usize| (0..n).map(|j| if i == j { qi(1) } else { qi(0) }).collect::<Vec<_>>();
        let s = SubspaceData { ambient: 2, a: vec![e(0, 2)], b: vec![e(1, 2)] };
        assert_eq!(intersection_codim(&s).unwrap(), (0, 1));
        let s = SubspaceData { ambient: 3, a: vec![e(0, 3), e(1, 3)], b: vec![e(1, 3), e(0, 3)] };
        assert_eq!(intersection_codim(&s).unwrap(), (2, 0));
        let s = SubspaceData { ambient: 3, a: vec![vec![qi(1), qi(0)]], b: vec![] };
        assert!(matches!(intersection_codim(&s), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn descriptor_json() {
        let v = serde_json::json!({"label": "W", "dim": 2, "real_places": [[1, 1]], "h0": 0});
        let w: RepDescriptor = serde_json::from_value(v).unwrap();
        assert_eq!(euler_h1(&w).unwrap(), 1);
        let bad = RepDescriptor { real_places: vec![(1, 0)], ..w };
        assert!(euler_h1(&bad).is_err());
    }
}
