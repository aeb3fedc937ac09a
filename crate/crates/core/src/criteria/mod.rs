//! Finiteness criteria for Chabauty–Kim loci over number fields, evaluated on
//! curve data (ranks, Néron–Severi ranks, flags) supplied as input.

mod growth;

pub use growth::{
    first_finite_depth, growth_deficit, more_inequality_eval, GrowthCase, GrowthParams, GrowthReport, MoreInequality,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;

/// A model of the curve over an intermediate field of K|Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelRecord {
    #[serde(default)]
    pub label: String,
    /// [L : Q].
    pub field_degree: usize,
    /// Mordell–Weil rank of the Jacobian of the model over L.
    pub rank: usize,
}

/// A cover X → X₀ ×_L K with X₀ defined over a proper subfield L, together
/// with the rank data of the quotient and of the Prym.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    #[serde(default)]
    pub label: String,
    /// [L : Q].
    pub subfield_degree: usize,
    pub quotient_genus: usize,
    /// Rank of Jac(X₀)(L).
    pub quotient_rank: usize,
    /// Rank of Jac(X₀)(K).
    pub quotient_rank_over_k: usize,
    /// The p-adic closure of Jac(X₀)(L) has finite index.
    pub quotient_density: bool,
    pub prym_dim: usize,
    /// Rank of P(K).
    pub prym_rank: usize,
    /// The p-adic closure of P(K) in Π_{v|p} P(K_v) has finite index.
    pub prym_density: bool,
}

/// Néron–Severi data used by the sharper quadratic Chabauty bound over Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsData {
    /// rk NS(J_{Q̄})^{c=−1}.
    pub c_minus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    #[serde(default)]
    pub label: String,
    pub genus: usize,
    pub degree: usize,
    pub r1: usize,
    pub r2: usize,
    /// Mordell–Weil rank of Jac(X)(K).
    pub rank: usize,
    /// Rank of H¹_f(G_K, V_p J); taken equal to `rank` when `sha_finite`.
    #[serde(default)]
    pub h1f: Option<usize>,
    #[serde(default)]
    pub sha_finite: bool,
    /// Néron–Severi rank of Jac(X).
    #[serde(default)]
    pub rho: Option<usize>,
    #[serde(default)]
    pub ns: Option<NsData>,
    /// Hom(Jac_{σ₁}, Jac_{σ₂}) = 0 for distinct embeddings σ₁ ≠ σ₂.
    #[serde(default)]
    pub hom_vanishing: bool,
    /// The p-adic closure of J(K) in Π_{v|p} J(K_v) has finite index.
    #[serde(default)]
    pub density: bool,
    /// Use the Selmer scheme modified by the condition of mapping to J(K) ⊗ Q_p.
    #[serde(default)]
    pub modified_selmer: bool,
    #[serde(default)]
    pub models: Vec<ModelRecord>,
    #[serde(default)]
    pub covers: Vec<CoverRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Finite,
    Inconclusive,
    Obstructed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Finite => "finite",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Obstructed => "obstructed: base-change Prym",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub inputs: Value,
    /// The quantity compared against the bound.
    pub value: Option<i64>,
    pub bound: Option<i64>,
    pub verdict: Verdict,
    pub witness: Option<CoverRecord>,
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(criterion: &str, c: &CurveData) -> Self {
        CriterionReport {
            criterion: criterion.into(),
            inputs: serde_json::to_value(c).unwrap_or(Value::Null),
            value: None,
            bound: None,
            verdict: Verdict::Inconclusive,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("criterion: {}\n", self.criterion);
        if let (Some(v), Some(b)) = (self.value, self.bound) {
            s.push_str(&format!("value {v} against bound {b}\n"));
        }
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        if let Some(w) = &self.witness {
            s.push_str(&format!(
                "witness: cover {} over a degree-{} subfield, quotient genus {}, Prym rank {}\n",
                w.label, w.subfield_degree, w.quotient_genus, w.prym_rank
            ));
        }
        s.push_str(&format!("verdict: {}\n", self.verdict));
        s
    }
}

impl CurveData {
    /// Reads either a bare record or a fixture holding it under "curve".
    pub fn from_json(v: &Value) -> Result<Self> {
        let inner = v.get("curve").unwrap_or(v);
        let c: CurveData = serde_json::from_value(inner.clone()).map_err(|e| Error::InvalidData(format!("curve data: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 || self.r1 + 2 * self.r2 != self.degree {
            return Err(Error::InvalidData(format!(
                "r1 + 2 r2 = {} + 2·{} does not equal the degree {}",
                self.r1, self.r2, self.degree
            )));
        }
        for m in &self.models {
            if m.field_degree == 0 || self.degree % m.field_degree != 0 {
                return Err(Error::InvalidData(format!("model {} over a field of degree {} not dividing {}", m.label, m.field_degree, self.degree)));
            }
        }
        for w in &self.covers {
            if w.subfield_degree == 0 || self.degree % w.subfield_degree != 0 {
                return Err(Error::InvalidData(format!("cover {} over a field of degree {} not dividing {}", w.label, w.subfield_degree, self.degree)));
            }
            if w.quotient_genus + w.prym_dim != self.genus {
                return Err(Error::InvalidData(format!(
                    "cover {}: quotient genus {} plus Prym dimension {} is not the genus {}",
                    w.label, w.quotient_genus, w.prym_dim, self.genus
                )));
            }
            if w.quotient_density && w.quotient_rank < w.subfield_degree * w.quotient_genus {
                return Err(Error::InvalidData(format!("cover {}: a dense quotient needs rank at least {}", w.label, w.subfield_degree * w.quotient_genus)));
            }
            if w.prym_density && w.prym_rank < self.degree * w.prym_dim {
                return Err(Error::InvalidData(format!("cover {}: a dense Prym needs rank at least {}", w.label, self.degree * w.prym_dim)));
            }
        }
        Ok(())
    }

    fn projective(&self) -> Result<()> {
        if self.genus < 2 {
            return Err(Error::InvalidData(format!("genus {} is below 2", self.genus)));
        }
        self.validate()
    }

    /// With a single embedding there is nothing to check.
    pub fn hom_condition(&self) -> bool {
        self.degree == 1 || self.hom_vanishing
    }

    pub fn selmer_rank(&self) -> Result<usize> {
        match (self.h1f, self.sha_finite) {
            (Some(h), _) => Ok(h),
            (None, true) => Ok(self.rank),
            (None, false) => Err(Error::InvalidData("h1f is missing and Sha finiteness is not assumed".into())),
        }
    }

    fn rho_value(&self) -> Result<usize> {
        match self.rho {
            Some(0) => Err(Error::InvalidData("the Néron–Severi rank of a Jacobian is at least 1".into())),
            Some(r) => Ok(r),
            None => Err(Error::InvalidData("Néron–Severi rank rho is missing".into())),
        }
    }

    /// A cover realising the base-change Prym construction, if one is recorded.
    pub fn prym_obstruction(&self) -> Option<&CoverRecord> {
        self.covers.iter().find(|w| {
            w.subfield_degree < self.degree
                && w.quotient_density
                && w.prym_density
                && w.prym_dim > 0
                && w.quotient_rank_over_k <= self.degree * w.quotient_genus.saturating_sub(1)
        })
    }
}

fn to_i64(n: usize) -> i64 {
    n as i64
}

/// Depth-1 Chabauty over K: finite when r ≤ d(g − 1) and the Jacobian has
/// no homomorphisms between distinct conjugates.
pub fn depth1_check(c: &CurveData) -> Result<CriterionReport> {
    c.projective()?;
    let mut rep = CriterionReport::new("depth1", c);
    let bound = c.degree * (c.genus - 1);
    rep.value = Some(to_i64(c.rank));
    rep.bound = Some(to_i64(bound));
    let ineq = c.rank <= bound;
    if ineq && c.hom_condition() {
        rep.verdict = Verdict::Finite;
    } else if let Some(w) = c.prym_obstruction() {
        rep.verdict = Verdict::Obstructed;
        rep.witness = Some(w.clone());
        rep.notes.push("X(K⊗Q_p)_1 contains the preimage of X₀(Q_p) and is infinite".into());
    } else {
        if !ineq {
            rep.notes.push(format!("rank {} exceeds d(g-1) = {bound}", c.rank));
        }
        if !c.hom_condition() {
            rep.notes.push("Hom between distinct conjugate Jacobians is not known to vanish".into());
        }
    }
    Ok(rep)
}

/// The quadratic Chabauty bound d(g−1) + (d − r₁ − r₂ + 1)(ρ − 1), or with
/// the modified Selmer scheme d·g + (d − r₁ − r₂ + 1)(ρ − 1) against the rank.
pub fn qc_bound(c: &CurveData) -> Result<usize> {
    let rho = c.rho_value()?;
    let base = if c.modified_selmer { c.degree * c.genus } else { c.degree * (c.genus - 1) };
    Ok(base + (c.degree + 1 - c.r1 - c.r2) * (rho - 1))
}

pub fn qc_depth2_check(c: &CurveData) -> Result<CriterionReport> {
    c.projective()?;
    let mut rep = CriterionReport::new(if c.modified_selmer { "qc2-modified" } else { "qc2" }, c);
    let bound = qc_bound(c)?;
    let value = if c.modified_selmer { c.rank } else { c.selmer_rank()? };
    rep.value = Some(to_i64(value));
    rep.bound = Some(to_i64(bound));
    if c.degree == 1 {
        if let Some(ns) = &c.ns {
            let sharp = c.genus - 1 + c.rho_value()? + ns.c_minus;
            rep.notes.push(format!("over Q the sharper bound rank < {sharp} {}", if c.rank < sharp { "holds" } else { "fails" }));
        }
    }
    if !c.hom_condition() {
        rep.notes.push("Hom between distinct conjugate Jacobians is not known to vanish".into());
    } else if value <= bound {
        rep.verdict = Verdict::Finite;
    }
    Ok(rep)
}

/// Over an imaginary quadratic field: finite when the Selmer rank is 2g,
/// J(K) is p-adically dense and ρ > 1.
pub fn imag_quadratic_check(c: &CurveData) -> Result<CriterionReport> {
    if (c.r1, c.r2, c.degree) != (0, 1, 2) {
        return Err(Error::WrongField(format!("(r1, r2, d) = ({}, {}, {}), not an imaginary quadratic field", c.r1, c.r2, c.degree)));
    }
    c.projective()?;
    let mut rep = CriterionReport::new("imquad", c);
    let value = if c.modified_selmer { c.rank } else { c.selmer_rank()? };
    let rho = c.rho_value()?;
    rep.value = Some(to_i64(value));
    rep.bound = Some(to_i64(2 * c.genus));
    if value != 2 * c.genus {
        rep.notes.push(format!("rank {value} is not 2g = {}", 2 * c.genus));
    }
    if !c.density {
        rep.notes.push("J(K) is not known to be p-adically dense".into());
    }
    if rho <= 1 {
        rep.notes.push("rho(J) = 1".into());
    }
    if value == 2 * c.genus && c.density && rho > 1 {
        rep.verdict = Verdict::Finite;
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelCheck {
    pub label: String,
    pub field_degree: usize,
    pub rank: usize,
    pub bound: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiksekAudit {
    pub models: Vec<ModelCheck>,
    pub condition_satisfied: bool,
    pub obstruction: Option<CoverRecord>,
    pub summary: String,
}

/// Checks rk Jac(X')(L) ≤ (g − 1)[L : Q] for every recorded model X'/L (the
/// curve itself over K when none is recorded) and looks for a base-change
/// Prym witness.
pub fn siksek_question_audit(c: &CurveData) -> SiksekAudit {
    let own = [ModelRecord { label: "X/K".into(), field_degree: c.degree, rank: c.rank }];
    let recs: &[ModelRecord] = if c.models.is_empty() { &own } else { &c.models };
    let g1 = c.genus.saturating_sub(1);
    let models: Vec<ModelCheck> = recs
        .iter()
        .map(|m| {
            let bound = g1 * m.field_degree;
            ModelCheck { label: m.label.clone(), field_degree: m.field_degree, rank: m.rank, bound, holds: m.rank <= bound }
        })
        .collect();
    let condition_satisfied = models.iter().all(|m| m.holds);
    let obstruction = c.prym_obstruction().cloned();
    let mut summary = if condition_satisfied {
        "Siksek condition satisfied".to_string()
    } else {
        let bad: Vec<&str> = models.iter().filter(|m| !m.holds).map(|m| m.label.as_str()).collect();
        format!("Siksek condition fails for {}", bad.join(", "))
    };
    if obstruction.is_some() {
        summary.push_str("; yet X(K⊗Q_p)_1 infinite (base-change Prym obstruction)");
    }
    SiksekAudit { models, condition_satisfied, obstruction, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(g: usize, d: usize, r1: usize, r2: usize, r: usize) -> CurveData {
        CurveData {
            label: String::new(),
            genus: g,
            degree: d,
            r1,
            r2,
            rank: r,
            h1f: None,
            sha_finite: true,
            rho: Some(1),
            ns: None,
            hom_vanishing: true,
            density: false,
            modified_selmer: false,
            models: vec![],
            covers: vec![],
        }
    }

    #[test]
    fn depth1_examples() {
        assert_eq!(depth1_check(&curve(2, 2, 0, 1, 2)).unwrap().verdict, Verdict::Finite);
        assert_eq!(depth1_check(&curve(3, 1, 1, 0, 1)).unwrap().verdict, Verdict::Finite);
        assert_eq!(depth1_check(&curve(2, 2, 0, 1, 3)).unwrap().verdict, Verdict::Inconclusive);
        let mut c = curve(2, 2, 0, 1, 2);
        c.hom_vanishing = false;
        assert_eq!(depth1_check(&c).unwrap().verdict, Verdict::Inconclusive);
        assert!(matches!(depth1_check(&curve(1, 1, 1, 0, 0)), Err(Error::InvalidData(_))));
        assert!(matches!(depth1_check(&curve(2, 2, 1, 0, 0)), Err(Error::InvalidData(_))));
    }

    #[test]
    fn qc2_examples() {
        let mut c = curve(2, 2, 0, 1, 4);
        c.rho = Some(2);
        let r = qc_depth2_check(&c).unwrap();
        assert_eq!((r.bound, r.verdict), (Some(4), Verdict::Finite));
        let r = qc_depth2_check(&curve(2, 1, 1, 0, 2)).unwrap();
        assert_eq!((r.bound, r.verdict), (Some(1), Verdict::Inconclusive));
        let mut c = curve(2, 3, 3, 0, 5);
        c.rho = Some(3);
        assert_eq!(qc_depth2_check(&c).unwrap().bound, Some(5));
        c.modified_selmer = true;
        assert_eq!(qc_depth2_check(&c).unwrap().bound, Some(8));
    }

    #[test]
    fn qc2_over_q_is_classical_shape() {
        for g in 2..6 {
            for rho in 1..5 {
                let mut c = curve(g, 1, 1, 0, 0);
                c.rho = Some(rho);
                assert_eq!(qc_bound(&c).unwrap(), (g - 1) + rho - 1);
            }
        }
    }

    #[test]
    fn imquad_examples() {
        let mut c = curve(2, 2, 0, 1, 4);
        c.rho = Some(2);
        c.density = true;
        assert_eq!(imag_quadratic_check(&c).unwrap().verdict, Verdict::Finite);
        c.rho = Some(1);
        assert_eq!(imag_quadratic_check(&c).unwrap().verdict, Verdict::Inconclusive);
        assert!(matches!(imag_quadratic_check(&curve(2, 2, 2, 0, 4)), Err(Error::WrongField(_))));
    }

    #[test]
    fn siksek_audit_cases() {
        let a = siksek_question_audit(&curve(3, 2, 2, 0, 4));
        assert!(a.condition_satisfied && a.obstruction.is_none());
        let mut c = curve(3, 2, 2, 0, 4);
        c.models = vec![
            ModelRecord { label: "X'/Q".into(), field_degree: 1, rank: 3 },
            ModelRecord { label: "X/K".into(), field_degree: 2, rank: 4 },
        ];
        let a = siksek_question_audit(&c);
        assert!(!a.condition_satisfied);
        assert!(a.summary.contains("X'/Q"));
    }

    #[test]
    fn cover_consistency() {
        let mut c = curve(3, 2, 2, 0, 4);
        c.covers = vec![CoverRecord {
            label: "w".into(),
            subfield_degree: 1,
            quotient_genus: 2,
            quotient_rank: 1,
            quotient_rank_over_k: 2,
            quotient_density: true,
            prym_dim: 1,
            prym_rank: 2,
            prym_density: true,
        }];
        assert!(matches!(c.validate(), Err(Error::InvalidData(_))));
        c.covers[0].quotient_rank = 2;
        c.hom_vanishing = false;
        let r = depth1_check(&c).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(r.verdict.to_string(), "obstructed: base-change Prym");
    }

    #[test]
    fn shipped_fixture_is_obstructed() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/siksek_counterexample.json");
        let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        let c = CurveData::from_json(&v).unwrap();
        let a = siksek_question_audit(&c);
        assert!(a.condition_satisfied);
        assert!(a.obstruction.is_some());
        assert_eq!(depth1_check(&c).unwrap().verdict, Verdict::Obstructed);
    }
}
