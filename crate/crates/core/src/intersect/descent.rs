use super::{function_field_rank, jet_rank, relation_holds, restrict_forms, FieldRank, FormalSubvariety, JetRank};
use crate::error::{Error, Result};
use crate::exactalg::{OneForm, RatFunc, Ring, VarNames, Q};
use crate::linalg::Matrix;
use crate::transport::ThetaSystem;
use serde_json::{json, Value};

/// The outcome of the depth-1 descent.
#[derive(Clone, Debug, PartialEq)]
pub enum CertificateKind {
    /// The θ_i restricted to V are independent over its function field.
    FullRank,
    /// Constant coefficients c with Σ c_i ω_i nonzero on Z but exact on V,
    /// equal there to d(Σ c_i t_i).
    ConstantRelation { coeffs: Vec<Q>, kernel_form: OneForm<RatFunc>, primitive: RatFunc },
    /// A function h2 on V with h1 dh2 ≠ 0 lying in the span of the θ_i:
    /// h1 dh2 = Σ span_i θ_i.
    FunctionRelation { coeffs: Vec<RatFunc>, h1: RatFunc, h2: RatFunc, span: Vec<RatFunc> },
}

/// A classified relation together with every intermediate relation the
/// descent passed through, as functions of the parameters of V.
#[derive(Clone, Debug)]
pub struct DependencyCertificate {
    pub kind: CertificateKind,
    pub steps: Vec<Vec<RatFunc>>,
    pub verified: bool,
}

fn lin_comb(coeffs: &[RatFunc], forms: &[OneForm<RatFunc>], s: usize) -> OneForm<RatFunc> {
    let mut acc = OneForm::zero(s);
    for (a, w) in coeffs.iter().zip(forms) {
        if !a.ris_zero() {
            acc = acc.add(&w.mul_fn(a));
        }
    }
    acc
}

fn support(a: &[RatFunc]) -> usize {
    a.iter().filter(|x| !x.ris_zero()).count()
}

/// The θ_i of a depth-1 system and its ω_i restricted to V, with the t_i
/// pulled back as functions.
struct Restricted {
    theta: Vec<OneForm<RatFunc>>,
    omega: Vec<OneForm<RatFunc>>,
    t: Vec<RatFunc>,
    omega_z: Vec<OneForm<RatFunc>>,
    s: usize,
}

fn restrict_depth1(th: &ThetaSystem, v: &FormalSubvariety) -> Result<Restricted> {
    if th.alg.class() != 1 {
        return Err(Error::InvalidInput("the descent is only automated for depth-1 systems".into()));
    }
    if v.ambient.len() != th.vars.len() {
        return Err(Error::DimensionMismatch(format!(
            "V lives in {} coordinates, the θ system in {}",
            v.ambient.len(),
            th.vars.len()
        )));
    }
    if !v.is_algebraic() {
        return Err(Error::InvalidInput("the descent needs a rational parameterization of V".into()));
    }
    let theta = restrict_forms(&th.theta, v, 2)?.exact.expect("rational map");
    let omega = restrict_forms(&th.omega, v, 2)?.exact.expect("rational map");
    let t = (0..th.theta.len()).map(|i| v.pull_function(&RatFunc::var(th.nchart + i))).collect::<Result<Vec<_>>>()?;
    let omega_z = th.omega.iter().map(|w| OneForm { c: w.c[..th.nchart].to_vec() }).collect();
    Ok(Restricted { theta, omega, t, omega_z, s: v.dim() })
}

/// Runs the descent on a relation whose coefficients are already functions
/// of the parameters.
fn descend(r: &Restricted, mut a: Vec<RatFunc>) -> Result<DependencyCertificate> {
    let s = r.s;
    if a.len() != r.theta.len() {
        return Err(Error::DimensionMismatch(format!("relation has {} coefficients for {} forms", a.len(), r.theta.len())));
    }
    if support(&a) == 0 || !lin_comb(&a, &r.theta, s).is_zero() {
        return Err(Error::NotARelation("Σ a_i θ_i does not vanish on V".into()));
    }
    let mut steps = Vec::new();
    loop {
        let k0 = a.iter().position(|x| !x.ris_zero()).expect("nonzero relation");
        let inv = a[k0].inv().expect("nonzero");
        a = a.iter().map(|x| x * &inv).collect();
        steps.push(a.clone());
        let da: Vec<OneForm<RatFunc>> = a.iter().map(|x| OneForm::d0(x, s)).collect();
        if da.iter().all(|w| w.is_zero()) {
            let coeffs: Vec<Q> = a.iter().map(|x| x.as_constant().expect("locally constant")).collect();
            let mut kernel_form = OneForm::zero(r.omega_z.first().map(|w| w.c.len()).unwrap_or(0));
            let mut primitive = RatFunc::rzero();
            for (i, c) in coeffs.iter().enumerate() {
                kernel_form = kernel_form.add(&r.omega_z[i].scale(c));
                primitive = primitive.radd(&r.t[i].scale(c));
            }
            let on_v = lin_comb(&a, &r.omega, s);
            let verified = !kernel_form.is_zero() && OneForm::d0(&primitive, s) == on_v;
            return Ok(DependencyCertificate { kind: CertificateKind::ConstantRelation { coeffs, kernel_form, primitive }, steps, verified });
        }
        let theta_t = Matrix::from_cols(&r.theta.iter().map(|w| w.c.clone()).collect::<Vec<_>>(), s);
        for (k, w) in da.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if let Some(span) = theta_t.solve(&w.c) {
                let h2 = a[k].clone();
                let verified = lin_comb(&span, &r.theta, s) == *w && !w.is_zero() && lin_comb(&a, &r.theta, s).is_zero();
                return Ok(DependencyCertificate {
                    kind: CertificateKind::FunctionRelation { coeffs: a, h1: RatFunc::rone(), h2, span },
                    steps,
                    verified,
                });
            }
        }
        // A vector field killing every θ_i but not some da_k gives a shorter
        // relation Σ D(da_i) θ_i = 0.
        let theta_m = Matrix::from_rows(r.theta.iter().map(|w| w.c.clone()).collect(), s);
        let fields = theta_m.kernel();
        let pair = |d: &Vec<RatFunc>, w: &OneForm<RatFunc>| -> RatFunc {
            d.iter().zip(&w.c).fold(RatFunc::rzero(), |acc, (x, y)| acc.radd(&x.rmul(y)))
        };
        let d = fields
            .iter()
            .find(|d| da.iter().any(|w| !pair(d, w).ris_zero()))
            .ok_or_else(|| Error::NotARelation("no derivation separates the coefficients; the relation is inconsistent".into()))?;
        let b: Vec<RatFunc> = da.iter().map(|w| pair(d, w)).collect();
        if support(&b) >= support(&a) || !lin_comb(&b, &r.theta, s).is_zero() {
            return Err(Error::NotARelation("descent step did not shorten the relation".into()));
        }
        a = b;
    }
}

/// Classifies a relation Σ a_i θ_i = 0 on V for a depth-1 system, the a_i
/// given as functions on the ambient coordinates.
pub fn descent_depth1(th: &ThetaSystem, a: &[RatFunc], v: &FormalSubvariety) -> Result<DependencyCertificate> {
    let r = restrict_depth1(th, v)?;
    let a = a.iter().map(|x| v.pull_function(x)).collect::<Result<Vec<_>>>()?;
    descend(&r, a)
}

/// Dimension count and rank certificates for the θ system restricted to V.
#[derive(Clone, Debug)]
pub struct UnlikelyReport {
    pub ambient_dim: usize,
    pub chart_dim: usize,
    pub theta_count: usize,
    pub dim_v: usize,
    pub codim_v: usize,
    /// Expected dimension of V ∩ Δ for Δ the graph of J.
    pub expected_dim_w: usize,
    pub codim_delta_w: usize,
    pub degenerate: bool,
    pub jet: JetRank,
    pub field: FieldRank,
    pub deficient: bool,
    pub relations_verified: bool,
    pub certificates: Vec<DependencyCertificate>,
}

pub fn unlikely_report(th: &ThetaSystem, v: &FormalSubvariety, order: usize) -> Result<UnlikelyReport> {
    let r = th.theta.len();
    let nz = th.nchart;
    let restricted = restrict_forms(&th.theta, v, order)?;
    let jet = jet_rank(&restricted.jets, order)?;
    let double = restrict_forms(&th.theta, v, 2 * order)?;
    let relations_verified = jet.relations.iter().all(|a| relation_holds(&double.jets, a, 2 * order));
    let field = function_field_rank(&restricted);
    // a rank lower bound below r proves nothing, so only exact ranks count
    let deficient = field.exact && field.rank < r;
    let mut certificates = Vec::new();
    if th.alg.class() == 1 && field.exact && v.dim() > 0 && field.rank < r {
        let rd = restrict_depth1(th, v)?;
        for rel in &field.relations {
            certificates.push(descend(&rd, rel.clone())?);
        }
    }
    if field.exact && !deficient {
        certificates.push(DependencyCertificate { kind: CertificateKind::FullRank, steps: Vec::new(), verified: true });
    }
    let expected_dim_w = v.dim().saturating_sub(r);
    Ok(UnlikelyReport {
        ambient_dim: v.ambient.len(),
        chart_dim: nz,
        theta_count: r,
        dim_v: v.dim(),
        codim_v: v.codim(),
        expected_dim_w,
        codim_delta_w: nz.saturating_sub(expected_dim_w),
        degenerate: v.dim() == 0,
        jet,
        field,
        deficient,
        relations_verified,
        certificates,
    })
}

fn fmt_rf(vars: &VarNames, f: &RatFunc) -> String {
    vars.fmt_ratfunc(f)
}

impl DependencyCertificate {
    pub fn to_json(&self, params: &VarNames, chart: &VarNames) -> Value {
        let kind = match &self.kind {
            CertificateKind::FullRank => json!({ "kind": "full-rank" }),
            CertificateKind::ConstantRelation { coeffs, kernel_form, primitive } => json!({
                "kind": "constant-relation",
                "coefficients": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "kernel_class": kernel_form.c.iter().map(|f| fmt_rf(chart, f)).collect::<Vec<_>>(),
                "primitive_on_v": fmt_rf(params, primitive),
            }),
            CertificateKind::FunctionRelation { coeffs, h1, h2, span } => json!({
                "kind": "function-relation",
                "coefficients": coeffs.iter().map(|c| fmt_rf(params, c)).collect::<Vec<_>>(),
                "h1": fmt_rf(params, h1),
                "h2": fmt_rf(params, h2),
                "span": span.iter().map(|c| fmt_rf(params, c)).collect::<Vec<_>>(),
            }),
        };
        let steps: Vec<Vec<String>> = self.steps.iter().map(|a| a.iter().map(|c| fmt_rf(params, c)).collect()).collect();
        json!({ "certificate": kind, "steps": steps, "verified": self.verified })
    }
}

impl UnlikelyReport {
    pub fn to_json(&self, v: &FormalSubvariety, chart: &VarNames) -> Value {
        json!({
            "ambient_dim": self.ambient_dim,
            "chart_dim": self.chart_dim,
            "theta_count": self.theta_count,
            "dim_v": self.dim_v,
            "codim_v": self.codim_v,
            "expected_dim_w": self.expected_dim_w,
            "codim_delta_w": self.codim_delta_w,
            "degenerate": self.degenerate,
            "jet_order": self.jet.order,
            "jet_rank": self.jet.rank,
            "constant_relations": self.jet.relations.iter().map(|a| a.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "relations_verified_at_double_order": self.relations_verified,
            "function_field_rank": self.field.rank,
            "function_field_rank_exact": self.field.exact,
            "function_relations": self.field.relations.iter().map(|a| a.iter().map(|c| fmt_rf(&v.params, c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "deficient": self.deficient,
            "certificates": self.certificates.iter().map(|c| c.to_json(&v.params, chart)).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{build_universal, Chart};
    use crate::exactalg::{parse_ratfunc, q, qi};
    use crate::transport::compute_theta;

    fn system(k: usize) -> ThetaSystem {
        compute_theta(&build_universal(&Chart::thrice_punctured(k), 1).unwrap())
    }

    fn rational(th: &ThetaSystem, params: &[&str], base: Vec<Q>, map: &[&str]) -> FormalSubvariety {
        let p = VarNames::new(params);
        let m = map.iter().map(|s| parse_ratfunc(s, &p).unwrap()).collect();
        FormalSubvariety::rational(th.vars.clone(), p, base, m, vec![]).unwrap()
    }

    /// z1 = z2 and t1 = t3, t2 = t4: the diagonal inside L_1 × Z.
    fn diagonal(th: &ThetaSystem) -> FormalSubvariety {
        rational(th, &["s", "u1", "u2"], vec![q(1, 2), qi(0), qi(0)], &["s", "s", "u1", "u2", "u1", "u2"])
    }

    fn consts(v: &[i64], th: &ThetaSystem) -> Vec<RatFunc> {
        v.iter().map(|&c| parse_ratfunc(&c.to_string(), &th.vars).unwrap()).collect()
    }

    #[test]
    fn diagonal_relation_is_constant() {
        let th = system(2);
        let c = descent_depth1(&th, &consts(&[1, 0, -1, 0], &th), &diagonal(&th)).unwrap();
        assert!(c.verified);
        let CertificateKind::ConstantRelation { coeffs, kernel_form, .. } = c.kind else { panic!("expected a constant relation") };
        assert_eq!(coeffs, vec![qi(1), qi(0), qi(-1), qi(0)]);
        let z = VarNames::new(&["z1", "z2"]);
        assert_eq!(kernel_form.c, vec![parse_ratfunc("1/z1", &z).unwrap(), parse_ratfunc("-1/z2", &z).unwrap()]);
    }

    #[test]
    fn antidiagonal_relation_is_constant() {
        let th = system(2);
        // z2 = 1 − z1, t3 = −t2, t4 = −t1
        let v = rational(&th, &["s", "u1", "u2"], vec![q(1, 3), qi(0), qi(0)], &["s", "1-s", "u1", "u2", "-u2", "-u1"]);
        let c = descent_depth1(&th, &consts(&[0, 1, 1, 0], &th), &v).unwrap();
        assert!(c.verified);
        let CertificateKind::ConstantRelation { kernel_form, .. } = c.kind else { panic!("expected a constant relation") };
        let z = VarNames::new(&["z1", "z2"]);
        assert_eq!(kernel_form.c, vec![parse_ratfunc("1/(1-z1)", &z).unwrap(), parse_ratfunc("1/z2", &z).unwrap()]);
    }

    #[test]
    fn function_relation_on_a_level_set() {
        let th = system(1);
        // V = {t1 = t2 = 0}; z θ1 + (z − 1) θ2 = 0 there
        let v = rational(&th, &["s"], vec![q(1, 2)], &["s", "0", "0"]);
        let a = vec![parse_ratfunc("z", &th.vars).unwrap(), parse_ratfunc("z - 1", &th.vars).unwrap()];
        let c = descent_depth1(&th, &a, &v).unwrap();
        assert!(c.verified);
        assert!(matches!(c.kind, CertificateKind::FunctionRelation { .. }));
    }

    #[test]
    fn derivation_step_shortens_a_mixed_relation() {
        let th = system(2);
        let v = diagonal(&th);
        let a: Vec<RatFunc> = ["1", "t1", "-1", "-t1"].iter().map(|s| parse_ratfunc(s, &th.vars).unwrap()).collect();
        let c = descent_depth1(&th, &a, &v).unwrap();
        assert_eq!(c.steps.len(), 2);
        assert!(c.verified);
        let CertificateKind::ConstantRelation { coeffs, .. } = c.kind else { panic!("expected a constant relation") };
        assert_eq!(coeffs, vec![qi(0), qi(1), qi(0), qi(-1)]);
    }

    #[test]
    fn non_relations_are_rejected() {
        let th = system(2);
        let r = descent_depth1(&th, &consts(&[1, 0, 0, 0], &th), &diagonal(&th));
        assert!(matches!(r, Err(Error::NotARelation(_))));
    }

    #[test]
    fn reports() {
        let th = system(2);
        let rep = unlikely_report(&th, &diagonal(&th), 4).unwrap();
        assert!(rep.deficient);
        assert_eq!(rep.field.rank, 2);
        assert_eq!(rep.certificates.len(), 2);
        assert!(rep.certificates.iter().all(|c| c.verified && matches!(c.kind, CertificateKind::ConstantRelation { .. })));
        assert!(rep.relations_verified);

        let whole = FormalSubvariety::whole(th.vars.clone(), vec![q(1, 2), q(1, 3), qi(0), qi(0), qi(0), qi(0)]).unwrap();
        let rep = unlikely_report(&th, &whole, 4).unwrap();
        assert!(!rep.deficient);
        assert_eq!(rep.field.rank, 4);
        assert_eq!(rep.codim_v, 0);

        let pt = FormalSubvariety::point(th.vars.clone(), &[q(1, 2), q(1, 3), qi(0), qi(0), qi(0), qi(0)]).unwrap();
        let rep = unlikely_report(&th, &pt, 4).unwrap();
        assert!(rep.degenerate);
        assert_eq!(rep.dim_v, 0);
    }

    #[test]
    fn graph_closure_has_full_rank_in_depth_two() {
        let u = build_universal(&Chart::thrice_punctured(1), 2).unwrap();
        let th = compute_theta(&u);
        let mut base = vec![q(1, 2)];
        base.extend(vec![qi(0); th.theta.len()]);
        let rep = unlikely_report(&th, &FormalSubvariety::whole(th.vars.clone(), base).unwrap(), 4).unwrap();
        assert_eq!(rep.field.rank, th.theta.len());
        assert!(!rep.deficient);
        assert_eq!(rep.certificates.len(), 1);
        assert_eq!(rep.certificates[0].kind, CertificateKind::FullRank);
    }
}
