//! Horizontal sections of the universal connection as formal series at a
//! base point, the logarithm J, the forms θ̃ on L × Z and the local Albanese
//! map.

use crate::connection::UniversalConnection;
use crate::error::{Error, Result};
use crate::exactalg::{jet_expand_form, pullback_series, OneForm, RatFunc, Ring, TruncSeries, TwoForm, VarNames, Q};
use crate::liecore::{apply_ad_series, AdSeries, LieAlgebra, LieElement, Uea, UeaElement, UeaTensor};
use num_traits::Zero;
use std::sync::Arc;

/// The logarithm J of the horizontal section G with G(base) = 1, as a Lie
/// element whose coefficients are series in t_i = z_i − base_i.
#[derive(Clone, Debug)]
pub struct HorizontalLog {
    pub alg: Arc<LieAlgebra>,
    pub uea: Arc<Uea>,
    pub base: Vec<Q>,
    pub depth: usize,
    pub order: usize,
    pub j: LieElement<TruncSeries>,
    /// exp(J), the horizontal section itself.
    pub g: UeaElement<TruncSeries>,
}

/// Series expansions of the ω coefficients of the generators at `base`.
fn omega_series(u: &UniversalConnection, base: &[Q], order: usize) -> Result<Vec<OneForm<TruncSeries>>> {
    if base.len() != u.chart.nvars() {
        return Err(Error::DimensionMismatch(format!("base point has {} coordinates, chart has {}", base.len(), u.chart.nvars())));
    }
    u.generator_forms().iter().map(|w| jet_expand_form(w, base, order)).collect()
}

/// Solves dG = ωG with G(base) = 1 one word length at a time: the length-ℓ
/// part of G is the primitive of Σ_k ω_k x_k G_{ℓ−1}, which is closed by
/// flatness. Then J = log G.
pub fn solve_j(u: &UniversalConnection, base: &[Q], order: usize) -> Result<HorizontalLog> {
    if order < 2 {
        return Err(Error::InvalidInput("truncation order must be at least 2".into()));
    }
    let omega = omega_series(u, base, order)?;
    let uea = u.uea.clone();
    let nv = base.len();
    let mut g: UeaElement<TruncSeries> = UeaElement::one();
    let mut prev: UeaElement<TruncSeries> = UeaElement::one();
    for _ in 1..=u.depth {
        // coefficient of each word in ω·G_{ℓ−1}, one series per coordinate
        let mut parts: Vec<UeaElement<TruncSeries>> = vec![UeaElement::zero(); nv];
        for (k, w) in omega.iter().enumerate() {
            let xg = uea.mul(&uea.generator(k), &prev);
            for (i, part) in parts.iter_mut().enumerate() {
                if !w.c[i].is_zero() {
                    *part = part.add(&xg.mul_coeff(&w.c[i]));
                }
            }
        }
        let mut words: Vec<_> = parts.iter().flat_map(|p| p.c.keys().cloned()).collect();
        words.sort();
        words.dedup();
        let mut next = UeaElement::zero();
        for wd in words {
            let form: Vec<TruncSeries> = parts.iter().map(|p| p.get(&wd)).collect();
            let s = TruncSeries::radial_integral(&form).truncate(order);
            if !s.is_zero() {
                next.c.insert(wd, s);
            }
        }
        g = g.add(&next);
        prev = next;
    }
    let g = UeaElement { c: g.c.into_iter().map(|(w, s)| (w, s.truncate(order))).collect() };
    let j = uea.log_lie(&g)?;
    let j = j.map(|s| s.truncate(order));
    Ok(HorizontalLog { alg: u.alg.clone(), uea, base: base.to_vec(), depth: u.depth, order, j, g })
}

/// Number of nonzero coefficients in a tensor residual.
pub fn tensor_residual_count(r: &UeaTensor<TruncSeries>) -> usize {
    r.values().map(|s| s.terms().len()).sum()
}

/// Δ(exp J) − exp J ⊗ exp J.
pub fn verify_grouplike(h: &HorizontalLog) -> Result<UeaTensor<TruncSeries>> {
    let e = h.uea.exp(&h.uea.from_lie(&h.j))?;
    Ok(h.uea.grouplike_residual(&e))
}

/// dJ − (ad_J/(e^{ad_J} − 1))(ω), per coordinate direction, truncated where
/// the series are known.
pub fn lie_ode_residual(u: &UniversalConnection, h: &HorizontalLog) -> Result<Vec<LieElement<TruncSeries>>> {
    let omega = omega_series(u, &h.base, h.order)?;
    let nv = h.base.len();
    let mut out = Vec::with_capacity(nv);
    for i in 0..nv {
        let om = LieElement::from_pairs(omega.iter().enumerate().map(|(k, w)| (h.alg.generator(k), w.c[i].clone())));
        let rhs = apply_ad_series(&h.alg, AdSeries::TOverExpMinusOne, &h.j, &om);
        let dj = h.j.map(|s| s.partial(i));
        out.push(dj.sub(&rhs).map(|s| s.truncate(h.order - 1)));
    }
    Ok(out)
}

/// The forms θ̃_k = [((e^{ad_t} − 1)/ad_t)(dt)]_k − ω_k on L × Z. Coordinates
/// are the chart variables followed by t_1..t_r, one per Lie basis element.
#[derive(Clone, Debug)]
pub struct ThetaSystem {
    pub alg: Arc<LieAlgebra>,
    pub vars: VarNames,
    pub nchart: usize,
    pub theta: Vec<OneForm<RatFunc>>,
    /// ω_k on the same coordinates.
    pub omega: Vec<OneForm<RatFunc>>,
}

pub fn compute_theta(u: &UniversalConnection) -> ThetaSystem {
    let alg = u.alg.clone();
    let nz = u.chart.nvars();
    let r = alg.dim();
    let n = nz + r;
    let t = LieElement::from_pairs((0..r).map(|i| (i, RatFunc::var(nz + i))));
    let omega: Vec<OneForm<RatFunc>> = u.omega.iter().map(|w| w.extend(n)).collect();
    let mut theta: Vec<OneForm<RatFunc>> = omega.iter().map(|w| w.neg()).collect();
    for j in 0..r {
        let img = apply_ad_series(&alg, AdSeries::ExpMinusOneOverT, &t, &LieElement::basis(j));
        for (k, c) in &img.c {
            theta[*k].c[nz + j] = theta[*k].c[nz + j].radd(c);
        }
    }
    let vars = u.chart.var_names().concat(&VarNames::indexed("t", r));
    ThetaSystem { alg, vars, nchart: nz, theta, omega }
}

/// dθ̃_k − Σ b_{ijk} θ̃_i∧(½θ̃_j + ω_j) for every k.
pub fn verify_theta_identity(th: &ThetaSystem) -> Vec<TwoForm<RatFunc>> {
    let r = th.alg.dim();
    let half = Q::new(1.into(), 2.into());
    let mut out: Vec<TwoForm<RatFunc>> = th.theta.iter().map(|w| w.d()).collect();
    for i in 0..r {
        if th.theta[i].is_zero() {
            continue;
        }
        for j in 0..r {
            let consts = th.alg.structure(i, j);
            if consts.is_empty() {
                continue;
            }
            let wedge = th.theta[i].wedge(&th.theta[j].scale(&half).add(&th.omega[j]));
            for (k, b) in consts.iter() {
                out[*k] = out[*k].sub(&wedge.scale(b));
            }
        }
    }
    out
}

/// Pullback of every θ̃_k along z = base + s, t = J(s). Each component is a
/// 1-form in ds with series coefficients, truncated to the order where J's
/// derivative is known.
pub fn theta_pullback(th: &ThetaSystem, h: &HorizontalLog) -> Result<Vec<OneForm<TruncSeries>>> {
    let nz = th.nchart;
    let mut map: Vec<TruncSeries> = (0..nz)
        .map(|i| TruncSeries::var(i, h.order).add(&TruncSeries::constant(h.base[i].clone(), h.order)))
        .collect();
    for k in 0..th.alg.dim() {
        let s = h.j.get(k);
        map.push(if s.is_zero() { TruncSeries::zero(h.order) } else { s });
    }
    th.theta
        .iter()
        .map(|w| {
            let p = pullback_series(w, &map, nz)?;
            Ok(OneForm { c: p.c.into_iter().map(|s| s.truncate(h.order - 1)).collect() })
        })
        .collect()
}

/// The local Albanese map exp(J)·F⁻¹ for a group-like section F with
/// F(base) = 1.
pub fn albanese_local(h: &HorizontalLog, f: Option<&UeaElement<TruncSeries>>) -> Result<UeaElement<TruncSeries>> {
    let e = h.uea.exp(&h.uea.from_lie(&h.j))?;
    let Some(f) = f else { return Ok(e) };
    if tensor_residual_count(&h.uea.grouplike_residual(f)) != 0 {
        return Err(Error::NotGroupLike("section F is not group-like".into()));
    }
    for (w, s) in &f.c {
        let want = if w.is_empty() { Q::from_integer(1.into()) } else { Q::zero() };
        if s.constant_term() != want {
            return Err(Error::InvalidInput("section F must equal 1 at the base point".into()));
        }
    }
    let fi = h.uea.inverse(f)?;
    let out = h.uea.mul(&e, &fi);
    Ok(UeaElement { c: out.c.into_iter().map(|(w, s)| (w, s.truncate(h.order))).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{build_universal, Chart};
    use crate::exactalg::{q, qi, Mono};

    fn half() -> Vec<Q> {
        vec![q(1, 2)]
    }

    fn coeffs(s: &TruncSeries, n: usize) -> Vec<Q> {
        (0..n).map(|k| s.coeff(&Mono::from_exps(vec![k as u32]))).collect()
    }

    #[test]
    fn depth_one_is_the_logarithm_pair() {
        let u = build_universal(&Chart::thrice_punctured(1), 1).unwrap();
        let h = solve_j(&u, &half(), 4).unwrap();
        assert_eq!(coeffs(&h.j.get(0), 4), vec![qi(0), qi(2), qi(-2), q(8, 3)]);
        assert_eq!(coeffs(&h.j.get(1), 4), vec![qi(0), qi(2), qi(2), q(8, 3)]);
    }

    #[test]
    fn zero_at_the_base_and_grouplike() {
        let u = build_universal(&Chart::thrice_punctured(1), 3).unwrap();
        let h = solve_j(&u, &half(), 6).unwrap();
        assert!(h.j.c.values().all(|s| s.constant_term().is_zero()));
        assert_eq!(tensor_residual_count(&verify_grouplike(&h).unwrap()), 0);
        assert!(lie_ode_residual(&u, &h).unwrap().iter().all(|r| r.is_zero()));
    }

    /// The [x1, x2] coefficient through the iterated integrals ∫ω_a∫ω_b.
    #[test]
    fn bracket_coefficient_matches_iterated_integrals() {
        let n = 7;
        let u = build_universal(&Chart::thrice_punctured(1), 2).unwrap();
        let h = solve_j(&u, &half(), n).unwrap();
        let w: Vec<TruncSeries> = u.generator_forms().iter().map(|f| jet_expand_form(f, &half(), n).unwrap().c[0].clone()).collect();
        let i1: Vec<TruncSeries> = w.iter().map(|s| s.integrate(0).truncate(n)).collect();
        // G_{ab} = ∫ ω_a G_b, and J_{[x1,x2]} = (G_{12} − G_{21}) / 2
        let g12 = w[0].mul(&i1[1]).integrate(0).truncate(n);
        let g21 = w[1].mul(&i1[0]).integrate(0).truncate(n);
        let want = g12.sub(&g21).scale(&q(1, 2));
        let idx = (0..h.alg.dim()).find(|&i| h.alg.degree(i) == 2).unwrap();
        assert_eq!(h.alg.label(idx), "[x1,x2]");
        assert_eq!(h.j.get(idx), want);
    }

    #[test]
    fn truncation_in_depth_is_functorial() {
        let u3 = build_universal(&Chart::thrice_punctured(1), 3).unwrap();
        let u2 = build_universal(&Chart::thrice_punctured(1), 2).unwrap();
        let h3 = solve_j(&u3, &half(), 5).unwrap();
        let h2 = solve_j(&u2, &half(), 5).unwrap();
        for i in 0..h2.alg.dim() {
            assert_eq!(h3.alg.word(i), h2.alg.word(i));
            assert_eq!(h3.j.get(i), h2.j.get(i));
        }
    }

    #[test]
    fn theta_in_low_depth() {
        let u = build_universal(&Chart::thrice_punctured(1), 1).unwrap();
        let th = compute_theta(&u);
        for k in 0..2 {
            let mut want = u.omega[k].extend(3).neg();
            want.c[1 + k] = RatFunc::rone();
            assert_eq!(th.theta[k], want);
        }
        let u = build_universal(&Chart::thrice_punctured(1), 2).unwrap();
        let th = compute_theta(&u);
        let v = &th.vars;
        let p = |s: &str| crate::exactalg::parse_ratfunc(s, v).unwrap();
        // z, t1, t2, t3
        assert_eq!(th.theta[2].c, vec![p("0"), p("-t2/2"), p("t1/2"), p("1")]);
    }

    #[test]
    fn theta_identity_and_pullback() {
        for (chart, depth, base) in [
            (Chart::thrice_punctured(1), 3, half()),
            (Chart::thrice_punctured(2), 2, vec![q(1, 2), q(-1, 1)]),
        ] {
            let u = build_universal(&chart, depth).unwrap();
            let th = compute_theta(&u);
            assert!(verify_theta_identity(&th).iter().all(|t| t.is_zero()));
            let h = solve_j(&u, &base, 5).unwrap();
            for w in theta_pullback(&th, &h).unwrap() {
                assert!(w.c.iter().all(|s| s.is_zero()));
            }
        }
    }

    #[test]
    fn albanese_with_a_section() {
        let u = build_universal(&Chart::thrice_punctured(1), 2).unwrap();
        let h = solve_j(&u, &half(), 5).unwrap();
        let e = albanese_local(&h, None).unwrap();
        assert_eq!(e, h.g);
        let f_series = TruncSeries::var(0, 5).scale(&qi(3));
        let fe1 = h.uea.exp(&h.uea.generator::<TruncSeries>(0).mul_coeff(&f_series)).unwrap();
        let a = albanese_local(&h, Some(&fe1)).unwrap();
        let minus = h.uea.exp(&h.uea.generator::<TruncSeries>(0).mul_coeff(&f_series.neg())).unwrap();
        let want = h.uea.mul(&h.g, &minus);
        assert_eq!(a, UeaElement { c: want.c.into_iter().map(|(w, s)| (w, s.truncate(5))).collect() });
        let mut bad = fe1.clone();
        bad.c.insert(vec![0, 1], TruncSeries::var(0, 5).pow(2));
        assert!(matches!(albanese_local(&h, Some(&bad)), Err(Error::NotGroupLike(_))));
    }

    #[test]
    fn corrupted_log_is_not_grouplike() {
        let u = build_universal(&Chart::thrice_punctured(1), 2).unwrap();
        let h = solve_j(&u, &half(), 5).unwrap();
        let mut ju = h.uea.from_lie(&h.j);
        let t2 = TruncSeries::var(0, 5).pow(2);
        ju = ju.add(&UeaElement { c: [(vec![0u8, 1u8], t2)].into_iter().collect() });
        let e = h.uea.exp(&ju).unwrap();
        assert!(tensor_residual_count(&h.uea.grouplike_residual(&e)) > 0);
    }

    #[test]
    fn pole_at_base_is_reported() {
        let u = build_universal(&Chart::thrice_punctured(1), 1).unwrap();
        assert!(matches!(solve_j(&u, &[qi(1)], 4), Err(Error::PoleAtBase(_))));
    }
}
