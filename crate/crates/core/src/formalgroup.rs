//! Formal logarithm and exponential of an elliptic curve in the parameter
//! t = −x/y, and the formal group law they linearise.

use crate::error::{Error, Result};
use crate::exactalg::{Mono, Q, TruncSeries};
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

/// y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a: [Q; 5],
}

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

impl WeierstrassCurve {
    pub fn new(a1: Q, a2: Q, a3: Q, a4: Q, a6: Q) -> Result<Self> {
        let c = WeierstrassCurve { a: [a1, a2, a3, a4, a6] };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve(format!("{c} has discriminant 0")));
        }
        Ok(c)
    }

    /// Parses "a1,a2,a3,a4,a6" with rational entries.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("expected five coefficients a1,a2,a3,a4,a6, got {:?}", s)));
        }
        let mut a: Vec<Q> = Vec::with_capacity(5);
        for p in parts {
            a.push(p.parse::<Q>().map_err(|_| Error::Parse(format!("bad coefficient {p:?}")))?);
        }
        let [a1, a2, a3, a4, a6]: [Q; 5] = a.try_into().expect("five entries");
        Self::new(a1, a2, a3, a4, a6)
    }

    pub fn discriminant(&self) -> Q {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1 * a1 + qi(4) * a2;
        let b4 = qi(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + qi(4) * a6;
        let b8 = a1 * a1 * a6 + qi(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -(&b2 * &b2 * &b8) - qi(8) * &b4 * &b4 * &b4 - qi(27) * &b6 * &b6 + qi(9) * &b2 * &b4 * &b6
    }

    /// u with w = −1/y = t³u(t), solved from
    /// u = 1 + a₁tu + a₂t²u + a₃t³u² + a₄t⁴u² + a₆t⁶u³, known modulo t^order.
    fn w_over_t3(&self, order: usize) -> TruncSeries {
        let [a1, a2, a3, a4, a6] = &self.a;
        let t = TruncSeries::var(0, order);
        let tp = |k: u32| t.pow(k);
        let mut u = TruncSeries::one(order);
        for _ in 0..order {
            let u2 = u.mul(&u);
            u = TruncSeries::one(order)
                .add(&tp(1).mul(&u).scale(a1))
                .add(&tp(2).mul(&u).scale(a2))
                .add(&tp(3).mul(&u2).scale(a3))
                .add(&tp(4).mul(&u2).scale(a4))
                .add(&tp(6).mul(&u2).mul(&u).scale(a6));
        }
        u
    }

    /// w(t) = −1/y modulo t^order.
    pub fn w_series(&self, order: usize) -> TruncSeries {
        let u = self.w_over_t3(order.saturating_sub(3).max(1));
        shift(&u, 3, order)
    }

    /// ω/dt for the invariant differential ω = dx/(2y + a₁x + a₃), modulo t^order.
    pub fn invariant_differential(&self, order: usize) -> TruncSeries {
        let [a1, _, a3, _, _] = &self.a;
        let u = self.w_over_t3(order + 1);
        let t = TruncSeries::var(0, order + 1);
        // x = t/w, y = −1/w with w = t³u gives ω/dt = (2u + tu')/(u(2 − a₁t − a₃t³u)).
        let num = u.scale(&qi(2)).add(&t.mul(&u.partial(0)));
        let den = u.mul(&TruncSeries::constant(qi(2), order + 1).sub(&t.scale(a1)).sub(&t.pow(3).mul(&u).scale(a3)));
        num.mul(&den.inv().expect("unit constant term")).truncate(order)
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.a.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// Multiplies a univariate series by t^k and truncates at `order`.
fn shift(s: &TruncSeries, k: u32, order: usize) -> TruncSeries {
    TruncSeries::from_terms(order, s.terms().iter().map(|(m, c)| (Mono::from_exps(vec![m.degree() + k]), c.clone())))
}

fn check_order(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("truncation order {n} must be at least 2")));
    }
    Ok(())
}

/// The formal logarithm modulo t^order: the termwise integral of ω/dt.
pub fn formal_log(c: &WeierstrassCurve, order: usize) -> Result<TruncSeries> {
    check_order(order)?;
    let w = c.invariant_differential(order - 1);
    Ok(TruncSeries::from_terms(order, w.terms().iter().map(|(m, a)| (Mono::from_exps(vec![m.degree() + 1]), a / qi(m.degree() as i64 + 1)))))
}

/// Compositional inverse of a series t + O(t²), at its own truncation.
pub fn formal_exp(log: &TruncSeries) -> Result<TruncSeries> {
    let order = log.order();
    if order < 2 || !log.constant_term().is_zero() || log.coeff(&Mono::from_exps(vec![1])) != Q::one() {
        return Err(Error::BadLeadingTerm("the series must be t + O(t^2)".into()));
    }
    let t = TruncSeries::var(0, order);
    // e = t − (L(e) − e) gains one correct coefficient per pass.
    let mut e = t.clone();
    for _ in 0..order {
        let next = t.sub(&log.compose(std::slice::from_ref(&e)).sub(&e));
        if next == e {
            break;
        }
        e = next;
    }
    Ok(e)
}

#[derive(Clone, Debug, Serialize)]
pub struct FormalLogPair {
    pub curve: String,
    pub order: usize,
    pub log: Vec<String>,
    pub exp: Vec<String>,
    /// log∘exp = t and exp∘log = t modulo t^order.
    pub inverse_verified: bool,
}

pub fn log_exp_pair(c: &WeierstrassCurve, order: usize) -> Result<FormalLogPair> {
    let log = formal_log(c, order)?;
    let exp = formal_exp(&log)?;
    let t = TruncSeries::var(0, order);
    let ok = log.compose(std::slice::from_ref(&exp)) == t && exp.compose(std::slice::from_ref(&log)) == t;
    let strs = |s: &TruncSeries| s.coeffs().iter().map(|x| x.to_string()).collect();
    Ok(FormalLogPair { curve: c.to_string(), order, log: strs(&log), exp: strs(&exp), inverse_verified: ok })
}

/// The formal group law F(t₁, t₂) modulo total degree `order`, from the
/// chord through the two points in the (t, w) chart.
pub fn formal_group_law(c: &WeierstrassCurve, order: usize) -> Result<TruncSeries> {
    check_order(order)?;
    let [a1, a2, a3, a4, a6] = &c.a;
    let w = c.w_series(order + 2);
    let (t1, t2) = (TruncSeries::var(0, order), TruncSeries::var(1, order));
    // λ = (w(t₂) − w(t₁))/(t₂ − t₁) = Σ A_n Σ_{k<n} t₁^k t₂^{n−1−k}.
    let mut lambda = TruncSeries::zero(order);
    for (m, an) in w.terms() {
        let n = m.degree();
        for k in 0..n {
            lambda.add_term(Mono::from_exps(vec![k, n - 1 - k]), an.clone());
        }
    }
    let w1 = w.truncate(order).compose(std::slice::from_ref(&t1));
    let nu = w1.sub(&lambda.mul(&t1));
    let l2 = lambda.mul(&lambda);
    let one = TruncSeries::one(order);
    let quad = lambda
        .scale(a1)
        .add(&nu.scale(a2))
        .add(&l2.scale(a3))
        .add(&lambda.mul(&nu).scale(&(qi(2) * a4)))
        .add(&l2.mul(&nu).scale(&(qi(3) * a6)));
    let cubic = one.add(&lambda.scale(a2)).add(&l2.scale(a4)).add(&l2.mul(&lambda).scale(a6));
    let t3 = t1.neg().sub(&t2).sub(&quad.mul(&cubic.inv().expect("unit constant term")));
    let w3 = lambda.mul(&t3).add(&nu);
    // The negative of (t, w) has parameter t/(−1 + a₁t + a₃w).
    let den = one.neg().add(&t3.scale(a1)).add(&w3.scale(a3));
    Ok(t3.mul(&den.inv().expect("unit constant term")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn curve(a: [i64; 5]) -> WeierstrassCurve {
        WeierstrassCurve::new(qi(a[0]), qi(a[1]), qi(a[2]), qi(a[3]), qi(a[4])).unwrap()
    }

    /// ω/dt for y² = x³ + a₄x + a₆ from x = s/t², y = −s/t³, where
    /// s = 1 − (a₄t⁴ + a₆t⁶/s)/s; then dx/2y = (1 − ts'/(2s)) dt.
    fn short_form_oracle(a4: &Q, a6: &Q, order: usize) -> TruncSeries {
        let m = order + 1;
        let t = TruncSeries::var(0, m);
        let mut s = TruncSeries::one(m);
        for _ in 0..m {
            let si = s.inv().unwrap();
            let inner = t.pow(4).scale(a4).add(&t.pow(6).scale(a6).mul(&si));
            s = TruncSeries::one(m).sub(&inner.mul(&si));
        }
        let r = t.mul(&s.partial(0)).mul(&s.inv().unwrap()).scale(&q(1, 2));
        TruncSeries::one(m).sub(&r).truncate(order)
    }

    #[test]
    fn log_matches_independent_expansion() {
        let c = curve([0, 0, 0, 1, 0]);
        let log = formal_log(&c, 8).unwrap();
        let w = short_form_oracle(&qi(1), &qi(0), 7);
        let oracle = TruncSeries::from_terms(8, w.terms().iter().map(|(m, a)| (Mono::from_exps(vec![m.degree() + 1]), a / qi(m.degree() as i64 + 1))));
        assert_eq!(log, oracle);
        assert_eq!(log.coeffs()[5], q(2, 5));
        for (a4, a6) in [(-1, 1), (3, -7), (0, 5)] {
            let c = curve([0, 0, 0, a4, a6]);
            assert_eq!(c.invariant_differential(15), short_form_oracle(&qi(a4), &qi(a6), 15));
        }
    }

    #[test]
    fn leading_term_and_parity() {
        for a in [[1, -1, 0, -3, 2], [0, 0, 1, -1, 0], [0, 0, 0, -2, 3]] {
            let l = formal_log(&curve(a), 12).unwrap();
            assert_eq!(l.coeffs()[1], Q::one());
            assert!(l.constant_term().is_zero());
        }
        let l = formal_log(&curve([0, 0, 0, -2, 3]), 16).unwrap();
        for (k, c) in l.coeffs().iter().enumerate() {
            if k % 2 == 0 {
                assert!(c.is_zero(), "t^{k} present");
            }
        }
    }

    #[test]
    fn exp_inverts_log() {
        let t = TruncSeries::var(0, 10);
        assert_eq!(formal_exp(&t).unwrap(), t);
        let l = TruncSeries::from_coeffs(&[qi(0), qi(1), qi(0), q(1, 3)], 10);
        let e = formal_exp(&l).unwrap();
        // Lagrange inversion: [t^n] e = (1/n)[t^{n−1}] (t/L)^n.
        let ratio = TruncSeries::from_coeffs(&[qi(1), qi(0), q(1, 3)], 10).inv().unwrap();
        for n in 1..10u32 {
            let want = ratio.pow(n).coeff(&Mono::from_exps(vec![n - 1])) / qi(n as i64);
            assert_eq!(e.coeff(&Mono::from_exps(vec![n])), want);
        }
        assert_eq!(e.coeffs()[3], q(-1, 3));
        let bad = TruncSeries::from_coeffs(&[qi(0), qi(2)], 5);
        assert!(matches!(formal_exp(&bad), Err(Error::BadLeadingTerm(_))));
    }

    #[test]
    fn log_exp_pair_at_twenty() {
        let p = log_exp_pair(&curve([1, -1, 1, 2, -3]), 20).unwrap();
        assert!(p.inverse_verified);
        assert_eq!(p.log.len(), 20);
    }

    #[test]
    fn group_law_is_linearised_by_log() {
        for a in [[0, 0, 0, 1, 0], [1, -1, 1, 2, -3], [0, 1, 1, -2, 0]] {
            let c = curve(a);
            let n = 9;
            let f = formal_group_law(&c, n).unwrap();
            let log = formal_log(&c, n).unwrap();
            let (t1, t2) = (TruncSeries::var(0, n), TruncSeries::var(1, n));
            let lhs = log.compose(std::slice::from_ref(&f));
            let rhs = log.compose(std::slice::from_ref(&t1)).add(&log.compose(std::slice::from_ref(&t2)));
            assert_eq!(lhs, rhs, "curve {a:?}");
            assert_eq!(f.coeff(&Mono::from_exps(vec![1, 0])), Q::one());
        }
    }

    #[test]
    fn singular_and_bad_input() {
        assert!(matches!(WeierstrassCurve::new(qi(0), qi(0), qi(0), qi(0), qi(0)), Err(Error::SingularCurve(_))));
        assert!(matches!(WeierstrassCurve::parse("0,0,0,-3,2"), Err(Error::SingularCurve(_))));
        assert!(WeierstrassCurve::parse("0,0,0,1/2,0").is_ok());
        assert!(matches!(WeierstrassCurve::parse("0,0,1"), Err(Error::Parse(_))));
        assert!(formal_log(&curve([0, 0, 0, 1, 0]), 1).is_err());
    }
}
