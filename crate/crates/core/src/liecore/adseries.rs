use super::lie::{LieAlgebra, LieElement};
use crate::exactalg::{Ring, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Power series in ad_x applied to Lie elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdSeries {
    /// (e^t − 1)/t
    ExpMinusOneOverT,
    /// t/(e^t − 1)
    TOverExpMinusOne,
    /// e^t
    Exp,
}

impl AdSeries {
    pub fn name(&self) -> &'static str {
        match self {
            AdSeries::ExpMinusOneOverT => "(e^t-1)/t",
            AdSeries::TOverExpMinusOne => "t/(e^t-1)",
            AdSeries::Exp => "e^t",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.replace(' ', "").as_str() {
            "(e^t-1)/t" | "expm1-over-t" => Some(AdSeries::ExpMinusOneOverT),
            "t/(e^t-1)" | "t-over-expm1" => Some(AdSeries::TOverExpMinusOne),
            "e^t" | "exp" => Some(AdSeries::Exp),
            _ => None,
        }
    }

    /// The first `len` coefficients a_0, a_1, ...
    pub fn coefficients(&self, len: usize) -> Vec<Q> {
        let fact = |k: usize| -> BigInt { (1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i)) };
        match self {
            AdSeries::ExpMinusOneOverT => (0..len).map(|i| Q::new(1.into(), fact(i + 1))).collect(),
            AdSeries::Exp => (0..len).map(|i| Q::new(1.into(), fact(i))).collect(),
            AdSeries::TOverExpMinusOne => bernoulli(len).into_iter().enumerate().map(|(i, b)| b / Q::from_integer(fact(i))).collect(),
        }
    }
}

/// Bernoulli numbers B_0..B_{len-1} with B_1 = −1/2, from
/// Σ_{k<n+1} C(n+1, k) B_k = 0.
pub fn bernoulli(len: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            b.push(Q::one());
            continue;
        }
        let mut acc = Q::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += Q::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / Q::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// F(ad_x)(y) = Σ a_i ad_x^i (y), stopping once the iterated bracket vanishes.
pub fn apply_ad_series<R: Ring>(alg: &LieAlgebra, f: AdSeries, x: &LieElement<R>, y: &LieElement<R>) -> LieElement<R> {
    let coeffs = f.coefficients(alg.class() + 1);
    let mut out = LieElement::zero();
    let mut term = y.clone();
    for a in coeffs {
        if term.is_zero() {
            break;
        }
        out = out.add(&term.scale(&a));
        term = alg.bracket(x, &term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;
    use crate::liecore::spec::LieAlgebraSpec;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(5), vec![q(1, 1), q(-1, 2), q(1, 6), q(0, 1), q(-1, 30)]);
    }

    #[test]
    fn inverse_series_compose_to_identity() {
        let a = LieAlgebra::new(LieAlgebraSpec::free(2, 5)).unwrap();
        let x = a.parse_element("x1 - 2*x2 + [x1,x2]").unwrap();
        let y = a.parse_element("x2 + 3*[x1,[x1,x2]]").unwrap();
        let fy = apply_ad_series(&a, AdSeries::ExpMinusOneOverT, &x, &y);
        assert_eq!(apply_ad_series(&a, AdSeries::TOverExpMinusOne, &x, &fy), y);
    }

    #[test]
    fn exp_series_expansion() {
        let a = LieAlgebra::new(LieAlgebraSpec::free(2, 3)).unwrap();
        let x1 = a.parse_element("x1").unwrap();
        let x2 = a.parse_element("x2").unwrap();
        let r = apply_ad_series(&a, AdSeries::Exp, &x1, &x2);
        assert_eq!(r, a.parse_element("x2 + [x1,x2] + 1/2*[x1,[x1,x2]]").unwrap());
        let two = LieAlgebra::new(LieAlgebraSpec::free(2, 2)).unwrap();
        let r = apply_ad_series(&two, AdSeries::ExpMinusOneOverT, &x1, &x2);
        assert_eq!(r, two.parse_element("x2 + 1/2*[x1,x2]").unwrap());
    }
}
