use super::forms::Differential;
use super::poly::Poly;
use super::rational::{Field, Ring, Q};
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Quotient of polynomials kept in canonical form: numerator and denominator
/// coprime, denominator with leading coefficient one.
#[derive(Clone, Debug, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        if den.is_constant() {
            let c = den.constant_term();
            return RatFunc { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(Poly::var(i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value if this is a constant.
    pub fn as_constant(&self) -> Option<Q> {
        if self.is_constant() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::normalized(self.den.clone(), self.num.clone()))
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return RatFunc::from_poly(Poly::zero());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn partial(&self, i: usize) -> Self {
        if self.den.is_constant() {
            return RatFunc::from_poly(self.num.partial(i));
        }
        let n = &(&self.num.partial(i) * &self.den) - &(&self.num * &self.den.partial(i));
        Self::normalized(n, &self.den * &self.den)
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    /// Substitutes rational functions for the variables.
    pub fn compose(&self, args: &[RatFunc]) -> Option<RatFunc> {
        let n = self.num.eval_ring(args);
        let d = self.den.eval_ring(args);
        if d.is_zero() {
            return None;
        }
        Some(&n / &d)
    }

    pub fn remap(&self, map: &[usize]) -> RatFunc {
        Self::normalized(self.num.remap(map), self.den.remap(map))
    }

    pub fn width(&self) -> usize {
        self.num.width().max(self.den.width())
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.den == &o.num * &self.den
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one_poly() {
                return RatFunc::from_poly(&self.num + &o.num);
            }
            return RatFunc::normalized(&self.num + &o.num, self.den.clone());
        }
        if o.den.is_one_poly() {
            return RatFunc { num: &self.num + &(&o.num * &self.den), den: self.den.clone() };
        }
        if self.den.is_one_poly() {
            return RatFunc { num: &(&self.num * &o.den) + &o.num, den: o.den.clone() };
        }
        let g = Poly::gcd(&self.den, &o.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = o.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&o.num * &a);
        RatFunc::normalized(num, &(&a * &b) * &g)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.num.is_zero() || o.num.is_zero() {
            return RatFunc::from_poly(Poly::zero());
        }
        if self.den.is_one_poly() && o.den.is_one_poly() {
            return RatFunc::from_poly(&self.num * &o.num);
        }
        let g1 = Poly::gcd(&self.num, &o.den);
        let g2 = Poly::gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = o.den.div_exact(&g1).expect("gcd divides");
        let n2 = o.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv().expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.len() == 1 && self.is_constant() && self.constant_term().is_one()
    }
}

impl Ring for RatFunc {
    fn rzero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }
    fn rone() -> Self {
        RatFunc::from_poly(Poly::one())
    }
    fn ris_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_q(q: &Q) -> Self {
        RatFunc::constant(q.clone())
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn rscale(&self, c: &Q) -> Self {
        self.scale(c)
    }
}

impl Field for RatFunc {
    fn rinv(&self) -> Option<Self> {
        self.inv()
    }
}

impl Differential for RatFunc {
    fn partial(&self, i: usize) -> Self {
        RatFunc::partial(self, i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{q, qi};

    fn z(i: usize) -> RatFunc {
        RatFunc::var(i)
    }

    fn c(n: i64) -> RatFunc {
        RatFunc::constant(qi(n))
    }

    #[test]
    fn canonical_cancellation() {
        // (z^2 - 1)/(z - 1) = z + 1
        let n = &(&z(0) * &z(0)) - &c(1);
        let d = &z(0) - &c(1);
        let r = &n / &d;
        assert!(r.is_polynomial());
        assert_eq!(r, &z(0) + &c(1));
    }

    #[test]
    fn partial_fractions_add_up() {
        // 1/z + 1/(1-z) = 1/(z(1-z))
        let a = &c(1) / &z(0);
        let b = &c(1) / &(&c(1) - &z(0));
        let s = &a + &b;
        let expect = &c(1) / &(&z(0) * &(&c(1) - &z(0)));
        assert_eq!(s, expect);
        assert_eq!(s.den().leading_coeff(), qi(1));
    }

    #[test]
    fn derivative_of_quotient() {
        let f = &c(1) / &z(0);
        assert_eq!(f.partial(0), &c(-1) / &(&z(0) * &z(0)));
        assert_eq!(f.eval(&[q(1, 2)]), Some(qi(2)));
        assert_eq!(f.eval(&[qi(0)]), None);
    }
}
