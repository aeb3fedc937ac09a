use super::mono::Mono;
use super::rational::{Ring, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse multivariate polynomial over Q. No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(Mono::one(), c)
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Mono::var(i), Q::one())
    }

    pub fn monomial(m: Mono, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, Q)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Mono::one())
    }

    /// Leading term for the graded lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Q {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// One past the largest variable index that occurs.
    pub fn width(&self) -> usize {
        self.terms.keys().map(|m| m.width()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                p.add_term(m.with_exp(i, e - 1), c * Q::from_integer(BigInt::from(e)));
            }
        }
        p
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluates at arguments from any ring, caching powers.
    pub fn eval_ring<R: Ring>(&self, args: &[R]) -> R {
        let mut powers: Vec<Vec<R>> = vec![vec![R::rone()]; args.len()];
        let mut acc = R::rzero();
        for (m, c) in &self.terms {
            let mut t = R::from_q(c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().rmul(&args[i]);
                    powers[i].push(next);
                }
                t = t.rmul(&powers[i][e]);
            }
            acc = acc.radd(&t);
        }
        acc
    }

    /// Renames variable `i` to `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.remap(map), c.clone())))
    }

    /// Drops terms of total degree `>= order`.
    pub fn truncate(&self, order: u32) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| m.degree() < order).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Coefficients as a polynomial in variable `v`, index k holding the
    /// coefficient of v^k.
    pub fn to_univariate(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out[e].add_term(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[Poly], v: usize) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let vk = Mono::from_exps(Vec::new()).with_exp(v, k as u32);
            for (m, x) in &c.terms {
                p.add_term(m.mul(&vk), x.clone());
            }
        }
        p
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Poly {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    /// Rational content c such that self / c has coprime integer coefficients
    /// and positive leading coefficient.
    pub fn rational_content(&self) -> Q {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Q::one();
        }
        let mut c = Q::new(num, den);
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        c
    }

    /// Exact division. Returns `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if d.len() == 1 {
            let (dm, dc) = d.leading().unwrap();
            let inv = dc.recip();
            let mut out = BTreeMap::new();
            for (m, c) in &self.terms {
                out.insert(m.div(dm)?, c * &inv);
            }
            return Some(Poly { terms: out });
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let inv = dc.recip();
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&dm)?;
            let qc = c * &inv;
            rem = &rem - &d.mul_mono(&qm, &qc);
            quo.add_term(qm, qc);
        }
        Some(quo)
    }

    /// Greatest common divisor, normalised to leading coefficient one.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        if a == b {
            return a.monic();
        }
        if b.len() == 1 || a.len() == 1 {
            return Self::gcd_with_monomial(a, b);
        }
        let va = a.vars();
        let vb = b.vars();
        if let Some(&v) = va.difference(&vb).next() {
            return Poly::gcd(&a.content_in(v), b);
        }
        if let Some(&v) = vb.difference(&va).next() {
            return Poly::gcd(a, &b.content_in(v));
        }
        let v = *va.iter().next().unwrap();
        let ca = a.content_in(v);
        let cb = b.content_in(v);
        let c = Poly::gcd(&ca, &cb);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let g = Self::prs_gcd(&pa, &pb, v);
        (&c * &g).monic()
    }

    fn gcd_with_monomial(a: &Poly, b: &Poly) -> Poly {
        // gcd with a single term is the monomial gcd with every term of the other.
        let (single, other) = if a.len() == 1 { (a, b) } else { (b, a) };
        let (m, _) = single.leading().unwrap();
        let mut g: Vec<u32> = m.exps().to_vec();
        for k in other.terms.keys() {
            for (i, e) in g.iter_mut().enumerate() {
                *e = (*e).min(k.exp(i));
            }
        }
        Poly::monomial(Mono::from_exps(g), Q::one())
    }

    /// gcd of the coefficients of `self` viewed as a polynomial in `v`.
    pub fn content_in(&self, v: usize) -> Poly {
        let coeffs = self.to_univariate(v);
        let mut g = Poly::zero();
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            g = Poly::gcd(&g, c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }

    /// gcd of two polynomials primitive in `v`, by the primitive remainder sequence.
    fn prs_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
        let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        loop {
            if g.is_zero() {
                return f.primitive_in(v);
            }
            if g.degree_in(v) == 0 {
                return Poly::one();
            }
            let r = Self::prem(&f, &g, v);
            f = g;
            g = if r.is_zero() { r } else { r.primitive_in(v) };
        }
    }

    fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder of f by g in variable v.
    fn prem(f: &Poly, g: &Poly, v: usize) -> Poly {
        let mut r = f.to_univariate(v);
        let gc = g.to_univariate(v);
        let dg = gc.len() - 1;
        let lg = gc[dg].clone();
        while r.len() > dg && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - dg;
            let mut next: Vec<Poly> = r.iter().map(|c| c * &lg).collect();
            for (k, c) in gc.iter().enumerate() {
                next[k + shift] = &next[k + shift] - &(c * &lr);
            }
            while matches!(next.last(), Some(c) if c.is_zero()) {
                next.pop();
            }
            r = next;
        }
        Poly::from_univariate(&r, v)
    }

    pub fn lcm(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = Poly::gcd(a, b);
        (&a.div_exact(&g).expect("gcd divides") * b).monic()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut p = big.clone();
        for (m, c) in &small.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut acc: BTreeMap<Mono, Q> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { terms: acc }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Ring for Poly {
    fn rzero() -> Self {
        Poly::zero()
    }
    fn rone() -> Self {
        Poly::one()
    }
    fn ris_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_q(q: &Q) -> Self {
        Poly::constant(q.clone())
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::qi;

    fn z(i: usize) -> Poly {
        Poly::var(i)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(qi(n))
    }

    #[test]
    fn gcd_of_products() {
        let f = &(&z(0) - &c(1)) * &(&z(1) + &z(0));
        let g = &(&z(0) - &c(1)) * &(&z(1) - &c(2));
        assert_eq!(Poly::gcd(&f, &g), &z(0) - &c(1));
        let h = &(&z(0) * &z(1)) + &c(1);
        assert_eq!(Poly::gcd(&f, &h), Poly::one());
    }

    #[test]
    fn gcd_variable_only_on_one_side() {
        // (z1 - 1) * (t^2 + z1 t + 1) against (z1 - 1)^2.
        let t = z(1);
        let a = &(&z(0) - &c(1)) * &(&(&t * &t) + &(&(&z(0) * &t) + &c(1)));
        let b = (&z(0) - &c(1)).pow(2);
        assert_eq!(Poly::gcd(&a, &b), &z(0) - &c(1));
    }

    #[test]
    fn exact_division_detects_non_divisors() {
        let a = &(&z(0) * &z(0)) - &c(1);
        assert_eq!(a.div_exact(&(&z(0) - &c(1))), Some(&z(0) + &c(1)));
        assert_eq!(a.div_exact(&(&z(0) - &c(2))), None);
    }

    #[test]
    fn partial_product_rule() {
        let f = &z(0) * &z(1);
        assert_eq!(f.partial(0), z(1));
        assert_eq!(f.partial(1), z(0));
    }

    #[test]
    fn lcm_of_coprime_is_product() {
        let a = z(0);
        let b = &c(1) - &z(0);
        assert_eq!(Poly::lcm(&a, &b), (&z(0) * &(&z(0) - &c(1))).monic());
    }
}
