use super::forms::{Differential, OneForm};
use super::mono::Mono;
use super::parse::VarNames;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::rational::{Ring, Q};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Order marker for a series that is exact (a polynomial known to every
/// degree). Constants built through [`Ring::from_q`] carry it so they never
/// lower the precision of the series they meet.
pub const EXACT: usize = usize::MAX;

/// Multivariate power series known modulo total degree `order`.
///
/// No term of total degree `>= order` is stored. Binary operations work at the
/// smaller of the two orders.
#[derive(Clone, Debug)]
pub struct TruncSeries {
    order: usize,
    terms: BTreeMap<Mono, Q>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries { order, terms: BTreeMap::new() }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Q::one(), order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        Self::from_terms(order, [(Mono::one(), c)])
    }

    pub fn var(i: usize, order: usize) -> Self {
        Self::from_terms(order, [(Mono::var(i), Q::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, Q)>>(order: usize, it: I) -> Self {
        let mut s = Self::zero(order);
        for (m, c) in it {
            s.add_term(m, c);
        }
        s
    }

    pub fn from_poly(p: &Poly, order: usize) -> Self {
        Self::from_terms(order, p.terms().iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Univariate series from its coefficient list, index k holding t^k.
    pub fn from_coeffs(coeffs: &[Q], order: usize) -> Self {
        Self::from_terms(order, coeffs.iter().enumerate().map(|(k, c)| (Mono::from_exps(vec![k as u32]), c.clone())))
    }

    /// Univariate coefficient list of length `order`.
    pub fn coeffs(&self) -> Vec<Q> {
        let n = if self.order == EXACT { self.terms.keys().map(|m| m.degree() as usize + 1).max().unwrap_or(0) } else { self.order };
        (0..n).map(|k| self.coeff(&Mono::from_exps(vec![k as u32]))).collect()
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() || (m.degree() as usize) >= self.order {
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

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Q> {
        &self.terms
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Mono::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest total degree present, `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncSeries { order, terms: self.terms.iter().filter(|(m, _)| (m.degree() as usize) < order).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        TruncSeries { order: self.order, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.truncate(o.order);
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.truncate(o.order);
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncSeries { order: self.order, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut acc: BTreeMap<Mono, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree() as usize;
            if da >= order {
                break;
            }
            for (mb, cb) in &o.terms {
                if da + mb.degree() as usize >= order {
                    break;
                }
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncSeries { order, terms: acc }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; `None` when the constant term vanishes.
    pub fn inv(&self) -> Option<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return None;
        }
        if self.order == EXACT {
            if self.terms.len() == 1 {
                return Some(Self::constant(c0.recip(), EXACT));
            }
            return None;
        }
        // Newton iteration y <- y (2 - x y), doubling the precision each step.
        let mut y = Self::constant(c0.recip(), 1);
        let mut prec = 1;
        while prec < self.order {
            prec = (2 * prec).min(self.order);
            let x = self.truncate(prec);
            let y_ext = TruncSeries { order: prec, terms: y.terms.clone() };
            let two = Self::constant(Q::from_integer(BigInt::from(2)), prec);
            y = y_ext.mul(&two.sub(&x.mul(&y_ext)));
        }
        Some(y)
    }

    pub fn partial(&self, i: usize) -> Self {
        let order = if self.order == EXACT { EXACT } else { self.order.saturating_sub(1) };
        let mut out = Self::zero(order);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                out.add_term(m.with_exp(i, e - 1), c * Q::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Antiderivative in variable `i` with no term independent of `t_i`.
    pub fn integrate(&self, i: usize) -> Self {
        let order = if self.order == EXACT { EXACT } else { self.order + 1 };
        let mut out = Self::zero(order);
        for (m, c) in &self.terms {
            let e = m.exp(i) + 1;
            out.add_term(m.with_exp(i, e), c / Q::from_integer(BigInt::from(e)));
        }
        out
    }

    /// The primitive vanishing at the origin of a closed 1-form with series
    /// coefficients. The monomial t^a in the j-th coefficient contributes
    /// t_j t^a / (|a| + 1); closedness is not checked here.
    pub fn radial_integral(form: &[TruncSeries]) -> Self {
        let order = form.iter().map(|s| s.order).min().unwrap_or(EXACT);
        let order = if order == EXACT { EXACT } else { order + 1 };
        let mut out = Self::zero(order);
        for (j, s) in form.iter().enumerate() {
            for (m, c) in &s.terms {
                let d = Q::from_integer(BigInt::from(m.degree() + 1));
                out.add_term(m.mul(&Mono::var(j)), c / d);
            }
        }
        out
    }

    /// Substitutes series without constant term for the variables.
    pub fn compose(&self, args: &[TruncSeries]) -> Self {
        let order = args.iter().map(|a| a.order).min().unwrap_or(EXACT).min(self.order);
        let mut powers: Vec<Vec<TruncSeries>> = args.iter().map(|_| vec![Self::one(order)]).collect();
        let mut acc = Self::zero(order);
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone(), order);
            for (i, &e) in m.exps().iter().enumerate() {
                let e = e as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&args[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes variable `i` to `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Self {
        Self::from_terms(self.order, self.terms.iter().map(|(m, c)| (m.remap(map), c.clone())))
    }

    /// Ascending total degree, and within a degree the larger monomial first.
    pub fn fmt(&self, vars: &VarNames) -> String {
        let mut by_deg: BTreeMap<u32, Vec<(&Mono, &Q)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_deg.entry(m.degree()).or_default().push((m, c));
        }
        let items: Vec<(&Mono, &Q)> = by_deg.into_values().flat_map(|v| v.into_iter().rev()).collect();
        vars.fmt_terms(items.into_iter())
    }
}

impl PartialEq for TruncSeries {
    fn eq(&self, o: &Self) -> bool {
        let n = self.order.min(o.order);
        let a = self.terms.iter().filter(|(m, _)| (m.degree() as usize) < n);
        let b = o.terms.iter().filter(|(m, _)| (m.degree() as usize) < n);
        a.eq(b)
    }
}

impl Ring for TruncSeries {
    fn rzero() -> Self {
        TruncSeries::zero(EXACT)
    }
    fn rone() -> Self {
        TruncSeries::one(EXACT)
    }
    fn ris_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_q(q: &Q) -> Self {
        TruncSeries::constant(q.clone(), EXACT)
    }
    fn radd(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn rsub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn rmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn rneg(&self) -> Self {
        self.neg()
    }
    fn rscale(&self, c: &Q) -> Self {
        self.scale(c)
    }
}

impl Differential for TruncSeries {
    fn partial(&self, i: usize) -> Self {
        TruncSeries::partial(self, i)
    }
}

impl RatFunc {
    /// Substitutes series for the variables. `None` when the denominator's
    /// substituted series has zero constant term.
    pub fn eval_series(&self, args: &[TruncSeries]) -> Option<TruncSeries> {
        let n = self.num().eval_ring(args);
        if self.is_polynomial() {
            return Some(n.scale(&self.den().constant_term().recip()));
        }
        let d = self.den().eval_ring(args);
        Some(n.mul(&d.inv()?))
    }
}

/// Taylor expansion of `f` in t_i = z_i - base_i, exact below total degree
/// `order`.
pub fn jet_expand(f: &RatFunc, base: &[Q], order: usize) -> Result<TruncSeries> {
    let args = shifted_vars(base, order);
    f.eval_series(&args).ok_or_else(|| Error::PoleAtBase(format!("denominator vanishes at base {}", fmt_point(base))))
}

/// Coefficient-wise [`jet_expand`] of a 1-form; the differentials dz_i and
/// dt_i coincide.
pub fn jet_expand_form(w: &OneForm<RatFunc>, base: &[Q], order: usize) -> Result<OneForm<TruncSeries>> {
    let c = w.c.iter().map(|f| jet_expand(f, base, order)).collect::<Result<Vec<_>>>()?;
    Ok(OneForm { c })
}

fn shifted_vars(base: &[Q], order: usize) -> Vec<TruncSeries> {
    base.iter()
        .enumerate()
        .map(|(i, b)| {
            let mut s = TruncSeries::var(i, order);
            s.add_term(Mono::one(), b.clone());
            s
        })
        .collect()
}

fn fmt_point(p: &[Q]) -> String {
    let v: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", v.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::{parse_ratfunc, VarNames};
    use crate::exactalg::rational::{q, qi};

    #[test]
    fn inverse_of_shifted_variable_is_geometric() {
        let v = VarNames::new(&["z"]);
        let f = parse_ratfunc("1/z", &v).unwrap();
        let s = jet_expand(&f, &[q(1, 2)], 4).unwrap();
        // 1/(1/2 + t) = 2 sum (-2t)^k
        let expect: Vec<Q> = (0..4).map(|k| qi(2) * qi(-2).pow(k)).collect();
        assert_eq!(s.coeffs(), expect);
        assert_eq!(s.fmt(&VarNames::new(&["t"])), "2 - 4 * t + 8 * t^2 - 16 * t^3");
    }

    #[test]
    fn pole_at_base_is_reported() {
        let v = VarNames::new(&["z"]);
        let f = parse_ratfunc("1/z", &v).unwrap();
        assert!(matches!(jet_expand(&f, &[qi(0)], 3), Err(Error::PoleAtBase(_))));
        let id = parse_ratfunc("z", &v).unwrap();
        assert_eq!(jet_expand(&id, &[qi(0)], 3).unwrap(), TruncSeries::var(0, 3));
    }

    #[test]
    fn truncation_is_consistent() {
        let v = VarNames::new(&["z1", "z2"]);
        let f = parse_ratfunc("(z1 + z2^2)/(1 - z1*z2 + z2)", &v).unwrap();
        let b = [q(1, 3), q(-2, 5)];
        let big = jet_expand(&f, &b, 9).unwrap();
        for m in 1..9 {
            assert_eq!(big.truncate(m), jet_expand(&f, &b, m).unwrap());
        }
    }

    #[test]
    fn newton_inverse_matches_product() {
        let s = TruncSeries::from_coeffs(&[qi(3), qi(1), q(-1, 2), qi(7)], 11);
        let i = s.inv().unwrap();
        assert_eq!(s.mul(&i), TruncSeries::one(11));
    }

    #[test]
    fn radial_integral_inverts_gradient() {
        let v = VarNames::new(&["z1", "z2"]);
        let f = parse_ratfunc("z1*z2 + 3*z1^2 - z2^3 + z1^2*z2^2", &v).unwrap();
        let s = jet_expand(&f, &[qi(0), qi(0)], 6).unwrap();
        let grad = [s.partial(0), s.partial(1)];
        assert_eq!(TruncSeries::radial_integral(&grad), s);
    }
}
