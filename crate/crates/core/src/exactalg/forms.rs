use super::ratfunc::RatFunc;
use super::rational::{Ring, Q};
use super::series::TruncSeries;
use crate::error::{Error, Result};

/// A coefficient ring with partial derivatives in numbered variables.
pub trait Differential: Ring {
    fn partial(&self, i: usize) -> Self;
}

/// 1-form Σ c_i dz_i on a chart with `c.len()` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm<R> {
    pub c: Vec<R>,
}

/// 2-form Σ_{i<j} c_ij dz_i∧dz_j, pairs in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm<R> {
    pub n: usize,
    pub c: Vec<R>,
}

/// 3-form, used only to check that declared 2-forms are closed.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm<R> {
    pub n: usize,
    pub c: Vec<R>,
}

/// Position of the pair (i, j), i < j, among the n(n-1)/2 pairs.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                v.push((i, j, k));
            }
        }
    }
    v
}

impl<R: Ring> OneForm<R> {
    pub fn zero(n: usize) -> Self {
        OneForm { c: vec![R::rzero(); n] }
    }

    /// The differential dz_i times `f`.
    pub fn basis(n: usize, i: usize, f: R) -> Self {
        let mut w = Self::zero(n);
        w.c[i] = f;
        w
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.ris_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        OneForm { c: self.c.iter().zip(&o.c).map(|(a, b)| a.radd(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        OneForm { c: self.c.iter().zip(&o.c).map(|(a, b)| a.rsub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        OneForm { c: self.c.iter().map(|a| a.rneg()).collect() }
    }

    pub fn scale(&self, q: &Q) -> Self {
        OneForm { c: self.c.iter().map(|a| a.rscale(q)).collect() }
    }

    pub fn mul_fn(&self, f: &R) -> Self {
        OneForm { c: self.c.iter().map(|a| a.rmul(f)).collect() }
    }

    pub fn wedge(&self, o: &Self) -> TwoForm<R> {
        let n = self.c.len();
        let c = pairs(n).into_iter().map(|(i, j)| self.c[i].rmul(&o.c[j]).rsub(&self.c[j].rmul(&o.c[i]))).collect();
        TwoForm { n, c }
    }

    /// Widens to `n` coordinates, the new ones carrying zero coefficients.
    pub fn extend(&self, n: usize) -> Self {
        let mut c = self.c.clone();
        c.resize(n, R::rzero());
        OneForm { c }
    }
}

impl<R: Differential> OneForm<R> {
    pub fn d0(f: &R, n: usize) -> Self {
        OneForm { c: (0..n).map(|i| f.partial(i)).collect() }
    }

    pub fn d(&self) -> TwoForm<R> {
        let n = self.c.len();
        let c = pairs(n).into_iter().map(|(i, j)| self.c[j].partial(i).rsub(&self.c[i].partial(j))).collect();
        TwoForm { n, c }
    }
}

impl<R: Ring> TwoForm<R> {
    pub fn zero(n: usize) -> Self {
        TwoForm { n, c: vec![R::rzero(); n * n.saturating_sub(1) / 2] }
    }

    /// Coefficient of dz_i∧dz_j for any i, j.
    pub fn get(&self, i: usize, j: usize) -> R {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.c[pair_index(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => self.c[pair_index(self.n, j, i)].rneg(),
            std::cmp::Ordering::Equal => R::rzero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.ris_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        TwoForm { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a.radd(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        TwoForm { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a.rsub(b)).collect() }
    }

    pub fn scale(&self, q: &Q) -> Self {
        TwoForm { n: self.n, c: self.c.iter().map(|a| a.rscale(q)).collect() }
    }

    pub fn mul_fn(&self, f: &R) -> Self {
        TwoForm { n: self.n, c: self.c.iter().map(|a| a.rmul(f)).collect() }
    }
}

impl<R: Differential> TwoForm<R> {
    pub fn d(&self) -> ThreeForm<R> {
        let n = self.n;
        let c = triples(n)
            .into_iter()
            .map(|(i, j, k)| self.get(j, k).partial(i).rsub(&self.get(i, k).partial(j)).radd(&self.get(i, j).partial(k)))
            .collect();
        ThreeForm { n, c }
    }
}

impl<R: Ring> ThreeForm<R> {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.ris_zero())
    }
}

/// Pulls a 1-form back along a map given by rational functions of
/// `nparams` parameters.
pub fn pullback(w: &OneForm<RatFunc>, map: &[RatFunc], nparams: usize) -> Result<OneForm<RatFunc>> {
    if map.len() != w.c.len() {
        return Err(Error::DimensionMismatch(format!("form on {} coordinates, map has {} components", w.c.len(), map.len())));
    }
    let mut out = OneForm::<RatFunc>::zero(nparams);
    for (i, ci) in w.c.iter().enumerate() {
        if ci.ris_zero() {
            continue;
        }
        let f = ci.compose(map).ok_or_else(|| Error::PoleOnV(format!("coefficient {i} has a pole along the map")))?;
        for k in 0..nparams {
            let dk = map[i].partial(k);
            if !dk.ris_zero() {
                out.c[k] = &out.c[k] + &(&f * &dk);
            }
        }
    }
    Ok(out)
}

/// Pulls a 1-form back along a map given by power series in `nparams`
/// parameters.
pub fn pullback_series(w: &OneForm<RatFunc>, map: &[TruncSeries], nparams: usize) -> Result<OneForm<TruncSeries>> {
    if map.len() != w.c.len() {
        return Err(Error::DimensionMismatch(format!("form on {} coordinates, map has {} components", w.c.len(), map.len())));
    }
    let mut out = OneForm::<TruncSeries>::zero(nparams);
    for (i, ci) in w.c.iter().enumerate() {
        if ci.ris_zero() {
            continue;
        }
        let f = ci.eval_series(map).ok_or_else(|| Error::PoleOnV(format!("coefficient {i} has a pole at the base of the map")))?;
        for k in 0..nparams {
            let dk = map[i].partial(k);
            if !dk.ris_zero() {
                out.c[k] = out.c[k].add(&f.mul(&dk));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::{parse_ratfunc, VarNames};

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s, &VarNames::new(&["z1", "z2", "z3"])).unwrap()
    }

    #[test]
    fn product_rule_and_dd_zero() {
        let f = rf("z1*z2");
        let w = OneForm::d0(&f, 2);
        assert_eq!(w.c, vec![rf("z2"), rf("z1")]);
        assert!(w.d().is_zero());
        let g = rf("z1^2*z3/(1 - z2)");
        let a = OneForm::d0(&g, 3);
        assert!(a.d().is_zero());
        let b = OneForm { c: vec![rf("z2*z3"), rf("z1/(1-z3)"), rf("z1^2")] };
        assert!(b.d().d().is_zero());
    }

    #[test]
    fn wedge_alternates() {
        let a = OneForm { c: vec![rf("1/z1"), rf("z2")] };
        let b = OneForm { c: vec![rf("z1"), rf("1/(1-z2)")] };
        assert!(a.wedge(&a).is_zero());
        assert_eq!(a.wedge(&b), b.wedge(&a).scale(&(-crate::exactalg::rational::qi(1))));
        let dz1 = OneForm::basis(2, 0, rf("1/z1"));
        let dz2 = OneForm::basis(2, 1, rf("1/z2"));
        assert_eq!(dz1.wedge(&dz2).c, vec![rf("1/(z1*z2)")]);
    }

    #[test]
    fn pullback_to_antidiagonal() {
        // z2 = 1 - z1 turns dz2/z2 into -dz/(1-z).
        let w = OneForm { c: vec![rf("0"), rf("1/z2")] };
        let map = [rf("z1"), rf("1 - z1")];
        let p = pullback(&w, &map, 1).unwrap();
        assert_eq!(p.c, vec![rf("-1/(1-z1)")]);
    }
}
