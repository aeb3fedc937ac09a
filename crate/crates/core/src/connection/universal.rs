use super::schain::{build_s_chain, SChain};
use super::{Connection, FormMatrix};
use crate::error::{Error, Result};
use crate::exactalg::{parse_rational, FormSpace, OneAtom, OneForm, Poly, RatFunc, Ring, TwoForm, VarNames, Q};
use crate::liecore::words::Word;
use crate::liecore::{LieAlgebra, LieAlgebraSpec, Quotient, Uea};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// A product of punctured projective lines. Each factor lists its finite
/// punctures; the point at infinity is always removed.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub factors: Vec<Vec<Q>>,
}

impl Chart {
    pub fn line(punctures: Vec<Q>) -> Self {
        Chart { factors: vec![punctures] }
    }

    pub fn product(factors: Vec<Vec<Q>>) -> Self {
        Chart { factors }
    }

    /// P¹ minus {0, 1, ∞}, or its k-fold power.
    pub fn thrice_punctured(k: usize) -> Self {
        Chart { factors: vec![vec![Q::zero(), Q::one()]; k] }
    }

    /// Parses "p1:0,1", "p1:0,1,-1 x p1:0,1" or "(p1:0,1)^2".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            let (inner, pow) = rest
                .split_once(")^")
                .ok_or_else(|| Error::Parse(format!("bad chart {s:?}")))?;
            let k: usize = pow.trim().parse().map_err(|_| Error::Parse(format!("bad chart power in {s:?}")))?;
            let base = Chart::parse(inner)?;
            if base.factors.len() != 1 || k == 0 {
                return Err(Error::Parse(format!("bad chart power in {s:?}")));
            }
            return Ok(Chart { factors: vec![base.factors[0].clone(); k] });
        }
        let mut factors = Vec::new();
        for part in s.split(" x ") {
            let body = part
                .trim()
                .strip_prefix("p1:")
                .ok_or_else(|| Error::Parse(format!("chart factor {part:?} must look like p1:a,b,...")))?;
            let pts = body.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>()?;
            factors.push(pts);
        }
        Ok(Chart { factors })
    }

    pub fn nvars(&self) -> usize {
        self.factors.len()
    }

    pub fn var_names(&self) -> VarNames {
        if self.factors.len() == 1 {
            VarNames::new(&["z"])
        } else {
            VarNames::indexed("z", self.factors.len())
        }
    }

    /// (factor, puncture) for each generator, factor by factor.
    pub fn generators(&self) -> Vec<(usize, Q)> {
        self.factors.iter().enumerate().flat_map(|(f, ps)| ps.iter().map(move |a| (f, a.clone()))).collect()
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::UnsupportedChart("a chart needs at least one factor".into()));
        }
        for ps in &self.factors {
            if ps.is_empty() {
                return Err(Error::UnsupportedChart("each factor needs a finite puncture".into()));
            }
            for (i, a) in ps.iter().enumerate() {
                if ps[..i].contains(a) {
                    return Err(Error::UnsupportedChart(format!("puncture {a} is repeated")));
                }
            }
            if n >= 2 && ps.len() < 2 {
                return Err(Error::UnsupportedChart(format!(
                    "P¹ minus {} points is not hyperbolic, depth {n} needs at least three punctures",
                    ps.len() + 1
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|ps| format!("p1:{}", ps.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// The universal n-unipotent connection on a chart, written on the normal-word
/// basis of the truncated enveloping algebra.
#[derive(Clone, Debug)]
pub struct UniversalConnection {
    pub chart: Chart,
    pub depth: usize,
    pub space: FormSpace,
    pub alg: Arc<LieAlgebra>,
    pub uea: Arc<Uea>,
    /// Normal words indexing the rows and columns of the connection matrix.
    pub words: Vec<Word>,
    /// ω coefficient of each Lie basis element; zero beyond degree 1.
    pub omega: Vec<OneForm<RatFunc>>,
    /// Coordinates of each generator's dlog atom in `space`.
    pub atoms: Vec<usize>,
    pub connection: Connection,
    pub chain: SChain,
}

impl UniversalConnection {
    /// ω coefficients of the generators.
    pub fn generator_forms(&self) -> Vec<OneForm<RatFunc>> {
        (0..self.alg.gens()).map(|k| self.omega[self.alg.generator(k)].clone()).collect()
    }

    pub fn word_index(&self, w: &[u8]) -> Option<usize> {
        self.words.iter().position(|u| u.as_slice() == w)
    }
}

/// dz/z for the puncture 0 and dz/(a − z) otherwise, on coordinate i.
fn dlog_atom(chart_vars: &VarNames, i: usize, a: &Q) -> (String, OneForm<RatFunc>) {
    let n = chart_vars.len();
    let z = chart_vars.name(i);
    if a.is_zero() {
        let f = RatFunc::new(Poly::one(), Poly::var(i)).expect("nonzero denominator");
        (format!("d{z}/{z}"), OneForm::basis(n, i, f))
    } else {
        let den = &Poly::constant(a.clone()) - &Poly::var(i);
        let f = RatFunc::new(Poly::one(), den).expect("nonzero denominator");
        (format!("d{z}/({a}-{z})"), OneForm::basis(n, i, f))
    }
}

/// The declared form space of a chart: polynomials of degree 1 and 2 as
/// function atoms, the dlog atoms, and wedges of dlog atoms on distinct
/// factors as 2-form atoms.
pub fn chart_space(chart: &Chart) -> Result<FormSpace> {
    let vars = chart.var_names();
    let n = chart.nvars();
    let mut fns = Vec::new();
    for i in 0..n {
        fns.push((vars.name(i), RatFunc::var(i)));
    }
    for i in 0..n {
        for j in i..n {
            let f = RatFunc::var(i).rmul(&RatFunc::var(j));
            let name = if i == j { format!("{}^2", vars.name(i)) } else { format!("{}*{}", vars.name(i), vars.name(j)) };
            fns.push((name, f));
        }
    }
    let gens = chart.generators();
    let ones: Vec<(String, OneForm<RatFunc>)> = gens.iter().map(|(f, a)| dlog_atom(&vars, *f, a)).collect();
    let mut twos: Vec<(String, TwoForm<RatFunc>)> = Vec::new();
    for (p, (fa, _)) in gens.iter().enumerate() {
        for (q, (fb, _)) in gens.iter().enumerate().skip(p + 1) {
            if fa != fb {
                twos.push((format!("{}^{}", ones[p].0, ones[q].0), ones[p].1.wedge(&ones[q].1)));
            }
        }
    }
    let ones = ones.into_iter().map(|(s, w)| (s, OneAtom::Concrete(w))).collect();
    FormSpace::new(vars, fns, ones, twos)
}

/// Lie algebra of a chart: free on one factor, and the quotient by
/// commutators of generators from distinct factors on a product.
pub fn chart_lie_spec(chart: &Chart, n: usize) -> LieAlgebraSpec {
    let gens = chart.generators();
    let mut rels = Vec::new();
    for (a, (fa, _)) in gens.iter().enumerate() {
        for (b, (fb, _)) in gens.iter().enumerate().skip(a + 1) {
            if fa != fb {
                rels.push(format!("[x{},x{}]", a + 1, b + 1));
            }
        }
    }
    let q = if rels.is_empty() { Quotient::free() } else { Quotient::ideal(&rels) };
    LieAlgebraSpec::new(gens.len(), n, q)
}

/// Builds the universal depth-n connection d + Λ with Λ = −L_ω, left
/// multiplication by −Σ x_k ω_k on the truncated enveloping algebra. Its
/// horizontal sections G satisfy dG = ωG.
pub fn build_universal(chart: &Chart, n: usize) -> Result<UniversalConnection> {
    if n == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    chart.validate(n)?;
    let space = chart_space(chart)?;
    let alg = Arc::new(LieAlgebra::new(chart_lie_spec(chart, n))?);
    let uea = Arc::new(Uea::new(alg.clone())?);
    let words = uea.normal_words();
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let nv = chart.nvars();
    let m = alg.gens();
    let gen_forms: Vec<OneForm<RatFunc>> = (0..m)
        .map(|k| match &space.one_atoms[k].1 {
            OneAtom::Concrete(w) => w.clone(),
            OneAtom::Abstract { .. } => unreachable!("chart atoms are concrete"),
        })
        .collect();
    let mut omega = vec![OneForm::zero(nv); alg.dim()];
    for (k, w) in gen_forms.iter().enumerate() {
        omega[alg.generator(k)] = w.clone();
    }
    let mut blocks = vec![0usize; n + 1];
    for w in &words {
        blocks[w.len()] += 1;
    }
    let mut lam = FormMatrix::zeros(words.len(), nv);
    for (c, w) in words.iter().enumerate() {
        let wu = crate::liecore::UeaElement::<Q> { c: [(w.clone(), Q::one())].into_iter().collect() };
        for (k, form) in gen_forms.iter().enumerate() {
            let prod = uea.mul(&uea.generator::<Q>(k), &wu);
            for (u, x) in &prod.c {
                let r = index[u];
                let v = lam.get(r, c).sub(&form.scale(x));
                lam.set(r, c, v);
            }
        }
    }
    let connection = Connection::new(blocks, lam)?;
    let s1: Vec<Vec<Q>> = (0..m).map(|k| (0..m).map(|j| if j == k { Q::one() } else { Q::zero() }).collect()).collect();
    let chain = build_s_chain(&space, &s1, n)?;
    Ok(UniversalConnection { chart: chart.clone(), depth: n, space, alg, uea, words, omega, atoms: (0..m).collect(), connection, chain })
}

#[cfg(test)]
mod tests {
    use super::super::{reduce_to_reduced_form, s_membership};
    use super::*;
    use crate::exactalg::{parse_ratfunc, qi};

    #[test]
    fn thrice_punctured_line_depth_two() {
        let u = build_universal(&Chart::thrice_punctured(1), 2).unwrap();
        assert_eq!(u.connection.blocks, vec![1, 2, 4]);
        let v = VarNames::new(&["z"]);
        assert_eq!(u.generator_forms()[0].c, vec![parse_ratfunc("1/z", &v).unwrap()]);
        assert_eq!(u.generator_forms()[1].c, vec![parse_ratfunc("1/(1-z)", &v).unwrap()]);
        assert!(u.connection.is_flat());
        assert!(s_membership(&u.connection, &u.space, &u.chain).unwrap());
        // x1·x2 is reached from x2 by −dz/z
        let r = u.word_index(&[0, 1]).unwrap();
        let c = u.word_index(&[1]).unwrap();
        assert_eq!(u.connection.lambda.get(r, c).c, vec![parse_ratfunc("-1/z", &v).unwrap()]);
        assert!(u.omega[2..].iter().all(|w| w.is_zero()));
    }

    #[test]
    fn product_chart_depth_one_has_four_atoms() {
        let u = build_universal(&Chart::thrice_punctured(2), 1).unwrap();
        assert_eq!(u.connection.blocks, vec![1, 4]);
        assert_eq!(u.space.n_one(), 4);
        assert!(u.connection.is_flat());
    }

    #[test]
    fn product_chart_is_flat_and_reduced() {
        let u = build_universal(&Chart::thrice_punctured(2), 3).unwrap();
        assert!(u.connection.is_flat());
        assert!(s_membership(&u.connection, &u.space, &u.chain).unwrap());
        let (red, g) = reduce_to_reduced_form(&u.connection, &u.space, &u.chain).unwrap();
        assert!(g.is_identity());
        assert_eq!(red.connection, u.connection);
    }

    #[test]
    fn truncation_gives_lower_depth() {
        for chart in [Chart::thrice_punctured(1), Chart::thrice_punctured(2)] {
            let e3 = build_universal(&chart, 3).unwrap();
            for k in 1..3 {
                let ek = build_universal(&chart, k).unwrap();
                assert_eq!(e3.connection.truncate_blocks(k), ek.connection);
            }
        }
    }

    #[test]
    fn twice_punctured_line_is_rejected_beyond_depth_one() {
        let c = Chart::line(vec![qi(0)]);
        assert!(build_universal(&c, 1).is_ok());
        assert!(matches!(build_universal(&c, 2), Err(Error::UnsupportedChart(_))));
    }

    #[test]
    fn chart_strings_round_trip() {
        let c = Chart::parse("p1:0,1,-1/2 x p1:0,1").unwrap();
        assert_eq!(c.factors[0][2], crate::exactalg::q(-1, 2));
        assert_eq!(Chart::parse(&c.to_string()).unwrap(), c);
        assert_eq!(Chart::parse("(p1:0,1)^2").unwrap(), Chart::thrice_punctured(2));
        assert!(Chart::parse("a1:0").is_err());
    }
}
