//! Restriction of 1-forms to parameterized subvarieties of L × Z, jet and
//! function-field ranks, the depth-1 descent for relations among the θ_i, and
//! colinearity loci.

mod descent;

pub use descent::{descent_depth1, unlikely_report, CertificateKind, DependencyCertificate, UnlikelyReport};

use crate::error::{Error, Result};
use crate::exactalg::{
    jet_expand_form, parse_ratfunc, pullback, pullback_series, OneForm, Poly, RatFunc, Ring, TruncSeries, VarNames, Q,
};
use crate::linalg::Matrix;
use num_traits::{One, Zero};
use serde_json::Value;
use std::collections::BTreeMap;

/// How the ambient coordinates depend on the parameters.
#[derive(Clone, Debug)]
pub enum Parametrization {
    /// Rational functions of the parameters, expanded at the base parameter
    /// point when jets are needed.
    Rational(Vec<RatFunc>),
    /// Formal series in parameters centred at the origin.
    Series(Vec<TruncSeries>),
}

/// A subvariety V of the ambient chart given by a parameterization near a
/// smooth point, with optional polynomial equations known to cut it out.
#[derive(Clone, Debug)]
pub struct FormalSubvariety {
    pub ambient: VarNames,
    pub params: VarNames,
    pub base: Vec<Q>,
    pub map: Parametrization,
    pub ideal: Vec<Poly>,
}

impl FormalSubvariety {
    pub fn rational(ambient: VarNames, params: VarNames, base: Vec<Q>, map: Vec<RatFunc>, ideal: Vec<Poly>) -> Result<Self> {
        if map.len() != ambient.len() {
            return Err(Error::DimensionMismatch(format!("map has {} components for {} coordinates", map.len(), ambient.len())));
        }
        if base.len() != params.len() {
            return Err(Error::DimensionMismatch(format!("base has {} entries for {} parameters", base.len(), params.len())));
        }
        for (i, f) in map.iter().enumerate() {
            if f.eval(&base).is_none() {
                return Err(Error::PoleOnV(format!("coordinate {} has a pole at the base parameter", ambient.name(i))));
            }
        }
        for p in &ideal {
            let f = RatFunc::from_poly(p.clone())
                .compose(&map)
                .ok_or_else(|| Error::PoleOnV("ideal generator has a pole along the map".into()))?;
            if !f.ris_zero() {
                return Err(Error::InvalidInput(format!("ideal generator {} does not vanish on the parameterization", ambient.fmt_poly(p))));
            }
        }
        Ok(FormalSubvariety { ambient, params, base, map: Parametrization::Rational(map), ideal })
    }

    pub fn series(ambient: VarNames, params: VarNames, map: Vec<TruncSeries>, ideal: Vec<Poly>) -> Result<Self> {
        if map.len() != ambient.len() {
            return Err(Error::DimensionMismatch(format!("map has {} components for {} coordinates", map.len(), ambient.len())));
        }
        for p in &ideal {
            let f = p.eval_ring(&map);
            if !f.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "ideal generator {} does not vanish on the parameterization to truncation",
                    ambient.fmt_poly(p)
                )));
            }
        }
        let base = vec![Q::zero(); params.len()];
        Ok(FormalSubvariety { ambient, params, base, map: Parametrization::Series(map), ideal })
    }

    /// The point V = {p}.
    pub fn point(ambient: VarNames, p: &[Q]) -> Result<Self> {
        let map = p.iter().map(|c| RatFunc::constant(c.clone())).collect();
        Self::rational(ambient, VarNames::new::<&str>(&[]), Vec::new(), map, Vec::new())
    }

    /// The whole ambient space, parameterized by itself around `base`.
    pub fn whole(ambient: VarNames, base: Vec<Q>) -> Result<Self> {
        let map = (0..ambient.len()).map(RatFunc::var).collect();
        Self::rational(ambient.clone(), ambient, base, map, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient.len().saturating_sub(self.dim())
    }

    pub fn is_algebraic(&self) -> bool {
        matches!(self.map, Parametrization::Rational(_))
    }

    /// Ambient coordinates of the base point.
    pub fn base_point(&self) -> Vec<Q> {
        match &self.map {
            Parametrization::Rational(m) => m.iter().map(|f| f.eval(&self.base).expect("checked at construction")).collect(),
            Parametrization::Series(m) => m.iter().map(|s| s.constant_term()).collect(),
        }
    }

    /// Pulls back a function on the ambient chart. Only for rational maps.
    pub fn pull_function(&self, f: &RatFunc) -> Result<RatFunc> {
        match &self.map {
            Parametrization::Rational(m) => f.compose(m).ok_or_else(|| Error::PoleOnV("function has a pole along V".into())),
            Parametrization::Series(_) => Err(Error::InvalidInput("exact pullback needs a rational parameterization".into())),
        }
    }

    /// Reads {"ambient": [...], "params": [...], "base": [...], "map": [...],
    /// "ideal": [...], "kind": "rational" | "series", "order": N}. Series maps
    /// are polynomials truncated at `order`.
    pub fn from_json(v: &Value, ambient: Option<VarNames>) -> Result<Self> {
        let strs = |key: &str| -> Result<Vec<String>> {
            match v.get(key) {
                None => Ok(Vec::new()),
                Some(x) => x
                    .as_array()
                    .ok_or_else(|| Error::InvalidData(format!("\"{key}\" must be an array of strings")))?
                    .iter()
                    .map(|s| s.as_str().map(str::to_string).ok_or_else(|| Error::InvalidData(format!("\"{key}\" must be an array of strings"))))
                    .collect(),
            }
        };
        let ambient = match ambient {
            Some(a) => a,
            None => VarNames::new(&strs("ambient")?),
        };
        let params = VarNames::new(&strs("params")?);
        let map = strs("map")?.iter().map(|s| parse_ratfunc(s, &params)).collect::<Result<Vec<_>>>()?;
        let ideal = strs("ideal")?.iter().map(|s| crate::exactalg::parse_poly(s, &ambient)).collect::<Result<Vec<_>>>()?;
        match v.get("kind").and_then(Value::as_str).unwrap_or("rational") {
            "rational" => {
                let base = match v.get("base") {
                    None => vec![Q::zero(); params.len()],
                    Some(_) => strs("base")?.iter().map(|s| crate::exactalg::parse_rational(s)).collect::<Result<_>>()?,
                };
                Self::rational(ambient, params, base, map, ideal)
            }
            "series" => {
                let order = v.get("order").and_then(Value::as_u64).unwrap_or(8) as usize;
                let map = map
                    .iter()
                    .map(|f| {
                        if !f.is_polynomial() {
                            return Err(Error::InvalidData("series maps must be polynomials".into()));
                        }
                        Ok(TruncSeries::from_poly(&f.num().scale(&f.den().constant_term().recip()), order))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::series(ambient, params, map, ideal)
            }
            k => Err(Error::InvalidData(format!("unknown parameterization kind {k:?}"))),
        }
    }
}

/// Restrictions of a list of forms to V, as exact forms when V is algebraic
/// and as jets at the base parameter.
#[derive(Clone, Debug)]
pub struct RestrictedForms {
    pub exact: Option<Vec<OneForm<RatFunc>>>,
    pub jets: Vec<OneForm<TruncSeries>>,
    pub order: usize,
}

pub fn restrict_forms(forms: &[OneForm<RatFunc>], v: &FormalSubvariety, order: usize) -> Result<RestrictedForms> {
    let s = v.dim();
    for w in forms {
        if w.c.len() != v.ambient.len() {
            return Err(Error::DimensionMismatch(format!("form on {} coordinates, V lives in {}", w.c.len(), v.ambient.len())));
        }
    }
    match &v.map {
        Parametrization::Rational(m) => {
            let exact = forms.iter().map(|w| pullback(w, m, s)).collect::<Result<Vec<_>>>()?;
            let jets = exact
                .iter()
                .map(|w| {
                    jet_expand_form(w, &v.base, order).map_err(|e| match e {
                        Error::PoleAtBase(m) => Error::PoleOnV(m),
                        e => e,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(RestrictedForms { exact: Some(exact), jets, order })
        }
        Parametrization::Series(m) => {
            let jets = forms
                .iter()
                .map(|w| pullback_series(w, m, s).map(|p| OneForm { c: p.c.into_iter().map(|x| x.truncate(order)).collect() }))
                .collect::<Result<Vec<_>>>()?;
            Ok(RestrictedForms { exact: None, jets, order })
        }
    }
}

/// Q-linear rank of the jets of a list of forms, and a basis of the constant
/// relations among them.
#[derive(Clone, Debug, PartialEq)]
pub struct JetRank {
    pub order: usize,
    pub rank: usize,
    pub relations: Vec<Vec<Q>>,
}

fn jet_matrix(jets: &[OneForm<TruncSeries>], order: usize) -> Matrix<Q> {
    let mut cols: BTreeMap<(usize, crate::exactalg::Mono), usize> = BTreeMap::new();
    let mut rows: Vec<Vec<(usize, Q)>> = Vec::new();
    for w in jets {
        let mut row = Vec::new();
        for (j, s) in w.c.iter().enumerate() {
            for (m, c) in s.truncate(order).terms() {
                let n = cols.len();
                let k = *cols.entry((j, m.clone())).or_insert(n);
                row.push((k, c.clone()));
            }
        }
        rows.push(row);
    }
    let mut m = Matrix::zeros(jets.len(), cols.len());
    for (i, row) in rows.into_iter().enumerate() {
        for (k, c) in row {
            m.set(i, k, c);
        }
    }
    m
}

/// Rank of the jets of the forms truncated below total degree `order`.
pub fn jet_rank(jets: &[OneForm<TruncSeries>], order: usize) -> Result<JetRank> {
    if order < 2 {
        return Err(Error::InvalidInput("jet order must be at least 2".into()));
    }
    let m = jet_matrix(jets, order);
    let rank = m.rank();
    let relations = if m.ncols() == 0 {
        (0..jets.len()).map(|i| (0..jets.len()).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
    } else {
        m.transpose().kernel()
    };
    Ok(JetRank { order, rank, relations })
}

/// Checks Σ a_i w_i = 0 on the jets below `order`.
pub fn relation_holds(jets: &[OneForm<TruncSeries>], a: &[Q], order: usize) -> bool {
    let Some(w0) = jets.first() else { return true };
    let mut acc: Vec<TruncSeries> = vec![TruncSeries::zero(order); w0.c.len()];
    for (w, c) in jets.iter().zip(a) {
        for (x, s) in acc.iter_mut().zip(&w.c) {
            *x = x.add(&s.scale(c).truncate(order));
        }
    }
    acc.iter().all(|s| s.truncate(order).is_zero())
}

/// Rank of the restricted forms over the function field of V. Exact when V
/// is algebraic; otherwise the rank at the base parameter, a lower bound.
#[derive(Clone, Debug)]
pub struct FieldRank {
    pub rank: usize,
    pub exact: bool,
    /// Basis of the relations Σ a_i θ_i = 0 with a_i functions of the
    /// parameters; empty unless exact.
    pub relations: Vec<Vec<RatFunc>>,
}

pub fn function_field_rank(r: &RestrictedForms) -> FieldRank {
    match &r.exact {
        Some(forms) => {
            let s = forms.first().map(|w| w.c.len()).unwrap_or(0);
            if s == 0 {
                let relations =
                    (0..forms.len()).map(|i| (0..forms.len()).map(|j| if i == j { RatFunc::rone() } else { RatFunc::rzero() }).collect()).collect();
                return FieldRank { rank: 0, exact: true, relations };
            }
            let m = Matrix::from_rows(forms.iter().map(|w| w.c.clone()).collect(), s);
            let rank = m.rank();
            FieldRank { rank, exact: true, relations: m.transpose().kernel() }
        }
        None => {
            let s = r.jets.first().map(|w| w.c.len()).unwrap_or(0);
            let rows: Vec<Vec<Q>> = r.jets.iter().map(|w| w.c.iter().map(|x| x.constant_term()).collect()).collect();
            let rank = if s == 0 { 0 } else { Matrix::from_rows(rows, s).rank() };
            FieldRank { rank, exact: false, relations: Vec::new() }
        }
    }
}

/// Integer-primitive form of a polynomial with positive leading coefficient.
pub fn normalize_poly(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    p.scale(&p.rational_content().recip())
}

/// Equations of the locus where the given 1-forms are pointwise colinear:
/// numerators of all 2×2 minors of their coefficient matrix, normalized and
/// deduplicated. An empty list is the zero ideal, `[1]` the unit ideal.
pub fn colinearity_locus(forms: &[OneForm<RatFunc>]) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    let n = forms.first().map(|w| w.c.len()).unwrap_or(0);
    for a in 0..forms.len() {
        for b in a + 1..forms.len() {
            for i in 0..n {
                for j in i + 1..n {
                    let m = &(&forms[a].c[i] * &forms[b].c[j]) - &(&forms[a].c[j] * &forms[b].c[i]);
                    if m.ris_zero() {
                        continue;
                    }
                    let p = normalize_poly(m.num());
                    if p.is_constant() {
                        return vec![Poly::one()];
                    }
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{q, qi};

    fn z2() -> VarNames {
        VarNames::new(&["z1", "z2"])
    }

    fn rf(s: &str, v: &VarNames) -> RatFunc {
        parse_ratfunc(s, v).unwrap()
    }

    fn dlogs() -> Vec<OneForm<RatFunc>> {
        let v = z2();
        vec![
            OneForm { c: vec![rf("1/z1", &v), rf("0", &v)] },
            OneForm { c: vec![rf("1/(1-z1)", &v), rf("0", &v)] },
            OneForm { c: vec![rf("0", &v), rf("1/z2", &v)] },
            OneForm { c: vec![rf("0", &v), rf("1/(1-z2)", &v)] },
        ]
    }

    fn curve(map: [&str; 2]) -> FormalSubvariety {
        let s = VarNames::new(&["s"]);
        FormalSubvariety::rational(z2(), s.clone(), vec![q(1, 3)], map.iter().map(|m| rf(m, &s)).collect(), vec![]).unwrap()
    }

    #[test]
    fn restriction_examples() {
        let diag = curve(["s", "s"]);
        let f = &dlogs();
        let r = restrict_forms(&[f[0].sub(&f[2])], &diag, 4).unwrap();
        assert!(r.exact.unwrap()[0].is_zero());
        let anti = curve(["s", "1-s"]);
        let r = restrict_forms(&[f[2].clone()], &anti, 4).unwrap();
        assert_eq!(r.exact.unwrap()[0].c, vec![rf("-1/(1-s)", &VarNames::new(&["s"]))]);
        let pt = FormalSubvariety::point(z2(), &[q(1, 2), q(1, 3)]).unwrap();
        let r = restrict_forms(f, &pt, 4).unwrap();
        assert!(r.jets.iter().all(|w| w.c.is_empty()));
        assert_eq!(jet_rank(&r.jets, 4).unwrap().rank, 0);
    }

    #[test]
    fn jet_ranks_of_the_dlog_forms() {
        let f = dlogs();
        let diag = restrict_forms(&f, &curve(["s", "s"]), 4).unwrap();
        let jr = jet_rank(&diag.jets, 4).unwrap();
        assert_eq!((jr.rank, jr.relations.len()), (2, 2));
        let whole = FormalSubvariety::whole(z2(), vec![q(1, 2), q(1, 3)]).unwrap();
        let jr = jet_rank(&restrict_forms(&f, &whole, 4).unwrap().jets, 4).unwrap();
        assert_eq!((jr.rank, jr.relations.len()), (4, 0));
        let anti = restrict_forms(&f, &curve(["s", "1-s"]), 4).unwrap();
        let jr = jet_rank(&anti.jets, 4).unwrap();
        assert_eq!(jr.rank, 2);
        let span = Matrix::from_rows(jr.relations.clone(), 4);
        for want in [vec![qi(1), qi(0), qi(0), qi(1)], vec![qi(0), qi(1), qi(1), qi(0)]] {
            let mut rows = jr.relations.clone();
            rows.push(want.clone());
            assert_eq!(Matrix::from_rows(rows, 4).rank(), span.rank());
            assert!(relation_holds(&anti.jets, &want, 4));
        }
    }

    #[test]
    fn jet_rank_is_monotone_and_reaches_the_exact_rank() {
        let f = dlogs();
        let v = curve(["s", "s^2"]);
        let mut last = 0;
        for m in 2..8 {
            let r = restrict_forms(&f, &v, m).unwrap();
            let k = jet_rank(&r.jets, m).unwrap().rank;
            assert!(k >= last);
            last = k;
        }
        let exact = restrict_forms(&f, &v, 2).unwrap().exact.unwrap();
        assert_eq!(last, crate::exactalg::q_rank(&exact.iter().map(|w| w.c.clone()).collect::<Vec<_>>()));
    }

    #[test]
    fn colinearity_examples() {
        let f = dlogs();
        let loc = colinearity_locus(&[f[0].sub(&f[2]), f[1].sub(&f[3])]);
        assert_eq!(loc, vec![crate::exactalg::parse_poly("z1 - z2", &z2()).unwrap()]);
        assert!(colinearity_locus(&[f[0].clone(), f[0].clone()]).is_empty());
        let v = z2();
        let dz = [OneForm { c: vec![rf("1", &v), rf("0", &v)] }, OneForm { c: vec![rf("0", &v), rf("1", &v)] }];
        assert_eq!(colinearity_locus(&dz), vec![Poly::one()]);
        // the locus vanishes on the diagonal, where the pair has jet rank ≤ 1
        let diag = curve(["s", "s"]);
        let r = restrict_forms(&[f[0].sub(&f[2]), f[1].sub(&f[3])], &diag, 5).unwrap();
        assert!(jet_rank(&r.jets, 5).unwrap().rank <= 1);
        assert!(diag.pull_function(&RatFunc::from_poly(loc[0].clone())).unwrap().ris_zero());
    }

    #[test]
    fn ideal_must_vanish_on_the_map() {
        let s = VarNames::new(&["s"]);
        let ideal = vec![crate::exactalg::parse_poly("z1 - z2", &z2()).unwrap()];
        assert!(FormalSubvariety::rational(z2(), s.clone(), vec![qi(2)], vec![rf("s", &s), rf("s", &s)], ideal.clone()).is_ok());
        assert!(FormalSubvariety::rational(z2(), s.clone(), vec![qi(2)], vec![rf("s", &s), rf("2*s", &s)], ideal).is_err());
        assert!(matches!(
            FormalSubvariety::rational(z2(), s.clone(), vec![qi(0)], vec![rf("1/s", &s), rf("s", &s)], vec![]),
            Err(Error::PoleOnV(_))
        ));
    }
}
