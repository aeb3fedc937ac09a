use super::spec::{parse_lie_expr, LieAlgebraSpec};
use super::words::{add_scaled, commutator, letter, lyndon_words, AssocPoly, Word};
use crate::error::{Error, Result};
use crate::exactalg::{qi, Ring, Q};
use crate::linalg::{Echelon, SparseVec};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::{Arc, Mutex};

/// Element of a Lie algebra in the coordinates of its Hall basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement<R> {
    pub c: BTreeMap<usize, R>,
}

impl<R: Ring> LieElement<R> {
    pub fn zero() -> Self {
        LieElement { c: BTreeMap::new() }
    }

    pub fn basis(i: usize) -> Self {
        LieElement { c: BTreeMap::from([(i, R::rone())]) }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, R)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (i, x) in it {
            out.add_at(i, &x);
        }
        out
    }

    pub fn from_q(v: &LieElement<Q>) -> Self {
        LieElement { c: v.c.iter().map(|(i, x)| (*i, R::from_q(x))).collect() }
    }

    pub fn get(&self, i: usize) -> R {
        self.c.get(&i).cloned().unwrap_or_else(R::rzero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add_at(&mut self, i: usize, x: &R) {
        if x.ris_zero() {
            return;
        }
        let v = match self.c.get(&i) {
            Some(y) => y.radd(x),
            None => x.clone(),
        };
        if v.ris_zero() {
            self.c.remove(&i);
        } else {
            self.c.insert(i, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (i, x) in &o.c {
            out.add_at(*i, x);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        LieElement { c: self.c.iter().map(|(i, x)| (*i, x.rneg())).collect() }
    }

    pub fn scale(&self, q: &Q) -> Self {
        Self::from_pairs(self.c.iter().map(|(i, x)| (*i, x.rscale(q))))
    }

    pub fn mul_coeff(&self, f: &R) -> Self {
        Self::from_pairs(self.c.iter().map(|(i, x)| (*i, x.rmul(f))))
    }

    /// Applies `f` to every coefficient.
    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> LieElement<S> {
        LieElement::from_pairs(self.c.iter().map(|(i, x)| (*i, f(x))))
    }
}

/// A nilpotent Lie algebra presented as a quotient of the free one, with the
/// Lyndon basis of the free algebra and a complement of the ideal in each
/// degree as its Hall basis.
pub struct LieAlgebra {
    spec: LieAlgebraSpec,
    lyndon: Vec<Word>,
    lyndon_index: HashMap<Word, usize>,
    pw: Vec<AssocPoly>,
    ideal: Echelon,
    basis: Vec<usize>,
    pos: Vec<Option<usize>>,
    slices: Vec<Range<usize>>,
    consts: Mutex<HashMap<(usize, usize), Arc<Vec<(usize, Q)>>>>,
    involution: Option<Vec<LieElement<Q>>>,
}

impl std::fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LieAlgebra").field("spec", &self.spec).field("dims", &self.graded_dims()).finish()
    }
}

impl LieAlgebra {
    pub fn new(spec: LieAlgebraSpec) -> Result<Self> {
        spec.validate()?;
        let (m, n) = (spec.gens, spec.class);
        let lyndon = lyndon_words(m, n);
        let lyndon_index: HashMap<Word, usize> = lyndon.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut pw: Vec<AssocPoly> = Vec::with_capacity(lyndon.len());
        for w in &lyndon {
            let p = if w.len() == 1 {
                letter(w[0] as usize)
            } else {
                let (u, v) = super::words::standard_factor(w);
                commutator(&pw[lyndon_index[&u]], &pw[lyndon_index[&v]], n)
            };
            pw.push(p);
        }
        let mut alg = LieAlgebra {
            spec,
            lyndon,
            lyndon_index,
            pw,
            ideal: Echelon::new(),
            basis: Vec::new(),
            pos: Vec::new(),
            slices: Vec::new(),
            consts: Mutex::new(HashMap::new()),
            involution: None,
        };
        alg.build_ideal()?;
        alg.build_basis();
        alg.build_involution()?;
        Ok(alg)
    }

    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    pub fn gens(&self) -> usize {
        self.spec.gens
    }

    pub fn class(&self) -> usize {
        self.spec.class
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis indices of gr_d, for 1 ≤ d ≤ class.
    pub fn slice(&self, d: usize) -> Range<usize> {
        self.slices[d - 1].clone()
    }

    pub fn graded_dims(&self) -> Vec<usize> {
        self.slices.iter().map(|r| r.len()).collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.lyndon[self.basis[i]].len()
    }

    /// The Lyndon word naming basis element `i`.
    pub fn word(&self, i: usize) -> &Word {
        &self.lyndon[self.basis[i]]
    }

    /// Bracketed spelling of basis element `i`, such as `[x1,[x1,x2]]`.
    pub fn label(&self, i: usize) -> String {
        super::words::bracket_label(self.word(i))
    }

    /// Basis element `i` as a Lie polynomial in the free associative algebra.
    pub fn assoc_image(&self, i: usize) -> &AssocPoly {
        &self.pw[self.basis[i]]
    }

    /// Index of generator x_{k+1}; generators are never in the ideal.
    pub fn generator(&self, k: usize) -> usize {
        k
    }

    /// Coordinates of a Lie polynomial in the Lyndon basis of the free Lie
    /// algebra, or `None` if the polynomial is not a Lie polynomial.
    pub fn lyndon_coords(&self, p: &AssocPoly) -> Option<SparseVec> {
        let mut rest = p.clone();
        rest.retain(|w, _| w.len() <= self.spec.class);
        let mut out = SparseVec::new();
        while let Some((w, c)) = rest.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            let &j = self.lyndon_index.get(&w)?;
            add_scaled(&mut rest, &self.pw[j], &-c.clone());
            out.insert(j, c);
        }
        Some(out)
    }

    fn project(&self, v: &SparseVec) -> LieElement<Q> {
        let r = self.ideal.reduce(v);
        LieElement { c: r.into_iter().map(|(k, c)| (self.pos[k].expect("reduced vector avoids pivots"), c)).collect() }
    }

    /// Image of a Lie polynomial in the quotient.
    pub fn from_assoc(&self, p: &AssocPoly) -> Result<LieElement<Q>> {
        let v = self.lyndon_coords(p).ok_or_else(|| Error::InvalidInput("not a Lie polynomial".into()))?;
        Ok(self.project(&v))
    }

    /// Parses a bracket expression such as `[x1,x2] + 1/2*[x1,[x1,x2]]`.
    pub fn parse_element(&self, s: &str) -> Result<LieElement<Q>> {
        let p = parse_lie_expr(s, self.spec.gens, self.spec.class)?;
        self.from_assoc(&p)
    }

    fn build_ideal(&mut self) -> Result<()> {
        let (m, n) = (self.spec.gens, self.spec.class);
        let mut gens_by_degree: Vec<Vec<SparseVec>> = vec![Vec::new(); n + 1];
        if let Some(g) = self.spec.quotient.surface {
            let mut rel = AssocPoly::new();
            for i in 0..g {
                add_scaled(&mut rel, &commutator(&letter(i), &letter(g + i), n), &Q::one());
            }
            if n >= 2 {
                gens_by_degree[2].push(self.lyndon_coords(&rel).expect("surface relation is a Lie polynomial"));
            }
        }
        for s in self.spec.quotient.ideal.clone() {
            let p = parse_lie_expr(&s, m, usize::MAX)?;
            let degs: std::collections::BTreeSet<usize> = p.keys().map(|w| w.len()).collect();
            if degs.len() > 1 {
                return Err(Error::UnsupportedQuotient(format!("ideal generator {s:?} is not homogeneous")));
            }
            let Some(&d) = degs.iter().next() else { continue };
            if d == 1 {
                return Err(Error::UnsupportedQuotient(format!("ideal generator {s:?} has degree 1; drop the generator instead")));
            }
            if d <= n {
                let v = self.lyndon_coords(&p).ok_or_else(|| Error::InvalidInput(format!("{s:?} is not a Lie polynomial")))?;
                gens_by_degree[d].push(v);
            }
        }
        let mut free_bracket: HashMap<(usize, usize), SparseVec> = HashMap::new();
        for d in 2..=n {
            let prev: Vec<SparseVec> = self
                .ideal
                .pivots()
                .filter(|&&p| self.lyndon[p].len() == d - 1)
                .map(|p| self.ideal.row(*p).expect("pivot row").clone())
                .collect();
            for row in &prev {
                for k in 0..m {
                    let mut acc = SparseVec::new();
                    for (j, c) in row {
                        let fb = free_bracket.entry((k, *j)).or_insert_with(|| {
                            let p = commutator(&letter(k), &self.pw[*j], n);
                            self.lyndon_coords(&p).expect("bracket of Lie polynomials")
                        });
                        crate::linalg::sparse_axpy(&mut acc, c, fb);
                    }
                    self.ideal.insert(&acc);
                }
            }
            for v in &gens_by_degree[d] {
                self.ideal.insert(v);
            }
            if self.spec.quotient.metabelian {
                for a in 2..=d / 2 {
                    let b = d - a;
                    let us: Vec<usize> = self.quotient_words(a);
                    let vs: Vec<usize> = self.quotient_words(b);
                    for &u in &us {
                        for &v in &vs {
                            if a == b && u >= v {
                                continue;
                            }
                            let p = commutator(&self.pw[u], &self.pw[v], n);
                            let c = self.lyndon_coords(&p).expect("bracket of Lie polynomials");
                            self.ideal.insert(&c);
                        }
                    }
                }
            }
            // New degree-d generators also need their ad-closure, which the
            // next degree's pass over `prev` supplies.
        }
        Ok(())
    }

    /// A basis of the degree-d part of the ideal, as Lie polynomials.
    pub fn ideal_assoc(&self, d: usize) -> Vec<AssocPoly> {
        self.ideal
            .pivots()
            .filter(|&&p| self.lyndon[p].len() == d)
            .map(|p| {
                let mut acc = AssocPoly::new();
                for (j, c) in self.ideal.row(*p).expect("pivot row") {
                    add_scaled(&mut acc, &self.pw[*j], c);
                }
                acc
            })
            .collect()
    }

    fn quotient_words(&self, d: usize) -> Vec<usize> {
        (0..self.lyndon.len()).filter(|&j| self.lyndon[j].len() == d && !self.ideal.is_pivot(j)).collect()
    }

    fn build_basis(&mut self) {
        let n = self.spec.class;
        self.pos = vec![None; self.lyndon.len()];
        self.slices = Vec::with_capacity(n);
        for d in 1..=n {
            let start = self.basis.len();
            for j in 0..self.lyndon.len() {
                if self.lyndon[j].len() == d && !self.ideal.is_pivot(j) {
                    self.pos[j] = Some(self.basis.len());
                    self.basis.push(j);
                }
            }
            self.slices.push(start..self.basis.len());
        }
    }

    fn apply_signed_perm(c: &[i64], p: &AssocPoly) -> AssocPoly {
        let mut out = AssocPoly::new();
        for (w, x) in p {
            let mut sign = 1i64;
            let img: Word = w
                .iter()
                .map(|&l| {
                    let t = c[l as usize];
                    sign *= t.signum();
                    (t.unsigned_abs() - 1) as u8
                })
                .collect();
            out.insert(img, x * qi(sign));
        }
        out
    }

    fn build_involution(&mut self) -> Result<()> {
        let Some(c) = self.spec.involution.clone() else { return Ok(()) };
        let pivots: Vec<usize> = self.ideal.pivots().copied().collect();
        for p in pivots {
            let row = self.ideal.row(p).expect("pivot row").clone();
            let mut img = AssocPoly::new();
            for (j, x) in &row {
                add_scaled(&mut img, &Self::apply_signed_perm(&c, &self.pw[*j]), x);
            }
            let v = self.lyndon_coords(&img).expect("image of a Lie polynomial");
            if !self.ideal.contains(&v) {
                return Err(Error::InvalidInput("involution does not preserve the relations".into()));
            }
        }
        let imgs = (0..self.dim())
            .map(|i| {
                let p = Self::apply_signed_perm(&c, &self.pw[self.basis[i]]);
                self.from_assoc(&p)
            })
            .collect::<Result<Vec<_>>>()?;
        self.involution = Some(imgs);
        Ok(())
    }

    pub fn has_involution(&self) -> bool {
        self.involution.is_some()
    }

    /// Image of an element under the declared involution.
    pub fn involute(&self, x: &LieElement<Q>) -> Result<LieElement<Q>> {
        let imgs = self.involution.as_ref().ok_or_else(|| Error::InvalidInput("no involution declared".into()))?;
        let mut out = LieElement::zero();
        for (i, c) in &x.c {
            out = out.add(&imgs[*i].scale(c));
        }
        Ok(out)
    }

    /// Structure constants: [e_i, e_j] = Σ b_ijk e_k.
    pub fn structure(&self, i: usize, j: usize) -> Arc<Vec<(usize, Q)>> {
        if i == j || self.degree(i) + self.degree(j) > self.spec.class {
            return Arc::new(Vec::new());
        }
        if i > j {
            let s = self.structure(j, i);
            return Arc::new(s.iter().map(|(k, c)| (*k, -c)).collect());
        }
        if let Some(v) = self.consts.lock().expect("structure cache").get(&(i, j)) {
            return v.clone();
        }
        let p = commutator(&self.pw[self.basis[i]], &self.pw[self.basis[j]], self.spec.class);
        let v = self.lyndon_coords(&p).expect("bracket of Lie polynomials");
        let out: Arc<Vec<(usize, Q)>> = Arc::new(self.project(&v).c.into_iter().collect());
        self.consts.lock().expect("structure cache").insert((i, j), out.clone());
        out
    }

    pub fn bracket<R: Ring>(&self, x: &LieElement<R>, y: &LieElement<R>) -> LieElement<R> {
        let mut out = LieElement::zero();
        for (i, a) in &x.c {
            for (j, b) in &y.c {
                if i == j {
                    continue;
                }
                let s = self.structure(*i, *j);
                if s.is_empty() {
                    continue;
                }
                let ab = a.rmul(b);
                for (k, c) in s.iter() {
                    out.add_at(*k, &ab.rscale(c));
                }
            }
        }
        out
    }

    /// Bracket that first checks both arguments belong to this algebra.
    pub fn checked_bracket<R: Ring>(&self, x: &LieElement<R>, y: &LieElement<R>) -> Result<LieElement<R>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bracket(x, y))
    }

    pub fn check<R: Ring>(&self, x: &LieElement<R>) -> Result<()> {
        match x.c.keys().next_back() {
            Some(&i) if i >= self.dim() => Err(Error::SpecMismatch(format!("basis index {i} outside an algebra of dimension {}", self.dim()))),
            _ => Ok(()),
        }
    }

    /// Component of `x` in gr_d.
    pub fn degree_part<R: Ring>(&self, x: &LieElement<R>, d: usize) -> LieElement<R> {
        let r = self.slice(d);
        LieElement { c: x.c.range(r).map(|(i, v)| (*i, v.clone())).collect() }
    }

    /// Coordinates of a homogeneous rational element as a dense vector on gr_d.
    pub fn dense(&self, x: &LieElement<Q>, d: usize) -> Vec<Q> {
        let r = self.slice(d);
        r.clone().map(|i| x.c.get(&i).cloned().unwrap_or_else(Q::zero)).collect()
    }

    pub fn from_dense(&self, v: &[Q], d: usize) -> LieElement<Q> {
        let r = self.slice(d);
        LieElement::from_pairs(r.zip(v.iter().cloned()))
    }

    /// Human-readable linear combination of basis labels.
    pub fn fmt_element(&self, x: &LieElement<Q>) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (i, c)) in x.c.iter().enumerate() {
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if n == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !a.is_one() {
                s.push_str(&format!("{a}*"));
            }
            s.push_str(&self.label(*i));
        }
        s
    }
}

/// Dimensions of the graded pieces gr_1..gr_class.
pub fn graded_dims(spec: &LieAlgebraSpec) -> Result<Vec<usize>> {
    Ok(LieAlgebra::new(spec.clone())?.graded_dims())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::spec::Quotient;

    fn alg(m: usize, n: usize, q: Quotient) -> LieAlgebra {
        LieAlgebra::new(LieAlgebraSpec::new(m, n, q)).unwrap()
    }

    #[test]
    fn free_and_metabelian_dims() {
        assert_eq!(alg(2, 5, Quotient::free()).graded_dims(), vec![2, 1, 2, 3, 6]);
        assert_eq!(alg(2, 3, Quotient::free()).graded_dims(), vec![2, 1, 2]);
        assert_eq!(alg(1, 3, Quotient::free()).graded_dims(), vec![1, 0, 0]);
        assert_eq!(alg(2, 6, Quotient::metabelian()).graded_dims(), vec![2, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn surface_relations() {
        assert_eq!(alg(2, 3, Quotient::surface(1)).graded_dims(), vec![2, 0, 0]);
        let s2 = Quotient { metabelian: true, surface: Some(2), ideal: vec![] };
        assert_eq!(alg(4, 2, s2).graded_dims()[1], 5);
    }

    #[test]
    fn bracket_is_alternating_and_jacobi() {
        let a = alg(2, 3, Quotient::free());
        let x1 = LieElement::<Q>::basis(0);
        let x2 = LieElement::<Q>::basis(1);
        assert!(a.bracket(&x1, &x1).is_zero());
        let x12 = a.bracket(&x1, &x2);
        assert_eq!(a.fmt_element(&x12), "[x1,x2]");
        let j = a
            .bracket(&x1, &a.bracket(&x2, &x12))
            .add(&a.bracket(&x2, &a.bracket(&x12, &x1)))
            .add(&a.bracket(&x12, &a.bracket(&x1, &x2)));
        assert!(j.is_zero());
    }

    #[test]
    fn user_ideal() {
        let a = alg(3, 3, Quotient::ideal(&["[x1,x2] - [x2,x3]"]));
        assert_eq!(a.graded_dims(), vec![3, 2, 5]);
        let e = LieAlgebra::new(LieAlgebraSpec::new(3, 3, Quotient::ideal(&["x1 + [x1,x2]"])));
        assert!(matches!(e, Err(Error::UnsupportedQuotient(_))));
    }

    #[test]
    fn involution_images() {
        let a = LieAlgebra::new(LieAlgebraSpec::free(2, 2).with_involution(vec![-1, -2])).unwrap();
        let x12 = a.parse_element("[x1,x2]").unwrap();
        assert_eq!(a.involute(&x12).unwrap(), x12);
        let bad = LieAlgebra::new(LieAlgebraSpec::new(2, 3, Quotient::ideal(&["[x1,[x1,x2]]"])).with_involution(vec![2, 1]));
        assert!(bad.is_err());
    }
}
