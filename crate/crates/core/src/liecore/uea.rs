use super::lie::{LieAlgebra, LieElement};
use super::words::{mul as assoc_mul, AssocPoly, Word};
use crate::error::{Error, Result};
use crate::exactalg::{Ring, Q};
use crate::linalg::{Echelon, Matrix, SparseVec};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Element of the truncated enveloping algebra, stored on normal words.
#[derive(Clone, Debug, PartialEq)]
pub struct UeaElement<R> {
    pub c: BTreeMap<Word, R>,
}

/// Element of the tensor square, keyed by pairs of normal words.
pub type UeaTensor<R> = BTreeMap<(Word, Word), R>;

fn add_into<K: Ord + Clone, R: Ring>(m: &mut BTreeMap<K, R>, k: &K, x: &R) {
    if x.ris_zero() {
        return;
    }
    let v = match m.get(k) {
        Some(y) => y.radd(x),
        None => x.clone(),
    };
    if v.ris_zero() {
        m.remove(k);
    } else {
        m.insert(k.clone(), v);
    }
}

impl<R: Ring> UeaElement<R> {
    pub fn zero() -> Self {
        UeaElement { c: BTreeMap::new() }
    }

    pub fn one() -> Self {
        UeaElement { c: BTreeMap::from([(Vec::new(), R::rone())]) }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn get(&self, w: &[u8]) -> R {
        self.c.get(w).cloned().unwrap_or_else(R::rzero)
    }

    pub fn constant(&self) -> R {
        self.get(&[])
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, x) in &o.c {
            add_into(&mut out.c, w, x);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        UeaElement { c: self.c.iter().map(|(w, x)| (w.clone(), x.rneg())).collect() }
    }

    pub fn scale(&self, q: &Q) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.c {
            add_into(&mut out.c, w, &x.rscale(q));
        }
        out
    }

    pub fn mul_coeff(&self, f: &R) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.c {
            add_into(&mut out.c, w, &x.rmul(f));
        }
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UeaElement<S> {
        let mut out = UeaElement::zero();
        for (w, x) in &self.c {
            add_into(&mut out.c, w, &f(x));
        }
        out
    }
}

/// Truncated enveloping algebra U(L)/I^{n+1} of a nilpotent Lie algebra L of
/// class n: the free associative algebra on the generators, cut at word
/// length n, modulo the two-sided ideal generated by the relations of L.
///
/// Words that lead a row of the reduced echelon basis of that ideal (largest
/// word in the row) are rewritten; all other words are normal.
pub struct Uea {
    alg: Arc<LieAlgebra>,
    rewrite: HashMap<Word, Vec<(Word, Q)>>,
    lie_images: Vec<BTreeMap<Word, Q>>,
    left_inverse: Vec<(Vec<Word>, Matrix<Q>)>,
}

impl std::fmt::Debug for Uea {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Uea").field("algebra", &self.alg).field("rewritten_words", &self.rewrite.len()).finish()
    }
}

fn all_words(m: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * m);
        for w in &layer {
            for k in 0..m {
                let mut v = w.clone();
                v.push(k as u8);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl Uea {
    pub fn new(alg: Arc<LieAlgebra>) -> Result<Self> {
        let (m, n) = (alg.gens(), alg.class());
        let words = all_words(m, n);
        let index: HashMap<Word, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let to_sparse = |p: &AssocPoly| -> SparseVec { p.iter().map(|(w, c)| (index[w], c.clone())).collect() };
        let mut ideal = Echelon::new();
        for d in 2..=n {
            let prev: Vec<AssocPoly> = ideal
                .pivots()
                .filter(|&&p| words[p].len() == d - 1)
                .map(|p| ideal.row(*p).expect("pivot row").iter().map(|(j, c)| (words[*j].clone(), c.clone())).collect())
                .collect();
            for r in &prev {
                for k in 0..m {
                    let x = super::words::letter(k);
                    ideal.insert(&to_sparse(&assoc_mul(&x, r, n)));
                    ideal.insert(&to_sparse(&assoc_mul(r, &x, n)));
                }
            }
            for r in alg.ideal_assoc(d) {
                ideal.insert(&to_sparse(&r));
            }
        }
        let mut rewrite = HashMap::new();
        for &p in ideal.pivots() {
            let row = ideal.row(p).expect("pivot row");
            let v: Vec<(Word, Q)> = row.iter().filter(|(j, _)| **j != p).map(|(j, c)| (words[*j].clone(), -c.clone())).collect();
            rewrite.insert(words[p].clone(), v);
        }
        let mut u = Uea { alg: alg.clone(), rewrite, lie_images: Vec::new(), left_inverse: Vec::new() };
        u.lie_images = (0..alg.dim()).map(|i| u.normalize_q(alg.assoc_image(i))).collect();
        for d in 1..=n {
            let r = alg.slice(d);
            let normal: Vec<Word> = words.iter().filter(|w| w.len() == d && !u.rewrite.contains_key(*w)).cloned().collect();
            let cols: Vec<Vec<Q>> = r.clone().map(|i| normal.iter().map(|w| u.lie_images[i].get(w).cloned().unwrap_or_else(Q::zero)).collect()).collect();
            if cols.is_empty() {
                u.left_inverse.push((Vec::new(), Matrix::zeros(0, 0)));
                continue;
            }
            let a = Matrix::from_cols(&cols, normal.len());
            let (_, rows) = a.transpose().rref();
            if rows.len() != cols.len() {
                return Err(Error::InvalidInput("Lie algebra does not embed in its enveloping algebra".into()));
            }
            let sub = Matrix::from_rows(rows.iter().map(|&i| a.row(i)).collect(), cols.len());
            let inv = sub.inverse().expect("independent rows give an invertible block");
            u.left_inverse.push((rows.iter().map(|&i| normal[i].clone()).collect(), inv));
        }
        Ok(u)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn class(&self) -> usize {
        self.alg.class()
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        !self.rewrite.contains_key(w)
    }

    /// Normal words in degree order, then lexicographically.
    pub fn normal_words(&self) -> Vec<Word> {
        all_words(self.alg.gens(), self.alg.class()).into_iter().filter(|w| self.is_normal(w)).collect()
    }

    fn push_word<R: Ring>(&self, out: &mut BTreeMap<Word, R>, w: &Word, x: &R) {
        match self.rewrite.get(w) {
            None => add_into(out, w, x),
            Some(v) => {
                for (u, c) in v {
                    add_into(out, u, &x.rscale(c));
                }
            }
        }
    }

    fn normalize_q(&self, p: &AssocPoly) -> BTreeMap<Word, Q> {
        let mut out = BTreeMap::new();
        for (w, c) in p {
            if w.len() <= self.class() {
                self.push_word(&mut out, w, c);
            }
        }
        out
    }

    /// Image of a polynomial in the free associative algebra.
    pub fn from_assoc<R: Ring>(&self, p: &AssocPoly) -> UeaElement<R> {
        UeaElement { c: self.normalize_q(p).into_iter().map(|(w, c)| (w, R::from_q(&c))).collect() }
    }

    pub fn generator<R: Ring>(&self, k: usize) -> UeaElement<R> {
        UeaElement { c: BTreeMap::from([(vec![k as u8], R::rone())]) }
    }

    pub fn mul<R: Ring>(&self, a: &UeaElement<R>, b: &UeaElement<R>) -> UeaElement<R> {
        let n = self.class();
        let mut out = BTreeMap::new();
        for (u, x) in &a.c {
            for (v, y) in &b.c {
                if u.len() + v.len() > n {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                self.push_word(&mut out, &w, &x.rmul(y));
            }
        }
        UeaElement { c: out }
    }

    pub fn pow<R: Ring>(&self, a: &UeaElement<R>, e: usize) -> UeaElement<R> {
        let mut acc = UeaElement::one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// exp(x) = Σ x^k/k! for x without constant term.
    pub fn exp<R: Ring>(&self, x: &UeaElement<R>) -> Result<UeaElement<R>> {
        if !x.constant().ris_zero() {
            return Err(Error::NotUnipotent("exp needs an element of the augmentation ideal".into()));
        }
        let mut out = UeaElement::one();
        let mut term = UeaElement::one();
        for k in 1..=self.class() {
            term = self.mul(&term, x).scale(&Q::new(1.into(), (k as i64).into()));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// log(u) = Σ (-1)^{k+1} (u-1)^k / k for u with constant term one.
    pub fn log<R: Ring>(&self, u: &UeaElement<R>) -> Result<UeaElement<R>> {
        let c = self.unipotent_part(u)?;
        let mut out = UeaElement::zero();
        let mut term = UeaElement::one();
        for k in 1..=self.class() {
            term = self.mul(&term, &c);
            if term.is_zero() {
                break;
            }
            let s = if k % 2 == 1 { Q::one() } else { -Q::one() };
            out = out.add(&term.scale(&(s / Q::from_integer((k as i64).into()))));
        }
        Ok(out)
    }

    pub fn inverse<R: Ring>(&self, u: &UeaElement<R>) -> Result<UeaElement<R>> {
        let c = self.unipotent_part(u)?.neg();
        let mut out = UeaElement::one();
        let mut term = UeaElement::one();
        for _ in 1..=self.class() {
            term = self.mul(&term, &c);
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    fn unipotent_part<R: Ring>(&self, u: &UeaElement<R>) -> Result<UeaElement<R>> {
        if u.constant() != R::rone() {
            return Err(Error::NotUnipotent("constant term is not one".into()));
        }
        let mut c = u.clone();
        c.c.remove(&Vec::new());
        Ok(c)
    }

    pub fn from_lie<R: Ring>(&self, x: &LieElement<R>) -> UeaElement<R> {
        let mut out = BTreeMap::new();
        for (i, a) in &x.c {
            for (w, c) in &self.lie_images[*i] {
                add_into(&mut out, w, &a.rscale(c));
            }
        }
        UeaElement { c: out }
    }

    /// Lie coordinates of an element known to be primitive. Other inputs give
    /// a Lie element whose image differs from `u`; see [`Uea::lie_residual`].
    pub fn to_lie<R: Ring>(&self, u: &UeaElement<R>) -> LieElement<R> {
        let mut out = LieElement::zero();
        for d in 1..=self.class() {
            let (rows, inv) = &self.left_inverse[d - 1];
            if rows.is_empty() {
                continue;
            }
            let v: Vec<R> = rows.iter().map(|w| u.get(w)).collect();
            let start = self.alg.slice(d).start;
            for i in 0..inv.nrows() {
                let mut acc = R::rzero();
                for (j, x) in v.iter().enumerate() {
                    let c = inv.get(i, j);
                    if !c.is_zero() && !x.ris_zero() {
                        acc = acc.radd(&x.rscale(c));
                    }
                }
                out.add_at(start + i, &acc);
            }
        }
        out
    }

    /// u − from_lie(to_lie(u)); zero exactly when u lies in the Lie algebra.
    pub fn lie_residual<R: Ring>(&self, u: &UeaElement<R>) -> UeaElement<R> {
        u.sub(&self.from_lie(&self.to_lie(u)))
    }

    /// The Lie logarithm of a unipotent element, checked to be primitive.
    pub fn log_lie<R: Ring>(&self, u: &UeaElement<R>) -> Result<LieElement<R>> {
        let l = self.log(u)?;
        if !self.lie_residual(&l).is_zero() {
            return Err(Error::NotGroupLike("logarithm is not a Lie element".into()));
        }
        Ok(self.to_lie(&l))
    }

    fn normalize_pair<R: Ring>(&self, out: &mut UeaTensor<R>, u: &Word, v: &Word, x: &R) {
        let single = |w: &Word| -> Vec<(Word, Q)> {
            match self.rewrite.get(w) {
                None => vec![(w.clone(), Q::one())],
                Some(r) => r.clone(),
            }
        };
        for (a, p) in single(u) {
            for (b, q) in single(v) {
                add_into(out, &(a.clone(), b), &x.rscale(&(&p * &q)));
            }
        }
    }

    /// Δ, with Δ(x_k) = x_k⊗1 + 1⊗x_k extended multiplicatively.
    pub fn coproduct<R: Ring>(&self, u: &UeaElement<R>) -> UeaTensor<R> {
        let mut out = UeaTensor::new();
        for (w, x) in &u.c {
            let l = w.len();
            for mask in 0u32..(1u32 << l) {
                let mut a = Vec::new();
                let mut b = Vec::new();
                for (p, &ch) in w.iter().enumerate() {
                    if mask >> p & 1 == 1 {
                        a.push(ch);
                    } else {
                        b.push(ch);
                    }
                }
                self.normalize_pair(&mut out, &a, &b, x);
            }
        }
        out
    }

    /// u⊗v truncated at total word length n.
    pub fn tensor<R: Ring>(&self, u: &UeaElement<R>, v: &UeaElement<R>) -> UeaTensor<R> {
        let mut out = UeaTensor::new();
        for (a, x) in &u.c {
            for (b, y) in &v.c {
                if a.len() + b.len() <= self.class() {
                    add_into(&mut out, &(a.clone(), b.clone()), &x.rmul(y));
                }
            }
        }
        out
    }

    /// Δ(u) − u⊗u; zero exactly when u is group-like.
    pub fn grouplike_residual<R: Ring>(&self, u: &UeaElement<R>) -> UeaTensor<R> {
        let mut out = self.coproduct(u);
        for (k, x) in self.tensor(u, u) {
            add_into(&mut out, &k, &x.rneg());
        }
        out
    }

    /// Δ(x) − x⊗1 − 1⊗x; zero exactly when x is primitive.
    pub fn primitive_residual<R: Ring>(&self, x: &UeaElement<R>) -> UeaTensor<R> {
        let mut out = self.coproduct(x);
        for (w, c) in &x.c {
            add_into(&mut out, &(w.clone(), Vec::new()), &c.rneg());
            add_into(&mut out, &(Vec::new(), w.clone()), &c.rneg());
        }
        out
    }

    pub fn fmt_word(w: &[u8]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&l| format!("x{}", l as usize + 1)).collect::<Vec<_>>().join("*")
    }

    pub fn fmt_element(&self, u: &UeaElement<Q>) -> String {
        if u.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Word> = u.c.keys().collect();
        keys.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut s = String::new();
        for (n, w) in keys.into_iter().enumerate() {
            let c = &u.c[w];
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            s.push_str(match (n, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if w.is_empty() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&format!("{a}*"));
                }
                s.push_str(&Self::fmt_word(w));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;
    use crate::liecore::spec::{LieAlgebraSpec, Quotient};

    fn uea(m: usize, n: usize, quot: Quotient) -> Uea {
        Uea::new(Arc::new(LieAlgebra::new(LieAlgebraSpec::new(m, n, quot)).unwrap())).unwrap()
    }

    #[test]
    fn bch_in_class_two() {
        let u = uea(2, 2, Quotient::free());
        let x1: UeaElement<Q> = u.generator(0);
        let x2: UeaElement<Q> = u.generator(1);
        let p = u.mul(&u.exp(&x1).unwrap(), &u.exp(&x2).unwrap());
        let l = u.log_lie(&p).unwrap();
        let a = u.algebra();
        assert_eq!(l, a.parse_element("x1 + x2 + 1/2*[x1,x2]").unwrap());
    }

    #[test]
    fn exp_log_and_grouplike() {
        let u = uea(2, 3, Quotient::free());
        let a = u.algebra().clone();
        let x = a.parse_element("2*x1 - x2 + 1/3*[x1,x2] + [x2,[x1,x2]]").unwrap();
        let e = u.exp(&u.from_lie(&x)).unwrap();
        assert_eq!(u.log_lie(&e).unwrap(), x);
        assert!(u.grouplike_residual(&e).is_empty());
        assert!(u.primitive_residual(&u.from_lie(&x)).is_empty());
        let ex1 = u.exp(&u.generator::<Q>(0)).unwrap();
        assert!(u.grouplike_residual(&ex1).is_empty());
        let nonprim = u.mul(&u.generator::<Q>(0), &u.generator::<Q>(1));
        assert!(!u.primitive_residual(&nonprim).is_empty());
        assert!(!u.grouplike_residual(&u.exp(&nonprim).unwrap()).is_empty());
        assert_eq!(u.exp(&UeaElement::<Q>::zero()).unwrap(), UeaElement::one());
        let inv = u.inverse(&e).unwrap();
        assert_eq!(u.mul(&e, &inv), UeaElement::one());
        assert!(matches!(u.log(&UeaElement::<Q>::zero()), Err(Error::NotUnipotent(_))));
    }

    #[test]
    fn quotient_relations_hold_in_uea() {
        let u = uea(2, 3, Quotient::surface(1));
        let x1: UeaElement<Q> = u.generator(0);
        let x2: UeaElement<Q> = u.generator(1);
        assert_eq!(u.mul(&x1, &x2), u.mul(&x2, &x1));
        // Free and metabelian agree through degree 4 and lose two primitives in
        // degree 5.
        let m = uea(2, 5, Quotient::metabelian());
        assert_eq!(m.normal_words().iter().filter(|w| w.len() == 5).count(), 30);
        let e = m.exp(&m.from_lie(&m.algebra().parse_element("x1 + [x1,x2]").unwrap())).unwrap();
        assert!(m.grouplike_residual(&e).is_empty());
        assert_eq!(m.log(&e).unwrap().get(&[0]), q(1, 1));
    }
}
