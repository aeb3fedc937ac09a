//! Words and polynomials in the free associative algebra.

use crate::exactalg::Q;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Sequence of generator indices.
pub type Word = Vec<u8>;

/// Noncommutative polynomial with rational coefficients.
pub type AssocPoly = BTreeMap<Word, Q>;

pub fn add_scaled(acc: &mut AssocPoly, a: &AssocPoly, c: &Q) {
    if c.is_zero() {
        return;
    }
    for (w, x) in a {
        let e = acc.entry(w.clone()).or_insert_with(Q::zero);
        *e += x * c;
        if e.is_zero() {
            acc.remove(w);
        }
    }
}

/// Product, dropping words longer than `max_len`.
pub fn mul(a: &AssocPoly, b: &AssocPoly, max_len: usize) -> AssocPoly {
    let mut out = AssocPoly::new();
    for (u, x) in a {
        for (v, y) in b {
            if u.len() + v.len() > max_len {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            let e = out.entry(w).or_insert_with(Q::zero);
            *e += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn commutator(a: &AssocPoly, b: &AssocPoly, max_len: usize) -> AssocPoly {
    let mut out = mul(a, b, max_len);
    add_scaled(&mut out, &mul(b, a, max_len), &-Q::from_integer(1.into()));
    out
}

pub fn letter(i: usize) -> AssocPoly {
    AssocPoly::from([(vec![i as u8], Q::from_integer(1.into()))])
}

/// Lyndon words over `m` letters of length at most `n`, ordered by length and
/// then lexicographically (Duval's algorithm).
pub fn lyndon_words(m: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if m == 0 || n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        out.push(w.clone());
        let k = w.len();
        while w.len() < n {
            let c = w[w.len() - k];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last as usize == m - 1 {
                w.pop();
            } else {
                break;
            }
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| w[i..] > *w)
}

/// Standard factorization w = u v with v the longest proper Lyndon suffix.
pub fn standard_factor(w: &[u8]) -> (Word, Word) {
    for i in 1..w.len() {
        if is_lyndon(&w[i..]) {
            return (w[..i].to_vec(), w[i..].to_vec());
        }
    }
    unreachable!("a Lyndon word of length at least two has a proper Lyndon suffix")
}

/// Bracketed spelling of a Lyndon word, generators numbered from 1.
pub fn bracket_label(w: &[u8]) -> String {
    if w.len() == 1 {
        return format!("x{}", w[0] as usize + 1);
    }
    let (u, v) = standard_factor(w);
    format!("[{},{}]", bracket_label(&u), bracket_label(&v))
}
