use super::mono::Mono;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::rational::Q;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::str::FromStr;

/// Ordered variable names used for printing and parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames(pub Vec<String>);

impl VarNames {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        VarNames(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// `prefix1, prefix2, ...`
    pub fn indexed(prefix: &str, n: usize) -> Self {
        VarNames((1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> String {
        self.0.get(i).cloned().unwrap_or_else(|| format!("v{}", i + 1))
    }

    pub fn concat(&self, other: &VarNames) -> VarNames {
        VarNames(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn fmt_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.name(i)),
                _ => parts.push(format!("{}^{}", self.name(i), e)),
            }
        }
        parts.join("*")
    }

    /// Joins signed terms as `a + b - c`, writing `coef * monomial` and
    /// omitting unit coefficients of non-constant monomials.
    pub fn fmt_terms<'a, I: Iterator<Item = (&'a Mono, &'a Q)>>(&self, it: I) -> String {
        let mut out = String::new();
        for (k, (m, c)) in it.enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let body = if m.is_one() {
                a.to_string()
            } else if a.is_one() {
                self.fmt_mono(m)
            } else {
                format!("{} * {}", a, self.fmt_mono(m))
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Polynomial in decreasing graded-lexicographic order.
    pub fn fmt_poly(&self, p: &Poly) -> String {
        self.fmt_terms(p.terms().iter().rev())
    }

    pub fn fmt_ratfunc(&self, f: &RatFunc) -> String {
        if f.is_polynomial() {
            return self.fmt_poly(&f.num().scale(&f.den().constant_term().recip()));
        }
        let n = self.fmt_poly(f.num());
        let d = self.fmt_poly(f.den());
        let n = if f.num().len() > 1 { format!("({n})") } else { n };
        let d = if f.den().len() > 1 || !f.den().leading_coeff().is_one() { format!("({d})") } else { d };
        format!("{n}/{d}")
    }

    /// Product of factors, parenthesising multi-term ones.
    pub fn fmt_product(&self, coeff: &Q, factors: &[Poly]) -> String {
        let mut parts: Vec<String> = Vec::new();
        for f in factors {
            let s = self.fmt_poly(f);
            parts.push(if f.len() > 1 { format!("({s})") } else { s });
        }
        if parts.is_empty() {
            return coeff.to_string();
        }
        let body = parts.join("*");
        if coeff.is_one() {
            body
        } else if *coeff == -Q::one() {
            format!("-{body}")
        } else {
            format!("{coeff} * {body}")
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(BigInt::from_str(&txt).map_err(|e| Error::Parse(e.to_string()))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a VarNames,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::Parse("division by zero".into()));
                }
                acc = &acc / &d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?
                }
                _ => return Err(Error::Parse("expected integer exponent".into())),
            };
            let p = base.pow(e);
            if neg {
                return p.inv().ok_or_else(|| Error::Parse("zero to a negative power".into()));
            }
            return Ok(p);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self.vars.index(&name).ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                Ok(RatFunc::var(i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an arithmetic expression in the given variables.
pub fn parse_ratfunc(s: &str, vars: &VarNames) -> Result<RatFunc> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, vars };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(r)
}

pub fn parse_poly(s: &str, vars: &VarNames) -> Result<Poly> {
    let r = parse_ratfunc(s, vars)?;
    if !r.is_polynomial() {
        return Err(Error::Parse(format!("{s:?} is not a polynomial")));
    }
    Ok(r.num().scale(&r.den().constant_term().recip()))
}

/// Parses `a`, `-a`, `a/b`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let r = parse_ratfunc(s, &VarNames(Vec::new()))?;
    r.as_constant().ok_or_else(|| Error::Parse(format!("{s:?} is not a rational")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bit_identical() {
        let v = VarNames::new(&["z1", "z2"]);
        for s in ["z1 - z2", "z1*z2 - z1", "3/2 * z1^2*z2 - 7 * z2 + 1/3", "0", "-z1^3 + 2", "z1^2 + z1*z2 + z2^2"] {
            let p = parse_poly(s, &v).unwrap();
            assert_eq!(v.fmt_poly(&p), s);
        }
    }

    #[test]
    fn rational_function_parsing() {
        let v = VarNames::new(&["z"]);
        let f = parse_ratfunc("1/z + 1/(1-z)", &v).unwrap();
        let g = parse_ratfunc("1/(z - z^2)", &v).unwrap();
        assert_eq!(f, g);
        assert!(parse_ratfunc("1/(z-z)", &v).is_err());
        assert!(parse_ratfunc("w", &v).is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-11/27").unwrap(), Q::new((-11).into(), 27.into()));
        assert!(parse_rational("z").is_err());
    }
}
