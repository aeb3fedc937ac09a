use super::words::{add_scaled, commutator, letter, AssocPoly};
use crate::error::{Error, Result};
use crate::exactalg::{parse_rational, Q};
use num_traits::One;
use serde_json::{json, Value};

/// Which relations are imposed on the free nilpotent Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Quotient {
    /// Kill [[L,L],[L,L]].
    pub metabelian: bool,
    /// Genus g: impose Σ_{i≤g} [x_i, x_{g+i}] = 0 on 2g generators.
    pub surface: Option<usize>,
    /// Extra homogeneous generators of the ideal, written with brackets such
    /// as `[x1,x3] - 2*[x2,[x1,x4]]`.
    pub ideal: Vec<String>,
}

impl Quotient {
    pub fn free() -> Self {
        Self::default()
    }

    pub fn metabelian() -> Self {
        Quotient { metabelian: true, ..Self::default() }
    }

    pub fn surface(g: usize) -> Self {
        Quotient { surface: Some(g), ..Self::default() }
    }

    pub fn ideal<S: AsRef<str>>(gens: &[S]) -> Self {
        Quotient { ideal: gens.iter().map(|s| s.as_ref().to_string()).collect(), ..Self::default() }
    }

    pub fn is_free(&self) -> bool {
        !self.metabelian && self.surface.is_none() && self.ideal.is_empty()
    }

    /// Accepts `"free"`, `"metabelian"`, `{"surface": g}`, `{"ideal": [...]}`
    /// and objects combining these keys with `"metabelian": true`.
    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::from_name(s),
            Value::Object(map) => {
                let mut q = Quotient::free();
                for (k, x) in map {
                    match k.as_str() {
                        "metabelian" => q.metabelian = x.as_bool().ok_or_else(|| bad("metabelian must be a boolean"))?,
                        "surface" => q.surface = Some(x.as_u64().ok_or_else(|| bad("surface genus must be a non-negative integer"))? as usize),
                        "ideal" => {
                            let arr = x.as_array().ok_or_else(|| bad("ideal must be a list of strings"))?;
                            q.ideal = arr.iter().map(|e| e.as_str().map(str::to_string).ok_or_else(|| bad("ideal entries must be strings"))).collect::<Result<_>>()?;
                        }
                        other => return Err(bad(&format!("unknown quotient key {other:?}"))),
                    }
                }
                Ok(q)
            }
            _ => Err(bad("quotient must be a string or an object")),
        }
    }

    /// Short names used on the command line: `free`, `metabelian`,
    /// `surface:G`, `surface-metabelian:G`.
    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Self::free()),
            "metabelian" => Ok(Self::metabelian()),
            _ => {
                if let Some(g) = s.strip_prefix("surface-metabelian:") {
                    let g = g.parse().map_err(|_| bad("genus must be an integer"))?;
                    Ok(Quotient { metabelian: true, surface: Some(g), ideal: Vec::new() })
                } else if let Some(g) = s.strip_prefix("surface:") {
                    Ok(Self::surface(g.parse().map_err(|_| bad("genus must be an integer"))?))
                } else {
                    Err(bad(&format!("unknown quotient {s:?}")))
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        if self.is_free() {
            return json!("free");
        }
        if self.metabelian && self.surface.is_none() && self.ideal.is_empty() {
            return json!("metabelian");
        }
        let mut m = serde_json::Map::new();
        if self.metabelian {
            m.insert("metabelian".into(), json!(true));
        }
        if let Some(g) = self.surface {
            m.insert("surface".into(), json!(g));
        }
        if !self.ideal.is_empty() {
            m.insert("ideal".into(), json!(self.ideal));
        }
        Value::Object(m)
    }
}

fn bad(msg: &str) -> Error {
    Error::InvalidInput(msg.to_string())
}

/// Generators, nilpotency class, quotient and optional involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraSpec {
    pub gens: usize,
    pub class: usize,
    pub quotient: Quotient,
    /// Signed permutation: generator i (from 1) goes to sign(c_i) x_{|c_i|}.
    pub involution: Option<Vec<i64>>,
}

impl LieAlgebraSpec {
    pub fn new(gens: usize, class: usize, quotient: Quotient) -> Self {
        LieAlgebraSpec { gens, class, quotient, involution: None }
    }

    pub fn free(gens: usize, class: usize) -> Self {
        Self::new(gens, class, Quotient::free())
    }

    pub fn with_involution(mut self, c: Vec<i64>) -> Self {
        self.involution = Some(c);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.gens == 0 || self.class == 0 {
            return Err(bad("generator count and class must be at least 1"));
        }
        if self.gens > 255 {
            return Err(bad("at most 255 generators are supported"));
        }
        if let Some(g) = self.quotient.surface {
            if 2 * g != self.gens {
                return Err(Error::UnsupportedQuotient(format!("surface of genus {g} needs {} generators, got {}", 2 * g, self.gens)));
            }
        }
        if let Some(c) = &self.involution {
            if c.len() != self.gens {
                return Err(bad("involution must list one image per generator"));
            }
            for (i, &x) in c.iter().enumerate() {
                let j = x.unsigned_abs() as usize;
                if x == 0 || j > self.gens {
                    return Err(bad("involution entries must be ±1..±m"));
                }
                let back = c[j - 1];
                if back.unsigned_abs() as usize != i + 1 || back.signum() != x.signum() {
                    return Err(bad("involution does not square to the identity"));
                }
            }
        }
        Ok(())
    }

    /// Reads `{generators, class, quotient, involution}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let gens = v.get("generators").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field generators"))? as usize;
        let class = v.get("class").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field class"))? as usize;
        let quotient = match v.get("quotient") {
            Some(q) => Quotient::from_json(q)?,
            None => Quotient::free(),
        };
        let involution = match v.get("involution") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(a.iter().map(|x| x.as_i64().ok_or_else(|| bad("involution entries must be integers"))).collect::<Result<_>>()?),
            Some(_) => return Err(bad("involution must be a list of signed integers")),
        };
        let s = LieAlgebraSpec { gens, class, quotient, involution };
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"generators": self.gens, "class": self.class, "quotient": self.quotient.to_json()});
        if let Some(c) = &self.involution {
            v["involution"] = json!(c);
        }
        v
    }
}

/// Parses a rational combination of bracket expressions in x1..xm into the
/// free associative algebra.
pub fn parse_lie_expr(s: &str, m: usize, max_len: usize) -> Result<AssocPoly> {
    let cs: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = ExprParser { cs, pos: 0, m, max_len };
    let out = p.sum()?;
    if p.pos != p.cs.len() {
        return Err(Error::Parse(format!("trailing input in Lie expression {s:?}")));
    }
    Ok(out)
}

struct ExprParser {
    cs: Vec<char>,
    pos: usize,
    m: usize,
    max_len: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<char> {
        self.cs.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<AssocPoly> {
        let mut acc = AssocPoly::new();
        let mut sign = Q::one();
        if self.peek() == Some('-') {
            sign = -sign;
            self.pos += 1;
        } else if self.peek() == Some('+') {
            self.pos += 1;
        }
        loop {
            let (c, t) = self.term()?;
            add_scaled(&mut acc, &t, &(sign * c));
            match self.peek() {
                Some('+') => sign = Q::one(),
                Some('-') => sign = -Q::one(),
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Q, AssocPoly)> {
        let mut coef = Q::one();
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let st = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '/') {
                self.pos += 1;
            }
            let txt: String = self.cs[st..self.pos].iter().collect();
            coef = parse_rational(&txt)?;
            if self.peek() != Some('*') {
                return Err(Error::Parse("expected '*' after coefficient".into()));
            }
            self.pos += 1;
        }
        Ok((coef, self.bracket()?))
    }

    fn bracket(&mut self) -> Result<AssocPoly> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let a = self.bracket()?;
                if self.peek() != Some(',') {
                    return Err(Error::Parse("expected ',' in bracket".into()));
                }
                self.pos += 1;
                let b = self.bracket()?;
                if self.peek() != Some(']') {
                    return Err(Error::Parse("expected ']'".into()));
                }
                self.pos += 1;
                Ok(commutator(&a, &b, self.max_len))
            }
            Some('x') | Some('e') => {
                self.pos += 1;
                let st = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let txt: String = self.cs[st..self.pos].iter().collect();
                let i: usize = txt.parse().map_err(|_| Error::Parse("expected generator index".into()))?;
                if i == 0 || i > self.m {
                    return Err(Error::Parse(format!("generator x{i} out of range 1..{}", self.m)));
                }
                Ok(letter(i - 1))
            }
            other => Err(Error::Parse(format!("unexpected {other:?} in Lie expression"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_json_forms() {
        assert!(Quotient::from_json(&json!("free")).unwrap().is_free());
        assert_eq!(Quotient::from_json(&json!({"surface": 2})).unwrap(), Quotient::surface(2));
        let q = Quotient::from_json(&json!({"surface": 2, "metabelian": true})).unwrap();
        assert!(q.metabelian && q.surface == Some(2));
        assert!(Quotient::from_json(&json!("nilpotent")).is_err());
    }

    #[test]
    fn involution_must_square_to_one() {
        let s = LieAlgebraSpec::free(4, 2).with_involution(vec![3, 4, 1, 2]);
        assert!(s.validate().is_ok());
        assert!(LieAlgebraSpec::free(2, 2).with_involution(vec![2, -1]).validate().is_err());
        assert!(LieAlgebraSpec::free(2, 2).with_involution(vec![-1, -2]).validate().is_ok());
    }

    #[test]
    fn bracket_expression() {
        let p = parse_lie_expr("[x1,x2] - 2*[x2,x1]", 2, 4).unwrap();
        // 3 [x1,x2] = 3 x1x2 - 3 x2x1
        assert_eq!(p.get(&vec![0u8, 1]).cloned(), Some(Q::from_integer(3.into())));
        assert_eq!(p.get(&vec![1u8, 0]).cloned(), Some(Q::from_integer((-3).into())));
    }
}
