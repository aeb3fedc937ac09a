use super::schain::{build_s_chain, SChain};
use super::universal::{build_universal, Chart};
use super::{Connection, FormMatrix, GaugeTransform};
use crate::error::{Error, Result};
use crate::exactalg::{parse_ratfunc, FormSpace, OneAtom, OneForm, RatFunc, Ring, TwoForm, VarNames, Q};
use crate::linalg::Matrix;
use num_traits::{One, Zero};
use serde_json::{json, Value};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidData(msg.into())
}

fn str_list(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array of strings")))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad(format!("{what} must be an array of strings"))))
        .collect()
}

fn one_form(v: &Value, vars: &VarNames, what: &str) -> Result<OneForm<RatFunc>> {
    let cs = str_list(v, what)?;
    if cs.len() != vars.len() {
        return Err(Error::DimensionMismatch(format!("{what} has {} coefficients for {} coordinates", cs.len(), vars.len())));
    }
    Ok(OneForm { c: cs.iter().map(|s| parse_ratfunc(s, vars)).collect::<Result<_>>()? })
}

fn two_form(v: &Value, vars: &VarNames, what: &str) -> Result<TwoForm<RatFunc>> {
    let cs = str_list(v, what)?;
    let n = vars.len();
    let want = n * n.saturating_sub(1) / 2;
    if cs.len() != want {
        return Err(Error::DimensionMismatch(format!("{what} has {} coefficients, expected {want}", cs.len())));
    }
    Ok(TwoForm { n, c: cs.iter().map(|s| parse_ratfunc(s, vars)).collect::<Result<_>>()? })
}

fn named_pairs(v: Option<&Value>, what: &str) -> Result<Vec<(String, Value)>> {
    let Some(v) = v else { return Ok(Vec::new()) };
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array of [name, value] pairs")))?
        .iter()
        .map(|p| match p.as_array().map(|a| a.as_slice()) {
            Some([Value::String(name), x]) => Ok((name.clone(), x.clone())),
            _ => Err(bad(format!("{what} must be an array of [name, value] pairs"))),
        })
        .collect()
}

/// Reads a form space:
///
/// {"vars": ["z1", "z2"], "functions": [["z1", "z1"]],
///  "one_forms": [["dz1/z1", ["1/z1", "0"]], ["eta", {"d": ["1/(z1*z2)"]}]],
///  "two_forms": [["w", ["1/(z1*z2)"]]]}
///
/// 2-forms list their coefficients on dz_i∧dz_j for i < j in lexicographic
/// order.
pub fn formspace_from_json(v: &Value) -> Result<FormSpace> {
    let vars = VarNames::new(&str_list(v.get("vars").ok_or_else(|| bad("form space needs \"vars\""))?, "vars")?);
    let fns = named_pairs(v.get("functions"), "functions")?
        .into_iter()
        .map(|(n, x)| {
            let s = x.as_str().ok_or_else(|| bad(format!("function {n} must be a string")))?;
            Ok((n, parse_ratfunc(s, &vars)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let ones = named_pairs(v.get("one_forms"), "one_forms")?
        .into_iter()
        .map(|(n, x)| {
            let atom = match x.get("d") {
                Some(d) => OneAtom::Abstract { d: two_form(d, &vars, &n)? },
                None => OneAtom::Concrete(one_form(&x, &vars, &n)?),
            };
            Ok((n, atom))
        })
        .collect::<Result<Vec<_>>>()?;
    let twos = named_pairs(v.get("two_forms"), "two_forms")?
        .into_iter()
        .map(|(n, x)| Ok((n.clone(), two_form(&x, &vars, &n)?)))
        .collect::<Result<Vec<_>>>()?;
    FormSpace::new(vars, fns, ones, twos)
}

/// Reads S_1 as a list of atom names or of coordinate vectors.
fn s1_from_json(v: &Value, space: &FormSpace) -> Result<Vec<Vec<Q>>> {
    let arr = v.as_array().ok_or_else(|| bad("\"s1\" must be an array"))?;
    arr.iter()
        .map(|x| match x {
            Value::String(name) => {
                let a = space.one_index(name).ok_or_else(|| bad(format!("unknown 1-form atom {name}")))?;
                Ok((0..space.n_one()).map(|b| if a == b { Q::one() } else { Q::zero() }).collect())
            }
            _ => str_list(x, "s1 vector")?.iter().map(|s| crate::exactalg::parse_rational(s)).collect(),
        })
        .collect()
}

/// A connection together with the form space and S chain it is reduced
/// against.
#[derive(Clone, Debug)]
pub struct ConnectionFile {
    pub vars: VarNames,
    pub connection: Connection,
    pub space: FormSpace,
    pub chain: SChain,
}

/// Reads a connection file:
///
/// {"chart": "p1:0,1"} or {"space": {...}, "s1": ["dz/z", ...]},
/// "blocks": [1, 2, 1],
/// "entries": [[row, col, ["coefficient of dz1", ...]], ...]
///
/// With a chart and no explicit space, the chart's declared forms are used,
/// and S_1 defaults to all of its dlog atoms.
pub fn connection_from_json(v: &Value) -> Result<ConnectionFile> {
    let blocks: Vec<usize> = v
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("connection needs \"blocks\""))?
        .iter()
        .map(|b| b.as_u64().map(|x| x as usize).ok_or_else(|| bad("blocks must be non-negative integers")))
        .collect::<Result<_>>()?;
    let depth = blocks.len().saturating_sub(1).max(1);
    let (space, chain) = match (v.get("space"), v.get("chart")) {
        (Some(s), _) => {
            let space = formspace_from_json(s)?;
            let s1 = match v.get("s1") {
                Some(x) => s1_from_json(x, &space)?,
                None => Vec::new(),
            };
            let chain = build_s_chain(&space, &s1, depth)?;
            (space, chain)
        }
        (None, Some(c)) => {
            let chart = Chart::parse(c.as_str().ok_or_else(|| bad("\"chart\" must be a string"))?)?;
            let u = build_universal(&chart, 1)?;
            let s1 = match v.get("s1") {
                Some(x) => s1_from_json(x, &u.space)?,
                None => u.chain.get(1).to_vec(),
            };
            let chain = build_s_chain(&u.space, &s1, depth)?;
            (u.space, chain)
        }
        (None, None) => return Err(bad("connection needs \"chart\" or \"space\"")),
    };
    let vars = space.vars.clone();
    let size: usize = blocks.iter().sum();
    let mut lam = FormMatrix::zeros(size, vars.len());
    for e in v.get("entries").and_then(Value::as_array).cloned().unwrap_or_default() {
        let Some([r, c, w]) = e.as_array().map(|a| a.as_slice()) else {
            return Err(bad("entries must be [row, col, form] triples"));
        };
        let (Some(r), Some(c)) = (r.as_u64(), c.as_u64()) else {
            return Err(bad("entry indices must be non-negative integers"));
        };
        let (r, c) = (r as usize, c as usize);
        if r >= size || c >= size {
            return Err(Error::DimensionMismatch(format!("entry ({r}, {c}) is outside a {size}×{size} matrix")));
        }
        let w = one_form(w, &vars, &format!("entry ({r}, {c})"))?;
        let s = lam.get(r, c).add(&w);
        lam.set(r, c, s);
    }
    Ok(ConnectionFile { vars, connection: Connection::new(blocks, lam)?, space, chain })
}

fn form_json(w: &OneForm<RatFunc>, vars: &VarNames) -> Value {
    json!(w.c.iter().map(|f| vars.fmt_ratfunc(f)).collect::<Vec<_>>())
}

/// Writes the blocks and nonzero entries of a connection.
pub fn connection_to_json(conn: &Connection, vars: &VarNames) -> Value {
    let mut entries = Vec::new();
    for r in 0..conn.size() {
        for c in 0..conn.size() {
            let w = conn.lambda.get(r, c);
            if !w.is_zero() {
                entries.push(json!([r, c, form_json(w, vars)]));
            }
        }
    }
    json!({ "vars": (0..vars.len()).map(|i| vars.name(i)).collect::<Vec<_>>(), "blocks": conn.blocks, "entries": entries })
}

/// Writes the nonzero entries of M in g = 1 + M.
pub fn gauge_to_json(g: &GaugeTransform, vars: &VarNames) -> Value {
    let n = g.m.nrows();
    let mut entries = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let f = g.m.get(r, c);
            if !f.ris_zero() {
                entries.push(json!([r, c, vars.fmt_ratfunc(f)]));
            }
        }
    }
    json!({ "size": n, "entries": entries })
}

/// Reads a gauge transform in the format of `gauge_to_json`.
pub fn gauge_from_json(v: &Value, vars: &VarNames) -> Result<GaugeTransform> {
    let n = v.get("size").and_then(Value::as_u64).ok_or_else(|| bad("gauge needs \"size\""))? as usize;
    let mut m: Matrix<RatFunc> = Matrix::zeros(n, n);
    for e in v.get("entries").and_then(Value::as_array).cloned().unwrap_or_default() {
        match e.as_array().map(|a| a.as_slice()) {
            Some([Value::Number(r), Value::Number(c), Value::String(f)]) => {
                let (r, c) = (r.as_u64().unwrap_or(u64::MAX) as usize, c.as_u64().unwrap_or(u64::MAX) as usize);
                if r >= n || c >= n {
                    return Err(Error::DimensionMismatch(format!("gauge entry ({r}, {c}) is outside {n}×{n}")));
                }
                m.set(r, c, parse_ratfunc(f, vars)?);
            }
            _ => return Err(bad("gauge entries must be [row, col, function] triples")),
        }
    }
    Ok(GaugeTransform { m })
}
