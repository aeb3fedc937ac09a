use super::schain::{explicit_forms, SChain};
use super::{Connection, GaugeTransform};
use crate::error::{Error, Result};
use crate::exactalg::{q_coords, q_rank, FormSpace, OneForm, RatFunc, Ring, Q};
use crate::linalg::Matrix;
use num_traits::Zero;

/// A connection whose depth-i entries all lie in S_i.
#[derive(Clone, Debug)]
pub struct ReducedConnection {
    pub connection: Connection,
    pub chain: SChain,
    pub certified: bool,
}

/// Function atoms whose differentials are linearly independent, in declared
/// order, together with those differentials.
fn exact_basis(space: &FormSpace) -> Vec<(RatFunc, OneForm<RatFunc>)> {
    let n = space.nvars();
    let mut out: Vec<(RatFunc, OneForm<RatFunc>)> = Vec::new();
    for (_, f) in &space.fn_atoms {
        let w = OneForm::d0(f, n);
        if w.is_zero() {
            continue;
        }
        let mut vs: Vec<Vec<RatFunc>> = out.iter().map(|(_, w)| w.c.clone()).collect();
        vs.push(w.c.clone());
        if q_rank(&vs) == vs.len() {
            out.push((f.clone(), w));
        }
    }
    out
}

fn check_depth(conn: &Connection, chain: &SChain) -> Result<()> {
    if conn.depth() > chain.depth() {
        return Err(Error::DimensionMismatch(format!(
            "connection has depth {}, the S chain only reaches {}",
            conn.depth(),
            chain.depth()
        )));
    }
    Ok(())
}

/// Whether every depth-i entry of the connection lies in the span of S_i.
pub fn s_membership(conn: &Connection, space: &FormSpace, chain: &SChain) -> Result<bool> {
    check_depth(conn, chain)?;
    let forms: Vec<Vec<Vec<RatFunc>>> =
        (1..=chain.depth()).map(|i| explicit_forms(space, chain.get(i)).into_iter().map(|w| w.c).collect()).collect();
    for r in 0..conn.size() {
        for c in 0..conn.size() {
            let (br, bc) = (conn.block_of(r), conn.block_of(c));
            if br <= bc {
                continue;
            }
            let w = conn.lambda.get(r, c);
            if !w.is_zero() && q_coords(&w.c, &forms[br - bc - 1]).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Gauges a flat connection into reduced form.
///
/// Blocks are treated row by row from the top, and inside a row from the
/// depth-1 entry outward. Each entry η is written as s + d h with s in S_i and
/// h a combination of function atoms, and the gauge M = −h removes d h. The
/// returned transform g satisfies reduced = conn.gauge(g).
pub fn reduce_to_reduced_form(
    conn: &Connection,
    space: &FormSpace,
    chain: &SChain,
) -> Result<(ReducedConnection, GaugeTransform)> {
    check_depth(conn, chain)?;
    if conn.nvars() != space.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "connection lives on {} coordinates, the form space on {}",
            conn.nvars(),
            space.nvars()
        )));
    }
    if !conn.is_flat() {
        return Err(Error::NotFlat("dΛ + Λ∧Λ is not zero".into()));
    }
    let exact = exact_basis(space);
    let bases: Vec<Vec<Vec<RatFunc>>> = (1..=chain.depth())
        .map(|i| {
            let mut b: Vec<Vec<RatFunc>> = explicit_forms(space, chain.get(i)).into_iter().map(|w| w.c).collect();
            b.extend(exact.iter().map(|(_, w)| w.c.clone()));
            b
        })
        .collect();
    let size = conn.size();
    let mut cur = conn.clone();
    let mut total = GaugeTransform::identity(size);
    for br in 1..conn.blocks.len() {
        for bc in (0..br).rev() {
            let basis = &bases[br - bc - 1];
            let ns = basis.len() - exact.len();
            let mut m: Matrix<RatFunc> = Matrix::zeros(size, size);
            let mut nonzero = false;
            for r in cur.block_range(br) {
                for c in cur.block_range(bc) {
                    let w = cur.lambda.get(r, c);
                    if w.is_zero() {
                        continue;
                    }
                    let x = q_coords(&w.c, basis).ok_or_else(|| {
                        Error::NotReducible(format!("entry ({r}, {c}) of depth {} is not in S_{} + dO", br - bc, br - bc))
                    })?;
                    let mut h = RatFunc::rzero();
                    for (k, (f, _)) in exact.iter().enumerate() {
                        let a: &Q = &x[ns + k];
                        if !a.is_zero() {
                            h = h.radd(&f.scale(a));
                        }
                    }
                    if !h.ris_zero() {
                        m.set(r, c, h.rneg());
                        nonzero = true;
                    }
                }
            }
            if nonzero {
                let step = GaugeTransform { m };
                cur = cur.gauge(&step);
                total = total.then(&step);
            }
        }
    }
    let certified = s_membership(&cur, space, chain)?;
    Ok((ReducedConnection { connection: cur, chain: chain.clone(), certified }, total))
}

#[cfg(test)]
mod tests {
    use super::super::{build_universal, Chart, FormMatrix};
    use super::*;
    use crate::exactalg::{parse_ratfunc, VarNames};

    #[test]
    fn removes_an_exact_entry_and_is_idempotent() {
        let u = build_universal(&Chart::line(vec![Q::zero(), Q::from_integer(1.into())]), 2).unwrap();
        let v = VarNames::new(&["z"]);
        let mut m = Matrix::zeros(u.connection.size(), u.connection.size());
        let last = u.connection.size() - 1;
        m.set(last, 0, parse_ratfunc("3*z^2 - z", &v).unwrap());
        m.set(1, 0, parse_ratfunc("z", &v).unwrap());
        let moved = u.connection.gauge(&GaugeTransform { m });
        assert!(!s_membership(&moved, &u.space, &u.chain).unwrap());
        let (red, g) = reduce_to_reduced_form(&moved, &u.space, &u.chain).unwrap();
        assert!(red.certified);
        assert_eq!(moved.gauge(&g), red.connection);
        assert_eq!(red.connection, u.connection);
        let (again, g2) = reduce_to_reduced_form(&red.connection, &u.space, &u.chain).unwrap();
        assert!(g2.is_identity());
        assert_eq!(again.connection, red.connection);
    }

    #[test]
    fn rejects_non_flat_and_irreducible_input() {
        let u = build_universal(&Chart::line(vec![Q::zero(), Q::from_integer(1.into())]), 1).unwrap();
        let v = VarNames::new(&["z"]);
        let mut lam = FormMatrix::zeros(u.connection.size(), 1);
        lam.set(1, 0, OneForm { c: vec![parse_ratfunc("1/(z+1)", &v).unwrap()] });
        let bad = Connection::new(u.connection.blocks.clone(), lam).unwrap();
        assert!(matches!(reduce_to_reduced_form(&bad, &u.space, &u.chain), Err(Error::NotReducible(_))));

        let p = build_universal(&Chart::thrice_punctured(2), 2).unwrap();
        let v2 = VarNames::new(&["z1", "z2"]);
        let mut lam = p.connection.lambda.clone();
        let w = lam.get(1, 0).add(&OneForm { c: vec![parse_ratfunc("z2", &v2).unwrap(), parse_ratfunc("0", &v2).unwrap()] });
        lam.set(1, 0, w);
        let curved = Connection::new(p.connection.blocks.clone(), lam).unwrap();
        assert!(matches!(reduce_to_reduced_form(&curved, &p.space, &p.chain), Err(Error::NotFlat(_))));
    }
}
