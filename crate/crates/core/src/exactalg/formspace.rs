use super::forms::{OneForm, TwoForm};
use super::parse::VarNames;
use super::ratfunc::RatFunc;
use super::rational::{Ring, Q};
use super::span::q_coords;
use crate::error::{Error, Result};
use num_traits::Zero;

/// A declared 1-form atom: either an explicit form on the chart, or a symbol
/// known only through its exterior derivative.
#[derive(Clone, Debug, PartialEq)]
pub enum OneAtom {
    Concrete(OneForm<RatFunc>),
    Abstract { d: TwoForm<RatFunc> },
}

/// Finite-dimensional space of forms on a chart with coordinates `vars`.
///
/// Functions, 1-forms and 2-forms are Q-linear combinations of named atoms.
/// Function atoms supply the exact parts d h used by gauge reduction.
#[derive(Clone, Debug)]
pub struct FormSpace {
    pub vars: VarNames,
    pub fn_atoms: Vec<(String, RatFunc)>,
    pub one_atoms: Vec<(String, OneAtom)>,
    pub two_atoms: Vec<(String, TwoForm<RatFunc>)>,
    two_basis: Vec<Vec<RatFunc>>,
    one_basis: Vec<Vec<RatFunc>>,
}

/// A form of degree 0, 1 or 2. Degrees 1 and 2 are coordinate vectors over
/// the declared atoms.
#[derive(Clone, Debug, PartialEq)]
pub enum DifferentialForm {
    Zero(RatFunc),
    One(Vec<Q>),
    Two(Vec<Q>),
}

impl FormSpace {
    pub fn new(
        vars: VarNames,
        fn_atoms: Vec<(String, RatFunc)>,
        one_atoms: Vec<(String, OneAtom)>,
        two_atoms: Vec<(String, TwoForm<RatFunc>)>,
    ) -> Result<Self> {
        let n = vars.len();
        for (name, a) in &one_atoms {
            let ok = match a {
                OneAtom::Concrete(w) => w.c.len() == n,
                OneAtom::Abstract { d } => d.n == n,
            };
            if !ok {
                return Err(Error::DimensionMismatch(format!("atom {name} is not on a {n}-coordinate chart")));
            }
        }
        for (name, t) in &two_atoms {
            if t.n != n {
                return Err(Error::DimensionMismatch(format!("2-form atom {name} is not on a {n}-coordinate chart")));
            }
        }
        let two_basis = two_atoms.iter().map(|(_, t)| t.c.clone()).collect();
        let one_basis = one_atoms
            .iter()
            .map(|(_, a)| match a {
                OneAtom::Concrete(w) => w.c.clone(),
                OneAtom::Abstract { .. } => vec![RatFunc::rzero(); n],
            })
            .collect();
        let fs = FormSpace { vars, fn_atoms, one_atoms, two_atoms, two_basis, one_basis };
        for (name, a) in &fs.one_atoms {
            if let OneAtom::Abstract { d } = a {
                if !d.d().is_zero() {
                    return Err(Error::InvalidInput(format!("declared d of {name} is not closed, so d∘d ≠ 0")));
                }
                if fs.two_coords(d).is_none() {
                    return Err(Error::OutOfSpace(format!("declared d of {name} is outside the 2-form span")));
                }
            }
        }
        Ok(fs)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_one(&self) -> usize {
        self.one_atoms.len()
    }

    pub fn n_two(&self) -> usize {
        self.two_atoms.len()
    }

    pub fn one_index(&self, name: &str) -> Option<usize> {
        self.one_atoms.iter().position(|(n, _)| n == name)
    }

    pub fn is_concrete(&self, a: usize) -> bool {
        matches!(self.one_atoms[a].1, OneAtom::Concrete(_))
    }

    /// Coordinates of an explicit 1-form over the concrete atoms.
    pub fn one_coords(&self, w: &OneForm<RatFunc>) -> Option<Vec<Q>> {
        let concrete: Vec<usize> = (0..self.n_one()).filter(|&a| self.is_concrete(a)).collect();
        let basis: Vec<Vec<RatFunc>> = concrete.iter().map(|&a| self.one_basis[a].clone()).collect();
        let x = q_coords(&w.c, &basis)?;
        let mut out = vec![Q::zero(); self.n_one()];
        for (k, &a) in concrete.iter().enumerate() {
            out[a] = x[k].clone();
        }
        Some(out)
    }

    pub fn two_coords(&self, t: &TwoForm<RatFunc>) -> Option<Vec<Q>> {
        q_coords(&t.c, &self.two_basis)
    }

    /// Explicit form of a coordinate vector; fails if an abstract atom occurs.
    pub fn concrete_one(&self, v: &[Q]) -> Result<OneForm<RatFunc>> {
        let mut w = OneForm::zero(self.nvars());
        for (a, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match &self.one_atoms[a].1 {
                OneAtom::Concrete(f) => w = w.add(&f.scale(c)),
                OneAtom::Abstract { .. } => {
                    return Err(Error::OutOfSpace(format!("atom {} has no explicit expression", self.one_atoms[a].0)))
                }
            }
        }
        Ok(w)
    }

    pub fn concrete_two(&self, v: &[Q]) -> TwoForm<RatFunc> {
        let mut t = TwoForm::zero(self.nvars());
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                t = t.add(&self.two_atoms[a].1.scale(c));
            }
        }
        t
    }

    /// Exterior derivative of a 1-form atom, as an explicit 2-form.
    pub fn d_atom_form(&self, a: usize) -> TwoForm<RatFunc> {
        match &self.one_atoms[a].1 {
            OneAtom::Concrete(w) => w.d(),
            OneAtom::Abstract { d } => d.clone(),
        }
    }

    /// Exterior derivative of a 1-form atom in 2-form coordinates.
    pub fn d_atom(&self, a: usize) -> Result<Vec<Q>> {
        self.two_coords(&self.d_atom_form(a))
            .ok_or_else(|| Error::OutOfSpace(format!("d of {} is outside the 2-form span", self.one_atoms[a].0)))
    }

    pub fn wedge_atoms(&self, a: usize, b: usize) -> Result<Vec<Q>> {
        let (OneAtom::Concrete(x), OneAtom::Concrete(y)) = (&self.one_atoms[a].1, &self.one_atoms[b].1) else {
            return Err(Error::OutOfSpace(format!("wedge of {} and {} is undeclared", self.one_atoms[a].0, self.one_atoms[b].0)));
        };
        self.two_coords(&x.wedge(y))
            .ok_or_else(|| Error::OutOfSpace(format!("wedge of {} and {} is outside the 2-form span", self.one_atoms[a].0, self.one_atoms[b].0)))
    }

    pub fn d(&self, f: &DifferentialForm) -> Result<DifferentialForm> {
        match f {
            DifferentialForm::Zero(h) => {
                let w = OneForm::d0(h, self.nvars());
                self.one_coords(&w).map(DifferentialForm::One).ok_or_else(|| Error::OutOfSpace("d of the function leaves the 1-form span".into()))
            }
            DifferentialForm::One(v) => {
                let mut t = TwoForm::zero(self.nvars());
                for (a, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        t = t.add(&self.d_atom_form(a).scale(c));
                    }
                }
                self.two_coords(&t).map(DifferentialForm::Two).ok_or_else(|| Error::OutOfSpace("d of the 1-form leaves the 2-form span".into()))
            }
            DifferentialForm::Two(_) => Err(Error::InvalidInput("d is only defined on forms of degree at most 1".into())),
        }
    }

    pub fn wedge(&self, a: &DifferentialForm, b: &DifferentialForm) -> Result<DifferentialForm> {
        let (DifferentialForm::One(x), DifferentialForm::One(y)) = (a, b) else {
            return Err(Error::InvalidInput("wedge takes two 1-forms".into()));
        };
        let mut acc = vec![Q::zero(); self.n_two()];
        for (i, ci) in x.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in y.iter().enumerate() {
                if cj.is_zero() || i == j {
                    continue;
                }
                let w = self.wedge_atoms(i, j)?;
                let s = ci * cj;
                for (k, wk) in w.iter().enumerate() {
                    acc[k] += &s * wk;
                }
            }
        }
        Ok(DifferentialForm::Two(acc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_ratfunc;
    use crate::exactalg::rational::qi;

    fn two_var_space() -> FormSpace {
        let v = VarNames::new(&["z1", "z2"]);
        let rf = |s: &str| parse_ratfunc(s, &v).unwrap();
        let one = vec![
            ("dz1/z1".to_string(), OneAtom::Concrete(OneForm::basis(2, 0, rf("1/z1")))),
            ("dz2/z2".to_string(), OneAtom::Concrete(OneForm::basis(2, 1, rf("1/z2")))),
            ("dz1".to_string(), OneAtom::Concrete(OneForm::basis(2, 0, rf("1")))),
            ("dz2".to_string(), OneAtom::Concrete(OneForm::basis(2, 1, rf("1")))),
        ];
        let two = vec![
            ("dz1^dz2/(z1 z2)".to_string(), TwoForm { n: 2, c: vec![rf("1/(z1*z2)")] }),
            ("dz1^dz2".to_string(), TwoForm { n: 2, c: vec![rf("1")] }),
        ];
        let fns = vec![("z1*z2".to_string(), rf("z1*z2"))];
        FormSpace::new(v, fns, one, two).unwrap()
    }

    #[test]
    fn d_of_functions_and_dlog() {
        let fs = two_var_space();
        let prod = DifferentialForm::Zero(fs.fn_atoms[0].1.clone());
        assert!(matches!(fs.d(&prod), Err(Error::OutOfSpace(_))));
        let lin = DifferentialForm::Zero(parse_ratfunc("z1 + 2*z2", &fs.vars).unwrap());
        assert_eq!(fs.d(&lin).unwrap(), DifferentialForm::One(vec![qi(0), qi(0), qi(1), qi(2)]));
        let dlog = DifferentialForm::One(vec![qi(1), qi(0), qi(0), qi(0)]);
        assert_eq!(fs.d(&dlog).unwrap(), DifferentialForm::Two(vec![qi(0), qi(0)]));
    }

    #[test]
    fn wedge_table() {
        let fs = two_var_space();
        let a = DifferentialForm::One(vec![qi(1), qi(0), qi(0), qi(0)]);
        let b = DifferentialForm::One(vec![qi(0), qi(1), qi(0), qi(0)]);
        assert_eq!(fs.wedge(&a, &b).unwrap(), DifferentialForm::Two(vec![qi(1), qi(0)]));
        assert_eq!(fs.wedge(&a, &a).unwrap(), DifferentialForm::Two(vec![qi(0), qi(0)]));
    }
}
