//! Exact arithmetic substrate.
//!
//! Polynomials, rational functions and series do not store variable names;
//! variables are addressed by index and names are supplied when printing or
//! parsing. Monomials are ordered graded-lexicographically with the first
//! variable dominating.

mod formspace;
mod forms;
mod mono;
mod parse;
mod poly;
mod ratfunc;
mod rational;
mod series;
mod span;

pub use formspace::{DifferentialForm, FormSpace, OneAtom};
pub use forms::{pullback, pullback_series, Differential, OneForm, ThreeForm, TwoForm};
pub use mono::Mono;
pub use parse::{parse_poly, parse_ratfunc, parse_rational, VarNames};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{q, qi, Field, Ring, Q};
pub use series::{jet_expand, jet_expand_form, TruncSeries};
pub use span::{q_coords, q_relations, q_rank};
