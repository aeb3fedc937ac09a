//! Free nilpotent Lie algebras and their quotients, truncated enveloping
//! algebras, exp/log, ad-series operators and metabelian bookkeeping.

mod adseries;
mod lie;
pub mod metabelian;
mod spec;
mod uea;
pub mod words;

pub use adseries::{apply_ad_series, bernoulli, AdSeries};
pub use lie::{graded_dims, LieAlgebra, LieElement};
pub use spec::{parse_lie_expr, LieAlgebraSpec, Quotient};
pub use uea::{Uea, UeaElement, UeaTensor};
