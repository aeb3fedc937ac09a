//! Exact algebra for Chabauty–Kim style computations.
//!
//! Everything here works over the rationals with exact arithmetic. The crate is
//! organised bottom-up:
//!
//! * [`exactalg`]: rationals, polynomials, rational functions, truncated power
//!   series, differential forms and declared form spaces.
//! * [`linalg`]: dense matrices over any exact field.
//! * [`liecore`]: free nilpotent Lie algebras and their quotients, truncated
//!   enveloping algebras, exp/log and ad-series operators.
//! * [`connection`]: unipotent flat connections, reduced forms and the universal
//!   connection on punctured lines and their products.
//! * [`transport`]: the horizontal-section logarithm `J`, the θ̃ system and the
//!   local unipotent Albanese map.
//! * [`intersect`]: jet-level linear relations and non-density certificates.
//! * [`cohomdim`]: dimension counts in Galois cohomology.
//! * [`criteria`]: finiteness criteria evaluated on curve data.
//! * [`formalgroup`]: formal logarithm and exponential of elliptic curves.

pub mod cohomdim;
pub mod connection;
pub mod criteria;
pub mod error;
pub mod exactalg;
pub mod formalgroup;
pub mod intersect;
pub mod liecore;
pub mod linalg;
pub mod transport;

pub use error::{Error, Result};
pub use exactalg::{
    DifferentialForm, FormSpace, Mono, OneForm, Poly, Q, RatFunc, Ring, Field, TruncSeries, TwoForm,
};
pub use liecore::{LieAlgebra, LieAlgebraSpec, LieElement, Quotient, Uea, UeaElement};
pub use linalg::Matrix;
