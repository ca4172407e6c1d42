//! Higher-order CR invariants of real hypersurfaces given by polynomial
//! defining equations `v = Ψ(z, z̄, u)`.
//!
//! * [`poly`]: exact polynomial arithmetic, parsing, line restriction, real Hessians.
//! * [`planar`]: invariants in ℂ², normal-form checks and stability-group classification.
//! * [`multitype`]: weights, distinguished weights and Catlin multitype in fixed coordinates.
//! * [`convexity`]: Kohn-Nirenberg thresholds, numbers and the convexifiability verdict.
//! * [`cli`]: the `crinv` command-line front end.

pub mod cli;
pub mod convexity;
pub mod error;
pub mod multitype;
pub mod optim;
pub mod planar;
pub mod poly;

pub use error::{Error, Result};
