//! Validated numerics for the Larson-Penston self-similar collapse profile:
//! certified construction of the profile, enclosure of the sonic point and
//! central density, and eigenvalue-exclusion certificates for the linearised
//! operator on the strip 0 <= Re(lambda) <= 1.
//!
//! All core arithmetic is generic over the endpoint scalar through
//! [`scalar::Scalar`]; the proof-scale runs use the `f64` aliases exported
//! at the crate root.

pub mod cert;
pub mod cinterval;
pub mod deriv;
pub mod interval;
pub mod jet;
pub mod lp;
pub mod ode;
pub mod round;
pub mod scalar;
pub mod series;
pub mod spectral;
pub mod sumbounds;
pub mod taylor;
pub mod transcend;

pub use cinterval::CInterval;
pub use interval::{Interval, IntervalError};
pub use scalar::Scalar;

/// Concrete binary64 instantiations used by the provers and the CLI.
pub type Interval64 = Interval<f64>;
pub type CInterval64 = CInterval<f64>;
pub type Interval32 = Interval<f32>;
pub type CInterval32 = CInterval<f32>;
