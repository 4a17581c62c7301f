//! Certified construction of the Larson-Penston profile: Taylor recurrences
//! at the sonic point and the origin, growth-constant certificates, and the
//! enclosures of the sonic point y* and the central density rho(0).

pub mod growth;
pub mod origin;
pub mod solve;
pub mod sonic;

pub use growth::{verify_origin_growth, verify_sonic_growth, GrowthConstants};
pub use origin::{origin_coeffs, OriginSeries};
pub use solve::{enclose_rho0, enclose_ystar, Rho0Enclosure, SolveOptions, YstarEnclosure};
pub use sonic::{sonic_coeffs, SonicSeries};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("recurrence denominator straddles zero")]
    SingularRecurrence,
    #[error("sonic-point parameter outside (2,3)")]
    YstarRange,
    #[error("central density parameter outside the supported bracket")]
    Rho0Range,
}
