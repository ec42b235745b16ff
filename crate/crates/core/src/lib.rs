//! Closed-form dissipative dynamics of cat states and Gaussian states in a
//! damped harmonic oscillator, with a truncated Fock-space Lindblad oracle.

pub mod css;
mod dd;
pub mod error;
pub mod fidelity;
pub mod gss;
pub mod moments;
pub mod oracle;
pub mod params;
pub mod search;
pub mod specfun;
pub mod variant;

pub use error::{Error, Result};
pub use moments::CovarianceSnapshot;
pub use params::{phase_point, CssParams, GssParams, ReservoirParams};
pub use specfun::PolyOrder;
pub use variant::FormulaVariant;

pub type Complex = num_complex::Complex64;
