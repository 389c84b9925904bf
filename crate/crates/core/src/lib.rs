//! Numerical toolkit for negatively curved conformal metrics on planar
//! hyperbolic domains.
//!
//! The crate is organised by concern:
//!
//! * [`domain`], [`metric`], [`maps`], [`curvature`]: model domains, conformal
//!   densities and their pullbacks, and the discrete Gauss curvature.
//! * [`distance`], [`oracle`]: hyperbolic distances through covering lifts and
//!   a shortest-path grid oracle that cross-checks them.
//! * [`inequality`]: Ahlfors, Beardon–Minda, Harnack and Hopf functionals.
//! * [`rigidity`]: decay-rate fits that operationalise boundary rigidity
//!   conditions.
//! * [`liouville`]: the radial constant-curvature equation in log-radius
//!   coordinates and its closed-form solution families.
//! * [`witness`]: explicit sharpness witnesses and their limits.
//!
//! Every hyperbolic metric is normalised to curvature −4.

pub mod curvature;
pub mod distance;
pub mod domain;
mod error;
pub mod grammar;
pub mod inequality;
pub mod limits;
pub mod liouville;
pub mod maps;
pub mod metric;
pub mod oracle;
pub mod report;
pub mod rigidity;
pub mod sampling;
pub mod witness;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
