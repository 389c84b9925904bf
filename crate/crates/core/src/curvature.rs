//! Finite-difference Gauss curvature `κ = −Δ(log λ)/λ²`.

use serde::Serialize;

use crate::metric::MetricDensity;
use crate::{Error, Result, C64};

pub const DEFAULT_STENCIL: f64 = 1e-3;

/// Curvature value and the stencil width that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureEstimate {
    pub kappa: f64,
    pub h_used: f64,
}

/// Standard 5-point Laplacian of `f` at `z`.
pub fn five_point_laplacian<F>(f: F, z: C64, h: f64) -> f64
where
    F: Fn(C64) -> f64,
{
    let centre = f(z);
    let sum = f(z + C64::new(h, 0.0))
        + f(z - C64::new(h, 0.0))
        + f(z + C64::new(0.0, h))
        + f(z - C64::new(0.0, h));
    (sum - 4.0 * centre) / (h * h)
}

/// Gauss curvature of `metric` at `z` from the 5-point Laplacian of `log λ`.
///
/// On model domains the stencil shrinks to half the distance to the boundary
/// when `h` would reach it; the width actually used is returned.
pub fn curvature_at(metric: &MetricDensity, z: C64, h: f64) -> Result<CurvatureEstimate> {
    if !(h > 0.0) {
        return Err(Error::BadParameter(format!("stencil width must be positive, got {h}")));
    }
    let centre = metric.log_density_at(z)?;
    let h_used = match metric.region().model() {
        Some(domain) => h.min(0.5 * domain.boundary_distance(z)),
        None => h,
    };

    let offsets = [
        C64::new(h_used, 0.0),
        C64::new(-h_used, 0.0),
        C64::new(0.0, h_used),
        C64::new(0.0, -h_used),
    ];
    let mut sum = 0.0;
    for offset in offsets {
        let value = metric.log_density_at(z + offset).map_err(|err| match err {
            Error::OutsideDomain(..) | Error::SingularPoint(..) => Error::StencilOutsideDomain(z),
            other => other,
        })?;
        if !value.is_finite() {
            return Err(Error::NonpositiveDensity(z));
        }
        sum += value;
    }
    if !centre.is_finite() {
        return Err(Error::NonpositiveDensity(z));
    }

    let laplacian = (sum - 4.0 * centre) / (h_used * h_used);
    Ok(CurvatureEstimate {
        kappa: -laplacian * (-2.0 * centre).exp(),
        h_used,
    })
}
