//! Model hyperbolic domains.

use std::fmt;

use crate::{Error, Result, C64};

/// One of the planar model domains with a closed-form hyperbolic metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainModel {
    /// Unit disk `|z| < 1`.
    Disk,
    /// Punctured unit disk `0 < |z| < 1`.
    PuncturedDisk,
    /// Punctured disk of radius `R`, `0 < |z| < R`.
    PuncturedDiskR(f64),
    /// Annulus `r < |z| < 1`.
    Annulus(f64),
    /// Upper half-plane `Im z > 0`.
    HalfPlane,
    /// Horizontal strip `0 < Im z < h`.
    Strip(f64),
}

impl DomainModel {
    pub fn punctured_disk_radius(radius: f64) -> Result<Self> {
        if !(radius >= 1.0) || !radius.is_finite() {
            return Err(Error::BadParameter(format!(
                "punctured disk radius must be >= 1, got {radius}"
            )));
        }
        Ok(Self::PuncturedDiskR(radius))
    }

    pub fn annulus(inner: f64) -> Result<Self> {
        if !(inner > 0.0 && inner < 1.0) {
            return Err(Error::BadParameter(format!(
                "annulus inner radius must lie in (0, 1), got {inner}"
            )));
        }
        Ok(Self::Annulus(inner))
    }

    pub fn strip(height: f64) -> Result<Self> {
        if !(height > 0.0) || !height.is_finite() {
            return Err(Error::BadParameter(format!(
                "strip height must be positive, got {height}"
            )));
        }
        Ok(Self::Strip(height))
    }

    /// Exact membership test.
    pub fn contains(&self, z: C64) -> bool {
        let rho = z.norm();
        match *self {
            Self::Disk => rho < 1.0,
            Self::PuncturedDisk => rho > 0.0 && rho < 1.0,
            Self::PuncturedDiskR(big_r) => rho > 0.0 && rho < big_r,
            Self::Annulus(r) => rho > r && rho < 1.0,
            Self::HalfPlane => z.im > 0.0,
            Self::Strip(h) => z.im > 0.0 && z.im < h,
        }
    }

    /// Euclidean distance from `z` to the nearest boundary component, punctures included.
    pub fn boundary_distance(&self, z: C64) -> f64 {
        let rho = z.norm();
        match *self {
            Self::Disk => 1.0 - rho,
            Self::PuncturedDisk => rho.min(1.0 - rho),
            Self::PuncturedDiskR(big_r) => rho.min(big_r - rho),
            Self::Annulus(r) => (rho - r).min(1.0 - rho),
            Self::HalfPlane => z.im,
            Self::Strip(h) => z.im.min(h - z.im),
        }
    }

    /// Isolated boundary points that the density treats as singularities.
    pub fn punctures(&self) -> &'static [C64] {
        const ORIGIN: [C64; 1] = [C64::new(0.0, 0.0)];
        match self {
            Self::PuncturedDisk | Self::PuncturedDiskR(_) => &ORIGIN,
            _ => &[],
        }
    }
}

impl fmt::Display for DomainModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Disk => write!(f, "disk"),
            Self::PuncturedDisk => write!(f, "pdisk"),
            Self::PuncturedDiskR(big_r) => write!(f, "pdiskR:{big_r}"),
            Self::Annulus(r) => write!(f, "annulus:{r}"),
            Self::HalfPlane => write!(f, "halfplane"),
            Self::Strip(h) => write!(f, "strip:{h}"),
        }
    }
}
