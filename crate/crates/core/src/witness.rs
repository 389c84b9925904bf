//! Sharpness witnesses and their boundary limits.
//!
//! Near `x = 1` every functional is evaluated through `ε = 1 − x`, which is
//! exact in floating point, with the cancelling leading terms removed by hand.

use std::f64::consts::PI;

use serde::Serialize;

use crate::distance::{dist_annulus, dist_disk, DEFAULT_WINDING};
use crate::domain::DomainModel;
use crate::maps::HolomorphicMap;
use crate::report::Provenance;
use crate::{limits, Error, Result, C64};

/// Stated limit of `((1 − x²)·φ*λ_D(x) − 1)/(1 − x)²`.
pub const PHI_EXPANSION_EXPECTED: f64 = -1.0 / 12.0;
/// Stated limit of `(φ*λ_D/λ_D − 1)·e^{4 d_D(x, 0)}`.
pub const DISK_FUNCTIONAL_EXPECTED: f64 = -1.0 / 3.0;
/// Limit of `(λ_{D′}(f)|f′|/λ_{D′} − 1)·log(1/|z|)` for the punctured-disk witness.
pub const EXAMPLE1_EXPECTED: f64 = -1.0;

pub fn phi_map() -> HolomorphicMap {
    HolomorphicMap::phi()
}

pub fn example1_map() -> HolomorphicMap {
    HolomorphicMap::example1()
}

/// `−π²/(6 log²(1/r)) − 1/3`.
pub fn annulus_expected(r: f64) -> f64 {
    let width = -r.ln();
    -PI * PI / (6.0 * width * width) - 1.0 / 3.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessLimit {
    pub name: String,
    /// `[re, im]` of every sample.
    pub sample_points: Vec<[f64; 2]>,
    pub functional_values: Vec<f64>,
    /// Aitken Δ² estimate from the last three values.
    pub extrapolated_limit: f64,
    pub expected: f64,
    pub provenance: Provenance,
    /// Consecutive differences of the tail shrink with a common sign.
    pub trend_converging: bool,
}

impl WitnessLimit {
    fn from_samples(name: String, points: Vec<C64>, values: Vec<f64>, expected: f64) -> Self {
        let trend = limits::trend(&values, 1.0);
        Self {
            name,
            sample_points: points.iter().map(|z| [z.re, z.im]).collect(),
            extrapolated_limit: limits::aitken(&values).unwrap_or(f64::NAN),
            functional_values: values,
            expected,
            provenance: Provenance::Analytic,
            trend_converging: trend.converging,
        }
    }

    pub fn last_value(&self) -> f64 {
        self.functional_values.last().copied().unwrap_or(f64::NAN)
    }
}

/// `N/D = (1 − x²)·φ*λ_D(x)` with `N − D` and `D` as polynomials in `ε`.
///
/// `N = (2 − ε)(1 − ε²/4)`, `D = (1 − ε²/12)(2 − ε + ε³/12)`.
fn phi_parts(eps: f64) -> (f64, f64) {
    let e2 = eps * eps;
    let e3 = e2 * eps;
    let e5 = e3 * e2;
    let num_minus_den = -e2 / 3.0 + e3 / 12.0 + e5 / 144.0;
    let den = (1.0 - e2 / 12.0) * (2.0 - eps + e3 / 12.0);
    (num_minus_den, den)
}

fn unit_interval(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutsideDomain(C64::new(x, 0.0), "0 < x < 1".into()));
    }
    Ok(1.0 - x)
}

/// `((1 − x²)·φ*λ_D(x) − 1)/(1 − x)²`.
pub fn phi_functional(x: f64) -> Result<f64> {
    let eps = unit_interval(x)?;
    let (diff, den) = phi_parts(eps);
    Ok(diff / (den * eps * eps))
}

/// `(φ*λ_D(x)/λ_D(x) − 1)·e^{4 d_D(x, 0)}`.
pub fn disk_functional(x: f64) -> Result<f64> {
    let eps = unit_interval(x)?;
    let (diff, den) = phi_parts(eps);
    let d = dist_disk(C64::new(x, 0.0), C64::new(0.0, 0.0))?.value;
    Ok(diff / den * (4.0 * d).exp())
}

/// `s/sinh s − 1`.
fn s_over_sinh_minus_one(s: f64) -> f64 {
    if s.abs() < 1e-2 {
        let s2 = s * s;
        s2 * (-1.0 / 6.0 + s2 * (7.0 / 360.0 - s2 * 31.0 / 15120.0))
    } else {
        s / s.sinh() - 1.0
    }
}

/// `sin u/u − 1`.
fn sinc_minus_one(u: f64) -> f64 {
    if u.abs() < 1e-2 {
        let u2 = u * u;
        u2 * (-1.0 / 6.0 + u2 * (1.0 / 120.0 - u2 / 5040.0))
    } else {
        u.sin() / u - 1.0
    }
}

/// `φ*λ_D(x)/λ_{A_r}(x) − 1`, as `(1 + A)(1 + B)(1 + C) − 1` with
/// `A = φ*λ_D/λ_D − 1`, `B = s/sinh s − 1`, `C = sinc(πs/L) − 1`,
/// `s = log(1/x)`, `L = log(1/r)`.
pub fn annulus_ratio_minus_one(r: f64, x: f64) -> Result<f64> {
    let domain = DomainModel::annulus(r)?;
    if !domain.contains(C64::new(x, 0.0)) {
        return Err(Error::OutsideDomain(C64::new(x, 0.0), domain.to_string()));
    }
    let eps = 1.0 - x;
    let (diff, den) = phi_parts(eps);
    let a = diff / den;
    let s = -(-eps).ln_1p();
    let b = s_over_sinh_minus_one(s);
    let c = sinc_minus_one(PI * s / -r.ln());
    Ok(a + b + c + a * b + a * c + b * c + a * b * c)
}

/// Distance from the core circle with the strip-cover calibration
/// `d̃ = d_{A_r}(x, √r) + ½ log(π/(2L))`, under which `e^{4d̃} ~ 1/log²(1/x)`.
pub fn annulus_calibrated_distance(r: f64, x: f64) -> Result<f64> {
    let d = dist_annulus(C64::new(x, 0.0), C64::new(r.sqrt(), 0.0), r, DEFAULT_WINDING)?.value;
    Ok(d + 0.5 * (PI / (2.0 * -r.ln())).ln())
}

/// `(φ*λ_D(x)/λ_{A_r}(x) − 1)·e^{4d̃}` with the calibrated distance.
pub fn annulus_functional(r: f64, x: f64) -> Result<f64> {
    let ratio = annulus_ratio_minus_one(r, x)?;
    Ok(ratio * (4.0 * annulus_calibrated_distance(r, x)?).exp())
}

/// Same functional with the uncalibrated `d_{A_r}(x, √r)`.
pub fn annulus_functional_raw(r: f64, x: f64) -> Result<f64> {
    let ratio = annulus_ratio_minus_one(r, x)?;
    let d = dist_annulus(C64::new(x, 0.0), C64::new(r.sqrt(), 0.0), r, DEFAULT_WINDING)?.value;
    Ok(ratio * (4.0 * d).exp())
}

/// `(λ_{D′}(f(z))|f′(z)|/λ_{D′}(z) − 1)·log(1/|z|)` through the closed-form
/// ratio `a·ℓ/(ℓ + b)` with `a = |1 − 4z + z²|/|1 − z|²`,
/// `b = (1 − |z|²)/|1 − z|²`, `ℓ = log(1/|z|)`.
pub fn example1_functional(z: C64) -> Result<f64> {
    if !DomainModel::PuncturedDisk.contains(z) {
        return Err(Error::OutsideDomain(z, "pdisk".into()));
    }
    let one_minus = (1.0 - z).norm_sqr();
    let a = (1.0 - 4.0 * z + z * z).norm() / one_minus;
    let b = (1.0 - z.norm_sqr()) / one_minus;
    let ell = -z.norm().ln();
    Ok(((a - 1.0) * ell - b) / (ell + b) * ell)
}

fn increasing_to_one(x_values: &[f64]) -> Result<()> {
    if x_values.len() < 3 || x_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::BadParameter("need at least three increasing samples".into()));
    }
    Ok(())
}

/// `x = 1 − 10^{−k}` for `k` in `ks`.
pub fn approach_one(ks: std::ops::RangeInclusive<i32>) -> Vec<f64> {
    ks.map(|k| 1.0 - 10f64.powi(-k)).collect()
}

pub fn phi_expansion_check(x_values: &[f64]) -> Result<WitnessLimit> {
    increasing_to_one(x_values)?;
    let values = x_values.iter().map(|&x| phi_functional(x)).collect::<Result<Vec<_>>>()?;
    let points = x_values.iter().map(|&x| C64::new(x, 0.0)).collect();
    Ok(WitnessLimit::from_samples("phi".into(), points, values, PHI_EXPANSION_EXPECTED))
}

pub fn disk_functional_limit(x_values: &[f64]) -> Result<WitnessLimit> {
    increasing_to_one(x_values)?;
    let values = x_values.iter().map(|&x| disk_functional(x)).collect::<Result<Vec<_>>>()?;
    let points = x_values.iter().map(|&x| C64::new(x, 0.0)).collect();
    Ok(WitnessLimit::from_samples("phi-disk".into(), points, values, DISK_FUNCTIONAL_EXPECTED))
}

/// Default sequence `|z| = 10^{−2^j}`, `j = 2..5`, along the positive axis.
///
/// `log(1/|z|)` doubles along it, matching the geometric error `O(1/log(1/|z|))`
/// that Aitken's Δ² removes.
pub fn example1_default_points() -> Vec<C64> {
    (2..=5).map(|j| C64::new(10f64.powi(-(1 << j)), 0.0)).collect()
}

pub fn example1_limit(z_values: &[C64]) -> Result<WitnessLimit> {
    if z_values.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: z_values.len(),
        });
    }
    let values = z_values.iter().map(|&z| example1_functional(z)).collect::<Result<Vec<_>>>()?;
    Ok(WitnessLimit::from_samples("example1".into(), z_values.to_vec(), values, EXAMPLE1_EXPECTED))
}

pub fn annulus_sharpness_limit(r: f64, x_values: &[f64]) -> Result<WitnessLimit> {
    increasing_to_one(x_values)?;
    let values = x_values.iter().map(|&x| annulus_functional(r, x)).collect::<Result<Vec<_>>>()?;
    let points = x_values.iter().map(|&x| C64::new(x, 0.0)).collect();
    Ok(WitnessLimit::from_samples(format!("annulus-sharpness:{r}"), points, values, annulus_expected(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricDensity;

    fn pulled_disk(x: f64) -> f64 {
        MetricDensity::pullback(&MetricDensity::disk(), &phi_map(), DomainModel::Disk)
            .density_at(C64::new(x, 0.0))
            .unwrap()
    }

    #[test]
    fn phi_functional_matches_direct_evaluation() {
        for x in [0.3, 0.7, 0.9, 0.99] {
            let direct = ((1.0 - x * x) * pulled_disk(x) - 1.0) / ((1.0 - x) * (1.0 - x));
            let series = phi_functional(x).unwrap();
            assert!((direct - series).abs() < 1e-9 * (1.0 / (1.0 - x)).powi(2), "{x}: {direct} vs {series}");
        }
    }

    #[test]
    fn phi_expansion_coefficient_is_minus_one_sixth() {
        let limit = phi_expansion_check(&approach_one(1..=6)).unwrap();
        assert!((limit.extrapolated_limit + 1.0 / 6.0).abs() < 1e-9);
        assert!(limit.trend_converging);
        let disk = disk_functional_limit(&approach_one(1..=6)).unwrap();
        assert!((disk.extrapolated_limit + 2.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn disk_functional_matches_direct_evaluation() {
        let x: f64 = 0.9;
        let ratio = pulled_disk(x) * (1.0 - x * x);
        let direct = (ratio - 1.0) * ((1.0 + x) / (1.0 - x)).powi(2);
        assert!((direct - disk_functional(x).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn annulus_ratio_matches_direct_evaluation() {
        let r = 0.5;
        let annulus = MetricDensity::annulus(r).unwrap();
        for x in [0.75, 0.9, 0.99] {
            let direct = pulled_disk(x) / annulus.density_at(C64::new(x, 0.0)).unwrap() - 1.0;
            assert!((direct - annulus_ratio_minus_one(r, x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn annulus_limit() {
        let r = 0.5;
        let limit = annulus_sharpness_limit(r, &approach_one(2..=5)).unwrap();
        assert!((limit.extrapolated_limit - annulus_expected(r)).abs() < 1e-2, "{limit:?}");
        assert!((annulus_expected(0.5) + 3.757_05).abs() < 1e-5);
        assert!(annulus_expected(1e-300).abs() - 1.0 / 3.0 < 1e-2);
    }

    #[test]
    fn calibration_matches_log_asymptotic() {
        let r: f64 = 0.5;
        let x: f64 = 1.0 - 1e-6;
        let s = -x.ln();
        let scaled = (4.0 * annulus_calibrated_distance(r, x).unwrap()).exp() * s * s;
        assert!((scaled - 1.0).abs() < 1e-5);
    }

    #[test]
    fn example1_values() {
        let map = example1_map();
        let z = C64::new(0.05, 0.02);
        let pdisk = MetricDensity::punctured_disk();
        let direct = pdisk.density_at(map.eval(z)).unwrap() * map.derivative(z).norm() / pdisk.density_at(z).unwrap();
        let expected = (direct - 1.0) * -z.norm().ln();
        assert!((example1_functional(z).unwrap() - expected).abs() < 1e-12);
        assert!((example1_functional(C64::new(1e-3, 0.0)).unwrap() + 1.0).abs() < 0.2);
        let limit = example1_limit(&example1_default_points()).unwrap();
        assert!((limit.extrapolated_limit + 1.0).abs() < 2e-2, "{limit:?}");
        let off_axis: Vec<C64> = example1_default_points().iter().map(|z| z * C64::new(0.0, 1.0)).collect();
        let limit = example1_limit(&off_axis).unwrap();
        assert!((limit.extrapolated_limit + 1.0).abs() < 2e-2, "{limit:?}");
    }

    #[test]
    fn maps_stay_inside() {
        let phi = phi_map();
        let f = example1_map();
        for z in crate::sampling::polar_grid(40, 90, 1e-3, 0.9) {
            assert!(phi.eval(z).norm() < 1.0);
            let w = f.eval(z).norm();
            assert!(w > 0.0 && w < 1.0);
        }
    }

    #[test]
    fn witness_ratios_are_strictly_below_one() {
        for x in approach_one(1..=6) {
            assert!(phi_functional(x).unwrap() < 0.0);
            assert!(annulus_ratio_minus_one(0.5, x).unwrap() < 0.0);
        }
        for z in example1_default_points() {
            assert!(example1_functional(z).unwrap() < 0.0);
        }
    }
}
