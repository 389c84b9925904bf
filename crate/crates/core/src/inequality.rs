//! Pointwise comparison inequalities and the functionals built on them.

use std::f64::consts::PI;

use serde::Serialize;

use crate::curvature::{curvature_at, DEFAULT_STENCIL};
use crate::distance::golden_max;
use crate::domain::DomainModel;
use crate::metric::MetricDensity;
use crate::report::{Check, Provenance, VerificationReport};
use crate::{Error, Result, C64};

/// Ahlfors tolerance for closed-form densities.
pub const AHLFORS_TOL_CLOSED: f64 = 1e-12;
/// Ahlfors tolerance when the metric is a pullback.
pub const AHLFORS_TOL_PULLBACK: f64 = 1e-9;
/// Circle samples used by [`boundary_max_ratio`].
pub const BOUNDARY_SAMPLES: usize = 720;

pub const CURVATURE_ASSUMPTION: &str = "curvature <= -4 everywhere (spot-checked on the sample, not certified)";

fn punctured(z: C64, what: &str) -> Result<()> {
    let rho = z.norm();
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDomain(z, what.into()))
    }
}

/// `λ(z)/λ_ref(z) − 1`, through log densities.
pub fn ratio_minus_one(metric: &MetricDensity, reference: &MetricDensity, z: C64) -> Result<f64> {
    Ok(metric.log_ratio_at(reference, z)?.exp_m1())
}

/// Largest `κ + 4` over up to `limit` evenly chosen points of `grid`.
fn curvature_excess(metric: &MetricDensity, grid: &[C64], limit: usize) -> f64 {
    let stride = (grid.len() / limit.max(1)).max(1);
    // The stencil error grows like (h/dist)²; only well-separated points are
    // informative. Near a zero of a pulled-back density log λ is unresolved.
    let clear = |z: C64| {
        let away = match metric.region().model() {
            Some(domain) => domain.boundary_distance(z) >= 50.0 * DEFAULT_STENCIL,
            None => true,
        };
        let resolved = || {
            let Ok(centre) = metric.log_density_at(z) else {
                return false;
            };
            [C64::new(1.0, 0.0), C64::new(0.0, 1.0)].iter().all(|&dir| {
                metric
                    .log_density_at(z + 10.0 * DEFAULT_STENCIL * dir)
                    .is_ok_and(|v| (v - centre).abs() <= 0.1)
            })
        };
        away && resolved()
    };
    grid.iter()
        .step_by(stride)
        .filter(|&&z| clear(z))
        .filter_map(|&z| {
            // Richardson step between h and 2h cancels the O(h²) stencil error.
            let fine = curvature_at(metric, z, DEFAULT_STENCIL).ok()?.kappa;
            let coarse = curvature_at(metric, z, 2.0 * DEFAULT_STENCIL).ok()?.kappa;
            Some(fine + (fine - coarse) / 3.0)
        })
        .map(|kappa| kappa + 4.0)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `max(λ/λ_ref) − 1 ≤ tol` over `grid`.
pub fn ahlfors_check(metric: &MetricDensity, reference: &MetricDensity, grid: &[C64]) -> Result<VerificationReport> {
    let tol = if metric.is_pullback() {
        AHLFORS_TOL_PULLBACK
    } else {
        AHLFORS_TOL_CLOSED
    };
    let mut worst = f64::NEG_INFINITY;
    for &z in grid {
        worst = worst.max(ratio_minus_one(metric, reference, z)?);
    }
    let mut report = VerificationReport::new(format!("ahlfors:{}|{}", metric.label(), reference.label()));
    report.push(Check::at_most("max_ratio_minus_one", worst, 0.0, tol, Provenance::Analytic));
    report.push(Check::at_most(
        "curvature_spot_check",
        curvature_excess(metric, grid, 10),
        0.0,
        1e-3,
        Provenance::Oracle,
    ));
    report.assume(CURVATURE_ASSUMPTION);
    Ok(report)
}

/// `(f_q + tanh 2d)/(1 + f_q tanh 2d)`.
pub fn beardon_minda_bound(distortion_q: f64, d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&distortion_q) || !(d >= 0.0) {
        return Err(Error::BadParameter(format!(
            "need 0 <= f_q <= 1 and d >= 0, got f_q = {distortion_q}, d = {d}"
        )));
    }
    let t = (2.0 * d).tanh();
    Ok((distortion_q + t) / (1.0 + distortion_q * t))
}

/// Hyperbolic distortion `f*λ_Ω′(z)/λ_Ω(z)` given the pulled-back metric.
pub fn distortion(pulled: &MetricDensity, reference: &MetricDensity, z: C64) -> Result<f64> {
    Ok(pulled.log_ratio_at(reference, z)?.exp())
}

/// Smallest slack `bound − distortion(z)` over `(z, q)` pairs on `domain`.
pub fn beardon_minda_check(
    pulled: &MetricDensity,
    reference: &MetricDensity,
    domain: DomainModel,
    pairs: &[(C64, C64)],
) -> Result<VerificationReport> {
    let mut worst = f64::INFINITY;
    for &(z, q) in pairs {
        let d = crate::distance::distance(domain, z, q, crate::distance::DEFAULT_WINDING)?.value;
        let fq = distortion(pulled, reference, q)?.min(1.0);
        let slack = beardon_minda_bound(fq, d)? - distortion(pulled, reference, z)?;
        worst = worst.min(slack);
    }
    let mut report = VerificationReport::new(format!("beardon-minda:{}", pulled.label()));
    report.push(Check::at_least("min_slack", worst, 0.0, 1e-10, Provenance::Analytic));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarnackBoundSpec {
    pub r: f64,
    pub big_r: f64,
    /// `max_{|ξ| = r} λ(ξ)/λ_Ω(ξ)`.
    pub boundary_max_ratio: f64,
}

impl HarnackBoundSpec {
    pub fn new(r: f64, big_r: f64, boundary_max_ratio: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0 && r < big_r) {
            return Err(Error::BadParameter(format!("need 0 < r < min(1, R), got r = {r}, R = {big_r}")));
        }
        if !(boundary_max_ratio > 0.0 && boundary_max_ratio <= 1.0) {
            return Err(Error::BadParameter(format!(
                "boundary ratio must lie in (0, 1], got {boundary_max_ratio}"
            )));
        }
        Ok(Self {
            r,
            big_r,
            boundary_max_ratio,
        })
    }

    /// `C_{r,R}(z) = log(r/R)/log(|z|/R)`.
    pub fn exponent(&self, z: C64) -> f64 {
        (self.r / self.big_r).ln() / (z.norm() / self.big_r).ln()
    }
}

fn inside_radius(z: C64, r: f64) -> Result<()> {
    let rho = z.norm();
    if rho > 0.0 && rho <= r {
        Ok(())
    } else {
        Err(Error::OutsideDomain(z, format!("0 < |z| <= {r}")))
    }
}

/// `M^{C_{r,R}(z)}·λ_ref(z)`.
pub fn harnack_bound(spec: &HarnackBoundSpec, reference: &MetricDensity, z: C64) -> Result<f64> {
    inside_radius(z, spec.r)?;
    Ok(spec.boundary_max_ratio.powf(spec.exponent(z)) * reference.density_at(z)?)
}

/// `max_{|ξ| = r} λ(ξ)/λ_ref(ξ)` and its argument.
///
/// Samples the circle at [`BOUNDARY_SAMPLES`] arguments from 0 (ties go to
/// the smallest argument) and refines the best one by golden-section search.
pub fn boundary_max_ratio(metric: &MetricDensity, reference: &MetricDensity, r: f64) -> Result<(f64, f64)> {
    let step = 2.0 * PI / BOUNDARY_SAMPLES as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    for j in 0..BOUNDARY_SAMPLES {
        let theta = j as f64 * step;
        let value = metric.log_ratio_at(reference, C64::from_polar(r, theta))?;
        // Rounding-level gains count as ties so radial ratios report θ = 0.
        if j == 0 || value > best.1 + 4.0 * f64::EPSILON * best.1.abs().max(1.0) {
            best = (theta, value);
        }
    }
    let at = |theta: f64| {
        metric
            .log_ratio_at(reference, C64::from_polar(r, theta))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (theta, refined) = golden_max(at, best.0 - step, best.0 + step, 1e-10);
    let (theta, log_max) = if refined > best.1 + 4.0 * f64::EPSILON * best.1.abs().max(1.0) {
        (theta, refined)
    } else {
        best
    };
    Ok((log_max.exp(), theta.rem_euclid(2.0 * PI)))
}

/// Smallest log slack `C·log M + log λ_ref − log λ` over `points`.
pub fn harnack_check(
    metric: &MetricDensity,
    reference: &MetricDensity,
    spec: &HarnackBoundSpec,
    points: &[C64],
) -> Result<VerificationReport> {
    let mut worst = f64::INFINITY;
    for &z in points {
        inside_radius(z, spec.r)?;
        let bound = spec.exponent(z) * spec.boundary_max_ratio.ln() + reference.log_density_at(z)?;
        worst = worst.min(bound - metric.log_density_at(z)?);
    }
    let mut report = VerificationReport::new(format!("harnack:{}", metric.label()));
    report.push(Check::at_least("min_log_slack", worst, 0.0, 1e-12, Provenance::Analytic));
    report.push(Check::at_most(
        "curvature_spot_check",
        curvature_excess(metric, points, 10),
        0.0,
        1e-3,
        Provenance::Oracle,
    ));
    report.observe("boundary_max_ratio", spec.boundary_max_ratio);
    report.assume(CURVATURE_ASSUMPTION);
    Ok(report)
}

/// `v(z) = 1/log(1/|z|)`.
pub fn aux_v(z: C64) -> Result<f64> {
    punctured(z, "0 < |z| < 1")?;
    Ok(-1.0 / z.norm().ln())
}

/// `v_α(z) = |z|^{2(1−α)}/(1 − |z|^{2(1−α)})`.
pub fn aux_v_alpha(alpha: f64, z: C64) -> Result<f64> {
    punctured(z, "0 < |z| < 1")?;
    let p = (2.0 * (1.0 - alpha) * z.norm().ln()).exp();
    Ok(p / (1.0 - p))
}

/// `M^{v_α(z)/v_α(r)}·λ_α(z)`.
pub fn harnack_conical_bound(alpha: f64, r: f64, boundary_max_ratio: f64, z: C64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::BadParameter(format!("need 0 < r < 1, got {r}")));
    }
    inside_radius(z, r)?;
    let exponent = aux_v_alpha(alpha, z)? / aux_v_alpha(alpha, C64::new(r, 0.0))?;
    Ok(boundary_max_ratio.powf(exponent) * MetricDensity::conical(alpha)?.density_at(z)?)
}

/// Conical Harnack inequality in log form over `points`.
pub fn harnack_conical_check(metric: &MetricDensity, alpha: f64, r: f64, points: &[C64]) -> Result<VerificationReport> {
    let model = MetricDensity::conical(alpha)?;
    let (ratio, _) = boundary_max_ratio(metric, &model, r)?;
    let v_r = aux_v_alpha(alpha, C64::new(r, 0.0))?;
    let mut worst = f64::INFINITY;
    for &z in points {
        inside_radius(z, r)?;
        let bound = aux_v_alpha(alpha, z)? / v_r * ratio.ln() + model.log_density_at(z)?;
        worst = worst.min(bound - metric.log_density_at(z)?);
    }
    let mut report = VerificationReport::new(format!("harnack-conical:{}", metric.label()));
    report.push(Check::at_least("min_log_slack", worst, 0.0, 1e-12, Provenance::Analytic));
    report.observe("boundary_max_ratio", ratio);
    report.assume(CURVATURE_ASSUMPTION);
    Ok(report)
}

fn finite_log_ratio(metric: &MetricDensity, reference: &MetricDensity, z: C64) -> Result<f64> {
    let value = metric.log_ratio_at(reference, z)?;
    if value.is_nan() || value == f64::INFINITY {
        return Err(Error::NonpositiveDensity(z));
    }
    Ok(value)
}

/// `log(λ/λ_ref)·log(1/|z|)`; `−∞` where `λ` underflows.
pub fn hopf_functional(metric: &MetricDensity, reference: &MetricDensity, z: C64) -> Result<f64> {
    punctured(z, "0 < |z| < 1")?;
    if reference.log_density_at(z)? == f64::NEG_INFINITY {
        return Err(Error::NonpositiveDensity(z));
    }
    Ok(finite_log_ratio(metric, reference, z)? * -z.norm().ln())
}

/// `log(λ/λ_α)·|z|^{2(α−1)}`.
pub fn hopf_conical_functional(metric: &MetricDensity, alpha: f64, z: C64) -> Result<f64> {
    punctured(z, "0 < |z| < 1")?;
    let model = MetricDensity::conical(alpha)?;
    Ok(finite_log_ratio(metric, &model, z)? * (2.0 * (alpha - 1.0) * z.norm().ln()).exp())
}

/// `min_r (max_{|ξ| = r} log λ/λ_ref)·log(1/r)`, the a-priori bound for the
/// limsup of the Hopf functional.
pub fn hopf_radius_bound(metric: &MetricDensity, reference: &MetricDensity, radii: &[f64]) -> Result<f64> {
    let mut best = f64::INFINITY;
    for &r in radii {
        let (ratio, _) = boundary_max_ratio(metric, reference, r)?;
        best = best.min(ratio.ln() * -r.ln());
    }
    Ok(best)
}

/// Relative residual `|Δ_h v − 8λ_{D′}²v|/(8λ_{D′}²|v|)` at `z`.
pub fn radial_residual<F>(v: F, z: C64, h: f64) -> f64
where
    F: Fn(C64) -> f64,
{
    let laplacian = crate::curvature::five_point_laplacian(&v, z, h);
    let rho = z.norm();
    let lambda = 1.0 / (2.0 * rho * -rho.ln());
    let target = 8.0 * lambda * lambda * v(z);
    (laplacian - target).abs() / target.abs()
}

/// Both radial solutions of `Δv = 8λ_{D′}²v` pass with residual `≤ 1000·h²`;
/// the non-solution `log(1/|z|)` must stay at residual `≥ 0.5`.
pub fn radial_solution_space_check(h: f64) -> Result<VerificationReport> {
    if !(h > 0.0) {
        return Err(Error::BadParameter(format!("stencil width must be positive, got {h}")));
    }
    let points: Vec<C64> = crate::sampling::log_spaced(0.1, 0.9, 100)
        .into_iter()
        .map(|rho| C64::from_polar(rho, 0.7))
        .collect();
    let ell = |z: C64| -z.norm().ln();
    let worst = |v: &dyn Fn(C64) -> f64| points.iter().map(|&z| radial_residual(v, z, h)).fold(0.0, f64::max);
    let best = |v: &dyn Fn(C64) -> f64| points.iter().map(|&z| radial_residual(v, z, h)).fold(f64::INFINITY, f64::min);
    let mut report = VerificationReport::new("aux-solutions");
    let tol = 1e3 * h * h;
    report.push(Check::at_most("inverse_log", worst(&|z| 1.0 / ell(z)), 0.0, tol, Provenance::Analytic));
    report.push(Check::at_most("log_squared", worst(&|z| ell(z) * ell(z)), 0.0, tol, Provenance::Analytic));
    report.push(Check::at_least("negative_control_log", best(&|z| ell(z)), 0.5, 0.0, Provenance::Identity));
    Ok(report)
}
