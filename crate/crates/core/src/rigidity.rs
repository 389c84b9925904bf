//! Decay-rate evidence for boundary rigidity.
//!
//! A boundary condition `λ/λ_Ω = 1 − o(e^{−β d})` is probed by fitting
//! `log(1 − ratio)` against the distance to a base point. Finitely many
//! samples can never certify a little-o statement; the classifier only
//! compares the fitted exponent with the threshold of the setting.

use serde::Serialize;

use crate::distance::{distance, DEFAULT_WINDING};
use crate::domain::DomainModel;
use crate::liouville::{classify_singularity, default_grid, linear_fit, RadialProfile, Derivation, SingularityKind};
use crate::metric::MetricDensity;
use crate::report::{Check, Provenance, VerificationReport};
use crate::{limits, sampling, Error, Result, C64};

pub const MIN_FIT_POINTS: usize = 5;
pub const DEFAULT_MARGIN: f64 = 0.1;
pub const MIN_R2: f64 = 0.99;
/// Interior points sampled to confirm an exact-equality short circuit.
pub const IDENTITY_PROBES: usize = 10;
pub const IDENTITY_TOL: f64 = 1e-12;
/// `|limit|` below which the remainder counts as vanishing.
pub const TRIGGER_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundarySequenceSample {
    pub points: Vec<C64>,
    /// `λ(z_n)/λ_ref(z_n)`.
    pub ratios: Vec<f64>,
    /// `1 − ratio_n`, kept separately because it underflows relative to the ratio.
    pub deficits: Vec<f64>,
    /// `d_Ω(z_n, q)`.
    pub distances: Vec<f64>,
    pub q: C64,
}

impl BoundarySequenceSample {
    /// Sample whose deficits are `1 − ratio` as given.
    pub fn from_ratios(points: Vec<C64>, ratios: Vec<f64>, distances: Vec<f64>, q: C64) -> Self {
        let deficits = ratios.iter().map(|r| 1.0 - r).collect();
        Self {
            points,
            ratios,
            deficits,
            distances,
            q,
        }
    }

    /// Sample built from exact deficits `1 − ratio`.
    pub fn from_deficits(points: Vec<C64>, deficits: Vec<f64>, distances: Vec<f64>, q: C64) -> Self {
        let ratios = deficits.iter().map(|e| 1.0 - e).collect();
        Self {
            points,
            ratios,
            deficits,
            distances,
            q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    RigidityForced,
    Inconclusive,
    StrictlyBelow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "setting", rename_all = "kebab-case")]
pub enum Setting {
    General,
    Puncture,
    Conical { alpha: f64 },
}

impl Setting {
    pub fn threshold(self) -> f64 {
        match self {
            Self::General => 4.0,
            Self::Puncture => 2.0,
            Self::Conical { alpha } => 2.0 * (1.0 - alpha),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayEstimate {
    /// Fitted exponent in `1 − ratio ≈ c·e^{−β x}`.
    pub beta: f64,
    pub c: f64,
    pub r2: f64,
    pub classification: Classification,
    /// Points dropped because their ratio was exactly 1.
    pub removed: usize,
}

/// Fits `log(deficit)` against `xs` after sorting by `xs`.
fn fit(xs: &[f64], deficits: &[f64]) -> Result<DecayEstimate> {
    if xs.len() != deficits.len() {
        return Err(Error::BadParameter("deficit and abscissa columns differ in length".into()));
    }
    let mut pairs: Vec<(f64, f64)> = xs.iter().copied().zip(deficits.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total = pairs.len();
    let usable: Vec<(f64, f64)> = pairs.into_iter().filter(|p| p.1 > 0.0).collect();
    let removed = total - usable.len();
    if total > 0 && usable.is_empty() {
        return Err(Error::DegenerateSample);
    }
    if usable.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            got: usable.len(),
        });
    }
    let x: Vec<f64> = usable.iter().map(|p| p.0).collect();
    let y: Vec<f64> = usable.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept) = linear_fit(&x, &y);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let ss_res: f64 = x.iter().zip(&y).map(|(xi, yi)| (yi - (intercept + slope * xi)).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    let mut estimate = DecayEstimate {
        beta: -slope,
        c: intercept.exp(),
        r2,
        classification: Classification::Inconclusive,
        removed,
    };
    estimate.classification = classify_boundary_condition(&estimate, Setting::General, DEFAULT_MARGIN);
    Ok(estimate)
}

/// Least-squares fit of `log(1 − ratio_n)` against `d_n`.
///
/// The embedded classification uses the general setting; reclassify with
/// [`classify_boundary_condition`] for the others.
pub fn decay_exponent_fit(sample: &BoundarySequenceSample) -> Result<DecayEstimate> {
    fit(&sample.distances, &sample.deficits)
}

/// Conical variant: fits `log(1 − ratio_n)` against `log(1/|z_n|)`, so that
/// `β` estimates the power in `1 − ratio ≈ c|z|^β`.
pub fn decay_exponent_fit_log(sample: &BoundarySequenceSample) -> Result<DecayEstimate> {
    let xs: Vec<f64> = sample.points.iter().map(|z| -z.norm().ln()).collect();
    let mut estimate = fit(&xs, &sample.deficits)?;
    estimate.classification = Classification::Inconclusive;
    Ok(estimate)
}

pub fn classify_boundary_condition(estimate: &DecayEstimate, setting: Setting, margin: f64) -> Classification {
    let threshold = setting.threshold();
    if estimate.beta > threshold && estimate.r2 >= MIN_R2 {
        Classification::RigidityForced
    } else if estimate.beta < threshold - margin {
        Classification::StrictlyBelow
    } else {
        Classification::Inconclusive
    }
}

/// Evaluates ratios and distances to `q` along `points`.
pub fn sample_sequence(
    metric: &MetricDensity,
    reference: &MetricDensity,
    domain: DomainModel,
    points: &[C64],
    q: C64,
) -> Result<BoundarySequenceSample> {
    let mut deficits = Vec::with_capacity(points.len());
    let mut distances = Vec::with_capacity(points.len());
    for &z in points {
        deficits.push(-metric.log_ratio_at(reference, z)?.exp_m1());
        distances.push(distance(domain, z, q, DEFAULT_WINDING)?.value);
    }
    Ok(BoundarySequenceSample::from_deficits(points.to_vec(), deficits, distances, q))
}

/// Seeded interior points away from every boundary component of `domain`.
pub fn interior_probes(domain: DomainModel, count: usize) -> Vec<C64> {
    const SEED: u64 = 0x5eed;
    match domain {
        DomainModel::Disk | DomainModel::PuncturedDisk => sampling::random_in_annulus(SEED, count, 0.2, 0.8),
        DomainModel::PuncturedDiskR(big_r) => sampling::random_in_annulus(SEED, count, 0.2 * big_r, 0.8 * big_r),
        DomainModel::Annulus(r) => {
            let gap = 1.0 - r;
            sampling::random_in_annulus(SEED, count, r + 0.2 * gap, 1.0 - 0.2 * gap)
        }
        DomainModel::HalfPlane => sampling::random_in_box(SEED, count, (-1.0, 1.0), (0.5, 2.0)),
        DomainModel::Strip(h) => sampling::random_in_box(SEED, count, (-1.0, 1.0), (0.2 * h, 0.8 * h)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryAnalysis {
    pub classification: Classification,
    /// `None` when the exact-equality short circuit applied.
    pub estimate: Option<DecayEstimate>,
    /// Sample points whose ratio equals 1 within [`IDENTITY_TOL`].
    pub exact_points: usize,
    /// All interior probes also had ratio 1.
    pub identity_confirmed: bool,
}

/// Full pipeline: sample, short-circuit on exact equality, fit, classify.
///
/// Equality at one interior point forces `λ = λ_Ω`; this is confirmed at
/// [`IDENTITY_PROBES`] extra interior points before the fit is skipped.
pub fn analyze_boundary_sequence(
    metric: &MetricDensity,
    reference: &MetricDensity,
    domain: DomainModel,
    points: &[C64],
    q: C64,
    setting: Setting,
) -> Result<BoundaryAnalysis> {
    let sample = sample_sequence(metric, reference, domain, points, q)?;
    let exact_points = sample.deficits.iter().filter(|e| e.abs() <= IDENTITY_TOL).count();
    if exact_points > 0 {
        let mut confirmed = true;
        for z in interior_probes(domain, IDENTITY_PROBES) {
            confirmed &= metric.log_ratio_at(reference, z)?.abs() <= IDENTITY_TOL;
        }
        if confirmed {
            return Ok(BoundaryAnalysis {
                classification: Classification::RigidityForced,
                estimate: None,
                exact_points,
                identity_confirmed: true,
            });
        }
    }
    let mut estimate = match setting {
        Setting::Conical { .. } => decay_exponent_fit_log(&sample)?,
        _ => decay_exponent_fit(&sample)?,
    };
    estimate.classification = classify_boundary_condition(&estimate, setting, DEFAULT_MARGIN);
    Ok(BoundaryAnalysis {
        classification: estimate.classification,
        estimate: Some(estimate),
        exact_points,
        identity_confirmed: false,
    })
}

/// `(ratio − 1)·log(1/|z|)`.
pub fn euclidean_puncture_form(ratio: f64, z: C64) -> Result<f64> {
    let rho = z.norm();
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::OutsideDomain(z, "0 < |z| < 1".into()));
    }
    Ok((ratio - 1.0) * -rho.ln())
}

/// `|z| = 10^{−k}` for `k = 2..10` on the positive axis.
pub fn default_sequence() -> Vec<C64> {
    (2..=10).map(|k| C64::new(10f64.powi(-k), 0.0)).collect()
}

/// Radial profile `w(t) = log λ(e^t) + t` of `metric` on the default grid.
pub fn radial_profile_of(metric: &MetricDensity) -> Result<RadialProfile> {
    let t_grid = default_grid();
    let w_values = t_grid
        .iter()
        .map(|&t| Ok(metric.log_density_at(C64::new(t.exp(), 0.0))? + t))
        .collect::<Result<Vec<_>>>()?;
    let dw_values = vec![f64::NAN; t_grid.len()];
    Ok(RadialProfile {
        t_grid,
        w_values,
        dw_values,
        derivation: Derivation::Integrated {
            w0: f64::NAN,
            dw0: f64::NAN,
            t0: -40.0,
            t1: -1.0,
            steps: 4000,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dichotomy {
    pub label: String,
    pub points: Vec<[f64; 2]>,
    /// `(log λ − log λ_{D′})·log(1/|z_n|)`.
    pub values: Vec<f64>,
    pub sup: f64,
    pub bounded: bool,
    /// Limit extrapolated in `1/log(1/|z|)`.
    pub limit: f64,
    /// The remainder vanishes in the limit: with curvature ≤ −4 this forces `λ = λ_{D′}`.
    pub part_b_triggered: bool,
    pub curvature_excess: f64,
}

impl Dichotomy {
    pub fn report(&self) -> VerificationReport {
        let mut report = VerificationReport::new(format!("dichotomy:{}", self.label));
        report.push(Check::flag("part_a_bounded", self.bounded, Provenance::Analytic));
        report.push(Check::at_most("curvature_spot_check", self.curvature_excess, 0.0, 1e-3, Provenance::Oracle));
        report.observe("sup_abs_remainder", self.sup);
        report.observe("extrapolated_limit", self.limit);
        report.observe("part_b_triggered", if self.part_b_triggered { 1.0 } else { 0.0 });
        report.assume(crate::inequality::CURVATURE_ASSUMPTION);
        report
    }
}

/// Part (a) boundedness and part (b) trigger for `metric` against `λ_{D′}`.
pub fn dichotomy_analysis(metric: &MetricDensity, sequence: &[C64]) -> Result<Dichotomy> {
    if sequence.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: sequence.len(),
        });
    }
    if let SingularityKind::Conical { .. } = classify_singularity(&radial_profile_of(metric)?)?.kind {
        return Err(Error::WrongSingularityOrder);
    }
    let reference = MetricDensity::punctured_disk();
    let mut ordered = sequence.to_vec();
    ordered.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let values = ordered
        .iter()
        .map(|&z| Ok(metric.log_ratio_at(&reference, z)? * -z.norm().ln()))
        .collect::<Result<Vec<_>>>()?;
    let eps: Vec<f64> = ordered.iter().map(|z| -1.0 / z.norm().ln()).collect();
    let sup = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let trend = limits::trend(&values, 1.0);
    let limit = limits::richardson(&eps, &values).unwrap_or(f64::NAN);
    let curvature_excess = ordered
        .iter()
        .filter_map(|&z| crate::curvature::curvature_at(metric, z, crate::curvature::DEFAULT_STENCIL).ok())
        .map(|est| est.kappa + 4.0)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Dichotomy {
        label: metric.label().to_string(),
        points: ordered.iter().map(|z| [z.re, z.im]).collect(),
        sup,
        bounded: sup.is_finite() && trend.converging,
        part_b_triggered: limit.abs() <= TRIGGER_TOL,
        limit,
        values,
        curvature_excess,
    })
}

pub fn dichotomy_report(metric: &MetricDensity, sequence: &[C64]) -> Result<VerificationReport> {
    Ok(dichotomy_analysis(metric, sequence)?.report())
}
