//! Named verification suites behind `hypmetric verify <suite>`.

use std::f64::consts::{E, PI};
use std::fmt;

use anyhow::Result;
use hypmetric_core::curvature::curvature_at;
use hypmetric_core::distance::{comparability_constants, comparability_quantity, covering_decay_ratio, distance, DEFAULT_WINDING};
use hypmetric_core::domain::DomainModel;
use hypmetric_core::inequality::{
    ahlfors_check, beardon_minda_check, boundary_max_ratio, harnack_check, harnack_conical_check,
    hopf_conical_functional, hopf_functional, radial_solution_space_check, HarnackBoundSpec,
};
use hypmetric_core::liouville::{
    classify_singularity, closed_form_family, dichotomy_verify_part_a, integrate_radial, Family, SingularityKind,
};
use hypmetric_core::maps::HolomorphicMap;
use hypmetric_core::metric::MetricDensity;
use hypmetric_core::oracle::geodesic_oracle;
use hypmetric_core::report::{Check, Provenance, VerificationReport};
use hypmetric_core::rigidity::{default_sequence, dichotomy_analysis};
use hypmetric_core::witness::{self, WitnessLimit};
use hypmetric_core::{limits, sampling, C64};
use rayon::prelude::*;

/// Input that the command line should reject with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub const SUITES: &[&str] = &[
    "ahlfors",
    "beardon-minda",
    "harnack",
    "harnack-conical",
    "hopf",
    "hopf-conical",
    "aux-solutions",
    "example1",
    "phi",
    "annulus-sharpness:<r>",
    "curvature",
    "comparability",
    "decay-ratio",
    "dichotomy",
    "liouville",
    "distance",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: String,
    /// Applied in order; a later entry for the same name wins.
    pub tolerances: Vec<(String, f64)>,
    /// Lattice size for grid-based suites; each suite has its own default.
    pub grid: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SuiteOutcome {
    Report(VerificationReport),
    /// A limit functional, judged by `verdict` on its extrapolated limit.
    Witness { limit: WitnessLimit, verdict: VerificationReport },
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        match self {
            Self::Report(report) => report.pass,
            Self::Witness { verdict, .. } => verdict.pass,
        }
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut outcome = match config.suite.as_str() {
        "ahlfors" => SuiteOutcome::Report(ahlfors(config.grid.unwrap_or(50))?),
        "beardon-minda" => SuiteOutcome::Report(beardon_minda(config.seed)?),
        "harnack" => SuiteOutcome::Report(harnack()?),
        "harnack-conical" => SuiteOutcome::Report(harnack_conical()?),
        "hopf" => SuiteOutcome::Report(hopf()?),
        "hopf-conical" => SuiteOutcome::Report(hopf_conical()?),
        "aux-solutions" => SuiteOutcome::Report(radial_solution_space_check(1e-4)?),
        "example1" => witness_outcome(witness::example1_limit(&witness::example1_default_points())?, 2e-2),
        "phi" => witness_outcome(witness::phi_expansion_check(&witness::approach_one(1..=4))?, 1e-4),
        "curvature" => SuiteOutcome::Report(curvature(config.seed)?),
        "comparability" | "lemma44" => SuiteOutcome::Report(comparability()?),
        "decay-ratio" => SuiteOutcome::Report(decay_ratio()?),
        "dichotomy" => SuiteOutcome::Report(dichotomy()?),
        "liouville" => SuiteOutcome::Report(liouville()?),
        "distance" => SuiteOutcome::Report(distance_suite(config.seed, config.grid.unwrap_or(300))?),
        other => match other.strip_prefix("annulus-sharpness:") {
            Some(r) => {
                let r: f64 = r
                    .parse()
                    .map_err(|_| UsageError(format!("annulus-sharpness needs a number, got `{r}`")))?;
                if !(r > 0.0 && r < 1.0) {
                    return Err(UsageError(format!("annulus-sharpness needs 0 < r < 1, got {r}")).into());
                }
                witness_outcome(witness::annulus_sharpness_limit(r, &witness::approach_one(2..=6))?, 1e-2)
            }
            None => {
                return Err(UsageError(format!("unknown suite `{other}`; known suites: {}", SUITES.join(", "))).into())
            }
        },
    };
    let report = match &mut outcome {
        SuiteOutcome::Report(report) => report,
        SuiteOutcome::Witness { verdict, .. } => verdict,
    };
    report.seed = Some(config.seed);
    for (name, tol) in &config.tolerances {
        if report.override_tol(name, *tol) == 0 {
            return Err(UsageError(format!("suite `{}` has no check named `{name}`", config.suite)).into());
        }
    }
    Ok(outcome)
}

fn witness_outcome(limit: WitnessLimit, tol: f64) -> SuiteOutcome {
    let mut verdict = VerificationReport::new(limit.name.clone());
    verdict.push(Check::near("extrapolated_limit", limit.extrapolated_limit, limit.expected, tol, limit.provenance));
    verdict.push(Check::flag("trend_converging", limit.trend_converging, Provenance::Oracle));
    verdict.observe("last_value", limit.last_value());
    SuiteOutcome::Witness { limit, verdict }
}

fn pdisk_pullback(map: HolomorphicMap) -> MetricDensity {
    MetricDensity::pullback(&MetricDensity::punctured_disk(), &map, DomainModel::PuncturedDisk)
}

fn disk_pullback(map: HolomorphicMap) -> MetricDensity {
    MetricDensity::pullback(&MetricDensity::disk(), &map, DomainModel::Disk)
}

fn ahlfors(n: usize) -> Result<VerificationReport> {
    let disk = MetricDensity::disk();
    let pdisk = MetricDensity::punctured_disk();
    let disk_grid = sampling::disk_grid(n, 0.99);
    let polar = sampling::polar_grid(n, n, 1e-2, 0.99);
    let mut report = VerificationReport::new("ahlfors");
    report.absorb(ahlfors_check(&disk_pullback(HolomorphicMap::phi()), &disk, &disk_grid)?);
    report.absorb(ahlfors_check(&pdisk_pullback(HolomorphicMap::example1()), &pdisk, &polar)?);
    report.absorb(ahlfors_check(&disk, &pdisk, &polar)?);
    report.absorb(ahlfors_check(
        &MetricDensity::conical_scaled(0.5, 0.9)?,
        &MetricDensity::conical(0.5)?,
        &polar,
    )?);
    Ok(report)
}

fn beardon_minda(seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("beardon-minda");
    let zs = sampling::random_in_annulus(seed, 100, 0.01, 0.95);
    let qs = sampling::random_in_annulus(seed.wrapping_add(1), 100, 0.01, 0.95);
    let pairs: Vec<(C64, C64)> = zs.into_iter().zip(qs).collect();
    report.absorb(beardon_minda_check(
        &disk_pullback(HolomorphicMap::phi()),
        &MetricDensity::disk(),
        DomainModel::Disk,
        &pairs,
    )?);
    report.absorb(beardon_minda_check(
        &pdisk_pullback(HolomorphicMap::example1()),
        &MetricDensity::punctured_disk(),
        DomainModel::PuncturedDisk,
        &pairs,
    )?);
    Ok(report)
}

fn harnack() -> Result<VerificationReport> {
    let metric = pdisk_pullback(HolomorphicMap::example1());
    let reference = MetricDensity::punctured_disk();
    let (ratio, _) = boundary_max_ratio(&metric, &reference, 0.1)?;
    let spec = HarnackBoundSpec::new(0.1, 1.0, ratio)?;
    Ok(harnack_check(&metric, &reference, &spec, &sampling::polar_grid(20, 25, 1e-6, 0.099))?)
}

fn harnack_conical() -> Result<VerificationReport> {
    let metric = MetricDensity::conical_scaled(0.5, 0.9)?;
    Ok(harnack_conical_check(&metric, 0.5, 0.5, &sampling::polar_grid(15, 20, 1e-4, 0.49))?)
}

/// Raw value at `|z| = 1e-8` and the limit extrapolated in `1/log(1/|z|)`.
fn hopf() -> Result<VerificationReport> {
    let pdisk = MetricDensity::punctured_disk();
    let mut report = VerificationReport::new("hopf");
    let zs: Vec<C64> = (2..=8).map(|k| C64::new(10f64.powi(-k), 0.0)).collect();
    let eps: Vec<f64> = zs.iter().map(|z| -1.0 / z.norm().ln()).collect();
    for metric in [MetricDensity::punctured_disk_radius(E)?, pdisk_pullback(HolomorphicMap::example1())] {
        let values = zs
            .iter()
            .map(|&z| hopf_functional(&metric, &pdisk, z))
            .collect::<hypmetric_core::Result<Vec<_>>>()?;
        let last = *values.last().unwrap_or(&f64::NAN);
        let limit = limits::richardson(&eps, &values).unwrap_or(f64::NAN);
        let label = metric.label();
        report.push(Check::near(format!("{label}/value_at_1e-8"), last, -1.0, 2e-2, Provenance::Analytic));
        report.push(Check::near(format!("{label}/extrapolated_limit"), limit, -1.0, 2e-2, Provenance::Analytic));
        report.push(Check::at_most(format!("{label}/sup"), values.iter().copied().fold(f64::MIN, f64::max), 0.0, 0.0, Provenance::Analytic));
    }
    Ok(report)
}

/// For `c < 1` the functional diverges like `log(c)·|z|^{−2(1−α)}`; the check
/// is the offset `c² − 1` that remains after removing that term.
fn hopf_conical() -> Result<VerificationReport> {
    let (alpha, scale) = (0.5, 0.9);
    let metric = MetricDensity::conical_scaled(alpha, scale)?;
    let mut report = VerificationReport::new("hopf-conical");
    let mut values = Vec::new();
    for k in 1..=6 {
        let rho = 10f64.powi(-k);
        let value = hopf_conical_functional(&metric, alpha, C64::new(rho, 0.0))?;
        report.observe(format!("functional_at_1e-{k}"), value);
        values.push((rho, value));
    }
    let negative = values.iter().all(|&(_, v)| v < 0.0);
    report.push(Check::flag("negative", negative, Provenance::Analytic));
    let (rho, value) = values[values.len() - 1];
    let offset = value - scale.ln() * rho.powf(-2.0 * (1.0 - alpha));
    report.push(Check::near("offset", offset, scale * scale - 1.0, 1e-3, Provenance::Analytic));
    let model = MetricDensity::conical(alpha)?;
    let zero = hopf_conical_functional(&model, alpha, C64::new(0.1, 0.0))?;
    report.push(Check::near("model_is_zero", zero, 0.0, 1e-15, Provenance::Identity));
    Ok(report)
}

fn curvature(seed: u64) -> Result<VerificationReport> {
    let strip = |z: C64| C64::new(z.re, 0.3 + 0.4 * (z.im + 1.0) / 2.0);
    let cases: Vec<(MetricDensity, Vec<C64>)> = vec![
        (MetricDensity::disk(), sampling::random_in_annulus(seed, 20, 0.0, 0.8)),
        (MetricDensity::punctured_disk(), sampling::random_in_annulus(seed, 20, 0.35, 0.8)),
        (MetricDensity::annulus(0.5)?, sampling::random_in_annulus(seed, 20, 0.65, 0.85)),
        (MetricDensity::conical(0.5)?, sampling::random_in_annulus(seed, 20, 0.35, 0.8)),
        (MetricDensity::punctured_disk_radius(E)?, sampling::random_in_annulus(seed, 20, 0.35, 0.8)),
        (MetricDensity::halfplane(), sampling::random_in_box(seed, 20, (-1.0, 1.0), (0.3, 2.0))),
        (
            MetricDensity::strip(1.0)?,
            sampling::random_in_box(seed, 20, (-1.0, 1.0), (-1.0, 1.0)).into_iter().map(strip).collect(),
        ),
        (disk_pullback(HolomorphicMap::phi()), sampling::random_in_annulus(seed, 20, 0.0, 0.5)),
        (pdisk_pullback(HolomorphicMap::example1()), sampling::random_in_annulus(seed, 20, 0.5, 0.8)),
    ];
    let mut report = VerificationReport::new("curvature");
    for (metric, points) in &cases {
        let mut worst: f64 = 0.0;
        for &z in points {
            worst = worst.max((curvature_at(metric, z, 1e-3)?.kappa + 4.0).abs());
        }
        let probe = points[0];
        let err = |h| -> Result<f64> { Ok((curvature_at(metric, probe, h)?.kappa + 4.0).abs()) };
        let ratio = err(1e-2)? / err(1e-3)?;
        let label = metric.label();
        report.push(Check::at_most(format!("{label}/kappa_error"), worst, 0.0, 1e-4, Provenance::Analytic));
        report.push(Check::near(format!("{label}/convergence_ratio"), ratio, 125.0, 75.0, Provenance::Oracle));
    }
    Ok(report)
}

fn comparability() -> Result<VerificationReport> {
    let q = C64::new(0.1, 0.0);
    let k = comparability_constants(q, 1.0)?;
    let mut report = VerificationReport::new("comparability");
    let exact = 10f64.ln() + PI;
    report.push(Check::near("c2", k.c2, exact, 4.0 * f64::EPSILON * exact, Provenance::Analytic));
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for rho in sampling::log_spaced(1e-8, 0.1, 50) {
        for theta in [0.0, 1.0, PI] {
            let value = comparability_quantity(C64::from_polar(rho, theta), q)?;
            lo = lo.min(value / k.c1);
            hi = hi.max(value);
        }
    }
    report.push(Check::at_least("min_over_c1", lo, 1.0, 1e-12, Provenance::Analytic));
    report.push(Check::at_most("max_quantity", hi, k.c2, 0.0, Provenance::Analytic));
    report.observe("gamma", k.gamma);
    report.observe("c1", k.c1);
    Ok(report)
}

fn decay_ratio() -> Result<VerificationReport> {
    let mut report = VerificationReport::new("decay-ratio");
    let at = covering_decay_ratio(C64::new(0.999, 0.0))?;
    report.push(Check::near("ratio_at_0.999", at, 1.0 / 1.999, 1e-12, Provenance::Analytic));
    let values = (3..=9)
        .map(|k| covering_decay_ratio(C64::new(1.0 - 10f64.powi(-k), 0.0)))
        .collect::<hypmetric_core::Result<Vec<_>>>()?;
    report.push(Check::flag("trend_converging", limits::trend(&values, 1.0).converging, Provenance::Oracle));
    report.push(Check::near("last_value", values[values.len() - 1], 0.5, 1e-6, Provenance::Analytic));
    Ok(report)
}

fn dichotomy() -> Result<VerificationReport> {
    let mut report = VerificationReport::new("dichotomy");
    for radius in [E, E * E] {
        report.absorb(dichotomy_verify_part_a(radius)?);
    }
    let seq = default_sequence();
    let family = [
        (MetricDensity::punctured_disk(), true),
        (MetricDensity::punctured_disk_radius(E)?, false),
        (MetricDensity::punctured_disk_radius(E * E)?, false),
        (pdisk_pullback(HolomorphicMap::example1()), false),
    ];
    for (metric, fires) in &family {
        let d = dichotomy_analysis(metric, &seq)?;
        report.push(Check::flag(
            format!("{}/part_b_trigger", metric.label()),
            d.part_b_triggered == *fires,
            Provenance::Analytic,
        ));
        report.observe(format!("{}/limit", metric.label()), d.limit);
    }
    Ok(report)
}

fn liouville() -> Result<VerificationReport> {
    let mut report = VerificationReport::new("liouville");
    for (name, family) in [("pdisk", Family::PuncturedDisk), ("conical:0.5", Family::Conical { alpha: 0.5 })] {
        let (w0, dw0, _) = family.jet(-1.0);
        let profile = integrate_radial(w0, dw0, -1.0, -5.0, 10_000)?;
        let (t, w, _) = profile.terminal();
        report.push(Check::at_most(format!("{name}/terminal_error"), (w - family.w(t)).abs(), 0.0, 1e-8, Provenance::Analytic));
        let drift = (0..profile.len()).map(|i| (profile.energy(i) - profile.energy(0)).abs()).fold(0.0, f64::max);
        report.push(Check::at_most(format!("{name}/energy_drift"), drift, 0.0, 1e-8, Provenance::Identity));
    }
    let kind = classify_singularity(&closed_form_family(Family::PuncturedDisk)?)?.kind;
    report.push(Check::flag("pdisk/logarithmic", kind == SingularityKind::Logarithmic, Provenance::Analytic));
    for alpha in [-0.5, 0.3, 0.7] {
        let got = match classify_singularity(&closed_form_family(Family::Conical { alpha })?)?.kind {
            SingularityKind::Conical { alpha } => alpha,
            _ => f64::NAN,
        };
        report.push(Check::near(format!("conical:{alpha}/alpha"), got, alpha, 1e-3, Provenance::Analytic));
    }
    Ok(report)
}

fn distance_suite(seed: u64, grid: usize) -> Result<VerificationReport> {
    let domains = [
        DomainModel::Disk,
        DomainModel::PuncturedDisk,
        DomainModel::PuncturedDiskR(E),
        DomainModel::Annulus(0.5),
        DomainModel::HalfPlane,
        DomainModel::Strip(1.0),
    ];
    let mut report = VerificationReport::new("distance");
    for domain in domains {
        let sample = |s: u64| match domain {
            DomainModel::Disk => sampling::random_in_annulus(s, 10, 0.0, 0.9),
            DomainModel::PuncturedDisk => sampling::random_in_annulus(s, 10, 0.02, 0.9),
            DomainModel::PuncturedDiskR(big_r) => sampling::random_in_annulus(s, 10, 0.02 * big_r, 0.9 * big_r),
            DomainModel::Annulus(r) => sampling::random_in_annulus(s, 10, r + 0.05, 0.95),
            DomainModel::HalfPlane => sampling::random_in_box(s, 10, (-1.0, 1.0), (0.1, 2.0)),
            DomainModel::Strip(h) => sampling::random_in_box(s, 10, (-1.0, 1.0), (0.1 * h, 0.9 * h)),
        };
        let pairs: Vec<(C64, C64)> = sample(seed).into_iter().zip(sample(seed.wrapping_add(1))).collect();
        let gaps = pairs
            .par_iter()
            .map(|&(z1, z2)| -> hypmetric_core::Result<f64> {
                let exact = distance(domain, z1, z2, DEFAULT_WINDING)?.value;
                Ok((exact - geodesic_oracle(domain, z1, z2, grid)?.value).abs())
            })
            .collect::<hypmetric_core::Result<Vec<_>>>()?;
        let worst = gaps.into_iter().fold(0.0, f64::max);
        report.push(Check::at_most(format!("{domain}/oracle_gap"), worst, 0.0, 2e-2, Provenance::Oracle));
    }
    Ok(report)
}
