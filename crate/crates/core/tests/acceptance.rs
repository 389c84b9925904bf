//! Acceptance criteria 1 to 11.
//!
//! Runs without the libtest harness so every criterion prints exactly one
//! `PASS`/`FAIL` line. Sub-results are printed indented beneath it. The
//! process exits with status 1 if any criterion fails.

use std::f64::consts::{E, PI};
use std::time::Instant;

use hypmetric_core::curvature::curvature_at;
use hypmetric_core::distance::{covering_decay_ratio, distance, comparability_constants, comparability_quantity, DEFAULT_WINDING};
use hypmetric_core::domain::DomainModel;
use hypmetric_core::inequality::{
    ahlfors_check, beardon_minda_check, boundary_max_ratio, harnack_check, harnack_conical_check, hopf_functional,
    HarnackBoundSpec,
};
use hypmetric_core::liouville::{
    classify_singularity, closed_form_family, dichotomy_verify_part_a, integrate_radial, Family, SingularityKind,
};
use hypmetric_core::maps::HolomorphicMap;
use hypmetric_core::metric::MetricDensity;
use hypmetric_core::oracle::geodesic_oracle;
use hypmetric_core::rigidity::{
    classify_boundary_condition, decay_exponent_fit, dichotomy_analysis, default_sequence, sample_sequence,
    BoundarySequenceSample, Classification, Setting, DEFAULT_MARGIN,
};
use hypmetric_core::witness::{
    annulus_expected, annulus_sharpness_limit, approach_one, disk_functional_limit, phi_expansion_check,
    DISK_FUNCTIONAL_EXPECTED, PHI_EXPANSION_EXPECTED,
};
use hypmetric_core::{sampling, witness, C64};
use rayon::prelude::*;

const SEED: u64 = 42;

// Tolerances, one per quantity named in the criteria.
const CURVATURE_TOL: f64 = 1e-4;
const CURVATURE_H: f64 = 1e-3;
const CONVERGENCE_RATIO: (f64, f64) = (50.0, 200.0);
const AHLFORS_TOL: f64 = 1e-9;
const AHLFORS_STRICT: f64 = 1e-6;
const BM_SLACK: f64 = -1e-10;
const HOPF_TOL: f64 = 2e-2;
const PHI_TOL: f64 = 1e-4;
const DISK_TOL: f64 = 1e-3;
const ANNULUS_TOL: f64 = 1e-2;
/// Relative rounding allowance at the equality case `|z| = |q|` of the sandwich.
const SANDWICH_ROUNDING: f64 = 1e-12;
const ODE_TOL: f64 = 1e-8;
const ALPHA_TOL: f64 = 1e-3;
const PART_A_TOL: f64 = 2e-2;
const PLANTED_TOL: f64 = 1e-9;
const EXAMPLE_BETA_TOL: f64 = 0.1;
const ORACLE_TOL: f64 = 2e-2;
const ORACLE_GRID: usize = 300;
const DECAY_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            lines: Vec::new(),
        }
    }

    fn record(&mut self, pass: bool, line: String) {
        self.pass &= pass;
        self.lines.push(format!("{} {line}", if pass { "ok  " } else { "MISS" }));
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn pdisk_pullback(map: HolomorphicMap) -> MetricDensity {
    MetricDensity::pullback(&MetricDensity::punctured_disk(), &map, DomainModel::PuncturedDisk)
}

fn disk_pullback(map: HolomorphicMap) -> MetricDensity {
    MetricDensity::pullback(&MetricDensity::disk(), &map, DomainModel::Disk)
}

fn curvature_suite() -> Outcome {
    let mut out = Outcome::new();
    // Seeded points stay well away from the boundary, the puncture and the
    // critical points of the maps (2 − √3 for example1, −1 for φ), where
    // h = 1e-3 stops resolving the metric.
    let cases: Vec<(MetricDensity, f64, f64)> = vec![
        (MetricDensity::disk(), 0.0, 0.8),
        (MetricDensity::punctured_disk(), 0.35, 0.8),
        (MetricDensity::annulus(0.5).unwrap(), 0.65, 0.85),
        (MetricDensity::conical(0.5).unwrap(), 0.35, 0.8),
        (MetricDensity::punctured_disk_radius(E).unwrap(), 0.35, 0.8),
        (disk_pullback(HolomorphicMap::phi()), 0.0, 0.5),
        (pdisk_pullback(HolomorphicMap::example1()), 0.5, 0.8),
        (disk_pullback(HolomorphicMap::mobius(c(0.3, 0.2))), 0.0, 0.8),
    ];
    let probe = c(0.6, 0.3);
    for (metric, r_min, r_max) in &cases {
        let points = sampling::random_in_annulus(SEED, 100, *r_min, *r_max);
        let worst = points
            .iter()
            .map(|&z| curvature_at(metric, z, CURVATURE_H).map_or(f64::INFINITY, |est| (est.kappa + 4.0).abs()))
            .fold(0.0, f64::max);
        out.record(worst <= CURVATURE_TOL, format!("{}: max |κ + 4| = {worst:.3e} over 100 points", metric.label()));
        let err = |h| (curvature_at(metric, probe, h).unwrap().kappa + 4.0).abs();
        let ratio = err(1e-2) / err(1e-3);
        out.record(
            ratio >= CONVERGENCE_RATIO.0 && ratio <= CONVERGENCE_RATIO.1,
            format!("{}: error ratio h 1e-2 -> 1e-3 = {ratio:.1}", metric.label()),
        );
    }
    out
}

fn ahlfors_suite() -> Outcome {
    let mut out = Outcome::new();
    let disk = MetricDensity::disk();
    let pdisk = MetricDensity::punctured_disk();
    let disk_grid = sampling::disk_grid(50, 0.99);
    let polar = sampling::polar_grid(50, 50, 1e-2, 0.99);
    let pairs: Vec<(MetricDensity, &MetricDensity, &[C64], C64)> = vec![
        (disk_pullback(HolomorphicMap::phi()), &disk, &disk_grid, c(0.0, 0.0)),
        (pdisk_pullback(HolomorphicMap::example1()), &pdisk, &polar, c(-0.1, 0.0)),
    ];
    for (metric, reference, grid, centre) in pairs {
        let report = ahlfors_check(&metric, reference, grid).unwrap();
        let max = report.checks[0].value;
        out.record(max <= AHLFORS_TOL, format!("{}: max(λ/λ_ref) − 1 = {max:.3e}", metric.label()));
        let at_centre = metric.log_ratio_at(reference, centre).unwrap().exp();
        out.record(
            at_centre < 1.0 - AHLFORS_STRICT,
            format!("{}: ratio at grid centre {centre} = {at_centre:.9}", metric.label()),
        );
    }
    out
}

fn beardon_minda_suite() -> Outcome {
    let mut out = Outcome::new();
    let cases = [
        (disk_pullback(HolomorphicMap::phi()), MetricDensity::disk(), DomainModel::Disk),
        (pdisk_pullback(HolomorphicMap::example1()), MetricDensity::punctured_disk(), DomainModel::PuncturedDisk),
    ];
    for (pulled, reference, domain) in &cases {
        let zs = sampling::random_in_annulus(SEED, 100, 0.01, 0.95);
        let qs = sampling::random_in_annulus(SEED + 1, 100, 0.01, 0.95);
        let pairs: Vec<(C64, C64)> = zs.into_iter().zip(qs).collect();
        let report = beardon_minda_check(pulled, reference, *domain, &pairs).unwrap();
        let slack = report.checks[0].value;
        out.record(slack >= BM_SLACK, format!("{}: min slack = {slack:.3e} over 100 pairs", pulled.label()));
    }
    out
}

fn harnack_suites() -> Outcome {
    let mut out = Outcome::new();
    let metric = pdisk_pullback(HolomorphicMap::example1());
    let reference = MetricDensity::punctured_disk();
    let (ratio, _) = boundary_max_ratio(&metric, &reference, 0.1).unwrap();
    let spec = HarnackBoundSpec::new(0.1, 1.0, ratio).unwrap();
    let points = sampling::polar_grid(20, 25, 1e-6, 0.099);
    let report = harnack_check(&metric, &reference, &spec, &points).unwrap();
    out.record(
        report.checks[0].pass,
        format!("{}: min log slack = {:.3e} over {} points", metric.label(), report.checks[0].value, points.len()),
    );
    let scaled = MetricDensity::conical_scaled(0.5, 0.9).unwrap();
    let points = sampling::polar_grid(15, 20, 1e-4, 0.49);
    let report = harnack_conical_check(&scaled, 0.5, 0.5, &points).unwrap();
    out.record(
        report.checks[0].pass,
        format!("{}: min log slack = {:.3e} over {} points", scaled.label(), report.checks[0].value, points.len()),
    );
    out
}

fn hopf_limits() -> Outcome {
    let mut out = Outcome::new();
    let z = c(1e-8, 0.0);
    let pdisk = MetricDensity::punctured_disk();
    let r_e = MetricDensity::punctured_disk_radius(E).unwrap();
    let value = hopf_functional(&r_e, &pdisk, z).unwrap();
    out.record((value + 1.0).abs() <= HOPF_TOL, format!("{}: functional at |z| = 1e-8 is {value:.6}", r_e.label()));
    let value = witness::example1_functional(z).unwrap();
    out.record((value + 1.0).abs() <= HOPF_TOL, format!("example1: functional at |z| = 1e-8 is {value:.6}"));
    // Diagnostic only: the limit itself, extrapolated in 1/log(1/|z|).
    let zs: Vec<C64> = [1e-4, 1e-6, 1e-8].iter().map(|&r| c(r, 0.0)).collect();
    let eps: Vec<f64> = zs.iter().map(|z| -1.0 / z.norm().ln()).collect();
    let vals: Vec<f64> = zs.iter().map(|&z| witness::example1_functional(z).unwrap()).collect();
    let limit = hypmetric_core::limits::richardson(&eps, &vals).unwrap();
    out.lines.push(format!("info example1: extrapolated limit {limit:.6}"));
    out
}

fn witness_limits() -> Outcome {
    let mut out = Outcome::new();
    let x = 1.0 - 1e-4;
    let phi = phi_expansion_check(&approach_one(2..=4)).unwrap();
    let value = phi.last_value();
    out.record(
        (value - PHI_EXPANSION_EXPECTED).abs() <= PHI_TOL,
        format!("phi expansion at x = {x}: {value:.8} (target {PHI_EXPANSION_EXPECTED:.8})"),
    );
    let disk = disk_functional_limit(&approach_one(2..=6)).unwrap();
    let value = disk.last_value();
    out.record(
        (value - DISK_FUNCTIONAL_EXPECTED).abs() <= DISK_TOL,
        format!("disk functional: {value:.8} (target {DISK_FUNCTIONAL_EXPECTED:.8})"),
    );
    let ann = annulus_sharpness_limit(0.5, &approach_one(2..=6)).unwrap();
    let value = ann.last_value();
    let target = annulus_expected(0.5);
    out.record((value - target).abs() <= ANNULUS_TOL, format!("annulus r = 0.5: {value:.6} (target {target:.6})"));
    out
}

fn comparability_sandwich() -> Outcome {
    let mut out = Outcome::new();
    let q = c(0.1, 0.0);
    let k = comparability_constants(q, 1.0).unwrap();
    // `|log 0.1|` and `log 10` differ by rounding only.
    let exact = 10f64.ln() + PI;
    out.record((k.c2 - exact).abs() <= 4.0 * f64::EPSILON * exact, format!("c2 = {} (log 10 + π = {exact})", k.c2));
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for rho in sampling::log_spaced(1e-8, 0.1, 50) {
        for theta in [0.0, 1.0, PI] {
            let value = comparability_quantity(C64::from_polar(rho, theta), q).unwrap();
            lo = lo.min(value / k.c1);
            hi = hi.max(value);
        }
    }
    out.record(lo >= 1.0 - SANDWICH_ROUNDING, format!("min quantity / c1 = {lo:.15} (c1 = {:.6}, γ = {:.6})", k.c1, k.gamma));
    out.record(hi <= k.c2, format!("max quantity = {hi:.6} <= c2"));
    out
}

fn liouville_solver() -> Outcome {
    let mut out = Outcome::new();
    for family in [Family::PuncturedDisk, Family::Conical { alpha: 0.5 }] {
        let (w0, dw0, _) = family.jet(-1.0);
        let profile = integrate_radial(w0, dw0, -1.0, -5.0, 10_000).unwrap();
        let (t, w, _) = profile.terminal();
        let err = (w - family.w(t)).abs();
        out.record(err <= ODE_TOL, format!("{family:?}: terminal error {err:.3e}"));
        let drift = (0..profile.len()).map(|i| (profile.energy(i) - profile.energy(0)).abs()).fold(0.0, f64::max);
        out.record(drift <= ODE_TOL, format!("{family:?}: first-integral drift {drift:.3e}"));
    }
    let kind = classify_singularity(&closed_form_family(Family::PuncturedDisk).unwrap()).unwrap().kind;
    out.record(kind == SingularityKind::Logarithmic, format!("punctured disk classifies as {kind:?}"));
    for alpha in [-0.5, 0.3, 0.7] {
        let kind = classify_singularity(&closed_form_family(Family::Conical { alpha }).unwrap()).unwrap().kind;
        let pass = matches!(kind, SingularityKind::Conical { alpha: got } if (got - alpha).abs() <= ALPHA_TOL);
        out.record(pass, format!("conical {alpha} classifies as {kind:?}"));
    }
    out
}

fn dichotomy() -> Outcome {
    let mut out = Outcome::new();
    for radius in [E, E * E] {
        let report = dichotomy_verify_part_a(radius).unwrap();
        let limit = report.checks.iter().find(|ch| ch.name == "extrapolated_limit").unwrap();
        let pass = (limit.value - radius.ln()).abs() <= PART_A_TOL;
        out.record(pass, format!("R = {radius:.5}: bound limit {:.6} (log R = {:.6})", limit.value, radius.ln()));
    }
    let seq = default_sequence();
    let family = [
        (MetricDensity::punctured_disk(), true),
        (MetricDensity::punctured_disk_radius(E).unwrap(), false),
        (MetricDensity::punctured_disk_radius(E * E).unwrap(), false),
        (pdisk_pullback(HolomorphicMap::example1()), false),
    ];
    for (metric, should_fire) in &family {
        let d = dichotomy_analysis(metric, &seq).unwrap();
        out.record(
            d.part_b_triggered == *should_fire,
            format!("{}: part (b) trigger {} (limit {:.3e})", metric.label(), d.part_b_triggered, d.limit),
        );
    }
    out
}

fn rigidity_fits() -> Outcome {
    let mut out = Outcome::new();
    let ds: Vec<f64> = (1..=10).map(|i| 0.5 * f64::from(i)).collect();
    for (beta, coeff) in [(1.0, 0.3), (2.5, 1.0), (4.0, 0.5), (6.0, 2.0)] {
        let sample = BoundarySequenceSample::from_deficits(
            ds.iter().map(|_| c(0.5, 0.0)).collect(),
            ds.iter().map(|d| coeff * (-beta * d).exp()).collect(),
            ds.clone(),
            c(0.0, 0.0),
        );
        let est = decay_exponent_fit(&sample).unwrap();
        let err = (est.beta - beta).abs().max((est.c - coeff).abs());
        out.record(err <= PLANTED_TOL, format!("planted β = {beta}, c = {coeff}: error {err:.3e}"));
    }
    let metric = pdisk_pullback(HolomorphicMap::example1());
    let points: Vec<C64> = (2..=8).map(|n| c(10f64.powi(-n), 0.0)).collect();
    let sample = sample_sequence(&metric, &MetricDensity::punctured_disk(), DomainModel::PuncturedDisk, &points, c(0.5, 0.0))
        .unwrap();
    let est = decay_exponent_fit(&sample).unwrap();
    let class = classify_boundary_condition(&est, Setting::Puncture, DEFAULT_MARGIN);
    out.record(
        (est.beta - 2.0).abs() <= EXAMPLE_BETA_TOL && class != Classification::RigidityForced,
        format!("example1 in the puncture setting: β = {:.4}, r2 = {:.6}, {class:?}", est.beta, est.r2),
    );
    out
}

fn pairs_for(domain: DomainModel, seed: u64) -> Vec<(C64, C64)> {
    let sample = |s| match domain {
        DomainModel::Disk => sampling::random_in_annulus(s, 50, 0.0, 0.9),
        DomainModel::PuncturedDisk => sampling::random_in_annulus(s, 50, 0.02, 0.9),
        DomainModel::PuncturedDiskR(big_r) => sampling::random_in_annulus(s, 50, 0.02 * big_r, 0.9 * big_r),
        DomainModel::Annulus(r) => sampling::random_in_annulus(s, 50, r + 0.05, 0.95),
        DomainModel::HalfPlane => sampling::random_in_box(s, 50, (-1.0, 1.0), (0.1, 2.0)),
        DomainModel::Strip(h) => sampling::random_in_box(s, 50, (-1.0, 1.0), (0.1 * h, 0.9 * h)),
    };
    sample(seed).into_iter().zip(sample(seed + 1)).collect()
}

fn distance_cross_validation() -> Outcome {
    let mut out = Outcome::new();
    let domains = [
        DomainModel::Disk,
        DomainModel::PuncturedDisk,
        DomainModel::PuncturedDiskR(E),
        DomainModel::Annulus(0.5),
        DomainModel::HalfPlane,
        DomainModel::Strip(1.0),
    ];
    for domain in domains {
        let pairs = pairs_for(domain, SEED);
        let worst = pairs
            .par_iter()
            .map(|&(z1, z2)| {
                let exact = distance(domain, z1, z2, DEFAULT_WINDING).unwrap().value;
                let grid = geodesic_oracle(domain, z1, z2, ORACLE_GRID).unwrap().value;
                (exact - grid).abs()
            })
            .reduce(|| 0.0, f64::max);
        out.record(worst <= ORACLE_TOL, format!("{domain:?}: max |lift − oracle| = {worst:.3e} over 50 pairs"));
    }
    let at = covering_decay_ratio(c(0.999, 0.0)).unwrap();
    out.record((at - 1.0 / 1.999).abs() <= DECAY_TOL, format!("decay ratio at 0.999 = {at:.15}"));
    let values: Vec<f64> = (3..=9).map(|k| covering_decay_ratio(c(1.0 - 10f64.powi(-k), 0.0)).unwrap()).collect();
    let trend = hypmetric_core::limits::trend(&values, 1.0);
    let last = *values.last().unwrap();
    out.record(
        trend.converging && (last - 0.5).abs() < (values[0] - 0.5).abs(),
        format!("decay ratio trends to 1/2: last value {last:.12}"),
    );
    out
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("curvature suite", curvature_suite),
        ("ahlfors suite", ahlfors_suite),
        ("beardon-minda suite", beardon_minda_suite),
        ("harnack suites", harnack_suites),
        ("hopf limits", hopf_limits),
        ("witness limits", witness_limits),
        ("comparability sandwich", comparability_sandwich),
        ("liouville solver", liouville_solver),
        ("dichotomy", dichotomy),
        ("rigidity fits", rigidity_fits),
        ("distance cross-validation", distance_cross_validation),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        println!(
            "criterion {:>2} {}: {name} ({:.1}s)",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
        for line in &outcome.lines {
            println!("    {line}");
        }
        failed += usize::from(!outcome.pass);
    }
    println!("{} of 11 criteria passed in {:.1}s", 11 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
