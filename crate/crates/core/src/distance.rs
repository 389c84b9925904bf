//! Hyperbolic distances on the model domains.
//!
//! Simply connected models use closed formulas. The punctured disk and the
//! annulus are lifted to their universal covers (half-plane and strip) by
//! `ζ = arg z + i·log(R/|z|)` and the distance is minimised over the deck
//! translations `ζ ↦ ζ + 2πk`, tried in the order `0, −1, 1, −2, 2, …` so
//! ties resolve to the smallest `|k|`, negative first.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::domain::DomainModel;
use crate::{Error, Result, C64};

/// Curvature −4 distances are this multiple of the curvature −1 ones.
pub const CURVATURE_SCALE: f64 = 0.5;

pub const DEFAULT_WINDING: i64 = 8;
pub const MAX_WINDING: i64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    LiftMinimization,
    GridOracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ClosedForm => "closed-form",
            Self::LiftMinimization => "lift-minimization",
            Self::GridOracle => "grid-oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceResult {
    pub value: f64,
    pub method: Method,
    /// Minimising deck translation; 0 for simply connected models.
    pub deck_index: i64,
}

impl DistanceResult {
    fn closed(value: f64) -> Self {
        Self {
            value,
            method: Method::ClosedForm,
            deck_index: 0,
        }
    }
}

fn require(domain: DomainModel, z: C64) -> Result<()> {
    if domain.contains(z) {
        Ok(())
    } else {
        Err(Error::OutsideDomain(z, domain.to_string()))
    }
}

/// `acosh(1 + x)` without cancellation for small `x`.
fn acosh_1p(x: f64) -> f64 {
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

/// Curvature −1 half-plane distance.
fn halfplane_unit(a: C64, b: C64) -> f64 {
    acosh_1p((a - b).norm_sqr() / (2.0 * a.im * b.im))
}

/// Curvature −1 distance in the strip `0 < Im ζ < width`, via `ζ ↦ exp(πζ/width)`.
///
/// Uses `|e^{a} − e^{b}|²/(2 Im e^{a} Im e^{b}) = (2 sinh²(Δx/2) + 2 sin²(Δy/2))/(sin y₁ sin y₂)`
/// with `a = πζ₁/width`, `b = πζ₂/width`, which never forms the exponentials.
fn strip_unit(a: C64, b: C64, width: f64) -> f64 {
    let k = PI / width;
    let dx = k * (a.re - b.re);
    let dy = k * (a.im - b.im);
    let sh = (0.5 * dx).sinh();
    let sn = (0.5 * dy).sin();
    let num = 2.0 * (sh * sh + sn * sn);
    acosh_1p(num / ((k * a.im).sin() * (k * b.im).sin()))
}

pub fn dist_disk(z1: C64, z2: C64) -> Result<DistanceResult> {
    require(DomainModel::Disk, z1)?;
    require(DomainModel::Disk, z2)?;
    let rho = (z1 - z2).norm() / (1.0 - z1.conj() * z2).norm();
    Ok(DistanceResult::closed(2.0 * CURVATURE_SCALE * rho.atanh()))
}

pub fn dist_halfplane(z1: C64, z2: C64) -> Result<DistanceResult> {
    require(DomainModel::HalfPlane, z1)?;
    require(DomainModel::HalfPlane, z2)?;
    Ok(DistanceResult::closed(CURVATURE_SCALE * halfplane_unit(z1, z2)))
}

/// Distance in the strip `0 < Im z < h` with density `π/(2h sin(π Im z/h))`.
pub fn dist_strip(z1: C64, z2: C64, h: f64) -> Result<DistanceResult> {
    let domain = DomainModel::strip(h)?;
    require(domain, z1)?;
    require(domain, z2)?;
    Ok(DistanceResult::closed(CURVATURE_SCALE * strip_unit(z1, z2, h)))
}

/// Covering coordinate `arg z + i·log(radius/|z|)`.
pub fn lift(z: C64, radius: f64) -> C64 {
    C64::new(z.arg(), radius.ln() - z.norm().ln())
}

/// Deck translations in the order `0, −1, 1, −2, 2, …, −W, W`.
fn deck_order(bound: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [-k, k]))
}

fn minimise_over_deck<F>(a: C64, b: C64, bound: i64, unit: F) -> Result<DistanceResult>
where
    F: Fn(C64, C64) -> f64,
{
    if bound < 1 {
        return Err(Error::BadParameter(format!("winding bound must be >= 1, got {bound}")));
    }
    let mut best = (f64::INFINITY, 0i64);
    for k in deck_order(bound) {
        let value = unit(a, b + C64::new(2.0 * PI * k as f64, 0.0));
        if value < best.0 {
            best = (value, k);
        }
    }
    if best.1.abs() == bound {
        return Err(Error::WindingBoundTooSmall(bound));
    }
    Ok(DistanceResult {
        value: CURVATURE_SCALE * best.0,
        method: Method::LiftMinimization,
        deck_index: best.1,
    })
}

/// Retries with doubled bound on [`Error::WindingBoundTooSmall`] up to [`MAX_WINDING`].
fn adaptive<F>(start: i64, attempt: F) -> Result<DistanceResult>
where
    F: Fn(i64) -> Result<DistanceResult>,
{
    let mut bound = start.max(1);
    loop {
        match attempt(bound) {
            Err(Error::WindingBoundTooSmall(_)) if bound < MAX_WINDING => {
                bound = (2 * bound).min(MAX_WINDING);
            }
            other => return other,
        }
    }
}

pub fn dist_punctured_disk(z1: C64, z2: C64, winding_bound: i64) -> Result<DistanceResult> {
    dist_punctured_disk_radius(z1, z2, 1.0, winding_bound)
}

/// Distance in `0 < |z| < R`.
pub fn dist_punctured_disk_radius(z1: C64, z2: C64, radius: f64, winding_bound: i64) -> Result<DistanceResult> {
    let domain = DomainModel::punctured_disk_radius(radius)?;
    require(domain, z1)?;
    require(domain, z2)?;
    minimise_over_deck(lift(z1, radius), lift(z2, radius), winding_bound, halfplane_unit)
}

pub fn dist_annulus(z1: C64, z2: C64, r: f64, winding_bound: i64) -> Result<DistanceResult> {
    let domain = DomainModel::annulus(r)?;
    require(domain, z1)?;
    require(domain, z2)?;
    let width = -r.ln();
    minimise_over_deck(lift(z1, 1.0), lift(z2, 1.0), winding_bound, |a, b| strip_unit(a, b, width))
}

/// Distance on any model domain; lifted distances grow the winding bound as needed.
pub fn distance(domain: DomainModel, z1: C64, z2: C64, winding_bound: i64) -> Result<DistanceResult> {
    match domain {
        DomainModel::Disk => dist_disk(z1, z2),
        DomainModel::HalfPlane => dist_halfplane(z1, z2),
        DomainModel::Strip(h) => dist_strip(z1, z2, h),
        DomainModel::PuncturedDisk => adaptive(winding_bound, |w| dist_punctured_disk(z1, z2, w)),
        DomainModel::PuncturedDiskR(radius) => {
            adaptive(winding_bound, |w| dist_punctured_disk_radius(z1, z2, radius, w))
        }
        DomainModel::Annulus(r) => adaptive(winding_bound, |w| dist_annulus(z1, z2, r, w)),
    }
}

/// `e^{−2 d_D(z, 0)}/(1 − |z|)`, which equals `1/(1 + |z|)`.
pub fn covering_decay_ratio(z: C64) -> Result<f64> {
    let d = dist_disk(z, C64::new(0.0, 0.0))?.value;
    Ok((-2.0 * d).exp() / (1.0 - z.norm()))
}

/// Comparability constants for `log(1/|z|)·e^{−2 d_{D′}(z, q)}` on the punctured disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparabilityConstants {
    pub c1: f64,
    pub c2: f64,
    /// `max_{|w| = |q|} d_{D′}(w, q)`.
    pub gamma: f64,
    /// Argument of the maximiser.
    pub argmax: f64,
}

const CIRCLE_SAMPLES: usize = 720;
const GOLDEN_TOL: f64 = 1e-8;

/// Maximises `f` on `[a, b]` by golden-section search; `f` must be unimodal there.
pub(crate) fn golden_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// `γ`, `c1 = |log|q||·e^{−2γ}` and `c2 = |log|q|| + π` for base point `q` in `D′`.
///
/// `γ` comes from a sweep of the circle `|w| = |q|` followed by golden-section
/// refinement around the best sample.
pub fn comparability_constants(q: C64, radius: f64) -> Result<ComparabilityConstants> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::BadParameter(format!("radius must lie in (0, 1], got {radius}")));
    }
    let rho = q.norm();
    if !(rho > 0.0 && rho < radius) {
        return Err(Error::OutsideDomain(q, format!("0 < |z| < {radius}")));
    }
    let base = q.arg();
    let at = |theta: f64| -> f64 {
        distance(DomainModel::PuncturedDisk, C64::from_polar(rho, theta), q, DEFAULT_WINDING)
            .map_or(f64::NAN, |d| d.value)
    };
    let step = 2.0 * PI / CIRCLE_SAMPLES as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for j in 0..CIRCLE_SAMPLES {
        let value = at(base + j as f64 * step);
        if value > best.1 {
            best = (j, value);
        }
    }
    let centre = base + best.0 as f64 * step;
    let (theta, refined) = golden_max(at, centre - step, centre + step, GOLDEN_TOL);
    let (argmax, gamma) = if refined > best.1 + 4.0 * f64::EPSILON * best.1.max(1.0) {
        (theta, refined)
    } else {
        (centre, best.1)
    };
    let log_q = rho.ln().abs();
    Ok(ComparabilityConstants {
        c1: log_q * (-2.0 * gamma).exp(),
        c2: log_q + PI,
        gamma,
        argmax,
    })
}

/// `log(1/|z|)·e^{−2 d_{D′}(z, q)}`, the quantity the constants sandwich.
pub fn comparability_quantity(z: C64, q: C64) -> Result<f64> {
    let d = distance(DomainModel::PuncturedDisk, z, q, DEFAULT_WINDING)?.value;
    Ok(-z.norm().ln() * (-2.0 * d).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricDensity;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn disk_values() {
        let d = dist_disk(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((d.value - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(dist_disk(c(0.2, 0.1), c(0.2, 0.1)).unwrap().value, 0.0);
        let sym = dist_disk(c(0.0, 0.3), c(0.0, -0.3)).unwrap().value;
        let reduced = dist_disk(c(0.0, 0.0), c(0.6 / 1.09, 0.0)).unwrap().value;
        assert!((sym - reduced).abs() < 1e-15);
        assert!(dist_disk(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn halfplane_values() {
        assert_eq!(dist_halfplane(c(0.0, 1.0), c(0.0, 1.0)).unwrap().value, 0.0);
        let d = dist_halfplane(c(0.0, 1.0), c(0.0, 2.0)).unwrap().value;
        assert!((d - 0.5 * 2f64.ln()).abs() < 1e-15);
        let d = dist_halfplane(c(0.0, 1.0), c(1.0, 1.0)).unwrap().value;
        assert!((d - 0.5 * 1.5f64.acosh()).abs() < 1e-15);
        assert!((d - 0.481211825).abs() < 1e-9);
    }

    #[test]
    fn punctured_disk_same_ray() {
        let d = dist_punctured_disk(c(0.01, 0.0), c(0.1, 0.0), 8).unwrap();
        assert!((d.value - 0.5 * 2f64.ln()).abs() < 1e-14);
        assert_eq!(d.deck_index, 0);
        assert_eq!(d.method, Method::LiftMinimization);
        assert_eq!(dist_punctured_disk(c(0.3, 0.2), c(0.3, 0.2), 8).unwrap().value, 0.0);
    }

    #[test]
    fn deck_index_follows_the_short_way_round() {
        let a = C64::from_polar(0.3, 3.0);
        let b = C64::from_polar(0.3, -3.0);
        let d = dist_punctured_disk(a, b, 8).unwrap();
        assert_eq!(d.deck_index, 1);
        assert_eq!(dist_punctured_disk(a, b, 1), Err(Error::WindingBoundTooSmall(1)));
        assert_eq!(distance(DomainModel::PuncturedDisk, a, b, 1).unwrap(), d);
        // Antipodal tie resolves to k = 0.
        assert_eq!(dist_punctured_disk(c(0.1, 0.0), c(-0.1, 0.0), 8).unwrap().deck_index, 0);
    }

    #[test]
    fn strip_cover_matches_halfplane_image() {
        let r: f64 = 0.3;
        let width = -r.ln();
        let pairs = [(c(0.1, 0.4), c(1.3, 0.9)), (c(-2.0, 0.1), c(2.5, 1.1)), (c(0.0, 0.6), c(0.001, 0.6))];
        for (a, b) in pairs {
            let image = |z: C64| (PI * z / width).exp();
            let expected = dist_halfplane(image(a), image(b)).unwrap().value;
            let got = CURVATURE_SCALE * strip_unit(a, b, width);
            assert!((got - expected).abs() < 1e-12 * expected.max(1.0), "{got} vs {expected}");
        }
    }

    #[test]
    fn annulus_core_circle_length() {
        let r: f64 = 0.5;
        let s = r.sqrt();
        let theta = 1e-3;
        let d = dist_annulus(c(s, 0.0), C64::from_polar(s, theta), r, 8).unwrap().value;
        let density = MetricDensity::annulus(r).unwrap().density_at(c(s, 0.0)).unwrap();
        assert!((d - density * s * theta).abs() < 1e-6);
    }

    #[test]
    fn strip_density_matches_first_order_length() {
        let h = 2.0;
        let z = c(0.3, 0.7);
        let eps = 1e-6;
        let d = dist_strip(z, z + c(eps, 0.0), h).unwrap().value;
        let density = MetricDensity::strip(h).unwrap().density_at(z).unwrap();
        assert!((d / eps - density).abs() < 1e-6);
    }

    #[test]
    fn annulus_distance_to_outer_edge_tracks_log_log() {
        let r: f64 = 0.5;
        let core = c(r.sqrt(), 0.0);
        let diffs: Vec<f64> = (2..=6)
            .map(|k| {
                let x = 1.0 - 10f64.powi(-k);
                let d = dist_annulus(core, c(x, 0.0), r, 8).unwrap().value;
                d + 0.5 * (-x.ln()).ln()
            })
            .collect();
        let spread = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - diffs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-3, "{diffs:?}");
    }

    #[test]
    fn decay_ratio() {
        assert!((covering_decay_ratio(c(0.9, 0.0)).unwrap() - 1.0 / 1.9).abs() < 1e-13);
        assert_eq!(covering_decay_ratio(c(0.0, 0.0)).unwrap(), 1.0);
        assert!((covering_decay_ratio(c(0.999, 0.0)).unwrap() - 1.0 / 1.999).abs() < 1e-12);
    }

    #[test]
    fn comparability_for_q_one_tenth() {
        let q = c(0.1, 0.0);
        let k = comparability_constants(q, 1.0).unwrap();
        assert!((k.c2 - (10f64.ln() + PI)).abs() < 1e-15);
        let antipodal = dist_punctured_disk(c(-0.1, 0.0), q, 8).unwrap().value;
        assert!((k.gamma - antipodal).abs() < 1e-12);
        assert!((k.argmax.rem_euclid(2.0 * PI) - PI).abs() < 1e-6);
        for rho in crate::sampling::log_spaced(1e-8, 0.1, 50) {
            for theta in [0.0, 1.0, PI] {
                let value = comparability_quantity(C64::from_polar(rho, theta), q).unwrap();
                assert!(k.c1 <= value * (1.0 + 1e-12) && value <= k.c2, "{rho} {theta}: {value}");
            }
        }
        assert!(comparability_constants(c(0.0, 0.0), 1.0).is_err());
        assert!(comparability_constants(q, 0.05).is_err());
    }
}
