//! Radial constant-curvature metrics in log-radius coordinates.
//!
//! With `t = log ρ` and `w = log(ρ λ)`, a radial density of curvature −4
//! satisfies the autonomous equation `w″ = 4e^{2w}`, whose first integral is
//! `E = w′² − 4e^{2w}`. `E = 0` for the punctured-disk family and
//! `E = (1 − α)²` for the conical family.

use serde::Serialize;

use crate::metric::MetricDensity;
use crate::report::{Check, Provenance, VerificationReport};
use crate::{limits, Error, Result, C64};

/// `w` beyond this value is treated as blow-up.
pub const BLOWUP_GUARD: f64 = 300.0;

/// Profiles must reach down to this `t` for classification.
pub const CLASSIFY_MIN_DEPTH: f64 = -15.0;

/// Total variation allowed for a converging remainder on the tail quarter.
pub const CLASSIFY_TV_TOL: f64 = 1e-3;

/// `4e^{2w}`.
pub fn radial_rhs(w: f64, _t: f64) -> Result<f64> {
    if w > BLOWUP_GUARD {
        return Err(Error::NumericOverflow(w));
    }
    Ok(4.0 * (2.0 * w).exp())
}

pub fn first_integral(w: f64, dw: f64) -> f64 {
    dw * dw - 4.0 * (2.0 * w).exp()
}

/// Closed-form radial solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Family {
    PuncturedDisk,
    PuncturedDiskR { radius: f64 },
    Conical { alpha: f64 },
    ConicalScaled { alpha: f64, c: f64 },
}

impl Family {
    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            Self::PuncturedDisk => true,
            Self::PuncturedDiskR { radius } => radius >= 1.0 && radius.is_finite(),
            Self::Conical { alpha } => alpha < 1.0 && alpha.is_finite(),
            Self::ConicalScaled { alpha, c } => alpha < 1.0 && alpha.is_finite() && c > 0.0 && c <= 1.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::BadParameter(format!("invalid family parameters {self:?}")))
        }
    }

    /// `(β, c)` of the conical form, or `None` for the logarithmic families.
    fn conical(self) -> Option<(f64, f64)> {
        match self {
            Self::Conical { alpha } => Some((1.0 - alpha, 1.0)),
            Self::ConicalScaled { alpha, c } => Some((1.0 - alpha, c)),
            _ => None,
        }
    }

    fn log_radius(self) -> f64 {
        match self {
            Self::PuncturedDiskR { radius } => radius.ln(),
            _ => 0.0,
        }
    }

    /// `(w, w′, w″)` at `t`.
    pub fn jet(self, t: f64) -> (f64, f64, f64) {
        match self.conical() {
            Some((beta, c)) => {
                let q = c * c * (2.0 * beta * t).exp();
                let one_minus = -(2.0 * (c.ln() + beta * t)).exp_m1();
                let w = (beta * c).ln() + beta * t - one_minus.ln();
                let dw = beta * (1.0 + q) / one_minus;
                let d2w = 4.0 * beta * beta * q / (one_minus * one_minus);
                (w, dw, d2w)
            }
            None => {
                let gap = self.log_radius() - t;
                (-(2.0 * gap).ln(), 1.0 / gap, 1.0 / (gap * gap))
            }
        }
    }

    pub fn w(self, t: f64) -> f64 {
        self.jet(t).0
    }

    /// `λ(ρ) = e^{w(log ρ)}/ρ`.
    pub fn lambda(self, rho: f64) -> f64 {
        let t = rho.ln();
        (self.w(t) - t).exp()
    }

    /// Exact value of the first integral.
    pub fn energy(self) -> f64 {
        self.conical().map_or(0.0, |(beta, _)| beta * beta)
    }

    /// The density as a metric on the punctured disk of the family.
    pub fn metric(self) -> Result<MetricDensity> {
        match self.validate()? {
            Self::PuncturedDisk => Ok(MetricDensity::punctured_disk()),
            Self::PuncturedDiskR { radius } => MetricDensity::punctured_disk_radius(radius),
            Self::Conical { alpha } => MetricDensity::conical(alpha),
            Self::ConicalScaled { alpha, c } => MetricDensity::conical_scaled(alpha, c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Derivation {
    ClosedForm { family: Family },
    Integrated { w0: f64, dw0: f64, t0: f64, t1: f64, steps: usize },
}

/// A radial profile sampled on a strictly increasing `t` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub t_grid: Vec<f64>,
    pub w_values: Vec<f64>,
    pub dw_values: Vec<f64>,
    pub derivation: Derivation,
}

impl RadialProfile {
    pub fn lambda(&self, i: usize) -> f64 {
        (self.w_values[i] - self.t_grid[i]).exp()
    }

    pub fn energy(&self, i: usize) -> f64 {
        first_integral(self.w_values[i], self.dw_values[i])
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    /// Value and slope at the end of the integration (the last `t` reached).
    pub fn terminal(&self) -> (f64, f64, f64) {
        let i = match &self.derivation {
            Derivation::Integrated { t0, t1, .. } if t1 < t0 => 0,
            _ => self.len() - 1,
        };
        (self.t_grid[i], self.w_values[i], self.dw_values[i])
    }
}

fn rk4_step(w: f64, p: f64, h: f64) -> Result<(f64, f64)> {
    let k1w = p;
    let k1p = radial_rhs(w, 0.0)?;
    let k2w = p + 0.5 * h * k1p;
    let k2p = radial_rhs(w + 0.5 * h * k1w, 0.0)?;
    let k3w = p + 0.5 * h * k2p;
    let k3p = radial_rhs(w + 0.5 * h * k2w, 0.0)?;
    let k4w = p + h * k3p;
    let k4p = radial_rhs(w + h * k3w, 0.0)?;
    let w_next = w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    let p_next = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    if !(w_next <= BLOWUP_GUARD) {
        return Err(Error::NumericOverflow(w_next));
    }
    Ok((w_next, p_next))
}

/// Solution samples in integration order, stopping at the first blow-up.
fn integrate_raw(w0: f64, dw0: f64, t0: f64, t1: f64, steps: usize) -> Result<(Vec<(f64, f64, f64)>, Option<f64>)> {
    if steps < 10 {
        return Err(Error::BadParameter(format!("need at least 10 steps, got {steps}")));
    }
    if t0 == t1 || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::BadParameter(format!("degenerate interval [{t0}, {t1}]")));
    }
    radial_rhs(w0, t0)?;
    let h = (t1 - t0) / steps as f64;
    let mut samples = Vec::with_capacity(steps + 1);
    let (mut w, mut p) = (w0, dw0);
    samples.push((t0, w, p));
    for k in 1..=steps {
        match rk4_step(w, p, h) {
            Ok((wn, pn)) => {
                (w, p) = (wn, pn);
                let t = if k == steps { t1 } else { t0 + k as f64 * h };
                samples.push((t, w, p));
            }
            Err(Error::NumericOverflow(_)) => return Ok((samples, Some(t0 + k as f64 * h))),
            Err(other) => return Err(other),
        }
    }
    Ok((samples, None))
}

fn into_profile(mut samples: Vec<(f64, f64, f64)>, derivation: Derivation) -> RadialProfile {
    if samples.len() > 1 && samples[0].0 > samples[1].0 {
        samples.reverse();
    }
    RadialProfile {
        t_grid: samples.iter().map(|s| s.0).collect(),
        w_values: samples.iter().map(|s| s.1).collect(),
        dw_values: samples.iter().map(|s| s.2).collect(),
        derivation,
    }
}

/// Fixed-step RK4 for `w″ = 4e^{2w}` from `(t0, w0, w′(t0) = dw0)` to `t1`.
///
/// The returned grid is increasing in `t` whichever way the integration ran.
pub fn integrate_radial(w0: f64, dw0: f64, t0: f64, t1: f64, steps: usize) -> Result<RadialProfile> {
    let (samples, blowup) = integrate_raw(w0, dw0, t0, t1, steps)?;
    if blowup.is_some() {
        let last = samples.last().map_or(w0, |s| s.1);
        return Err(Error::NumericOverflow(last.max(BLOWUP_GUARD)));
    }
    Ok(into_profile(samples, Derivation::Integrated { w0, dw0, t0, t1, steps }))
}

/// Like [`integrate_radial`], but truncates at the last finite step on blow-up
/// and reports where the guard tripped.
pub fn integrate_radial_truncated(
    w0: f64,
    dw0: f64,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<(RadialProfile, Option<f64>)> {
    let (samples, blowup) = integrate_raw(w0, dw0, t0, t1, steps)?;
    Ok((into_profile(samples, Derivation::Integrated { w0, dw0, t0, t1, steps }), blowup))
}

/// Samples `family` on `t_grid`.
pub fn closed_form_profile(family: Family, t_grid: &[f64]) -> Result<RadialProfile> {
    let family = family.validate()?;
    if t_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::BadParameter("t grid must be strictly increasing".into()));
    }
    let jets: Vec<_> = t_grid.iter().map(|&t| family.jet(t)).collect();
    if jets.iter().any(|j| !j.0.is_finite()) {
        return Err(Error::BadParameter(format!("t grid leaves the domain of {family:?}")));
    }
    Ok(RadialProfile {
        t_grid: t_grid.to_vec(),
        w_values: jets.iter().map(|j| j.0).collect(),
        dw_values: jets.iter().map(|j| j.1).collect(),
        derivation: Derivation::ClosedForm { family },
    })
}

/// Default grid: 4001 points on `t ∈ [−40, −1]`.
pub fn default_grid() -> Vec<f64> {
    let n = 4000;
    (0..=n).map(|i| -40.0 + 39.0 * i as f64 / n as f64).collect()
}

/// `family` on [`default_grid`].
pub fn closed_form_family(family: Family) -> Result<RadialProfile> {
    closed_form_profile(family, &default_grid())
}

/// Largest `|w″ − 4e^{2w}|` over the grid of a closed-form profile.
pub fn closed_form_residual(family: Family, t_grid: &[f64]) -> f64 {
    t_grid
        .iter()
        .map(|&t| {
            let (w, _, d2w) = family.jet(t);
            let rhs = 4.0 * (2.0 * w).exp();
            (d2w - rhs).abs() / rhs.max(1.0)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SingularityKind {
    Logarithmic,
    Conical { alpha: f64 },
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityProfile {
    pub kind: SingularityKind,
    /// Largest `|remainder|` on the tail for the accepted model; for
    /// unclassified profiles, the smaller of the two remainder variations.
    pub remainder_bound: f64,
}

fn total_variation(values: impl Iterator<Item = f64>) -> f64 {
    let mut prev = None;
    let mut tv = 0.0;
    for v in values {
        if let Some(p) = prev {
            tv += f64::abs(v - p);
        }
        prev = Some(v);
    }
    tv
}

/// Least-squares `(slope, intercept)` of `ys` against `xs`.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Logarithmic if `w + log(−2t)` settles on the tail quarter; otherwise
/// conical of order `1 − slope` if `w − slope·t` settles.
pub fn classify_singularity(profile: &RadialProfile) -> Result<SingularityProfile> {
    let start = profile.t_grid.first().copied().unwrap_or(f64::INFINITY);
    if !(start <= CLASSIFY_MIN_DEPTH) {
        return Err(Error::GridTooShort {
            required: CLASSIFY_MIN_DEPTH,
            start,
        });
    }
    let tail = (profile.len() / 4).max(2);
    let ts = &profile.t_grid[..tail];
    let ws = &profile.w_values[..tail];

    let log_remainder = ts.iter().zip(ws).map(|(t, w)| w + (-2.0 * t).ln());
    let log_tv = total_variation(log_remainder.clone());
    if log_tv <= CLASSIFY_TV_TOL {
        let bound = log_remainder.map(f64::abs).fold(0.0, f64::max);
        return Ok(SingularityProfile {
            kind: SingularityKind::Logarithmic,
            remainder_bound: bound,
        });
    }

    let (slope, _) = linear_fit(ts, ws);
    let conical_remainder = ts.iter().zip(ws).map(|(t, w)| w - slope * t);
    let conical_tv = total_variation(conical_remainder.clone());
    if slope > 0.0 && conical_tv <= CLASSIFY_TV_TOL {
        let bound = conical_remainder.map(f64::abs).fold(0.0, f64::max);
        return Ok(SingularityProfile {
            kind: SingularityKind::Conical { alpha: 1.0 - slope },
            remainder_bound: bound,
        });
    }
    Ok(SingularityProfile {
        kind: SingularityKind::Unclassified,
        remainder_bound: log_tv.min(conical_tv),
    })
}

/// `|log λ^{(R)} − log λ_{D′}|·log(1/|z|)` at `|z| = 10^{−k}`, `k = 2..10`.
pub fn part_a_values(radius: f64) -> Result<Vec<(f64, f64)>> {
    let metric = MetricDensity::punctured_disk_radius(radius)?;
    let reference = MetricDensity::punctured_disk();
    (2..=10)
        .map(|k| {
            let rho = 10f64.powi(-k);
            let z = C64::new(rho, 0.0);
            let value = metric.log_ratio_at(&reference, z)?.abs() * -rho.ln();
            Ok((rho, value))
        })
        .collect()
}

/// Boundedness of the `O(1/log(1/|z|))` remainder for `λ^{(R)}` against `λ_{D′}`.
///
/// Checks the supremum against `log R + 0.01` and the limit, extrapolated in
/// `1/log(1/|z|)`, against `log R`.
pub fn dichotomy_verify_part_a(radius: f64) -> Result<VerificationReport> {
    let values = part_a_values(radius)?;
    let log_r = radius.ln();
    let mut report = VerificationReport::new(format!("dichotomy-part-a:R={radius}"));
    let sup = values.iter().map(|v| v.1).fold(0.0, f64::max);
    report.push(Check::at_most("sup_remainder", sup, log_r, 0.01, Provenance::Analytic));
    let eps: Vec<f64> = values.iter().map(|v| -1.0 / v.0.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.1).collect();
    let limit = limits::richardson(&eps, &ys).unwrap_or(f64::NAN);
    report.push(Check::near("extrapolated_limit", limit, log_r, 2e-2, Provenance::Analytic));
    let increasing = ys.windows(2).all(|w| w[1] >= w[0]);
    report.push(Check::flag("monotone_in_k", increasing, Provenance::Analytic));
    for (rho, value) in &values {
        report.observe(format!("raw@{rho:e}"), *value);
    }
    Ok(report)
}
