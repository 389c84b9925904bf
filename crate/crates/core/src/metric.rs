//! Conformal (pseudo)metric densities `λ(z)|dz|`.
//!
//! A [`MetricDensity`] is one of three things: a named closed form (the
//! hyperbolic densities of the model domains, and the conical model
//! metrics), a pullback of another density through a holomorphic map, or a
//! user closure on a user region. Every closed form also has an exact
//! log-density, which is what the curvature operator and the ratio
//! functionals consume: densities near a puncture span hundreds of orders of
//! magnitude, their logarithms do not.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::domain::DomainModel;
use crate::maps::HolomorphicMap;
use crate::{Error, Result, C64};

type Predicate = Arc<dyn Fn(C64) -> bool + Send + Sync>;
type DensityFn = Arc<dyn Fn(C64) -> f64 + Send + Sync>;

/// Where a density lives: a model domain, or a caller-declared predicate.
#[derive(Clone)]
pub enum Region {
    Model(DomainModel),
    Custom { label: String, contains: Predicate },
}

impl Region {
    pub fn custom<F>(label: impl Into<String>, contains: F) -> Self
    where
        F: Fn(C64) -> bool + Send + Sync + 'static,
    {
        Self::Custom {
            label: label.into(),
            contains: Arc::new(contains),
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        match self {
            Self::Model(domain) => domain.contains(z),
            Self::Custom { contains, .. } => contains(z),
        }
    }

    pub fn model(&self) -> Option<DomainModel> {
        match self {
            Self::Model(domain) => Some(*domain),
            Self::Custom { .. } => None,
        }
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Model(domain) => write!(f, "Model({domain})"),
            Self::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

/// Named closed-form densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    /// `1/(1 − |z|²)` on the unit disk.
    Disk,
    /// `1/(2|z| log(1/|z|))` on the punctured disk.
    PuncturedDisk,
    /// `1/(2|z| log(R/|z|))` on `0 < |z| < R`.
    PuncturedDiskR(f64),
    /// `π/(2|z| L sin(π log(1/|z|)/L))`, `L = log(1/r)`, on `r < |z| < 1`.
    Annulus(f64),
    /// `(1 − α)|z|^{−α}/(1 − |z|^{2(1−α)})` on the punctured disk.
    Conical(f64),
    /// `(1 − α)c|z|^{−α}/(1 − c²|z|^{2(1−α)})`, restricted to the punctured disk.
    ConicalScaled { alpha: f64, c: f64 },
    /// `1/(2 Im z)` on the upper half-plane.
    HalfPlane,
    /// `π/(2h sin(π Im z/h))` on the strip `0 < Im z < h`.
    Strip(f64),
}

impl Builtin {
    pub fn domain(&self) -> DomainModel {
        match *self {
            Self::Disk => DomainModel::Disk,
            Self::PuncturedDisk | Self::Conical(_) | Self::ConicalScaled { .. } => {
                DomainModel::PuncturedDisk
            }
            Self::PuncturedDiskR(big_r) => DomainModel::PuncturedDiskR(big_r),
            Self::Annulus(r) => DomainModel::Annulus(r),
            Self::HalfPlane => DomainModel::HalfPlane,
            Self::Strip(h) => DomainModel::Strip(h),
        }
    }

    fn label(&self) -> String {
        match *self {
            Self::Disk => "disk".into(),
            Self::PuncturedDisk => "pdisk".into(),
            Self::PuncturedDiskR(big_r) => format!("pdiskR:{big_r}"),
            Self::Annulus(r) => format!("annulus:{r}"),
            Self::Conical(alpha) => format!("conical:{alpha}"),
            Self::ConicalScaled { alpha, c } => format!("conical-scaled:{alpha},{c}"),
            Self::HalfPlane => "halfplane".into(),
            Self::Strip(h) => format!("strip:{h}"),
        }
    }

    /// Closed-form density. The caller has already checked membership.
    fn density(&self, z: C64) -> f64 {
        let rho = z.norm();
        match *self {
            Self::Disk => 1.0 / ((1.0 - rho) * (1.0 + rho)),
            Self::PuncturedDisk => 1.0 / (2.0 * rho * (-rho.ln())),
            Self::PuncturedDiskR(big_r) => 1.0 / (2.0 * rho * (big_r / rho).ln()),
            Self::Annulus(r) => {
                let width = -r.ln();
                let depth = -rho.ln();
                PI / (2.0 * rho * width * (PI * depth / width).sin())
            }
            Self::Conical(alpha) => {
                let beta = 1.0 - alpha;
                beta * rho.powf(-alpha) / -(2.0 * beta * rho.ln()).exp_m1()
            }
            Self::ConicalScaled { alpha, c } => {
                let beta = 1.0 - alpha;
                beta * c * rho.powf(-alpha) / -(2.0 * (c.ln() + beta * rho.ln())).exp_m1()
            }
            Self::HalfPlane => 1.0 / (2.0 * z.im),
            Self::Strip(h) => PI / (2.0 * h * (PI * z.im / h).sin()),
        }
    }

    fn log_density(&self, z: C64) -> f64 {
        let rho = z.norm();
        let log_rho = rho.ln();
        match *self {
            Self::Disk => -(-rho * rho).ln_1p(),
            Self::PuncturedDisk => -(2.0 * rho * (-log_rho)).ln(),
            Self::PuncturedDiskR(big_r) => -(2.0 * rho).ln() - (big_r.ln() - log_rho).ln(),
            Self::Annulus(r) => {
                let width = -r.ln();
                PI.ln() - (2.0 * width).ln() - log_rho - (PI * (-log_rho) / width).sin().ln()
            }
            Self::Conical(alpha) => {
                let beta = 1.0 - alpha;
                beta.ln() - alpha * log_rho - (-(2.0 * beta * log_rho).exp_m1()).ln()
            }
            Self::ConicalScaled { alpha, c } => {
                let beta = 1.0 - alpha;
                (beta * c).ln()
                    - alpha * log_rho
                    - (-(2.0 * (c.ln() + beta * log_rho)).exp_m1()).ln()
            }
            Self::HalfPlane => -(2.0 * z.im).ln(),
            Self::Strip(h) => PI.ln() - (2.0 * h).ln() - (PI * z.im / h).sin().ln(),
        }
    }
}

#[derive(Clone)]
enum Kind {
    Builtin(Builtin),
    Pullback {
        base: Arc<MetricDensity>,
        map: HolomorphicMap,
    },
    Custom {
        eval: DensityFn,
        singular: Vec<C64>,
    },
}

/// An evaluable conformal density on a region.
#[derive(Clone)]
pub struct MetricDensity {
    region: Region,
    kind: Kind,
    label: String,
}

impl MetricDensity {
    fn builtin(b: Builtin) -> Self {
        Self {
            region: Region::Model(b.domain()),
            label: b.label(),
            kind: Kind::Builtin(b),
        }
    }

    /// Hyperbolic density `λ_D` of the unit disk.
    pub fn disk() -> Self {
        Self::builtin(Builtin::Disk)
    }

    /// Hyperbolic density `λ_{D'}` of the punctured unit disk.
    pub fn punctured_disk() -> Self {
        Self::builtin(Builtin::PuncturedDisk)
    }

    /// Hyperbolic density of the punctured disk of radius `R ≥ 1`.
    pub fn punctured_disk_radius(big_r: f64) -> Result<Self> {
        DomainModel::punctured_disk_radius(big_r)?;
        Ok(Self::builtin(Builtin::PuncturedDiskR(big_r)))
    }

    /// Hyperbolic density of the annulus `r < |z| < 1`.
    pub fn annulus(r: f64) -> Result<Self> {
        DomainModel::annulus(r)?;
        Ok(Self::builtin(Builtin::Annulus(r)))
    }

    /// Conical model metric `λ_α` of order `α < 1` on the punctured disk.
    pub fn conical(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::builtin(Builtin::Conical(alpha)))
    }

    /// Scaled conical family `λ_{α,c}`, `0 < c ≤ 1`; `c = 1` is `λ_α`.
    pub fn conical_scaled(alpha: f64, c: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::BadParameter(format!(
                "conical scale must lie in (0, 1], got {c}"
            )));
        }
        Ok(Self::builtin(Builtin::ConicalScaled { alpha, c }))
    }

    pub fn halfplane() -> Self {
        Self::builtin(Builtin::HalfPlane)
    }

    pub fn strip(h: f64) -> Result<Self> {
        DomainModel::strip(h)?;
        Ok(Self::builtin(Builtin::Strip(h)))
    }

    /// Hyperbolic density of a model domain.
    pub fn hyperbolic(domain: DomainModel) -> Result<Self> {
        match domain {
            DomainModel::Disk => Ok(Self::disk()),
            DomainModel::PuncturedDisk => Ok(Self::punctured_disk()),
            DomainModel::PuncturedDiskR(big_r) => Self::punctured_disk_radius(big_r),
            DomainModel::Annulus(r) => Self::annulus(r),
            DomainModel::HalfPlane => Ok(Self::halfplane()),
            DomainModel::Strip(h) => Self::strip(h),
        }
    }

    /// A user density. `singular` lists points where evaluation is refused.
    pub fn custom<F>(label: impl Into<String>, region: Region, singular: Vec<C64>, eval: F) -> Self
    where
        F: Fn(C64) -> f64 + Send + Sync + 'static,
    {
        Self {
            region,
            label: label.into(),
            kind: Kind::Custom {
                eval: Arc::new(eval),
                singular,
            },
        }
    }

    /// Pullback `z ↦ λ(f(z))·|f′(z)|` on `source`.
    ///
    /// That `f` maps `source` into the region of `metric` is the caller's
    /// claim; evaluations that land outside report [`Error::OutsideDomain`].
    pub fn pullback(metric: &MetricDensity, map: &HolomorphicMap, source: DomainModel) -> Self {
        Self {
            region: Region::Model(source),
            label: format!("pull:{}:{}", map.label(), metric.label),
            kind: Kind::Pullback {
                base: Arc::new(metric.clone()),
                map: map.clone(),
            },
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn as_builtin(&self) -> Option<Builtin> {
        match self.kind {
            Kind::Builtin(b) => Some(b),
            _ => None,
        }
    }

    pub fn is_pullback(&self) -> bool {
        matches!(self.kind, Kind::Pullback { .. })
    }

    fn singular_points(&self) -> &[C64] {
        match &self.kind {
            Kind::Custom { singular, .. } => singular,
            _ => self.region.model().map_or(&[], |d| d.punctures()),
        }
    }

    fn check_point(&self, z: C64) -> Result<()> {
        if self.singular_points().contains(&z) {
            return Err(Error::SingularPoint(z, self.label.clone()));
        }
        if !self.region.contains(z) {
            return Err(Error::OutsideDomain(z, self.label.clone()));
        }
        Ok(())
    }

    /// `λ(z)`.
    pub fn density_at(&self, z: C64) -> Result<f64> {
        self.check_point(z)?;
        match &self.kind {
            Kind::Builtin(b) => Ok(b.density(z)),
            Kind::Pullback { base, map } => {
                let derivative = map.derivative(z).norm();
                let image = map.eval(z);
                let value = base.density_at(image)?;
                if derivative == 0.0 {
                    return Ok(0.0);
                }
                Ok(value * derivative)
            }
            Kind::Custom { eval, .. } => Ok(eval(z)),
        }
    }

    /// `log λ(z)`; `−∞` where a pseudometric vanishes.
    pub fn log_density_at(&self, z: C64) -> Result<f64> {
        self.check_point(z)?;
        match &self.kind {
            Kind::Builtin(b) => Ok(b.log_density(z)),
            Kind::Pullback { base, map } => {
                let derivative = map.derivative(z).norm();
                let image = map.eval(z);
                let value = base.log_density_at(image)?;
                Ok(value + derivative.ln())
            }
            Kind::Custom { eval, .. } => Ok(eval(z).ln()),
        }
    }

    /// `log(λ(z)/λ_ref(z))`, evaluated through log-densities.
    pub fn log_ratio_at(&self, reference: &MetricDensity, z: C64) -> Result<f64> {
        Ok(self.log_density_at(z)? - reference.log_density_at(z)?)
    }
}

impl fmt::Debug for MetricDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricDensity")
            .field("label", &self.label)
            .field("region", &self.region)
            .finish_non_exhaustive()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha < 1.0) || !alpha.is_finite() {
        return Err(Error::BadParameter(format!(
            "conical order must be < 1, got {alpha}"
        )));
    }
    Ok(())
}

/// `λ(z)` for `metric`; see [`MetricDensity::density_at`].
pub fn density_at(metric: &MetricDensity, z: C64) -> Result<f64> {
    metric.density_at(z)
}

/// See [`MetricDensity::pullback`].
pub fn pullback(metric: &MetricDensity, map: &HolomorphicMap, source: DomainModel) -> MetricDensity {
    MetricDensity::pullback(metric, map, source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(MetricDensity::disk().density_at(re(0.0)).unwrap(), 1.0);
        // 1/(2 e^{-1} · 1) = e/2
        let pd = MetricDensity::punctured_disk().density_at(re(E.recip())).unwrap();
        assert_relative_eq!(pd, 1.359_140_914_229_522_5, max_relative = 1e-15);
        let conical = MetricDensity::conical(0.5).unwrap().density_at(re(0.25)).unwrap();
        // 0.5 / (0.25^{0.5} · (1 − 0.25))
        assert_relative_eq!(conical, 4.0 / 3.0, max_relative = 1e-14);
        let r = (-PI).exp();
        let ann = MetricDensity::annulus(r).unwrap();
        let z = C64::from_polar((-PI / 2.0).exp(), 0.7);
        assert_relative_eq!(
            ann.density_at(z).unwrap(),
            (PI / 2.0).exp() / 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn log_density_agrees_with_density() {
        let metrics = [
            MetricDensity::disk(),
            MetricDensity::punctured_disk(),
            MetricDensity::punctured_disk_radius(E).unwrap(),
            MetricDensity::annulus(0.3).unwrap(),
            MetricDensity::conical(0.4).unwrap(),
            MetricDensity::conical(-0.5).unwrap(),
            MetricDensity::conical_scaled(0.5, 0.7).unwrap(),
        ];
        for metric in &metrics {
            for &z in &[C64::new(0.4, 0.2), C64::new(-0.1, 0.6), C64::new(0.0, -0.85)] {
                let lambda = metric.density_at(z).unwrap();
                let log = metric.log_density_at(z).unwrap();
                assert_relative_eq!(lambda.ln(), log, max_relative = 1e-13, epsilon = 1e-14);
            }
        }
        let hp = MetricDensity::halfplane();
        assert_relative_eq!(hp.density_at(C64::new(3.0, 0.25)).unwrap(), 2.0);
        let strip = MetricDensity::strip(PI).unwrap();
        assert_relative_eq!(strip.density_at(C64::new(-1.0, PI / 2.0)).unwrap(), 0.5);
    }

    #[test]
    fn errors_on_singular_and_outside_points() {
        let pd = MetricDensity::punctured_disk();
        assert!(matches!(pd.density_at(re(0.0)), Err(Error::SingularPoint(..))));
        assert!(matches!(pd.density_at(re(1.5)), Err(Error::OutsideDomain(..))));
        let ann = MetricDensity::annulus(0.5).unwrap();
        assert!(matches!(ann.density_at(re(0.2)), Err(Error::OutsideDomain(..))));
    }

    #[test]
    fn pullback_values() {
        let disk = MetricDensity::disk();
        let id = MetricDensity::pullback(&disk, &HolomorphicMap::identity(), DomainModel::Disk);
        assert_relative_eq!(id.density_at(re(0.3)).unwrap(), 1.0 / 0.91, max_relative = 1e-15);
        let sq = MetricDensity::pullback(&disk, &HolomorphicMap::square(), DomainModel::Disk);
        assert_relative_eq!(sq.density_at(re(0.5)).unwrap(), 1.0 / 0.9375, max_relative = 1e-15);
        // critical point of z² gives a vanishing pseudometric
        assert_eq!(sq.density_at(re(0.0)).unwrap(), 0.0);
        assert_eq!(sq.log_density_at(re(0.0)).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn example1_pullback_matches_ratio_formula() {
        let pd = MetricDensity::punctured_disk();
        let pulled = MetricDensity::pullback(&pd, &HolomorphicMap::example1(), DomainModel::PuncturedDisk);
        for &z in &[re(0.5), C64::new(0.1, 0.3), C64::new(-0.02, 0.01)] {
            let l = -z.norm().ln();
            let one_minus = C64::new(1.0, 0.0) - z;
            let ratio = (1.0 - 4.0 * z + z * z).norm() / one_minus.norm_sqr() * l
                / (l + (1.0 - z.norm_sqr()) / one_minus.norm_sqr());
            let expected = ratio * pd.density_at(z).unwrap();
            assert_relative_eq!(pulled.density_at(z).unwrap(), expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn pullback_outside_target_is_reported() {
        let disk = MetricDensity::disk();
        let double = HolomorphicMap::new("double", |z| 2.0 * z, |_| C64::new(2.0, 0.0));
        let bad = MetricDensity::pullback(&disk, &double, DomainModel::Disk);
        assert!(matches!(bad.density_at(re(0.7)), Err(Error::OutsideDomain(..))));
    }

    #[test]
    fn conical_scaled_with_unit_scale_is_conical() {
        let a = MetricDensity::conical(0.3).unwrap();
        let b = MetricDensity::conical_scaled(0.3, 1.0).unwrap();
        for &z in &[re(0.1), C64::new(0.3, -0.5)] {
            assert_relative_eq!(a.density_at(z).unwrap(), b.density_at(z).unwrap(), max_relative = 1e-14);
        }
        assert!(MetricDensity::conical(1.0).is_err());
        assert!(MetricDensity::conical_scaled(0.5, 0.0).is_err());
    }
}
