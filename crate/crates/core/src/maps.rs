//! Holomorphic maps given by value and derivative evaluators.

use std::fmt;
use std::sync::Arc;

use crate::C64;

type ComplexFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// An analytic map together with its exact derivative.
#[derive(Clone)]
pub struct HolomorphicMap {
    value: ComplexFn,
    derivative: ComplexFn,
    label: String,
}

impl HolomorphicMap {
    pub fn new<F, D>(label: impl Into<String>, value: F, derivative: D) -> Self
    where
        F: Fn(C64) -> C64 + Send + Sync + 'static,
        D: Fn(C64) -> C64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
            label: label.into(),
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.value)(z)
    }

    pub fn derivative(&self, z: C64) -> C64 {
        (self.derivative)(z)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity() -> Self {
        Self::new("identity", |z| z, |_| C64::new(1.0, 0.0))
    }

    /// `z ↦ z²`.
    pub fn square() -> Self {
        Self::new("square", |z| z * z, |z| 2.0 * z)
    }

    /// Disk automorphism `z ↦ (z − a)/(1 − ā z)`, `|a| < 1`.
    pub fn mobius(a: C64) -> Self {
        let scale = 1.0 - a.norm_sqr();
        Self::new(
            format!("mobius:{},{}", a.re, a.im),
            move |z| (z - a) / (1.0 - a.conj() * z),
            move |z| {
                let den = 1.0 - a.conj() * z;
                scale / (den * den)
            },
        )
    }

    /// Cubic self-map `z ↦ z − (z − 1)³/12` of the unit disk, fixing 1 with
    /// `φ′(1) = 1`.
    pub fn phi() -> Self {
        Self::new(
            "phi",
            |z| {
                let w = z - 1.0;
                z - w * w * w / 12.0
            },
            |z| {
                let w = z - 1.0;
                1.0 - w * w / 4.0
            },
        )
    }

    /// Self-map `z ↦ z·exp(−(1 + z)/(1 − z))` of the punctured disk.
    ///
    /// The derivative uses the product form
    /// `f′(z) = (1 − 4z + z²)/(1 − z)² · exp(−(1 + z)/(1 − z))`, which is
    /// regular at `z = 0` with `f′(0) = e⁻¹`.
    pub fn example1() -> Self {
        Self::new(
            "example1",
            |z| z * (-(1.0 + z) / (1.0 - z)).exp(),
            |z| {
                let one_minus = 1.0 - z;
                let factor = (1.0 - 4.0 * z + z * z) / (one_minus * one_minus);
                factor * (-(1.0 + z) / one_minus).exp()
            },
        )
    }
}

impl fmt::Debug for HolomorphicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HolomorphicMap")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central_difference(map: &HolomorphicMap, z: C64, h: f64) -> C64 {
        (map.eval(z + h) - map.eval(z - h)) / (2.0 * h)
    }

    #[test]
    fn derivatives_match_central_differences() {
        let maps = [
            HolomorphicMap::identity(),
            HolomorphicMap::square(),
            HolomorphicMap::mobius(C64::new(0.3, -0.2)),
            HolomorphicMap::phi(),
            HolomorphicMap::example1(),
        ];
        let points = [
            C64::new(0.1, 0.2),
            C64::new(-0.4, 0.3),
            C64::new(0.5, -0.5),
            C64::new(0.0, 0.7),
        ];
        for map in &maps {
            for &z in &points {
                let exact = map.derivative(z);
                let fd = central_difference(map, z, 1e-5);
                assert!(
                    (exact - fd).norm() <= 1e-6 * exact.norm().max(1.0),
                    "{} at {z}: {exact} vs {fd}",
                    map.label()
                );
            }
        }
    }

    #[test]
    fn phi_fixed_point_and_origin() {
        let phi = HolomorphicMap::phi();
        assert_eq!(phi.eval(C64::new(1.0, 0.0)), C64::new(1.0, 0.0));
        assert_eq!(phi.derivative(C64::new(1.0, 0.0)), C64::new(1.0, 0.0));
        assert!((phi.eval(C64::new(0.0, 0.0)) - C64::new(1.0 / 12.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn example1_values() {
        let f = HolomorphicMap::example1();
        assert_eq!(f.eval(C64::new(0.0, 0.0)), C64::new(0.0, 0.0));
        let half = f.eval(C64::new(0.5, 0.0));
        assert!((half.norm() - 0.5 * (-3.0f64).exp()).abs() < 1e-16);
        let d0 = f.derivative(C64::new(0.0, 0.0));
        assert!((d0.re - (-1.0f64).exp()).abs() < 1e-16 && d0.im == 0.0);
    }
}
