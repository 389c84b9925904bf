//! Seeded sample sets. Every generator is a pure function of its arguments.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;

use crate::C64;

pub fn rng(seed: u64) -> Pcg64 {
    Pcg64::seed_from_u64(seed)
}

/// `count` points uniform in the annulus `r_min ≤ |z| ≤ r_max` (area measure).
pub fn random_in_annulus(seed: u64, count: usize, r_min: f64, r_max: f64) -> Vec<C64> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let theta: f64 = rng.random::<f64>() * 2.0 * PI;
            let rho = (r_min * r_min + u * (r_max * r_max - r_min * r_min)).sqrt();
            C64::from_polar(rho, theta)
        })
        .collect()
}

/// `count` points with `log|z|` uniform in `[log r_min, log r_max]`.
pub fn random_log_polar(seed: u64, count: usize, r_min: f64, r_max: f64) -> Vec<C64> {
    let mut rng = rng(seed);
    let (a, b) = (r_min.ln(), r_max.ln());
    (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let theta: f64 = rng.random::<f64>() * 2.0 * PI;
            C64::from_polar((a + u * (b - a)).exp(), theta)
        })
        .collect()
}

/// `count` points uniform in the rectangle `[x0, x1] × [y0, y1]`.
pub fn random_in_box(seed: u64, count: usize, x: (f64, f64), y: (f64, f64)) -> Vec<C64> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let re = x.0 + rng.random::<f64>() * (x.1 - x.0);
            let im = y.0 + rng.random::<f64>() * (y.1 - y.0);
            C64::new(re, im)
        })
        .collect()
}

/// Cell-centred `n × n` grid over `[−extent, extent]²` restricted to `|z| < extent`,
/// ordered row by row.
pub fn disk_grid(n: usize, extent: f64) -> Vec<C64> {
    let step = 2.0 * extent / n as f64;
    let mut points = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let z = C64::new(-extent + (j as f64 + 0.5) * step, -extent + (i as f64 + 0.5) * step);
            if z.norm() < extent {
                points.push(z);
            }
        }
    }
    points
}

/// Polar grid with `radii` log-spaced moduli in `[r_min, r_max]` (outer loop)
/// and `angles` equally spaced arguments (inner loop).
pub fn polar_grid(radii: usize, angles: usize, r_min: f64, r_max: f64) -> Vec<C64> {
    let (a, b) = (r_min.ln(), r_max.ln());
    let mut points = Vec::with_capacity(radii * angles);
    for i in 0..radii {
        let s = if radii == 1 { 0.0 } else { i as f64 / (radii - 1) as f64 };
        let rho = (a + s * (b - a)).exp();
        for j in 0..angles {
            points.push(C64::from_polar(rho, 2.0 * PI * j as f64 / angles as f64));
        }
    }
    points
}

/// `count` values log-spaced from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            let s = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
            (a + s * (b - a)).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_sets_are_reproducible() {
        assert_eq!(random_in_annulus(7, 20, 0.1, 0.9), random_in_annulus(7, 20, 0.1, 0.9));
        assert_ne!(random_in_annulus(7, 20, 0.1, 0.9), random_in_annulus(8, 20, 0.1, 0.9));
    }

    #[test]
    fn samples_respect_bounds() {
        for z in random_in_annulus(1, 500, 0.2, 0.7) {
            assert!(z.norm() >= 0.2 - 1e-12 && z.norm() <= 0.7 + 1e-12);
        }
        for z in random_log_polar(2, 500, 1e-6, 0.1) {
            assert!(z.norm() >= 1e-6 * (1.0 - 1e-12) && z.norm() <= 0.1 * (1.0 + 1e-12));
        }
        for z in random_in_box(3, 500, (-1.0, 1.0), (0.5, 2.0)) {
            assert!(z.re.abs() <= 1.0 && z.im >= 0.5 && z.im <= 2.0);
        }
    }

    #[test]
    fn grids() {
        let grid = disk_grid(50, 0.95);
        assert!(grid.iter().all(|z| z.norm() < 0.95));
        assert!(grid.len() > 1900 && grid.len() < 2500);
        let polar = polar_grid(5, 100, 1e-4, 0.1);
        assert_eq!(polar.len(), 500);
        assert!((polar[0].norm() - 1e-4).abs() < 1e-16);
        let spaced = log_spaced(1e-8, 0.1, 50);
        assert!((spaced[49] - 0.1).abs() < 1e-15 && (spaced[0] - 1e-8).abs() < 1e-22);
    }
}
