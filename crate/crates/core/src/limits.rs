//! Sequence acceleration and convergence-trend tests for limit functionals.

use serde::Serialize;

/// Aitken Δ² estimate from the last three terms of `values`.
///
/// Falls back to the last term when the second difference vanishes.
pub fn aitken(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let (a, b, c) = (values[n - 3], values[n - 2], values[n - 1]);
    let second = (c - b) - (b - a);
    if second == 0.0 || !second.is_finite() {
        return Some(c);
    }
    Some(c - (c - b) * (c - b) / second)
}

/// Value at `x = 0` of the interpolating polynomial through `(xs[i], ys[i])` (Neville).
pub fn neville_at_zero(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.is_empty() || xs.len() != ys.len() {
        return None;
    }
    let mut table = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            if xi == xj {
                return None;
            }
            table[i] = (xj * table[i] - xi * table[i + 1]) / (xj - xi);
        }
    }
    Some(table[0])
}

/// Richardson extrapolation of the last three samples in the variable `xs → 0`.
pub fn richardson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 3 || ys.len() != n {
        return None;
    }
    neville_at_zero(&xs[n - 3..], &ys[n - 3..])
}

/// Outcome of a convergence-trend test on the tail of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Trend {
    /// The last three consecutive differences shrink in magnitude by at least
    /// `factor` and share a sign.
    pub converging: bool,
    /// `|last difference|`.
    pub last_step: f64,
}

/// Checks the last three consecutive differences of the finite terms of `values`.
///
/// `factor = 1` demands strict shrinkage; larger factors demand geometric decay.
pub fn trend(values: &[f64], factor: f64) -> Trend {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let diffs: Vec<f64> = finite.windows(2).map(|w| w[1] - w[0]).collect();
    let n = diffs.len();
    if n < 3 {
        return Trend {
            converging: false,
            last_step: diffs.last().map_or(f64::INFINITY, |d| d.abs()),
        };
    }
    let tail = &diffs[n - 3..];
    let same_sign = tail.iter().all(|d| *d > 0.0) || tail.iter().all(|d| *d < 0.0);
    let shrinking = tail.windows(2).all(|w| w[1].abs() * factor < w[0].abs());
    let exact = tail.iter().all(|d| *d == 0.0);
    Trend {
        converging: exact || (same_sign && shrinking),
        last_step: tail[2].abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aitken_is_exact_on_geometric_sequences() {
        let values: Vec<f64> = (0..6).map(|k| 2.0 + 3.0 * 0.5f64.powi(k)).collect();
        assert!((aitken(&values).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(aitken(&[1.0, 1.0, 1.0]), Some(1.0));
        assert_eq!(aitken(&[1.0]), None);
    }

    #[test]
    fn richardson_is_exact_on_quadratics() {
        let xs = [0.5, 0.25, 0.125, 0.0625];
        let ys: Vec<f64> = xs.iter().map(|x| -1.0 + 2.0 * x - 3.0 * x * x).collect();
        assert!((richardson(&xs, &ys).unwrap() + 1.0).abs() < 1e-13);
    }

    #[test]
    fn trend_detection() {
        let good: Vec<f64> = (0..5).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        assert!(trend(&good, 1.0).converging);
        assert!(!trend(&good, 2.0).converging);
        let geometric: Vec<f64> = (0..5).map(|k| 0.25f64.powi(k)).collect();
        assert!(trend(&geometric, 2.0).converging);
        assert!(!trend(&[1.0, 2.0, 1.0, 2.0, 1.0], 1.0).converging);
        assert!(trend(&[0.0; 5], 2.0).converging);
    }
}
