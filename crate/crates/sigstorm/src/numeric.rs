//! Small numeric helpers shared by the library, the test suites, and the CLI.

/// Relative difference `|a - b| / max(|a|, |b|)`, with an absolute reading for
/// values at the underflow floor: when both magnitudes are below `1e-300` the
/// difference is treated as zero.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let m = a.abs().max(b.abs());
    if m < 1e-300 {
        0.0
    } else {
        (a - b).abs() / m
    }
}

/// Logarithmically spaced grid from `lo` to `hi` inclusive; requires both
/// positive and `points >= 2`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && points >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == points {
                hi
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

/// Linearly spaced grid from `lo` to `hi` inclusive; requires `points >= 2`.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(hi > lo && points >= 2);
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rel_err_is_symmetric_and_scale_relative() {
        assert_eq!(rel_err(0.0, 0.0), 0.0);
        assert!((rel_err(1.0, 1.1) - 0.1 / 1.1).abs() < 1e-15);
        assert_eq!(rel_err(1.0, 1.1), rel_err(1.1, 1.0));
        assert_eq!(rel_err(1e-301, 1e-302), 0.0);
    }

    #[test]
    fn grids_hit_both_endpoints() {
        let g = log_grid(1e-4, 1e2, 400);
        assert_eq!(g.len(), 400);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[399], 1e2);
        let l = linear_grid(0.0, 1.0, 101);
        assert_eq!(l[0], 0.0);
        assert_eq!(l[100], 1.0);
        assert!((l[50] - 0.5).abs() < 1e-15);
    }
}
