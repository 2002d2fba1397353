//! Least-squares helpers for decay-exponent fits.

/// Slope of the least-squares line through `(ln x, ln y)`.
///
/// Panics if fewer than two points are given or any coordinate is not
/// strictly positive.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "need at least two points");
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| {
            assert!(x > 0.0 && y > 0.0, "log-log fit needs positive data ({x}, {y})");
            (x.ln(), y.ln())
        })
        .collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `n` points spaced geometrically from `lo` to `hi` inclusive.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let step = (hi / lo).ln() / (n - 1) as f64;
            (0..n).map(|i| lo * (step * i as f64).exp()).collect()
        }
    }
}

/// `n` points spaced evenly from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let pts: Vec<(f64, f64)> = geomspace(10.0, 100.0, 7)
            .into_iter()
            .map(|x| (x, 3.0 * x.powi(-5)))
            .collect();
        assert!((loglog_slope(&pts) + 5.0).abs() < 1e-12);
    }

    #[test]
    fn spacing_endpoints() {
        let g = geomspace(2.0, 32.0, 5);
        assert!((g[4] - 32.0).abs() < 1e-12 && (g[1] - 4.0).abs() < 1e-12);
        assert_eq!(linspace(3.0, 12.0, 4), vec![3.0, 6.0, 9.0, 12.0]);
    }
}
