//! Small numerical helpers for post-processing sweeps and time series.

use nalgebra::{Matrix3, Vector3};

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).collect();
    linear_fit(&pts).1
}

/// (intercept, slope) of an ordinary least-squares line.
pub fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

/// Removes a least-squares quadratic trend in the sample index.
pub fn detrend_quadratic(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n < 3 {
        let mean = values.iter().sum::<f64>() / n.max(1) as f64;
        return values.iter().map(|v| v - mean).collect();
    }
    let half = 0.5 * (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| (i as f64 - half) / half.max(1.0)).collect();
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for (x, v) in xs.iter().zip(values) {
        let basis = Vector3::new(1.0, *x, x * x);
        ata += basis * basis.transpose();
        atb += basis * *v;
    }
    let coef = ata.lu().solve(&atb).unwrap_or_else(Vector3::zeros);
    xs.iter()
        .zip(values)
        .map(|(x, v)| v - (coef[0] + coef[1] * x + coef[2] * x * x))
        .collect()
}

/// Normalized autocorrelation r(k) for k = 0..n/2 of a mean-free series.
pub fn autocorrelation(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let energy: f64 = values.iter().map(|v| v * v).sum();
    if energy == 0.0 {
        return vec![0.0; n / 2 + 1];
    }
    (0..=n / 2)
        .map(|lag| {
            let s: f64 = values[..n - lag]
                .iter()
                .zip(&values[lag..])
                .map(|(a, b)| a * b)
                .sum();
            s / energy
        })
        .collect()
}

/// Lag (in samples, parabolically refined) of the first autocorrelation peak
/// after the correlation has dropped below zero.
pub fn first_autocorrelation_peak(values: &[f64]) -> Option<f64> {
    let r = autocorrelation(values);
    let start = r.iter().position(|&v| v < 0.0)?;
    (start.max(1)..r.len().saturating_sub(1))
        .find(|&k| r[k] > 0.0 && r[k] >= r[k - 1] && r[k] > r[k + 1])
        .map(|k| {
            let (a, b, c) = (r[k - 1], r[k], r[k + 1]);
            let denom = a - 2.0 * b + c;
            let shift = if denom != 0.0 {
                0.5 * (a - c) / denom
            } else {
                0.0
            };
            k as f64 + shift.clamp(-0.5, 0.5)
        })
}

/// Dominant period of a uniformly sampled signal via the first autocorrelation
/// peak of its quadratically detrended values.
pub fn dominant_period(values: &[f64], dt: f64) -> Option<f64> {
    first_autocorrelation_peak(&detrend_quadratic(values)).map(|lag| lag * dt)
}
