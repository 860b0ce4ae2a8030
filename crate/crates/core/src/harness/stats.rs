use crate::error::{Error, Result};

pub fn sample_mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance; 0 for fewer than two values.
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = sample_mean(values);
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    ss / (values.len() - 1) as f64
}

/// Fraction of `values` at or above `threshold`.
pub fn tail_probability(values: &[f64], threshold: f64) -> f64 {
    values.iter().filter(|&&v| v >= threshold).count() as f64 / values.len() as f64
}

/// Ordinary least-squares slope of `log value` against `log n`.
pub fn fit_loglog_slope(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 3 {
        return Err(Error::invalid("slope fit", "needs at least three points"));
    }
    if let Some(&(n, v)) = pairs.iter().find(|(n, v)| !(*n > 0.0 && *v > 0.0 && v.is_finite())) {
        return Err(Error::Domain {
            what: "log-log fit point (n and value must be positive)",
            value: if n > 0.0 { v } else { n },
        });
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = sample_mean(&xs);
    let my = sample_mean(&ys);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("slope fit", "all n are equal"));
    }
    Ok(sxy / sxx)
}
