//! Log-binned least-squares power-law fits, `p(x) ~ x^(-k)`.
//!
//! Values are histogrammed over logarithmically spaced bins between the
//! sample minimum and maximum, each occupied bin contributes one point
//! `(log center, log density)`, and the slope comes from least squares with
//! each point weighted by its bin count. Sparse tail bins have a log-density
//! variance of roughly `1/count`; without the weights a handful of
//! single-sample bins dominate the slope.
//!
//! When every value is an integer the sample is treated as discrete: a
//! bin's width is the number of integers it covers and its center is the
//! geometric mean of those integers.

use alloc::vec::Vec;

use super::EvalError;

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub center: f64,
    pub count: u64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    /// Decay exponent `k` of `p(x) ~ x^(-k)`; the fitted log-log slope is `-k`.
    pub exponent: f64,
    pub standard_error: f64,
    pub intercept: f64,
    /// Occupied bins used in the regression.
    pub n_points: usize,
    pub bins: Vec<HistogramBin>,
}

impl PowerLawFit {
    pub fn slope(&self) -> f64 {
        -self.exponent
    }
}

/// Log-spaced histogram over `[min, max]`; empty bins are omitted.
pub fn log_histogram(values: &[f64], n_bins: usize) -> Result<Vec<HistogramBin>, EvalError> {
    if n_bins == 0 {
        return Err(EvalError::InvalidBins);
    }
    if let Some(&bad) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(EvalError::NonPositiveValue(bad));
    }
    if values.is_empty() {
        return Err(EvalError::InsufficientData { occupied_bins: 0 });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(0.0, f64::max);
    if min == max {
        return Err(EvalError::InsufficientData { occupied_bins: 1 });
    }
    let discrete = values.iter().all(|v| libm::floor(*v) == *v);
    let log_min = libm::log(min);
    let step = (libm::log(max) - log_min) / n_bins as f64;
    let edge = |k: usize| {
        if k == 0 {
            min
        } else if k == n_bins {
            max
        } else {
            libm::exp(log_min + step * k as f64)
        }
    };

    let mut counts = alloc::vec![0u64; n_bins];
    for &v in values {
        let k = ((libm::log(v) - log_min) / step) as usize;
        let mut k = k.min(n_bins - 1);
        // Float rounding near an edge: settle on the bin that actually holds v.
        while k > 0 && v < edge(k) {
            k -= 1;
        }
        while k + 1 < n_bins && v >= edge(k + 1) {
            k += 1;
        }
        counts[k] += 1;
    }

    let n = values.len() as f64;
    let mut bins = Vec::new();
    for (k, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let (lo, hi) = (edge(k), edge(k + 1));
        let last = k + 1 == n_bins;
        let (width, center) = if discrete {
            let first = libm::ceil(lo);
            let end = if last { libm::floor(hi) } else { libm::ceil(hi) - 1.0 };
            let m = end - first + 1.0;
            let mut log_sum = 0.0;
            let mut x = first;
            while x <= end {
                log_sum += libm::log(x);
                x += 1.0;
            }
            (m, libm::exp(log_sum / m))
        } else {
            (hi - lo, libm::sqrt(lo * hi))
        };
        bins.push(HistogramBin {
            lo,
            hi,
            center,
            count,
            density: count as f64 / (n * width),
        });
    }
    Ok(bins)
}

pub fn fit_power_law(values: &[f64], n_bins: usize) -> Result<PowerLawFit, EvalError> {
    let bins = log_histogram(values, n_bins)?;
    if bins.len() < 3 {
        return Err(EvalError::InsufficientData {
            occupied_bins: bins.len(),
        });
    }
    let pts: Vec<(f64, f64, f64)> = bins
        .iter()
        .map(|b| (libm::log(b.center), libm::log(b.density), b.count as f64))
        .collect();
    let w_sum: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / w_sum;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / w_sum;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y, w) in &pts {
        sxx += w * (x - mx) * (x - mx);
        sxy += w * (x - mx) * (y - my);
    }
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(EvalError::InsufficientData {
            occupied_bins: bins.len(),
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts
        .iter()
        .map(|&(x, y, w)| {
            let r = y - (intercept + slope * x);
            w * r * r
        })
        .sum();
    let dof = (pts.len() - 2) as f64;
    let standard_error = libm::sqrt(ssr / dof / sxx);
    Ok(PowerLawFit {
        exponent: -slope,
        standard_error,
        intercept,
        n_points: pts.len(),
        bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values_are_insufficient() {
        assert_eq!(
            fit_power_law(&[3.0; 50], 10).unwrap_err(),
            EvalError::InsufficientData { occupied_bins: 1 }
        );
    }

    #[test]
    fn rejects_non_positive() {
        assert_eq!(
            fit_power_law(&[1.0, 0.0, 2.0], 5).unwrap_err(),
            EvalError::NonPositiveValue(0.0)
        );
    }

    #[test]
    fn exact_discrete_law_is_recovered() {
        // Counts proportional to x^-2 on 1..=64, one bin per integer at the low end.
        let mut values = Vec::new();
        for x in 1..=64u32 {
            let c = (1_000_000.0 / f64::from(x * x)).round() as usize;
            values.extend(core::iter::repeat_n(f64::from(x), c));
        }
        let fit = fit_power_law(&values, 12).unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.02, "{}", fit.exponent);
        assert!(fit.standard_error >= 0.0);
        assert!(fit.n_points >= 3);
    }

    #[test]
    fn histogram_counts_every_value() {
        let values: Vec<f64> = (1..=1000).map(f64::from).collect();
        let bins = log_histogram(&values, 7).unwrap();
        assert_eq!(bins.iter().map(|b| b.count).sum::<u64>(), 1000);
        // Uniform integers: each bin's density is count / (n * integers covered) = 1/n.
        for b in &bins {
            assert!((b.density - 1e-3).abs() < 1e-12, "{b:?}");
        }
    }
}
