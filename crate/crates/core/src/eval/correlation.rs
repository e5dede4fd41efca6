use alloc::vec;
use alloc::vec::Vec;

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub pearson: f64,
    pub spearman: f64,
}

/// Pearson product-moment and Spearman rank correlation of `(x, y)` pairs.
pub fn correlation(pairs: &[(f64, f64)]) -> Result<Correlation, EvalError> {
    if pairs.len() < 3 {
        return Err(EvalError::InsufficientPairs(pairs.len()));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let pearson = pearson(&xs, &ys)?;
    let spearman = pearson_unchecked(&average_ranks(&xs), &average_ranks(&ys))?;
    Ok(Correlation { pearson, spearman })
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, EvalError> {
    if xs.len() < 3 {
        return Err(EvalError::InsufficientPairs(xs.len()));
    }
    pearson_unchecked(xs, ys)
}

fn pearson_unchecked(xs: &[f64], ys: &[f64]) -> Result<f64, EvalError> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if !(sxx > 0.0 && syy > 0.0) {
        return Err(EvalError::DegenerateVariance);
    }
    let r = sxy / (libm::sqrt(sxx) * libm::sqrt(syy));
    if !r.is_finite() {
        return Err(EvalError::DegenerateVariance);
    }
    Ok(r.clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1 ..= end.
        let mean = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = mean;
        }
        start = end;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_linear() {
        let c = correlation(&[(1.0, 2.0), (2.0, 4.0), (3.0, 6.0)]).unwrap();
        assert!((c.pearson - 1.0).abs() < 1e-15);
        assert!((c.spearman - 1.0).abs() < 1e-15);
        let c = correlation(&[(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]).unwrap();
        assert!((c.pearson + 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            correlation(&[(1.0, 1.0), (2.0, 2.0)]),
            Err(EvalError::InsufficientPairs(2))
        );
        assert_eq!(
            correlation(&[(1.0, 5.0), (2.0, 5.0), (3.0, 5.0)]),
            Err(EvalError::DegenerateVariance)
        );
    }

    #[test]
    fn ties_get_average_rank() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
    }
}
