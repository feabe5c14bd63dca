//! Ratio-of-means estimation with a first-order Taylor bias correction and
//! the matching linearized variance.
//!
//! For paired sample terms `(A_s, B_s)` the target is `mean(B) / mean(A)`.
//! Writing `r = B̄/Ā` and the residuals `e_s = (B_s − r·A_s)/Ā`,
//!
//! ```text
//! Ê    = r + θ/(n(n−1)) · Σ (A_s/Ā)·e_s
//! V̂(Ê) =     θ/(n(n−1)) · Σ e_s²
//! ```
//!
//! which is the usual `r·{1 + θ/(n(n−1)) Σ (A_s/Ā)(B_s/B̄ − A_s/Ā)}` with
//! `B̄` cancelled, so a sample with `B̄ = 0` is a valid (zero) estimate.

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    xs.into_iter().collect::<CompensatedSum>().value()
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    compensated_sum(xs.iter().copied()) / xs.len() as f64
}

/// Finite-population correction `1 − (n−1)/(T−1)`, or 1 without a
/// population size.
pub fn fpc_theta(n: usize, population: Option<u64>) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDesign("sample size must be at least 1".into()));
    }
    let Some(t) = population else { return Ok(1.0) };
    if n as u64 > t {
        return Err(Error::InvalidDesign(format!(
            "sample size {n} exceeds population size {t}"
        )));
    }
    if n == 1 {
        return Ok(1.0);
    }
    Ok(1.0 - (n - 1) as f64 / (t - 1) as f64)
}

/// Sample variance of the mean, `θ/(n(n−1)) Σ (y_s − ȳ)²`.
pub(crate) fn variance_of_mean(ys: &[f64], ybar: f64, theta: f64) -> f64 {
    let n = ys.len() as f64;
    theta / (n * (n - 1.0)) * compensated_sum(ys.iter().map(|y| (y - ybar) * (y - ybar)))
}

struct RatioParts {
    ratio: f64,
    correction: f64,
    variance: f64,
}

fn ratio_parts(a: &[f64], b: &[f64], theta: f64) -> Result<RatioParts> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "ratio terms have different lengths ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::InsufficientSample(n));
    }
    // Constant A makes the correction vanish identically.
    let constant_a = a.iter().all(|&x| x == a[0]);
    let abar = if constant_a { a[0] } else { mean(a) };
    if abar == 0.0 {
        return Err(Error::DegenerateRatio("mean of the denominator terms is zero".into()));
    }
    let bbar = mean(b);
    let ratio = bbar / abar;
    let residuals: Vec<f64> = a.iter().zip(b).map(|(&x, &y)| (y - ratio * x) / abar).collect();
    let scale = theta / (n as f64 * (n - 1) as f64);
    let correction = if constant_a {
        0.0
    } else {
        scale * compensated_sum(a.iter().zip(&residuals).map(|(&x, &e)| x / abar * e))
    };
    let variance = scale * compensated_sum(residuals.iter().map(|e| e * e));
    Ok(RatioParts { ratio, correction, variance })
}

/// Bias-corrected ratio-of-means estimate.
pub fn ratio_estimate(a: &[f64], b: &[f64], theta: f64) -> Result<f64> {
    let p = ratio_parts(a, b, theta)?;
    Ok(p.ratio + p.correction)
}

/// Linearized variance of [`ratio_estimate`].
pub fn ratio_variance(a: &[f64], b: &[f64], theta: f64) -> Result<f64> {
    Ok(ratio_parts(a, b, theta)?.variance)
}

/// Value and standard deviation; a single sample gives the plain ratio and
/// no standard deviation.
pub(crate) fn ratio_with_std(a: &[f64], b: &[f64], theta: f64) -> Result<(f64, Option<f64>)> {
    if a.len() == 1 && b.len() == 1 {
        if a[0] == 0.0 {
            return Err(Error::DegenerateRatio("denominator term is zero".into()));
        }
        return Ok((b[0] / a[0], None));
    }
    let p = ratio_parts(a, b, theta)?;
    Ok((p.ratio + p.correction, Some(p.variance.sqrt())))
}
