//! Power-law tail fits and the strength/degree proportionality constant.

use crate::error::{Error, Result};
use crate::growth::Trajectory;

use super::distribution::log_bin;
use super::stats;
use super::table::SpectrumTable;
use super::view::GraphView;

/// Tails with fewer samples are rejected (MLE) or flagged (regression).
pub const MIN_TAIL: usize = 50;

/// Default lower cutoff for degree-like quantities.
pub const DEFAULT_X_MIN: f64 = 10.0;

/// Degree classes used for the strength/degree slope need this many nodes.
pub const MIN_STRENGTH_CLASS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    Mle,
    LogBinRegression,
}

impl FitMethod {
    pub fn name(self) -> &'static str {
        match self {
            FitMethod::Mle => "mle",
            FitMethod::LogBinRegression => "logbin-regression",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub exponent: f64,
    pub stderr: f64,
    pub x_min: f64,
    pub method: FitMethod,
    pub n_tail: usize,
}

impl FitResult {
    pub fn is_reliable(&self) -> bool {
        self.n_tail >= MIN_TAIL && self.exponent.is_finite()
    }
}

/// Continuous maximum-likelihood exponent of the tail `x >= x_min`:
/// `1 + n / sum(ln(x / x_min))`, with standard error `(gamma - 1) / sqrt(n)`.
pub fn fit_power_law_mle(samples: &[f64], x_min: f64) -> Result<FitResult> {
    if !(x_min > 0.0) {
        return Err(Error::domain(format!("x_min must be positive, got {x_min}")));
    }
    let mut n_tail = 0usize;
    let mut log_sum = 0.0;
    for &x in samples.iter().filter(|&&x| x >= x_min) {
        n_tail += 1;
        log_sum += (x / x_min).ln();
    }
    if n_tail < MIN_TAIL {
        return Err(Error::UnreliableFit(format!(
            "only {n_tail} samples above x_min = {x_min} (need {MIN_TAIL})"
        )));
    }
    if !(log_sum > 0.0) {
        return Err(Error::UnreliableFit(format!(
            "no spread above x_min = {x_min}"
        )));
    }
    let exponent = 1.0 + n_tail as f64 / log_sum;
    Ok(FitResult {
        exponent,
        stderr: (exponent - 1.0) / (n_tail as f64).sqrt(),
        x_min,
        method: FitMethod::Mle,
        n_tail,
    })
}

/// Exponent from a straight-line fit of log-binned densities above `x_min`.
/// Bins with fewer than `MIN_BIN_COUNT` samples are ignored.
pub fn fit_power_law_logbin(samples: &[f64], x_min: f64, ratio: f64) -> Result<FitResult> {
    const MIN_BIN_COUNT: usize = 5;
    let tail: Vec<f64> = samples.iter().copied().filter(|&x| x >= x_min).collect();
    if tail.is_empty() {
        return Err(Error::EmptyInput(format!("no samples above x_min = {x_min}")));
    }
    let binned = log_bin(&tail, ratio)?;
    let (x, y): (Vec<f64>, Vec<f64>) = binned
        .rows
        .iter()
        .filter(|r| r.count >= MIN_BIN_COUNT)
        .map(|r| (r.class.ln(), r.mean.ln()))
        .unzip();
    let n = x.len();
    let Some((slope, intercept)) = stats::linear_regression(&x, &y) else {
        return Err(Error::UnreliableFit(format!(
            "{n} usable bins above x_min = {x_min}"
        )));
    };
    let stderr = if n > 2 {
        let resid: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - slope * a - intercept).powi(2))
            .sum();
        let mx = x.iter().sum::<f64>() / n as f64;
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        (resid / (n as f64 - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Ok(FitResult {
        exponent: -slope,
        stderr,
        x_min,
        method: FitMethod::LogBinRegression,
        n_tail: tail.len(),
    })
}

/// Cutoff for `samples` that keeps the same upper-tail fraction as
/// `reference >= reference_x_min`. For a monotone map between the two
/// quantities this is the image of `reference_x_min`.
pub fn matched_x_min(reference: &[f64], reference_x_min: f64, samples: &[f64]) -> Result<f64> {
    if reference.is_empty() || samples.is_empty() {
        return Err(Error::EmptyInput("quantile matching needs samples".into()));
    }
    let above = reference.iter().filter(|&&x| x >= reference_x_min).count();
    if above == 0 {
        return Err(Error::UnreliableFit(format!(
            "no reference samples above {reference_x_min}"
        )));
    }
    let fraction = above as f64 / reference.len() as f64;
    let keep = ((fraction * samples.len() as f64).round() as usize).clamp(1, samples.len());
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted[keep - 1])
}

/// Proportionality between in-strength and in-degree.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthDegreeFit {
    /// Least-squares slope through the origin of class-mean `s_in` vs `k_in`.
    pub a: f64,
    /// Slope of `ln s_in` vs `ln k_in` over the same classes; 1 for exact proportionality.
    pub loglog_slope: f64,
    pub classes_used: usize,
    /// Class means for every `k_in >= 1`.
    pub classes: SpectrumTable,
}

/// Fits `s_in = A k_in` over classes with at least [`MIN_STRENGTH_CLASS`] nodes.
pub fn strength_degree_fit(k_in: &[usize], s_in: &[f64]) -> Result<StrengthDegreeFit> {
    assert_eq!(k_in.len(), s_in.len());
    let classes = SpectrumTable::from_class_values(
        k_in.iter()
            .zip(s_in)
            .filter(|(&k, _)| k >= 1)
            .map(|(&k, &s)| (k, s)),
    );
    let (x, y): (Vec<f64>, Vec<f64>) = classes
        .rows
        .iter()
        .filter(|r| r.count >= MIN_STRENGTH_CLASS)
        .map(|r| (r.class, r.mean))
        .unzip();
    if x.len() < 3 {
        return Err(Error::UnreliableFit(format!(
            "{} in-degree classes with at least {MIN_STRENGTH_CLASS} nodes (need 3)",
            x.len()
        )));
    }
    let a = stats::slope_through_origin(&x, &y).expect("classes have k >= 1");
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let loglog_slope = stats::linear_regression(&lx, &ly)
        .map(|(s, _)| s)
        .unwrap_or(f64::NAN);
    Ok(StrengthDegreeFit {
        a,
        loglog_slope,
        classes_used: x.len(),
        classes,
    })
}

pub fn strength_degree_slope(view: &GraphView) -> Result<StrengthDegreeFit> {
    let n = view.len();
    let k: Vec<usize> = (0..n).map(|i| view.k_in(i)).collect();
    let s: Vec<f64> = (0..n).map(|i| view.s_in(i)).collect();
    strength_degree_fit(&k, &s)
}

/// Slope of `ln s_in` against `ln t` over the last `decades` decades of a
/// trajectory (points with `t >= t_final / 10^decades`).
pub fn trajectory_slope(traj: &Trajectory, decades: f64) -> Option<f64> {
    let t_end = traj.points.last()?.t as f64;
    let t_start = t_end / 10f64.powf(decades);
    let (x, y): (Vec<f64>, Vec<f64>) = traj
        .points
        .iter()
        .filter(|p| p.t > 0 && p.t as f64 >= t_start && p.s_in > 0.0)
        .map(|p| ((p.t as f64).ln(), p.s_in.ln()))
        .unzip();
    stats::linear_regression(&x, &y).map(|(slope, _)| slope)
}
