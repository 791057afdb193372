use crate::error::{Error, Result};

use super::table::{SpectrumRow, SpectrumTable};
use super::view::GraphView;

/// Default ratio between consecutive log-bin edges.
pub const DEFAULT_BIN_RATIO: f64 = 1.3;

/// Observable whose distribution is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    KIn,
    /// Edge weights, one sample per edge.
    Weight,
    SIn,
    SOut,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::KIn, Quantity::Weight, Quantity::SIn, Quantity::SOut];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::KIn => "k_in",
            Quantity::Weight => "w",
            Quantity::SIn => "s_in",
            Quantity::SOut => "s_out",
        }
    }
}

/// Raw samples of `which`: one per node, or one per edge for weights.
pub fn distribution(view: &GraphView, which: Quantity) -> Result<Vec<f64>> {
    if view.is_empty() {
        return Err(Error::EmptyInput("graph has no nodes".into()));
    }
    let n = view.len();
    Ok(match which {
        Quantity::KIn => (0..n).map(|i| view.k_in(i) as f64).collect(),
        Quantity::Weight => view.all_weights().to_vec(),
        Quantity::SIn => (0..n).map(|i| view.s_in(i)).collect(),
        Quantity::SOut => (0..n).map(|i| view.s_out(i)).collect(),
    })
}

/// Histogram over geometric bins `[x0 r^j, x0 r^(j+1))` starting at the
/// smallest sample. Each row holds the geometric bin centre, the count, and
/// the density `count / (n * width)`; empty bins are omitted.
pub fn log_bin(samples: &[f64], ratio: f64) -> Result<SpectrumTable> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("no samples to bin".into()));
    }
    if !(ratio > 1.0) || !ratio.is_finite() {
        return Err(Error::domain(format!("bin ratio must exceed 1, got {ratio}")));
    }
    if let Some(&bad) = samples.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::domain(format!("log-binning needs positive samples, got {bad}")));
    }
    let x0 = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let lr = ratio.ln();
    let edge = |j: i64| x0 * ratio.powi(j as i32);

    let mut counts: Vec<usize> = Vec::new();
    for &x in samples {
        let mut j = ((x / x0).ln() / lr).floor() as i64;
        while j > 0 && x < edge(j) {
            j -= 1;
        }
        while x >= edge(j + 1) {
            j += 1;
        }
        let j = j as usize;
        if j >= counts.len() {
            counts.resize(j + 1, 0);
        }
        counts[j] += 1;
    }
    let n = samples.len() as f64;
    let rows = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, &count)| {
            let lo = edge(j as i64);
            let hi = edge(j as i64 + 1);
            SpectrumRow {
                class: (lo * hi).sqrt(),
                count,
                mean: count as f64 / (n * (hi - lo)),
            }
        })
        .collect();
    Ok(SpectrumTable { rows })
}

/// Bin edges implied by a row centre of a [`log_bin`] table.
pub fn bin_edges(center: f64, ratio: f64) -> (f64, f64) {
    let lo = center / ratio.sqrt();
    (lo, lo * ratio)
}
