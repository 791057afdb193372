use std::collections::BTreeMap;

use super::stats;

/// Classes smaller than this are kept in tables but flagged unreliable.
pub const RELIABLE_CLASS_SIZE: usize = 5;

/// One class of a [`SpectrumTable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    /// Class value: an integer degree, or a bin centre for binned densities.
    pub class: f64,
    /// Number of samples in the class.
    pub count: usize,
    /// Class average (or density, for binned distributions).
    pub mean: f64,
}

impl SpectrumRow {
    pub fn is_reliable(&self) -> bool {
        self.count >= RELIABLE_CLASS_SIZE
    }
}

/// Class-indexed table of averaged quantities, sorted by class.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    /// Groups `(class, value)` pairs by integer class and averages each group.
    /// Sums run in input order within a class, so the result does not depend
    /// on how classes are visited.
    pub fn from_class_values(pairs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut groups: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
        for (class, value) in pairs {
            let entry = groups.entry(class).or_insert((0, 0.0));
            entry.0 += 1;
            entry.1 += value;
        }
        SpectrumTable {
            rows: groups
                .into_iter()
                .map(|(class, (count, sum))| SpectrumRow {
                    class: class as f64,
                    count,
                    mean: sum / count as f64,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn total_count(&self) -> usize {
        self.rows.iter().map(|r| r.count).sum()
    }

    /// Rows with at least `min_count` samples and a positive class and mean,
    /// i.e. the ones that can be placed on log-log axes.
    pub fn loggable(&self, min_count: usize) -> impl Iterator<Item = &SpectrumRow> {
        self.rows
            .iter()
            .filter(move |r| r.count >= min_count && r.class > 0.0 && r.mean > 0.0)
    }

    /// Slope of `ln mean` against `ln class` over loggable rows.
    pub fn loglog_slope(&self, min_count: usize) -> Option<f64> {
        let (x, y): (Vec<f64>, Vec<f64>) = self
            .loggable(min_count)
            .map(|r| (r.class.ln(), r.mean.ln()))
            .unzip();
        stats::linear_regression(&x, &y).map(|(slope, _)| slope)
    }

    /// Spearman correlation between class and mean over rows with
    /// `count >= min_count` and positive class. Rank-based, so identical to
    /// the correlation of their logarithms.
    pub fn spearman(&self, min_count: usize) -> Option<f64> {
        let (x, y): (Vec<f64>, Vec<f64>) = self
            .rows
            .iter()
            .filter(|r| r.count >= min_count && r.class > 0.0)
            .map(|r| (r.class, r.mean))
            .unzip();
        stats::spearman(&x, &y)
    }

    /// Mean of the row means weighted by class size, over rows with class >= `min_class`.
    pub fn class_weighted_mean(&self, min_class: f64) -> Option<f64> {
        let (num, den) = self
            .rows
            .iter()
            .filter(|r| r.class >= min_class)
            .fold((0.0, 0usize), |(num, den), r| {
                (num + r.mean * r.count as f64, den + r.count)
            });
        (den > 0).then(|| num / den as f64)
    }
}
