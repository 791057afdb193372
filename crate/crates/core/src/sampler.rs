//! Strength-proportional sampling over a growing set of weights.
//!
//! [`CumulativeWeightIndex`] is a binary indexed tree with spare capacity, so
//! appends, point increments and inverse-CDF lookups all run in `O(log n)`.
//! [`naive_sample`] is the linear-scan reference with the same contract:
//! the returned position is the smallest `i` whose inclusive prefix sum is
//! strictly greater than `u * total`.

use crate::error::{Error, Result};

/// Operations the growth engine needs from a sampler.
pub trait WeightedSampler {
    /// Builds a sampler over `weights` with room for `capacity` elements.
    fn from_weights(weights: &[f64], capacity: usize) -> Result<Self>
    where
        Self: Sized;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn total(&self) -> f64;
    fn weight(&self, i: usize) -> f64;
    fn append(&mut self, w: f64) -> Result<()>;
    fn increase(&mut self, i: usize, dw: f64) -> Result<()>;
    fn sample(&self, u: f64) -> Result<usize>;
}

#[derive(Debug, Clone)]
pub struct CumulativeWeightIndex {
    weights: Vec<f64>,
    // 1-based Fenwick array over `capacity` slots; slots past `weights.len()` hold zero.
    tree: Vec<f64>,
    total: f64,
}

fn check_weight(w: f64) -> Result<()> {
    if w >= 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "weights must be finite and non-negative, got {w}"
        )))
    }
}

fn check_variate(u: f64) -> Result<()> {
    if (0.0..1.0).contains(&u) {
        Ok(())
    } else {
        Err(Error::domain(format!("variate must lie in [0, 1), got {u}")))
    }
}

#[inline]
fn lowbit(i: usize) -> usize {
    i & i.wrapping_neg()
}

impl Default for CumulativeWeightIndex {
    fn default() -> Self {
        Self::with_capacity(0)
    }
}

impl CumulativeWeightIndex {
    pub fn with_capacity(capacity: usize) -> Self {
        CumulativeWeightIndex {
            weights: Vec::with_capacity(capacity),
            tree: vec![0.0; capacity + 1],
            total: 0.0,
        }
    }

    pub fn build(weights: &[f64]) -> Result<Self> {
        Self::build_with_capacity(weights, weights.len())
    }

    /// Builds the index in `O(capacity)`, reserving room for later appends.
    pub fn build_with_capacity(weights: &[f64], capacity: usize) -> Result<Self> {
        for &w in weights {
            check_weight(w)?;
        }
        let mut index = Self::with_capacity(capacity.max(weights.len()));
        index.weights.extend_from_slice(weights);
        index.total = weights.iter().sum();
        index.rebuild_tree();
        Ok(index)
    }

    fn capacity(&self) -> usize {
        self.tree.len() - 1
    }

    fn rebuild_tree(&mut self) {
        let cap = self.capacity();
        self.tree.iter_mut().for_each(|x| *x = 0.0);
        for (i, &w) in self.weights.iter().enumerate() {
            self.tree[i + 1] = w;
        }
        for i in 1..=cap {
            let parent = i + lowbit(i);
            if parent <= cap {
                let child = self.tree[i];
                self.tree[parent] += child;
            }
        }
    }

    fn grow(&mut self) {
        let cap = (self.capacity() * 2).max(16);
        self.tree = vec![0.0; cap + 1];
        self.weights.reserve(cap - self.weights.len());
        self.rebuild_tree();
    }

    fn add_at(&mut self, i: usize, dw: f64) {
        let cap = self.capacity();
        let mut idx = i + 1;
        while idx <= cap {
            self.tree[idx] += dw;
            idx += lowbit(idx);
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Inclusive prefix sum `weights[0] + ... + weights[i]`.
    pub fn prefix_sum(&self, i: usize) -> Result<f64> {
        if i >= self.weights.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.weights.len(),
            });
        }
        let mut idx = i + 1;
        let mut sum = 0.0;
        while idx > 0 {
            sum += self.tree[idx];
            idx -= lowbit(idx);
        }
        Ok(sum)
    }

    fn last_positive(&self) -> Option<usize> {
        self.weights.iter().rposition(|&w| w > 0.0)
    }
}

impl WeightedSampler for CumulativeWeightIndex {
    fn from_weights(weights: &[f64], capacity: usize) -> Result<Self> {
        Self::build_with_capacity(weights, capacity)
    }

    fn len(&self) -> usize {
        self.weights.len()
    }

    fn total(&self) -> f64 {
        self.total
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    fn append(&mut self, w: f64) -> Result<()> {
        check_weight(w)?;
        if self.weights.len() == self.capacity() {
            self.grow();
        }
        let i = self.weights.len();
        self.weights.push(w);
        self.add_at(i, w);
        self.total += w;
        Ok(())
    }

    fn increase(&mut self, i: usize, dw: f64) -> Result<()> {
        if i >= self.weights.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.weights.len(),
            });
        }
        check_weight(dw)?;
        self.weights[i] += dw;
        self.add_at(i, dw);
        self.total += dw;
        Ok(())
    }

    fn sample(&self, u: f64) -> Result<usize> {
        check_variate(u)?;
        if !(self.total > 0.0) {
            return Err(Error::EmptyDistribution);
        }
        let target = u * self.total;
        let cap = self.capacity();
        let mut step = if cap == 0 { 0 } else { 1 << cap.ilog2() };
        let mut pos = 0;
        let mut acc = 0.0;
        while step > 0 {
            let next = pos + step;
            if next <= cap && acc + self.tree[next] <= target {
                pos = next;
                acc += self.tree[next];
            }
            step >>= 1;
        }
        // `pos` now counts the leading elements whose cumulative sum is <= target.
        let n = self.weights.len();
        if pos < n {
            if self.weights[pos] > 0.0 {
                return Ok(pos);
            }
            if let Some(off) = self.weights[pos..].iter().position(|&w| w > 0.0) {
                return Ok(pos + off);
            }
        }
        // Only reachable through rounding when target sits at the very top.
        self.last_positive().ok_or(Error::EmptyDistribution)
    }
}

/// Linear-scan reference implementation of [`WeightedSampler::sample`].
pub fn naive_sample(weights: &[f64], u: f64) -> Result<usize> {
    check_variate(u)?;
    for &w in weights {
        check_weight(w)?;
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::EmptyDistribution);
    }
    let target = u * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if acc > target {
            return Ok(i);
        }
    }
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .ok_or(Error::EmptyDistribution)
}

/// Sampler backed by a plain vector and [`naive_sample`]. `O(n)` per draw.
#[derive(Debug, Clone, Default)]
pub struct LinearScanSampler {
    weights: Vec<f64>,
    total: f64,
}

impl LinearScanSampler {
    pub fn new(weights: &[f64]) -> Result<Self> {
        for &w in weights {
            check_weight(w)?;
        }
        Ok(LinearScanSampler {
            weights: weights.to_vec(),
            total: weights.iter().sum(),
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl WeightedSampler for LinearScanSampler {
    fn from_weights(weights: &[f64], capacity: usize) -> Result<Self> {
        let mut sampler = Self::new(weights)?;
        sampler.weights.reserve(capacity.saturating_sub(weights.len()));
        Ok(sampler)
    }

    fn len(&self) -> usize {
        self.weights.len()
    }

    fn total(&self) -> f64 {
        self.total
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    fn append(&mut self, w: f64) -> Result<()> {
        check_weight(w)?;
        self.weights.push(w);
        self.total += w;
        Ok(())
    }

    fn increase(&mut self, i: usize, dw: f64) -> Result<()> {
        if i >= self.weights.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.weights.len(),
            });
        }
        check_weight(dw)?;
        self.weights[i] += dw;
        self.total += dw;
        Ok(())
    }

    fn sample(&self, u: f64) -> Result<usize> {
        naive_sample(&self.weights, u)
    }
}
