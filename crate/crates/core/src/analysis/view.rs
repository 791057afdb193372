use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::growth::GrowthState;
use crate::params::ModelParams;
use crate::sampler::WeightedSampler;

/// Immutable snapshot of a weighted directed graph.
///
/// In-strength here is the sum of in-link weights only; the unit attachment
/// strength every node carries during growth is not part of it.
#[derive(Debug)]
pub struct GraphView {
    params: Option<ModelParams>,
    birth: Vec<usize>,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    out_weights: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
    in_weights: Vec<f64>,
    s_in: Vec<f64>,
    s_out: Vec<f64>,
    undirected: OnceLock<Undirected>,
}

/// Simple undirected projection: reciprocal pairs merged, self-loops dropped.
#[derive(Debug)]
pub struct Undirected {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Undirected {
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sorted neighbour list of `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }
}

fn csr(n: usize, pairs: impl Iterator<Item = usize> + Clone) -> Vec<usize> {
    let mut offsets = vec![0usize; n + 1];
    for v in pairs {
        offsets[v + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    offsets
}

impl GraphView {
    /// Builds a view from edges `(src, dst, weight)` over nodes `0..n`.
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize, f64)],
        births: Option<Vec<usize>>,
        params: Option<ModelParams>,
    ) -> Result<Self> {
        for &(src, dst, w) in edges {
            if src >= n || dst >= n {
                return Err(Error::IndexOutOfRange {
                    index: src.max(dst),
                    len: n,
                });
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::domain(format!(
                    "edge {src}->{dst} has invalid weight {w}"
                )));
            }
        }
        let birth = match births {
            Some(b) if b.len() == n => b,
            Some(b) => {
                return Err(Error::domain(format!(
                    "{} birth times for {n} nodes",
                    b.len()
                )))
            }
            None => default_births(n, params.as_ref()),
        };

        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&e| edges[e].0);
        let out_offsets = csr(n, edges.iter().map(|e| e.0));
        let out_targets: Vec<usize> = order.iter().map(|&e| edges[e].1).collect();
        let out_weights: Vec<f64> = order.iter().map(|&e| edges[e].2).collect();
        Ok(Self::assemble(params, birth, out_offsets, out_targets, out_weights))
    }

    pub fn from_state<S: WeightedSampler>(state: &GrowthState<S>) -> Self {
        let n = state.len();
        let m = state.params().m;
        let out_offsets: Vec<usize> = (0..=n).map(|i| i * m).collect();
        let mut out_targets = Vec::with_capacity(n * m);
        let mut out_weights = Vec::with_capacity(n * m);
        for i in 0..n {
            out_targets.extend_from_slice(state.out_targets(i));
            out_weights.extend_from_slice(state.out_weights(i));
        }
        Self::assemble(
            Some(*state.params()),
            state.births().to_vec(),
            out_offsets,
            out_targets,
            out_weights,
        )
    }

    pub fn empty() -> Self {
        Self::assemble(None, Vec::new(), vec![0], Vec::new(), Vec::new())
    }

    fn assemble(
        params: Option<ModelParams>,
        birth: Vec<usize>,
        out_offsets: Vec<usize>,
        out_targets: Vec<usize>,
        out_weights: Vec<f64>,
    ) -> Self {
        let n = birth.len();
        let in_offsets = csr(n, out_targets.iter().copied());
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![0; out_targets.len()];
        let mut in_weights = vec![0.0; out_targets.len()];
        let mut s_out = vec![0.0; n];
        for i in 0..n {
            for e in out_offsets[i]..out_offsets[i + 1] {
                let j = out_targets[e];
                let slot = cursor[j];
                cursor[j] += 1;
                in_sources[slot] = i;
                in_weights[slot] = out_weights[e];
                s_out[i] += out_weights[e];
            }
        }
        let s_in = (0..n)
            .map(|j| in_weights[in_offsets[j]..in_offsets[j + 1]].iter().sum())
            .collect();
        GraphView {
            params,
            birth,
            out_offsets,
            out_targets,
            out_weights,
            in_offsets,
            in_sources,
            in_weights,
            s_in,
            s_out,
            undirected: OnceLock::new(),
        }
    }

    pub fn params(&self) -> Option<&ModelParams> {
        self.params.as_ref()
    }

    pub fn len(&self) -> usize {
        self.birth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.birth.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn birth(&self, i: usize) -> usize {
        self.birth[i]
    }

    pub fn k_in(&self, i: usize) -> usize {
        self.in_offsets[i + 1] - self.in_offsets[i]
    }

    pub fn k_out(&self, i: usize) -> usize {
        self.out_offsets[i + 1] - self.out_offsets[i]
    }

    pub fn s_in(&self, i: usize) -> f64 {
        self.s_in[i]
    }

    pub fn s_out(&self, i: usize) -> f64 {
        self.s_out[i]
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    pub fn out_weights(&self, i: usize) -> &[f64] {
        &self.out_weights[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    pub fn in_weights(&self, i: usize) -> &[f64] {
        &self.in_weights[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    /// All edges in source order, then out-link order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.len()).flat_map(move |i| {
            self.out_neighbors(i)
                .iter()
                .zip(self.out_weights(i))
                .map(move |(&j, &w)| (i, j, w))
        })
    }

    pub fn all_weights(&self) -> &[f64] {
        &self.out_weights
    }

    pub fn undirected(&self) -> &Undirected {
        self.undirected.get_or_init(|| {
            let n = self.len();
            let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (i, j, _) in self.edges() {
                if i != j {
                    lists[i].push(j);
                    lists[j].push(i);
                }
            }
            let mut offsets = Vec::with_capacity(n + 1);
            offsets.push(0);
            let mut neighbors = Vec::new();
            for mut list in lists {
                list.sort_unstable();
                list.dedup();
                neighbors.extend_from_slice(&list);
                offsets.push(neighbors.len());
            }
            Undirected { offsets, neighbors }
        })
    }

    /// Undirected degree `k` of node `i` in the simple projection.
    pub fn degree(&self, i: usize) -> usize {
        self.undirected().degree(i)
    }
}

fn default_births(n: usize, params: Option<&ModelParams>) -> Vec<usize> {
    match params {
        Some(p) => (0..n).map(|i| (i + 1).saturating_sub(p.n0)).collect(),
        None => (0..n).collect(),
    }
}
