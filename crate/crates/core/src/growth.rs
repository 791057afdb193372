//! Strength-driven growth with local traffic reinforcement.
//!
//! Each step adds one node that emits `m` links of weight 1. Targets are
//! drawn proportionally to in-strength against the state frozen at the start
//! of the step; repeated draws are rejected and redrawn. Every new in-link on
//! a target `i` then raises the weights of `i`'s out-links by a total of
//! `delta`, split in proportion to their current weights, and the extra
//! traffic lands on the in-strength of `i`'s out-neighbours.
//!
//! The in-strength used for attachment counts the node's own unit strength
//! plus the weights of its in-links, so a fresh node is reachable with
//! strength 1. [`GrowthState::link_in_strength`] gives the in-link sum alone.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::sampler::{CumulativeWeightIndex, WeightedSampler};
use crate::variates::UniformSource;

/// Weight change applied to one edge during a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reinforcement {
    pub source: usize,
    pub target: usize,
    pub dw: f64,
}

/// Audit trail of a single growth step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub new_node: usize,
    pub targets: Vec<usize>,
    pub reinforcements: Vec<Reinforcement>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: usize,
    pub s_in: f64,
    pub k_in: usize,
}

/// Time series of one tracked node, sampled at geometrically spaced times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub node: usize,
    pub birth: usize,
    pub points: Vec<TrajectoryPoint>,
}

/// Ratio between consecutive recording times of a trajectory.
pub const TRAJECTORY_RATIO: f64 = 1.05;

/// Maximum deviations from the exact growth invariants.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InvariantReport {
    /// max |s_out - (m + delta * k_in_growth)| / s_out
    pub out_strength: f64,
    /// max |w_ij - s_out(i)/m| / (s_out(i)/m)
    pub weight_symmetry: f64,
    /// relative drift of the total in-strength from `initial + (1 + m + m delta) t`
    pub total_strength: f64,
    /// max |s_in - (1 + sum of in-link weights)| / s_in
    pub in_strength: f64,
    /// nodes whose sampler weight differs from s_in
    pub sampler_mismatches: usize,
}

impl InvariantReport {
    pub fn max_relative(&self) -> f64 {
        self.out_strength
            .max(self.weight_symmetry)
            .max(self.total_strength)
            .max(self.in_strength)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_relative() <= tol && self.sampler_mismatches == 0
    }
}

#[derive(Debug, Clone)]
pub struct GrowthState<S = CumulativeWeightIndex> {
    params: ModelParams,
    birth: Vec<usize>,
    // m entries per node, node i occupies [i*m, (i+1)*m)
    out_targets: Vec<usize>,
    out_weights: Vec<f64>,
    s_in: Vec<f64>,
    s_out: Vec<f64>,
    k_in: Vec<usize>,
    k_in_growth: Vec<usize>,
    t: usize,
    initial_total: f64,
    sampler: S,
}

impl GrowthState<CumulativeWeightIndex> {
    pub fn init(params: ModelParams) -> Result<Self> {
        Self::init_with_sampler(params)
    }
}

impl<S: WeightedSampler> GrowthState<S> {
    /// Seeds a directed ring where node `i` points to its `m` successors.
    pub fn init_with_sampler(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let ModelParams { m, n0, n_final, .. } = params;
        let cap = n_final;

        let mut out_targets = Vec::with_capacity(cap * m);
        for i in 0..n0 {
            out_targets.extend((1..=m).map(|d| (i + d) % n0));
        }
        let mut out_weights = Vec::with_capacity(cap * m);
        out_weights.resize(n0 * m, 1.0);

        let mut s_in = Vec::with_capacity(cap);
        s_in.resize(n0, 1.0 + m as f64);
        let mut s_out = Vec::with_capacity(cap);
        s_out.resize(n0, m as f64);
        let mut k_in = Vec::with_capacity(cap);
        k_in.resize(n0, m);
        let mut k_in_growth = Vec::with_capacity(cap);
        k_in_growth.resize(n0, 0);
        let mut birth = Vec::with_capacity(cap);
        birth.resize(n0, 0);

        let sampler = S::from_weights(&s_in, cap)?;
        let initial_total = sampler.total();
        Ok(GrowthState {
            params,
            birth,
            out_targets,
            out_weights,
            s_in,
            s_out,
            k_in,
            k_in_growth,
            t: 0,
            initial_total,
            sampler,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.s_in.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_in.is_empty()
    }

    /// Steps performed so far.
    pub fn time(&self) -> usize {
        self.t
    }

    pub fn is_complete(&self) -> bool {
        self.len() >= self.params.n_final
    }

    pub fn birth(&self, i: usize) -> usize {
        self.birth[i]
    }

    pub fn births(&self) -> &[usize] {
        &self.birth
    }

    /// Node id born at step `birth` (`birth >= 1`).
    pub fn node_born_at(&self, birth: usize) -> usize {
        self.params.n0 + birth - 1
    }

    /// Attachment strength: own unit strength plus in-link weights.
    pub fn s_in(&self, i: usize) -> f64 {
        self.s_in[i]
    }

    pub fn s_in_all(&self) -> &[f64] {
        &self.s_in
    }

    pub fn link_in_strength(&self, i: usize) -> f64 {
        self.s_in[i] - 1.0
    }

    pub fn s_out(&self, i: usize) -> f64 {
        self.s_out[i]
    }

    /// Topological in-degree, seed ring links included.
    pub fn k_in(&self, i: usize) -> usize {
        self.k_in[i]
    }

    /// In-links received during growth; these are the ones that triggered reinforcement.
    pub fn k_in_growth(&self, i: usize) -> usize {
        self.k_in_growth[i]
    }

    pub fn out_targets(&self, i: usize) -> &[usize] {
        let m = self.params.m;
        &self.out_targets[i * m..(i + 1) * m]
    }

    pub fn out_weights(&self, i: usize) -> &[f64] {
        let m = self.params.m;
        &self.out_weights[i * m..(i + 1) * m]
    }

    pub fn out_edges(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.out_targets(i)
            .iter()
            .copied()
            .zip(self.out_weights(i).iter().copied())
    }

    pub fn total_in_strength(&self) -> f64 {
        self.sampler.total()
    }

    pub fn initial_total_in_strength(&self) -> f64 {
        self.initial_total
    }

    pub fn sampler(&self) -> &S {
        &self.sampler
    }

    /// Draws `count` distinct nodes proportionally to in-strength. Repeats are
    /// rejected and redrawn; each draw consumes one variate.
    pub fn select_targets<U: UniformSource + ?Sized>(
        &self,
        count: usize,
        rng: &mut U,
    ) -> Result<Vec<usize>> {
        let n = self.len();
        if count > n {
            return Err(Error::domain(format!(
                "cannot draw {count} distinct targets from {n} nodes"
            )));
        }
        let mut targets = Vec::with_capacity(count);
        while targets.len() < count {
            let candidate = self.sampler.sample(rng.next_uniform())?;
            if !targets.contains(&candidate) {
                targets.push(candidate);
            }
        }
        Ok(targets)
    }

    /// Spreads `delta` over the out-links of `target` in proportion to their
    /// weights and credits the out-neighbours' in-strength.
    pub fn reinforce(&mut self, target: usize) -> Vec<Reinforcement> {
        let delta = self.params.delta;
        let m = self.params.m;
        let s_out = self.s_out[target];
        if delta == 0.0 || s_out <= 0.0 {
            return Vec::new();
        }
        let mut applied = Vec::with_capacity(m);
        for slot in target * m..(target + 1) * m {
            let j = self.out_targets[slot];
            let dw = delta * self.out_weights[slot] / s_out;
            self.out_weights[slot] += dw;
            self.s_in[j] += dw;
            self.sampler
                .increase(j, dw)
                .expect("out-neighbour is a live node");
            applied.push(Reinforcement {
                source: target,
                target: j,
                dw,
            });
        }
        self.s_out[target] += delta;
        applied
    }

    pub fn step<U: UniformSource + ?Sized>(&mut self, rng: &mut U) -> StepReport {
        let m = self.params.m;
        let targets = self
            .select_targets(m, rng)
            .expect("seed holds at least m + 1 nodes and every node has positive strength");
        let new_node = self.len();
        let mut reinforcements = Vec::with_capacity(m * m);
        for &target in &targets {
            self.k_in[target] += 1;
            self.k_in_growth[target] += 1;
            self.s_in[target] += 1.0;
            self.sampler
                .increase(target, 1.0)
                .expect("target is a live node");
            reinforcements.extend(self.reinforce(target));
        }
        self.out_targets.extend_from_slice(&targets);
        self.out_weights.extend(std::iter::repeat_n(1.0, m));
        self.s_in.push(1.0);
        self.s_out.push(m as f64);
        self.k_in.push(0);
        self.k_in_growth.push(0);
        self.t += 1;
        self.birth.push(self.t);
        self.sampler.append(1.0).expect("unit weight is valid");
        StepReport {
            new_node,
            targets,
            reinforcements,
        }
    }

    /// Runs steps until the node count reaches `n_final`, recording the
    /// trajectories of the nodes born at the `tracked` steps.
    pub fn grow<U: UniformSource + ?Sized>(
        &mut self,
        rng: &mut U,
        tracked: &[usize],
    ) -> Result<Vec<Trajectory>> {
        let last_birth = self.params.steps();
        for &b in tracked {
            if b == 0 || b > last_birth {
                return Err(Error::domain(format!(
                    "tracked birth index {b} outside 1..={last_birth}"
                )));
            }
        }
        let mut trajectories: Vec<Trajectory> = tracked
            .iter()
            .map(|&birth| Trajectory {
                node: self.node_born_at(birth),
                birth,
                points: Vec::new(),
            })
            .collect();
        let mut next_record: Vec<usize> = tracked.iter().map(|&b| b.max(self.t)).collect();

        let record = |state: &Self, trajectories: &mut [Trajectory], next: &mut [usize]| {
            for (traj, next_t) in trajectories.iter_mut().zip(next.iter_mut()) {
                if traj.node < state.len() && state.t >= *next_t {
                    traj.points.push(TrajectoryPoint {
                        t: state.t,
                        s_in: state.s_in[traj.node],
                        k_in: state.k_in[traj.node],
                    });
                    let scaled = (state.t as f64 * TRAJECTORY_RATIO).ceil() as usize;
                    *next_t = scaled.max(state.t + 1);
                }
            }
        };

        record(self, &mut trajectories, &mut next_record);
        while !self.is_complete() {
            self.step(rng);
            record(self, &mut trajectories, &mut next_record);
        }
        for traj in &mut trajectories {
            let node = traj.node;
            if traj.points.last().map(|p| p.t) != Some(self.t) {
                traj.points.push(TrajectoryPoint {
                    t: self.t,
                    s_in: self.s_in[node],
                    k_in: self.k_in[node],
                });
            }
        }
        Ok(trajectories)
    }

    pub fn check_invariants(&self) -> InvariantReport {
        let m = self.params.m;
        let delta = self.params.delta;
        let n = self.len();
        let rel = |a: f64, b: f64| {
            let scale = a.abs().max(b.abs());
            if scale == 0.0 {
                0.0
            } else {
                (a - b).abs() / scale
            }
        };

        let mut report = InvariantReport::default();
        let mut in_weight_sum = vec![0.0; n];
        for i in 0..n {
            let s_out = self.s_out[i];
            let expected = m as f64 + delta * self.k_in_growth[i] as f64;
            report.out_strength = report.out_strength.max(rel(s_out, expected));
            let uniform = s_out / m as f64;
            let mut sum = 0.0;
            for (j, w) in self.out_edges(i) {
                report.weight_symmetry = report.weight_symmetry.max(rel(w, uniform));
                in_weight_sum[j] += w;
                sum += w;
            }
            report.weight_symmetry = report.weight_symmetry.max(rel(sum, s_out));
        }
        for i in 0..n {
            report.in_strength = report
                .in_strength
                .max(rel(self.s_in[i], 1.0 + in_weight_sum[i]));
            if self.sampler.weight(i).to_bits() != self.s_in[i].to_bits() {
                report.sampler_mismatches += 1;
            }
        }
        let expected_total = self.initial_total + self.params.strength_increment() * self.t as f64;
        let direct_total: f64 = self.s_in.iter().sum();
        report.total_strength = rel(self.sampler.total(), expected_total)
            .max(rel(direct_total, expected_total));
        report
    }
}
