//! Sources of uniform variates consumed by the growth engine.
//!
//! The engine draws exactly one variate in `[0, 1)` per target draw
//! (accepted or rejected), so any two sources yielding the same stream
//! drive identical runs.

use std::collections::VecDeque;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A stream of uniform variates in `[0, 1)`.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

impl<R: RngCore> UniformSource for R {
    #[inline]
    fn next_uniform(&mut self) -> f64 {
        self.random::<f64>()
    }
}

/// The generator used for every seeded run.
pub type ModelRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ModelRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Replays a fixed list of variates. Panics when exhausted.
#[derive(Debug, Clone, Default)]
pub struct ScriptedUniforms {
    queue: VecDeque<f64>,
}

impl ScriptedUniforms {
    pub fn new(values: impl IntoIterator<Item = f64>) -> Self {
        let queue: VecDeque<f64> = values.into_iter().collect();
        assert!(
            queue.iter().all(|u| (0.0..1.0).contains(u)),
            "scripted variates must lie in [0, 1)"
        );
        ScriptedUniforms { queue }
    }

    pub fn remaining(&self) -> usize {
        self.queue.len()
    }
}

impl UniformSource for ScriptedUniforms {
    fn next_uniform(&mut self) -> f64 {
        self.queue
            .pop_front()
            .expect("scripted variate stream exhausted")
    }
}

/// Records every variate drawn from the wrapped source.
#[derive(Debug)]
pub struct RecordingSource<S> {
    inner: S,
    drawn: Vec<f64>,
}

impl<S: UniformSource> RecordingSource<S> {
    pub fn new(inner: S) -> Self {
        RecordingSource {
            inner,
            drawn: Vec::new(),
        }
    }

    pub fn drawn(&self) -> &[f64] {
        &self.drawn
    }

    pub fn into_drawn(self) -> Vec<f64> {
        self.drawn
    }
}

impl<S: UniformSource> UniformSource for RecordingSource<S> {
    fn next_uniform(&mut self) -> f64 {
        let u = self.inner.next_uniform();
        self.drawn.push(u);
        u
    }
}
