use crate::error::{Error, Result};

/// Dimensionless knobs of the growth model.
///
/// The weight of a freshly created link is fixed to 1; every weight and
/// strength handled by the crate is expressed in that unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Out-links emitted by every new node.
    pub m: usize,
    /// Total traffic reinforcement triggered by each new in-link.
    pub delta: f64,
    /// Size of the seed ring.
    pub n0: usize,
    /// Node count at which growth stops (seed included).
    pub n_final: usize,
    pub rng_seed: u64,
}

impl ModelParams {
    pub fn new(m: usize, delta: f64, n0: usize, n_final: usize, rng_seed: u64) -> Result<Self> {
        let params = ModelParams {
            m,
            delta,
            n0,
            n_final,
            rng_seed,
        };
        params.validate()?;
        Ok(params)
    }

    /// Smallest admissible seed for the given `m`.
    pub fn with_minimal_seed(m: usize, delta: f64, n_final: usize, rng_seed: u64) -> Result<Self> {
        Self::new(m, delta, m + 1, n_final, rng_seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::domain("m must be at least 1"));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::domain(format!(
                "delta must be a finite non-negative real, got {}",
                self.delta
            )));
        }
        if self.n0 < self.m + 1 {
            return Err(Error::domain(format!(
                "n0 = {} cannot host {} distinct out-links per seed node (need n0 >= m + 1)",
                self.n0, self.m
            )));
        }
        if self.n_final < self.n0 {
            return Err(Error::domain(format!(
                "n_final = {} is smaller than the seed size n0 = {}",
                self.n_final, self.n0
            )));
        }
        Ok(())
    }

    /// Growth of the total attractiveness per step: own unit strength, m new
    /// links of weight 1 and m reinforcements of total delta each.
    pub fn strength_increment(&self) -> f64 {
        1.0 + self.m as f64 + self.m as f64 * self.delta
    }

    /// Number of growth steps needed to reach `n_final`.
    pub fn steps(&self) -> usize {
        self.n_final - self.n0
    }
}
