//! The lifetime-difference game.
//!
//! A player gains the outcome of X − Y, where X is the lifetime of the first
//! series system and Y that of the second. With the first system's units
//! fixed deterministically the dominance F̄ᵢ ≤ Ḡᵢ forces E(X − Y) ≤ 0; when
//! the game rules allow the two units to be picked at random from the two
//! stocks (equal probabilities, independently per unit), the gain becomes
//! X* − Y, which under the feasibility conditions has non-negative
//! expectation. Losing settings turn into winning ones purely by randomizing
//! the allocation.
//!
//! Both the analytic expected gain (by quadrature, using independence to
//! split E(X* − Y) = E(X*) − E(Y)) and a Monte Carlo estimate are provided.
//! Replications are partitioned by ChaCha stream index, one stream per
//! replication, and chunk sums are folded in a fixed order, so results are
//! bit-identical regardless of the number of worker threads.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::models::{ModelError, ModelFamily, Quadruple};
use crate::quadrature::{mean_lifetime, QuadratureError};
use crate::sampling::{draw_lifetime, stream_rng, SamplerConfig, SamplerError};

/// Replications per work item; fixed so the reduction order never depends on
/// the thread count.
const REPLICATION_CHUNK: u64 = 8192;

/// How the units of the first system are allocated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Allocation {
    /// Units fixed as F̄₁ and F̄₂; the player gains X − Y.
    Deterministic,
    /// Each unit drawn from stock 1 or 2 with probability 1/2, independently
    /// per unit; the player gains X* − Y.
    Randomized,
}

#[derive(Debug, Clone, Error)]
pub enum GameError {
    #[error("replications must be at least 1")]
    NoReplications,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("sampler failed at replication {replication}: {source}")]
    Sampler {
        replication: u64,
        source: SamplerError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A fully specified game run.
#[derive(Debug, Clone)]
pub struct GameSpec {
    components: Quadruple,
    allocation: Allocation,
    replications: u64,
    seed: u64,
    common_random_numbers: bool,
    quadrature_rel_tol: f64,
}

impl GameSpec {
    pub fn new(
        components: Quadruple,
        allocation: Allocation,
        replications: u64,
        seed: u64,
    ) -> Result<Self, GameError> {
        if replications == 0 {
            return Err(GameError::NoReplications);
        }
        Ok(Self {
            components,
            allocation,
            replications,
            seed,
            common_random_numbers: false,
            quadrature_rel_tol: 1e-10,
        })
    }

    /// Reuse the same uniform stream offsets in both arms (same Y draws, same
    /// per-replication stream), trading estimator independence for variance
    /// reduction when comparing allocations. Off by default.
    pub fn with_common_random_numbers(mut self, on: bool) -> Self {
        self.common_random_numbers = on;
        self
    }

    pub fn with_quadrature_rel_tol(mut self, rel_tol: f64) -> Self {
        self.quadrature_rel_tol = rel_tol;
        self
    }

    pub fn components(&self) -> &Quadruple {
        &self.components
    }

    pub fn allocation(&self) -> Allocation {
        self.allocation
    }

    pub fn replications(&self) -> u64 {
        self.replications
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Analytic and Monte Carlo gain estimates for one game run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GameResult {
    pub analytic_gain: f64,
    pub mc_gain: f64,
    pub mc_stderr: f64,
    pub n: u64,
    /// mc_gain ± 1.96·mc_stderr.
    pub ci95: (f64, f64),
}

/// Expected gain by quadrature: E(X) − E(Y) or E(X*) − E(Y) depending on the
/// allocation (independence splits the expectation of the difference).
pub fn analytic_gain(spec: &GameSpec) -> Result<f64, GameError> {
    let q = &spec.components;
    let x_mean = match spec.allocation {
        Allocation::Deterministic => mean_lifetime(&q.x_survival(), spec.quadrature_rel_tol)?,
        Allocation::Randomized => mean_lifetime(&q.x_star_survival(), spec.quadrature_rel_tol)?,
    };
    let y_mean = mean_lifetime(&q.y_survival(), spec.quadrature_rel_tol)?;
    Ok(x_mean - y_mean)
}

/// One draw of min{X₁, X₂} with deterministic allocation.
pub(crate) fn draw_deterministic_minimum(
    q: &Quadruple,
    rng: &mut impl Rng,
    cfg: &SamplerConfig,
) -> Result<f64, SamplerError> {
    let x1 = draw_lifetime(&q.f1, rng, cfg)?;
    let x2 = draw_lifetime(&q.f2, rng, cfg)?;
    Ok(x1.min(x2))
}

/// One draw of the randomized system's lifetime: each unit independently
/// picks stock 1 or 2 with probability 1/2, then samples that stock. Per
/// unit this realizes the survival (F̄₁+F̄₂)/2, so the minimum follows
/// [(F̄₁+F̄₂)/2]². A single shared pick for both units would instead give
/// (F̄₁²+F̄₂²)/2 and is deliberately not what this does.
pub(crate) fn draw_randomized_minimum(
    q: &Quadruple,
    rng: &mut impl Rng,
    cfg: &SamplerConfig,
) -> Result<f64, SamplerError> {
    let pick1 = rng.random::<f64>() < 0.5;
    let pick2 = rng.random::<f64>() < 0.5;
    let unit1 = if pick1 { &q.f1 } else { &q.f2 };
    let unit2 = if pick2 { &q.f1 } else { &q.f2 };
    let t1 = draw_lifetime(unit1, rng, cfg)?;
    let t2 = draw_lifetime(unit2, rng, cfg)?;
    Ok(t1.min(t2))
}

fn replication_gain(spec: &GameSpec, rep: u64, cfg: &SamplerConfig) -> Result<f64, GameError> {
    // One ChaCha stream per replication; without common random numbers the
    // two arms get disjoint stream halves so their estimators stay
    // independent.
    let stream = if spec.common_random_numbers {
        rep
    } else {
        let arm = match spec.allocation {
            Allocation::Deterministic => 0,
            Allocation::Randomized => 1,
        };
        rep.wrapping_mul(2).wrapping_add(arm)
    };
    let mut rng = stream_rng(spec.seed, stream);
    let q = &spec.components;

    let x = match spec.allocation {
        Allocation::Deterministic => {
            if spec.common_random_numbers {
                // Burn the two pick draws so the lifetime uniforms line up
                // with the randomized arm.
                let _ = rng.random::<f64>();
                let _ = rng.random::<f64>();
            }
            draw_deterministic_minimum(q, &mut rng, cfg)
        }
        Allocation::Randomized => draw_randomized_minimum(q, &mut rng, cfg),
    }
    .map_err(|source| GameError::Sampler {
        replication: rep,
        source,
    })?;

    let y1 = draw_lifetime(&q.g1, &mut rng, cfg).map_err(|source| GameError::Sampler {
        replication: rep,
        source,
    })?;
    let y2 = draw_lifetime(&q.g2, &mut rng, cfg).map_err(|source| GameError::Sampler {
        replication: rep,
        source,
    })?;
    Ok(x - y1.min(y2))
}

/// Monte Carlo estimate of the expected gain, with the analytic value
/// alongside for comparison. Deterministic given (spec, seed) regardless of
/// the rayon thread count.
pub fn simulate(spec: &GameSpec) -> Result<GameResult, GameError> {
    let analytic = analytic_gain(spec)?;
    let n = spec.replications;
    let cfg = SamplerConfig::new(spec.seed);
    let n_chunks = n.div_ceil(REPLICATION_CHUNK);

    let chunk_sums: Result<Vec<(f64, f64)>, GameError> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * REPLICATION_CHUNK;
            let hi = ((chunk + 1) * REPLICATION_CHUNK).min(n);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for rep in lo..hi {
                let gain = replication_gain(spec, rep, &cfg)?;
                sum += gain;
                sum_sq += gain * gain;
            }
            Ok((sum, sum_sq))
        })
        .collect();

    // Fixed-order fold over chunks: bit-identical under any partitioning.
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (s, s2) in chunk_sums? {
        sum += s;
        sum_sq += s2;
    }
    let nf = n as f64;
    let mc_gain = sum / nf;
    let mc_stderr = if n > 1 {
        (((sum_sq - nf * mc_gain * mc_gain) / (nf - 1.0)).max(0.0) / nf).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(GameResult {
        analytic_gain: analytic,
        mc_gain,
        mc_stderr,
        n,
        ci95: (mc_gain - 1.96 * mc_stderr, mc_gain + 1.96 * mc_stderr),
    })
}

/// Per-row settings for [`sweep`].
#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub replications: u64,
    pub seed: u64,
    pub common_random_numbers: bool,
}

impl SweepConfig {
    pub fn new(replications: u64, seed: u64) -> Self {
        Self {
            replications,
            seed,
            common_random_numbers: false,
        }
    }
}

/// One (λ, ν, allocation) cell of a sweep; failures stay in the row.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub lambda: f64,
    pub nu: f64,
    pub allocation: Allocation,
    pub outcome: Result<GameResult, GameError>,
}

/// Runs both allocations for every (λ, ν) pair, in input order. Row seeds
/// are derived as seed + row index so rows use distinct stream families;
/// per-row errors are recorded and the sweep continues.
pub fn sweep(family: ModelFamily, param_grid: &[(f64, f64)], cfg: &SweepConfig) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(param_grid.len() * 2);
    for (i, &(lambda, nu)) in param_grid.iter().enumerate() {
        let quadruple = family.build(lambda, nu);
        for (j, allocation) in [Allocation::Deterministic, Allocation::Randomized]
            .into_iter()
            .enumerate()
        {
            let row_seed = cfg.seed.wrapping_add((i * 2 + j) as u64);
            let outcome = quadruple
                .as_ref()
                .map_err(|e| GameError::Model(e.clone()))
                .and_then(|q| {
                    let spec = GameSpec::new(q.clone(), allocation, cfg.replications, row_seed)?
                        .with_common_random_numbers(cfg.common_random_numbers);
                    simulate(&spec)
                });
            rows.push(SweepRow {
                lambda,
                nu,
                allocation,
                outcome,
            });
        }
    }
    rows
}
