//! Reliability comparisons of two-unit series systems under randomized unit
//! selection — the reliability face of Parrondo's paradox.
//!
//! Start from two series systems whose components are ordered unit by unit in
//! the usual stochastic sense (every F̄ᵢ ≤ Ḡᵢ, so the second system is the
//! stronger one). Replacing the first system's fixed units with units picked
//! uniformly at random from its two stocks turns each unit's survival into
//! the mixture (F̄₁+F̄₂)/2 and the system survival into [(F̄₁+F̄₂)/2]², which
//! beats the original product by [(F̄₁−F̄₂)/2]² pointwise. Under checkable
//! feasibility conditions the randomized system even dominates the stronger
//! second system, and a player paid the lifetime difference flips a losing
//! game into a winning one by mixing.
//!
//! The crate provides:
//!
//! * [`survival`] — survival-function abstraction, series/mixture
//!   combinators, hazard rates;
//! * [`quadrature`] — expected lifetimes with certified tail bounds;
//! * [`sampling`] — seeded, stream-partitioned inverse-transform sampling;
//! * [`ordering`] — grid-certified stochastic-order, feasibility and
//!   hazard-identity checks;
//! * [`models`] — the built-in parametric families exhibiting the reversal;
//! * [`game`] — analytic and Monte Carlo expected gains for the
//!   deterministic and randomized allocations.

// Negated comparisons like `!(x > 0.0)` are used on purpose: they treat NaN
// as a failure instead of silently passing it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod game;
pub mod grid;
pub mod models;
pub mod ordering;
pub mod quadrature;
pub mod sampling;
pub mod survival;

pub use game::{
    analytic_gain, simulate, sweep, Allocation, GameError, GameResult, GameSpec, SweepConfig,
    SweepRow,
};
pub use grid::{GridError, GridSpacing, TimeGrid, DEFAULT_GRID_POINTS};
pub use models::{
    example1, example1_system_means, example2, example2_custom, Example1Params, Example2Params,
    ModelError, ModelFamily, Quadruple, SystemId, SystemMeans,
};
pub use ordering::{
    check_paradox_conditions, check_st_order, feasibility_point, hazard_identity_check,
    necessary_conditions, sufficient_family_a_bound, sufficient_family_b_bound, BoundCurve,
    FeasibilityPoint, OrderingReport, ParadoxReport, Verdict, DERIVATIVE_TOL, POINTWISE_TOL,
};
pub use quadrature::{mean_lifetime, mean_lifetime_detailed, MeanEstimate, QuadratureError};
pub use sampling::{invert_survival, sample, stream_rng, SamplerConfig, SamplerError};
pub use survival::{
    exponential, hazard_rate, mixture_system_survival, mixture_unit, series, MixtureSystem,
    SeriesSystem, SurvivalError, SurvivalFunction,
};

#[cfg(test)]
pub(crate) mod testutil {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub fn test_rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[track_caller]
    pub fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual} (tolerance {tol})"
        );
    }

    #[track_caller]
    pub fn assert_rel(actual: f64, expected: f64, rel_tol: f64) {
        let scale = expected.abs().max(f64::MIN_POSITIVE);
        assert!(
            (actual - expected).abs() <= rel_tol * scale,
            "expected {expected} within relative {rel_tol}, got {actual}"
        );
    }
}
