//! Survival functions, series/mixture combinators and hazard rates.
//!
//! A [`SurvivalFunction`] wraps an evaluable map t ↦ F̄(t) = Pr{T > t} on
//! t ≥ 0, together with optional analytic density and quantile hooks. All
//! lifetimes here are absolutely continuous with support (0, ∞), so F̄(0) = 1
//! and F̄(t) > 0 for every finite t.
//!
//! Two combinators build compound systems:
//!
//! * [`series`] — a two-unit series system fails with its first unit, so its
//!   lifetime is min{T₁, T₂} and its survival the pointwise product
//!   F̄₁(t)·F̄₂(t).
//! * [`mixture_unit`] — a unit drawn at random from two stocks survives with
//!   probability w·F̄₁(t) + (1−w)·F̄₂(t).
//!
//! [`MixtureSystem`] combines both: a series system whose two units are
//! independent equal-probability mixtures, with survival
//! [(F̄₁(t)+F̄₂(t))/2]² at weight 1/2.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::grid::TimeGrid;

/// Shared evaluable curve over time.
pub type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Survival probabilities at or below this are treated as numerical underflow.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Slack allowed in nonincreasing checks on evaluation grids.
pub const MONOTONE_SLACK: f64 = 1e-12;

/// Absolute slack allowed when checking F̄(0) = 1 at construction.
const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Error)]
pub enum SurvivalError {
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("'{label}': F̄(0) = {value} but survival functions must start at 1")]
    NotNormalized { label: String, value: f64 },
    #[error("'{label}': survival increases at t = {t} ({earlier} -> {later})")]
    NotMonotone {
        label: String,
        t: f64,
        earlier: f64,
        later: f64,
    },
    #[error("'{label}': survival value {value} at t = {t} is outside [0, 1]")]
    OutOfRange { label: String, t: f64, value: f64 },
    #[error("'{label}': non-finite survival value at t = {t}")]
    NonFinite { label: String, t: f64 },
    #[error("'{label}': survival is not strictly positive at t = {t}")]
    NotPositive { label: String, t: f64 },
    #[error("survival underflow at t = {t}")]
    Underflow { t: f64 },
}

/// An absolutely continuous survival function on t ≥ 0.
///
/// Values are immutable after construction and cheap to clone (the curve is
/// shared behind an [`Arc`]), so they can be evaluated concurrently from many
/// threads.
#[derive(Clone)]
pub struct SurvivalFunction {
    label: String,
    support_hint: f64,
    eval: EvalFn,
    density: Option<EvalFn>,
    quantile: Option<EvalFn>,
}

impl fmt::Debug for SurvivalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurvivalFunction")
            .field("label", &self.label)
            .field("support_hint", &self.support_hint)
            .field("has_density", &self.density.is_some())
            .field("has_quantile", &self.quantile.is_some())
            .finish()
    }
}

impl SurvivalFunction {
    /// Wraps an evaluable survival curve.
    ///
    /// `support_hint` is an estimate of a time beyond which F̄ < 1e-10; it
    /// seeds tail searches and bracket expansions and may be refined by the
    /// consumers, so a rough value is fine. Construction rejects curves with
    /// F̄(0) off 1 by more than 1e-9.
    pub fn new(
        label: impl Into<String>,
        support_hint: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, SurvivalError> {
        let label = label.into();
        if !support_hint.is_finite() || support_hint <= 0.0 {
            return Err(SurvivalError::InvalidParameter {
                name: "support_hint",
                value: support_hint,
            });
        }
        let at_zero = eval(0.0);
        if !at_zero.is_finite() || (at_zero - 1.0).abs() > NORMALIZATION_TOL {
            return Err(SurvivalError::NotNormalized {
                label,
                value: at_zero,
            });
        }
        Ok(Self {
            label,
            support_hint,
            eval: Arc::new(eval),
            density: None,
            quantile: None,
        })
    }

    /// Attaches an analytic density f(t) = −F̄′(t).
    pub fn with_density(mut self, density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.density = Some(Arc::new(density));
        self
    }

    /// Attaches an analytic quantile: u ∈ (0, 1] ↦ t with F̄(t) = u.
    pub fn with_quantile(mut self, quantile: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.quantile = Some(Arc::new(quantile));
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support_hint(&self) -> f64 {
        self.support_hint
    }

    pub fn has_density(&self) -> bool {
        self.density.is_some()
    }

    pub fn has_quantile(&self) -> bool {
        self.quantile.is_some()
    }

    pub fn analytic_quantile(&self, u: f64) -> Option<f64> {
        self.quantile.as_ref().map(|q| q(u))
    }

    /// Density at `t`: analytic if attached, otherwise a Richardson-refined
    /// finite difference of F̄ (central away from 0, forward near 0) with base
    /// step 1e-6·max(1, t).
    pub fn density_at(&self, t: f64) -> f64 {
        if let Some(d) = &self.density {
            return d(t);
        }
        let h = 1e-6 * t.max(1.0);
        if t >= h {
            let d1 = (self.eval(t - h) - self.eval(t + h)) / (2.0 * h);
            let d2 = (self.eval(t - 0.5 * h) - self.eval(t + 0.5 * h)) / h;
            (4.0 * d2 - d1) / 3.0
        } else {
            let s0 = self.eval(t);
            let d1 = (s0 - self.eval(t + h)) / h;
            let d2 = (s0 - self.eval(t + 0.5 * h)) / (0.5 * h);
            2.0 * d2 - d1
        }
    }

    pub(crate) fn eval_fn(&self) -> EvalFn {
        Arc::clone(&self.eval)
    }

    pub(crate) fn density_fn(&self) -> Option<EvalFn> {
        self.density.as_ref().map(Arc::clone)
    }

    /// Checks the survival invariants pointwise on `grid`: finite values in
    /// [0, 1], strictly positive, nonincreasing up to [`MONOTONE_SLACK`].
    /// The witness time of the first violation is carried in the error.
    pub fn validate_on_grid(&self, grid: &TimeGrid) -> Result<(), SurvivalError> {
        let mut prev: Option<(f64, f64)> = None;
        for &t in grid.points() {
            let v = self.eval(t);
            if !v.is_finite() {
                return Err(SurvivalError::NonFinite {
                    label: self.label.clone(),
                    t,
                });
            }
            if !(-MONOTONE_SLACK..=1.0 + MONOTONE_SLACK).contains(&v) {
                return Err(SurvivalError::OutOfRange {
                    label: self.label.clone(),
                    t,
                    value: v,
                });
            }
            if v <= 0.0 {
                return Err(SurvivalError::NotPositive {
                    label: self.label.clone(),
                    t,
                });
            }
            if let Some((_, pv)) = prev {
                if v > pv + MONOTONE_SLACK {
                    return Err(SurvivalError::NotMonotone {
                        label: self.label.clone(),
                        t,
                        earlier: pv,
                        later: v,
                    });
                }
            }
            prev = Some((t, v));
        }
        Ok(())
    }

    /// Default grid for invariant checks: the standard mixed grid on
    /// [0, 5·support_hint].
    pub fn validation_grid(&self) -> TimeGrid {
        TimeGrid::standard(5.0 * self.support_hint)
    }
}

/// Exponential lifetime: F̄(t) = exp(−λt), with analytic density λ·exp(−λt)
/// and quantile −ln(u)/λ.
pub fn exponential(lambda: f64) -> Result<SurvivalFunction, SurvivalError> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(SurvivalError::InvalidParameter {
            name: "lambda",
            value: lambda,
        });
    }
    // exp(-24) ≈ 3.8e-11, just under the 1e-10 hint target.
    let sf = SurvivalFunction::new(format!("exp(λ={lambda})"), 24.0 / lambda, move |t| {
        (-lambda * t).exp()
    })?;
    Ok(sf
        .with_density(move |t| lambda * (-lambda * t).exp())
        .with_quantile(move |u| -u.ln() / lambda))
}

/// Two-unit series system: lifetime min{T₁, T₂}, survival F̄₁·F̄₂.
#[derive(Debug, Clone)]
pub struct SeriesSystem {
    unit1: SurvivalFunction,
    unit2: SurvivalFunction,
}

impl SeriesSystem {
    pub fn new(unit1: SurvivalFunction, unit2: SurvivalFunction) -> Self {
        Self { unit1, unit2 }
    }

    pub fn unit1(&self) -> &SurvivalFunction {
        &self.unit1
    }

    pub fn unit2(&self) -> &SurvivalFunction {
        &self.unit2
    }

    pub fn survival(&self) -> SurvivalFunction {
        series(&self.unit1, &self.unit2)
    }
}

/// Pointwise product of two survival functions.
///
/// When both inputs carry analytic densities the product rule gives the
/// output density f₁·F̄₂ + F̄₁·f₂. The support hint is the smaller of the two
/// (the series dies with its weaker unit).
pub fn series(unit1: &SurvivalFunction, unit2: &SurvivalFunction) -> SurvivalFunction {
    let e1 = unit1.eval_fn();
    let e2 = unit2.eval_fn();
    let eval = {
        let (e1, e2) = (Arc::clone(&e1), Arc::clone(&e2));
        move |t: f64| e1(t) * e2(t)
    };
    let density = match (unit1.density_fn(), unit2.density_fn()) {
        (Some(d1), Some(d2)) => {
            let (e1, e2) = (Arc::clone(&e1), Arc::clone(&e2));
            Some(Arc::new(move |t: f64| d1(t) * e2(t) + e1(t) * d2(t)) as EvalFn)
        }
        _ => None,
    };
    SurvivalFunction {
        label: format!("series({}, {})", unit1.label(), unit2.label()),
        support_hint: unit1.support_hint().min(unit2.support_hint()),
        eval: Arc::new(eval),
        density,
        quantile: None,
    }
}

/// Probability-weighted mixture of two survival functions:
/// w·F̄₁ + (1−w)·F̄₂, the lifetime of a unit picked from stock 1 with
/// probability w.
pub fn mixture_unit(
    base1: &SurvivalFunction,
    base2: &SurvivalFunction,
    weight: f64,
) -> Result<SurvivalFunction, SurvivalError> {
    if !weight.is_finite() || !(0.0..=1.0).contains(&weight) {
        return Err(SurvivalError::InvalidParameter {
            name: "weight",
            value: weight,
        });
    }
    let e1 = base1.eval_fn();
    let e2 = base2.eval_fn();
    let eval = {
        let (e1, e2) = (Arc::clone(&e1), Arc::clone(&e2));
        move |t: f64| weight * e1(t) + (1.0 - weight) * e2(t)
    };
    let density = match (base1.density_fn(), base2.density_fn()) {
        (Some(d1), Some(d2)) => {
            Some(Arc::new(move |t: f64| weight * d1(t) + (1.0 - weight) * d2(t)) as EvalFn)
        }
        _ => None,
    };
    Ok(SurvivalFunction {
        label: format!("mix({}, {}; w={weight})", base1.label(), base2.label()),
        // The mixture survives as long as its longer-lived component.
        support_hint: base1.support_hint().max(base2.support_hint()),
        eval: Arc::new(eval),
        density,
        quantile: None,
    })
}

/// Series system whose two units are independent mixtures of the same two
/// base distributions. At weight 1/2 the system survival is
/// [(F̄₁(t)+F̄₂(t))/2]².
#[derive(Debug, Clone)]
pub struct MixtureSystem {
    base1: SurvivalFunction,
    base2: SurvivalFunction,
    weight: f64,
}

impl MixtureSystem {
    /// Equal-probability mixture, the default randomized selection.
    pub fn equal(base1: SurvivalFunction, base2: SurvivalFunction) -> Self {
        Self {
            base1,
            base2,
            weight: 0.5,
        }
    }

    pub fn with_weight(
        base1: SurvivalFunction,
        base2: SurvivalFunction,
        weight: f64,
    ) -> Result<Self, SurvivalError> {
        if !weight.is_finite() || !(0.0..=1.0).contains(&weight) {
            return Err(SurvivalError::InvalidParameter {
                name: "weight",
                value: weight,
            });
        }
        Ok(Self {
            base1,
            base2,
            weight,
        })
    }

    pub fn base1(&self) -> &SurvivalFunction {
        &self.base1
    }

    pub fn base2(&self) -> &SurvivalFunction {
        &self.base2
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

/// System survival of a [`MixtureSystem`]: the series product of its two
/// identical mixed units, i.e. [w·F̄₁ + (1−w)·F̄₂]².
pub fn mixture_system_survival(sys: &MixtureSystem) -> SurvivalFunction {
    let unit = mixture_unit(&sys.base1, &sys.base2, sys.weight)
        .expect("MixtureSystem holds a validated weight");
    series(&unit, &unit).with_label(format!(
        "mixture_system({}, {}; w={})",
        sys.base1.label(),
        sys.base2.label(),
        sys.weight
    ))
}

/// Hazard rate h(t) = f(t)/F̄(t) = −d/dt ln F̄(t).
///
/// Uses the analytic density when attached, otherwise a central finite
/// difference of −ln F̄ with step 1e-6·max(1, t) (forward near t = 0).
/// Survival values at or below [`UNDERFLOW_FLOOR`] are an error.
pub fn hazard_rate(f: &SurvivalFunction, t: f64) -> Result<f64, SurvivalError> {
    if !t.is_finite() || t < 0.0 {
        return Err(SurvivalError::InvalidParameter { name: "t", value: t });
    }
    let s = f.eval(t);
    if !(s > UNDERFLOW_FLOOR) {
        return Err(SurvivalError::Underflow { t });
    }
    if f.has_density() {
        return Ok(f.density_at(t) / s);
    }
    let h = 1e-6 * t.max(1.0);
    if t >= h {
        let sm = f.eval(t - h);
        let sp = f.eval(t + h);
        if !(sm > UNDERFLOW_FLOOR && sp > UNDERFLOW_FLOOR) {
            return Err(SurvivalError::Underflow { t });
        }
        Ok((sm.ln() - sp.ln()) / (2.0 * h))
    } else {
        let sp = f.eval(t + h);
        if !(sp > UNDERFLOW_FLOOR) {
            return Err(SurvivalError::Underflow { t });
        }
        Ok((s.ln() - sp.ln()) / h)
    }
}

/// Doubling probe for the decay of an evaluable curve.
///
/// Returns `(hint, finite_cap)`: `hint` is the first probed time where the
/// curve drops below 1e-10 (or the largest finite-valued probe when it never
/// does), `finite_cap` the largest probed time with a finite value. Used for
/// black-box curves whose closed form is unknown.
pub(crate) fn estimate_support(eval: &dyn Fn(f64) -> f64, initial: f64) -> (f64, f64) {
    let mut t = initial.max(f64::MIN_POSITIVE);
    let mut last_finite = t;
    let mut hint: Option<f64> = None;
    for _ in 0..60 {
        let v = eval(t);
        if !v.is_finite() {
            break;
        }
        last_finite = t;
        if hint.is_none() && v < 1e-10 {
            hint = Some(t);
        }
        if let Some(h) = hint {
            // Probe far enough past the decay point to cover validation grids.
            if t >= 5.0 * h {
                break;
            }
        }
        t *= 2.0;
    }
    (hint.unwrap_or(last_finite), last_finite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{assert_close, assert_rel, test_rng};
    use rand::Rng;

    const EXP_NEG_1: f64 = 0.36787944117144233;
    const EXP_NEG_2: f64 = 0.1353352832366127;

    /// Example-1 style second unit, built from its closed form so tests stay
    /// independent of the model constructors: F̄(t) = (1+λt)e^{−λt}.
    fn linear_exp_unit(lambda: f64) -> SurvivalFunction {
        SurvivalFunction::new(format!("(1+{lambda}t)e^-{lambda}t"), 35.0 / lambda, move |t| {
            (1.0 + lambda * t) * (-lambda * t).exp()
        })
        .unwrap()
        .with_density(move |t| lambda * lambda * t * (-lambda * t).exp())
    }

    #[test]
    fn exponential_survival_at_zero_is_one() {
        let f = exponential(1.0).unwrap();
        assert_eq!(f.eval(0.0), 1.0);
    }

    #[test]
    fn exponential_matches_closed_form() {
        let f = exponential(1.0).unwrap();
        assert_close(f.eval(1.0), EXP_NEG_1, 1e-15);
    }

    #[test]
    fn exponential_quantile_inverts_survival() {
        let f = exponential(2.0).unwrap();
        let t = f.analytic_quantile(EXP_NEG_2).unwrap();
        assert_close(t, 1.0, 1e-12);
    }

    #[test]
    fn exponential_rejects_bad_rates() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(exponential(bad).is_err());
        }
    }

    #[test]
    fn construction_rejects_unnormalized_curves() {
        let err = SurvivalFunction::new("bad", 1.0, |_| 0.9).unwrap_err();
        assert!(matches!(err, SurvivalError::NotNormalized { .. }));
        assert!(SurvivalFunction::new("bad-hint", 0.0, |_| 1.0).is_err());
    }

    #[test]
    fn series_of_identical_exponentials_is_rate_sum() {
        let f = exponential(1.0).unwrap();
        let s = series(&f, &f);
        for t in [0.0, 0.3, 1.0, 4.0] {
            assert_close(s.eval(t), (-2.0 * t).exp(), 1e-15);
        }
    }

    #[test]
    fn series_example_value() {
        // series(e^{-t}, (1+t)e^{-t}) at t = 1 is 2e^{-2}.
        let s = series(&exponential(1.0).unwrap(), &linear_exp_unit(1.0));
        assert_close(s.eval(1.0), 2.0 * EXP_NEG_2, 1e-15);
    }

    #[test]
    fn series_never_exceeds_weaker_unit() {
        let f1 = exponential(0.7).unwrap();
        let f2 = linear_exp_unit(1.3);
        let s = series(&f1, &f2);
        let mut rng = test_rng(7);
        for _ in 0..100 {
            let t = rng.random::<f64>() * 20.0;
            let bound = f1.eval(t).min(f2.eval(t));
            assert!(s.eval(t) <= bound + 1e-15, "series above min at t={t}");
        }
    }

    #[test]
    fn mixture_of_identical_components_is_identity() {
        let f = linear_exp_unit(1.0);
        let m = mixture_unit(&f, &f, 0.5).unwrap();
        for t in [0.0, 0.5, 2.0, 10.0] {
            assert_eq!(m.eval(t), f.eval(t));
        }
    }

    #[test]
    fn mixture_example_value() {
        // (e^{-1} + 2e^{-1})/2 = 1.5·e^{-1}.
        let m = mixture_unit(&exponential(1.0).unwrap(), &linear_exp_unit(1.0), 0.5).unwrap();
        assert_close(m.eval(1.0), 1.5 * EXP_NEG_1, 1e-15);
        assert_close(m.eval(1.0), 0.5518191617571635, 1e-15);
    }

    #[test]
    fn mixture_degenerate_weight_returns_base() {
        let f1 = exponential(1.0).unwrap();
        let f2 = linear_exp_unit(1.0);
        let m = mixture_unit(&f1, &f2, 1.0).unwrap();
        for t in [0.1, 1.0, 3.0] {
            assert_eq!(m.eval(t), f1.eval(t));
        }
    }

    #[test]
    fn mixture_rejects_bad_weights() {
        let f = exponential(1.0).unwrap();
        for bad in [-0.1, 1.1, f64::NAN] {
            assert!(mixture_unit(&f, &f, bad).is_err());
            assert!(MixtureSystem::with_weight(f.clone(), f.clone(), bad).is_err());
        }
    }

    #[test]
    fn mixture_system_collapses_for_equal_bases() {
        let f = linear_exp_unit(1.0);
        let sys = MixtureSystem::equal(f.clone(), f.clone());
        let s = mixture_system_survival(&sys);
        for t in [0.0, 0.4, 2.0] {
            let v = f.eval(t);
            assert_close(s.eval(t), v * v, 1e-15);
        }
    }

    #[test]
    fn mixture_system_example_value() {
        // [(e^{-1} + 2e^{-1})/2]^2 = 2.25·e^{-2}.
        let sys = MixtureSystem::equal(exponential(1.0).unwrap(), linear_exp_unit(1.0));
        let s = mixture_system_survival(&sys);
        assert_close(s.eval(1.0), 2.25 * EXP_NEG_2, 1e-15);
        assert_close(s.eval(1.0), 0.30450438728237857, 1e-15);
    }

    #[test]
    fn mixture_gain_identity_pointwise() {
        // F̄*(t) − F̄₁(t)F̄₂(t) = [(F̄₁(t)−F̄₂(t))/2]² for the equal mixture.
        let f1 = exponential(0.9).unwrap();
        let f2 = linear_exp_unit(1.4);
        let sys = MixtureSystem::equal(f1.clone(), f2.clone());
        let star = mixture_system_survival(&sys);
        let mut rng = test_rng(11);
        for _ in 0..50 {
            let t = rng.random::<f64>() * 15.0;
            let (a, b) = (f1.eval(t), f2.eval(t));
            let gain = star.eval(t) - a * b;
            let half_diff = 0.5 * (a - b);
            assert_close(gain, half_diff * half_diff, 1e-12);
        }
    }

    #[test]
    fn hazard_of_exponential_is_constant() {
        let f = exponential(2.0).unwrap();
        for t in [0.0, 0.2, 1.0, 7.5] {
            assert_close(hazard_rate(&f, t).unwrap(), 2.0, 1e-12);
        }
        // Same through the finite-difference path.
        let bare = SurvivalFunction::new("exp-bare", 12.0, |t| (-2.0 * t).exp()).unwrap();
        for t in [0.0, 0.2, 1.0, 7.5] {
            assert_close(hazard_rate(&bare, t).unwrap(), 2.0, 1e-6);
        }
    }

    #[test]
    fn hazard_example_value() {
        // (1+t)e^{-t} has hazard t/(1+t); at t = 1 that is 1/2.
        let f = linear_exp_unit(1.0);
        assert_close(hazard_rate(&f, 1.0).unwrap(), 0.5, 1e-12);
        let bare = SurvivalFunction::new("bare", 35.0, |t| (1.0 + t) * (-t).exp()).unwrap();
        assert_close(hazard_rate(&bare, 1.0).unwrap(), 0.5, 1e-6);
    }

    #[test]
    fn hazard_is_additive_under_series() {
        let f1 = linear_exp_unit(0.8);
        let f2 = exponential(1.7).unwrap();
        let s = series(&f1, &f2);
        let s_bare = SurvivalFunction::new("bare-series", s.support_hint(), {
            let e = s.eval_fn();
            move |t| e(t)
        })
        .unwrap();
        let mut rng = test_rng(23);
        for _ in 0..20 {
            let t = 0.05 + rng.random::<f64>() * 8.0;
            let h1 = hazard_rate(&f1, t).unwrap();
            let h2 = hazard_rate(&f2, t).unwrap();
            if h1 < 1e-8 || h2 < 1e-8 {
                continue;
            }
            let hs = hazard_rate(&s, t).unwrap();
            assert_rel(hs, h1 + h2, 1e-6);
            let hs_fd = hazard_rate(&s_bare, t).unwrap();
            assert_rel(hs_fd, h1 + h2, 1e-6);
        }
    }

    #[test]
    fn hazard_underflow_is_an_error() {
        let f = exponential(1.0).unwrap();
        assert!(matches!(
            hazard_rate(&f, 800.0),
            Err(SurvivalError::Underflow { .. })
        ));
    }

    #[test]
    fn density_fallback_matches_analytic() {
        // Finite differences must agree with the attached density within
        // max(1e-6, 1e-4·f(t)).
        for f in [exponential(1.3).unwrap(), linear_exp_unit(1.0)] {
            let bare = SurvivalFunction::new("bare", f.support_hint(), {
                let e = f.eval_fn();
                move |t| e(t)
            })
            .unwrap();
            for t in [0.0, 1e-3, 0.3, 1.0, 4.0, 9.0] {
                let exact = f.density_at(t);
                let fd = bare.density_at(t);
                let tol = 1e-6f64.max(1e-4 * exact.abs());
                assert_close(fd, exact, tol);
            }
        }
    }

    #[test]
    fn validation_catches_non_monotone_curves() {
        let bumpy = SurvivalFunction::new("bumpy", 10.0, |t| {
            ((-t).exp() + 0.05 * (t * 3.0).sin()).clamp(0.0, 1.0)
        })
        .unwrap();
        let err = bumpy.validate_on_grid(&bumpy.validation_grid()).unwrap_err();
        assert!(matches!(err, SurvivalError::NotMonotone { .. }));
    }

    #[test]
    fn validation_accepts_builtin_families() {
        for f in [
            exponential(0.5).unwrap(),
            exponential(3.0).unwrap(),
            linear_exp_unit(1.0),
        ] {
            f.validate_on_grid(&f.validation_grid()).unwrap();
        }
        // Combinator outputs stay valid and normalized.
        let s = series(&exponential(1.0).unwrap(), &linear_exp_unit(2.0));
        assert_eq!(s.eval(0.0), 1.0);
        s.validate_on_grid(&s.validation_grid()).unwrap();
    }

    #[test]
    fn support_probe_finds_decay_and_caps_blowups() {
        let (hint, cap) = estimate_support(&|t: f64| (-t).exp(), 1.0);
        assert!((-hint).exp() < 1e-10);
        assert!(cap >= hint);

        // A curve that should never decay: the probe reports the largest
        // finite-valued time instead of looping forever.
        let (hint, cap) = estimate_support(
            &|t: f64| {
                let m = (0.5 * t).exp() * (-0.5 * t).exp();
                m * m
            },
            1.0,
        );
        assert!(hint.is_finite() && cap.is_finite());
    }
}
