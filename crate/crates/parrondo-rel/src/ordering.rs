//! Numerical verification of stochastic-order and feasibility conditions.
//!
//! The central question: given component survival functions F̄₁, F̄₂ (first
//! system) and Ḡ₁, Ḡ₂ (second system) with F̄ᵢ ≤ Ḡᵢ, can the randomized
//! first system still dominate the second? That holds exactly when, for all
//! t ≥ 0,
//!
//! * (i)  [F̄₁(t)+F̄₂(t)]²/4 ≥ Ḡ₁(t)·Ḡ₂(t), and
//! * (ii) F̄ᵢ(t) ≤ Ḡᵢ(t) for i = 1, 2.
//!
//! Equivalently, in ratio coordinates xᵢ(t) = Ḡᵢ(t)/F̄ᵢ(t) − 1 the pair must
//! stay in the region x₁ ≥ 0, x₂ ≥ 0, x₁+x₂+x₁x₂ ≤ A(t) under a time-varying
//! hyperbola with A(t) = [F̄₁(t)−F̄₂(t)]²/(4F̄₁(t)F̄₂(t)); see
//! [`feasibility_point`].
//!
//! All checks are grid-certified: a verdict holds on the supplied grid only,
//! and every [`OrderingReport`] carries the grid size so callers know the
//! resolution of the claim.

use std::sync::Arc;

use serde::Serialize;

use crate::grid::TimeGrid;
use crate::survival::{hazard_rate, EvalFn, SurvivalFunction, SurvivalError, UNDERFLOW_FLOOR};

/// Absolute slack for pointwise survival comparisons (ulp scale).
pub const POINTWISE_TOL: f64 = 1e-12;
/// Slack for density/hazard comparisons, which involve differentiation.
pub const DERIVATIVE_TOL: f64 = 1e-6;
/// Relative slack when checking the ratio identity Ḡ₁/F̄₁ = Ḡ₂/F̄₂ directly.
const RATIO_IDENTITY_TOL: f64 = 1e-9;

/// Outcome of a grid-certified check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// Verdict with the worst observed slack and its location.
///
/// `margin` is the minimum signed slack of the checked inequality over the
/// grid; the verdict is `Holds` iff `margin ≥ −tolerance` and `Fails` iff
/// `margin < −tolerance` (then `witness_t` points at the worst violation).
#[derive(Debug, Clone, Serialize)]
pub struct OrderingReport {
    pub verdict: Verdict,
    pub witness_t: Option<f64>,
    pub margin: f64,
    pub grid_size: usize,
    pub tolerance: f64,
    /// Grid points excluded from the check (e.g. hazard underflow).
    pub skipped: usize,
}

impl OrderingReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    fn from_slacks(
        slacks: impl Iterator<Item = (f64, f64)>,
        tolerance: f64,
        grid_size: usize,
        skipped: usize,
    ) -> Self {
        let mut margin = f64::INFINITY;
        let mut worst_t = None;
        let mut evaluated = 0usize;
        for (t, slack) in slacks {
            if slack.is_nan() {
                return Self {
                    verdict: Verdict::Inconclusive,
                    witness_t: Some(t),
                    margin: f64::NAN,
                    grid_size,
                    tolerance,
                    skipped,
                };
            }
            if slack < margin {
                margin = slack;
                worst_t = Some(t);
            }
            evaluated += 1;
        }
        if evaluated == 0 {
            return Self {
                verdict: Verdict::Inconclusive,
                witness_t: None,
                margin: f64::NAN,
                grid_size,
                tolerance,
                skipped,
            };
        }
        if margin < -tolerance {
            Self {
                verdict: Verdict::Fails,
                witness_t: worst_t,
                margin,
                grid_size,
                tolerance,
                skipped,
            }
        } else {
            Self {
                verdict: Verdict::Holds,
                witness_t: None,
                margin,
                grid_size,
                tolerance,
                skipped,
            }
        }
    }
}

/// Checks `lower ≤_st upper`, i.e. F̄_lower(t) ≤ F̄_upper(t) on the grid.
pub fn check_st_order(
    lower: &SurvivalFunction,
    upper: &SurvivalFunction,
    grid: &TimeGrid,
) -> OrderingReport {
    check_st_order_with_tolerance(lower, upper, grid, POINTWISE_TOL)
}

pub fn check_st_order_with_tolerance(
    lower: &SurvivalFunction,
    upper: &SurvivalFunction,
    grid: &TimeGrid,
    tolerance: f64,
) -> OrderingReport {
    let slacks = grid.points().iter().map(|&t| (t, upper.eval(t) - lower.eval(t)));
    OrderingReport::from_slacks(slacks, tolerance, grid.len(), 0)
}

/// Reports for conditions (i) and (ii); both holding certifies that the
/// randomized first system dominates the second on the grid even though each
/// of its components is dominated.
#[derive(Debug, Clone, Serialize)]
pub struct ParadoxReport {
    /// (i): [(F̄₁+F̄₂)/2]² ≥ Ḡ₁·Ḡ₂, slack in survival units.
    pub condition_i: OrderingReport,
    /// (ii): F̄ᵢ ≤ Ḡᵢ for both i, slack is the worse of the two.
    pub condition_ii: OrderingReport,
}

impl ParadoxReport {
    pub fn both_hold(&self) -> bool {
        self.condition_i.holds() && self.condition_ii.holds()
    }
}

pub fn check_paradox_conditions(
    f1: &SurvivalFunction,
    f2: &SurvivalFunction,
    g1: &SurvivalFunction,
    g2: &SurvivalFunction,
    grid: &TimeGrid,
) -> ParadoxReport {
    check_paradox_conditions_with_tolerance(f1, f2, g1, g2, grid, POINTWISE_TOL)
}

pub fn check_paradox_conditions_with_tolerance(
    f1: &SurvivalFunction,
    f2: &SurvivalFunction,
    g1: &SurvivalFunction,
    g2: &SurvivalFunction,
    grid: &TimeGrid,
    tolerance: f64,
) -> ParadoxReport {
    let slacks_i = grid.points().iter().map(|&t| {
        let half_sum = 0.5 * (f1.eval(t) + f2.eval(t));
        (t, half_sum * half_sum - g1.eval(t) * g2.eval(t))
    });
    let condition_i = OrderingReport::from_slacks(slacks_i, tolerance, grid.len(), 0);

    let slacks_ii = grid.points().iter().map(|&t| {
        let s1 = g1.eval(t) - f1.eval(t);
        let s2 = g2.eval(t) - f2.eval(t);
        (t, s1.min(s2))
    });
    let condition_ii = OrderingReport::from_slacks(slacks_ii, tolerance, grid.len(), 0);

    ParadoxReport {
        condition_i,
        condition_ii,
    }
}

/// Ratio coordinates of the feasibility region at a fixed time.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FeasibilityPoint {
    pub t: f64,
    /// x₁ = Ḡ₁(t)/F̄₁(t) − 1; never below −1, feasible only if ≥ 0.
    pub x1: f64,
    /// x₂ = Ḡ₂(t)/F̄₂(t) − 1.
    pub x2: f64,
    /// Hyperbola level A(t) = [F̄₁(t)−F̄₂(t)]²/(4F̄₁(t)F̄₂(t)) ≥ 0.
    pub a: f64,
}

impl FeasibilityPoint {
    /// x₁ ≥ 0 ∧ x₂ ≥ 0 ∧ x₁+x₂+x₁x₂ ≤ A, with slack `tol` on each inequality.
    pub fn is_feasible(&self, tol: f64) -> bool {
        self.x1 >= -tol && self.x2 >= -tol && self.x1 + self.x2 + self.x1 * self.x2 <= self.a + tol
    }
}

/// Evaluates the ratio coordinates at `t`; errors if either F̄ᵢ underflows.
pub fn feasibility_point(
    f1: &SurvivalFunction,
    f2: &SurvivalFunction,
    g1: &SurvivalFunction,
    g2: &SurvivalFunction,
    t: f64,
) -> Result<FeasibilityPoint, SurvivalError> {
    let sf1 = f1.eval(t);
    let sf2 = f2.eval(t);
    if !(sf1 > UNDERFLOW_FLOOR) || !(sf2 > UNDERFLOW_FLOOR) {
        return Err(SurvivalError::Underflow { t });
    }
    let sg1 = g1.eval(t);
    let sg2 = g2.eval(t);
    let diff = sf1 - sf2;
    Ok(FeasibilityPoint {
        t,
        x1: sg1 / sf1 - 1.0,
        x2: sg2 / sf2 - 1.0,
        a: diff * diff / (4.0 * sf1 * sf2),
    })
}

/// Conditions (i) and (ii) evaluated directly at one time point, with slack
/// normalized by the F̄ scale so the check is algebraically the same
/// inequality as [`FeasibilityPoint::is_feasible`]:
/// x ≥ −tol ⟺ Ḡ ≥ (1−tol)·F̄ and x₁+x₂+x₁x₂ ≤ A+tol ⟺
/// Ḡ₁Ḡ₂ ≤ [(F̄₁+F̄₂)/2]² + tol·F̄₁F̄₂.
pub fn direct_conditions_at(
    f1: &SurvivalFunction,
    f2: &SurvivalFunction,
    g1: &SurvivalFunction,
    g2: &SurvivalFunction,
    t: f64,
    tol: f64,
) -> bool {
    let sf1 = f1.eval(t);
    let sf2 = f2.eval(t);
    let sg1 = g1.eval(t);
    let sg2 = g2.eval(t);
    let cond_ii = sg1 - sf1 >= -tol * sf1 && sg2 - sf2 >= -tol * sf2;
    let half_sum = 0.5 * (sf1 + sf2);
    let cond_i = sg1 * sg2 <= half_sum * half_sum + tol * sf1 * sf2;
    cond_i && cond_ii
}

/// A raw curve returned by the sufficient-condition bound constructors.
///
/// Bound envelopes are not necessarily survival functions; [`BoundCurve::promote`]
/// upgrades one after it passes the survival invariants on a grid.
#[derive(Clone)]
pub struct BoundCurve {
    label: String,
    eval: EvalFn,
}

impl BoundCurve {
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Validates the curve as a survival function on its standard grid.
    pub fn promote(&self, support_hint: f64) -> Result<SurvivalFunction, SurvivalError> {
        let eval = Arc::clone(&self.eval);
        let sf = SurvivalFunction::new(self.label.clone(), support_hint, move |t| eval(t))?;
        sf.validate_on_grid(&sf.validation_grid())?;
        Ok(sf)
    }
}

/// Upper envelope for the one-sided family of solutions: with Ḡ₁ = F̄₁, any
/// Ḡ₂ between F̄₂ and t ↦ [F̄₁(t)+F̄₂(t)]²/(4F̄₁(t)) satisfies (i) and (ii).
pub fn sufficient_family_a_bound(f1: &SurvivalFunction, f2: &SurvivalFunction) -> BoundCurve {
    let e1 = f1.eval_fn();
    let e2 = f2.eval_fn();
    BoundCurve {
        label: format!("family_a_bound({}, {})", f1.label(), f2.label()),
        eval: Arc::new(move |t| {
            let half_sum = 0.5 * (e1(t) + e2(t));
            half_sum * half_sum / e1(t)
        }),
    }
}

/// Upper envelope for the equal-ratio family: with Ḡ₂ = Ḡ₁·F̄₂/F̄₁, any Ḡ₁
/// between F̄₁ and t ↦ [(F̄₁(t)+F̄₂(t))/2]·√(F̄₁(t)/F̄₂(t)) satisfies (i)
/// and (ii).
pub fn sufficient_family_b_bound(f1: &SurvivalFunction, f2: &SurvivalFunction) -> BoundCurve {
    let e1 = f1.eval_fn();
    let e2 = f2.eval_fn();
    BoundCurve {
        label: format!("family_b_bound({}, {})", f1.label(), f2.label()),
        eval: Arc::new(move |t| 0.5 * (e1(t) + e2(t)) * (e1(t) / e2(t)).sqrt()),
    }
}

/// Density at zero, via the analytic hook or a Richardson-extrapolated
/// forward difference. Returns `None` when the estimate is ill-conditioned
/// (the Richardson correction stays large), e.g. for densities unbounded
/// at the origin.
fn density_at_zero(f: &SurvivalFunction) -> Option<f64> {
    if f.has_density() {
        let v = f.density_at(0.0);
        return v.is_finite().then_some(v);
    }
    let h = 1e-6;
    let s0 = f.eval(0.0);
    let d1 = (s0 - f.eval(h)) / h;
    let d2 = (s0 - f.eval(0.5 * h)) / (0.5 * h);
    let est = 2.0 * d2 - d1;
    if !est.is_finite() {
        return None;
    }
    if (d2 - d1).abs() > 1e-4f64.max(0.01 * est.abs()) {
        return None;
    }
    Some(est)
}

/// Matching densities at zero, f₁(0) = g₁(0) and f₂(0) = g₂(0): a necessary
/// condition for (i) and (ii), obtained by forcing the one-sided derivatives
/// of the slack functions h(t) = [F̄₁+F̄₂]²/4 − Ḡ₁Ḡ₂ and kᵢ(t) = Ḡᵢ − F̄ᵢ to
/// be non-negative at 0⁺ (all three vanish at 0).
///
/// `margin` is −maxᵢ |fᵢ(0) − gᵢ(0)|; the verdict is inconclusive when a
/// density is unavailable and the finite difference is ill-conditioned.
pub fn necessary_conditions(
    f1: &SurvivalFunction,
    f2: &SurvivalFunction,
    g1: &SurvivalFunction,
    g2: &SurvivalFunction,
) -> OrderingReport {
    let mut worst = 0.0f64;
    for (f, g) in [(f1, g1), (f2, g2)] {
        match (density_at_zero(f), density_at_zero(g)) {
            (Some(df), Some(dg)) => worst = worst.max((df - dg).abs()),
            _ => {
                return OrderingReport {
                    verdict: Verdict::Inconclusive,
                    witness_t: Some(0.0),
                    margin: f64::NAN,
                    grid_size: 1,
                    tolerance: DERIVATIVE_TOL,
                    skipped: 0,
                }
            }
        }
    }
    let margin = -worst;
    if margin < -DERIVATIVE_TOL {
        OrderingReport {
            verdict: Verdict::Fails,
            witness_t: Some(0.0),
            margin,
            grid_size: 1,
            tolerance: DERIVATIVE_TOL,
            skipped: 0,
        }
    } else {
        OrderingReport {
            verdict: Verdict::Holds,
            witness_t: None,
            margin,
            grid_size: 1,
            tolerance: DERIVATIVE_TOL,
            skipped: 0,
        }
    }
}

/// Hazard-rate identity: Ḡ₁/F̄₁ = Ḡ₂/F̄₂ for all t holds iff
/// h_{Ḡ₁} − h_{F̄₁} = h_{Ḡ₂} − h_{F̄₂} almost everywhere.
///
/// `margin` is the negated worst relative hazard-difference mismatch
/// (relative to the largest of the four hazards at that t), so `Holds` means
/// |Δh₁ − Δh₂| stays within `tolerance` relative everywhere evaluated. Points
/// where a survival underflows are skipped and counted. The ratio identity is
/// also checked directly; if the two checks disagree the verdict is
/// `Inconclusive`.
pub fn hazard_identity_check(
    f1: &SurvivalFunction,
    f2: &SurvivalFunction,
    g1: &SurvivalFunction,
    g2: &SurvivalFunction,
    grid: &TimeGrid,
) -> OrderingReport {
    hazard_identity_check_with_tolerance(f1, f2, g1, g2, grid, DERIVATIVE_TOL)
}

pub fn hazard_identity_check_with_tolerance(
    f1: &SurvivalFunction,
    f2: &SurvivalFunction,
    g1: &SurvivalFunction,
    g2: &SurvivalFunction,
    grid: &TimeGrid,
    tol_rel: f64,
) -> OrderingReport {
    let mut skipped = 0usize;
    let mut evaluated = 0usize;
    let mut worst = 0.0f64;
    let mut worst_t = None;
    let mut ratio_worst = 0.0f64;

    for &t in grid.points() {
        let rates = (
            hazard_rate(f1, t),
            hazard_rate(g1, t),
            hazard_rate(f2, t),
            hazard_rate(g2, t),
        );
        let (Ok(hf1), Ok(hg1), Ok(hf2), Ok(hg2)) = rates else {
            skipped += 1;
            continue;
        };
        let diff = ((hg1 - hf1) - (hg2 - hf2)).abs();
        let scale = hf1.abs().max(hg1.abs()).max(hf2.abs()).max(hg2.abs());
        let rel = if diff == 0.0 {
            0.0
        } else if scale > 0.0 {
            diff / scale
        } else {
            f64::INFINITY
        };
        if worst_t.is_none() || rel > worst {
            worst = rel;
            worst_t = Some(t);
        }

        // hazard_rate succeeded for all four, so the survivals are safely
        // above the underflow floor.
        let r1 = g1.eval(t) / f1.eval(t);
        let r2 = g2.eval(t) / f2.eval(t);
        ratio_worst = ratio_worst.max((r1 - r2).abs() / r1.abs().max(r2.abs()).max(1e-12));
        evaluated += 1;
    }

    if evaluated == 0 {
        return OrderingReport {
            verdict: Verdict::Inconclusive,
            witness_t: None,
            margin: f64::NAN,
            grid_size: grid.len(),
            tolerance: tol_rel,
            skipped,
        };
    }

    let margin = -worst;
    let hazard_holds = margin >= -tol_rel;
    let ratio_holds = ratio_worst <= RATIO_IDENTITY_TOL;
    let verdict = if hazard_holds != ratio_holds {
        Verdict::Inconclusive
    } else if hazard_holds {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    OrderingReport {
        verdict,
        witness_t: if verdict == Verdict::Holds { None } else { worst_t },
        margin,
        grid_size: grid.len(),
        tolerance: tol_rel,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{example1, example2, Example1Params, Example2Params};
    use crate::survival::exponential;
    use crate::testutil::{assert_close, test_rng};
    use rand::Rng;

    const EXP_NEG_1: f64 = 0.36787944117144233;

    fn grid() -> TimeGrid {
        TimeGrid::standard(120.0)
    }

    #[test]
    fn st_order_is_reflexive_with_zero_margin() {
        let f = exponential(1.0).unwrap();
        let r = check_st_order(&f, &f, &grid());
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.margin, 0.0);
        assert!(r.witness_t.is_none());
        assert_eq!(r.grid_size, grid().len());
    }

    #[test]
    fn st_order_detects_violations_with_witness() {
        // e^{-2t} < e^{-t} for every t > 0, so exp(2) is NOT above exp(1).
        let lower = exponential(1.0).unwrap();
        let upper = exponential(2.0).unwrap();
        let r = check_st_order(&lower, &upper, &grid());
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness_t.expect("failing report carries a witness");
        assert!(w > 0.0);
        assert!(r.margin < -POINTWISE_TOL);
    }

    #[test]
    fn st_order_holds_for_example1_components() {
        let q = example1(&Example1Params::new(1.0, 0.5).unwrap()).unwrap();
        assert!(check_st_order(&q.f1, &q.g1, &grid()).holds());
        assert!(check_st_order(&q.f2, &q.g2, &grid()).holds());
    }

    #[test]
    fn paradox_conditions_reduce_to_mixture_gain_when_g_equals_f() {
        let f1 = exponential(1.0).unwrap();
        let f2 = exponential(2.0).unwrap();
        let r = check_paradox_conditions(&f1, &f2, &f1, &f2, &grid());
        assert!(r.condition_i.holds());
        assert!(r.condition_ii.holds());
        assert_eq!(r.condition_ii.margin, 0.0);
    }

    #[test]
    fn paradox_conditions_hold_for_both_examples() {
        let q1 = example1(&Example1Params::new(1.0, 0.5).unwrap()).unwrap();
        let r1 = check_paradox_conditions(&q1.f1, &q1.f2, &q1.g1, &q1.g2, &grid());
        assert!(r1.both_hold(), "example1: {r1:?}");

        let q2 = example2(&Example2Params::new(1.0, 0.5).unwrap()).unwrap();
        let r2 = check_paradox_conditions(&q2.f1, &q2.f2, &q2.g1, &q2.g2, &grid());
        assert!(r2.both_hold(), "example2: {r2:?}");
    }

    #[test]
    fn feasibility_collapses_when_components_match() {
        let f = exponential(1.0).unwrap();
        let p = feasibility_point(&f, &f, &f, &f, 2.0).unwrap();
        assert_eq!(p.a, 0.0);
        assert_eq!(p.x1, 0.0);
        assert!(p.is_feasible(POINTWISE_TOL));
        // With A = 0, any genuinely positive x is infeasible.
        let g2 = SurvivalFunction::new("above", 24.0, |t| ((1.0 + t) * (-t).exp()).min(1.0)).unwrap();
        let p = feasibility_point(&f, &f, &f, &g2, 2.0).unwrap();
        assert!(p.x2 > 0.0);
        assert!(!p.is_feasible(POINTWISE_TOL));
    }

    #[test]
    fn feasibility_example_value() {
        // A(1) = (e^{-1} − 2e^{-1})² / (4·e^{-1}·2e^{-1}) = 1/8.
        let q = example1(&Example1Params::new(1.0, 0.5).unwrap()).unwrap();
        let p = feasibility_point(&q.f1, &q.f2, &q.g1, &q.g2, 1.0).unwrap();
        assert_close(p.a, 0.125, 1e-12);
    }

    #[test]
    fn feasibility_underflow_is_an_error() {
        let f = exponential(1.0).unwrap();
        assert!(matches!(
            feasibility_point(&f, &f, &f, &f, 800.0),
            Err(SurvivalError::Underflow { .. })
        ));
    }

    #[test]
    fn hyperbola_predicate_matches_direct_conditions() {
        let mut rng = test_rng(17);
        let grid = grid();
        for _ in 0..64 {
            let lambda = 0.3 + rng.random::<f64>() * 2.7;
            let nu = rng.random::<f64>() * lambda;
            let q = if rng.random::<f64>() < 0.5 {
                example1(&Example1Params::new(lambda, nu).unwrap()).unwrap()
            } else {
                example2(&Example2Params::new(lambda, nu).unwrap()).unwrap()
            };
            // Exercise infeasible cases too by swapping the roles of F and G.
            let (f1, f2, g1, g2) = if rng.random::<f64>() < 0.5 {
                (&q.f1, &q.f2, &q.g1, &q.g2)
            } else {
                (&q.g1, &q.g2, &q.f1, &q.f2)
            };
            for _ in 0..20 {
                let t = grid.points()[rng.random_range(0..grid.len())];
                let Ok(p) = feasibility_point(f1, f2, g1, g2, t) else {
                    continue;
                };
                assert_eq!(
                    p.is_feasible(POINTWISE_TOL),
                    direct_conditions_at(f1, f2, g1, g2, t, POINTWISE_TOL),
                    "disagreement at t = {t} (λ = {lambda}, ν = {nu})"
                );
            }
        }
    }

    #[test]
    fn family_a_bound_squeezes_when_components_match() {
        let f = exponential(1.0).unwrap();
        let env = sufficient_family_a_bound(&f, &f);
        for t in [0.0, 0.5, 2.0, 5.0] {
            assert_close(env.eval(t), f.eval(t), 1e-15);
        }
    }

    #[test]
    fn family_a_bound_example_value() {
        // (e^{-1} + 2e^{-1})²/(4e^{-1}) = 2.25·e^{-1}.
        let q = example1(&Example1Params::new(1.0, 0.5).unwrap()).unwrap();
        let env = sufficient_family_a_bound(&q.f1, &q.f2);
        assert_close(env.eval(1.0), 2.25 * EXP_NEG_1, 1e-14);
        assert_close(env.eval(1.0), 0.8277287426357452, 1e-14);
    }

    #[test]
    fn example1_g2_lies_inside_family_a_band() {
        for nu in [0.0, 0.5, 1.0] {
            let q = example1(&Example1Params::new(1.0, nu).unwrap()).unwrap();
            let env = sufficient_family_a_bound(&q.f1, &q.f2);
            for &t in grid().points() {
                let g2 = q.g2.eval(t);
                assert!(g2 >= q.f2.eval(t) - 1e-12, "below F̄₂ at t={t}, ν={nu}");
                assert!(g2 <= env.eval(t) + 1e-12, "above envelope at t={t}, ν={nu}");
            }
        }
    }

    #[test]
    fn family_b_bound_example_value() {
        // With u(t) = 1 + t/2: envelope(1) = 1.5·(1+1.5²)/2·e^{-1} = 2.4375·e^{-1}.
        let q = example2(&Example2Params::new(1.0, 0.5).unwrap()).unwrap();
        let env = sufficient_family_b_bound(&q.f1, &q.f2);
        assert_close(env.eval(1.0), 2.4375 * EXP_NEG_1, 1e-14);
        assert_close(env.eval(1.0), 0.8967061378553907, 1e-14);
    }

    #[test]
    fn example2_g1_lies_inside_family_b_band() {
        for nu in [0.0, 0.5, 1.0] {
            let q = example2(&Example2Params::new(1.0, nu).unwrap()).unwrap();
            let env = sufficient_family_b_bound(&q.f1, &q.f2);
            for &t in grid().points() {
                let g1 = q.g1.eval(t);
                assert!(g1 >= q.f1.eval(t) - 1e-12, "below F̄₁ at t={t}, ν={nu}");
                assert!(g1 <= env.eval(t) + 1e-12, "above envelope at t={t}, ν={nu}");
            }
        }
    }

    #[test]
    fn curves_strictly_inside_the_bands_are_sound() {
        let q = example1(&Example1Params::new(1.0, 0.5).unwrap()).unwrap();
        let grid = grid();

        // Family (a): Ḡ₂ as the geometric mean of the band edges, Ḡ₁ = F̄₁.
        let env_a = sufficient_family_a_bound(&q.f1, &q.f2);
        let g2 = {
            let lo = q.f2.eval_fn();
            SurvivalFunction::new("geo-mean-a", q.f2.support_hint(), move |t| {
                (lo(t) * env_a.eval(t)).sqrt()
            })
            .unwrap()
        };
        let r = check_paradox_conditions(&q.f1, &q.f2, &q.f1, &g2, &grid);
        assert!(r.both_hold(), "family (a) interior point: {r:?}");

        // Family (b): Ḡ₁ as the geometric mean of its band, Ḡ₂ = Ḡ₁·F̄₂/F̄₁.
        let env_b = sufficient_family_b_bound(&q.f1, &q.f2);
        let g1 = {
            let lo = q.f1.eval_fn();
            SurvivalFunction::new("geo-mean-b", q.f1.support_hint(), move |t| {
                (lo(t) * env_b.eval(t)).sqrt()
            })
            .unwrap()
        };
        let g2 = {
            let (e1, e2) = (q.f1.eval_fn(), q.f2.eval_fn());
            let g1 = g1.clone();
            SurvivalFunction::new("geo-mean-b-partner", q.f2.support_hint(), move |t| {
                g1.eval(t) * e2(t) / e1(t)
            })
            .unwrap()
        };
        let r = check_paradox_conditions(&q.f1, &q.f2, &g1, &g2, &grid);
        assert!(r.both_hold(), "family (b) interior point: {r:?}");
    }

    #[test]
    fn bound_promotion_validates_monotonicity() {
        let q = example1(&Example1Params::new(1.0, 0.5).unwrap()).unwrap();
        // The family-(a) envelope of Example 1 is a genuine survival function.
        let env = sufficient_family_a_bound(&q.f1, &q.f2);
        assert!(env.promote(q.f2.support_hint()).is_ok());
        // With a constant unit the family-(b) envelope (1+e^{-t})/2·e^{t/2}
        // grows without bound and must be rejected.
        let flat = SurvivalFunction::new("flat", 24.0, |_| 1.0).unwrap();
        let env = sufficient_family_b_bound(&flat, &exponential(1.0).unwrap());
        assert!(env.promote(24.0).is_err());
    }

    #[test]
    fn necessary_conditions_hold_for_example1() {
        let q = example1(&Example1Params::new(1.0, 0.5).unwrap()).unwrap();
        let r = necessary_conditions(&q.f1, &q.f2, &q.g1, &q.g2);
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.margin >= -DERIVATIVE_TOL);
    }

    #[test]
    fn necessary_conditions_fail_on_mismatched_rates() {
        // exp(1) vs exp(0.5): densities at zero are 1 and 0.5.
        let f1 = exponential(1.0).unwrap();
        let g1 = exponential(0.5).unwrap();
        let f2 = exponential(1.0).unwrap();
        let r = necessary_conditions(&f1, &f2, &g1, &f2);
        assert_eq!(r.verdict, Verdict::Fails);
        assert_close(r.margin, -0.5, 1e-9);
        assert_eq!(r.witness_t, Some(0.0));
    }

    #[test]
    fn necessary_conditions_report_inconclusive_for_rough_curves() {
        // F̄(t) = max(1 − √t, ε): the density blows up at 0, the forward
        // difference cannot stabilize.
        let rough =
            SurvivalFunction::new("rough", 1.0, |t: f64| (1.0 - t.sqrt()).max(1e-12)).unwrap();
        let f = exponential(1.0).unwrap();
        let r = necessary_conditions(&rough, &f, &rough, &f);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn hazard_identity_holds_trivially_for_identical_pairs() {
        let f1 = exponential(1.0).unwrap();
        let f2 = exponential(2.0).unwrap();
        let r = hazard_identity_check(&f1, &f2, &f1, &f2, &grid());
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.margin, 0.0);
        assert_eq!(r.skipped, 0);
    }

    #[test]
    fn hazard_identity_holds_for_example2() {
        let q = example2(&Example2Params::new(1.0, 0.5).unwrap()).unwrap();
        let r = hazard_identity_check(&q.f1, &q.f2, &q.g1, &q.g2, &grid());
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
    }

    #[test]
    fn hazard_identity_detects_broken_ratio() {
        // Scaling Ḡ₁ by e^{-0.1t} shifts its hazard by +0.1 while Δh₂ stays 0.
        let q = example2(&Example2Params::new(1.0, 0.5).unwrap()).unwrap();
        let g1 = {
            let e = q.g1.eval_fn();
            SurvivalFunction::new("skewed", q.g1.support_hint(), move |t| e(t) * (-0.1 * t).exp())
                .unwrap()
        };
        let r = hazard_identity_check(&q.f1, &q.f2, &g1, &q.g2, &grid());
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.witness_t.is_some());
    }
}
