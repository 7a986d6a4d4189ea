//! Expected lifetime by adaptive quadrature with a certified tail bound.
//!
//! For a non-negative lifetime with survival function F̄ the mean is the
//! improper integral E[T] = ∫₀^∞ F̄(t) dt. The integral is truncated at a
//! t_max found by doubling: starting from the support hint, t_max doubles
//! until F̄(t_max) < 1e-12 and the tail estimate F̄(t_max)·T_char falls below
//! the requested share of the integral, where T_char = 1/h(t_max) comes from
//! the local log-slope of F̄. For curves decaying like polynomial × exp the
//! estimate slightly overstates the true tail, which is the safe direction.
//!
//! [0, t_max] is integrated by adaptive 15-point Gauss–Kronrod bisection with
//! the classic QUADPACK error estimate.

use serde::Serialize;
use thiserror::Error;

use crate::survival::SurvivalFunction;

/// Survival level below which the tail search may stop.
const SURVIVAL_NEGLIGIBLE: f64 = 1e-12;
/// Cap on t_max doublings while hunting for an integrable tail.
const MAX_DOUBLINGS: u32 = 60;
/// Cap on bisection depth per segment.
const MAX_DEPTH: u32 = 48;
/// Seed segments, geometrically refined toward zero.
const SEED_SEGMENTS: u32 = 16;

#[derive(Debug, Clone, Error)]
pub enum QuadratureError {
    #[error("rel_tol {0} outside the supported range (1e-14, 1e-2)")]
    InvalidTolerance(f64),
    #[error("no integrable tail found up to t = {t_reached}; the mean may be infinite")]
    TailNotFound { t_reached: f64 },
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    NoConvergence { estimate: f64, error_bound: f64 },
}

/// Mean estimate with its certification data.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeanEstimate {
    /// The integral over [0, t_max].
    pub value: f64,
    /// Quadrature error estimate plus the discarded tail bound.
    pub error_bound: f64,
    /// Bound on the discarded tail ∫_{t_max}^∞ F̄.
    pub tail_bound: f64,
    /// Truncation point actually used.
    pub t_max: f64,
}

/// Expected lifetime within `rel_tol` relative error (for curves with an
/// eventually exponential-type decay).
pub fn mean_lifetime(f: &SurvivalFunction, rel_tol: f64) -> Result<f64, QuadratureError> {
    mean_lifetime_detailed(f, rel_tol).map(|m| m.value)
}

/// As [`mean_lifetime`], returning the truncation point and error bounds.
pub fn mean_lifetime_detailed(
    f: &SurvivalFunction,
    rel_tol: f64,
) -> Result<MeanEstimate, QuadratureError> {
    if !rel_tol.is_finite() || rel_tol <= 1e-14 || rel_tol >= 1e-2 {
        return Err(QuadratureError::InvalidTolerance(rel_tol));
    }
    let eval = |t: f64| f.eval(t);

    let mut t_max = f.support_hint();
    let mut chosen = None;
    for _ in 0..=MAX_DOUBLINGS {
        if f.eval(t_max) < SURVIVAL_NEGLIGIBLE {
            let rough = coarse_integral(&eval, t_max);
            let tail = tail_estimate(f, t_max);
            if tail <= 0.25 * rel_tol * rough.abs().max(f64::MIN_POSITIVE) {
                chosen = Some((rough, tail));
                break;
            }
        }
        t_max *= 2.0;
    }
    let Some((rough, tail_bound)) = chosen else {
        return Err(QuadratureError::TailNotFound { t_reached: t_max });
    };

    let mut abs_tol = (0.5 * rel_tol * rough.abs()).max(1e-300);
    let mut last = None;
    for _ in 0..2 {
        let (value, err) = adaptive_gk(&eval, t_max, abs_tol)?;
        if err + tail_bound <= rel_tol * value.abs().max(f64::MIN_POSITIVE) {
            return Ok(MeanEstimate {
                value,
                error_bound: err + tail_bound,
                tail_bound,
                t_max,
            });
        }
        last = Some((value, err));
        abs_tol /= 100.0;
    }
    let (estimate, err) = last.expect("at least one refinement attempt ran");
    Err(QuadratureError::NoConvergence {
        estimate,
        error_bound: err + tail_bound,
    })
}

/// Tail bound F̄(t)·T_char from the local log-slope, treating survival values
/// below 1e-300 as an exhausted tail and a non-decaying curve as unbounded.
fn tail_estimate(f: &SurvivalFunction, t: f64) -> f64 {
    let s = f.eval(t);
    if !(s > 1e-300) {
        return 0.0;
    }
    let h = 1e-6 * t.max(1.0);
    let (sm, sp) = (f.eval(t - h), f.eval(t + h));
    if !(sm > 0.0 && sp > 0.0) {
        return 0.0;
    }
    let hazard = (sm.ln() - sp.ln()) / (2.0 * h);
    if !hazard.is_finite() || hazard <= 0.0 {
        return f64::INFINITY;
    }
    s / hazard
}

/// Geometric segment boundaries 0, t·2^{1−n}, …, t/2, t. Clustering toward
/// zero keeps the coarse pass accurate when t_max dwarfs the decay scale.
fn seed_boundaries(t_max: f64) -> Vec<f64> {
    let mut b = Vec::with_capacity(SEED_SEGMENTS as usize + 1);
    b.push(0.0);
    for i in 1..=SEED_SEGMENTS {
        b.push(t_max * (2.0f64).powi(i as i32 - SEED_SEGMENTS as i32));
    }
    b
}

fn coarse_integral(eval: &impl Fn(f64) -> f64, t_max: f64) -> f64 {
    let bounds = seed_boundaries(t_max);
    bounds
        .windows(2)
        .map(|w| gk15(eval, w[0], w[1]).value)
        .sum()
}

struct Segment {
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
}

fn adaptive_gk(
    eval: &impl Fn(f64) -> f64,
    t_max: f64,
    abs_tol: f64,
) -> Result<(f64, f64), QuadratureError> {
    let bounds = seed_boundaries(t_max);
    let seg_tol = abs_tol / SEED_SEGMENTS as f64;
    let mut stack: Vec<Segment> = bounds
        .windows(2)
        .map(|w| Segment {
            a: w[0],
            b: w[1],
            tol: seg_tol,
            depth: 0,
        })
        .collect();

    let mut total = 0.0;
    let mut err_total = 0.0;
    while let Some(seg) = stack.pop() {
        let est = gk15(eval, seg.a, seg.b);
        let width = seg.b - seg.a;
        let unsplittable = width <= 1e-15 * (1.0 + seg.a.abs() + seg.b.abs());
        if est.error <= seg.tol || unsplittable {
            total += est.value;
            err_total += est.error;
            continue;
        }
        if seg.depth >= MAX_DEPTH {
            return Err(QuadratureError::NoConvergence {
                estimate: total + est.value,
                error_bound: err_total + est.error,
            });
        }
        let mid = 0.5 * (seg.a + seg.b);
        stack.push(Segment {
            a: seg.a,
            b: mid,
            tol: 0.5 * seg.tol,
            depth: seg.depth + 1,
        });
        stack.push(Segment {
            a: mid,
            b: seg.b,
            tol: 0.5 * seg.tol,
            depth: seg.depth + 1,
        });
    }
    Ok((total, err_total))
}

struct GkEstimate {
    value: f64,
    error: f64,
}

// 15-point Kronrod abscissae (positive half) with the embedded 7-point Gauss
// rule at the odd indices and the interval center. Values carry the full
// published precision; the compiler truncates to the nearest f64.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(eval: &impl Fn(f64) -> f64, a: f64, b: f64) -> GkEstimate {
    let hlgth = 0.5 * (b - a);
    let centr = 0.5 * (a + b);

    let fc = eval(centr);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];
    for j in 0..7 {
        let absc = hlgth * XGK[j];
        let f1 = eval(centr - absc);
        let f2 = eval(centr + absc);
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * hlgth;
    resabs *= hlgth.abs();
    resasc *= hlgth.abs();
    let mut error = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * 1.0f64.min((200.0 * error / resasc).powf(1.5));
    }
    let round = 50.0 * f64::EPSILON;
    if resabs > f64::MIN_POSITIVE / round {
        error = error.max(round * resabs);
    }
    GkEstimate { value, error }
}
