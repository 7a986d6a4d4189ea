//! Built-in parametric families that exhibit the reliability reversal.
//!
//! Both families are indexed by a rate λ > 0 and a knob 0 ≤ ν ≤ λ that
//! interpolates between the two degenerate edges of the feasibility band:
//!
//! * [`example1`] — one-sided family: Ḡ₁ = F̄₁ = e^{−λt},
//!   F̄₂ = (1+λt)e^{−λt}, and Ḡ₂ = [(1+λt/2)² − (νt/2)²]e^{−λt} slides from
//!   the upper envelope (ν = 0) down to F̄₂ (ν = λ).
//! * [`example2`] — equal-ratio family built from the generator
//!   u(t) = 1 + λt/2: F̄₁ = u²e^{−λt}, F̄₂ = e^{−λt}, with Ḡ₁, Ḡ₂ chosen so
//!   Ḡ₁/F̄₁ = Ḡ₂/F̄₂ identically.
//!
//! [`example2_custom`] accepts an arbitrary generator u with u(0) = 1 and
//! u′(t) ≤ λ·u(t)/2 (checked numerically on the grid) and places Ḡ₁ anywhere
//! inside the admissible band.
//!
//! All constructors validate their outputs as survival functions on a grid
//! and fail loudly with a witness time if a parameter choice breaks
//! monotonicity.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::grid::TimeGrid;
use crate::survival::{
    estimate_support, exponential, mixture_system_survival, series, MixtureSystem,
    SurvivalError, SurvivalFunction,
};

#[derive(Debug, Clone, Error)]
pub enum ModelError {
    #[error("invalid parameter {name} = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("generator must satisfy u(0) = 1, got {value}")]
    GeneratorNotNormalized { value: f64 },
    #[error("generator growth condition u'(t) ≤ λ·u(t)/2 violated at t = {t}: u' = {derivative}, bound = {bound}")]
    GrowthCondition { t: f64, derivative: f64, bound: f64 },
    #[error(transparent)]
    Survival(#[from] SurvivalError),
}

fn validate_rates(lambda: f64, nu: f64) -> Result<(), ModelError> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(ModelError::InvalidParameter {
            name: "lambda",
            value: lambda,
            constraint: "must be positive and finite",
        });
    }
    if !nu.is_finite() || nu < 0.0 || nu > lambda {
        return Err(ModelError::InvalidParameter {
            name: "nu",
            value: nu,
            constraint: "must satisfy 0 ≤ ν ≤ λ",
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub struct Example1Params {
    lambda: f64,
    nu: f64,
}

impl Example1Params {
    pub fn new(lambda: f64, nu: f64) -> Result<Self, ModelError> {
        validate_rates(lambda, nu)?;
        Ok(Self { lambda, nu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Example2Params {
    lambda: f64,
    nu: f64,
}

impl Example2Params {
    pub fn new(lambda: f64, nu: f64) -> Result<Self, ModelError> {
        validate_rates(lambda, nu)?;
        Ok(Self { lambda, nu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// Component survival functions of the two systems under comparison.
#[derive(Debug, Clone)]
pub struct Quadruple {
    pub f1: SurvivalFunction,
    pub f2: SurvivalFunction,
    pub g1: SurvivalFunction,
    pub g2: SurvivalFunction,
}

/// Addressable systems derived from a [`Quadruple`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SystemId {
    /// Series system of F̄₁, F̄₂ (deterministic allocation).
    X,
    /// Series system of Ḡ₁, Ḡ₂.
    Y,
    /// Series system of two equal-probability mixed units of F̄₁, F̄₂.
    XStar,
    F1,
    F2,
    G1,
    G2,
}

impl Quadruple {
    /// Survival of the first system under deterministic allocation.
    pub fn x_survival(&self) -> SurvivalFunction {
        series(&self.f1, &self.f2)
    }

    /// Survival of the second system.
    pub fn y_survival(&self) -> SurvivalFunction {
        series(&self.g1, &self.g2)
    }

    /// Survival of the first system under randomized unit selection.
    pub fn x_star_survival(&self) -> SurvivalFunction {
        mixture_system_survival(&MixtureSystem::equal(self.f1.clone(), self.f2.clone()))
    }

    pub fn system(&self, id: SystemId) -> SurvivalFunction {
        match id {
            SystemId::X => self.x_survival(),
            SystemId::Y => self.y_survival(),
            SystemId::XStar => self.x_star_survival(),
            SystemId::F1 => self.f1.clone(),
            SystemId::F2 => self.f2.clone(),
            SystemId::G1 => self.g1.clone(),
            SystemId::G2 => self.g2.clone(),
        }
    }

    /// The standard verification grid for this quadruple, spanning five times
    /// the largest component support hint.
    pub fn default_grid(&self) -> TimeGrid {
        let hint = self
            .f1
            .support_hint()
            .max(self.f2.support_hint())
            .max(self.g1.support_hint())
            .max(self.g2.support_hint());
        TimeGrid::standard(5.0 * hint)
    }
}

/// The built-in families addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelFamily {
    Example1,
    Example2,
}

impl ModelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ModelFamily::Example1 => "example1",
            ModelFamily::Example2 => "example2",
        }
    }

    pub fn build(&self, lambda: f64, nu: f64) -> Result<Quadruple, ModelError> {
        match self {
            ModelFamily::Example1 => example1(&Example1Params::new(lambda, nu)?),
            ModelFamily::Example2 => example2(&Example2Params::new(lambda, nu)?),
        }
    }
}

/// One-sided family: Ḡ₁ = F̄₁ = e^{−λt}, F̄₂ = (1+λt)e^{−λt},
/// Ḡ₂ = [(1+λt/2)² − (νt/2)²]e^{−λt}.
///
/// All four carry analytic densities; Ḡ₂ is additionally validated as
/// nonincreasing on the standard grid.
pub fn example1(params: &Example1Params) -> Result<Quadruple, ModelError> {
    let l = params.lambda;
    let nu = params.nu;
    let tag = format!("λ={l}, ν={nu}");

    let f1 = exponential(l)?.with_label(format!("example1.F1({tag})"));
    let g1 = f1.clone().with_label(format!("example1.G1({tag})"));

    let hint = 35.0 / l;
    let f2 = SurvivalFunction::new(format!("example1.F2({tag})"), hint, move |t| {
        (1.0 + l * t) * (-l * t).exp()
    })?
    .with_density(move |t| l * l * t * (-l * t).exp());

    // Ḡ₂ = q(t)e^{−λt} with q = 1 + λt + c·t², c = (λ²−ν²)/4, so the density
    // is [λq − q′]e^{−λt} = [(λ²+ν²)/2·t + λc·t²]e^{−λt}.
    let c = (l * l - nu * nu) / 4.0;
    let g2 = SurvivalFunction::new(format!("example1.G2({tag})"), hint, move |t| {
        let a = 1.0 + 0.5 * l * t;
        let b = 0.5 * nu * t;
        (a * a - b * b) * (-l * t).exp()
    })?
    .with_density(move |t| (0.5 * (l * l + nu * nu) * t + l * c * t * t) * (-l * t).exp());

    for sf in [&f1, &f2, &g1, &g2] {
        sf.validate_on_grid(&sf.validation_grid())?;
    }
    Ok(Quadruple { f1, f2, g1, g2 })
}

/// Analytic means of the three systems of [`example1`]:
/// E(X) = 3/(4λ), E(Y) = 13/(16λ) − (1/(16λ))(ν/λ)², E(X*) = 13/(16λ).
#[derive(Debug, Clone, Copy)]
pub struct SystemMeans {
    pub x: f64,
    pub y: f64,
    pub x_star: f64,
}

pub fn example1_system_means(params: &Example1Params) -> SystemMeans {
    let l = params.lambda;
    let r = params.nu / l;
    SystemMeans {
        x: 3.0 / (4.0 * l),
        y: 13.0 / (16.0 * l) - r * r / (16.0 * l),
        x_star: 13.0 / (16.0 * l),
    }
}

/// Equal-ratio family from the generator u(t) = 1 + λt/2:
/// F̄₁ = u²e^{−λt}, F̄₂ = e^{−λt},
/// Ḡ₁ = u·[u + (νt)²/8]e^{−λt}, Ḡ₂ = [1 + ((νt)²/8)/u]e^{−λt},
/// so that Ḡ₁/F̄₁ = Ḡ₂/F̄₂ identically.
pub fn example2(params: &Example2Params) -> Result<Quadruple, ModelError> {
    let l = params.lambda;
    let nu = params.nu;
    let tag = format!("λ={l}, ν={nu}");
    let hint = 40.0 / l;

    let f1 = SurvivalFunction::new(format!("example2.F1({tag})"), hint, move |t| {
        let u = 1.0 + 0.5 * l * t;
        u * u * (-l * t).exp()
    })?
    .with_density(move |t| 0.5 * l * l * t * (1.0 + 0.5 * l * t) * (-l * t).exp());

    let f2 = exponential(l)?.with_label(format!("example2.F2({tag})"));

    let g1 = SurvivalFunction::new(format!("example2.G1({tag})"), hint, move |t| {
        let u = 1.0 + 0.5 * l * t;
        let v = u + nu * nu * t * t / 8.0;
        u * v * (-l * t).exp()
    })?
    .with_density(move |t| {
        let u = 1.0 + 0.5 * l * t;
        let v = u + nu * nu * t * t / 8.0;
        let du = 0.5 * l;
        let dv = 0.5 * l + 0.25 * nu * nu * t;
        (l * u * v - du * v - u * dv) * (-l * t).exp()
    });

    // Ḡ₂ = (1 + w)e^{−λt} with w = ν²t²/(8 + 4λt);
    // w′ = ν²t(16 + 4λt)/(8 + 4λt)².
    let g2 = SurvivalFunction::new(format!("example2.G2({tag})"), hint, move |t| {
        let w = nu * nu * t * t / (8.0 + 4.0 * l * t);
        (1.0 + w) * (-l * t).exp()
    })?
    .with_density(move |t| {
        let denom = 8.0 + 4.0 * l * t;
        let w = nu * nu * t * t / denom;
        let dw = nu * nu * t * (16.0 + 4.0 * l * t) / (denom * denom);
        (l * (1.0 + w) - dw) * (-l * t).exp()
    });

    for sf in [&f1, &f2, &g1, &g2] {
        sf.validate_on_grid(&sf.validation_grid())?;
    }
    Ok(Quadruple { f1, f2, g1, g2 })
}

/// Equal-ratio family from a user-supplied generator.
///
/// `u` must be non-negative with u(0) = 1 and satisfy the growth condition
/// u′(t) ≤ λ·u(t)/2, verified by central differences on the grid.
/// `g1_selector ∈ [0, 1]` places Ḡ₁ inside the admissible band: 0 is the
/// lower edge F̄₁ = u²e^{−λt}, 1 the upper envelope u·(1+u²)/2·e^{−λt}; then
/// Ḡ₂ = Ḡ₁/u². Outputs are validated as survival functions, so a selector
/// that makes the band edge non-monotone is rejected with a witness.
pub fn example2_custom(
    u: impl Fn(f64) -> f64 + Send + Sync + 'static,
    g1_selector: f64,
    lambda: f64,
) -> Result<Quadruple, ModelError> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(ModelError::InvalidParameter {
            name: "lambda",
            value: lambda,
            constraint: "must be positive and finite",
        });
    }
    if !g1_selector.is_finite() || !(0.0..=1.0).contains(&g1_selector) {
        return Err(ModelError::InvalidParameter {
            name: "g1_selector",
            value: g1_selector,
            constraint: "must lie in [0, 1]",
        });
    }
    let u = Arc::new(u);
    let at_zero = u(0.0);
    if !at_zero.is_finite() || (at_zero - 1.0).abs() > 1e-9 {
        return Err(ModelError::GeneratorNotNormalized { value: at_zero });
    }

    let l = lambda;
    let s = g1_selector;

    // F̄₁ = (u·e^{−λt/2})², factored so boundary generators like e^{λt/2}
    // evaluate without overflow.
    let f1_eval = {
        let u = Arc::clone(&u);
        move |t: f64| {
            let m = u(t) * (-0.5 * l * t).exp();
            m * m
        }
    };
    let (hint1, cap1) = estimate_support(&f1_eval, 24.0 / l);
    let grid1 = TimeGrid::standard((5.0 * hint1).min(cap1));

    // Growth condition on the grid, with slack for the finite differences so
    // the boundary case u = e^{λt/2} passes.
    for &t in grid1.points() {
        let ut = u(t);
        if !ut.is_finite() || ut < 0.0 {
            return Err(ModelError::InvalidParameter {
                name: "u(t)",
                value: ut,
                constraint: "generator must stay non-negative and finite",
            });
        }
        let h = 1e-6 * t.max(1.0);
        let derivative = if t >= h {
            (u(t + h) - u(t - h)) / (2.0 * h)
        } else {
            (u(t + h) - ut) / h
        };
        let bound = 0.5 * l * ut;
        if derivative > bound + 1e-6 * bound.abs().max(1.0) {
            return Err(ModelError::GrowthCondition {
                t,
                derivative,
                bound,
            });
        }
    }

    let f1 = SurvivalFunction::new(format!("example2_custom.F1(λ={l})"), hint1, f1_eval)?;
    f1.validate_on_grid(&grid1)?;

    let f2 = exponential(l)?.with_label(format!("example2_custom.F2(λ={l})"));

    // Ḡ₁ = (1−s)·u²e^{−λt} + s·(u + u³)/2·e^{−λt}, with u^k·e^{−λt} factored
    // as powers of u·e^{−λt/k} to dodge intermediate overflow.
    let g1_eval = {
        let u = Arc::clone(&u);
        move |t: f64| {
            let a = u(t);
            let m = a * (-0.5 * l * t).exp();
            let w = a * (-l * t / 3.0).exp();
            (1.0 - s) * m * m + s * 0.5 * (m * (-0.5 * l * t).exp() + w * w * w)
        }
    };
    let (hint_g1, cap_g1) = estimate_support(&g1_eval, 24.0 / l);
    let g1 = SurvivalFunction::new(format!("example2_custom.G1(λ={l})"), hint_g1, g1_eval)?;
    g1.validate_on_grid(&TimeGrid::standard((5.0 * hint_g1).min(cap_g1)))?;

    // Ḡ₂ = Ḡ₁/u² = (1−s)e^{−λt} + s·(1/u + u)/2·e^{−λt}.
    let g2_eval = {
        let u = Arc::clone(&u);
        move |t: f64| {
            let a = u(t);
            let e = (-l * t).exp();
            let m = a * (-0.5 * l * t).exp();
            (1.0 - s) * e + s * 0.5 * (e / a + m * (-0.5 * l * t).exp())
        }
    };
    let (hint_g2, cap_g2) = estimate_support(&g2_eval, 24.0 / l);
    let g2 = SurvivalFunction::new(format!("example2_custom.G2(λ={l})"), hint_g2, g2_eval)?;
    g2.validate_on_grid(&TimeGrid::standard((5.0 * hint_g2).min(cap_g2)))?;

    Ok(Quadruple { f1, f2, g1, g2 })
}
