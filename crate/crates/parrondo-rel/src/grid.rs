//! Evaluation grids on the time axis.
//!
//! Pointwise claims of the form "for all t ≥ 0" are certified on finite grids
//! only; every report produced from a grid carries the grid size so callers
//! know the resolution of the certificate. The default ("mixed") grid is the
//! union of a linear grid on [0, t_max] and a log-spaced grid on
//! [[`LOG_GRID_FLOOR`], t_max], which covers both the bulk of the support and
//! the near-zero region where density-at-zero effects live.

use thiserror::Error;

/// Lower endpoint of the log-spaced part of a grid.
pub const LOG_GRID_FLOOR: f64 = 1e-6;

/// Point count of the default verification grid.
pub const DEFAULT_GRID_POINTS: usize = 2000;

/// How grid points are spaced on [0, t_max].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpacing {
    /// Evenly spaced points including both endpoints.
    Linear,
    /// Geometrically spaced points on [`LOG_GRID_FLOOR`, t_max].
    Log,
    /// Union of a linear and a log grid, sorted with duplicates removed.
    Mixed,
}

#[derive(Debug, Clone, Error)]
pub enum GridError {
    #[error("grid needs at least {min} points for {spacing:?} spacing, got {got}")]
    TooFewPoints {
        spacing: GridSpacing,
        min: usize,
        got: usize,
    },
    #[error("t_max must be positive, finite and above the log floor, got {0}")]
    InvalidTMax(f64),
    #[error("grid points must be finite, non-negative and strictly increasing")]
    InvalidPoints,
}

/// A sorted, non-negative, finite set of evaluation times.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(spacing: GridSpacing, t_max: f64, n: usize) -> Result<Self, GridError> {
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(GridError::InvalidTMax(t_max));
        }
        let min = match spacing {
            GridSpacing::Linear | GridSpacing::Log => 2,
            GridSpacing::Mixed => 4,
        };
        if n < min {
            return Err(GridError::TooFewPoints { spacing, min, got: n });
        }
        let points = match spacing {
            GridSpacing::Linear => linear_points(t_max, n),
            GridSpacing::Log => {
                if t_max <= LOG_GRID_FLOOR {
                    return Err(GridError::InvalidTMax(t_max));
                }
                log_points(t_max, n)
            }
            GridSpacing::Mixed => {
                if t_max <= LOG_GRID_FLOOR {
                    return Err(GridError::InvalidTMax(t_max));
                }
                let mut pts = linear_points(t_max, n / 2);
                pts.extend(log_points(t_max, n - n / 2));
                pts.sort_by(|a, b| a.partial_cmp(b).expect("finite grid points"));
                pts.dedup();
                pts
            }
        };
        Ok(Self { points })
    }

    /// The default 2000-point mixed grid on [0, t_max].
    pub fn standard(t_max: f64) -> Self {
        Self::new(GridSpacing::Mixed, t_max, DEFAULT_GRID_POINTS)
            .expect("standard grid parameters are valid")
    }

    /// Wraps an explicit list of times; must be sorted, finite, non-negative.
    pub fn from_points(points: Vec<f64>) -> Result<Self, GridError> {
        if points.is_empty() {
            return Err(GridError::InvalidPoints);
        }
        let ok = points.iter().all(|t| t.is_finite() && *t >= 0.0)
            && points.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(GridError::InvalidPoints);
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.points.last().expect("grid is nonempty")
    }
}

fn linear_points(t_max: f64, n: usize) -> Vec<f64> {
    let step = t_max / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { t_max } else { i as f64 * step })
        .collect()
}

fn log_points(t_max: f64, n: usize) -> Vec<f64> {
    let ratio = (t_max / LOG_GRID_FLOOR).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                t_max
            } else {
                LOG_GRID_FLOOR * (i as f64 * ratio).exp()
            }
        })
        .collect()
}
