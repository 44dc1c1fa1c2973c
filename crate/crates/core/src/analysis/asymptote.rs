//! Axis-parallel asymptotes of minimal generating curves.
//!
//! Near an x-parallel asymptote `y → c` the angle equation linearizes to
//! `d(tan θ)/dx ≈ -2x tan θ / (1 + x² + c²)`, so `tan θ · (1 + x² + y²)` is
//! nearly constant and the remaining rise integrates in closed form:
//!
//! `c ≈ y + sign(x) tan θ (1 + x² + y²) atan(√(1 + y²) / |x|) / √(1 + y²)`.
//!
//! Each tail sample gives one such estimate; their mean is the offset and
//! their spread the uncertainty. The y-parallel case follows from the flip
//! `(x, y, θ) ↦ (y, x, π/2 - θ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{Sample, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    ParallelToX,
    ParallelToY,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub axis: Axis,
    pub offset: f64,
    /// Standard deviation of the per-sample estimates over the tail.
    pub uncertainty: f64,
}

impl Line {
    pub fn new(axis: Axis, offset: f64) -> Self {
        Self {
            axis,
            offset,
            uncertainty: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum End {
    Backward,
    Forward,
}

impl End {
    pub fn name(self) -> &'static str {
        match self {
            End::Backward => "backward",
            End::Forward => "forward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AsymptoteSettings {
    /// Fraction of each branch's arc length treated as its tail.
    pub tail_fraction: f64,
    /// Largest `|sin θ|` (resp. `|cos θ|`) over the tail for an x- (resp. y-) parallel end.
    pub settle_tol: f64,
    /// Largest spread of the offset estimates over the tail.
    pub spread_tol: f64,
}

impl Default for AsymptoteSettings {
    fn default() -> Self {
        Self {
            tail_fraction: 0.1,
            settle_tol: 0.05,
            spread_tol: 1e-3,
        }
    }
}

impl AsymptoteSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::InvalidSettings(format!(
                "tail_fraction must lie in (0, 1], got {}",
                self.tail_fraction
            )));
        }
        if !(self.settle_tol > 0.0 && self.spread_tol > 0.0) {
            return Err(Error::InvalidSettings("asymptote thresholds must be positive".into()));
        }
        Ok(())
    }
}

fn offset_x_parallel(p: &Sample) -> f64 {
    let q = &p.state;
    let a = (1.0 + q.y * q.y).sqrt();
    let g = 1.0 + q.x * q.x + q.y * q.y;
    q.y + q.x.signum() * q.theta.tan() * g * (a / q.x.abs()).atan() / a
}

fn offset_y_parallel(p: &Sample) -> f64 {
    let q = &p.state;
    let b = (1.0 + q.x * q.x).sqrt();
    let g = 1.0 + q.x * q.x + q.y * q.y;
    let (sin, cos) = q.theta.sin_cos();
    q.x + q.y.signum() * (cos / sin) * g * (b / q.y.abs()).atan() / b
}

fn tail(traj: &Trajectory, end: End, fraction: f64) -> &[Sample] {
    match end {
        End::Forward => {
            let fwd = traj.forward();
            let cut = (1.0 - fraction) * traj.s_max();
            let i = fwd.partition_point(|p| p.s() < cut);
            &fwd[i.min(fwd.len() - 1)..]
        }
        End::Backward => {
            let bwd = traj.backward();
            let cut = (1.0 - fraction) * traj.s_min();
            let i = bwd.partition_point(|p| p.s() <= cut);
            &bwd[..i.max(1)]
        }
    }
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Asymptote of one end of a trajectory.
pub fn end_asymptote(traj: &Trajectory, end: End, cfg: &AsymptoteSettings) -> Result<Line> {
    cfg.validate()?;
    let tail = tail(traj, end, cfg.tail_fraction);
    let dev_x = tail.iter().map(|p| p.state.theta.sin().abs()).fold(0.0, f64::max);
    let dev_y = tail.iter().map(|p| p.state.theta.cos().abs()).fold(0.0, f64::max);
    let (axis, deviation) = if dev_x <= dev_y {
        (Axis::ParallelToX, dev_x)
    } else {
        (Axis::ParallelToY, dev_y)
    };
    if deviation >= cfg.settle_tol {
        return Err(Error::NotSettled {
            end: end.name(),
            deviation,
        });
    }
    let estimates: Vec<f64> = tail
        .iter()
        .map(|p| match axis {
            Axis::ParallelToX => offset_x_parallel(p),
            Axis::ParallelToY => offset_y_parallel(p),
        })
        .collect();
    let (offset, uncertainty) = mean_std(&estimates);
    if uncertainty.is_nan() || uncertainty > cfg.spread_tol {
        return Err(Error::NotSettled {
            end: end.name(),
            deviation: uncertainty,
        });
    }
    Ok(Line {
        axis,
        offset,
        uncertainty,
    })
}

/// Asymptotes of the backward and forward ends, in that order.
pub fn asymptote_estimate_with(traj: &Trajectory, cfg: &AsymptoteSettings) -> Result<Vec<Line>> {
    Ok(vec![
        end_asymptote(traj, End::Backward, cfg)?,
        end_asymptote(traj, End::Forward, cfg)?,
    ])
}

pub fn asymptote_estimate(traj: &Trajectory, tail_fraction: f64) -> Result<Vec<Line>> {
    asymptote_estimate_with(
        traj,
        &AsymptoteSettings {
            tail_fraction,
            ..AsymptoteSettings::default()
        },
    )
}

/// Distance between two parallel lines.
pub fn slab_width(a: &Line, b: &Line) -> Result<f64> {
    if a.axis != b.axis {
        return Err(Error::AxisMismatch);
    }
    Ok((a.offset - b.offset).abs())
}
