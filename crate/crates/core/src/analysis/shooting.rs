//! Closed constant-mean-curvature generating curves by shooting on `y₀`.
//!
//! Starting from `(0, y₀, 0)`, the unwrapped angle of a curve with `H > 0`
//! decreases; the first return is where it reaches `-2π` (or `+2π` for
//! `H < 0`). The control residual is `x` at that point. The residual in `y`
//! is measured afterwards and only certifies closure.

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{
    find_event, integrate_forward, ConstantMeanCurvature, CurveSystem, InitialCondition, OdeSettings, Sample,
    Trajectory,
};

/// Unwrapped angle at which a curve starting at `theta0` has turned once.
fn return_angle(theta0: f64, h: Option<f64>) -> f64 {
    match h {
        Some(h) if h < 0.0 => theta0 + TAU,
        _ => theta0 - TAU,
    }
}

/// First `s > 0` at which the tangent has made one full turn.
pub fn first_return(traj: &Trajectory) -> Option<(f64, Sample)> {
    let target = return_angle(traj.ic().theta0, traj.h_target());
    let s1 = find_event(traj, |p| p.state.theta - target)?;
    traj.state_at(s1).ok().map(|p| (s1, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ShootingSettings {
    /// Convergence threshold on `|x(s₁)|`.
    pub x_tol: f64,
    /// Certification threshold on the final closure residuals.
    pub closure_tol: f64,
    pub max_iter: usize,
    /// Geometric scan for a bracket when none is given, in `|y₀|`.
    pub scan_lo: f64,
    pub scan_hi: f64,
    pub scan_points: usize,
}

impl Default for ShootingSettings {
    fn default() -> Self {
        Self {
            x_tol: 1e-10,
            closure_tol: 1e-6,
            max_iter: 200,
            scan_lo: 1.0 / 16.0,
            scan_hi: 4.0,
            scan_points: 25,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShootingResult {
    pub h: f64,
    pub y0_star: f64,
    pub s1: f64,
    pub residual_x: f64,
    pub residual_y: f64,
    pub iterations: usize,
    /// One period, `s ∈ [0, s₁]`.
    pub trajectory: Trajectory,
}

struct Shooter {
    system: Arc<dyn CurveSystem>,
    settings: OdeSettings,
}

impl Shooter {
    fn ic(y0: f64) -> InitialCondition {
        InitialCondition::new(0.0, y0, 0.0)
    }

    /// Trajectory up to just past the first return, or `None` if there is none.
    fn shoot(&self, y0: f64) -> Option<(Trajectory, f64, Sample)> {
        let target = return_angle(0.0, self.system.mean_curvature_target());
        let sign = (target - 0.0).signum();
        let tr = integrate_forward(self.system.clone(), Self::ic(y0), &self.settings, |p| {
            (p.state.theta - target) * sign >= 0.0
        })
        .ok()?;
        let (s1, p) = first_return(&tr)?;
        Some((tr, s1, p))
    }

    fn residual(&self, y0: f64) -> Option<f64> {
        self.shoot(y0).map(|(_, _, p)| p.state.x)
    }
}

fn bracket_error(lo: f64, hi: f64, rlo: Option<f64>, rhi: Option<f64>) -> Error {
    Error::Bracket {
        lo,
        hi,
        residual_lo: rlo,
        residual_hi: rhi,
    }
}

fn opposite(a: f64, b: f64) -> bool {
    (a > 0.0) != (b > 0.0) || a == 0.0 || b == 0.0
}

fn scan_bracket(shooter: &Shooter, h: f64, cfg: &ShootingSettings) -> Result<(f64, f64, f64, f64)> {
    let n = cfg.scan_points.max(2);
    let ratio = (cfg.scan_hi / cfg.scan_lo).powf(1.0 / (n - 1) as f64);
    let sign = h.signum();
    let grid: Vec<f64> = (0..n).map(|k| sign * cfg.scan_lo * ratio.powi(k as i32)).collect();
    let mut prev: Option<(f64, f64)> = None;
    for &y0 in &grid {
        let r = shooter.residual(y0);
        if let (Some((yp, rp)), Some(r)) = (prev, r) {
            if opposite(rp, r) {
                return Ok((yp, y0, rp, r));
            }
        }
        prev = r.map(|r| (y0, r)).or(prev);
    }
    Err(bracket_error(
        grid[0],
        grid[n - 1],
        shooter.residual(grid[0]),
        shooter.residual(grid[n - 1]),
    ))
}

/// Searches for `y₀*` with `x(s₁; y₀*) = 0`; returns the first root in the bracket.
pub fn closed_curve_search(
    h: f64,
    bracket: Option<(f64, f64)>,
    settings: &OdeSettings,
    cfg: &ShootingSettings,
) -> Result<ShootingResult> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::Precondition(format!(
            "closed curve search needs a finite H ≠ 0, got {h}"
        )));
    }
    settings.validate()?;
    let shooter = Shooter {
        system: Arc::new(ConstantMeanCurvature { h }),
        settings: *settings,
    };

    let (mut a, mut b, mut fa, mut fb) = match bracket {
        Some((lo, hi)) => {
            let (rlo, rhi) = (shooter.residual(lo), shooter.residual(hi));
            match (rlo, rhi) {
                (Some(fa), Some(fb)) if opposite(fa, fb) => (lo, hi, fa, fb),
                _ => return Err(bracket_error(lo, hi, rlo, rhi)),
            }
        }
        None => scan_bracket(&shooter, h, cfg)?,
    };

    // Illinois-modified regula falsi; falls back to bisection when a
    // residual is unavailable.
    let mut iterations = 0;
    let mut side = 0i8;
    let (mut y_star, mut f_star) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    while f_star.abs() >= cfg.x_tol && iterations < cfg.max_iter && (b - a).abs() > 1e-15 {
        iterations += 1;
        let secant = (a * fb - b * fa) / (fb - fa);
        let lo = a.min(b);
        let hi = a.max(b);
        let mut c = if secant.is_finite() && secant > lo && secant < hi {
            secant
        } else {
            0.5 * (a + b)
        };
        let fc = match shooter.residual(c) {
            Some(v) => v,
            None => {
                c = 0.5 * (a + b);
                match shooter.residual(c) {
                    Some(v) => v,
                    None => {
                        return Err(Error::IntegrationFailure {
                            last_good_s: 0.0,
                            reason: format!("no first return at y0 = {c} inside the bracket"),
                        })
                    }
                }
            }
        };
        y_star = c;
        f_star = fc;
        if opposite(fc, fb) {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            side = 0;
        } else {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }

    let (_, s1, _) = shooter.shoot(y_star).ok_or_else(|| Error::IntegrationFailure {
        last_good_s: 0.0,
        reason: format!("no first return at y0 = {y_star}"),
    })?;
    let period = integrate_forward(
        shooter.system.clone(),
        Shooter::ic(y_star),
        &OdeSettings { max_s: s1, ..*settings },
        |_| false,
    )?;
    let end = period.samples()[period.samples().len() - 1];
    let residual_x = end.state.x;
    let residual_y = end.state.y - y_star;
    if !(residual_x.abs() < cfg.closure_tol && residual_y.abs() < cfg.closure_tol) {
        return Err(Error::NonClosing {
            y0_star: y_star,
            s1,
            residual_x,
            residual_y,
            iterations,
        });
    }
    Ok(ShootingResult {
        h,
        y0_star: y_star,
        s1,
        residual_x,
        residual_y,
        iterations,
        trajectory: period,
    })
}
