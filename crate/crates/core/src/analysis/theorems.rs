//! Pointwise checks of the qualitative properties of minimal curves through
//! the origin with `θ₀ ∈ (0, π/4)`.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use super::classify::inflection_points;
use crate::error::{Error, Result};
use crate::ode::{Sample, Trajectory};

/// Allowed mismatch between the state at `-s` and the reflected state at `s`.
pub const SYMMETRY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub first_violation_s: Option<f64>,
    /// Samples examined.
    pub checked: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub checks: Vec<PropertyCheck>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check<'a, I, F>(name: &'static str, samples: I, ok: F) -> PropertyCheck
where
    I: IntoIterator<Item = &'a Sample>,
    F: Fn(&Sample) -> bool,
{
    let mut checked = 0;
    for p in samples {
        checked += 1;
        if !ok(p) {
            return PropertyCheck {
                name,
                passed: false,
                first_violation_s: Some(p.s()),
                checked,
            };
        }
    }
    PropertyCheck {
        name,
        passed: true,
        first_violation_s: None,
        checked,
    }
}

pub fn theorem_checks(traj: &Trajectory) -> Result<TheoremReport> {
    let ic = traj.ic();
    if !traj.system().is_minimal() || ic.x0 != 0.0 || ic.y0 != 0.0 {
        return Err(Error::Precondition(
            "theorem checks need a minimal trajectory starting at the origin".into(),
        ));
    }
    if !(ic.theta0 > 0.0 && ic.theta0 < FRAC_PI_4) {
        return Err(Error::Precondition(format!(
            "theorem checks need θ0 in (0, π/4), got {}",
            ic.theta0
        )));
    }
    let positive = &traj.forward()[1..];

    let monotone = check("monotone", positive, |p| {
        let (sin, cos) = p.state.theta.sin_cos();
        sin > 0.0 && cos > 0.0
    });
    let concave = check("concave", positive.iter().filter(|p| p.state.x > 0.0), |p| {
        p.state.y * p.state.theta.tan() - p.state.x < 0.0
    });
    let below_diagonal = check("below_diagonal", positive, |p| p.state.y < p.state.x);
    let symmetric = check("origin_symmetric", positive, |p| match traj.state_at(-p.s()) {
        Ok(q) => {
            (q.state.x + p.state.x).abs() <= SYMMETRY_TOL
                && (q.state.y + p.state.y).abs() <= SYMMETRY_TOL
                && (q.state.theta - p.state.theta).abs() <= SYMMETRY_TOL
        }
        Err(_) => false,
    });

    let roots = inflection_points(traj)?;
    let tol = traj.settings().event_tol;
    let unique_inflection = PropertyCheck {
        name: "unique_inflection_at_origin",
        passed: roots.len() == 1 && roots[0].abs() <= tol,
        first_violation_s: roots.iter().copied().find(|s| s.abs() > tol),
        checked: traj.samples().len(),
    };

    Ok(TheoremReport {
        checks: vec![monotone, concave, below_diagonal, symmetric, unique_inflection],
    })
}
