use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use super::asymptote::{end_asymptote, AsymptoteSettings, End, Line};
use crate::error::{Error, Result};
use crate::ode::{find_roots, LineKind, Sample, Trajectory, SNAP_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    LineI,
    LineII,
    LineIII,
    LineIV,
    /// One x-parallel and one y-parallel asymptote, no inflection.
    TypeA,
    /// Two parallel asymptotes and a single inflection.
    TypeB,
    Undetermined,
}

impl From<LineKind> for CurveKind {
    fn from(k: LineKind) -> Self {
        match k {
            LineKind::I => CurveKind::LineI,
            LineKind::II => CurveKind::LineII,
            LineKind::III => CurveKind::LineIII,
            LineKind::IV => CurveKind::LineIV,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: CurveKind,
    pub inflection_s: Vec<f64>,
    pub asymptotes: Vec<Line>,
    /// Why the result is `Undetermined`, if it is.
    pub note: Option<String>,
}

fn require_minimal(traj: &Trajectory) -> Result<()> {
    if traj.system().is_minimal() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "expected a minimal trajectory, got system `{}`",
            traj.system().name()
        )))
    }
}

/// Line kind of a trajectory along which θ never moves.
fn constant_angle_line(traj: &Trajectory) -> Option<LineKind> {
    if let Some(k) = traj.line_kind() {
        return Some(k);
    }
    let th0 = traj.ic().theta0;
    if !traj.samples().iter().all(|p| p.state.theta == th0) {
        return None;
    }
    [
        (0.0, LineKind::I),
        (FRAC_PI_2, LineKind::II),
        (-FRAC_PI_2, LineKind::II),
        (FRAC_PI_4, LineKind::III),
        (-FRAC_PI_4, LineKind::IV),
    ]
    .into_iter()
    .find(|(th, _)| (th0 - th).abs() <= SNAP_TOL)
    .map(|(_, k)| k)
}

/// `y sin θ - x cos θ`, which is `(y y' - x) cos θ` for the graph `y(x)`.
pub fn inflection_function(p: &Sample) -> f64 {
    let (sin, cos) = p.state.theta.sin_cos();
    p.state.y * sin - p.state.x * cos
}

/// Arc-length positions of the inflection points of a minimal curve.
pub fn inflection_points(traj: &Trajectory) -> Result<Vec<f64>> {
    require_minimal(traj)?;
    if constant_angle_line(traj).is_some() {
        return Ok(Vec::new());
    }
    Ok(find_roots(traj, inflection_function))
}

pub fn classify_minimal(traj: &Trajectory) -> Result<Classification> {
    classify_minimal_with(traj, &AsymptoteSettings::default())
}

pub fn classify_minimal_with(traj: &Trajectory, cfg: &AsymptoteSettings) -> Result<Classification> {
    require_minimal(traj)?;
    if let Some(k) = constant_angle_line(traj) {
        let line = traj.samples()[0].state;
        let asymptotes = match k {
            LineKind::I => vec![Line::new(super::Axis::ParallelToX, line.y); 2],
            LineKind::II => vec![Line::new(super::Axis::ParallelToY, line.x); 2],
            _ => Vec::new(),
        };
        return Ok(Classification {
            kind: k.into(),
            inflection_s: Vec::new(),
            asymptotes,
            note: None,
        });
    }
    let inflection_s = inflection_points(traj)?;
    let mut asymptotes = Vec::new();
    for end in [End::Backward, End::Forward] {
        match end_asymptote(traj, end, cfg) {
            Ok(l) => asymptotes.push(l),
            Err(Error::NotSettled { end, deviation }) => {
                return Ok(Classification {
                    kind: CurveKind::Undetermined,
                    inflection_s,
                    asymptotes,
                    note: Some(format!("{end} end not settled (deviation {deviation:.3e})")),
                })
            }
            Err(e) => return Err(e),
        }
    }
    let parallel = asymptotes[0].axis == asymptotes[1].axis;
    let (kind, note) = match (inflection_s.len(), parallel) {
        (0, false) => (CurveKind::TypeA, None),
        (1, true) => (CurveKind::TypeB, None),
        (n, p) => (
            CurveKind::Undetermined,
            Some(format!(
                "{n} inflection(s) with {} asymptotes",
                if p { "parallel" } else { "perpendicular" }
            )),
        ),
    };
    Ok(Classification {
        kind,
        inflection_s,
        asymptotes,
        note,
    })
}
