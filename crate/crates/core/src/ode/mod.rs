//! Generating-curve integration.
//!
//! A trajectory is integrated in both directions from `s = 0`, each direction
//! as a forward run (the backward branch runs on the reversed field in
//! `σ = -s`). Samples are the accepted steps; between them the dense output of
//! the integrator is used.

pub mod dopri;
pub mod event;
pub mod explicit;
pub mod system;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::CurveState;
use dopri::{Branch, Tolerances};
pub use event::{find_event, find_roots};
pub use explicit::{
    circle_flat, explicit_solution, graph_residual, ClosedFormCurve, CurveParams, CurveRegistry, FlatCircle, LineKind,
    LineSolution,
};
pub use system::{
    rhs_cmc, rhs_minimal, ConstantMeanCurvature, CurveSystem, Flat, Minimal, SystemParams, SystemRegistry,
};

/// Distance within which `θ₀` is replaced by an exact line angle.
pub const SNAP_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OdeSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub max_s: f64,
    pub event_tol: f64,
    /// Route minimal starts at a line angle to the closed form.
    pub snap_degenerate: bool,
}

impl Default for OdeSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: 1e-2,
            max_s: 50.0,
            event_tol: 1e-12,
            snap_degenerate: true,
        }
    }
}

impl OdeSettings {
    pub fn with_max_s(mut self, max_s: f64) -> Self {
        self.max_s = max_s;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("max_step", self.max_step),
            ("max_s", self.max_s),
            ("event_tol", self.event_tol),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidSettings(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_step: self.max_step,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialCondition {
    pub x0: f64,
    pub y0: f64,
    pub theta0: f64,
}

impl InitialCondition {
    pub fn new(x0: f64, y0: f64, theta0: f64) -> Self {
        Self { x0, y0, theta0 }
    }

    pub fn validate(&self) -> Result<()> {
        if [self.x0, self.y0, self.theta0].iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidInitialCondition(format!(
                "non-finite initial condition {self:?}"
            )))
        }
    }

    pub fn state(&self) -> CurveState {
        CurveState::new(0.0, self.x0, self.y0, self.theta0)
    }

    /// Image under `(x, y, z) ↦ (y, x, -z)`.
    pub fn flipped(&self) -> Self {
        Self::new(self.y0, self.x0, FRAC_PI_2 - self.theta0)
    }
}

/// A curve state together with `θ'` from the governing equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub state: CurveState,
    pub theta_prime: f64,
}

impl Sample {
    pub fn s(&self) -> f64 {
        self.state.s
    }
}

#[derive(Debug, Clone)]
enum Interpolant {
    Steps { forward: Branch, backward: Branch },
    Closed(LineSolution),
}

/// Samples of one generating curve on `[s_min, s_max] ∋ 0`, with dense output.
#[derive(Debug, Clone)]
pub struct Trajectory {
    samples: Vec<Sample>,
    origin: usize,
    interp: Interpolant,
    ic: InitialCondition,
    system: Arc<dyn CurveSystem>,
    settings: OdeSettings,
}

impl Trajectory {
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn ic(&self) -> InitialCondition {
        self.ic
    }

    pub fn settings(&self) -> &OdeSettings {
        &self.settings
    }

    pub fn system(&self) -> &Arc<dyn CurveSystem> {
        &self.system
    }

    pub fn h_target(&self) -> Option<f64> {
        self.system.mean_curvature_target()
    }

    /// Index of the `s = 0` sample.
    pub fn origin_index(&self) -> usize {
        self.origin
    }

    /// Samples with `s ≥ 0`, starting at the origin.
    pub fn forward(&self) -> &[Sample] {
        &self.samples[self.origin..]
    }

    /// Samples with `s ≤ 0`, ordered by increasing `s` and ending at the origin.
    pub fn backward(&self) -> &[Sample] {
        &self.samples[..=self.origin]
    }

    pub fn s_min(&self) -> f64 {
        self.samples[0].s()
    }

    pub fn s_max(&self) -> f64 {
        self.samples[self.samples.len() - 1].s()
    }

    /// Closed-form line this trajectory was routed to, if any.
    pub fn line_kind(&self) -> Option<LineKind> {
        match &self.interp {
            Interpolant::Closed(line) => Some(line.kind),
            Interpolant::Steps { .. } => None,
        }
    }

    fn sample_from(&self, s: f64, x: f64, y: f64, theta: f64) -> Sample {
        Sample {
            state: CurveState::new(s, x, y, theta),
            theta_prime: self.system.theta_prime(x, y, theta),
        }
    }

    /// Dense-output state at any `s` in range.
    pub fn state_at(&self, s: f64) -> Result<Sample> {
        if !(s >= self.s_min() && s <= self.s_max()) {
            return Err(Error::Domain(format!(
                "s = {s} outside the computed range [{}, {}]",
                self.s_min(),
                self.s_max()
            )));
        }
        match &self.interp {
            Interpolant::Closed(line) => Ok(line.sample(s)),
            Interpolant::Steps { forward, backward } => {
                let y = if s >= 0.0 { forward.eval(s) } else { backward.eval(-s) }
                    .ok_or_else(|| Error::Domain(format!("s = {s} not covered")))?;
                Ok(self.sample_from(s, y[0], y[1], y[2]))
            }
        }
    }

    /// Largest defining-equation residual over the samples.
    pub fn max_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|p| self.system.residual(&p.state, p.theta_prime).abs())
            .fold(0.0, f64::max)
    }

    /// The same curve restricted to `s ≥ 0`, up to and including `s_end`.
    pub fn truncated(&self, s_end: f64) -> Result<Trajectory> {
        let end = self.state_at(s_end)?;
        let mut samples: Vec<Sample> = self
            .samples
            .iter()
            .filter(|p| p.s() >= 0.0 && p.s() < s_end)
            .copied()
            .collect();
        samples.push(end);
        let interp = match &self.interp {
            Interpolant::Closed(line) => Interpolant::Closed(*line),
            Interpolant::Steps { forward, .. } => Interpolant::Steps {
                forward: forward.clone(),
                backward: Branch {
                    nodes: vec![(0.0, forward.nodes[0].1)],
                    segments: Vec::new(),
                },
            },
        };
        Ok(Trajectory {
            samples,
            origin: 0,
            interp,
            ic: self.ic,
            system: self.system.clone(),
            settings: OdeSettings {
                max_s: s_end,
                ..self.settings
            },
        })
    }
}

fn snapped_line(ic: &InitialCondition) -> Option<LineKind> {
    let candidates = [
        (0.0, LineKind::I),
        (FRAC_PI_2, LineKind::II),
        (FRAC_PI_4, LineKind::III),
        (-FRAC_PI_4, LineKind::IV),
    ];
    let (_, kind) = *candidates.iter().find(|(th, _)| (ic.theta0 - th).abs() <= SNAP_TOL)?;
    LineSolution::new(kind, ic.x0, ic.y0).ok().map(|_| kind)
}

fn snapped_minus_half_pi(ic: &InitialCondition) -> bool {
    (ic.theta0 + FRAC_PI_2).abs() <= SNAP_TOL
}

fn closed_trajectory(
    line: LineSolution,
    ic: InitialCondition,
    system: Arc<dyn CurveSystem>,
    settings: OdeSettings,
) -> Trajectory {
    let n = (settings.max_s / settings.max_step).ceil().max(1.0) as usize;
    let ds = settings.max_s / n as f64;
    let samples: Vec<Sample> = (0..=2 * n)
        .map(|k| {
            let s = if k == 2 * n {
                settings.max_s
            } else {
                -settings.max_s + k as f64 * ds
            };
            line.sample(if k == n { 0.0 } else { s })
        })
        .collect();
    Trajectory {
        samples,
        origin: n,
        interp: Interpolant::Closed(line),
        ic,
        system,
        settings,
    }
}

/// Integrates `system` on `[-max_s, max_s]` from `ic`.
pub fn integrate(system: Arc<dyn CurveSystem>, ic: InitialCondition, settings: &OdeSettings) -> Result<Trajectory> {
    settings.validate()?;
    ic.validate()?;
    if settings.snap_degenerate && system.is_minimal() {
        if let Some(kind) = snapped_line(&ic) {
            let line = LineSolution::new(kind, ic.x0, ic.y0)?;
            return Ok(closed_trajectory(line, ic, system, *settings));
        }
        if snapped_minus_half_pi(&ic) {
            let line = LineSolution::new(LineKind::II, ic.x0, ic.y0)?.reversed();
            return Ok(closed_trajectory(line, ic, system, *settings));
        }
    }
    let y0 = [ic.x0, ic.y0, ic.theta0];
    let tol = settings.tolerances();
    let sys = system.clone();
    let forward = dopri::integrate(
        |y: &[f64; 3]| sys.rhs(y[0], y[1], y[2]),
        y0,
        settings.max_s,
        &tol,
        1.0,
        |_, _| false,
    )?;
    let backward = dopri::integrate(
        |y: &[f64; 3]| {
            let r = sys.rhs(y[0], y[1], y[2]);
            [-r[0], -r[1], -r[2]]
        },
        y0,
        settings.max_s,
        &tol,
        -1.0,
        |_, _| false,
    )?;
    Ok(assemble(forward, backward, ic, system, *settings))
}

/// Integrates forward only, stopping after the first accepted step at which
/// `stop` holds (or at `max_s`).
pub fn integrate_forward<S>(
    system: Arc<dyn CurveSystem>,
    ic: InitialCondition,
    settings: &OdeSettings,
    mut stop: S,
) -> Result<Trajectory>
where
    S: FnMut(&Sample) -> bool,
{
    settings.validate()?;
    ic.validate()?;
    let y0 = [ic.x0, ic.y0, ic.theta0];
    let sys = system.clone();
    let forward = dopri::integrate(
        |y: &[f64; 3]| sys.rhs(y[0], y[1], y[2]),
        y0,
        settings.max_s,
        &settings.tolerances(),
        1.0,
        |s, y| {
            stop(&Sample {
                state: CurveState::new(s, y[0], y[1], y[2]),
                theta_prime: sys.theta_prime(y[0], y[1], y[2]),
            })
        },
    )?;
    let backward = Branch {
        nodes: vec![(0.0, y0)],
        segments: Vec::new(),
    };
    Ok(assemble(forward, backward, ic, system, *settings))
}

fn assemble(
    forward: Branch,
    backward: Branch,
    ic: InitialCondition,
    system: Arc<dyn CurveSystem>,
    settings: OdeSettings,
) -> Trajectory {
    let mk = |s: f64, y: &[f64; 3]| Sample {
        state: CurveState::new(s, y[0], y[1], y[2]),
        theta_prime: system.theta_prime(y[0], y[1], y[2]),
    };
    let mut samples: Vec<Sample> = backward.nodes.iter().skip(1).rev().map(|(t, y)| mk(-t, y)).collect();
    let origin = samples.len();
    samples.extend(forward.nodes.iter().map(|(t, y)| mk(*t, y)));
    Trajectory {
        samples,
        origin,
        interp: Interpolant::Steps { forward, backward },
        ic,
        system,
        settings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

    fn minimal() -> Arc<dyn CurveSystem> {
        Arc::new(Minimal)
    }

    #[test]
    fn settings_validation() {
        assert!(OdeSettings::default().validate().is_ok());
        let bad = OdeSettings {
            max_step: 0.0,
            ..OdeSettings::default()
        };
        assert!(matches!(bad.validate(), Err(Error::InvalidSettings(_))));
        let bad = OdeSettings {
            abs_tol: f64::NAN,
            ..OdeSettings::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn type_i_through_origin_numerically() {
        let settings = OdeSettings {
            snap_degenerate: false,
            max_s: 10.0,
            ..OdeSettings::default()
        };
        let tr = integrate(minimal(), InitialCondition::new(0.0, 0.0, 0.0), &settings).unwrap();
        assert!(tr.line_kind().is_none());
        for p in tr.samples() {
            assert!((p.state.x - p.s()).abs() < 1e-10);
            assert_eq!(p.state.y, 0.0);
            assert_eq!(p.state.theta, 0.0);
        }
        assert_eq!(tr.s_min(), -10.0);
        assert_eq!(tr.s_max(), 10.0);
    }

    #[test]
    fn type_iii_numerically() {
        let settings = OdeSettings {
            snap_degenerate: false,
            max_s: 10.0,
            ..OdeSettings::default()
        };
        let x0 = 0.3;
        let tr = integrate(minimal(), InitialCondition::new(x0, x0, FRAC_PI_4), &settings).unwrap();
        for p in tr.samples() {
            let exact = x0 + p.s() * FRAC_1_SQRT_2;
            assert!((p.state.x - exact).abs() < 1e-10);
            assert!((p.state.y - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn snapping_routes_to_closed_form() {
        let tr = integrate(
            minimal(),
            InitialCondition::new(1.0, 1.0, FRAC_PI_4 + 1e-15),
            &OdeSettings::default(),
        )
        .unwrap();
        assert_eq!(tr.line_kind(), Some(LineKind::III));
        let tr = integrate(
            minimal(),
            InitialCondition::new(1.0, 2.0, FRAC_PI_4),
            &OdeSettings::default(),
        )
        .unwrap();
        assert_eq!(tr.line_kind(), None);
        let cmc: Arc<dyn CurveSystem> = Arc::new(ConstantMeanCurvature { h: 1.0 });
        let tr = integrate(
            cmc,
            InitialCondition::new(0.0, 0.0, 0.0),
            &OdeSettings::default().with_max_s(2.0),
        )
        .unwrap();
        assert_eq!(tr.line_kind(), None);
    }

    #[test]
    fn samples_ordered_and_dense_output_consistent() {
        let tr = integrate(
            minimal(),
            InitialCondition::new(0.0, 0.0, FRAC_PI_8),
            &OdeSettings::default().with_max_s(5.0),
        )
        .unwrap();
        assert!(tr.samples().windows(2).all(|w| w[0].s() < w[1].s()));
        assert_eq!(tr.samples()[tr.origin_index()].s(), 0.0);
        for p in tr.samples() {
            let q = tr.state_at(p.s()).unwrap();
            assert!((q.state.x - p.state.x).abs() < 1e-13);
            assert!((q.state.theta - p.state.theta).abs() < 1e-13);
        }
        assert!(tr.state_at(5.5).is_err());
        assert!(tr.max_residual() < 1e-12);
    }

    #[test]
    fn determinism() {
        let ic = InitialCondition::new(1.0, 2.0, 0.5);
        let s = OdeSettings::default().with_max_s(10.0);
        let a = integrate(minimal(), ic, &s).unwrap();
        let b = integrate(minimal(), ic, &s).unwrap();
        assert_eq!(a.samples(), b.samples());
    }

    #[test]
    fn forward_run_stops() {
        let cmc: Arc<dyn CurveSystem> = Arc::new(ConstantMeanCurvature { h: 1.0 });
        let tr = integrate_forward(
            cmc,
            InitialCondition::new(0.0, 0.5, 0.0),
            &OdeSettings::default(),
            |p| p.state.theta < -1.0,
        )
        .unwrap();
        assert!(tr.s_max() < 2.0);
        assert_eq!(tr.s_min(), 0.0);
        assert!(tr.samples().last().unwrap().state.theta < -1.0);
    }
}
