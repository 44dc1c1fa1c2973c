//! Closed-form generating curves: the four constant-angle minimal lines and
//! the circle generating a flat surface.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Sample;
use crate::error::{Error, Result};
use crate::surface::CurveState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineKind {
    /// parallel to the x-axis, θ = 0
    I,
    /// parallel to the y-axis, θ = π/2
    II,
    /// the diagonal y = x, θ = π/4
    III,
    /// the anti-diagonal y = -x, θ = -π/4
    IV,
}

impl LineKind {
    pub fn theta(self) -> f64 {
        match self {
            LineKind::I => 0.0,
            LineKind::II => FRAC_PI_2,
            LineKind::III => FRAC_PI_4,
            LineKind::IV => -FRAC_PI_4,
        }
    }

    /// Unit direction with exact components.
    fn direction(self) -> (f64, f64) {
        match self {
            LineKind::I => (1.0, 0.0),
            LineKind::II => (0.0, 1.0),
            LineKind::III => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            LineKind::IV => (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        }
    }
}

/// A constant-angle minimal generating curve, traversed at unit speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSolution {
    pub kind: LineKind,
    pub x0: f64,
    pub y0: f64,
    /// `+1` for the orientation of [`LineKind::theta`], `-1` for the reverse.
    pub orientation: f64,
}

impl LineSolution {
    pub fn new(kind: LineKind, x0: f64, y0: f64) -> Result<Self> {
        let tol = 1e-14 * (1.0 + x0.abs().max(y0.abs()));
        match kind {
            LineKind::III if (y0 - x0).abs() > tol => Err(Error::InvalidInitialCondition(format!(
                "type III line needs y0 = x0, got ({x0}, {y0})"
            ))),
            LineKind::IV if (y0 + x0).abs() > tol => Err(Error::InvalidInitialCondition(format!(
                "type IV line needs y0 = -x0, got ({x0}, {y0})"
            ))),
            _ => Ok(Self {
                kind,
                x0,
                y0,
                orientation: 1.0,
            }),
        }
    }

    pub fn reversed(mut self) -> Self {
        self.orientation = -self.orientation;
        self
    }

    pub fn theta(&self) -> f64 {
        if self.orientation > 0.0 {
            self.kind.theta()
        } else {
            self.kind.theta() - std::f64::consts::PI
        }
    }

    pub fn state_at(&self, s: f64) -> CurveState {
        let (dx, dy) = self.kind.direction();
        let d = self.orientation * s;
        CurveState::new(s, self.x0 + d * dx, self.y0 + d * dy, self.theta())
    }
}

pub fn explicit_solution(kind: LineKind, x0: f64, y0: f64, s: f64) -> Result<CurveState> {
    Ok(LineSolution::new(kind, x0, y0)?.state_at(s))
}

/// `x = r sin(s/r), y = -r cos(s/r), θ = s/r`, with `θ' = 1/r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatCircle {
    pub r: f64,
}

impl FlatCircle {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("circle radius must be positive, got {r}")));
        }
        Ok(Self { r })
    }
}

pub fn circle_flat(r: f64, s: f64) -> Result<(CurveState, f64)> {
    let c = FlatCircle::new(r)?;
    let sample = c.sample(s);
    Ok((sample.state, sample.theta_prime))
}

/// Residual of the graph form `y'' = 2y'(y y' - x)/(1 + x² + y²)`; verification only.
pub fn graph_residual(x: f64, y: f64, yp: f64, ypp: f64) -> f64 {
    ypp - 2.0 * yp * (y * yp - x) / (1.0 + x * x + y * y)
}

/// A generating curve known in closed form.
pub trait ClosedFormCurve: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn sample(&self, s: f64) -> Sample;
    /// Natural parameter range, if the curve is periodic.
    fn period(&self) -> Option<f64> {
        None
    }
}

impl ClosedFormCurve for LineSolution {
    fn name(&self) -> &'static str {
        match self.kind {
            LineKind::I => "type-i",
            LineKind::II => "type-ii",
            LineKind::III => "type-iii",
            LineKind::IV => "type-iv",
        }
    }

    fn sample(&self, s: f64) -> Sample {
        Sample {
            state: self.state_at(s),
            theta_prime: 0.0,
        }
    }
}

impl ClosedFormCurve for FlatCircle {
    fn name(&self) -> &'static str {
        "flat-circle"
    }

    fn sample(&self, s: f64) -> Sample {
        let th = s / self.r;
        let (sin, cos) = th.sin_cos();
        Sample {
            state: CurveState::new(s, self.r * sin, -self.r * cos, th),
            theta_prime: 1.0 / self.r,
        }
    }

    fn period(&self) -> Option<f64> {
        Some(2.0 * std::f64::consts::PI * self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParams {
    pub x0: f64,
    pub y0: f64,
    pub r: f64,
}

impl Default for CurveParams {
    fn default() -> Self {
        Self {
            x0: 0.0,
            y0: 0.0,
            r: 1.0,
        }
    }
}

pub type CurveFactory = fn(&CurveParams) -> Result<Arc<dyn ClosedFormCurve>>;

/// Name-indexed table of closed-form curves.
pub struct CurveRegistry {
    entries: BTreeMap<&'static str, CurveFactory>,
}

impl CurveRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("type-i", |p| Ok(Arc::new(LineSolution::new(LineKind::I, p.x0, p.y0)?)));
        reg.register("type-ii", |p| {
            Ok(Arc::new(LineSolution::new(LineKind::II, p.x0, p.y0)?))
        });
        reg.register("type-iii", |p| {
            Ok(Arc::new(LineSolution::new(LineKind::III, p.x0, p.y0)?))
        });
        reg.register("type-iv", |p| {
            Ok(Arc::new(LineSolution::new(LineKind::IV, p.x0, p.y0)?))
        });
        reg.register("flat-circle", |p| Ok(Arc::new(FlatCircle::new(p.r)?)));
        reg
    }

    pub fn register(&mut self, name: &'static str, factory: CurveFactory) {
        self.entries.insert(name, factory);
    }

    pub fn create(&self, name: &str, params: &CurveParams) -> Result<Arc<dyn ClosedFormCurve>> {
        match self.entries.get(name) {
            Some(f) => f(params),
            None => Err(Error::UnknownStrategy {
                kind: "closed-form curve",
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            }),
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

impl Default for CurveRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
