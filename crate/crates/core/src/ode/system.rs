//! Generating-curve systems. Every system shares `x' = cos θ, y' = sin θ` and
//! differs in the angle equation; each is registered by name so callers can
//! pick one at runtime.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::surface::{flat_residual, mean_curvature, CurveState};

pub trait CurveSystem: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// `θ'` as a function of the phase point.
    fn theta_prime(&self, x: f64, y: f64, theta: f64) -> f64;

    /// Residual of the defining curvature equation at `(state, θ')`.
    fn residual(&self, state: &CurveState, theta_prime: f64) -> f64;

    /// Prescribed mean curvature, if the system prescribes one. `None` for minimal.
    fn mean_curvature_target(&self) -> Option<f64> {
        None
    }

    /// Whether the constant-angle lines solve this system.
    fn is_minimal(&self) -> bool {
        false
    }

    fn rhs(&self, x: f64, y: f64, theta: f64) -> [f64; 3] {
        let (sin, cos) = theta.sin_cos();
        [cos, sin, self.theta_prime(x, y, theta)]
    }
}

/// `H = 0`: `θ' = sin 2θ (-x cos θ + y sin θ) / (1 + x² + y²)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Minimal;

impl CurveSystem for Minimal {
    fn name(&self) -> &'static str {
        "minimal"
    }

    fn theta_prime(&self, x: f64, y: f64, theta: f64) -> f64 {
        let (sin, cos) = theta.sin_cos();
        (2.0 * theta).sin() * (-x * cos + y * sin) / (1.0 + x * x + y * y)
    }

    fn residual(&self, state: &CurveState, theta_prime: f64) -> f64 {
        mean_curvature(state, theta_prime)
    }

    fn is_minimal(&self) -> bool {
        true
    }
}

/// Constant mean curvature `H`:
/// `θ' = [sin 2θ (-x cos θ + y sin θ) - 2H(1 + A²)^{3/2}] / (1 + x² + y²)`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantMeanCurvature {
    pub h: f64,
}

impl CurveSystem for ConstantMeanCurvature {
    fn name(&self) -> &'static str {
        "cmc"
    }

    fn theta_prime(&self, x: f64, y: f64, theta: f64) -> f64 {
        let (sin, cos) = theta.sin_cos();
        let a = x * sin + y * cos;
        let w = 1.0 + a * a;
        ((2.0 * theta).sin() * (-x * cos + y * sin) - 2.0 * self.h * w * w.sqrt()) / (1.0 + x * x + y * y)
    }

    fn residual(&self, state: &CurveState, theta_prime: f64) -> f64 {
        mean_curvature(state, theta_prime) - self.h
    }

    fn mean_curvature_target(&self) -> Option<f64> {
        Some(self.h)
    }

    fn is_minimal(&self) -> bool {
        self.h == 0.0
    }
}

/// Zero Gauss curvature, solved for `θ'`. Singular where
/// `-x sin θ + y cos θ + A(y² - x²)` vanishes; the integrator reports that as a failure.
#[derive(Debug, Clone, Copy, Default)]
pub struct Flat;

impl CurveSystem for Flat {
    fn name(&self) -> &'static str {
        "flat"
    }

    fn theta_prime(&self, x: f64, y: f64, theta: f64) -> f64 {
        let (sin, cos) = theta.sin_cos();
        let a = x * sin + y * cos;
        let cos2 = (2.0 * theta).cos();
        let b = -x * sin + y * cos + a * (y * y - x * x);
        -(1.0 + cos2 * (x * x - y * y) * a * a) / b - a * cos2
    }

    fn residual(&self, state: &CurveState, theta_prime: f64) -> f64 {
        flat_residual(state, theta_prime)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SystemParams {
    pub h: Option<f64>,
}

pub type SystemFactory = fn(&SystemParams) -> Result<Arc<dyn CurveSystem>>;

struct SystemEntry {
    description: &'static str,
    factory: SystemFactory,
}

/// Name-indexed table of curve systems.
pub struct SystemRegistry {
    entries: BTreeMap<&'static str, SystemEntry>,
}

impl SystemRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("minimal", "zero mean curvature", |_| Ok(Arc::new(Minimal)));
        reg.register("cmc", "constant mean curvature H (requires H)", |p| {
            let h =
                p.h.ok_or_else(|| Error::Precondition("system `cmc` needs a value of H".into()))?;
            if !h.is_finite() {
                return Err(Error::Precondition(format!("H must be finite, got {h}")));
            }
            Ok(Arc::new(ConstantMeanCurvature { h }))
        });
        reg.register("flat", "zero Gauss curvature", |_| Ok(Arc::new(Flat)));
        reg
    }

    pub fn register(&mut self, name: &'static str, description: &'static str, factory: SystemFactory) {
        self.entries.insert(name, SystemEntry { description, factory });
    }

    pub fn create(&self, name: &str, params: &SystemParams) -> Result<Arc<dyn CurveSystem>> {
        match self.entries.get(name) {
            Some(entry) => (entry.factory)(params),
            None => Err(Error::UnknownStrategy {
                kind: "curve system",
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            }),
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        self.entries.iter().map(|(k, v)| (*k, v.description)).collect()
    }
}

impl Default for SystemRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// `(cos θ, sin θ, θ')` for the minimal system.
pub fn rhs_minimal(state: &CurveState) -> [f64; 3] {
    Minimal.rhs(state.x, state.y, state.theta)
}

pub fn rhs_cmc(state: &CurveState, h: f64) -> [f64; 3] {
    ConstantMeanCurvature { h }.rhs(state.x, state.y, state.theta)
}
