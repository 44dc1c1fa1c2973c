//! Pointwise geometry of the invariant surface `ψ(s, t) = (e^{-t}x(s), e^{t}y(s), t)`
//! generated by an arc-length curve `(x(s), y(s))` in the plane `z = 0`.
//!
//! All quantities are independent of `t`. Tangents, normal and covariant
//! derivatives are expressed in the orthonormal frame `{E1, E2, E3}`; the
//! normal is `N = (sin θ E1 - cos θ E2 + A E3)/√W`, never flipped.

use serde::{Deserialize, Serialize};

use crate::space::{covariant_derivative, left_translate, FrameVector, SolPoint};

/// Phase point of a generating curve. `theta` is unwrapped.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurveState {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl CurveState {
    pub const fn new(s: f64, x: f64, y: f64, theta: f64) -> Self {
        Self { s, x, y, theta }
    }

    /// `A = x sin θ + y cos θ`
    pub fn a(&self) -> f64 {
        let (sin, cos) = self.theta.sin_cos();
        self.x * sin + self.y * cos
    }

    /// `W = 1 + A^2`, the determinant of the first fundamental form.
    pub fn w(&self) -> f64 {
        let a = self.a();
        1.0 + a * a
    }

    /// Image under `φ(x, y, z) = (y, x, -z)`; the curve direction becomes `π/2 - θ`
    /// and `θ'` changes sign.
    pub fn flipped(&self) -> CurveState {
        CurveState::new(self.s, self.y, self.x, std::f64::consts::FRAC_PI_2 - self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FirstForm {
    /// `E = <ψ_s, ψ_s>`
    pub e: f64,
    /// `F = <ψ_s, ψ_t>`
    pub f: f64,
    /// `G = <ψ_t, ψ_t>`
    pub g: f64,
    pub a: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SecondForm {
    /// `<N, ∇_{ψ_s}ψ_s>`
    pub e: f64,
    /// `<N, ∇_{ψ_s}ψ_t>`
    pub f: f64,
    /// `<N, ∇_{ψ_t}ψ_t>`
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub first: FirstForm,
    pub second: SecondForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub h: f64,
    pub k: f64,
    pub k_ext: f64,
    pub k_sec: f64,
}

pub fn immersion(state: &CurveState, t: f64) -> SolPoint {
    left_translate(t, &SolPoint::new(state.x, state.y, 0.0))
}

/// `ψ_s = cos θ E1 + sin θ E2`
pub fn tangent_s(state: &CurveState) -> FrameVector {
    let (sin, cos) = state.theta.sin_cos();
    FrameVector::new(cos, sin, 0.0)
}

/// `ψ_t = -x E1 + y E2 + E3`
pub fn tangent_t(state: &CurveState) -> FrameVector {
    FrameVector::new(-state.x, state.y, 1.0)
}

pub fn first_form(state: &CurveState) -> FirstForm {
    let (sin, cos) = state.theta.sin_cos();
    let a = state.x * sin + state.y * cos;
    FirstForm {
        e: 1.0,
        f: -state.x * cos + state.y * sin,
        g: 1.0 + state.x * state.x + state.y * state.y,
        a,
        w: 1.0 + a * a,
    }
}

pub fn unit_normal(state: &CurveState) -> FrameVector {
    let (sin, cos) = state.theta.sin_cos();
    let a = state.x * sin + state.y * cos;
    (1.0 / (1.0 + a * a).sqrt()) * FrameVector::new(sin, -cos, a)
}

/// The three covariant derivatives `∇_{ψ_s}ψ_s`, `∇_{ψ_s}ψ_t`, `∇_{ψ_t}ψ_t`,
/// assembled from the connection table.
pub fn covariant_derivatives(state: &CurveState, theta_prime: f64) -> [FrameVector; 3] {
    let (sin, cos) = state.theta.sin_cos();
    let ps = tangent_s(state);
    let pt = tangent_t(state);
    // Coefficients of ψ_s depend on s through θ; those of ψ_t through (x, y).
    let d_s_ps = FrameVector::new(-theta_prime * sin, theta_prime * cos, 0.0);
    let d_s_pt = FrameVector::new(-cos, sin, 0.0);
    [
        covariant_derivative(&ps, &ps, &d_s_ps),
        covariant_derivative(&ps, &pt, &d_s_pt),
        covariant_derivative(&pt, &pt, &FrameVector::ZERO),
    ]
}

pub fn second_form(state: &CurveState, theta_prime: f64) -> SecondForm {
    let n = unit_normal(state);
    let [ss, st, tt] = covariant_derivatives(state, theta_prime);
    SecondForm {
        e: n.dot(&ss),
        f: n.dot(&st),
        g: n.dot(&tt),
    }
}

pub fn fundamental_forms(state: &CurveState, theta_prime: f64) -> FundamentalForms {
    FundamentalForms {
        first: first_form(state),
        second: second_form(state, theta_prime),
    }
}

/// Closed form `H = [sin 2θ (-x cos θ + y sin θ) - (1 + x² + y²) θ'] / (2 W^{3/2})`.
pub fn mean_curvature(state: &CurveState, theta_prime: f64) -> f64 {
    let (sin, cos) = state.theta.sin_cos();
    let (x, y) = (state.x, state.y);
    let a = x * sin + y * cos;
    let w = 1.0 + a * a;
    let num = (2.0 * state.theta).sin() * (-x * cos + y * sin) - (1.0 + x * x + y * y) * theta_prime;
    num / (2.0 * w * w.sqrt())
}

/// `H = (eG - 2fF + gE) / (2(EG - F²))`
pub fn mean_curvature_from_forms(forms: &FundamentalForms) -> f64 {
    let (i, ii) = (&forms.first, &forms.second);
    (ii.e * i.g - 2.0 * ii.f * i.f + ii.g * i.e) / (2.0 * (i.e * i.g - i.f * i.f))
}

/// `K_ext = (eg - f²) / (EG - F²)`
pub fn extrinsic_curvature_from_forms(forms: &FundamentalForms) -> f64 {
    let (i, ii) = (&forms.first, &forms.second);
    (ii.e * ii.g - ii.f * ii.f) / (i.e * i.g - i.f * i.f)
}

/// Sectional curvature of the tangent plane, `(A² - 1)/(1 + A²)`.
pub fn sectional_curvature(state: &CurveState) -> f64 {
    let a2 = state.a().powi(2);
    (a2 - 1.0) / (1.0 + a2)
}

pub fn extrinsic_curvature(state: &CurveState, theta_prime: f64) -> f64 {
    curvature_report(state, theta_prime).k_ext
}

pub fn gauss_curvature(state: &CurveState, theta_prime: f64) -> f64 {
    curvature_report(state, theta_prime).k
}

/// Left-hand side of the flatness equation; vanishes iff `K = 0`.
pub fn flat_residual(state: &CurveState, theta_prime: f64) -> f64 {
    let t = Terms::new(state);
    (theta_prime + t.a * t.cos2) * t.b + 1.0 + t.cos2 * (t.x2 - t.y2) * t.a * t.a
}

/// Shared subexpressions of the curvature formulas.
struct Terms {
    a: f64,
    w: f64,
    cos2: f64,
    x2: f64,
    y2: f64,
    /// `x cos θ + y sin θ`
    radial: f64,
    /// `-x sin θ + y cos θ + A(y² - x²)`
    b: f64,
}

impl Terms {
    fn new(state: &CurveState) -> Self {
        let (sin, cos) = state.theta.sin_cos();
        let (x, y) = (state.x, state.y);
        let a = x * sin + y * cos;
        let (x2, y2) = (x * x, y * y);
        Terms {
            a,
            w: 1.0 + a * a,
            cos2: (2.0 * state.theta).cos(),
            x2,
            y2,
            radial: x * cos + y * sin,
            b: -x * sin + y * cos + a * (y2 - x2),
        }
    }
}

pub fn curvature_report(state: &CurveState, theta_prime: f64) -> CurvatureReport {
    let t = Terms::new(state);
    let w2 = t.w * t.w;
    let a2 = t.a * t.a;
    let coupling = (theta_prime + t.a * t.cos2) * t.b;
    let k_ext = -(a2 * t.radial * t.radial + coupling) / w2;
    let k_sec = (a2 - 1.0) / t.w;
    let k = (-coupling - 1.0 - t.cos2 * (t.x2 - t.y2) * a2) / w2;
    CurvatureReport {
        h: mean_curvature(state, theta_prime),
        k,
        k_ext,
        k_sec,
    }
}
