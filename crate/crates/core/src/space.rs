//! The ambient space Sol3: R^3 with metric `e^{2z}dx^2 + e^{-2z}dy^2 + dz^2`,
//! its group law, the left-invariant orthonormal frame, the Levi-Civita
//! connection in that frame, and the identity component of the isometry group.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of Sol3 in global coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SolPoint {
    pub const IDENTITY: SolPoint = SolPoint { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Group product `self * q = (x + e^{-z}x', y + e^{z}y', z + z')`.
    pub fn mul(&self, q: &SolPoint) -> SolPoint {
        SolPoint {
            x: self.x + (-self.z).exp() * q.x,
            y: self.y + self.z.exp() * q.y,
            z: self.z + q.z,
        }
    }

    pub fn inverse(&self) -> SolPoint {
        SolPoint {
            x: -self.z.exp() * self.x,
            y: -(-self.z).exp() * self.y,
            z: -self.z,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

pub fn group_mul(p: &SolPoint, q: &SolPoint) -> SolPoint {
    p.mul(q)
}

/// Left translation by `(0, 0, t)`: `L_t(x, y, z) = (e^{-t}x, e^{t}y, t + z)`.
pub fn left_translate(t: f64, p: &SolPoint) -> SolPoint {
    SolPoint::new(0.0, 0.0, t).mul(p)
}

/// Differential of `x -> q * x`, which is `diag(e^{-q_z}, e^{q_z}, 1)` at every point.
pub fn left_mul_differential(q: &SolPoint, v: &TangentVector) -> TangentVector {
    TangentVector {
        base: q.mul(&v.base),
        vx: (-q.z).exp() * v.vx,
        vy: q.z.exp() * v.vy,
        vz: v.vz,
    }
}

/// Coefficients in the orthonormal frame `{E1, E2, E3}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameVector {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl FrameVector {
    pub const ZERO: FrameVector = FrameVector::new(0.0, 0.0, 0.0);
    pub const E1: FrameVector = FrameVector::new(1.0, 0.0, 0.0);
    pub const E2: FrameVector = FrameVector::new(0.0, 1.0, 0.0);
    pub const E3: FrameVector = FrameVector::new(0.0, 0.0, 1.0);

    pub const fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    pub fn basis(i: usize) -> Option<FrameVector> {
        match i {
            1 => Some(Self::E1),
            2 => Some(Self::E2),
            3 => Some(Self::E3),
            _ => None,
        }
    }

    pub fn component(&self, i: usize) -> f64 {
        match i {
            1 => self.a1,
            2 => self.a2,
            3 => self.a3,
            _ => panic!("frame component index {i} out of range"),
        }
    }

    /// Metric inner product; the frame is orthonormal.
    pub fn dot(&self, other: &FrameVector) -> f64 {
        self.a1 * other.a1 + self.a2 * other.a2 + self.a3 * other.a3
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Oriented cross product in the (positively oriented) orthonormal frame.
    pub fn cross(&self, o: &FrameVector) -> FrameVector {
        FrameVector::new(
            self.a2 * o.a3 - self.a3 * o.a2,
            self.a3 * o.a1 - self.a1 * o.a3,
            self.a1 * o.a2 - self.a2 * o.a1,
        )
    }

    /// Coordinate components of this frame vector at `base`.
    pub fn to_tangent(&self, base: SolPoint) -> TangentVector {
        TangentVector {
            base,
            vx: (-base.z).exp() * self.a1,
            vy: base.z.exp() * self.a2,
            vz: self.a3,
        }
    }
}

impl Add for FrameVector {
    type Output = FrameVector;
    fn add(self, o: FrameVector) -> FrameVector {
        FrameVector::new(self.a1 + o.a1, self.a2 + o.a2, self.a3 + o.a3)
    }
}

impl Sub for FrameVector {
    type Output = FrameVector;
    fn sub(self, o: FrameVector) -> FrameVector {
        FrameVector::new(self.a1 - o.a1, self.a2 - o.a2, self.a3 - o.a3)
    }
}

impl Neg for FrameVector {
    type Output = FrameVector;
    fn neg(self) -> FrameVector {
        FrameVector::new(-self.a1, -self.a2, -self.a3)
    }
}

impl Mul<FrameVector> for f64 {
    type Output = FrameVector;
    fn mul(self, v: FrameVector) -> FrameVector {
        FrameVector::new(self * v.a1, self * v.a2, self * v.a3)
    }
}

/// A tangent vector in the coordinate basis `∂x, ∂y, ∂z`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TangentVector {
    pub base: SolPoint,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

impl TangentVector {
    pub const fn new(base: SolPoint, vx: f64, vy: f64, vz: f64) -> Self {
        Self { base, vx, vy, vz }
    }

    pub fn to_frame(&self) -> FrameVector {
        let z = self.base.z;
        FrameVector::new(z.exp() * self.vx, (-z).exp() * self.vy, self.vz)
    }
}

pub fn metric_eval(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    if u.base != v.base {
        return Err(Error::BaseMismatch);
    }
    let z = u.base.z;
    Ok((2.0 * z).exp() * u.vx * v.vx + (-2.0 * z).exp() * u.vy * v.vy + u.vz * v.vz)
}

/// `E1 = e^{-z}∂x, E2 = e^{z}∂y, E3 = ∂z` at `p`.
pub fn frame_at(p: &SolPoint) -> [TangentVector; 3] {
    [
        TangentVector::new(*p, (-p.z).exp(), 0.0, 0.0),
        TangentVector::new(*p, 0.0, p.z.exp(), 0.0),
        TangentVector::new(*p, 0.0, 0.0, 1.0),
    ]
}

// CONNECTION[i][j] = ∇_{E_{i+1}} E_{j+1}
const CONNECTION: [[FrameVector; 3]; 3] = [
    [
        FrameVector::new(0.0, 0.0, -1.0),
        FrameVector::ZERO,
        FrameVector::new(1.0, 0.0, 0.0),
    ],
    [
        FrameVector::ZERO,
        FrameVector::new(0.0, 0.0, 1.0),
        FrameVector::new(0.0, -1.0, 0.0),
    ],
    [FrameVector::ZERO, FrameVector::ZERO, FrameVector::ZERO],
];

/// `∇_{E_i} E_j` for `i, j ∈ 1..=3`.
pub fn connection_coeff(i: usize, j: usize) -> Result<FrameVector> {
    if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(Error::FrameIndex(i, j));
    }
    Ok(CONNECTION[i - 1][j - 1])
}

/// Covariant derivative `∇_U V` of a vector field given by frame coefficients.
///
/// `dv` holds the directional derivative `U(v_j)` of the coefficient functions of `V`.
pub fn covariant_derivative(u: &FrameVector, v: &FrameVector, dv: &FrameVector) -> FrameVector {
    let mut out = *dv;
    for i in 1..=3 {
        let ui = u.component(i);
        if ui == 0.0 {
            continue;
        }
        for j in 1..=3 {
            let vj = v.component(j);
            if vj == 0.0 {
                continue;
            }
            out = out + (ui * vj) * CONNECTION[i - 1][j - 1];
        }
    }
    out
}

/// The basis diagonalizing the Ricci tensor at the origin:
/// `{(E1 + E2)/√2, (E1 - E2)/√2, E3}`.
pub fn ricci_frame_origin() -> [FrameVector; 3] {
    [
        FrameVector::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0),
        FrameVector::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0),
        FrameVector::E3,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsometryFamily {
    /// `(x, y, z) -> (±e^{-c}x + a, ±e^{c}y + b, z + c)`
    TranslationType,
    /// `(x, y, z) -> (±e^{-c}y + a, ±e^{c}x + b, -z + c)`
    FlipType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn of(v: f64) -> Sign {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// An element of the identity component of Iso(Sol3), stored by parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryDescriptor {
    pub family: IsometryFamily,
    pub signs: (Sign, Sign),
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl IsometryDescriptor {
    pub fn identity() -> Self {
        Self::translation((Sign::Plus, Sign::Plus), 0.0, 0.0, 0.0)
    }

    pub fn translation(signs: (Sign, Sign), a: f64, b: f64, c: f64) -> Self {
        Self {
            family: IsometryFamily::TranslationType,
            signs,
            a,
            b,
            c,
        }
    }

    pub fn flip(signs: (Sign, Sign), a: f64, b: f64, c: f64) -> Self {
        Self {
            family: IsometryFamily::FlipType,
            signs,
            a,
            b,
            c,
        }
    }

    /// `L_t` as a descriptor.
    pub fn left_translation(t: f64) -> Self {
        Self::translation((Sign::Plus, Sign::Plus), 0.0, 0.0, t)
    }

    /// `φ(x, y, z) = (y, x, -z)`.
    pub fn swap_flip() -> Self {
        Self::flip((Sign::Plus, Sign::Plus), 0.0, 0.0, 0.0)
    }

    /// Linear part acting on `(x, y)` as a 2x2 matrix, and the sign of `z`.
    fn linear_part(&self) -> ([[f64; 2]; 2], f64) {
        let (s1, s2) = (self.signs.0.value(), self.signs.1.value());
        let (em, ep) = ((-self.c).exp(), self.c.exp());
        match self.family {
            IsometryFamily::TranslationType => ([[s1 * em, 0.0], [0.0, s2 * ep]], 1.0),
            IsometryFamily::FlipType => ([[0.0, s1 * em], [s2 * ep, 0.0]], -1.0),
        }
    }

    pub fn apply(&self, p: &SolPoint) -> SolPoint {
        let (m, ez) = self.linear_part();
        SolPoint {
            x: m[0][0] * p.x + m[0][1] * p.y + self.a,
            y: m[1][0] * p.x + m[1][1] * p.y + self.b,
            z: ez * p.z + self.c,
        }
    }

    /// Jacobian matrix in coordinates; the maps are affine so it is constant.
    pub fn jacobian(&self) -> [[f64; 3]; 3] {
        let (m, ez) = self.linear_part();
        [[m[0][0], m[0][1], 0.0], [m[1][0], m[1][1], 0.0], [0.0, 0.0, ez]]
    }

    pub fn differential(&self, v: &TangentVector) -> TangentVector {
        let j = self.jacobian();
        TangentVector {
            base: self.apply(&v.base),
            vx: j[0][0] * v.vx + j[0][1] * v.vy + j[0][2] * v.vz,
            vy: j[1][0] * v.vx + j[1][1] * v.vy + j[1][2] * v.vz,
            vz: j[2][0] * v.vx + j[2][1] * v.vy + j[2][2] * v.vz,
        }
    }

    /// The descriptor of `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &IsometryDescriptor) -> IsometryDescriptor {
        let (mo, ezo) = self.linear_part();
        let (mi, _) = inner.linear_part();
        let mut m = [[0.0; 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (col, entry) in row.iter_mut().enumerate() {
                *entry = mo[r][0] * mi[0][col] + mo[r][1] * mi[1][col];
            }
        }
        let a = mo[0][0] * inner.a + mo[0][1] * inner.b + self.a;
        let b = mo[1][0] * inner.a + mo[1][1] * inner.b + self.b;
        let c = ezo * inner.c + self.c;
        if self.family == inner.family {
            Self::translation((Sign::of(m[0][0]), Sign::of(m[1][1])), a, b, c)
        } else {
            Self::flip((Sign::of(m[0][1]), Sign::of(m[1][0])), a, b, c)
        }
    }

    /// Parameter-wise comparison with a tolerance on `a`, `b`, `c`.
    pub fn approx_eq(&self, other: &IsometryDescriptor, tol: f64) -> bool {
        self.family == other.family
            && self.signs == other.signs
            && (self.a - other.a).abs() <= tol
            && (self.b - other.b).abs() <= tol
            && (self.c - other.c).abs() <= tol
    }
}

pub fn isometry_apply(iso: &IsometryDescriptor, p: &SolPoint) -> SolPoint {
    iso.apply(p)
}
