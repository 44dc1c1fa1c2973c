//! Coordinate-based reference computation of the surface invariants.
//!
//! Nothing here touches the orthonormal frame or its connection table: the
//! surface is sampled as a point set in R^3 through the osculating arc of a
//! curve state, derivatives are fourth-order central differences, the
//! Christoffel symbols are differenced from the coordinate metric
//! `e^{2z}dx² + e^{-2z}dy² + dz²`, and the ambient curvature tensor is
//! differenced from those symbols.

#![allow(clippy::needless_range_loop)]

use serde::{Deserialize, Serialize};

use crate::surface::CurveState;

/// Step for every stencil below.
pub const FD_STEP: f64 = 1e-3;

type Vec3 = [f64; 3];
type Mat3 = [[f64; 3]; 3];
/// `gamma[k][i][j] = Γ^k_{ij}`
pub type Christoffel = [[[f64; 3]; 3]; 3];

pub fn metric(p: &Vec3) -> Mat3 {
    let z = p[2];
    [
        [(2.0 * z).exp(), 0.0, 0.0],
        [0.0, (-2.0 * z).exp(), 0.0],
        [0.0, 0.0, 1.0],
    ]
}

fn inverse(m: &Mat3) -> Mat3 {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let mut inv = [[0.0; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            *v = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
        }
    }
    inv
}

fn inner(g: &Mat3, u: &Vec3, v: &Vec3) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += g[i][j] * u[i] * v[j];
        }
    }
    acc
}

/// Fourth-order first derivative of a vector-valued function at 0.
fn d1<F: Fn(f64) -> Vec3>(f: F, h: f64) -> Vec3 {
    let (m2, m1, p1, p2) = (f(-2.0 * h), f(-h), f(h), f(2.0 * h));
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h);
    }
    out
}

/// Fourth-order second derivative at 0.
fn d2<F: Fn(f64) -> Vec3>(f: F, h: f64) -> Vec3 {
    let (m2, m1, c, p1, p2) = (f(-2.0 * h), f(-h), f(0.0), f(h), f(2.0 * h));
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = (-m2[k] + 16.0 * m1[k] - 30.0 * c[k] + 16.0 * p1[k] - p2[k]) / (12.0 * h * h);
    }
    out
}

fn shifted(p: &Vec3, axis: usize, d: f64) -> Vec3 {
    let mut q = *p;
    q[axis] += d;
    q
}

/// Christoffel symbols of the coordinate metric, by differencing the metric.
pub fn christoffel(p: &Vec3) -> Christoffel {
    let ginv = inverse(&metric(p));
    // dg[l][i][j] = ∂_l g_ij
    let mut dg = [[[0.0; 3]; 3]; 3];
    for (l, dgl) in dg.iter_mut().enumerate() {
        for i in 0..3 {
            let col = d1(
                |d| {
                    let g = metric(&shifted(p, l, d));
                    g[i]
                },
                FD_STEP,
            );
            dgl[i] = col;
        }
    }
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for (k, gk) in gamma.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for (l, ginv_kl) in ginv[k].iter().enumerate() {
                    acc += ginv_kl * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                }
                gk[i][j] = 0.5 * acc;
            }
        }
    }
    gamma
}

/// Covariant acceleration `ẍ^k + Γ^k_ij ẋ^i ẋ^j` of a coordinate curve at parameter 0.
pub fn coordinate_acceleration<F: Fn(f64) -> Vec3>(curve: F) -> (Vec3, Vec3) {
    let base = curve(0.0);
    let vel = d1(&curve, FD_STEP);
    let acc = d2(&curve, FD_STEP);
    let gamma = christoffel(&base);
    let mut out = acc;
    for (k, o) in out.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                *o += gamma[k][i][j] * vel[i] * vel[j];
            }
        }
    }
    (base, out)
}

/// `<R(u, v)v, u>` at `p`, with `R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_{[X,Y]}Z`.
pub fn curvature_form(p: &Vec3, u: &Vec3, v: &Vec3) -> f64 {
    let gamma = christoffel(p);
    // dgamma[a][k][i][j] = ∂_a Γ^k_ij
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    for (a, dga) in dgamma.iter_mut().enumerate() {
        for k in 0..3 {
            for i in 0..3 {
                let row = d1(|d| christoffel(&shifted(p, a, d))[k][i], FD_STEP);
                dga[k][i] = row;
            }
        }
    }
    // R^l_{k i j}: R(∂_i, ∂_j)∂_k = R^l_{kij} ∂_l
    let riemann = |l: usize, k: usize, i: usize, j: usize| -> f64 {
        let mut r = dgamma[i][l][j][k] - dgamma[j][l][i][k];
        for m in 0..3 {
            r += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
        }
        r
    };
    let mut rvv = [0.0; 3];
    for (l, out) in rvv.iter_mut().enumerate() {
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    *out += riemann(l, k, i, j) * u[i] * v[j] * v[k];
                }
            }
        }
    }
    inner(&metric(p), &rvv, u)
}

/// Osculating arc through `state` with constant curvature `theta_prime`,
/// evaluated `ds` away in arc length.
fn osculating_arc(state: &CurveState, theta_prime: f64, ds: f64) -> (f64, f64) {
    let half = 0.5 * theta_prime * ds;
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    let mid = state.theta + half;
    (state.x + ds * mid.cos() * sinc, state.y + ds * mid.sin() * sinc)
}

fn surface_point(state: &CurveState, theta_prime: f64, ds: f64, t: f64) -> Vec3 {
    let (x, y) = osculating_arc(state, theta_prime, ds);
    [(-t).exp() * x, t.exp() * y, t]
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OracleReport {
    pub first_e: f64,
    pub first_f: f64,
    pub first_g: f64,
    pub second_e: f64,
    pub second_f: f64,
    pub second_g: f64,
    pub h: f64,
    pub k_ext: f64,
    pub k_sec: f64,
    pub k: f64,
}

/// Shape-operator oracle at `ψ(s, t)`; the normal is the oriented
/// (`ψ_s × ψ_t`) unit normal.
pub fn shape_oracle(state: &CurveState, theta_prime: f64, t: f64) -> OracleReport {
    let psi = |ds: f64, dt: f64| surface_point(state, theta_prime, ds, t + dt);
    let p = psi(0.0, 0.0);
    let ps = d1(|d| psi(d, 0.0), FD_STEP);
    let pt = d1(|d| psi(0.0, d), FD_STEP);
    let pss = d2(|d| psi(d, 0.0), FD_STEP);
    let ptt = d2(|d| psi(0.0, d), FD_STEP);
    let pst = d1(|dt| d1(|ds| psi(ds, dt), FD_STEP), FD_STEP);

    let g = metric(&p);
    let gamma = christoffel(&p);
    let cov = |second: &Vec3, u: &Vec3, v: &Vec3| -> Vec3 {
        let mut out = *second;
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    *o += gamma[k][i][j] * u[i] * v[j];
                }
            }
        }
        out
    };
    let nss = cov(&pss, &ps, &ps);
    let nst = cov(&pst, &ps, &pt);
    let ntt = cov(&ptt, &pt, &pt);

    // Euclidean cross product is a covector annihilating both tangents; raise it.
    let cross = [
        ps[1] * pt[2] - ps[2] * pt[1],
        ps[2] * pt[0] - ps[0] * pt[2],
        ps[0] * pt[1] - ps[1] * pt[0],
    ];
    let ginv = inverse(&g);
    let mut n = [0.0; 3];
    for (k, nk) in n.iter_mut().enumerate() {
        for (l, c) in cross.iter().enumerate() {
            *nk += ginv[k][l] * c;
        }
    }
    let norm = inner(&g, &n, &n).sqrt();
    let n = n.map(|v| v / norm);

    let (e1, f1, g1) = (inner(&g, &ps, &ps), inner(&g, &ps, &pt), inner(&g, &pt, &pt));
    let (e2, f2, g2) = (inner(&g, &n, &nss), inner(&g, &n, &nst), inner(&g, &n, &ntt));
    let w = e1 * g1 - f1 * f1;
    let h = (e2 * g1 - 2.0 * f2 * f1 + g2 * e1) / (2.0 * w);
    let k_ext = (e2 * g2 - f2 * f2) / w;
    let k_sec = curvature_form(&p, &ps, &pt) / w;
    OracleReport {
        first_e: e1,
        first_f: f1,
        first_g: g1,
        second_e: e2,
        second_f: f2,
        second_g: g2,
        h,
        k_ext,
        k_sec,
        k: k_ext + k_sec,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differenced_christoffels_match_hand_values() {
        // Γ^x_xz = 1, Γ^y_yz = -1, Γ^z_xx = -e^{2z}, Γ^z_yy = e^{-2z}
        let z: f64 = 0.37;
        let g = christoffel(&[0.4, -1.0, z]);
        let tol = 1e-10;
        assert!((g[0][0][2] - 1.0).abs() < tol);
        assert!((g[1][1][2] + 1.0).abs() < tol);
        assert!((g[2][0][0] + (2.0 * z).exp()).abs() < tol);
        assert!((g[2][1][1] - (-2.0 * z).exp()).abs() < tol);
        assert!(g[2][2][2].abs() < tol && g[0][1][1].abs() < tol);
    }

    #[test]
    fn sectional_curvatures_of_coordinate_planes() {
        let p = [0.0, 0.0, 0.2];
        let ex = [(-0.2f64).exp(), 0.0, 0.0];
        let ey = [0.0, 0.2f64.exp(), 0.0];
        let ez = [0.0, 0.0, 1.0];
        assert!((curvature_form(&p, &ex, &ey) - 1.0).abs() < 1e-7);
        assert!((curvature_form(&p, &ex, &ez) + 1.0).abs() < 1e-7);
        assert!((curvature_form(&p, &ey, &ez) + 1.0).abs() < 1e-7);
    }

    #[test]
    fn plane_through_origin() {
        let r = shape_oracle(&CurveState::new(0.0, 0.0, 0.0, 0.0), 0.0, 0.3);
        assert!(r.h.abs() < 1e-8);
        assert!((r.k + 1.0).abs() < 1e-7);
    }
}
