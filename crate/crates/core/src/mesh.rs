//! Triangle meshes of invariant surfaces and OBJ export.

use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{ClosedFormCurve, Sample, Trajectory};
use crate::surface::{curvature_report, immersion, CurvatureReport};

/// Parameter rectangle `[s_min, s_max] × [t_min, t_max]` sampled `n_s × n_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub s_min: f64,
    pub s_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n_s: usize,
    pub n_t: usize,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.n_s < 2 || self.n_t < 2 {
            return Err(Error::DegenerateGrid(format!(
                "need at least 2 samples per direction, got {} × {}",
                self.n_s, self.n_t
            )));
        }
        let bounds = [self.s_min, self.s_max, self.t_min, self.t_max];
        if !bounds.iter().all(|v| v.is_finite()) || self.s_min >= self.s_max || self.t_min >= self.t_max {
            return Err(Error::DegenerateGrid(format!(
                "empty or non-finite range s ∈ [{}, {}], t ∈ [{}, {}]",
                self.s_min, self.s_max, self.t_min, self.t_max
            )));
        }
        Ok(())
    }

    fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    pub fn s(&self, i: usize) -> f64 {
        Self::lerp(self.s_min, self.s_max, i, self.n_s)
    }

    pub fn t(&self, j: usize) -> f64 {
        Self::lerp(self.t_min, self.t_max, j, self.n_t)
    }
}

/// `sMIN:sMAX:tMIN:tMAX:NS:NT`
impl FromStr for Grid {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 6 {
            return Err(Error::Parse(format!(
                "grid `{text}` must have the form sMIN:sMAX:tMIN:tMAX:NS:NT"
            )));
        }
        let real = |i: usize| {
            parts[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("grid field {} `{}`: {e}", i + 1, parts[i])))
        };
        let count = |i: usize| {
            parts[i]
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("grid field {} `{}`: {e}", i + 1, parts[i])))
        };
        let grid = Grid {
            s_min: real(0)?,
            s_max: real(1)?,
            t_min: real(2)?,
            t_max: real(3)?,
            n_s: count(4)?,
            n_t: count(5)?,
        };
        grid.validate()?;
        Ok(grid)
    }
}

/// Anything that can be evaluated along its arc length.
pub trait GeneratingCurve {
    fn sample_at(&self, s: f64) -> Result<Sample>;
}

impl GeneratingCurve for Trajectory {
    fn sample_at(&self, s: f64) -> Result<Sample> {
        self.state_at(s)
    }
}

impl GeneratingCurve for Arc<dyn ClosedFormCurve> {
    fn sample_at(&self, s: f64) -> Result<Sample> {
        Ok(self.sample(s))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub grid: Grid,
    /// `ψ(s_i, t_j)` at index `i · n_t + j`.
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based triangles.
    pub faces: Vec<[usize; 3]>,
    /// Curvatures along the generating curve, one per `s_i` (independent of `t`).
    pub curvature: Vec<CurvatureReport>,
}

pub fn build_mesh(curve: &dyn GeneratingCurve, grid: &Grid) -> Result<Mesh> {
    grid.validate()?;
    let (ns, nt) = (grid.n_s, grid.n_t);
    let mut vertices = Vec::with_capacity(ns * nt);
    let mut curvature = Vec::with_capacity(ns);
    for i in 0..ns {
        let p = curve.sample_at(grid.s(i))?;
        curvature.push(curvature_report(&p.state, p.theta_prime));
        for j in 0..nt {
            vertices.push(immersion(&p.state, grid.t(j)).as_array());
        }
    }
    let idx = |i: usize, j: usize| i * nt + j;
    let mut faces = Vec::with_capacity(2 * (ns - 1) * (nt - 1));
    for i in 0..ns - 1 {
        for j in 0..nt - 1 {
            // (ψ_s, ψ_t) ordering so the face normal matches the surface normal.
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    Ok(Mesh {
        grid: *grid,
        vertices,
        faces,
        curvature,
    })
}

pub fn write_obj<W: Write>(mesh: &Mesh, mut out: W) -> Result<()> {
    let g = &mesh.grid;
    writeln!(
        out,
        "# invariant surface, s in [{}, {}] x t in [{}, {}], {} x {} vertices",
        g.s_min, g.s_max, g.t_min, g.t_max, g.n_s, g.n_t
    )?;
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::{CurveParams, CurveRegistry};
    use crate::space::{FrameVector, SolPoint};
    use crate::surface::unit_normal;

    fn closed(name: &str, params: CurveParams) -> Arc<dyn ClosedFormCurve> {
        CurveRegistry::builtin().create(name, &params).unwrap()
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "-1:1:-0.5:0.5:11:7".parse().unwrap();
        assert_eq!((g.n_s, g.n_t, g.s_min, g.t_max), (11, 7, -1.0, 0.5));
        assert_eq!(g.s(10), 1.0);
        assert!(matches!("0:1:0:1:1:5".parse::<Grid>(), Err(Error::DegenerateGrid(_))));
        assert!(matches!("1:1:0:1:3:5".parse::<Grid>(), Err(Error::DegenerateGrid(_))));
        assert!(matches!("0:1:0:1:3".parse::<Grid>(), Err(Error::Parse(_))));
        assert!("0:1:a:1:3:3".parse::<Grid>().is_err());
    }

    #[test]
    fn type_iii_vertices_lie_on_graph() {
        let c = closed("type-iii", CurveParams::default());
        let m = build_mesh(&c, &"-1:1:-1:1:9:9".parse().unwrap()).unwrap();
        assert_eq!(m.vertices.len(), 81);
        assert_eq!(m.faces.len(), 128);
        for v in &m.vertices {
            if v[0].abs() > 1e-12 {
                assert!((v[1] / v[0] - (2.0 * v[2]).exp()).abs() < 1e-12 * (2.0 * v[2]).exp());
            }
        }
    }

    #[test]
    fn type_i_rows_are_x_parallel_lines() {
        let c = closed(
            "type-i",
            CurveParams {
                x0: 0.0,
                y0: 0.5,
                r: 1.0,
            },
        );
        let m = build_mesh(&c, &"-2:2:-1:1:5:4".parse().unwrap()).unwrap();
        for j in 0..4 {
            let col: Vec<_> = (0..5).map(|i| m.vertices[i * 4 + j]).collect();
            assert!(col.iter().all(|v| v[1] == col[0][1] && v[2] == col[0][2]));
        }
    }

    #[test]
    fn flat_circle_has_zero_curvature() {
        let c = closed("flat-circle", CurveParams::default());
        let m = build_mesh(&c, &"0:6.283185307179586:-1:1:40:5".parse().unwrap()).unwrap();
        assert!(m.curvature.iter().all(|r| r.k.abs() < 1e-10));
    }

    #[test]
    fn winding_matches_surface_normal() {
        let tr = crate::ode::integrate(
            Arc::new(crate::ode::Minimal),
            crate::ode::InitialCondition::new(0.4, -0.3, 0.7),
            &crate::ode::OdeSettings::default().with_max_s(2.0),
        )
        .unwrap();
        let grid: Grid = "-1:1:-0.6:0.6:21:13".parse().unwrap();
        let m = build_mesh(&tr, &grid).unwrap();
        let (ci, cj) = (10, 6);
        let f = m.faces[2 * (ci * (grid.n_t - 1) + cj)];
        let [a, b, c] = [m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]];
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let n_face = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        let p = tr.state_at(grid.s(ci)).unwrap().state;
        let base = SolPoint::new(a[0], a[1], a[2]);
        let n: FrameVector = unit_normal(&p);
        let nt = n.to_tangent(base);
        let dot = n_face[0] * nt.vx + n_face[1] * nt.vy + n_face[2] * nt.vz;
        assert!(dot > 0.0);
    }

    #[test]
    fn obj_output_shape() {
        let c = closed("type-i", CurveParams::default());
        let m = build_mesh(&c, &"0:1:0:1:2:2".parse().unwrap()).unwrap();
        let mut buf = Vec::new();
        write_obj(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let v = text.lines().filter(|l| l.starts_with("v ")).count();
        let f: Vec<_> = text.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(v, 4);
        assert_eq!(f, vec!["f 1 3 4", "f 1 4 2"]);
    }
}
