use std::f64::consts::PI;
use std::sync::Arc;

use sol3_core::io::*;
use sol3_core::mesh::*;
use sol3_core::ode::*;

#[test]
fn plane_rows() {
    let tr = integrate(
        Arc::new(Minimal),
        InitialCondition::new(0.0, 0.0, 0.0),
        &OdeSettings::default(),
    )
    .unwrap();
    let text = to_csv_string(&records(&tr)).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    for r in read_csv(text.as_bytes()).unwrap() {
        assert_eq!((r.y, r.theta, r.theta_prime, r.h), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(r.k, -1.0);
    }
}

#[test]
fn cmc_h_column_is_constant() {
    let tr = integrate(
        Arc::new(ConstantMeanCurvature { h: 1.0 }),
        InitialCondition::new(0.0, 0.6425, 0.0),
        &OdeSettings::default().with_max_s(8.0),
    )
    .unwrap();
    let rows = records(&tr);
    assert_eq!(rows.len(), tr.samples().len());
    assert!(rows.iter().all(|r| (r.h - 1.0).abs() < 1e-8));
    assert!(rows.windows(2).all(|w| w[0].s < w[1].s));
}

#[test]
fn csv_round_trip_is_identity() {
    let tr = integrate(
        Arc::new(Minimal),
        InitialCondition::new(1.0, 2.0, PI / 3.0),
        &OdeSettings::default(),
    )
    .unwrap();
    let first = to_csv_string(&records(&tr)).unwrap();
    let again = to_csv_string(&read_csv(first.as_bytes()).unwrap()).unwrap();
    assert_eq!(first, again);
    assert_eq!(read_csv(first.as_bytes()).unwrap(), records(&tr));
}

#[test]
fn csv_reader_rejects_bad_input() {
    assert!(read_csv("s,x,y\n0,0,0\n".as_bytes()).is_err());
    let unordered = format!("{CSV_HEADER}\n1,0,0,0,0,0,-1\n0,0,0,0,0,0,-1\n");
    assert!(read_csv(unordered.as_bytes()).is_err());
}

fn closed(name: &str, params: &CurveParams) -> Arc<dyn ClosedFormCurve> {
    CurveRegistry::builtin().create(name, params).unwrap()
}

#[test]
fn diagonal_mesh_lies_on_the_log_graph() {
    let grid: Grid = "-1:1:-1:1:9:9".parse().unwrap();
    let mesh = build_mesh(&closed("type-iii", &CurveParams::default()), &grid).unwrap();
    assert_eq!(mesh.vertices.len(), 81);
    assert_eq!(mesh.faces.len(), 2 * 8 * 8);
    for v in &mesh.vertices {
        if v[0].abs() > 1e-12 {
            assert!((v[1] / v[0] - (2.0 * v[2]).exp()).abs() < 1e-12 * (2.0 * v[2]).exp());
        }
    }
}

#[test]
fn horizontal_line_mesh_is_ruled_by_x_lines() {
    let params = CurveParams {
        y0: 0.5,
        ..CurveParams::default()
    };
    let grid = Grid {
        s_min: -1.0,
        s_max: 1.0,
        t_min: -0.5,
        t_max: 0.5,
        n_s: 5,
        n_t: 4,
    };
    let mesh = build_mesh(&closed("type-i", &params), &grid).unwrap();
    // Along each t-column the vertices differ only in x.
    for j in 0..grid.n_t {
        let base = mesh.vertices[j];
        for i in 1..grid.n_s {
            let v = mesh.vertices[i * grid.n_t + j];
            assert_eq!((v[1], v[2]), (base[1], base[2]));
        }
    }
}

#[test]
fn flat_circle_mesh_is_flat() {
    let grid: Grid = format!("0:{}:-1:1:100:3", 2.0 * PI).parse().unwrap();
    let mesh = build_mesh(&closed("flat-circle", &CurveParams::default()), &grid).unwrap();
    assert!(mesh.curvature.iter().all(|c| c.k.abs() < 1e-10));
}

#[test]
fn obj_output_counts_and_indices() {
    let grid: Grid = "0:1:0:1:3:2".parse().unwrap();
    let mesh = build_mesh(&closed("type-ii", &CurveParams::default()), &grid).unwrap();
    let mut buf = Vec::new();
    write_obj(&mesh, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 6);
    let faces: Vec<Vec<usize>> = text
        .lines()
        .filter_map(|l| l.strip_prefix("f "))
        .map(|l| l.split(' ').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(faces.len(), 4);
    assert!(faces.iter().flatten().all(|&i| (1..=6).contains(&i)));
}

#[test]
fn degenerate_grids_are_rejected() {
    for g in ["0:1:0:1:1:5", "1:0:0:1:3:3", "0:1:0:1:3", "a:1:0:1:3:3"] {
        let r = g
            .parse::<Grid>()
            .and_then(|grid| build_mesh(&closed("type-i", &CurveParams::default()), &grid));
        assert!(r.is_err(), "{g}");
    }
}
