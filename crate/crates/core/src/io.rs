//! CSV persistence of trajectories.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{Sample, Trajectory};
use crate::surface::curvature_report;

pub const CSV_HEADER: &str = "s,x,y,theta,theta_prime,H,K";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub theta_prime: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

impl CurveRecord {
    pub fn from_sample(p: &Sample) -> Self {
        let c = curvature_report(&p.state, p.theta_prime);
        Self {
            s: p.state.s,
            x: p.state.x,
            y: p.state.y,
            theta: p.state.theta,
            theta_prime: p.theta_prime,
            h: c.h,
            k: c.k,
        }
    }
}

pub fn records(traj: &Trajectory) -> Vec<CurveRecord> {
    traj.samples().iter().map(CurveRecord::from_sample).collect()
}

/// Writes the header and one row per record. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_csv<W: Write>(out: W, records: &[CurveRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(records: &[CurveRecord]) -> Result<String> {
    let mut buf = Vec::new();
    if records.is_empty() {
        buf.extend_from_slice(CSV_HEADER.as_bytes());
        buf.push(b'\n');
    } else {
        write_csv(&mut buf, records)?;
    }
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CurveRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::Parse(format!(
            "unexpected header `{header}`, expected `{CSV_HEADER}`"
        )));
    }
    let rows = r.deserialize().collect::<std::result::Result<Vec<CurveRecord>, _>>()?;
    if rows
        .windows(2)
        .any(|w| w[0].s.partial_cmp(&w[1].s) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::Parse("rows are not strictly increasing in s".into()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::{integrate, InitialCondition, Minimal, OdeSettings};
    use std::sync::Arc;

    fn sample_traj() -> Trajectory {
        integrate(
            Arc::new(Minimal),
            InitialCondition::new(0.2, -0.4, 0.9),
            &OdeSettings::default().with_max_s(1.0),
        )
        .unwrap()
    }

    #[test]
    fn header_and_round_trip() {
        let recs = records(&sample_traj());
        let text = to_csv_string(&recs).unwrap();
        assert!(text.starts_with("s,x,y,theta,theta_prime,H,K\n"));
        let back = read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, recs);
        assert_eq!(to_csv_string(&back).unwrap(), text);
    }

    #[test]
    fn plane_rows() {
        let tr = integrate(
            Arc::new(Minimal),
            InitialCondition::new(0.0, 0.0, 0.0),
            &OdeSettings::default().with_max_s(1.0),
        )
        .unwrap();
        for r in records(&tr) {
            assert_eq!((r.y, r.theta, r.h, r.k), (0.0, 0.0, 0.0, -1.0));
        }
    }

    #[test]
    fn rejects_bad_header() {
        assert!(matches!(read_csv("s,x,y\n0,0,0\n".as_bytes()), Err(Error::Parse(_))));
    }

    #[test]
    fn rejects_unordered_rows() {
        let text = "s,x,y,theta,theta_prime,H,K\n1,0,0,0,0,0,-1\n0,0,0,0,0,0,-1\n";
        assert!(read_csv(text.as_bytes()).is_err());
    }
}
