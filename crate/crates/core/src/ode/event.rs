//! Sign-change location on trajectories.

use super::{Sample, Trajectory};

fn bisect<P: Fn(&Sample) -> f64>(traj: &Trajectory, pred: &P, mut a: f64, mut fa: f64, mut b: f64) -> f64 {
    let tol = traj.settings().event_tol;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = match traj.state_at(m) {
            Ok(p) => pred(&p),
            Err(_) => break,
        };
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// First `s > 0` at which `pred` changes sign (or vanishes at a sample),
/// refined on the dense output to `event_tol`.
pub fn find_event<P: Fn(&Sample) -> f64>(traj: &Trajectory, pred: P) -> Option<f64> {
    let fwd = traj.forward();
    let mut prev = (fwd[0].s(), pred(&fwd[0]));
    for p in &fwd[1..] {
        let v = pred(p);
        if v == 0.0 {
            return Some(p.s());
        }
        if prev.1 != 0.0 && (v > 0.0) != (prev.1 > 0.0) {
            return Some(bisect(traj, &pred, prev.0, prev.1, p.s()));
        }
        prev = (p.s(), v);
    }
    None
}

/// Every zero of `pred` over the whole trajectory, in increasing `s`. Exact
/// zeros at samples are reported once.
pub fn find_roots<P: Fn(&Sample) -> f64>(traj: &Trajectory, pred: P) -> Vec<f64> {
    let samples = traj.samples();
    let mut roots = Vec::new();
    let mut prev = (samples[0].s(), pred(&samples[0]));
    if prev.1 == 0.0 {
        roots.push(prev.0);
    }
    for p in &samples[1..] {
        let v = pred(p);
        if v == 0.0 {
            roots.push(p.s());
        } else if prev.1 != 0.0 && (v > 0.0) != (prev.1 > 0.0) {
            roots.push(bisect(traj, &pred, prev.0, prev.1, p.s()));
        }
        prev = (p.s(), v);
    }
    roots
}
