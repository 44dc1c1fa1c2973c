//! Dormand–Prince 5(4) with PI step control and 4th-order dense output, for
//! autonomous 3-dimensional systems integrated forward in a time `t ≥ 0`.

use crate::error::{Error, Result};

pub type State = [f64; 3];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 5_000_000;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
}

/// Continuous extension over one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    rcont: [State; 5],
}

impl DenseSegment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64) -> State {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let r = &self.rcont;
        std::array::from_fn(|i| r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i]))))
    }
}

/// One integration run: accepted nodes (starting at `t = 0`) and their segments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Branch {
    pub nodes: Vec<(f64, State)>,
    pub segments: Vec<DenseSegment>,
}

impl Branch {
    pub fn end(&self) -> f64 {
        self.nodes.last().map_or(0.0, |n| n.0)
    }

    /// Dense value at `t` in `[0, end]`.
    pub fn eval(&self, t: f64) -> Option<State> {
        if t < 0.0 || t > self.end() {
            return None;
        }
        if self.segments.is_empty() {
            return self.nodes.first().map(|n| n.1);
        }
        let idx = self.segments.partition_point(|seg| seg.t1() < t);
        let seg = &self.segments[idx.min(self.segments.len() - 1)];
        Some(seg.eval(t))
    }
}

fn error_scale(tol: &Tolerances, a: &State, b: &State) -> State {
    std::array::from_fn(|i| tol.abs_tol + tol.rel_tol * a[i].abs().max(b[i].abs()))
}

fn rms(v: &State, sk: &State) -> f64 {
    (v.iter().zip(sk).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / 3.0).sqrt()
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn finite(v: &State) -> bool {
    v.iter().all(|c| c.is_finite())
}

fn initial_step<F: Fn(&State) -> State>(f: &F, y0: &State, f0: &State, tol: &Tolerances) -> f64 {
    let sk = error_scale(tol, y0, y0);
    let d0 = rms(y0, &sk);
    let d1 = rms(f0, &sk);
    let h0 = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(tol.max_step);
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = f(&y1);
    let diff: State = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = if finite(&f1) {
        rms(&diff, &sk) / h0
    } else {
        f64::INFINITY
    };
    let m = d1.max(d2);
    let h1 = if m <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / m).powf(0.2)
    };
    (100.0 * h0).min(h1).min(tol.max_step)
}

/// Integrates `y' = f(y)` from `t = 0` to `t_end`, or until `stop` returns true
/// after an accepted step. `sign` only orients the parameter reported on failure.
pub fn integrate<F, S>(f: F, y0: State, t_end: f64, tol: &Tolerances, sign: f64, mut stop: S) -> Result<Branch>
where
    F: Fn(&State) -> State,
    S: FnMut(f64, &State) -> bool,
{
    let mut branch = Branch {
        nodes: vec![(0.0, y0)],
        segments: Vec::new(),
    };
    let mut k1 = f(&y0);
    if !finite(&k1) {
        return Err(Error::IntegrationFailure {
            last_good_s: 0.0,
            reason: "right-hand side is not finite at the initial condition".into(),
        });
    }
    if t_end <= 0.0 {
        return Ok(branch);
    }
    let mut t = 0.0;
    let mut y = y0;
    let mut h = initial_step(&f, &y, &k1, tol);
    let mut facold: f64 = 1e-4;
    let mut rejected = false;

    for _ in 0..MAX_STEPS {
        if t >= t_end {
            return Ok(branch);
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::IntegrationFailure {
                last_good_s: sign * t,
                reason: format!("step size underflow (h = {h:e})"),
            });
        }

        let k2 = f(&axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(&axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(&axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(&axpy(
            &y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(&y1);

        let ok = [&k2, &k3, &k4, &k5, &k6, &k7, &y1].iter().all(|v| finite(v));
        let err = if ok {
            let est: State = std::array::from_fn(|i| {
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
            });
            rms(&est, &error_scale(tol, &y, &y1))
        } else {
            f64::INFINITY
        };

        if !err.is_finite() {
            h *= FAC_MIN;
            rejected = true;
            continue;
        }

        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut hnew = h / fac;
            facold = err.max(1e-4);

            let ydiff: State = std::array::from_fn(|i| y1[i] - y[i]);
            let bspl: State = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let r4: State = std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]);
            let r5: State = std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            branch.segments.push(DenseSegment {
                t0: t,
                h,
                rcont: [y, ydiff, bspl, r4, r5],
            });

            t = if last { t_end } else { t + h };
            y = y1;
            k1 = k7;
            branch.nodes.push((t, y));
            if stop(t, &y) {
                return Ok(branch);
            }
            if rejected {
                hnew = hnew.min(h);
            }
            rejected = false;
            h = hnew.min(tol.max_step);
        } else {
            h /= (fac11 / SAFE).min(1.0 / FAC_MIN);
            rejected = true;
        }
    }
    Err(Error::IntegrationFailure {
        last_good_s: sign * t,
        reason: format!("exceeded {MAX_STEPS} steps"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(v: f64) -> Tolerances {
        Tolerances {
            abs_tol: v,
            rel_tol: v,
            max_step: 0.1,
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let f = |y: &State| [y[1], -y[0], 1.0];
        let b = integrate(f, [0.0, 1.0, 0.0], 10.0, &tol(1e-11), 1.0, |_, _| false).unwrap();
        assert_eq!(b.end(), 10.0);
        for &(t, y) in &b.nodes {
            assert!((y[0] - t.sin()).abs() < 1e-8);
            assert!((y[2] - t).abs() < 1e-12);
        }
        for k in 0..1000 {
            let t = 0.01 * k as f64;
            let y = b.eval(t).unwrap();
            assert!((y[0] - t.sin()).abs() < 1e-8, "t={t}: {}", y[0] - t.sin());
        }
        assert!(b.eval(10.5).is_none());
    }

    #[test]
    fn dense_output_matches_endpoints() {
        let f = |y: &State| [y[0], -2.0 * y[1], 0.0];
        let b = integrate(f, [1.0, 1.0, 3.0], 2.0, &tol(1e-9), 1.0, |_, _| false).unwrap();
        for (seg, w) in b.segments.iter().zip(b.nodes.windows(2)) {
            assert_eq!(seg.eval(seg.t0), w[0].1);
            let e = seg.eval(seg.t1());
            for (a, b) in e.iter().zip(&w[1].1) {
                assert!((a - b).abs() < 1e-14 * (1.0 + a.abs()));
            }
        }
    }

    #[test]
    fn stop_predicate_ends_run() {
        let f = |_: &State| [1.0, 0.0, 0.0];
        let b = integrate(f, [0.0; 3], 100.0, &tol(1e-9), 1.0, |_, y| y[0] > 1.0).unwrap();
        assert!(b.end() > 1.0 && b.end() < 1.2);
    }

    #[test]
    fn blow_up_reports_failure() {
        let f = |y: &State| [y[0] * y[0], 0.0, 0.0];
        match integrate(f, [1.0, 0.0, 0.0], 2.0, &tol(1e-10), -1.0, |_, _| false) {
            Err(Error::IntegrationFailure { last_good_s, .. }) => {
                assert!(last_good_s < -0.9 && last_good_s > -1.0)
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn deterministic() {
        let f = |y: &State| [y[1].cos(), y[0].sin(), y[2] * 0.1];
        let a = integrate(f, [0.1, 0.2, 0.3], 5.0, &tol(1e-10), 1.0, |_, _| false).unwrap();
        let b = integrate(f, [0.1, 0.2, 0.3], 5.0, &tol(1e-10), 1.0, |_, _| false).unwrap();
        assert_eq!(a, b);
    }
}
