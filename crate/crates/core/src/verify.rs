//! Seeded comparison of the closed-form invariants against the coordinate oracle.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ode::circle_flat;
use crate::oracle::{shape_oracle, OracleReport};
use crate::surface::{curvature_report, fundamental_forms, CurveState};

pub const VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyCase {
    pub label: &'static str,
    pub state: CurveState,
    pub theta_prime: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Deviation {
    pub h: f64,
    pub k: f64,
    pub forms: f64,
}

impl Deviation {
    pub fn max(&self) -> f64 {
        self.h.max(self.k).max(self.forms)
    }

    fn merge(&mut self, o: &Deviation) {
        self.h = self.h.max(o.h);
        self.k = self.k.max(o.k);
        self.forms = self.forms.max(o.forms);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedCheck {
    pub label: &'static str,
    pub h: f64,
    pub k: f64,
    pub oracle_h: f64,
    pub oracle_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub max_deviation: f64,
    pub deviation: Deviation,
    pub worst_case: Option<VerifyCase>,
    pub fixed: Vec<FixedCheck>,
    pub passed: bool,
}

pub fn random_cases(samples: usize, seed: u64) -> Vec<VerifyCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| VerifyCase {
            label: "random",
            state: CurveState::new(
                0.0,
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-PI..PI),
            ),
            theta_prime: rng.random_range(-2.0..2.0),
            t: rng.random_range(-1.0..1.0),
        })
        .collect()
}

pub fn fixed_cases() -> Vec<VerifyCase> {
    let (circle, tp) = circle_flat(1.0, 0.0).expect("unit radius is valid");
    vec![
        VerifyCase {
            label: "plane",
            state: CurveState::new(0.0, 0.0, 0.0, 0.0),
            theta_prime: 0.0,
            t: 0.0,
        },
        VerifyCase {
            label: "flat-circle",
            state: circle,
            theta_prime: tp,
            t: 0.0,
        },
    ]
}

pub fn case_deviation(c: &VerifyCase) -> (Deviation, OracleReport) {
    let o = shape_oracle(&c.state, c.theta_prime, c.t);
    let r = curvature_report(&c.state, c.theta_prime);
    let f = fundamental_forms(&c.state, c.theta_prime);
    let forms = [
        f.first.e - o.first_e,
        f.first.f - o.first_f,
        f.first.g - o.first_g,
        f.second.e - o.second_e,
        f.second.f - o.second_f,
        f.second.g - o.second_g,
    ]
    .iter()
    .fold(0.0f64, |m, d| m.max(d.abs()));
    (
        Deviation {
            h: (r.h - o.h).abs(),
            k: (r.k - o.k).abs(),
            forms,
        },
        o,
    )
}

pub fn verify(samples: usize, seed: u64) -> VerifyReport {
    let mut deviation = Deviation::default();
    let mut worst: Option<(f64, VerifyCase)> = None;
    let mut fixed = Vec::new();
    for c in fixed_cases().into_iter().chain(random_cases(samples, seed)) {
        let (d, o) = case_deviation(&c);
        deviation.merge(&d);
        if worst.is_none_or(|(m, _)| d.max() > m) {
            worst = Some((d.max(), c));
        }
        if c.label != "random" {
            let r = curvature_report(&c.state, c.theta_prime);
            fixed.push(FixedCheck {
                label: c.label,
                h: r.h,
                k: r.k,
                oracle_h: o.h,
                oracle_k: o.k,
            });
        }
    }
    let max_deviation = deviation.max();
    VerifyReport {
        seed,
        samples,
        max_deviation,
        deviation,
        worst_case: worst.map(|(_, c)| c),
        fixed,
        passed: max_deviation < VERIFY_TOL,
    }
}
