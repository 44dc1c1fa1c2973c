//! Experiments on generating curves: classification of minimal curves,
//! asymptotes and slabs, qualitative property checks, and the search for
//! closed constant-mean-curvature curves.

pub mod asymptote;
pub mod classify;
pub mod shooting;
pub mod theorems;

pub use asymptote::{
    asymptote_estimate, asymptote_estimate_with, end_asymptote, slab_width, AsymptoteSettings, Axis, End, Line,
};
pub use classify::{
    classify_minimal, classify_minimal_with, inflection_function, inflection_points, Classification, CurveKind,
};
pub use shooting::{closed_curve_search, first_return, ShootingResult, ShootingSettings};
pub use theorems::{theorem_checks, PropertyCheck, TheoremReport};
