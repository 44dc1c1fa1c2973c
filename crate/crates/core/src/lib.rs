//! Geometry of surfaces in Sol₃ invariant under the vertical left translations.

pub mod analysis;
pub mod error;
pub mod io;
pub mod mesh;
pub mod ode;
pub mod oracle;
pub mod space;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
