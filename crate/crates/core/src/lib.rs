//! Semi-implicit staggered finite-volume / finite-element solver for the
//! two-dimensional shallow water equations.
//!
//! Free-surface elevation lives on the vertices of a triangular mesh and is
//! advanced with continuous P1 finite elements. Momentum lives on an
//! edge-based dual mesh and is transported with an explicit Rusanov or
//! LADER-ENO finite-volume scheme. Only the convective velocity enters the
//! time step, so the method runs at any Froude number.

pub mod cases;
pub mod drivers;
pub mod error;
pub mod geom;
pub mod io;
pub mod mesh;
pub mod norms;
pub mod projection;
pub mod solver;
pub mod sparse;
pub mod state;
pub mod transport;

pub use error::{ConfigError, Error, MeshError, SolveError, StepError};
pub use geom::Vec2;
pub use mesh::Mesh;
pub use state::{NumericsConfig, PhysicalParams, Scheme, State};
