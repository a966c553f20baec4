//! Cubic and general-power NLS with a point interaction at the origin in 2D,
//! solved on a radial grid.

// `!(x > 0.0)` is how parameter checks reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod evolution;
pub mod functionals;
pub mod grid;
pub mod ground_state;
pub mod inequality;
pub mod operator;
pub mod runner;
pub mod snapshot;
pub mod specfun;
pub mod state;
pub mod virial;

pub use error::{Error, Result};
pub use functionals::{ActionConvention, FunctionalReport, Sign};
pub use grid::RadialGrid;
pub use operator::{apply_delta_alpha, bound_state, resolvent, PointInteraction, ResolventWorkspace};
pub use state::{DecomposedState, Norms};
