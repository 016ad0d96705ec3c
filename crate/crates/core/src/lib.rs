//! Analysis toolkit for the discrete phytoplankton-zooplankton map
//!
//! ```text
//! u' = u(2 - u) - u^h v / (1 + c u^h)
//! v' = gamma u^h v / (1 + c u^h) + (1 - r) v
//! ```
//!
//! with `h = 1` (Holling type II) or `h = 2` (Holling type III).
//!
//! Modules:
//! - [`model`]: parameters, the map, its Jacobian and fixed points.
//! - [`stability`]: Jury-type classification and the critical `gamma0`.
//! - [`ns_bifurcation`]: normal-form coefficients and the first Lyapunov quantity.
//! - [`control`]: linear feedback control and the stable-gain triangle.
//! - [`global`]: invariant regions and convergence to the prey-only state.
//! - [`orbit`]: trajectories, Lyapunov exponents and parameter sweeps.
//! - [`output`] and [`cli`]: CSV/JSON encodings and the command-line front end.

pub mod cli;
pub mod control;
pub mod error;
pub mod global;
pub mod model;
pub mod ns_bifurcation;
pub mod orbit;
pub mod output;
pub mod roots;
pub mod stability;

pub use control::{control_triangle, ControlGains, ControlTriangle};
pub use error::{Error, Result};
pub use global::{InvariantSet, SetKind};
pub use model::{jacobian, positive_fixed_point, step, Jacobian2x2, ModelParams, PlanktonState};
pub use ns_bifurcation::{lyapunov_quantity, NsReport};
pub use orbit::{max_lyapunov, simulate, OrbitRecord};
pub use stability::{critical_gamma, StabilityClass};
