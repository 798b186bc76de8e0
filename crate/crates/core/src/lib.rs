//! Higher-order Godunov solver for the one-dimensional radiation moment
//! subsystem
//!
//! ```text
//!   dE_r/dt + C dF_r/dx   =  C sigma_a (T^4 - E_r)
//!   dF_r/dt + C f dE_r/dx = -C sigma_t F_r
//! ```
//!
//! with the material temperature `T` entering as a parameter. The scheme is
//! an unsplit predictor-corrector: the predictor folds the stiff source into
//! the hyperbolic structure through a time-averaged propagation operator
//! (giving an effective Jacobian with reduced characteristic speeds), and the
//! corrector is a single linearly-implicit Picard correction that treats the
//! time-centred flux divergence as a frozen source.
//!
//! Module map:
//!
//! * [`model`]: conserved state, physical parameters, flux and source terms
//! * [`grid`]: cell-centred storage with ghost cells and boundary fills
//! * [`eigensystem`]: propagation weights and the effective eigen-decomposition
//! * [`reconstruction`]: limited piecewise-linear characteristic face states
//! * [`riemann`]: HLLE interface flux
//! * [`timestepper`]: time-step control, flux divergence, Picard corrector
//! * [`problems`]: the standard test problems and their reference solutions
//! * [`analysis`]: error norms, restriction and Richardson convergence rates

pub mod analysis;
pub mod eigensystem;
pub mod error;
pub mod grid;
pub mod model;
pub mod problems;
pub mod reconstruction;
pub mod riemann;
pub mod timestepper;

pub use error::{Error, Result};
pub use grid::{BoundaryKind, GridField};
pub use model::{ConservedState, Mat2, PhysParams, Temperature};
