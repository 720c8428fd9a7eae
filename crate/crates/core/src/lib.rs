//! Numerical laboratory for the supercritical coupled Lane-Emden system
//! `(-Delta)^s u_i = |u|^{p-1} u_i` on `R^n`.
//!
//! The crate computes the objects attached to the classification theory of
//! finite Morse index solutions of the system: Sobolev and Joseph-Lundgren
//! critical exponents, explicit singular solutions and their stability,
//! monotonicity energies along radial solutions, the angular equation on the
//! sphere for the fourth order case, and the nonlocal sphere kernels for
//! fractional orders. Closed-form Gamma identities and independent quadrature
//! routes cross-check each other throughout.

pub mod angular;
pub mod cli;
pub mod energy;
pub mod error;
pub mod exponents;
pub mod fractional;
pub mod gamma;
pub mod quad;
pub mod radial;
pub mod singular;

pub use error::{Error, Result};
pub use exponents::{ProblemParams, Regime, RegimeTag};
pub use radial::{RadialSolution, ShootingConfig};
pub use singular::SingularSolution;
