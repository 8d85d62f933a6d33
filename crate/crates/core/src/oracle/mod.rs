//! Independent routes to every closed-form observable.
//!
//! * [`moment_ode_solve`] integrates the second-moment equations implied by
//!   the quantum Langevin equations with classical RK4.
//! * [`fourth_moment_expand`] (and [`normally_ordered`] for other
//!   orderings) expands output moments over all input/noise assignments,
//!   evaluating the input part on an explicit Fock state and the noise part
//!   with Wick's theorem.
//!
//! Neither route touches the closed-form antiderivatives or the hard-coded
//! input moment table used by [`crate::observables`].

mod fock;
mod moment_ode;
mod wick;

pub use fock::{FockState, Ladder};
pub use moment_ode::{moment_ode_solve, MomentVector, OracleError, MIN_STEPS};
pub use wick::{fourth_moment_expand, noise_covariance, normally_ordered, NoiseCovariance, OutputOp};
