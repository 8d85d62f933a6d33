//! RK4 on the closed second-moment system.
//!
//! Differentiating `n_a = ⟨a†a⟩`, `n_b = ⟨b†b⟩`, `m = ⟨a†b⟩` along the
//! Langevin equations `a′ = g·a − i·b + f_a`, `b′ = −g·b − i·a + f_b`, with
//! the Itô-like source `⟨f_a† f_a⟩ = 2g·δ` and `⟨f_b† f_b⟩ = 0`:
//!
//! ```text
//!     n_a′ =  2g·n_a + i(m* − m) + 2g
//!     n_b′ = −2g·n_b + i(m − m*)
//!     m′   =  i(n_b − n_a)
//! ```

use num_complex::Complex64;
use thiserror::Error;

use super::fock::{FockState, Ladder};
use crate::model::SystemParams;
use crate::observables::InputState;

pub const MIN_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("RK4 needs at least {MIN_STEPS} steps, got {0}")]
    TooFewSteps(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentVector {
    pub n_a: f64,
    pub n_b: f64,
    /// `⟨a†b⟩`
    pub m: Complex64,
}

impl MomentVector {
    /// Second moments of `input`, read off its Fock representation.
    pub fn from_input(input: InputState) -> Self {
        let s = FockState::from_input(input);
        Self {
            n_a: s.expectation(&[Ladder::ADag, Ladder::A]).re,
            n_b: s.expectation(&[Ladder::BDag, Ladder::B]).re,
            m: s.expectation(&[Ladder::ADag, Ladder::B]),
        }
    }

    fn derivative(&self, g: f64) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let m = self.m;
        MomentVector {
            n_a: 2.0 * g * self.n_a + (i * (m.conj() - m)).re + 2.0 * g,
            n_b: -2.0 * g * self.n_b + (i * (m - m.conj())).re,
            m: i * (self.n_b - self.n_a),
        }
    }

    fn axpy(&self, h: f64, d: &Self) -> Self {
        MomentVector {
            n_a: self.n_a + h * d.n_a,
            n_b: self.n_b + h * d.n_b,
            m: self.m + d.m * h,
        }
    }
}

/// Integrate from `initial` at `l = 0` to `params.l()` with `steps` equal
/// RK4 steps.
pub fn moment_ode_solve(
    initial: MomentVector,
    params: SystemParams,
    steps: usize,
) -> Result<MomentVector, OracleError> {
    if steps < MIN_STEPS {
        return Err(OracleError::TooFewSteps(steps));
    }
    let g = params.g();
    let h = params.l() / steps as f64;
    let mut y = initial;
    for _ in 0..steps {
        let k1 = y.derivative(g);
        let k2 = y.axpy(0.5 * h, &k1).derivative(g);
        let k3 = y.axpy(0.5 * h, &k2).derivative(g);
        let k4 = y.axpy(h, &k3).derivative(g);
        y = MomentVector {
            n_a: y.n_a + h / 6.0 * (k1.n_a + 2.0 * k2.n_a + 2.0 * k3.n_a + k4.n_a),
            n_b: y.n_b + h / 6.0 * (k1.n_b + 2.0 * k2.n_b + 2.0 * k3.n_b + k4.n_b),
            m: y.m + (k1.m + k2.m * 2.0 + k3.m * 2.0 + k4.m) * (h / 6.0),
        };
    }
    Ok(y)
}
