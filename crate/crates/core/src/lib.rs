//! Quantized-field observables for a PT-symmetric pair of evanescently
//! coupled waveguides: waveguide A carries linear gain, waveguide B an equal
//! linear loss, and both gain and loss are accompanied by quantum Langevin
//! noise.
//!
//! Everything is dimensionless. `g` is the gain-to-coupling ratio `G/J` and
//! `l` is the coupling-scaled propagation length `J·z`.
//!
//! The crate is `no_std` and needs only `alloc`:
//!
//! * [`model`]: parameters, regime classification and the closed-form
//!   propagator `K(l)`.
//! * [`noise`]: spontaneous-generation moments `S_a`, `S_b`, `S_ab` by
//!   closed-form antiderivatives or adaptive quadrature, and commutator
//!   diagnostics.
//! * [`observables`]: intensities and HBT correlations for vacuum,
//!   single-photon and two-photon NOON inputs.
//! * [`oracle`]: independent brute-force routes (RK4 on the moment ODEs,
//!   Wick enumeration over a Fock-space input) used to validate the above.
//! * [`quadrature`]: adaptive Simpson integration.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod series;

pub mod model;
pub mod noise;
pub mod observables;
pub mod oracle;
pub mod quadrature;

pub use model::{
    classical_amplitudes, classify_regime, determinant, propagator, semigroup_defect, ParamError,
    Propagator, Regime, RegimeKind, SystemParams, EXCEPTIONAL_TOLERANCE,
};
pub use noise::{
    asymptotic_spontaneous, commutator_diagnostics, commutator_diagnostics_with,
    spontaneous_signals, AsymptoticRates, CommutatorDiagnostics, NoiseError, NoiseMethod,
    NoiseMoments,
};
pub use observables::{
    hbt_vacuum, intensities, noon_g2, observe, Correlation, HbtCorrelation, InputMoments,
    InputState, Intensities, ObservableError, OutputObservables, Spontaneous,
};

pub use num_complex::Complex64;

/// Mixed absolute/relative closeness: `|a - b| <= tol * max(1, |b|)`.
///
/// Moments grow like `exp(2λl)` in the broken phase, so a pure absolute
/// tolerance is meaningless above a few units of magnitude.
pub fn close_mixed(a: f64, b: f64, tol: f64) -> bool {
    use num_traits::Float;
    (a - b).abs() <= tol * Float::max(1.0, b.abs())
}
