//! Spontaneous generation driven by the Langevin forces.
//!
//! For vacuum input only the gain-side force `f_a` survives in normally
//! ordered moments (the loss bath sits at zero temperature), and with
//! `⟨f_a†(l) f_a(l′)⟩ = 2g·δ(l − l′)` the output moments are
//!
//! ```text
//!     S_a  = 2g ∫₀ˡ |K_aa(x)|² dx
//!     S_b  = 2g ∫₀ˡ |K_ba(x)|² dx
//!     S_ab = 2g ∫₀ˡ K_aa(x)* K_ba(x) dx          (= ⟨a†b⟩)
//! ```
//!
//! Writing `K_aa = c + g·sh`, `K_ba = −i·sh` with `c = cosh(λx)` and
//! `sh = sinh(λx)/λ`, every integrand is a combination of `c²`, `c·sh` and
//! `sh²`, whose antiderivatives are entire in `λ²`.

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{kernel, propagator, SystemParams};
use crate::quadrature::{self, Bundle, Tolerance};
use crate::series::{self, Dd};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum NoiseError {
    #[error("adaptive quadrature exceeded {subdivisions} subdivisions")]
    QuadratureNonConvergence { subdivisions: usize },
    #[error("g = {0} is not in the broken phase (g > 1 required)")]
    NotInBrokenPhase(f64),
}

impl From<quadrature::NonConvergence> for NoiseError {
    fn from(e: quadrature::NonConvergence) -> Self {
        NoiseError::QuadratureNonConvergence {
            subdivisions: e.subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NoiseMethod {
    #[default]
    ClosedForm,
    Quadrature,
}

/// Spontaneously generated second moments at the output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMoments {
    /// `⟨a†a⟩` for vacuum input.
    pub s_a: f64,
    /// `⟨b†b⟩` for vacuum input.
    pub s_b: f64,
    /// `⟨a†b⟩` for vacuum input.
    pub s_ab: Complex64,
}

impl NoiseMoments {
    pub const ZERO: NoiseMoments = NoiseMoments {
        s_a: 0.0,
        s_b: 0.0,
        s_ab: Complex64::new(0.0, 0.0),
    };

    /// `⟨b†a⟩ = ⟨a†b⟩*`.
    pub fn s_ba(&self) -> Complex64 {
        self.s_ab.conj()
    }
}

/// `cosh`, `sinh/λ` and the three antiderivatives on `[0, l]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KernelIntegrals<T> {
    pub c: T,
    pub sh: T,
    /// `∫ c²`
    pub cc: T,
    /// `∫ c·sh`
    pub cs: T,
    /// `∫ sh²`
    pub ss: T,
}

pub(crate) fn kernel_integrals<T: series::Real>(g: T, l: T, exceptional: bool) -> KernelIntegrals<T> {
    let (c, sh) = kernel(g, l, exceptional);
    let z = (g - T::one()) * (g + T::one()) * l * l;
    KernelIntegrals {
        c,
        sh,
        cc: l * series::cosh_sq_integral(z),
        cs: l * l * series::cosh_sinh_integral(z),
        ss: l * l * l * series::sinh_sq_integral(z),
    }
}

fn closed_form(params: SystemParams) -> NoiseMoments {
    let g = params.g();
    let k = kernel_integrals(g, params.l(), params.is_exceptional());
    let two_g = 2.0 * g;
    NoiseMoments {
        s_a: two_g * (k.cc + 2.0 * g * k.cs + g * g * k.ss),
        s_b: two_g * k.ss,
        s_ab: Complex64::new(0.0, -two_g * (k.cs + g * k.ss)),
    }
}

fn by_quadrature(params: SystemParams) -> Result<NoiseMoments, NoiseError> {
    let g = params.g();
    let integral = quadrature::integrate(
        |x| {
            let k = propagator(SystemParams::new(g, x).expect("x within [0, l]"));
            let cross = k.k_aa.conj() * k.k_ba;
            Bundle([k.k_aa.norm_sqr(), k.k_ba.norm_sqr(), cross.re, cross.im])
        },
        0.0,
        params.l(),
        Tolerance::default(),
    )?;
    let [aa, ba, re, im] = integral.0;
    let two_g = 2.0 * g;
    Ok(NoiseMoments {
        s_a: two_g * aa,
        s_b: two_g * ba,
        s_ab: Complex64::new(two_g * re, two_g * im),
    })
}

/// `S_a`, `S_b` and `S_ab` at length `params.l()`.
///
/// The closed form never fails; quadrature reports
/// [`NoiseError::QuadratureNonConvergence`] when it hits the subdivision cap.
pub fn spontaneous_signals(
    params: SystemParams,
    method: NoiseMethod,
) -> Result<NoiseMoments, NoiseError> {
    match method {
        NoiseMethod::ClosedForm => Ok(closed_form(params)),
        NoiseMethod::Quadrature => by_quadrature(params),
    }
}

/// Large-`l` behaviour of spontaneous generation in the broken phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRates {
    /// Exponent `2λ` shared by `S_a` and `S_b`.
    pub growth_rate: f64,
    /// `lim S_a/S_b = (λ + g)²`, from the dominant eigenvector of `M`.
    pub amplitude_ratio: f64,
}

pub fn asymptotic_spontaneous(g: f64) -> Result<AsymptoticRates, NoiseError> {
    if !g.is_finite() || g <= 1.0 {
        return Err(NoiseError::NotInBrokenPhase(g));
    }
    let lambda = libm::sqrt((g - 1.0) * (g + 1.0));
    Ok(AsymptoticRates {
        growth_rate: 2.0 * lambda,
        amplitude_ratio: (lambda + g) * (lambda + g),
    })
}

/// Output commutators `[a, a†]` (should be 1) and `[a, b†]` (should be 0).
///
/// Gain noise lowers `[a, a†]` by `2g∫|K_aa|²` and loss noise raises it by
/// `2g∫|K_ab|²`; the balance is exact only if propagator and noise strength
/// are mutually consistent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorDiagnostics {
    pub c_aa: f64,
    pub c_ab: Complex64,
}

/// Commutators from the closed-form antiderivatives, evaluated in
/// double-double arithmetic.
///
/// In the broken phase the individual terms grow like `exp(2λl)` and cancel
/// down to 1, so plain `f64` would leave residuals of order
/// `1e-16·exp(2λl)`.
pub fn commutator_diagnostics(params: SystemParams) -> CommutatorDiagnostics {
    let g = Dd::from(params.g());
    let k = kernel_integrals(g, Dd::from(params.l()), params.is_exceptional());
    let two_g = g * 2.0;

    let k_aa = k.c + g * k.sh;
    let k_bb = k.c - g * k.sh;
    // k_ab = k_ba = −i·sh
    let int_aa = k.cc + two_g * k.cs + g * g * k.ss;
    let int_ab = k.ss;
    let c_aa = k_aa * k_aa + k.sh * k.sh - two_g * int_aa + two_g * int_ab;

    // Imaginary parts of k_aa·k_ba*, k_ab·k_bb*, ∫k_aa·k_ba*, ∫k_ab·k_bb*.
    let direct = k_aa * k.sh - k.sh * k_bb;
    let int_aa_ba = k.cs + g * k.ss;
    let int_ab_bb = -(k.cs - g * k.ss);
    let c_ab = direct - two_g * int_aa_ba + two_g * int_ab_bb;

    CommutatorDiagnostics {
        c_aa: f64::from(c_aa),
        c_ab: Complex64::new(0.0, f64::from(c_ab)),
    }
}

/// Commutators with the integrals taken by `method` in `f64`.
///
/// [`NoiseMethod::Quadrature`] integrates the pointwise propagator; it only
/// reaches `1e-10` where the moments stay moderate.
pub fn commutator_diagnostics_with(
    params: SystemParams,
    method: NoiseMethod,
) -> Result<CommutatorDiagnostics, NoiseError> {
    if method == NoiseMethod::ClosedForm {
        return Ok(commutator_diagnostics(params));
    }
    let g = params.g();
    let integral = quadrature::integrate(
        |x| {
            let k = propagator(SystemParams::new(g, x).expect("x within [0, l]"));
            let p = k.k_aa * k.k_ba.conj();
            let q = k.k_ab * k.k_bb.conj();
            Bundle([k.k_aa.norm_sqr(), k.k_ab.norm_sqr(), p.re, p.im, q.re, q.im])
        },
        0.0,
        params.l(),
        Tolerance::default(),
    )?;
    let [aa, ab, p_re, p_im, q_re, q_im] = integral.0;
    let k = propagator(params);
    let two_g = 2.0 * g;
    let c_aa = k.k_aa.norm_sqr() + k.k_ab.norm_sqr() - two_g * aa + two_g * ab;
    let c_ab = k.k_aa * k.k_ba.conj() + k.k_ab * k.k_bb.conj()
        - Complex64::new(p_re, p_im) * two_g
        + Complex64::new(q_re, q_im) * two_g;
    Ok(CommutatorDiagnostics { c_aa, c_ab })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::close_mixed;

    fn p(g: f64, l: f64) -> SystemParams {
        SystemParams::new(g, l).unwrap()
    }

    fn both(g: f64, l: f64) -> (NoiseMoments, NoiseMoments) {
        (
            spontaneous_signals(p(g, l), NoiseMethod::ClosedForm).unwrap(),
            spontaneous_signals(p(g, l), NoiseMethod::Quadrature).unwrap(),
        )
    }

    #[test]
    fn empty_integral_at_zero_length() {
        for &g in &[0.0, 0.5, 1.0, 3.0] {
            let (c, q) = both(g, 0.0);
            assert_eq!(c, NoiseMoments::ZERO);
            assert_eq!(q, NoiseMoments::ZERO);
        }
    }

    #[test]
    fn exceptional_point_values() {
        // k_aa = 1 + x, k_ba = −i·x integrated by hand.
        let l: f64 = 1.0;
        for (m, label) in [(both(1.0, l).0, "closed"), (both(1.0, l).1, "quadrature")] {
            assert!((m.s_a - 2.0 / 3.0 * ((1.0 + l).powi(3) - 1.0)).abs() < 1e-12, "{label}");
            assert!((m.s_b - 2.0 / 3.0 * l.powi(3)).abs() < 1e-12, "{label}");
            assert!((m.s_ab - Complex64::new(0.0, -(l * l + 2.0 * l.powi(3) / 3.0))).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_quadrature_on_grid() {
        for &g in &[0.0, 0.3, 0.9, 1.0, 1.1, 1.5, 3.0] {
            for &l in &[0.1, 0.5, 1.0, 2.0, 5.0] {
                let (c, q) = both(g, l);
                assert!(close_mixed(c.s_a, q.s_a, 1e-9), "s_a g={g} l={l}");
                assert!(close_mixed(c.s_b, q.s_b, 1e-9), "s_b g={g} l={l}");
                assert!(close_mixed(c.s_ab.norm(), q.s_ab.norm(), 1e-9), "s_ab g={g} l={l}");
            }
        }
    }

    #[test]
    fn small_length_series() {
        for &g in &[0.3, 0.5, 1.0, 1.5, 3.0] {
            let l = 1e-3;
            let (m, _) = both(g, l);
            let s_a = 2.0 * g * l + 2.0 * g * g * l * l;
            let s_b = 2.0 * g / 3.0 * l.powi(3);
            assert!(((m.s_a - s_a) / s_a).abs() < 1e-3, "g={g}");
            assert!(((m.s_b - s_b) / s_b).abs() < 1e-3, "g={g}");
        }
        let (m, _) = both(0.5, 0.01);
        assert!((m.s_a - 0.01).abs() / 0.01 < 0.01);
        assert!((m.s_b - 1.0 / 3.0 * 1e-6).abs() / (1.0 / 3.0 * 1e-6) < 0.01);
    }

    #[test]
    fn broken_phase_ratio_tends_to_dominant_eigenvector() {
        let rates = asymptotic_spontaneous(3.0).unwrap();
        assert!((rates.amplitude_ratio - (8f64.sqrt() + 3.0).powi(2)).abs() < 1e-12);
        assert!((rates.amplitude_ratio - 33.97).abs() < 0.01);
        for l in [5.0, 8.0] {
            let (m, _) = both(3.0, l);
            let ratio = m.s_a / m.s_b;
            assert!((ratio / rates.amplitude_ratio - 1.0).abs() < 1e-3, "l={l} ratio={ratio}");
        }
    }

    #[test]
    fn asymptotic_growth_examples() {
        let r = asymptotic_spontaneous(1.0001).unwrap();
        assert!((r.growth_rate - 2.0 * (2.0001e-4f64).sqrt()).abs() < 1e-12);
        assert!((r.growth_rate - 0.0283).abs() < 1e-4);
        assert_eq!(asymptotic_spontaneous(1.0), Err(NoiseError::NotInBrokenPhase(1.0)));
        assert!(asymptotic_spontaneous(0.4).is_err());
    }

    #[test]
    fn commutators_at_exceptional_point() {
        // (1+1)² + 1² − 14/3 + 2/3 = 1
        let d = commutator_diagnostics(p(1.0, 1.0));
        assert!((d.c_aa - 1.0).abs() < 1e-15);
        assert!(d.c_ab.norm() < 1e-15);
        let d = commutator_diagnostics(p(0.4, 0.0));
        assert_eq!(d.c_aa, 1.0);
        assert_eq!(d.c_ab, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn commutators_by_quadrature() {
        let d = commutator_diagnostics_with(p(0.9, 3.0), NoiseMethod::Quadrature).unwrap();
        assert!((d.c_aa - 1.0).abs() < 1e-10, "{d:?}");
        assert!(d.c_ab.norm() < 1e-10, "{d:?}");
    }

    #[test]
    fn commutators_on_grid_in_double_double() {
        for &g in &[0.0, 0.3, 0.9, 1.0, 1.1, 1.5, 3.0] {
            for &l in &[0.1, 0.5, 1.0, 2.0, 5.0] {
                let d = commutator_diagnostics(p(g, l));
                assert!((d.c_aa - 1.0).abs() < 1e-10, "g={g} l={l} {d:?}");
                assert!(d.c_ab.norm() < 1e-10, "g={g} l={l} {d:?}");
            }
        }
    }
}
