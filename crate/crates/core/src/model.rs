//! Dimensionless parameters and the coupled-mode propagator.
//!
//! The field amplitudes obey `d/dl (a, b)ᵀ = M (a, b)ᵀ` with
//!
//! ```text
//!     M = | g   −i |
//!         | −i  −g |
//! ```
//!
//! Since `M² = (g² − 1)·I`, the propagator has the closed form
//! `K(l) = cosh(λl)·I + (sinh(λl)/λ)·M` with `λ² = g² − 1`; for `g < 1` the
//! hyperbolic functions turn into `cos`/`sin` of `Ω = √(1 − g²)`.

use num_complex::Complex64;
use thiserror::Error;

use crate::series::{self, Dd};

/// Half-width of the band around `g = 1` treated as the exceptional point.
pub const EXCEPTIONAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ParamError {
    #[error("gain ratio g must be finite and non-negative, got {0}")]
    InvalidGain(f64),
    #[error("propagation length l must be finite and non-negative, got {0}")]
    InvalidLength(f64),
}

/// Gain-to-coupling ratio `g = G/J` and propagation length `l = J·z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    g: f64,
    l: f64,
}

impl SystemParams {
    pub fn new(g: f64, l: f64) -> Result<Self, ParamError> {
        if !g.is_finite() || g < 0.0 {
            return Err(ParamError::InvalidGain(g));
        }
        if !l.is_finite() || l < 0.0 {
            return Err(ParamError::InvalidLength(l));
        }
        Ok(Self { g, l })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// Same gain, different length.
    pub fn with_length(&self, l: f64) -> Result<Self, ParamError> {
        Self::new(self.g, l)
    }

    pub(crate) fn is_exceptional(&self) -> bool {
        (self.g - 1.0).abs() <= EXCEPTIONAL_TOLERANCE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    /// `g < 1`: eigenvalues `±iΩ`, oscillatory exchange between the guides.
    Unbroken,
    /// `g = 1`: the eigenvalues coalesce and `K` grows polynomially.
    Exceptional,
    /// `g > 1`: eigenvalues `±λ`, exponential growth.
    Broken,
}

impl RegimeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeKind::Unbroken => "unbroken",
            RegimeKind::Exceptional => "exceptional",
            RegimeKind::Broken => "broken",
        }
    }
}

impl core::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Spectral phase together with `Ω` (unbroken), `λ` (broken) or `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub kind: RegimeKind,
    pub rate: f64,
}

pub fn classify_regime(params: SystemParams) -> Regime {
    let g = params.g();
    let mu = (g - 1.0) * (g + 1.0);
    if (g - 1.0).abs() <= EXCEPTIONAL_TOLERANCE {
        Regime {
            kind: RegimeKind::Exceptional,
            rate: 0.0,
        }
    } else if g < 1.0 {
        Regime {
            kind: RegimeKind::Unbroken,
            rate: libm::sqrt(-mu),
        }
    } else {
        Regime {
            kind: RegimeKind::Broken,
            rate: libm::sqrt(mu),
        }
    }
}

/// `cosh(λl)` and `sinh(λl)/λ` for the given parameters, in any float type.
///
/// Inside the exceptional band both come from their Taylor series in
/// `z = λ²l²`; elsewhere from the transcendental functions directly.
pub(crate) fn kernel<T: series::Real>(g: T, l: T, exceptional: bool) -> (T, T) {
    let z = (g - T::one()) * (g + T::one()) * l * l;
    if exceptional && z.abs() <= T::one() {
        (
            series::cosh_sqrt_series(z),
            l * series::sinhc_sqrt_series(z),
        )
    } else {
        (series::cosh_sqrt(z), l * series::sinhc_sqrt(z))
    }
}

/// The 2×2 transfer matrix `K(l) = exp(lM)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub k_aa: Complex64,
    pub k_ab: Complex64,
    pub k_ba: Complex64,
    pub k_bb: Complex64,
    pub params: SystemParams,
}

impl Propagator {
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.k_aa, self.k_ab], [self.k_ba, self.k_bb]]
    }

    pub fn det(&self) -> Complex64 {
        self.k_aa * self.k_bb - self.k_ab * self.k_ba
    }

    /// `K·(α, β)ᵀ`.
    pub fn apply(&self, alpha: Complex64, beta: Complex64) -> (Complex64, Complex64) {
        (
            self.k_aa * alpha + self.k_ab * beta,
            self.k_ba * alpha + self.k_bb * beta,
        )
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Propagator) -> [[Complex64; 2]; 2] {
        let a = self.matrix();
        let b = other.matrix();
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }
}

pub fn propagator(params: SystemParams) -> Propagator {
    let g = params.g();
    let (c, sh) = kernel(g, params.l(), params.is_exceptional());
    let off = Complex64::new(0.0, -sh);
    Propagator {
        k_aa: Complex64::new(c + g * sh, 0.0),
        k_ab: off,
        k_ba: off,
        k_bb: Complex64::new(c - g * sh, 0.0),
        params,
    }
}

/// Real parts `(k_aa, s, k_bb)` of `K = [[k_aa, −i·s], [−i·s, k_bb]]` in
/// double-double.
fn entries_dd(params: SystemParams, l: Dd) -> (Dd, Dd, Dd) {
    let g = Dd::from(params.g());
    let (c, sh) = kernel(g, l, params.is_exceptional());
    (c + g * sh, sh, c - g * sh)
}

/// `det K(l)` evaluated in double-double.
///
/// In the broken phase `k_aa·k_bb` and `k_ab·k_ba` both grow like
/// `exp(2λl)`, so the `f64` [`Propagator::det`] only holds to about
/// `1e-16·exp(2λl)`.
pub fn determinant(params: SystemParams) -> f64 {
    let (a, s, b) = entries_dd(params, Dd::from(params.l()));
    f64::from(a * b + s * s)
}

/// Largest entrywise `|K(l₁ + l₂) − K(l₁)·K(l₂)|`, in double-double.
pub fn semigroup_defect(g: f64, l1: f64, l2: f64) -> Result<f64, ParamError> {
    let p1 = SystemParams::new(g, l1)?;
    let p2 = SystemParams::new(g, l2)?;
    let (a1, s1, b1) = entries_dd(p1, Dd::from(l1));
    let (a2, s2, b2) = entries_dd(p2, Dd::from(l2));
    // `l₁ + l₂` is formed exactly; rounding it to `f64` alone would shift
    // the large entries by `~1e-16·λ·|K|`.
    let (a, s, b) = entries_dd(p1, Dd::from(l1) + Dd::from(l2));
    // The product keeps the real-diagonal, imaginary-off-diagonal shape.
    let defects = [
        a - (a1 * a2 - s1 * s2),
        s - (a1 * s2 + s1 * b2),
        s - (s1 * a2 + b1 * s2),
        b - (b1 * b2 - s1 * s2),
    ];
    Ok(defects
        .iter()
        .map(|d| libm::fabs(f64::from(*d)))
        .fold(0.0, f64::max))
}

/// Classical coupled-mode amplitudes `(α(l), β(l))` from `(α(0), β(0))`.
pub fn classical_amplitudes(
    params: SystemParams,
    alpha0: Complex64,
    beta0: Complex64,
) -> (Complex64, Complex64) {
    propagator(params).apply(alpha0, beta0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn p(g: f64, l: f64) -> SystemParams {
        SystemParams::new(g, l).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(SystemParams::new(-0.1, 1.0), Err(ParamError::InvalidGain(-0.1)));
        assert!(matches!(SystemParams::new(f64::NAN, 1.0), Err(ParamError::InvalidGain(_))));
        assert_eq!(SystemParams::new(1.0, -2.0), Err(ParamError::InvalidLength(-2.0)));
        assert!(SystemParams::new(1.0, f64::INFINITY).is_err());
        assert!(SystemParams::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn regime_examples() {
        let r = classify_regime(p(0.5, 1.0));
        assert_eq!(r.kind, RegimeKind::Unbroken);
        assert!((r.rate - 0.75f64.sqrt()).abs() < 1e-15);

        let r = classify_regime(p(1.0, 1.0));
        assert_eq!(r, Regime { kind: RegimeKind::Exceptional, rate: 0.0 });

        let r = classify_regime(p(1.5, 1.0));
        assert_eq!(r.kind, RegimeKind::Broken);
        assert!((r.rate - 1.25f64.sqrt()).abs() < 1e-15);

        assert_eq!(classify_regime(p(1.0 + 5e-7, 1.0)).kind, RegimeKind::Exceptional);
        assert_eq!(classify_regime(p(1.0 - 2e-6, 1.0)).kind, RegimeKind::Unbroken);
    }

    #[test]
    fn rate_matches_eigenvalues_of_generator() {
        // Eigenvalues of the traceless M solve μ² = −det M = g² − 1.
        for &g in &[0.0, 0.3, 0.5, 0.9, 1.1, 1.5, 3.0] {
            let m = [[c(g, 0.0), c(0.0, -1.0)], [c(0.0, -1.0), c(-g, 0.0)]];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let eig = (-det).sqrt();
            let r = classify_regime(p(g, 1.0));
            if g < 1.0 {
                assert!(eig.re.abs() < 1e-15);
                assert!((eig.im.abs() - r.rate).abs() < 1e-14);
            } else {
                assert!(eig.im.abs() < 1e-15);
                assert!((eig.re.abs() - r.rate).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn identity_at_zero_length() {
        for &g in &[0.0, 0.7, 1.0, 2.0] {
            let k = propagator(p(g, 0.0));
            assert_eq!(k.k_aa, c(1.0, 0.0));
            assert_eq!(k.k_bb, c(1.0, 0.0));
            assert_eq!(k.k_ab, c(0.0, 0.0));
        }
    }

    #[test]
    fn lossless_coupler_limit() {
        for &l in &[0.3, 1.0, 2.5] {
            let k = propagator(p(0.0, l));
            assert!((k.k_aa - c(l.cos(), 0.0)).norm() < 1e-15);
            assert!((k.k_bb - c(l.cos(), 0.0)).norm() < 1e-15);
            assert!((k.k_ab - c(0.0, -l.sin())).norm() < 1e-15);
        }
    }

    #[test]
    fn exceptional_point_closed_form() {
        let k = propagator(p(1.0, 1.0));
        assert!((k.k_aa - c(2.0, 0.0)).norm() < 1e-15);
        assert!(k.k_bb.norm() < 1e-15);
        assert!((k.k_ab - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn broken_phase_value() {
        let s3 = 3f64.sqrt();
        let expected = s3.cosh() + 2.0 / s3 * s3.sinh();
        let k = propagator(p(2.0, 1.0));
        assert!((k.k_aa.re - expected).abs() < 1e-13);
        assert!((k.k_aa.re - 6.08).abs() < 0.01);
    }

    #[test]
    fn classical_amplitude_examples() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        assert_eq!(classical_amplitudes(p(0.4, 0.0), one, zero), (one, zero));

        let (a, b) = classical_amplitudes(p(0.0, FRAC_PI_2), one, zero);
        assert!(a.norm() < 1e-15);
        assert!((b - c(0.0, -1.0)).norm() < 1e-15);

        let (a, b) = classical_amplitudes(p(1.0, 1.0), one, zero);
        assert!((a - c(2.0, 0.0)).norm() < 1e-15);
        assert!((b - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn unbroken_entries_are_real_or_imaginary_and_bounded() {
        for &g in &[0.1, 0.5, 0.9, 0.99] {
            let omega = classify_regime(p(g, 0.0)).rate;
            let bound = 1.0 + g / omega;
            for i in 0..200 {
                let k = propagator(p(g, 0.05 * i as f64));
                assert_eq!(k.k_aa.im, 0.0);
                assert_eq!(k.k_bb.im, 0.0);
                assert_eq!(k.k_ab.re, 0.0);
                for e in [k.k_aa, k.k_ab, k.k_ba, k.k_bb] {
                    assert!(e.norm() <= bound + 1e-12);
                }
            }
        }
    }

    #[test]
    fn identities_hold_in_double_double() {
        for &g in &[0.0, 0.3, 0.9, 1.0, 1.1, 1.5, 3.0] {
            for &l in &[0.1, 0.5, 1.0, 2.0, 5.0] {
                assert!((determinant(p(g, l)) - 1.0).abs() <= 1e-12, "g={g} l={l}");
                let d = semigroup_defect(g, 0.3 * l, 0.7 * l).unwrap();
                assert!(d <= 1e-10, "g={g} l={l} {d}");
            }
        }
    }

    #[test]
    fn f64_determinant_is_good_where_entries_are_moderate() {
        for &g in &[0.0, 0.3, 0.9, 1.0, 1.1, 1.5] {
            let k = propagator(p(g, 2.0));
            assert!((k.det() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn continuity_through_exceptional_point() {
        for i in 0..=50 {
            let l = 0.1 * i as f64;
            let at = propagator(p(1.0, l));
            for g in [1.0 - 1e-7, 1.0 + 1e-7] {
                let near = propagator(p(g, l));
                for (x, y) in near.matrix().iter().flatten().zip(at.matrix().iter().flatten()) {
                    assert!((x - y).norm() <= 1e-5, "g={g} l={l}");
                }
            }
        }
    }
}
