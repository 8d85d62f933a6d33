//! Output intensities and HBT coincidences for the supported input states.
//!
//! The output fields are `a = A + F_a`, `b = B + F_b`, where `A = K_aa a₀ +
//! K_ab b₀` and `B = K_ba a₀ + K_bb b₀` carry the input and `F` is the
//! zero-mean Gaussian noise with normally ordered moments `S_a`, `S_b`,
//! `S_ab`. Input and noise commute and are uncorrelated, so
//!
//! ```text
//! ⟨a†b†ab⟩ = ⟨A†B†AB⟩                                   stimulated
//!          + S_a⟨B†B⟩ + S_b⟨A†A⟩ + 2·Re(S_ab⟨B†A⟩)      cross
//!          + S_a·S_b + |S_ab|²                          spontaneous
//! ```

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{propagator, Propagator, SystemParams};
use crate::noise::{spontaneous_signals, NoiseMethod, NoiseMoments};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ObservableError {
    #[error("correlation is undefined: an output intensity vanishes")]
    UndefinedCorrelation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputState {
    /// `|0,0⟩`
    Vacuum,
    /// `|1,0⟩`
    PhotonA,
    /// `|0,1⟩`
    PhotonB,
    /// `(|2,0⟩ + |0,2⟩)/√2`
    Noon2,
}

impl InputState {
    pub const ALL: [InputState; 4] = [
        InputState::Vacuum,
        InputState::PhotonA,
        InputState::PhotonB,
        InputState::Noon2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InputState::Vacuum => "vacuum",
            InputState::PhotonA => "a",
            InputState::PhotonB => "b",
            InputState::Noon2 => "noon",
        }
    }

    /// Normally ordered input moments up to fourth order.
    pub fn moments(&self) -> InputMoments {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut m = InputMoments {
            n_a: 0.0,
            n_b: 0.0,
            m_ab: zero,
            pairs: [[zero; 3]; 3],
        };
        match self {
            InputState::Vacuum => {}
            InputState::PhotonA => m.n_a = 1.0,
            InputState::PhotonB => m.n_b = 1.0,
            InputState::Noon2 => {
                m.n_a = 1.0;
                m.n_b = 1.0;
                // a₀² and b₀² both map the state onto |0,0⟩ with unit
                // amplitude; a₀b₀ annihilates it.
                m.pairs[0][0] = one;
                m.pairs[0][2] = one;
                m.pairs[2][0] = one;
                m.pairs[2][2] = one;
            }
        }
        m
    }
}

/// Input moments needed for second- and fourth-order output moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputMoments {
    /// `⟨a₀†a₀⟩`
    pub n_a: f64,
    /// `⟨b₀†b₀⟩`
    pub n_b: f64,
    /// `⟨a₀†b₀⟩`
    pub m_ab: Complex64,
    /// Gram matrix `⟨Pᵢ† Pⱼ⟩` of the pair operators `P = (a₀², a₀b₀, b₀²)`.
    pub pairs: [[Complex64; 3]; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Spontaneous {
    #[default]
    Include,
    /// Drop every noise term: the classical coupled-mode picture.
    Exclude,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intensities {
    /// Total `⟨a†a⟩` including spontaneous generation.
    pub i_a: f64,
    pub i_b: f64,
    /// Stimulated part only.
    pub i_a_st: f64,
    pub i_b_st: f64,
}

/// A ratio that is reported as undefined rather than NaN when its
/// denominator vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Correlation {
    Defined(f64),
    Undefined,
}

impl Correlation {
    fn ratio(num: f64, den: f64) -> Self {
        let r = num / den;
        if den > 0.0 && r.is_finite() {
            Correlation::Defined(r)
        } else {
            Correlation::Undefined
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            Correlation::Defined(v) => Some(v),
            Correlation::Undefined => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Correlation::Defined(_))
    }

    fn shifted(&self, by: f64) -> Self {
        match *self {
            Correlation::Defined(v) => Correlation::Defined(v + by),
            Correlation::Undefined => Correlation::Undefined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputObservables {
    pub intensities: Intensities,
    /// Normally ordered coincidence `⟨a†b†ab⟩` under the chosen noise mode.
    pub coincidence: f64,
    /// `⟨a†b†ab⟩ / (⟨a†a⟩⟨b†b⟩)`, denominators under the same noise mode.
    pub g2: Correlation,
    /// `g2 − 1`.
    pub q: Correlation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbtCorrelation {
    pub g2: f64,
    pub q: f64,
}

/// Stimulated second moments `(⟨A†A⟩, ⟨B†B⟩, ⟨B†A⟩)`.
fn stimulated_second(k: &Propagator, m: &InputMoments) -> (f64, f64, Complex64) {
    let aa = k.k_aa.norm_sqr() * m.n_a
        + k.k_ab.norm_sqr() * m.n_b
        + 2.0 * (k.k_aa.conj() * k.k_ab * m.m_ab).re;
    let bb = k.k_ba.norm_sqr() * m.n_a
        + k.k_bb.norm_sqr() * m.n_b
        + 2.0 * (k.k_ba.conj() * k.k_bb * m.m_ab).re;
    let ba = k.k_ba.conj() * k.k_aa * m.n_a
        + k.k_bb.conj() * k.k_ab * m.n_b
        + k.k_ba.conj() * k.k_ab * m.m_ab
        + k.k_bb.conj() * k.k_aa * m.m_ab.conj();
    (aa, bb, ba)
}

/// `⟨A†B†AB⟩`: `AB = c₁a₀² + c₂a₀b₀ + c₃b₀²` contracted with the pair Gram.
fn stimulated_coincidence(k: &Propagator, m: &InputMoments) -> f64 {
    let c = [
        k.k_aa * k.k_ba,
        k.k_aa * k.k_bb + k.k_ab * k.k_ba,
        k.k_ab * k.k_bb,
    ];
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            sum += c[i].conj() * c[j] * m.pairs[i][j];
        }
    }
    sum.re
}

fn coincidence(k: &Propagator, m: &InputMoments, s: &NoiseMoments) -> f64 {
    let (aa, bb, ba) = stimulated_second(k, m);
    let stimulated = stimulated_coincidence(k, m);
    let cross = s.s_a * bb + s.s_b * aa + 2.0 * (s.s_ab * ba).re;
    let spontaneous = s.s_a * s.s_b + (s.s_ab * s.s_ba()).re;
    stimulated + cross + spontaneous
}

fn intensities_from(k: &Propagator, m: &InputMoments, s: &NoiseMoments) -> Intensities {
    let (aa, bb, _) = stimulated_second(k, m);
    Intensities {
        i_a: aa + s.s_a,
        i_b: bb + s.s_b,
        i_a_st: aa,
        i_b_st: bb,
    }
}

fn noise(params: SystemParams) -> NoiseMoments {
    spontaneous_signals(params, NoiseMethod::ClosedForm).expect("closed form is infallible")
}

/// Stimulated ("classical") and total mean photon numbers at the output.
pub fn intensities(input: InputState, params: SystemParams) -> Intensities {
    intensities_from(&propagator(params), &input.moments(), &noise(params))
}

/// Intensities, coincidence and `g²` for `input`.
///
/// With [`Spontaneous::Exclude`] every noise moment is set to zero in both the
/// coincidence and the normalising intensities; the returned
/// [`Intensities`] still report the physical totals.
pub fn observe(
    input: InputState,
    params: SystemParams,
    spontaneous: Spontaneous,
) -> OutputObservables {
    let k = propagator(params);
    let m = input.moments();
    let s = noise(params);
    let intensities = intensities_from(&k, &m, &s);
    let (n, den) = match spontaneous {
        Spontaneous::Include => (coincidence(&k, &m, &s), intensities.i_a * intensities.i_b),
        Spontaneous::Exclude => (
            coincidence(&k, &m, &NoiseMoments::ZERO),
            intensities.i_a_st * intensities.i_b_st,
        ),
    };
    let g2 = Correlation::ratio(n, den);
    OutputObservables {
        intensities,
        coincidence: n,
        g2,
        q: g2.shifted(-1.0),
    }
}

/// Vacuum-induced HBT correlation via Gaussian factorisation:
/// `q = |S_ab|²/(S_a·S_b)`, `g² = 1 + q`.
pub fn hbt_vacuum(params: SystemParams) -> Result<HbtCorrelation, ObservableError> {
    let s = noise(params);
    match Correlation::ratio(s.s_ab.norm_sqr(), s.s_a * s.s_b) {
        Correlation::Defined(q) => Ok(HbtCorrelation { g2: 1.0 + q, q }),
        Correlation::Undefined => Err(ObservableError::UndefinedCorrelation),
    }
}

/// Coincidence statistics for the two-photon NOON input.
pub fn noon_g2(
    params: SystemParams,
    spontaneous: Spontaneous,
) -> Result<OutputObservables, ObservableError> {
    let out = observe(InputState::Noon2, params, spontaneous);
    if out.g2.is_defined() {
        Ok(out)
    } else {
        Err(ObservableError::UndefinedCorrelation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classical_amplitudes, classify_regime};
    use core::f64::consts::{FRAC_PI_2, PI};

    fn p(g: f64, l: f64) -> SystemParams {
        SystemParams::new(g, l).unwrap()
    }

    #[test]
    fn vacuum_at_zero_length_is_dark() {
        let i = intensities(InputState::Vacuum, p(0.7, 0.0));
        assert_eq!(i, Intensities { i_a: 0.0, i_b: 0.0, i_a_st: 0.0, i_b_st: 0.0 });
        let o = observe(InputState::Vacuum, p(0.7, 0.0), Spontaneous::Include);
        assert_eq!(o.g2, Correlation::Undefined);
        assert_eq!(o.q, Correlation::Undefined);
        assert_eq!(hbt_vacuum(p(0.7, 0.0)), Err(ObservableError::UndefinedCorrelation));
        assert_eq!(hbt_vacuum(p(0.0, 2.0)), Err(ObservableError::UndefinedCorrelation));
    }

    #[test]
    fn lossless_full_transfer() {
        let i = intensities(InputState::PhotonA, p(0.0, FRAC_PI_2));
        assert!(i.i_a_st.abs() < 1e-30);
        assert!((i.i_b_st - 1.0).abs() < 1e-15);
        assert_eq!(i.i_a, i.i_a_st);
        assert_eq!(i.i_b, i.i_b_st);
    }

    #[test]
    fn photon_a_at_exceptional_point() {
        let i = intensities(InputState::PhotonA, p(1.0, 1.0));
        assert!((i.i_a_st - 4.0).abs() < 1e-13);
        assert!((i.i_b_st - 1.0).abs() < 1e-13);
        assert!((i.i_a - (4.0 + 14.0 / 3.0)).abs() < 1e-12);
        assert!((i.i_b - (1.0 + 2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn photon_b_broken_phase_ratio() {
        // |K_ab|²/|K_bb|² → (λ+g)² from the dominant eigenvector; the
        // large-g form 4g² is only its leading term.
        let g: f64 = 1.5;
        let i = intensities(InputState::PhotonB, p(g, 4.0));
        let lambda = (g * g - 1.0).sqrt();
        let ratio = i.i_a_st / i.i_b_st;
        assert!((ratio / (lambda + g).powi(2) - 1.0).abs() < 5e-3, "{ratio}");
        assert!(ratio < 4.0 * g * g);
    }

    #[test]
    fn hbt_at_exceptional_point() {
        let h = hbt_vacuum(p(1.0, 1.0)).unwrap();
        assert!((h.q - 25.0 / 28.0).abs() < 1e-12);
        assert!((h.g2 - (1.0 + 25.0 / 28.0)).abs() < 1e-12);
        let o = observe(InputState::Vacuum, p(1.0, 1.0), Spontaneous::Include);
        assert!((o.q.value().unwrap() - h.q).abs() < 1e-12);
    }

    #[test]
    fn hbt_saturates_in_broken_phase_only() {
        assert!(hbt_vacuum(p(1.5, 6.0)).unwrap().q > 0.999);
        for i in 1..=6 {
            let q = hbt_vacuum(p(0.5, i as f64)).unwrap().q;
            assert!(q < 1.0, "l={i} q={q}");
        }
    }

    #[test]
    fn noon_starts_at_zero() {
        for &g in &[0.0, 0.9, 1.5] {
            let out = noon_g2(p(g, 0.0), Spontaneous::Include).unwrap();
            assert_eq!(out.g2, Correlation::Defined(0.0));
        }
    }

    #[test]
    fn noon_matches_three_contribution_formula() {
        for &(g, l) in &[(0.9, 2.0), (1.0, 1.0), (1.5, 3.0), (0.3, 0.7)] {
            let k = propagator(p(g, l));
            let s = noise(p(g, l));
            let (kaa, kab, kba, kbb) = (k.k_aa, k.k_ab, k.k_ba, k.k_bb);
            let stim = (kaa * kba + kab * kbb).norm_sqr();
            let spon = s.s_a * s.s_b + (s.s_ab * s.s_ba()).re;
            let cross = s.s_a * (kba.norm_sqr() + kbb.norm_sqr())
                + s.s_b * (kaa.norm_sqr() + kab.norm_sqr())
                + 2.0 * (s.s_ab * kba.conj() * kaa + s.s_ab * kbb.conj() * kab).re;
            let full = noon_g2(p(g, l), Spontaneous::Include).unwrap();
            let ia = kaa.norm_sqr() + kab.norm_sqr() + s.s_a;
            let ib = kba.norm_sqr() + kbb.norm_sqr() + s.s_b;
            assert!((full.coincidence - (stim + spon + cross)).abs() < 1e-12 * full.coincidence.max(1.0));
            assert!((full.g2.value().unwrap() - (stim + spon + cross) / (ia * ib)).abs() < 1e-12);

            let st = noon_g2(p(g, l), Spontaneous::Exclude).unwrap();
            let den = (ia - s.s_a) * (ib - s.s_b);
            assert!((st.g2.value().unwrap() - stim / den).abs() < 1e-12);
        }
    }

    #[test]
    fn stimulated_intensities_are_classical() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        for &g in &[0.0, 0.5, 1.0, 1.7] {
            for &l in &[0.2, 1.3, 4.0] {
                let (a, b) = classical_amplitudes(p(g, l), one, zero);
                let i = intensities(InputState::PhotonA, p(g, l));
                assert!((i.i_a_st - a.norm_sqr()).abs() < 1e-12 * a.norm_sqr().max(1.0));
                assert!((i.i_b_st - b.norm_sqr()).abs() < 1e-12 * b.norm_sqr().max(1.0));
                let (a, b) = classical_amplitudes(p(g, l), zero, one);
                let i = intensities(InputState::PhotonB, p(g, l));
                assert!((i.i_a_st - a.norm_sqr()).abs() < 1e-12 * a.norm_sqr().max(1.0));
                assert!((i.i_b_st - b.norm_sqr()).abs() < 1e-12 * b.norm_sqr().max(1.0));
            }
        }
    }

    #[test]
    fn stimulated_intensities_periodic_below_threshold() {
        for &g in &[0.3, 0.9] {
            let period = PI / classify_regime(p(g, 0.0)).rate;
            for i in 0..40 {
                let l = 0.15 * i as f64;
                for input in [InputState::PhotonA, InputState::PhotonB, InputState::Noon2] {
                    let x = intensities(input, p(g, l));
                    let y = intensities(input, p(g, l + period));
                    assert!((x.i_a_st - y.i_a_st).abs() < 1e-11);
                    assert!((x.i_b_st - y.i_b_st).abs() < 1e-11);
                }
            }
        }
    }
}
