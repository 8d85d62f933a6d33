//! Term enumeration for normally ordered output moments.
//!
//! Each output operator splits three ways,
//! `a = K_aa·a₀ + K_ab·b₀ + F_a` (and adjoints), so a product of `n`
//! operators expands into `3ⁿ` terms. For every term the input factors are
//! evaluated on the Fock state and the noise factors by Wick's theorem,
//! with two-point functions taken from [`NoiseCovariance`].

use alloc::vec::Vec;

use num_complex::Complex64;

use super::fock::{FockState, Ladder};
use crate::model::{propagator, Propagator, SystemParams};
use crate::observables::InputState;
use crate::quadrature::{self, Bundle, Tolerance};

/// Output-port ladder operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputOp {
    A,
    B,
    ADag,
    BDag,
}

/// Second moments of the filtered noise `F = ∫ K(l − x) f(x) dx`.
///
/// `normal[i][j] = ⟨F_i† F_j⟩` is fed by the gain force only;
/// `anti[i][j] = ⟨F_i F_j†⟩` by the loss force only. Anomalous moments
/// `⟨F F⟩`, `⟨F† F†⟩` vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseCovariance {
    pub normal: [[Complex64; 2]; 2],
    pub anti: [[Complex64; 2]; 2],
}

/// All six independent noise moments by adaptive quadrature of the
/// pointwise propagator.
pub fn noise_covariance(params: SystemParams) -> Result<NoiseCovariance, quadrature::NonConvergence> {
    let g = params.g();
    // Columns of K: gain force enters through column a, loss force through b.
    let integral = quadrature::integrate(
        |x| {
            let k = propagator(SystemParams::new(g, x).expect("x within [0, l]"));
            let col_a = [k.k_aa, k.k_ba];
            let col_b = [k.k_ab, k.k_bb];
            let mut v = [0.0; 16];
            for i in 0..2 {
                for j in 0..2 {
                    let n = col_a[i].conj() * col_a[j];
                    let a = col_b[i] * col_b[j].conj();
                    v[4 * i + 2 * j] = n.re;
                    v[4 * i + 2 * j + 1] = n.im;
                    v[8 + 4 * i + 2 * j] = a.re;
                    v[8 + 4 * i + 2 * j + 1] = a.im;
                }
            }
            Bundle(v)
        },
        0.0,
        params.l(),
        Tolerance::default(),
    )?;
    let v = integral.0;
    let two_g = 2.0 * g;
    let mut cov = NoiseCovariance {
        normal: [[Complex64::new(0.0, 0.0); 2]; 2],
        anti: [[Complex64::new(0.0, 0.0); 2]; 2],
    };
    for i in 0..2 {
        for j in 0..2 {
            cov.normal[i][j] = Complex64::new(v[4 * i + 2 * j], v[4 * i + 2 * j + 1]) * two_g;
            cov.anti[i][j] = Complex64::new(v[8 + 4 * i + 2 * j], v[8 + 4 * i + 2 * j + 1]) * two_g;
        }
    }
    Ok(cov)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NoiseOp {
    mode: usize,
    dagger: bool,
}

fn contraction(cov: &NoiseCovariance, x: NoiseOp, y: NoiseOp) -> Complex64 {
    match (x.dagger, y.dagger) {
        (true, false) => cov.normal[x.mode][y.mode],
        (false, true) => cov.anti[x.mode][y.mode],
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Gaussian moment of an ordered product: sum over perfect pairings.
fn wick(cov: &NoiseCovariance, ops: &[NoiseOp]) -> Complex64 {
    match ops.len() {
        0 => Complex64::new(1.0, 0.0),
        n if n % 2 == 1 => Complex64::new(0.0, 0.0),
        _ => {
            let first = ops[0];
            let mut total = Complex64::new(0.0, 0.0);
            for j in 1..ops.len() {
                let pair = contraction(cov, first, ops[j]);
                if pair == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rest: Vec<NoiseOp> = ops[1..]
                    .iter()
                    .enumerate()
                    .filter(|&(idx, _)| idx + 1 != j)
                    .map(|(_, &o)| o)
                    .collect();
                total += pair * wick(cov, &rest);
            }
            total
        }
    }
}

/// The three pieces of one output operator: (coefficient, input ladder) for
/// the `a₀`- and `b₀`-components, and the noise operator.
fn split(k: &Propagator, op: OutputOp) -> ([(Complex64, Ladder); 2], NoiseOp) {
    match op {
        OutputOp::A => (
            [(k.k_aa, Ladder::A), (k.k_ab, Ladder::B)],
            NoiseOp { mode: 0, dagger: false },
        ),
        OutputOp::B => (
            [(k.k_ba, Ladder::A), (k.k_bb, Ladder::B)],
            NoiseOp { mode: 1, dagger: false },
        ),
        OutputOp::ADag => (
            [(k.k_aa.conj(), Ladder::ADag), (k.k_ab.conj(), Ladder::BDag)],
            NoiseOp { mode: 0, dagger: true },
        ),
        OutputOp::BDag => (
            [(k.k_ba.conj(), Ladder::ADag), (k.k_bb.conj(), Ladder::BDag)],
            NoiseOp { mode: 1, dagger: true },
        ),
    }
}

/// `⟨ops[0] … ops[n−1]⟩` at the output for the given input and noise.
pub fn normally_ordered(
    ops: &[OutputOp],
    input: &FockState,
    k: &Propagator,
    cov: &NoiseCovariance,
) -> Complex64 {
    let pieces: Vec<_> = ops.iter().map(|&op| split(k, op)).collect();
    let n = ops.len();
    let mut total = Complex64::new(0.0, 0.0);
    let mut choice = alloc::vec![0u8; n];
    let terms = 3usize.pow(n as u32);
    let mut input_ops = Vec::with_capacity(n);
    let mut noise_ops = Vec::with_capacity(n);
    for t in 0..terms {
        let mut rem = t;
        for c in choice.iter_mut() {
            *c = (rem % 3) as u8;
            rem /= 3;
        }
        input_ops.clear();
        noise_ops.clear();
        let mut coeff = Complex64::new(1.0, 0.0);
        for (piece, &c) in pieces.iter().zip(&choice) {
            match c {
                0 | 1 => {
                    let (w, op) = piece.0[c as usize];
                    coeff *= w;
                    input_ops.push(op);
                }
                _ => noise_ops.push(piece.1),
            }
        }
        if coeff == Complex64::new(0.0, 0.0) {
            continue;
        }
        let noise = wick(cov, &noise_ops);
        if noise == Complex64::new(0.0, 0.0) {
            continue;
        }
        total += coeff * noise * input.expectation(&input_ops);
    }
    total
}

/// `⟨a†b†ab⟩` at the output, by enumerating all 81 terms.
pub fn fourth_moment_expand(
    input: InputState,
    params: SystemParams,
) -> Result<f64, quadrature::NonConvergence> {
    let cov = noise_covariance(params)?;
    let v = normally_ordered(
        &[OutputOp::ADag, OutputOp::BDag, OutputOp::A, OutputOp::B],
        &FockState::from_input(input),
        &propagator(params),
        &cov,
    );
    Ok(v.re)
}
