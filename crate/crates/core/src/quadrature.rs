//! Adaptive Simpson quadrature over `[a, b]` for scalar or vector-valued
//! integrands.
//!
//! Each panel is accepted when the two-panel and one-panel estimates differ
//! by at most `15·tol_local`, with the tolerance halved on each bisection.
//! Accepted panels get the usual Richardson correction.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Maximum number of panels that may be bisected before giving up.
pub const MAX_SUBDIVISIONS: usize = 1 << 20;
const MAX_DEPTH: u32 = 60;

/// Values that can be summed, scaled and measured.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    /// Max-norm used for the error test.
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
}

/// Fixed-size bundle of real integrands evaluated together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bundle<const N: usize>(pub [f64; N]);

impl<const N: usize> Add for Bundle<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x += y;
        }
        self
    }
}

impl<const N: usize> Sub for Bundle<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x -= y;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Bundle<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for x in self.0.iter_mut() {
            *x *= rhs;
        }
        self
    }
}

impl<const N: usize> Integrand for Bundle<N> {
    fn zero() -> Self {
        Bundle([0.0; N])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Error budget: the integral is accepted once the estimated error is below
/// `max(absolute, relative·|I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            absolute: 1e-10,
            relative: 1e-13,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonConvergence {
    pub subdivisions: usize,
}

struct Panel<T> {
    a: f64,
    b: f64,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: f64,
    depth: u32,
}

fn simpson<T: Integrand>(a: f64, b: f64, fa: T, fm: T, fb: T) -> T {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

/// `∫ₐᵇ f(x) dx`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<T, NonConvergence>
where
    T: Integrand,
    F: Fn(f64) -> T,
{
    let fa = f(a);
    let fb = f(b);
    if a == b {
        return Ok(T::zero());
    }

    // A coarse composite pass sets the scale for the relative budget.
    const COARSE: usize = 16;
    let h = (b - a) / COARSE as f64;
    let mut coarse = T::zero();
    let mut seeds = Vec::with_capacity(COARSE);
    let mut left = fa;
    for i in 0..COARSE {
        let x0 = a + h * i as f64;
        let x1 = if i + 1 == COARSE { b } else { x0 + h };
        let right = if i + 1 == COARSE { fb } else { f(x1) };
        let mid = f(0.5 * (x0 + x1));
        let s = simpson(x0, x1, left, mid, right);
        coarse = coarse + s;
        seeds.push((x0, x1, left, mid, right, s));
        left = right;
    }
    let budget = tol.absolute.max(tol.relative * coarse.magnitude());

    let mut stack: Vec<Panel<T>> = seeds
        .into_iter()
        .rev()
        .map(|(a, b, fa, fm, fb, whole)| Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole,
            tol: budget / COARSE as f64,
            depth: 0,
        })
        .collect();

    let mut total = T::zero();
    let mut subdivisions = 0usize;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let flm = f(0.5 * (p.a + m));
        let frm = f(0.5 * (m + p.b));
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let both = left + right;
        let diff = both - p.whole;
        if diff.magnitude() <= 15.0 * p.tol {
            total = total + both + diff * (1.0 / 15.0);
            continue;
        }
        subdivisions += 1;
        if subdivisions > MAX_SUBDIVISIONS || p.depth >= MAX_DEPTH {
            return Err(NonConvergence { subdivisions });
        }
        let tol = 0.5 * p.tol;
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            tol,
            depth: p.depth + 1,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            tol,
            depth: p.depth + 1,
        });
    }
    Ok(total)
}
