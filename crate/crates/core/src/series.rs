//! Entire functions of `z = (g² − 1)·l²` that make up the propagator and
//! its antiderivatives. Each one is real for either sign of `z`, so the
//! unbroken (`z < 0`), exceptional (`z ≈ 0`) and broken (`z > 0`) phases
//! share one code path.
//!
//! Generic over [`Real`] so the same formulas run in `f64` and in
//! double-double ([`Dd`]).

use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Float;
use twofloat::TwoFloat;

/// Minimum number of Taylor terms, regardless of how fast the tail decays.
const MIN_TERMS: usize = 6;
const MAX_TERMS: usize = 200;

/// Below this `|argument|` the antiderivatives switch to their Taylor
/// series; the closed forms lose digits to cancellation there.
pub(crate) const SERIES_RADIUS: f64 = 1.0;

/// The handful of operations the kernels need.
pub(crate) trait Real:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lit(x: f64) -> Self;
    fn epsilon() -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn cosh(self) -> Self;
    fn sinh(self) -> Self;
    fn cos(self) -> Self;
    fn sin(self) -> Self;

    fn zero() -> Self {
        Self::lit(0.0)
    }
    fn one() -> Self {
        Self::lit(1.0)
    }
}

impl Real for f64 {
    fn lit(x: f64) -> Self {
        x
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn abs(self) -> Self {
        Float::abs(self)
    }
    fn sqrt(self) -> Self {
        Float::sqrt(self)
    }
    fn cosh(self) -> Self {
        Float::cosh(self)
    }
    fn sinh(self) -> Self {
        Float::sinh(self)
    }
    fn cos(self) -> Self {
        Float::cos(self)
    }
    fn sin(self) -> Self {
        Float::sin(self)
    }
}

/// `eˣ − 1` in double-double: reduce by `k·ln 2`, shrink by `2¹⁰`, sum the
/// Taylor series, then undo the shrink with `u ← u(2 + u)`.
///
/// `TwoFloat::exp` itself is only good to about `1e-18` relative.
fn dd_exp_parts(x: Dd) -> (TwoFloat, i32) {
    const HALVINGS: i32 = 10;
    let k = libm::round(x.hi() / core::f64::consts::LN_2);
    let r = (x.0 - twofloat::consts::LN_2 * k) / f64::from(1u32 << HALVINGS);
    let mut term = r;
    let mut u = r;
    for n in 2..30 {
        term = term * r / n as f64;
        u += term;
        if term.hi().abs() <= 1e-34 * u.hi().abs() {
            break;
        }
    }
    for _ in 0..HALVINGS {
        u = u * (u + 2.0);
    }
    (u, k as i32)
}

fn pow2(k: i32) -> f64 {
    libm::ldexp(1.0, k)
}

fn dd_exp(x: Dd) -> Dd {
    let (u, k) = dd_exp_parts(x);
    Dd((u + 1.0) * pow2(k))
}

/// Taylor series of `sinh` for small arguments, where `(eˣ − e⁻ˣ)/2`
/// cancels.
fn dd_sinh_small(x: Dd) -> Dd {
    let x = x.0;
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..40 {
        term = term * x2 / ((2 * n) as f64 * (2 * n + 1) as f64);
        sum += term;
        if term.hi().abs() <= 1e-34 * sum.hi().abs() {
            break;
        }
    }
    Dd(sum)
}

/// Double-double value. Wraps [`TwoFloat`] to replace its `dd ÷ dd` and
/// `sqrt`, which are only good to about `1e-17`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub(crate) struct Dd(pub TwoFloat);

impl Dd {
    pub(crate) fn hi(self) -> f64 {
        self.0.hi()
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd(TwoFloat::from(x))
    }
}

impl From<Dd> for f64 {
    fn from(x: Dd) -> Self {
        f64::from(x.0)
    }
}

macro_rules! dd_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Dd {
            type Output = Dd;
            fn $f(self, rhs: Dd) -> Dd {
                Dd($tr::$f(self.0, rhs.0))
            }
        }
        impl $tr<f64> for Dd {
            type Output = Dd;
            fn $f(self, rhs: f64) -> Dd {
                Dd($tr::$f(self.0, rhs))
            }
        }
    )*};
}
dd_ops!(Add add, Sub sub, Mul mul);

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, rhs: f64) -> Dd {
        Dd(self.0 / rhs)
    }
}

impl Div for Dd {
    type Output = Dd;
    /// Three rounds of long division, each remainder formed exactly.
    fn div(self, rhs: Dd) -> Dd {
        let b = rhs.0;
        let q1 = self.0.hi() / b.hi();
        let r = self.0 - b * q1;
        let q2 = r.hi() / b.hi();
        let r = r - b * q2;
        let q3 = r.hi() / b.hi();
        Dd(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Real for Dd {
    fn lit(x: f64) -> Self {
        Dd::from(x)
    }
    fn epsilon() -> Self {
        Dd(TwoFloat::EPSILON)
    }
    fn abs(self) -> Self {
        Dd(TwoFloat::abs(&self.0))
    }
    /// One Newton step from the `f64` root.
    fn sqrt(self) -> Self {
        if self.hi() <= 0.0 {
            return Dd::from(0.0);
        }
        let y = libm::sqrt(self.hi());
        let residual = self.0 - TwoFloat::from(y) * y;
        Dd(residual / (2.0 * y) + y)
    }
    fn cosh(self) -> Self {
        let e = dd_exp(self.abs());
        (e + Dd::from(1.0) / e) / 2.0
    }
    fn sinh(self) -> Self {
        if self.hi().abs() < 1.0 {
            dd_sinh_small(self)
        } else {
            let e = dd_exp(self);
            (e - Dd::from(1.0) / e) / 2.0
        }
    }
    fn cos(self) -> Self {
        Dd(TwoFloat::cos(self.0))
    }
    fn sin(self) -> Self {
        Dd(TwoFloat::sin(self.0))
    }
}

fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

/// `first + first·r(1) + first·r(1)·r(2) + ...` until the tail is below
/// machine precision.
fn sum_series<T: Real>(first: T, ratio: impl Fn(usize) -> T) -> T {
    let mut term = first;
    let mut sum = first;
    for k in 1..MAX_TERMS {
        term = term * ratio(k);
        sum = sum + term;
        if k + 1 >= MIN_TERMS && term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    sum
}

/// `cosh(√z)`, i.e. `Σ zᵏ/(2k)!`.
pub(crate) fn cosh_sqrt_series<T: Real>(z: T) -> T {
    sum_series(T::one(), |k| {
        let k = lit::<T>(k as f64);
        z / ((lit::<T>(2.0) * k - T::one()) * (lit::<T>(2.0) * k))
    })
}

/// `sinh(√z)/√z`, i.e. `Σ zᵏ/(2k+1)!`.
pub(crate) fn sinhc_sqrt_series<T: Real>(z: T) -> T {
    sum_series(T::one(), |k| {
        let k = lit::<T>(k as f64);
        z / ((lit::<T>(2.0) * k) * (lit::<T>(2.0) * k + T::one()))
    })
}

/// `cosh(√z)`, continued to `cos(√−z)` for negative `z`.
pub(crate) fn cosh_sqrt<T: Real>(z: T) -> T {
    if z > T::zero() {
        z.sqrt().cosh()
    } else if z < T::zero() {
        (-z).sqrt().cos()
    } else {
        T::one()
    }
}

/// `sinh(√z)/√z`, continued to `sin(√−z)/√−z` for negative `z`.
pub(crate) fn sinhc_sqrt<T: Real>(z: T) -> T {
    if z > T::zero() {
        let r = z.sqrt();
        r.sinh() / r
    } else if z < T::zero() {
        let r = (-z).sqrt();
        r.sin() / r
    } else {
        T::one()
    }
}

/// `(sinhc(2√z) − 1)/(2z)` so that `∫₀ˡ (sinh(λx)/λ)² dx = l³·P(z)`.
pub(crate) fn sinh_sq_integral<T: Real>(z: T) -> T {
    let four_z = lit::<T>(4.0) * z;
    if four_z.abs() <= lit(SERIES_RADIUS) {
        // Σ_{k≥1} 4ᵏ z^{k−1} / (2·(2k+1)!)
        sum_series(T::one() / lit(3.0), |k| {
            let k = lit::<T>(k as f64);
            four_z / ((lit::<T>(2.0) * k + lit(2.0)) * (lit::<T>(2.0) * k + lit(3.0)))
        })
    } else {
        (sinhc_sqrt(four_z) - T::one()) / (lit::<T>(2.0) * z)
    }
}

/// `(cosh(2√z) − 1)/(4z)` so that `∫₀ˡ cosh(λx)·sinh(λx)/λ dx = l²·Q(z)`.
pub(crate) fn cosh_sinh_integral<T: Real>(z: T) -> T {
    let four_z = lit::<T>(4.0) * z;
    if four_z.abs() <= lit(SERIES_RADIUS) {
        // Σ_{k≥1} 4^{k−1} z^{k−1} / (2k)!
        sum_series(lit(0.5), |k| {
            let k = lit::<T>(k as f64);
            four_z / ((lit::<T>(2.0) * k + T::one()) * (lit::<T>(2.0) * k + lit(2.0)))
        })
    } else {
        (cosh_sqrt(four_z) - T::one()) / four_z
    }
}

/// `(1 + sinhc(2√z))/2` so that `∫₀ˡ cosh²(λx) dx = l·R(z)`.
pub(crate) fn cosh_sq_integral<T: Real>(z: T) -> T {
    let four_z = lit::<T>(4.0) * z;
    let sinhc = if four_z.abs() <= lit(SERIES_RADIUS) {
        sinhc_sqrt_series(four_z)
    } else {
        sinhc_sqrt(four_z)
    };
    (T::one() + sinhc) / lit(2.0)
}
