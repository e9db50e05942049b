//! Sign + log-magnitude arithmetic for quantities that overflow or underflow
//! doubles, such as high-degree Hermite polynomial values and products of chi
//! draws.

use crate::float::Scalar;
use num_complex::Complex;
use serde::Serialize;

/// A real number stored as a sign and the natural log of its magnitude.
///
/// `sign == 0` if and only if the value is exactly zero, in which case the
/// log-magnitude is negative infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaledReal<S> {
    sign: i8,
    log_magnitude: S,
}

impl<S: Scalar> ScaledReal<S> {
    pub fn zero() -> Self {
        ScaledReal {
            sign: 0,
            log_magnitude: S::neg_infinity(),
        }
    }

    pub fn one() -> Self {
        ScaledReal {
            sign: 1,
            log_magnitude: S::zero(),
        }
    }

    pub fn from_value(x: S) -> Self {
        if x == S::zero() {
            return Self::zero();
        }
        ScaledReal {
            sign: if x > S::zero() { 1 } else { -1 },
            log_magnitude: x.abs().ln(),
        }
    }

    pub fn from_sign_ln(sign: i8, log_magnitude: S) -> Self {
        if sign == 0 {
            return Self::zero();
        }
        ScaledReal {
            sign: sign.signum(),
            log_magnitude,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of |value|; negative infinity for zero.
    pub fn ln_abs(&self) -> S {
        self.log_magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Back to a plain scalar; overflows to +-inf and underflows to 0 as exp does.
    pub fn value(&self) -> S {
        match self.sign {
            0 => S::zero(),
            1 => self.log_magnitude.exp(),
            _ => -self.log_magnitude.exp(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::zero();
        }
        ScaledReal {
            sign: self.sign * rhs.sign,
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        if self.sign == 0 {
            return Self::zero();
        }
        ScaledReal {
            sign: self.sign * rhs.sign,
            log_magnitude: self.log_magnitude - rhs.log_magnitude,
        }
    }

    pub fn neg(&self) -> Self {
        ScaledReal {
            sign: -self.sign,
            log_magnitude: self.log_magnitude,
        }
    }

    /// Signed ratio self/rhs as a plain scalar; useful when the logs nearly cancel.
    pub fn ratio_value(&self, rhs: &Self) -> S {
        self.div(rhs).value()
    }
}

/// A complex number stored as log-magnitude and phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogPolar<S> {
    log_magnitude: S,
    phase: S,
}

impl<S: Scalar> LogPolar<S> {
    pub fn from_complex(z: Complex<S>) -> Self {
        LogPolar {
            log_magnitude: z.norm().ln(),
            phase: z.arg(),
        }
    }

    pub fn from_parts(log_magnitude: S, phase: S) -> Self {
        LogPolar {
            log_magnitude,
            phase,
        }
    }

    pub fn log_magnitude(&self) -> S {
        self.log_magnitude
    }

    pub fn phase(&self) -> S {
        self.phase
    }

    pub fn value(&self) -> Complex<S> {
        let r = self.log_magnitude.exp();
        Complex::new(r * self.phase.cos(), r * self.phase.sin())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        LogPolar {
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
            phase: self.phase + rhs.phase,
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        LogPolar {
            log_magnitude: self.log_magnitude - rhs.log_magnitude,
            phase: self.phase - rhs.phase,
        }
    }

    /// Ratio self/rhs as a plain complex number.
    pub fn ratio_value(&self, rhs: &Self) -> Complex<S> {
        self.div(rhs).value()
    }
}

/// Mantissa renormalizer for linear recurrences: keeps a running pair of
/// mantissas in a safe range and accumulates the factored-out log-scale.
///
/// Used by the Hermite recurrences, whose values sweep hundreds of orders of
/// magnitude before the final (finite) log is read off.
pub(crate) struct Renorm<S> {
    hi: S,
    lo: S,
    pub acc: S,
}

impl<S: Scalar> Renorm<S> {
    pub fn new() -> Self {
        // sqrt of max keeps one more multiply from overflowing
        let hi = S::max_value().sqrt() * S::c(1e-3);
        Renorm {
            hi,
            lo: hi.recip(),
            acc: S::zero(),
        }
    }

    /// Rescales the pair so |b| returns to O(1) when it leaves [lo, hi].
    #[inline]
    pub fn step(&mut self, a: &mut S, b: &mut S) {
        let m = b.abs();
        if m > self.hi || (m < self.lo && m > S::zero()) {
            *a = *a / m;
            *b = *b / m;
            self.acc += m.ln();
        }
    }
}
