//! Minimal double-word ("double-double") arithmetic.
//!
//! A value is stored as an unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2,
//! giving roughly twice the working precision. Used where a series suffers
//! catastrophic cancellation (the Airy Maclaurin series at moderate |s|).
//! Only the operations needed there are provided.

use crate::real::Real;

#[derive(Copy, Clone, Debug)]
pub struct Dd<T> {
    pub hi: T,
    pub lo: T,
}

#[inline]
fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Exact product via FMA-free Dekker splitting.
#[inline]
fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

#[inline]
fn split<T: Real>(a: T) -> (T, T) {
    // Dekker splitter: 2^27 + 1 for f64, 2^12 + 1 for f32.
    let factor = T::from_f64(if size_of::<T>() == 4 { 4097.0 } else { 134_217_729.0 }).unwrap();
    let t = factor * a;
    let ah = t - (t - a);
    let al = a - ah;
    (ah, al)
}

use std::mem::size_of;

impl<T: Real> Dd<T> {
    #[inline]
    pub fn from_t(x: T) -> Self {
        Dd { hi: x, lo: T::zero() }
    }

    #[inline]
    pub fn zero() -> Self {
        Dd { hi: T::zero(), lo: T::zero() }
    }

    #[inline]
    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, other: Self) -> Self {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_t(self, x: T) -> Self {
        self.mul(Dd::from_t(x))
    }

    /// Division by a plain scalar (one Newton correction).
    #[inline]
    pub fn div_t(self, x: T) -> Self {
        let q1 = self.hi / x;
        let (p, e) = two_prod(q1, x);
        let r = ((self.hi - p) - e + self.lo) / x;
        let (hi, lo) = quick_two_sum(q1, r);
        Dd { hi, lo }
    }

    #[inline]
    pub fn value(self) -> T {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs_value(self) -> T {
        self.value().abs()
    }
}
