//! Cubic spline interpolation on a uniform grid.
//!
//! Not-a-knot end conditions; O(n) tridiagonal setup, O(1) evaluation
//! after a direct index computation. Complex-valued data is interpolated
//! by splining real and imaginary parts separately.

use crate::error::{Error, Result};
use crate::real::{fl, Real};
use num_complex::Complex;

/// Cubic spline through `values[i]` at `x0 + i*h`.
#[derive(Clone, Debug)]
pub struct Spline<T> {
    x0: T,
    h: T,
    values: Vec<T>,
    /// Second derivatives at the nodes.
    m: Vec<T>,
}

impl<T: Real> Spline<T> {
    pub fn new(x0: T, h: T, values: &[T]) -> Result<Self> {
        let n = values.len();
        if n < 4 {
            return Err(Error::InvalidGrid(format!(
                "spline needs >= 4 points, got {n}"
            )));
        }
        if !(h > T::zero()) {
            return Err(Error::InvalidGrid("spline spacing must be positive".into()));
        }
        let m = second_derivatives(h, values);
        Ok(Spline {
            x0,
            h,
            values: values.to_vec(),
            m,
        })
    }

    #[inline]
    pub fn x_min(&self) -> T {
        self.x0
    }

    #[inline]
    pub fn x_max(&self) -> T {
        self.x0 + self.h * T::from_usize(self.values.len() - 1).unwrap()
    }

    /// Evaluate at `x`. Outside the grid the value is clamped to the end
    /// segments (callers validate range when extrapolation is unacceptable).
    pub fn eval(&self, x: T) -> T {
        let n = self.values.len();
        let mut i = ((x - self.x0) / self.h).floor().to_usize().unwrap_or(0);
        if i >= n - 1 {
            i = n - 2;
        }
        let xi = self.x0 + self.h * T::from_usize(i).unwrap();
        let a = (x - xi) / self.h;
        let b = T::one() - a;
        let h2 = self.h * self.h / fl::<T>(6.0);
        b * self.values[i]
            + a * self.values[i + 1]
            + h2 * ((b * b * b - b) * self.m[i] + (a * a * a - a) * self.m[i + 1])
    }

    /// First derivative at `x`.
    pub fn eval_deriv(&self, x: T) -> T {
        let n = self.values.len();
        let mut i = ((x - self.x0) / self.h).floor().to_usize().unwrap_or(0);
        if i >= n - 1 {
            i = n - 2;
        }
        let xi = self.x0 + self.h * T::from_usize(i).unwrap();
        let a = (x - xi) / self.h;
        let b = T::one() - a;
        let three = fl::<T>(3.0);
        let six = fl::<T>(6.0);
        (self.values[i + 1] - self.values[i]) / self.h
            + self.h / six
                * ((three * a * a - T::one()) * self.m[i + 1]
                    - (three * b * b - T::one()) * self.m[i])
    }
}

/// Second derivatives for a not-a-knot cubic spline on a uniform grid.
fn second_derivatives<T: Real>(h: T, y: &[T]) -> Vec<T> {
    let n = y.len();
    let six_h2 = fl::<T>(6.0) / (h * h);
    // Interior equations: m[i-1] + 4 m[i] + m[i+1] = 6 (y[i-1] - 2y[i] + y[i+1]) / h^2.
    // Not-a-knot: m[0] - 2 m[1] + m[2] = 0 and same at the right end; eliminate
    // m[0], m[n-1] and solve the reduced tridiagonal system for m[1..n-1].
    let nn = n - 2;
    let mut diag = vec![fl::<T>(4.0); nn];
    let mut rhs = vec![T::zero(); nn];
    for i in 0..nn {
        rhs[i] = six_h2 * (y[i] - (y[i + 1] + y[i + 1]) + y[i + 2]);
    }
    // Folding m0 = 2 m1 - m2 into the first interior equation gives
    // 6 m1 = rhs[0]; symmetrically at the right end.
    let mut c = vec![T::one(); nn]; // super-diagonal
    let mut a = vec![T::one(); nn]; // sub-diagonal
    diag[0] = fl::<T>(6.0);
    c[0] = T::zero();
    diag[nn - 1] = fl::<T>(6.0);
    a[nn - 1] = T::zero();
    // Forward sweep.
    for i in 1..nn {
        let w = a[i] / diag[i - 1];
        diag[i] = diag[i] - w * c[i - 1];
        rhs[i] = rhs[i] - w * rhs[i - 1];
    }
    let mut m_inner = vec![T::zero(); nn];
    m_inner[nn - 1] = rhs[nn - 1] / diag[nn - 1];
    for i in (0..nn - 1).rev() {
        m_inner[i] = (rhs[i] - c[i] * m_inner[i + 1]) / diag[i];
    }
    let mut m = vec![T::zero(); n];
    m[1..(nn + 1)].copy_from_slice(&m_inner);
    let two = fl::<T>(2.0);
    m[0] = two * m[1] - m[2];
    m[n - 1] = two * m[n - 2] - m[n - 3];
    m
}

/// Spline for complex samples: real and imaginary parts independently.
#[derive(Clone, Debug)]
pub struct ComplexSpline<T> {
    re: Spline<T>,
    im: Spline<T>,
}

impl<T: Real> ComplexSpline<T> {
    pub fn new(x0: T, h: T, values: &[Complex<T>]) -> Result<Self> {
        let re: Vec<T> = values.iter().map(|c| c.re).collect();
        let im: Vec<T> = values.iter().map(|c| c.im).collect();
        Ok(ComplexSpline {
            re: Spline::new(x0, h, &re)?,
            im: Spline::new(x0, h, &im)?,
        })
    }

    pub fn eval(&self, x: T) -> Complex<T> {
        Complex::new(self.re.eval(x), self.im.eval(x))
    }

    pub fn x_min(&self) -> T {
        self.re.x_min()
    }

    pub fn x_max(&self) -> T {
        self.re.x_max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubic_exactly() {
        // Not-a-knot splines are exact on cubics.
        let f = |x: f64| 2.0 - x + 0.5 * x * x - 0.25 * x * x * x;
        let n = 16;
        let h = 0.37;
        let x0 = -2.0;
        let vals: Vec<f64> = (0..n).map(|i| f(x0 + h * i as f64)).collect();
        let sp = Spline::new(x0, h, &vals).unwrap();
        for k in 0..100 {
            let x = x0 + (n as f64 - 1.0) * h * (k as f64) / 99.0;
            assert!((sp.eval(x) - f(x)).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn smooth_function_fourth_order() {
        let f = |x: f64| (x * 1.3).sin() * (-0.2 * x * x).exp();
        let err_for = |n: usize| -> f64 {
            let x0 = -5.0;
            let h = 10.0 / (n as f64 - 1.0);
            let vals: Vec<f64> = (0..n).map(|i| f(x0 + h * i as f64)).collect();
            let sp = Spline::new(x0, h, &vals).unwrap();
            (0..1000)
                .map(|k| {
                    let x = -4.5 + 9.0 * (k as f64) / 999.0;
                    (sp.eval(x) - f(x)).abs()
                })
                .fold(0.0, f64::max)
        };
        let e1 = err_for(101);
        let e2 = err_for(201);
        assert!(e2 < e1 / 10.0, "e1={e1:.3e} e2={e2:.3e}");
    }

    #[test]
    fn derivative_accuracy() {
        let f = |x: f64| (0.9 * x).cos();
        let df = |x: f64| -0.9 * (0.9 * x).sin();
        let n = 401;
        let x0 = -4.0;
        let h = 8.0 / (n as f64 - 1.0);
        let vals: Vec<f64> = (0..n).map(|i| f(x0 + h * i as f64)).collect();
        let sp = Spline::new(x0, h, &vals).unwrap();
        for k in 0..50 {
            let x = -3.5 + 7.0 * (k as f64) / 49.0;
            assert!((sp.eval_deriv(x) - df(x)).abs() < 1e-6);
        }
    }
}
