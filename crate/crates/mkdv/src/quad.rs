//! Quadrature building blocks.
//!
//! * Gauss-Legendre nodes/weights generated at runtime by Newton iteration
//!   on the Legendre recurrence (machine precision, no tabulated literals).
//! * A graded-panel rule for integrands with an integrable logarithmic
//!   endpoint singularity.
//! * Adaptive Simpson, used mainly by test oracles.

use crate::real::{fl, Real};

/// Gauss-Legendre rule of order `n` on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = T::from_usize(n).unwrap();
        for i in 0..(n + 1) / 2 {
            // Chebyshev initial guess, then Newton on P_n.
            let k = fl::<T>(std::f64::consts::PI) * (T::from_usize(i).unwrap() + fl(0.75))
                / (nf + fl(0.5));
            let mut x = k.cos();
            let mut dp = T::zero();
            for _ in 0..100 {
                let (p, d) = legendre_and_deriv(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * (T::one() + x.abs()) {
                    let (_, d2) = legendre_and_deriv(n, x);
                    dp = d2;
                    break;
                }
            }
            let w = fl::<T>(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate `f` over [a, b] with a single panel.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = fl::<T>(0.5);
        let mid = half * (a + b);
        let rad = half * (b - a);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += *w * f(mid + rad * *x);
        }
        acc * rad
    }
}

fn legendre_and_deriv<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((fl::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = T::from_usize(n).unwrap() * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Integrate `f` on [a, b] where `f` may have an integrable logarithmic
/// singularity at the endpoint `b`. Panels shrink geometrically toward `b`;
/// each panel is handled by a fixed Gauss-Legendre rule. The leftover sliver
/// of relative width 2^-levels is dropped (the integrand is integrable, so
/// its contribution is below any tolerance used here).
pub fn graded_toward_end<T: Real, F: FnMut(T) -> T>(
    a: T,
    b: T,
    levels: usize,
    rule: &GaussLegendre<T>,
    mut f: F,
) -> T {
    let span = b - a;
    if !(span > T::zero()) {
        return T::zero();
    }
    let half = fl::<T>(0.5);
    let mut acc = T::zero();
    // Panels: [a, m1], [m1, m2], ... with m_k = b - span/2^k.
    let mut left = a;
    let mut width = span * half;
    for _ in 0..levels {
        let right = b - width;
        // Stop once the panel edge is no longer representable strictly
        // inside (left, b); beyond this the sliver contribution of an
        // integrable singularity is below roundoff.
        if !(right > left) || !(right < b) {
            break;
        }
        acc += rule.integrate(left, right, &mut f);
        left = right;
        width = width * half;
    }
    acc
}

/// Adaptive Simpson with absolute tolerance. Used by oracles; panics are
/// avoided by a depth cap (the final estimate is returned regardless).
pub fn adaptive_simpson<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T, max_depth: usize) -> T {
    let fa = f(a);
    let fb = f(b);
    let m = fl::<T>(0.5) * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / fl::<T>(6.0) * (fa + fl::<T>(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: usize,
) -> T {
    let m = fl::<T>(0.5) * (a + b);
    let lm = fl::<T>(0.5) * (a + m);
    let rm = fl::<T>(0.5) * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= fl::<T>(15.0) * tol {
        return left + right + delta / fl::<T>(15.0);
    }
    let half_tol = fl::<T>(0.5) * tol;
    simpson_rec(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = GaussLegendre::<f64>::new(8);
        // Degree 15 is integrated exactly by an 8-point rule.
        let exact = 2.0 / 15.0; // integral of x^14 over [-1,1]
        let got = rule.integrate(-1.0, 1.0, |x| x.powi(14));
        assert!((got - exact).abs() < 1e-14);
        let got_odd = rule.integrate(-1.0, 1.0, |x| x.powi(15));
        assert!(got_odd.abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_16_on_oscillatory() {
        let rule = GaussLegendre::<f64>::new(16);
        // integral of cos(3x) over [0, 1] = sin(3)/3
        let got = rule.integrate(0.0, 1.0, |x| (3.0 * x).cos());
        assert!((got - (3.0f64).sin() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn graded_log_endpoint() {
        // integral_0^1 ln(1-x) dx = -1
        let rule = GaussLegendre::<f64>::new(16);
        let got = graded_toward_end(0.0, 1.0, 60, &rule, |x| (1.0 - x).ln());
        assert!((got + 1.0).abs() < 1e-13, "got {got}");
    }

    #[test]
    fn adaptive_simpson_smooth() {
        let got = adaptive_simpson(&|x: f64| (-x * x).exp(), -6.0, 6.0, 1e-12, 40);
        assert!((got - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }
}
