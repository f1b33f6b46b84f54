//! Painleve II profiles of the Ablowitz-Segur family and the similarity
//! form of the solution.
//!
//! Substituting y(x, t) = (3t)^{-1/3} p(x / (3t)^{1/3}) into the MKdV
//! equation y_t - 6 y^2 y_x + y_xxx = 0 gives p''' = (s p + 2 p^3)', and one
//! integration with decay at s -> +inf yields
//!
//! ```text
//! p'' = s p + 2 p^3.
//! ```
//!
//! The family is parameterized by the Airy seed coefficient k: p(s) ~ k Ai(s)
//! as s -> +inf, bounded on the line for |k| < 1. Profiles are integrated
//! downward from the decaying side with an adaptive Dormand-Prince 5(4)
//! stepper, sampled on a uniform descending grid.

use crate::error::{Error, Result};
use crate::interp::Spline;
use crate::real::{fl, Real};
use crate::special::{airy_ai, airy_ai_prime};

/// Configuration for the PII integration.
#[derive(Clone, Copy, Debug)]
pub struct PiiConfig<T> {
    pub rtol: T,
    pub atol: T,
    /// Output grid spacing (descending from s_max).
    pub out_step: T,
    /// Blow-up guard on |p|.
    pub p_bound: T,
}

impl<T: Real> Default for PiiConfig<T> {
    fn default() -> Self {
        PiiConfig {
            rtol: fl(1e-10),
            atol: fl(1e-12),
            out_step: fl(2.5e-4),
            p_bound: fl(50.0),
        }
    }
}

/// A Painleve II solution in the Ablowitz-Segur family.
#[derive(Clone, Debug)]
pub struct PainleveProfile<T> {
    /// Airy-seed coefficient.
    pub k: T,
    /// Descending sample grid from s_max to s_min.
    pub sgrid: Vec<T>,
    /// p at the grid nodes.
    pub p: Vec<T>,
    /// p' at the grid nodes.
    pub dp: Vec<T>,
    /// Sup-norm of the interior second-difference ODE residual.
    pub residual_norm: T,
}

impl<T: Real> PainleveProfile<T> {
    pub fn s_min(&self) -> T {
        *self.sgrid.last().unwrap()
    }

    pub fn s_max(&self) -> T {
        self.sgrid[0]
    }

    /// Cubic interpolant of p on the (ascending) grid.
    pub fn interpolant(&self) -> Result<Spline<T>> {
        let n = self.sgrid.len();
        let h = self.sgrid[0] - self.sgrid[1];
        let asc: Vec<T> = self.p.iter().rev().copied().collect();
        Spline::new(self.sgrid[n - 1], h, &asc)
    }

    pub fn p_at(&self, s: T) -> Result<T> {
        if s < self.s_min() || s > self.s_max() {
            return Err(Error::OutOfRange {
                arg: s.to_f64().unwrap_or(f64::NAN),
                lo: self.s_min().to_f64().unwrap_or(f64::NAN),
                hi: self.s_max().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.interpolant()?.eval(s))
    }

    /// Enforce the type invariants: seeding, boundedness, interior residual.
    pub fn validate(&self, cfg: &PiiConfig<T>) -> Result<()> {
        let seed = self.k * airy_ai(self.s_max());
        if (self.p[0] - seed).abs() > fl::<T>(1e-12) * (T::one() + seed.abs()) {
            return Err(Error::InvalidConfig(format!(
                "seeding violated: p(s_max) = {:?} vs k Ai = {:?}",
                self.p[0].to_f64(),
                seed.to_f64()
            )));
        }
        let sup = self.p.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if sup > cfg.p_bound {
            return Err(Error::PiiBlowUp {
                s: f64::NAN,
                p_abs: sup.to_f64().unwrap_or(f64::NAN),
            });
        }
        if self.residual_norm > fl(1e-6) {
            return Err(Error::InvalidConfig(format!(
                "interior ODE residual {:.3e} exceeds 1e-6",
                self.residual_norm.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(())
    }
}

#[inline]
fn pii_rhs<T: Real>(s: T, y: [T; 2]) -> [T; 2] {
    [y[1], s * y[0] + fl::<T>(2.0) * y[0] * y[0] * y[0]]
}

/// Integrate the Ablowitz-Segur solution with seed coefficient `k` from
/// s_max down to s_min.
///
/// Preconditions: |k| < 1 and |k Ai(s_max)| < 1e-10 (the seed must be taken
/// in the decayed regime).
pub fn solve_pii<T: Real>(
    k: T,
    s_min: T,
    s_max: T,
    cfg: &PiiConfig<T>,
) -> Result<PainleveProfile<T>> {
    if !(k.abs() < T::one()) {
        return Err(Error::InvalidConfig(format!(
            "|k| = {} >= 1: outside the bounded Ablowitz-Segur regime",
            k.abs().to_f64().unwrap_or(f64::NAN)
        )));
    }
    if !(s_min < s_max) {
        return Err(Error::InvalidConfig("need s_min < s_max".into()));
    }
    let seed = k * airy_ai(s_max);
    if seed.abs() >= fl(1e-10) {
        return Err(Error::InvalidConfig(format!(
            "|k Ai(s_max)| = {:.3e} >= 1e-10; increase s_max",
            seed.abs().to_f64().unwrap_or(f64::NAN)
        )));
    }
    let n_out = ((s_max - s_min) / cfg.out_step)
        .ceil()
        .to_usize()
        .unwrap_or(0)
        + 1;
    let mut sgrid = Vec::with_capacity(n_out);
    let mut p = Vec::with_capacity(n_out);
    let mut dp = Vec::with_capacity(n_out);
    let mut state = [seed, k * airy_ai_prime(s_max)];
    let mut s = s_max;
    sgrid.push(s);
    p.push(state[0]);
    dp.push(state[1]);
    let mut h = -cfg.out_step; // downward
    for i in 1..n_out {
        let target = if i == n_out - 1 {
            s_min
        } else {
            s_max - cfg.out_step * T::from_usize(i).unwrap()
        };
        while s > target {
            let trial = h.max(target - s); // clip to the output node
            let (s_new, y_new, h_next) = dp54_step(s, state, trial, cfg)?;
            s = s_new;
            state = y_new;
            h = h_next.max(-(cfg.out_step));
            if state[0].abs() > cfg.p_bound {
                return Err(Error::PiiBlowUp {
                    s: s.to_f64().unwrap_or(f64::NAN),
                    p_abs: state[0].abs().to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        sgrid.push(target);
        s = target;
        p.push(state[0]);
        dp.push(state[1]);
    }
    let residual_norm = second_difference_residual(&sgrid, &p);
    let profile = PainleveProfile {
        k,
        sgrid,
        p,
        dp,
        residual_norm,
    };
    profile.validate(cfg)?;
    Ok(profile)
}

/// One accepted Dormand-Prince 5(4) step (h < 0 here); returns the new state
/// and a suggested next step, shrinking until the embedded error passes.
fn dp54_step<T: Real>(
    s: T,
    y: [T; 2],
    h_try: T,
    cfg: &PiiConfig<T>,
) -> Result<(T, [T; 2], T)> {
    let mut h = h_try;
    for _ in 0..40 {
        let (y5, err) = dp54_core(s, y, h);
        let tol = cfg.atol
            + cfg.rtol * y[0].abs().max(y[1].abs()).max(y5[0].abs()).max(y5[1].abs());
        let e = err / tol;
        if e <= T::one() || h.abs() <= fl(1e-14) {
            // PI-free controller: classical fifth-root growth, capped.
            let fac = fl::<T>(0.9) * e.max(fl(1e-10)).powf(fl(-0.2));
            let fac = fac.min(fl(5.0)).max(fl(0.2));
            return Ok((s + h, y5, h * fac));
        }
        let fac = (fl::<T>(0.9) * e.powf(fl(-0.2))).max(fl(0.1));
        h = h * fac;
    }
    Err(Error::StepFailure(format!(
        "adaptive step failed near s = {}",
        s.to_f64().unwrap_or(f64::NAN)
    )))
}

fn dp54_core<T: Real>(s: T, y: [T; 2], h: T) -> ([T; 2], T) {
    let add = |a: [T; 2], b: [T; 2], c: T| [a[0] + b[0] * c, a[1] + b[1] * c];
    let k1 = pii_rhs(s, y);
    let k2 = pii_rhs(s + h * fl(0.2), add(y, k1, h * fl(0.2)));
    let mut u = add(y, k1, h * fl(3.0 / 40.0));
    u = add(u, k2, h * fl(9.0 / 40.0));
    let k3 = pii_rhs(s + h * fl(0.3), u);
    let mut u = add(y, k1, h * fl(44.0 / 45.0));
    u = add(u, k2, h * fl(-56.0 / 15.0));
    u = add(u, k3, h * fl(32.0 / 9.0));
    let k4 = pii_rhs(s + h * fl(0.8), u);
    let mut u = add(y, k1, h * fl(19372.0 / 6561.0));
    u = add(u, k2, h * fl(-25360.0 / 2187.0));
    u = add(u, k3, h * fl(64448.0 / 6561.0));
    u = add(u, k4, h * fl(-212.0 / 729.0));
    let k5 = pii_rhs(s + h * fl(8.0 / 9.0), u);
    let mut u = add(y, k1, h * fl(9017.0 / 3168.0));
    u = add(u, k2, h * fl(-355.0 / 33.0));
    u = add(u, k3, h * fl(46732.0 / 5247.0));
    u = add(u, k4, h * fl(49.0 / 176.0));
    u = add(u, k5, h * fl(-5103.0 / 18656.0));
    let k6 = pii_rhs(s + h, u);
    let mut y5 = add(y, k1, h * fl(35.0 / 384.0));
    y5 = add(y5, k3, h * fl(500.0 / 1113.0));
    y5 = add(y5, k4, h * fl(125.0 / 192.0));
    y5 = add(y5, k5, h * fl(-2187.0 / 6784.0));
    y5 = add(y5, k6, h * fl(11.0 / 84.0));
    let k7 = pii_rhs(s + h, y5);
    // Embedded 4th-order error coefficients (b5 - b4).
    let e1 = fl::<T>(35.0 / 384.0 - 5179.0 / 57600.0);
    let e3 = fl::<T>(500.0 / 1113.0 - 7571.0 / 16695.0);
    let e4 = fl::<T>(125.0 / 192.0 - 393.0 / 640.0);
    let e5 = fl::<T>(-2187.0 / 6784.0 + 92097.0 / 339200.0);
    let e6 = fl::<T>(11.0 / 84.0 - 187.0 / 2100.0);
    let e7 = fl::<T>(-1.0 / 40.0);
    let mut err = T::zero();
    for i in 0..2 {
        let e = h
            * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        err = err.max(e.abs());
    }
    (y5, err)
}

/// Sup-norm of (p[i-1] - 2 p[i] + p[i+1]) / h^2 - (s p + 2 p^3) over the
/// interior of a uniform grid.
fn second_difference_residual<T: Real>(sgrid: &[T], p: &[T]) -> T {
    let n = sgrid.len();
    if n < 3 {
        return T::zero();
    }
    let h = (sgrid[0] - sgrid[1]).abs();
    let inv_h2 = T::one() / (h * h);
    let mut worst = T::zero();
    for i in 1..n - 1 {
        // The last output interval may be shorter; skip non-uniform spots.
        let h_left = (sgrid[i - 1] - sgrid[i]).abs();
        let h_right = (sgrid[i] - sgrid[i + 1]).abs();
        if (h_left - h).abs() > fl::<T>(1e-12) * h || (h_right - h).abs() > fl::<T>(1e-12) * h {
            continue;
        }
        let second = (p[i - 1] - (p[i] + p[i]) + p[i + 1]) * inv_h2;
        let res = second - sgrid[i] * p[i] - fl::<T>(2.0) * p[i] * p[i] * p[i];
        worst = worst.max(res.abs());
    }
    worst
}

/// Similarity-form evaluation y(x, t) = (3t)^{-1/3} p(x / (3t)^{1/3}).
pub fn similarity_eval<T: Real>(x: T, t: T, profile: &PainleveProfile<T>) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::InvalidConfig("similarity form needs t > 0".into()));
    }
    let scale = (fl::<T>(3.0) * t).powf(fl(1.0 / 3.0));
    let s = x / scale;
    Ok(profile.p_at(s)? / scale)
}

/// Least-squares fit of the seed coefficient k against samples y(x0, t_i),
/// by golden-section search on the residual sum of squares. Returns the
/// fitted k and the RSS. The k <-> r connection is not fixed by theory here;
/// this fit (and the |k| = |r(0)| default elsewhere) are lab conventions.
pub fn fit_k<T: Real>(
    x0: T,
    samples: &[(T, T)],
    k_range: (T, T),
    cfg: &PiiConfig<T>,
) -> Result<(T, T)> {
    if samples.is_empty() {
        return Err(Error::InvalidConfig("fit_k needs samples".into()));
    }
    let s_needed: Vec<T> = samples
        .iter()
        .map(|(t, _)| x0 / (fl::<T>(3.0) * *t).powf(fl(1.0 / 3.0)))
        .collect();
    let s_lo = s_needed.iter().fold(T::infinity(), |m, v| m.min(*v)) - fl(0.5);
    let s_max = fl::<T>(10.5);
    let rss = |k: T| -> Result<T> {
        let prof = solve_pii(k, s_lo.min(fl(-1.0)), s_max, cfg)?;
        let mut acc = T::zero();
        for (t, y) in samples {
            let val = similarity_eval(x0, *t, &prof)?;
            let d = *y - val;
            acc += d * d;
        }
        Ok(acc)
    };
    let golden = fl::<T>(0.618_033_988_749_894_9);
    let (mut a, mut b) = k_range;
    let mut c = b - golden * (b - a);
    let mut d = a + golden * (b - a);
    let mut fc = rss(c)?;
    let mut fd = rss(d)?;
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - golden * (b - a);
            fc = rss(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + golden * (b - a);
            fd = rss(d)?;
        }
        if (b - a).abs() < fl(1e-9) {
            break;
        }
    }
    let k = (a + b) * fl(0.5);
    Ok((k, rss(k)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_seed_gives_zero_profile() {
        let cfg = PiiConfig::default();
        let prof = solve_pii(0.0f64, -10.0, 10.5, &cfg).unwrap();
        assert!(prof.p.iter().all(|v| v.abs() == 0.0));
        assert_eq!(prof.residual_norm, 0.0);
    }

    #[test]
    fn tiny_seed_stays_in_linear_regime() {
        // k = 1e-4: sup |p - k Ai| <= 1e-10 down to s = -5.
        let cfg = PiiConfig {
            rtol: 1e-12,
            atol: 1e-14,
            ..PiiConfig::default()
        };
        let k = 1e-4f64;
        let prof = solve_pii(k, -5.0, 10.5, &cfg).unwrap();
        let mut worst = 0.0f64;
        for (s, p) in prof.sgrid.iter().zip(&prof.p) {
            worst = worst.max((p - k * airy_ai(*s)).abs());
        }
        assert!(worst <= 1e-10, "sup |p - k Ai| = {worst:.3e}");
    }

    #[test]
    fn cubic_onset_bound() {
        // For |k| <= 1e-3 the nonlinear correction is O(k^3) on s >= -5.
        let cfg = PiiConfig {
            rtol: 1e-12,
            atol: 1e-14,
            ..PiiConfig::default()
        };
        for k in [5e-4f64, 1e-3] {
            let prof = solve_pii(k, -5.0, 10.5, &cfg).unwrap();
            let mut worst = 0.0f64;
            for (s, p) in prof.sgrid.iter().zip(&prof.p) {
                worst = worst.max((p - k * airy_ai(*s)).abs());
            }
            assert!(worst <= 10.0 * k * k * k, "k={k}: {worst:.3e}");
        }
    }

    #[test]
    fn moderate_seed_residual_and_bound() {
        let cfg = PiiConfig::default();
        let prof = solve_pii(0.5f64, -20.0, 10.5, &cfg).unwrap();
        assert!(prof.residual_norm <= 1e-6, "residual {:.3e}", prof.residual_norm);
        let sup = prof.p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(sup < 1.0, "AS profile should stay bounded, sup = {sup}");
        // Seeding invariant.
        assert!((prof.p[0] - 0.5 * airy_ai(10.5)).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        let cfg = PiiConfig::default();
        assert!(solve_pii(1.0f64, -5.0, 10.5, &cfg).is_err());
        assert!(solve_pii(0.5f64, -5.0, 3.0, &cfg).is_err()); // seed too large
        assert!(solve_pii(0.5f64, 5.0, -5.0, &cfg).is_err());
    }

    #[test]
    fn similarity_eval_basics() {
        let cfg = PiiConfig::default();
        let prof = solve_pii(0.4f64, -12.0, 10.5, &cfg).unwrap();
        // x = 0: value is (3t)^{-1/3} p(0).
        let p0 = prof.p_at(0.0).unwrap();
        for t in [1.0, 5.0, 40.0] {
            let y = similarity_eval(0.0, t, &prof).unwrap();
            assert!((y - p0 / (3.0 * t).powf(1.0 / 3.0)).abs() < 1e-14);
        }
        // Out of range is rejected.
        assert!(similarity_eval(-200.0, 1.0, &prof).is_err());
    }

    #[test]
    fn similarity_self_consistency() {
        // (x, t) -> (2x, 8t) leaves s = x/(3t)^{1/3} unchanged; outputs
        // differ exactly by the (3t)^{-1/3} prefactor ratio 1/2.
        let cfg = PiiConfig::default();
        let prof = solve_pii(0.3f64, -12.0, 10.5, &cfg).unwrap();
        for (x, t) in [(-1.0, 2.0), (0.7, 1.0), (2.5, 3.0)] {
            let y1 = similarity_eval(x, t, &prof).unwrap();
            let y2 = similarity_eval(2.0 * x, 8.0 * t, &prof).unwrap();
            assert!((y2 * 2.0 - y1).abs() < 1e-12, "x={x} t={t}");
        }
    }

    #[test]
    fn mkdv_substitution_residual_shrinks() {
        // Insert the similarity form into y_t - 6 y^2 y_x + y_xxx via finite
        // differences; the residual must fall ~4x when the steps halve,
        // confirming the sign convention of p'' = s p + 2 p^3.
        let cfg = PiiConfig::default();
        let prof = solve_pii(0.5f64, -14.0, 10.5, &cfg).unwrap();
        let y = |x: f64, t: f64| similarity_eval(x, t, &prof).unwrap();
        let residual = |x: f64, t: f64, hx: f64, ht: f64| -> f64 {
            let y_t = (y(x, t + ht) - y(x, t - ht)) / (2.0 * ht);
            let y_x = (y(x + hx, t) - y(x - hx, t)) / (2.0 * hx);
            let y_xxx = (-0.5 * y(x - 2.0 * hx, t) + y(x - hx, t) - y(x + hx, t)
                + 0.5 * y(x + 2.0 * hx, t))
                / (hx * hx * hx);
            let yy = y(x, t);
            y_t - 6.0 * yy * yy * y_x + y_xxx
        };
        for (x, t) in [(-2.0, 2.0), (0.5, 3.0), (-5.0, 4.0)] {
            let r1 = residual(x, t, 0.08, 0.02).abs();
            let r2 = residual(x, t, 0.04, 0.01).abs();
            assert!(
                r2 < r1 / 2.5 + 1e-9,
                "(x={x}, t={t}): residuals {r1:.3e} -> {r2:.3e}"
            );
            assert!(r2 < 2e-3, "residual too large: {r2:.3e}");
        }
    }

    #[test]
    fn fit_k_recovers_truth_from_synthetic_data() {
        let cfg = PiiConfig::default();
        let k_true = 0.37f64;
        let prof = solve_pii(k_true, -3.0, 10.5, &cfg).unwrap();
        let samples: Vec<(f64, f64)> = (0..8)
            .map(|i| {
                let t = 20.0 + 10.0 * i as f64;
                (t, similarity_eval(0.0, t, &prof).unwrap())
            })
            .collect();
        let (k_fit, rss) = fit_k(0.0, &samples, (0.05, 0.9), &cfg).unwrap();
        assert!((k_fit - k_true).abs() < 1e-6, "k_fit = {k_fit}");
        assert!(rss < 1e-20);
    }
}
