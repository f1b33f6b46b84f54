//! Special functions: complex log-gamma and the Airy function Ai.
//!
//! `log_gamma` is a Lanczos (g = 7, 9-term) evaluation behind a recurrence
//! shift into Re z >= 2, returning the branch that is continuous on the cut
//! plane C \ (-inf, 0] with log Gamma(1) = 0.
//!
//! `airy_ai` / `airy_ai_prime` use the Maclaurin series in double-word
//! arithmetic for |s| <= 8 (the series suffers e^{2 xi} cancellation, xi =
//! (2/3)|s|^{3/2}, which double-word absorbs) and the large-|s| asymptotic
//! expansions truncated at their minimal term beyond.

use crate::dd::Dd;
use crate::real::{fl, Real};
use num_complex::Complex;

/// Lanczos coefficients (g = 7), the GSL/Godfrey set.
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Principal-branch complex log-gamma, continuous on C \ (-inf, 0].
pub fn log_gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = fl::<T>(2.0);
    // Shift into Re z >= 2 where the Lanczos sum is well-behaved.
    let mut shift = Complex::new(T::zero(), T::zero());
    let mut zz = z;
    while zz.re < two {
        shift += zz.ln();
        zz += Complex::new(T::one(), T::zero());
    }
    lanczos_core(zz) - shift
}

fn lanczos_core<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let half = fl::<T>(0.5);
    let mut a = Complex::new(fl::<T>(LANCZOS[0]), T::zero());
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += Complex::new(fl::<T>(*c), T::zero()) / (z - one + Complex::new(T::from_usize(k).unwrap(), T::zero()));
    }
    let t = z + Complex::new(fl::<T>(6.5), T::zero()); // z + g - 1/2
    let half_log_two_pi = fl::<T>(0.918_938_533_204_672_8); // ln(2 pi)/2
    (z - Complex::new(half, T::zero())) * t.ln() - t
        + Complex::new(half_log_two_pi, T::zero())
        + a.ln()
}

/// |Gamma(i nu)| from the closed-form reflection identity
/// |Gamma(i nu)|^2 = pi / (nu sinh(pi nu)).
pub fn gamma_imag_abs<T: Real>(nu: T) -> T {
    let pi = T::PI();
    (pi / (nu * (pi * nu).sinh())).sqrt()
}

// ---------------------------------------------------------------------------
// Airy Ai
// ---------------------------------------------------------------------------

// Ai(0) and -Ai'(0) as double-word constants (hi + lo).
const AI0_HI: f64 = 3.55028053887817219e-01;
const AI0_LO: f64 = 2.05233632436211994e-17;
const AIP0_HI: f64 = 2.58819403792806824e-01;
const AIP0_LO: f64 = -2.52224311161083207e-17;

const AIRY_SWITCH: f64 = 8.0;

/// Airy function of the first kind.
pub fn airy_ai<T: Real>(s: T) -> T {
    if s.abs() <= fl(AIRY_SWITCH) {
        airy_maclaurin(s).0
    } else if s > T::zero() {
        airy_asymptotic_pos(s).0
    } else {
        airy_asymptotic_neg(-s).0
    }
}

/// Derivative of the Airy function of the first kind.
pub fn airy_ai_prime<T: Real>(s: T) -> T {
    if s.abs() <= fl(AIRY_SWITCH) {
        airy_maclaurin(s).1
    } else if s > T::zero() {
        airy_asymptotic_pos(s).1
    } else {
        airy_asymptotic_neg(-s).1
    }
}

/// (Ai, Ai') by the Maclaurin series in double-word arithmetic.
fn airy_maclaurin<T: Real>(s: T) -> (T, T) {
    let x = Dd::from_t(s);
    let x2 = x.mul(x);
    let x3 = x2.mul(x);
    // f  = sum tf_k,  tf_0 = 1,    tf_{k+1} = tf_k x^3 / ((3k+2)(3k+3))
    // g  = sum tg_k,  tg_0 = x,    tg_{k+1} = tg_k x^3 / ((3k+3)(3k+4))
    // f' = sum tfp_k, tfp_1 = x^2/2, ratio ((k+1)/k) x^3 / ((3k+2)(3k+3))
    // g' = sum tgp_k, tgp_0 = 1,   tgp_{k+1} = tgp_k x^3 / ((3k+3)(3k+1))
    let mut tf = Dd::from_t(T::one());
    let mut tg = x;
    let mut tfp = x2.div_t(fl(2.0));
    let mut tgp = Dd::from_t(T::one());
    let mut f = tf;
    let mut g = tg;
    let mut fp = tfp;
    let mut gp = tgp;
    let floor = T::min_positive_value() / T::epsilon();
    for k in 0..400 {
        let kf = k as f64;
        tf = tf.mul(x3).div_t(fl((3.0 * kf + 2.0) * (3.0 * kf + 3.0)));
        tg = tg.mul(x3).div_t(fl((3.0 * kf + 3.0) * (3.0 * kf + 4.0)));
        if k >= 1 {
            // Keep the rational factor (k+1) / (k (3k+2)(3k+3)) as exact
            // integer numerator and denominator; an inexact ratio would
            // leak single-word rounding into the double-word sum.
            tfp = tfp
                .mul(x3)
                .mul_t(fl(kf + 1.0))
                .div_t(fl(kf * (3.0 * kf + 2.0) * (3.0 * kf + 3.0)));
        }
        tgp = tgp.mul(x3).div_t(fl((3.0 * kf + 3.0) * (3.0 * kf + 1.0)));
        f = f.add(tf);
        g = g.add(tg);
        if k >= 1 {
            fp = fp.add(tfp);
        }
        gp = gp.add(tgp);
        let biggest = tf
            .abs_value()
            .max(tg.abs_value())
            .max(tfp.abs_value())
            .max(tgp.abs_value());
        let scale = f.abs_value().max(g.abs_value()).max(T::one());
        if biggest < scale * T::epsilon() * T::epsilon() || biggest < floor {
            break;
        }
    }
    let c1 = Dd {
        hi: fl::<T>(AI0_HI),
        lo: fl::<T>(AI0_LO),
    };
    let c2 = Dd {
        hi: fl::<T>(AIP0_HI),
        lo: fl::<T>(AIP0_LO),
    };
    let minus_one = Dd::from_t(-T::one());
    let ai = c1.mul(f).add(c2.mul(g).mul(minus_one));
    let aip = c1.mul(fp).add(c2.mul(gp).mul(minus_one));
    (ai.value(), aip.value())
}

/// Asymptotic coefficients u_k (and v_k = -u_k (6k+1)/(6k-1)).
fn airy_u_coeffs(n: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(n);
    u.push(1.0);
    for k in 0..n - 1 {
        let kf = k as f64;
        let next = u[k] * (6.0 * kf + 1.0) * (6.0 * kf + 3.0) * (6.0 * kf + 5.0)
            / (216.0 * (kf + 1.0) * (2.0 * kf + 1.0));
        u.push(next);
    }
    u
}

fn airy_asymptotic_pos<T: Real>(s: T) -> (T, T) {
    let xi = fl::<T>(2.0 / 3.0) * s.powf(fl(1.5));
    let u = airy_u_coeffs(40);
    let mut sum_u = T::zero();
    let mut sum_v = T::zero();
    let mut pow = T::one();
    let mut prev = T::infinity();
    for (k, uk) in u.iter().enumerate() {
        let term = fl::<T>(*uk) * pow;
        if term.abs() > prev {
            break; // divergent tail reached
        }
        prev = term.abs();
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        sum_u += sign * term;
        let kf = k as f64;
        let vk = if k == 0 { 1.0 } else { -uk * (6.0 * kf + 1.0) / (6.0 * kf - 1.0) };
        sum_v += sign * fl::<T>(vk) * pow;
        pow = pow / xi;
    }
    let pref = (-xi).exp() / (fl::<T>(2.0) * T::PI().sqrt());
    let ai = pref / s.powf(fl(0.25)) * sum_u;
    let aip = -pref * s.powf(fl(0.25)) * sum_v;
    (ai, aip)
}

fn airy_asymptotic_neg<T: Real>(z: T) -> (T, T) {
    let xi = fl::<T>(2.0 / 3.0) * z.powf(fl(1.5));
    let u = airy_u_coeffs(40);
    // Even/odd split with alternating signs in xi^{-2k} and xi^{-2k-1}.
    let mut ue = T::zero();
    let mut uo = T::zero();
    let mut ve = T::zero();
    let mut vo = T::zero();
    let mut pow = T::one();
    let mut prev = T::infinity();
    for (k, uk) in u.iter().enumerate() {
        let term = fl::<T>(*uk) * pow;
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        let kf = k as f64;
        let vk = if k == 0 { 1.0 } else { -uk * (6.0 * kf + 1.0) / (6.0 * kf - 1.0) };
        let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
        if k % 2 == 0 {
            ue += sign * term;
            ve += sign * fl::<T>(vk) * pow;
        } else {
            uo += sign * term;
            vo += sign * fl::<T>(vk) * pow;
        }
        pow = pow / xi;
    }
    let phase = xi - T::PI() * fl::<T>(0.25);
    let (sin_p, cos_p) = phase.sin_cos();
    let sqrt_pi = T::PI().sqrt();
    let ai = (cos_p * ue + sin_p * uo) / (sqrt_pi * z.powf(fl(0.25)));
    let aip = z.powf(fl(0.25)) / sqrt_pi * (sin_p * ve - cos_p * vo);
    (ai, aip)
}
