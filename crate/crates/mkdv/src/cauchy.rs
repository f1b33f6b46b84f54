//! Discrete Cauchy boundary operators C+ and C- on the real line.
//!
//! Functions live on a uniform window grid and are extended by zero onto a
//! padded periodic grid of period L = pad * window span. The periodic
//! Hilbert transform is a Fourier multiplier there; the difference between
//! the periodic kernel (pi/L) cot(pi u / L) and the line kernel 1/u is the
//! smooth function
//!
//! ```text
//! g(u) = -2 sum_{j>=1} zeta(2j) u^{2j-1} / L^{2j},    |u| < L,
//! ```
//!
//! whose convolution against the (compactly supported) density is evaluated
//! from moments. With that correction,
//!
//! ```text
//! C+- f = +-f/2 + (i/2) H f,       C+ - C- = I  (exactly, by construction),
//! ```
//!
//! and the pair is spectrally accurate for smooth decaying densities. A
//! dense realization of the same operator (circulant part + smooth-kernel
//! correction) backs the direct-solve path.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::real::{fl, Real};
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// zeta(2), zeta(4), ..., zeta(24).
const ZETA_EVEN: [f64; 12] = [
    1.6449340668482264,
    1.0823232337111382,
    1.0173430619844491,
    1.0040773561979443,
    1.0009945751278181,
    1.0002460865533080,
    1.0000612481350587,
    1.0000152822594087,
    1.0000038172932650,
    1.0000009539620338,
    1.0000002384505027,
    1.0000000596081891,
];

const J_TERMS: usize = 12;

pub struct CauchyOp<T> {
    /// Padded FFT grid size (power of two).
    pub n_fft: usize,
    /// Grid spacing.
    pub h: T,
    /// Period L = n_fft * h.
    pub period: T,
    /// Offset of the window inside the FFT grid.
    pub win_start: usize,
    pub win_len: usize,
    /// Window nodes z_i.
    pub z_win: Vec<T>,
    /// z_i / L (for the moment correction).
    z_scaled: Vec<T>,
    fft: Arc<dyn Fft<T>>,
    ifft: Arc<dyn Fft<T>>,
}

impl<T: Real> CauchyOp<T> {
    /// Build the operator for a uniform window grid with the given padding
    /// factor (the period is pad * span, rounded up to a power-of-two node
    /// count).
    pub fn new(z_win: &[T], pad: T) -> Result<Self> {
        let n_win = z_win.len();
        if n_win < 8 {
            return Err(Error::InvalidGrid("Cauchy window needs >= 8 nodes".into()));
        }
        let h = z_win[1] - z_win[0];
        for w in z_win.windows(2) {
            if ((w[1] - w[0]) - h).abs() > fl::<T>(1e-10) * h {
                return Err(Error::InvalidGrid(
                    "Cauchy operator requires a uniform window grid".into(),
                ));
            }
        }
        let pad = pad.max(fl(2.0));
        let n_fft = ((T::from_usize(n_win).unwrap() * pad)
            .to_usize()
            .unwrap_or(n_win * 2))
        .next_power_of_two();
        let period = h * T::from_usize(n_fft).unwrap();
        // Center the window in the padded grid.
        let win_start = (n_fft - n_win) / 2;
        let z_scaled: Vec<T> = z_win.iter().map(|&z| z / period).collect();
        let mut planner = FftPlanner::new();
        Ok(CauchyOp {
            n_fft,
            h,
            period,
            win_start,
            win_len: n_win,
            z_win: z_win.to_vec(),
            z_scaled,
            fft: planner.plan_fft_forward(n_fft),
            ifft: planner.plan_fft_inverse(n_fft),
        })
    }

    /// Apply C+ and C- to a window density; both boundary values are
    /// returned (C- = C+ - f identically, the discrete Plemelj relation).
    pub fn apply(&self, f: &[Complex<T>]) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
        debug_assert_eq!(f.len(), self.win_len);
        let zero = Complex::new(T::zero(), T::zero());
        let mut buf = vec![zero; self.n_fft];
        buf[self.win_start..self.win_start + self.win_len].copy_from_slice(f);
        self.fft.process(&mut buf);
        // Multiplier chi_+ : 1 on positive frequencies, 1/2 at DC and
        // Nyquist, 0 on negative frequencies.
        let half = Complex::new(fl::<T>(0.5), T::zero());
        let n = self.n_fft;
        buf[0] = buf[0] * half;
        buf[n / 2] = buf[n / 2] * half;
        for c in buf.iter_mut().skip(n / 2 + 1) {
            *c = zero;
        }
        self.ifft.process(&mut buf);
        let scale = T::one() / T::from_usize(n).unwrap();
        let corr = self.periodization_correction(f);
        let mut cplus = Vec::with_capacity(self.win_len);
        for i in 0..self.win_len {
            let per = buf[self.win_start + i] * scale;
            // C+^line = C+^per - (i/2) D
            let d = corr[i];
            cplus.push(per - Complex::new(-d.im, d.re) * fl::<T>(0.5));
        }
        let cminus: Vec<Complex<T>> = cplus.iter().zip(f).map(|(c, fi)| *c - *fi).collect();
        (cplus, cminus)
    }

    /// D(z_i) = (H_periodic - H_line) f at the window nodes, from moments of
    /// the density in the scaled coordinate.
    fn periodization_correction(&self, f: &[Complex<T>]) -> Vec<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let m_count = 2 * J_TERMS;
        // Scaled moments M~_m = h sum f_i (z_i/L)^m.
        let mut moments = vec![zero; m_count];
        for (fi, &s) in f.iter().zip(&self.z_scaled) {
            let mut pw = T::one();
            for m in moments.iter_mut() {
                *m += *fi * pw;
                pw *= s;
            }
        }
        for m in moments.iter_mut() {
            *m = *m * self.h;
        }
        // Polynomial coefficients d_p = (2 (-1)^p / (pi L)) *
        //   sum_{j : 2j-1 >= p} zeta(2j) C(2j-1, p) M~_{2j-1-p}.
        let mut coef = vec![zero; m_count];
        for (p, c) in coef.iter_mut().enumerate() {
            let mut acc = zero;
            for (jm1, zeta) in ZETA_EVEN.iter().enumerate() {
                let deg = 2 * (jm1 + 1) - 1;
                if deg < p {
                    continue;
                }
                let b = binomial(deg, p);
                acc += moments[deg - p] * fl::<T>(zeta * b);
            }
            let sign = if p % 2 == 0 { T::one() } else { -T::one() };
            *c = acc * (sign * fl::<T>(2.0) / (T::PI() * self.period));
        }
        // Horner evaluation at the scaled window nodes.
        self.z_scaled
            .iter()
            .map(|&zt| {
                let mut acc = zero;
                for c in coef.iter().rev() {
                    acc = acc * zt + *c;
                }
                acc
            })
            .collect()
    }

    /// Cauchy integral evaluated at a real point strictly outside the
    /// window (the density vanishes there, so no boundary value is needed):
    /// (1/(2 pi i)) Integral f(s) / (s - z) ds.
    pub fn eval_off_support(&self, f: &[Complex<T>], z: T) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (fi, &s) in f.iter().zip(&self.z_win) {
            acc += *fi / Complex::new(s - z, T::zero());
        }
        // h / (2 pi i) = -i h / (2 pi)
        let c = self.h / (fl::<T>(2.0) * T::PI());
        Complex::new(acc.im * c, -acc.re * c)
    }

    /// Dense window realizations of C+ and C-; rows/columns indexed by the
    /// window nodes. Same discretization as [`CauchyOp::apply`] up to the
    /// truncation order of the smooth correction kernel.
    pub fn dense_pair(&self) -> (CMatrix<T>, CMatrix<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let n = self.n_fft;
        // First row of the circulant: q[d] = IDFT(chi_+)[d] / n.
        let half = Complex::new(fl::<T>(0.5), T::zero());
        let mut q = vec![zero; n];
        q[0] = half;
        q[n / 2] = half;
        for item in q.iter_mut().take(n / 2).skip(1) {
            *item = Complex::new(T::one(), T::zero());
        }
        self.ifft.process(&mut q);
        let scale = T::one() / T::from_usize(n).unwrap();
        let m = self.win_len;
        let mut cplus = CMatrix::zeros(m);
        let mut cminus = CMatrix::zeros(m);
        let minus_i_half_h_over_pi = Complex::new(T::zero(), -self.h / (fl::<T>(2.0) * T::PI()));
        for i in 0..m {
            for j in 0..m {
                let d = (n + i - j) % n;
                let per = q[d] * scale;
                let corr = minus_i_half_h_over_pi
                    * cot_minus_pole(self.z_win[i] - self.z_win[j], self.period);
                let val = per + corr;
                cplus.set(i, j, val);
                let diag = if i == j {
                    Complex::new(T::one(), T::zero())
                } else {
                    zero
                };
                cminus.set(i, j, val - diag);
            }
        }
        (cplus, cminus)
    }
}

/// g(u) = (pi/L) cot(pi u / L) - 1/u, extended by g(0) = 0; series for
/// small |u|/L, closed form otherwise.
fn cot_minus_pole<T: Real>(u: T, period: T) -> T {
    if u == T::zero() {
        return T::zero();
    }
    let x = u / period;
    if x.abs() < fl(0.05) {
        let mut acc = T::zero();
        let x2 = x * x;
        let mut pw = x; // x^{2j-1}
        for zeta in ZETA_EVEN.iter() {
            acc -= fl::<T>(2.0 * zeta) * pw;
            pw *= x2;
        }
        acc / period
    } else {
        let pi_x = T::PI() * x;
        (T::PI() / period) * pi_x.cos() / pi_x.sin() - T::one() / u
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
