//! Closed-form quantities of the oscillatory long-time regime.
//!
//! For x < 0, t > 0 the phase theta(z) = 4 t z^3 + x z has stationary points
//! +-z0 = +-sqrt(|x| / 12 t). The leading oscillatory term of the solution is
//!
//! ```text
//! y_a = sqrt(nu / (3 t z0)) * cos(16 t z0^3 - nu ln(192 t z0^3) + phi(z0)),
//! nu  = -(2 pi)^{-1} ln(1 - |r(z0)|^2),
//! phi = arg Gamma(i nu) - pi/4 - arg r(z0)
//!       + (1/pi) Integral_{-z0}^{z0} ln|s - z0| d( ln(1 - |r(s)|^2) ),
//! ```
//!
//! together with the dimensionless parameter tau = t z0^3 and the local
//! scaling z = zhat (48 t z0)^{-1/2} -+ z0 used to grade meshes near the
//! stationary points.

use crate::error::{Error, Result};
use crate::interp::Spline;
use crate::quad::{graded_toward_end, GaussLegendre};
use crate::real::{fl, Real};
use crate::scattering::ReflectionCoefficient;
use crate::special::log_gamma;
use num_complex::Complex;
use rustfft::FftPlanner;

/// Stationary-phase data of theta(z) = 4 t z^3 + x z at fixed (x, t).
#[derive(Clone, Copy, Debug)]
pub struct PhasePoint<T> {
    pub x: T,
    pub t: T,
    pub z0: T,
    pub tau: T,
}

impl<T: Real> PhasePoint<T> {
    /// Requires x < 0, t > 0 (no real stationary points otherwise).
    pub fn new(x: T, t: T) -> Result<Self> {
        if !(x < T::zero()) {
            return Err(Error::NoStationaryPoint {
                x: x.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(t > T::zero()) {
            return Err(Error::InvalidConfig("t must be positive".into()));
        }
        let z0 = (x.abs() / (fl::<T>(12.0) * t)).sqrt();
        let tau = t * z0 * z0 * z0;
        Ok(PhasePoint { x, t, z0, tau })
    }

    /// tau from the equivalent closed form (|x| / 12 t^{1/3})^{3/2};
    /// agrees with `tau` to relative 1e-12 (internal consistency).
    pub fn tau_alternate(&self) -> T {
        (self.x.abs() / (fl::<T>(12.0) * self.t.powf(fl(1.0 / 3.0)))).powf(fl(1.5))
    }

    pub fn theta(&self, z: T) -> T {
        (fl::<T>(4.0) * self.t * z * z + self.x) * z
    }

    pub fn theta_prime(&self, z: T) -> T {
        fl::<T>(12.0) * self.t * z * z + self.x
    }
}

/// Modulation exponent nu = -(2 pi)^{-1} ln(1 - |r|^2); finite iff |r| < 1.
pub fn nu_of<T: Real>(r_val: Complex<T>) -> Result<T> {
    let a2 = r_val.norm_sqr();
    if !(a2 < T::one()) {
        return Err(Error::ModulusOutOfRange {
            abs_r: a2.sqrt().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(-(T::one() - a2).ln() / (fl::<T>(2.0) * T::PI()))
}

/// arg Gamma(i nu) on the branch of log Gamma continuous on C \ (-inf, 0]
/// (continuous in nu on (0, inf); not wrapped into (-pi, pi]).
pub fn arg_gamma_imag<T: Real>(nu: T) -> Result<T> {
    if !(nu > T::zero()) {
        return Err(Error::InvalidConfig(
            "arg Gamma(i nu) requires nu > 0; nu = 0 is the degenerate r(z0) = 0 case".into(),
        ));
    }
    Ok(log_gamma(Complex::new(T::zero(), nu)).im)
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle<T: Real>(a: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut w = a % two_pi;
    if w <= -T::PI() {
        w += two_pi;
    } else if w > T::PI() {
        w -= two_pi;
    }
    w
}

/// Breakdown of the phase constant phi(z0).
#[derive(Clone, Copy, Debug)]
pub struct PhiParts<T> {
    pub nu: T,
    pub arg_gamma: T,
    pub arg_r_z0: T,
    pub integral: T,
    /// Four-term sum, wrapped into (-pi, pi].
    pub phi: T,
}

/// Number of geometric panels toward the logarithmic endpoint.
const PHI_LEVELS: usize = 48;

/// phi(z0) = arg Gamma(i nu) - pi/4 - arg r(z0)
///           + (1/pi) Int_{-z0}^{z0} ln|s - z0| (d/ds ln(1 - |r(s)|^2)) ds.
///
/// The density d/ds ln(1 - |r|^2) is obtained by spectral differentiation of
/// |r|^2 on its native uniform grid (r is smooth and rapidly decaying). The
/// endpoint-singular integral is handled by singularity subtraction: the
/// constant-density part integrates in closed form, and the remainder
/// (which vanishes at s = z0) goes to a geometrically graded Gauss rule.
pub fn phase_phi<T: Real>(r: &ReflectionCoefficient<T>, z0: T) -> Result<PhiParts<T>> {
    let n = r.zgrid.len();
    if z0 <= T::zero() || z0 >= r.zgrid[n - 1] {
        return Err(Error::OutOfRange {
            arg: z0.to_f64().unwrap_or(f64::NAN),
            lo: 0.0,
            hi: r.zgrid[n - 1].to_f64().unwrap_or(f64::NAN),
        });
    }
    let r_z0 = r.interpolant()?.eval(z0);
    let abs_r = r_z0.norm();
    if !(abs_r < T::one()) {
        return Err(Error::ModulusOutOfRange {
            abs_r: abs_r.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(abs_r > T::zero()) {
        return Err(Error::DegeneratePhase);
    }
    let nu = nu_of(r_z0)?;
    let arg_gamma = arg_gamma_imag(nu)?;
    let arg_r_z0 = r_z0.im.atan2(r_z0.re);

    // psi(s) = d/ds ln(1 - |r(s)|^2) by spectral differentiation.
    let psi = spectral_log_density(r)?;
    let psi_at = |s: T| psi.eval(s);
    let psi_z0 = psi_at(z0);

    // Closed form for the subtracted constant: Int_{-z0}^{z0} ln(z0 - s) ds
    // = 2 z0 (ln(2 z0) - 1).
    let two_z0 = z0 + z0;
    let exact_const = two_z0 * (two_z0.ln() - T::one());

    let rule = GaussLegendre::new(16);
    let remainder = graded_toward_end(-z0, z0, PHI_LEVELS, &rule, |s| {
        (z0 - s).ln() * (psi_at(s) - psi_z0)
    });
    let integral = (remainder + psi_z0 * exact_const) / T::PI();

    let phi = wrap_angle(arg_gamma - T::PI() * fl::<T>(0.25) - arg_r_z0 + integral);
    Ok(PhiParts {
        nu,
        arg_gamma,
        arg_r_z0,
        integral,
        phi,
    })
}

/// Spline of d/ds ln(1 - |r(s)|^2) from FFT differentiation on the native
/// grid. |r|^2 decays rapidly at the grid edges, so the periodic extension
/// implied by the FFT is smooth to machine precision.
fn spectral_log_density<T: Real>(r: &ReflectionCoefficient<T>) -> Result<Spline<T>> {
    let n = r.zgrid.len() - 1; // periodic length (last node = mirror of first)
    let h = r.zgrid[1] - r.zgrid[0];
    let span = h * T::from_usize(n).unwrap();
    let mut buf: Vec<Complex<T>> = (0..n)
        .map(|i| {
            let a2 = r.values[i].norm_sqr();
            Complex::new((T::one() - a2).ln(), T::zero())
        })
        .collect();
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft_forward(n);
    fft.process(&mut buf);
    let two_pi = T::PI() + T::PI();
    for (k, c) in buf.iter_mut().enumerate() {
        let kk = if k <= n / 2 {
            T::from_usize(k).unwrap()
        } else {
            -T::from_usize(n - k).unwrap()
        };
        // Zero the unmatched Nyquist mode for an odd derivative.
        let mult = if n % 2 == 0 && k == n / 2 {
            Complex::new(T::zero(), T::zero())
        } else {
            Complex::new(T::zero(), two_pi * kk / span)
        };
        *c = *c * mult;
    }
    let ifft = planner.plan_fft_inverse(n);
    ifft.process(&mut buf);
    let scale = T::one() / T::from_usize(n).unwrap();
    let mut deriv: Vec<T> = buf.iter().map(|c| c.re * scale).collect();
    deriv.push(deriv[0]); // close the period at the last node
    Spline::new(r.zgrid[0], h, &deriv)
}

/// Parameters of the leading oscillatory term.
#[derive(Clone, Copy, Debug)]
pub struct AsymptoticParams<T> {
    pub nu: T,
    /// phi wrapped into (-pi, pi].
    pub phi: T,
    pub amplitude: T,
    pub total_phase: T,
}

/// Evaluated leading term with its parameters.
#[derive(Clone, Copy, Debug)]
pub struct OscillatoryTerm<T> {
    pub point: PhasePoint<T>,
    pub params: AsymptoticParams<T>,
    pub value: T,
}

/// Leading oscillatory asymptotic y_a at (x, t) for reflection data `r`.
///
/// Degenerate case r(z0) = 0 (including z0 beyond the data's decayed grid)
/// gives amplitude 0 and y_a = 0.
pub fn y_a_eval<T: Real>(
    x: T,
    t: T,
    r: &ReflectionCoefficient<T>,
) -> Result<OscillatoryTerm<T>> {
    let point = PhasePoint::new(x, t)?;
    let three_t_z0 = fl::<T>(3.0) * t * point.z0;
    match phase_phi(r, point.z0) {
        Ok(parts) => {
            let amplitude = (parts.nu / three_t_z0).sqrt();
            let tz3 = t * point.z0 * point.z0 * point.z0;
            let total_phase = fl::<T>(16.0) * tz3 - parts.nu * (fl::<T>(192.0) * tz3).ln()
                + parts.phi;
            Ok(OscillatoryTerm {
                point,
                params: AsymptoticParams {
                    nu: parts.nu,
                    phi: parts.phi,
                    amplitude,
                    total_phase,
                },
                value: amplitude * total_phase.cos(),
            })
        }
        Err(Error::DegeneratePhase) | Err(Error::OutOfRange { .. }) => Ok(OscillatoryTerm {
            point,
            params: AsymptoticParams {
                nu: T::zero(),
                phi: T::zero(),
                amplitude: T::zero(),
                total_phase: T::zero(),
            },
            value: T::zero(),
        }),
        Err(e) => Err(e),
    }
}

/// Which stationary point a local coordinate is centered on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Centered at +z0.
    Plus,
    /// Centered at -z0.
    Minus,
}

/// Local scaling around the stationary points:
/// z = zhat (48 t z0)^{-1/2} +- z0.
#[derive(Clone, Copy, Debug)]
pub struct ScaleMap<T> {
    pub point: PhasePoint<T>,
    /// (48 t z0)^{-1/2}, the local cross width.
    pub scale: T,
}

impl<T: Real> ScaleMap<T> {
    pub fn new(x: T, t: T) -> Result<Self> {
        let point = PhasePoint::new(x, t)?;
        if !(point.z0 > T::zero()) || !(t * point.z0 > T::zero()) {
            return Err(Error::InvalidConfig(
                "scale map degenerates at z0 = 0 (similarity region applies)".into(),
            ));
        }
        let scale = (fl::<T>(48.0) * t * point.z0).sqrt().recip();
        Ok(ScaleMap { point, scale })
    }

    pub fn forward(&self, z_hat: T, branch: Branch) -> T {
        match branch {
            Branch::Plus => z_hat * self.scale + self.point.z0,
            Branch::Minus => z_hat * self.scale - self.point.z0,
        }
    }

    pub fn inverse(&self, z: T, branch: Branch) -> T {
        match branch {
            Branch::Plus => (z - self.point.z0) / self.scale,
            Branch::Minus => (z + self.point.z0) / self.scale,
        }
    }
}
