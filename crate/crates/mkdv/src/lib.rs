//! Numerical laboratory for the defocusing modified Korteweg-de Vries
//! equation
//!
//! ```text
//! y_t - 6 y^2 y_x + y_xxx = 0,    y(x, 0) = y0(x),
//! ```
//!
//! built around its inverse-scattering description. The crate provides:
//!
//! * [`scattering`] — forward transform: reflection coefficient r(z) of a
//!   real, rapidly decaying potential (Zakharov-Shabat system).
//! * [`rh`] — the inverse side: numerical solution of the oscillatory
//!   Riemann-Hilbert problem at fixed (x, t) via the singular integral
//!   equation for the Beals-Coifman unknown, and reconstruction of y(x, t).
//! * [`asymptotics`] — closed-form long-time quantities of the oscillatory
//!   regime: stationary points, modulation exponent nu, phase phi, and the
//!   leading term y_a.
//! * [`painleve`] — Airy-seeded Painleve II profiles and the similarity
//!   form (3t)^{-1/3] p(x / (3t)^{1/3}).
//! * [`direct`] — integrating-factor pseudo-spectral reference solver.
//! * [`regions`] — classification of (x, t) into the six asymptotic regions
//!   and dispatch of the matching formula.
//! * [`cli`] — batch front end (`mkdv` binary) emitting CSV tables and SVG
//!   plots.
//!
//! All numerical kernels are generic over the scalar type via [`real::Real`]
//! (`f32` or `f64`); the concrete aliases below fix `f64` for ordinary use.

pub mod asymptotics;
pub mod cli;
pub mod csvio;
pub mod dd;
pub mod direct;
pub mod error;
pub mod interp;
pub mod linalg;
pub mod painleve;
pub mod potential;
pub mod quad;
pub mod real;
pub mod regions;
pub mod rh;
pub mod scattering;
pub mod special;
pub mod svg;

mod cauchy;

pub use error::{Error, Result};
pub use real::Real;

/// Complex scalar over the generic real type.
pub type Cplx<T> = num_complex::Complex<T>;

// Concrete f64 aliases for the common instantiation.
pub type C64 = num_complex::Complex<f64>;
