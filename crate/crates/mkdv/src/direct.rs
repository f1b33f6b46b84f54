//! Ground-truth pseudo-spectral solver for the defocusing MKdV Cauchy
//! problem on a large periodic domain.
//!
//! The linear flow y_t + y_xxx = 0 is handled exactly per mode,
//! yhat(k, t) = e^{i k^3 t} yhat(k, 0), through an integrating factor; the
//! nonlinear term 6 y^2 y_x = 2 (y^3)_x is stepped with classical RK4 in the
//! factored variable, with 2/3-rule dealiasing applied to the cubic product.
//! The periodic box stands in for the line as long as the solution stays
//! below 1e-8 in the outer 5% of the domain; runs violating that are flagged
//! `domain_limited` rather than rejected.

use crate::error::{Error, Result};
use crate::interp::Spline;
use crate::potential::SampledPotential;
use crate::real::{fl, Real};
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Absolute edge bound for the domain-limited flag.
const EDGE_BOUND: f64 = 1e-8;

/// Solver configuration.
#[derive(Clone, Debug)]
pub struct EvolveConfig<T> {
    /// Periodic domain length.
    pub domain_l: T,
    /// Number of modes (power of two).
    pub n_modes: usize,
    /// Time step; `None` picks min(0.02, CFL bound / 2).
    pub dt: Option<T>,
    /// Nonlinear CFL number |6 y^2| k_cut dt <= cfl.
    pub cfl: T,
    /// Step-halving cap when the CFL monitor trips.
    pub max_halvings: usize,
}

impl<T: Real> Default for EvolveConfig<T> {
    fn default() -> Self {
        EvolveConfig {
            domain_l: fl(400.0),
            n_modes: 1 << 14,
            dt: None,
            cfl: fl(0.5),
            max_halvings: 12,
        }
    }
}

/// Stored evolution: snapshots at requested times plus conserved-quantity log.
#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub half_width: T,
    pub n_modes: usize,
    pub times: Vec<T>,
    /// One real field per stored time, on the solver grid.
    pub fields: Vec<Vec<T>>,
    /// (integral of y, integral of y^2) per stored time.
    pub conserved: Vec<(T, T)>,
    /// Set when any snapshot exceeds 1e-8 in the outer 5% of the domain.
    pub domain_limited: bool,
}

impl<T: Real> Trajectory<T> {
    pub fn grid_spacing(&self) -> T {
        (self.half_width + self.half_width) / T::from_usize(self.n_modes).unwrap()
    }

    pub fn x_at(&self, j: usize) -> T {
        -self.half_width + self.grid_spacing() * T::from_usize(j).unwrap()
    }

    /// Cubic interpolant of snapshot `idx`.
    pub fn snapshot_spline(&self, idx: usize) -> Result<Spline<T>> {
        Spline::new(-self.half_width, self.grid_spacing(), &self.fields[idx])
    }

    /// Largest relative drift of (mass, L2) against the first stored time.
    pub fn conservation_drift(&self) -> (T, T) {
        let (m0, e0) = self.conserved[0];
        let mut dm = T::zero();
        let mut de = T::zero();
        for &(m, e) in &self.conserved {
            dm = dm.max((m - m0).abs() / (T::one() + m0.abs()));
            de = de.max((e - e0).abs() / e0.abs().max(T::min_positive_value()));
        }
        (dm, de)
    }
}

/// Spectral workspace for one periodic domain.
pub struct SpectralSolver<T> {
    pub l: T,
    pub n: usize,
    k: Vec<T>,
    dealias: Vec<bool>,
    fft: Arc<dyn Fft<T>>,
    ifft: Arc<dyn Fft<T>>,
}

impl<T: Real> SpectralSolver<T> {
    pub fn new(l: T, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 16 {
            return Err(Error::InvalidConfig(format!(
                "n_modes must be a power of two >= 16, got {n}"
            )));
        }
        if !(l > T::zero()) {
            return Err(Error::InvalidConfig("domain length must be positive".into()));
        }
        let two_pi = T::PI() + T::PI();
        let k: Vec<T> = (0..n)
            .map(|j| {
                let jj = if j <= n / 2 {
                    j as isize
                } else {
                    j as isize - n as isize
                };
                two_pi * T::from_isize(jj).unwrap() / l
            })
            .collect();
        let cut = n / 3;
        let dealias: Vec<bool> = (0..n)
            .map(|j| {
                let jj = if j <= n / 2 { j } else { n - j };
                jj <= cut
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(SpectralSolver {
            l,
            n,
            k,
            dealias,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
        })
    }

    pub fn grid_spacing(&self) -> T {
        self.l / T::from_usize(self.n).unwrap()
    }

    pub fn x_at(&self, j: usize) -> T {
        -self.l * fl::<T>(0.5) + self.grid_spacing() * T::from_usize(j).unwrap()
    }

    /// Forward DFT of a real field.
    pub fn to_spectral(&self, y: &[T]) -> Vec<Complex<T>> {
        let mut buf: Vec<Complex<T>> = y.iter().map(|v| Complex::new(*v, T::zero())).collect();
        self.fft.process(&mut buf);
        buf
    }

    /// Real field from an (unnormalized) DFT.
    pub fn to_physical(&self, yh: &[Complex<T>]) -> Vec<T> {
        let mut buf = yh.to_vec();
        self.ifft.process(&mut buf);
        let scale = T::one() / T::from_usize(self.n).unwrap();
        buf.iter().map(|c| c.re * scale).collect()
    }

    /// Exact linear propagator: yhat -> e^{i k^3 t} yhat.
    pub fn linear_propagate(&self, yh: &mut [Complex<T>], t: T) {
        for (c, &k) in yh.iter_mut().zip(&self.k) {
            let phase = k * k * k * t;
            let (s, co) = phase.sin_cos();
            *c = *c * Complex::new(co, s);
        }
    }

    /// Dealiased spectral nonlinear term Nhat = 2 i k FFT[(y)^3], plus the
    /// max |y| seen in physical space (for the CFL monitor).
    fn nonlinear(&self, yh: &[Complex<T>], scratch: &mut Vec<Complex<T>>) -> (Vec<Complex<T>>, T) {
        scratch.clear();
        scratch.extend(
            yh.iter()
                .zip(&self.dealias)
                .map(|(c, keep)| if *keep { *c } else { Complex::new(T::zero(), T::zero()) }),
        );
        self.ifft.process(scratch);
        let scale = T::one() / T::from_usize(self.n).unwrap();
        let mut max_abs = T::zero();
        for c in scratch.iter_mut() {
            let y = *c * scale;
            max_abs = max_abs.max(y.re.abs());
            *c = y * y * y;
        }
        self.fft.process(scratch);
        let two = fl::<T>(2.0);
        let out: Vec<Complex<T>> = scratch
            .iter()
            .zip(&self.k)
            .zip(&self.dealias)
            .map(|((c, &k), keep)| {
                if *keep {
                    // 2 i k * c
                    Complex::new(-two * k * c.im, two * k * c.re)
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })
            .collect();
        (out, max_abs)
    }

    /// One integrating-factor RK4 step of size dt. Returns max |y| at the
    /// first stage for CFL monitoring.
    pub fn step(&self, yh: &mut Vec<Complex<T>>, dt: T, scratch: &mut Vec<Complex<T>>) -> T {
        let n = self.n;
        let half = dt * fl::<T>(0.5);
        let phase = |c: Complex<T>, k: T, tau: T| -> Complex<T> {
            let p = k * k * k * tau;
            let (s, co) = p.sin_cos();
            c * Complex::new(co, s)
        };
        let (k1, max_abs) = self.nonlinear(yh, scratch);
        let mut stage: Vec<Complex<T>> = (0..n)
            .map(|j| phase(yh[j] + k1[j] * half, self.k[j], half))
            .collect();
        let (mut k2, _) = self.nonlinear(&stage, scratch);
        for j in 0..n {
            k2[j] = phase(k2[j], self.k[j], -half);
        }
        for j in 0..n {
            stage[j] = phase(yh[j] + k2[j] * half, self.k[j], half);
        }
        let (mut k3, _) = self.nonlinear(&stage, scratch);
        for j in 0..n {
            k3[j] = phase(k3[j], self.k[j], -half);
        }
        for j in 0..n {
            stage[j] = phase(yh[j] + k3[j] * dt, self.k[j], dt);
        }
        let (mut k4, _) = self.nonlinear(&stage, scratch);
        for j in 0..n {
            k4[j] = phase(k4[j], self.k[j], -dt);
        }
        let sixth = dt / fl::<T>(6.0);
        let two = fl::<T>(2.0);
        for j in 0..n {
            let incr = (k1[j] + (k2[j] + k3[j]) * two + k4[j]) * sixth;
            yh[j] = phase(yh[j] + incr, self.k[j], dt);
        }
        max_abs
    }

    /// Dealiased cutoff wavenumber.
    pub fn k_cut(&self) -> T {
        let cut = self.n / 3;
        (T::PI() + T::PI()) * T::from_usize(cut).unwrap() / self.l
    }
}

/// Resample a potential onto the solver grid (zero outside its support).
fn resample<T: Real>(solver: &SpectralSolver<T>, y0: &SampledPotential<T>) -> Result<Vec<T>> {
    let half = solver.l * fl::<T>(0.5);
    if y0.grid_start() < -half || y0.grid_end() > half {
        return Err(Error::InvalidConfig(format!(
            "potential support [{}, {}] exceeds the periodic box [-{}, {}]",
            y0.grid_start().to_f64().unwrap_or(f64::NAN),
            y0.grid_end().to_f64().unwrap_or(f64::NAN),
            half.to_f64().unwrap_or(f64::NAN),
            half.to_f64().unwrap_or(f64::NAN),
        )));
    }
    let spline = y0.spline();
    let (lo, hi) = (y0.grid_start(), y0.grid_end());
    Ok((0..solver.n)
        .map(|j| {
            let x = solver.x_at(j);
            if x < lo || x > hi {
                T::zero()
            } else {
                spline.eval(x)
            }
        })
        .collect())
}

/// Evolve `y0` to `t_end`, storing snapshots at the requested times
/// (ascending, within [0, t_end]). The conserved-quantity log is populated
/// per stored time.
pub fn evolve<T: Real>(
    y0: &SampledPotential<T>,
    t_end: T,
    snapshot_times: &[T],
    cfg: &EvolveConfig<T>,
) -> Result<Trajectory<T>> {
    if !(t_end > T::zero()) {
        return Err(Error::InvalidConfig("t_end must be positive".into()));
    }
    let mut snaps: Vec<T> = snapshot_times.to_vec();
    snaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if snaps.iter().any(|&t| t < T::zero() || t > t_end) {
        return Err(Error::InvalidConfig(
            "snapshot times must lie in [0, t_end]".into(),
        ));
    }
    let solver = SpectralSolver::new(cfg.domain_l, cfg.n_modes)?;
    let y_grid = resample(&solver, y0)?;
    let mut yh = solver.to_spectral(&y_grid);
    let mut scratch: Vec<Complex<T>> = Vec::with_capacity(solver.n);

    let max0 = y_grid.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let cfl_dt = cfg.cfl
        / (fl::<T>(6.0) * (max0 * max0).max(fl(1e-30)) * solver.k_cut());
    let mut dt = cfg.dt.unwrap_or_else(|| fl::<T>(0.02).min(cfl_dt * fl(0.5)));
    if !(dt > T::zero()) {
        return Err(Error::InvalidConfig("dt must be positive".into()));
    }

    let mut traj = Trajectory {
        half_width: solver.l * fl(0.5),
        n_modes: solver.n,
        times: Vec::new(),
        fields: Vec::new(),
        conserved: Vec::new(),
        domain_limited: false,
    };
    let mut t = T::zero();
    let mut halvings = 0usize;
    let tol_t = fl::<T>(1e-12) * t_end.max(T::one());
    for &t_snap in &snaps {
        while t < t_snap - tol_t {
            let step_dt = dt.min(t_snap - t);
            let max_abs = solver.step(&mut yh, step_dt, &mut scratch);
            // Nonlinear CFL monitor on the step just taken.
            let bound = cfg.cfl / (fl::<T>(6.0) * (max_abs * max_abs).max(fl(1e-30)) * solver.k_cut());
            if step_dt > bound {
                halvings += 1;
                if halvings > cfg.max_halvings {
                    return Err(Error::StepFailure(format!(
                        "CFL violation persists after {halvings} halvings (dt = {:?})",
                        dt.to_f64()
                    )));
                }
                dt = dt * fl(0.5);
            }
            t += step_dt;
        }
        t = t_snap;
        store_snapshot(&solver, &yh, t, &mut traj);
    }
    Ok(traj)
}

fn store_snapshot<T: Real>(
    solver: &SpectralSolver<T>,
    yh: &[Complex<T>],
    t: T,
    traj: &mut Trajectory<T>,
) {
    let field = solver.to_physical(yh);
    let h = solver.grid_spacing();
    let mass = field.iter().fold(T::zero(), |a, b| a + *b) * h;
    let l2 = field.iter().fold(T::zero(), |a, b| a + *b * *b) * h;
    let n = field.len();
    let edge = ((n as f64) * 0.05).ceil() as usize;
    let mut edge_max = T::zero();
    for i in 0..edge {
        edge_max = edge_max.max(field[i].abs()).max(field[n - 1 - i].abs());
    }
    if edge_max > fl(EDGE_BOUND) {
        traj.domain_limited = true;
    }
    traj.times.push(t);
    traj.fields.push(field);
    traj.conserved.push((mass, l2));
}

/// Exact solution of the linearized equation y_t + y_xxx = 0 on the solver
/// grid: per-mode phase rotation of the initial data.
pub fn linear_evolve<T: Real>(
    y0: &SampledPotential<T>,
    t: T,
    cfg: &EvolveConfig<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    let solver = SpectralSolver::new(cfg.domain_l, cfg.n_modes)?;
    let y_grid = resample(&solver, y0)?;
    let field = linear_evolve_field(&solver, &y_grid, t);
    let xs = (0..solver.n).map(|j| solver.x_at(j)).collect();
    Ok((xs, field))
}

/// Field-level linear propagator (used directly by tests with non-decaying
/// data such as single Fourier modes).
pub fn linear_evolve_field<T: Real>(solver: &SpectralSolver<T>, y: &[T], t: T) -> Vec<T> {
    let mut yh = solver.to_spectral(y);
    solver.linear_propagate(&mut yh, t);
    solver.to_physical(&yh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{Preset, PresetShape};

    fn sech_preset(eps: f64) -> SampledPotential<f64> {
        Preset::new(PresetShape::Sech, eps, 1.0, 0.0)
            .unwrap()
            .sample_default()
            .unwrap()
    }

    fn small_cfg() -> EvolveConfig<f64> {
        EvolveConfig {
            domain_l: 200.0,
            n_modes: 1 << 12,
            dt: Some(0.01),
            ..EvolveConfig::default()
        }
    }

    #[test]
    fn zero_stays_zero() {
        let y0 = SampledPotential::<f64>::new(-10.0, 20.0 / 127.0, vec![0.0; 128]).unwrap();
        let traj = evolve(&y0, 1.0, &[0.5, 1.0], &small_cfg()).unwrap();
        for f in &traj.fields {
            assert!(f.iter().all(|v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn small_amplitude_matches_linear_oracle() {
        let y0 = sech_preset(1e-3);
        let cfg = small_cfg();
        let traj = evolve(&y0, 1.0, &[1.0], &cfg).unwrap();
        let (_, lin) = linear_evolve(&y0, 1.0, &cfg).unwrap();
        let err: f64 = traj.fields[0]
            .iter()
            .zip(&lin)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-6, "|nonlinear - linear| = {err:.3e}");
    }

    #[test]
    fn single_mode_rotation() {
        let solver = SpectralSolver::<f64>::new(200.0, 1 << 10).unwrap();
        let m = 7.0;
        let k = 2.0 * std::f64::consts::PI * m / 200.0;
        let y: Vec<f64> = (0..solver.n).map(|j| (k * solver.x_at(j)).sin()).collect();
        let t = 0.37;
        let rotated = linear_evolve_field(&solver, &y, t);
        for j in 0..solver.n {
            let want = (k * solver.x_at(j) + k * k * k * t).sin();
            assert!((rotated[j] - want).abs() < 1e-11);
        }
    }

    #[test]
    fn linear_l2_exactly_conserved() {
        let solver = SpectralSolver::<f64>::new(100.0, 1 << 10).unwrap();
        let y: Vec<f64> = (0..solver.n)
            .map(|j| {
                let x = solver.x_at(j);
                0.3 * (-0.5 * x * x).exp() * (1.3 * x).cos()
            })
            .collect();
        let rotated = linear_evolve_field(&solver, &y, 2.5);
        let l2 = |f: &[f64]| f.iter().map(|v| v * v).sum::<f64>();
        assert!((l2(&y) - l2(&rotated)).abs() < 1e-12 * l2(&y));
    }

    #[test]
    fn conservation_drift_small() {
        let y0 = sech_preset(0.1);
        let traj = evolve(&y0, 10.0, &[0.0, 5.0, 10.0], &small_cfg()).unwrap();
        let (dm, de) = traj.conservation_drift();
        assert!(dm <= 1e-9, "mass drift {dm:.3e}");
        assert!(de <= 1e-9, "l2 drift {de:.3e}");
    }

    #[test]
    fn wide_box_stays_unflagged() {
        // Spectral content with group speed 3 k^2 carrying more than 1e-8 of
        // amplitude reaches the outer 5% of a 1400-wide box only after t ~ 2
        // for this data; the short run must stay unflagged.
        let y0 = sech_preset(0.1);
        let cfg = EvolveConfig {
            domain_l: 1400.0,
            n_modes: 1 << 14,
            dt: Some(0.01),
            ..EvolveConfig::default()
        };
        let traj = evolve(&y0, 2.0, &[2.0], &cfg).unwrap();
        assert!(!traj.domain_limited);
    }

    #[test]
    fn fourth_order_drift_reduction() {
        // Halving dt cuts the conservation drift by at least 8x.
        let y0 = sech_preset(0.4);
        let drift = |dt: f64| {
            let cfg = EvolveConfig {
                domain_l: 100.0,
                n_modes: 1 << 11,
                dt: Some(dt),
                ..EvolveConfig::default()
            };
            let traj = evolve(&y0, 2.0, &[0.0, 2.0], &cfg).unwrap();
            traj.conservation_drift().1
        };
        let d1 = drift(0.04);
        let d2 = drift(0.02);
        assert!(d1 > 1e-14, "coarse drift at roundoff floor: {d1:.3e}");
        assert!(d2 * 8.0 <= d1 * 1.05, "drift {d1:.3e} -> {d2:.3e}");
    }

    #[test]
    fn time_reversible_short_run() {
        let y0 = sech_preset(0.2);
        let solver = SpectralSolver::<f64>::new(200.0, 1 << 12).unwrap();
        let y = resample(&solver, &y0).unwrap();
        let mut yh = solver.to_spectral(&y);
        let mut scratch = Vec::new();
        let dt = 0.01;
        for _ in 0..100 {
            solver.step(&mut yh, dt, &mut scratch);
        }
        for _ in 0..100 {
            solver.step(&mut yh, -dt, &mut scratch);
        }
        let back = solver.to_physical(&yh);
        let err: f64 = back
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-6, "reversal error {err:.3e}");
    }

    #[test]
    fn domain_limited_flag_on_narrow_box() {
        // A box barely wider than the data: radiation reaches the edges fast.
        let y0 = Preset::new(PresetShape::Sech, 0.3f64, 1.0, 0.0)
            .unwrap()
            .sample(36.0, 1024)
            .unwrap();
        let cfg = EvolveConfig {
            domain_l: 80.0,
            n_modes: 1 << 10,
            dt: Some(0.01),
            ..EvolveConfig::default()
        };
        let traj = evolve(&y0, 20.0, &[20.0], &cfg).unwrap();
        assert!(traj.domain_limited);
    }

    #[test]
    fn rejects_bad_inputs() {
        let y0 = sech_preset(0.1);
        let mut cfg = small_cfg();
        cfg.n_modes = 1000; // not a power of two
        assert!(evolve(&y0, 1.0, &[1.0], &cfg).is_err());
        let cfg = small_cfg();
        assert!(evolve(&y0, -1.0, &[0.5], &cfg).is_err());
        assert!(evolve(&y0, 1.0, &[2.0], &cfg).is_err());
        // Potential wider than the box.
        let cfg_narrow = EvolveConfig {
            domain_l: 50.0,
            n_modes: 1 << 10,
            ..EvolveConfig::default()
        };
        assert!(evolve(&y0, 1.0, &[1.0], &cfg_narrow).is_err());
    }
}
