//! Initial data: real potentials sampled on a uniform grid.

use crate::error::{Error, Result};
use crate::interp::Spline;
use crate::real::{fl, Real};
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::io::BufRead;
use std::path::Path;

/// Fraction of the grid (each side) that must satisfy the edge-decay bound.
const EDGE_FRACTION: f64 = 0.05;

/// Default edge-decay threshold relative to max |y0|.
pub const DEFAULT_EDGE_DECAY: f64 = 1e-12;

/// Real initial data y0 on a uniform spatial grid, rapidly decaying at the
/// edges. Constructed through [`SampledPotential::new`], which enforces the
/// type invariants (finiteness, N >= 16, h > 0, edge decay).
#[derive(Clone, Debug)]
pub struct SampledPotential<T> {
    grid_start: T,
    spacing: T,
    values: Vec<T>,
    half_width: T,
}

impl<T: Real> SampledPotential<T> {
    pub fn new(grid_start: T, spacing: T, values: Vec<T>) -> Result<Self> {
        Self::with_edge_threshold(grid_start, spacing, values, fl(DEFAULT_EDGE_DECAY))
    }

    pub fn with_edge_threshold(
        grid_start: T,
        spacing: T,
        values: Vec<T>,
        edge_decay_rel: T,
    ) -> Result<Self> {
        let n = values.len();
        if n < 16 {
            return Err(Error::InvalidPotential(format!(
                "need at least 16 samples, got {n}"
            )));
        }
        if !(spacing > T::zero()) || !spacing.is_finite() {
            return Err(Error::InvalidPotential("spacing must be positive".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("non-finite sample".into()));
        }
        let max_abs = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if max_abs > T::zero() {
            let edge = ((n as f64) * EDGE_FRACTION).ceil() as usize;
            let edge = edge.max(1);
            let mut edge_max = T::zero();
            for i in 0..edge {
                edge_max = edge_max.max(values[i].abs()).max(values[n - 1 - i].abs());
            }
            if edge_max > edge_decay_rel * max_abs {
                return Err(Error::InvalidPotential(format!(
                    "edge decay violated: outer {:.0}% of the grid reaches {:.3e} x max|y0| \
                     (threshold {:.3e}); widen the domain",
                    EDGE_FRACTION * 100.0,
                    (edge_max / max_abs).to_f64().unwrap_or(f64::NAN),
                    edge_decay_rel.to_f64().unwrap_or(f64::NAN),
                )));
            }
        }
        let half_width = spacing * T::from_usize(n - 1).unwrap() * fl(0.5);
        Ok(SampledPotential {
            grid_start,
            spacing,
            values,
            half_width,
        })
    }

    #[inline]
    pub fn grid_start(&self) -> T {
        self.grid_start
    }

    #[inline]
    pub fn spacing(&self) -> T {
        self.spacing
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // invariant: N >= 16
    }

    /// Half-width of the sampled domain, (N-1) h / 2.
    #[inline]
    pub fn half_width(&self) -> T {
        self.half_width
    }

    #[inline]
    pub fn grid_end(&self) -> T {
        self.grid_start + self.spacing * T::from_usize(self.values.len() - 1).unwrap()
    }

    pub fn x_at(&self, i: usize) -> T {
        self.grid_start + self.spacing * T::from_usize(i).unwrap()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Cubic-spline interpolant of the samples (the potential decays to ~0
    /// at the grid edges by construction, so callers may treat it as zero
    /// outside).
    pub fn spline(&self) -> Spline<T> {
        Spline::new(self.grid_start, self.spacing, &self.values)
            .expect("potential grid is a valid spline grid")
    }

    /// Hash of the defining data, recorded in derived quantities.
    pub fn content_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.values.len().hash(&mut h);
        self.grid_start.to_f64().unwrap_or(0.0).to_bits().hash(&mut h);
        self.spacing.to_f64().unwrap_or(0.0).to_bits().hash(&mut h);
        for v in &self.values {
            v.to_f64().unwrap_or(0.0).to_bits().hash(&mut h);
        }
        h.finish()
    }

    /// Two-column CSV (x, y0); a non-numeric first line is treated as a header.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let reader = std::io::BufReader::new(file);
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (a, b) = (parts.next(), parts.next());
            match (
                a.and_then(|s| s.parse::<f64>().ok()),
                b.and_then(|s| s.parse::<f64>().ok()),
            ) {
                (Some(x), Some(y)) => {
                    xs.push(x);
                    ys.push(y);
                }
                _ if lineno == 0 => continue, // header
                _ => {
                    return Err(Error::Parse {
                        path: path.display().to_string(),
                        line: lineno + 1,
                        msg: format!("expected two numeric columns, got {line:?}"),
                    })
                }
            }
        }
        if xs.len() < 16 {
            return Err(Error::InvalidPotential(format!(
                "CSV holds {} samples, need at least 16",
                xs.len()
            )));
        }
        let h0 = xs[1] - xs[0];
        for w in xs.windows(2) {
            if ((w[1] - w[0]) - h0).abs() > 1e-9 * h0.abs().max(1.0) {
                return Err(Error::InvalidPotential(
                    "CSV grid is not uniformly spaced".into(),
                ));
            }
        }
        let values: Vec<T> = ys.iter().map(|v| fl(*v)).collect();
        SampledPotential::new(fl(xs[0]), fl(h0), values)
    }
}

/// Analytic preset shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresetShape {
    Gaussian,
    Sech,
    Sech2,
}

impl PresetShape {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(PresetShape::Gaussian),
            "sech" => Ok(PresetShape::Sech),
            "sech2" => Ok(PresetShape::Sech2),
            other => Err(Error::InvalidConfig(format!(
                "unknown preset {other:?}; expected gaussian | sech | sech2"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PresetShape::Gaussian => "gaussian",
            PresetShape::Sech => "sech",
            PresetShape::Sech2 => "sech2",
        }
    }
}

/// Parameters of an analytic preset potential.
#[derive(Clone, Copy, Debug)]
pub struct Preset<T> {
    pub shape: PresetShape,
    pub amplitude: T,
    pub width: T,
    pub center: T,
}

impl<T: Real> Preset<T> {
    pub fn new(shape: PresetShape, amplitude: T, width: T, center: T) -> Result<Self> {
        if !(width > T::zero()) {
            return Err(Error::InvalidConfig("preset width must be positive".into()));
        }
        Ok(Preset {
            shape,
            amplitude,
            width,
            center,
        })
    }

    pub fn eval(&self, x: T) -> T {
        let u = (x - self.center) / self.width;
        match self.shape {
            PresetShape::Gaussian => self.amplitude * (-u * u * fl::<T>(0.5)).exp(),
            PresetShape::Sech => self.amplitude / u.cosh(),
            PresetShape::Sech2 => {
                let s = T::one() / u.cosh();
                self.amplitude * s * s
            }
        }
    }

    /// Sample on a symmetric grid around the center.
    pub fn sample(&self, half_span: T, n: usize) -> Result<SampledPotential<T>> {
        let x0 = self.center - half_span;
        let h = (half_span + half_span) / T::from_usize(n - 1).unwrap();
        let values: Vec<T> = (0..n)
            .map(|i| self.eval(x0 + h * T::from_usize(i).unwrap()))
            .collect();
        SampledPotential::new(x0, h, values)
    }

    /// Default sampling: wide enough that all three shapes decay far below
    /// the edge threshold over the outer-5% band; 8192 points.
    pub fn sample_default(&self) -> Result<SampledPotential<T>> {
        self.sample(self.width * fl(42.0), 8192)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reject_short_and_nonfinite() {
        assert!(SampledPotential::<f64>::new(0.0, 0.1, vec![0.0; 8]).is_err());
        let mut v = vec![0.0f64; 32];
        v[16] = f64::NAN;
        assert!(SampledPotential::new(0.0, 0.1, v).is_err());
        assert!(SampledPotential::new(0.0, -0.1, vec![0.0; 32]).is_err());
    }

    #[test]
    fn reject_non_decaying_edges() {
        let v = vec![1.0f64; 64];
        let err = SampledPotential::new(-3.0, 0.1, v).unwrap_err();
        match err {
            Error::InvalidPotential(msg) => assert!(msg.contains("edge decay")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn zero_potential_is_valid() {
        let p = SampledPotential::<f64>::new(-5.0, 0.1, vec![0.0; 128]).unwrap();
        assert_eq!(p.len(), 128);
        assert!((p.half_width() - 6.35).abs() < 1e-12);
    }

    #[test]
    fn presets_satisfy_invariants() {
        for shape in [PresetShape::Gaussian, PresetShape::Sech, PresetShape::Sech2] {
            let p = Preset::new(shape, 0.1f64, 1.0, 0.0).unwrap();
            let samp = p.sample_default().unwrap();
            assert!(samp.max_abs() > 0.09);
            // symmetric grid, centered data
            assert!((samp.grid_start() + samp.grid_end()).abs() < 1e-10);
        }
    }

    #[test]
    fn hash_distinguishes_amplitudes() {
        let a = Preset::new(PresetShape::Sech, 0.1f64, 1.0, 0.0)
            .unwrap()
            .sample_default()
            .unwrap();
        let b = Preset::new(PresetShape::Sech, 0.2f64, 1.0, 0.0)
            .unwrap()
            .sample_default()
            .unwrap();
        assert_ne!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn csv_roundtrip() {
        let dir = std::env::temp_dir().join("mkdv_pot_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("pot.csv");
        let mut body = String::from("x,y0\n");
        let n = 64;
        let dx = 20.0 / (n as f64 - 1.0);
        for i in 0..n {
            let x = -10.0 + dx * i as f64;
            body.push_str(&format!("{x},{}\n", 0.05 * (-0.5 * x * x).exp()));
        }
        std::fs::write(&path, body).unwrap();
        let p = SampledPotential::<f64>::from_csv(&path).unwrap();
        assert_eq!(p.len(), n);
        assert!((p.spacing() - dx).abs() < 1e-12);
        std::fs::remove_file(&path).ok();
    }
}
