//! Dense complex linear algebra: LU with partial pivoting and restarted
//! GMRES with modified Gram-Schmidt. Both are generic over the scalar and
//! deliberately dependency-free; problem sizes here are a few thousand
//! unknowns at most for the dense path.

use crate::error::{Error, Result};
use crate::real::Real;
use num_complex::Complex;

/// Row-major dense complex matrix.
#[derive(Clone)]
pub struct CMatrix<T> {
    pub n: usize,
    pub data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] += v;
    }
}

/// LU factorization with partial pivoting, in place.
pub struct Lu<T> {
    lu: CMatrix<T>,
    piv: Vec<usize>,
    /// Crude condition estimate: max/min absolute pivot.
    pub pivot_ratio: T,
}

pub fn lu_factor<T: Real>(mut a: CMatrix<T>) -> Result<Lu<T>> {
    let n = a.n;
    let mut piv = vec![0usize; n];
    let mut max_piv = T::zero();
    let mut min_piv = T::infinity();
    for k in 0..n {
        // Pivot search on column k.
        let mut p = k;
        let mut best = a.at(k, k).norm_sqr();
        for i in (k + 1)..n {
            let v = a.at(i, k).norm_sqr();
            if v > best {
                best = v;
                p = i;
            }
        }
        piv[k] = p;
        if p != k {
            for j in 0..n {
                let tmp = a.at(k, j);
                a.set(k, j, a.at(p, j));
                a.set(p, j, tmp);
            }
        }
        let pivot = a.at(k, k);
        let pa = pivot.norm();
        if !(pa > T::zero()) {
            return Err(Error::SolverFailure {
                msg: format!("singular pivot at column {k}"),
                residual: f64::INFINITY,
                cond_est: f64::INFINITY,
            });
        }
        max_piv = max_piv.max(pa);
        min_piv = min_piv.min(pa);
        let inv = pivot.inv();
        for i in (k + 1)..n {
            let m = a.at(i, k) * inv;
            a.set(i, k, m);
            if m.norm_sqr() > T::zero() {
                let (row_k, row_i) = row_pair(&mut a.data, n, k, i);
                for j in (k + 1)..n {
                    row_i[j] = row_i[j] - m * row_k[j];
                }
            }
        }
    }
    Ok(Lu {
        lu: a,
        piv,
        pivot_ratio: max_piv / min_piv,
    })
}

/// Disjoint mutable views of rows `k` and `i` (k < i).
fn row_pair<'a, T>(data: &'a mut [Complex<T>], n: usize, k: usize, i: usize) -> (&'a [Complex<T>], &'a mut [Complex<T>]) {
    debug_assert!(k < i);
    let (head, tail) = data.split_at_mut(i * n);
    (&head[k * n..(k + 1) * n], &mut tail[..n])
}

impl<T: Real> Lu<T> {
    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.lu.n;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
        }
        // Forward substitution (unit lower).
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu.at(i, j) * x[j];
            }
            x[i] = acc;
        }
        // Back substitution.
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc = acc - self.lu.at(i, j) * x[j];
            }
            x[i] = acc / self.lu.at(i, i);
        }
        x
    }
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (u, v) in a.iter().zip(b) {
        acc += u.conj() * *v;
    }
    acc
}

fn norm<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|c| c.norm_sqr()).fold(T::zero(), |s, v| s + v).sqrt()
}

/// Outcome of a GMRES run.
pub struct GmresReport<T> {
    pub iterations: usize,
    pub relative_residual: T,
    pub converged: bool,
}

/// Restarted GMRES for `A x = b`, `A` given as a matrix-free application.
///
/// Returns the solution and a report; declares failure (Err) only when the
/// residual has not reached `tol` after `max_iters` total iterations.
pub fn gmres<T: Real, F: FnMut(&[Complex<T>], &mut [Complex<T>])>(
    mut apply: F,
    b: &[Complex<T>],
    tol: T,
    restart: usize,
    max_iters: usize,
) -> Result<(Vec<Complex<T>>, GmresReport<T>)> {
    let n = b.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut x = vec![zero; n];
    let bnorm = norm(b);
    if !(bnorm > T::zero()) {
        return Ok((
            x,
            GmresReport {
                iterations: 0,
                relative_residual: T::zero(),
                converged: true,
            },
        ));
    }
    let mut total_iters = 0usize;
    let mut scratch = vec![zero; n];
    let mut rel_res = T::one();
    while total_iters < max_iters {
        // Residual r = b - A x.
        apply(&x, &mut scratch);
        let mut r: Vec<Complex<T>> = b.iter().zip(&scratch).map(|(bi, ai)| *bi - *ai).collect();
        let beta = norm(&r);
        rel_res = beta / bnorm;
        if rel_res <= tol {
            return Ok((
                x,
                GmresReport {
                    iterations: total_iters,
                    relative_residual: rel_res,
                    converged: true,
                },
            ));
        }
        let m = restart.min(max_iters - total_iters);
        let inv_beta = Complex::new(T::one() / beta, T::zero());
        for v in r.iter_mut() {
            *v = *v * inv_beta;
        }
        let mut basis: Vec<Vec<Complex<T>>> = vec![r];
        // Hessenberg in column-major per iteration, with Givens rotations.
        let mut h = vec![zero; (m + 1) * m];
        let mut cs = vec![zero; m];
        let mut sn = vec![zero; m];
        let mut g = vec![zero; m + 1];
        g[0] = Complex::new(beta, T::zero());
        let mut k_used = 0usize;
        for k in 0..m {
            apply(&basis[k], &mut scratch);
            let mut w = scratch.clone();
            // Modified Gram-Schmidt.
            for j in 0..=k {
                let hjk = dot(&basis[j], &w);
                h[j * m + k] = hjk;
                for (wi, vj) in w.iter_mut().zip(&basis[j]) {
                    *wi = *wi - hjk * *vj;
                }
            }
            let wn = norm(&w);
            h[(k + 1) * m + k] = Complex::new(wn, T::zero());
            // Apply previous rotations to column k.
            for j in 0..k {
                let t1 = h[j * m + k];
                let t2 = h[(j + 1) * m + k];
                h[j * m + k] = cs[j].conj() * t1 + sn[j].conj() * t2;
                h[(j + 1) * m + k] = -sn[j] * t1 + cs[j] * t2;
            }
            // New rotation annihilating h[k+1][k].
            let t1 = h[k * m + k];
            let t2 = h[(k + 1) * m + k];
            let rho = (t1.norm_sqr() + t2.norm_sqr()).sqrt();
            if rho > T::zero() {
                let inv_rho = T::one() / rho;
                cs[k] = t1 * inv_rho;
                sn[k] = t2 * inv_rho;
            } else {
                cs[k] = Complex::new(T::one(), T::zero());
                sn[k] = zero;
            }
            h[k * m + k] = cs[k].conj() * t1 + sn[k].conj() * t2;
            h[(k + 1) * m + k] = zero;
            let gk = g[k];
            g[k] = cs[k].conj() * gk;
            g[k + 1] = -sn[k] * gk;
            k_used = k + 1;
            total_iters += 1;
            rel_res = g[k + 1].norm() / bnorm;
            if rel_res <= tol || wn <= T::epsilon() * bnorm {
                break;
            }
            let inv_wn = Complex::new(T::one() / wn, T::zero());
            let vnext: Vec<Complex<T>> = w.iter().map(|c| *c * inv_wn).collect();
            basis.push(vnext);
        }
        // Solve the small triangular system and update x.
        let mut y = vec![zero; k_used];
        for i in (0..k_used).rev() {
            let mut acc = g[i];
            for j in (i + 1)..k_used {
                acc = acc - h[i * m + j] * y[j];
            }
            y[i] = acc / h[i * m + i];
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, vj) in x.iter_mut().zip(&basis[j]) {
                *xi = *xi + *yj * *vj;
            }
        }
        if rel_res <= tol {
            return Ok((
                x,
                GmresReport {
                    iterations: total_iters,
                    relative_residual: rel_res,
                    converged: true,
                },
            ));
        }
    }
    Err(Error::SolverFailure {
        msg: format!("GMRES stalled after {total_iters} iterations"),
        residual: rel_res.to_f64().unwrap_or(f64::NAN),
        cond_est: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C64 = Complex<f64>;

    fn random_system(n: usize, seed: u64) -> (CMatrix<f64>, Vec<C64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let d = if i == j { 4.0 } else { 0.0 };
                a.set(
                    i,
                    j,
                    C64::new(rng.gen::<f64>() - 0.5 + d, rng.gen::<f64>() - 0.5),
                );
            }
        }
        let b: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        (a, b)
    }

    fn matvec(a: &CMatrix<f64>, x: &[C64]) -> Vec<C64> {
        (0..a.n)
            .map(|i| (0..a.n).map(|j| a.at(i, j) * x[j]).sum())
            .collect()
    }

    #[test]
    fn lu_solves_random_system() {
        let (a, b) = random_system(40, 7);
        let lu = lu_factor(a.clone()).unwrap();
        let x = lu.solve(&b);
        let r = matvec(&a, &x);
        let err: f64 = r.iter().zip(&b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        assert!(err < 1e-11, "residual {err:.3e}");
    }

    #[test]
    fn lu_rejects_singular() {
        let mut a = CMatrix::<f64>::zeros(3);
        a.set(0, 0, C64::new(1.0, 0.0));
        a.set(1, 1, C64::new(1.0, 0.0));
        // third row zero
        assert!(lu_factor(a).is_err());
    }

    #[test]
    fn gmres_matches_lu() {
        let (a, b) = random_system(60, 11);
        let lu = lu_factor(a.clone()).unwrap();
        let x_direct = lu.solve(&b);
        let (x_it, rep) = gmres(
            |x, out| {
                let y = matvec(&a, x);
                out.copy_from_slice(&y);
            },
            &b,
            1e-12,
            30,
            600,
        )
        .unwrap();
        assert!(rep.converged);
        let err: f64 = x_it
            .iter()
            .zip(&x_direct)
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "gmres vs lu {err:.3e}");
    }

    #[test]
    fn gmres_identity_fast_path() {
        let b = vec![C64::new(1.0, -2.0); 17];
        let (x, rep) = gmres(
            |x, out| out.copy_from_slice(x),
            &b,
            1e-14,
            10,
            100,
        )
        .unwrap();
        assert!(rep.iterations <= 2);
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).norm() < 1e-13);
        }
    }
}
