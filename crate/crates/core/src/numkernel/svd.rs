//! Singular values and nullspaces via one-sided (Hestenes) Jacobi.

use num_complex::Complex;

use crate::numkernel::{Matrix, Tolerance};
use crate::scalar::{cone, czero, Real};

const MAX_SWEEPS: usize = 80;

/// Right singular vectors and singular values of a matrix.
///
/// `singular[j]` pairs with column `j` of `v`; the order is not sorted.
pub struct Svd<T: Real> {
    pub singular: Vec<T>,
    pub v: Vec<Vec<Complex<T>>>,
}

impl<T: Real> Svd<T> {
    pub fn max_singular(&self) -> T {
        self.singular.iter().fold(T::zero(), |m, &s| m.max(s))
    }
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(czero(), |acc, (x, y)| acc + x.conj() * y)
}

fn norm_sqr<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Rotates columns `p`, `q` so that they become orthogonal.
fn rotate<T: Real>(cols: &mut [Vec<Complex<T>>], p: usize, q: usize, cos: T, sin: T, phase: Complex<T>) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * phase;
        let xp = *x;
        *x = xp * cos - yq * sin;
        *y = xp * sin + yq * cos;
    }
}

/// One-sided Jacobi SVD. Works for any shape; only `V` and the singular
/// values are kept.
pub fn svd<T: Real>(m: &Matrix<T>) -> Svd<T> {
    let (rows, n) = (m.rows(), m.cols());
    let mut u: Vec<Vec<Complex<T>>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| {
            let mut e = vec![czero(); n];
            e[j] = cone();
            e
        })
        .collect();
    let eps = T::epsilon() * T::lit(rows.max(1) as f64).sqrt();
    let two = T::lit(2.0);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&u[p]);
                let beta = norm_sqr(&u[q]);
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                let gamma = dot(&u[p], &u[q]);
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Multiplying column q by conj(gamma)/|gamma| makes the pair's
                // inner product real; a real Jacobi rotation finishes the job.
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (two * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cos = T::one() / (T::one() + t * t).sqrt();
                let sin = cos * t;
                rotate(&mut u, p, q, cos, sin, phase);
                rotate(&mut v, p, q, cos, sin, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let singular = u.iter().map(|col| norm_sqr(col).sqrt()).collect();
    Svd { singular, v }
}

/// Rotates a vector so that its first entry of largest magnitude is real and
/// positive.
pub fn phase_fix<T: Real>(v: &mut [Complex<T>]) {
    let mut best = 0;
    let mut best_mag = T::zero();
    let slack = T::lit(1.0 + 1e-9);
    for (i, z) in v.iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag * slack {
            best = i;
            best_mag = mag;
        }
    }
    if best_mag == T::zero() {
        return;
    }
    let rot = v[best].conj() / best_mag;
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[best] = Complex::new(v[best].re, T::zero());
}

/// Orthonormal basis of `{x : m x = 0}`.
///
/// A right singular vector belongs to the kernel when its singular value is
/// at most `rank_cut * sigma_max`; a zero matrix has a full kernel. Each
/// vector has unit norm and is phase-fixed with [`phase_fix`].
pub fn nullspace_basis<T: Real>(m: &Matrix<T>, tol: &Tolerance) -> Vec<Vec<Complex<T>>> {
    let decomposition = svd(m);
    let cut = T::lit(tol.rank_cut) * decomposition.max_singular();
    decomposition
        .singular
        .iter()
        .zip(decomposition.v)
        .filter(|(&s, _)| s <= cut)
        .map(|(_, mut x)| {
            let norm = norm_sqr(&x).sqrt();
            for z in x.iter_mut() {
                *z /= norm;
            }
            phase_fix(&mut x);
            x
        })
        .collect()
}
