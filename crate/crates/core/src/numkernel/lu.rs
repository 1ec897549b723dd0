//! LU factorisation with partial pivoting: determinants, inverses, solves.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numkernel::Matrix;
use crate::scalar::{cone, czero, Real};

struct Lu<T: Real> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    sign_flips: usize,
    singular: bool,
}

fn factor<T: Real>(m: &Matrix<T>) -> Result<Lu<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("LU of non-square matrix".into()));
    }
    let n = m.rows();
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign_flips = 0;
    let mut singular = false;
    let scale = m.max_abs();
    for k in 0..n {
        let (p, pivot_mag) = (k..n)
            .map(|r| (r, lu[(r, k)].norm()))
            .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_mag <= scale * T::epsilon() * T::lit(n as f64) || pivot_mag == T::zero() {
            singular = true;
            continue;
        }
        if p != k {
            for c in 0..n {
                let tmp = lu[(k, c)];
                lu[(k, c)] = lu[(p, c)];
                lu[(p, c)] = tmp;
            }
            perm.swap(k, p);
            sign_flips += 1;
        }
        let pivot = lu[(k, k)];
        for r in k + 1..n {
            let factor = lu[(r, k)] / pivot;
            lu[(r, k)] = factor;
            if factor.re == T::zero() && factor.im == T::zero() {
                continue;
            }
            for c in k + 1..n {
                let v = lu[(k, c)];
                lu[(r, c)] -= factor * v;
            }
        }
    }
    Ok(Lu {
        lu,
        perm,
        sign_flips,
        singular,
    })
}

pub fn determinant<T: Real>(m: &Matrix<T>) -> Result<Complex<T>> {
    let f = factor(m)?;
    if f.singular {
        return Ok(czero());
    }
    let mut det = (0..m.rows()).fold(cone::<T>(), |acc, i| acc * f.lu[(i, i)]);
    if f.sign_flips % 2 == 1 {
        det = -det;
    }
    Ok(det)
}

fn solve_factored<T: Real>(f: &Lu<T>, b: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = b.len();
    let mut x: Vec<Complex<T>> = f.perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for k in 0..i {
            let l = f.lu[(i, k)];
            let xk = x[k];
            x[i] -= l * xk;
        }
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let u = f.lu[(i, k)];
            let xk = x[k];
            x[i] -= u * xk;
        }
        x[i] /= f.lu[(i, i)];
    }
    x
}

/// Solves `m x = b`.
pub fn solve<T: Real>(m: &Matrix<T>, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if b.len() != m.rows() {
        return Err(Error::LengthMismatch {
            what: "right-hand side",
            expected: m.rows(),
            got: b.len(),
        });
    }
    let f = factor(m)?;
    if f.singular {
        return Err(Error::Singular);
    }
    Ok(solve_factored(&f, b))
}

pub fn inverse<T: Real>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let f = factor(m)?;
    if f.singular {
        return Err(Error::Singular);
    }
    let n = m.rows();
    let columns: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| {
            let mut e = vec![czero(); n];
            e[j] = cone();
            solve_factored(&f, &e)
        })
        .collect();
    Matrix::from_columns(&columns)
}
