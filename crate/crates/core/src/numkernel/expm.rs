use crate::error::{Error, Result};
use crate::numkernel::Matrix;
use crate::scalar::Real;

const MAX_TERMS: usize = 60;

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// series.
///
/// The argument is scaled by a power of two until its 1-norm is at most 1/2,
/// the series is summed until the next term falls below machine precision
/// relative to the partial sum, and the result is squared back. The zero
/// matrix maps to the identity exactly.
pub fn matrix_exponential<T: Real>(h: &Matrix<T>) -> Result<Matrix<T>> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "exponential of non-square {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let n = h.rows();
    let norm = h.one_norm();
    if norm == T::zero() {
        return Ok(Matrix::identity(n));
    }

    let half = T::lit(0.5);
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > half {
        scaled_norm *= half;
        squarings += 1;
    }
    // Powers of two keep the scaling exact.
    let a = h.scale_real(T::lit(0.5).powi(squarings as i32));

    let eps = T::epsilon();
    let mut result = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &a).scale_real(T::one() / T::lit(k as f64));
        result += &term;
        if term.one_norm() <= eps * result.one_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    type M = Matrix<f64>;

    #[test]
    fn zero_maps_to_identity_exactly() {
        assert_eq!(matrix_exponential(&M::zeros(4, 4)).unwrap(), M::identity(4));
    }

    #[test]
    fn pi_times_sigma_x() {
        // exp(i pi sigma_x) = cos(pi) + i sin(pi) sigma_x = -1
        let h = M::from_rows(vec![vec![c(0.0, 0.0), c(0.0, std::f64::consts::PI)], vec![
            c(0.0, std::f64::consts::PI),
            c(0.0, 0.0),
        ]])
        .unwrap();
        let e = matrix_exponential(&h).unwrap();
        assert!(e.max_abs_diff(&M::identity(2).scale_real(-1.0)) < 1e-13);
    }

    #[test]
    fn diagonal_exponential() {
        // i pi J^3 with J^3 = diag(1/2, -1/2)
        let h = M::from_rows(vec![
            vec![c(0.0, std::f64::consts::FRAC_PI_2), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, -std::f64::consts::FRAC_PI_2)],
        ])
        .unwrap();
        let e = matrix_exponential(&h).unwrap();
        let expected = M::from_rows(vec![vec![c(0.0, 1.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, -1.0)]]).unwrap();
        assert!(e.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn real_rotation_generator() {
        let theta = 2.5_f64;
        let h = M::from_real_rows(&[&[0.0, theta], &[-theta, 0.0]]).unwrap();
        let e = matrix_exponential(&h).unwrap();
        let expected = M::from_real_rows(&[&[theta.cos(), theta.sin()], &[-theta.sin(), theta.cos()]]).unwrap();
        assert!(e.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn large_argument_boost() {
        let phi = 7.0_f64;
        let h = M::from_real_rows(&[&[0.0, phi], &[phi, 0.0]]).unwrap();
        let e = matrix_exponential(&h).unwrap();
        let expected = M::from_real_rows(&[&[phi.cosh(), phi.sinh()], &[phi.sinh(), phi.cosh()]]).unwrap();
        assert!(e.max_abs_diff(&expected) / phi.cosh() < 1e-13);
    }

    #[test]
    fn rejects_rectangular() {
        assert!(matrix_exponential(&M::zeros(2, 3)).is_err());
    }
}
