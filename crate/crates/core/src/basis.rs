//! Hermitian generator bases of `N x N` matrices.
//!
//! The canonical basis lists, in this order (1-based labels `a < b`):
//!
//! 1. `J^{+ab} = (T^{ab} + T^{ba}) / 2` for all pairs `a < b`, pairs in
//!    lexicographic order;
//! 2. `J^{-ab} = -i (T^{ab} - T^{ba}) / 2` for the same pairs;
//! 3. `J^{0aa} = (T^{11} + ... + T^{a-1,a-1} - (a-1) T^{aa}) / sqrt(2a(a-1))`
//!    for `a = 2..N`;
//! 4. `J^{011} = 1 / sqrt(2N)`.
//!
//! `T^{ab}` is the matrix unit with a single one at `(a, b)`. The basis obeys
//! `tr(J^mu J^nu) = delta^{mu nu} / 2`, and only the last element has a
//! nonzero trace. [`GeneratorLabel`] maps flat indices to these labels.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{inverse, solve, Matrix, Tolerance};
use crate::scalar::{c, creal, czero, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Canonical,
    Custom,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Canonical => "canonical",
            BasisKind::Custom => "custom",
        }
    }
}

/// Label of a canonical generator. Indices `a`, `b` are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorLabel {
    Symmetric { a: usize, b: usize },
    Antisymmetric { a: usize, b: usize },
    Diagonal { a: usize },
    Identity,
}

impl GeneratorLabel {
    /// All labels of the canonical basis in flat-index order.
    pub fn all(n: usize) -> Vec<GeneratorLabel> {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
            .collect();
        let mut labels = Vec::with_capacity(n * n);
        labels.extend(pairs.iter().map(|&(a, b)| GeneratorLabel::Symmetric { a, b }));
        labels.extend(pairs.iter().map(|&(a, b)| GeneratorLabel::Antisymmetric { a, b }));
        labels.extend((2..=n).map(|a| GeneratorLabel::Diagonal { a }));
        labels.push(GeneratorLabel::Identity);
        labels
    }

    pub fn matrix<T: Real>(self, n: usize) -> Matrix<T> {
        let mut m = Matrix::zeros(n, n);
        match self {
            GeneratorLabel::Symmetric { a, b } => {
                m[(a - 1, b - 1)] = c(0.5, 0.0);
                m[(b - 1, a - 1)] = c(0.5, 0.0);
            }
            GeneratorLabel::Antisymmetric { a, b } => {
                m[(a - 1, b - 1)] = c(0.0, -0.5);
                m[(b - 1, a - 1)] = c(0.0, 0.5);
            }
            GeneratorLabel::Diagonal { a } => {
                let norm = T::one() / T::lit((2 * (a * a - a)) as f64).sqrt();
                for k in 0..a - 1 {
                    m[(k, k)] = creal(norm);
                }
                m[(a - 1, a - 1)] = creal(-T::lit((a - 1) as f64) * norm);
            }
            GeneratorLabel::Identity => {
                let norm = T::one() / T::lit((2 * n) as f64).sqrt();
                for k in 0..n {
                    m[(k, k)] = creal(norm);
                }
            }
        }
        m
    }
}

impl std::fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeneratorLabel::Symmetric { a, b } => write!(f, "J+({a},{b})"),
            GeneratorLabel::Antisymmetric { a, b } => write!(f, "J-({a},{b})"),
            GeneratorLabel::Diagonal { a } => write!(f, "J0({a},{a})"),
            GeneratorLabel::Identity => write!(f, "J0(1,1)"),
        }
    }
}

/// An ordered basis of the real vector space of hermitian `N x N` matrices
/// whose last element is the only one with nonzero trace.
#[derive(Clone, Debug)]
pub struct GeneratorBasis<T: Real> {
    n: usize,
    mats: Vec<Matrix<T>>,
    kind: BasisKind,
    /// `permutation[k]` is the position in the caller's list of element `k`.
    permutation: Vec<usize>,
    /// Inverse of the Gram matrix `tr(J^mu J^nu)`; `None` for canonical bases.
    gram_inverse: Option<Matrix<T>>,
}

/// Builds the canonical basis for `n >= 2`.
pub fn canonical_basis<T: Real>(n: usize) -> Result<GeneratorBasis<T>> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    let mats = GeneratorLabel::all(n).into_iter().map(|l| l.matrix(n)).collect();
    Ok(GeneratorBasis {
        n,
        mats,
        kind: BasisKind::Canonical,
        permutation: (0..n * n).collect(),
        gram_inverse: None,
    })
}

fn gram<T: Real>(mats: &[Matrix<T>]) -> Matrix<T> {
    let k = mats.len();
    Matrix::from_fn(k, k, |a, b| creal(trace_product(&mats[a], &mats[b]).re))
}

/// `tr(a b)` without forming the product.
pub(crate) fn trace_product<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Complex<T> {
    let n = a.rows();
    let mut acc = czero();
    for r in 0..n {
        for s in 0..n {
            acc += a[(r, s)] * b[(s, r)];
        }
    }
    acc
}

impl<T: Real> GeneratorBasis<T> {
    /// Validates a user-supplied basis.
    ///
    /// Every matrix must be hermitian `n x n`, exactly one must have nonzero
    /// trace, and together they must span the hermitian matrices. The
    /// nonzero-trace matrix is moved to the end if needed; the applied
    /// reordering is available from [`GeneratorBasis::permutation`].
    pub fn custom(n: usize, mats: Vec<Matrix<T>>, tol: &Tolerance) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidN(n));
        }
        if mats.len() != n * n {
            return Err(Error::LengthMismatch {
                what: "basis matrices",
                expected: n * n,
                got: mats.len(),
            });
        }
        for m in &mats {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "basis matrix is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
            let violation = m.hermiticity_violation();
            if violation > tol.algebraic {
                return Err(Error::NotHermitian(violation));
            }
        }
        let traced: Vec<usize> = mats
            .iter()
            .enumerate()
            .filter(|(_, m)| m.trace().norm().as_f64() > tol.algebraic)
            .map(|(i, _)| i)
            .collect();
        let last = match traced.as_slice() {
            [only] => *only,
            [] => return Err(Error::TracePattern("no matrix has a nonzero trace".into())),
            _ => {
                return Err(Error::TracePattern(format!(
                    "{} matrices have a nonzero trace, expected exactly one",
                    traced.len()
                )))
            }
        };
        let mut permutation: Vec<usize> = (0..mats.len()).filter(|&i| i != last).collect();
        permutation.push(last);
        let mut slots: Vec<Option<Matrix<T>>> = mats.into_iter().map(Some).collect();
        let mats: Vec<Matrix<T>> = permutation
            .iter()
            .map(|&i| slots[i].take().expect("permutation is a bijection"))
            .collect();

        let g = gram(&mats);
        let gram_inverse = inverse(&g).map_err(|_| Error::NotSpanning)?;
        Ok(Self {
            n,
            mats,
            kind: BasisKind::Custom,
            permutation,
            gram_inverse: Some(gram_inverse),
        })
    }

    /// Reinterprets a basis as custom, forcing the general (Gram) code paths.
    pub fn as_custom(&self, tol: &Tolerance) -> Result<Self> {
        Self::custom(self.n, self.mats.clone(), tol)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of elements, `N^2`.
    #[inline]
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    #[inline]
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    #[inline]
    pub fn mats(&self) -> &[Matrix<T>] {
        &self.mats
    }

    /// The `N^2 - 1` traceless elements.
    #[inline]
    pub fn traceless(&self) -> &[Matrix<T>] {
        &self.mats[..self.mats.len() - 1]
    }

    /// The nonzero-trace element `J^{N^2}`.
    #[inline]
    pub fn trace_element(&self) -> &Matrix<T> {
        self.mats.last().expect("basis is never empty")
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Anti-rep: `Jbar^mu_{st} = -J^mu_{ts} = -conj(J^mu_{st})`.
    pub fn anti_rep(&self) -> Vec<Matrix<T>> {
        anti_rep(&self.mats)
    }

    /// Complex coefficients `c` with `m = sum c_nu J^nu`, for any `m`.
    pub(crate) fn coefficients(&self, m: &Matrix<T>) -> Vec<Complex<T>> {
        let traces: Vec<Complex<T>> = self.mats.iter().map(|j| trace_product(m, j)).collect();
        match &self.gram_inverse {
            None => traces.into_iter().map(|t| t * T::lit(2.0)).collect(),
            Some(gi) => gi.mul_vec(&traces),
        }
    }

    /// Real coefficients `beta` with `m = sum beta_nu J^nu` for hermitian `m`.
    pub fn decompose_hermitian(&self, m: &Matrix<T>, tol: &Tolerance) -> Result<Vec<T>> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n} matrix, got {}x{}",
                m.rows(),
                m.cols(),
                n = self.n
            )));
        }
        let violation = m.hermiticity_violation();
        if violation > tol.algebraic {
            return Err(Error::NotHermitian(violation));
        }
        Ok(self.coefficients(m).into_iter().map(|z| z.re).collect())
    }

    /// `sum beta_nu J^nu`.
    pub fn compose(&self, beta: &[T]) -> Matrix<T> {
        assert_eq!(beta.len(), self.mats.len(), "coefficient count must be N^2");
        let weights: Vec<Complex<T>> = beta.iter().map(|&b| creal(b)).collect();
        Matrix::linear_combination(&weights, &self.mats).expect("basis is never empty")
    }
}

/// Negative transpose of each matrix.
pub fn anti_rep<T: Real>(mats: &[Matrix<T>]) -> Vec<Matrix<T>> {
    mats.iter().map(|m| -&m.transpose()).collect()
}

/// Real change of basis `J'^mu = R^mu_sigma J^sigma` together with `R^{-1}`.
#[derive(Clone, Debug)]
pub struct BasisChange<T: Real> {
    r: Matrix<T>,
    r_inverse: Matrix<T>,
}

impl<T: Real> BasisChange<T> {
    /// `R^mu_sigma` (0-based indices).
    pub fn r(&self, mu: usize, sigma: usize) -> T {
        self.r[(mu, sigma)].re
    }

    pub fn r_inverse(&self, mu: usize, sigma: usize) -> T {
        self.r_inverse[(mu, sigma)].re
    }

    /// `R` as a matrix with zero imaginary parts.
    pub fn matrix(&self) -> &Matrix<T> {
        &self.r
    }

    pub fn inverse_matrix(&self) -> &Matrix<T> {
        &self.r_inverse
    }

    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    /// Builds a change of basis directly from `R`.
    pub fn from_matrix(r: Matrix<T>) -> Result<Self> {
        let r = r.map(|z| creal(z.re));
        let r_inverse = inverse(&r)?.map(|z| creal(z.re));
        Ok(Self { r, r_inverse })
    }
}

/// Change of basis from `b` to the `primed` matrices.
///
/// `primed` must already have its single nonzero-trace matrix last; no
/// reordering happens here.
pub fn basis_change<T: Real>(
    b: &GeneratorBasis<T>,
    primed: &[Matrix<T>],
    tol: &Tolerance,
) -> Result<BasisChange<T>> {
    let validated = GeneratorBasis::custom(b.n(), primed.to_vec(), tol)?;
    if validated.permutation().iter().enumerate().any(|(i, &p)| i != p) {
        return Err(Error::TracePattern(
            "the nonzero-trace primed matrix must be last".into(),
        ));
    }
    let dim = b.len();
    let mut r = Matrix::zeros(dim, dim);
    for (mu, m) in primed.iter().enumerate() {
        let coeffs = b.coefficients(m);
        for (sigma, z) in coeffs.iter().enumerate() {
            r[(mu, sigma)] = creal(z.re);
        }
    }
    // Traceless primed elements have no component along J^{N^2}.
    for i in 0..dim - 1 {
        let stray = r[(i, dim - 1)].norm().as_f64();
        if stray > tol.algebraic {
            return Err(Error::TracePattern(format!(
                "primed element {} has trace component {stray:.3e}",
                i + 1
            )));
        }
        r[(i, dim - 1)] = czero();
    }
    let mut r_inverse = inverse(&r).map_err(|_| Error::NotSpanning)?.map(|z| creal(z.re));
    // R is block lower-triangular, so its inverse shares the zero column.
    for i in 0..dim - 1 {
        r_inverse[(i, dim - 1)] = czero();
    }
    Ok(BasisChange { r, r_inverse })
}

/// Applies `R` to a basis: `J'^mu = R^mu_sigma J^sigma`.
pub fn transform_basis<T: Real>(b: &GeneratorBasis<T>, r: &BasisChange<T>) -> Vec<Matrix<T>> {
    (0..b.len())
        .map(|mu| {
            let weights: Vec<Complex<T>> = (0..b.len()).map(|s| creal(r.r(mu, s))).collect();
            Matrix::linear_combination(&weights, b.mats()).expect("basis is never empty")
        })
        .collect()
}

/// Solves the real Gram system directly; used to cross-check coefficient
/// extraction in tests.
pub fn gram_solve<T: Real>(mats: &[Matrix<T>], m: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    let g = gram(mats);
    let rhs: Vec<Complex<T>> = mats.iter().map(|j| trace_product(j, m)).collect();
    solve(&g, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<f64>;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn su2_canonical_matches_half_paulis() {
        let b = canonical_basis::<f64>(2).unwrap();
        let expected = [
            M::from_rows(vec![vec![c(0.0, 0.0), c(0.5, 0.0)], vec![c(0.5, 0.0), c(0.0, 0.0)]]).unwrap(),
            M::from_rows(vec![vec![c(0.0, 0.0), c(0.0, -0.5)], vec![c(0.0, 0.5), c(0.0, 0.0)]]).unwrap(),
            M::from_real_rows(&[&[0.5, 0.0], &[0.0, -0.5]]).unwrap(),
            M::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.5]]).unwrap(),
        ];
        for (got, want) in b.mats().iter().zip(&expected) {
            assert!(got.max_abs_diff(want) < 1e-15);
        }
    }

    #[test]
    fn su3_count_and_trace_element() {
        let b = canonical_basis::<f64>(3).unwrap();
        assert_eq!(b.len(), 9);
        let labels = GeneratorLabel::all(3);
        assert_eq!(labels.iter().filter(|l| matches!(l, GeneratorLabel::Symmetric { .. })).count(), 3);
        assert_eq!(labels.iter().filter(|l| matches!(l, GeneratorLabel::Antisymmetric { .. })).count(), 3);
        assert_eq!(labels.iter().filter(|l| matches!(l, GeneratorLabel::Diagonal { .. })).count(), 2);
        let expected = M::identity(3).scale_real(1.0 / 6f64.sqrt());
        assert!(b.trace_element().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn trace_identity_and_pattern() {
        for n in 2..=6 {
            let b = canonical_basis::<f64>(n).unwrap();
            for (mu, a) in b.mats().iter().enumerate() {
                assert!(a.is_hermitian(0.0));
                let tr = a.trace().norm();
                if mu + 1 == b.len() {
                    assert!(tr > 0.1);
                } else {
                    assert!(tr < 1e-15);
                }
                for (nu, bb) in b.mats().iter().enumerate() {
                    let expected = if mu == nu { 0.5 } else { 0.0 };
                    assert!((trace_product(a, bb) - c(expected, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(canonical_basis::<f64>(1), Err(Error::InvalidN(1))));
    }

    #[test]
    fn anti_rep_examples() {
        let b = canonical_basis::<f64>(2).unwrap();
        let anti = b.anti_rep();
        assert_eq!(anti[1], b.mats()[1]);
        assert_eq!(anti[0], -&b.mats()[0]);
        assert_eq!(anti[3], -&b.mats()[3]);
        for a in &anti {
            assert!(a.is_hermitian(0.0));
        }
        assert_eq!(anti_rep(&anti), b.mats().to_vec());
    }

    #[test]
    fn decompose_examples() {
        let b = canonical_basis::<f64>(2).unwrap();
        let beta = b.decompose_hermitian(&b.mats()[2], &tol()).unwrap();
        assert_eq!(beta, vec![0.0, 0.0, 1.0, 0.0]);
        let beta = b.decompose_hermitian(&M::identity(2), &tol()).unwrap();
        assert!((beta[3] - 2.0).abs() < 1e-15 && beta[..3].iter().all(|x| x.abs() < 1e-15));
        let m = M::from_real_rows(&[&[1.0, 1.0], &[1.0, 0.0]]).unwrap();
        let beta = b.decompose_hermitian(&m, &tol()).unwrap();
        let expected = [2.0, 0.0, 1.0, 1.0];
        for (x, y) in beta.iter().zip(expected) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn decompose_rejects_non_hermitian() {
        let b = canonical_basis::<f64>(2).unwrap();
        let m = M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(b.decompose_hermitian(&m, &tol()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn custom_basis_moves_trace_element_last() {
        let b = canonical_basis::<f64>(2).unwrap();
        let mut mats = b.mats().to_vec();
        mats.rotate_right(1);
        let custom = GeneratorBasis::custom(2, mats, &tol()).unwrap();
        assert_eq!(custom.permutation(), &[1, 2, 3, 0]);
        assert_eq!(custom.mats(), b.mats());
    }

    #[test]
    fn custom_basis_errors() {
        let b = canonical_basis::<f64>(2).unwrap();
        let mut two_traced = b.mats().to_vec();
        two_traced[0] = M::identity(2);
        assert!(matches!(
            GeneratorBasis::custom(2, two_traced, &tol()),
            Err(Error::TracePattern(_))
        ));
        let mut dependent = b.mats().to_vec();
        dependent[1] = dependent[0].clone();
        assert!(matches!(GeneratorBasis::custom(2, dependent, &tol()), Err(Error::NotSpanning)));
    }

    #[test]
    fn basis_change_examples() {
        let b = canonical_basis::<f64>(2).unwrap();
        let identity = basis_change(&b, b.mats(), &tol()).unwrap();
        assert!(identity.matrix().max_abs_diff(&M::identity(4)) < 1e-15);

        let mut swapped = b.mats().to_vec();
        swapped.swap(0, 1);
        let r = basis_change(&b, &swapped, &tol()).unwrap();
        assert_eq!(r.r(0, 1), 1.0);
        assert_eq!(r.r(1, 0), 1.0);
        assert_eq!(r.r(0, 0), 0.0);

        let scaled = vec![
            b.mats()[0].scale_real(2.0),
            b.mats()[1].clone(),
            b.mats()[2].clone(),
            b.mats()[3].scale_real(3.0),
        ];
        let r = basis_change(&b, &scaled, &tol()).unwrap();
        for (i, d) in [2.0, 1.0, 1.0, 3.0].into_iter().enumerate() {
            assert!((r.r(i, i) - d).abs() < 1e-15);
        }
        let ratio = scaled[3].trace().re / b.mats()[3].trace().re;
        assert!((r.r(3, 3) - ratio).abs() < 1e-15);
        assert!((r.r_inverse(3, 3) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn basis_change_requires_trace_element_last() {
        let b = canonical_basis::<f64>(2).unwrap();
        let mut mats = b.mats().to_vec();
        mats.swap(0, 3);
        assert!(matches!(basis_change(&b, &mats, &tol()), Err(Error::TracePattern(_))));
    }

    #[test]
    fn gram_path_agrees_with_trace_path() {
        let b = canonical_basis::<f64>(3).unwrap();
        let custom = b.as_custom(&tol()).unwrap();
        let m = M::from_fn(3, 3, |r, s| {
            let v = c((r * 3 + s) as f64, (r as f64) - (s as f64));
            if r == s {
                c(v.re, 0.0)
            } else if r < s {
                v
            } else {
                c((s * 3 + r) as f64, (s as f64) - (r as f64)).conj()
            }
        });
        let fast = b.decompose_hermitian(&m, &tol()).unwrap();
        let general = custom.decompose_hermitian(&m, &tol()).unwrap();
        let direct = gram_solve(b.mats(), &m).unwrap();
        for ((x, y), z) in fast.iter().zip(&general).zip(&direct) {
            assert!((x - y).abs() < 1e-13);
            assert!((x - z.re).abs() < 1e-13 && z.im.abs() < 1e-13);
        }
        assert!(b.compose(&fast).max_abs_diff(&m) < 1e-13);
    }
}
