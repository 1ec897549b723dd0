//! Finite Lorentz transformations `D(theta, phi) = exp(i phi K) exp(i theta J)`
//! acting on real `N^2`-vectors.
//!
//! With the generators built in [`crate::spacetime`], the `N = 2` boost with
//! `phi = (1, 0, 0)` and `eps = +1` sends `(1, 0, 0, 0)` to
//! `(cosh 1, 0, 0, sinh 1)`; `eps = -1` flips the sign of the time component.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{matrix_exponential, Matrix, Tolerance};
use crate::scalar::{ci, creal, Real};
use crate::spacetime::{Sign, SpacetimeGenerators};

/// Deviation above which a boost trial counts as an interval violation.
pub const WITNESS_THRESHOLD: f64 = 1e-3;

/// A real `N^2`-vector; the last component is time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeVector<T: Real> {
    pub x: Vec<T>,
}

impl<T: Real> SpacetimeVector<T> {
    pub fn new(n: usize, x: Vec<T>) -> Result<Self> {
        if x.len() != n * n {
            return Err(Error::LengthMismatch {
                what: "spacetime vector",
                expected: n * n,
                got: x.len(),
            });
        }
        Ok(Self { x })
    }

    pub fn spatial_norm_sqr(&self) -> T {
        self.x[..self.x.len() - 1].iter().map(|&v| v * v).sum()
    }

    pub fn time(&self) -> T {
        *self.x.last().expect("non-empty")
    }

    /// `sum_i (x^i)^2 - t^2`.
    pub fn interval(&self) -> T {
        let t = self.time();
        self.spatial_norm_sqr() - t * t
    }
}

/// Angles and rapidities, one per traceless generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzParams<T: Real> {
    pub theta: Vec<T>,
    pub phi: Vec<T>,
    pub epsilon: Sign,
}

impl<T: Real> LorentzParams<T> {
    pub fn identity(n: usize, epsilon: Sign) -> Self {
        Self {
            theta: vec![T::zero(); n * n - 1],
            phi: vec![T::zero(); n * n - 1],
            epsilon,
        }
    }
}

fn exp_weighted<T: Real>(weights: &[T], mats: &[Matrix<T>], what: &'static str) -> Result<Matrix<T>> {
    if weights.len() != mats.len() {
        return Err(Error::LengthMismatch {
            what,
            expected: mats.len(),
            got: weights.len(),
        });
    }
    let w: Vec<_> = weights.iter().map(|&x| creal(x) * ci::<T>()).collect();
    let h = Matrix::linear_combination(&w, mats).expect("non-empty");
    matrix_exponential(&h)
}

/// `exp(i theta_i J^i)`.
pub fn rotation<T: Real>(g: &SpacetimeGenerators<T>, theta: &[T]) -> Result<Matrix<T>> {
    exp_weighted(theta, &g.j, "rotation angles")
}

/// `exp(i phi_i K^(eps) i)`.
pub fn boost<T: Real>(g: &SpacetimeGenerators<T>, phi: &[T], eps: Sign) -> Result<Matrix<T>> {
    exp_weighted(phi, g.k(eps), "rapidities")
}

/// `D(theta, phi) = exp(i phi K) exp(i theta J)`: a rotation followed by a
/// boost.
pub fn lorentz_transform<T: Real>(g: &SpacetimeGenerators<T>, p: &LorentzParams<T>) -> Result<Matrix<T>> {
    let r = rotation(g, &p.theta)?;
    let b = boost(g, &p.phi, p.epsilon)?;
    b.try_mul(&r)
}

/// `D x` as a real vector. Fails when the result carries an imaginary part
/// above the exponential tolerance.
pub fn apply<T: Real>(d: &Matrix<T>, v: &SpacetimeVector<T>, tol: &Tolerance) -> Result<SpacetimeVector<T>> {
    if d.cols() != v.x.len() || !d.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} transformation applied to a vector of length {}",
            d.rows(),
            d.cols(),
            v.x.len()
        )));
    }
    let input: Vec<_> = v.x.iter().map(|&x| creal(x)).collect();
    let out = d.mul_vec(&input);
    let residue = out.iter().fold(0.0_f64, |m, z| m.max(z.im.abs().as_f64()));
    if residue > tol.exponential {
        return Err(Error::ImaginaryResidue(residue));
    }
    Ok(SpacetimeVector {
        x: out.into_iter().map(|z| z.re).collect(),
    })
}

/// First boost trial whose interval deviation exceeded
/// [`WITNESS_THRESHOLD`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub epsilon: Sign,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub x: Vec<f64>,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// `max |sum (x'^i)^2 - sum (x^i)^2|` under rotations.
    pub rotation_distance: f64,
    /// `max |x'^{N^2} - x^{N^2}|` under rotations.
    pub rotation_time: f64,
    /// `max |interval(x') - interval(x)|` under boosts of both signs.
    pub boost_interval: f64,
    pub witness: Option<Witness>,
}

fn uniform<T: Real>(rng: &mut ChaCha8Rng, len: usize, half_width: f64) -> Vec<T> {
    (0..len).map(|_| T::lit(rng.gen_range(-half_width..=half_width))).collect()
}

fn to_f64<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.as_f64()).collect()
}

/// Random-trial evaluation of the rotation invariants and the boost interval.
///
/// Components of `x` and angles are uniform in `[-1, 1]`, rapidities in
/// `[-2, 2]`. Each trial draws `theta`, `phi` and `x` in that order from a
/// ChaCha8 stream seeded with `seed`, so results are reproducible.
pub fn invariance_report<T: Real>(g: &SpacetimeGenerators<T>, trials: usize, seed: u64) -> Result<InvarianceReport> {
    let tol = T::default_tolerance();
    let dim = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = InvarianceReport {
        n: g.n,
        trials,
        seed,
        rotation_distance: 0.0,
        rotation_time: 0.0,
        boost_interval: 0.0,
        witness: None,
    };
    let loose = Tolerance {
        exponential: f64::INFINITY,
        ..tol
    };
    for trial in 0..trials {
        let theta: Vec<T> = uniform(&mut rng, dim - 1, 1.0);
        let phi: Vec<T> = uniform(&mut rng, dim - 1, 2.0);
        let x = SpacetimeVector { x: uniform(&mut rng, dim, 1.0) };

        let rotated = apply(&rotation(g, &theta)?, &x, &loose)?;
        let distance = (rotated.spatial_norm_sqr() - x.spatial_norm_sqr()).abs().as_f64();
        let time = (rotated.time() - x.time()).abs().as_f64();
        report.rotation_distance = report.rotation_distance.max(distance);
        report.rotation_time = report.rotation_time.max(time);

        for eps in Sign::both() {
            let boosted = apply(&boost(g, &phi, eps)?, &x, &loose)?;
            let deviation = (boosted.interval() - x.interval()).abs().as_f64();
            report.boost_interval = report.boost_interval.max(deviation);
            if deviation > WITNESS_THRESHOLD && report.witness.is_none() {
                report.witness = Some(Witness {
                    trial,
                    epsilon: eps,
                    theta: to_f64(&theta),
                    phi: to_f64(&phi),
                    x: to_f64(&x.x),
                    deviation,
                });
            }
        }
    }
    Ok(report)
}
