//! The `N^2`-dimensional spacetime representation built from `f` and `d`.
//!
//! Rotation generators are `(J^i)_{mu nu} = i f^{mu i nu}` and boost
//! generators are `(K^(eps) i)_{mu nu} = -eps i d^{mu i nu}`, for the
//! traceless indices `i`. Rows and columns run over all `N^2` indices; the
//! last one is time.
//!
//! The similarity map `S` reads the fundamental generators into rows:
//! `S^lambda_sigma = (J^sigma)_{m n}` with `lambda = N (m - 1) + n`, the same
//! double-index ordering as [`Matrix::kron`].

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::basis::{anti_rep, basis_change, canonical_basis, BasisKind, GeneratorBasis};
use crate::error::{Error, Result};
use crate::numkernel::{commutator, determinant, inverse, Matrix, Tolerance};
use crate::reps::{tensor_generators, Rep};
use crate::scalar::{c, ci, Real};
use crate::tensors::{StructureTensors, Tensor3};

/// The sign `eps` selecting the boost generators and the active momentum
/// block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i32) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub(crate) fn real<T: Real>(self) -> T {
        T::lit(f64::from(self.value()))
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Rotation and boost generators of the spacetime representation.
#[derive(Clone, Debug)]
pub struct SpacetimeGenerators<T: Real> {
    pub n: usize,
    /// `J^i` for the `N^2 - 1` traceless indices.
    pub j: Vec<Matrix<T>>,
    pub k_plus: Vec<Matrix<T>>,
    pub k_minus: Vec<Matrix<T>>,
    /// `(J^{N^2})_{mu nu} = i f^{mu N^2 nu}`.
    pub j_time: Matrix<T>,
    pub k_plus_time: Matrix<T>,
    pub k_minus_time: Matrix<T>,
}

impl<T: Real> SpacetimeGenerators<T> {
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn k(&self, eps: Sign) -> &[Matrix<T>] {
        match eps {
            Sign::Plus => &self.k_plus,
            Sign::Minus => &self.k_minus,
        }
    }

    pub fn k_time(&self, eps: Sign) -> &Matrix<T> {
        match eps {
            Sign::Plus => &self.k_plus_time,
            Sign::Minus => &self.k_minus_time,
        }
    }

    /// `J^mu` for every `mu` in `0..N^2`, time last.
    pub fn j_all(&self) -> Vec<Matrix<T>> {
        let mut all = self.j.clone();
        all.push(self.j_time.clone());
        all
    }

    pub fn k_all(&self, eps: Sign) -> Vec<Matrix<T>> {
        let mut all = self.k(eps).to_vec();
        all.push(self.k_time(eps).clone());
        all
    }
}

fn slice<T: Real>(x: &Tensor3<T>, i: usize, weight: Complex<T>) -> Matrix<T> {
    let dim = x.dim();
    Matrix::from_fn(dim, dim, |mu, nu| weight * x.get(mu, i, nu))
}

/// Fills the spacetime generators entrywise from the structure tensors.
pub fn spacetime_generators<T: Real>(t: &StructureTensors<T>) -> SpacetimeGenerators<T> {
    let dim = t.dim();
    let i = ci::<T>();
    let j: Vec<_> = (0..dim).map(|a| slice(t.f(), a, i)).collect();
    let k_plus: Vec<_> = (0..dim).map(|a| slice(t.d(), a, -i)).collect();
    let k_minus: Vec<_> = (0..dim).map(|a| slice(t.d(), a, i)).collect();
    let split = |mut v: Vec<Matrix<T>>| {
        let last = v.pop().expect("dim >= 4");
        (v, last)
    };
    let (j, j_time) = split(j);
    let (k_plus, k_plus_time) = split(k_plus);
    let (k_minus, k_minus_time) = split(k_minus);
    SpacetimeGenerators {
        n: t.n(),
        j,
        k_plus,
        k_minus,
        j_time,
        k_plus_time,
        k_minus_time,
    }
}

/// Max violations of the three Lorentz families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LorentzViolations {
    /// `[J^i, J^j] = i f^{ijk} J^k`
    pub jj: f64,
    /// `[J^i, K^j] = i f^{ijk} K^k`
    pub jk: f64,
    /// `[K^i, K^j] = -i f^{ijk} J^k`
    pub kk: f64,
}

impl LorentzViolations {
    pub fn max(&self) -> f64 {
        self.jj.max(self.jk).max(self.kk)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Lorentz violations for arbitrary generator lists; `f` supplies the
/// structure constants over the first `j.len()` indices.
pub fn lorentz_violations<T: Real>(j: &[Matrix<T>], k: &[Matrix<T>], f: &Tensor3<T>) -> LorentzViolations {
    let count = j.len();
    assert_eq!(count, k.len(), "one boost per rotation");
    let i = ci::<T>();
    let mut out = LorentzViolations::default();
    for a in 0..count {
        for b in 0..count {
            let w: Vec<_> = (0..count).map(|s| i * f.get(a, b, s)).collect();
            let fj = Matrix::linear_combination(&w, j).expect("non-empty");
            let fk = Matrix::linear_combination(&w, k).expect("non-empty");
            let jj = commutator(&j[a], &j[b]).expect("square generators");
            let jk = commutator(&j[a], &k[b]).expect("square generators");
            let kk = commutator(&k[a], &k[b]).expect("square generators");
            out.jj = out.jj.max(jj.max_abs_diff(&fj));
            out.jk = out.jk.max(jk.max_abs_diff(&fk));
            out.kk = out.kk.max(kk.max_abs_diff(&-&fj));
        }
    }
    out
}

/// Lorentz relations written purely in terms of `f` and `d`:
///
/// - `f^{mu i l} f^{l j nu} - f^{mu j l} f^{l i nu} = f^{ijk} f^{mu k nu}`
/// - `f^{mu i l} d^{l j nu} - d^{mu j l} f^{l i nu} = f^{ijk} d^{mu k nu}`
/// - `d^{mu i l} d^{l j nu} - d^{mu j l} d^{l i nu} = -f^{ijk} f^{mu k nu}`
///
/// These do not depend on `eps`.
pub fn lorentz_tensor_violations<T: Real>(t: &StructureTensors<T>) -> LorentzViolations {
    let (f, d) = (t.f(), t.d());
    let dim = t.dim();
    let count = dim - 1;
    let mut out = LorentzViolations::default();
    for a in 0..count {
        for b in 0..count {
            for mu in 0..dim {
                for nu in 0..dim {
                    let (mut ff, mut fd, mut dd) = (T::zero(), T::zero(), T::zero());
                    for l in 0..dim {
                        ff += f.get(mu, a, l) * f.get(l, b, nu) - f.get(mu, b, l) * f.get(l, a, nu);
                        fd += f.get(mu, a, l) * d.get(l, b, nu) - d.get(mu, b, l) * f.get(l, a, nu);
                        dd += d.get(mu, a, l) * d.get(l, b, nu) - d.get(mu, b, l) * d.get(l, a, nu);
                    }
                    let (mut rf, mut rd) = (T::zero(), T::zero());
                    for k in 0..count {
                        let w = f.get(a, b, k);
                        rf += w * f.get(mu, k, nu);
                        rd += w * d.get(mu, k, nu);
                    }
                    out.jj = out.jj.max((ff - rf).abs().as_f64());
                    out.jk = out.jk.max((fd - rd).abs().as_f64());
                    out.kk = out.kk.max((dd + rf).abs().as_f64());
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzReport {
    pub plus: LorentzViolations,
    pub minus: LorentzViolations,
    pub tensor_form: LorentzViolations,
}

impl LorentzReport {
    pub fn max(&self) -> f64 {
        self.plus.max().max(self.minus.max()).max(self.tensor_form.max())
    }
}

/// Checks the Lorentz relations for both signs, plus the tensor-only form.
pub fn lorentz_check<T: Real>(g: &SpacetimeGenerators<T>, t: &StructureTensors<T>) -> LorentzReport {
    LorentzReport {
        plus: lorentz_violations(&g.j, &g.k_plus, t.f()),
        minus: lorentz_violations(&g.j, &g.k_minus, t.f()),
        tensor_form: lorentz_tensor_violations(t),
    }
}

/// Generators of the combined `(A, B)` representation:
/// `J = J_A (x) 1 + 1 (x) J_B` and `K = -i (J_A (x) 1 - 1 (x) J_B)`, with the
/// double index `dim(B) * a + b`.
#[derive(Clone, Debug)]
pub struct PairRep<T: Real> {
    pub a_rep: Rep<T>,
    pub b_rep: Rep<T>,
    pub j_ab: Vec<Matrix<T>>,
    pub k_ab: Vec<Matrix<T>>,
}

impl<T: Real> PairRep<T> {
    pub fn dim(&self) -> usize {
        self.a_rep.dim * self.b_rep.dim
    }

    pub fn n(&self) -> usize {
        self.a_rep.n()
    }
}

pub fn pair_rep<T: Real>(a: &Rep<T>, b: &Rep<T>) -> Result<PairRep<T>> {
    if a.gens.len() != b.gens.len() || a.n() != b.n() {
        return Err(Error::RepMismatch(format!(
            "pairing {} generators (N={}) with {} generators (N={})",
            a.gens.len(),
            a.n(),
            b.gens.len(),
            b.n()
        )));
    }
    let j_ab = tensor_generators(&a.gens, &b.gens);
    let negated: Vec<_> = b.gens.iter().map(|m| -m).collect();
    let minus_i = -ci::<T>();
    let k_ab = tensor_generators(&a.gens, &negated)
        .into_iter()
        .map(|m| m.scale(minus_i))
        .collect();
    Ok(PairRep {
        a_rep: a.clone(),
        b_rep: b.clone(),
        j_ab,
        k_ab,
    })
}

/// The similarity transform between spacetime and `(N, N-bar)`.
#[derive(Clone, Debug)]
pub struct SimilarityMap<T: Real> {
    pub s: Matrix<T>,
    pub s_inverse: Matrix<T>,
}

fn canonical_s<T: Real>(b: &GeneratorBasis<T>) -> Matrix<T> {
    let n = b.n();
    let mats = b.mats();
    Matrix::from_fn(n * n, n * n, |lambda, sigma| mats[sigma][(lambda / n, lambda % n)])
}

/// Builds `S` for a basis. Custom bases use `S' = S R^-1`, where `R` takes
/// the canonical basis to `b`.
pub fn similarity_s<T: Real>(b: &GeneratorBasis<T>, tol: &Tolerance) -> Result<SimilarityMap<T>> {
    let s = match b.kind() {
        BasisKind::Canonical => canonical_s(b),
        BasisKind::Custom => {
            let canonical = canonical_basis::<T>(b.n())?;
            let r = basis_change(&canonical, b.mats(), tol)?;
            &canonical_s(&canonical) * r.inverse_matrix()
        }
    };
    let s_inverse = inverse(&s)?;
    Ok(SimilarityMap { s, s_inverse })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    /// `max |S J^mu - (J^mu (x) 1 + 1 (x) J-bar^mu) S|` over all `mu`.
    pub rotation: f64,
    /// `max |S K^mu + eps i (J^mu (x) 1 - 1 (x) J-bar^mu) S|`, `eps = +1`.
    pub boost_plus: f64,
    pub boost_minus: f64,
    /// `max |S S^-1 - 1|`.
    pub inverse: f64,
}

impl SimilarityReport {
    pub fn max(&self) -> f64 {
        self.rotation.max(self.boost_plus).max(self.boost_minus).max(self.inverse)
    }
}

/// Residuals of both intertwining identities, for every `mu` including time.
pub fn verify_similarity<T: Real>(
    s: &SimilarityMap<T>,
    g: &SpacetimeGenerators<T>,
    b: &GeneratorBasis<T>,
) -> Result<SimilarityReport> {
    let dim = g.dim();
    if b.len() != dim || s.s.rows() != dim {
        return Err(Error::DimensionMismatch(format!(
            "similarity of size {} for spacetime of dimension {dim} and basis of {}",
            s.s.rows(),
            b.len()
        )));
    }
    let fundamental = b.mats();
    let anti = anti_rep(fundamental);
    let sum = tensor_generators(fundamental, &anti);
    let negated: Vec<_> = anti.iter().map(|m| -m).collect();
    let difference = tensor_generators(fundamental, &negated);
    let j = g.j_all();
    let mut report = SimilarityReport {
        rotation: 0.0,
        boost_plus: 0.0,
        boost_minus: 0.0,
        inverse: (&s.s * &s.s_inverse).max_abs_diff(&Matrix::identity(dim)),
    };
    for mu in 0..dim {
        let lhs = &s.s * &j[mu];
        let rhs = &sum[mu] * &s.s;
        report.rotation = report.rotation.max(lhs.max_abs_diff(&rhs));
        let diff_s = &difference[mu] * &s.s;
        for eps in Sign::both() {
            let lhs = &s.s * &g.k_all(eps)[mu];
            let rhs = diff_s.scale(-ci::<T>() * eps.real::<T>());
            let r = lhs.max_abs_diff(&rhs);
            match eps {
                Sign::Plus => report.boost_plus = report.boost_plus.max(r),
                Sign::Minus => report.boost_minus = report.boost_minus.max(r),
            }
        }
    }
    Ok(report)
}

/// Numeric `det(S)` against `i^{N(N-1)/2} / 2^{N^2/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetReport {
    pub n: usize,
    pub determinant: [f64; 2],
    pub predicted: [f64; 2],
    pub relative_error: f64,
}

impl DetReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.relative_error <= tol
    }
}

pub fn predicted_det_s<T: Real>(n: usize) -> Complex<T> {
    let phase = match (n * (n - 1) / 2) % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    };
    phase * T::lit(2.0).powf(-T::lit((n * n) as f64) / T::lit(2.0))
}

/// Evaluates the determinant conjecture for the canonical `S`.
pub fn det_report<T: Real>(n: usize) -> Result<DetReport> {
    let b = canonical_basis::<T>(n)?;
    let det = determinant(&canonical_s(&b))?;
    let predicted = predicted_det_s::<T>(n);
    let relative_error = ((det - predicted).norm() / predicted.norm()).as_f64();
    Ok(DetReport {
        n,
        determinant: [det.re.as_f64(), det.im.as_f64()],
        predicted: [predicted.re.as_f64(), predicted.im.as_f64()],
        relative_error,
    })
}

/// Largest deviation from hermitian rotations and purely imaginary symmetric
/// boosts, the shape expected for canonical bases.
pub fn canonical_shape_violation<T: Real>(g: &SpacetimeGenerators<T>) -> f64 {
    let mut worst = 0.0_f64;
    for m in &g.j {
        worst = worst.max(m.hermiticity_violation());
    }
    for m in g.k_plus.iter().chain(&g.k_minus) {
        worst = worst.max(m.max_abs_diff(&m.transpose()));
        worst = worst.max(m.as_slice().iter().fold(0.0, |w, z| w.max(z.re.abs().as_f64())));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::GeneratorBasis;
    use crate::reps::{realize, RepSpec};
    use crate::tensors::compute_tensors;

    fn setup(n: usize) -> (StructureTensors<f64>, SpacetimeGenerators<f64>) {
        let t = compute_tensors(&canonical_basis(n).unwrap(), &Tolerance::default()).unwrap();
        let g = spacetime_generators(&t);
        (t, g)
    }

    fn rep(t: &StructureTensors<f64>, s: &str) -> Rep<f64> {
        realize(&RepSpec::parse(t.n(), s).unwrap(), t).unwrap()
    }

    #[test]
    fn su2_rotation_about_axis_one() {
        let (_, g) = setup(2);
        let j1 = &g.j[0];
        for mu in 0..4 {
            for nu in 0..4 {
                let want = match (mu, nu) {
                    (1, 2) => c(0.0, -1.0),
                    (2, 1) => c(0.0, 1.0),
                    _ => c(0.0, 0.0),
                };
                assert!((j1[(mu, nu)] - want).norm() < 1e-15, "({mu},{nu})");
            }
        }
    }

    #[test]
    fn su2_boost_along_axis_one() {
        let (_, g) = setup(2);
        let k1 = &g.k_plus[0];
        assert!((k1[(0, 3)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((k1[(3, 0)] - c(0.0, -1.0)).norm() < 1e-15);
        let others = k1.as_slice().iter().filter(|z| z.norm() > 1e-15).count();
        assert_eq!(others, 2);
    }

    #[test]
    fn minus_boosts_are_negated() {
        for n in 2..=4 {
            let (_, g) = setup(n);
            for (p, m) in g.k_plus.iter().zip(&g.k_minus) {
                assert_eq!(p, &-m);
            }
        }
    }

    #[test]
    fn lorentz_relations_hold() {
        for n in 2..=4 {
            let (t, g) = setup(n);
            let report = lorentz_check(&g, &t);
            assert!(report.max() < 1e-12, "n={n}: {report:?}");
        }
    }

    #[test]
    fn corrupted_boost_is_flagged() {
        let (t, mut g) = setup(3);
        let (r, c0) = g.k_plus[3]
            .as_slice()
            .iter()
            .position(|z| z.norm() > 0.1)
            .map(|p| (p / 9, p % 9))
            .unwrap();
        g.k_plus[3][(r, c0)] = c(0.0, 0.0);
        let report = lorentz_check(&g, &t);
        assert!(report.plus.kk > 1e-3);
        assert!(report.minus.max() < 1e-12);
    }

    #[test]
    fn canonical_generators_have_expected_shape() {
        for n in 2..=4 {
            let (_, g) = setup(n);
            assert!(canonical_shape_violation(&g) < 1e-14);
        }
    }

    #[test]
    fn pair_reps_satisfy_lorentz_relations() {
        for n in 2..=3 {
            let (t, _) = setup(n);
            for (a, b) in [("F", "A"), ("F", "F"), ("1", "F"), ("sym2(F)", "A")] {
                let p = pair_rep(&rep(&t, a), &rep(&t, b)).unwrap();
                assert_eq!(p.dim(), p.j_ab[0].rows());
                let v = lorentz_violations(&p.j_ab, &p.k_ab, t.f());
                assert!(v.max() < 1e-12, "{a},{b} at n={n}: {v:?}");
            }
        }
    }

    #[test]
    fn trivial_left_factor_collapses() {
        let (t, _) = setup(3);
        let b = rep(&t, "F");
        let p = pair_rep(&rep(&t, "1"), &b).unwrap();
        for i in 0..b.gens.len() {
            assert!(p.j_ab[i].max_abs_diff(&b.gens[i]) < 1e-15);
            assert!(p.k_ab[i].max_abs_diff(&b.gens[i].scale(ci())) < 1e-15);
        }
    }

    #[test]
    fn pair_rep_rejects_mismatched_n() {
        let (t2, _) = setup(2);
        let (t3, _) = setup(3);
        assert!(pair_rep(&rep(&t2, "F"), &rep(&t3, "F")).is_err());
    }

    #[test]
    fn su2_similarity_matrix() {
        let b = canonical_basis::<f64>(2).unwrap();
        let s = similarity_s(&b, &Tolerance::default()).unwrap();
        let h = 0.5;
        let want = Matrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0), c(h, 0.0)],
            vec![c(h, 0.0), c(0.0, -h), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(h, 0.0), c(0.0, h), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-h, 0.0), c(h, 0.0)],
        ])
        .unwrap();
        assert!(s.s.max_abs_diff(&want) < 1e-15);
        let det = determinant(&s.s).unwrap();
        assert!((det - c(0.0, 0.25)).norm() < 1e-15);
    }

    #[test]
    fn similarity_holds_for_canonical_bases() {
        for n in 2..=4 {
            let (t, g) = setup(n);
            let s = similarity_s(t.basis(), &Tolerance::default()).unwrap();
            let report = verify_similarity(&s, &g, t.basis()).unwrap();
            assert!(report.max() < 1e-12, "n={n}: {report:?}");
        }
    }

    #[test]
    fn similarity_holds_for_scaled_custom_basis() {
        let tol = Tolerance::default();
        let canonical = canonical_basis::<f64>(2).unwrap();
        let m = canonical.mats();
        let custom = GeneratorBasis::custom(
            2,
            vec![m[0].scale_real(2.0), m[1].clone(), m[2].clone(), m[3].scale_real(3.0)],
            &tol,
        )
        .unwrap();
        let t = compute_tensors(&custom, &tol).unwrap();
        let g = spacetime_generators(&t);
        let s = similarity_s(&custom, &tol).unwrap();
        let report = verify_similarity(&s, &g, &custom).unwrap();
        assert!(report.max() < 1e-10, "{report:?}");
    }

    #[test]
    fn det_conjecture_small_n() {
        for n in 2..=5 {
            let r = det_report::<f64>(n).unwrap();
            assert!(r.holds(1e-9), "{r:?}");
        }
    }

    #[test]
    fn predicted_det_phases() {
        assert!((predicted_det_s::<f64>(2) - c(0.0, 0.25)).norm() < 1e-16);
        assert!((predicted_det_s::<f64>(3) * 2f64.powf(4.5) - c(0.0, -1.0)).norm() < 1e-15);
    }
}
