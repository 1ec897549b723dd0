//! Structure tensors `f` and `d` of a generator basis:
//! `[J^mu, J^nu] = i f^{mu nu sigma} J^sigma` and
//! `{J^mu, J^nu} = d^{mu nu sigma} J^sigma`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{transform_basis, trace_product, BasisChange, BasisKind, GeneratorBasis};
use crate::error::{Error, Result};
use crate::numkernel::{anticommutator, commutator, Matrix, Tolerance};
use crate::scalar::{ci, creal, Real};

/// Largest `N` for which the Jacobi-type identities are checked exhaustively.
pub const JACOBI_EXHAUSTIVE_MAX_N: usize = 6;
/// Number of sampled index tuples beyond [`JACOBI_EXHAUSTIVE_MAX_N`].
pub const JACOBI_SAMPLES: usize = 1_000_000;
const JACOBI_SEED: u64 = 0x05ee_d0fa_c0b1;

/// Dense real rank-3 tensor with every index ranging over `0..dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<T: Real> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> Tensor3<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim * dim],
        }
    }

    pub fn from_vec(dim: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != dim * dim * dim {
            return Err(Error::LengthMismatch {
                what: "tensor entries",
                expected: dim * dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> T {
        self.data[(a * self.dim + b) * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: T) {
        self.data[(a * self.dim + b) * self.dim + c] = v;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((*a - *b).abs().as_f64()))
    }

    /// `max |t_abc - sign * t_{perm(abc)}|` for the swap of the given slots.
    fn swap_violation(&self, slots: (usize, usize), sign: T) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let mut idx = [a, b, c];
                    idx.swap(slots.0, slots.1);
                    let v = self.get(a, b, c) - sign * self.get(idx[0], idx[1], idx[2]);
                    worst = worst.max(v.abs().as_f64());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryFlag {
    pub holds: bool,
    pub max_violation: f64,
}

impl SymmetryFlag {
    fn new(max_violation: f64, tol: f64) -> Self {
        Self {
            holds: max_violation <= tol,
            max_violation,
        }
    }
}

/// Observed index symmetries. Nothing here is assumed: for custom bases `f`
/// need not be antisymmetric in its last two indices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub f_antisym_12: SymmetryFlag,
    pub f_antisym_23: SymmetryFlag,
    pub d_sym_12: SymmetryFlag,
    pub d_sym_23: SymmetryFlag,
}

impl SymmetryReport {
    pub fn compute<T: Real>(f: &Tensor3<T>, d: &Tensor3<T>, tol: f64) -> Self {
        let minus = -T::one();
        Self {
            f_antisym_12: SymmetryFlag::new(f.swap_violation((0, 1), minus), tol),
            f_antisym_23: SymmetryFlag::new(f.swap_violation((1, 2), minus), tol),
            d_sym_12: SymmetryFlag::new(d.swap_violation((0, 1), T::one()), tol),
            d_sym_23: SymmetryFlag::new(d.swap_violation((1, 2), T::one()), tol),
        }
    }

    /// Antisymmetry in two adjacent slot pairs generates all permutations.
    pub fn f_totally_antisymmetric(&self) -> bool {
        self.f_antisym_12.holds && self.f_antisym_23.holds
    }

    pub fn d_totally_symmetric(&self) -> bool {
        self.d_sym_12.holds && self.d_sym_23.holds
    }
}

/// Residues discarded while extracting real coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtractionStats {
    /// Largest imaginary part of an extracted coefficient.
    pub max_imaginary_residue: f64,
    /// Largest `|f^{mu nu N^2}|` before it was set to zero.
    pub trace_column_residue: f64,
}

#[derive(Clone, Debug)]
pub struct StructureTensors<T: Real> {
    n: usize,
    f: Tensor3<T>,
    d: Tensor3<T>,
    symmetry: SymmetryReport,
    extraction: ExtractionStats,
    basis: GeneratorBasis<T>,
}

impl<T: Real> StructureTensors<T> {
    /// Assembles tensors from raw parts (e.g. a deserialized document).
    ///
    /// No consistency with `basis` is enforced; the verification suites are
    /// what detect a mismatch.
    pub fn from_parts(basis: GeneratorBasis<T>, f: Tensor3<T>, d: Tensor3<T>, tol: &Tolerance) -> Result<Self> {
        let dim = basis.len();
        if f.dim() != dim || d.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "tensors of dimension {}/{} for a basis of {dim} elements",
                f.dim(),
                d.dim()
            )));
        }
        let symmetry = SymmetryReport::compute(&f, &d, tol.algebraic);
        Ok(Self {
            n: basis.n(),
            f,
            d,
            symmetry,
            extraction: ExtractionStats::default(),
            basis,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `N^2`, the range of every tensor index.
    #[inline]
    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn f(&self) -> &Tensor3<T> {
        &self.f
    }

    pub fn d(&self) -> &Tensor3<T> {
        &self.d
    }

    /// Mutable access, for fault-injection fixtures.
    pub fn f_mut(&mut self) -> &mut Tensor3<T> {
        &mut self.f
    }

    pub fn d_mut(&mut self) -> &mut Tensor3<T> {
        &mut self.d
    }

    pub fn symmetry(&self) -> &SymmetryReport {
        &self.symmetry
    }

    /// Recomputes the symmetry report after manual edits.
    pub fn refresh_symmetry(&mut self, tol: &Tolerance) {
        self.symmetry = SymmetryReport::compute(&self.f, &self.d, tol.algebraic);
    }

    pub fn extraction(&self) -> &ExtractionStats {
        &self.extraction
    }

    /// The basis the tensors were computed from.
    pub fn basis(&self) -> &GeneratorBasis<T> {
        &self.basis
    }

    /// Largest `|f^{mu nu N^2}|`.
    pub fn trace_column_max(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for mu in 0..dim {
            for nu in 0..dim {
                worst = worst.max(self.f.get(mu, nu, dim - 1).abs().as_f64());
            }
        }
        worst
    }

    /// Largest Frobenius residuals of the commutator and anticommutator
    /// expansions against the stored basis.
    pub fn reconstruction_residuals(&self) -> (f64, f64) {
        let mats = self.basis.mats();
        let dim = self.dim();
        let (mut comm, mut anti) = (0.0_f64, 0.0_f64);
        for mu in 0..dim {
            for nu in 0..dim {
                let lhs_c = commutator(&mats[mu], &mats[nu]).expect("basis matrices share a size");
                let lhs_a = anticommutator(&mats[mu], &mats[nu]).expect("basis matrices share a size");
                let fw: Vec<_> = (0..dim).map(|s| ci::<T>() * self.f.get(mu, nu, s)).collect();
                let dw: Vec<_> = (0..dim).map(|s| creal(self.d.get(mu, nu, s))).collect();
                let rhs_c = Matrix::linear_combination(&fw, mats).expect("non-empty");
                let rhs_a = Matrix::linear_combination(&dw, mats).expect("non-empty");
                comm = comm.max((&lhs_c - &rhs_c).frobenius_norm().as_f64());
                anti = anti.max((&lhs_a - &rhs_a).frobenius_norm().as_f64());
            }
        }
        (comm, anti)
    }
}

/// Computes `f` and `d` for a basis.
///
/// Canonical bases use the trace formulas `f = -2i tr([J,J] J)` and
/// `d = 2 tr({J,J} J)`; custom bases expand through the Gram system. The
/// imaginary part of every coefficient is checked against the algebraic
/// tolerance and dropped, and `f^{mu nu N^2}`, which vanishes because
/// commutators are traceless, is checked and then set to exactly zero.
pub fn compute_tensors<T: Real>(b: &GeneratorBasis<T>, tol: &Tolerance) -> Result<StructureTensors<T>> {
    let dim = b.len();
    let mats = b.mats();
    let mut f = Tensor3::zeros(dim);
    let mut d = Tensor3::zeros(dim);
    let mut stats = ExtractionStats::default();
    let minus_i = -ci::<T>();
    let two = T::lit(2.0);

    for mu in 0..dim {
        for nu in 0..dim {
            let comm = commutator(&mats[mu], &mats[nu])?;
            let anti = anticommutator(&mats[mu], &mats[nu])?;
            let (fc, dc): (Vec<_>, Vec<_>) = match b.kind() {
                BasisKind::Canonical => mats
                    .iter()
                    .map(|j| (minus_i * trace_product(&comm, j) * two, trace_product(&anti, j) * two))
                    .unzip(),
                BasisKind::Custom => (
                    b.coefficients(&comm.scale(minus_i)),
                    b.coefficients(&anti),
                ),
            };
            for (lambda, (fz, dz)) in fc.iter().zip(&dc).enumerate() {
                let residue = fz.im.abs().max(dz.im.abs()).as_f64();
                stats.max_imaginary_residue = stats.max_imaginary_residue.max(residue);
                f.set(mu, nu, lambda, fz.re);
                d.set(mu, nu, lambda, dz.re);
            }
            let column = f.get(mu, nu, dim - 1).abs().as_f64();
            stats.trace_column_residue = stats.trace_column_residue.max(column);
            f.set(mu, nu, dim - 1, T::zero());
        }
    }
    if stats.max_imaginary_residue > tol.algebraic {
        return Err(Error::NonRealResidue(stats.max_imaginary_residue));
    }
    if stats.trace_column_residue > tol.algebraic {
        return Err(Error::TracePattern(format!(
            "f^(mu nu N^2) residue {:.3e}",
            stats.trace_column_residue
        )));
    }
    let symmetry = SymmetryReport::compute(&f, &d, tol.algebraic);
    Ok(StructureTensors {
        n: b.n(),
        f,
        d,
        symmetry,
        extraction: stats,
        basis: b.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiReport {
    /// Max violation of `f^{lms} f^{snt} + f^{mns} f^{slt} + f^{nls} f^{smt} = 0`.
    pub ff: f64,
    /// Max violation of `d^{lms} f^{snt} + d^{mns} f^{slt} + d^{nls} f^{smt} = 0`.
    pub df: f64,
    pub tuples_checked: u64,
    pub exhaustive: bool,
    /// Seed of the sampler when the check was not exhaustive.
    pub sample_seed: Option<u64>,
}

/// `out[(a*dim + b)*dim*dim + c*dim + e] = sum_s x^{abs} f^{sce}`.
fn contract_with_f<T: Real>(x: &Tensor3<T>, f: &Tensor3<T>) -> Vec<T> {
    let dim = x.dim();
    let d2 = dim * dim;
    let mut out = vec![T::zero(); d2 * d2];
    for ab in 0..d2 {
        let row = &mut out[ab * d2..(ab + 1) * d2];
        for s in 0..dim {
            let w = x.as_slice()[ab * dim + s];
            if w == T::zero() {
                continue;
            }
            let f_row = &f.as_slice()[s * d2..(s + 1) * d2];
            for (o, &v) in row.iter_mut().zip(f_row) {
                *o += w * v;
            }
        }
    }
    out
}

fn cyclic_sum<T: Real>(x: &Tensor3<T>, f: &Tensor3<T>, l: usize, m: usize, n: usize, t: usize) -> T {
    let dim = f.dim();
    (0..dim)
        .map(|s| x.get(l, m, s) * f.get(s, n, t) + x.get(m, n, s) * f.get(s, l, t) + x.get(n, l, s) * f.get(s, m, t))
        .sum()
}

/// Checks both Jacobi-type identities over all index tuples for
/// `N <= JACOBI_EXHAUSTIVE_MAX_N`, otherwise over uniformly sampled tuples.
pub fn jacobi_checks<T: Real>(t: &StructureTensors<T>) -> JacobiReport {
    let dim = t.dim();
    if t.n() > JACOBI_EXHAUSTIVE_MAX_N {
        let mut rng = ChaCha8Rng::seed_from_u64(JACOBI_SEED);
        let (mut ff, mut df) = (0.0_f64, 0.0_f64);
        for _ in 0..JACOBI_SAMPLES {
            let (l, m, n, tt) = (
                rng.gen_range(0..dim),
                rng.gen_range(0..dim),
                rng.gen_range(0..dim),
                rng.gen_range(0..dim),
            );
            ff = ff.max(cyclic_sum(t.f(), t.f(), l, m, n, tt).abs().as_f64());
            df = df.max(cyclic_sum(t.d(), t.f(), l, m, n, tt).abs().as_f64());
        }
        return JacobiReport {
            ff,
            df,
            tuples_checked: JACOBI_SAMPLES as u64,
            exhaustive: false,
            sample_seed: Some(JACOBI_SEED),
        };
    }

    let ffc = contract_with_f(t.f(), t.f());
    let dfc = contract_with_f(t.d(), t.f());
    let idx = |a: usize, b: usize, c: usize, e: usize| ((a * dim + b) * dim + c) * dim + e;
    let (mut ff, mut df) = (0.0_f64, 0.0_f64);
    for l in 0..dim {
        for m in 0..dim {
            for n in 0..dim {
                for tt in 0..dim {
                    let a = ffc[idx(l, m, n, tt)] + ffc[idx(m, n, l, tt)] + ffc[idx(n, l, m, tt)];
                    let b = dfc[idx(l, m, n, tt)] + dfc[idx(m, n, l, tt)] + dfc[idx(n, l, m, tt)];
                    ff = ff.max(a.abs().as_f64());
                    df = df.max(b.abs().as_f64());
                }
            }
        }
    }
    JacobiReport {
        ff,
        df,
        tuples_checked: (dim as u64).pow(4),
        exhaustive: true,
        sample_seed: None,
    }
}

/// Tensors of the primed basis `J'^mu = R^mu_sigma J^sigma`:
/// `f'^{mu nu lambda} = R^mu_sigma R^nu_rho f^{sigma rho tau} (R^-1)^tau_lambda`,
/// and likewise for `d`.
pub fn primed_tensors<T: Real>(
    t: &StructureTensors<T>,
    r: &BasisChange<T>,
    tol: &Tolerance,
) -> Result<StructureTensors<T>> {
    let dim = t.dim();
    if r.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "basis change of dimension {} for tensors of dimension {dim}",
            r.dim()
        )));
    }
    let transform = |x: &Tensor3<T>| {
        let mut first = Tensor3::<T>::zeros(dim);
        for mu in 0..dim {
            for s in 0..dim {
                let w = r.r(mu, s);
                if w == T::zero() {
                    continue;
                }
                for rho in 0..dim {
                    for tau in 0..dim {
                        let v = first.get(mu, rho, tau) + w * x.get(s, rho, tau);
                        first.set(mu, rho, tau, v);
                    }
                }
            }
        }
        let mut second = Tensor3::<T>::zeros(dim);
        for mu in 0..dim {
            for nu in 0..dim {
                for rho in 0..dim {
                    let w = r.r(nu, rho);
                    if w == T::zero() {
                        continue;
                    }
                    for tau in 0..dim {
                        let v = second.get(mu, nu, tau) + w * first.get(mu, rho, tau);
                        second.set(mu, nu, tau, v);
                    }
                }
            }
        }
        let mut out = Tensor3::zeros(dim);
        for mu in 0..dim {
            for nu in 0..dim {
                for lambda in 0..dim {
                    let v: T = (0..dim).map(|tau| second.get(mu, nu, tau) * r.r_inverse(tau, lambda)).sum();
                    out.set(mu, nu, lambda, v);
                }
            }
        }
        out
    };
    let f = transform(t.f());
    let d = transform(t.d());
    let primed = GeneratorBasis::custom(t.n(), transform_basis(t.basis(), r), tol)?;
    let symmetry = SymmetryReport::compute(&f, &d, tol.algebraic);
    Ok(StructureTensors {
        n: t.n(),
        f,
        d,
        symmetry,
        extraction: *t.extraction(),
        basis: primed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{basis_change, canonical_basis};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
        match (i, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    }

    #[test]
    fn su2_f_is_levi_civita() {
        let t = compute_tensors(&canonical_basis::<f64>(2).unwrap(), &tol()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let expected = if i < 3 && j < 3 && k < 3 { levi_civita(i, j, k) } else { 0.0 };
                    assert!((t.f().get(i, j, k) - expected).abs() < 1e-15, "f{i}{j}{k}");
                }
            }
        }
    }

    #[test]
    fn su2_d_values() {
        let t = compute_tensors(&canonical_basis::<f64>(2).unwrap(), &tol()).unwrap();
        let d = t.d();
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                assert!((d.get(i, j, 3) - delta).abs() < 1e-15);
                assert!((d.get(i, 3, j) - delta).abs() < 1e-15);
                assert!((d.get(3, i, j) - delta).abs() < 1e-15);
                for k in 0..3 {
                    assert!(d.get(i, j, k).abs() < 1e-15);
                }
            }
        }
        assert!((d.get(3, 3, 3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn canonical_symmetries_up_to_six() {
        for n in 2..=6 {
            let t = compute_tensors(&canonical_basis::<f64>(n).unwrap(), &tol()).unwrap();
            let s = t.symmetry();
            assert!(s.f_antisym_12.max_violation < 1e-12 && s.f_antisym_23.max_violation < 1e-12);
            assert!(s.d_sym_12.max_violation < 1e-12 && s.d_sym_23.max_violation < 1e-12);
            assert_eq!(t.trace_column_max(), 0.0);
            let (c, a) = t.reconstruction_residuals();
            assert!(c < 1e-13 && a < 1e-13, "n={n}: {c} {a}");
        }
    }

    #[test]
    fn jacobi_small_cases() {
        for n in 2..=3 {
            let t = compute_tensors(&canonical_basis::<f64>(n).unwrap(), &tol()).unwrap();
            let report = jacobi_checks(&t);
            assert!(report.exhaustive);
            assert_eq!(report.tuples_checked, (n as u64 * n as u64).pow(4));
            assert!(report.ff < 1e-12 && report.df < 1e-12);
        }
    }

    #[test]
    fn jacobi_detects_corruption() {
        let mut t = compute_tensors(&canonical_basis::<f64>(2).unwrap(), &tol()).unwrap();
        t.f_mut().set(0, 1, 2, 1.1);
        assert!(jacobi_checks(&t).ff > 0.01);
    }

    #[test]
    fn jacobi_by_direct_cyclic_sums() {
        let t = compute_tensors(&canonical_basis::<f64>(3).unwrap(), &tol()).unwrap();
        let dim = t.dim();
        let mut worst = 0.0_f64;
        for l in 0..dim {
            for m in 0..dim {
                for n in 0..dim {
                    for tt in 0..dim {
                        worst = worst.max(cyclic_sum(t.f(), t.f(), l, m, n, tt).abs());
                    }
                }
            }
        }
        assert!((worst - jacobi_checks(&t).ff).abs() < 1e-13);
    }

    #[test]
    fn primed_identity_and_scaling() {
        let b = canonical_basis::<f64>(2).unwrap();
        let t = compute_tensors(&b, &tol()).unwrap();
        let id = basis_change(&b, b.mats(), &tol()).unwrap();
        assert!(primed_tensors(&t, &id, &tol()).unwrap().f().max_abs_diff(t.f()) < 1e-15);

        let scaled = vec![
            b.mats()[0].scale_real(2.0),
            b.mats()[1].clone(),
            b.mats()[2].clone(),
            b.mats()[3].scale_real(3.0),
        ];
        let r = basis_change(&b, &scaled, &tol()).unwrap();
        let via_r = primed_tensors(&t, &r, &tol()).unwrap();
        let direct = compute_tensors(&GeneratorBasis::custom(2, scaled, &tol()).unwrap(), &tol()).unwrap();
        assert!(via_r.f().max_abs_diff(direct.f()) < 1e-10);
        assert!(via_r.d().max_abs_diff(direct.d()) < 1e-10);
        // [2J1, J2] = 2i J3
        assert!((via_r.f().get(0, 1, 2) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn primed_swap() {
        let b = canonical_basis::<f64>(2).unwrap();
        let t = compute_tensors(&b, &tol()).unwrap();
        let mut swapped = b.mats().to_vec();
        swapped.swap(0, 1);
        let r = basis_change(&b, &swapped, &tol()).unwrap();
        let via_r = primed_tensors(&t, &r, &tol()).unwrap();
        assert!((via_r.f().get(0, 1, 2) + 1.0).abs() < 1e-15);
        assert!((via_r.f().get(1, 0, 2) - 1.0).abs() < 1e-15);
        let direct = compute_tensors(&GeneratorBasis::custom(2, swapped, &tol()).unwrap(), &tol()).unwrap();
        assert!(via_r.f().max_abs_diff(direct.f()) < 1e-14);
    }

    #[test]
    fn custom_basis_breaks_23_antisymmetry() {
        // J'^4 = J^4 + J^3 has nonzero trace but does not commute with J^1.
        let b = canonical_basis::<f64>(2).unwrap();
        let mut mats = b.mats().to_vec();
        mats[3] = &mats[3] + &mats[2];
        let t = compute_tensors(&GeneratorBasis::custom(2, mats, &tol()).unwrap(), &tol()).unwrap();
        assert!(t.symmetry().f_antisym_12.holds);
        assert!(!t.symmetry().f_antisym_23.holds);
        assert_eq!(t.trace_column_max(), 0.0);
        let (c, a) = t.reconstruction_residuals();
        assert!(c < 1e-13 && a < 1e-13);
    }
}
