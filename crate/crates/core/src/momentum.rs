//! Momentum matrices on `(A,B) + (C,D)` as Clebsch-Gordan intertwiners.
//!
//! In the tilde frame `P~^lambda = S^lambda_mu P^mu`, with
//! `lambda = N lambda_1 + lambda_0` (0-based), the Poincare relations for the
//! upper-right block `P+ : (C,D) -> (A,B)` split into two independent
//! equivariance conditions. For `eps = +1`:
//!
//! - `C -> N (x) A`, with `N` on `lambda_1`,
//! - `D -> N-bar (x) B`, with `N-bar` on `lambda_0`;
//!
//! for `eps = -1` the slots trade partners (`C -> N-bar (x) A`,
//! `D -> N (x) B`). The lower-left block `P- : (A,B) -> (C,D)` is the same
//! with the roles of the two pairs exchanged. Solutions are tensor products
//! of one intertwiner from each condition:
//!
//! `P~^{lambda_1 lambda_0}_{ab, cd} = X1[(l, a), c] X2[(l', b), d]`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::basis::anti_rep;
use crate::error::{Error, Result};
use crate::numkernel::{commutator, matrix_exponential, nullspace_basis, phase_fix, Matrix, Tolerance};
use crate::reps::{intertwiner_space, intertwiner_system, realize, tensor_generators, RepSpec};
use crate::scalar::{ci, cone, Real};
use crate::spacetime::{pair_rep, similarity_s, PairRep, Sign};
use crate::tensors::StructureTensors;

/// Which off-diagonal block carries the momentum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    /// Upper right, `(C,D) -> (A,B)`.
    Plus,
    /// Lower left, `(A,B) -> (C,D)`.
    Minus,
}

impl Which {
    pub fn as_str(self) -> &'static str {
        match self {
            Which::Plus => "plus",
            Which::Minus => "minus",
        }
    }
}

/// Block-diagonal Lorentz generators on `(A,B) + (C,D)`.
#[derive(Clone, Debug)]
pub struct BlockRep<T: Real> {
    pub ab: PairRep<T>,
    pub cd: PairRep<T>,
    pub j_full: Vec<Matrix<T>>,
    pub k_full: Vec<Matrix<T>>,
}

impl<T: Real> BlockRep<T> {
    pub fn n(&self) -> usize {
        self.ab.n()
    }

    pub fn dim_ab(&self) -> usize {
        self.ab.dim()
    }

    pub fn dim_cd(&self) -> usize {
        self.cd.dim()
    }

    pub fn dim(&self) -> usize {
        self.dim_ab() + self.dim_cd()
    }
}

pub fn build_block_rep<T: Real>(ab: PairRep<T>, cd: PairRep<T>) -> Result<BlockRep<T>> {
    if ab.n() != cd.n() || ab.j_ab.len() != cd.j_ab.len() {
        return Err(Error::RepMismatch(format!(
            "(A,B) over N={} and (C,D) over N={}",
            ab.n(),
            cd.n()
        )));
    }
    let j_full = ab.j_ab.iter().zip(&cd.j_ab).map(|(x, y)| x.block_diag(y)).collect();
    let k_full = ab.k_ab.iter().zip(&cd.k_ab).map(|(x, y)| x.block_diag(y)).collect();
    Ok(BlockRep { ab, cd, j_full, k_full })
}

/// Convenience: realizes the four rep expressions and builds the block rep.
pub fn block_rep_from_specs<T: Real>(t: &StructureTensors<T>, specs: [&str; 4]) -> Result<BlockRep<T>> {
    let n = t.n();
    let mut reps = Vec::with_capacity(4);
    for s in specs {
        reps.push(realize(&RepSpec::parse(n, s)?, t)?);
    }
    let ab = pair_rep(&reps[0], &reps[1])?;
    let cd = pair_rep(&reps[2], &reps[3])?;
    build_block_rep(ab, cd)
}

/// Solution space of one off-diagonal block.
#[derive(Clone, Debug)]
pub struct BlockSolution<T: Real> {
    /// Orthonormal tilde-frame solutions; each is `N^2` slices `P~^lambda`.
    pub tilde: Vec<Vec<Matrix<T>>>,
    /// The same solutions in the physical frame, `P^mu = (S^-1)^mu_lambda P~^lambda`.
    pub physical: Vec<Vec<Matrix<T>>>,
    /// Dimensions of the two factor intertwiner spaces.
    pub factor_dims: (usize, usize),
    /// Largest residual of the stacked tilde-frame equations over the basis.
    pub residual: f64,
}

impl<T: Real> BlockSolution<T> {
    pub fn dim(&self) -> usize {
        self.tilde.len()
    }
}

#[derive(Clone, Debug)]
pub struct MomentumSolution<T: Real> {
    pub n: usize,
    pub epsilon: Sign,
    pub dim_ab: usize,
    pub dim_cd: usize,
    pub plus: BlockSolution<T>,
    pub minus: BlockSolution<T>,
    pub s_inverse: Matrix<T>,
}

impl<T: Real> MomentumSolution<T> {
    pub fn solspace_dim_plus(&self) -> usize {
        self.plus.dim()
    }

    pub fn solspace_dim_minus(&self) -> usize {
        self.minus.dim()
    }

    pub fn block(&self, which: Which) -> &BlockSolution<T> {
        match which {
            Which::Plus => &self.plus,
            Which::Minus => &self.minus,
        }
    }
}

/// `1 (x) .. (x) m (x) .. (x) 1` with `m` in position `slot`.
fn embed<T: Real>(m: &Matrix<T>, slot: usize, dims: &[usize]) -> Matrix<T> {
    let mut out = Matrix::identity(1);
    for (s, &d) in dims.iter().enumerate() {
        out = if s == slot { out.kron(m) } else { out.kron(&Matrix::identity(d)) };
    }
    out
}

/// Which `lambda` slot (0: `lambda_1`, carrying `N`; 1: `lambda_0`, carrying
/// `N-bar`) pairs with the first and with the second factor of the pairs.
fn slot_order(eps: Sign) -> (usize, usize) {
    match eps {
        Sign::Plus => (0, 1),
        Sign::Minus => (1, 0),
    }
}

/// Source and target generators of one equivariance family; targets act on
/// `N (x) N-bar (x) target_a (x) target_b`.
struct Family<T: Real> {
    sources: Vec<Matrix<T>>,
    targets: Vec<Matrix<T>>,
}

struct Equations<T: Real> {
    families: [Family<T>; 2],
}

fn equations<T: Real>(source: &PairRep<T>, target: &PairRep<T>, eps: Sign, fund: &[Matrix<T>]) -> Equations<T> {
    let n = fund[0].rows();
    let anti = anti_rep(fund);
    let (ta, tb) = (target.a_rep.dim, target.b_rep.dim);
    let (sa, sb) = (source.a_rep.dim, source.b_rep.dim);
    let dims = [n, n, ta, tb];
    let (first_slot, second_slot) = slot_order(eps);
    let lambda_gens = [fund, anti.as_slice()];
    let family = |slot: usize, rep_slot: usize, t_gens: &[Matrix<T>], s_gens: &[Matrix<T>], left: bool| {
        let targets: Vec<_> = (0..fund.len())
            .map(|i| &embed(&lambda_gens[slot][i], slot, &dims) + &embed(&t_gens[i], rep_slot, &dims))
            .collect();
        let sources: Vec<_> = s_gens
            .iter()
            .map(|g| {
                if left {
                    g.kron(&Matrix::identity(sb))
                } else {
                    Matrix::identity(sa).kron(g)
                }
            })
            .collect();
        Family { sources, targets }
    };
    Equations {
        families: [
            family(first_slot, 2, &target.a_rep.gens, &source.a_rep.gens, true),
            family(second_slot, 3, &target.b_rep.gens, &source.b_rep.gens, false),
        ],
    }
}

/// The literal homogeneous system for one block: both equivariance families
/// over every generator, stacked, in the unknowns `P~^lambda_{t s}` ordered
/// `(lambda * dim(target) + t) * dim(source) + s`.
pub fn stacked_system<T: Real>(
    source: &PairRep<T>,
    target: &PairRep<T>,
    eps: Sign,
    fund: &[Matrix<T>],
) -> Matrix<T> {
    let eq = equations(source, target, eps, fund);
    let first = intertwiner_system(&eq.families[0].sources, &eq.families[0].targets);
    let second = intertwiner_system(&eq.families[1].sources, &eq.families[1].targets);
    let mut out = Matrix::zeros(first.rows() + second.rows(), first.cols());
    out.set_block(0, 0, &first);
    out.set_block(first.rows(), 0, &second);
    out
}

fn stacked_residual<T: Real>(eq: &Equations<T>, slices: &[Matrix<T>]) -> f64 {
    let (dt, ds) = (slices[0].rows(), slices[0].cols());
    let tall = Matrix::from_fn(slices.len() * dt, ds, |r, c| slices[r / dt][(r % dt, c)]);
    let mut worst = 0.0_f64;
    for family in &eq.families {
        for (s, t) in family.sources.iter().zip(&family.targets) {
            worst = worst.max((t * &tall).max_abs_diff(&(&tall * s)));
        }
    }
    worst
}

fn split_slices<T: Real>(v: &[Complex<T>], count: usize, rows: usize, cols: usize) -> Vec<Matrix<T>> {
    v.chunks(rows * cols)
        .take(count)
        .map(|chunk| Matrix::new(rows, cols, chunk.to_vec()).expect("chunk has rows * cols entries"))
        .collect()
}

fn to_physical<T: Real>(tilde: &[Matrix<T>], s_inverse: &Matrix<T>) -> Vec<Matrix<T>> {
    (0..tilde.len())
        .map(|mu| Matrix::linear_combination(s_inverse.row(mu), tilde).expect("non-empty"))
        .collect()
}

fn solve_block_factored<T: Real>(
    source: &PairRep<T>,
    target: &PairRep<T>,
    eps: Sign,
    fund: &[Matrix<T>],
    s_inverse: &Matrix<T>,
    tol: &Tolerance,
) -> Result<BlockSolution<T>> {
    let eq = equations(source, target, eps, fund);
    let n = fund[0].rows();
    let anti = anti_rep(fund);
    let lambda_gens = [fund, anti.as_slice()];
    let (first_slot, second_slot) = slot_order(eps);
    let x1s = intertwiner_space(
        &source.a_rep.gens,
        &tensor_generators(lambda_gens[first_slot], &target.a_rep.gens),
        tol,
    )?;
    let x2s = intertwiner_space(
        &source.b_rep.gens,
        &tensor_generators(lambda_gens[second_slot], &target.b_rep.gens),
        tol,
    )?;
    let (ta, tb) = (target.a_rep.dim, target.b_rep.dim);
    let (sb, dt, ds) = (source.b_rep.dim, target.dim(), source.dim());

    let mut tilde = Vec::with_capacity(x1s.len() * x2s.len());
    for x1 in &x1s {
        for x2 in &x2s {
            let mut flat = Vec::with_capacity(n * n * dt * ds);
            for l1 in 0..n {
                for l0 in 0..n {
                    let slots = [l1, l0];
                    let (p1, p2) = (slots[first_slot], slots[second_slot]);
                    for r in 0..dt {
                        let (a, b) = (r / tb, r % tb);
                        for col in 0..ds {
                            let (c, d) = (col / sb, col % sb);
                            flat.push(x1[(p1 * ta + a, c)] * x2[(p2 * tb + b, d)]);
                        }
                    }
                }
            }
            phase_fix(&mut flat);
            tilde.push(split_slices(&flat, n * n, dt, ds));
        }
    }
    let residual = tilde.iter().fold(0.0_f64, |w, s| w.max(stacked_residual(&eq, s)));
    let physical = tilde.iter().map(|s| to_physical(s, s_inverse)).collect();
    Ok(BlockSolution {
        tilde,
        physical,
        factor_dims: (x1s.len(), x2s.len()),
        residual,
    })
}

fn solve_block_stacked<T: Real>(
    source: &PairRep<T>,
    target: &PairRep<T>,
    eps: Sign,
    fund: &[Matrix<T>],
    s_inverse: &Matrix<T>,
    tol: &Tolerance,
) -> BlockSolution<T> {
    let eq = equations(source, target, eps, fund);
    let n = fund[0].rows();
    let (dt, ds) = (target.dim(), source.dim());
    let system = stacked_system(source, target, eps, fund);
    let tilde: Vec<_> = nullspace_basis(&system, tol)
        .iter()
        .map(|v| split_slices(v, n * n, dt, ds))
        .collect();
    let residual = tilde.iter().fold(0.0_f64, |w, s| w.max(stacked_residual(&eq, s)));
    let physical = tilde.iter().map(|s| to_physical(s, s_inverse)).collect();
    BlockSolution {
        tilde,
        physical,
        factor_dims: (0, 0),
        residual,
    }
}

fn check_inputs<T: Real>(block: &BlockRep<T>, t: &StructureTensors<T>) -> Result<()> {
    if block.n() != t.n() || block.j_full.len() + 1 != t.dim() {
        return Err(Error::RepMismatch(format!(
            "block rep over N={} solved with tensors for N={}",
            block.n(),
            t.n()
        )));
    }
    Ok(())
}

/// Solves both off-diagonal blocks by factoring each into two intertwiner
/// problems; every product solution is checked against the stacked system.
pub fn solve_intertwiners<T: Real>(
    block: &BlockRep<T>,
    eps: Sign,
    t: &StructureTensors<T>,
    tol: &Tolerance,
) -> Result<MomentumSolution<T>> {
    check_inputs(block, t)?;
    let fund = t.basis().traceless();
    let s_inverse = similarity_s(t.basis(), tol)?.s_inverse;
    let plus = solve_block_factored(&block.cd, &block.ab, eps, fund, &s_inverse, tol)?;
    let minus = solve_block_factored(&block.ab, &block.cd, eps, fund, &s_inverse, tol)?;
    Ok(MomentumSolution {
        n: t.n(),
        epsilon: eps,
        dim_ab: block.dim_ab(),
        dim_cd: block.dim_cd(),
        plus,
        minus,
        s_inverse,
    })
}

/// Solves both blocks through the full stacked system with one dense
/// nullspace call each. Practical only for small blocks.
pub fn solve_intertwiners_stacked<T: Real>(
    block: &BlockRep<T>,
    eps: Sign,
    t: &StructureTensors<T>,
    tol: &Tolerance,
) -> Result<MomentumSolution<T>> {
    check_inputs(block, t)?;
    let fund = t.basis().traceless();
    let s_inverse = similarity_s(t.basis(), tol)?.s_inverse;
    let plus = solve_block_stacked(&block.cd, &block.ab, eps, fund, &s_inverse, tol);
    let minus = solve_block_stacked(&block.ab, &block.cd, eps, fund, &s_inverse, tol);
    Ok(MomentumSolution {
        n: t.n(),
        epsilon: eps,
        dim_ab: block.dim_ab(),
        dim_cd: block.dim_cd(),
        plus,
        minus,
        s_inverse,
    })
}

/// Momentum matrices on the full space, one per spacetime index.
#[derive(Clone, Debug)]
pub struct AssembledMomentum<T: Real> {
    pub which: Which,
    pub scale: Complex<T>,
    pub coeffs: Vec<Complex<T>>,
    pub p: Vec<Matrix<T>>,
}

/// Places `scale * sum_k coeffs[k] * solution_k` in the chosen block; every
/// other block is zero. An empty `coeffs` is accepted when the solution
/// space is one-dimensional.
pub fn assemble_momentum<T: Real>(
    sol: &MomentumSolution<T>,
    which: Which,
    scale: Complex<T>,
    coeffs: &[Complex<T>],
) -> Result<AssembledMomentum<T>> {
    let block = sol.block(which);
    if block.dim() == 0 {
        return Err(Error::EmptySolutionSpace(which.as_str()));
    }
    let coeffs = if coeffs.is_empty() && block.dim() == 1 {
        vec![cone()]
    } else {
        coeffs.to_vec()
    };
    if coeffs.len() != block.dim() {
        return Err(Error::LengthMismatch {
            what: "solution coefficients",
            expected: block.dim(),
            got: coeffs.len(),
        });
    }
    let weights: Vec<_> = coeffs.iter().map(|&w| w * scale).collect();
    let full = sol.dim_ab + sol.dim_cd;
    let (r0, c0) = match which {
        Which::Plus => (0, sol.dim_ab),
        Which::Minus => (sol.dim_ab, 0),
    };
    let p = (0..sol.n * sol.n)
        .map(|mu| {
            let slices: Vec<_> = block.physical.iter().map(|s| s[mu].clone()).collect();
            let value = Matrix::linear_combination(&weights, &slices).expect("non-empty");
            let mut m = Matrix::zeros(full, full);
            m.set_block(r0, c0, &value);
            m
        })
        .collect();
    Ok(AssembledMomentum {
        which,
        scale,
        coeffs,
        p,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PoincareViolations {
    /// `[P^mu, J^j] = i f^{mu j k} P^k`
    pub pj: f64,
    /// `[P^mu, K^j] = -eps i d^{mu j sigma} P^sigma`
    pub pk: f64,
    /// `[P^mu, P^nu] = 0`
    pub pp: f64,
}

impl PoincareViolations {
    pub fn max(&self) -> f64 {
        self.pj.max(self.pk).max(self.pp)
    }
}

/// Poincare violations for arbitrary generators and momenta.
pub fn poincare_violations<T: Real>(
    j: &[Matrix<T>],
    k: &[Matrix<T>],
    p: &[Matrix<T>],
    t: &StructureTensors<T>,
    eps: Sign,
) -> Result<PoincareViolations> {
    let dim = t.dim();
    if p.len() != dim || j.len() + 1 != dim || k.len() != j.len() {
        return Err(Error::LengthMismatch {
            what: "momentum matrices",
            expected: dim,
            got: p.len(),
        });
    }
    let size = j[0].rows();
    if p.iter().any(|m| m.rows() != size || m.cols() != size) {
        return Err(Error::DimensionMismatch(format!(
            "momenta must be {size}x{size} to match the generators"
        )));
    }
    let i = ci::<T>();
    let boost_weight = -i * eps.real::<T>();
    let mut out = PoincareViolations::default();
    for mu in 0..dim {
        for a in 0..j.len() {
            let fw: Vec<_> = (0..dim).map(|s| i * t.f().get(mu, a, s)).collect();
            let dw: Vec<_> = (0..dim).map(|s| boost_weight * t.d().get(mu, a, s)).collect();
            let pj = commutator(&p[mu], &j[a])?;
            let pk = commutator(&p[mu], &k[a])?;
            let rf = Matrix::linear_combination(&fw, p).expect("non-empty");
            let rd = Matrix::linear_combination(&dw, p).expect("non-empty");
            out.pj = out.pj.max(pj.max_abs_diff(&rf));
            out.pk = out.pk.max(pk.max_abs_diff(&rd));
        }
        for nu in 0..dim {
            out.pp = out.pp.max(commutator(&p[mu], &p[nu])?.max_abs().as_f64());
        }
    }
    Ok(out)
}

pub fn poincare_check<T: Real>(
    block: &BlockRep<T>,
    p: &[Matrix<T>],
    t: &StructureTensors<T>,
    eps: Sign,
) -> Result<PoincareViolations> {
    poincare_violations(&block.j_full, &block.k_full, p, t, eps)
}

/// Closed-form `2N`-dimensional Poincare representation:
/// `J = diag(J, J)`, `K = diag(iJ, -iJ)`, and `P^mu = c J^mu` in the upper
/// right block for `eps = +1`, lower left for `eps = -1`.
#[derive(Clone, Debug)]
pub struct DoubledFixture<T: Real> {
    pub j: Vec<Matrix<T>>,
    pub k: Vec<Matrix<T>>,
    pub p: Vec<Matrix<T>>,
}

pub fn doubled_fixture<T: Real>(t: &StructureTensors<T>, eps: Sign, c: Complex<T>) -> DoubledFixture<T> {
    let n = t.n();
    let mats = t.basis().mats();
    let traceless = t.basis().traceless();
    let i = ci::<T>();
    let j = traceless.iter().map(|m| m.block_diag(m)).collect();
    let k = traceless.iter().map(|m| m.scale(i).block_diag(&m.scale(-i))).collect();
    let (r0, c0) = match eps {
        Sign::Plus => (0, n),
        Sign::Minus => (n, 0),
    };
    let p = mats
        .iter()
        .map(|m| {
            let mut out = Matrix::zeros(2 * n, 2 * n);
            out.set_block(r0, c0, &m.scale(c));
            out
        })
        .collect();
    DoubledFixture { j, k, p }
}

/// `exp(i a_mu P^mu)` for commuting momenta.
pub fn translation<T: Real>(p: &[Matrix<T>], a: &[T], tol: &Tolerance) -> Result<Matrix<T>> {
    if p.len() != a.len() || p.is_empty() {
        return Err(Error::LengthMismatch {
            what: "translation parameters",
            expected: p.len(),
            got: a.len(),
        });
    }
    let mut worst = 0.0_f64;
    for x in p {
        for y in p {
            worst = worst.max(commutator(x, y)?.max_abs().as_f64());
        }
    }
    if worst > tol.algebraic {
        return Err(Error::NonCommuting(worst));
    }
    matrix_exponential(&generator(p, a))
}

/// `i a_mu P^mu`.
pub fn generator<T: Real>(p: &[Matrix<T>], a: &[T]) -> Matrix<T> {
    let w: Vec<_> = a.iter().map(|&x| ci::<T>() * x).collect();
    Matrix::linear_combination(&w, p).expect("non-empty")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub n: usize,
    /// Solution-space dimensions on spacetime `+` spacetime, as
    /// `[eps = +1 plus, eps = +1 minus, eps = -1 plus, eps = -1 minus]`.
    pub spacetime_dims: [usize; 4],
    /// The same for the trivial rep `(1,1) + (1,1)`.
    pub trivial_dims: [usize; 4],
    /// Largest entry of any assembled momentum (zero when nothing solves).
    pub max_entry: f64,
}

impl VanishingReport {
    pub fn vanished(&self) -> bool {
        self.spacetime_dims.iter().chain(&self.trivial_dims).all(|&d| d == 0) && self.max_entry == 0.0
    }
}

/// Confirms that a single irreducible spacetime rep admits no momentum:
/// the solver on `(N, N-bar) + (N, N-bar)` returns empty solution spaces
/// for both signs and both blocks.
pub fn irrep_momentum_vanishing<T: Real>(t: &StructureTensors<T>, tol: &Tolerance) -> Result<VanishingReport> {
    let mut max_entry = 0.0_f64;
    let mut dims_for = |specs: [&str; 4]| -> Result<[usize; 4]> {
        let block = block_rep_from_specs(t, specs)?;
        let mut dims = [0; 4];
        for (e, eps) in Sign::both().into_iter().enumerate() {
            let sol = solve_intertwiners(&block, eps, t, tol)?;
            for (w, which) in [Which::Plus, Which::Minus].into_iter().enumerate() {
                let b = sol.block(which);
                dims[2 * e + w] = b.dim();
                if b.dim() > 0 {
                    let ones = vec![cone(); b.dim()];
                    let m = assemble_momentum(&sol, which, cone(), &ones)?;
                    for x in &m.p {
                        max_entry = max_entry.max(x.max_abs().as_f64());
                    }
                }
            }
        }
        Ok(dims)
    };
    let spacetime_dims = dims_for(["F", "A", "F", "A"])?;
    let trivial_dims = dims_for(["1", "1", "1", "1"])?;
    Ok(VanishingReport {
        n: t.n(),
        spacetime_dims,
        trivial_dims,
        max_entry,
    })
}

/// Zero momenta, useful as a baseline.
pub fn zero_momenta<T: Real>(n: usize, size: usize) -> Vec<Matrix<T>> {
    vec![Matrix::zeros(size, size); n * n]
}
