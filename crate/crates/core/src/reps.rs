//! Constructive catalog of SU(N) representations.
//!
//! Representations are described by a small expression language:
//!
//! ```text
//! expr   := term ('+' term)*          direct sum
//! term   := factor ('*' factor)*      tensor product
//! factor := 'F' | 'A' | '1'           fundamental, anti-fundamental, trivial
//!         | 'sym2(' expr ')'          symmetric square
//!         | 'antisym2(' expr ')'      antisymmetric square
//!         | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Tensor products flatten their double index as
//! `dim(B) * (a - 1) + b`, the same convention used for spacetime indices.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numkernel::{commutator, nullspace_basis, Matrix, Tolerance};
use crate::scalar::{ci, czero, Real};
use crate::tensors::StructureTensors;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepExpr {
    Fundamental,
    AntiFundamental,
    Trivial,
    Tensor(Box<RepExpr>, Box<RepExpr>),
    DirectSum(Box<RepExpr>, Box<RepExpr>),
    Sym2(Box<RepExpr>),
    AntiSym2(Box<RepExpr>),
}

impl RepExpr {
    pub fn tensor(a: RepExpr, b: RepExpr) -> Self {
        RepExpr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn direct_sum(a: RepExpr, b: RepExpr) -> Self {
        RepExpr::DirectSum(Box::new(a), Box::new(b))
    }

    pub fn sym2(a: RepExpr) -> Self {
        RepExpr::Sym2(Box::new(a))
    }

    pub fn antisym2(a: RepExpr) -> Self {
        RepExpr::AntiSym2(Box::new(a))
    }

    pub fn parse(input: &str) -> Result<Self> {
        let mut p = Parser {
            src: input.as_bytes(),
            pos: 0,
        };
        let expr = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(expr)
    }

    /// Dimension for a given `n`, without realizing any matrices.
    pub fn dim(&self, n: usize) -> usize {
        match self {
            RepExpr::Fundamental | RepExpr::AntiFundamental => n,
            RepExpr::Trivial => 1,
            RepExpr::Tensor(a, b) => a.dim(n) * b.dim(n),
            RepExpr::DirectSum(a, b) => a.dim(n) + b.dim(n),
            RepExpr::Sym2(a) => {
                let d = a.dim(n);
                d * (d + 1) / 2
            }
            RepExpr::AntiSym2(a) => {
                let d = a.dim(n);
                d * (d - 1) / 2
            }
        }
    }
}

impl fmt::Display for RepExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepExpr::Fundamental => write!(f, "F"),
            RepExpr::AntiFundamental => write!(f, "A"),
            RepExpr::Trivial => write!(f, "1"),
            RepExpr::Tensor(a, b) => {
                write_factor(f, a)?;
                write!(f, "*")?;
                write_factor(f, b)
            }
            RepExpr::DirectSum(a, b) => {
                write!(f, "{a}+")?;
                match **b {
                    RepExpr::DirectSum(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            RepExpr::Sym2(a) => write!(f, "sym2({a})"),
            RepExpr::AntiSym2(a) => write!(f, "antisym2({a})"),
        }
    }
}

fn write_factor(f: &mut fmt::Formatter<'_>, e: &RepExpr) -> fmt::Result {
    match e {
        RepExpr::DirectSum(..) | RepExpr::Tensor(..) => write!(f, "({e})"),
        _ => write!(f, "{e}"),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn expr(&mut self) -> Result<RepExpr> {
        let mut lhs = self.term()?;
        while self.eat("+") {
            lhs = RepExpr::direct_sum(lhs, self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<RepExpr> {
        let mut lhs = self.factor()?;
        while self.eat("*") {
            lhs = RepExpr::tensor(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<RepExpr> {
        if self.eat("antisym2") {
            self.expect("(")?;
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(RepExpr::antisym2(inner));
        }
        if self.eat("sym2") {
            self.expect("(")?;
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(RepExpr::sym2(inner));
        }
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        if self.eat("F") {
            return Ok(RepExpr::Fundamental);
        }
        if self.eat("A") {
            return Ok(RepExpr::AntiFundamental);
        }
        if self.eat("1") {
            return Ok(RepExpr::Trivial);
        }
        Err(self.error("expected F, A, 1, sym2(..), antisym2(..) or '('"))
    }
}

/// A representation expression bound to a group parameter `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSpec {
    pub n: usize,
    pub expr: RepExpr,
}

impl RepSpec {
    pub fn new(n: usize, expr: RepExpr) -> Self {
        Self { n, expr }
    }

    pub fn parse(n: usize, input: &str) -> Result<Self> {
        Ok(Self::new(n, RepExpr::parse(input)?))
    }

    pub fn fundamental(n: usize) -> Self {
        Self::new(n, RepExpr::Fundamental)
    }

    pub fn anti_fundamental(n: usize) -> Self {
        Self::new(n, RepExpr::AntiFundamental)
    }

    pub fn trivial(n: usize) -> Self {
        Self::new(n, RepExpr::Trivial)
    }
}

impl fmt::Display for RepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

/// Realized representation: `N^2 - 1` generator matrices of size `dim`.
#[derive(Clone, Debug)]
pub struct Rep<T: Real> {
    pub dim: usize,
    pub gens: Vec<Matrix<T>>,
    pub spec: RepSpec,
}

impl<T: Real> Rep<T> {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Rep with the same generators conjugated by `m`: `m^-1 J m`.
    pub fn conjugated(&self, m: &Matrix<T>, m_inverse: &Matrix<T>) -> Self {
        Self {
            dim: self.dim,
            gens: self.gens.iter().map(|g| &(m_inverse * g) * m).collect(),
            spec: self.spec.clone(),
        }
    }
}

/// Realizes `spec` using the traceless generators of the basis behind `t`.
pub fn realize<T: Real>(spec: &RepSpec, t: &StructureTensors<T>) -> Result<Rep<T>> {
    if spec.n != t.n() {
        return Err(Error::RepMismatch(format!(
            "rep over N={} realized with tensors for N={}",
            spec.n,
            t.n()
        )));
    }
    let fundamental = t.basis().traceless().to_vec();
    let gens = realize_expr(&spec.expr, &fundamental)?;
    Ok(Rep {
        dim: gens[0].rows(),
        gens,
        spec: spec.clone(),
    })
}

fn realize_expr<T: Real>(expr: &RepExpr, fundamental: &[Matrix<T>]) -> Result<Vec<Matrix<T>>> {
    Ok(match expr {
        RepExpr::Fundamental => fundamental.to_vec(),
        RepExpr::AntiFundamental => crate::basis::anti_rep(fundamental),
        RepExpr::Trivial => vec![Matrix::zeros(1, 1); fundamental.len()],
        RepExpr::Tensor(a, b) => {
            let ga = realize_expr(a, fundamental)?;
            let gb = realize_expr(b, fundamental)?;
            tensor_generators(&ga, &gb)
        }
        RepExpr::DirectSum(a, b) => {
            let ga = realize_expr(a, fundamental)?;
            let gb = realize_expr(b, fundamental)?;
            ga.iter().zip(&gb).map(|(x, y)| x.block_diag(y)).collect()
        }
        RepExpr::Sym2(a) => symmetrized_square(&realize_expr(a, fundamental)?, true)?,
        RepExpr::AntiSym2(a) => symmetrized_square(&realize_expr(a, fundamental)?, false)?,
    })
}

/// `J_A (x) 1 + 1 (x) J_B` for each generator.
pub fn tensor_generators<T: Real>(a: &[Matrix<T>], b: &[Matrix<T>]) -> Vec<Matrix<T>> {
    let ia = Matrix::identity(a[0].rows());
    let ib = Matrix::identity(b[0].rows());
    a.iter()
        .zip(b)
        .map(|(x, y)| &x.kron(&ib) + &ia.kron(y))
        .collect()
}

/// Restricts the tensor square to the (anti)symmetric subspace.
///
/// The projector `(1 +- SWAP)/2` commutes with the tensor-square generators;
/// an orthonormal basis `Q` of its image is built by Gram-Schmidt over the
/// projector's columns and the generators become `Q^dagger J Q`.
fn symmetrized_square<T: Real>(gens: &[Matrix<T>], symmetric: bool) -> Result<Vec<Matrix<T>>> {
    let d = gens[0].rows();
    let sign = if symmetric { T::one() } else { -T::one() };
    let half = T::lit(0.5);
    let projector = Matrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let mut v = if r == c { half } else { T::zero() };
        if c == j * d + i {
            v += sign * half;
        }
        Complex::new(v, T::zero())
    });
    let q = gram_schmidt(&(0..d * d).map(|c| projector.column(c)).collect::<Vec<_>>());
    if q.is_empty() {
        return Err(Error::RepMismatch(
            "antisymmetric square of a one-dimensional representation is empty".into(),
        ));
    }
    let q = Matrix::from_columns(&q)?;
    let qh = q.adjoint();
    Ok(tensor_generators(gens, gens)
        .iter()
        .map(|g| &(&qh * g) * &q)
        .collect())
}

/// Modified Gram-Schmidt with re-orthogonalization; drops dependent vectors.
fn gram_schmidt<T: Real>(vectors: &[Vec<Complex<T>>]) -> Vec<Vec<Complex<T>>> {
    let cutoff = T::lit(1e-10);
    let mut basis: Vec<Vec<Complex<T>>> = Vec::new();
    for v in vectors {
        let scale = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if scale == T::zero() {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.iter().zip(&w).fold(czero::<T>(), |acc, (x, y)| acc + x.conj() * y);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm > cutoff * scale {
            basis.push(w.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

/// Max violation of `[J^i, J^j] = i f^{ijk} J^k` over the traceless sector.
pub fn commutation_violation<T: Real>(gens: &[Matrix<T>], t: &StructureTensors<T>) -> f64 {
    let count = gens.len();
    let mut worst = 0.0_f64;
    for i in 0..count {
        for j in 0..count {
            let lhs = commutator(&gens[i], &gens[j]).expect("generators share a size");
            let w: Vec<_> = (0..count).map(|k| ci::<T>() * t.f().get(i, j, k)).collect();
            let rhs = Matrix::linear_combination(&w, gens).expect("non-empty");
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    worst
}

/// Stacked linear system for `X` (`dim(target) x dim(source)`, row-major
/// unknowns) with `J_target X - X J_source = 0` for every generator.
pub(crate) fn intertwiner_system<T: Real>(source: &[Matrix<T>], target: &[Matrix<T>]) -> Matrix<T> {
    let (ds, dt) = (source[0].rows(), target[0].rows());
    let unknowns = ds * dt;
    let mut system = Matrix::zeros(source.len() * unknowns, unknowns);
    for (i, (js, jt)) in source.iter().zip(target).enumerate() {
        for p in 0..dt {
            for c in 0..ds {
                let row = i * unknowns + p * ds + c;
                for q in 0..dt {
                    system[(row, q * ds + c)] += jt[(p, q)];
                }
                for k in 0..ds {
                    system[(row, p * ds + k)] -= js[(k, c)];
                }
            }
        }
    }
    system
}

/// Orthonormal basis of the linear maps `X: source -> target` that commute
/// with every generator.
pub fn intertwiner_space<T: Real>(
    source: &[Matrix<T>],
    target: &[Matrix<T>],
    tol: &Tolerance,
) -> Result<Vec<Matrix<T>>> {
    if source.len() != target.len() {
        return Err(Error::RepMismatch(format!(
            "{} versus {} generators",
            source.len(),
            target.len()
        )));
    }
    let (ds, dt) = (source[0].rows(), target[0].rows());
    let system = intertwiner_system(source, target);
    nullspace_basis(&system, tol)
        .into_iter()
        .map(|x| Matrix::new(dt, ds, x))
        .collect()
}

/// Dimension of the space of intertwiners from `c` into `product`; the
/// multiplicity of `c` inside `product` when `c` is irreducible.
pub fn multiplicity_oracle<T: Real>(c: &Rep<T>, product: &Rep<T>, tol: &Tolerance) -> Result<usize> {
    if c.n() != product.n() {
        return Err(Error::RepMismatch(format!(
            "reps over N={} and N={}",
            c.n(),
            product.n()
        )));
    }
    Ok(intertwiner_space(&c.gens, &product.gens, tol)?.len())
}
