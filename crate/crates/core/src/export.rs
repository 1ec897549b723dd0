//! JSON and CSV documents.
//!
//! Complex numbers are `[re, im]` pairs, matrices are arrays of rows, and
//! rank-3 tensors are nested row-major arrays with an explicit `dims` field.
//! Every document carries an [`IndexMap`] describing the index conventions.

use std::fmt::Write as _;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::basis::{canonical_basis, BasisKind, GeneratorBasis, GeneratorLabel};
use crate::error::{Error, Result};
use crate::momentum::{AssembledMomentum, MomentumSolution, PoincareViolations, Which};
use crate::numkernel::{Matrix, Tolerance};
use crate::scalar::Real;
use crate::spacetime::{DetReport, Sign, SimilarityMap, SpacetimeGenerators};
use crate::tensors::{ExtractionStats, StructureTensors, SymmetryReport, Tensor3};

pub type ComplexJson = [f64; 2];
pub type MatrixJson = Vec<Vec<ComplexJson>>;

/// Index conventions shared by every document. All indices in documents
/// are 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexMap {
    /// Flattening of the `(N, N-bar)` double index.
    pub spacetime: String,
    /// Flattening of tensor-product indices.
    pub tensor_product: String,
    /// Position of the time component.
    pub time_index: usize,
}

impl IndexMap {
    pub fn for_n(n: usize) -> Self {
        Self {
            spacetime: "lambda = N * lambda_1 + lambda_0".into(),
            tensor_product: "(a, b) -> dim(B) * a + b".into(),
            time_index: n * n - 1,
        }
    }
}

pub fn complex_json<T: Real>(z: Complex<T>) -> ComplexJson {
    [z.re.as_f64(), z.im.as_f64()]
}

pub fn matrix_json<T: Real>(m: &Matrix<T>) -> MatrixJson {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|&z| complex_json(z)).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<Matrix<f64>> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Document("ragged matrix rows".into()));
    }
    Matrix::new(
        rows.len(),
        width,
        rows.iter().flatten().map(|&[re, im]| Complex::new(re, im)).collect(),
    )
}

fn tensor_json<T: Real>(t: &Tensor3<T>) -> Vec<Vec<Vec<f64>>> {
    let d = t.dim();
    (0..d)
        .map(|a| (0..d).map(|b| (0..d).map(|c| t.get(a, b, c).as_f64()).collect()).collect())
        .collect()
}

fn tensor_from_json(dim: usize, x: &[Vec<Vec<f64>>]) -> Result<Tensor3<f64>> {
    let ok = x.len() == dim && x.iter().all(|p| p.len() == dim && p.iter().all(|q| q.len() == dim));
    if !ok {
        return Err(Error::Document(format!("tensor is not {dim}x{dim}x{dim}")));
    }
    Tensor3::from_vec(dim, x.iter().flatten().flatten().copied().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub n: usize,
    pub kind: BasisKind,
    /// Generator labels; present for canonical bases only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    pub matrices: Vec<MatrixJson>,
    pub index_map: IndexMap,
}

pub fn basis_document<T: Real>(b: &GeneratorBasis<T>) -> BasisDocument {
    let labels = match b.kind() {
        BasisKind::Canonical => GeneratorLabel::all(b.n()).iter().map(ToString::to_string).collect(),
        BasisKind::Custom => Vec::new(),
    };
    BasisDocument {
        n: b.n(),
        kind: b.kind(),
        labels,
        matrices: b.mats().iter().map(matrix_json).collect(),
        index_map: IndexMap::for_n(b.n()),
    }
}

/// Rebuilds a basis. A document claiming `canonical` must match the
/// canonical basis entry for entry.
pub fn basis_from_document(doc: &BasisDocument, tol: &Tolerance) -> Result<GeneratorBasis<f64>> {
    if doc.n < 2 {
        return Err(Error::InvalidN(doc.n));
    }
    let mats = doc.matrices.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
    match doc.kind {
        BasisKind::Canonical => {
            let b = canonical_basis::<f64>(doc.n)?;
            if mats.len() != b.len() {
                return Err(Error::Document(format!(
                    "canonical basis for N={} needs {} matrices, found {}",
                    doc.n,
                    b.len(),
                    mats.len()
                )));
            }
            for (k, (got, want)) in mats.iter().zip(b.mats()).enumerate() {
                if got.rows() != doc.n || got.cols() != doc.n || got.max_abs_diff(want) > tol.algebraic {
                    return Err(Error::Document(format!(
                        "matrix {k} does not match the canonical basis"
                    )));
                }
            }
            Ok(b)
        }
        BasisKind::Custom => GeneratorBasis::custom(doc.n, mats, tol),
    }
}

pub fn basis_from_json(text: &str, tol: &Tolerance) -> Result<GeneratorBasis<f64>> {
    basis_from_document(&serde_json::from_str(text)?, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorsDocument {
    pub n: usize,
    pub dims: [usize; 3],
    pub f: Vec<Vec<Vec<f64>>>,
    pub d: Vec<Vec<Vec<f64>>>,
    pub symmetry: SymmetryReport,
    pub extraction: ExtractionStats,
    /// The basis the tensors belong to; the canonical basis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisDocument>,
    pub index_map: IndexMap,
}

pub fn tensors_document<T: Real>(t: &StructureTensors<T>, include_basis: bool) -> TensorsDocument {
    let dim = t.dim();
    TensorsDocument {
        n: t.n(),
        dims: [dim; 3],
        f: tensor_json(t.f()),
        d: tensor_json(t.d()),
        symmetry: *t.symmetry(),
        extraction: *t.extraction(),
        basis: include_basis.then(|| basis_document(t.basis())),
        index_map: IndexMap::for_n(t.n()),
    }
}

/// Rebuilds tensors exactly as stored. Nothing is recomputed, so a corrupted
/// document yields corrupted tensors for the verification suites to catch.
pub fn tensors_from_document(doc: &TensorsDocument, tol: &Tolerance) -> Result<StructureTensors<f64>> {
    let basis = match &doc.basis {
        Some(b) => basis_from_document(b, tol)?,
        None => canonical_basis(doc.n)?,
    };
    if basis.n() != doc.n {
        return Err(Error::Document(format!(
            "tensors for N={} with a basis for N={}",
            doc.n,
            basis.n()
        )));
    }
    let dim = doc.n * doc.n;
    if doc.dims != [dim; 3] {
        return Err(Error::Document(format!("dims {:?} for N={}", doc.dims, doc.n)));
    }
    let f = tensor_from_json(dim, &doc.f)?;
    let d = tensor_from_json(dim, &doc.d)?;
    StructureTensors::from_parts(basis, f, d, tol)
}

pub fn tensors_from_json(text: &str, tol: &Tolerance) -> Result<StructureTensors<f64>> {
    tensors_from_document(&serde_json::from_str(text)?, tol)
}

/// Nonzero tensor entries as CSV: `tensor,mu,nu,lambda,value`.
pub fn tensors_csv<T: Real>(t: &StructureTensors<T>) -> String {
    let mut out = String::from("tensor,mu,nu,lambda,value\n");
    let dim = t.dim();
    for (name, x) in [("f", t.f()), ("d", t.d())] {
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let v = x.get(a, b, c).as_f64();
                    if v != 0.0 {
                        writeln!(out, "{name},{a},{b},{c},{v:e}").expect("writing to a String");
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorsDocument {
    pub n: usize,
    pub j: Vec<MatrixJson>,
    pub k_plus: Vec<MatrixJson>,
    pub k_minus: Vec<MatrixJson>,
    pub j_time: MatrixJson,
    pub k_plus_time: MatrixJson,
    pub k_minus_time: MatrixJson,
    pub index_map: IndexMap,
}

pub fn generators_document<T: Real>(g: &SpacetimeGenerators<T>) -> GeneratorsDocument {
    let list = |v: &[Matrix<T>]| v.iter().map(matrix_json).collect();
    GeneratorsDocument {
        n: g.n,
        j: list(&g.j),
        k_plus: list(&g.k_plus),
        k_minus: list(&g.k_minus),
        j_time: matrix_json(&g.j_time),
        k_plus_time: matrix_json(&g.k_plus_time),
        k_minus_time: matrix_json(&g.k_minus_time),
        index_map: IndexMap::for_n(g.n),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityDocument {
    pub n: usize,
    pub s: MatrixJson,
    pub s_inverse: MatrixJson,
    pub determinant: DetReport,
    pub index_map: IndexMap,
}

pub fn similarity_document<T: Real>(n: usize, s: &SimilarityMap<T>, det: DetReport) -> SimilarityDocument {
    SimilarityDocument {
        n,
        s: matrix_json(&s.s),
        s_inverse: matrix_json(&s.s_inverse),
        determinant: det,
        index_map: IndexMap::for_n(n),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepNames {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDocument {
    pub solspace_dim: usize,
    pub factor_dims: [usize; 2],
    pub residual: f64,
    /// Tilde-frame solutions, each a list of `N^2` slices.
    pub basis: Vec<Vec<MatrixJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssembledDocument {
    pub block: Which,
    pub scale: ComplexJson,
    pub coeffs: Vec<ComplexJson>,
    pub p: Vec<MatrixJson>,
    pub poincare: PoincareViolations,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumDocument {
    pub n: usize,
    pub epsilon: Sign,
    pub reps: RepNames,
    pub dim_ab: usize,
    pub dim_cd: usize,
    pub plus: BlockDocument,
    pub minus: BlockDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assembled: Option<AssembledDocument>,
    pub index_map: IndexMap,
}

pub fn momentum_document<T: Real>(
    sol: &MomentumSolution<T>,
    reps: RepNames,
    assembled: Option<(&AssembledMomentum<T>, PoincareViolations)>,
) -> MomentumDocument {
    let block = |which: Which| {
        let b = sol.block(which);
        BlockDocument {
            solspace_dim: b.dim(),
            factor_dims: [b.factor_dims.0, b.factor_dims.1],
            residual: b.residual,
            basis: b.tilde.iter().map(|s| s.iter().map(matrix_json).collect()).collect(),
        }
    };
    MomentumDocument {
        n: sol.n,
        epsilon: sol.epsilon,
        reps,
        dim_ab: sol.dim_ab,
        dim_cd: sol.dim_cd,
        plus: block(Which::Plus),
        minus: block(Which::Minus),
        assembled: assembled.map(|(m, poincare)| AssembledDocument {
            block: m.which,
            scale: complex_json(m.scale),
            coeffs: m.coeffs.iter().map(|&z| complex_json(z)).collect(),
            p: m.p.iter().map(matrix_json).collect(),
            poincare,
        }),
        index_map: IndexMap::for_n(sol.n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensors::compute_tensors;

    #[test]
    fn basis_round_trip() {
        let tol = Tolerance::default();
        let b = canonical_basis::<f64>(3).unwrap();
        let text = serde_json::to_string(&basis_document(&b)).unwrap();
        let back = basis_from_json(&text, &tol).unwrap();
        assert_eq!(back.mats(), b.mats());
        assert_eq!(back.kind(), BasisKind::Canonical);
    }

    #[test]
    fn canonical_claim_is_validated() {
        let tol = Tolerance::default();
        let b = canonical_basis::<f64>(2).unwrap();
        let mut doc = basis_document(&b);
        doc.matrices.swap(0, 1);
        assert!(matches!(basis_from_document(&doc, &tol), Err(Error::Document(_))));
        doc.kind = BasisKind::Custom;
        assert!(basis_from_document(&doc, &tol).is_ok());
    }

    #[test]
    fn tensors_round_trip_exactly() {
        let tol = Tolerance::default();
        let t = compute_tensors(&canonical_basis::<f64>(3).unwrap(), &tol).unwrap();
        for include in [false, true] {
            let text = serde_json::to_string(&tensors_document(&t, include)).unwrap();
            let back = tensors_from_json(&text, &tol).unwrap();
            assert_eq!(back.f(), t.f());
            assert_eq!(back.d(), t.d());
            assert_eq!(back.symmetry(), t.symmetry());
        }
    }

    #[test]
    fn malformed_tensors_are_rejected() {
        let tol = Tolerance::default();
        let t = compute_tensors(&canonical_basis::<f64>(2).unwrap(), &tol).unwrap();
        let mut doc = tensors_document(&t, false);
        doc.f.pop();
        assert!(tensors_from_document(&doc, &tol).is_err());
        assert!(tensors_from_json("{\"n\": 2}", &tol).is_err());
    }

    #[test]
    fn csv_lists_nonzero_entries() {
        let t = compute_tensors(&canonical_basis::<f64>(2).unwrap(), &Tolerance::default()).unwrap();
        let csv = tensors_csv(&t);
        assert!(csv.starts_with("tensor,mu,nu,lambda,value\n"));
        assert!(csv.contains("f,0,1,2,1e0"));
        // 6 Levi-Civita entries plus d^{i j 4}, d^{i 4 j}, d^{4 i j} and d^{444}.
        assert_eq!(csv.lines().count(), 1 + 6 + 10);
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = Matrix::from_rows(vec![vec![Complex::new(0.1, -2.0), Complex::new(3.0, 0.0)]]).unwrap();
        assert_eq!(matrix_from_json(&matrix_json(&m)).unwrap(), m);
        assert!(matrix_from_json(&vec![vec![[1.0, 0.0]], vec![]]).is_err());
    }
}
