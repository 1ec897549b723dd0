//! Verification suites run by the `verify` command.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis::BasisKind;
use crate::error::Result;
use crate::export::IndexMap;
use crate::momentum::{
    assemble_momentum, block_rep_from_specs, doubled_fixture, generator, irrep_momentum_vanishing, poincare_check,
    poincare_violations, solve_intertwiners, translation, Which,
};
use crate::numkernel::{Matrix, Tolerance};
use crate::reps::{realize, RepSpec};
use crate::scalar::{cone, Real};
use crate::spacetime::{
    canonical_shape_violation, det_report, lorentz_check, lorentz_violations, pair_rep, similarity_s,
    spacetime_generators, verify_similarity, Sign,
};
use crate::tensors::{jacobi_checks, StructureTensors};
use crate::transforms::{invariance_report, lorentz_transform, LorentzParams};

/// Random trials used by the transforms suite.
pub const INVARIANCE_TRIALS: usize = 100;
/// Tolerance for the random-trial invariants.
pub const INVARIANCE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Tensors,
    Lorentz,
    Similarity,
    Transforms,
    Poincare,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Tensors => "tensors",
            Suite::Lorentz => "lorentz",
            Suite::Similarity => "similarity",
            Suite::Transforms => "transforms",
            Suite::Poincare => "poincare",
            Suite::All => "all",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "tensors" => Suite::Tensors,
            "lorentz" => Suite::Lorentz,
            "similarity" => Suite::Similarity,
            "transforms" => Suite::Transforms,
            "poincare" => Suite::Poincare,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite '{s}'")),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Must hold for the suite to pass.
    Check,
    /// Expected to fail; recorded for information only.
    ExpectedViolation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub kind: CheckKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n: usize,
    pub suite: Suite,
    pub basis_kind: BasisKind,
    pub tolerance: Tolerance,
    pub seed: u64,
    pub version: String,
    pub index_map: IndexMap,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.kind == CheckKind::Check && !c.passed)
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn check(&mut self, name: impl Into<String>, violation: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            max_violation: violation,
            tolerance,
            // NaN must fail.
            passed: violation <= tolerance,
            kind: CheckKind::Check,
            detail: None,
        });
    }

    fn expected_violation(&mut self, name: impl Into<String>, violation: f64, threshold: f64, detail: serde_json::Value) {
        self.checks.push(Check {
            name: name.into(),
            max_violation: violation,
            tolerance: threshold,
            passed: violation > threshold,
            kind: CheckKind::ExpectedViolation,
            detail: Some(detail),
        });
    }

    fn error(&mut self, name: impl Into<String>, err: impl fmt::Display) {
        self.checks.push(Check {
            name: name.into(),
            max_violation: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
            kind: CheckKind::Check,
            detail: Some(serde_json::Value::String(err.to_string())),
        });
    }
}

/// Runs a suite against the given tensors (which carry their basis).
pub fn run_suite<T: Real>(t: &StructureTensors<T>, suite: Suite, tol: &Tolerance, seed: u64) -> Report {
    let mut b = Builder { checks: Vec::new() };
    if suite.includes(Suite::Tensors) {
        tensors_suite(t, tol, &mut b);
    }
    if suite.includes(Suite::Lorentz) {
        lorentz_suite(t, tol, &mut b);
    }
    if suite.includes(Suite::Similarity) {
        if let Err(e) = similarity_suite(t, tol, &mut b) {
            b.error("similarity", e);
        }
    }
    if suite.includes(Suite::Transforms) {
        if let Err(e) = transforms_suite(t, tol, seed, &mut b) {
            b.error("transforms", e);
        }
    }
    if suite.includes(Suite::Poincare) {
        if let Err(e) = poincare_suite(t, tol, &mut b) {
            b.error("poincare", e);
        }
    }
    let passed = b.checks.iter().all(|c| c.kind != CheckKind::Check || c.passed);
    Report {
        n: t.n(),
        suite,
        basis_kind: t.basis().kind(),
        tolerance: *tol,
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        index_map: IndexMap::for_n(t.n()),
        checks: b.checks,
        passed,
    }
}

fn tensors_suite<T: Real>(t: &StructureTensors<T>, tol: &Tolerance, b: &mut Builder) {
    let basis = t.basis();
    let mats = basis.mats();
    let mut herm = 0.0_f64;
    for m in mats {
        herm = herm.max(m.hermiticity_violation());
    }
    b.check("basis.hermitian", herm, tol.algebraic);
    if basis.kind() == BasisKind::Canonical {
        let mut worst = 0.0_f64;
        for (mu, x) in mats.iter().enumerate() {
            for (nu, y) in mats.iter().enumerate() {
                let want = if mu == nu { 0.5 } else { 0.0 };
                let tr = (x * y).trace();
                worst = worst.max((tr.re.as_f64() - want).abs()).max(tr.im.abs().as_f64());
            }
        }
        b.check("basis.trace_identity", worst, tol.algebraic);
    }
    let s = t.symmetry();
    b.check("f.antisymmetric_12", s.f_antisym_12.max_violation, tol.algebraic);
    b.check("f.antisymmetric_23", s.f_antisym_23.max_violation, tol.algebraic);
    b.check("d.symmetric_12", s.d_sym_12.max_violation, tol.algebraic);
    b.check("d.symmetric_23", s.d_sym_23.max_violation, tol.algebraic);
    b.check("f.trace_column_zero", t.trace_column_max(), 0.0);
    let (comm, anti) = t.reconstruction_residuals();
    b.check("commutator_expansion", comm, tol.algebraic);
    b.check("anticommutator_expansion", anti, tol.algebraic);
    let jacobi = jacobi_checks(t);
    b.check("jacobi.ff", jacobi.ff, tol.algebraic);
    b.check("jacobi.df", jacobi.df, tol.algebraic);
}

fn lorentz_suite<T: Real>(t: &StructureTensors<T>, tol: &Tolerance, b: &mut Builder) {
    let g = spacetime_generators(t);
    let report = lorentz_check(&g, t);
    for (label, v) in [("plus", report.plus), ("minus", report.minus), ("tensor_form", report.tensor_form)] {
        b.check(format!("lorentz.{label}.jj"), v.jj, tol.algebraic);
        b.check(format!("lorentz.{label}.jk"), v.jk, tol.algebraic);
        b.check(format!("lorentz.{label}.kk"), v.kk, tol.algebraic);
    }
    if t.basis().kind() == BasisKind::Canonical {
        b.check("spacetime.canonical_shape", canonical_shape_violation(&g), tol.algebraic);
    }
    for (x, y) in [("F", "A"), ("F", "F"), ("1", "F"), ("sym2(F)", "A")] {
        let name = format!("pair_rep({x},{y}).lorentz");
        let pair = RepSpec::parse(t.n(), x)
            .and_then(|a| realize(&a, t))
            .and_then(|a| Ok((a, realize(&RepSpec::parse(t.n(), y)?, t)?)))
            .and_then(|(a, c)| pair_rep(&a, &c));
        match pair {
            Ok(p) => b.check(name, lorentz_violations(&p.j_ab, &p.k_ab, t.f()).max(), tol.algebraic),
            Err(e) => b.error(name, e),
        }
    }
}

fn similarity_suite<T: Real>(t: &StructureTensors<T>, tol: &Tolerance, b: &mut Builder) -> Result<()> {
    let g = spacetime_generators(t);
    let s = similarity_s(t.basis(), tol)?;
    let r = verify_similarity(&s, &g, t.basis())?;
    b.check("similarity.rotation", r.rotation, tol.algebraic);
    b.check("similarity.boost_plus", r.boost_plus, tol.algebraic);
    b.check("similarity.boost_minus", r.boost_minus, tol.algebraic);
    b.check("similarity.inverse", r.inverse, tol.algebraic);
    let det = det_report::<T>(t.n())?;
    b.check("det_s.conjecture", det.relative_error, tol.exponential);
    Ok(())
}

fn transforms_suite<T: Real>(t: &StructureTensors<T>, tol: &Tolerance, seed: u64, b: &mut Builder) -> Result<()> {
    let g = spacetime_generators(t);
    let id = lorentz_transform(&g, &LorentzParams::identity(t.n(), Sign::Plus))?;
    b.check("transform.identity", id.max_abs_diff(&Matrix::identity(g.dim())), tol.algebraic);
    let r = invariance_report(&g, INVARIANCE_TRIALS, seed)?;
    b.check("rotation.distance", r.rotation_distance, INVARIANCE_TOLERANCE);
    b.check("rotation.time", r.rotation_time, INVARIANCE_TOLERANCE);
    if t.n() == 2 {
        b.check("boost.interval", r.boost_interval, INVARIANCE_TOLERANCE);
    } else {
        let detail = serde_json::to_value(&r.witness).unwrap_or(serde_json::Value::Null);
        b.expected_violation(
            "boost.interval",
            r.boost_interval,
            crate::transforms::WITNESS_THRESHOLD,
            detail,
        );
    }
    Ok(())
}

fn poincare_suite<T: Real>(t: &StructureTensors<T>, tol: &Tolerance, b: &mut Builder) -> Result<()> {
    for eps in Sign::both() {
        let fx = doubled_fixture(t, eps, cone());
        let v = poincare_violations(&fx.j, &fx.k, &fx.p, t, eps)?;
        b.check(format!("doubled_fixture.eps{eps}"), v.max(), tol.algebraic);
    }
    if t.n() <= 3 {
        let block = block_rep_from_specs(t, ["F", "A", "sym2(F)", "antisym2(A)"])?;
        for eps in Sign::both() {
            let sol = solve_intertwiners(&block, eps, t, tol)?;
            let which = match eps {
                Sign::Plus => Which::Plus,
                Sign::Minus => Which::Minus,
            };
            let name = format!("solver.eps{eps}.{}", which.as_str());
            let m = match assemble_momentum(&sol, which, cone(), &vec![cone(); sol.block(which).dim()]) {
                Ok(m) => m,
                Err(e) => {
                    b.error(name, e);
                    continue;
                }
            };
            b.check(format!("{name}.residual"), sol.block(which).residual, tol.algebraic);
            b.check(format!("{name}.poincare"), poincare_check(&block, &m.p, t, eps)?.max(), tol.algebraic);
            let a: Vec<T> = (0..t.dim()).map(|k| T::lit(0.25 * k as f64 - 0.5)).collect();
            let u = translation(&m.p, &a, tol)?;
            let affine = &Matrix::identity(block.dim()) + &generator(&m.p, &a);
            b.check(format!("{name}.translation_affine"), u.max_abs_diff(&affine), 0.0);
        }
        let v = irrep_momentum_vanishing(t, tol)?;
        let worst = if v.vanished() { 0.0 } else { f64::INFINITY };
        b.check("irrep_momentum_vanishing", worst, 0.0);
    }
    Ok(())
}

/// Human-readable rendering of a report.
pub fn render_text(r: &Report) -> String {
    let mut out = format!(
        "liegrid {} verify --n {} --suite {} (basis {}, seed {})\n",
        r.version,
        r.n,
        r.suite,
        r.basis_kind.as_str(),
        r.seed
    );
    for c in &r.checks {
        let status = match (c.kind, c.passed) {
            (CheckKind::Check, true) => "ok  ",
            (CheckKind::Check, false) => "FAIL",
            (CheckKind::ExpectedViolation, true) => "xvio",
            (CheckKind::ExpectedViolation, false) => "note",
        };
        out.push_str(&format!(
            "{status} {:<40} {:>11.3e} (tol {:.1e})\n",
            c.name, c.max_violation, c.tolerance
        ));
    }
    out.push_str(if r.passed { "all checks passed\n" } else { "some checks FAILED\n" });
    out
}
