//! Command-line interface.
//!
//! Exit codes: `0` success, `1` a check failed or a requested solution space
//! is empty, `2` usage, parse or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde::Serialize;

use crate::basis::{canonical_basis, GeneratorBasis};
use crate::error::{Error, Result};
use crate::export::{
    basis_document, basis_from_json, generators_document, momentum_document, similarity_document, tensors_csv,
    tensors_document, tensors_from_json, RepNames,
};
use crate::momentum::{assemble_momentum, block_rep_from_specs, poincare_check, solve_intertwiners, Which};
use crate::numkernel::Tolerance;
use crate::spacetime::{det_report, similarity_s, spacetime_generators, Sign};
use crate::tensors::{compute_tensors, StructureTensors};
use crate::transforms::{apply, lorentz_transform, LorentzParams, SpacetimeVector};
use crate::verify::{render_text, run_suite, Suite};

/// Environment variable overriding the algebraic tolerance.
pub const TOLERANCE_ENV: &str = "LIEGRID_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "liegrid", version, about = "SU(N) generators, spacetime Lorentz algebra and momentum intertwiners")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct NArg {
    /// Group parameter N of SU(N).
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub n: u32,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Inputs {
    /// Structure tensors document to use instead of computing them.
    #[arg(long)]
    pub tensors: Option<PathBuf>,
    /// Basis document to use instead of the canonical basis.
    #[arg(long)]
    pub basis: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the canonical generator basis.
    Basis(NArg),
    /// Compute the structure tensors f and d.
    Tensors {
        #[command(flatten)]
        n: NArg,
        #[command(flatten)]
        inputs: Inputs,
        /// Also write the nonzero entries as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        n: NArg,
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Apply D(theta, phi) to a spacetime vector.
    Transform {
        #[command(flatten)]
        n: NArg,
        /// Comma-separated angles, one per traceless generator.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        /// Comma-separated rapidities, one per traceless generator.
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        /// Comma-separated vector components, time last.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long, allow_hyphen_values = true, default_value = "+1", value_parser = parse_sign)]
        eps: Sign,
    },
    /// Solve for momentum matrices on (A,B) + (C,D).
    Momentum {
        #[command(flatten)]
        n: NArg,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long = "C")]
        c: String,
        #[arg(long = "D")]
        d: String,
        #[arg(long, allow_hyphen_values = true, default_value = "+1", value_parser = parse_sign)]
        eps: Sign,
        #[arg(long, value_enum, default_value_t = BlockArg::Plus)]
        block: BlockArg,
        /// Scale constant, `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        scale: String,
        /// Comma-separated real coefficients, one per solution.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
    },
    /// Write a JSON artifact (or CSV of the tensors).
    Export {
        #[command(flatten)]
        n: NArg,
        #[arg(long, value_enum)]
        what: ExportWhat,
        #[command(flatten)]
        inputs: Inputs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BlockArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    Basis,
    Tensors,
    Generators,
    Similarity,
    Csv,
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    match s.trim() {
        "+1" | "1" | "+" | "plus" => Ok(Sign::Plus),
        "-1" | "-" | "minus" => Ok(Sign::Minus),
        other => Err(format!("expected +1 or -1, got '{other}'")),
    }
}

fn parse_list(what: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim().parse::<f64>().map_err(|e| Error::Parse {
                pos: 0,
                msg: format!("{what}: '{x}': {e}"),
            })
        })
        .collect()
}

fn parse_scale(s: &str) -> Result<Complex<f64>> {
    match parse_list("scale", s)?.as_slice() {
        [re] => Ok(Complex::new(*re, 0.0)),
        [re, im] => Ok(Complex::new(*re, *im)),
        _ => Err(Error::Parse {
            pos: 0,
            msg: "scale takes one or two numbers".into(),
        }),
    }
}

/// Tolerances with the environment override applied.
pub fn tolerance_from_env() -> Result<Tolerance> {
    let mut tol = Tolerance::default();
    if let Ok(v) = std::env::var(TOLERANCE_ENV) {
        let value: f64 = v.trim().parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("{TOLERANCE_ENV}='{v}' is not a number"),
        })?;
        tol = tol.with_algebraic(value);
        if !tol.is_valid() {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("{TOLERANCE_ENV} must be positive"),
            });
        }
    }
    Ok(tol)
}

enum Outcome {
    Ok,
    Failed,
}

fn load_tensors(n: usize, inputs: &Inputs, tol: &Tolerance) -> Result<StructureTensors<f64>> {
    let t = match (&inputs.tensors, &inputs.basis) {
        (Some(path), _) => tensors_from_json(&fs::read_to_string(path)?, tol)?,
        (None, Some(path)) => compute_tensors(&load_basis(path, tol)?, tol)?,
        (None, None) => compute_tensors(&canonical_basis(n)?, tol)?,
    };
    if t.n() != n {
        return Err(Error::Document(format!("input is for N={}, but --n is {n}", t.n())));
    }
    Ok(t)
}

fn load_basis(path: &Path, tol: &Tolerance) -> Result<GeneratorBasis<f64>> {
    basis_from_json(&fs::read_to_string(path)?, tol)
}

struct Emitter<'a> {
    format: Format,
    output: Option<&'a Path>,
    stdout: &'a mut dyn Write,
}

impl Emitter<'_> {
    fn emit(&mut self, json: &impl Serialize, text: impl FnOnce() -> String) -> Result<()> {
        let body = match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(json)?;
                s.push('\n');
                s
            }
            Format::Text => text(),
        };
        self.raw(&body)
    }

    fn raw(&mut self, body: &str) -> Result<()> {
        match self.output {
            Some(path) => fs::write(path, body)?,
            None => self.stdout.write_all(body.as_bytes())?,
        }
        Ok(())
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    let tol = tolerance_from_env()?;
    let mut out = Emitter {
        format: cli.format,
        output: cli.output.as_deref(),
        stdout,
    };
    match &cli.command {
        Command::Basis(n) => {
            let b = canonical_basis::<f64>(n.n as usize)?;
            let doc = basis_document(&b);
            out.emit(&doc, || {
                let mut s = String::new();
                for (label, m) in doc.labels.iter().zip(b.mats()) {
                    s.push_str(&format!("{label}\n{}\n", matrix_text(m)));
                }
                s
            })?;
        }
        Command::Tensors { n, inputs, csv } => {
            let t = load_tensors(n.n as usize, inputs, &tol)?;
            if let Some(path) = csv {
                fs::write(path, tensors_csv(&t))?;
            }
            out.emit(&tensors_document(&t, t.basis().kind() != crate::basis::BasisKind::Canonical), || {
                tensors_csv(&t)
            })?;
        }
        Command::Verify { n, suite, inputs } => {
            let t = load_tensors(n.n as usize, inputs, &tol)?;
            let report = run_suite(&t, *suite, &tol, cli.seed);
            out.emit(&report, || render_text(&report))?;
            if !report.passed {
                return Ok(Outcome::Failed);
            }
        }
        Command::Transform {
            n,
            theta,
            phi,
            vector,
            eps,
        } => {
            let n = n.n as usize;
            let t = compute_tensors(&canonical_basis::<f64>(n)?, &tol)?;
            let g = spacetime_generators(&t);
            let params = LorentzParams {
                theta: parse_list("theta", theta)?,
                phi: parse_list("phi", phi)?,
                epsilon: *eps,
            };
            let v = SpacetimeVector::new(n, parse_list("vector", vector)?)?;
            let d = lorentz_transform(&g, &params)?;
            let y = apply(&d, &v, &tol)?;
            #[derive(Serialize)]
            struct TransformOutput<'a> {
                n: usize,
                epsilon: Sign,
                input: &'a [f64],
                output: &'a [f64],
            }
            let doc = TransformOutput {
                n,
                epsilon: *eps,
                input: &v.x,
                output: &y.x,
            };
            out.emit(&doc, || {
                let parts: Vec<String> = y.x.iter().map(|x| format!("{x}")).collect();
                format!("{}\n", parts.join(","))
            })?;
        }
        Command::Momentum {
            n,
            a,
            b,
            c,
            d,
            eps,
            block,
            scale,
            coeffs,
        } => {
            let n = n.n as usize;
            let t = compute_tensors(&canonical_basis::<f64>(n)?, &tol)?;
            let rep_block = block_rep_from_specs(&t, [a.as_str(), b.as_str(), c.as_str(), d.as_str()])?;
            let sol = solve_intertwiners(&rep_block, *eps, &t, &tol)?;
            let which = match block {
                BlockArg::Plus => Which::Plus,
                BlockArg::Minus => Which::Minus,
            };
            let scale = parse_scale(scale)?;
            let coeffs: Vec<Complex<f64>> = match coeffs {
                Some(s) => parse_list("coeffs", s)?.into_iter().map(|x| Complex::new(x, 0.0)).collect(),
                None => Vec::new(),
            };
            let names = RepNames {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                d: d.clone(),
            };
            let assembled = match assemble_momentum(&sol, which, scale, &coeffs) {
                Ok(m) => m,
                Err(Error::EmptySolutionSpace(which)) => {
                    let doc = momentum_document(&sol, names, None);
                    out.emit(&doc, || momentum_text(&doc))?;
                    eprintln!("error: the {which} block has an empty solution space");
                    return Ok(Outcome::Failed);
                }
                Err(e) => return Err(e),
            };
            let poincare = poincare_check(&rep_block, &assembled.p, &t, *eps)?;
            let doc = momentum_document(&sol, names, Some((&assembled, poincare)));
            out.emit(&doc, || momentum_text(&doc))?;
            if poincare.max() > tol.algebraic {
                return Ok(Outcome::Failed);
            }
        }
        Command::Export { n, what, inputs } => {
            let n = n.n as usize;
            let t = load_tensors(n, inputs, &tol)?;
            let custom = t.basis().kind() != crate::basis::BasisKind::Canonical;
            let body = match what {
                ExportWhat::Basis => to_json(&basis_document(t.basis()))?,
                ExportWhat::Tensors => to_json(&tensors_document(&t, custom))?,
                ExportWhat::Generators => to_json(&generators_document(&spacetime_generators(&t)))?,
                ExportWhat::Similarity => {
                    let s = similarity_s(t.basis(), &tol)?;
                    to_json(&similarity_document(n, &s, det_report::<f64>(n)?))?
                }
                ExportWhat::Csv => tensors_csv(&t),
            };
            out.raw(&body)?;
        }
    }
    Ok(Outcome::Ok)
}

fn to_json(x: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

fn matrix_text(m: &crate::numkernel::Matrix<f64>) -> String {
    let mut s = String::new();
    for r in 0..m.rows() {
        let row: Vec<String> = m
            .row(r)
            .iter()
            .map(|z| format!("{:>7.4}{:+.4}i", z.re, z.im))
            .collect();
        s.push_str(&format!("  [{}]\n", row.join(", ")));
    }
    s
}

fn momentum_text(doc: &crate::export::MomentumDocument) -> String {
    let mut s = format!(
        "N={} eps={} (A,B)=({},{}) (C,D)=({},{})\n",
        doc.n, doc.epsilon, doc.reps.a, doc.reps.b, doc.reps.c, doc.reps.d
    );
    s.push_str(&format!(
        "plus block:  dim {} (factors {}x{})\nminus block: dim {} (factors {}x{})\n",
        doc.plus.solspace_dim,
        doc.plus.factor_dims[0],
        doc.plus.factor_dims[1],
        doc.minus.solspace_dim,
        doc.minus.factor_dims[0],
        doc.minus.factor_dims[1]
    ));
    if let Some(a) = &doc.assembled {
        s.push_str(&format!(
            "assembled {} block: poincare pj={:.3e} pk={:.3e} pp={:.3e}\n",
            a.block.as_str(),
            a.poincare.pj,
            a.poincare.pk,
            a.poincare.pp
        ));
    }
    s
}

/// Parses `args` (including the program name) and runs the command, writing
/// artifacts to `stdout` and diagnostics to stderr. Returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return EXIT_OK;
            }
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return EXIT_USAGE;
        }
    };
    match execute(&cli, stdout) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Failed) => EXIT_FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let mut full = vec!["liegrid"];
        full.extend_from_slice(args);
        let code = run(full, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn basis_command() {
        let (code, out) = run_capture(&["basis", "--n", "2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["matrices"].as_array().unwrap().len(), 4);
        let (code, out) = run_capture(&["basis", "--n", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["matrices"].as_array().unwrap().len(), 9);
        assert_eq!(run_capture(&["basis", "--n", "1"]).0, 2);
    }

    #[test]
    fn transform_identity_and_rotation() {
        let (code, out) = run_capture(&[
            "--format", "text", "transform", "--n", "2", "--theta", "0,0,0", "--phi", "0,0,0", "--vector", "1,2,3,4",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1,2,3,4");
        let (code, out) = run_capture(&[
            "transform", "--n", "2", "--theta", "3.14159265,0,0", "--phi", "0,0,0", "--vector", "0,1,0,0",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let y: Vec<f64> = serde_json::from_value(v["output"].clone()).unwrap();
        assert!((y[1] + 1.0).abs() < 1e-8 && y[0].abs() < 1e-8 && y[2].abs() < 1e-8);
    }

    #[test]
    fn transform_length_mismatch_is_usage_error() {
        let (code, _) = run_capture(&["transform", "--n", "2", "--theta", "0,0", "--phi", "0,0,0", "--vector", "1,2,3,4"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["transform", "--n", "2", "--theta", "x,0,0", "--phi", "0,0,0", "--vector", "1,2,3,4"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn negative_parameters_are_accepted() {
        let (code, _) = run_capture(&[
            "transform", "--n", "2", "--theta", "-1,0,0", "--phi", "-0.5,0,0", "--vector", "1,0,0,0", "--eps", "-1",
        ]);
        assert_eq!(code, 0);
    }

    #[test]
    fn momentum_commands() {
        let base = ["momentum", "--n", "2", "--A", "F", "--B", "A", "--eps", "+1", "--block", "plus"];
        let mut ok = base.to_vec();
        ok.extend(["--C", "sym2(F)", "--D", "antisym2(A)"]);
        let (code, out) = run_capture(&ok);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["plus"]["solspace_dim"], 1);
        assert!(v["assembled"]["poincare"]["pk"].as_f64().unwrap() < 1e-10);

        let mut empty = base.to_vec();
        empty.extend(["--C", "F", "--D", "A"]);
        assert_eq!(run_capture(&empty).0, 1);

        let mut bad = base.to_vec();
        bad.extend(["--C", "sym2(F", "--D", "A"]);
        assert_eq!(run_capture(&bad).0, 2);
    }

    #[test]
    fn malformed_flags() {
        assert_eq!(run_capture(&["verify", "--n", "2", "--suite", "nope"]).0, 2);
        assert_eq!(run_capture(&["verify", "--n"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["verify", "--n", "2", "--tensors", "/nonexistent/file.json"]).0, 2);
    }
}
