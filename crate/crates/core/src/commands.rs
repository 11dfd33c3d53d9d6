//! Batch commands behind the `quatcramer` binary.
//!
//! `run_*` functions return structured results; `cmd_*` wrappers print or
//! write them and map the outcome to an exit status (0 success, 2 solvability
//! warning, 1 error).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::det::{cdet, ddet, det_hermitian, rdet};
use crate::error::{Error, Result};
use crate::geninv::{
    mp_inverse, penrose_residuals, weighted_penrose_residuals, wmp_inverse, PenroseResiduals, WeightedContext,
};
use crate::io::{read_matrix, solve_options, write_json, Backend, MatrixFile, Problem, Report};
use crate::matrix::QMatrix;
use crate::oracle;
use crate::scalar::{Rational, Scalar};
use crate::solver::{solve, RestrictedEquation};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_WARNING: i32 = 2;

#[derive(Clone, Debug, Default)]
pub struct CommandOptions {
    /// Overrides the backend named in the problem file.
    pub backend: Option<Backend>,
    pub verification: bool,
    pub threads: usize,
    pub tolerance: Option<f64>,
    pub output: Option<PathBuf>,
    /// Include wall time in reports.
    pub timing: bool,
}

fn emit<S: Serialize>(value: &S, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => write_json(path, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn fail(e: Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_ERROR
}

fn backend_for(problem: &Problem, opts: &CommandOptions) -> Backend {
    opts.backend.unwrap_or_else(|| problem.backend())
}

fn solve_typed<T: Scalar>(problem: &Problem, opts: &CommandOptions) -> Result<(RestrictedEquation<T>, Report)> {
    let eq = problem.equation::<T>()?;
    let so = solve_options(&problem.file.options, opts.verification, opts.threads, opts.tolerance);
    let rep = solve(&eq, &so)?;
    Ok((eq, Report::from_solve(&rep, opts.timing)))
}

/// Solves a problem file.
pub fn run_solve(problem: &Path, opts: &CommandOptions) -> Result<Report> {
    let problem = Problem::load(problem)?;
    match backend_for(&problem, opts) {
        Backend::Rational => solve_typed::<Rational>(&problem, opts).map(|r| r.1),
        Backend::F64 => solve_typed::<f64>(&problem, opts).map(|r| r.1),
    }
}

pub fn cmd_solve(problem: &Path, opts: &CommandOptions) -> i32 {
    let report = match run_solve(problem, opts) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if let Err(e) = emit(&report, opts.output.as_deref()) {
        return fail(e);
    }
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
        return EXIT_WARNING;
    }
    EXIT_SUCCESS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Check {
        Check { name: name.into(), value, tolerance, pass: value <= tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub checks: Vec<Check>,
    pub report: Report,
}

impl VerifyResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:<40} {:>12} {:>12}  result\n", "check", "value", "tolerance");
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{:<40} {:>12.3e} {:>12.3e}  {verdict}\n", c.name, c.value, c.tolerance));
        }
        out
    }
}

fn penrose_tol<T: Scalar>(a: &QMatrix<T>, x: &QMatrix<T>, tolerance: Option<f64>) -> f64 {
    if T::EXACT {
        return tolerance.unwrap_or(0.0);
    }
    let s = a.max_abs().max(1.0) * x.max_abs().max(1.0);
    tolerance.unwrap_or(1e-9 * s * s)
}

fn penrose_checks(checks: &mut Vec<Check>, side: &str, res: PenroseResiduals, tol: f64) {
    checks.push(Check::new(format!("{side}: AXA = A"), res.axa, tol));
    checks.push(Check::new(format!("{side}: XAX = X"), res.xax, tol));
    checks.push(Check::new(format!("{side}: weighted left symmetry"), res.left_symmetry, tol));
    checks.push(Check::new(format!("{side}: weighted right symmetry"), res.right_symmetry, tol));
}

fn verify_typed<T: Scalar>(problem: &Problem, candidate: Option<&Path>, opts: &CommandOptions) -> Result<VerifyResult> {
    let mut opts = opts.clone();
    opts.verification = true;
    let (eq, report) = solve_typed::<T>(problem, &opts)?;
    let x: QMatrix<T> = report.x.to_matrix()?;
    let tol = report.residuals.tolerance;
    let mut checks = Vec::new();

    let routes = report.verification.as_ref().map_or(0.0, |v| v.max_deviation);
    checks.push(Check::new("cross-route deviation", routes, tol));
    checks.push(Check::new("restriction residual", report.residuals.restriction, tol));
    checks.push(Check::new("residual AXB - D", report.residuals.primary, tol));
    checks.push(Check::new("restricted space residual", report.residuals.restricted_space, tol));

    let a_pinv = oracle::wpinv_oracle(&eq.a, &eq.m, &eq.n)?;
    let b_pinv = oracle::wpinv_oracle(&eq.b, &eq.p, &eq.q)?;
    let composed = QMatrix::chain(&[&a_pinv, &eq.d.to_f64(), &b_pinv])?;
    let oracle_tol = opts.tolerance.filter(|_| !T::EXACT).unwrap_or(1e-8 * x.max_abs().max(1.0));
    checks.push(Check::new("oracle deviation", composed.max_abs_diff(&x.to_f64())?, oracle_tol));

    if eq.kind != crate::solver::EquationKind::RightOnly {
        let ctx = WeightedContext::with_roots(eq.a.clone(), eq.m.clone(), eq.n.clone(), None, eq.n_inv_half.clone())?;
        let ax = wmp_inverse(&ctx)?.x;
        let res = weighted_penrose_residuals(&eq.a, &ax, &eq.m, &eq.n)?;
        penrose_checks(&mut checks, "A side", res, penrose_tol(&eq.a, &ax, opts.tolerance));
    }
    if eq.kind != crate::solver::EquationKind::LeftOnly {
        let ctx = WeightedContext::with_roots(eq.b.clone(), eq.p.clone(), eq.q.clone(), eq.p_half.clone(), None)?;
        let bx = wmp_inverse(&ctx)?.x;
        let res = weighted_penrose_residuals(&eq.b, &bx, &eq.p, &eq.q)?;
        penrose_checks(&mut checks, "B side", res, penrose_tol(&eq.b, &bx, opts.tolerance));
    }

    if let Some(path) = candidate {
        let c: QMatrix<T> = read_matrix(path)?;
        if c.shape() != x.shape() {
            checks.push(Check::new("candidate shape", f64::INFINITY, 0.0));
        } else {
            checks.push(Check::new("candidate deviation from X", c.max_abs_diff(&x)?, tol));
            let res = QMatrix::chain(&[&eq.a, &c, &eq.b])?.max_abs_diff(&eq.d)?;
            checks.push(Check::new("candidate residual AXB - D", res, tol));
        }
    }
    Ok(VerifyResult { checks, report })
}

/// Verification mode: all routes, oracle comparison and Penrose residuals.
pub fn run_verify(problem: &Path, candidate: Option<&Path>, opts: &CommandOptions) -> Result<VerifyResult> {
    let problem = Problem::load(problem)?;
    match backend_for(&problem, opts) {
        Backend::Rational => verify_typed::<Rational>(&problem, candidate, opts),
        Backend::F64 => verify_typed::<f64>(&problem, candidate, opts),
    }
}

pub fn cmd_verify(problem: &Path, candidate: Option<&Path>, opts: &CommandOptions) -> i32 {
    let result = match run_verify(problem, candidate, opts) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    print!("{}", result.table());
    if let Some(path) = &opts.output {
        if let Err(e) = write_json(path, &result) {
            return fail(e);
        }
    }
    if result.passed() {
        println!("all checks passed");
        EXIT_SUCCESS
    } else {
        println!("verification failed");
        EXIT_ERROR
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinvReport {
    pub backend: Backend,
    pub weighted: bool,
    pub formula: String,
    pub rank: usize,
    pub x: MatrixFile,
    pub penrose: PenroseResiduals,
    pub oracle_deviation: f64,
}

fn pinv_typed<T: Scalar>(matrix: &Path, m: Option<&Path>, n: Option<&Path>) -> Result<PinvReport> {
    let a: QMatrix<T> = read_matrix(matrix)?;
    let rank = crate::geninv::rank(&a);
    if m.is_none() && n.is_none() {
        let x = mp_inverse(&a)?;
        let oracle_deviation = oracle::pinv_oracle(&a).max_abs_diff(&x.to_f64())?;
        return Ok(PinvReport {
            backend: Backend::of::<T>(),
            weighted: false,
            formula: "moore-penrose".into(),
            rank,
            penrose: penrose_residuals(&a, &x)?,
            x: MatrixFile::from_matrix(&x),
            oracle_deviation,
        });
    }
    let load =
        |p: Option<&Path>, k: usize| -> Result<QMatrix<T>> { p.map_or_else(|| Ok(QMatrix::identity(k)), read_matrix) };
    let (mw, nw) = (load(m, a.rows())?, load(n, a.cols())?);
    let ctx = WeightedContext::new(a.clone(), mw.clone(), nw.clone())?;
    let inv = wmp_inverse(&ctx)?;
    let oracle_deviation = oracle::wpinv_oracle(&a, &mw, &nw)?.max_abs_diff(&inv.x.to_f64())?;
    Ok(PinvReport {
        backend: Backend::of::<T>(),
        weighted: true,
        formula: inv.formula.to_string(),
        rank,
        penrose: weighted_penrose_residuals(&a, &inv.x, &mw, &nw)?,
        x: MatrixFile::from_matrix(&inv.x),
        oracle_deviation,
    })
}

/// (Weighted) Moore-Penrose inverse of a matrix file.
pub fn run_pinv(matrix: &Path, m: Option<&Path>, n: Option<&Path>, backend: Backend) -> Result<PinvReport> {
    match backend {
        Backend::Rational => pinv_typed::<Rational>(matrix, m, n),
        Backend::F64 => pinv_typed::<f64>(matrix, m, n),
    }
}

pub fn cmd_pinv(matrix: &Path, m: Option<&Path>, n: Option<&Path>, opts: &CommandOptions) -> i32 {
    match run_pinv(matrix, m, n, opts.backend.unwrap_or_default()).and_then(|r| emit(&r, opts.output.as_deref())) {
        Ok(()) => EXIT_SUCCESS,
        Err(e) => fail(e),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexedValue {
    pub index: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetReport {
    pub backend: Backend,
    pub order: usize,
    pub rdet: Vec<IndexedValue>,
    pub cdet: Vec<IndexedValue>,
    pub ddet: String,
    /// Common value of all row and column determinants of a Hermitian matrix.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub det: Option<String>,
}

fn det_typed<T: Scalar>(matrix: &Path, index: Option<usize>) -> Result<DetReport> {
    let a: QMatrix<T> = read_matrix(matrix)?;
    let order = a.require_square()?;
    let indices: Vec<usize> = match index {
        Some(i) => vec![i],
        None => (1..=order).collect(),
    };
    let eval = |f: fn(usize, &QMatrix<T>) -> Result<crate::Quaternion<T>>| -> Result<Vec<IndexedValue>> {
        indices.iter().map(|&i| Ok(IndexedValue { index: i, value: f(i, &a)?.to_string() })).collect()
    };
    let det = if a.is_hermitian_default()? { Some(det_hermitian(&a)?.to_string()) } else { None };
    Ok(DetReport {
        backend: Backend::of::<T>(),
        order,
        rdet: eval(rdet)?,
        cdet: eval(cdet)?,
        ddet: ddet(&a)?.to_string(),
        det,
    })
}

/// Row, column and double determinants of a matrix file.
pub fn run_det(matrix: &Path, index: Option<usize>, backend: Backend) -> Result<DetReport> {
    match backend {
        Backend::Rational => det_typed::<Rational>(matrix, index),
        Backend::F64 => det_typed::<f64>(matrix, index),
    }
}

pub fn cmd_det(matrix: &Path, index: Option<usize>, opts: &CommandOptions) -> i32 {
    match run_det(matrix, index, opts.backend.unwrap_or_default()).and_then(|r| emit(&r, opts.output.as_deref())) {
        Ok(()) => EXIT_SUCCESS,
        Err(e) => fail(e),
    }
}
