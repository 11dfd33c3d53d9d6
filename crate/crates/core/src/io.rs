//! JSON file formats: matrices, problem bundles and solve reports.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geninv::RankCase;
use crate::matrix::QMatrix;
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;
use crate::solver::{
    EquationKind, HermitianProfile, RestrictedEquation, Route, SolveMethod, SolveOptions, SolveReport, Verification,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Rational,
    F64,
}

impl Backend {
    pub fn of<T: Scalar>() -> Backend {
        if T::EXACT {
            Backend::Rational
        } else {
            Backend::F64
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Rational => "rational",
            Backend::F64 => "f64",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Backend> {
        match s {
            "rational" => Ok(Backend::Rational),
            "f64" => Ok(Backend::F64),
            other => Err(Error::Parse(format!("unknown backend '{other}' (expected rational or f64)"))),
        }
    }
}

/// A quaternion component: a JSON number or a `"p/q"` / decimal string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Component {
    Number(serde_json::Number),
    Text(String),
}

impl Component {
    fn from_scalar<T: Scalar>(x: &T) -> Component {
        if T::EXACT {
            return Component::Text(x.to_string());
        }
        match serde_json::Number::from_f64(x.to_f64()) {
            Some(n) => Component::Number(n),
            None => Component::Text(x.to_string()),
        }
    }

    fn parse<T: Scalar>(&self) -> Result<T> {
        match self {
            Component::Number(n) => T::parse_text(&n.to_string()),
            Component::Text(s) => T::parse_text(s.trim()),
        }
    }
}

/// Row-major quaternion matrix; each entry is `[a0, a1, a2, a3]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    #[serde(default)]
    pub scalar: Backend,
    pub data: Vec<[Component; 4]>,
}

impl MatrixFile {
    pub fn from_matrix<T: Scalar>(a: &QMatrix<T>) -> MatrixFile {
        let data = a.entries().iter().map(|q| [&q.re, &q.i, &q.j, &q.k].map(Component::from_scalar)).collect();
        MatrixFile { rows: a.rows(), cols: a.cols(), scalar: Backend::of::<T>(), data }
    }

    pub fn to_matrix<T: Scalar>(&self) -> Result<QMatrix<T>> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "matrix declares {}x{} but has {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        let data = self
            .data
            .iter()
            .map(|[a, b, c, d]| Ok(Quaternion::new(a.parse()?, b.parse()?, c.parse()?, d.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        QMatrix::new(self.rows, self.cols, data)
    }

    pub fn load(path: &Path) -> Result<MatrixFile> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

pub fn read_matrix<T: Scalar>(path: &Path) -> Result<QMatrix<T>> {
    MatrixFile::load(path)?.to_matrix()
}

pub fn write_matrix<T: Scalar>(path: &Path, a: &QMatrix<T>) -> Result<()> {
    MatrixFile::from_matrix(a).save(path)
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A matrix given by path (relative to the problem file) or inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRef {
    Path(PathBuf),
    Inline(MatrixFile),
}

impl MatrixRef {
    pub fn resolve<T: Scalar>(&self, base: &Path) -> Result<QMatrix<T>> {
        match self {
            MatrixRef::Path(p) => read_matrix(&base.join(p)),
            MatrixRef::Inline(m) => m.to_matrix(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    #[serde(default)]
    pub backend: Option<Backend>,
    #[serde(default)]
    pub verification: bool,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub route: Option<Route>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemRoots {
    #[serde(default)]
    pub n_inv_half: Option<MatrixRef>,
    #[serde(default)]
    pub p_half: Option<MatrixRef>,
}

/// Problem bundle. Omitted weights default to identities; `b` is ignored for
/// `left` problems and `a` for `right` ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "two_sided")]
    pub kind: ProblemKind,
    #[serde(default)]
    pub a: Option<MatrixRef>,
    #[serde(default)]
    pub b: Option<MatrixRef>,
    pub d: MatrixRef,
    #[serde(default)]
    pub m: Option<MatrixRef>,
    #[serde(default)]
    pub n: Option<MatrixRef>,
    #[serde(default)]
    pub p: Option<MatrixRef>,
    #[serde(default)]
    pub q: Option<MatrixRef>,
    #[serde(default)]
    pub options: ProblemOptions,
    #[serde(default)]
    pub roots: ProblemRoots,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    TwoSided,
    Left,
    Right,
}

fn two_sided() -> ProblemKind {
    ProblemKind::TwoSided
}

/// A problem file together with the directory its paths are relative to.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub base: PathBuf,
}

impl Problem {
    pub fn load(path: &Path) -> Result<Problem> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let file = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Problem { file, base })
    }

    fn required<T: Scalar>(&self, r: &Option<MatrixRef>, name: &str) -> Result<QMatrix<T>> {
        r.as_ref().ok_or_else(|| Error::Parse(format!("problem is missing matrix '{name}'")))?.resolve(&self.base)
    }

    fn weight<T: Scalar>(&self, r: &Option<MatrixRef>, size: usize) -> Result<QMatrix<T>> {
        match r {
            Some(r) => r.resolve(&self.base),
            None => Ok(QMatrix::identity(size)),
        }
    }

    fn optional<T: Scalar>(&self, r: &Option<MatrixRef>) -> Result<Option<QMatrix<T>>> {
        r.as_ref().map(|r| r.resolve(&self.base)).transpose()
    }

    /// Builds the equation in backend `T`.
    pub fn equation<T: Scalar>(&self) -> Result<RestrictedEquation<T>> {
        let f = &self.file;
        let d: QMatrix<T> = f.d.resolve(&self.base)?;
        let eq = match f.kind {
            ProblemKind::TwoSided => {
                let a: QMatrix<T> = self.required(&f.a, "a")?;
                let b: QMatrix<T> = self.required(&f.b, "b")?;
                let (m, n) = a.shape();
                let (p, q) = b.shape();
                RestrictedEquation::two_sided(
                    a,
                    b,
                    d,
                    self.weight(&f.m, m)?,
                    self.weight(&f.n, n)?,
                    self.weight(&f.p, p)?,
                    self.weight(&f.q, q)?,
                )?
            }
            ProblemKind::Left => {
                let a: QMatrix<T> = self.required(&f.a, "a")?;
                let (m, n) = a.shape();
                RestrictedEquation::left(a, d, self.weight(&f.m, m)?, self.weight(&f.n, n)?)?
            }
            ProblemKind::Right => {
                let b: QMatrix<T> = self.required(&f.b, "b")?;
                let (p, q) = b.shape();
                RestrictedEquation::right(b, d, self.weight(&f.p, p)?, self.weight(&f.q, q)?)?
            }
        };
        let eq = eq.with_roots(self.optional(&f.roots.n_inv_half)?, self.optional(&f.roots.p_half)?);
        eq.validate()?;
        Ok(eq)
    }

    pub fn backend(&self) -> Backend {
        self.file.options.backend.unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub primary: f64,
    pub restriction: f64,
    pub restricted_space: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntermediateReport {
    pub d_tilde: MatrixFile,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_a: Option<MatrixFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_b: Option<MatrixFile>,
    pub den_a: String,
    pub den_b: String,
}

/// The JSON report written by `solve` and `verify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub equation: String,
    pub kind: EquationKind,
    pub backend: Backend,
    pub x: MatrixFile,
    pub method: SolveMethod,
    pub case: String,
    pub hermitian_profile: HermitianProfile,
    pub ranks: (usize, usize),
    pub rank_cases: (RankCase, RankCase),
    pub residuals: ResidualReport,
    pub solvable: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
    pub intermediates: IntermediateReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verification: Option<Verification>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_seconds: Option<f64>,
}

impl Report {
    pub fn from_solve<T: Scalar>(rep: &SolveReport<T>, timing: bool) -> Report {
        let im = &rep.intermediates;
        Report {
            equation: rep.method.kind.label().to_string(),
            kind: rep.method.kind,
            backend: Backend::of::<T>(),
            x: MatrixFile::from_matrix(&rep.x),
            method: rep.method.clone(),
            case: rep.method.pattern.roman().to_string(),
            hermitian_profile: rep.method.profile,
            ranks: rep.ranks,
            rank_cases: rep.rank_cases,
            residuals: ResidualReport {
                primary: rep.residual_primary,
                restriction: rep.restriction_residual,
                restricted_space: rep.restricted_space_residual,
                tolerance: rep.tolerance,
            },
            solvable: rep.solvable,
            warning: rep.warning().then(|| {
                format!(
                    "D is outside the required ranges: restriction residual {:e} exceeds tolerance {:e}",
                    rep.restriction_residual, rep.tolerance
                )
            }),
            intermediates: IntermediateReport {
                d_tilde: MatrixFile::from_matrix(&im.d_tilde),
                d_a: im.d_a.as_ref().map(MatrixFile::from_matrix),
                d_b: im.d_b.as_ref().map(MatrixFile::from_matrix),
                den_a: im.den_a.to_string(),
                den_b: im.den_b.to_string(),
            },
            verification: rep.verification.clone(),
            elapsed_seconds: timing.then_some(rep.elapsed.as_secs_f64()),
        }
    }

    pub fn load(path: &Path) -> Result<Report> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// Options shared by the problem-driven commands.
pub fn solve_options(
    file: &ProblemOptions,
    verification: bool,
    threads: usize,
    tolerance: Option<f64>,
) -> SolveOptions {
    SolveOptions {
        route: file.route,
        verification: verification || file.verification,
        threads,
        tolerance: tolerance.or(file.tolerance),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn matrix_round_trip() {
        let a = QMatrix::<Rational>::parse_rows(&[&["1/3 + i", "-2k"], &["0", "5/7j - 1"]]).unwrap();
        let file = MatrixFile::from_matrix(&a);
        let text = serde_json::to_string(&file).unwrap();
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix::<Rational>().unwrap(), a);

        let f = QMatrix::<f64>::parse_rows(&[&["0.1 + 1e-300i", "-2.5k"]]).unwrap();
        let text = serde_json::to_string(&MatrixFile::from_matrix(&f)).unwrap();
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix::<f64>().unwrap(), f);
    }

    #[test]
    fn mixed_components() {
        let text = r#"{"rows":1,"cols":2,"scalar":"rational","data":[[0.5,"2/4",0,-3],["1e2",0,0,"7"]]}"#;
        let file: MatrixFile = serde_json::from_str(text).unwrap();
        let a: QMatrix<Rational> = file.to_matrix().unwrap();
        assert_eq!(a, QMatrix::parse_rows(&[&["1/2 + 1/2i - 3k", "100 + 7k"]]).unwrap());
        let bad: MatrixFile = serde_json::from_str(r#"{"rows":2,"cols":2,"data":[[1,0,0,0]]}"#).unwrap();
        assert!(bad.to_matrix::<Rational>().is_err());
    }
}
