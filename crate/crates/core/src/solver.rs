//! Cramer rules for the restricted equations `AXB = D`, `AX = D` and `XB = D`.
//!
//! The unique restricted solution is `X = A†_{M,N} D B†_{P,Q}`. The A side is
//! always expanded through a column form and the B side through a row form,
//! so with `D̃ = T_A D T_B` (the two form sources)
//!
//! * `d^B = [Σ rdet_j((H_B)_{j.}(d̃_{i.}))] R` and `X = L [Σ cdet_i((H_A)_{.i}(d^B_{.j}))] / (den_A den_B)`,
//! * `d^A = L [Σ cdet_i((H_A)_{.i}(d̃_{.j}))]` and `X = [Σ rdet_j((H_B)_{j.}(d^A_{i.}))] R / (den_A den_B)`,
//!
//! where `L`, `R` are the optional fixed factors of the forms.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Result};
use crate::geninv::{divide, wmp_inverse, ColumnForm, RankCase, RowForm, WeightedContext, WeightedFormula};
use crate::matrix::QMatrix;
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationKind {
    TwoSided,
    LeftOnly,
    RightOnly,
}

impl EquationKind {
    pub fn label(self) -> &'static str {
        match self {
            EquationKind::TwoSided => "AXB = D",
            EquationKind::LeftOnly => "AX = D",
            EquationKind::RightOnly => "XB = D",
        }
    }
}

/// `AXB = D` with weights `M`, `N` for `A` and `P`, `Q` for `B`.
///
/// One-sided equations keep identity matrices on the removed side.
#[derive(Clone, Debug)]
pub struct RestrictedEquation<T: Scalar> {
    pub kind: EquationKind,
    pub a: QMatrix<T>,
    pub b: QMatrix<T>,
    pub d: QMatrix<T>,
    pub m: QMatrix<T>,
    pub n: QMatrix<T>,
    pub p: QMatrix<T>,
    pub q: QMatrix<T>,
    /// Optional `N^{-1/2}`, needed by the general column minor-sum branch.
    pub n_inv_half: Option<QMatrix<T>>,
    /// Optional `P^{1/2}`, needed by the general row minor-sum branch.
    pub p_half: Option<QMatrix<T>>,
}

impl<T: Scalar> RestrictedEquation<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn two_sided(
        a: QMatrix<T>,
        b: QMatrix<T>,
        d: QMatrix<T>,
        m: QMatrix<T>,
        n: QMatrix<T>,
        p: QMatrix<T>,
        q: QMatrix<T>,
    ) -> Result<Self> {
        let eq =
            RestrictedEquation { kind: EquationKind::TwoSided, a, b, d, m, n, p, q, n_inv_half: None, p_half: None };
        eq.validate()?;
        Ok(eq)
    }

    /// `AX = D`.
    pub fn left(a: QMatrix<T>, d: QMatrix<T>, m: QMatrix<T>, n: QMatrix<T>) -> Result<Self> {
        let k = d.cols();
        let id = QMatrix::identity(k);
        let eq = RestrictedEquation {
            kind: EquationKind::LeftOnly,
            a,
            b: id.clone(),
            d,
            m,
            n,
            p: id.clone(),
            q: id,
            n_inv_half: None,
            p_half: None,
        };
        eq.validate()?;
        Ok(eq)
    }

    /// `XB = D`.
    pub fn right(b: QMatrix<T>, d: QMatrix<T>, p: QMatrix<T>, q: QMatrix<T>) -> Result<Self> {
        let k = d.rows();
        let id = QMatrix::identity(k);
        let eq = RestrictedEquation {
            kind: EquationKind::RightOnly,
            a: id.clone(),
            b,
            d,
            m: id.clone(),
            n: id,
            p,
            q,
            n_inv_half: None,
            p_half: None,
        };
        eq.validate()?;
        Ok(eq)
    }

    /// `AXB = D` with identity weights.
    pub fn unweighted(a: QMatrix<T>, b: QMatrix<T>, d: QMatrix<T>) -> Result<Self> {
        let (m, n, p, q) = (a.rows(), a.cols(), b.rows(), b.cols());
        Self::two_sided(a, b, d, QMatrix::identity(m), QMatrix::identity(n), QMatrix::identity(p), QMatrix::identity(q))
    }

    pub fn with_roots(mut self, n_inv_half: Option<QMatrix<T>>, p_half: Option<QMatrix<T>>) -> Self {
        self.n_inv_half = n_inv_half;
        self.p_half = p_half;
        self
    }

    /// Shape of the solution `X`.
    pub fn solution_shape(&self) -> (usize, usize) {
        (self.a.cols(), self.b.rows())
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = self.a.shape();
        let (p, q) = self.b.shape();
        let square = |w: &QMatrix<T>, k: usize| w.shape() == (k, k);
        if self.d.shape() != (m, q) {
            return Err(mismatch("equation", format!("A is {m}x{n}, B is {p}x{q}, D is {:?}", self.d.shape())));
        }
        if !square(&self.m, m) || !square(&self.n, n) || !square(&self.p, p) || !square(&self.q, q) {
            return Err(mismatch(
                "equation",
                format!(
                    "weights M {:?}, N {:?}, P {:?}, Q {:?} for A {m}x{n} and B {p}x{q}",
                    self.m.shape(),
                    self.n.shape(),
                    self.p.shape(),
                    self.q.shape()
                ),
            ));
        }
        if self.n_inv_half.as_ref().is_some_and(|r| !square(r, n))
            || self.p_half.as_ref().is_some_and(|r| !square(r, p))
        {
            return Err(mismatch("equation", "supplied square roots have the wrong size"));
        }
        Ok(())
    }

    fn a_context(&self) -> Result<WeightedContext<T>> {
        WeightedContext::with_roots(self.a.clone(), self.m.clone(), self.n.clone(), None, self.n_inv_half.clone())
    }

    fn b_context(&self) -> Result<WeightedContext<T>> {
        WeightedContext::with_roots(self.b.clone(), self.p.clone(), self.q.clone(), self.p_half.clone(), None)
    }

    fn has_a_side(&self) -> bool {
        self.kind != EquationKind::RightOnly
    }

    fn has_b_side(&self) -> bool {
        self.kind != EquationKind::LeftOnly
    }
}

/// Which family of intermediate vectors is built first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Rows `d^B` from the B side, then column determinants.
    BSideFirst,
    /// Columns `d^A` from the A side, then row determinants.
    ASideFirst,
}

impl Route {
    /// Default: `d^B` first when `n ≤ p`.
    pub fn default_for(n: usize, p: usize) -> Route {
        if n <= p {
            Route::BSideFirst
        } else {
            Route::ASideFirst
        }
    }
}

/// Rank pattern of the two coefficient matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankPattern {
    /// `r1 < n`, `r2 < p`.
    BothDeficient,
    /// `r1 = n`, `r2 = p`.
    BothFull,
    /// `r1 = n`, `r2 < p`.
    FullADeficientB,
    /// `r1 < n`, `r2 = p`.
    DeficientAFullB,
}

impl RankPattern {
    pub fn classify(r1: usize, n: usize, r2: usize, p: usize) -> RankPattern {
        match (r1 == n, r2 == p) {
            (false, false) => RankPattern::BothDeficient,
            (true, true) => RankPattern::BothFull,
            (true, false) => RankPattern::FullADeficientB,
            (false, true) => RankPattern::DeficientAFullB,
        }
    }

    pub fn roman(self) -> &'static str {
        match self {
            RankPattern::BothDeficient => "i",
            RankPattern::BothFull => "ii",
            RankPattern::FullADeficientB => "iii",
            RankPattern::DeficientAFullB => "iv",
        }
    }
}

/// Whether `A♯A` and `BB♯` are Hermitian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianProfile {
    pub sharp_a_a: bool,
    pub b_b_sharp: bool,
}

impl fmt::Display for HermitianProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |h: bool| if h { "hermitian" } else { "non-hermitian" };
        write!(f, "A#A {}, BB# {}", word(self.sharp_a_a), word(self.b_b_sharp))
    }
}

/// How the solution was computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveMethod {
    pub kind: EquationKind,
    pub profile: HermitianProfile,
    pub pattern: RankPattern,
    /// Column formula for `A†_{M,N}` (absent for `XB = D`).
    pub a_formula: Option<WeightedFormula>,
    /// Row formula for `B†_{P,Q}` (absent for `AX = D`).
    pub b_formula: Option<WeightedFormula>,
    pub route: Route,
    /// Expression of the intermediate matrix `D̃`.
    pub intermediate: String,
}

/// Matrices computed on the way to `X`.
#[derive(Clone, Debug)]
pub struct Intermediates<T: Scalar> {
    pub d_tilde: QMatrix<T>,
    /// Undivided `d^A` family (A-side numerators times the left factor).
    pub d_a: Option<QMatrix<T>>,
    /// Undivided `d^B` family (B-side numerators times the right factor).
    pub d_b: Option<QMatrix<T>>,
    pub den_a: T,
    pub den_b: T,
}

/// One alternative evaluation compared against the reported `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteCheck {
    pub label: String,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub checks: Vec<RouteCheck>,
    pub max_deviation: f64,
}

#[derive(Clone, Debug)]
pub struct SolveReport<T: Scalar> {
    pub x: QMatrix<T>,
    pub method: SolveMethod,
    /// Largest entry modulus of `AXB - D`.
    pub residual_primary: f64,
    /// Largest entry modulus of `A A†_{M,N} D B†_{P,Q} B - D`.
    pub restriction_residual: f64,
    /// Largest entry modulus of `A†_{M,N}AX - X` and `XBB†_{P,Q} - X`.
    pub restricted_space_residual: f64,
    pub tolerance: f64,
    /// False signals a solvability warning: `D` is outside the required ranges.
    pub solvable: bool,
    pub ranks: (usize, usize),
    pub rank_cases: (RankCase, RankCase),
    pub intermediates: Intermediates<T>,
    pub verification: Option<Verification>,
    pub elapsed: Duration,
}

impl<T: Scalar> SolveReport<T> {
    pub fn warning(&self) -> bool {
        !self.solvable
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Overrides the default route.
    pub route: Option<Route>,
    /// Evaluate every alternative formula and route and compare.
    pub verification: bool,
    /// Worker threads for entry evaluation; 0 or 1 runs sequentially.
    pub threads: usize,
    /// Residual tolerance; defaults to 0 (exact) or `1e-8·max(1, |D|)` (float).
    pub tolerance: Option<f64>,
}

impl SolveOptions {
    pub fn verifying() -> Self {
        SolveOptions { verification: true, ..Default::default() }
    }
}

struct Pool(Option<rayon::ThreadPool>);

impl Pool {
    fn new(threads: usize) -> Pool {
        Pool((threads > 1).then(|| rayon::ThreadPoolBuilder::new().num_threads(threads).build().ok()).flatten())
    }

    fn entries<T: Scalar>(
        &self,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> Result<Quaternion<T>> + Sync,
    ) -> Result<QMatrix<T>> {
        let at = |idx: usize| f(idx / cols, idx % cols);
        let data = match &self.0 {
            Some(pool) => pool.install(|| (0..rows * cols).into_par_iter().map(at).collect::<Result<Vec<_>>>())?,
            None => (0..rows * cols).map(at).collect::<Result<Vec<_>>>()?,
        };
        QMatrix::new(rows, cols, data)
    }
}

enum ColumnSide<T: Scalar> {
    Identity,
    /// Rank-zero `A`; holds the number of columns of `A`.
    Zero(usize),
    Form(ColumnForm<T>),
}

enum RowSide<T: Scalar> {
    Identity,
    /// Rank-zero `B`; holds the number of rows of `B`.
    Zero(usize),
    Form(RowForm<T>),
}

impl<T: Scalar> ColumnSide<T> {
    fn source_times(&self, y: &QMatrix<T>) -> Result<QMatrix<T>> {
        match self {
            ColumnSide::Form(f) => f.source.matmul(y),
            ColumnSide::Zero(n) => Ok(QMatrix::zeros(*n, y.cols())),
            ColumnSide::Identity => Ok(y.clone()),
        }
    }

    fn denominator(&self) -> T {
        match self {
            ColumnSide::Form(f) => f.denominator.clone(),
            _ => T::one(),
        }
    }

    /// `L · [column numerators of y]`, undivided.
    fn expand(&self, pool: &Pool, y: &QMatrix<T>) -> Result<QMatrix<T>> {
        match self {
            ColumnSide::Identity => Ok(y.clone()),
            ColumnSide::Zero(_) => Ok(QMatrix::zeros(y.rows(), y.cols())),
            ColumnSide::Form(f) => {
                let cols: Vec<_> = (1..=y.cols()).map(|j| y.column(j)).collect::<Result<_>>()?;
                let num = pool.entries(y.rows(), y.cols(), |i, j| f.numerator(i + 1, &cols[j]))?;
                f.lift(num)
            }
        }
    }
}

impl<T: Scalar> RowSide<T> {
    fn times_source(&self, y: &QMatrix<T>) -> Result<QMatrix<T>> {
        match self {
            RowSide::Form(f) => y.matmul(&f.source),
            RowSide::Zero(p) => Ok(QMatrix::zeros(y.rows(), *p)),
            RowSide::Identity => Ok(y.clone()),
        }
    }

    fn denominator(&self) -> T {
        match self {
            RowSide::Form(f) => f.denominator.clone(),
            _ => T::one(),
        }
    }

    /// `[row numerators of y] · R`, undivided.
    fn expand(&self, pool: &Pool, y: &QMatrix<T>) -> Result<QMatrix<T>> {
        match self {
            RowSide::Identity => Ok(y.clone()),
            RowSide::Zero(_) => Ok(QMatrix::zeros(y.rows(), y.cols())),
            RowSide::Form(f) => {
                let rows: Vec<_> = (1..=y.rows()).map(|i| y.row(i)).collect::<Result<_>>()?;
                let num = pool.entries(y.rows(), y.cols(), |i, j| f.numerator(j + 1, &rows[i]))?;
                f.lift(num)
            }
        }
    }
}

/// Column formula the solver uses for the A side.
pub fn column_formula<T: Scalar>(ctx: &WeightedContext<T>) -> WeightedFormula {
    let full = ctx.rank() == ctx.a().cols();
    match (ctx.sharp_a_hermitian(), full) {
        (true, true) => WeightedFormula::HermitianColumnFullRank,
        (true, false) => WeightedFormula::HermitianColumnMinorSum,
        (false, true) => WeightedFormula::ColumnFullRank,
        (false, false) => WeightedFormula::ColumnMinorSum,
    }
}

/// Row formula the solver uses for the B side (the context holds `B`, `P`, `Q`).
pub fn row_formula<T: Scalar>(ctx: &WeightedContext<T>) -> WeightedFormula {
    let full = ctx.rank() == ctx.a().rows();
    match (ctx.a_sharp_hermitian(), full) {
        (true, true) => WeightedFormula::HermitianRowFullRank,
        (true, false) => WeightedFormula::HermitianRowMinorSum,
        (false, true) => WeightedFormula::RowFullRank,
        (false, false) => WeightedFormula::RowMinorSum,
    }
}

fn a_source_label(f: WeightedFormula) -> &'static str {
    match f {
        WeightedFormula::HermitianColumnMinorSum | WeightedFormula::HermitianColumnFullRank => "A#",
        WeightedFormula::ColumnMinorSum => "N^(-1/2) A* M",
        _ => "A* M",
    }
}

fn b_source_label(f: WeightedFormula) -> &'static str {
    match f {
        WeightedFormula::HermitianRowMinorSum | WeightedFormula::HermitianRowFullRank => "B#",
        WeightedFormula::RowMinorSum => "Q^(-1) B* P^(1/2)",
        _ => "Q^(-1) B*",
    }
}

fn column_side<T: Scalar>(ctx: &WeightedContext<T>, f: WeightedFormula) -> Result<ColumnSide<T>> {
    if ctx.rank() == 0 {
        return Ok(ColumnSide::Zero(ctx.a().cols()));
    }
    Ok(ColumnSide::Form(ctx.column_form(f)?))
}

fn row_side<T: Scalar>(ctx: &WeightedContext<T>, f: WeightedFormula) -> Result<RowSide<T>> {
    if ctx.rank() == 0 {
        return Ok(RowSide::Zero(ctx.a().rows()));
    }
    Ok(RowSide::Form(ctx.row_form(f)?))
}

struct Evaluation<T: Scalar> {
    x: QMatrix<T>,
    intermediates: Intermediates<T>,
}

fn evaluate<T: Scalar>(
    pool: &Pool,
    a_side: &ColumnSide<T>,
    b_side: &RowSide<T>,
    d: &QMatrix<T>,
    route: Route,
) -> Result<Evaluation<T>> {
    let d_tilde = b_side.times_source(&a_side.source_times(d)?)?;
    let (den_a, den_b) = (a_side.denominator(), b_side.denominator());
    let den = den_a.clone() * den_b.clone();
    let (num, d_a, d_b) = match route {
        Route::BSideFirst => {
            let d_b = b_side.expand(pool, &d_tilde)?;
            (a_side.expand(pool, &d_b)?, None, Some(d_b))
        }
        Route::ASideFirst => {
            let d_a = a_side.expand(pool, &d_tilde)?;
            (b_side.expand(pool, &d_a)?, Some(d_a), None)
        }
    };
    let x = divide(&num, &den)?;
    Ok(Evaluation { x, intermediates: Intermediates { d_tilde, d_a, d_b, den_a, den_b } })
}

fn default_tolerance<T: Scalar>(d: &QMatrix<T>) -> f64 {
    if T::EXACT {
        0.0
    } else {
        1e-8 * d.max_abs().max(1.0)
    }
}

/// Hermitian profile of `A♯A` and `BB♯` (identity sides count as Hermitian).
pub fn hermitian_profile<T: Scalar>(eq: &RestrictedEquation<T>) -> Result<HermitianProfile> {
    eq.validate()?;
    let sharp_a_a = !eq.has_a_side() || eq.a_context()?.sharp_a_hermitian();
    let b_b_sharp = !eq.has_b_side() || eq.b_context()?.a_sharp_hermitian();
    Ok(HermitianProfile { sharp_a_a, b_b_sharp })
}

/// Rank cases of `A` and `B`.
pub fn rank_case<T: Scalar>(eq: &RestrictedEquation<T>) -> (RankCase, RankCase) {
    let classify = |x: &QMatrix<T>| {
        let r = crate::geninv::rank(x);
        RankCase::classify(r, x.rows(), x.cols())
    };
    (classify(&eq.a), classify(&eq.b))
}

/// Solves according to `eq.kind`.
pub fn solve<T: Scalar>(eq: &RestrictedEquation<T>, opts: &SolveOptions) -> Result<SolveReport<T>> {
    let start = Instant::now();
    eq.validate()?;
    let pool = Pool::new(opts.threads);
    let (n, p) = eq.solution_shape();

    let a_ctx = if eq.has_a_side() { Some(eq.a_context()?) } else { None };
    let b_ctx = if eq.has_b_side() { Some(eq.b_context()?) } else { None };
    let a_formula = a_ctx.as_ref().map(column_formula);
    let b_formula = b_ctx.as_ref().map(row_formula);
    let a_side = match (&a_ctx, a_formula) {
        (Some(ctx), Some(f)) => column_side(ctx, f)?,
        _ => ColumnSide::Identity,
    };
    let b_side = match (&b_ctx, b_formula) {
        (Some(ctx), Some(f)) => row_side(ctx, f)?,
        _ => RowSide::Identity,
    };

    let route = opts.route.unwrap_or(Route::default_for(n, p));
    let Evaluation { x, intermediates } = evaluate(&pool, &a_side, &b_side, &eq.d, route)?;

    let r1 = a_ctx.as_ref().map_or(n, |c| c.rank());
    let r2 = b_ctx.as_ref().map_or(p, |c| c.rank());
    let profile = HermitianProfile {
        sharp_a_a: a_ctx.as_ref().is_none_or(|c| c.sharp_a_hermitian()),
        b_b_sharp: b_ctx.as_ref().is_none_or(|c| c.a_sharp_hermitian()),
    };
    let intermediate = match (a_formula, b_formula) {
        (Some(fa), Some(fb)) => format!("{} D {}", a_source_label(fa), b_source_label(fb)),
        (Some(fa), None) => format!("{} D", a_source_label(fa)),
        (None, Some(fb)) => format!("D {}", b_source_label(fb)),
        (None, None) => "D".to_string(),
    };
    let method = SolveMethod {
        kind: eq.kind,
        profile,
        pattern: RankPattern::classify(r1, n, r2, p),
        a_formula,
        b_formula,
        route,
        intermediate,
    };

    let a_pinv = match &a_ctx {
        Some(ctx) => ctx.compute(column_formula(ctx))?,
        None => QMatrix::identity(n),
    };
    let b_pinv = match &b_ctx {
        Some(ctx) => ctx.compute(row_formula(ctx))?,
        None => QMatrix::identity(p),
    };
    let residual_primary = QMatrix::chain(&[&eq.a, &x, &eq.b])?.max_abs_diff(&eq.d)?;
    let projected = QMatrix::chain(&[&eq.a, &a_pinv, &eq.d, &b_pinv, &eq.b])?;
    let restriction_residual = projected.max_abs_diff(&eq.d)?;
    let left_space = QMatrix::chain(&[&a_pinv, &eq.a, &x])?.max_abs_diff(&x)?;
    let right_space = QMatrix::chain(&[&x, &eq.b, &b_pinv])?.max_abs_diff(&x)?;
    let tolerance = opts.tolerance.unwrap_or_else(|| default_tolerance(&eq.d));

    let verification =
        if opts.verification { Some(verify_routes(&pool, eq, &x, a_ctx.as_ref(), b_ctx.as_ref())?) } else { None };

    Ok(SolveReport {
        x,
        method,
        residual_primary,
        restriction_residual,
        restricted_space_residual: left_space.max(right_space),
        tolerance,
        solvable: restriction_residual <= tolerance,
        ranks: (r1, r2),
        rank_cases: (RankCase::classify(r1, eq.a.rows(), n), RankCase::classify(r2, p, eq.b.cols())),
        intermediates,
        verification,
        elapsed: start.elapsed(),
    })
}

fn verify_routes<T: Scalar>(
    pool: &Pool,
    eq: &RestrictedEquation<T>,
    x: &QMatrix<T>,
    a_ctx: Option<&WeightedContext<T>>,
    b_ctx: Option<&WeightedContext<T>>,
) -> Result<Verification> {
    let a_formulas: Vec<Option<WeightedFormula>> = match a_ctx {
        Some(ctx) => ctx.applicable_formulas().into_iter().filter(|f| f.is_column()).map(Some).collect(),
        None => vec![None],
    };
    let b_formulas: Vec<Option<WeightedFormula>> = match b_ctx {
        Some(ctx) => ctx.applicable_formulas().into_iter().filter(|f| !f.is_column()).map(Some).collect(),
        None => vec![None],
    };
    let mut checks = Vec::new();
    for fa in &a_formulas {
        let a_side = match (a_ctx, fa) {
            (Some(ctx), Some(f)) => column_side(ctx, *f)?,
            _ => ColumnSide::Identity,
        };
        for fb in &b_formulas {
            let b_side = match (b_ctx, fb) {
                (Some(ctx), Some(f)) => row_side(ctx, *f)?,
                _ => RowSide::Identity,
            };
            for route in [Route::BSideFirst, Route::ASideFirst] {
                let alt = evaluate(pool, &a_side, &b_side, &eq.d, route)?;
                let label = format!(
                    "A: {} | B: {} | {:?}",
                    fa.map_or("identity".into(), |f| f.to_string()),
                    fb.map_or("identity".into(), |f| f.to_string()),
                    route
                );
                checks.push(RouteCheck { label, deviation: alt.x.max_abs_diff(x)? });
            }
        }
    }
    let a_pinv = match a_ctx {
        Some(ctx) => wmp_inverse(ctx)?.x,
        None => QMatrix::identity(x.rows()),
    };
    let b_pinv = match b_ctx {
        Some(ctx) => wmp_inverse(ctx)?.x,
        None => QMatrix::identity(x.cols()),
    };
    let composed = QMatrix::chain(&[&a_pinv, &eq.d, &b_pinv])?;
    checks.push(RouteCheck { label: "composition A#_{M,N} D B#_{P,Q}".into(), deviation: composed.max_abs_diff(x)? });
    let max_deviation = checks.iter().map(|c| c.deviation).fold(0.0, f64::max);
    Ok(Verification { checks, max_deviation })
}

/// `AXB = D`, treating the equation as two-sided.
pub fn solve_axb<T: Scalar>(eq: &RestrictedEquation<T>, opts: &SolveOptions) -> Result<SolveReport<T>> {
    let mut two = eq.clone();
    two.kind = EquationKind::TwoSided;
    solve(&two, opts)
}

/// `AX = D` using `A`, `D`, `M`, `N` of the equation.
pub fn solve_ax<T: Scalar>(eq: &RestrictedEquation<T>, opts: &SolveOptions) -> Result<SolveReport<T>> {
    let left = RestrictedEquation::left(eq.a.clone(), eq.d.clone(), eq.m.clone(), eq.n.clone())?
        .with_roots(eq.n_inv_half.clone(), None);
    solve(&left, opts)
}

/// `XB = D` using `B`, `D`, `P`, `Q` of the equation.
pub fn solve_xb<T: Scalar>(eq: &RestrictedEquation<T>, opts: &SolveOptions) -> Result<SolveReport<T>> {
    let right = RestrictedEquation::right(eq.b.clone(), eq.d.clone(), eq.p.clone(), eq.q.clone())?
        .with_roots(None, eq.p_half.clone());
    solve(&right, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geninv::mp_inverse;
    use crate::scalar::Rational;

    type M = QMatrix<Rational>;

    fn m(rows: &[&[&str]]) -> M {
        M::parse_rows(rows).unwrap()
    }

    fn example() -> RestrictedEquation<Rational> {
        RestrictedEquation::two_sided(
            m(&[&["k", "-i", "j"], &["1", "0", "k"]]),
            m(&[&["k", "-j", "j"], &["0", "1", "i"]]),
            m(&[&["i", "-j", "k"], &["-k", "0", "j"]]),
            m(&[&["5", "4k"], &["-4k", "5"]]),
            m(&[&["5", "0", "-4j"], &["0", "4", "0"], &["4j", "0", "5"]]),
            m(&[&["5/2", "-3/2j"], &["3/2j", "5/2"]]),
            m(&[&["1", "i", "0"], &["-i", "2", "-j"], &["0", "j", "2"]]),
        )
        .unwrap()
    }

    #[test]
    fn identity_equation() {
        let id = M::identity(2);
        let eq = RestrictedEquation::unweighted(id.clone(), id.clone(), id.clone()).unwrap();
        let rep = solve(&eq, &SolveOptions::verifying()).unwrap();
        assert_eq!(rep.x, id);
        assert_eq!(rep.residual_primary, 0.0);
        assert!(rep.solvable);
        assert_eq!(rep.method.pattern, RankPattern::BothFull);
        assert_eq!(hermitian_profile(&eq).unwrap(), HermitianProfile { sharp_a_a: true, b_b_sharp: true });
    }

    #[test]
    fn example_dispatch_and_routes() {
        let eq = example();
        let rep = solve(&eq, &SolveOptions::verifying()).unwrap();
        assert_eq!(rep.method.profile, HermitianProfile { sharp_a_a: false, b_b_sharp: false });
        assert_eq!(rep.method.pattern, RankPattern::DeficientAFullB);
        assert_eq!(rep.method.a_formula, Some(WeightedFormula::ColumnMinorSum));
        assert_eq!(rep.method.b_formula, Some(WeightedFormula::RowFullRank));
        assert_eq!(rep.ranks, (2, 2));
        assert_eq!(rep.intermediates.den_a.clone() * rep.intermediates.den_b.clone(), Rational::from(36));
        assert_eq!(rep.verification.unwrap().max_deviation, 0.0);
        assert_eq!(rep.x.get(1, 1).unwrap().to_string(), "-5/36 + 7/16i + 5/36j - 1/18k");
    }

    #[test]
    fn one_sided_reductions() {
        let eq = example();
        let opts = SolveOptions::verifying();
        let left = solve_ax(&eq, &opts).unwrap();
        let mut two = eq.clone();
        two.b = M::identity(2);
        two.p = M::identity(2);
        two.q = M::identity(2);
        two.d = m(&[&["i", "1"], &["k", "-i"]]);
        let left2 = solve_ax(&two, &opts).unwrap();
        assert_eq!(solve_axb(&two, &opts).unwrap().x, left2.x);
        assert_eq!(left.x.shape(), (3, 3));
        let a = m(&[&["1", "i"], &["j", "k"], &["0", "1"]]);
        let d = m(&[&["1"], &["2"], &["k"]]);
        let id = |k| M::identity(k);
        let rep = solve(&RestrictedEquation::left(a.clone(), d.clone(), id(3), id(2)).unwrap(), &opts).unwrap();
        assert_eq!(rep.x, mp_inverse(&a).unwrap().matmul(&d).unwrap());
        let b = a.conj_transpose();
        let dr = d.conj_transpose();
        let rep = solve(&RestrictedEquation::right(b.clone(), dr.clone(), id(2), id(3)).unwrap(), &opts).unwrap();
        assert_eq!(rep.x, dr.matmul(&mp_inverse(&b).unwrap()).unwrap());
    }

    #[test]
    fn inconsistent_right_hand_side_warns() {
        let a = m(&[&["1"], &["0"]]);
        let d = m(&[&["0"], &["1"]]);
        let eq = RestrictedEquation::left(a, d, M::identity(2), M::identity(1)).unwrap();
        let rep = solve(&eq, &SolveOptions::default()).unwrap();
        assert!(rep.warning());
        assert_eq!(rep.x, M::zeros(1, 1));
    }

    #[test]
    fn zero_coefficient() {
        let eq = RestrictedEquation::unweighted(M::zeros(2, 2), M::identity(2), M::zeros(2, 2)).unwrap();
        let rep = solve(&eq, &SolveOptions::verifying()).unwrap();
        assert_eq!(rep.x, M::zeros(2, 2));
        assert!(rep.solvable);

        let eq = RestrictedEquation::unweighted(M::zeros(3, 2), M::zeros(1, 4), M::zeros(3, 4)).unwrap();
        let rep = solve(&eq, &SolveOptions::verifying()).unwrap();
        assert_eq!(rep.x, M::zeros(2, 1));
    }

    #[test]
    fn threads_do_not_change_result() {
        let eq = example();
        let one = solve(&eq, &SolveOptions::default()).unwrap();
        let four = solve(&eq, &SolveOptions { threads: 4, ..Default::default() }).unwrap();
        assert_eq!(one.x, four.x);
    }

    #[test]
    fn dimension_errors() {
        let id = M::identity(2);
        assert!(RestrictedEquation::unweighted(id.clone(), id, M::identity(3)).is_err());
    }
}
