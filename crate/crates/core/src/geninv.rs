//! Determinantal inverses and (weighted) Moore-Penrose inverses.
//!
//! Every representation is an instance of one of two Cramer-type forms over
//! a Hermitian kernel `H` of rank `r`:
//!
//! * column form, `x_ij = Σ_{β ∋ i} cdet_i((H_{.i}(t_{.j}))_β^β) / Σ_β |H_β^β|`,
//!   optionally left-multiplied by a fixed matrix;
//! * row form, `x_ij = Σ_{α ∋ j} rdet_j((H_{j.}(t_{i.}))_α^α) / Σ_α |H_α^α|`,
//!   optionally right-multiplied by a fixed matrix.
//!
//! With `r` equal to the order of `H` the minor sums collapse to a single
//! determinant, which gives the full-rank representations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::det::{cdet, cofactor_left, cofactor_right, ddet, det_hermitian, principal_minor_sum_unchecked, rdet};
use crate::error::{mismatch, Error, Result};
use crate::matrix::{enumerate_index_sets, QMatrix};
use crate::oracle;
use crate::quaternion::Quaternion;
use crate::roots::{check_supplied_root, exact_hpd_root, is_hpd};
use crate::scalar::Scalar;

pub use crate::roots::{hpd_inv_sqrt, hpd_sqrt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankCase {
    Deficient,
    FullColumn,
    FullRow,
    FullSquare,
}

impl RankCase {
    pub fn classify(rank: usize, rows: usize, cols: usize) -> RankCase {
        match (rank == rows, rank == cols) {
            (true, true) => RankCase::FullSquare,
            (false, true) => RankCase::FullColumn,
            (true, false) => RankCase::FullRow,
            (false, false) => RankCase::Deficient,
        }
    }

    pub fn full_column(self) -> bool {
        matches!(self, RankCase::FullColumn | RankCase::FullSquare)
    }

    pub fn full_row(self) -> bool {
        matches!(self, RankCase::FullRow | RankCase::FullSquare)
    }
}

/// Rank by exact Gaussian elimination with left row operations.
pub fn rank_exact<T: Scalar>(a: &QMatrix<T>) -> usize {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&r| !w[(r, col)].is_zero()) else { continue };
        for c in 0..n {
            let tmp = w[(p, c)].clone();
            w[(p, c)] = w[(rank, c)].clone();
            w[(rank, c)] = tmp;
        }
        let pivot_inv = w[(rank, col)].inv().expect("pivot is nonzero");
        for r in rank + 1..m {
            if w[(r, col)].is_zero() {
                continue;
            }
            let f = &w[(r, col)] * &pivot_inv;
            for c in col..n {
                let delta = &f * &w[(rank, c)];
                w[(r, c)] = &w[(r, c)] - &delta;
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// Quaternion rank: exact elimination for exact backends, the complex-adjoint
/// singular values otherwise.
pub fn rank<T: Scalar>(a: &QMatrix<T>) -> usize {
    if T::EXACT {
        rank_exact(a)
    } else {
        oracle::rank_oracle(a)
    }
}

fn nonzero_denominator<T: Scalar>(d: T) -> Result<T> {
    if d.is_zero() || !d.is_finite() {
        return Err(Error::SingularMatrix);
    }
    Ok(d)
}

/// Column Cramer form `left · [Σ cdet ...] / Σ |H_β^β|`.
#[derive(Clone, Debug)]
pub struct ColumnForm<T: Scalar> {
    pub kernel: QMatrix<T>,
    pub source: QMatrix<T>,
    pub left: Option<QMatrix<T>>,
    pub rank: usize,
    pub denominator: T,
}

impl<T: Scalar> ColumnForm<T> {
    pub fn new(kernel: QMatrix<T>, source: QMatrix<T>, left: Option<QMatrix<T>>, rank: usize) -> Result<Self> {
        let n = kernel.require_square()?;
        if source.rows() != n || left.as_ref().is_some_and(|l| l.shape() != (n, n)) || rank == 0 || rank > n {
            return Err(mismatch("column form", format!("kernel {n}x{n}, source {:?}, rank {rank}", source.shape())));
        }
        let denominator = nonzero_denominator(principal_minor_sum_unchecked(&kernel, rank)?)?;
        Ok(ColumnForm { kernel, source, left, rank, denominator })
    }

    /// `Σ_{β ∈ J_{r,n}{i}} cdet_i((H_{.i}(v))_β^β)`.
    pub fn numerator(&self, i: usize, v: &[Quaternion<T>]) -> Result<Quaternion<T>> {
        let replaced = self.kernel.replace_column(i, v)?;
        let mut acc = Quaternion::zero();
        for beta in enumerate_index_sets(self.rank, self.kernel.rows(), Some(i)) {
            let pos = beta.position(i).expect("fixed index is present");
            acc += cdet(pos, &replaced.principal(&beta)?)?;
        }
        Ok(acc)
    }

    /// Numerators for every column of `rhs` (which has as many rows as the kernel).
    pub fn numerators(&self, rhs: &QMatrix<T>) -> Result<QMatrix<T>> {
        let n = self.kernel.rows();
        if rhs.rows() != n {
            return Err(mismatch("column form", format!("right-hand side has {} rows, kernel {n}", rhs.rows())));
        }
        let mut out = QMatrix::zeros(n, rhs.cols());
        for j in 1..=rhs.cols() {
            let col = rhs.column(j)?;
            for i in 1..=n {
                out[(i - 1, j - 1)] = self.numerator(i, &col)?;
            }
        }
        Ok(out)
    }

    /// Applies the fixed left factor to a numerator matrix.
    pub fn lift(&self, num: QMatrix<T>) -> Result<QMatrix<T>> {
        match &self.left {
            Some(l) => l.matmul(&num),
            None => Ok(num),
        }
    }

    /// `left · numerators(rhs) / denominator`.
    pub fn apply(&self, rhs: &QMatrix<T>) -> Result<QMatrix<T>> {
        let num = self.numerators(rhs)?;
        let scaled = divide(&num, &self.denominator)?;
        self.lift(scaled)
    }

    /// The represented matrix, i.e. the form applied to its own source.
    pub fn matrix(&self) -> Result<QMatrix<T>> {
        self.apply(&self.source)
    }
}

/// Row Cramer form `[Σ rdet ...] · right / Σ |H_α^α|`.
#[derive(Clone, Debug)]
pub struct RowForm<T: Scalar> {
    pub kernel: QMatrix<T>,
    pub source: QMatrix<T>,
    pub right: Option<QMatrix<T>>,
    pub rank: usize,
    pub denominator: T,
}

impl<T: Scalar> RowForm<T> {
    pub fn new(kernel: QMatrix<T>, source: QMatrix<T>, right: Option<QMatrix<T>>, rank: usize) -> Result<Self> {
        let n = kernel.require_square()?;
        if source.cols() != n || right.as_ref().is_some_and(|r| r.shape() != (n, n)) || rank == 0 || rank > n {
            return Err(mismatch("row form", format!("kernel {n}x{n}, source {:?}, rank {rank}", source.shape())));
        }
        let denominator = nonzero_denominator(principal_minor_sum_unchecked(&kernel, rank)?)?;
        Ok(RowForm { kernel, source, right, rank, denominator })
    }

    /// `Σ_{α ∈ I_{r,p}{j}} rdet_j((H_{j.}(w))_α^α)`.
    pub fn numerator(&self, j: usize, w: &[Quaternion<T>]) -> Result<Quaternion<T>> {
        let replaced = self.kernel.replace_row(j, w)?;
        let mut acc = Quaternion::zero();
        for alpha in enumerate_index_sets(self.rank, self.kernel.rows(), Some(j)) {
            let pos = alpha.position(j).expect("fixed index is present");
            acc += rdet(pos, &replaced.principal(&alpha)?)?;
        }
        Ok(acc)
    }

    /// Numerators for every row of `lhs` (which has as many columns as the kernel).
    pub fn numerators(&self, lhs: &QMatrix<T>) -> Result<QMatrix<T>> {
        let p = self.kernel.rows();
        if lhs.cols() != p {
            return Err(mismatch("row form", format!("left-hand side has {} columns, kernel {p}", lhs.cols())));
        }
        let mut out = QMatrix::zeros(lhs.rows(), p);
        for i in 1..=lhs.rows() {
            let row = lhs.row(i)?;
            for j in 1..=p {
                out[(i - 1, j - 1)] = self.numerator(j, &row)?;
            }
        }
        Ok(out)
    }

    pub fn lift(&self, num: QMatrix<T>) -> Result<QMatrix<T>> {
        match &self.right {
            Some(r) => num.matmul(r),
            None => Ok(num),
        }
    }

    pub fn apply(&self, lhs: &QMatrix<T>) -> Result<QMatrix<T>> {
        let num = self.numerators(lhs)?;
        let scaled = divide(&num, &self.denominator)?;
        self.lift(scaled)
    }

    pub fn matrix(&self) -> Result<QMatrix<T>> {
        self.apply(&self.source)
    }
}

pub(crate) fn divide<T: Scalar>(a: &QMatrix<T>, d: &T) -> Result<QMatrix<T>> {
    let data = a.entries().iter().map(|q| q.div_real(d)).collect::<Result<Vec<_>>>()?;
    QMatrix::new(a.rows(), a.cols(), data)
}

fn require_nonsingular<T: Scalar>(d: T) -> Result<T> {
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(d)
}

fn agree<T: Scalar>(x: &QMatrix<T>, y: &QMatrix<T>, what: &str) -> Result<()> {
    let tol = 1e-8 * x.max_abs().max(1.0);
    if !x.approx_eq(y, tol) {
        return Err(Error::NumericalInconsistency(format!("{what}: constructions disagree")));
    }
    Ok(())
}

/// Inverse of a Hermitian matrix from right and left cofactors, returned as
/// `(right, left)` constructions.
pub fn inverse_hermitian_both<T: Scalar>(a: &QMatrix<T>) -> Result<(QMatrix<T>, QMatrix<T>)> {
    let n = a.require_square()?;
    let d = require_nonsingular(det_hermitian(a)?)?;
    let mut right = QMatrix::zeros(n, n);
    let mut left = QMatrix::zeros(n, n);
    for i in 1..=n {
        for j in 1..=n {
            right[(i - 1, j - 1)] = cofactor_right(a, j, i)?.div_real(&d)?;
            left[(i - 1, j - 1)] = cofactor_left(a, j, i)?.div_real(&d)?;
        }
    }
    Ok((right, left))
}

/// Inverse of a Hermitian matrix; both cofactor constructions must agree.
pub fn inverse_hermitian<T: Scalar>(a: &QMatrix<T>) -> Result<QMatrix<T>> {
    let (right, left) = inverse_hermitian_both(a)?;
    agree(&right, &left, "hermitian inverse")?;
    Ok(right)
}

/// Inverse of a square matrix via `(A*A)^{-1} A*` (left) and `A* (AA*)^{-1}`
/// (right), returned as `(left, right)`.
pub fn inverse_both<T: Scalar>(a: &QMatrix<T>) -> Result<(QMatrix<T>, QMatrix<T>)> {
    let n = a.require_square()?;
    require_nonsingular(ddet(a)?)?;
    let at = a.conj_transpose();
    let left = ColumnForm::new(at.matmul(a)?, at.clone(), None, n)?.matrix()?;
    let right = RowForm::new(a.matmul(&at)?, at, None, n)?.matrix()?;
    Ok((left, right))
}

/// Inverse of a square matrix with `ddet A != 0`.
pub fn inverse<T: Scalar>(a: &QMatrix<T>) -> Result<QMatrix<T>> {
    let (left, right) = inverse_both(a)?;
    agree(&left, &right, "inverse")?;
    Ok(left)
}

/// Representations of the Moore-Penrose inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// Minor sums of `A*A` of order `r` containing `i`.
    ColumnMinorSum,
    /// Minor sums of `AA*` of order `r` containing `j`.
    RowMinorSum,
    /// `cdet_i((A*A)_{.i}(a*_{.j})) / det(A*A)`, full column rank.
    ColumnFullRank,
    /// `rdet_j((AA*)_{j.}(a*_{i.})) / det(AA*)`, full row rank.
    RowFullRank,
}

/// Representations applicable to a matrix of the given rank case.
pub fn mp_representations(case: RankCase) -> Vec<Representation> {
    let mut reps = Vec::new();
    if case.full_column() {
        reps.push(Representation::ColumnFullRank);
    }
    if case.full_row() {
        reps.push(Representation::RowFullRank);
    }
    reps.push(Representation::ColumnMinorSum);
    reps.push(Representation::RowMinorSum);
    reps
}

fn default_representation(case: RankCase) -> Representation {
    match case {
        RankCase::FullColumn | RankCase::FullSquare => Representation::ColumnFullRank,
        RankCase::FullRow => Representation::RowFullRank,
        RankCase::Deficient => Representation::ColumnMinorSum,
    }
}

fn mp_with_rank<T: Scalar>(a: &QMatrix<T>, r: usize, rep: Representation) -> Result<QMatrix<T>> {
    let (m, n) = a.shape();
    if r == 0 {
        return Ok(QMatrix::zeros(n, m));
    }
    let case = RankCase::classify(r, m, n);
    let at = a.conj_transpose();
    match rep {
        Representation::ColumnFullRank if !case.full_column() => {
            Err(mismatch("mp_inverse", "full-column-rank representation needs rank = columns"))
        }
        Representation::RowFullRank if !case.full_row() => {
            Err(mismatch("mp_inverse", "full-row-rank representation needs rank = rows"))
        }
        Representation::ColumnMinorSum | Representation::ColumnFullRank => {
            ColumnForm::new(at.matmul(a)?, at, None, r)?.matrix()
        }
        Representation::RowMinorSum | Representation::RowFullRank => {
            RowForm::new(a.matmul(&at)?, at, None, r)?.matrix()
        }
    }
}

/// Moore-Penrose inverse using a specific representation.
pub fn mp_inverse_with<T: Scalar>(a: &QMatrix<T>, rep: Representation) -> Result<QMatrix<T>> {
    mp_with_rank(a, rank(a), rep)
}

/// Moore-Penrose inverse; the representation follows the rank case.
pub fn mp_inverse<T: Scalar>(a: &QMatrix<T>) -> Result<QMatrix<T>> {
    let r = rank(a);
    mp_with_rank(a, r, default_representation(RankCase::classify(r, a.rows(), a.cols())))
}

/// Every applicable representation of the Moore-Penrose inverse.
pub fn mp_inverse_all<T: Scalar>(a: &QMatrix<T>) -> Result<Vec<(Representation, QMatrix<T>)>> {
    let r = rank(a);
    mp_representations(RankCase::classify(r, a.rows(), a.cols()))
        .into_iter()
        .map(|rep| Ok((rep, mp_with_rank(a, r, rep)?)))
        .collect()
}

/// Labelled determinantal formulas for the weighted Moore-Penrose inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightedFormula {
    /// `A♯A` Hermitian: cdet over `(A♯A)_{.i}(a♯_{.j})`, minor sums of order `r`.
    HermitianColumnMinorSum,
    /// `A♯A` Hermitian, `r = n`: `cdet_i((A♯A)_{.i}(a♯_{.j})) / det(A♯A)`.
    HermitianColumnFullRank,
    /// `AA♯` Hermitian: rdet over `(AA♯)_{j.}(a♯_{i.})`, minor sums of order `r`.
    HermitianRowMinorSum,
    /// `AA♯` Hermitian, `r = m`: `rdet_j((AA♯)_{j.}(a♯_{i.})) / det(AA♯)`.
    HermitianRowFullRank,
    /// General: `N^{-1/2}` times cdet minor sums of `Ã*Ã` with source `N^{-1/2}A*M`.
    ColumnMinorSum,
    /// General, `r = n`: `cdet_i((A*MA)_{.i}(â_{.j})) / det(A*MA)` with `Â = A*M`.
    ColumnFullRank,
    /// General: rdet minor sums of `ÃÃ*` with source `N^{-1}A*M^{1/2}`, times `M^{1/2}`.
    RowMinorSum,
    /// General, `r = m`: `rdet_j((AN^{-1}A*)_{j.}(â_{i.})) / det(AN^{-1}A*)` with `Â = N^{-1}A*`.
    RowFullRank,
}

impl WeightedFormula {
    pub const ALL: [WeightedFormula; 8] = [
        WeightedFormula::HermitianColumnMinorSum,
        WeightedFormula::HermitianColumnFullRank,
        WeightedFormula::HermitianRowMinorSum,
        WeightedFormula::HermitianRowFullRank,
        WeightedFormula::ColumnMinorSum,
        WeightedFormula::ColumnFullRank,
        WeightedFormula::RowMinorSum,
        WeightedFormula::RowFullRank,
    ];

    pub fn is_column(self) -> bool {
        matches!(
            self,
            WeightedFormula::HermitianColumnMinorSum
                | WeightedFormula::HermitianColumnFullRank
                | WeightedFormula::ColumnMinorSum
                | WeightedFormula::ColumnFullRank
        )
    }

    pub fn is_hermitian_branch(self) -> bool {
        matches!(
            self,
            WeightedFormula::HermitianColumnMinorSum
                | WeightedFormula::HermitianColumnFullRank
                | WeightedFormula::HermitianRowMinorSum
                | WeightedFormula::HermitianRowFullRank
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            WeightedFormula::HermitianColumnMinorSum => "hermitian A#A, column minor sums",
            WeightedFormula::HermitianColumnFullRank => "hermitian A#A, full column rank",
            WeightedFormula::HermitianRowMinorSum => "hermitian AA#, row minor sums",
            WeightedFormula::HermitianRowFullRank => "hermitian AA#, full row rank",
            WeightedFormula::ColumnMinorSum => "general, column minor sums of A~*A~",
            WeightedFormula::ColumnFullRank => "general, full column rank via A*MA",
            WeightedFormula::RowMinorSum => "general, row minor sums of A~A~*",
            WeightedFormula::RowFullRank => "general, full row rank via AN^-1A*",
        }
    }
}

impl fmt::Display for WeightedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A matrix with its weight pair and the derived objects every weighted
/// formula needs. Built once; immutable afterwards.
#[derive(Clone, Debug)]
pub struct WeightedContext<T: Scalar> {
    a: QMatrix<T>,
    m: QMatrix<T>,
    n: QMatrix<T>,
    n_inv: QMatrix<T>,
    a_sharp: QMatrix<T>,
    rank: usize,
    rank_case: RankCase,
    sharp_a_hermitian: bool,
    a_sharp_hermitian: bool,
    m_half: Option<QMatrix<T>>,
    n_inv_half: Option<QMatrix<T>>,
}

fn check_weight<T: Scalar>(w: &QMatrix<T>, size: usize, name: &'static str) -> Result<()> {
    if w.shape() != (size, size) {
        return Err(mismatch("weights", format!("{name} is {:?}, expected {size}x{size}", w.shape())));
    }
    if !is_hpd(w)? {
        return Err(Error::WeightNotHpd(name));
    }
    Ok(())
}

fn auto_root<T: Scalar>(w: &QMatrix<T>, inverse: bool) -> Result<Option<QMatrix<T>>> {
    if T::EXACT {
        exact_hpd_root(w, inverse)
    } else {
        let r = if inverse { oracle::hpd_inv_sqrt_oracle(w)? } else { oracle::hpd_sqrt_oracle(w)? };
        Ok(Some(QMatrix::from_f64(&r)?))
    }
}

impl<T: Scalar> WeightedContext<T> {
    /// Builds the context; square roots are computed when representable.
    pub fn new(a: QMatrix<T>, m: QMatrix<T>, n: QMatrix<T>) -> Result<Self> {
        let mut ctx = Self::bare(a, m, n)?;
        ctx.m_half = auto_root(&ctx.m, false)?;
        ctx.n_inv_half = auto_root(&ctx.n, true)?;
        Ok(ctx)
    }

    /// Builds the context with caller-supplied `M^{1/2}` and `N^{-1/2}`.
    /// Missing roots are computed when representable.
    pub fn with_roots(
        a: QMatrix<T>,
        m: QMatrix<T>,
        n: QMatrix<T>,
        m_half: Option<QMatrix<T>>,
        n_inv_half: Option<QMatrix<T>>,
    ) -> Result<Self> {
        let mut ctx = Self::bare(a, m, n)?;
        ctx.m_half = match m_half {
            Some(r) => {
                check_supplied_root(&ctx.m, &r, false, "M^(1/2)")?;
                Some(r)
            }
            None => auto_root(&ctx.m, false)?,
        };
        ctx.n_inv_half = match n_inv_half {
            Some(r) => {
                check_supplied_root(&ctx.n, &r, true, "N^(-1/2)")?;
                Some(r)
            }
            None => auto_root(&ctx.n, true)?,
        };
        Ok(ctx)
    }

    /// Builds the context without any square roots.
    pub fn without_roots(a: QMatrix<T>, m: QMatrix<T>, n: QMatrix<T>) -> Result<Self> {
        Self::bare(a, m, n)
    }

    fn bare(a: QMatrix<T>, m: QMatrix<T>, n: QMatrix<T>) -> Result<Self> {
        check_weight(&m, a.rows(), "M")?;
        check_weight(&n, a.cols(), "N")?;
        let n_inv = inverse_hermitian(&n)?;
        let a_sharp = QMatrix::chain(&[&n_inv, &a.conj_transpose(), &m])?;
        let r = rank(&a);
        let rank_case = RankCase::classify(r, a.rows(), a.cols());
        let sharp_a_hermitian = a_sharp.matmul(&a)?.is_hermitian_default()?;
        let a_sharp_hermitian = a.matmul(&a_sharp)?.is_hermitian_default()?;
        Ok(WeightedContext {
            a,
            m,
            n,
            n_inv,
            a_sharp,
            rank: r,
            rank_case,
            sharp_a_hermitian,
            a_sharp_hermitian,
            m_half: None,
            n_inv_half: None,
        })
    }

    pub fn a(&self) -> &QMatrix<T> {
        &self.a
    }

    pub fn m(&self) -> &QMatrix<T> {
        &self.m
    }

    pub fn n(&self) -> &QMatrix<T> {
        &self.n
    }

    pub fn n_inv(&self) -> &QMatrix<T> {
        &self.n_inv
    }

    /// `A♯ = N^{-1} A* M`.
    pub fn a_sharp(&self) -> &QMatrix<T> {
        &self.a_sharp
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_case(&self) -> RankCase {
        self.rank_case
    }

    /// Whether `A♯A` is Hermitian.
    pub fn sharp_a_hermitian(&self) -> bool {
        self.sharp_a_hermitian
    }

    /// Whether `AA♯` is Hermitian.
    pub fn a_sharp_hermitian(&self) -> bool {
        self.a_sharp_hermitian
    }

    pub fn m_half(&self) -> Result<&QMatrix<T>> {
        self.m_half.as_ref().ok_or(Error::MissingSquareRoot("M^(1/2)"))
    }

    pub fn n_inv_half(&self) -> Result<&QMatrix<T>> {
        self.n_inv_half.as_ref().ok_or(Error::MissingSquareRoot("N^(-1/2)"))
    }

    /// `Ã = M^{1/2} A N^{-1/2}`.
    pub fn a_tilde(&self) -> Result<QMatrix<T>> {
        QMatrix::chain(&[self.m_half()?, &self.a, self.n_inv_half()?])
    }

    /// Deterministic dispatch: Hermitian `A♯A`, then Hermitian `AA♯`, then the
    /// general formulas (full rank first, then whichever minor-sum form has its root).
    pub fn formula(&self) -> WeightedFormula {
        let (m, n) = self.a.shape();
        if self.sharp_a_hermitian {
            if self.rank == n {
                WeightedFormula::HermitianColumnFullRank
            } else {
                WeightedFormula::HermitianColumnMinorSum
            }
        } else if self.a_sharp_hermitian {
            if self.rank == m {
                WeightedFormula::HermitianRowFullRank
            } else {
                WeightedFormula::HermitianRowMinorSum
            }
        } else if self.rank == n {
            WeightedFormula::ColumnFullRank
        } else if self.rank == m {
            WeightedFormula::RowFullRank
        } else if self.n_inv_half.is_none() && self.m_half.is_some() {
            WeightedFormula::RowMinorSum
        } else {
            WeightedFormula::ColumnMinorSum
        }
    }

    /// Whether `f` can be evaluated for this context (including root availability).
    pub fn supports(&self, f: WeightedFormula) -> bool {
        let (m, n) = self.a.shape();
        match f {
            WeightedFormula::HermitianColumnMinorSum => self.sharp_a_hermitian,
            WeightedFormula::HermitianColumnFullRank => self.sharp_a_hermitian && self.rank == n,
            WeightedFormula::HermitianRowMinorSum => self.a_sharp_hermitian,
            WeightedFormula::HermitianRowFullRank => self.a_sharp_hermitian && self.rank == m,
            WeightedFormula::ColumnMinorSum => self.n_inv_half.is_some(),
            WeightedFormula::ColumnFullRank => self.rank == n,
            WeightedFormula::RowMinorSum => self.m_half.is_some(),
            WeightedFormula::RowFullRank => self.rank == m,
        }
    }

    pub fn applicable_formulas(&self) -> Vec<WeightedFormula> {
        WeightedFormula::ALL.into_iter().filter(|&f| self.supports(f)).collect()
    }

    fn unsupported(&self, f: WeightedFormula) -> Error {
        match f {
            WeightedFormula::ColumnMinorSum => Error::MissingSquareRoot("N^(-1/2)"),
            WeightedFormula::RowMinorSum => Error::MissingSquareRoot("M^(1/2)"),
            _ => mismatch("wmp_inverse", format!("formula '{f}' does not apply to this matrix")),
        }
    }

    /// The column form behind a column formula.
    pub fn column_form(&self, f: WeightedFormula) -> Result<ColumnForm<T>> {
        if !f.is_column() || !self.supports(f) {
            return Err(self.unsupported(f));
        }
        let at = self.a.conj_transpose();
        let n = self.a.cols();
        match f {
            WeightedFormula::HermitianColumnMinorSum | WeightedFormula::HermitianColumnFullRank => {
                let r = if f == WeightedFormula::HermitianColumnFullRank { n } else { self.rank };
                ColumnForm::new(self.a_sharp.matmul(&self.a)?, self.a_sharp.clone(), None, r)
            }
            WeightedFormula::ColumnMinorSum => {
                let nmh = self.n_inv_half()?;
                let kernel = QMatrix::chain(&[nmh, &at, &self.m, &self.a, nmh])?;
                let source = QMatrix::chain(&[nmh, &at, &self.m])?;
                ColumnForm::new(kernel, source, Some(nmh.clone()), self.rank)
            }
            _ => {
                let source = at.matmul(&self.m)?;
                ColumnForm::new(source.matmul(&self.a)?, source, None, n)
            }
        }
    }

    /// The row form behind a row formula.
    pub fn row_form(&self, f: WeightedFormula) -> Result<RowForm<T>> {
        if f.is_column() || !self.supports(f) {
            return Err(self.unsupported(f));
        }
        let at = self.a.conj_transpose();
        let m = self.a.rows();
        match f {
            WeightedFormula::HermitianRowMinorSum | WeightedFormula::HermitianRowFullRank => {
                let r = if f == WeightedFormula::HermitianRowFullRank { m } else { self.rank };
                RowForm::new(self.a.matmul(&self.a_sharp)?, self.a_sharp.clone(), None, r)
            }
            WeightedFormula::RowMinorSum => {
                let mh = self.m_half()?;
                let kernel = QMatrix::chain(&[mh, &self.a, &self.n_inv, &at, mh])?;
                let source = QMatrix::chain(&[&self.n_inv, &at, mh])?;
                RowForm::new(kernel, source, Some(mh.clone()), self.rank)
            }
            _ => {
                let source = self.n_inv.matmul(&at)?;
                RowForm::new(self.a.matmul(&source)?, source, None, m)
            }
        }
    }

    /// Evaluates one formula.
    pub fn compute(&self, f: WeightedFormula) -> Result<QMatrix<T>> {
        if self.rank == 0 {
            if !self.supports(f) {
                return Err(self.unsupported(f));
            }
            return Ok(QMatrix::zeros(self.a.cols(), self.a.rows()));
        }
        if f.is_column() {
            self.column_form(f)?.matrix()
        } else {
            self.row_form(f)?.matrix()
        }
    }
}

/// A weighted Moore-Penrose inverse with the formula that produced it.
#[derive(Clone, Debug)]
pub struct WeightedInverse<T: Scalar> {
    pub x: QMatrix<T>,
    pub formula: WeightedFormula,
}

/// Weighted Moore-Penrose inverse `A†_{M,N}` using the dispatched formula.
pub fn wmp_inverse<T: Scalar>(ctx: &WeightedContext<T>) -> Result<WeightedInverse<T>> {
    let formula = ctx.formula();
    Ok(WeightedInverse { x: ctx.compute(formula)?, formula })
}

/// Every formula that applies to the context, evaluated.
pub fn wmp_inverse_all<T: Scalar>(ctx: &WeightedContext<T>) -> Result<Vec<(WeightedFormula, QMatrix<T>)>> {
    ctx.applicable_formulas().into_iter().map(|f| Ok((f, ctx.compute(f)?))).collect()
}

/// Largest entry moduli of the Penrose residuals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenroseResiduals {
    /// `AXA - A`
    pub axa: f64,
    /// `XAX - X`
    pub xax: f64,
    /// `(AX)* - AX`, or `(MAX)* - MAX` when weighted.
    pub left_symmetry: f64,
    /// `(XA)* - XA`, or `(NXA)* - NXA` when weighted.
    pub right_symmetry: f64,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        self.axa.max(self.xax).max(self.left_symmetry).max(self.right_symmetry)
    }

    /// True when all residuals vanish (exact) or are below `tol`.
    pub fn within(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

fn asym<T: Scalar>(s: &QMatrix<T>) -> Result<f64> {
    s.max_abs_diff(&s.conj_transpose())
}

/// Residuals of the four Penrose equations for a candidate `X`.
pub fn penrose_residuals<T: Scalar>(a: &QMatrix<T>, x: &QMatrix<T>) -> Result<PenroseResiduals> {
    let ax = a.matmul(x)?;
    let xa = x.matmul(a)?;
    Ok(PenroseResiduals {
        axa: ax.matmul(a)?.max_abs_diff(a)?,
        xax: xa.matmul(x)?.max_abs_diff(x)?,
        left_symmetry: asym(&ax)?,
        right_symmetry: asym(&xa)?,
    })
}

/// Residuals of `AXA = A`, `XAX = X`, `(MAX)* = MAX`, `(NXA)* = NXA`.
pub fn weighted_penrose_residuals<T: Scalar>(
    a: &QMatrix<T>,
    x: &QMatrix<T>,
    m: &QMatrix<T>,
    n: &QMatrix<T>,
) -> Result<PenroseResiduals> {
    let ax = a.matmul(x)?;
    let xa = x.matmul(a)?;
    Ok(PenroseResiduals {
        axa: ax.matmul(a)?.max_abs_diff(a)?,
        xax: xa.matmul(x)?.max_abs_diff(x)?,
        left_symmetry: asym(&m.matmul(&ax)?)?,
        right_symmetry: asym(&n.matmul(&xa)?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type M = QMatrix<Rational>;

    fn m(rows: &[&[&str]]) -> M {
        M::parse_rows(rows).unwrap()
    }

    fn weight_n() -> M {
        m(&[&["5", "0", "-4j"], &["0", "4", "0"], &["4j", "0", "5"]])
    }

    fn weight_m() -> M {
        m(&[&["5", "4k"], &["-4k", "5"]])
    }

    fn example_a() -> M {
        m(&[&["k", "-i", "j"], &["1", "0", "k"]])
    }

    #[test]
    fn hermitian_inverses() {
        let n_inv = inverse_hermitian(&weight_n()).unwrap();
        assert_eq!(n_inv, m(&[&["5/9", "0", "4/9j"], &["0", "1/4", "0"], &["-4/9j", "0", "5/9"]]));
        assert_eq!(weight_n().matmul(&n_inv).unwrap(), M::identity(3));
        assert_eq!(inverse_hermitian(&M::identity(3)).unwrap(), M::identity(3));
        let q = m(&[&["1", "i", "0"], &["-i", "2", "-j"], &["0", "j", "2"]]);
        let expect = m(&[&["3", "-2i", "-k"], &["2i", "2", "j"], &["k", "-j", "1"]]);
        assert_eq!(inverse_hermitian(&q).unwrap(), expect);
        assert_eq!(inverse_hermitian(&m(&[&["1", "1"], &["1", "1"]])), Err(Error::SingularMatrix));
    }

    #[test]
    fn general_inverses() {
        assert_eq!(inverse(&M::identity(2)).unwrap(), M::identity(2));
        assert_eq!(inverse(&m(&[&["i", "0"], &["0", "j"]])).unwrap(), m(&[&["-i", "0"], &["0", "-j"]]));
        let a = m(&[&["1+i", "j", "2"], &["k", "3", "-i"], &["0", "1-j", "1"]]);
        let (left, right) = inverse_both(&a).unwrap();
        assert_eq!(left, right);
        assert_eq!(a.matmul(&left).unwrap(), M::identity(3));
        assert_eq!(inverse(&m(&[&["1", "i"], &["j", "-k"]])), Err(Error::SingularMatrix));
    }

    #[test]
    fn moore_penrose_examples() {
        assert_eq!(mp_inverse(&M::identity(3)).unwrap(), M::identity(3));
        assert_eq!(mp_inverse(&m(&[&["i"], &["j"]])).unwrap(), m(&[&["-1/2i", "-1/2j"]]));
        assert_eq!(mp_inverse(&M::zeros(2, 3)).unwrap(), M::zeros(3, 2));
        let deficient = m(&[&["1", "i", "j"], &["k", "-j", "i"], &["2", "2i", "2j"]]);
        assert_eq!(rank(&deficient), 2);
        let all = mp_inverse_all(&deficient).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].1, all[1].1);
        let res = penrose_residuals(&deficient, &all[0].1).unwrap();
        assert_eq!(res.max(), 0.0);
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&example_a()), 2);
        assert_eq!(rank(&M::zeros(3, 2)), 0);
        assert_eq!(rank_exact(&m(&[&["i", "j"], &["k", "1"]])), 1);
        assert_eq!(RankCase::classify(2, 2, 3), RankCase::FullRow);
    }

    #[test]
    fn example_context() {
        let ctx = WeightedContext::new(example_a(), weight_m(), weight_n()).unwrap();
        assert!(!ctx.sharp_a_hermitian());
        assert!(!ctx.a_sharp_hermitian());
        let expect =
            m(&[&["2/3 + 1/3j + 2k", "-i", "-2/3 - i + 4/3j"], &["2 + 2/3i - 1/3k", "1/2j", "2/3i + j + 4/3k"]]);
        let at = ctx.a_tilde().unwrap();
        assert_eq!(at, expect);
        let gram = at.conj_transpose().matmul(&at).unwrap();
        assert_eq!(crate::det::principal_minor_sum(&gram, 2).unwrap(), Rational::new(9, 2));
        assert_eq!(ctx.formula(), WeightedFormula::RowFullRank);
        let all = wmp_inverse_all(&ctx).unwrap();
        assert!(all.len() >= 3);
        for (_, x) in &all[1..] {
            assert_eq!(x, &all[0].1);
        }
        let res = weighted_penrose_residuals(ctx.a(), &all[0].1, ctx.m(), ctx.n()).unwrap();
        assert_eq!(res.max(), 0.0);
    }

    #[test]
    fn identity_weights_reduce() {
        let a = m(&[&["1", "i", "j"], &["k", "-j", "i"]]);
        let ctx = WeightedContext::new(a.clone(), M::identity(2), M::identity(3)).unwrap();
        assert_eq!(wmp_inverse(&ctx).unwrap().x, mp_inverse(&a).unwrap());
    }

    #[test]
    fn bad_weights() {
        let a = example_a();
        let not_pd = m(&[&["1", "2i"], &["-2i", "1"]]);
        assert_eq!(WeightedContext::new(a.clone(), not_pd, weight_n()).unwrap_err(), Error::WeightNotHpd("M"));
        let irrational = m(&[&["2", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
        let deficient = m(&[&["1", "i", "j"], &["2", "2i", "2j"]]);
        let ctx = WeightedContext::new(deficient.clone(), weight_m(), irrational.clone()).unwrap();
        assert!(!ctx.sharp_a_hermitian() && !ctx.a_sharp_hermitian());
        let inv = wmp_inverse(&ctx).unwrap();
        assert_eq!(inv.formula, WeightedFormula::RowMinorSum);
        let oracle = crate::oracle::wpinv_oracle(&deficient, &weight_m(), &irrational).unwrap();
        assert!(inv.x.to_f64().approx_eq(&oracle, 1e-10));
        let ctx = WeightedContext::new(deficient, m(&[&["3", "0"], &["0", "1"]]), irrational).unwrap();
        assert_eq!(wmp_inverse(&ctx).unwrap_err(), Error::MissingSquareRoot("N^(-1/2)"));
    }
}
