//! Dense quaternion matrices and index sets.
//!
//! Structural operations (`replace_row`, `submatrix`, ...) use 1-based
//! indices; `Index<(usize, usize)>` is 0-based.

use std::fmt;
use std::ops::{Index, IndexMut};

use itertools::Itertools;

use crate::error::{mismatch, Error, Result};
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Debug)]
pub struct QMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion<T>>,
}

impl<T: Scalar> QMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Quaternion<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(mismatch("QMatrix::new", format!("{} entries for {rows}x{cols}", data.len())));
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion<T>>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(mismatch("QMatrix::from_rows", "ragged rows"));
        }
        QMatrix::new(m, n, rows.into_iter().flatten().collect())
    }

    /// Parses each entry with the quaternion text syntax, e.g. `[["k", "-i"], ["1", "0"]]`.
    pub fn parse_rows(rows: &[&[&str]]) -> Result<Self> {
        let parsed =
            rows.iter().map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        QMatrix::from_rows(parsed)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Quaternion::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        QMatrix::from_fn(n, n, |r, c| if r == c { Quaternion::one() } else { Quaternion::zero() })
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(entries: Vec<Quaternion<T>>) -> Self {
        let n = entries.len();
        let mut out = QMatrix::zeros(n, n);
        for (t, q) in entries.into_iter().enumerate() {
            out[(t, t)] = q;
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion<T>] {
        &self.data
    }

    /// 1-based entry access.
    pub fn get(&self, i: usize, j: usize) -> Result<&Quaternion<T>> {
        check_index(i, self.rows)?;
        check_index(j, self.cols)?;
        Ok(&self[(i - 1, j - 1)])
    }

    /// Row `i` (1-based) as a vector.
    pub fn row(&self, i: usize) -> Result<Vec<Quaternion<T>>> {
        check_index(i, self.rows)?;
        Ok(self.data[(i - 1) * self.cols..i * self.cols].to_vec())
    }

    /// Column `j` (1-based) as a vector.
    pub fn column(&self, j: usize) -> Result<Vec<Quaternion<T>>> {
        check_index(j, self.cols)?;
        Ok((0..self.rows).map(|r| self[(r, j - 1)].clone()).collect())
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    pub fn conj_transpose(&self) -> Self {
        QMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        QMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(mismatch("matmul", format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        Ok(QMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = Quaternion::zero();
            for t in 0..self.cols {
                acc += &self[(r, t)] * &rhs[(t, c)];
            }
            acc
        }))
    }

    /// Product of a chain of matrices, left to right.
    pub fn chain(factors: &[&Self]) -> Result<Self> {
        let (first, rest) = factors.split_first().ok_or_else(|| mismatch("chain", "no factors"))?;
        rest.iter().try_fold((*first).clone(), |acc, f| acc.matmul(f))
    }

    fn zip_with(
        &self,
        rhs: &Self,
        op: &'static str,
        f: impl Fn(&Quaternion<T>, &Quaternion<T>) -> Quaternion<T>,
    ) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(mismatch(op, format!("{:?} vs {:?}", self.shape(), rhs.shape())));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(QMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|q| -q.clone())
    }

    /// `q · A`
    pub fn scale_left(&self, q: &Quaternion<T>) -> Self {
        self.map(|a| q * a)
    }

    /// `A · q`
    pub fn scale_right(&self, q: &Quaternion<T>) -> Self {
        self.map(|a| a * q)
    }

    pub fn scale_real(&self, s: &T) -> Self {
        self.map(|a| a.scale(s))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&Quaternion<T>) -> Quaternion<U>) -> QMatrix<U> {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> QMatrix<f64> {
        self.map(|q| q.to_f64())
    }

    pub fn from_f64(m: &QMatrix<f64>) -> Result<Self> {
        let data = m.data.iter().map(Quaternion::from_f64).collect::<Result<Vec<_>>>()?;
        QMatrix::new(m.rows, m.cols, data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|q| q.is_zero())
    }

    /// Largest entry modulus, in `f64`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.abs_f64()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - rhs`, in `f64`.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<f64> {
        Ok(self.sub(rhs)?.max_abs())
    }

    /// Exact equality for exact backends, `max |a - b| <= tol` otherwise.
    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        if self.shape() != rhs.shape() {
            return false;
        }
        if T::EXACT {
            return self == rhs;
        }
        self.max_abs_diff(rhs).is_ok_and(|d| d <= tol)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }

    /// `max |A - A*| <= tol`. Use `T::zero()` for an exact test.
    pub fn is_hermitian(&self, tol: &T) -> Result<bool> {
        let n = self
            .require_square()
            .map_err(|_| mismatch("is_hermitian", format!("{}x{} is not square", self.rows, self.cols)))?;
        let tol2 = tol.clone() * tol.clone();
        for r in 0..n {
            for c in r..n {
                let d = &self[(r, c)] - &self[(c, r)].conj();
                if d.norm2() > tol2 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Hermitian test with the backend's default tolerance.
    pub fn is_hermitian_default(&self) -> Result<bool> {
        self.is_hermitian(&default_hermitian_tol(self))
    }

    pub fn replace_column(&self, j: usize, b: &[Quaternion<T>]) -> Result<Self> {
        check_index(j, self.cols)?;
        if b.len() != self.rows {
            return Err(mismatch("replace_column", format!("column of length {} for {} rows", b.len(), self.rows)));
        }
        let mut out = self.clone();
        for (r, q) in b.iter().enumerate() {
            out[(r, j - 1)] = q.clone();
        }
        Ok(out)
    }

    pub fn replace_row(&self, i: usize, b: &[Quaternion<T>]) -> Result<Self> {
        check_index(i, self.rows)?;
        if b.len() != self.cols {
            return Err(mismatch("replace_row", format!("row of length {} for {} columns", b.len(), self.cols)));
        }
        let mut out = self.clone();
        for (c, q) in b.iter().enumerate() {
            out[(i - 1, c)] = q.clone();
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self> {
        if rows.universe() != self.rows || cols.universe() != self.cols {
            return Err(mismatch(
                "submatrix",
                format!(
                    "index universes {}x{} for a {}x{} matrix",
                    rows.universe(),
                    cols.universe(),
                    self.rows,
                    self.cols
                ),
            ));
        }
        Ok(QMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows.indices()[r] - 1, cols.indices()[c] - 1)].clone()
        }))
    }

    /// Principal submatrix `A_α^α`.
    pub fn principal(&self, alpha: &IndexSet) -> Result<Self> {
        self.submatrix(alpha, alpha)
    }

    /// Removes row `i` and column `j` (1-based).
    pub fn delete_row_col(&self, i: usize, j: usize) -> Result<Self> {
        check_index(i, self.rows)?;
        check_index(j, self.cols)?;
        let keep_r: Vec<usize> = (0..self.rows).filter(|&r| r != i - 1).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|&c| c != j - 1).collect();
        Ok(QMatrix::from_fn(keep_r.len(), keep_c.len(), |r, c| self[(keep_r[r], keep_c[c])].clone()))
    }
}

/// Default Hermitian tolerance: zero for exact backends, `1e-10 · max |a_ij|` for floats.
pub fn default_hermitian_tol<T: Scalar>(a: &QMatrix<T>) -> T {
    if T::EXACT {
        T::zero()
    } else {
        T::from_f64(1e-10 * a.max_abs()).unwrap_or_else(T::zero)
    }
}

pub(crate) fn check_index(index: usize, bound: usize) -> Result<()> {
    if index == 0 || index > bound {
        return Err(Error::IndexOutOfRange { index, bound });
    }
    Ok(())
}

impl<T> Index<(usize, usize)> for QMatrix<T> {
    type Output = Quaternion<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion<T> {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for QMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion<T> {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Scalar> fmt::Display for QMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row = (0..self.cols).map(|c| self[(r, c)].to_string()).join(", ");
            writeln!(f, "[{row}]")?;
        }
        Ok(())
    }
}

/// Strictly increasing 1-based index sequence inside `1..=universe`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct IndexSet {
    indices: Vec<usize>,
    universe: usize,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, universe: usize) -> Result<Self> {
        for &i in &indices {
            check_index(i, universe)?;
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!("index set {indices:?} is not strictly increasing")));
        }
        Ok(IndexSet { indices, universe })
    }

    pub fn full(universe: usize) -> Self {
        IndexSet { indices: (1..=universe).collect(), universe }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// 1-based position of `i` inside the set.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.indices.binary_search(&i).ok().map(|p| p + 1)
    }
}

/// Lexicographic stream of the `k`-element subsets of `1..=n`, restricted to
/// those containing `fixed` when given. Empty when `k > n`.
pub fn enumerate_index_sets(k: usize, n: usize, fixed: Option<usize>) -> impl Iterator<Item = IndexSet> {
    (1..=n)
        .combinations(k)
        .filter(move |c| fixed.is_none_or(|f| c.contains(&f)))
        .map(move |indices| IndexSet { indices, universe: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type M = QMatrix<Rational>;

    fn m(rows: &[&[&str]]) -> M {
        M::parse_rows(rows).unwrap()
    }

    fn example_a() -> M {
        m(&[&["k", "-j", "j"], &["1", "0", "k"]])
    }

    #[test]
    fn conj_transpose_entrywise() {
        let at = example_a().conj_transpose();
        assert_eq!(at, m(&[&["-k", "1"], &["j", "0"], &["-j", "-k"]]));
        assert_eq!(M::identity(3).conj_transpose(), M::identity(3));
    }

    #[test]
    fn gram_products() {
        let a = example_a();
        let aa = a.matmul(&a.conj_transpose()).unwrap();
        assert_eq!(aa, m(&[&["3", "-i + k"], &["i - k", "2"]]));
        let b = m(&[&["k", "-j", "j"], &["0", "1", "i"]]);
        let bb = b.matmul(&b.conj_transpose()).unwrap();
        assert_eq!(bb, m(&[&["3", "-j + k"], &["j - k", "2"]]));
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hermitian_tests() {
        let n = m(&[&["5", "0", "-4j"], &["0", "4", "0"], &["4j", "0", "5"]]);
        assert!(n.is_hermitian(&Rational::from(0)).unwrap());
        assert!(M::identity(4).is_hermitian_default().unwrap());
        assert!(!m(&[&["1", "i"], &["i", "1"]]).is_hermitian_default().unwrap());
        assert!(!m(&[&["i", "0"], &["0", "1"]]).is_hermitian_default().unwrap());
        assert!(example_a().is_hermitian_default().is_err());
    }

    #[test]
    fn replacement() {
        let z = vec![Quaternion::zero(), Quaternion::zero()];
        assert_eq!(M::identity(2).replace_column(1, &z).unwrap(), m(&[&["0", "0"], &["0", "1"]]));
        let a = example_a();
        assert_eq!(a.replace_row(2, &a.row(2).unwrap()).unwrap(), a);
        assert!(a.replace_row(3, &a.row(1).unwrap()).is_err());
        assert!(a.replace_column(1, &a.row(1).unwrap()).is_err());
    }

    #[test]
    fn index_set_enumeration() {
        let all: Vec<Vec<usize>> = enumerate_index_sets(2, 3, None).map(|s| s.indices().to_vec()).collect();
        assert_eq!(all, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        let fixed: Vec<Vec<usize>> = enumerate_index_sets(2, 3, Some(2)).map(|s| s.indices().to_vec()).collect();
        assert_eq!(fixed, vec![vec![1, 2], vec![2, 3]]);
        assert_eq!(enumerate_index_sets(3, 6, Some(1)).count(), 10);
        assert_eq!(enumerate_index_sets(4, 3, None).count(), 0);
    }

    #[test]
    fn submatrices() {
        let a = example_a();
        let s = a.submatrix(&IndexSet::new(vec![2], 2).unwrap(), &IndexSet::new(vec![1, 3], 3).unwrap()).unwrap();
        assert_eq!(s, m(&[&["1", "k"]]));
        assert_eq!(a.delete_row_col(1, 2).unwrap(), m(&[&["1", "k"]]));
        assert!(IndexSet::new(vec![2, 1], 3).is_err());
        assert!(IndexSet::new(vec![4], 3).is_err());
    }
}
