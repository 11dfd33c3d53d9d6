//! Row and column determinants of quaternion matrices.
//!
//! `rdet_i` sums, over every permutation written in row normal form, the
//! signed product that first walks the cycle through `i` and then the
//! remaining cycles in increasing order of their least element. `cdet_j`
//! is the mirror image: the remaining cycles come first in decreasing order
//! of their least element and the cycle through `j` closes the product with
//! an entry of column `j`. Permutations are generated directly in normal form.

use crate::error::{Error, Result};
use crate::matrix::{check_index, enumerate_index_sets, QMatrix};
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

/// Largest order accepted by the permutation sums.
pub const MAX_PERMUTATION_ORDER: usize = 8;

/// Permutation stored as the ordered list of cycles used by a determinant
/// product. Indices are 1-based; each cycle `[c0, c1, ..]` maps `c_t` to
/// `c_{t+1}` and contributes `a_{c0 c1} a_{c1 c2} .. a_{c_last c0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePermutation {
    n: usize,
    lead: usize,
    cycles: Vec<Vec<usize>>,
}

impl CyclePermutation {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn lead(&self) -> usize {
        self.lead
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    /// `(-1)^(n - r)` as a boolean: true for `+1`.
    pub fn is_even(&self) -> bool {
        (self.n - self.cycles.len()).is_multiple_of(2)
    }

    /// `images()[x - 1] = σ(x)`.
    pub fn images(&self) -> Vec<usize> {
        let mut img = vec![0; self.n];
        for c in &self.cycles {
            for (t, &x) in c.iter().enumerate() {
                img[x - 1] = c[(t + 1) % c.len()];
            }
        }
        img
    }

    /// Normal form of `rdet_lead`: lead cycle first, others opened at their
    /// minimum and sorted by increasing minimum.
    pub fn is_row_normal_form(&self) -> bool {
        let Some((first, rest)) = self.cycles.split_first() else { return false };
        first[0] == self.lead && opened_at_min(rest) && rest.windows(2).all(|w| w[0][0] < w[1][0])
    }

    /// Normal form of `cdet_lead`: other cycles opened at their minimum in
    /// decreasing order of minimum, lead cycle last.
    pub fn is_column_normal_form(&self) -> bool {
        let Some((last, rest)) = self.cycles.split_last() else { return false };
        last[0] == self.lead && opened_at_min(rest) && rest.windows(2).all(|w| w[0][0] > w[1][0])
    }

    /// Signed ordered product of the entries of `a` along the stored cycles.
    pub fn product<T: Scalar>(&self, a: &QMatrix<T>) -> Quaternion<T> {
        let mut prod = Quaternion::one();
        for c in &self.cycles {
            for (t, &x) in c.iter().enumerate() {
                prod = &prod * &a[(x - 1, c[(t + 1) % c.len()] - 1)];
            }
        }
        if self.is_even() {
            prod
        } else {
            -prod
        }
    }
}

fn opened_at_min(cycles: &[Vec<usize>]) -> bool {
    cycles.iter().all(|c| c.iter().all(|&x| x >= c[0]))
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_PERMUTATION_ORDER {
        return Err(Error::SizeCapExceeded { n, cap: MAX_PERMUTATION_ORDER });
    }
    Ok(())
}

/// Enumerates all cycle decompositions of `1..=n` with the lead cycle first
/// and the others opened at their minimum in increasing order.
fn generate_row_forms(n: usize, lead: usize) -> Vec<Vec<Vec<usize>>> {
    fn grow(
        n: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        done: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        done.push(current.clone());
        match (1..=n).find(|&x| !used[x - 1]) {
            None => out.push(done.clone()),
            Some(s) => {
                used[s - 1] = true;
                let mut fresh = vec![s];
                grow(n, used, &mut fresh, done, out);
                used[s - 1] = false;
            }
        }
        done.pop();
        for x in 1..=n {
            if !used[x - 1] {
                used[x - 1] = true;
                current.push(x);
                grow(n, used, current, done, out);
                current.pop();
                used[x - 1] = false;
            }
        }
    }
    let mut used = vec![false; n];
    used[lead - 1] = true;
    let mut out = Vec::new();
    grow(n, &mut used, &mut vec![lead], &mut Vec::new(), &mut out);
    out
}

/// All `n!` permutations in the normal form of `rdet_i`.
pub fn row_normal_forms(n: usize, i: usize) -> Result<Vec<CyclePermutation>> {
    check_order(n)?;
    check_index(i, n)?;
    Ok(generate_row_forms(n, i).into_iter().map(|cycles| CyclePermutation { n, lead: i, cycles }).collect())
}

/// All `n!` permutations in the normal form of `cdet_j`.
pub fn column_normal_forms(n: usize, j: usize) -> Result<Vec<CyclePermutation>> {
    check_order(n)?;
    check_index(j, n)?;
    Ok(generate_row_forms(n, j)
        .into_iter()
        .map(|mut cycles| {
            let lead_cycle = cycles.remove(0);
            cycles.reverse();
            cycles.push(lead_cycle);
            CyclePermutation { n, lead: j, cycles }
        })
        .collect())
}

struct Walk<'a, T> {
    a: &'a QMatrix<T>,
    n: usize,
    used: Vec<bool>,
    acc: Quaternion<T>,
    visits: usize,
    mirrored: bool,
}

impl<T: Scalar> Walk<'_, T> {
    fn extend(&self, prod: &Quaternion<T>, from: usize, to: usize) -> Quaternion<T> {
        if self.mirrored {
            &self.a[(to, from)] * prod
        } else {
            prod * &self.a[(from, to)]
        }
    }

    fn step(&mut self, cur: usize, start: usize, prod: Quaternion<T>, closed: usize) {
        let closed_prod = self.extend(&prod, cur, start);
        match (0..self.n).find(|&x| !self.used[x]) {
            None => {
                self.visits += 1;
                if (self.n - closed - 1).is_multiple_of(2) {
                    self.acc += closed_prod;
                } else {
                    self.acc += -closed_prod;
                }
            }
            Some(s) => {
                self.used[s] = true;
                self.step(s, s, closed_prod, closed + 1);
                self.used[s] = false;
            }
        }
        for x in 0..self.n {
            if !self.used[x] {
                self.used[x] = true;
                let next = self.extend(&prod, cur, x);
                self.step(x, start, next, closed);
                self.used[x] = false;
            }
        }
    }
}

/// Depth-first evaluation sharing prefixes between permutations. `mirrored`
/// builds products right to left, which yields the column normal form.
fn walk_sum<T: Scalar>(a: &QMatrix<T>, lead: usize, mirrored: bool) -> (Quaternion<T>, usize) {
    let n = a.rows();
    let mut w = Walk { a, n, used: vec![false; n], acc: Quaternion::zero(), visits: 0, mirrored };
    w.used[lead - 1] = true;
    w.step(lead - 1, lead - 1, Quaternion::one(), 0);
    (w.acc, w.visits)
}

fn prepare<T: Scalar>(a: &QMatrix<T>, index: usize) -> Result<usize> {
    let n = a.require_square()?;
    check_order(n)?;
    check_index(index, n)?;
    Ok(n)
}

/// The `i`-th row determinant (1-based).
pub fn rdet<T: Scalar>(i: usize, a: &QMatrix<T>) -> Result<Quaternion<T>> {
    prepare(a, i)?;
    Ok(walk_sum(a, i, false).0)
}

/// The `j`-th column determinant (1-based).
pub fn cdet<T: Scalar>(j: usize, a: &QMatrix<T>) -> Result<Quaternion<T>> {
    prepare(a, j)?;
    Ok(walk_sum(a, j, true).0)
}

/// `rdet_i` together with the number of permutations visited.
pub fn rdet_counted<T: Scalar>(i: usize, a: &QMatrix<T>) -> Result<(Quaternion<T>, usize)> {
    prepare(a, i)?;
    Ok(walk_sum(a, i, false))
}

/// `cdet_j` together with the number of permutations visited.
pub fn cdet_counted<T: Scalar>(j: usize, a: &QMatrix<T>) -> Result<(Quaternion<T>, usize)> {
    prepare(a, j)?;
    Ok(walk_sum(a, j, true))
}

/// `rdet_i` through recursive expansion along row `i`.
pub fn rdet_by_expansion<T: Scalar>(i: usize, a: &QMatrix<T>) -> Result<Quaternion<T>> {
    let n = prepare(a, i)?;
    if n == 1 {
        return Ok(a[(0, 0)].clone());
    }
    let mut acc = Quaternion::zero();
    for j in 1..=n {
        acc += &a[(i - 1, j - 1)] * &right_cofactor_with(a, i, j, rdet_by_expansion)?;
    }
    Ok(acc)
}

/// `cdet_j` through recursive expansion along column `j`.
pub fn cdet_by_expansion<T: Scalar>(j: usize, a: &QMatrix<T>) -> Result<Quaternion<T>> {
    let n = prepare(a, j)?;
    if n == 1 {
        return Ok(a[(0, 0)].clone());
    }
    let mut acc = Quaternion::zero();
    for i in 1..=n {
        acc += &left_cofactor_with(a, i, j, cdet_by_expansion)? * &a[(i - 1, j - 1)];
    }
    Ok(acc)
}

type DetFn<T> = fn(usize, &QMatrix<T>) -> Result<Quaternion<T>>;

fn right_cofactor_with<T: Scalar>(a: &QMatrix<T>, i: usize, j: usize, det: DetFn<T>) -> Result<Quaternion<T>> {
    if i == j {
        return det(1, &a.delete_row_col(i, i)?);
    }
    let reduced = a.replace_column(j, &a.column(i)?)?.delete_row_col(i, i)?;
    let pos = if j < i { j } else { j - 1 };
    Ok(-det(pos, &reduced)?)
}

fn left_cofactor_with<T: Scalar>(a: &QMatrix<T>, i: usize, j: usize, det: DetFn<T>) -> Result<Quaternion<T>> {
    if i == j {
        return det(1, &a.delete_row_col(j, j)?);
    }
    let reduced = a.replace_row(i, &a.row(j)?)?.delete_row_col(j, j)?;
    let pos = if i < j { i } else { i - 1 };
    Ok(-det(pos, &reduced)?)
}

fn require_hermitian<T: Scalar>(a: &QMatrix<T>) -> Result<usize> {
    let n = a.require_square()?;
    if !a.is_hermitian_default()? {
        return Err(Error::NotHermitian);
    }
    Ok(n)
}

/// Right cofactor `R_ij` of a Hermitian matrix.
pub fn cofactor_right<T: Scalar>(a: &QMatrix<T>, i: usize, j: usize) -> Result<Quaternion<T>> {
    let n = require_hermitian(a)?;
    check_index(i, n)?;
    check_index(j, n)?;
    if n < 2 {
        return Ok(Quaternion::one());
    }
    right_cofactor_with(a, i, j, rdet)
}

/// Left cofactor `L_ij` of a Hermitian matrix.
pub fn cofactor_left<T: Scalar>(a: &QMatrix<T>, i: usize, j: usize) -> Result<Quaternion<T>> {
    let n = require_hermitian(a)?;
    check_index(i, n)?;
    check_index(j, n)?;
    if n < 2 {
        return Ok(Quaternion::one());
    }
    left_cofactor_with(a, i, j, cdet)
}

/// Bound on the vector part tolerated when reading a float determinant as real.
fn imag_tolerance<T: Scalar>(a: &QMatrix<T>) -> f64 {
    let n = a.rows() as i32;
    let factorial: f64 = (1..=a.rows()).map(|x| x as f64).product();
    1e-10 * factorial * a.max_abs().max(1.0).powi(n)
}

pub(crate) fn real_part_checked<T: Scalar>(a: &QMatrix<T>, q: Quaternion<T>) -> Result<T> {
    if T::EXACT {
        if !q.is_real() {
            return Err(Error::NumericalInconsistency(format!("determinant {q} of a Hermitian matrix is not real")));
        }
    } else {
        let imag = q.imag_norm2().to_f64().sqrt();
        if !imag.is_finite() || imag > imag_tolerance(a) {
            return Err(Error::NumericalInconsistency(format!("determinant {q} has a vector part of size {imag:e}")));
        }
        if !q.re.is_finite() {
            return Err(Error::NotANumber);
        }
    }
    Ok(q.re)
}

/// Determinant of a Hermitian matrix assumed (not checked) Hermitian.
pub(crate) fn det_real_unchecked<T: Scalar>(a: &QMatrix<T>) -> Result<T> {
    if a.rows() == 0 {
        return Ok(T::one());
    }
    let q = rdet(1, a)?;
    real_part_checked(a, q)
}

/// Common real value of all row and column determinants of a Hermitian matrix.
pub fn det_hermitian<T: Scalar>(a: &QMatrix<T>) -> Result<T> {
    require_hermitian(a)?;
    det_real_unchecked(a)
}

/// Computes every `rdet_i` and `cdet_j` and requires them to coincide.
pub fn det_hermitian_verified<T: Scalar>(a: &QMatrix<T>) -> Result<T> {
    let n = require_hermitian(a)?;
    let value = det_real_unchecked(a)?;
    let reference = Quaternion::from_real(value.clone());
    let tol = imag_tolerance(a);
    for t in 1..=n {
        for (name, q) in [("rdet", rdet(t, a)?), ("cdet", cdet(t, a)?)] {
            let agree = if T::EXACT { q == reference } else { (&q - &reference).abs_f64() <= tol };
            if !agree {
                return Err(Error::NumericalInconsistency(format!("{name}_{t} = {q} differs from {value}")));
            }
        }
    }
    Ok(value)
}

/// Double determinant `det(A A*)`, equal to `det(A* A)`.
pub fn ddet<T: Scalar>(a: &QMatrix<T>) -> Result<T> {
    a.require_square()?;
    let g = a.matmul(&a.conj_transpose())?;
    check_order(g.rows())?;
    det_real_unchecked(&g)
}

/// Sum of the principal minors of order `k` of a Hermitian matrix.
pub fn principal_minor_sum<T: Scalar>(a: &QMatrix<T>, k: usize) -> Result<T> {
    require_hermitian(a)?;
    principal_minor_sum_unchecked(a, k)
}

pub(crate) fn principal_minor_sum_unchecked<T: Scalar>(a: &QMatrix<T>, k: usize) -> Result<T> {
    let n = a.rows();
    check_order(k.min(n))?;
    let mut acc = T::zero();
    for alpha in enumerate_index_sets(k, n, None) {
        acc = acc + det_real_unchecked(&a.principal(&alpha)?)?;
    }
    Ok(acc)
}

/// Coefficients `(d_1, .., d_n)` of `t^n - d_1 t^(n-1) + .. + (-1)^n d_n`.
pub fn char_poly<T: Scalar>(a: &QMatrix<T>) -> Result<Vec<T>> {
    let n = require_hermitian(a)?;
    (1..=n).map(|k| principal_minor_sum_unchecked(a, k)).collect()
}

/// Evaluates the characteristic polynomial at `t`.
pub fn eval_char_poly<T: Scalar>(coeffs: &[T], t: &T) -> T {
    let mut acc = T::one();
    for (k, d) in coeffs.iter().enumerate() {
        let term = if k % 2 == 0 { -d.clone() } else { d.clone() };
        acc = acc * t.clone() + term;
    }
    acc
}
