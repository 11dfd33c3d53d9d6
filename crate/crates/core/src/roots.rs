//! Square roots and positive-definiteness tests for Hermitian weights.
//!
//! Floats go through the oracle eigendecomposition. For exact backends a root
//! is produced only when it is itself exact: eigenvalues are located
//! numerically, snapped to squares of small rationals, and the candidate
//! `f(W) = Σ f(λ_k) Π_{l≠k} (W - λ_l) / (λ_k - λ_l)` is accepted only after
//! an exact check of `R² = W` (or `R² W = I`) and of positive definiteness.

use crate::det::det_real_unchecked;
use crate::error::{Error, Result};
use crate::matrix::{IndexSet, QMatrix};
use crate::oracle;
use crate::scalar::Scalar;

/// Positive definiteness: leading principal minors for exact backends,
/// eigenvalues for floats.
pub fn is_hpd<T: Scalar>(w: &QMatrix<T>) -> Result<bool> {
    if !w.is_square() || !w.is_hermitian_default()? {
        return Ok(false);
    }
    if !T::EXACT {
        return Ok(oracle::is_hpd_oracle(w));
    }
    for k in 1..=w.rows() {
        let lead = IndexSet::full(k);
        let minor = QMatrix::from_fn(k, k, |r, c| w[(lead.indices()[r] - 1, lead.indices()[c] - 1)].clone());
        if det_real_unchecked(&minor)? <= T::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Best rational approximation of `x` with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: i64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let p2 = ai.checked_mul(p1)?.checked_add(p0)?;
        let q2 = ai.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac.abs() < 1e-12 || (x - p1 as f64 / q1 as f64).abs() <= 1e-12 * x.abs().max(1.0) {
            break;
        }
        r = 1.0 / frac;
    }
    (q1 != 0).then_some((p1, q1))
}

fn sylvester<T: Scalar>(w: &QMatrix<T>, lambdas: &[T], values: &[T]) -> Result<QMatrix<T>> {
    let n = w.rows();
    let id = QMatrix::<T>::identity(n);
    let mut acc = QMatrix::zeros(n, n);
    for (k, (lk, fk)) in lambdas.iter().zip(values).enumerate() {
        let mut term = id.scale_real(fk);
        for (l, ll) in lambdas.iter().enumerate() {
            if l == k {
                continue;
            }
            let shifted = w.sub(&id.scale_real(ll))?;
            let denom = lk.clone() - ll.clone();
            term = term.matmul(&shifted)?.map(|q| q.div_real(&denom).expect("distinct eigenvalues"));
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Exact `W^{1/2}` (or `W^{-1/2}` when `inverse`) if it has rational entries.
pub fn exact_hpd_root<T: Scalar>(w: &QMatrix<T>, inverse: bool) -> Result<Option<QMatrix<T>>> {
    if !is_hpd(w)? {
        return Err(Error::NotHpd);
    }
    let eig = oracle::eig_hermitian(w)?;
    let mut roots: Vec<(i64, i64)> = Vec::new();
    for &l in &eig.values {
        let Some(s) = rationalize(l.max(0.0).sqrt(), 1_000_000) else { return Ok(None) };
        if s.0 <= 0 {
            return Ok(None);
        }
        if !roots.contains(&s) {
            roots.push(s);
        }
    }
    let sqrt_vals: Vec<T> = roots.iter().map(|&(p, q)| T::from_ratio(p, q)).collect();
    let lambdas: Vec<T> = sqrt_vals.iter().map(|s| s.clone() * s.clone()).collect();
    let values: Vec<T> =
        if inverse { sqrt_vals.iter().map(|s| T::one().checked_div(s)).collect::<Result<_>>()? } else { sqrt_vals };
    let r = sylvester(w, &lambdas, &values)?;
    let square = r.matmul(&r)?;
    let ok = if inverse { square.matmul(w)? == QMatrix::identity(w.rows()) } else { square == *w };
    if ok && is_hpd(&r)? {
        Ok(Some(r))
    } else {
        Ok(None)
    }
}

fn float_root<T: Scalar>(w: &QMatrix<T>, inverse: bool) -> Result<QMatrix<T>> {
    let r = if inverse { oracle::hpd_inv_sqrt_oracle(w)? } else { oracle::hpd_sqrt_oracle(w)? };
    QMatrix::from_f64(&r)
}

/// Hermitian positive definite square root.
pub fn hpd_sqrt<T: Scalar>(w: &QMatrix<T>) -> Result<QMatrix<T>> {
    if !T::EXACT {
        return float_root(w, false);
    }
    exact_hpd_root(w, false)?.ok_or(Error::MissingSquareRoot("W^(1/2)"))
}

/// Inverse of the Hermitian positive definite square root.
pub fn hpd_inv_sqrt<T: Scalar>(w: &QMatrix<T>) -> Result<QMatrix<T>> {
    if !T::EXACT {
        return float_root(w, true);
    }
    exact_hpd_root(w, true)?.ok_or(Error::MissingSquareRoot("W^(-1/2)"))
}

/// Checks a caller-supplied root: `R` Hermitian and `R² = W` (or `R² W = I`).
pub fn check_supplied_root<T: Scalar>(w: &QMatrix<T>, r: &QMatrix<T>, inverse: bool, name: &'static str) -> Result<()> {
    if r.shape() != w.shape() || !r.is_hermitian_default()? {
        return Err(Error::MissingSquareRoot(name));
    }
    let square = r.matmul(r)?;
    let (lhs, rhs) = if inverse { (square.matmul(w)?, QMatrix::identity(w.rows())) } else { (square, w.clone()) };
    let tol = 1e-9 * w.max_abs().max(1.0);
    if !lhs.approx_eq(&rhs, tol) {
        return Err(Error::MissingSquareRoot(name));
    }
    Ok(())
}
