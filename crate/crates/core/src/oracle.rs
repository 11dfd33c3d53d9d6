//! Numerical ground truth through the complex adjoint representation.
//!
//! A quaternion matrix `A = A1 + A2 j` (with complex `A1`, `A2`) is mapped to
//! `chi(A) = [[A1, A2], [-conj(A2), conj(A1)]]`, a real-algebra homomorphism
//! compatible with conjugate transposition. Nothing in this module uses row
//! or column determinants.

use nalgebra::{Cholesky, Complex, DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

pub type ComplexMatrix = DMatrix<Complex<f64>>;

type QVec = Vec<Quaternion<f64>>;

pub fn chi<T: Scalar>(a: &QMatrix<T>) -> ComplexMatrix {
    let (m, n) = a.shape();
    let mut c = ComplexMatrix::zeros(2 * m, 2 * n);
    for r in 0..m {
        for s in 0..n {
            let q = a[(r, s)].to_f64();
            let a1 = Complex::new(q.re, q.i);
            let a2 = Complex::new(q.j, q.k);
            c[(r, s)] = a1;
            c[(r, n + s)] = a2;
            c[(m + r, s)] = -a2.conj();
            c[(m + r, n + s)] = a1.conj();
        }
    }
    c
}

/// Inverse of [`chi`], averaging the two copies of each block. Fails when the
/// block symmetry is violated beyond round-off.
pub fn chi_inv(c: &ComplexMatrix) -> Result<QMatrix<f64>> {
    let (rr, cc) = c.shape();
    if rr % 2 != 0 || cc % 2 != 0 {
        return Err(Error::NotAQuaternionImage);
    }
    let (m, n) = (rr / 2, cc / 2);
    let scale = c.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut out = QMatrix::zeros(m, n);
    for r in 0..m {
        for s in 0..n {
            let (tl, tr) = (c[(r, s)], c[(r, n + s)]);
            let (bl, br) = (c[(m + r, s)], c[(m + r, n + s)]);
            if (tl - br.conj()).norm() > 1e-8 * scale || (tr + bl.conj()).norm() > 1e-8 * scale {
                return Err(Error::NotAQuaternionImage);
            }
            let a1 = (tl + br.conj()) * 0.5;
            let a2 = (tr - bl.conj()) * 0.5;
            out[(r, s)] = Quaternion::new(a1.re, a1.im, a2.re, a2.im);
        }
    }
    Ok(out)
}

/// Complex image `[v1; -conj(v2)]` of a quaternion column `v = v1 + v2 j`.
fn phi(v: &[Quaternion<f64>]) -> DVector<Complex<f64>> {
    let n = v.len();
    DVector::from_fn(2 * n, |t, _| {
        if t < n {
            Complex::new(v[t].re, v[t].i)
        } else {
            -Complex::new(v[t - n].j, v[t - n].k).conj()
        }
    })
}

/// Quaternion column `x - conj(y) j` represented by the complex column `[x; y]`.
fn phi_inv(col: &[Complex<f64>]) -> QVec {
    let n = col.len() / 2;
    (0..n)
        .map(|t| {
            let (x, y) = (col[t], col[n + t]);
            let v2 = -y.conj();
            Quaternion::new(x.re, x.im, v2.re, v2.im)
        })
        .collect()
}

fn qdot(u: &[Quaternion<f64>], v: &[Quaternion<f64>]) -> Quaternion<f64> {
    u.iter().zip(v).fold(Quaternion::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
}

fn qnorm(v: &[Quaternion<f64>]) -> f64 {
    v.iter().map(|q| q.norm2()).sum::<f64>().sqrt()
}

fn orthogonalize(v: &[Quaternion<f64>], basis: &[QVec]) -> QVec {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = qdot(b, &w);
            for (wt, bt) in w.iter_mut().zip(b) {
                *wt = wt.clone() - bt * &c;
            }
        }
    }
    w
}

/// Greedily extends `basis` with candidates, always taking the one with the
/// largest component orthogonal to the current basis, until `target` vectors.
fn extend_orthonormal(basis: &mut Vec<QVec>, candidates: &[QVec], target: usize) -> Result<()> {
    let mut remaining: Vec<usize> = (0..candidates.len()).collect();
    while basis.len() < target {
        let best = remaining
            .iter()
            .enumerate()
            .map(|(pos, &c)| {
                let w = orthogonalize(&candidates[c], basis);
                (pos, qnorm(&w), w)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((pos, norm, w)) = best else {
            return Err(Error::NumericalInconsistency("could not complete a quaternion orthonormal basis".into()));
        };
        if norm < 1e-6 {
            return Err(Error::NumericalInconsistency("could not complete a quaternion orthonormal basis".into()));
        }
        remaining.remove(pos);
        basis.push(w.into_iter().map(|q| q.scale(&(1.0 / norm))).collect());
    }
    Ok(())
}

fn columns_to_matrix(rows: usize, cols: &[QVec]) -> QMatrix<f64> {
    QMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
}

fn matrix_columns(a: &QMatrix<f64>) -> Vec<QVec> {
    (0..a.cols()).map(|c| (0..a.rows()).map(|r| a[(r, c)].clone()).collect()).collect()
}

fn unit_vectors(n: usize) -> Vec<QVec> {
    matrix_columns(&QMatrix::identity(n))
}

/// Numerical-rank threshold `2 · max(rows, cols) · eps · σ_max` for a complex image.
pub fn rank_tolerance(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    2.0 * rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Singular values of the complex image, descending (each appears twice).
pub fn chi_singular_values<T: Scalar>(a: &QMatrix<T>) -> Vec<f64> {
    let c = chi(a);
    if c.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(c, false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Quaternion rank: half the numerical rank of `chi(A)`.
pub fn rank_oracle<T: Scalar>(a: &QMatrix<T>) -> usize {
    let s = chi_singular_values(a);
    let Some(&smax) = s.first() else { return 0 };
    if smax == 0.0 {
        return 0;
    }
    let tau = rank_tolerance(2 * a.rows(), 2 * a.cols(), smax);
    s.iter().filter(|&&x| x > tau).count().div_ceil(2)
}

/// Moore-Penrose inverse through the complex SVD of `chi(A)`.
pub fn pinv_oracle<T: Scalar>(a: &QMatrix<T>) -> QMatrix<f64> {
    let (m, n) = a.shape();
    let c = chi(a);
    if c.is_empty() {
        return QMatrix::zeros(n, m);
    }
    let svd = SVD::new(c, true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let tau = rank_tolerance(2 * m, 2 * n, smax);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let vt = svd.v_t.as_ref().expect("right singular vectors requested");
    let mut x = ComplexMatrix::zeros(2 * n, 2 * m);
    for (t, &s) in svd.singular_values.iter().enumerate() {
        if s > tau && s > 0.0 {
            let v = vt.row(t).adjoint();
            let uh = u.column(t).adjoint();
            x += (v * uh) * Complex::new(1.0 / s, 0.0);
        }
    }
    chi_inv(&x).expect("pseudo-inverse of a quaternion image is a quaternion image")
}

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Right eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: QMatrix<f64>,
}

impl HermitianEigen {
    /// `U f(Λ) U*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> QMatrix<f64> {
        let d = QMatrix::diag(self.values.iter().map(|&l| Quaternion::from_real(f(l))).collect());
        let u = &self.vectors;
        u.matmul(&d).and_then(|ud| ud.matmul(&u.conj_transpose())).expect("square factors")
    }
}

/// Eigendecomposition `A = U diag(λ) U*` of a Hermitian quaternion matrix.
pub fn eig_hermitian<T: Scalar>(a: &QMatrix<T>) -> Result<HermitianEigen> {
    let a = a.to_f64();
    let n = a.require_square()?;
    if !a.all_finite() {
        return Err(Error::NotANumber);
    }
    if !a.is_hermitian_default()? {
        return Err(Error::NotHermitian);
    }
    let c = chi(&a);
    let c = (&c + c.adjoint()) * Complex::new(0.5, 0.0);
    let eig = SymmetricEigen::new(c);
    let candidates: Vec<QVec> = (0..2 * n).map(|t| phi_inv(eig.eigenvectors.column(t).as_slice())).collect();
    let mut basis = Vec::with_capacity(n);
    extend_orthonormal(&mut basis, &candidates, n)?;
    let mut pairs: Vec<(f64, QVec)> = basis
        .into_iter()
        .map(|v| {
            let av = a.matmul(&columns_to_matrix(n, std::slice::from_ref(&v))).expect("shapes agree");
            let lambda = qdot(&v, &matrix_columns(&av)[0]).re;
            (lambda, v)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let values = pairs.iter().map(|p| p.0).collect();
    let cols: Vec<QVec> = pairs.into_iter().map(|p| p.1).collect();
    Ok(HermitianEigen { values, vectors: columns_to_matrix(n, &cols) })
}

/// Real eigenvalues of `chi(A)` for a Hermitian `A`, each listed twice, ascending.
pub fn chi_hermitian_spectrum<T: Scalar>(a: &QMatrix<T>) -> Vec<f64> {
    let c = chi(a);
    let c = (&c + c.adjoint()) * Complex::new(0.5, 0.0);
    let mut v: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn hpd_eigen<T: Scalar>(w: &QMatrix<T>) -> Result<HermitianEigen> {
    let eig = eig_hermitian(w).map_err(|e| match e {
        Error::NotHermitian => Error::NotHpd,
        other => other,
    })?;
    let top = eig.values.iter().copied().fold(0.0, f64::max);
    if eig.values.iter().any(|&l| l <= 1e-13 * top || l <= 0.0) {
        return Err(Error::NotHpd);
    }
    Ok(eig)
}

/// Positive definiteness test through the eigenvalues.
pub fn is_hpd_oracle<T: Scalar>(w: &QMatrix<T>) -> bool {
    hpd_eigen(w).is_ok()
}

/// `W^p` for a Hermitian positive definite `W`.
pub fn hpd_power<T: Scalar>(w: &QMatrix<T>, p: f64) -> Result<QMatrix<f64>> {
    Ok(hpd_eigen(w)?.apply(|l| l.powf(p)))
}

pub fn hpd_sqrt_oracle<T: Scalar>(w: &QMatrix<T>) -> Result<QMatrix<f64>> {
    Ok(hpd_eigen(w)?.apply(f64::sqrt))
}

pub fn hpd_inv_sqrt_oracle<T: Scalar>(w: &QMatrix<T>) -> Result<QMatrix<f64>> {
    Ok(hpd_eigen(w)?.apply(|l| 1.0 / l.sqrt()))
}

fn weight_power<T: Scalar>(w: &QMatrix<T>, p: f64, name: &'static str) -> Result<QMatrix<f64>> {
    hpd_power(w, p).map_err(|e| match e {
        Error::NotHpd | Error::NotHermitian | Error::NonSquare { .. } => Error::WeightNotHpd(name),
        other => other,
    })
}

fn check_weights<T: Scalar>(a: &QMatrix<T>, m: &QMatrix<T>, n: &QMatrix<T>) -> Result<()> {
    if m.shape() != (a.rows(), a.rows()) || n.shape() != (a.cols(), a.cols()) {
        return Err(Error::DimensionMismatch {
            op: "weights",
            detail: format!("A is {:?}, M is {:?}, N is {:?}", a.shape(), m.shape(), n.shape()),
        });
    }
    Ok(())
}

/// Weighted Moore-Penrose inverse `N^{-1/2} pinv(M^{1/2} A N^{-1/2}) M^{1/2}`.
pub fn wpinv_oracle<T: Scalar>(a: &QMatrix<T>, m: &QMatrix<T>, n: &QMatrix<T>) -> Result<QMatrix<f64>> {
    check_weights(a, m, n)?;
    let mh = weight_power(m, 0.5, "M")?;
    let nmh = weight_power(n, -0.5, "N")?;
    let at = QMatrix::chain(&[&mh, &a.to_f64(), &nmh])?;
    QMatrix::chain(&[&nmh, &pinv_oracle(&at), &mh])
}

/// Weighted singular value decomposition `A = U D V*` with `U* M U = I`
/// and `V* N^{-1} V = I`.
#[derive(Clone, Debug)]
pub struct WsvdFactors {
    pub u: QMatrix<f64>,
    pub v: QMatrix<f64>,
    /// Positive singular values, descending.
    pub sigma: Vec<f64>,
    pub rank: usize,
}

impl WsvdFactors {
    /// The `m×n` matrix with `sigma` on its leading diagonal.
    pub fn d_matrix(&self) -> QMatrix<f64> {
        let mut d = QMatrix::zeros(self.u.rows(), self.v.rows());
        for (t, &s) in self.sigma.iter().enumerate() {
            d[(t, t)] = Quaternion::from_real(s);
        }
        d
    }

    /// `N^{-1} V diag(Σ^{-1}, 0) U* M`.
    pub fn weighted_pinv<T: Scalar>(&self, m: &QMatrix<T>, n: &QMatrix<T>) -> Result<QMatrix<f64>> {
        let mut dinv = QMatrix::zeros(self.v.rows(), self.u.rows());
        for (t, &s) in self.sigma.iter().enumerate() {
            dinv[(t, t)] = Quaternion::from_real(1.0 / s);
        }
        let ninv = weight_power(n, -1.0, "N")?;
        QMatrix::chain(&[&ninv, &self.v, &dinv, &self.u.conj_transpose(), &m.to_f64()])
    }
}

pub fn wsvd<T: Scalar>(a: &QMatrix<T>, m: &QMatrix<T>, n: &QMatrix<T>) -> Result<WsvdFactors> {
    check_weights(a, m, n)?;
    let (rows, cols) = a.shape();
    let mh = weight_power(m, 0.5, "M")?;
    let mmh = weight_power(m, -0.5, "M")?;
    let nh = weight_power(n, 0.5, "N")?;
    let nmh = weight_power(n, -0.5, "N")?;
    let at = QMatrix::chain(&[&mh, &a.to_f64(), &nmh])?;
    let rank = rank_oracle(&at);

    let mut vs: Vec<QVec> = Vec::with_capacity(cols);
    if rank > 0 {
        let svd = SVD::new(chi(&at), false, true);
        let vt = svd.v_t.as_ref().expect("right singular vectors requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
        let leading: Vec<QVec> = order[..2 * rank]
            .iter()
            .map(|&t| {
                let v: Vec<Complex<f64>> = vt.row(t).iter().map(|z| z.conj()).collect();
                phi_inv(&v)
            })
            .collect();
        extend_orthonormal(&mut vs, &leading, rank)?;
    }
    let mut us: Vec<QVec> = Vec::with_capacity(rows);
    let mut pairs: Vec<(f64, QVec, QVec)> = vs
        .iter()
        .map(|v| {
            let av =
                matrix_columns(&at.matmul(&columns_to_matrix(cols, std::slice::from_ref(v))).expect("shapes agree"))
                    .remove(0);
            let s = qnorm(&av);
            (s, v.clone(), av.into_iter().map(|q| q.scale(&(1.0 / s))).collect())
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let sigma: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    vs = pairs.iter().map(|p| p.1.clone()).collect();
    us.extend(pairs.into_iter().map(|p| p.2));
    extend_orthonormal(&mut vs, &unit_vectors(cols), cols)?;
    extend_orthonormal(&mut us, &unit_vectors(rows), rows)?;
    let u = mmh.matmul(&columns_to_matrix(rows, &us))?;
    let v = nh.matmul(&columns_to_matrix(cols, &vs))?;
    Ok(WsvdFactors { u, v, sigma, rank })
}

/// Eigenvalues of `N^{-1} K` for Hermitian `K` and HPD `N`, via a complex
/// Cholesky factorization of `chi(N)`. Each value appears twice, ascending.
pub fn generalized_spectrum<T: Scalar>(k: &QMatrix<T>, n: &QMatrix<T>) -> Result<Vec<f64>> {
    let chol = Cholesky::new(chi(n)).ok_or(Error::WeightNotHpd("N"))?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or(Error::WeightNotHpd("N"))?;
    let s = &linv * chi(k) * linv.adjoint();
    let s = (&s + s.adjoint()) * Complex::new(0.5, 0.0);
    let mut v: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Columnwise complex image of a quaternion vector, exposed for tests.
pub fn chi_vector(v: &[Quaternion<f64>]) -> DVector<Complex<f64>> {
    phi(v)
}
