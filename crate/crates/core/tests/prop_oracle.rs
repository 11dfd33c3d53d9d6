mod common;

use common::strategies::*;
use proptest::prelude::*;
use quatcramer::det::ddet;
use quatcramer::oracle::*;
use quatcramer::{QMatrix, Scalar};

fn hpd(n: usize) -> impl Strategy<Value = common::F> {
    float_matrix(n, n).prop_map(move |c| c.conj_transpose().matmul(&c).unwrap().add(&QMatrix::identity(n)).unwrap())
}

proptest! {
    #[test]
    fn chi_is_a_star_homomorphism((a, b) in (1..=3usize, 1..=3usize, 1..=3usize).prop_flat_map(|(m, k, n)| (float_matrix(m, k), float_matrix(k, n)))) {
        let prod = chi(&a.matmul(&b).unwrap());
        prop_assert!((prod - chi(&a) * chi(&b)).camax() <= 1e-12);
        prop_assert!((chi(&a.conj_transpose()) - chi(&a).adjoint()).camax() == 0.0);
        prop_assert!(chi_inv(&chi(&a)).unwrap().max_abs_diff(&a).unwrap() == 0.0);
    }

    #[test]
    fn hermitian_spectrum_pairs(h in hermitian(4)) {
        let spec = chi_hermitian_spectrum(&h);
        let scale = spec.iter().map(|x| x.abs()).fold(1.0, f64::max);
        for pair in spec.chunks(2) {
            prop_assert!((pair[0] - pair[1]).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn wsvd_invariants((a, mw, nw) in (1..=4usize, 1..=4usize).prop_flat_map(|(m, n)| (float_matrix(m, n), hpd(m), hpd(n)))) {
        let (m, n) = a.shape();
        let f = wsvd(&a, &mw, &nw).unwrap();
        let n_inv = hpd_power(&nw, -1.0).unwrap();
        let u = QMatrix::chain(&[&f.u.conj_transpose(), &mw, &f.u]).unwrap();
        let v = QMatrix::chain(&[&f.v.conj_transpose(), &n_inv, &f.v]).unwrap();
        let rec = QMatrix::chain(&[&f.u, &f.d_matrix(), &f.v.conj_transpose()]).unwrap();
        let scale = f.sigma.first().copied().unwrap_or(1.0).max(1.0);
        prop_assert!(u.max_abs_diff(&QMatrix::identity(m)).unwrap() <= 1e-9);
        prop_assert!(v.max_abs_diff(&QMatrix::identity(n)).unwrap() <= 1e-9 * scale);
        prop_assert!(rec.max_abs_diff(&a).unwrap() <= 1e-9 * scale);
        prop_assert!(f.sigma.windows(2).all(|w| w[0] >= w[1]));
        let k = QMatrix::chain(&[&a.conj_transpose(), &mw, &a]).unwrap();
        let mut spec = generalized_spectrum(&k, &nw).unwrap();
        spec.reverse();
        for (s, l) in f.sigma.iter().zip(spec.iter().step_by(2)) {
            prop_assert!((s * s - l).abs() <= 1e-8 * scale * scale, "{} vs {l}", s * s);
        }
    }

    #[test]
    fn complex_determinant_matches_double_determinant(a in square(3).prop_filter("order 3", |a| a.rows() == 3)) {
        let c = chi(&a).determinant();
        let d = ddet(&a).unwrap().to_f64();
        prop_assert!(c.re >= -1e-9 * d.abs().max(1.0));
        prop_assert!((c.re - d).abs() <= 1e-6 * d.abs().max(1.0), "{} vs {d}", c.re);
    }

    #[test]
    fn hpd_roots_square_back(w in (1..=4usize).prop_flat_map(hpd)) {
        let s = hpd_sqrt_oracle(&w).unwrap();
        let si = hpd_inv_sqrt_oracle(&w).unwrap();
        let n = w.rows();
        prop_assert!(s.matmul(&s).unwrap().max_abs_diff(&w).unwrap() <= 1e-9 * w.max_abs());
        prop_assert!(QMatrix::chain(&[&si, &w, &si]).unwrap().max_abs_diff(&QMatrix::identity(n)).unwrap() <= 1e-9);
    }
}
