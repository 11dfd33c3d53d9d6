mod common;

use common::strategies::*;
use proptest::prelude::*;
use quatcramer::det::*;
use quatcramer::oracle::chi_hermitian_spectrum;
use quatcramer::{Quaternion, Scalar};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_determinants_agree(a in hermitian(4)) {
        let n = a.rows();
        let first = rdet(1, &a).unwrap();
        prop_assert!(first.is_real());
        for i in 1..=n {
            prop_assert_eq!(&rdet(i, &a).unwrap(), &first);
            prop_assert_eq!(&cdet(i, &a).unwrap(), &first);
        }
    }

    #[test]
    fn row_and_column_homogeneity((a, b, i) in square(4).prop_flat_map(|a| { let n = a.rows(); (Just(a), quaternion(), 1..=n) })) {
        let row: Vec<_> = a.row(i).unwrap().iter().map(|x| &b * x).collect();
        prop_assert_eq!(rdet(i, &a.replace_row(i, &row).unwrap()).unwrap(), &b * &rdet(i, &a).unwrap());
        let col: Vec<_> = a.column(i).unwrap().iter().map(|x| x * &b).collect();
        prop_assert_eq!(cdet(i, &a.replace_column(i, &col).unwrap()).unwrap(), &cdet(i, &a).unwrap() * &b);
    }

    #[test]
    fn row_and_column_additivity((a, u, i) in square(4).prop_flat_map(|a| { let n = a.rows(); (Just(a), proptest::collection::vec(quaternion(), n), 1..=n) })) {
        let sum_row: Vec<_> = a.row(i).unwrap().iter().zip(&u).map(|(x, y)| x + y).collect();
        let lhs = rdet(i, &a.replace_row(i, &sum_row).unwrap()).unwrap();
        prop_assert_eq!(lhs, &rdet(i, &a).unwrap() + &rdet(i, &a.replace_row(i, &u).unwrap()).unwrap());
        let sum_col: Vec<_> = a.column(i).unwrap().iter().zip(&u).map(|(x, y)| x + y).collect();
        let lhs = cdet(i, &a.replace_column(i, &sum_col).unwrap()).unwrap();
        prop_assert_eq!(lhs, &cdet(i, &a).unwrap() + &cdet(i, &a.replace_column(i, &u).unwrap()).unwrap());
    }

    #[test]
    fn dependent_rows_and_columns_vanish((h, c, i) in (2..=4usize).prop_flat_map(|n| (hermitian(n).prop_filter("order", move |h| h.rows() == n), proptest::collection::vec(quaternion(), n), 1..=n))) {
        let n = h.rows();
        let mut row = vec![Quaternion::zero(); n];
        let mut col = vec![Quaternion::zero(); n];
        for l in (1..=n).filter(|&l| l != i) {
            for k in 1..=n {
                row[k - 1] = &row[k - 1] + &(&c[l - 1] * h.get(l, k).unwrap());
                col[k - 1] = &col[k - 1] + &(h.get(k, l).unwrap() * &c[l - 1]);
            }
        }
        let hr = h.replace_row(i, &row).unwrap();
        prop_assert!(rdet(i, &hr).unwrap().is_zero());
        prop_assert!(cdet(i, &hr).unwrap().is_zero());
        let hc = h.replace_column(i, &col).unwrap();
        prop_assert!(cdet(i, &hc).unwrap().is_zero());
        prop_assert!(rdet(i, &hc).unwrap().is_zero());
    }

    #[test]
    fn gram_determinants_coincide(a in square(4)) {
        let l = det_hermitian(&a.matmul(&a.conj_transpose()).unwrap()).unwrap();
        let r = det_hermitian(&a.conj_transpose().matmul(&a).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn hermitian_determinant_matches_spectrum(a in hermitian(4)) {
        let det = det_hermitian(&a).unwrap().to_f64();
        let spec = chi_hermitian_spectrum(&a);
        let prod: f64 = spec.iter().step_by(2).product();
        let scale = spec.iter().map(|x| x.abs()).fold(1.0, f64::max).powi(a.rows() as i32);
        prop_assert!((det - prod).abs() <= 1e-8 * scale, "{det} vs {prod}");
    }

    #[test]
    fn expansions_match_permutation_sums(a in hermitian(4)) {
        for i in 1..=a.rows() {
            prop_assert_eq!(rdet_by_expansion(i, &a).unwrap(), rdet(i, &a).unwrap());
            prop_assert_eq!(cdet_by_expansion(i, &a).unwrap(), cdet(i, &a).unwrap());
        }
    }
}

proptest! {
    #[test]
    fn enumeration_visits_factorial_normal_forms(n in 1..=6usize, i in 1..=6usize) {
        let i = i.min(n);
        let factorial: usize = (1..=n).product();
        let rows = row_normal_forms(n, i).unwrap();
        let cols = column_normal_forms(n, i).unwrap();
        prop_assert_eq!(rows.len(), factorial);
        prop_assert_eq!(cols.len(), factorial);
        prop_assert!(rows.iter().all(|p| p.is_row_normal_form() && p.lead() == i));
        prop_assert!(cols.iter().all(|p| p.is_column_normal_form() && p.lead() == i));
        let mut images: Vec<_> = rows.iter().map(|p| p.images()).collect();
        images.sort();
        images.dedup();
        prop_assert_eq!(images.len(), factorial);
    }
}

#[test]
fn counted_walk_reports_factorial() {
    let a = quatcramer::QMatrix::<quatcramer::Rational>::identity(5);
    assert_eq!(rdet_counted(2, &a).unwrap().1, 120);
    assert_eq!(cdet_counted(3, &a).unwrap().1, 120);
}

#[test]
fn size_cap_is_enforced() {
    let a = quatcramer::QMatrix::<f64>::identity(MAX_PERMUTATION_ORDER + 1);
    assert!(matches!(rdet(1, &a), Err(quatcramer::Error::SizeCapExceeded { .. })));
}
