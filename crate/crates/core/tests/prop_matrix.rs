mod common;

use common::strategies::*;
use proptest::prelude::*;
use quatcramer::{enumerate_index_sets, IndexSet};

proptest! {
    #[test]
    fn adjoint_reverses_products((a, b) in (1..=4usize, 1..=4usize, 1..=4usize).prop_flat_map(|(m, k, n)| (matrix(m, k), matrix(k, n)))) {
        let lhs = a.matmul(&b).unwrap().conj_transpose();
        let rhs = b.conj_transpose().matmul(&a.conj_transpose()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gram_matrices_are_hermitian(a in any_matrix(4)) {
        prop_assert!(a.matmul(&a.conj_transpose()).unwrap().is_hermitian_default().unwrap());
        prop_assert!(a.conj_transpose().matmul(&a).unwrap().is_hermitian_default().unwrap());
    }

    #[test]
    fn principal_submatrices_stay_hermitian(h in hermitian(4), k in 1..=4usize) {
        let n = h.rows();
        let k = k.min(n);
        for alpha in enumerate_index_sets(k, n, None) {
            prop_assert!(h.principal(&alpha).unwrap().is_hermitian_default().unwrap());
            prop_assert_eq!(h.principal(&alpha).unwrap(), h.submatrix(&alpha, &alpha).unwrap());
        }
    }

    #[test]
    fn index_sets_are_increasing(n in 1..=6usize, k in 1..=6usize, fixed in 1..=6usize) {
        let k = k.min(n);
        let fixed = fixed.min(n);
        let mut count = 0;
        for s in enumerate_index_sets(k, n, Some(fixed)) {
            prop_assert!(s.indices().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(s.contains(fixed));
            count += 1;
        }
        let expected = (0..k - 1).fold(1usize, |acc, t| acc * (n - 1 - t) / (t + 1));
        prop_assert_eq!(count, expected);
    }
}

#[test]
fn index_set_rejects_unsorted() {
    assert!(IndexSet::new(vec![2, 1], 3).is_err());
    assert!(IndexSet::new(vec![1, 4], 3).is_err());
}
