mod common;

use common::strategies::*;
use proptest::prelude::*;
use quatcramer::io::{read_matrix, write_matrix, MatrixFile};
use quatcramer::{QMatrix, Rational};

proptest! {
    #[test]
    fn rational_matrices_round_trip(a in any_matrix(4)) {
        let text = serde_json::to_string(&MatrixFile::from_matrix(&a)).unwrap();
        let back: QMatrix<Rational> = serde_json::from_str::<MatrixFile>(&text).unwrap().to_matrix().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn float_matrices_round_trip_bit_exactly(a in (1..=4usize, 1..=4usize).prop_flat_map(|(m, n)| float_matrix(m, n))) {
        let text = serde_json::to_string(&MatrixFile::from_matrix(&a)).unwrap();
        let back: QMatrix<f64> = serde_json::from_str::<MatrixFile>(&text).unwrap().to_matrix().unwrap();
        for (x, y) in back.entries().iter().zip(a.entries()) {
            for (p, q) in x.components().iter().zip(y.components()) {
                prop_assert_eq!(p.to_bits(), q.to_bits());
            }
        }
    }

    #[test]
    fn files_round_trip(a in any_matrix(3)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        write_matrix(&path, &a).unwrap();
        prop_assert_eq!(read_matrix::<Rational>(&path).unwrap(), a);
    }
}

#[test]
fn rational_strings_are_reduced() {
    let file: MatrixFile = serde_json::from_str(r#"{"rows":1,"cols":1,"data":[["2/4","-6/3",0,"0.5"]]}"#).unwrap();
    let a: QMatrix<Rational> = file.to_matrix().unwrap();
    assert_eq!(a.get(1, 1).unwrap().to_string(), "1/2 - 2i + 1/2k");
}

#[test]
fn wrong_length_is_rejected() {
    let file: MatrixFile = serde_json::from_str(r#"{"rows":2,"cols":1,"data":[[1,0,0,0]]}"#).unwrap();
    assert!(file.to_matrix::<Rational>().is_err());
}
