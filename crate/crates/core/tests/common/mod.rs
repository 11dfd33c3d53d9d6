#![allow(dead_code)]

use std::path::PathBuf;

use quatcramer::geninv::{inverse_hermitian, rank};
use quatcramer::{QMatrix, Quaternion, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = QMatrix<Rational>;
pub type F = QMatrix<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(path)
}

pub fn q(rows: &[&[&str]]) -> Q {
    Q::parse_rows(rows).unwrap()
}

fn component(rng: &mut ChaCha8Rng, fractions: bool) -> Rational {
    let num = rng.random_range(-3i64..=3);
    let den = if fractions { rng.random_range(1i64..=2) } else { 1 };
    Rational::new(num, den)
}

/// Quaternion with small integer (or half-integer) components.
pub fn small_quaternion(rng: &mut ChaCha8Rng, fractions: bool) -> Quaternion<Rational> {
    Quaternion::new(
        component(rng, fractions),
        component(rng, fractions),
        component(rng, fractions),
        component(rng, fractions),
    )
}

pub fn matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Q {
    QMatrix::from_fn(m, n, |_, _| small_quaternion(rng, false))
}

pub fn fractional_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Q {
    QMatrix::from_fn(m, n, |_, _| small_quaternion(rng, true))
}

/// Random `m×n` matrix of rank exactly `r`.
pub fn matrix_of_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize) -> Q {
    if r == 0 {
        return Q::zeros(m, n);
    }
    loop {
        let a = matrix(rng, m, r).matmul(&matrix(rng, r, n)).unwrap();
        if rank(&a) == r {
            return a;
        }
    }
}

pub fn hermitian(rng: &mut ChaCha8Rng, n: usize) -> Q {
    let c = fractional_matrix(rng, n, n);
    c.add(&c.conj_transpose()).unwrap()
}

/// `(S, S², S⁻¹)` for a random Hermitian positive definite `S`.
pub fn hpd_with_root(rng: &mut ChaCha8Rng, n: usize) -> (Q, Q, Q) {
    let c = QMatrix::from_fn(n, n, |_, _| {
        let mut x = small_quaternion(rng, false);
        x = x.div_real(&Rational::from(2)).unwrap();
        x
    });
    let s = c.conj_transpose().matmul(&c).unwrap().add(&Q::identity(n)).unwrap();
    let w = s.matmul(&s).unwrap();
    let s_inv = inverse_hermitian(&s).unwrap();
    (s, w, s_inv)
}

pub fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Q {
    matrix_of_rank(rng, n, n, n)
}

pub fn float_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> F {
    QMatrix::from_fn(m, n, |_, _| {
        Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    })
}

pub fn float_matrix_of_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize) -> F {
    if r == 0 {
        return F::zeros(m, n);
    }
    float_matrix(rng, m, r).matmul(&float_matrix(rng, r, n)).unwrap()
}

pub fn float_hpd(rng: &mut ChaCha8Rng, n: usize) -> F {
    let c = float_matrix(rng, n, n);
    c.conj_transpose().matmul(&c).unwrap().add(&F::identity(n)).unwrap()
}

pub mod strategies {
    use super::{F, Q};
    use proptest::prelude::*;
    use quatcramer::{QMatrix, Quaternion, Rational};

    pub fn rational() -> impl Strategy<Value = Rational> {
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Rational::new(n, d))
    }

    pub fn quaternion() -> impl Strategy<Value = Quaternion<Rational>> {
        [rational(), rational(), rational(), rational()].prop_map(Quaternion::from_components)
    }

    pub fn nonzero_quaternion() -> impl Strategy<Value = Quaternion<Rational>> {
        quaternion().prop_filter("nonzero", |q| !q.is_zero())
    }

    pub fn float_quaternion() -> impl Strategy<Value = Quaternion<f64>> {
        [-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64].prop_map(Quaternion::from_components)
    }

    pub fn matrix(m: usize, n: usize) -> impl Strategy<Value = Q> {
        proptest::collection::vec(quaternion(), m * n).prop_map(move |d| QMatrix::new(m, n, d).unwrap())
    }

    pub fn float_matrix(m: usize, n: usize) -> impl Strategy<Value = F> {
        proptest::collection::vec(float_quaternion(), m * n).prop_map(move |d| QMatrix::new(m, n, d).unwrap())
    }

    pub fn any_matrix(max: usize) -> impl Strategy<Value = Q> {
        (1..=max, 1..=max).prop_flat_map(|(m, n)| matrix(m, n))
    }

    pub fn square(max: usize) -> impl Strategy<Value = Q> {
        (1..=max).prop_flat_map(|n| matrix(n, n))
    }

    pub fn hermitian(max: usize) -> impl Strategy<Value = Q> {
        square(max).prop_map(|c| c.add(&c.conj_transpose()).unwrap())
    }

    /// Matrix of rank at most `r`, as a product of thin factors.
    pub fn low_rank(max: usize) -> impl Strategy<Value = Q> {
        (1..=max, 1..=max, 0..=max).prop_flat_map(|(m, n, r)| {
            let r = r.min(m).min(n);
            (matrix(m, r.max(1)), matrix(r.max(1), n), Just(r)).prop_map(move |(x, y, r)| {
                if r == 0 {
                    Q::zeros(m, n)
                } else {
                    x.matmul(&y).unwrap()
                }
            })
        })
    }

    /// `(S, S², S⁻¹)` with `S = C*C + I`.
    pub fn hpd_with_root(n: usize) -> impl Strategy<Value = (Q, Q, Q)> {
        matrix(n, n).prop_map(move |c| {
            let s = c.conj_transpose().matmul(&c).unwrap().add(&Q::identity(n)).unwrap();
            let inv = quatcramer::geninv::inverse_hermitian(&s).unwrap();
            (s.clone(), s.matmul(&s).unwrap(), inv)
        })
    }
}
