mod common;

use common::strategies::*;
use common::Q;
use proptest::prelude::*;
use quatcramer::geninv::{wmp_inverse, WeightedContext};
use quatcramer::solver::*;
use quatcramer::{QMatrix, Rational};

/// Consistent weighted instance `D = A X0 B` with all roots supplied.
fn instance() -> impl Strategy<Value = RestrictedEquation<Rational>> {
    (low_rank(3), low_rank(3)).prop_flat_map(|(a, b)| {
        let (m, n) = a.shape();
        let (p, q) = b.shape();
        (Just(a), Just(b), matrix(n, p), hpd_with_root(m), hpd_with_root(n), hpd_with_root(p), hpd_with_root(q))
            .prop_map(|(a, b, x0, (_, mw, _), (_, nw, nmh), (ph, pw, _), (_, qw, _))| {
                let d = QMatrix::chain(&[&a, &x0, &b]).unwrap();
                RestrictedEquation::two_sided(a, b, d, mw, nw, pw, qw).unwrap().with_roots(Some(nmh), Some(ph))
            })
    })
}

fn pinv(a: &Q, m: &Q, n: &Q, m_half: Option<Q>, n_inv_half: Option<Q>) -> Q {
    let ctx = WeightedContext::with_roots(a.clone(), m.clone(), n.clone(), m_half, n_inv_half).unwrap();
    wmp_inverse(&ctx).unwrap().x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn routes_and_formulas_agree(eq in instance()) {
        let rep = solve(&eq, &SolveOptions::verifying()).unwrap();
        let v = rep.verification.unwrap();
        prop_assert!(v.checks.len() >= 3);
        prop_assert_eq!(v.max_deviation, 0.0);
    }

    #[test]
    fn solution_is_the_weighted_composition(eq in instance()) {
        let rep = solve(&eq, &SolveOptions::default()).unwrap();
        let a_pinv = pinv(&eq.a, &eq.m, &eq.n, None, eq.n_inv_half.clone());
        let b_pinv = pinv(&eq.b, &eq.p, &eq.q, eq.p_half.clone(), None);
        prop_assert_eq!(rep.x, QMatrix::chain(&[&a_pinv, &eq.d, &b_pinv]).unwrap());
    }

    #[test]
    fn consistent_instances_solve_in_restricted_spaces(eq in instance()) {
        let rep = solve(&eq, &SolveOptions::default()).unwrap();
        prop_assert!(rep.solvable);
        prop_assert_eq!(rep.residual_primary, 0.0);
        prop_assert_eq!(rep.restriction_residual, 0.0);
        prop_assert_eq!(rep.restricted_space_residual, 0.0);
    }

    #[test]
    fn real_scaling_of_d_scales_x(eq in instance(), c in (1i64..=5, 1i64..=4)) {
        let c = Rational::new(c.0, c.1);
        let mut scaled = eq.clone();
        scaled.d = eq.d.scale_real(&c);
        let x = solve(&eq, &SolveOptions::default()).unwrap().x;
        prop_assert_eq!(solve(&scaled, &SolveOptions::default()).unwrap().x, x.scale_real(&c));
    }

    #[test]
    fn left_only_matches_two_sided_with_identity(a in low_rank(3), k in 1..=3usize) {
        let m = a.rows();
        let d = Q::identity(m).matmul(&QMatrix::from_fn(m, k, |i, j| quatcramer::Quaternion::from_ints(i as i64, j as i64, 1, 0))).unwrap();
        let left = RestrictedEquation::left(a.clone(), d.clone(), Q::identity(m), Q::identity(a.cols())).unwrap();
        let two = RestrictedEquation::unweighted(a, Q::identity(k), d).unwrap();
        let opts = SolveOptions::default();
        prop_assert_eq!(solve(&left, &opts).unwrap().x, solve(&two, &opts).unwrap().x);
    }

    #[test]
    fn threads_do_not_change_the_result(eq in instance()) {
        let one = solve(&eq, &SolveOptions::default()).unwrap().x;
        let four = solve(&eq, &SolveOptions { threads: 4, ..Default::default() }).unwrap().x;
        prop_assert_eq!(one, four);
    }

    #[test]
    fn method_is_consistent_with_ranks(eq in instance()) {
        let rep = solve(&eq, &SolveOptions::default()).unwrap();
        let (r1, r2) = rep.ranks;
        prop_assert_eq!(rep.method.pattern, RankPattern::classify(r1, eq.a.cols(), r2, eq.b.rows()));
        prop_assert!(rep.residual_primary >= 0.0 && rep.restriction_residual >= 0.0);
    }
}
