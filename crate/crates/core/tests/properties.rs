use proptest::prelude::*;
use waring_core::aux_count::{distinct_sums_bound, rep_function, s_count, t_pq_count, DEFAULT_BUDGET};
use waring_core::bound_engine::{lambda_closed, lambda_iterate, theta_schedule};
use waring_core::differences::{expected_leading, psi, IntPolynomial};
use waring_core::expsum_arcs::{
    classify, classify_scan, exact_count, ArcDissection, ExpSum, MomentSpec, Which, DEFAULT_GRID_BUDGET,
};
use waring_core::phase::frac_mul;
use waring_core::smooth_sets::residue_profile;

fn small_set() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::btree_set(1u64..40, 1..7).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_closed_form(k in 3u32..=20, s in 2u32..=200) {
        let table = lambda_iterate(k, s, 1.0 / k as f64).unwrap();
        let a = table.lambda_at(s).unwrap();
        prop_assert!((a - lambda_closed(k, s).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn schedule_ends_at_one_over_k(k in 3u32..=30, frac in 0.01f64..0.99) {
        let sched = theta_schedule(k, frac * k as f64).unwrap();
        prop_assert_eq!(sched.theta(k as usize), 1.0 / k as f64);
        prop_assert!(sched.recurrence_residuals().iter().all(|r| *r < 1e-12));
    }

    #[test]
    fn counts_ignore_order(mut x in small_set(), s in 1u32..=3, k in 1u32..=4, rot in 0usize..7) {
        let a = s_count(&x, s, k, DEFAULT_BUDGET).unwrap();
        let len = x.len();
        x.rotate_left(rot % len);
        x.reverse();
        let b = s_count(&x, s, k, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(a.count, b.count);
        prop_assert!(a.count >= a.diagonal_lb);
    }

    #[test]
    fn rep_total_and_distinct_bound(x in small_set(), y in small_set(), k in 1u32..=4) {
        let r = rep_function(&[&x, &y], k, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(r.total, (x.len() * y.len()) as u128);
        prop_assert!(distinct_sums_bound(&[&x, &y], k, DEFAULT_BUDGET).unwrap().holds());
    }

    #[test]
    fn parseval_equals_count(x in small_set(), s in 1u32..=2, k in 2u32..=3) {
        let f = ExpSum::smooth(&x, k).unwrap();
        let exact = exact_count(&MomentSpec::abs_even(&f, s), DEFAULT_GRID_BUDGET).unwrap();
        prop_assert_eq!(exact, s_count(&x, s, k, DEFAULT_BUDGET).unwrap().count);
    }

    #[test]
    fn t_pq_at_least_diagonal(x in prop::collection::btree_set(1u64..30, 1..5), k in 1u32..=3) {
        let e: Vec<u64> = x.into_iter().filter(|v| v % 31 != 0).collect();
        let c = t_pq_count(&e, 2, k, 31, 37, DEFAULT_BUDGET).unwrap();
        prop_assert!(c.count >= c.diagonal_lb);
    }

    #[test]
    fn sums_are_periodic_and_conjugate(p in 1u64..30, k in 2u32..=4, alpha in 0.0f64..1.0) {
        let f = ExpSum::full(p, k).unwrap();
        let v = f.eval(alpha);
        prop_assert!(v.norm() <= f.term_count() as f64 + 1e-9);
        prop_assert_eq!(f.eval(-alpha), v.conj());
        prop_assert!((f.eval(alpha + 1.0) - v).norm() < 1e-9);
    }

    #[test]
    fn classification_matches_scan(p in 2u64..60, k in 2u32..=4, u in 0.0f64..1.0) {
        let d = ArcDissection::new(p as f64, k).unwrap();
        let alpha = d.interval().0 + u;
        for which in [Which::M, Which::N] {
            prop_assert_eq!(classify(alpha, &d, which), classify_scan(alpha, &d, which));
        }
    }

    #[test]
    fn modified_diff_always_divides(k in 1u32..=7, h in 1i64..=5, m in 1i64..=2187) {
        let m = m.min(3i64.pow(k));
        let d = IntPolynomial::monomial(k).modified_diff(&h.into(), &m.into());
        prop_assert!(d.is_ok());
    }

    #[test]
    fn psi_laws(k in 1u32..=8, steps in prop::collection::vec((1u64..=3, prop::sample::select(vec![2u64, 3, 5])), 0..=8)) {
        let steps = &steps[..steps.len().min(k as usize)];
        let h: Vec<u64> = steps.iter().map(|s| s.0).collect();
        let p: Vec<u64> = steps.iter().map(|s| s.1).collect();
        let c = psi(k, &h, &p).unwrap();
        prop_assert_eq!(c.result.degree(), (k as usize - h.len()) as isize);
        prop_assert_eq!(c.result.leading(), expected_leading(k, &h));
    }

    #[test]
    fn residue_counts_cover_set(x in small_set(), q in 2u64..12) {
        let prof = residue_profile(&x, q).unwrap();
        let coprime = x.iter().filter(|&&v| num_integer::gcd(v, q) == 1).count() as u64;
        prop_assert_eq!(prof.counts.iter().map(|c| c.1).sum::<u64>(), coprime);
        prop_assert_eq!(prof.total, x.len() as u64);
    }

    #[test]
    fn phase_reduction_is_odd(n in any::<u64>(), alpha in -10.0f64..10.0) {
        prop_assert_eq!(frac_mul(n, -alpha), -frac_mul(n, alpha));
    }
}

#[test]
fn constant_gamma_is_tight() {
    // a single domain: every attainable value has γ = 1
    let d = distinct_sums_bound(&[&[1, 2, 3, 4, 5]], 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(d.distinct as f64, d.lower_bound);
}
