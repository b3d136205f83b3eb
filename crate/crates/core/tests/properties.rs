use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use merostar::classes::{
    check_me, check_mf, check_starlike, coeff_sufficient_me, me_functional, MARGIN_TOL,
};
use merostar::series::{DiscGrid, LaurentFunction};
use merostar::tme::{check_tme_exact, decompose, recompose, TmeFunction};

fn coeff() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn series(max_len: usize) -> impl Strategy<Value = LaurentFunction> {
    prop::collection::vec(coeff(), 0..max_len)
        .prop_map(|c| LaurentFunction::from_coeffs(c).unwrap())
}

fn disc_point() -> impl Strategy<Value = Complex64> {
    (0.01f64..0.999, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Member of ME(alpha) by construction: weighted sum scaled to `level <= 1`.
fn certified(alpha: f64) -> impl Strategy<Value = LaurentFunction> {
    (series(10), 0.0f64..=1.0).prop_map(move |(f, level)| {
        let sum: f64 = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, a)| (1.0 + alpha * (n as f64 + 1.0)) * a.norm())
            .sum();
        if sum == 0.0 {
            f
        } else {
            f.scale_tail(level / sum)
        }
    })
}

fn small_grid() -> DiscGrid {
    DiscGrid::new(vec![0.3, 0.6, 0.9, 0.99], 64).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hadamard_commutes_and_associates(f in series(12), g in series(12), h in series(12)) {
        prop_assert_eq!(f.hadamard(&g), g.hadamard(&f));
        let left = f.hadamard(&g).hadamard(&h);
        let right = f.hadamard(&g.hadamard(&h));
        prop_assert_eq!(left.len(), right.len());
        for (a, b) in left.coeffs().iter().zip(right.coeffs()) {
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn partial_sum_keeps_prefix(f in series(12), n in 1usize..16) {
        let s = f.partial_sum(n).unwrap();
        prop_assert!(s.len() <= n);
        prop_assert_eq!(s.coeff(0), Complex64::new(0.0, 0.0));
        for k in 1..n {
            prop_assert_eq!(s.coeff(k), f.coeff(k));
        }
        let again = s.partial_sum(n).unwrap();
        prop_assert_eq!(again, s);
    }

    #[test]
    fn delta_distance_is_a_pseudometric(f in series(10), g in series(10), h in series(10)) {
        prop_assert_eq!(f.delta_distance(&f), 0.0);
        prop_assert!((f.delta_distance(&g) - g.delta_distance(&f)).abs() <= 1e-12);
        let slack = 1e-12 * (1.0 + f.delta_distance(&h));
        prop_assert!(f.delta_distance(&h) <= f.delta_distance(&g) + g.delta_distance(&h) + slack);
    }

    #[test]
    fn json_round_trip_is_bit_exact(f in series(20)) {
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back = LaurentFunction::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        prop_assert_eq!(f.len(), back.len());
    }

    #[test]
    fn functional_positive_bounds_derivative(f in series(8), z in disc_point(), alpha in 0.01f64..3.0) {
        let (g, dg) = f.eval_g_and_prime(z);
        if me_functional(&f, alpha, z) > 0.0 {
            prop_assert!((z * dg).norm() < g.norm() / alpha);
        }
    }

    #[test]
    fn tme_decomposition_round_trips(mags in prop::collection::vec(0.0f64..1.0, 1..10), alpha in 0.0f64..3.0) {
        let t = TmeFunction::new(mags).unwrap();
        let sum: f64 = t.magnitudes().iter().enumerate()
            .map(|(i, a)| (1.0 + alpha * (i as f64 + 2.0)) * a).sum();
        let t = if sum > 1.0 {
            TmeFunction::new(t.magnitudes().iter().map(|a| a / sum).collect()).unwrap()
        } else {
            t
        };
        prop_assert!(check_tme_exact(&t, alpha).unwrap().holds);
        let w = decompose(&t, alpha).unwrap();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let back = recompose(&w, alpha).unwrap();
        for n in 1..=t.magnitudes().len() {
            prop_assert!((back.magnitude(n) - t.magnitude(n)).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn certified_members_pass_the_sampled_check(
        (alpha, f) in (0.0f64..3.0).prop_flat_map(|a| (Just(a), certified(a)))
    ) {
        prop_assert!(coeff_sufficient_me(&f, alpha).unwrap().holds);
        let v = check_me(&f, alpha, &small_grid()).unwrap();
        prop_assert!(v.min_margin >= -MARGIN_TOL);
    }

    #[test]
    fn inclusion_chain_on_samples(f in series(6), alpha in 0.0f64..0.9) {
        // pointwise Re w <= |w|, so the starlike margin dominates the MF margin
        let grid = small_grid();
        let mf = check_mf(&f, alpha, &grid).unwrap();
        let st = check_starlike(&f, alpha, &grid).unwrap();
        prop_assert!(st.min_margin >= mf.min_margin - 1e-12);
        if mf.status.is_member() {
            prop_assert!(st.min_margin >= -MARGIN_TOL);
        }
    }
}
