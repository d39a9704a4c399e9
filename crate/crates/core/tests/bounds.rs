use num_bigint::BigInt;
use proptest::prelude::*;

use cyclolab::bounds::{check_complex_bounds, check_real_bounds, g_value, BoundSide, GaussianPoint};
use cyclolab::par::{self, Mode};
use cyclolab::poly::Rational;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn g_is_certified_nonzero_below_one_half() {
    let pairs: Vec<(u64, u64)> = (2..=60).flat_map(|m| (m + 1..=60).map(move |n| (m, n))).collect();
    for x in [rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 10)] {
        let results = par::map(Mode::default(), &pairs, |&(m, n)| g_value(m, n, &x, 128));
        for ((m, n), g) in pairs.iter().zip(results) {
            let g = g.unwrap_or_else(|e| panic!("g({m}, {n}, {x}): {e}"));
            assert_ne!(g.sign, 0, "g({m}, {n}, {x})");
            assert_eq!(g.value.sign(), Some(g.sign), "g({m}, {n}, {x})");
        }
    }
}

#[test]
fn equality_points_are_exact() {
    let r = check_real_bounds(1, &rat(2, 1)).unwrap();
    assert!(r.holds && r.equality && r.side == BoundSide::Below);
    assert!(!check_real_bounds(1, &rat(3, 1)).unwrap().equality);
    let r = check_complex_bounds(2, &GaussianPoint::real(-2)).unwrap();
    assert!(r.holds && r.equality);
    // |Φ_1(−2)| = 3 is not an equality case
    assert!(!check_complex_bounds(1, &GaussianPoint::real(-2)).unwrap().equality);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn real_bounds_hold_at_rational_points(n in 1u64..=300, num in 2i64..=200, den in 1i64..=20) {
        prop_assume!(num >= 2 * den);
        let x = rat(num, den);
        let r = check_real_bounds(n, &x).unwrap();
        prop_assert!(r.holds, "n = {}, x = {}", n, x);
        prop_assert_eq!(r.equality, n == 1 && x == rat(2, 1));
    }

    #[test]
    fn complex_bounds_hold_in_the_annulus(n in 1u64..=300, re in -4096i64..=4096, im in -4096i64..=4096) {
        let norm = re * re + im * im;
        prop_assume!((4 << 20..=16 << 20).contains(&norm));
        let z = GaussianPoint::new(rat(re, 1024), rat(im, 1024));
        let r = check_complex_bounds(n, &z).unwrap();
        prop_assert!(r.holds, "n = {}, z = {}", n, r.point);
    }
}
