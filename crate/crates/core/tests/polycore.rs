use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

use cyclolab::arith::{divisors, profile};
use cyclolab::bounds::f_ratio_exact;
use cyclolab::poly::{cyclotomic, eval_cyclotomic_rational, eval_homogeneous_cyclotomic, CyclotomicTable, IntPoly, Rational};

fn x_pow_minus_one(n: usize) -> IntPoly {
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::from(-1);
    c[n] = BigInt::one();
    IntPoly::new(c)
}

#[test]
fn negation_for_odd_and_multiples_of_four() {
    let t = CyclotomicTable::up_to(400).unwrap();
    // n = 1 carries a sign: Φ_1(−x) = −Φ_2(x)
    assert_eq!(t.get(1).unwrap().negate_arg(), t.get(2).unwrap().scale(&BigInt::from(-1)));
    assert_eq!(t.get(2).unwrap().negate_arg(), t.get(1).unwrap().scale(&BigInt::from(-1)));
    for n in (3..=199).step_by(2) {
        assert_eq!(t.get(n).unwrap().negate_arg(), *t.get(2 * n).unwrap(), "Φ_{n}(−x)");
        assert_eq!(t.get(2 * n).unwrap().negate_arg(), *t.get(n).unwrap(), "Φ_{}(−x)", 2 * n);
    }
    for n in (4..=400).step_by(4) {
        assert_eq!(t.get(n).unwrap().negate_arg(), *t.get(n).unwrap(), "Φ_{n}(−x)");
    }
}

#[test]
fn leading_terms_follow_the_radical() {
    let t = CyclotomicTable::up_to(2000).unwrap();
    for n in 2..=2000 {
        let pr = profile(n).unwrap();
        let p = t.get(n).unwrap();
        let phi = pr.phi as usize;
        let q = pr.qpart as usize;
        assert_eq!(p.coeff(phi - q), BigInt::from(-pr.mu_rad), "n = {n}");
        for i in phi - q + 1..phi {
            assert!(p.coeff(i).is_zero(), "n = {n}, i = {i}");
        }
    }
}

#[test]
fn ratio_is_the_reversed_polynomial_at_the_reciprocal() {
    for n in 2..=500 {
        let p = cyclotomic(n).unwrap();
        for x in [2, 3] {
            let x = Rational::from_integer(x.into());
            assert_eq!(f_ratio_exact(n, &x).unwrap(), p.eval_rational(&x.recip()), "n = {n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn product_over_divisors(n in 1u64..=200) {
        let mut prod = IntPoly::one();
        for d in divisors(n).unwrap() {
            prod = &prod * &cyclotomic(d).unwrap();
        }
        prop_assert_eq!(prod, x_pow_minus_one(n as usize));
    }

    #[test]
    fn palindromic(n in 2u64..=500) {
        prop_assert!(cyclotomic(n).unwrap().is_palindromic());
    }

    #[test]
    fn homogeneous_matches_rational(n in 1u64..=300, a in -50i64..=50, b in 1i64..=50) {
        prop_assume!(a.gcd(&b) == 1);
        let p = cyclotomic(n).unwrap();
        let phi = p.degree().unwrap();
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let h = eval_homogeneous_cyclotomic(n, &a, &b).unwrap();
        let x = Rational::new(a, b.clone());
        let scaled = Rational::new(h, num_traits::pow(b, phi));
        prop_assert_eq!(&scaled, &p.eval_rational(&x));
        prop_assert_eq!(scaled, eval_cyclotomic_rational(n, &x).unwrap());
    }

    #[test]
    fn prime_power_index_composes(n in 1u64..=60, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        // Φ_np(x) = Φ_n(x^p) when p | n, and Φ_n(x^p)/Φ_n(x) otherwise
        let base = cyclotomic(n).unwrap();
        let lifted = base.compose_power(p as usize);
        let expected = if n % p == 0 { lifted } else { lifted.div_exact(&base).unwrap() };
        prop_assert_eq!(cyclotomic(n * p).unwrap(), expected);
    }

    #[test]
    fn flat_for_two_primes(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), q in prop::sample::select(vec![17u64, 19, 23, 29, 31]), i in 1u32..=2, j in 1u32..=2) {
        let n = p.pow(i) * q.pow(j);
        prop_assume!(n <= 1000);
        prop_assert!(cyclotomic(n).unwrap().max_abs_coeff() <= BigInt::one());
    }
}
