//! Primitive prime divisors and exhaustive checks that Φ_m and Φ_n take
//! different values at rational points, apart from Φ_2(2) = Φ_6(2).

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, phi};
use crate::error::{Error, Result};
use crate::par::{self, Mode};
use crate::poly::{cyclotomic, CyclotomicTable};

/// The cases in which a^n − b^n has no primitive prime divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PpdException {
    /// (a, b, n) = (2, 1, 6).
    #[serde(rename = "bang_2_6")]
    Bang26,
    /// n = 2 with a + b a power of two.
    #[serde(rename = "mersenne_n2")]
    MersenneN2,
}

impl PpdException {
    pub fn tag(&self) -> &'static str {
        match self {
            PpdException::Bang26 => "bang_2_6",
            PpdException::MersenneN2 => "mersenne_n2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PpdResult {
    pub a: u64,
    pub b: u64,
    pub n: u64,
    /// Smallest primitive prime divisor, in decimal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exception: Option<PpdException>,
}

fn is_power_of_two(x: u64) -> bool {
    x.is_power_of_two()
}

/// Multiplicative order of a·b⁻¹ modulo the prime p equals n.
fn has_order(a: u64, b: u64, n: u64, p: &BigUint) -> Result<bool> {
    let (a, b) = (BigUint::from(a) % p, BigUint::from(b) % p);
    if a.is_zero() || b.is_zero() {
        return Ok(false);
    }
    // b⁻¹ = b^(p−2) mod p
    let two = BigUint::from(2u32);
    let g = (a * b.modpow(&(p - &two), p)) % p;
    let pow = |e: u64| g.modpow(&BigUint::from(e), p);
    if !pow(n).is_one() {
        return Ok(false);
    }
    Ok(factorize(n)?.factors.iter().all(|&(r, _)| !pow(n / r).is_one()))
}

/// A prime dividing a^n − b^n and no a^k − b^k with k < n.
///
/// Every prime factor of Φ_n(a, b) is primitive except possibly the largest
/// prime of n, so that prime is divided out and the rest is factored. Each
/// candidate is confirmed by its multiplicative order.
pub fn primitive_prime_divisor(a: u64, b: u64, n: u64) -> Result<PpdResult> {
    if a <= b || b == 0 {
        return Err(Error::Domain(format!("need a > b ≥ 1, got ({a}, {b})")));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::NotCoprime(a.to_string(), b.to_string()));
    }
    if n < 2 {
        return Err(Error::Domain(format!("need n ≥ 2, got {n}")));
    }
    let value = cyclotomic(n)?.eval_homogeneous(&BigInt::from(a), &BigInt::from(b));
    let mut rest = value.magnitude().clone();
    if let Some(big) = factorize(n)?.largest_prime() {
        let big = BigUint::from(big);
        while (&rest % &big).is_zero() {
            rest /= &big;
        }
    }
    let mut result = PpdResult { a, b, n, prime: None, exception: None };
    if rest.is_one() {
        result.exception = if (a, b, n) == (2, 1, 6) {
            Some(PpdException::Bang26)
        } else if n == 2 && is_power_of_two(a + b) {
            Some(PpdException::MersenneN2)
        } else {
            return Err(Error::Uncertified(format!("no primitive prime for ({a}, {b}, {n})")));
        };
        return Ok(result);
    }
    let (found, unfactored) = num_prime::nt_funcs::factors(rest, None);
    if let Some(rem) = unfactored.filter(|_| found.is_empty()) {
        return Err(Error::Uncertified(format!("could not factor {} cofactor(s) of Φ_{n}({a}, {b})", rem.len())));
    }
    let p = found.into_keys().next().expect("nonempty factor map");
    if !has_order(a, b, n, &p)? {
        return Err(Error::Uncertified(format!("{p} is not primitive for ({a}, {b}, {n})")));
    }
    result.prime = Some(p.to_string());
    Ok(result)
}

/// The index s(k) with Φ_k(−x) = ±Φ_s(k)(x): 2k for odd k, k/2 for
/// k ≡ 2 (mod 4), k for 4 | k. The sign is −1 only for k ∈ {1, 2}.
pub fn negation_index(k: u64) -> (u64, i8) {
    let s = match k % 4 {
        0 => k,
        2 => k / 2,
        _ => 2 * k,
    };
    (s, if k <= 2 { -1 } else { 1 })
}

/// A point with Φ_m = Φ_n there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coincidence {
    pub point: String,
    pub m: u64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceReport {
    pub points: usize,
    pub pairs_checked: u64,
    pub coincidences: Vec<Coincidence>,
}

/// Weighted values b^W·Φ_k(a/b) for k ≤ `max_index`, where W is the
/// largest φ in range; equal weighted values mean equal values.
fn weighted_values(table: &CyclotomicTable, a: &BigInt, b: &BigInt, max_index: u64, weight: u64) -> Result<Vec<BigInt>> {
    (1..=max_index)
        .map(|k| {
            let p = table.get(k).ok_or(Error::Zero)?;
            let deg = p.degree().unwrap_or(0) as u64;
            Ok(p.eval_homogeneous(a, b) * num_traits::pow(b.clone(), (weight - deg) as usize))
        })
        .collect()
}

/// Values at −a/b from values at a/b via the negation indices.
fn negated(values_2m: &[BigInt], max_index: u64) -> Vec<BigInt> {
    (1..=max_index)
        .map(|k| {
            let (s, sign) = negation_index(k);
            let v = &values_2m[(s - 1) as usize];
            if sign < 0 { -v } else { v.clone() }
        })
        .collect()
}

fn equal_pairs(point: String, values: &[BigInt]) -> Vec<Coincidence> {
    let mut seen: HashMap<&BigInt, Vec<u64>> = HashMap::new();
    for (i, v) in values.iter().enumerate() {
        seen.entry(v).or_default().push(i as u64 + 1);
    }
    let mut out = Vec::new();
    for group in seen.values().filter(|g| g.len() > 1) {
        for (i, &m) in group.iter().enumerate() {
            for &n in &group[i + 1..] {
                out.push(Coincidence { point: point.clone(), m, n });
            }
        }
    }
    out.sort_by_key(|c| (c.m, c.n));
    out
}

fn check_points(points: &[(BigInt, BigInt)], max_index: u64, mode: Mode) -> Result<CoincidenceReport> {
    if max_index < 2 {
        return Err(Error::Domain(format!("need at least two indices, got {max_index}")));
    }
    let table = CyclotomicTable::up_to(2 * max_index)?;
    let weight = (1..=2 * max_index).map(phi).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(1);
    let found = par::map(mode, points, |(a, b)| -> Result<Vec<Coincidence>> {
        let values = weighted_values(&table, a, b, 2 * max_index, weight)?;
        let show = |sign: &str| if b.is_one() { format!("{sign}{a}") } else { format!("{sign}{a}/{b}") };
        let mut out = equal_pairs(show(""), &values[..max_index as usize]);
        out.extend(equal_pairs(show("-"), &negated(&values, max_index)));
        Ok(out)
    });
    let mut coincidences = Vec::new();
    for f in found {
        coincidences.extend(f?);
    }
    let pairs = max_index * (max_index - 1) / 2;
    Ok(CoincidenceReport { points: 2 * points.len(), pairs_checked: pairs * 2 * points.len() as u64, coincidences })
}

/// Φ_m(±a) against Φ_n(±a) for 2 ≤ a ≤ `a_max` and 1 ≤ m < n ≤ `max_index`,
/// exactly. Values at −a come from the negation indices.
pub fn verify_integer_coincidences(a_max: u64, max_index: u64, mode: Mode) -> Result<CoincidenceReport> {
    let points: Vec<(BigInt, BigInt)> = (2..=a_max).map(|a| (BigInt::from(a), BigInt::one())).collect();
    check_points(&points, max_index, mode)
}

/// The same check at every reduced ±a/b with 2 ≤ b ≤ `height` and
/// 1 ≤ a ≤ `height`, comparing b^W·Φ_k(a/b) as integers.
pub fn verify_rational_coincidences(height: u64, max_index: u64, mode: Mode) -> Result<CoincidenceReport> {
    let mut points = Vec::new();
    for b in 2..=height {
        for a in 1..=height {
            if a.gcd(&b) == 1 {
                points.push((BigInt::from(a), BigInt::from(b)));
            }
        }
    }
    check_points(&points, max_index, mode)
}

/// Decimal value of Φ_n(a) for small a, for the value table.
pub fn value_at(n: u64, a: i64) -> Result<i64> {
    cyclotomic(n)?
        .eval_int(&BigInt::from(a))
        .to_i64()
        .ok_or_else(|| Error::Domain(format!("Φ_{n}({a}) does not fit in 64 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    // p | a^k − b^k tested by direct powering for every k ≤ n
    fn brute_primitive(a: u64, b: u64, n: u64, p: &BigUint) -> bool {
        let divides = |k: u64| {
            let e = BigUint::from(k);
            BigUint::from(a).modpow(&e, p) == BigUint::from(b).modpow(&e, p)
        };
        divides(n) && (1..n).all(|k| !divides(k))
    }

    #[test]
    fn ppd_examples() {
        assert_eq!(primitive_prime_divisor(2, 1, 6).unwrap().exception, Some(PpdException::Bang26));
        assert_eq!(primitive_prime_divisor(3, 1, 2).unwrap().exception, Some(PpdException::MersenneN2));
        assert_eq!(primitive_prime_divisor(2, 1, 4).unwrap().prime.as_deref(), Some("5"));
        assert_eq!(primitive_prime_divisor(5, 3, 2).unwrap().exception, Some(PpdException::MersenneN2));
        assert!(primitive_prime_divisor(4, 2, 3).is_err());
        assert!(primitive_prime_divisor(2, 3, 3).is_err());
        let json = serde_json::to_string(&primitive_prime_divisor(2, 1, 6).unwrap()).unwrap();
        assert_eq!(json, r#"{"a":2,"b":1,"n":6,"exception":"bang_2_6"}"#);
    }

    #[test]
    fn ppd_matches_brute_force() {
        for a in 2..=12u64 {
            for n in 2..=40u64 {
                let r = primitive_prime_divisor(a, 1, n).unwrap();
                match (&r.prime, r.exception) {
                    (Some(p), None) => {
                        let p: BigUint = p.parse().unwrap();
                        assert!(brute_primitive(a, 1, n, &p), "({a}, {n}) → {p}");
                        let v = cyclotomic(n).unwrap().eval_int(&BigInt::from(a));
                        assert!((v % BigInt::from(p)).is_zero());
                    }
                    (None, Some(PpdException::Bang26)) => assert_eq!((a, n), (2, 6)),
                    (None, Some(PpdException::MersenneN2)) => assert!(n == 2 && (a + 1).is_power_of_two()),
                    _ => panic!("malformed result {r:?}"),
                }
            }
        }
    }

    #[test]
    fn negation_relations() {
        for k in 1..=400u64 {
            let (s, sign) = negation_index(k);
            let lhs = cyclotomic(k).unwrap().negate_arg();
            let rhs = cyclotomic(s).unwrap();
            assert_eq!(lhs, if sign < 0 { -&rhs } else { rhs }, "k = {k}");
        }
    }

    #[test]
    fn value_table() {
        let v: Vec<i64> = (1..=6).map(|m| value_at(m, 2).unwrap()).collect();
        assert_eq!(v, vec![1, 3, 7, 5, 31, 3]);
    }

    #[test]
    fn integer_coincidences() {
        let r = verify_integer_coincidences(2, 6, Mode::Sequential).unwrap();
        assert_eq!(r.coincidences, vec![Coincidence { point: "2".into(), m: 2, n: 6 }]);
        let r = verify_integer_coincidences(10, 50, Mode::default()).unwrap();
        assert_eq!(r.coincidences, vec![Coincidence { point: "2".into(), m: 2, n: 6 }]);
        assert_eq!(r.points, 18);
    }

    #[test]
    fn negative_points_match_direct_evaluation() {
        for a in 2..=6i64 {
            for k in 1..=60u64 {
                let direct = cyclotomic(k).unwrap().eval_int(&BigInt::from(-a));
                let (s, sign) = negation_index(k);
                let via = cyclotomic(s).unwrap().eval_int(&BigInt::from(a)) * sign;
                assert_eq!(direct, via);
            }
        }
    }

    #[test]
    fn rational_coincidences() {
        let r = verify_rational_coincidences(5, 30, Mode::default()).unwrap();
        assert!(r.coincidences.is_empty());
        let two = BigInt::from(2);
        let three = BigInt::from(3);
        let v2 = cyclotomic(2).unwrap().eval_homogeneous(&three, &two);
        let v6 = cyclotomic(6).unwrap().eval_homogeneous(&three, &two);
        assert_eq!((v2.clone(), v6.clone()), (BigInt::from(5), BigInt::from(7)));
        assert_ne!(v2 * 4, v6 * 2);
    }
}
