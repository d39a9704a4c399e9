//! Polynomial gcd degree over a word-sized prime field, used as a fast
//! coprimality certificate before falling back to exact PRS.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

const PRIMES: [u64; 3] = [2305843009213693951, 4611686018427387847, 9223372036854775783];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn reduce(c: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = c
        .iter()
        .map(|x| {
            let r = x % &pb;
            let r = if r.sign() == num_bigint::Sign::Minus { r + &pb } else { r };
            r.to_u64().unwrap()
        })
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn rem_in_place(a: &mut Vec<u64>, b: &[u64], p: u64) {
    let db = b.len() - 1;
    let inv = powmod(b[db], p - 2, p);
    while a.len() > db {
        let top = a.len() - 1;
        let q = mulmod(a[top], inv, p);
        if q != 0 {
            let off = top - db;
            for (j, &c) in b.iter().enumerate() {
                let t = mulmod(q, c, p);
                a[off + j] = if a[off + j] >= t { a[off + j] - t } else { a[off + j] + p - t };
            }
        }
        a.pop();
        while a.last() == Some(&0) {
            a.pop();
        }
    }
}

/// Degree of gcd(a mod p, b mod p).
fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    while !b.is_empty() {
        rem_in_place(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when `a` and `b` certainly have no common factor of positive
/// degree. A `false` answer is inconclusive.
pub(crate) fn certainly_coprime(a: &[BigInt], b: &[BigInt]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    PRIMES.iter().any(|&p| {
        let (ra, rb) = (reduce(a, p), reduce(b, p));
        // leading coefficients must survive so degrees are preserved
        ra.len() == a.len() && rb.len() == b.len() && gcd_degree(ra, rb, p) == 0
    })
}
