//! Multiplicative arithmetic functions on machine-sized indices.
//!
//! Factorization is trial division by a cached prime table up to 10^6,
//! then deterministic Miller-Rabin and Pollard-Brent for whatever is left.
//! Every result is exact for inputs below 2^64.

use std::sync::OnceLock;

use num_integer::Integer;

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

static SMALL_PRIMES: OnceLock<Vec<u64>> = OnceLock::new();

/// Primes up to 10^6, computed once and read-only afterwards.
pub fn small_primes() -> &'static [u64] {
    SMALL_PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Canonical prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Largest squarefree divisor.
    pub fn rad(&self) -> u64 {
        self.primes().product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn moebius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }
}

/// Derived arithmetic data for an index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArithProfile {
    pub n: u64,
    pub phi: u64,
    /// μ(rad(n)), always ±1.
    pub mu_rad: i8,
    pub omega: u32,
    pub rad: u64,
    /// q(n) = n / rad(n).
    pub qpart: u64,
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut large = Vec::new();
        split_large(rest, &mut large);
        large.sort_unstable();
        for p in large {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Ok(Factorization { n, factors })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Nontrivial factor of an odd composite n with no prime factor below 10^6.
fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = 2u64;
        let mut r = 1u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Deterministic primality for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn profile(n: u64) -> Result<ArithProfile> {
    let f = factorize(n)?;
    Ok(profile_of(&f))
}

pub fn profile_of(f: &Factorization) -> ArithProfile {
    let rad = f.rad();
    ArithProfile {
        n: f.n,
        phi: f.phi(),
        mu_rad: if f.omega().is_multiple_of(2) { 1 } else { -1 },
        omega: f.omega(),
        rad,
        qpart: f.n / rad,
    }
}

pub fn phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.phi())
}

pub fn moebius(n: u64) -> Result<i8> {
    Ok(factorize(n)?.moebius())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(divisors_of(&factorize(n)?))
}

pub fn divisors_of(f: &Factorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in &f.factors {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// All `n` with φ(n) = k, ascending.
///
/// Depth-first over prime powers p^e with (p-1)p^(e-1) | k, taking primes
/// in decreasing order so that each preimage is built exactly once.
pub fn inverse_phi(k: u64) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::Zero);
    }
    let mut candidates: Vec<u64> = divisors(k)?
        .into_iter()
        .map(|d| d + 1)
        .filter(|&p| is_prime(p))
        .collect();
    candidates.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    collect_preimages(k, &candidates, 1, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn collect_preimages(rest: u64, primes: &[u64], acc: u64, out: &mut Vec<u64>) {
    if rest == 1 {
        out.push(acc);
    }
    for (i, &p) in primes.iter().enumerate() {
        if !rest.is_multiple_of(p - 1) {
            continue;
        }
        let mut r = rest / (p - 1);
        let mut pe = p;
        loop {
            collect_preimages(r, &primes[i + 1..], acc * pe, out);
            if !r.is_multiple_of(p) {
                break;
            }
            r /= p;
            pe *= p;
        }
    }
}

/// A prime `p` with p - 1 = φ(q^j), j ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePowerWitness {
    pub p: u64,
    pub q: u64,
    pub j: u32,
}

/// Primes p ≤ `limit` for which p - 1 is the totient of a proper prime
/// power. The witness reported is the one with the smallest q.
pub fn phi_prime_power_primes(limit: u64) -> Vec<PrimePowerWitness> {
    let mut out: Vec<PrimePowerWitness> = Vec::new();
    for q in primes_up_to(limit) {
        let mut j = 2u32;
        loop {
            let Some(qj1) = q.checked_pow(j - 1) else { break };
            let Some(t) = qj1.checked_mul(q - 1) else { break };
            let p = t + 1;
            if p > limit {
                break;
            }
            if is_prime(p) && !out.iter().any(|w| w.p == p) {
                out.push(PrimePowerWitness { p, q, j });
            }
            j += 1;
        }
    }
    out.sort_by_key(|w| w.p);
    out
}
