//! The orderings ≺ (values at x > 2) and ≺′ (values on (0, ½]).

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, inverse_phi, is_prime, profile};
use crate::error::{Error, Result};
use crate::par::{self, Mode};
use crate::poly::{cyclotomic, IntPoly};

/// An index together with Φ_n, for repeated comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderKey {
    pub n: u64,
    pub phi: u64,
    pub coeffs: IntPoly,
}

impl OrderKey {
    pub fn new(n: u64) -> Result<Self> {
        let coeffs = cyclotomic(n)?;
        let phi = coeffs.degree().unwrap_or(0) as u64;
        Ok(Self { n, phi, coeffs })
    }

    /// ≺: φ first, then the highest-index differing coefficient.
    pub fn cmp_large(&self, other: &Self) -> Ordering {
        self.phi.cmp(&other.phi).then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// ≺′: the lowest-index differing coefficient.
    pub fn cmp_small(&self, other: &Self) -> Ordering {
        let len = self.coeffs.coeffs().len().max(other.coeffs.coeffs().len());
        (0..len)
            .map(|i| self.coeffs.coeff(i).cmp(&other.coeffs.coeff(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

fn keys(m: u64, n: u64) -> Result<(OrderKey, OrderKey)> {
    if m == n {
        return Err(Error::EqualIndices(m));
    }
    Ok((OrderKey::new(m)?, OrderKey::new(n)?))
}

pub fn compare_large(m: u64, n: u64) -> Result<Ordering> {
    let (a, b) = keys(m, n)?;
    Ok(a.cmp_large(&b))
}

pub fn compare_small(m: u64, n: u64) -> Result<Ordering> {
    let (a, b) = keys(m, n)?;
    Ok(a.cmp_small(&b))
}

/// All n with φ(n) = k, ≺-ascending.
pub fn phi_class_sorted(k: u64) -> Result<Vec<u64>> {
    let mut class = inverse_phi(k)?.into_iter().map(OrderKey::new).collect::<Result<Vec<_>>>()?;
    class.sort_by(|a, b| a.cmp_large(b));
    Ok(class.into_iter().map(|key| key.n).collect())
}

/// All n with φ(n) ≤ `max_phi`, ≺-ascending.
pub fn ordered_prefix(max_phi: u64, mode: Mode) -> Result<Vec<u64>> {
    let ks: Vec<u64> = (1..=max_phi).filter(|&k| k == 1 || k % 2 == 0).collect();
    let classes = par::map(mode, &ks, |&k| phi_class_sorted(k));
    let mut out = Vec::new();
    for class in classes {
        out.extend(class?);
    }
    Ok(out)
}

/// γ(n): φ(n) minus the index of the highest nonzero coefficient below the
/// leading one.
pub fn gap(n: u64) -> Result<u64> {
    let p = cyclotomic(n)?;
    let phi = p.degree().unwrap_or(0);
    let below = (0..phi).rev().find(|&i| !p.coeffs()[i].is_zero()).unwrap_or(0);
    Ok((phi - below) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsecutiveCertificate {
    /// The ≺-smaller of the pair.
    pub lower: u64,
    pub upper: u64,
    pub consecutive: bool,
    /// Every φ-class between φ(lower) and φ(upper), each ≺-sorted.
    pub classes: Vec<(u64, Vec<u64>)>,
    /// Indices strictly between the pair.
    pub between: Vec<u64>,
}

/// Whether m and n are adjacent under ≺. Since ≺ refines the sort by φ,
/// only the φ-classes from φ(lower) to φ(upper) can intervene.
pub fn certify_consecutive(m: u64, n: u64) -> Result<ConsecutiveCertificate> {
    let (a, b) = keys(m, n)?;
    let (lo, hi) = if a.cmp_large(&b).is_lt() { (a, b) } else { (b, a) };
    let mut classes = Vec::new();
    let mut between = Vec::new();
    for k in lo.phi..=hi.phi {
        let class = phi_class_sorted(k)?;
        if class.is_empty() {
            continue;
        }
        for &t in &class {
            if t == lo.n || t == hi.n {
                continue;
            }
            let key = OrderKey::new(t)?;
            if lo.cmp_large(&key).is_lt() && key.cmp_large(&hi).is_lt() {
                between.push(t);
            }
        }
        classes.push((k, class));
    }
    Ok(ConsecutiveCertificate { lower: lo.n, upper: hi.n, consecutive: between.is_empty(), classes, between })
}

/// A prime power q^j, j ≥ 2, with φ(q^j) = p − 1.
pub fn prime_power_witness(p: u64) -> Result<Option<(u64, u32)>> {
    let target = p - 1;
    for (q, _) in factorize(target)?.factors {
        let mut j = 2u32;
        let mut t = (q - 1) * q;
        while t <= target {
            if t == target {
                return Ok(Some((q, j)));
            }
            t *= q;
            j += 1;
        }
    }
    Ok(None)
}

/// For a prime p ≡ 3 (mod 4): 2p and p are ≺-consecutive exactly when no
/// prime power q^j with j ≥ 2 has φ(q^j) = p − 1. The verdict is checked
/// against the direct class comparison.
pub fn check_3mod4_criterion(p: u64) -> Result<bool> {
    if !is_prime(p) || p % 4 != 3 {
        return Err(Error::Domain(format!("need a prime p ≡ 3 mod 4, got {p}")));
    }
    let verdict = prime_power_witness(p)?.is_none();
    let direct = certify_consecutive(2 * p, p)?;
    if direct.consecutive != verdict || direct.lower != 2 * p {
        return Err(Error::Uncertified(format!("criterion and class comparison disagree at p = {p}")));
    }
    Ok(verdict)
}

/// q(n) from the arithmetic profile, for comparison with [`gap`].
pub fn q_part(n: u64) -> Result<u64> {
    Ok(profile(n)?.qpart)
}
