use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{IntPoly, Rational};
use crate::arith::{self, factorize};
use crate::error::{Error, Result};

/// Φ_n with exact integer coefficients.
///
/// Φ_rad(n) is built by the exact divisions Φ_{dp}(x) = Φ_d(x^p) / Φ_d(x)
/// over the primes of n, then x is replaced by x^q(n).
pub fn cyclotomic(n: u64) -> Result<IntPoly> {
    let f = factorize(n)?;
    let mut poly = IntPoly::from_i64(&[-1, 1]);
    for p in f.primes() {
        let lifted = poly.compose_power(p as usize);
        poly = lifted.div_exact(&poly)?;
    }
    let q = n / f.rad();
    Ok(poly.compose_power(q as usize))
}

/// Φ_m − Φ_n.
pub fn difference(m: u64, n: u64) -> Result<IntPoly> {
    if m == n {
        return Err(Error::EqualIndices(m));
    }
    Ok(&cyclotomic(m)? - &cyclotomic(n)?)
}

/// Exact Φ_n(x) from Φ_n(x) = Π_{d | rad(n)} (y^d − 1)^{μ(rad(n)/d)} with
/// y = x^q(n), which needs only 2^ω(n) powers. Falls back to the
/// coefficient form at x = ±1, where the factors vanish.
pub fn eval_cyclotomic_rational(n: u64, x: &Rational) -> Result<Rational> {
    let f = factorize(n)?;
    if x.abs().is_one() {
        return Ok(cyclotomic(n)?.eval_rational(x));
    }
    let y = num_traits::pow(x.clone(), (n / f.rad()) as usize);
    let rad = f.rad();
    let mut num = Rational::one();
    let mut den = Rational::one();
    for d in arith::divisors_of(&factorize(rad)?) {
        let t = num_traits::pow(y.clone(), d as usize) - Rational::one();
        match arith::moebius(rad / d)? {
            1 => num *= t,
            -1 => den *= t,
            _ => {}
        }
    }
    Ok(num / den)
}

/// The homogenized value Φ_n(a, b) = b^φ(n) · Φ_n(a/b), for coprime `a`, `b`
/// with `b ≥ 1`.
pub fn eval_homogeneous_cyclotomic(n: u64, a: &BigInt, b: &BigInt) -> Result<BigInt> {
    if !b.is_positive() {
        return Err(Error::Domain(format!("denominator must be positive, got {b}")));
    }
    if !a.gcd(b).is_one() {
        return Err(Error::NotCoprime(a.to_string(), b.to_string()));
    }
    Ok(cyclotomic(n)?.eval_homogeneous(a, b))
}

/// Explicit table of Φ_1 … Φ_N for scans that touch the same indices many
/// times. Built once; read-only afterwards.
#[derive(Debug, Clone, Default)]
pub struct CyclotomicTable {
    polys: BTreeMap<u64, IntPoly>,
}

impl CyclotomicTable {
    pub fn up_to(max: u64) -> Result<Self> {
        Self::for_indices(1..=max)
    }

    pub fn for_indices(indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut polys = BTreeMap::new();
        for n in indices {
            if let std::collections::btree_map::Entry::Vacant(e) = polys.entry(n) {
                e.insert(cyclotomic(n)?);
            }
        }
        Ok(Self { polys })
    }

    pub fn get(&self, n: u64) -> Option<&IntPoly> {
        self.polys.get(&n)
    }

    /// Φ_m − Φ_n from the table, computing missing entries on the fly.
    pub fn difference(&self, m: u64, n: u64) -> Result<IntPoly> {
        if m == n {
            return Err(Error::EqualIndices(m));
        }
        let pm = match self.get(m) {
            Some(p) => p.clone(),
            None => cyclotomic(m)?,
        };
        let pn = match self.get(n) {
            Some(p) => p.clone(),
            None => cyclotomic(n)?,
        };
        Ok(&pm - &pn)
    }
}

#[allow(dead_code)]
pub(crate) fn degree_is_phi(n: u64) -> bool {
    matches!((cyclotomic(n), arith::phi(n)), (Ok(p), Ok(d)) if p.degree() == Some(d as usize))
}
