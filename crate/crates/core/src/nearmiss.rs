//! Real coincidences just below 2 from prime triples pq = p + q + r, and
//! the roots near ±0.57 and 0.52 from the limit families.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, phi, small_primes};
use crate::ball::{round_fixed, round_significant};
use crate::error::{Error, Result};
use crate::par::{self, Mode};
use crate::poly::{cyclotomic, difference, IntPoly, Rational};
use crate::roots::{isolate_real_roots, refine_interval, refine_root, sturm_count, Bound, IsolatingInterval, RefinedRoot};

/// The ten (p, q) rows of the published near-miss table.
pub const TABLE1_ROWS: [(u64, u64); 10] =
    [(3, 5), (3, 7), (3, 11), (3, 13), (5, 7), (5, 13), (5, 19), (7, 11), (7, 13), (7, 19)];

fn rat(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

/// ψ_k = x^k − x^(k−1) − … − x − 1.
pub fn psi(k: usize) -> IntPoly {
    let mut c = vec![BigInt::from(-1); k + 1];
    c[k] = BigInt::one();
    IntPoly::new(c)
}

/// Isolating interval for the largest real root of ψ_k, k ≥ 2. The Newton
/// step from 2 gives 2 − 1/(2^k − 1); the bracket is widened until the sign
/// changes and then checked to hold the only root above it.
pub fn alpha_interval(k: usize) -> Result<IsolatingInterval> {
    if k < 2 {
        return Err(Error::Domain(format!("need k ≥ 2, got {k}")));
    }
    let p = psi(k);
    let two = rat(2, 1);
    let seed = &two - Rational::new(BigInt::one(), (BigInt::one() << k) - 1);
    let mut step = Rational::new(BigInt::one(), BigInt::one() << (k + 2));
    let mut lo = &seed - &step;
    while p.sign_at(&lo) >= 0 {
        step *= rat(4, 1);
        lo = &seed - &step;
    }
    // ψ_k(x) > 0 for x ≥ 2, so one root in (lo, 2] is the largest
    if sturm_count(&p, &Bound::At(lo.clone()), &Bound::At(two.clone()))? != 1 {
        return Err(Error::Uncertified(format!("bracket for ψ_{k} holds more than one root")));
    }
    Ok(IsolatingInterval { lo, hi: two, sign_lo: -1, sign_hi: 1, multiplicity: 1 })
}

pub fn alpha_root(k: usize, digits: u32) -> Result<RefinedRoot> {
    refine_root(&psi(k), &alpha_interval(k)?, digits)
}

/// Index of the ψ whose largest root is the α column of the table.
pub fn table_alpha_index(p: u64) -> usize {
    p as usize + 1
}

/// Primes q with p < q ≤ `q_max` and r = pq − p − q prime.
pub fn find_triples(p: u64, q_max: u64) -> Result<Vec<(u64, u64)>> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok((p + 1..=q_max)
        .filter(|&q| is_prime(q))
        .map(|q| (q, p * q - p - q))
        .filter(|&(_, r)| is_prime(r))
        .collect())
}

fn triple(p: u64, q: u64) -> Result<u64> {
    if !is_prime(p) || !is_prime(q) || q <= p {
        return Err(Error::Domain(format!("need primes p < q, got ({p}, {q})")));
    }
    let r = p * q - p - q;
    if !is_prime(r) {
        return Err(Error::Domain(format!("r = {r} is not prime for ({p}, {q})")));
    }
    Ok(r)
}

/// Φ_pq − Φ_r = ψ_k(x)·x^(φ(pq)−k) + δ(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaDecomposition {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub k: usize,
    pub main: IntPoly,
    pub delta: IntPoly,
}

/// The near-factorization with ψ_(p−1), checking deg δ ≤ φ(pq) − p and
/// coefficients of δ in {−2, −1, 0, 1}.
pub fn delta_decompose(p: u64, q: u64) -> Result<DeltaDecomposition> {
    delta_decompose_with(p, q, p as usize - 1)
}

pub fn delta_decompose_with(p: u64, q: u64, k: usize) -> Result<DeltaDecomposition> {
    let r = triple(p, q)?;
    let d = difference(p * q, r)?;
    let top = phi(p * q)? as usize;
    let main = psi(k).shift_up(top - k);
    let delta = &d - &main;
    if &main + &delta != d {
        return Err(Error::Uncertified("decomposition does not sum back".into()));
    }
    let bound = top - p as usize;
    if delta.degree().is_some_and(|e| e > bound) {
        return Err(Error::Uncertified(format!("deg δ exceeds φ(pq) − p = {bound}")));
    }
    let small = |c: &BigInt| (-2..=1).contains(&i64::try_from(c).unwrap_or(i64::MAX));
    if !delta.coeffs().iter().all(small) {
        return Err(Error::Uncertified("δ has a coefficient outside {−2, −1, 0, 1}".into()));
    }
    Ok(DeltaDecomposition { p, q, r, k, main, delta })
}

fn largest_root_interval(d: &IntPoly) -> Result<IsolatingInterval> {
    isolate_real_roots(d)?.pop().ok_or_else(|| Error::Uncertified("no real root".into()))
}

/// The largest real root β of Φ_pq − Φ_r.
pub fn near_miss_root(p: u64, q: u64, digits: u32) -> Result<RefinedRoot> {
    let r = triple(p, q)?;
    let d = difference(p * q, r)?;
    refine_root(&d, &largest_root_interval(&d)?, digits)
}

fn narrowed(p: &IntPoly, iv: &IsolatingInterval, width: &Rational) -> Result<IsolatingInterval> {
    let sq = p.squarefree_part()?;
    let mut iv = iv.clone();
    if !iv.is_exact() {
        iv.sign_lo = sq.sign_at(&iv.lo);
        iv.sign_hi = sq.sign_at(&iv.hi);
    }
    Ok(refine_interval(&sq, &iv, width))
}

/// First-order location of β from the decomposition around the table's α.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationEstimate {
    pub p: u64,
    pub q: u64,
    pub alpha: String,
    /// α − δ(α)/(D′(α) − δ′(α)).
    pub first_order: String,
    /// α − 2^(−q).
    pub crude: String,
    /// α − first_order, to `digits` significant digits.
    pub first_order_gap: String,
}

pub fn perturbation_estimate(p: u64, q: u64, digits: u32) -> Result<PerturbationEstimate> {
    let dec = delta_decompose_with(p, q, table_alpha_index(p))?;
    let d = &dec.main + &dec.delta;
    let width = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize + 20));
    let iv = narrowed(&psi(dec.k), &alpha_interval(dec.k)?, &width)?;
    let a = (&iv.lo + &iv.hi) / rat(2, 1);
    let denom = d.derivative().eval_rational(&a) - dec.delta.derivative().eval_rational(&a);
    if denom.is_zero() {
        return Err(Error::Uncertified("vanishing derivative at α".into()));
    }
    let step = dec.delta.eval_rational(&a) / denom;
    let first = &a - &step;
    let crude = &a - Rational::new(BigInt::one(), BigInt::one() << q);
    let fixed = |x: &Rational| round_fixed(x, x, digits).unwrap_or_default();
    Ok(PerturbationEstimate {
        p,
        q,
        alpha: fixed(&a),
        first_order: fixed(&first),
        crude: fixed(&crude),
        first_order_gap: round_significant(&step, &step, digits).unwrap_or_else(|| "0".into()),
    })
}

/// One row of the near-miss table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub beta: String,
    /// Largest root of ψ_(p+1), the printed reference.
    pub alpha: String,
    /// Largest root of ψ_(p−1), as named in the text.
    pub alpha_text: String,
    /// (α − β)^(−1).
    pub inv_gap: String,
    /// 1/(2^q (α − β)).
    pub scaled_gap: String,
}

/// `beta` and `alpha` have `digits` fractional digits; the two gap
/// columns have `digits + 1` significant digits, as printed in the table.
pub fn table_row(p: u64, q: u64, digits: u32) -> Result<TripleRecord> {
    let r = triple(p, q)?;
    let d = difference(p * q, r)?;
    let k = table_alpha_index(p);
    let beta_iv = largest_root_interval(&d)?;
    let alpha_iv = alpha_interval(k)?;
    let sig = digits + 1;
    let two_q = Rational::from_integer(BigInt::one() << q);
    let mut width = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 2 * digits as usize + 8));
    for _ in 0..16 {
        let b = narrowed(&d, &beta_iv, &width)?;
        let a = narrowed(&psi(k), &alpha_iv, &width)?;
        let (gap_lo, gap_hi) = (&a.lo - &b.hi, &a.hi - &b.lo);
        if gap_lo.is_positive() {
            let inv = round_significant(&gap_hi.recip(), &gap_lo.recip(), sig);
            let scaled = round_significant(&(&gap_hi * &two_q).recip(), &(&gap_lo * &two_q).recip(), sig);
            if let (Some(inv_gap), Some(scaled_gap)) = (inv, scaled) {
                return Ok(TripleRecord {
                    p,
                    q,
                    r,
                    beta: refine_root(&d, &b, digits)?.decimal,
                    alpha: refine_root(&psi(k), &a, digits)?.decimal,
                    alpha_text: alpha_root(p as usize - 1, digits)?.decimal,
                    inv_gap,
                    scaled_gap,
                });
            }
        }
        width /= Rational::from_integer(BigInt::one() << 32);
    }
    Err(Error::Uncertified(format!("gap columns for ({p}, {q}) not resolved")))
}

pub fn table1(rows: &[(u64, u64)], digits: u32, mode: Mode) -> Result<Vec<TripleRecord>> {
    par::map(mode, rows, |&(p, q)| table_row(p, q, digits)).into_iter().collect()
}

/// Families whose roots approach ρ, −ρ, σ, and a value just below 0.52.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Φ_3p − Φ_4, near ρ.
    ThreeP(u64),
    /// Φ_6p − Φ_4, near −ρ.
    SixP(u64),
    /// Φ_30p − Φ_4p, near σ. `ThirtyP(1)` is Φ_30 − Φ_4.
    ThirtyP(u64),
    /// Φ_m − Φ_(2m/15) with m the product of the first k primes.
    Primorial(u32),
}

impl Family {
    /// The indices (m, n) and the value the root should be near.
    pub fn indices(&self) -> Result<(u64, u64, Rational)> {
        let rho = rat(-57, 100);
        let check = |p: u64, base: u64| {
            if p == 1 || (is_prime(p) && !base.is_multiple_of(p)) {
                Ok(())
            } else {
                Err(Error::Domain(format!("need 1 or a prime not dividing {base}, got {p}")))
            }
        };
        match *self {
            Family::ThreeP(p) => check(p, 6).map(|_| (3 * p, 4, rho)),
            Family::SixP(p) => check(p, 6).map(|_| (6 * p, 4, -rho)),
            Family::ThirtyP(p) => check(p, 30).map(|_| (30 * p, 4 * p, rat(53, 100))),
            Family::Primorial(k) => {
                if !(3..=9).contains(&k) {
                    return Err(Error::Domain(format!("need 3 ≤ k ≤ 9, got {k}")));
                }
                let m: u64 = small_primes().iter().take(k as usize).product();
                Ok((m, 2 * m / 15, rat(52, 100)))
            }
        }
    }
}

/// The real root of the family's difference closest to its target.
pub fn limit_family_root(family: Family, digits: u32) -> Result<RefinedRoot> {
    let (m, n, target) = family.indices()?;
    let d = difference(m, n)?;
    let iv = isolate_real_roots(&d)?
        .into_iter()
        .min_by_key(|iv| ((&iv.lo + &iv.hi) / rat(2, 1) - &target).abs())
        .ok_or_else(|| Error::Uncertified(format!("Φ_{m} − Φ_{n} has no real root")))?;
    refine_root(&d, &iv, digits)
}

/// ρ (the real root of x³ + x² + 2x + 1) and σ (the root of Φ_30 − Φ_4 in
/// (0, 1)).
pub fn limit_constants(digits: u32) -> Result<(RefinedRoot, RefinedRoot)> {
    let cubic = IntPoly::from_i64(&[1, 2, 1, 1]);
    let rho_iv = isolate_real_roots(&cubic)?;
    if rho_iv.len() != 1 {
        return Err(Error::Uncertified("cubic should have one real root".into()));
    }
    let rho = refine_root(&cubic, &rho_iv[0], digits)?;
    let d = difference(30, 4)?;
    let sigma_iv = isolate_real_roots(&d)?
        .into_iter()
        .find(|iv| iv.lo >= Rational::zero() && iv.hi <= Rational::one() && !iv.contains(&Rational::zero()))
        .ok_or_else(|| Error::Uncertified("Φ_30 − Φ_4 has no root in (0, 1)".into()))?;
    Ok((rho, refine_root(&d, &sigma_iv, digits)?))
}

/// First degree at which Φ_3p departs from the series of
/// 1/(1 + x + x²) = Σ (1 − x) x^(3j), or `None` if it never does.
pub fn three_p_series_departure(p: u64) -> Result<Option<usize>> {
    let c = cyclotomic(3 * p)?;
    let series = |i: usize| BigInt::from([1, -1, 0][i % 3]);
    Ok(c.coeffs().iter().enumerate().position(|(i, a)| *a != series(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        assert_eq!(psi(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(psi(2), IntPoly::from_i64(&[-1, -1, 1]));
        for k in 1..=64 {
            let two = BigInt::from(2);
            assert_eq!(psi(k).eval_int(&two), BigInt::one());
            assert_eq!(psi(k).derivative().eval_int(&two), (BigInt::one() << k) - 1);
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_root(2, 10).unwrap().decimal, "1.6180339887");
        assert_eq!(alpha_root(4, 14).unwrap().decimal, "1.92756197548293");
        assert_eq!(alpha_root(6, 14).unwrap().decimal, "1.98358284342433");
        assert_eq!(alpha_root(8, 14).unwrap().decimal, "1.99603117973541");
        assert!(alpha_root(1, 5).is_err());
    }

    #[test]
    fn triple_examples() {
        assert_eq!(find_triples(3, 13).unwrap(), vec![(5, 7), (7, 11), (11, 19), (13, 23)]);
        assert_eq!(find_triples(5, 19).unwrap(), vec![(7, 23), (13, 47), (19, 71)]);
        assert_eq!(find_triples(11, 19).unwrap(), vec![(19, 179)]);
        assert!(find_triples(9, 20).is_err());
    }

    #[test]
    fn delta_examples() {
        let d = delta_decompose(3, 5).unwrap();
        assert_eq!(d.delta, IntPoly::from_i64(&[0, -2, -1, 0, -2]));
        assert_eq!(d.r, 7);
        assert!(delta_decompose(3, 7).unwrap().delta.degree().unwrap() <= 9);
        assert!(delta_decompose(5, 7).unwrap().delta.degree().unwrap() <= 19);
        assert!(delta_decompose(3, 13).is_ok());
        assert!(delta_decompose(5, 11).is_err());
        for p in [3u64, 5, 7] {
            for (q, _) in find_triples(p, 23).unwrap() {
                delta_decompose(p, q).unwrap();
                delta_decompose_with(p, q, table_alpha_index(p)).unwrap();
            }
        }
    }

    #[test]
    fn near_miss_examples() {
        assert_eq!(near_miss_root(3, 5, 14).unwrap().decimal, "1.90040519768798");
        assert_eq!(near_miss_root(5, 7, 14).unwrap().decimal, "1.97926028654319");
        assert_eq!(near_miss_root(7, 19, 14).unwrap().decimal, "1.99603017934944");
    }

    #[test]
    fn perturbation_examples() {
        let e = perturbation_estimate(3, 5, 15).unwrap();
        let est: f64 = e.first_order_gap.parse().unwrap();
        let beta: f64 = near_miss_root(3, 5, 15).unwrap().decimal.parse().unwrap();
        let alpha: f64 = e.alpha.parse().unwrap();
        let gap = alpha - beta;
        assert!((gap - 0.02716).abs() < 1e-5);
        assert!(est > gap / 2.0 && est < gap * 2.0);
        let crude: f64 = e.crude.parse().unwrap();
        assert!((alpha - crude - 1.0 / 32.0).abs() < 1e-14);
        let row = table_row(5, 13, 11).unwrap();
        assert_eq!(row.scaled_gap, "1.74967873897");
        let row = table_row(7, 13, 14).unwrap();
        assert_eq!(row.scaled_gap, "1.92863418206542");
    }

    #[test]
    fn table_row_examples() {
        let row = table_row(3, 11, 14).unwrap();
        assert_eq!(row.beta, "1.92717413781454");
        assert_eq!(row.inv_gap, "2578.39833911748");
        assert_eq!(row.alpha_text, "1.61803398874989");
        let row = table_row(7, 11, 14).unwrap();
        assert_eq!(row.beta, "1.99577873757697");
        assert_eq!(row.scaled_gap, "1.93423021341405");
        let row = table_row(5, 19, 14).unwrap();
        assert_eq!(row.beta, "1.98358169859533");
        assert_eq!(row.inv_gap, "873492.901538466");
    }

    #[test]
    fn limit_examples() {
        let (rho, sigma) = limit_constants(12).unwrap();
        assert_eq!(rho.decimal, "-0.569840290998");
        assert_eq!(sigma.decimal, "0.528455559277");
        assert_eq!(limit_family_root(Family::ThirtyP(1), 13).unwrap().decimal, "0.5284555592772");
        let r101: f64 = limit_family_root(Family::ThreeP(101), 12).unwrap().decimal.parse().unwrap();
        assert!((r101 + 0.569840290998).abs() < 1e-3);
        assert!(Family::ThreeP(9).indices().is_err());
        assert!(Family::Primorial(2).indices().is_err());
        assert_eq!(Family::Primorial(5).indices().unwrap().0, 2310);
        assert_eq!(Family::Primorial(5).indices().unwrap().1, 308);
    }

    #[test]
    fn termwise_limit() {
        // (1 + x^p + x^2p)/(1 + x + x²) agrees with the series below x^p
        for p in [5u64, 41, 101, 199] {
            assert_eq!(three_p_series_departure(p).unwrap(), Some(p as usize));
        }
    }
}
