//! Per-pair coincidence computations and the scans over index ranges.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::cache::run_cached;
use super::complex::{complex_roots, has_quadratic_factor, ComplexRoot};
use super::isolate::{isolate_real_roots, refine_interval, IsolatingInterval};
use super::record::{CoincidenceRecord, RootFlag, RootKind, RootRecord};
use super::sturm::{Bound, SturmSequence};
use crate::ball::{eval_complex_ball, Ball, ComplexBall};
use crate::error::{Error, Result};
use crate::par::Mode;
use crate::poly::{CyclotomicTable, IntPoly, Rational};

fn rat(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

fn ordered(m: u64, n: u64) -> Result<(u64, u64)> {
    match m.cmp(&n) {
        std::cmp::Ordering::Equal => Err(Error::EqualIndices(m)),
        std::cmp::Ordering::Less => Ok((m, n)),
        std::cmp::Ordering::Greater => Ok((n, m)),
    }
}

/// Every pair `1 ≤ m < n ≤ max`, optionally coprime only, in `(m, n)` order.
pub fn pairs_up_to(max: u64, coprime_only: bool) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 2..=max {
        for m in 1..n {
            if !coprime_only || m.gcd(&n) == 1 {
                out.push((m, n));
            }
        }
    }
    out.sort();
    out
}

/// Exact root counts of Φ_m − Φ_n on the four excluded ranges
/// (−∞, −2], [−½, 0), (0, ½] and [2, ∞).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeCertificate {
    pub m: u64,
    pub n: u64,
    pub counts: [usize; 4],
    /// The only root found is x = 2 for {2, 6}.
    pub sanctioned: bool,
    pub holds: bool,
}

pub fn range_certificate(table: &CyclotomicTable, m: u64, n: u64) -> Result<RangeCertificate> {
    let (m, n) = ordered(m, n)?;
    let d = table.difference(m, n)?;
    if d.degree() == Some(0) {
        return Ok(RangeCertificate { m, n, counts: [0; 4], sanctioned: false, holds: true });
    }
    let sq = d.squarefree_part()?;
    let chain = SturmSequence::new(&sq)?;
    let at = |r: Rational| Bound::At(r);
    let zero_at = |r: &Rational| usize::from(sq.sign_at(r) == 0);
    let (neg_half, half, two) = (rat(-1, 2), rat(1, 2), rat(2, 1));
    let zero = Rational::zero();
    let c0 = chain.count(&Bound::NegInf, &at(-two.clone()));
    let c1 = (chain.count(&at(neg_half.clone()), &at(zero.clone())) + zero_at(&neg_half)) - zero_at(&zero);
    let c2 = chain.count(&at(zero.clone()), &at(half));
    let above = chain.count(&at(two.clone()), &Bound::PosInf);
    let c3 = above + zero_at(&two);
    let counts = [c0, c1, c2, c3];
    let sanctioned = (m, n) == (2, 6) && counts == [0, 0, 0, 1] && above == 0 && zero_at(&two) == 1;
    let holds = counts == [0; 4] || sanctioned;
    Ok(RangeCertificate { m, n, counts, sanctioned, holds })
}

// Refines until the root is placed relative to 0, ±½ and ±2; true when
// |x| ≤ ½ or |x| ≥ 2 for a nonzero root.
fn outside_range(sq: &IntPoly, iv: &IsolatingInterval) -> bool {
    let marks = [rat(-2, 1), rat(-1, 2), rat(0, 1), rat(1, 2), rat(2, 1)];
    let mut iv = iv.clone();
    if !iv.is_exact() {
        iv.sign_lo = sq.sign_at(&iv.lo);
        iv.sign_hi = sq.sign_at(&iv.hi);
    }
    while !iv.is_exact() {
        let Some(t) = marks.iter().find(|t| &iv.lo < *t && *t < &iv.hi) else { break };
        if sq.sign_at(t) == 0 {
            iv = IsolatingInterval::exact(t.clone(), iv.multiplicity);
        } else {
            let w = iv.width() / Rational::from_integer(4.into());
            iv = refine_interval(sq, &iv, &w);
        }
    }
    // the open interval now lies between consecutive marks
    let x = ((&iv.lo + &iv.hi) / Rational::from_integer(2.into())).abs();
    !x.is_zero() && (x <= rat(1, 2) || x >= rat(2, 1))
}

/// All real roots of Φ_m − Φ_n to `digits` fractional digits, with any
/// nonzero root outside ½ < |x| < 2 flagged.
pub fn real_coincidence_roots(m: u64, n: u64, digits: u32) -> Result<CoincidenceRecord> {
    let (m, n) = ordered(m, n)?;
    let table = CyclotomicTable::for_indices([m, n])?;
    real_record(&table, m, n, digits)
}

pub fn real_record(table: &CyclotomicTable, m: u64, n: u64, digits: u32) -> Result<CoincidenceRecord> {
    let (m, n) = ordered(m, n)?;
    let d = table.difference(m, n)?;
    let mut rec = CoincidenceRecord { m, n, roots: vec![], max_abs_real: None, flags: vec![], certificate: None };
    if d.degree() == Some(0) {
        return Ok(rec);
    }
    let sq = d.squarefree_part()?;
    let mut best: Option<(Rational, String)> = None;
    for iv in isolate_real_roots(&d)? {
        let r = RootRecord::real(&d, &iv, digits)?;
        if outside_range(&sq, &iv) {
            if (m, n) == (2, 6) && iv.is_exact() && iv.lo == rat(2, 1) {
                rec.flags.push(RootFlag::SanctionedException(r.value.clone()));
            } else {
                rec.flags.push(RootFlag::RangeViolation(r.value.clone()));
            }
        }
        let abs = r.modulus_value().unwrap_or_default();
        if best.as_ref().is_none_or(|(b, _)| &abs > b) {
            best = Some((abs, r.modulus.clone()));
        }
        rec.roots.push(r);
    }
    rec.max_abs_real = best.map(|(_, s)| s);
    Ok(rec)
}

/// Summary of a real scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealScanReport {
    pub max_index: u64,
    pub pairs: usize,
    pub records: Vec<CoincidenceRecord>,
    /// Pairs whose Sturm counts confirm the range.
    pub certified: usize,
    /// Largest nonzero |x| apart from the sanctioned root 2, with its pair.
    pub max_abs_nonzero: Option<(u64, u64, String)>,
    pub min_abs_nonzero: Option<(u64, u64, String)>,
    pub violations: Vec<(u64, u64, String)>,
    pub holds: bool,
}

pub fn summarize_real(max_index: u64, records: Vec<CoincidenceRecord>) -> RealScanReport {
    let mut max: Option<(Rational, (u64, u64, String))> = None;
    let mut min: Option<(Rational, (u64, u64, String))> = None;
    let mut violations = Vec::new();
    for rec in &records {
        for f in &rec.flags {
            if let RootFlag::RangeViolation(v) = f {
                violations.push((rec.m, rec.n, v.clone()));
            }
        }
        for r in &rec.roots {
            let Some(a) = r.modulus_value() else { continue };
            if a.is_zero() || ((rec.m, rec.n) == (2, 6) && a == rat(2, 1)) {
                continue;
            }
            let item = (rec.m, rec.n, r.value.clone());
            if max.as_ref().is_none_or(|(b, _)| &a > b) {
                max = Some((a.clone(), item.clone()));
            }
            if min.as_ref().is_none_or(|(b, _)| &a < b) {
                min = Some((a, item));
            }
        }
    }
    let mut certified = 0;
    for rec in &records {
        match &rec.certificate {
            Some(c) if c.holds => certified += 1,
            Some(c) => violations.push((c.m, c.n, format!("counts {:?}", c.counts))),
            None => violations.push((rec.m, rec.n, "no range certificate".into())),
        }
    }
    let holds = violations.is_empty();
    RealScanReport {
        max_index,
        pairs: records.len(),
        records,
        certified,
        max_abs_nonzero: max.map(|x| x.1),
        min_abs_nonzero: min.map(|x| x.1),
        violations,
        holds,
    }
}

/// [`real_record`] with the Sturm range certificate attached. The two
/// verdicts are independent: isolation places each root, the counts
/// bound the excluded ranges directly.
pub fn certified_real_record(table: &CyclotomicTable, m: u64, n: u64, digits: u32) -> Result<CoincidenceRecord> {
    let mut rec = real_record(table, m, n, digits)?;
    rec.certificate = Some(range_certificate(table, m, n)?);
    Ok(rec)
}

/// Real roots and range certificates for every pair `m < n ≤ max_index`.
pub fn scan_real(max_index: u64, digits: u32, mode: Mode) -> Result<RealScanReport> {
    scan_real_cached(max_index, digits, mode, None, false)
}

/// [`scan_real`] logging each record to a JSON-lines cache; see
/// [`run_cached`] for `resume`.
pub fn scan_real_cached(max_index: u64, digits: u32, mode: Mode, cache: Option<&Path>, resume: bool) -> Result<RealScanReport> {
    let table = CyclotomicTable::up_to(max_index)?;
    let pairs = pairs_up_to(max_index, false);
    let records = run_cached(&pairs, mode, cache, resume, |m, n| certified_real_record(&table, m, n, digits))?;
    Ok(summarize_real(max_index, records))
}

/// Fractional digits used for complex roots at a given precision.
pub fn complex_digits(precision_bits: u32) -> u32 {
    ((precision_bits as f64 * std::f64::consts::LOG10_2) / 2.0).floor().clamp(1.0, 20.0) as u32
}

fn modulus_flag(d: &IntPoly, root: &ComplexRoot, value: &str) -> Option<RootFlag> {
    let (lo, hi) = root.modulus_sqr_bounds();
    let (half, two) = (rat(1, 2), rat(2, 1));
    if lo > half && hi < two {
        return None;
    }
    if lo > two || hi < half {
        return Some(RootFlag::ModulusOutside(value.to_string()));
    }
    let re = root.re.to_rational();
    let nearest = |x: Rational| x.round().to_integer();
    if hi >= two && has_quadratic_factor(d, 1, &nearest(&re * rat(2, 1)), 2) {
        return Some(RootFlag::ModulusSqrt2(value.to_string()));
    }
    if lo <= half && has_quadratic_factor(d, 2, &nearest(&re * rat(4, 1)), 1) {
        return Some(RootFlag::ModulusInvSqrt2(value.to_string()));
    }
    Some(RootFlag::ModulusUndecided(value.to_string()))
}

/// Nonreal roots of Φ_m − Φ_n with modulus flags. The certified real roots
/// are cross-checked against a Sturm count and the multiplicities against
/// the degree.
pub fn complex_record(table: &CyclotomicTable, m: u64, n: u64, precision_bits: u32) -> Result<CoincidenceRecord> {
    let (m, n) = ordered(m, n)?;
    let d = table.difference(m, n)?;
    let mut rec = CoincidenceRecord { m, n, roots: vec![], max_abs_real: None, flags: vec![], certificate: None };
    let Some(deg) = d.degree().filter(|&k| k > 0) else { return Ok(rec) };
    let roots = complex_roots(&d, precision_bits)?;
    let total: usize = roots.iter().map(|r| r.multiplicity).sum();
    if total != deg {
        return Err(Error::Uncertified(format!("({m},{n}): {total} roots for degree {deg}")));
    }
    let sq = d.squarefree_part()?;
    let real = SturmSequence::new(&sq)?.count(&Bound::NegInf, &Bound::PosInf);
    if real != roots.iter().filter(|r| r.real).count() {
        return Err(Error::Uncertified(format!("({m},{n}): real root count disagrees with Sturm")));
    }
    let digits = complex_digits(precision_bits);
    for root in roots.iter().filter(|r| !r.real) {
        let r = RootRecord::complex(root, digits, 2 * precision_bits);
        if let Some(flag) = modulus_flag(&d, root, &r.value) {
            rec.flags.push(flag);
        }
        rec.roots.push(r);
    }
    Ok(rec)
}

/// Histogram bin over root moduli, `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusBin {
    pub lo: String,
    pub hi: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexScanReport {
    pub max_index: u64,
    pub coprime_only: bool,
    pub records: Vec<CoincidenceRecord>,
    pub histogram: Vec<ModulusBin>,
    pub min_modulus: Option<(u64, u64, String)>,
    pub max_modulus: Option<(u64, u64, String)>,
    /// Pairs with a root of modulus exactly √2.
    pub sqrt2_pairs: Vec<(u64, u64)>,
    pub inv_sqrt2_pairs: Vec<(u64, u64)>,
    pub outside: Vec<(u64, u64, String)>,
    pub undecided: Vec<(u64, u64, String)>,
    /// Every nonreal modulus lies in (1/√2, √2].
    pub holds: bool,
}

const BIN_WIDTH: (i64, i64) = (1, 20);

pub fn summarize_complex(max_index: u64, coprime_only: bool, records: Vec<CoincidenceRecord>) -> ComplexScanReport {
    let mut bins: BTreeMap<BigInt, usize> = BTreeMap::new();
    let mut min: Option<(Rational, (u64, u64, String))> = None;
    let mut max: Option<(Rational, (u64, u64, String))> = None;
    let (mut sqrt2, mut inv, mut outside, mut undecided) = (vec![], vec![], vec![], vec![]);
    let w = rat(BIN_WIDTH.0, BIN_WIDTH.1);
    for rec in &records {
        for r in rec.roots.iter().filter(|r| r.kind == RootKind::Complex) {
            let Some(a) = r.modulus_value() else { continue };
            *bins.entry((&a / &w).floor().to_integer()).or_default() += 1;
            let item = (rec.m, rec.n, r.modulus.clone());
            if min.as_ref().is_none_or(|(b, _)| &a < b) {
                min = Some((a.clone(), item.clone()));
            }
            if max.as_ref().is_none_or(|(b, _)| &a > b) {
                max = Some((a, item));
            }
        }
        for f in &rec.flags {
            match f {
                RootFlag::ModulusSqrt2(_) => sqrt2.push((rec.m, rec.n)),
                RootFlag::ModulusInvSqrt2(v) => {
                    inv.push((rec.m, rec.n));
                    outside.push((rec.m, rec.n, v.clone()));
                }
                RootFlag::ModulusOutside(v) => outside.push((rec.m, rec.n, v.clone())),
                RootFlag::ModulusUndecided(v) => undecided.push((rec.m, rec.n, v.clone())),
                _ => {}
            }
        }
    }
    sqrt2.dedup();
    inv.dedup();
    let histogram = bins
        .into_iter()
        .map(|(k, count)| {
            let lo = Rational::from_integer(k) * &w;
            let hi = &lo + &w;
            let show = |x: &Rational| crate::ball::round_fixed(x, x, 2).unwrap();
            ModulusBin { lo: show(&lo), hi: show(&hi), count }
        })
        .collect();
    let holds = outside.is_empty() && undecided.is_empty();
    ComplexScanReport {
        max_index,
        coprime_only,
        records,
        histogram,
        min_modulus: min.map(|x| x.1),
        max_modulus: max.map(|x| x.1),
        sqrt2_pairs: sqrt2,
        inv_sqrt2_pairs: inv,
        outside,
        undecided,
        holds,
    }
}

/// Nonreal roots of every pair `m < n ≤ max_index` with a modulus
/// histogram and the boundary cases of (1/√2, √2].
pub fn scan_complex(max_index: u64, coprime_only: bool, precision_bits: u32, mode: Mode) -> Result<ComplexScanReport> {
    scan_complex_cached(max_index, coprime_only, precision_bits, mode, None, false)
}

pub fn scan_complex_cached(
    max_index: u64,
    coprime_only: bool,
    precision_bits: u32,
    mode: Mode,
    cache: Option<&Path>,
    resume: bool,
) -> Result<ComplexScanReport> {
    let table = CyclotomicTable::up_to(max_index)?;
    let pairs = pairs_up_to(max_index, coprime_only);
    let records = run_cached(&pairs, mode, cache, resume, |m, n| complex_record(&table, m, n, precision_bits))?;
    Ok(summarize_complex(max_index, coprime_only, records))
}

/// Outcome of lifting positive roots α of Φ_m − Φ_n to i·√α for
/// Φ_4m − Φ_4n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuarterLift {
    pub m: u64,
    pub n: u64,
    pub alphas: Vec<String>,
    /// Upper bounds on |Φ_4m(i√α) − Φ_4n(i√α)|.
    pub residuals: Vec<String>,
    pub holds: bool,
}

pub fn quarter_lift_check(m: u64, n: u64, digits: u32) -> Result<QuarterLift> {
    if m.is_multiple_of(2) || n.is_multiple_of(2) {
        return Err(Error::Domain(format!("indices must be odd, got ({m}, {n})")));
    }
    let (m, n) = ordered(m, n)?;
    let d = crate::poly::difference(m, n)?;
    let lifted = crate::poly::difference(4 * m, 4 * n)?;
    let prec = 4 * digits + 128;
    let width = Rational::new(BigInt::one(), BigInt::one() << (4 * digits as usize + 64));
    let sq = d.squarefree_part()?;
    let threshold = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize));
    let mut out = QuarterLift { m, n, alphas: vec![], residuals: vec![], holds: true };
    for iv in isolate_real_roots(&d)? {
        if iv.hi <= Rational::zero() {
            continue;
        }
        let mut iv = iv;
        if !iv.is_exact() {
            iv.sign_lo = sq.sign_at(&iv.lo);
            iv.sign_hi = sq.sign_at(&iv.hi);
            iv = refine_interval(&sq, &iv, &width);
        }
        if iv.lo <= Rational::zero() && !iv.is_exact() {
            continue;
        }
        let alpha = iv.to_ball(prec);
        let s = alpha.sqrt(prec).ok_or_else(|| Error::Uncertified("sqrt of root".into()))?;
        let z = ComplexBall::new(Ball::default(), s.clone());
        let v = eval_complex_ball(&lifted, &z, prec).upper_abs().to_rational();
        // magnitude Σ|c_j| s^j with s bounded below
        let s_lo = s.lower().to_rational();
        let mut scale = Rational::zero();
        for c in lifted.coeffs().iter().rev() {
            scale = scale * &s_lo + Rational::from_integer(c.abs());
        }
        out.holds &= v < &threshold * &scale;
        out.alphas.push(RootRecord::real(&d, &iv, digits.min(20))?.value);
        out.residuals.push(crate::ball::format_upper_sci(&v, 3));
    }
    Ok(out)
}
