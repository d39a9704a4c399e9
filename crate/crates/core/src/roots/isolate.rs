//! Real root isolation with exact rational certificates, and refinement to
//! correctly rounded decimals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::aberth::aberth_f64;
use super::sturm::{Bound, SturmSequence};
use crate::ball::{round_fixed, Ball};
use crate::error::{Error, Result};
use crate::poly::{IntPoly, Rational};

/// Above this degree isolation is seeded from floating roots and only the
/// total count comes from a Sturm sequence.
pub const SEEDED_DEGREE: usize = 128;

/// An interval holding exactly one real root of a polynomial.
///
/// `sign_lo` and `sign_hi` are signs of the squarefree part at the ends.
/// A rational root found exactly has `lo == hi` and both signs zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub sign_lo: i8,
    pub sign_hi: i8,
    pub multiplicity: usize,
}

impl IsolatingInterval {
    pub fn exact(r: Rational, multiplicity: usize) -> Self {
        Self { lo: r.clone(), hi: r, sign_lo: 0, sign_hi: 0, multiplicity }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.is_exact() {
            x == &self.lo
        } else {
            &self.lo < x && x < &self.hi
        }
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        Ball::from_interval(&self.lo, &self.hi, prec)
    }
}

/// A refined real root with its decimal rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedRoot {
    /// Correctly rounded to `places` fractional digits.
    pub decimal: String,
    pub places: u32,
    #[serde(skip)]
    pub interval: Option<(Rational, Rational)>,
}

/// Smallest power of two above the Cauchy bound `1 + max|a_i| / |a_d|`.
pub fn root_bound(p: &IntPoly) -> BigInt {
    let lead = p.leading().map(|l| l.abs()).unwrap_or_else(BigInt::one);
    let (q, r) = p.max_abs_coeff().div_rem(&lead);
    let b: BigInt = q + 1u32 + if r.is_zero() { 0u32 } else { 1u32 };
    BigInt::one() << b.bits() as usize
}

fn half(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_integer(2.into())
}

/// Distinct real roots of `p`, each in a certified isolating interval,
/// sorted increasingly.
pub fn isolate_real_roots(p: &IntPoly) -> Result<Vec<IsolatingInterval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(vec![]);
    }
    let factors = p.squarefree_decomposition()?;
    let sq = factors.iter().fold(IntPoly::one(), |acc, f| &acc * f);
    let mut found = if sq.degree().unwrap() > SEEDED_DEGREE {
        isolate_seeded(&sq)?
    } else {
        isolate_sturm(&sq, &SturmSequence::new(&sq)?)
    };
    for iv in &mut found {
        iv.multiplicity = multiplicity_in(&factors, iv);
    }
    Ok(found)
}

fn multiplicity_in(factors: &[IntPoly], iv: &IsolatingInterval) -> usize {
    for (i, f) in factors.iter().enumerate() {
        let hit = if iv.is_exact() {
            f.sign_at(&iv.lo) == 0
        } else {
            f.degree().unwrap_or(0) > 0 && f.sign_at(&iv.lo) * f.sign_at(&iv.hi) < 0
        };
        if hit {
            return i + 1;
        }
    }
    1
}

/// Bisection driven by Sturm counts on `(lo, hi]`, for squarefree `sq`.
pub fn isolate_sturm(sq: &IntPoly, chain: &SturmSequence) -> Vec<IsolatingInterval> {
    let b = Rational::from_integer(root_bound(sq));
    let lo = -b.clone();
    let v_lo = chain.variations(&Bound::At(lo.clone()));
    let v_hi = chain.variations(&Bound::At(b.clone()));
    let mut out = Vec::new();
    let mut stack = vec![(lo, b, v_lo, v_hi)];
    while let Some((lo, hi, v_lo, v_hi)) = stack.pop() {
        let count = v_lo.saturating_sub(v_hi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            let s_hi = sq.sign_at(&hi);
            if s_hi == 0 {
                out.push(IsolatingInterval::exact(hi, 1));
                continue;
            }
            let s_lo = sq.sign_at(&lo);
            if s_lo != 0 {
                out.push(IsolatingInterval { lo, hi, sign_lo: s_lo, sign_hi: s_hi, multiplicity: 1 });
                continue;
            }
        }
        let mid = half(&lo, &hi);
        let v_mid = chain.variations(&Bound::At(mid.clone()));
        stack.push((lo, mid.clone(), v_lo, v_mid));
        stack.push((mid, hi, v_mid, v_hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Sign-change brackets around near-real floating seeds; complete when
/// their number matches the Sturm count of all real roots. Falls back to
/// Sturm bisection otherwise.
fn isolate_seeded(sq: &IntPoly) -> Result<Vec<IsolatingInterval>> {
    let chain = SturmSequence::new(sq)?;
    let total = chain.count(&Bound::NegInf, &Bound::PosInf);
    if let Some(found) = bracket_seeds(sq, total) {
        return Ok(found);
    }
    Ok(isolate_sturm(sq, &chain))
}

fn bracket_seeds(sq: &IntPoly, total: usize) -> Option<Vec<IsolatingInterval>> {
    let seeds = aberth_f64(sq, 500);
    if !seeds.converged {
        return None;
    }
    let mut xs: Vec<f64> = seeds
        .roots
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * z.re.abs().max(1.0))
        .map(|z| z.re)
        .collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    let mut out: Vec<IsolatingInterval> = Vec::new();
    for x in xs {
        let c = Rational::from_float(x)?;
        if sq.sign_at(&c) == 0 {
            out.push(IsolatingInterval::exact(c, 1));
            continue;
        }
        let mut eps = Rational::new(BigInt::one(), BigInt::one() << 44usize) * Rational::from_float(x.abs().max(1.0))?;
        for _ in 0..8 {
            let (lo, hi) = (&c - &eps, &c + &eps);
            let (s_lo, s_hi) = (sq.sign_at(&lo), sq.sign_at(&hi));
            if s_lo * s_hi < 0 {
                out.push(IsolatingInterval { lo, hi, sign_lo: s_lo, sign_hi: s_hi, multiplicity: 1 });
                break;
            }
            eps *= Rational::from_integer(16.into());
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    let disjoint = out.windows(2).all(|w| w[0].hi < w[1].lo);
    // each bracket holds an odd number of roots; disjoint and as many as
    // the total means exactly one each
    (disjoint && out.len() == total).then_some(out)
}

/// Bisects until the interval is narrower than `width`, keeping exact
/// rational signs of the squarefree part.
pub fn refine_interval(sq: &IntPoly, iv: &IsolatingInterval, width: &Rational) -> IsolatingInterval {
    let mut iv = iv.clone();
    while !iv.is_exact() && &iv.width() >= width {
        let mid = half(&iv.lo, &iv.hi);
        let s = sq.sign_at(&mid);
        if s == 0 {
            return IsolatingInterval::exact(mid, iv.multiplicity);
        }
        if s == iv.sign_lo {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    }
    iv
}

/// Refines until the whole interval rounds to the same decimal with
/// `places` fractional digits.
pub fn refine_root(p: &IntPoly, iv: &IsolatingInterval, places: u32) -> Result<RefinedRoot> {
    let sq = p.squarefree_part()?;
    let mut iv = iv.clone();
    if !iv.is_exact() {
        iv.sign_lo = sq.sign_at(&iv.lo);
        iv.sign_hi = sq.sign_at(&iv.hi);
        if iv.sign_lo * iv.sign_hi >= 0 {
            return Err(Error::Uncertified("interval does not bracket a sign change".into()));
        }
    }
    let ten = BigInt::from(10);
    let mut width = Rational::new(BigInt::one(), num_traits::pow(ten, places as usize + 1));
    for _ in 0..64 {
        iv = refine_interval(&sq, &iv, &width);
        if let Some(decimal) = round_fixed(&iv.lo, &iv.hi, places) {
            return Ok(RefinedRoot { decimal, places, interval: Some((iv.lo, iv.hi)) });
        }
        width /= Rational::from_integer(1024.into());
    }
    Err(Error::Uncertified("root sits on a rounding boundary".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::difference;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn simple_isolation() {
        let ivs = isolate_real_roots(&p(&[0, 2, -1])).unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].contains(&r(0, 1)));
        assert!(ivs[1].contains(&r(2, 1)));
        let golden = isolate_real_roots(&p(&[-1, -1, 1])).unwrap();
        assert_eq!(golden.len(), 2);
        assert!(golden[0].lo < r(-6, 10) && golden[0].hi > r(-62, 100));
        assert_eq!(refine_root(&p(&[-1, -1, 1]), &golden[1], 10).unwrap().decimal, "1.6180339887");
        assert!(isolate_real_roots(&p(&[-2])).unwrap().is_empty());
        assert_eq!(isolate_real_roots(&IntPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn cubic_limit_constant() {
        let c = p(&[1, 2, 1, 1]);
        let ivs = isolate_real_roots(&c).unwrap();
        assert_eq!(ivs.len(), 1);
        assert_eq!(refine_root(&c, &ivs[0], 12).unwrap().decimal, "-0.569840290998");
    }

    #[test]
    fn multiplicities() {
        // (x - 1)^3 (x + 2)^2 x
        let f = &(&(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-1, 1])) * &(&(&p(&[2, 1]) * &p(&[2, 1])) * &p(&[0, 1]));
        let ivs = isolate_real_roots(&f).unwrap();
        let m: Vec<usize> = ivs.iter().map(|iv| iv.multiplicity).collect();
        assert_eq!(m, vec![2, 1, 3]);
        assert!(ivs.iter().all(|iv| iv.is_exact() || iv.width() > Rational::zero()));
    }

    #[test]
    fn seeded_path_matches_sturm_path() {
        // degree 180 > SEEDED_DEGREE
        let d = difference(209, 179).unwrap();
        let sq = d.squarefree_part().unwrap();
        let total = SturmSequence::new(&sq).unwrap().count(&Bound::NegInf, &Bound::PosInf);
        assert!(bracket_seeds(&sq, total).is_some());
        let seeded = isolate_seeded(&sq).unwrap();
        let plain = isolate_sturm(&sq, &SturmSequence::new(&sq).unwrap());
        assert_eq!(seeded.len(), plain.len());
        for (a, b) in seeded.iter().zip(&plain) {
            assert!(a.lo <= b.hi && b.lo <= a.hi);
        }
    }

    #[test]
    fn exact_rational_roots_are_reported_exactly() {
        // (2x - 1)(x + 3)
        let f = p(&[-3, 5, 2]);
        let ivs = isolate_real_roots(&f).unwrap();
        assert_eq!(ivs.len(), 2);
        for iv in &ivs {
            let x = if iv.is_exact() { iv.lo.clone() } else { half(&iv.lo, &iv.hi) };
            let rr = refine_root(&f, iv, 6).unwrap();
            assert!(rr.decimal == "-3.000000" || rr.decimal == "0.500000", "{x} {}", rr.decimal);
        }
    }
}
