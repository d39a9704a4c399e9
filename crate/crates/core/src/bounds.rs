//! Verification of the size bounds for Φ_n away from the unit circle and of
//! the log-ratio g(m, n, x) on (0, ½].
//!
//! Inequalities and equality cases are decided on exact rationals or exact
//! Gaussian integers. Only logarithms go through ball arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, profile};
use crate::ball::{ln_one_minus, round_significant, Ball};
use crate::error::{Error, Result};
use crate::par::{self, Mode};
use crate::poly::{cyclotomic, eval_cyclotomic_rational, Rational};

fn rat(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

fn show(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Both sides of the tail inequality
/// |log(1 − x^−k)| > Σ_{j>k} |log(1 − x^−j)|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailGap {
    pub left: Ball,
    /// Partial sum to `j_max` widened by a bound on the rest of the series.
    pub right_tail: Ball,
    /// Certified `left > right_tail`; false also when undecided.
    pub holds: bool,
}

pub fn lemma_tail_gap(x: &Rational, k: u64, j_max: u64) -> Result<TailGap> {
    if x < &rat(2, 1) {
        return Err(Error::Domain(format!("need x ≥ 2, got {x}")));
    }
    if j_max <= k || k == 0 {
        return Err(Error::Domain(format!("need 1 ≤ k < j_max, got k = {k}, j_max = {j_max}")));
    }
    let lg = x.numer().bits() as u32;
    let prec = 96 + 2 * lg * (j_max.min(4096) as u32);
    let inv = x.recip();
    let left = ln_one_minus(&num_traits::pow(inv.clone(), k as usize), prec).neg();
    let mut sum = Ball::default();
    let mut t = num_traits::pow(inv.clone(), k as usize);
    for _ in k + 1..=j_max {
        t *= &inv;
        sum = sum.add(&ln_one_minus(&t, prec).neg(), prec);
    }
    // Σ_{j>J} |log(1 − x^−j)| ≤ Σ_{j>J} x^−j / (1 − x^−j) ≤ x^−J / ((x − 1)(1 − x^−(J+1)))
    let one = Rational::one();
    let t_next = &t * &inv;
    let rest = &t / ((x - &one) * (&one - &t_next));
    let half_rest = Ball::from_rational(&(rest / Rational::from_integer(2.into())), prec);
    let right_tail = Ball::new(sum.add(&half_rest, prec).mid, sum.rad.add(&half_rest.upper_abs()).add(&half_rest.rad));
    let holds = left.lower() > right_tail.upper();
    Ok(TailGap { left, right_tail, holds })
}

/// f_n(x) = Φ_n(x) / x^φ(n), exactly. For n > 1 it is checked against
/// Φ_n(1/x).
pub fn f_ratio_exact(n: u64, x: &Rational) -> Result<Rational> {
    if x.is_zero() {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    let phi = profile(n)?.phi;
    let value = eval_cyclotomic_rational(n, x)? / num_traits::pow(x.clone(), phi as usize);
    if n > 1 && value != eval_cyclotomic_rational(n, &x.recip())? {
        return Err(Error::Uncertified(format!("f_{n}({x}) differs from Φ_{n}(1/x)")));
    }
    Ok(value)
}

pub fn f_ratio(n: u64, x: &Rational, precision_bits: u32) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("need x > 0, got {x}")));
    }
    Ok(Ball::from_rational(&f_ratio_exact(n, x)?, precision_bits))
}

/// Which pair of inequalities applies, by μ(rad(n)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSide {
    /// μ(rad n) = 1: Φ_n below x^φ(n).
    Below,
    /// μ(rad n) = −1: Φ_n above x^φ(n).
    Above,
    /// The complex two-sided bound ½|z|^φ ≤ |Φ_n(z)| < 2|z|^φ.
    Complex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub point: String,
    /// Φ_n(x)/x^φ(n), or |Φ_n(z)|/|z|^φ(n), to 20 significant digits.
    pub ratio: String,
    pub side: BoundSide,
    pub holds: bool,
    /// The factor-½ lower bound is attained.
    pub equality: bool,
}

fn ratio_string(r: &Rational) -> String {
    round_significant(r, r, 20).unwrap_or_else(|| "0".into())
}

/// Both the sharp real bounds with (x^q − 1)/x^q and the factor-2 bounds,
/// decided exactly. Equality in the sharp lower bound is allowed only for
/// n = 1 and in the factor-2 bound only for (n, x) = (1, 2).
pub fn check_real_bounds(n: u64, x: &Rational) -> Result<BoundReport> {
    if x < &rat(2, 1) {
        return Err(Error::Domain(format!("need x ≥ 2, got {x}")));
    }
    let pr = profile(n)?;
    let f = f_ratio_exact(n, x)?;
    let xq = num_traits::pow(x.clone(), pr.qpart as usize);
    let one = Rational::one();
    let half = rat(1, 2);
    let (side, sharp, coarse) = if pr.mu_rad == 1 {
        let lower = (&xq - &one) / &xq;
        let sharp = f < one && (f > lower || (f == lower && n == 1));
        let coarse_eq = f == half;
        let coarse = f < one && (f > half || (coarse_eq && n == 1 && x == &rat(2, 1)));
        (BoundSide::Below, sharp, coarse)
    } else {
        let upper = &xq / (&xq - &one);
        (BoundSide::Above, f > one && f < upper, f > one && f < rat(2, 1))
    };
    Ok(BoundReport {
        n,
        point: show(x),
        ratio: ratio_string(&f),
        side,
        holds: sharp && coarse,
        equality: f == half,
    })
}

/// A Gaussian rational point `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianPoint {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianPoint {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(x: i64) -> Self {
        Self::new(rat(x, 1), Rational::zero())
    }

    fn to_string_exact(&self) -> String {
        if self.im.is_zero() {
            return show(&self.re);
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{}{}{}i", show(&self.re), sign, show(&self.im.abs()))
    }
}

/// ½|z|^φ(n) ≤ |Φ_n(z)| < 2|z|^φ(n) for |z| ≥ 2, compared as exact
/// integers after clearing the common denominator.
pub fn check_complex_bounds(n: u64, z: &GaussianPoint) -> Result<BoundReport> {
    let den = z.re.denom().lcm(z.im.denom());
    let a = (&z.re * Rational::from_integer(den.clone())).to_integer();
    let b = (&z.im * Rational::from_integer(den.clone())).to_integer();
    let norm = &a * &a + &b * &b;
    if norm < BigInt::from(4) * &den * &den {
        return Err(Error::Domain(format!("need |z| ≥ 2, got {}", z.to_string_exact())));
    }
    let p = cyclotomic(n)?;
    let phi = p.degree().unwrap_or(0);
    let (vr, vi) = p.eval_gaussian_homogeneous(&a, &b, &den);
    let value = &vr * &vr + &vi * &vi; // den^{2φ} |Φ_n(z)|²
    let scale = num_traits::pow(norm, phi); // den^{2φ} |z|^{2φ}
    let four = BigInt::from(4);
    let lower_ok = &four * &value >= scale;
    let upper_ok = value < &four * &scale;
    let equality = &four * &value == scale;
    let allowed = matches!((n, z.im.is_zero(), z.re.to_integer()), (1, true, r) if r == BigInt::from(2))
        || matches!((n, z.im.is_zero(), z.re.to_integer()), (2, true, r) if r == BigInt::from(-2));
    let sq = Rational::new(value, scale);
    let ratio = Ball::from_rational(&sq, 128).sqrt(128).and_then(|r| r.to_significant(20)).unwrap_or_else(|| ratio_string(&sq));
    Ok(BoundReport {
        n,
        point: z.to_string_exact(),
        ratio,
        side: BoundSide::Complex,
        holds: lower_ok && upper_ok && (!equality || (allowed && z.re.is_integer())),
        equality,
    })
}

/// Real bounds over the grid `1 ≤ n ≤ n_max` times `xs`, in (n, x) order.
pub fn real_bounds_grid(n_max: u64, xs: &[Rational], mode: Mode) -> Result<Vec<BoundReport>> {
    let points: Vec<(u64, Rational)> = (1..=n_max).flat_map(|n| xs.iter().map(move |x| (n, x.clone()))).collect();
    par::map(mode, &points, |(n, x)| check_real_bounds(*n, x)).into_iter().collect()
}

/// Certified g(m, n, x) = log(Φ_m(x)/Φ_n(x)) for 0 < x ≤ ½.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GValue {
    pub value: Ball,
    /// Sign of Φ_m(x) − Φ_n(x), decided exactly.
    pub sign: i8,
}

/// The double sum over divisors of rad(m) and rad(n), each term a certified
/// logarithm. The ball is checked against the log of the exact ratio and
/// its sign against the exact sign.
pub fn g_value(m: u64, n: u64, x: &Rational, precision_bits: u32) -> Result<GValue> {
    if m == n {
        return Err(Error::EqualIndices(m));
    }
    if m == 1 || n == 1 {
        return Err(Error::Domain("g is defined for m, n > 1".into()));
    }
    if !x.is_positive() || x > &rat(1, 2) {
        return Err(Error::Domain(format!("need 0 < x ≤ 1/2, got {x}")));
    }
    let exact_m = eval_cyclotomic_rational(m, x)?;
    let exact_n = eval_cyclotomic_rational(n, x)?;
    let sign = match exact_m.cmp(&exact_n) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    };
    let mut prec = precision_bits.max(64);
    for _ in 0..6 {
        let value = half_sum(m, x, prec)?.sub(&half_sum(n, x, prec)?, prec);
        let direct = Ball::from_rational(&(&exact_m / &exact_n), prec).ln(prec);
        if let Some(d) = direct {
            let overlap = value.lower() <= d.upper() && d.lower() <= value.upper();
            if !overlap {
                return Err(Error::Uncertified(format!("g({m},{n},{x}) disagrees with the exact ratio")));
            }
        }
        if value.sign() == Some(sign) {
            return Ok(GValue { value, sign });
        }
        prec *= 2;
    }
    Err(Error::Uncertified(format!("sign of g({m},{n},{x}) not resolved")))
}

// Σ_{d | rad k} μ(rad k / d) log(1 − x^{d q(k)})
fn half_sum(k: u64, x: &Rational, prec: u32) -> Result<Ball> {
    let pr = profile(k)?;
    let mut acc = Ball::default();
    for d in divisors(pr.rad)? {
        let mu = crate::arith::moebius(pr.rad / d)?;
        if mu == 0 {
            continue;
        }
        let t = num_traits::pow(x.clone(), (d * pr.qpart) as usize);
        let term = ln_one_minus(&t, prec);
        acc = if mu == 1 { acc.add(&term, prec) } else { acc.sub(&term, prec) };
    }
    Ok(acc)
}
