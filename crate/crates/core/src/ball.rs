//! Midpoint-radius ("ball") arithmetic over dyadic numbers.
//!
//! A [`Ball`] is a dyadic midpoint `m` and a nonnegative dyadic radius `r`;
//! it encloses every real in `[m - r, m + r]`. Each operation rounds the
//! midpoint to the working precision and adds the rounding error to the
//! radius, so enclosures are rigorous. Radii are rounded upward to a short
//! mantissa to keep them cheap.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{IntPoly, Rational};

const RAD_BITS: u64 = 62;

/// `man · 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Dyadic {
    pub man: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(man: BigInt, exp: i64) -> Self {
        Self { man, exp }.normalized()
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Self { man: BigInt::one(), exp: e }
    }

    fn normalized(mut self) -> Self {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    pub fn abs(&self) -> Self {
        Self { man: self.man.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Self {
        Self { man: -&self.man, exp: self.exp }
    }

    /// Exponent of the leading bit plus one, so `2^(top-1) ≤ |x| < 2^top`.
    pub fn top(&self) -> i64 {
        self.man.bits() as i64 + self.exp
    }

    fn align(a: &Self, b: &Self) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        ((&a.man) << (a.exp - e) as usize, (&b.man) << (b.exp - e) as usize, e)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Self::align(self, o);
        Self::new(a + b, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.man * &o.man, self.exp + o.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.man << self.exp as usize)
        } else {
            Rational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 leading bits to avoid overflow in the integer conversion
        let bits = self.man.bits() as i64;
        let drop = (bits - 64).max(0);
        let m = (&self.man >> drop as usize).to_f64().unwrap_or(f64::NAN);
        let e = (self.exp + drop).clamp(-2200, 2200) as i32;
        m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Self::new(BigInt::from(man) * sign, exp)
    }

    /// Rounds to `prec` significant bits (toward −∞). Returns the rounded
    /// value and an upper bound for the error.
    pub fn round(&self, prec: u32) -> (Self, Dyadic) {
        let bits = self.man.bits() as i64;
        let s = bits - prec as i64;
        if s <= 0 {
            return (self.clone(), Self::zero());
        }
        let m = &self.man >> s as usize; // arithmetic shift: floor
        (Self::new(m, self.exp + s), Self::pow2(self.exp + s))
    }

    /// Upper bound with at most `RAD_BITS` bits, for nonnegative values.
    pub(crate) fn round_up(&self) -> Self {
        debug_assert!(!self.man.is_negative());
        let bits = self.man.bits() as i64;
        let s = bits - RAD_BITS as i64;
        if s <= 0 {
            return self.clone();
        }
        let m = (&self.man >> s as usize) + 1u32;
        Self::new(m, self.exp + s)
    }

    /// Lower bound with at most `RAD_BITS` bits, for nonnegative values.
    fn round_down(&self) -> Self {
        let bits = self.man.bits() as i64;
        let s = bits - RAD_BITS as i64;
        if s <= 0 {
            return self.clone();
        }
        Self::new(&self.man >> s as usize, self.exp + s)
    }

    /// `a / b` to `prec` bits, with an error bound.
    pub fn div(&self, o: &Self, prec: u32) -> (Self, Dyadic) {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let shift = prec as i64 + o.man.bits() as i64 - self.man.bits() as i64 + 2;
        let shift = shift.max(0);
        let num = &self.man << shift as usize;
        let (q, rem) = num.div_mod_floor(&o.man);
        let e = self.exp - o.exp - shift;
        let (r, err) = Self::new(q, e).round(prec);
        if rem.is_zero() {
            (r, err)
        } else {
            (r, err.add(&Self::pow2(e)))
        }
    }

    /// Integer square root based: `sqrt(self)` to `prec` bits, for `self ≥ 0`.
    pub fn sqrt(&self, prec: u32) -> (Self, Dyadic) {
        assert!(!self.man.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        // scale so the mantissa has ~2·prec bits and an even exponent
        let mut shift = 2 * prec as i64 + 4 - self.man.bits() as i64;
        shift = shift.max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.man << shift as usize;
        let root = m.sqrt();
        let e = (self.exp - shift) / 2;
        (Self::new(root, e), Self::pow2(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Self::align(self, other);
        a.cmp(&b)
    }
}

/// A certified real enclosure `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Ball {
    pub mid: Dyadic,
    pub rad: Dyadic,
}

/// A certified value: the ball plus the precision it was computed at.
pub type BigFloatValue = Ball;

impl Ball {
    pub fn exact(mid: Dyadic) -> Self {
        Self { mid, rad: Dyadic::zero() }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::exact(Dyadic::from_int(v))
    }

    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        Self { mid, rad: rad.round_up() }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let (m, e) = Dyadic::from_int(r.numer().clone()).div(&Dyadic::from_int(r.denom().clone()), prec);
        Self::new(m, e)
    }

    /// Smallest ball containing the rational interval `[lo, hi]`.
    pub fn from_interval(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        let two = Rational::from_integer(2.into());
        let mid = (lo + hi) / &two;
        let half = (hi - lo) / two;
        let m = Self::from_rational(&mid, prec);
        let h = Self::from_rational(&half, prec);
        Self::new(m.mid, m.rad.add(&h.upper_abs()))
    }

    pub fn from_f64(x: f64) -> Self {
        Self::exact(Dyadic::from_f64(x))
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    /// Upper bound for `|x|` over the ball.
    pub fn upper_abs(&self) -> Dyadic {
        self.mid.abs().add(&self.rad).round_up()
    }

    /// Lower bound for `|x|` over the ball (zero when the ball contains 0).
    pub fn lower_abs(&self) -> Dyadic {
        let d = self.mid.abs().sub(&self.rad);
        if d.sign() == Sign::Minus {
            Dyadic::zero()
        } else {
            d.round_down()
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    /// Certified sign: `Some(±1)` when the ball excludes zero, `Some(0)` for
    /// the exact zero, `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        if self.is_exact() && self.mid.is_zero() {
            return Some(0);
        }
        if self.contains_zero() {
            return None;
        }
        Some(if self.mid.sign() == Sign::Minus { -1 } else { 1 })
    }

    /// `Some(ordering)` when the two balls are certifiably ordered (or are
    /// the same exact point).
    pub fn cmp_certified(&self, other: &Self) -> Option<Ordering> {
        match self.sub(other, u32::MAX).sign()? {
            -1 => Some(Ordering::Less),
            0 => Some(Ordering::Equal),
            _ => Some(Ordering::Greater),
        }
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        let lo = self.lower().to_rational();
        let hi = self.upper().to_rational();
        &lo <= r && r <= &hi
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn neg(&self) -> Self {
        Self { mid: self.mid.neg(), rad: self.rad.clone() }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        let (m, e) = self.mid.add(&o.mid).round(prec);
        Self::new(m, self.rad.add(&o.rad).add(&e))
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let (m, e) = self.mid.mul(&o.mid).round(prec);
        let rad = self
            .mid
            .abs()
            .mul(&o.rad)
            .add(&o.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&o.rad))
            .add(&e);
        Self::new(m, rad)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self { mid: self.mid.mul_pow2(k), rad: self.rad.mul_pow2(k) }
    }

    /// `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Self, prec: u32) -> Option<Self> {
        let den_lo = o.lower_abs();
        if den_lo.is_zero() {
            return None;
        }
        let (q, e) = self.mid.div(&o.mid, prec);
        // |a/b - ma/mb| ≤ (ra + |ma/mb|·rb) / (|mb| - rb)
        let qa = q.abs().add(&e);
        let num = self.rad.add(&qa.mul(&o.rad)).round_up();
        let (bound, be) = num.div(&den_lo, 64);
        Some(Self::new(q, bound.abs().add(&be).add(&e)))
    }

    pub fn div_int(&self, k: u64, prec: u32) -> Self {
        let d = Dyadic::from_int(k);
        let (q, e) = self.mid.div(&d, prec);
        let (r, re) = self.rad.div(&d, 64);
        Self::new(q, r.add(&re).add(&e))
    }

    pub fn square(&self, prec: u32) -> Self {
        self.mul(self, prec)
    }

    pub fn pow(&self, mut k: u64, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_int(1);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            base = base.square(prec);
            k >>= 1;
        }
        acc
    }

    /// Square root; `None` if the ball reaches below zero.
    pub fn sqrt(&self, prec: u32) -> Option<Self> {
        if self.mid.sign() == Sign::Minus && !self.contains_zero() {
            return None;
        }
        let lo = self.lower();
        if lo.sign() == Sign::Minus {
            // ball touches zero: enclose [0, sqrt(hi)]
            let (s, e) = self.upper().sqrt(prec);
            let hi = s.add(&e);
            let half = hi.mul_pow2(-1);
            return Some(Self::new(half.clone(), half));
        }
        let (s, e) = self.mid.sqrt(prec);
        if self.rad.is_zero() {
            return Some(Self::new(s, e));
        }
        // |sqrt(x) - sqrt(m)| ≤ r / sqrt(m - r)
        let (sl, sle) = lo.round_down().sqrt(40);
        let sl = sl.sub(&sle);
        if sl.sign() != Sign::Plus {
            let (s2, e2) = self.upper().sqrt(prec);
            let hi = s2.add(&e2);
            let half = hi.mul_pow2(-1);
            return Some(Self::new(half.clone(), half));
        }
        let (d, de) = self.rad.div(&sl, 64);
        Some(Self::new(s, e.add(&d.abs()).add(&de)))
    }

    /// Natural logarithm of a positive ball; `None` if the ball reaches 0.
    pub fn ln(&self, prec: u32) -> Option<Self> {
        let lo = self.lower_abs();
        if self.mid.sign() != Sign::Plus || lo.is_zero() || self.lower().sign() != Sign::Plus {
            return None;
        }
        let core = ln_dyadic(&self.mid, prec);
        if self.rad.is_zero() {
            return Some(core);
        }
        // |ln x - ln m| ≤ r / (m - r)
        let (d, de) = self.rad.div(&self.lower().round_down(), 64);
        Some(Self::new(core.mid.clone(), core.rad.add(&d.abs()).add(&de)))
    }

    /// Correctly rounded decimal with `places` digits after the point, if
    /// the enclosure determines it.
    pub fn to_fixed(&self, places: u32) -> Option<String> {
        round_fixed(&self.lower().to_rational(), &self.upper().to_rational(), places)
    }

    /// Correctly rounded decimal with `sig` significant digits.
    pub fn to_significant(&self, sig: u32) -> Option<String> {
        round_significant(&self.lower().to_rational(), &self.upper().to_rational(), sig)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} ± {:e}", self.mid.to_f64(), self.rad.to_f64())
    }
}

/// ln(2) by 2·atanh(1/3).
pub fn ln2(prec: u32) -> Ball {
    let w = prec + 16;
    let third = Ball::from_rational(&Rational::new(1.into(), 3.into()), w);
    atanh_series(&third, w, &Dyadic::new(1.into(), -1)).mul_pow2(1)
}

// atanh(u) for |u| ≤ u_max < 1, with a geometric tail bound.
fn atanh_series(u: &Ball, prec: u32, u_max: &Dyadic) -> Ball {
    let u2 = u.square(prec);
    let mut term = u.clone();
    let mut acc = u.clone();
    let mut k = 1u64;
    let target = Dyadic::pow2(-(prec as i64) - 4);
    let mut umax_pow = u_max.clone();
    loop {
        term = term.mul(&u2, prec);
        k += 2;
        umax_pow = umax_pow.mul(u_max).mul(u_max).round_up();
        acc = acc.add(&term.div_int(k, prec), prec);
        if umax_pow < target || k > 20 * prec as u64 + 40 {
            break;
        }
    }
    // remaining terms ≤ umax^(k+2) / (1 - umax²) ≤ 2·umax^(k+2) for umax ≤ 1/2
    let tail = umax_pow.mul(u_max).mul(u_max).mul_pow2(1).round_up();
    Ball::new(acc.mid, acc.rad.add(&tail))
}

fn ln_dyadic(x: &Dyadic, prec: u32) -> Ball {
    assert!(x.sign() == Sign::Plus);
    let w = prec + 20;
    // x = 2^k · y with y in [1, 2)
    let k = x.top() - 1;
    let y = Ball::exact(x.mul_pow2(-k));
    let one = Ball::from_int(1);
    let num = y.sub(&one, w);
    let den = y.add(&one, w);
    let u = num.div(&den, w).expect("y + 1 > 0");
    let ln_y = atanh_series(&u, w, &Dyadic::new(1.into(), -1)).mul_pow2(1);
    let res = ln_y.add(&ln2(w).mul(&Ball::from_int(k), w), w);
    let (m, e) = res.mid.round(prec);
    Ball::new(m, res.rad.add(&e))
}

/// `ln(1 - t)` for `0 ≤ t ≤ 1/2` given as a rational.
pub fn ln_one_minus(t: &Rational, prec: u32) -> Ball {
    let one = Rational::one();
    let arg = &one - t;
    Ball::from_rational(&arg, prec + 8).ln(prec).expect("argument positive")
}

/// Complex ball, componentwise enclosure.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        Self { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Self::new(Ball::from_f64(re), Ball::from_f64(im))
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        Self::new(self.re.add(&o.re, prec), self.im.add(&o.im, prec))
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        Self::new(self.re.sub(&o.re, prec), self.im.sub(&o.im, prec))
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let re = self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec);
        let im = self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec);
        Self::new(re, im)
    }

    /// `|z|²`.
    pub fn norm_sqr(&self, prec: u32) -> Ball {
        self.re.square(prec).add(&self.im.square(prec), prec)
    }

    pub fn abs(&self, prec: u32) -> Ball {
        self.norm_sqr(prec).sqrt(prec).expect("norm is nonnegative")
    }

    pub fn div(&self, o: &Self, prec: u32) -> Option<Self> {
        let n = o.norm_sqr(prec);
        let conj = Self::new(o.re.clone(), o.im.neg());
        let t = self.mul(&conj, prec);
        Some(Self::new(t.re.div(&n, prec)?, t.im.div(&n, prec)?))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Upper bound for `|z|`.
    pub fn upper_abs(&self) -> Dyadic {
        let s = self.re.upper_abs().mul(&self.re.upper_abs()).add(&self.im.upper_abs().mul(&self.im.upper_abs()));
        let (r, e) = s.round_up().sqrt(64);
        r.add(&e).round_up()
    }
}

/// Horner evaluation of an integer polynomial on a real ball.
pub fn eval_ball(p: &IntPoly, x: &Ball, prec: u32) -> Ball {
    let mut acc = Ball::default();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x, prec).add(&Ball::from_int(c.clone()), prec);
    }
    acc
}

/// Horner evaluation on a complex ball.
pub fn eval_complex_ball(p: &IntPoly, z: &ComplexBall, prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::default();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z, prec);
        acc.re = acc.re.add(&Ball::from_int(c.clone()), prec);
    }
    acc
}

// floor(x·10^places + 1/2) as an integer, for exact rational x.
fn scaled_round(x: &Rational, places: i64) -> BigInt {
    let ten = BigInt::from(10);
    let scaled = if places >= 0 {
        x * Rational::from_integer(num_traits::pow(ten, places as usize))
    } else {
        x / Rational::from_integer(num_traits::pow(ten, (-places) as usize))
    };
    // round half away from zero
    let half = Rational::new(1.into(), 2.into());
    if scaled.is_negative() {
        -(-scaled + half).floor().to_integer()
    } else {
        (scaled + half).floor().to_integer()
    }
}

fn format_scaled(v: &BigInt, places: i64) -> String {
    if places <= 0 {
        let mut s = v.to_string();
        if !v.is_zero() {
            s.push_str(&"0".repeat((-places) as usize));
        }
        return s;
    }
    let neg = v.is_negative();
    let digits = v.abs().to_string();
    let p = places as usize;
    let padded = if digits.len() <= p { format!("{}{}", "0".repeat(p + 1 - digits.len()), digits) } else { digits };
    let (int, frac) = padded.split_at(padded.len() - p);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

/// Decimal rounding of every point of `[lo, hi]` to `places` fractional
/// digits; `Some` only when all points agree.
pub fn round_fixed(lo: &Rational, hi: &Rational, places: u32) -> Option<String> {
    let a = scaled_round(lo, places as i64);
    let b = scaled_round(hi, places as i64);
    (a == b).then(|| format_scaled(&a, places as i64))
}

/// Significant-digit rounding of `[lo, hi]`; `Some` only when determined.
pub fn round_significant(lo: &Rational, hi: &Rational, sig: u32) -> Option<String> {
    let e_lo = decimal_exponent(lo)?;
    let e_hi = decimal_exponent(hi)?;
    if e_lo != e_hi {
        return None;
    }
    let places = sig as i64 - 1 - e_lo;
    let a = scaled_round(lo, places);
    let b = scaled_round(hi, places);
    if a != b {
        return None;
    }
    // rounding up may carry into a new decade (e.g. 9.99 → 10.0)
    let s = format_scaled(&a, places);
    Some(s)
}

/// Upper bound of a nonnegative value in scientific notation with `sig`
/// significant digits, e.g. `3.15e-41`.
pub fn format_upper_sci(x: &Rational, sig: u32) -> String {
    let Some(e) = decimal_exponent(x) else { return "0".into() };
    let sig = sig.max(1) as i64;
    let mut e = e;
    let scaled = x.abs() / pow10(e - sig + 1);
    let mut m = scaled.ceil().to_integer();
    if m >= num_traits::pow(BigInt::from(10), sig as usize) {
        m = (Rational::from_integer(m) / Rational::from_integer(10.into())).ceil().to_integer();
        e += 1;
    }
    let digits = m.to_string();
    let (head, tail) = digits.split_at(1);
    if tail.is_empty() {
        format!("{head}e{e}")
    } else {
        format!("{head}.{tail}e{e}")
    }
}

/// floor(log10 |x|) for nonzero x.
pub fn decimal_exponent(x: &Rational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let ax = x.abs();
    let ten = Rational::from_integer(10.into());
    let mut e = (ax.numer().bits() as i64 - ax.denom().bits() as i64) * 30103 / 100000;
    loop {
        let p = pow10(e);
        if p > ax {
            e -= 1;
        } else if &p * &ten <= ax {
            e += 1;
        } else {
            return Some(e);
        }
    }
}

fn pow10(e: i64) -> Rational {
    let t = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(t)
    } else {
        Rational::new(BigInt::one(), t)
    }
}
