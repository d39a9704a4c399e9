//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Coefficients are stored lowest power first and the vector never carries
//! trailing zeros, so the zero polynomial is the empty vector.

mod cyclotomic;
mod json;
mod modp;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use cyclotomic::{
    cyclotomic, difference, eval_cyclotomic_rational, eval_homogeneous_cyclotomic, CyclotomicTable,
};
pub use json::PolyJson;


/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Degree at or above which multiplication switches to Karatsuba.
pub const KARATSUBA_CUTOFF: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    /// Builds a polynomial from coefficients, lowest power first.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Multiplicity of the root at zero.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Divides by `x^k`, dropping the low coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `p(x^k)`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1, "compose_power needs k >= 1");
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self { coeffs }
    }

    /// `p(-x)`.
    pub fn negate_arg(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `x^deg p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(coeffs)
    }

    /// `p(x + c)` by repeated synthetic division.
    pub fn taylor_shift(&self, c: &BigInt) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        if c.is_zero() {
            return self.clone();
        }
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        Self::new(a)
    }

    /// `b^deg · p(x / b)` for positive `b`, i.e. a change of scale.
    pub fn scale_arg_inverse(&self, b: &BigInt) -> Self {
        let Some(d) = self.degree() else { return Self::zero() };
        let mut pow = BigInt::one();
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for i in (0..=d).rev() {
            coeffs[i] = &self.coeffs[i] * &pow;
            pow *= b;
        }
        Self::new(coeffs)
    }

    /// Gcd of the coefficients, positive; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact quotient `self / divisor` in Z[x].
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem_exact_lead(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    // Long division requiring every quotient coefficient to be integral.
    fn div_rem_exact_lead(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let Some(nd) = self.degree() else { return Ok((Self::zero(), Self::zero())) };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = divisor.leading().unwrap();
        let monic = lead.is_one();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let top = std::mem::take(&mut rem[i + dd]);
            if top.is_zero() {
                continue;
            }
            let q = if monic {
                top
            } else {
                let (q, r) = top.div_rem(lead);
                if !r.is_zero() {
                    return Err(Error::InexactDivision);
                }
                q
            };
            for (j, c) in divisor.coeffs[..dd].iter().enumerate() {
                if !c.is_zero() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, divisor: &Self) -> Result<Self> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let Some(nd) = self.degree() else { return Ok(Self::zero()) };
        if nd < dd {
            return Ok(self.clone());
        }
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut top_deg = nd;
        let mut steps = nd - dd + 1;
        while top_deg >= dd && steps > 0 {
            let t = rem[top_deg].clone();
            for c in rem[..top_deg].iter_mut() {
                *c *= &lead;
            }
            if !t.is_zero() {
                let off = top_deg - dd;
                for (j, c) in divisor.coeffs[..dd].iter().enumerate() {
                    if !c.is_zero() {
                        rem[off + j] -= &t * c;
                    }
                }
            }
            rem[top_deg] = BigInt::zero();
            steps -= 1;
            if top_deg == 0 {
                break;
            }
            top_deg -= 1;
        }
        // account for skipped steps so the multiplier is exactly lc^(nd-dd+1)
        if steps > 0 {
            let f = num_traits::pow(lead, steps);
            for c in rem.iter_mut() {
                *c *= &f;
            }
        }
        Ok(Self::new(rem))
    }

    /// Primitive gcd in Z[x] with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let cont = self.content().gcd(&other.content());
        if modp::certainly_coprime(&self.coeffs, &other.coeffs) {
            return Self::one();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).expect("b nonzero");
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&cont).primitive_part()
    }

    /// Squarefree part `p / gcd(p, p')`, primitive.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        Ok(self.primitive_part().div_exact(&g)?.primitive_part())
    }

    /// Squarefree factorization: factors `f_1, f_2, …` with
    /// `primitive(p) = ±Π f_i^i`, each primitive. Missing multiplicities
    /// appear as the constant `1`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<Self>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // T_k = product of roots with multiplicity >= k; divisions of
        // primitive polynomials stay in Z[x].
        let mut g = self.primitive_part();
        let mut t = g.squarefree_part()?;
        let mut layers = Vec::new();
        while t.degree().unwrap_or(0) > 0 {
            g = g.div_exact(&t)?.primitive_part();
            let next = g.gcd(&t);
            layers.push((t.clone(), next.clone()));
            t = next;
        }
        layers
            .into_iter()
            .map(|(hi, lo)| Ok(hi.div_exact(&lo)?.primitive_part()))
            .collect()
    }

    /// Sign of `p(r)`: −1, 0 or 1.
    pub fn sign_at(&self, r: &Rational) -> i8 {
        sign_of(&self.eval_homogeneous(r.numer(), r.denom()))
    }

    /// `b^deg · p(a / b)` as an integer.
    pub fn eval_homogeneous(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let Some(d) = self.degree() else { return BigInt::zero() };
        if b.is_one() {
            return self.eval_int(a);
        }
        let mut acc = self.coeffs[d].clone();
        let mut bpow = BigInt::one();
        for i in (0..d).rev() {
            bpow *= b;
            acc *= a;
            if !self.coeffs[i].is_zero() {
                acc += &self.coeffs[i] * &bpow;
            }
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Exact value `p(r)`.
    pub fn eval_rational(&self, r: &Rational) -> Rational {
        let Some(d) = self.degree() else { return Rational::zero() };
        let num = self.eval_homogeneous(r.numer(), r.denom());
        Rational::new(num, num_traits::pow(r.denom().clone(), d))
    }

    /// Evaluation at a Gaussian rational `(re + i·im) / den`, returned as
    /// the Gaussian integer `den^deg · p(z)`.
    pub fn eval_gaussian_homogeneous(
        &self,
        re: &BigInt,
        im: &BigInt,
        den: &BigInt,
    ) -> (BigInt, BigInt) {
        let Some(d) = self.degree() else { return (BigInt::zero(), BigInt::zero()) };
        let (mut ar, mut ai) = (self.coeffs[d].clone(), BigInt::zero());
        let mut dpow = BigInt::one();
        for i in (0..d).rev() {
            dpow *= den;
            let nr = &ar * re - &ai * im;
            let ni = &ar * im + &ai * re;
            ar = nr + &self.coeffs[i] * &dpow;
            ai = ni;
        }
        (ar, ai)
    }
}

/// Parses `7`, `-3/4` or `1.25` as an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Format(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let frac = Rational::new(f, den);
        let whole = Rational::from_integer(whole.abs());
        let v = whole + frac;
        return Ok(if neg { -v } else { v });
    }
    Ok(Rational::from_integer(s.parse().map_err(|_| bad())?))
}

pub fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

fn add_coeffs(a: &[BigInt], b: &[BigInt], negate_b: bool) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            match b.get(i) {
                Some(y) if negate_b => x - y,
                Some(y) => x + y,
                None => x,
            }
        })
        .collect()
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::new(add_coeffs(&self.coeffs, &rhs.coeffs, false))
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::new(add_coeffs(&self.coeffs, &rhs.coeffs, true))
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        IntPoly::new(mul_coeffs(&self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn mul_coeffs(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len().min(b.len()) < KARATSUBA_CUTOFF {
        schoolbook(a, b)
    } else {
        karatsuba(a, b)
    }
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn karatsuba(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len().min(b.len()) < KARATSUBA_CUTOFF {
        return schoolbook(a, b);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = karatsuba(a0, b0);
    let z2 = if a1.is_empty() || b1.is_empty() { Vec::new() } else { karatsuba(a1, b1) };
    let sa = add_coeffs(a0, a1, false);
    let sb = add_coeffs(b0, b1, false);
    let mut z1 = karatsuba(&sa, &sb);
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if i + half < out.len() {
            out[i + half] += c;
        } else {
            debug_assert!(c.is_zero());
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * half] += c;
    }
    out
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by value at large `x`: degree first, then the highest differing
/// coefficient.
impl Ord for IntPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self - other;
        match diff.leading() {
            None => Ordering::Equal,
            Some(c) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }
}
