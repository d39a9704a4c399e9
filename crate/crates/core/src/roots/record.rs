use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::complex::ComplexRoot;
use super::isolate::{refine_root, IsolatingInterval};
use super::scan::RangeCertificate;
use crate::ball::{eval_ball, format_upper_sci, round_fixed, Ball};
use crate::error::Result;
use crate::poly::{parse_rational, IntPoly, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    Real,
    Complex,
}

/// One certified root, rendered as correctly rounded decimals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootRecord {
    pub kind: RootKind,
    /// `x` for real roots, `a+bi` or `a-bi` for complex ones.
    pub value: String,
    pub modulus: String,
    /// Upper bound on `|p|` over the root's enclosure.
    pub residual: String,
    /// Fractional digits in `value` and `modulus`.
    pub digits: u32,
    pub multiplicity: usize,
}

/// Notes attached to a scanned pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "flag", content = "value", rename_all = "snake_case")]
pub enum RootFlag {
    /// Nonzero real root with |x| ≤ ½ or |x| ≥ 2.
    RangeViolation(String),
    /// The root x = 2 of Φ_2 − Φ_6.
    SanctionedException(String),
    /// Nonreal root of modulus exactly √2, proved by an exact quadratic factor.
    ModulusSqrt2(String),
    /// Nonreal root of modulus exactly 1/√2.
    ModulusInvSqrt2(String),
    /// Nonreal root certified outside (1/√2, √2].
    ModulusOutside(String),
    /// Nonreal root whose modulus could not be placed.
    ModulusUndecided(String),
}

/// All roots found for one pair `m < n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceRecord {
    pub m: u64,
    pub n: u64,
    pub roots: Vec<RootRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_abs_real: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<RootFlag>,
    /// Sturm counts on the excluded ranges, for real scans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<RangeCertificate>,
}

impl CoincidenceRecord {
    pub fn key(&self) -> (u64, u64) {
        (self.m, self.n)
    }
}

fn strip_sign(s: &str) -> String {
    s.strip_prefix('-').unwrap_or(s).to_string()
}

impl RootRecord {
    /// Refines a real root of `p` to `digits` fractional digits.
    pub fn real(p: &IntPoly, iv: &IsolatingInterval, digits: u32) -> Result<Self> {
        let refined = refine_root(p, iv, digits)?;
        let residual = match &refined.interval {
            Some((lo, hi)) if lo != hi => {
                let x = Ball::from_interval(lo, hi, 64 + 4 * digits);
                format_upper_sci(&eval_ball(p, &x, 64 + 4 * digits).upper_abs().to_rational(), 3)
            }
            _ => "0".into(),
        };
        Ok(Self {
            kind: RootKind::Real,
            modulus: strip_sign(&refined.decimal),
            value: refined.decimal,
            residual,
            digits,
            multiplicity: iv.multiplicity,
        })
    }

    /// Renders a certified complex root with as many of `digits` fractional
    /// digits as its enclosure determines.
    pub fn complex(root: &ComplexRoot, digits: u32, prec: u32) -> Self {
        let r = root.radius.to_rational();
        let re = root.re.to_rational();
        let im = root.im.to_rational();
        let modulus = root.modulus(prec);
        let (m_lo, m_hi) = (modulus.lower().to_rational(), modulus.upper().to_rational());
        let mut places = digits;
        let (vr, vi, vm) = loop {
            let vr = round_fixed(&(&re - &r), &(&re + &r), places);
            let vi = round_fixed(&(im.abs() - &r), &(im.abs() + &r), places);
            let vm = round_fixed(&m_lo, &m_hi, places);
            match (vr, vi, vm) {
                (Some(a), Some(b), Some(c)) => break (a, b, c),
                _ if places == 0 => {
                    let mid = |x: &Rational| round_fixed(x, x, 0).unwrap();
                    break (mid(&re), mid(&im.abs()), mid(&modulus.mid.to_rational()));
                }
                _ => places -= 1,
            }
        };
        let value = if root.real {
            vr
        } else {
            let sign = if im.is_negative() { '-' } else { '+' };
            format!("{vr}{sign}{vi}i")
        };
        Self {
            kind: if root.real { RootKind::Real } else { RootKind::Complex },
            value,
            modulus: vm,
            residual: format_upper_sci(&root.residual.to_rational(), 3),
            digits: places,
            multiplicity: root.multiplicity,
        }
    }

    /// The real part (or the value) as an exact rational.
    pub fn real_part(&self) -> Option<Rational> {
        let s = self.value.trim_end_matches('i');
        let cut = s.char_indices().skip(1).find(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i);
        parse_rational(&s[..cut.unwrap_or(s.len())]).ok()
    }

    pub fn modulus_value(&self) -> Option<Rational> {
        parse_rational(&self.modulus).ok()
    }

    pub fn is_zero(&self) -> bool {
        self.modulus_value().is_some_and(|m| m.is_zero())
    }
}
