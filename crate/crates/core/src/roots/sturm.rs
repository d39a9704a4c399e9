//! Sturm sequences over Z[x] with exact rational sign evaluation.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{sign_of, IntPoly, Rational};

/// An endpoint of a counting interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    At(Rational),
    PosInf,
}

impl Bound {
    pub fn at_int(v: i64) -> Self {
        Bound::At(Rational::from_integer(v.into()))
    }

    pub fn at_frac(a: i64, b: i64) -> Self {
        Bound::At(Rational::new(a.into(), b.into()))
    }
}

/// The remainder chain p, p', −rem(p, p'), … kept primitive with signs
/// preserved, so sign variations are those of the classical sequence.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<IntPoly>,
}

impl SturmSequence {
    /// Builds the sequence for a squarefree polynomial. Non-squarefree
    /// input still yields a valid count of distinct roots as long as the
    /// endpoints are not roots, but callers should pass the squarefree part.
    pub fn new(p: &IntPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut chain = vec![positive_content(p)];
        let d = p.derivative();
        if d.is_zero() {
            return Ok(Self { chain });
        }
        chain.push(positive_content(&d));
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            let r = a.pseudo_rem(b)?;
            if r.is_zero() {
                break;
            }
            // prem = lc(b)^(δ+1)·rem; flip to obtain a positive multiple of −rem
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let lc_neg = b.leading().unwrap().is_negative();
            let flip = !(lc_neg && (delta + 1) % 2 == 1);
            let next = if flip { -&r } else { r };
            chain.push(positive_content(&next));
        }
        Ok(Self { chain })
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.chain
    }

    pub fn variations(&self, at: &Bound) -> usize {
        let signs = self.chain.iter().map(|s| match at {
            Bound::PosInf => sign_of(s.leading().unwrap()),
            Bound::NegInf => {
                let sg = sign_of(s.leading().unwrap());
                if s.degree().unwrap() % 2 == 1 {
                    -sg
                } else {
                    sg
                }
            }
            Bound::At(r) => s.sign_at(r),
        });
        count_variations(signs)
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

fn positive_content(p: &IntPoly) -> IntPoly {
    let c = p.content();
    if c.is_zero() {
        return p.clone();
    }
    IntPoly::new(p.coeffs().iter().map(|a| a / &c).collect())
}

pub(crate) fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Exact count of distinct real roots of `p` in `(lo, hi]`. The square
/// part is removed first.
pub fn sturm_count(p: &IntPoly, lo: &Bound, hi: &Bound) -> Result<usize> {
    let sq = p.squarefree_part()?;
    Ok(SturmSequence::new(&sq)?.count(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::difference;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn counts() {
        let d26 = p(&[0, 2, -1]);
        assert_eq!(sturm_count(&d26, &Bound::at_frac(1, 2), &Bound::at_frac(5, 2)).unwrap(), 1);
        assert_eq!(sturm_count(&d26, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
        let d12 = p(&[-2]);
        assert_eq!(sturm_count(&d12, &Bound::at_int(-10), &Bound::at_int(10)).unwrap(), 0);
        assert_eq!(sturm_count(&IntPoly::zero(), &Bound::NegInf, &Bound::PosInf), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn half_open_endpoints() {
        // roots at 0 and 2: (0, 2] holds one, (−1, 0] holds one, (2, 3] none
        let d26 = p(&[0, 2, -1]);
        assert_eq!(sturm_count(&d26, &Bound::at_int(0), &Bound::at_int(2)).unwrap(), 1);
        assert_eq!(sturm_count(&d26, &Bound::at_int(-1), &Bound::at_int(0)).unwrap(), 1);
        assert_eq!(sturm_count(&d26, &Bound::at_int(2), &Bound::at_int(3)).unwrap(), 0);
    }

    #[test]
    fn phi15_minus_phi7_on_unit_to_two() {
        let d = difference(15, 7).unwrap();
        // oracle: sign changes on a 1/64 grid over (1, 2]
        let mut changes = 0;
        let mut last = d.sign_at(&Rational::from_integer(1.into()));
        for k in 65..=128 {
            let s = d.sign_at(&Rational::new(k.into(), 64.into()));
            if s != 0 && last != 0 && s != last {
                changes += 1;
            }
            if s != 0 {
                last = s;
            }
        }
        assert_eq!(changes, 1);
        assert_eq!(sturm_count(&d, &Bound::at_int(1), &Bound::at_int(2)).unwrap(), 1);
    }

    #[test]
    fn multiple_roots_counted_once() {
        let sq = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(sturm_count(&sq, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
    }
}
