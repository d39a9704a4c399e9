//! Simultaneous root iteration (Aberth–Ehrlich), first in `f64` for seeds
//! and then in dyadic arithmetic at a chosen precision.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::ball::Dyadic;
use crate::poly::IntPoly;

/// `f64` coefficients scaled by a common power of two so none overflow.
fn f64_coeffs(p: &IntPoly) -> Vec<f64> {
    let bits = p.max_abs_coeff().bits() as i64;
    let shift = (bits - 900).max(0) as usize;
    p.coeffs()
        .iter()
        .map(|c| {
            let s: BigInt = c >> shift;
            s.to_f64().unwrap_or(0.0)
        })
        .collect()
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Newton ratio `p(z)/p'(z)`, through the reversed polynomial when
/// `|z| > 1` to keep intermediate values in range.
fn newton_ratio(c: &[f64], rev: &[f64], z: Complex64) -> Complex64 {
    let d = (c.len() - 1) as f64;
    if z.norm() <= 1.0 {
        let (p, dp) = horner(c, z);
        return p / dp;
    }
    let w = z.inv();
    let (q, dq) = horner(rev, w);
    z / (d - w * dq / q)
}

pub(crate) struct SeedRoots {
    pub roots: Vec<Complex64>,
    pub converged: bool,
}

/// All complex roots of `p` in double precision. Zero roots are returned
/// exactly; the rest start on a circle of radius |a0/ad|^(1/d).
pub(crate) fn aberth_f64(p: &IntPoly, max_sweeps: usize) -> SeedRoots {
    let Some(deg) = p.degree() else { return SeedRoots { roots: vec![], converged: true } };
    let k = p.low_order();
    let q = p.shift_down(k);
    let mut roots = vec![Complex64::zero(); k];
    let d = deg - k;
    if d == 0 {
        return SeedRoots { roots, converged: true };
    }
    let c = f64_coeffs(&q);
    if d == 1 {
        roots.push(Complex64::new(-c[0] / c[1], 0.0));
        return SeedRoots { roots, converged: true };
    }
    let rev: Vec<f64> = c.iter().rev().copied().collect();
    let radius = (c[0].abs() / c[d].abs()).powf(1.0 / d as f64).clamp(1e-3, 1e3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect();
    let mut done = vec![false; d];
    let mut converged = false;
    for _ in 0..max_sweeps {
        for i in 0..d {
            if done[i] {
                continue;
            }
            let n = newton_ratio(&c, &rev, z[i]);
            if !n.is_finite() {
                done[i] = true;
                continue;
            }
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = n / (Complex64::new(1.0, 0.0) - n * s);
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(1e-300) {
                done[i] = true;
            }
        }
        if done.iter().all(|&x| x) {
            converged = true;
            break;
        }
    }
    roots.extend(z);
    SeedRoots { roots, converged }
}

/// Complex dyadic number with componentwise rounding.
#[derive(Clone, Debug, Default)]
pub(crate) struct Cx {
    pub re: Dyadic,
    pub im: Dyadic,
}

fn rnd(x: Dyadic, prec: u32) -> Dyadic {
    x.round(prec).0
}

impl Cx {
    pub fn from_c64(z: Complex64) -> Self {
        Self { re: Dyadic::from_f64(z.re), im: Dyadic::from_f64(z.im) }
    }


    fn add(&self, o: &Self) -> Self {
        Self { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    fn sub(&self, o: &Self) -> Self {
        Self { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    fn round(&self, prec: u32) -> Self {
        Self { re: rnd(self.re.clone(), prec), im: rnd(self.im.clone(), prec) }
    }

    fn mul(&self, o: &Self, prec: u32) -> Self {
        Self {
            re: rnd(self.re.mul(&o.re).sub(&self.im.mul(&o.im)), prec),
            im: rnd(self.re.mul(&o.im).add(&self.im.mul(&o.re)), prec),
        }
    }

    fn norm_sqr(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    fn div(&self, o: &Self, prec: u32) -> Option<Self> {
        let n = rnd(o.norm_sqr(), prec + 8);
        if n.is_zero() {
            return None;
        }
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Some(Self { re: re.div(&n, prec).0, im: im.div(&n, prec).0 })
    }

    /// `floor(log2 |z|)` estimate, `None` for zero.
    fn log2_abs(&self) -> Option<i64> {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => None,
            (false, true) => Some(self.re.top()),
            (true, false) => Some(self.im.top()),
            _ => Some(self.re.top().max(self.im.top())),
        }
    }
}

fn eval_with_derivative(p: &IntPoly, z: &Cx, prec: u32) -> (Cx, Cx) {
    let mut v = Cx::default();
    let mut dv = Cx::default();
    for c in p.coeffs().iter().rev() {
        dv = dv.mul(z, prec).add(&v);
        v = v.mul(z, prec);
        v.re = v.re.add(&Dyadic::from_int(c.clone()));
        v = v.round(prec);
    }
    (v, dv)
}

/// Aberth sweeps at `prec` bits from the given seeds, until every
/// correction falls below `2^(-prec + 8)` relative to `max(1, |z|)`.
/// Returns `None` when the sweep budget runs out.
pub(crate) fn polish(p: &IntPoly, seeds: &[Complex64], prec: u32, max_sweeps: usize) -> Option<Vec<Cx>> {
    let d = seeds.len();
    let mut z: Vec<Cx> = seeds.iter().map(|&s| Cx::from_c64(s)).collect();
    let one = Cx { re: Dyadic::from_int(1), im: Dyadic::zero() };
    let mut done = vec![false; d];
    for _ in 0..max_sweeps {
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (v, dv) = eval_with_derivative(p, &z[i], prec);
            if v.re.is_zero() && v.im.is_zero() {
                done[i] = true;
                continue;
            }
            let n = v.div(&dv, prec)?;
            let mut s = Cx::default();
            for j in 0..d {
                if j != i {
                    s = s.add(&one.div(&z[i].sub(&z[j]), prec)?).round(prec);
                }
            }
            let w = n.div(&one.sub(&n.mul(&s, prec)), prec)?;
            z[i] = z[i].sub(&w).round(prec);
            let scale = z[i].log2_abs().unwrap_or(0).max(0);
            match w.log2_abs() {
                None => done[i] = true,
                Some(e) if e <= scale - prec as i64 + 8 => done[i] = true,
                _ => {}
            }
        }
        if done.iter().all(|&x| x) {
            return Some(z);
        }
    }
    None
}
