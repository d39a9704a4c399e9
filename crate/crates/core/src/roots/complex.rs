//! Complex roots with certified inclusion disks.
//!
//! For distinct approximations z_1..z_d of a squarefree polynomial f, every
//! disk |z − z_i| ≤ d·|W_i| with W_i = f(z_i) / (lc · Π_{j≠i}(z_i − z_j))
//! is a superset of a Gerschgorin disk of a matrix whose eigenvalues are the
//! roots of f. Pairwise disjoint disks therefore hold one root each. A disk
//! centred on the real axis then holds a real root, and a disk missing the
//! real axis holds a nonreal one.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::aberth::{aberth_f64, polish, Cx};
use crate::ball::{eval_complex_ball, Ball, ComplexBall, Dyadic};
use crate::error::{Error, Result};
use crate::poly::{IntPoly, Rational};

pub const MAX_SWEEPS: usize = 200;

/// One root inside the closed disk `|z − (re + i·im)| ≤ radius`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexRoot {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Dyadic,
    /// Certified real (the disk is symmetric about the axis).
    pub real: bool,
    pub multiplicity: usize,
    /// Upper bound on `|p(re + i·im)|` for the input polynomial.
    pub residual: Dyadic,
}

impl ComplexRoot {
    /// Enclosure of the root as a complex ball.
    pub fn enclosure(&self) -> ComplexBall {
        ComplexBall::new(Ball::new(self.re.clone(), self.radius.clone()), Ball::new(self.im.clone(), self.radius.clone()))
    }

    /// Certified enclosure of `|root|`.
    pub fn modulus(&self, prec: u32) -> Ball {
        let c = ComplexBall::new(Ball::exact(self.re.clone()), Ball::exact(self.im.clone()));
        let m = c.abs(prec);
        Ball::new(m.mid.clone(), m.rad.add(&self.radius))
    }

    /// Enclosure of `|root|²` as exact rational bounds.
    pub fn modulus_sqr_bounds(&self) -> (Rational, Rational) {
        let centre = self.re.mul(&self.re).add(&self.im.mul(&self.im)).to_rational();
        let c = self.re.abs().add(&self.im.abs()).to_rational();
        let r = self.radius.to_rational();
        // |z|² ∈ (|c| ± r)², and |c| ≤ |re| + |im|
        let abs_c_upper = c;
        let upper = &centre + Rational::from_integer(2.into()) * &abs_c_upper * &r + &r * &r;
        let lower = &centre - Rational::from_integer(2.into()) * &abs_c_upper * &r;
        (lower.max(Rational::zero()), upper)
    }
}

/// All complex roots of `p`, grouped by squarefree factor, each certified
/// by a disjoint inclusion disk. Aberth runs at twice `precision_bits` and
/// retries once at four times on failure.
pub fn complex_roots(p: &IntPoly, precision_bits: u32) -> Result<Vec<ComplexRoot>> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::Domain("constant polynomial has no roots".into()));
    }
    let mut out = Vec::with_capacity(deg);
    for (i, f) in p.squarefree_decomposition()?.iter().enumerate() {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        for mut r in certify_factor(f, precision_bits)? {
            r.multiplicity = i + 1;
            let z = ComplexBall::new(Ball::exact(r.re.clone()), Ball::exact(r.im.clone()));
            r.residual = eval_complex_ball(p, &z, 2 * precision_bits).upper_abs();
            out.push(r);
        }
    }
    out.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
    Ok(out)
}

fn certify_factor(f: &IntPoly, prec: u32) -> Result<Vec<ComplexRoot>> {
    let seeds = aberth_f64(f, 500).roots;
    for work in [2 * prec, 4 * prec] {
        let Some(mut z) = polish(f, &seeds, work, MAX_SWEEPS) else { continue };
        snap_real(&mut z, work);
        if let Some(roots) = inclusion_disks(f, &z, work) {
            return Ok(roots);
        }
    }
    Err(Error::NonConvergence { sweeps: MAX_SWEEPS, precision_bits: 4 * prec })
}

fn snap_real(z: &mut [Cx], work: u32) {
    for c in z.iter_mut() {
        let scale = c.re.top().max(0);
        if !c.im.is_zero() && c.im.top() < scale - (work / 2) as i64 {
            c.im = Dyadic::zero();
        }
    }
}

fn inclusion_disks(f: &IntPoly, z: &[Cx], prec: u32) -> Option<Vec<ComplexRoot>> {
    let d = z.len();
    let lc = f.leading()?.abs();
    let balls: Vec<ComplexBall> =
        z.iter().map(|c| ComplexBall::new(Ball::exact(c.re.clone()), Ball::exact(c.im.clone()))).collect();
    // lower bounds of |z_i − z_j|
    let mut dist = vec![vec![Dyadic::zero(); d]; d];
    for i in 0..d {
        for j in i + 1..d {
            let diff = balls[i].sub(&balls[j], prec);
            let lo = diff.abs(prec).lower_abs();
            if lo.is_zero() {
                return None;
            }
            dist[i][j] = lo.clone();
            dist[j][i] = lo;
        }
    }
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let num = eval_complex_ball(f, &balls[i], prec).upper_abs();
        let mut den = Dyadic::from_int(lc.clone());
        for j in 0..d {
            if j != i {
                den = den.mul(&dist[i][j]).round(prec).0;
            }
        }
        let (q, e) = num.mul(&Dyadic::from_int(d as u64)).div(&den, prec);
        radii.push(q.add(&e).round_up());
    }
    for i in 0..d {
        for j in i + 1..d {
            if dist[i][j] <= radii[i].add(&radii[j]) {
                return None;
            }
        }
    }
    let mut out = Vec::with_capacity(d);
    for (c, r) in z.iter().zip(radii) {
        let real = c.im.is_zero();
        if !real && c.im.abs() <= r {
            return None;
        }
        out.push(ComplexRoot {
            re: c.re.clone(),
            im: c.im.clone(),
            radius: r,
            real,
            multiplicity: 1,
            residual: Dyadic::zero(),
        });
    }
    Some(out)
}

/// Tests whether `p` has the exact quadratic factor `a·x² − b·x + c`.
pub fn has_quadratic_factor(p: &IntPoly, a: i64, b: &BigInt, c: i64) -> bool {
    let q = IntPoly::new(vec![BigInt::from(c), -b.clone(), BigInt::from(a)]);
    if q.degree() != Some(2) {
        return false;
    }
    // scaling by a^deg clears every denominator long division can create
    let scaled = p.scale(&num_traits::pow(BigInt::from(a), p.degree().unwrap_or(0)));
    scaled.div_exact(&q).is_ok()
}
