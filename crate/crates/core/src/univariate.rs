//! Dense univariate polynomials over `Q(i)`, lowest degree first.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::exactalg::GaussianRational;

pub type UPoly = Vec<GaussianRational>;

pub fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree(p: &[GaussianRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[GaussianRational], x: &GaussianRational) -> GaussianRational {
    p.iter().rev().fold(GaussianRational::zero(), |acc, c| acc * x + c)
}

pub fn eval_c(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

pub fn derivative(p: &[GaussianRational]) -> UPoly {
    p.iter().enumerate().skip(1).map(|(i, c)| c.clone() * GaussianRational::from_int(i as i64)).collect()
}

/// Quotient and remainder; panics on a zero divisor.
pub fn div_rem(a: &[GaussianRational], b: &[GaussianRational]) -> (UPoly, UPoly) {
    let db = degree(b).expect("nonzero divisor");
    let lead_inv = b[db].inv().expect("nonzero lead");
    let mut r = trim(a.to_vec());
    let mut quo = vec![GaussianRational::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr].clone() * &lead_inv;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[dr - db + i] = r[dr - db + i].clone() - &(c.clone() * bc);
        }
        quo[dr - db] = c;
        r = trim(r);
    }
    (trim(quo), r)
}

/// Monic gcd (zero if both are zero).
pub fn gcd(a: &[GaussianRational], b: &[GaussianRational]) -> UPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while degree(&y).is_some() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    match degree(&x) {
        None => x,
        Some(d) => {
            let inv = x[d].inv().expect("nonzero");
            x.into_iter().map(|c| c * &inv).collect()
        }
    }
}

/// The polynomial of degree `< xs.len()` through the given points (Newton form).
pub fn interpolate(xs: &[GaussianRational], ys: &[GaussianRational]) -> UPoly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = coef[i].clone() - &coef[i - 1];
            let den = xs[i].clone() - &xs[i - j];
            coef[i] = num.checked_div(&den).expect("distinct nodes");
        }
    }
    let mut p: UPoly = vec![GaussianRational::zero()];
    for i in (0..n).rev() {
        // p = p·(x - xs[i]) + coef[i]
        let mut next = vec![GaussianRational::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c;
            next[k] = next[k].clone() - &(c.clone() * &xs[i]);
        }
        next[0] = next[0].clone() + &coef[i];
        p = next;
    }
    trim(p)
}

pub fn to_complex(p: &[GaussianRational]) -> Vec<Complex64> {
    p.iter().map(GaussianRational::to_complex64).collect()
}

/// All complex roots by Aberth iteration; `p` must have degree >= 1.
pub fn roots(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.iter().rposition(|c| c.norm() > 0.0).unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let monic: Vec<Complex64> = p[..=n].iter().map(|c| c / lead).collect();
    let dp: Vec<Complex64> = monic.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    // Cauchy bound for the initial circle
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let f = eval_c(&monic, z[i]);
            let fp = eval_c(&dp, z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / fp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Best rational approximation with denominator at most `max_den` (continued fractions).
pub fn rational_approx(x: f64, max_den: i64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        None
    } else {
        Some((h1, k1))
    }
}

/// Candidate Gaussian rationals near `z`.
pub fn gaussian_rational_near(z: Complex64, max_den: i64) -> Option<GaussianRational> {
    let (rn, rd) = rational_approx(z.re, max_den)?;
    let (inum, iden) = if z.im.abs() < 1e-9 { (0, 1) } else { rational_approx(z.im, max_den)? };
    GaussianRational::from_parts((rn, rd), (inum, iden)).ok()
}

pub fn one() -> UPoly {
    vec![GaussianRational::one()]
}
