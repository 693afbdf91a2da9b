//! Gaussian integers `Z[i]` and Gaussian rationals `Q(i)`.
//!
//! Both types keep a canonical representation so that structural equality is
//! value equality. Textual form is `p/q`, `p/q+r/si` or `r/si` with no spaces.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::ring::Ring;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt { re: re.into(), im: im.into() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        GaussianInt { re: n.into(), im: BigInt::zero() }
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    pub fn one_plus_i() -> Self {
        GaussianInt::new(1, 1)
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianInt { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `self / d` when the division is exact in `Z[i]`.
    pub fn div_exact(&self, d: &GaussianInt) -> Option<GaussianInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let p = self * &d.conj();
        let (qr, rr) = p.re.div_rem(&n);
        let (qi, ri) = p.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(GaussianInt { re: qr, im: qi })
        } else {
            None
        }
    }

    /// Euclidean division with the quotient rounded to the nearest lattice
    /// point, so `N(r) <= N(d)/2`.
    pub fn div_rem_euclid(&self, d: &GaussianInt) -> (GaussianInt, GaussianInt) {
        let n = d.norm();
        let p = self * &d.conj();
        let q = GaussianInt { re: round_div(&p.re, &n), im: round_div(&p.im, &n) };
        let r = self - &(&q * d);
        (q, r)
    }

    /// The associate `u·self` lying in the sector `re > 0, -re < im <= re`.
    pub fn unit_canonical(&self) -> GaussianInt {
        if self.is_zero() {
            return self.clone();
        }
        let mut z = self.clone();
        for _ in 0..4 {
            if z.re.is_positive() && z.im <= z.re && -&z.re < z.im {
                return z;
            }
            z = z.mul_i();
        }
        unreachable!("every nonzero Gaussian integer has an associate in the sector")
    }

    pub fn mul_i(&self) -> GaussianInt {
        GaussianInt { re: -&self.im, im: self.re.clone() }
    }

    /// Residue in `Z[i]/(1+i) = F2`.
    pub fn residue_one_plus_i(&self) -> u8 {
        let s: BigInt = &self.re + &self.im;
        if s.is_even() {
            0
        } else {
            1
        }
    }
}

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    // floor((2n + d) / 2d) for d > 0
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

/// Greatest common divisor in `Z[i]`, normalized with [`GaussianInt::unit_canonical`].
pub fn gint_gcd(x: &GaussianInt, y: &GaussianInt) -> Result<GaussianInt> {
    if x.is_zero() && y.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let (mut a, mut b) = (x.clone(), y.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem_euclid(&b);
        a = b;
        b = r;
    }
    Ok(a.unit_canonical())
}

/// Largest `k` with `(1+i)^k | x`.
pub fn val_one_plus_i(x: &GaussianInt) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let mut k = 0;
    let (mut re, mut im) = (x.re.clone(), x.im.clone());
    // (a+bi)/(1+i) = ((a+b) + (b-a)i)/2, exact iff a+b is even
    loop {
        let s: BigInt = &re + &im;
        if s.is_odd() {
            return Ok(k);
        }
        let t: BigInt = &im - &re;
        re = s / 2;
        im = t / 2;
        k += 1;
    }
}

macro_rules! forward_binops {
    ($t:ty, $($tr:ident $m:ident $imp:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { $imp(&self, &o) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t { $imp(&self, o) }
        }
        impl<'a, 'b> $tr<&'b $t> for &'a $t {
            type Output = $t;
            fn $m(self, o: &'b $t) -> $t { $imp(self, o) }
        }
    )*};
}

fn gi_add(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
    GaussianInt { re: &a.re + &b.re, im: &a.im + &b.im }
}
fn gi_sub(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
    GaussianInt { re: &a.re - &b.re, im: &a.im - &b.im }
}
fn gi_mul(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
    GaussianInt { re: &a.re * &b.re - &a.im * &b.im, im: &a.re * &b.im + &a.im * &b.re }
}

forward_binops!(GaussianInt, Add add gi_add, Sub sub gi_sub, Mul mul gi_mul);

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt { re: -self.re, im: -self.im }
    }
}
impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt { re: -&self.re, im: -&self.im }
    }
}

impl Zero for GaussianInt {
    fn zero() -> Self {
        GaussianInt::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianInt {
    fn one() -> Self {
        GaussianInt::from_int(1)
    }
}

impl Ring for GaussianInt {
    const TAG: &'static str = "Z[i]";
    fn from_i64(n: i64) -> Self {
        GaussianInt::from_int(n)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        GaussianRational::from(self.clone()).fmt(f)
    }
}

/// Element of `Q(i)` stored as `num / den` with `den > 0` and
/// `gcd(den, re(num), im(num)) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    num: GaussianInt,
    den: BigInt,
}

impl Default for GaussianRational {
    fn default() -> Self {
        GaussianRational::zero()
    }
}

impl From<GaussianInt> for GaussianRational {
    fn from(num: GaussianInt) -> Self {
        GaussianRational { num, den: BigInt::one() }
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

impl GaussianRational {
    /// Builds and canonicalizes `num / den`.
    pub fn new(num: GaussianInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(mut num: GaussianInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            num = -num;
        }
        if num.is_zero() {
            return GaussianRational { num, den: BigInt::one() };
        }
        let g = num.re.gcd(&num.im).gcd(&den);
        if !g.is_one() {
            num.re /= &g;
            num.im /= &g;
            den /= &g;
        }
        GaussianRational { num, den }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        GaussianRational { num: GaussianInt::from_int(n), den: BigInt::one() }
    }

    pub fn from_ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        Self::new(GaussianInt::from_int(p), q.into())
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Result<Self> {
        let r = Self::from_ratio(re.0, re.1)?;
        let i = Self::from_ratio(im.0, im.1)?;
        Ok(r + i * GaussianRational::i())
    }

    pub fn i() -> Self {
        GaussianInt::i().into()
    }

    pub fn numer(&self) -> &GaussianInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.num.im.is_zero()
    }

    pub fn to_gaussian_int(&self) -> Option<GaussianInt> {
        self.is_integral().then(|| self.num.clone())
    }

    pub fn conj(&self) -> Self {
        GaussianRational { num: self.num.conj(), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // den / num = den * conj(num) / N(num)
        let n = self.num.norm();
        let top = GaussianInt { re: &self.num.re * &self.den, im: -&self.num.im * &self.den };
        Ok(Self::canonical(top, n))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = GaussianRational::one();
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.num.re, &self.den), ratio_to_f64(&self.num.im, &self.den))
    }

    /// Nearest value with denominator `2^bits` (componentwise rounding).
    pub fn round_dyadic(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let re = round_div(&(&self.num.re * &scale), &self.den);
        let im = round_div(&(&self.num.im * &scale), &self.den);
        Self::canonical(GaussianInt { re, im }, scale)
    }

    /// Exact value of a dyadic approximation of a complex float.
    pub fn from_complex64(z: Complex64, bits: u32) -> Self {
        let scale = 2f64.powi(bits.min(1000) as i32);
        let re = BigInt::from_f64((z.re * scale).round()).unwrap_or_default();
        let im = BigInt::from_f64((z.im * scale).round()).unwrap_or_default();
        Self::canonical(GaussianInt { re, im }, BigInt::one() << bits)
    }

    /// `max(|re|, |im|)` as a float, for magnitude reports.
    pub fn abs_f64(&self) -> f64 {
        self.to_complex64().norm()
    }
}

fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // shift both into f64 range before converting
    let shift = (nb.max(db) - 1000).max(0);
    let (n2, d2) = if shift > 0 { (n >> shift as usize, d >> shift as usize) } else { (n.clone(), d.clone()) };
    let nf = n2.to_f64().unwrap_or(f64::NAN);
    let df = d2.to_f64().unwrap_or(f64::NAN);
    if df == 0.0 {
        // denominator underflowed after the shift: value is enormous
        return if n.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    nf / df
}

fn gr_add(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    if a.den == b.den {
        return GaussianRational::canonical(gi_add(&a.num, &b.num), a.den.clone());
    }
    let num = GaussianInt {
        re: &a.num.re * &b.den + &b.num.re * &a.den,
        im: &a.num.im * &b.den + &b.num.im * &a.den,
    };
    GaussianRational::canonical(num, &a.den * &b.den)
}
fn gr_sub(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    gr_add(a, &-b)
}
fn gr_mul(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    if a.is_zero() || b.is_zero() {
        return GaussianRational::zero();
    }
    GaussianRational::canonical(gi_mul(&a.num, &b.num), &a.den * &b.den)
}
fn gr_div(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    a.checked_div(b).expect("division by zero in Q(i)")
}

forward_binops!(GaussianRational, Add add gr_add, Sub sub gr_sub, Mul mul gr_mul, Div div gr_div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { num: -self.num, den: self.den }
    }
}
impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { num: -&self.num, den: self.den.clone() }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational { num: GaussianInt::zero(), den: BigInt::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::from_int(1)
    }
}

impl Ring for GaussianRational {
    const TAG: &'static str = "Q(i)";
    fn from_i64(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

fn fmt_ratio(n: &BigInt, d: &BigInt) -> String {
    let g = n.gcd(d);
    let (n, d) = if g.is_zero() { (n.clone(), d.clone()) } else { (n / &g, d / &g) };
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = &self.num.re;
        let im = &self.num.im;
        if im.is_zero() {
            return f.write_str(&fmt_ratio(re, &self.den));
        }
        let imag = if im.abs().is_one() && self.den.is_one() {
            if im.is_negative() { "-".to_string() } else { String::new() }
        } else {
            fmt_ratio(im, &self.den)
        };
        if re.is_zero() {
            write!(f, "{imag}i")
        } else {
            let sign = if im.is_negative() { "" } else { "+" };
            write!(f, "{}{sign}{imag}i", fmt_ratio(re, &self.den))
        }
    }
}

fn parse_rational(s: &str) -> Result<GaussianRational> {
    let err = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| err())?;
            let q: BigInt = q.parse().map_err(|_| err())?;
            GaussianRational::new(GaussianInt::from_int(p), q)
        }
        None => Ok(GaussianRational::from_int(s.parse::<BigInt>().map_err(|_| err())?)),
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(&s);
        };
        // split "re±im" at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (parse_rational(&body[..k])?, &body[k..]),
            None => (GaussianRational::zero(), body),
        };
        let im = match im {
            "" | "+" => GaussianRational::one(),
            "-" => -GaussianRational::one(),
            t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
        };
        Ok(re + im * GaussianRational::i())
    }
}

impl serde::Serialize for GaussianInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl serde::Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => Ok(GaussianRational::from_int(n.as_i64().unwrap())),
            other => Err(serde::de::Error::custom(format!("expected exact numeral string, got {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi(a: i64, b: i64) -> GaussianInt {
        GaussianInt::new(a, b)
    }

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gint_gcd(&gi(0, 0), &gi(3, 1)).unwrap(), gi(3, 1));
        assert_eq!(gint_gcd(&gi(2, 0), &gi(1, 1)).unwrap(), gi(1, 1));
        assert_eq!(gint_gcd(&gi(3, 1), &gi(1, 1)).unwrap(), gi(1, 1));
        assert_eq!(gint_gcd(&gi(0, 0), &gi(0, 0)), Err(Error::GcdOfZeros));
    }

    #[test]
    fn two_is_unit_times_square_of_one_plus_i() {
        let p = gi(1, 1);
        assert_eq!(&(&p * &p) * &gi(0, -1), gi(2, 0));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(val_one_plus_i(&gi(1, 0)).unwrap(), 0);
        assert_eq!(val_one_plus_i(&gi(2, 0)).unwrap(), 2);
        assert_eq!(val_one_plus_i(&gi(4, 0)).unwrap(), 4);
        assert_eq!(val_one_plus_i(&gi(0, 0)), Err(Error::ValuationOfZero));
    }

    #[test]
    fn valuation_by_repeated_division() {
        // independent route: divide by (1+i) with div_exact until it fails
        for (a, b) in [(4, 0), (6, 2), (-8, 8), (5, 3), (12, -4)] {
            let mut x = gi(a, b);
            let mut k = 0;
            while let Some(y) = x.div_exact(&gi(1, 1)) {
                x = y;
                k += 1;
            }
            assert_eq!(val_one_plus_i(&gi(a, b)).unwrap(), k);
        }
    }

    #[test]
    fn residue_of_three_plus_i() {
        // 3+i = (1+i)(2-i), so the residue mod (1+i) is 0
        assert_eq!(&gi(1, 1) * &gi(2, -1), gi(3, 1));
        assert_eq!(gi(3, 1).residue_one_plus_i(), 0);
        assert_eq!(gi(1, 0).residue_one_plus_i(), 1);
        assert_eq!(gi(2, 1).residue_one_plus_i(), 1);
    }

    #[test]
    fn unit_canonical_is_unique() {
        for z in [gi(1, 1), gi(1, -1), gi(-1, 1), gi(-1, -1), gi(0, 3), gi(-2, 5)] {
            let c = z.unit_canonical();
            assert!(c.re.is_positive() && c.im <= c.re && -&c.re < c.im);
            let mut w = z.clone();
            for _ in 0..4 {
                assert_eq!(w.unit_canonical(), c);
                w = w.mul_i();
            }
        }
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "3", "-1/2", "i", "-i", "2i", "1/2+3/4i", "1/2-3/4i", "-5-i", "7/3i"] {
            assert_eq!(q(s).to_string(), s, "round trip of {s}");
        }
        assert_eq!(q("4/6"), q("2/3"));
        assert_eq!(q("2/4+2/4i").to_string(), "1/2+1/2i");
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("abc".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn field_ops() {
        let a = q("1/2+i");
        let b = q("3-2i");
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(q("i") * q("i"), q("-1"));
        assert_eq!(a.inv().unwrap() * &a, GaussianRational::one());
        assert_eq!(GaussianRational::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_form_invariant() {
        let x = GaussianRational::new(gi(6, 4), BigInt::from(-8)).unwrap();
        assert_eq!(x.denom(), &BigInt::from(4));
        assert_eq!(x.numer(), &gi(-3, -2));
    }

    #[test]
    fn dyadic_rounding() {
        let third = q("1/3");
        let r = third.round_dyadic(20);
        assert!((r.to_complex64().re - 1.0 / 3.0).abs() < 1e-6);
        assert!(r.denom() <= &(BigInt::one() << 20));
    }

    #[test]
    fn brute_force_gcd_small_norms() {
        // common divisors enumerated over all Gaussian integers with norm <= 50
        let cands: Vec<GaussianInt> = (-7..=7)
            .flat_map(|a| (-7..=7).map(move |b| gi(a, b)))
            .filter(|z| !z.is_zero() && z.norm() <= BigInt::from(50))
            .collect();
        for x in cands.iter().step_by(7) {
            for y in cands.iter().step_by(11) {
                let g = gint_gcd(x, y).unwrap();
                assert!(x.div_exact(&g).is_some() && y.div_exact(&g).is_some());
                for c in &cands {
                    if x.div_exact(c).is_some() && y.div_exact(c).is_some() {
                        assert!(g.div_exact(c).is_some(), "{c} | {x}, {y} but not gcd {g}");
                    }
                }
            }
        }
    }
}
