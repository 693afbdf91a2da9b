use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ring::Ring;

/// Residue class in `Z/NZ` for small `N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct ZMod<const N: u8>(u8);

/// The prime field `F2`, also the residue field `Z[i]/(1+i)`.
pub type F2 = ZMod<2>;
pub type Z4 = ZMod<4>;

impl<const N: u8> ZMod<N> {
    pub fn new(v: i64) -> Self {
        ZMod(v.rem_euclid(N as i64) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl<const N: u8> Add for ZMod<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ZMod((self.0 + o.0) % N)
    }
}
impl<'a, const N: u8> Add<&'a ZMod<N>> for ZMod<N> {
    type Output = Self;
    fn add(self, o: &'a Self) -> Self {
        self + *o
    }
}
impl<const N: u8> Sub for ZMod<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ZMod((self.0 + N - o.0) % N)
    }
}
impl<'a, const N: u8> Sub<&'a ZMod<N>> for ZMod<N> {
    type Output = Self;
    fn sub(self, o: &'a Self) -> Self {
        self - *o
    }
}
impl<const N: u8> Mul for ZMod<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ZMod(((self.0 as u16 * o.0 as u16) % N as u16) as u8)
    }
}
impl<'a, const N: u8> Mul<&'a ZMod<N>> for ZMod<N> {
    type Output = Self;
    fn mul(self, o: &'a Self) -> Self {
        self * *o
    }
}
impl<const N: u8> Neg for ZMod<N> {
    type Output = Self;
    fn neg(self) -> Self {
        ZMod((N - self.0) % N)
    }
}

impl<const N: u8> Zero for ZMod<N> {
    fn zero() -> Self {
        ZMod(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}
impl<const N: u8> One for ZMod<N> {
    fn one() -> Self {
        ZMod(1 % N)
    }
}

impl<const N: u8> fmt::Display for ZMod<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Ring for ZMod<2> {
    const TAG: &'static str = "F2";
    fn from_i64(n: i64) -> Self {
        ZMod::new(n)
    }
}

impl Ring for ZMod<4> {
    const TAG: &'static str = "Z/4Z";
    fn from_i64(n: i64) -> Self {
        ZMod::new(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_mod_four() {
        let a = Z4::new(3);
        assert_eq!(a + a, Z4::new(2));
        assert_eq!(a * a, Z4::new(1));
        assert_eq!(-a, Z4::new(1));
        assert_eq!(Z4::new(-6), Z4::new(2));
    }

    #[test]
    fn char_two() {
        let one = F2::one();
        assert_eq!(one + one, F2::zero());
        assert_eq!(-one, one);
    }
}
