//! Exact scalar rings used throughout the crate.
//!
//! Elements carry their own context (the prime for `Fp`, the field tables for
//! extension fields, the cyclotomic order for `CycloRat`) so generic code only
//! needs a context value to manufacture constants.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Commutative ring with exact arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Clone + Debug + PartialEq;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_bigint(ctx: &Self::Ctx, v: &BigInt) -> Self;
    fn is_zero_elem(&self) -> bool;
    /// 0 for characteristic zero.
    fn characteristic(ctx: &Self::Ctx) -> u64;

    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(v))
    }

    fn is_one_elem(&self) -> bool {
        *self == Self::one_in(&self.ctx())
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_in(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

/// binom(a, b) as an element of `R`, exact in characteristic zero and via
/// Lucas's digit rule in characteristic p.
pub fn binom_in<R: Ring>(ctx: &R::Ctx, a: u64, b: u64) -> R {
    if b > a {
        return R::zero_in(ctx);
    }
    let p = R::characteristic(ctx);
    if p > 0 {
        R::from_i64(ctx, crate::matrices::lucas_binom(a, b, p) as i64)
    } else {
        R::from_bigint(ctx, &binom_big(a, b))
    }
}

pub fn binom_big(a: u64, b: u64) -> BigInt {
    if b > a {
        return Zero::zero();
    }
    let b = b.min(a - b);
    let mut acc: BigInt = One::one();
    for t in 0..b {
        acc = acc * BigInt::from(a - t) / BigInt::from(t + 1);
    }
    acc
}

/// Element of the prime field F_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp { v: v.rem_euclid(p as i64) as u64, p }
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        let s = self.v + o.v;
        Fp { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp { v: if self.v >= o.v { self.v - o.v } else { self.v + self.p - o.v }, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp { v: (self.v as u128 * o.v as u128 % self.p as u128) as u64, p: self.p }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
}

impl Ring for Fp {
    type Ctx = u64;
    fn ctx(&self) -> u64 {
        self.p
    }
    fn zero_in(p: &u64) -> Self {
        Fp { v: 0, p: *p }
    }
    fn one_in(p: &u64) -> Self {
        Fp { v: 1 % *p, p: *p }
    }
    fn from_bigint(p: &u64, v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(*p));
        Fp { v: r.to_u64().unwrap(), p: *p }
    }
    fn from_i64(p: &u64, v: i64) -> Self {
        Fp::new(v, *p)
    }
    fn is_zero_elem(&self) -> bool {
        self.v == 0
    }
    fn characteristic(p: &u64) -> u64 {
        *p
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        let inv = crate::ring::inv_mod(self.v, self.p)?;
        Some(Fp { v: inv, p: self.p })
    }
}

impl Ring for BigRational {
    type Ctx = ();
    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        Zero::zero()
    }
    fn one_in(_: &()) -> Self {
        One::one()
    }
    fn from_bigint(_: &(), v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn characteristic(_: &()) -> u64 {
        0
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Ring for BigInt {
    type Ctx = ();
    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        Zero::zero()
    }
    fn one_in(_: &()) -> Self {
        One::one()
    }
    fn from_bigint(_: &(), v: &BigInt) -> Self {
        v.clone()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn characteristic(_: &()) -> u64 {
        0
    }
}

/// Ceiling of a rational number.
pub fn ceil_rat(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// `x` is p-integral when its reduced denominator is prime to p.
pub fn rat_mod_p(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb);
    if Zero::is_zero(&den) {
        return None;
    }
    let num = x.numer().mod_floor(&pb).to_u64().unwrap();
    let d = den.to_u64().unwrap();
    let dinv = crate::ring::inv_mod(d, p)?;
    Some((num as u128 * dinv as u128 % p as u128) as u64)
}

pub fn rat_abs_f64(x: &BigRational) -> f64 {
    x.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic() {
        let a = Fp::new(3, 5);
        let b = Fp::new(4, 5);
        assert_eq!((a + b).v, 2);
        assert_eq!((a - b).v, 4);
        assert_eq!((a * b).v, 2);
        assert_eq!((-a).v, 2);
        assert_eq!((a * a.inv().unwrap()).v, 1);
        assert!(Fp::new(0, 5).inv().is_none());
        assert_eq!(Fp::new(-7, 5).v, 3);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_big(10, 3), BigInt::from(120));
        assert!(Zero::is_zero(&binom_big(3, 5)));
        let x: Fp = binom_in(&2, 5, 2);
        assert_eq!(x.v, 0);
        let y: BigRational = binom_in(&(), 6, 3);
        assert_eq!(y, BigRational::from_integer(20.into()));
    }

    #[test]
    fn p_integral_reduction() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(rat_mod_p(&half, 3), Some(2));
        assert_eq!(rat_mod_p(&half, 2), None);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = Fp::new(3, 7);
        assert_eq!(a.pow(0).v, 1);
        assert_eq!(a.pow(6).v, 1);
        assert_eq!(a.pow(5).v, (a * a * a * a * a).v);
    }
}
