//! Dense univariate polynomials over an exact ring.

use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::field::{Field, Ring};

/// Coefficients in increasing degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<R: Ring> {
    pub ctx: R::Ctx,
    pub c: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(ctx: &R::Ctx, mut c: Vec<R>) -> Self {
        while c.last().is_some_and(|x| x.is_zero_elem()) {
            c.pop();
        }
        UniPoly { ctx: ctx.clone(), c }
    }

    pub fn zero(ctx: &R::Ctx) -> Self {
        UniPoly { ctx: ctx.clone(), c: vec![] }
    }

    pub fn constant(x: R) -> Self {
        let ctx = x.ctx();
        Self::new(&ctx, vec![x])
    }

    /// c * z^e
    pub fn monomial(c: R, e: usize) -> Self {
        let ctx = c.ctx();
        let mut v = vec![R::zero_in(&ctx); e];
        v.push(c);
        Self::new(&ctx, v)
    }

    pub fn from_i64s(ctx: &R::Ctx, v: &[i64]) -> Self {
        Self::new(ctx, v.iter().map(|&x| R::from_i64(ctx, x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(|| R::zero_in(&self.ctx))
    }

    pub fn lead(&self) -> Option<&R> {
        self.c.last()
    }

    pub fn scale(&self, s: &R) -> Self {
        Self::new(&self.ctx, self.c.iter().map(|x| x.clone() * s.clone()).collect())
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero_in(&self.ctx);
        for c in self.c.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Coefficientwise image under a ring map.
    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::new(ctx, self.c.iter().map(f).collect())
    }

    /// Quotient and remainder by a divisor whose leading coefficient is one.
    pub fn divrem_monic(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        assert!(d.lead().unwrap().is_one_elem(), "divisor must be monic");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(&self.ctx), self.clone());
        }
        let mut q = vec![R::zero_in(&self.ctx); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let t = r[i].clone();
            if t.is_zero_elem() {
                continue;
            }
            q[i - dd] = t.clone();
            for (j, dj) in d.c.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = r[idx].clone() - t.clone() * dj.clone();
            }
        }
        r.truncate(dd);
        (Self::new(&self.ctx, q), Self::new(&self.ctx, r))
    }

    pub fn rem_monic(&self, d: &Self) -> Self {
        self.divrem_monic(d).1
    }

    /// Hasse derivative of order j: sum_i binom(i, j) c_i z^{i-j}.
    pub fn hasse(&self, j: usize) -> Self {
        let c = (j..self.c.len())
            .map(|i| {
                crate::field::binom_in::<R>(&self.ctx, i as u64, j as u64) * self.c[i].clone()
            })
            .collect();
        Self::new(&self.ctx, c)
    }
}

impl<F: Field> UniPoly<F> {
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let inv = d.lead().expect("division by zero polynomial").inv().unwrap();
        let monic = d.scale(&inv);
        let (q, r) = self.divrem_monic(&monic);
        (q.scale(&inv), r)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Inverse of `self` modulo `m` by the extended Euclidean algorithm.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let (mut r0, mut r1) = (m.clone(), self.divrem(m).1);
        let (mut t0, mut t1) = (Self::zero(&self.ctx), Self::constant(F::one_in(&self.ctx)));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let t = t0 - q * t1.clone();
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let inv = r0.c[0].inv()?;
        Some(t0.scale(&inv).divrem(m).1)
    }
}

impl<R: Ring> Add for UniPoly<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        Self::new(&self.ctx, c)
    }
}

impl<R: Ring> Sub for UniPoly<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        Self::new(&self.ctx, c)
    }
}

impl<R: Ring> Neg for UniPoly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        let c = self.c.into_iter().map(|x| -x).collect();
        Self::new(&self.ctx, c)
    }
}

impl<R: Ring> Mul for UniPoly<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut c = vec![R::zero_in(&self.ctx); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(&self.ctx, c)
    }
}

impl<R: Ring> Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero_elem() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*z", c)?,
                _ => write!(f, "({})*z^{}", c, i)?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> Ring for UniPoly<R> {
    type Ctx = R::Ctx;
    fn ctx(&self) -> R::Ctx {
        self.ctx.clone()
    }
    fn zero_in(ctx: &R::Ctx) -> Self {
        Self::zero(ctx)
    }
    fn one_in(ctx: &R::Ctx) -> Self {
        Self::constant(R::one_in(ctx))
    }
    fn from_bigint(ctx: &R::Ctx, v: &BigInt) -> Self {
        Self::constant(R::from_bigint(ctx, v))
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn characteristic(ctx: &R::Ctx) -> u64 {
        R::characteristic(ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type QPoly = UniPoly<BigRational>;

    #[test]
    fn division_round_trip() {
        let a = QPoly::from_i64s(&(), &[1, 2, 3, 4, 5]);
        let d = QPoly::from_i64s(&(), &[-1, 0, 2]);
        let (q, r) = a.divrem(&d);
        assert_eq!(q * d + r.clone(), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn modular_inverse() {
        let m = QPoly::from_i64s(&(), &[1, 0, 1]);
        let a = QPoly::from_i64s(&(), &[0, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!(inv, QPoly::from_i64s(&(), &[0, -1]));
        assert!(QPoly::from_i64s(&(), &[1, 1]).inverse_mod(&QPoly::from_i64s(&(), &[1, 2, 1])).is_none());
    }

    #[test]
    fn hasse_of_cube() {
        let x3 = QPoly::from_i64s(&(), &[0, 0, 0, 1]);
        assert_eq!(x3.hasse(2), QPoly::from_i64s(&(), &[0, 3]));
        assert_eq!(x3.hasse(0), x3);
    }
}
