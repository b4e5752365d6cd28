//! The truncated ring F_p[z]/(z-1)^l, the cyclotomic field Q(ζ_{p^k}), and
//! the reduction map ψ sending ζ to 1 and integers to their residues mod p.

use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{rat_mod_p, Field, Fp, Ring};
use crate::matrices::lucas_binom;
use crate::unipoly::UniPoly;

/// Element of F_p[z]/(z-1)^l stored in the basis w^i, w = z - 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    pub p: u64,
    pub l: usize,
    pub c: Vec<u64>,
}

impl TruncPoly {
    pub fn zero(p: u64, l: usize) -> Self {
        TruncPoly { p, l, c: vec![0; l] }
    }

    pub fn one(p: u64, l: usize) -> Self {
        let mut t = Self::zero(p, l);
        t.c[0] = 1 % p;
        t
    }

    /// From coefficients in the w basis; entries beyond l are dropped.
    pub fn from_w(p: u64, l: usize, w: &[u64]) -> Self {
        let mut t = Self::zero(p, l);
        for (i, &x) in w.iter().take(l).enumerate() {
            t.c[i] = x % p;
        }
        t
    }

    /// z^e = (1 + w)^e = sum_i binom(e, i) w^i.
    pub fn z_pow(p: u64, l: usize, e: u64) -> Self {
        let mut t = Self::zero(p, l);
        for i in 0..l {
            t.c[i] = lucas_binom(e, i as u64, p);
        }
        t
    }

    /// From coefficients of z^0, z^1, ...; any length, reduced mod (z-1)^l.
    pub fn from_z(p: u64, l: usize, z: &[u64]) -> Self {
        let mut t = Self::zero(p, l);
        for (e, &a) in z.iter().enumerate() {
            if a % p == 0 {
                continue;
            }
            for i in 0..l.min(e + 1) {
                let b = lucas_binom(e as u64, i as u64, p);
                t.c[i] = (t.c[i] + a % p * b) % p;
            }
        }
        t
    }

    /// Coefficients of z^0..z^{l-1}: [z^c] = sum_i a_i binom(i, c) (-1)^{i-c}.
    pub fn to_z(&self) -> Vec<u64> {
        let p = self.p;
        (0..self.l)
            .map(|c| {
                let mut acc = 0u64;
                for i in c..self.l {
                    let term = self.c[i] * lucas_binom(i as u64, c as u64, p) % p;
                    if (i - c) % 2 == 0 {
                        acc = (acc + term) % p;
                    } else {
                        acc = (acc + p - term) % p;
                    }
                }
                acc
            })
            .collect()
    }

    /// Largest j with (z-1)^j dividing the element; l for zero.
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|&x| x != 0).unwrap_or(self.l)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// q(z^e) reduced mod (z-1)^l.
    pub fn substitute_pow(&self, e: u64) -> Self {
        let s = Self::z_pow(self.p, self.l, e) - Self::one(self.p, self.l);
        let mut acc = Self::zero(self.p, self.l);
        for &a in self.c.iter().rev() {
            acc = acc * s.clone();
            acc.c[0] = (acc.c[0] + a) % self.p;
        }
        acc
    }
}

/// q(z^e) in F_p[z]/(z-1)^l.
pub fn trunc_substitute_zp(q: &TruncPoly, e: u64) -> TruncPoly {
    q.substitute_pow(e)
}

impl Add for TruncPoly {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let p = self.p;
        let c = self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % p).collect();
        TruncPoly { p, l: self.l, c }
    }
}

impl Sub for TruncPoly {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let p = self.p;
        let c = self.c.iter().zip(&o.c).map(|(a, b)| (a + p - b) % p).collect();
        TruncPoly { p, l: self.l, c }
    }
}

impl Neg for TruncPoly {
    type Output = Self;
    fn neg(self) -> Self {
        let p = self.p;
        let c = self.c.iter().map(|a| (p - a) % p).collect();
        TruncPoly { p, l: self.l, c }
    }
}

impl Mul for TruncPoly {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (p, l) = (self.p, self.l);
        let mut c = vec![0u64; l];
        for i in 0..l {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..l - i {
                c[i + j] = (c[i + j] + self.c[i] * o.c[j]) % p;
            }
        }
        TruncPoly { p, l, c }
    }
}

impl Display for TruncPoly {
    /// Printed in the z-monomial basis.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_z();
        let terms: Vec<String> = z
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| match i {
                0 => format!("{a}"),
                1 if a == 1 => "z".to_string(),
                1 => format!("{a}*z"),
                _ if a == 1 => format!("z^{i}"),
                _ => format!("{a}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl Ring for TruncPoly {
    type Ctx = (u64, usize);
    fn ctx(&self) -> (u64, usize) {
        (self.p, self.l)
    }
    fn zero_in(ctx: &(u64, usize)) -> Self {
        Self::zero(ctx.0, ctx.1)
    }
    fn one_in(ctx: &(u64, usize)) -> Self {
        Self::one(ctx.0, ctx.1)
    }
    fn from_bigint(ctx: &(u64, usize), v: &BigInt) -> Self {
        let mut t = Self::zero(ctx.0, ctx.1);
        t.c[0] = Fp::from_bigint(&ctx.0, v).v;
        t
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn characteristic(ctx: &(u64, usize)) -> u64 {
        ctx.0
    }
}

/// Integer coefficients of Φ_{p^k}(x) = sum_{i<p} x^{i p^{k-1}}.
pub fn cyclotomic_poly(p: u64, k: u32) -> Vec<i64> {
    let s = p.pow(k - 1) as usize;
    let mut c = vec![0i64; (p as usize - 1) * s + 1];
    for i in 0..p as usize {
        c[i * s] = 1;
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycloCtx {
    pub p: u64,
    pub k: u32,
}

impl CycloCtx {
    pub fn new(p: u64, k: u32) -> Self {
        CycloCtx { p, k }
    }

    /// φ(p^k), the degree of the field.
    pub fn phi(&self) -> usize {
        (self.p.pow(self.k - 1) * (self.p - 1)) as usize
    }

    /// The order p^k of ζ.
    pub fn order(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn modulus(&self) -> UniPoly<BigRational> {
        UniPoly::from_i64s(&(), &cyclotomic_poly(self.p, self.k))
    }
}

/// Element of Q(ζ_{p^k}) in the power basis ζ^0..ζ^{φ-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloRat {
    pub ctx: CycloCtx,
    pub c: Vec<BigRational>,
}

impl CycloRat {
    pub fn zero(ctx: CycloCtx) -> Self {
        CycloRat { ctx, c: vec![BigRational::zero(); ctx.phi()] }
    }

    pub fn from_rational(ctx: CycloCtx, r: BigRational) -> Self {
        let mut x = Self::zero(ctx);
        x.c[0] = r;
        x
    }

    /// Reduces an arbitrary-length power-basis vector modulo Φ_{p^k}.
    pub fn from_coeffs(ctx: CycloCtx, mut v: Vec<BigRational>) -> Self {
        let phi = ctx.phi();
        let s = ctx.p.pow(ctx.k - 1) as usize;
        if v.len() > phi {
            for d in (phi..v.len()).rev() {
                let c = std::mem::take(&mut v[d]);
                if c.is_zero() {
                    continue;
                }
                for i in 0..ctx.p as usize - 1 {
                    let idx = d - phi + i * s;
                    v[idx] = &v[idx] - &c;
                }
            }
        }
        v.resize(phi, BigRational::zero());
        CycloRat { ctx, c: v }
    }

    pub fn from_i64s(ctx: CycloCtx, v: &[i64]) -> Self {
        Self::from_coeffs(ctx, v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// ζ^e for any integer e.
    pub fn zeta_pow(ctx: CycloCtx, e: i64) -> Self {
        let e = e.rem_euclid(ctx.order() as i64) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        Self::from_coeffs(ctx, v)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_p_integral(&self) -> bool {
        self.c.iter().all(|x| rat_mod_p(x, self.ctx.p).is_some())
    }

    /// ψ: ζ -> 1, integers -> residues mod p.
    pub fn psi(&self) -> Result<Fp> {
        let p = self.ctx.p;
        let mut acc = 0u64;
        for x in &self.c {
            acc = (acc + rat_mod_p(x, p).ok_or(Error::NotInDomain(p))?) % p;
        }
        Ok(Fp { v: acc, p })
    }

    pub fn as_poly(&self) -> UniPoly<BigRational> {
        UniPoly::new(&(), self.c.clone())
    }
}

impl Add for CycloRat {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect();
        CycloRat { ctx: self.ctx, c }
    }
}

impl Sub for CycloRat {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect();
        CycloRat { ctx: self.ctx, c }
    }
}

impl Neg for CycloRat {
    type Output = Self;
    fn neg(self) -> Self {
        CycloRat { ctx: self.ctx, c: self.c.into_iter().map(|a| -a).collect() }
    }
}

impl Mul for CycloRat {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let phi = self.ctx.phi();
        let mut v = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(self.ctx, v)
    }
}

impl Display for CycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| match i {
                0 => format!("{a}"),
                1 => format!("{a}*zeta"),
                _ => format!("{a}*zeta^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Ring for CycloRat {
    type Ctx = CycloCtx;
    fn ctx(&self) -> CycloCtx {
        self.ctx
    }
    fn zero_in(ctx: &CycloCtx) -> Self {
        Self::zero(*ctx)
    }
    fn one_in(ctx: &CycloCtx) -> Self {
        Self::from_rational(*ctx, BigRational::one())
    }
    fn from_bigint(ctx: &CycloCtx, v: &BigInt) -> Self {
        Self::from_rational(*ctx, BigRational::from_integer(v.clone()))
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn characteristic(_: &CycloCtx) -> u64 {
        0
    }
}

impl Field for CycloRat {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let inv = self.as_poly().inverse_mod(&self.ctx.modulus())?;
        Some(Self::from_coeffs(self.ctx, inv.c))
    }
}

/// Polynomial in z with coefficients in Q(ζ).
pub type CycloZPoly = UniPoly<CycloRat>;

/// ψ applied coefficientwise to a polynomial over Q(ζ), giving a polynomial
/// over F_p in z.
pub fn psi_coeffs(q: &CycloZPoly) -> Result<UniPoly<Fp>> {
    let p = q.ctx.p;
    let c = q.c.iter().map(|x| x.psi()).collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::new(&p, c))
}

/// ψ(q) as an element of F_p[z]/(z-1)^l, after checking ψ(h) = (z-1)^l for
/// the modulus h that q is taken modulo.
pub fn psi_poly(q: &CycloZPoly, h: &CycloZPoly, l: usize) -> Result<TruncPoly> {
    let p = h.ctx.p;
    let hp = psi_coeffs(h)?;
    // (z-1)^l expanded over F_p
    let mut expect = vec![0u64; l + 1];
    for (i, e) in expect.iter_mut().enumerate() {
        let b = lucas_binom(l as u64, i as u64, p);
        *e = if (l - i) % 2 == 0 { b } else { (p - b) % p };
    }
    let got: Vec<u64> = (0..=l.max(hp.c.len().saturating_sub(1))).map(|i| hp.coeff(i).v).collect();
    expect.resize(got.len(), 0);
    if got != expect {
        return Err(Error::TargetMismatch(l));
    }
    let qp = psi_coeffs(q)?;
    let z: Vec<u64> = qp.c.iter().map(|x| x.v).collect();
    Ok(TruncPoly::from_z(p, l, &z))
}
