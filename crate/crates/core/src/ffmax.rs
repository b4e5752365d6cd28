//! Maximal Kakeya bounds over finite fields F_q, prime powers included, and
//! the dimension-counting ladder behind them.

use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{BoundReport, Quantity};
use crate::error::{Error, Result};
use crate::field::{binom_big, Field, Ring};
use crate::polymethod::{exponents_of_weight, vanishing_poly, Exponent, MultiPoly};
use crate::polymethod::select_monomials;
use crate::ring::prime_power;

/// Largest field order for which the addition and multiplication tables are built.
pub const MAX_FIELD_ORDER: u64 = 1024;

/// F_q = F_p[t]/(modulus). Elements are coded as Σ c_i p^i for the
/// coefficients c_i of 1, t, t^2, ...
#[derive(Clone, Debug)]
pub struct FqField {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    /// Monic, low degree first, length e + 1.
    pub modulus: Vec<u64>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl PartialEq for FqField {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.modulus == o.modulus
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = crate::ring::inv_mod(m[dm], p).expect("nonzero lead");
    while r.len() > dm {
        let top = r.pop().unwrap();
        if top == 0 {
            continue;
        }
        let f = top * lead_inv % p;
        let off = r.len() - dm;
        for (i, &c) in m[..dm].iter().enumerate() {
            r[off + i] = (r[off + i] + p - f * c % p) % p;
        }
    }
    r
}

fn digits(v: u64, p: u64, e: u32) -> Vec<u64> {
    let mut v = v;
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Irreducible iff no monic polynomial of degree 1..=e/2 divides it.
pub fn is_irreducible(m: &[u64], p: u64) -> bool {
    let e = m.len() - 1;
    for d in 1..=e / 2 {
        for code in 0..p.pow(d as u32) {
            let mut g = digits(code, p, d as u32);
            g.push(1);
            if poly_rem(m, &g, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl FqField {
    /// The field with the given monic irreducible modulus.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !crate::ring::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let e = modulus.len().checked_sub(1).filter(|&e| e >= 1).ok_or_else(|| Error::Structure("modulus must have degree >= 1".into()))? as u32;
        if modulus[e as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Structure(format!("modulus {modulus:?} is not a reduced monic polynomial mod {p}")));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::Structure(format!("modulus {modulus:?} is reducible mod {p}")));
        }
        let q = p.pow(e);
        if q > MAX_FIELD_ORDER {
            return Err(Error::Budget(format!("field order {q} exceeds {MAX_FIELD_ORDER}")));
        }
        let qs = q as usize;
        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        let ds: Vec<Vec<u64>> = (0..q).map(|v| digits(v, p, e)).collect();
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u64> = ds[a].iter().zip(&ds[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = undigits(&s, p) as u32;
                let mut prod = vec![0u64; 2 * e as usize - 1];
                for (i, x) in ds[a].iter().enumerate() {
                    for (j, y) in ds[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = poly_rem(&prod, &modulus, p);
                let mut r = r;
                r.resize(e as usize, 0);
                mul[a * qs + b] = undigits(&r, p) as u32;
            }
        }
        let neg = (0..qs).map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u32).collect();
        let inv = (0..qs)
            .map(|a| if a == 0 { 0 } else { (1..qs).find(|&b| mul[a * qs + b] == 1).expect("field") as u32 })
            .collect();
        Ok(FqField { p, e, q, modulus, add, mul, neg, inv })
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inv[a as usize])
    }
}

/// F_q with the lexicographically first monic irreducible of degree e
/// (coefficients compared from the t^{e-1} term down).
pub fn build_field(q: u64) -> Result<Arc<FqField>> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q > MAX_FIELD_ORDER {
        return Err(Error::Budget(format!("field order {q} exceeds {MAX_FIELD_ORDER}")));
    }
    if e == 1 {
        return Ok(Arc::new(FqField::with_modulus(p, vec![0, 1])?));
    }
    for code in 0..p.pow(e) {
        let mut m = digits(code, p, e);
        m.push(1);
        if is_irreducible(&m, p) {
            return Ok(Arc::new(FqField::with_modulus(p, m)?));
        }
    }
    Err(Error::Internal(format!("no irreducible of degree {e} over F_{p}")))
}

/// Element of F_q.
#[derive(Clone, Debug)]
pub struct Gf {
    pub v: u32,
    pub field: Arc<FqField>,
}

impl Gf {
    pub fn new(field: &Arc<FqField>, v: u32) -> Self {
        Gf { v, field: field.clone() }
    }
}

impl PartialEq for Gf {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v && (Arc::ptr_eq(&self.field, &o.field) || *self.field == *o.field)
    }
}

impl Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Gf {
    type Output = Gf;
    fn add(self, o: Gf) -> Gf {
        Gf { v: self.field.add(self.v, o.v), field: self.field }
    }
}

impl Sub for Gf {
    type Output = Gf;
    fn sub(self, o: Gf) -> Gf {
        let n = self.field.neg(o.v);
        Gf { v: self.field.add(self.v, n), field: self.field }
    }
}

impl Mul for Gf {
    type Output = Gf;
    fn mul(self, o: Gf) -> Gf {
        Gf { v: self.field.mul(self.v, o.v), field: self.field }
    }
}

impl Neg for Gf {
    type Output = Gf;
    fn neg(self) -> Gf {
        Gf { v: self.field.neg(self.v), field: self.field }
    }
}

impl Ring for Gf {
    type Ctx = Arc<FqField>;
    fn ctx(&self) -> Arc<FqField> {
        self.field.clone()
    }
    fn zero_in(ctx: &Arc<FqField>) -> Self {
        Gf::new(ctx, 0)
    }
    fn one_in(ctx: &Arc<FqField>) -> Self {
        Gf::new(ctx, 1)
    }
    fn from_bigint(ctx: &Arc<FqField>, v: &BigInt) -> Self {
        use num_integer::Integer as _;
        let r = v.mod_floor(&BigInt::from(ctx.p)).to_u32().unwrap();
        Gf::new(ctx, r)
    }
    fn is_zero_elem(&self) -> bool {
        self.v == 0
    }
    fn characteristic(ctx: &Arc<FqField>) -> u64 {
        ctx.p
    }
}

impl Field for Gf {
    fn inv(&self) -> Option<Self> {
        self.field.inv(self.v).map(|v| Gf::new(&self.field, v))
    }
}

/// Non-negative integer function on F_q^n, row-major over element codes with
/// the first coordinate most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldFunction {
    pub field: Arc<FqField>,
    pub n: usize,
    pub values: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    q: u64,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<u64>>>,
}

impl FieldFunction {
    pub fn zeros(field: &Arc<FqField>, n: usize) -> Self {
        FieldFunction { field: field.clone(), n, values: vec![0; (field.q as usize).pow(n as u32)] }
    }

    pub fn constant(field: &Arc<FqField>, n: usize, c: u64) -> Self {
        FieldFunction { field: field.clone(), n, values: vec![c; (field.q as usize).pow(n as u32)] }
    }

    pub fn from_values(field: &Arc<FqField>, n: usize, values: Vec<u64>) -> Result<Self> {
        let len = (field.q as usize).pow(n as u32);
        if values.len() != len {
            return Err(Error::Structure(format!("expected {len} values, got {}", values.len())));
        }
        Ok(FieldFunction { field: field.clone(), n, values })
    }

    pub fn indicator(field: &Arc<FqField>, n: usize, points: &[Vec<u64>]) -> Result<Self> {
        let mut f = Self::zeros(field, n);
        for x in points {
            if x.len() != n || x.iter().any(|&c| c >= field.q) {
                return Err(Error::Structure(format!("point {x:?} is not in F_{}^{n}", field.q)));
            }
            let i = f.index(x);
            f.values[i] = 1;
        }
        Ok(f)
    }

    pub fn q(&self) -> u64 {
        self.field.q
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index(&self, x: &[u64]) -> usize {
        x.iter().fold(0usize, |acc, &c| acc * self.q() as usize + c as usize)
    }

    pub fn point(&self, mut idx: usize) -> Vec<u64> {
        let q = self.q() as usize;
        let mut x = vec![0u64; self.n];
        for i in (0..self.n).rev() {
            x[i] = (idx % q) as u64;
            idx /= q;
        }
        x
    }

    pub fn get(&self, x: &[u64]) -> u64 {
        self.values[self.index(x)]
    }

    pub fn elements(&self, x: &[u64]) -> Vec<Gf> {
        x.iter().map(|&c| Gf::new(&self.field, c as u32)).collect()
    }

    pub fn to_json(&self) -> String {
        let modulus = (self.field.e > 1).then(|| self.field.modulus.clone());
        serde_json::to_string(&FieldJson { q: self.q(), n: self.n, modulus, values: Some(self.values.clone()), points: None })
            .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: FieldJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let field = match j.modulus {
            Some(m) => {
                let (p, e) = prime_power(j.q).ok_or(Error::NotPrimePower(j.q))?;
                if m.len() != e as usize + 1 {
                    return Err(Error::Parse(format!("modulus degree does not match q = {}", j.q)));
                }
                Arc::new(FqField::with_modulus(p, m)?)
            }
            None => build_field(j.q)?,
        };
        match (j.values, j.points) {
            (Some(v), None) => Self::from_values(&field, j.n, v),
            (None, Some(pts)) => Self::indicator(&field, j.n, &pts),
            _ => Err(Error::Parse("exactly one of \"values\" or \"points\" is required".into())),
        }
    }
}

/// P F_q^{n-1}: vectors whose first nonzero coordinate is 1, in
/// lexicographic order of element codes.
pub fn field_directions(q: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..n {
        let tail = n - lead - 1;
        for code in 0..(q as usize).pow(tail as u32) {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            let mut c = code;
            for i in (lead + 1..n).rev() {
                v[i] = (c % q as usize) as u64;
                c /= q as usize;
            }
            out.push(v);
        }
    }
    out
}

/// |P F_q^{n-1}| = (q^n - 1)/(q - 1).
pub fn field_projective_size(q: u64, n: usize) -> u64 {
    (q.pow(n as u32) - 1) / (q - 1)
}

/// Points a + t u for t over all field elements in code order.
pub fn field_line(field: &FqField, a: &[u64], u: &[u64]) -> Vec<Vec<u64>> {
    (0..field.q as u32)
        .map(|t| a.iter().zip(u).map(|(&x, &d)| field.add(x as u32, field.mul(t, d as u32)) as u64).collect())
        .collect()
}

/// f*(u) and the base point (lexicographically smallest on its line) of a maximizing line.
pub fn field_maximal(f: &FieldFunction, u: &[u64]) -> (u64, Vec<u64>) {
    let mut seen = vec![false; f.len()];
    let mut best: Option<(u64, usize)> = None;
    for start in 0..f.len() {
        if seen[start] {
            continue;
        }
        let a = f.point(start);
        let mut s = 0;
        for x in field_line(&f.field, &a, u) {
            let i = f.index(&x);
            seen[i] = true;
            s += f.values[i];
        }
        if best.map_or(true, |(b, _)| s > b) {
            best = Some((s, start));
        }
    }
    let (v, start) = best.expect("nonempty");
    (v, f.point(start))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldProfile {
    pub q: u64,
    pub n: usize,
    pub directions: Vec<Vec<u64>>,
    pub values: Vec<u64>,
    pub bases: Vec<Vec<u64>>,
}

impl FieldProfile {
    pub fn w(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn eps_ge(&self, k: u64) -> BigRational {
        let c = self.values.iter().filter(|&&v| v >= k).count();
        BigRational::new(c.into(), self.values.len().into())
    }

    pub fn eps_eq(&self, k: u64) -> BigRational {
        let c = self.values.iter().filter(|&&v| v == k).count();
        BigRational::new(c.into(), self.values.len().into())
    }

    pub fn directions_ge(&self, k: u64) -> Vec<Vec<u64>> {
        self.directions.iter().zip(&self.values).filter(|(_, &v)| v >= k).map(|(d, _)| d.clone()).collect()
    }
}

pub fn field_profile(f: &FieldFunction) -> FieldProfile {
    let directions = field_directions(f.q(), f.n);
    let (values, bases) = directions.iter().map(|u| field_maximal(f, u)).unzip();
    FieldProfile { q: f.q(), n: f.n, directions, values, bases }
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Σ f(x)^n >= (2 - 1/q)^{-n} |P F_q^{n-1}|^{-1} Σ_u f*(u)^n, with the weaker
/// 2^{-n} form reported alongside.
pub fn ffmax_check(f: &FieldFunction) -> BoundReport {
    let prof = field_profile(f);
    ffmax_check_with(f, &prof)
}

pub fn ffmax_check_with(f: &FieldFunction, prof: &FieldProfile) -> BoundReport {
    let n = f.n as u32;
    let q = f.q();
    let lhs: BigInt = f.values.iter().map(|&v| BigInt::from(v).pow(n)).sum();
    let star: BigInt = prof.values.iter().map(|&v| BigInt::from(v).pow(n)).sum();
    let psize = int(prof.directions.len() as u64);
    let base = BigRational::new(BigInt::from(q), BigInt::from(2 * q - 1));
    let constant = num_traits::pow(base, n as usize);
    let rhs = &constant * BigRational::from_integer(star.clone()) / &psize;
    let half = BigRational::new(BigInt::one(), BigInt::from(2u64).pow(n)) * BigRational::from_integer(star) / &psize;
    BoundReport::new(
        "1.8",
        Quantity::from_int(&lhs),
        Quantity::exact(rhs),
        Quantity::exact(constant),
    )
    .param("q", json!(q))
    .param("n", json!(f.n))
    .param("w", json!(prof.w()))
    .param("rhs_half_power_form", json!(rat_string(&half)))
}

fn rat_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// r_k = ceil((mk + 1)/(2q - 1) - 1).
pub fn ladder_r(m: u64, k: u64, q: u64) -> i64 {
    let num = (m * k + 1) as i64 - (2 * q - 1) as i64;
    Integer::div_ceil(&num, &((2 * q - 1) as i64))
}

fn binom_signed(a: i64, b: u64) -> BigInt {
    if a < 0 || (a as u64) < b {
        BigInt::zero()
    } else {
        binom_big(a as u64, b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub q: u64,
    pub n: usize,
    pub m: u64,
    pub w: u64,
    /// r_0..r_w
    pub r: Vec<i64>,
    /// d_0..d_w
    pub d: Vec<i64>,
    pub eps_ge: Vec<String>,
    pub eps_eq: Vec<String>,
    /// Σ_i ε_{≥i} Σ_{j=d_{i-1}+1}^{d_i} binom(j+n-1, n-1)
    pub lhs: String,
    /// Σ_x binom(m f(x) + n - 1, n)
    pub rhs: String,
    /// Σ_k ε_k binom(d_k + n, n)
    pub rearranged: String,
    pub holds: bool,
    pub rearrangement_holds: bool,
    pub strictly_increasing: bool,
    /// lhs / m^n
    pub normalized_lhs: f64,
    /// Σ_k ε_k q^n k^n / ((2q-1)^n n!)
    pub target: f64,
    #[serde(skip)]
    pub exact: LadderExact,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LadderExact {
    pub lhs: BigRational,
    pub rhs: BigInt,
    pub rearranged: BigRational,
    pub normalized_lhs: BigRational,
    pub target: BigRational,
}

fn to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn ladder(f: &FieldFunction, m: u64) -> Result<Ladder> {
    let prof = field_profile(f);
    ladder_with(f, &prof, m)
}

pub fn ladder_with(f: &FieldFunction, prof: &FieldProfile, m: u64) -> Result<Ladder> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let (q, n, w) = (f.q(), f.n, prof.w());
    let r: Vec<i64> = (0..=w).map(|k| ladder_r(m, k, q)).collect();
    let d: Vec<i64> = r.iter().map(|&x| x * q as i64 - 1).collect();
    let eps_ge: Vec<BigRational> = (0..=w).map(|k| prof.eps_ge(k)).collect();
    let eps_eq: Vec<BigRational> = (0..=w).map(|k| prof.eps_eq(k)).collect();
    let mut lhs = BigRational::zero();
    for i in 1..=w as usize {
        let mut inner = BigInt::zero();
        for j in d[i - 1] + 1..=d[i] {
            inner += binom_signed(j + n as i64 - 1, n as u64 - 1);
        }
        lhs += &eps_ge[i] * BigRational::from_integer(inner);
    }
    let rhs: BigInt = f.values.iter().map(|&v| binom_big(m * v + n as u64 - 1, n as u64)).sum();
    let mut rearranged = BigRational::zero();
    for k in 1..=w as usize {
        rearranged += &eps_eq[k] * BigRational::from_integer(binom_signed(d[k] + n as i64, n as u64));
    }
    let mn = BigRational::from_integer(BigInt::from(m).pow(n as u32));
    let normalized = &lhs / &mn;
    let mut fact = BigInt::one();
    for t in 1..=n as u64 {
        fact *= t;
    }
    let denom = BigInt::from(2 * q - 1).pow(n as u32) * fact;
    let mut target = BigRational::zero();
    for k in 1..=w {
        target += &eps_eq[k as usize] * BigRational::new(BigInt::from(q * k).pow(n as u32), denom.clone());
    }
    Ok(Ladder {
        q,
        n,
        m,
        w,
        strictly_increasing: r.windows(2).all(|p| p[0] < p[1]) && d.windows(2).all(|p| p[0] < p[1]),
        r,
        d,
        eps_ge: eps_ge.iter().map(rat_string).collect(),
        eps_eq: eps_eq.iter().map(rat_string).collect(),
        lhs: rat_string(&lhs),
        rhs: rhs.to_string(),
        rearranged: rat_string(&rearranged),
        holds: lhs <= BigRational::from_integer(rhs.clone()),
        rearrangement_holds: lhs == rearranged,
        normalized_lhs: to_f64(&normalized),
        target: to_f64(&target),
        exact: LadderExact { lhs, rhs, rearranged, normalized_lhs: normalized, target },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    /// monomial degree j
    pub degree: u64,
    /// ladder level i with d_{i-1} < j <= d_i
    pub level: u64,
    pub order: i64,
    pub size: usize,
    pub guaranteed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PipelineOutcome {
    /// Only the zero combination of the pool meets the constraints.
    NoPolynomial { pool_size: usize, constraint_rank: usize, dimension_count_ok: bool },
    /// A nonzero Q was found; records which step of the argument breaks.
    Polynomial {
        degree: u64,
        level: u64,
        claim_holds: bool,
        selection_contradiction: bool,
        polynomial: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub ladder: Ladder,
    pub pools: Vec<PoolEntry>,
    pub constraints: usize,
    pub outcome: PipelineOutcome,
}

impl PipelineTrace {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn elems(field: &Arc<FqField>, v: &[u64]) -> Vec<Gf> {
    v.iter().map(|&c| Gf::new(field, c as u32)).collect()
}

fn level_of(d: &[i64], deg: i64) -> Option<usize> {
    (1..d.len()).find(|&i| d[i - 1] < deg && deg <= d[i])
}

fn pipeline_budget(f: &FieldFunction, m: u64) -> Result<()> {
    let q = f.q();
    if q > 3 || f.n != 2 || m > 2 * q + 2 || m == 0 {
        return Err(Error::Budget(format!(
            "pipeline is limited to q <= 3, n = 2, 1 <= m <= 2q + 2 (got q={q}, n={}, m={m})",
            f.n
        )));
    }
    Ok(())
}

fn constraints_of(f: &FieldFunction, m: u64) -> Vec<(Vec<Gf>, u64)> {
    (0..f.len())
        .filter(|&i| f.values[i] > 0)
        .map(|i| (elems(&f.field, &f.point(i)), m * f.values[i]))
        .collect()
}

/// Runs the finite-field argument: builds the pools P(j), looks for a
/// polynomial vanishing to order m f(x), and reports how the argument closes.
pub fn pipeline_demo(f: &FieldFunction, m: u64) -> Result<PipelineTrace> {
    pipeline_budget(f, m)?;
    let prof = field_profile(f);
    let lad = ladder_with(f, &prof, m)?;
    let (q, n) = (f.q(), f.n);
    let field = f.field.clone();
    let mut pools = Vec::new();
    let mut pool: Vec<Exponent> = Vec::new();
    for i in 1..=lad.w as usize {
        let b: Vec<Vec<Gf>> = prof.directions_ge(i as u64).iter().map(|u| elems(&field, u)).collect();
        let r = lad.r[i];
        for j in lad.d[i - 1] + 1..=lad.d[i] {
            let sel = select_monomials(&field, &b, j as u64, r as u64, q)?;
            pools.push(PoolEntry { degree: j as u64, level: i as u64, order: r, size: sel.monomials.len(), guaranteed: sel.guaranteed });
            pool.extend(sel.monomials);
        }
    }
    let cons = constraints_of(f, m);
    let nconstraints: usize = cons.iter().map(|(_, k)| binom_big(k + n as u64 - 1, n as u64).to_usize().unwrap()).sum();
    if pool.is_empty() {
        return Ok(PipelineTrace {
            ladder: lad,
            pools,
            constraints: nconstraints,
            outcome: PipelineOutcome::NoPolynomial { pool_size: 0, constraint_rank: 0, dimension_count_ok: true },
        });
    }
    let outcome = match vanishing_poly(&field, &cons, &pool) {
        None => {
            let rank = constraint_rank(&field, &cons, &pool);
            PipelineOutcome::NoPolynomial { pool_size: pool.len(), constraint_rank: rank, dimension_count_ok: pool.len() <= nconstraints }
        }
        Some(qp) => {
            let deg = qp.degree().expect("nonzero");
            let level = level_of(&lad.d, deg as i64).expect("pool degrees lie on the ladder");
            let qh = qp.highest_degree_part()?;
            let r = lad.r[level] as u64;
            let dirs = prof.directions_ge(level as u64);
            let claim_holds = dirs.iter().all(|u| qh.multiplicity(&elems(&field, u)).is_none_or(|k| k >= r));
            PipelineOutcome::Polynomial {
                degree: deg,
                level: level as u64,
                claim_holds,
                selection_contradiction: claim_holds,
                polynomial: qp.to_text(),
            }
        }
    };
    Ok(PipelineTrace { ladder: lad, pools, constraints: nconstraints, outcome })
}

fn constraint_rank(field: &Arc<FqField>, cons: &[(Vec<Gf>, u64)], pool: &[Exponent]) -> usize {
    let n = pool[0].len();
    let mut rows = Vec::new();
    for (a, k) in cons {
        for j in crate::polymethod::exponents_below(*k, n) {
            rows.push(pool.iter().map(|w| crate::polymethod::monomial_hasse_at(field, w, &j, a)).collect());
        }
    }
    crate::matrices::Matrix::from_rows(field, pool.len(), rows).rank()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub level: u64,
    pub order: i64,
    pub degree_range: (i64, i64),
    pub kernel_dim: usize,
    /// kernel vectors with degree in (d_{i-1}, d_i]
    pub checked: usize,
    pub directions: usize,
    pub holds: bool,
}

/// For each ladder level, finds polynomials of degree in (d_{i-1}, d_i]
/// vanishing to order m f(x) among all monomials of degree <= d_i, and checks
/// mult(Q^H, u) >= r_i for every u with f*(u) >= i.
pub fn claim_check(f: &FieldFunction, m: u64) -> Result<Vec<ClaimCheck>> {
    pipeline_budget(f, m)?;
    let prof = field_profile(f);
    let lad = ladder_with(f, &prof, m)?;
    let field = f.field.clone();
    let n = f.n;
    let cons = constraints_of(f, m);
    let mut out = Vec::new();
    for i in 1..=lad.w as usize {
        let (lo, hi) = (lad.d[i - 1], lad.d[i]);
        if hi <= lo || hi < 0 {
            continue;
        }
        let pool: Vec<Exponent> = (0..=hi as u64).flat_map(|t| exponents_of_weight(t, n)).collect();
        let mut rows = Vec::new();
        for (a, k) in &cons {
            for j in crate::polymethod::exponents_below(*k, n) {
                rows.push(pool.iter().map(|w| crate::polymethod::monomial_hasse_at(&field, w, &j, a)).collect());
            }
        }
        let kernel = if rows.is_empty() {
            crate::matrices::Matrix::<Gf>::identity(&field, pool.len()).rows
        } else {
            crate::matrices::Matrix::from_rows(&field, pool.len(), rows).kernel()
        };
        let r = lad.r[i] as u64;
        let dirs: Vec<Vec<Gf>> = prof.directions_ge(i as u64).iter().map(|u| elems(&field, u)).collect();
        let mut checked = 0;
        let mut holds = true;
        for kv in &kernel {
            let qp = MultiPoly::from_terms(&field, n, pool.iter().cloned().zip(kv.iter().cloned()));
            let Some(deg) = qp.degree() else { continue };
            if (deg as i64) <= lo {
                continue;
            }
            checked += 1;
            let qh = qp.highest_degree_part()?;
            holds &= dirs.iter().all(|u| qh.multiplicity(u).is_none_or(|k| k >= r));
        }
        out.push(ClaimCheck {
            level: i as u64,
            order: lad.r[i],
            degree_range: (lo + 1, hi),
            kernel_dim: kernel.len(),
            checked,
            directions: dirs.len(),
            holds,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_examples() {
        let f5 = build_field(5).unwrap();
        assert_eq!((f5.p, f5.e, f5.modulus.clone()), (5, 1, vec![0, 1]));
        let f4 = build_field(4).unwrap();
        assert_eq!(f4.modulus, vec![1, 1, 1]);
        assert!(matches!(build_field(6), Err(Error::NotPrimePower(6))));
        let f8 = build_field(8).unwrap();
        assert_eq!(f8.modulus, vec![1, 1, 0, 1]);
        for a in 1..4u32 {
            let x = Gf::new(&f4, a);
            assert!(x.clone() * x.inv().unwrap() == Gf::new(&f4, 1));
        }
        // t * t = t + 1 in F_4
        assert_eq!(f4.mul(2, 2), 3);
    }

    #[test]
    fn direction_counts() {
        for q in [2u64, 3, 4, 5] {
            for n in 1..4 {
                assert_eq!(field_directions(q, n).len() as u64, field_projective_size(q, n));
            }
        }
    }

    #[test]
    fn ffmax_examples() {
        let f2 = build_field(2).unwrap();
        let one = FieldFunction::constant(&f2, 2, 1);
        let r = ffmax_check(&one);
        assert_eq!(r.lhs.exact, int(4));
        assert_eq!(r.rhs.exact, BigRational::new(16.into(), 9.into()));
        assert!(r.holds);
        let z = ffmax_check(&FieldFunction::zeros(&f2, 2));
        assert!(z.holds && z.rhs.exact.is_zero());
        let line = FieldFunction::indicator(&f2, 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        let r = ffmax_check(&line);
        assert_eq!(r.lhs.exact, int(2));
        assert_eq!(r.rhs.exact, BigRational::new(8.into(), 9.into()));
    }

    #[test]
    fn ladder_examples() {
        assert_eq!((ladder_r(4, 1, 2), ladder_r(4, 2, 2)), (1, 2));
        let f2 = build_field(2).unwrap();
        let one = FieldFunction::constant(&f2, 2, 1);
        let l = ladder(&one, 4).unwrap();
        assert_eq!(l.r, vec![0, 1, 2]);
        assert_eq!(l.d, vec![-1, 1, 3]);
        assert!(l.holds && l.rearrangement_holds && l.strictly_increasing);
        // ε_{≥1} = ε_{≥2} = 1: Σ_{j=0}^{3} (j + 1) = 10, against 4 binom(5, 2) = 40
        assert_eq!(l.lhs, "10");
        assert_eq!(l.rhs, "40");
        let z = ladder(&FieldFunction::zeros(&f2, 2), 4).unwrap();
        assert_eq!((z.w, z.lhs.as_str(), z.rhs.as_str()), (0, "0", "0"));
    }

    #[test]
    fn pipeline_examples() {
        let f2 = build_field(2).unwrap();
        let one = FieldFunction::constant(&f2, 2, 1);
        let t = pipeline_demo(&one, 4).unwrap();
        assert!(matches!(t.outcome, PipelineOutcome::NoPolynomial { dimension_count_ok: true, .. }));
        let z = pipeline_demo(&FieldFunction::zeros(&f2, 2), 4).unwrap();
        assert!(z.pools.is_empty());
        let line = FieldFunction::indicator(&f2, 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        let t = pipeline_demo(&line, 4).unwrap();
        assert!(!t.pools.is_empty());
        assert!(pipeline_demo(&one, 9).is_err());
    }

    #[test]
    fn claim_harness_runs() {
        let f2 = build_field(2).unwrap();
        let line = FieldFunction::indicator(&f2, 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        let c = claim_check(&line, 6).unwrap();
        assert!(c.iter().all(|x| x.holds));
        assert!(c.iter().any(|x| x.checked > 0));
    }

    #[test]
    fn json_round_trip() {
        let f4 = build_field(4).unwrap();
        let f = FieldFunction::indicator(&f4, 2, &[vec![3, 2]]).unwrap();
        let back = FieldFunction::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }
}
