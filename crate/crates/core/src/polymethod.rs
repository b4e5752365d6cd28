//! Multivariate polynomials over an exact field with Hasse derivatives,
//! multiplicities and evaluation matrices.

use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{binom_big, binom_in, Field, Ring};
use crate::matrices::Matrix;

pub type Exponent = Vec<u64>;

#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<F: Ring> {
    pub ctx: F::Ctx,
    pub n: usize,
    pub terms: BTreeMap<Exponent, F>,
}

pub fn weight(e: &[u64]) -> u64 {
    e.iter().sum()
}

/// Exponent vectors of total weight `w` in n variables, in decreasing
/// lexicographic order (x1^w first).
pub fn exponents_of_weight(w: u64, n: usize) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; n];
    fn rec(i: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Exponent>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
    }
    if n == 0 {
        if w == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(0, w, &mut cur, &mut out);
    out
}

/// Exponents of weight below `m`, grouped by increasing weight.
pub fn exponents_below(m: u64, n: usize) -> Vec<Exponent> {
    (0..m).flat_map(|w| exponents_of_weight(w, n)).collect()
}

/// W_{d,n}: the monomials of degree exactly d.
pub fn w_set(d: u64, n: usize) -> Vec<Exponent> {
    exponents_of_weight(d, n)
}

/// |W_{d,n}| = binom(d+n-1, n-1).
pub fn w_size(d: u64, n: usize) -> u64 {
    use num_traits::ToPrimitive;
    binom_big(d + n as u64 - 1, n as u64 - 1).to_u64().unwrap_or(u64::MAX)
}

impl<F: Ring> MultiPoly<F> {
    pub fn zero(ctx: &F::Ctx, n: usize) -> Self {
        MultiPoly { ctx: ctx.clone(), n, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &F::Ctx, n: usize, c: F) -> Self {
        Self::from_terms(ctx, n, vec![(vec![0; n], c)])
    }

    pub fn monomial(ctx: &F::Ctx, e: Exponent, c: F) -> Self {
        let n = e.len();
        Self::from_terms(ctx, n, vec![(e, c)])
    }

    /// The i-th coordinate function x_i (0-based).
    pub fn var(ctx: &F::Ctx, n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(ctx, e, F::one_in(ctx))
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms(ctx: &F::Ctx, n: usize, terms: impl IntoIterator<Item = (Exponent, F)>) -> Self {
        let mut map: BTreeMap<Exponent, F> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent arity");
            match map.remove(&e) {
                Some(old) => {
                    let s = old + c;
                    if !s.is_zero_elem() {
                        map.insert(e, s);
                    }
                }
                None => {
                    if !c.is_zero_elem() {
                        map.insert(e, c);
                    }
                }
            }
        }
        MultiPoly { ctx: ctx.clone(), n, terms: map }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| weight(e)).max()
    }

    pub fn coeff(&self, e: &[u64]) -> F {
        self.terms.get(e).cloned().unwrap_or_else(|| F::zero_in(&self.ctx))
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::from_terms(&self.ctx, self.n, self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * s.clone())))
    }

    pub fn eval(&self, a: &[F]) -> F {
        let mut acc = F::zero_in(&self.ctx);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in a.iter().zip(e) {
                if k > 0 {
                    t = t * x.pow(k);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Q^{(i)}: x^v maps to prod_t binom(v_t, i_t) x^{v-i}.
    pub fn hasse_derivative(&self, i: &[u64]) -> Self {
        let terms = self.terms.iter().filter_map(|(v, c)| {
            if v.iter().zip(i).any(|(a, b)| a < b) {
                return None;
            }
            let mut coef = c.clone();
            for (a, b) in v.iter().zip(i) {
                coef = coef * binom_in::<F>(&self.ctx, *a, *b);
            }
            Some((v.iter().zip(i).map(|(a, b)| a - b).collect(), coef))
        });
        Self::from_terms(&self.ctx, self.n, terms)
    }

    /// Q(x + a).
    pub fn shift(&self, a: &[F]) -> Self {
        let mut out: Vec<(Exponent, F)> = Vec::new();
        for (v, c) in &self.terms {
            // expand prod_t (x_t + a_t)^{v_t}
            let mut partial: Vec<(Exponent, F)> = vec![(Vec::with_capacity(self.n), c.clone())];
            for t in 0..self.n {
                let mut next = Vec::with_capacity(partial.len() * (v[t] as usize + 1));
                for j in 0..=v[t] {
                    let f = binom_in::<F>(&self.ctx, v[t], j) * a[t].pow(v[t] - j);
                    if f.is_zero_elem() {
                        continue;
                    }
                    for (e, x) in &partial {
                        let mut e = e.clone();
                        e.push(j);
                        next.push((e, x.clone() * f.clone()));
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        Self::from_terms(&self.ctx, self.n, out)
    }

    /// Least weight of a nonvanishing Hasse derivative at `a`; `None` for Q = 0.
    pub fn multiplicity(&self, a: &[F]) -> Option<u64> {
        self.shift(a).terms.keys().map(|e| weight(e)).min()
    }

    /// Q(G_1, ..., G_n) with the G_i over a common set of variables.
    pub fn compose(&self, g: &[MultiPoly<F>]) -> Result<Self> {
        if g.len() != self.n {
            return Err(Error::Structure(format!("composition needs {} polynomials, got {}", self.n, g.len())));
        }
        let m = g.first().map_or(0, |x| x.n);
        if g.iter().any(|x| x.n != m) {
            return Err(Error::Structure("inner polynomials have different arities".into()));
        }
        let mut powers: Vec<Vec<MultiPoly<F>>> = g.iter().map(|x| vec![Self::constant(&self.ctx, m, F::one_in(&self.ctx)), x.clone()]).collect();
        let mut acc = Self::zero(&self.ctx, m);
        for (v, c) in &self.terms {
            let mut t = Self::constant(&self.ctx, m, c.clone());
            for (i, &k) in v.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().clone() * g[i].clone();
                    powers[i].push(next);
                }
                t = t * powers[i][k as usize].clone();
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Q^H: the terms of top total degree.
    pub fn highest_degree_part(&self) -> Result<Self> {
        let d = self.degree().ok_or_else(|| Error::Precondition("highest degree part of the zero polynomial".into()))?;
        Ok(Self::from_terms(
            &self.ctx,
            self.n,
            self.terms.iter().filter(|(e, _)| weight(e) == d).map(|(e, c)| (e.clone(), c.clone())),
        ))
    }

    /// Terms in decreasing total degree, then decreasing lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, &F)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| weight(b.0).cmp(&weight(a.0)).then_with(|| b.0.cmp(a.0)));
        t
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl<F: Ring> Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                let mut s = c.to_string();
                if s.contains(' ') {
                    s = format!("({s})");
                }
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => s.push_str(&format!("*x{}", i + 1)),
                        _ => s.push_str(&format!("*x{}^{}", i + 1, k)),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parses the text format `c*x1^a1*...*xn^an + ...`; coefficients go through
/// `coef`.
pub fn parse_poly<F: Ring>(
    s: &str,
    ctx: &F::Ctx,
    n: usize,
    coef: impl Fn(&str) -> Result<F>,
) -> Result<MultiPoly<F>> {
    let s = s.trim();
    if s == "0" {
        return Ok(MultiPoly::zero(ctx, n));
    }
    let mut terms = Vec::new();
    for term in s.split(" + ") {
        let mut factors = term.trim().split('*');
        let c = coef(factors.next().ok_or_else(|| Error::Parse(format!("empty term in {s:?}")))?)?;
        let mut e = vec![0u64; n];
        for fac in factors {
            let (var, pow) = match fac.split_once('^') {
                Some((v, k)) => (v, k.parse::<u64>().map_err(|_| Error::Parse(format!("bad exponent in {fac:?}")))?),
                None => (fac, 1),
            };
            let idx: usize = var
                .strip_prefix('x')
                .and_then(|i| i.parse().ok())
                .filter(|&i| i >= 1 && i <= n)
                .ok_or_else(|| Error::Parse(format!("bad variable {var:?}")))?;
            e[idx - 1] += pow;
        }
        terms.push((e, c));
    }
    Ok(MultiPoly::from_terms(ctx, n, terms))
}

impl<F: Ring> Add for MultiPoly<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (ctx, n) = (self.ctx.clone(), self.n);
        Self::from_terms(&ctx, n, self.terms.into_iter().chain(o.terms))
    }
}

impl<F: Ring> Neg for MultiPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        let (ctx, n) = (self.ctx.clone(), self.n);
        Self::from_terms(&ctx, n, self.terms.into_iter().map(|(e, c)| (e, -c)))
    }
}

impl<F: Ring> Sub for MultiPoly<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Ring> Mul for MultiPoly<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.push((a.iter().zip(b).map(|(s, t)| s + t).collect(), x.clone() * y.clone()));
            }
        }
        Self::from_terms(&self.ctx, self.n, out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SzReport {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

/// Sum of multiplicities over U^n against d |U|^{n-1}.
pub fn schwartz_zippel_check<F: Ring>(q: &MultiPoly<F>, u: &[F]) -> Result<SzReport> {
    let d = q.degree().ok_or_else(|| Error::Precondition("Schwartz-Zippel needs a nonzero polynomial".into()))?;
    let n = q.n;
    let mut lhs = 0u64;
    let mut idx = vec![0usize; n];
    'outer: loop {
        let a: Vec<F> = idx.iter().map(|&i| u[i].clone()).collect();
        lhs += q.multiplicity(&a).expect("nonzero");
        for t in (0..n).rev() {
            idx[t] += 1;
            if idx[t] < u.len() {
                continue 'outer;
            }
            idx[t] = 0;
        }
        break;
    }
    let rhs = d * (u.len() as u64).pow(n.saturating_sub(1) as u32);
    Ok(SzReport { lhs, rhs, holds: lhs <= rhs })
}

/// EVAL^m(S, W): row (x, j) with wt(j) < m, column f in W, entry f^{(j)}(x).
#[derive(Clone, Debug)]
pub struct EvalMatrix<F: Field> {
    pub matrix: Matrix<F>,
    /// (index into S, derivative order j)
    pub rows: Vec<(usize, Exponent)>,
    pub cols: Vec<Exponent>,
}

/// (x^w)^{(j)}(a) = prod_t binom(w_t, j_t) a_t^{w_t - j_t}.
pub fn monomial_hasse_at<F: Ring>(ctx: &F::Ctx, w: &[u64], j: &[u64], a: &[F]) -> F {
    let mut acc = F::one_in(ctx);
    for t in 0..w.len() {
        if w[t] < j[t] {
            return F::zero_in(ctx);
        }
        acc = acc * binom_in::<F>(ctx, w[t], j[t]) * a[t].pow(w[t] - j[t]);
        if acc.is_zero_elem() {
            return acc;
        }
    }
    acc
}

pub fn build_eval_matrix<F: Field>(ctx: &F::Ctx, s: &[Vec<F>], w: &[Exponent], m: u64) -> EvalMatrix<F> {
    let n = w.first().map(|e| e.len()).or_else(|| s.first().map(|x| x.len())).unwrap_or(0);
    let js = exponents_below(m, n);
    let mut rows = Vec::with_capacity(s.len() * js.len());
    let mut data = Vec::with_capacity(s.len() * js.len());
    for (xi, x) in s.iter().enumerate() {
        for j in &js {
            data.push(w.iter().map(|f| monomial_hasse_at(ctx, f, j, x)).collect());
            rows.push((xi, j.clone()));
        }
    }
    EvalMatrix { matrix: Matrix::from_rows(ctx, w.len(), data), rows, cols: w.to_vec() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialSelection {
    pub monomials: Vec<Exponent>,
    /// ceil(|B| / |P F_q^{n-1}| * |W_{d,n}|)
    pub guaranteed: u64,
}

/// Pivot columns of EVAL^r(B, W_{d,n}): monomials of degree d no nonzero
/// combination of which vanishes to order r on all of B.
pub fn select_monomials<F: Field>(
    ctx: &F::Ctx,
    b: &[Vec<F>],
    d: u64,
    r: u64,
    q: u64,
) -> Result<MonomialSelection> {
    if b.is_empty() {
        return Err(Error::Precondition("direction set is empty".into()));
    }
    if d >= r * q {
        return Err(Error::Precondition(format!("need d < r q, got d={d}, r={r}, q={q}")));
    }
    let n = b[0].len();
    let w = w_set(d, n);
    let ev = build_eval_matrix(ctx, b, &w, r);
    let monomials = ev.matrix.pivot_columns().into_iter().map(|c| w[c].clone()).collect();
    let proj = (q.pow(n as u32) - 1) / (q - 1);
    let num = b.len() as u64 * w.len() as u64;
    Ok(MonomialSelection { monomials, guaranteed: num.div_ceil(proj) })
}

/// A nonzero combination of `pool` vanishing at each point to the required
/// order, or `None` if only the zero combination does.
pub fn vanishing_poly<F: Field>(ctx: &F::Ctx, constraints: &[(Vec<F>, u64)], pool: &[Exponent]) -> Option<MultiPoly<F>> {
    let n = pool.first()?.len();
    let mut rows = Vec::new();
    for (a, m) in constraints {
        for j in exponents_below(*m, n) {
            rows.push(pool.iter().map(|f| monomial_hasse_at(ctx, f, &j, a)).collect());
        }
    }
    let mat = Matrix::from_rows(ctx, pool.len(), rows);
    let k = mat.kernel().into_iter().next()?;
    Some(MultiPoly::from_terms(ctx, n, pool.iter().cloned().zip(k)))
}
