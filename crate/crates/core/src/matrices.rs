//! Dense matrices over exact rings, the matrices M^l_{m,n} with entries
//! z^{<u,v>} mod (z-1)^l, their coefficient matrices, LDU factorization of
//! the Vandermonde matrix over Z[z], and the split of Coeff rows by level.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::ceil_log;
use crate::error::{Error, Result};
use crate::field::{binom_in, Field, Fp, Ring};
use crate::polyquot::{psi_poly, CycloRat, CycloZPoly, TruncPoly};
use crate::unipoly::UniPoly;

/// binom(a, b) mod p by Lucas's theorem on base-p digits.
pub fn lucas_binom(mut a: u64, mut b: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while b > 0 || a > 0 {
        let (ai, bi) = (a % p, b % p);
        if bi > ai {
            return 0;
        }
        acc = acc * small_binom_mod(ai, bi, p) % p;
        a /= p;
        b /= p;
    }
    acc % p
}

fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    let mut num = 1u128;
    let mut den = 1u128;
    for t in 0..b {
        num = num * (a - t) as u128 % p as u128;
        den = den * (t + 1) as u128 % p as u128;
    }
    let inv = crate::ring::inv_mod(den as u64, p).expect("digits below p");
    (num * inv as u128 % p as u128) as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: Ring> {
    pub ctx: R::Ctx,
    pub ncols: usize,
    pub rows: Vec<Vec<R>>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(ctx: &R::Ctx, nrows: usize, ncols: usize) -> Self {
        Matrix { ctx: ctx.clone(), ncols, rows: vec![vec![R::zero_in(ctx); ncols]; nrows] }
    }

    pub fn identity(ctx: &R::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.rows[i][i] = R::one_in(ctx);
        }
        m
    }

    pub fn from_rows(ctx: &R::Ctx, ncols: usize, rows: Vec<Vec<R>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix { ctx: ctx.clone(), ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Matrix { ctx: self.ctx.clone(), ncols: self.nrows(), rows }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.ncols != o.nrows() {
            return Err(Error::Structure(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols,
                o.nrows(),
                o.ncols
            )));
        }
        let mut out = Self::zeros(&self.ctx, self.nrows(), o.ncols);
        for i in 0..self.nrows() {
            for t in 0..self.ncols {
                let a = &self.rows[i][t];
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..o.ncols {
                    out.rows[i][j] = out.rows[i][j].clone() + a.clone() * o.rows[t][j].clone();
                }
            }
        }
        Ok(out)
    }

    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            ctx: ctx.clone(),
            ncols: self.ncols,
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let rows = self.rows.iter().map(|r| cols.iter().map(|&j| r[j].clone()).collect()).collect();
        Matrix { ctx: self.ctx.clone(), ncols: cols.len(), rows }
    }
}

/// ((r1, r2), (c1, c2)) entry A(r1, c1) B(r2, c2), with r1 and c1 the major
/// indices.
pub fn kronecker<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> Result<Matrix<R>> {
    if a.ctx != b.ctx {
        return Err(Error::Structure("kronecker factors live in different rings".into()));
    }
    let mut rows = Vec::with_capacity(a.nrows() * b.nrows());
    for ra in &a.rows {
        for rb in &b.rows {
            let mut row = Vec::with_capacity(a.ncols * b.ncols);
            for x in ra {
                for y in rb {
                    row.push(x.clone() * y.clone());
                }
            }
            rows.push(row);
        }
    }
    Ok(Matrix { ctx: a.ctx.clone(), ncols: a.ncols * b.ncols, rows })
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == m.len() {
                break;
            }
            let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero_elem()) else {
                continue;
            };
            m.swap(r, piv);
            let inv = m[r][c].inv().expect("nonzero pivot");
            for x in m[r].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[c].is_zero_elem() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero_elem() {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        Rref { rows: m, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(&self.ctx, self.ncols);
        for r in &self.rows {
            if e.dim() == self.ncols {
                break;
            }
            e.insert(r);
        }
        e.dim()
    }

    /// Leftmost greedy set of linearly independent columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref().pivots
    }

    /// Basis of {x : A x = 0}, one vector per free column with that entry 1.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let rr = self.rref();
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if rr.pivots.contains(&f) {
                continue;
            }
            let mut x = vec![F::zero_in(&self.ctx); self.ncols];
            x[f] = F::one_in(&self.ctx);
            for (row, &pc) in rr.rows.iter().zip(&rr.pivots) {
                x[pc] = -row[f].clone();
            }
            out.push(x);
        }
        out
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.nrows();
        if n != self.ncols {
            return None;
        }
        let aug: Vec<Vec<F>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut v = r.clone();
                v.extend((0..n).map(|j| if i == j { F::one_in(&self.ctx) } else { F::zero_in(&self.ctx) }));
                v
            })
            .collect();
        let rr = Matrix::from_rows(&self.ctx, 2 * n, aug).rref();
        if rr.pivots.len() < n || rr.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_rows(&self.ctx, n, rr.rows.into_iter().map(|r| r[n..].to_vec()).collect()))
    }
}

/// Incrementally grown row space basis.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    ctx: F::Ctx,
    ncols: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ctx: &F::Ctx, ncols: usize) -> Self {
        Echelon { ctx: ctx.clone(), ncols, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        debug_assert_eq!(v.len(), self.ncols);
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            if v[*piv].is_zero_elem() {
                continue;
            }
            let f = v[*piv].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero_elem() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero_elem())
    }

    /// Adds `v` if it is independent of the current rows; reports whether it was.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let r = self.reduce(v);
        let Some(piv) = r.iter().position(|x| !x.is_zero_elem()) else {
            return false;
        };
        let inv = r[piv].inv().expect("nonzero");
        let r: Vec<F> = r.into_iter().map(|x| x * inv.clone()).collect();
        let _ = &self.ctx;
        self.rows.push((piv, r));
        true
    }
}

pub type FpMatrix = Matrix<Fp>;
pub type CycloMatrix = Matrix<CycloRat>;
pub type TruncMatrix = Matrix<TruncPoly>;
pub type IntPolyMatrix = Matrix<UniPoly<BigInt>>;

pub fn rank_fp(m: &FpMatrix) -> usize {
    m.rank()
}

pub fn rank_cyclo(m: &CycloMatrix) -> usize {
    m.rank()
}

/// All vectors of {0..m-1}^n in lexicographic order.
pub fn grid_vectors(m: u64, n: usize) -> Vec<Vec<u64>> {
    let total = (m as usize).pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0u64; n];
            for i in (0..n).rev() {
                v[i] = (idx % m as usize) as u64;
                idx /= m as usize;
            }
            v
        })
        .collect()
}

/// Vectors of {0..m-1}^n with at least one coordinate nonzero mod p.
pub fn v_set(m: u64, n: usize, p: u64) -> Vec<Vec<u64>> {
    grid_vectors(m, n).into_iter().filter(|v| v.iter().any(|&x| x % p != 0)).collect()
}

fn dot(u: &[u64], v: &[u64]) -> u64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Rows M_{m,n}(u, .) for the given u, entries z^{<u,v>} mod (z-1)^l.
pub fn build_m_rows(us: &[Vec<u64>], m: u64, n: usize, l: usize, p: u64) -> TruncMatrix {
    let cols = grid_vectors(m, n);
    let rows = us
        .iter()
        .map(|u| cols.iter().map(|v| TruncPoly::z_pow(p, l, dot(u, v))).collect())
        .collect();
    Matrix { ctx: (p, l), ncols: cols.len(), rows }
}

pub fn build_m(m: u64, n: usize, l: usize, p: u64) -> TruncMatrix {
    build_m_rows(&grid_vectors(m, n), m, n, l, p)
}

/// Expands each entry into its l coefficients of z^0..z^{l-1}; the l rows of
/// one original row are consecutive.
pub fn coeff_matrix(a: &TruncMatrix) -> FpMatrix {
    let (p, l) = a.ctx;
    let mut rows = Vec::with_capacity(a.nrows() * l);
    for r in &a.rows {
        let zs: Vec<Vec<u64>> = r.iter().map(|x| x.to_z()).collect();
        for i in 0..l {
            rows.push(zs.iter().map(|z| Fp { v: z[i], p }).collect());
        }
    }
    Matrix { ctx: p, ncols: a.ncols, rows }
}

/// The Vandermonde matrix V_m(i, j) = z^{ij} over Z[z].
pub fn vandermonde(m: usize) -> IntPolyMatrix {
    let one = BigInt::one();
    let rows = (0..m)
        .map(|i| (0..m).map(|j| UniPoly::monomial(one.clone(), i * j)).collect())
        .collect();
    Matrix { ctx: (), ncols: m, rows }
}

/// V_m = L D with L unit lower triangular and D upper triangular, by row
/// elimination over Z[z]; each pivot is monic so all divisions are exact.
pub fn ldu_vandermonde(m: usize) -> Result<(IntPolyMatrix, IntPolyMatrix)> {
    let mut d = vandermonde(m);
    let mut l = IntPolyMatrix::identity(&(), m);
    for j in 0..m {
        let piv = d.rows[j][j].clone();
        if piv.lead().map(|c| c.is_one()) != Some(true) {
            return Err(Error::Internal(format!("pivot {j} is not monic: {piv}")));
        }
        for i in j + 1..m {
            let (q, r) = d.rows[i][j].divrem_monic(&piv);
            if !r.is_zero() {
                return Err(Error::Internal(format!("inexact division at ({i},{j})")));
            }
            for c in 0..m {
                let t = d.rows[i][c].clone() - q.clone() * d.rows[j][c].clone();
                d.rows[i][c] = t;
            }
            l.rows[i][j] = q;
        }
    }
    Ok((l, d))
}

/// Inverse of a unit lower triangular matrix by forward substitution.
pub fn unit_lower_inverse<R: Ring>(l: &Matrix<R>) -> Matrix<R> {
    let n = l.nrows();
    let mut inv = Matrix::<R>::identity(&l.ctx, n);
    for i in 0..n {
        for j in 0..i {
            let mut acc = R::zero_in(&l.ctx);
            for t in j..i {
                acc = acc + l.rows[i][t].clone() * inv.rows[t][j].clone();
            }
            inv.rows[i][j] = -acc;
        }
    }
    inv
}

/// (z-1)-adic valuation of D_m(j, j) = prod_{i<j}(z^j - z^i) over F_p:
/// sum_{i=1}^{j} p^{v_p(i)}.
pub fn diagonal_valuation(j: u64, p: u64) -> u64 {
    (1..=j)
        .map(|mut i| {
            let mut pv = 1;
            while i % p == 0 {
                i /= p;
                pv *= p;
            }
            pv
        })
        .sum()
}

/// Number of (j_1..j_n) in {0..m-1}^n whose diagonal valuations sum to at
/// most l-1.
pub fn count_nonzero_diagonals(l: usize, m: u64, n: usize, p: u64) -> u64 {
    let vals: Vec<u64> = (0..m).map(|j| diagonal_valuation(j, p)).collect();
    // counts[s] = number of tuples so far with valuation sum s (capped at l)
    let cap = l;
    let mut counts = vec![0u64; cap];
    if cap == 0 {
        return 0;
    }
    counts[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u64; cap];
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &v in &vals {
                let t = s + v as usize;
                if t < cap {
                    next[t] += c;
                }
            }
        }
        counts = next;
    }
    counts.iter().sum()
}

/// binom(x, n) = x (x-1) ... (x-n+1) / n! for rational x.
pub fn rational_binom(x: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    for t in 0..n {
        acc = acc * (x - BigRational::from_integer(t.into())) / BigRational::from_integer((t + 1).into());
    }
    acc
}

/// ceil(binom(l / ceil(log_p l) + n, n)), with the value 1 at l = 1 and 0 at l = 0.
pub fn rank_bound_formula(l: usize, n: usize, p: u64) -> BigInt {
    if l == 0 {
        return BigInt::zero();
    }
    if l == 1 {
        return BigInt::one();
    }
    let c = ceil_log(p, l as u64);
    let x = BigRational::new(l.into(), c.into()) + BigRational::from_integer(n.into());
    rational_binom(&x, n).ceil().to_integer()
}

/// Row label (u' in V_{m,p}, coefficient index).
pub type RowLabel = (Vec<u64>, usize);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitBasis {
    pub m: u64,
    pub n: usize,
    pub l: usize,
    pub p: u64,
    /// A_1..A_l.
    pub levels: Vec<Vec<RowLabel>>,
    /// The closed-form per-level sizes F(i) - F(i-1) with F = rank_bound_formula.
    pub stated: Vec<i64>,
}

impl SplitBasis {
    pub fn total(&self) -> usize {
        self.levels.iter().map(|a| a.len()).sum()
    }

    /// Z-basis coefficient row for a label at level i (1-based).
    pub fn row(&self, label: &RowLabel, level: usize) -> Vec<Fp> {
        let c = coeff_matrix(&build_m_rows(&[label.0.clone()], self.m, self.n, level, self.p));
        c.rows[label.1].clone()
    }
}

/// Greedy split of the rows of Coeff(M^l_{m,n}(V_{m,p})) by level: A_i holds
/// rows of Coeff(M^i(V)) independent of Coeff(M^{i-1}) and of earlier picks.
pub fn split_basis(m: u64, n: usize, l: usize, p: u64) -> Result<SplitBasis> {
    if (m as usize) < l {
        return Err(Error::Precondition(format!("split basis needs m >= l (m={m}, l={l})")));
    }
    let vs = v_set(m, n, p);
    let all = grid_vectors(m, n);
    let ncols = all.len();
    let mut levels = Vec::with_capacity(l);
    for i in 1..=l {
        let mut ech = Echelon::<Fp>::new(&p, ncols);
        if i > 1 {
            for r in coeff_matrix(&build_m_rows(&all, m, n, i - 1, p)).rows {
                ech.insert(&r);
            }
        }
        let cm = coeff_matrix(&build_m_rows(&vs, m, n, i, p));
        let mut picked = Vec::new();
        for (idx, r) in cm.rows.iter().enumerate() {
            if ech.insert(r) {
                picked.push((vs[idx / i].clone(), idx % i));
            }
        }
        levels.push(picked);
    }
    let f = |i: usize| rank_bound_formula(i, n, p);
    let stated = (1..=l)
        .map(|i| {
            use num_traits::ToPrimitive;
            (f(i) - f(i - 1)).to_i64().unwrap_or(i64::MAX)
        })
        .collect();
    Ok(SplitBasis { m, n, l, p, levels, stated })
}

/// U^{(α)}_d(y): the α-th Hasse derivative of every monomial x^j, j in
/// {0..d-1}^n (lexicographic), evaluated at y.
pub fn eval_row<F: Ring>(d: u64, alpha: &[u64], y: &[F]) -> Vec<F> {
    let ctx = y[0].ctx();
    grid_vectors(d, y.len())
        .iter()
        .map(|j| {
            let mut acc = F::one_in(&ctx);
            for t in 0..y.len() {
                if j[t] < alpha[t] {
                    return F::zero_in(&ctx);
                }
                acc = acc * binom_in::<F>(&ctx, j[t], alpha[t]) * y[t].pow(j[t] - alpha[t]);
            }
            acc
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientRank {
    pub rank_cyclo: usize,
    pub rank_fp: usize,
    pub holds: bool,
}

/// Rank over Q(ζ) of a matrix with entries in Q(ζ)[z]/h against the F_p rank
/// of its image under ψ in F_p[z]/(z-1)^l; ψ(h) must be (z-1)^l.
pub fn quotient_rank_check(a: &Matrix<CycloZPoly>, h: &CycloZPoly, l: usize) -> Result<QuotientRank> {
    let ctx = a.ctx;
    let hd = h.degree().ok_or(Error::DivisionByZero)?;
    let mut crows = Vec::new();
    let mut trows = Vec::new();
    for r in &a.rows {
        let reduced: Vec<CycloZPoly> = r.iter().map(|x| x.divrem(h).1).collect();
        for i in 0..hd {
            crows.push(reduced.iter().map(|x| x.coeff(i)).collect());
        }
        trows.push(reduced.iter().map(|x| psi_poly(x, h, l)).collect::<Result<Vec<_>>>()?);
    }
    let cm: CycloMatrix = Matrix::from_rows(&ctx, a.ncols, crows);
    let tm = Matrix { ctx: (ctx.p, l), ncols: a.ncols, rows: trows };
    let rank_cyclo = cm.rank();
    let rank_fp = coeff_matrix(&tm).rank();
    Ok(QuotientRank { rank_cyclo, rank_fp, holds: rank_cyclo >= rank_fp })
}

/// The constant-entry case: rank over Q(ζ) against the F_p rank of ψ(A).
pub fn quotient_rank_check_const(a: &CycloMatrix) -> Result<QuotientRank> {
    let p = a.ctx.p;
    let psi_rows = a
        .rows
        .iter()
        .map(|r| r.iter().map(|x| x.psi()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let rank_fp = Matrix::from_rows(&p, a.ncols, psi_rows).rank();
    let rank_cyclo = a.rank();
    Ok(QuotientRank { rank_cyclo, rank_fp, holds: rank_cyclo >= rank_fp })
}

/// CSV dump: one line per row, entries printed in the z-monomial basis.
pub fn to_csv<R: Ring>(m: &Matrix<R>) -> String {
    let mut s = String::new();
    for r in &m.rows {
        let cells: Vec<String> = r
            .iter()
            .map(|x| {
                let t = x.to_string();
                if t.contains(',') || t.contains('"') {
                    format!("\"{}\"", t.replace('"', "\"\""))
                } else {
                    t
                }
            })
            .collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyquot::CycloCtx;

    fn fp_matrix(p: u64, rows: &[&[i64]]) -> FpMatrix {
        let ncols = rows[0].len();
        Matrix::from_rows(&p, ncols, rows.iter().map(|r| r.iter().map(|&x| Fp::new(x, p)).collect()).collect())
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binom(5, 2, 2), 0);
        assert_eq!(lucas_binom(7, 0, 3), 1);
        assert_eq!(lucas_binom(10, 3, 3), 0);
        assert_eq!(lucas_binom(6, 3, 5), 0);
        assert_eq!(lucas_binom(6, 2, 7), 1);
    }

    #[test]
    fn m_matrix_examples() {
        let m = build_m(2, 1, 2, 2);
        assert_eq!(to_csv(&m), "1,1\n1,z\n");
        assert_eq!(build_m(1, 3, 4, 3).rows, vec![vec![TruncPoly::one(3, 4)]]);
        let m = build_m(2, 2, 2, 2);
        assert_eq!(m.rows[3][3], TruncPoly::one(2, 2));
        let c = coeff_matrix(&build_m(2, 1, 2, 2));
        let expect = fp_matrix(2, &[&[1, 1], &[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(c, expect);
        assert_eq!(c.rank(), 2);
        let z = Matrix { ctx: (2, 2), ncols: 1, rows: vec![vec![TruncPoly::z_pow(2, 2, 1)]] };
        assert_eq!(coeff_matrix(&z), fp_matrix(2, &[&[0], &[1]]));
    }

    #[test]
    fn ranks() {
        assert_eq!(FpMatrix::identity(&5, 4).rank(), 4);
        let ctx = CycloCtx::new(2, 2);
        let z = CycloRat::zeta_pow(ctx, 1);
        let one = CycloRat::one_in(&ctx);
        let m = Matrix::from_rows(&ctx, 2, vec![vec![one, z.clone()], vec![z.clone(), z.clone() * z]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kronecker_examples() {
        let a = build_m(2, 1, 3, 2);
        let i1 = TruncMatrix::identity(&(2, 3), 1);
        assert_eq!(kronecker(&i1, &a).unwrap(), a);
        assert_eq!(kronecker(&a, &a).unwrap(), build_m(2, 2, 3, 2));
        let b = build_m(2, 1, 3, 3);
        assert!(kronecker(&a, &b).is_err());
    }

    #[test]
    fn ldu_examples() {
        let (l, d) = ldu_vandermonde(2).unwrap();
        let p = |v: &[i64]| UniPoly::<BigInt>::from_i64s(&(), v);
        assert_eq!(l.rows, vec![vec![p(&[1]), p(&[])], vec![p(&[1]), p(&[1])]]);
        assert_eq!(d.rows, vec![vec![p(&[1]), p(&[1])], vec![p(&[]), p(&[-1, 1])]]);
        let (l, d) = ldu_vandermonde(1).unwrap();
        assert_eq!((l.rows[0][0].clone(), d.rows[0][0].clone()), (p(&[1]), p(&[1])));
        let (l, d) = ldu_vandermonde(3).unwrap();
        assert_eq!(l.mul(&d).unwrap(), vandermonde(3));
        let d22 = p(&[-1, 0, 1]) * p(&[0, -1, 1]);
        assert_eq!(d.rows[2][2], d22);
        let li = unit_lower_inverse(&l);
        assert_eq!(li.mul(&l).unwrap(), IntPolyMatrix::identity(&(), 3));
    }

    #[test]
    fn valuations() {
        let v: Vec<u64> = (0..4).map(|j| diagonal_valuation(j, 2)).collect();
        assert_eq!(v, vec![0, 1, 3, 4]);
        assert_eq!(count_nonzero_diagonals(4, 4, 1, 2), 3);
        assert_eq!(count_nonzero_diagonals(2, 2, 1, 2), 2);
    }

    #[test]
    fn rank_formula_examples() {
        assert_eq!(rank_bound_formula(4, 1, 2), BigInt::from(3));
        assert_eq!(rank_bound_formula(8, 1, 2), BigInt::from(4));
        assert_eq!(rank_bound_formula(2, 1, 2), BigInt::from(3));
        assert_eq!(rank_bound_formula(1, 3, 2), BigInt::from(1));
    }

    #[test]
    fn split_examples() {
        let s = split_basis(2, 1, 2, 2).unwrap();
        assert_eq!(s.levels.iter().map(|a| a.len()).collect::<Vec<_>>(), vec![1, 1]);
        let s = split_basis(3, 2, 1, 3).unwrap();
        assert_eq!(s.total(), 1);
        let s = split_basis(4, 1, 4, 2).unwrap();
        assert!(s.total() >= 3);
        assert!(split_basis(2, 1, 3, 2).is_err());
    }

    #[test]
    fn eval_row_examples() {
        let y = [Fp::new(3, 7), Fp::new(2, 7)];
        let r = eval_row(2, &[0, 0], &y);
        assert_eq!(r.iter().map(|x| x.v).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        let r = eval_row(2, &[1], &[Fp::new(4, 7)]);
        assert_eq!(r.iter().map(|x| x.v).collect::<Vec<_>>(), vec![0, 1]);
        let ctx = CycloCtx::new(2, 2);
        let r = eval_row(2, &[1], &[CycloRat::zeta_pow(ctx, 1)]);
        assert_eq!(r, vec![CycloRat::zero(ctx), CycloRat::one_in(&ctx)]);
    }

    #[test]
    fn quotient_rank_examples() {
        let ctx = CycloCtx::new(2, 2);
        let c = |v: i64| CycloRat::from_i64s(ctx, &[v]);
        let h = CycloZPoly::new(&ctx, vec![c(1), c(-2), c(1)]);
        let id = Matrix::<CycloZPoly>::identity(&ctx, 3);
        let q = quotient_rank_check(&id, &h, 2).unwrap();
        assert_eq!((q.rank_cyclo, q.rank_fp, q.holds), (3, 3, true));
        let two = Matrix::from_rows(&ctx, 1, vec![vec![c(2)]]);
        let q = quotient_rank_check_const(&two).unwrap();
        assert_eq!((q.rank_cyclo, q.rank_fp, q.holds), (1, 0, true));
    }

    #[test]
    fn kernel_and_inverse() {
        let m = fp_matrix(5, &[&[1, 2, 3], &[2, 4, 2]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        let col = Matrix::from_rows(&5, 1, k[0].iter().map(|x| vec![*x]).collect());
        assert!(m.mul(&col).unwrap().rows.iter().all(|r| r[0].v == 0));
        let a = fp_matrix(7, &[&[1, 2], &[3, 4]]);
        let ai = a.inverse().unwrap();
        assert_eq!(a.mul(&ai).unwrap(), FpMatrix::identity(&7, 2));
        assert!(fp_matrix(7, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
