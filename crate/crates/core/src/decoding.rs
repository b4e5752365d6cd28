//! Recovering f(z^{u'}) mod (z-1)^l from Hasse-derivative evaluations of f
//! at root-of-unity points along a line, and the random-rotation rank
//! experiment built on it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{binom_big, binom_in, Ring};
use crate::geometry::{maximal_profile, GridFunction, Line};
use crate::matrices::{coeff_matrix, build_m_rows, eval_row, grid_vectors, quotient_rank_check_const, split_basis, rank_bound_formula, CycloMatrix, FpMatrix, Matrix};
use crate::polymethod::{exponents_below, monomial_hasse_at, weight, Exponent};
use crate::polyquot::{CycloCtx, CycloRat, CycloZPoly, TruncPoly};
use crate::projective::canonicalize;
use crate::ring::{factorize, inverse_mod_pk, prime_power, random_gl_with, ResidueVector};
use crate::unipoly::UniPoly;

/// A line a + λu' in (Z/p^kZ)^n with a derivative budget π(λ) per point and
/// an integer lift u' of its direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RichLineWeights {
    pub p: u64,
    pub k: u32,
    pub base: Vec<u64>,
    pub lift: Vec<u64>,
    /// π at the point base + λ·lift, for λ = 0..p^k-1.
    pub pi: Vec<u64>,
}

impl RichLineWeights {
    /// Lift taken as the canonical representatives of the line's direction.
    pub fn from_line(line: &Line, pi: impl Fn(&[u64]) -> u64) -> Result<Self> {
        Self::with_lift(line, line.dir.coords().to_vec(), pi)
    }

    /// `lift` must reduce mod p^k to a unit multiple of the line's direction.
    pub fn with_lift(line: &Line, lift: Vec<u64>, pi: impl Fn(&[u64]) -> u64) -> Result<Self> {
        let q = line.modulus();
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let red = ResidueVector { modulus: q, coords: lift.iter().map(|x| x % q).collect() };
        let fm = factorize(q)?;
        if canonicalize(&red, &fm)? != line.dir {
            return Err(Error::Precondition(format!("lift {lift:?} does not reduce to the line direction")));
        }
        let mut rw = RichLineWeights { p, k, base: line.base.coords.clone(), lift, pi: Vec::new() };
        rw.pi = (0..q).map(|t| pi(&rw.point(t))).collect();
        Ok(rw)
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn point(&self, lambda: u64) -> Vec<u64> {
        let q = self.order();
        self.base.iter().zip(&self.lift).map(|(&a, &u)| (a + lambda * (u % q)) % q).collect()
    }

    pub fn total(&self) -> u64 {
        self.pi.iter().sum()
    }

    /// π reduced to sum exactly l, taking from the largest λ first.
    pub fn truncated(&self, l: u64) -> Result<Vec<u64>> {
        let total = self.total();
        if total < l {
            return Err(Error::Precondition(format!("line weight {total} is below l = {l}")));
        }
        let mut pi = self.pi.clone();
        let mut excess = total - l;
        for x in pi.iter_mut().rev() {
            let cut = excess.min(*x);
            *x -= cut;
            excess -= cut;
        }
        Ok(pi)
    }
}

/// b_{w,α}: coefficient of s^w in prod_i (C_i(γ+s) - C_i(γ))^{α_i} with
/// C_i(y) = y^{u'_i}, for every α of weight at most w.
pub fn composition_hasse_coeffs(lift: &[u64], w: u64, gamma: &CycloRat) -> BTreeMap<Exponent, CycloRat> {
    let ctx = gamma.ctx;
    let len = w as usize + 1;
    let zero = CycloRat::zero(ctx);
    let series_mul = |a: &[CycloRat], b: &[CycloRat]| -> Vec<CycloRat> {
        let mut out = vec![zero.clone(); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        out
    };
    let mut one = vec![zero.clone(); len];
    one[0] = CycloRat::one_in(&ctx);
    // powers[i][e] = D_i(s)^e truncated
    let powers: Vec<Vec<Vec<CycloRat>>> = lift
        .iter()
        .map(|&u| {
            let mut d = vec![zero.clone(); len];
            for (j, dj) in d.iter_mut().enumerate().skip(1) {
                if j as u64 <= u {
                    *dj = binom_in::<CycloRat>(&ctx, u, j as u64) * gamma.pow(u - j as u64);
                }
            }
            let mut pw = vec![one.clone()];
            for _ in 0..w {
                let next = series_mul(pw.last().unwrap(), &d);
                pw.push(next);
            }
            pw
        })
        .collect();
    let n = lift.len();
    let mut out = BTreeMap::new();
    for alpha in exponents_below(w + 1, n) {
        let mut s = one.clone();
        for (i, &a) in alpha.iter().enumerate() {
            s = series_mul(&s, &powers[i][a as usize]);
        }
        out.insert(alpha, s[w as usize].clone());
    }
    out
}

fn confluent_vandermonde(nodes: &[(CycloRat, u64)]) -> Result<CycloMatrix> {
    let ctx = nodes.first().map(|n| n.0.ctx).ok_or_else(|| Error::Precondition("no interpolation nodes".into()))?;
    let dim: u64 = nodes.iter().map(|n| n.1).sum();
    let mut rows = Vec::with_capacity(dim as usize);
    for (a, beta) in nodes {
        for j in 0..*beta {
            rows.push((0..dim).map(|e| if e < j { CycloRat::zero(ctx) } else { binom_in::<CycloRat>(&ctx, e, j) * a.pow(e - j) }).collect());
        }
    }
    Ok(Matrix::from_rows(&ctx, dim as usize, rows))
}

/// Hermite basis polynomials e_{i,j}(z) of degree below Σβ with
/// e_{i,j}^{(j')}(a_{i'}) = [i = i', j = j'].
pub fn hermite_basis(nodes: &[(CycloRat, u64)]) -> Result<Vec<Vec<CycloZPoly>>> {
    let v = confluent_vandermonde(nodes)?;
    let ctx = v.ctx;
    let inv = v.inverse().ok_or(Error::Singular)?;
    let mut out = Vec::with_capacity(nodes.len());
    let mut col = 0;
    for (_, beta) in nodes {
        let mut per = Vec::with_capacity(*beta as usize);
        for _ in 0..*beta {
            per.push(UniPoly::new(&ctx, inv.rows.iter().map(|r| r[col].clone()).collect()));
            col += 1;
        }
        out.push(per);
    }
    Ok(out)
}

/// h(z) = prod (z - a_i)^{β_i}.
pub fn node_modulus(ctx: &CycloCtx, nodes: &[(CycloRat, u64)]) -> CycloZPoly {
    let mut h = CycloZPoly::one_in(ctx);
    for (a, beta) in nodes {
        let lin = UniPoly::new(ctx, vec![-a.clone(), CycloRat::one_in(ctx)]);
        for _ in 0..*beta {
            h = h * lin.clone();
        }
    }
    h
}

/// The residue mod h = prod (y - a_i)^{β_i} whose Hasse derivatives of order
/// below β_i at a_i are `evals[i]`. Returns (residue, h).
pub fn hermite_recover(nodes: &[(CycloRat, u64)], evals: &[Vec<CycloRat>]) -> Result<(CycloZPoly, CycloZPoly)> {
    if nodes.len() != evals.len() || nodes.iter().zip(evals).any(|(n, e)| n.1 as usize != e.len()) {
        return Err(Error::Structure("evaluation counts do not match node multiplicities".into()));
    }
    let basis = hermite_basis(nodes)?;
    let ctx = nodes[0].0.ctx;
    let mut acc = CycloZPoly::zero(&ctx);
    for (per, ev) in basis.iter().zip(evals) {
        for (e, v) in per.iter().zip(ev) {
            acc = acc + e.scale(v);
        }
    }
    Ok((acc, node_modulus(&ctx, nodes)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateTerm {
    pub lambda: u64,
    pub point: Vec<u64>,
    pub alpha: Exponent,
    pub c: CycloZPoly,
}

/// Coefficients c_{λ,α} in Q(ζ)[z] with
/// ψ(Σ c_{λ,α} f^{(α)}(ζ^{a+λu'})) = f(z^{u'}) in F_p[z]/(z-1)^l.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodingCertificate {
    pub weights: RichLineWeights,
    pub l: u64,
    /// π after truncation to sum l.
    pub pi: Vec<u64>,
    pub h: CycloZPoly,
    pub terms: Vec<CertificateTerm>,
    /// Exponent bound d the certificate was verified against.
    pub verified_below: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub monomials_checked: usize,
    pub failures: Vec<Exponent>,
}

impl CertificateCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn zeta_point(ctx: CycloCtx, x: &[u64]) -> Vec<CycloRat> {
    x.iter().map(|&c| CycloRat::zeta_pow(ctx, c as i64)).collect()
}

impl DecodingCertificate {
    pub fn ctx(&self) -> CycloCtx {
        CycloCtx::new(self.weights.p, self.weights.k)
    }

    /// Σ c_{λ,α}(z) (x^v)^{(α)}(ζ^{a+λu'}), evaluated afresh.
    pub fn combine(&self, v: &[u64]) -> CycloZPoly {
        let ctx = self.ctx();
        let mut acc = CycloZPoly::zero(&ctx);
        for t in &self.terms {
            let val = monomial_hasse_at::<CycloRat>(&ctx, v, &t.alpha, &zeta_point(ctx, &t.point));
            if !val.is_zero() {
                acc = acc + t.c.scale(&val);
            }
        }
        acc
    }

    /// Replays the identity for every monomial x^v with all v_t < d.
    /// A combination that is not p-integral is an internal error.
    pub fn verify(&self, d: u64) -> Result<CertificateCheck> {
        let p = self.weights.p;
        let l = self.l as usize;
        let mut failures = Vec::new();
        let vs = grid_vectors(d, self.weights.n());
        for v in &vs {
            let s = self.combine(v);
            if let Some(bad) = s.c.iter().find(|x| !x.is_p_integral()) {
                return Err(Error::Internal(format!("decoded value for x^{v:?} has coefficient {bad} that is not p-integral")));
            }
            let z: Vec<u64> = s.c.iter().map(|x| x.psi().map(|f| f.v)).collect::<Result<_>>()?;
            let got = TruncPoly::from_z(p, l, &z);
            let e: u64 = v.iter().zip(&self.weights.lift).map(|(a, b)| a * b).sum();
            if got != TruncPoly::z_pow(p, l, e) {
                failures.push(v.clone());
            }
        }
        Ok(CertificateCheck { monomials_checked: vs.len(), failures })
    }

    pub fn to_json(&self) -> Value {
        let rat_vec = |x: &CycloRat| x.c.iter().map(|r| r.to_string()).collect::<Vec<_>>();
        let poly = |q: &CycloZPoly| q.c.iter().map(rat_vec).collect::<Vec<_>>();
        json!({
            "p": self.weights.p,
            "k": self.weights.k,
            "l": self.l,
            "base": self.weights.base,
            "lift": self.weights.lift,
            "pi": self.pi,
            "nodes": (0..self.pi.len() as u64).filter(|&t| self.pi[t as usize] > 0).map(|t| json!({
                "lambda": t,
                "point": self.weights.point(t),
                "multiplicity": self.pi[t as usize],
            })).collect::<Vec<_>>(),
            "h": poly(&self.h),
            "coefficients": self.terms.iter().map(|t| json!({
                "lambda": t.lambda,
                "alpha": t.alpha,
                "c": poly(&t.c),
            })).collect::<Vec<_>>(),
            "verified_below": self.verified_below,
        })
    }
}

/// Builds the certificate and verifies it on all monomials with exponents
/// below `d`; a failed replay is an internal error.
pub fn decode_rich_line(rw: &RichLineWeights, l: u64, d: u64) -> Result<DecodingCertificate> {
    let cert = build_certificate(rw, l)?;
    let check = cert.verify(d)?;
    if !check.holds() {
        return Err(Error::Internal(format!("decoding identity failed for monomials {:?}", check.failures)));
    }
    Ok(DecodingCertificate { verified_below: d, ..cert })
}

fn build_certificate(rw: &RichLineWeights, l: u64) -> Result<DecodingCertificate> {
    if l == 0 {
        return Err(Error::Precondition("l must be positive".into()));
    }
    let pi = rw.truncated(l)?;
    let ctx = CycloCtx::new(rw.p, rw.k);
    let n = rw.n();
    let lambdas: Vec<u64> = (0..pi.len() as u64).filter(|&t| pi[t as usize] > 0).collect();
    let nodes: Vec<(CycloRat, u64)> =
        lambdas.iter().map(|&t| (CycloRat::zeta_pow(ctx, t as i64), pi[t as usize])).collect();
    let basis = hermite_basis(&nodes)?;
    let mut terms = Vec::new();
    for (idx, &t) in lambdas.iter().enumerate() {
        let beta = pi[t as usize];
        let gamma = &nodes[idx].0;
        let b: Vec<BTreeMap<Exponent, CycloRat>> =
            (0..beta).map(|w| composition_hasse_coeffs(&rw.lift, w, gamma)).collect();
        for alpha in exponents_below(beta, n) {
            // the base point enters as the scaling x -> ζ^a x
            let ad: u64 = rw.base.iter().zip(&alpha).map(|(a, b)| a * b).sum();
            let shift = CycloRat::zeta_pow(ctx, ad as i64);
            let mut c = CycloZPoly::zero(&ctx);
            for w in weight(&alpha)..beta {
                let coef = b[w as usize][&alpha].clone();
                if coef.is_zero() {
                    continue;
                }
                c = c + basis[idx][w as usize].scale(&(coef * shift.clone()));
            }
            if !c.is_zero() {
                terms.push(CertificateTerm { lambda: t, point: rw.point(t), alpha, c });
            }
        }
    }
    Ok(DecodingCertificate { weights: rw.clone(), l, pi, h: node_modulus(&ctx, &nodes), terms, verified_below: 0 })
}

/// Q(ζ)-combinations of the rows U^{(α)}_m(ζ^x), x on the line, whose
/// ψ-images are the rows of Coeff(M^l_{m,n}(u')).
#[derive(Clone, Debug, PartialEq)]
pub struct MRowDecoding {
    /// (point, α) labels of the combined rows.
    pub sources: Vec<(Vec<u64>, Exponent)>,
    /// weights[i][s]: coefficient of source s in the combination for row i.
    pub weights: Vec<Vec<CycloRat>>,
    /// The combined rows over Q(ζ).
    pub rows: Vec<Vec<CycloRat>>,
    /// ψ of `rows`, equal to Coeff(M^l_{m,n}(u')).
    pub target: FpMatrix,
}

/// The row comparison against Coeff(M^l) replays the decoding identity on
/// every monomial of the grid, so the certificate is not verified twice.
pub fn decode_m_row(rw: &RichLineWeights, l: u64, m: u64) -> Result<MRowDecoding> {
    let cert = build_certificate(rw, l)?;
    let ctx = cert.ctx();
    let n = rw.n();
    let sources: Vec<(Vec<u64>, Exponent)> = cert.terms.iter().map(|t| (t.point.clone(), t.alpha.clone())).collect();
    let src_rows: Vec<Vec<CycloRat>> =
        sources.iter().map(|(x, a)| eval_row(m, a, &zeta_point(ctx, x))).collect();
    let ncols = grid_vectors(m, n).len();
    let target = coeff_matrix(&build_m_rows(&[rw.lift.clone()], m, n, l as usize, rw.p));
    let mut weights = Vec::with_capacity(l as usize);
    let mut rows = Vec::with_capacity(l as usize);
    for i in 0..l as usize {
        let wi: Vec<CycloRat> = cert.terms.iter().map(|t| t.c.coeff(i)).collect();
        let mut row = vec![CycloRat::zero(ctx); ncols];
        for (w, src) in wi.iter().zip(&src_rows) {
            if w.is_zero() {
                continue;
            }
            for (r, s) in row.iter_mut().zip(src) {
                *r = r.clone() + w.clone() * s.clone();
            }
        }
        if let Some(bad) = row.iter().find(|x| !x.is_p_integral()) {
            return Err(Error::Internal(format!("decoded row {i} has entry {bad} that is not p-integral")));
        }
        let img: Vec<u64> = row.iter().map(|x| x.psi().map(|f| f.v)).collect::<Result<_>>()?;
        if img.iter().zip(&target.rows[i]).any(|(a, b)| *a != b.v) {
            return Err(Error::Internal(format!("row {i} of the decoded matrix does not match Coeff(M^{l})")));
        }
        weights.push(wi);
        rows.push(row);
    }
    Ok(MRowDecoding { sources, weights, rows, target })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankTrial {
    pub trial: usize,
    /// rank over Q(ζ) of U_G
    pub rank_u: usize,
    /// rank over Q(ζ) of the decoded combinations T·U_G
    pub rank_tu: usize,
    /// rank over F_p of M_G = ψ(T·U_G)
    pub rank_m: usize,
    pub quotient_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankExperiment {
    pub p: u64,
    pub k: u32,
    pub n: usize,
    pub m: u64,
    pub seed: u64,
    pub w: u64,
    /// ε_{≥i} for i = 1..w
    pub eps_ge: Vec<String>,
    /// |A_j| from the greedy split, j = 1..mw
    pub split_sizes: Vec<usize>,
    /// Σ_i ε_{≥i} Σ_{j=r_{i-1}+1}^{r_i} |A_j| with the greedy split sizes
    pub bound_split: String,
    /// the same sum with |A_j| replaced by the closed-form increments
    pub bound_closed_form: String,
    /// Σ_x binom(m f(x) + n - 1, n), an upper bound on rank U_G
    pub rank_cap: String,
    pub mean_rank: String,
    pub mean_rank_f64: f64,
    pub bound_split_f64: f64,
    pub bound_closed_form_f64: f64,
    pub meets_split_bound: bool,
    pub meets_closed_form_bound: bool,
    pub all_quotient_hold: bool,
    pub trials: Vec<RankTrial>,
}

/// Desk-scale caps for the experiment.
pub const MAX_ORDER: u64 = 4;
pub const MAX_VARS: usize = 2;
pub const MAX_M: u64 = 2;

fn rat_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Random-rotation rank experiment over Z/p^kZ: for each trial draw G, decode
/// the Coeff rows for every direction of G·f, and compare the mean F_p rank of
/// M_G with the expected-rank lower bound.
pub fn expected_rank_experiment(f: &GridFunction, m: u64, trials: usize, seed: u64) -> Result<RankExperiment> {
    let q = f.modulus;
    let (p, k) = prime_power(q).ok_or_else(|| {
        Error::Precondition(format!("the rank experiment runs over Z/p^kZ only, got N = {q}"))
    })?;
    if q > MAX_ORDER || f.n > MAX_VARS || m > MAX_M || m == 0 {
        return Err(Error::Budget(format!(
            "rank experiment is limited to p^k <= {MAX_ORDER}, n <= {MAX_VARS}, 1 <= m <= {MAX_M}"
        )));
    }
    let n = f.n;
    let prof = maximal_profile(f)?;
    let w = prof.w();
    let mw = m * w;
    let ctx = CycloCtx::new(p, k);
    let eps_ge: Vec<BigRational> = (1..=w).map(|i| prof.eps_ge(i)).collect();
    let rank_cap: BigInt = f.values.iter().map(|&v| binom_big(m * v + n as u64 - 1, n as u64)).sum();

    let (split_sizes, bound_split, bound_closed) = if w == 0 {
        (Vec::new(), BigRational::zero(), BigRational::zero())
    } else {
        let split = split_basis(mw, n, mw as usize, p)?;
        let sizes: Vec<usize> = split.levels.iter().map(|a| a.len()).collect();
        let mut bs = BigRational::zero();
        let mut bc = BigRational::zero();
        for i in 1..=w {
            for j in (m * (i - 1) + 1)..=(m * i) {
                let a = BigRational::from_integer(sizes[j as usize - 1].into());
                let c = BigRational::from_integer(
                    rank_bound_formula(j as usize, n, p) - rank_bound_formula(j as usize - 1, n, p),
                );
                bs += &eps_ge[i as usize - 1] * a;
                bc += &eps_ge[i as usize - 1] * c;
            }
        }
        (sizes, bs, bc)
    };
    if (mw as usize).pow(n as u32) > 4000 {
        return Err(Error::Budget(format!("matrix dimension {} exceeds 4000", (mw as usize).pow(n as u32))));
    }

    let lifts = if w == 0 { Vec::new() } else { crate::matrices::v_set(mw, n, p) };
    let fm = factorize(q)?;
    let mut results = Vec::with_capacity(trials);
    for t in 0..trials {
        if w == 0 {
            results.push(RankTrial { trial: t, rank_u: 0, rank_tu: 0, rank_m: 0, quotient_holds: true });
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let g = random_gl_with(n, p, k, &mut rng);
        let ginv = inverse_mod_pk(&g, p, k).ok_or(Error::Singular)?;
        let fg = f.act(&ginv, q)?;
        let mf = |x: &[u64]| m * fg.get(x);

        let mut u_rows = Vec::new();
        for idx in 0..fg.len() {
            let x = fg.point(idx);
            for alpha in exponents_below(mf(&x), n) {
                u_rows.push(eval_row(mw, &alpha, &zeta_point(ctx, &x)));
            }
        }
        let ncols = (mw as usize).pow(n as u32);
        let u_mat: CycloMatrix = Matrix::from_rows(&ctx, ncols, u_rows);

        let gprof = maximal_profile(&fg)?;
        let mut tu_rows = Vec::new();
        for e in &gprof.entries {
            if e.value == 0 {
                continue;
            }
            for lift in &lifts {
                let red = ResidueVector { modulus: q, coords: lift.iter().map(|x| x % q).collect() };
                if canonicalize(&red, &fm)? != e.dir {
                    continue;
                }
                let rw = RichLineWeights::with_lift(&e.line, lift.clone(), |x| mf(x))?;
                for j in 1..=m * e.value {
                    tu_rows.extend(decode_m_row(&rw, j, mw)?.rows);
                }
            }
        }
        let tu: CycloMatrix = Matrix::from_rows(&ctx, ncols, tu_rows);
        let qr = quotient_rank_check_const(&tu)?;
        let rank_u = u_mat.rank();
        results.push(RankTrial {
            trial: t,
            rank_u,
            rank_tu: qr.rank_cyclo,
            rank_m: qr.rank_fp,
            quotient_holds: qr.holds && rank_u >= qr.rank_cyclo,
        });
    }
    let total: usize = results.iter().map(|r| r.rank_m).sum();
    let mean = if trials == 0 {
        BigRational::zero()
    } else {
        BigRational::new(total.into(), trials.into())
    };
    Ok(RankExperiment {
        p,
        k,
        n,
        m,
        seed,
        w,
        eps_ge: eps_ge.iter().map(|e| e.to_string()).collect(),
        split_sizes,
        bound_split: bound_split.to_string(),
        bound_closed_form: bound_closed.to_string(),
        rank_cap: rank_cap.to_string(),
        mean_rank: mean.to_string(),
        mean_rank_f64: rat_f64(&mean),
        bound_split_f64: rat_f64(&bound_split),
        bound_closed_form_f64: rat_f64(&bound_closed),
        meets_split_bound: mean >= bound_split,
        meets_closed_form_bound: mean >= bound_closed,
        all_quotient_hold: results.iter().all(|r| r.quotient_holds),
        trials: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::Direction;

    fn line(q: u64, base: &[i64], dir: &[i64]) -> Line {
        let fm = factorize(q).unwrap();
        let d: Direction = canonicalize(&ResidueVector::new(q, dir), &fm).unwrap();
        Line::new(ResidueVector::new(q, base), d)
    }

    fn cy(ctx: CycloCtx, v: &[i64]) -> CycloRat {
        CycloRat::from_i64s(ctx, v)
    }

    #[test]
    fn composition_examples() {
        let ctx = CycloCtx::new(3, 1);
        let one = CycloRat::one_in(&ctx);
        let b = composition_hasse_coeffs(&[2], 1, &one);
        assert_eq!(b[&vec![1]], cy(ctx, &[2]));
        assert!(b[&vec![0]].is_zero());
        let b = composition_hasse_coeffs(&[2, 5], 0, &one);
        assert_eq!(b.len(), 1);
        assert_eq!(b[&vec![0, 0]], one);
        let c = CycloRat::zeta_pow(ctx, 1);
        assert_eq!(composition_hasse_coeffs(&[1], 1, &c)[&vec![1]], one);
    }

    #[test]
    fn hermite_examples() {
        let ctx = CycloCtx::new(2, 1);
        let one = CycloRat::one_in(&ctx);
        let (c0, c1) = (cy(ctx, &[3]), cy(ctx, &[5]));
        let (r, h) = hermite_recover(&[(one.clone(), 2)], &[vec![c0.clone(), c1.clone()]]).unwrap();
        // c0 + c1 (z - 1)
        assert_eq!(r, UniPoly::new(&ctx, vec![c0 - c1.clone(), c1]));
        assert_eq!(h, UniPoly::from_i64s(&ctx, &[1, -2, 1]));
        let m1 = CycloRat::zeta_pow(ctx, 1);
        let nodes = [(one.clone(), 1), (m1.clone(), 1)];
        let (r, _) = hermite_recover(&nodes, &[vec![one.clone()], vec![-one.clone()]]).unwrap();
        assert_eq!(r, UniPoly::from_i64s(&ctx, &[0, 1]));
        let (r, _) = hermite_recover(&nodes, &[vec![one.clone()], vec![one.clone()]]).unwrap();
        assert_eq!(r, UniPoly::from_i64s(&ctx, &[1]));
        let dup = [(one.clone(), 1), (one.clone(), 1)];
        assert!(matches!(hermite_recover(&dup, &[vec![one.clone()], vec![one]]), Err(Error::Singular)));
    }

    #[test]
    fn rich_line_examples() {
        let l = line(2, &[0], &[1]);
        let rw = RichLineWeights::from_line(&l, |_| 1).unwrap();
        let cert = decode_rich_line(&rw, 2, 3).unwrap();
        let ctx = cert.ctx();
        let s = cert.combine(&[1]);
        assert_eq!(s.c.iter().map(|x| x.psi().unwrap().v).collect::<Vec<_>>(), vec![0, 1]);
        let s = cert.combine(&[0]);
        assert_eq!(s, CycloZPoly::one_in(&ctx));
        let s = cert.combine(&[2]);
        let t = TruncPoly::from_z(2, 2, &s.c.iter().map(|x| x.psi().unwrap().v).collect::<Vec<_>>());
        assert_eq!(t, TruncPoly::one(2, 2));
        assert!(cert.to_json()["coefficients"].as_array().unwrap().len() >= 2);
    }

    #[test]
    fn truncation_takes_from_the_end() {
        let l = line(3, &[0, 0], &[1, 2]);
        let rw = RichLineWeights::from_line(&l, |_| 2).unwrap();
        assert_eq!(rw.truncated(3).unwrap(), vec![2, 1, 0]);
        assert!(rw.truncated(7).is_err());
    }

    #[test]
    fn m_row_examples() {
        let l = line(2, &[0], &[1]);
        let rw = RichLineWeights::from_line(&l, |_| 1).unwrap();
        let d = decode_m_row(&rw, 2, 2).unwrap();
        assert_eq!(d.target.rows.len(), 2);
        let d1 = decode_m_row(&rw, 1, 2).unwrap();
        assert_eq!(d1.rows.len(), 1);
        let l3 = line(3, &[0], &[1]);
        let rw3 = RichLineWeights::from_line(&l3, |_| 1).unwrap();
        let d3 = decode_m_row(&rw3, 3, 3).unwrap();
        assert_eq!(d3.rows.len(), 3);
    }

    #[test]
    fn experiment_examples() {
        let z = GridFunction::zeros(2, 2);
        let e = expected_rank_experiment(&z, 1, 3, 0).unwrap();
        assert!(e.trials.iter().all(|t| t.rank_m == 0));
        assert_eq!(e.bound_split, "0");
        let one = GridFunction::constant(2, 1, 1);
        let e = expected_rank_experiment(&one, 1, 5, 7).unwrap();
        assert!(e.trials.iter().all(|t| t.rank_m >= 1 && t.quotient_holds));
        assert!(expected_rank_experiment(&GridFunction::zeros(5, 1), 1, 1, 0).is_err());
        assert!(expected_rank_experiment(&GridFunction::zeros(6, 1), 1, 1, 0).is_err());
    }
}
