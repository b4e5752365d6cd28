//! Constants of the maximal Kakeya bounds and checks of the inequalities on
//! concrete inputs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{
    is_m_eps_from_profile, line_points, maximal_profile, mweight_from_profile, slice_profile,
    GridFunction, Line, MaximalProfile,
};
use crate::interval::{Interval, LogBase};
use crate::projective::{enumerate_projective, Direction};
use crate::ring::{factorize, FactoredModulus, ResidueVector};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_to_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A quantity `exact * factor`, where the optional factor carries the
/// transcendental part as an enclosing interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Quantity {
    pub exact: BigRational,
    pub factor: Option<Interval>,
}

impl Quantity {
    pub fn exact(r: BigRational) -> Self {
        Quantity { exact: r, factor: None }
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::exact(BigRational::from_integer(n.clone()))
    }

    /// A zero rational part makes the product exactly zero whatever the factor.
    pub fn is_exact(&self) -> bool {
        self.factor.is_none() || self.exact.is_zero()
    }

    pub fn mul_rat(&self, r: &BigRational) -> Self {
        Quantity { exact: &self.exact * r, factor: self.factor }
    }

    pub fn mul_interval(&self, i: Interval) -> Self {
        let factor = Some(match self.factor {
            Some(f) => f.mul(i),
            None => i,
        });
        Quantity { exact: self.exact.clone(), factor }
    }

    pub fn mul(&self, o: &Quantity) -> Self {
        let q = self.mul_rat(&o.exact);
        match o.factor {
            Some(f) => q.mul_interval(f),
            None => q,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Quantity::exact(BigRational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn interval(&self) -> Interval {
        let e = Interval::from_rational(&self.exact);
        match self.factor {
            Some(f) if !self.is_exact() => e.mul(f),
            _ => e,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_exact() {
            self.exact.to_f64().unwrap_or(f64::NAN)
        } else {
            self.interval().mid()
        }
    }

    pub fn render(&self) -> String {
        if self.is_exact() {
            rat_to_string(&self.exact)
        } else {
            format!("{:e}", self.interval().hi)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub theorem: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub constant: Quantity,
    pub holds: bool,
    pub ratio: Option<f64>,
    /// The hypothesis of the statement is not met; the numbers are shown anyway.
    pub vacuous: bool,
    pub params: BTreeMap<String, Value>,
}

impl BoundReport {
    pub fn new(theorem: &str, lhs: Quantity, rhs: Quantity, constant: Quantity) -> Self {
        let holds = if lhs.is_exact() && rhs.is_exact() {
            lhs.exact >= rhs.exact
        } else {
            lhs.interval().lo >= rhs.interval().hi
        };
        let ratio = if rhs.exact.is_zero() {
            None
        } else if lhs.is_exact() && rhs.is_exact() {
            (&lhs.exact / &rhs.exact).to_f64()
        } else {
            Some(lhs.to_f64() / rhs.to_f64())
        };
        BoundReport {
            theorem: theorem.to_string(),
            lhs,
            rhs,
            constant,
            holds,
            ratio,
            vacuous: false,
            params: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, v: Value) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "theorem": self.theorem,
            "lhs": self.lhs.render(),
            "rhs": self.rhs.render(),
            "holds": self.holds,
            "ratio": self.ratio,
            "constant": self.constant.render(),
            "params": self.params,
        });
        if !self.rhs.is_exact() {
            let i = self.rhs.interval();
            v["rhs_interval"] = json!([i.lo, i.hi]);
        }
        if self.vacuous {
            v["vacuous"] = json!(true);
        }
        v
    }
}

/// Smallest e >= 0 with p^e >= x, i.e. the ceiling of log_p(x) for x >= 1.
pub fn ceil_log(p: u64, x: u64) -> u32 {
    let mut e = 0;
    let mut pe: u128 = 1;
    while pe < x as u128 {
        pe *= p as u128;
        e += 1;
    }
    e
}

/// 1 / (k log p + 1) as an interval.
fn inv_log_plus_one(k: u32, p: u64, base: LogBase) -> Interval {
    Interval::from_u64(k as u64).mul(Interval::log(p, base)).add(Interval::point(1.0)).recip()
}

/// C_{N,n} for the set bound, with factors taken in descending prime order.
pub fn constant_set(fm: &FactoredModulus, n: usize, base: LogBase) -> Quantity {
    let desc = fm.descending();
    let r = desc.len();
    let mut q = Quantity::exact(BigRational::one());
    for (j, &(p, k)) in desc.iter().enumerate() {
        if j + 1 < r {
            q = q.mul_interval(inv_log_plus_one(k, p, base));
        }
        q = q.mul_rat(&rat(1, 2 * (k as i64 + ceil_log(p, n as u64) as i64)));
    }
    q.pow(n as u32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PkConstant {
    pub plain: BigRational,
    pub improved: BigRational,
    pub improved_used: bool,
    /// The ceiling ceil(log_p(wstar) + log_p(n)) was 0 and has been raised to 1.
    pub clamped: bool,
}

impl PkConstant {
    pub fn selected(&self) -> &BigRational {
        if self.improved_used {
            &self.improved
        } else {
            &self.plain
        }
    }
}

/// C_{p^k,n} for wstar = max_u f*(u), both the general and the p > n variant.
pub fn constant_pk(p: u64, n: usize, wstar: u64) -> Result<PkConstant> {
    if wstar == 0 {
        return Err(Error::Precondition("wstar must be positive".into()));
    }
    let n32 = n as u32;
    // ceil(log_p wstar + log_p n) = ceil(log_p(wstar * n))
    let raw = ceil_log(p, wstar * n as u64);
    let c = raw.max(1);
    let plain = rat(1, 2 * c as i64).pow(n32 as i32);
    let a = int(ceil_log(p, wstar) as u64 + 1);
    let b = int(1) + rat(n as i64, p as i64);
    let improved = (a * b).recip().pow(n32 as i32);
    Ok(PkConstant { plain, improved, improved_used: p > n as u64, clamped: raw == 0 })
}

/// C_{N,n} of the general-N bound for r >= 2, with mw = mweight(f, p_1) and
/// p_1 the largest prime.
pub fn constant_general(
    fm: &FactoredModulus,
    n: usize,
    mw: u64,
    base: LogBase,
) -> Result<(Quantity, bool)> {
    let desc = fm.descending();
    let r = desc.len();
    if r < 2 {
        return Err(Error::Precondition("general constant needs at least two primes".into()));
    }
    if mw == 0 {
        return Err(Error::Precondition("mweight must be positive".into()));
    }
    let (p1, _) = desc[0];
    let raw = ceil_log(p1, mw * n as u64);
    let c = raw.max(1);
    let first = Quantity::exact(rat(1, 2 * c as i64))
        .mul_interval(Interval::log(mw, base).add(Interval::point(1.0)).recip());
    let (pr, kr) = desc[r - 1];
    let mut rest = Quantity::exact(rat(1, 2 * (kr as i64 + ceil_log(pr, n as u64) as i64)));
    for &(p, k) in &desc[1..r - 1] {
        rest = rest
            .mul_interval(inv_log_plus_one(k, p, base))
            .mul_rat(&rat(1, 2 * (k as i64 + ceil_log(p, n as u64) as i64)));
    }
    Ok((first.pow(n as u32).mul(&rest.pow(n as u32)), raw == 0))
}

/// prod_i k_i log(p_i).
pub fn divisor_product(fm: &FactoredModulus, base: LogBase) -> Interval {
    fm.factors.iter().fold(Interval::point(1.0), |acc, &(p, k)| {
        acc.mul(Interval::from_u64(k as u64).mul(Interval::log(p, base)))
    })
}

pub fn check_set_bound(s: &GridFunction, base: LogBase) -> Result<BoundReport> {
    let prof = maximal_profile(s)?;
    check_set_bound_with(s, &prof, base)
}

pub fn check_set_bound_with(
    s: &GridFunction,
    prof: &MaximalProfile,
    base: LogBase,
) -> Result<BoundReport> {
    if !s.is_indicator() {
        return Err(Error::Precondition("set bound needs a 0/1 function".into()));
    }
    let fm = factorize(s.modulus)?;
    let c = constant_set(&fm, s.n, base);
    let rhs = c.mul_rat(&prof.mean_pow(s.n as u32));
    let lhs = Quantity::exact(int(s.total()));
    Ok(BoundReport::new("1.2", lhs, rhs, c)
        .param("N", json!(s.modulus))
        .param("n", json!(s.n)))
}

pub fn check_m_eps(
    s: &GridFunction,
    m: u64,
    eps: &BigRational,
    base: LogBase,
) -> Result<BoundReport> {
    let prof = maximal_profile(s)?;
    check_m_eps_with(s, &prof, m, eps, base)
}

pub fn check_m_eps_with(
    s: &GridFunction,
    prof: &MaximalProfile,
    m: u64,
    eps: &BigRational,
    base: LogBase,
) -> Result<BoundReport> {
    if !s.is_indicator() {
        return Err(Error::Precondition("(m, eps) bound needs a 0/1 function".into()));
    }
    let fm = factorize(s.modulus)?;
    let c = constant_set(&fm, s.n, base);
    let rhs = c.mul_rat(&(eps * int(m).pow(s.n as i32)));
    let lhs = Quantity::exact(int(s.total()));
    let mut rep = BoundReport::new("1.4", lhs, rhs, c)
        .param("N", json!(s.modulus))
        .param("n", json!(s.n))
        .param("m", json!(m))
        .param("eps", json!(rat_to_string(eps)));
    rep.vacuous = !is_m_eps_from_profile(prof, m, eps);
    Ok(rep)
}

pub fn check_maximal(f: &GridFunction, base: LogBase) -> Result<BoundReport> {
    let prof = maximal_profile(f)?;
    check_maximal_with(f, &prof, base)
}

pub fn check_maximal_with(
    f: &GridFunction,
    prof: &MaximalProfile,
    base: LogBase,
) -> Result<BoundReport> {
    let fm = factorize(f.modulus)?;
    let n = f.n;
    let lhs = Quantity::from_int(&f.sum_pow(n as u32));
    let mean = prof.mean_pow(n as u32);
    if fm.num_factors() == 1 {
        let (p, k) = fm.factors[0];
        let wstar = prof.w();
        let base_rep = |c: Quantity| {
            let rhs = c.mul_rat(&mean);
            BoundReport::new("1.5", lhs.clone(), rhs, c)
                .param("N", json!(f.modulus))
                .param("n", json!(n))
                .param("p", json!(p))
                .param("k", json!(k))
                .param("wstar", json!(wstar))
        };
        if wstar == 0 {
            return Ok(base_rep(Quantity::exact(BigRational::zero())));
        }
        let c = constant_pk(p, n, wstar)?;
        Ok(base_rep(Quantity::exact(c.selected().clone()))
            .param("improved", json!(c.improved_used))
            .param("plain_constant", json!(rat_to_string(&c.plain)))
            .param("improved_constant", json!(rat_to_string(&c.improved)))
            .param("log_ceiling_clamped", json!(c.clamped)))
    } else {
        let p1 = fm.descending()[0].0;
        let mw = mweight_from_profile(f, prof, p1)?;
        let rep = |c: Quantity| {
            let rhs = c.mul_rat(&mean);
            BoundReport::new("1.9", lhs.clone(), rhs, c)
                .param("N", json!(f.modulus))
                .param("n", json!(n))
                .param("p1", json!(p1))
                .param("mweight", json!(mw))
        };
        if mw == 0 {
            return Ok(rep(Quantity::exact(BigRational::zero())));
        }
        let (c, clamped) = constant_general(&fm, n, mw, base)?;
        Ok(rep(c).param("log_ceiling_clamped", json!(clamped)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceInequality {
    pub dir: Direction,
    pub lhs: BigInt,
    pub rhs: Interval,
    pub holds: bool,
}

/// For every direction, sum_i b_{>=i}^n (i^n - (i-1)^n) >= (f*(u)/(log w + 1))^n
/// on the maximizing line, with w = mweight(f, p).
pub fn slice_inequalities(
    f: &GridFunction,
    prof: &MaximalProfile,
    p: u64,
    base: LogBase,
) -> Result<Vec<SliceInequality>> {
    let w = mweight_from_profile(f, prof, p)?;
    let n = f.n as u32;
    let mut out = Vec::new();
    for e in &prof.entries {
        let sp = slice_profile(f, &e.line, p)?;
        let lhs: BigInt = (1..=w)
            .map(|i| {
                BigInt::from(sp.b_ge(i)).pow(n) * (BigInt::from(i).pow(n) - BigInt::from(i - 1).pow(n))
            })
            .sum();
        let rhs = if w == 0 {
            Interval::point(0.0)
        } else {
            Interval::from_u64(e.value)
                .mul(Interval::log(w, base).add(Interval::point(1.0)).recip())
                .powi(n)
        };
        let lhs_f = Interval::from_rational(&BigRational::from_integer(lhs.clone()));
        out.push(SliceInequality { dir: e.dir.clone(), lhs, rhs, holds: lhs_f.lo >= rhs.hi });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainStep {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualNormReport {
    pub lhs_norm: f64,
    pub rhs_budget: f64,
    pub ratio: f64,
    pub chain: Vec<ChainStep>,
    pub maximal: BoundReport,
}

impl DualNormReport {
    pub fn holds(&self) -> bool {
        self.chain.iter().all(|s| s.holds)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theorem": "conj",
            "lhs": self.lhs_norm,
            "rhs": self.rhs_budget,
            "holds": self.holds(),
            "ratio": self.ratio,
            "params": {
                "chain": self.chain.iter().map(|s| json!({
                    "step": s.name, "holds": s.holds, "detail": s.detail
                })).collect::<Vec<_>>(),
                "maximal_report": self.maximal.to_json(),
            },
        })
    }
}

/// Smallest c with c^e >= h.
fn ceil_root(h: u64, e: u32) -> u64 {
    if e == 0 || h == 0 {
        return h.min(1);
    }
    let mut c = (h as f64).powf(1.0 / e as f64).floor() as u64;
    c = c.saturating_sub(1);
    while (c as u128).pow(e) < h as u128 {
        c += 1;
    }
    c
}

/// One line per direction, chosen uniformly at random.
pub fn random_line_choice(fm: &FactoredModulus, n: usize, seed: u64) -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    enumerate_projective(fm, n)
        .into_iter()
        .map(|u| {
            let base: Vec<u64> = (0..n).map(|_| rng.gen_range(0..fm.n)).collect();
            Line::new(ResidueVector { modulus: fm.n, coords: base }, u)
        })
        .collect()
}

/// Evaluates the norm of h = sum_u 1_{L(u)} and checks each step of the
/// argument bounding it through g = h^{1/(n-1)} and f = ceil(g).
pub fn dual_norm_check(
    fm: &FactoredModulus,
    n: usize,
    lines: &[Line],
    base: LogBase,
) -> Result<DualNormReport> {
    if n < 2 {
        return Err(Error::Precondition("dual norm check needs n >= 2".into()));
    }
    let dirs = enumerate_projective(fm, n);
    let mut chosen: Vec<Option<&Line>> = vec![None; dirs.len()];
    for l in lines {
        let i = dirs
            .binary_search(&l.dir)
            .map_err(|_| Error::Structure(format!("{:?} is not a canonical direction", l.dir)))?;
        if chosen[i].is_some() {
            return Err(Error::Structure(format!("direction {:?} chosen twice", l.dir)));
        }
        chosen[i] = Some(l);
    }
    if let Some(i) = chosen.iter().position(|c| c.is_none()) {
        return Err(Error::Structure(format!("missing direction {:?}", dirs[i].rep.coords)));
    }
    let chosen: Vec<&Line> = chosen.into_iter().map(|c| c.unwrap()).collect();

    let mut h = GridFunction::zeros(fm.n, n);
    for l in &chosen {
        for x in line_points(l) {
            let i = h.index(&x);
            h.values[i] += 1;
        }
    }
    let nf = n as f64;
    let q = nf / (nf - 1.0);
    let g: Vec<f64> = h.values.iter().map(|&v| (v as f64).powf(1.0 / (nf - 1.0))).collect();
    let f_vals: Vec<u64> = h.values.iter().map(|&v| ceil_root(v, n as u32 - 1)).collect();
    let f = GridFunction::from_values(fm.n, n, f_vals)?;

    let lhs_norm = h.values.iter().map(|&v| (v as f64).powf(q)).sum::<f64>().powf(1.0 / q);
    let total_len: u64 = chosen.len() as u64 * fm.n;
    let rhs_budget = (total_len as f64).powf((nf - 1.0) / nf);
    let mut chain = Vec::new();

    let gh: f64 = g.iter().zip(&h.values).map(|(a, &b)| a * b as f64).sum();
    let gn = g.iter().map(|a| a.powf(nf)).sum::<f64>().powf(1.0 / nf);
    let dual = if gn == 0.0 { 0.0 } else { gh / gn };
    let rel = if lhs_norm == 0.0 { dual.abs() } else { (lhs_norm - dual).abs() / lhs_norm };
    chain.push(ChainStep {
        name: "norm_duality_identity".into(),
        holds: rel <= 1e-9,
        detail: format!("||h|| = {lhs_norm}, <g,h>/||g|| = {dual}, relative error {rel:e}"),
    });

    let sandwich = g.iter().zip(&f.values).all(|(&gv, &fv)| {
        let fv = fv as f64;
        gv <= fv * (1.0 + 1e-12) && fv <= 2.0 * gv * (1.0 + 1e-12) + if gv == 0.0 { 0.0 } else { 1e-12 }
    });
    chain.push(ChainStep {
        name: "g_le_f_le_2g".into(),
        holds: sandwich,
        detail: "pointwise g <= ceil(g) <= 2g".into(),
    });

    let prof = maximal_profile(&f)?;
    let f_prime: Vec<u64> = chosen.iter().map(|l| line_points(l).iter().map(|x| f.get(x)).sum()).collect();
    let dominated = prof.entries.iter().zip(&f_prime).all(|(e, &fp)| e.value >= fp);
    chain.push(ChainStep {
        name: "maximal_dominates_line_sums".into(),
        holds: dominated,
        detail: "f*(u) >= sum over L(u) of f".into(),
    });

    let maximal = check_maximal_with(&f, &prof, base)?;
    chain.push(ChainStep {
        name: "maximal_bound".into(),
        holds: maximal.holds,
        detail: format!("theorem {} on f = ceil(g)", maximal.theorem),
    });

    let hf: u64 = h.values.iter().zip(&f.values).map(|(a, b)| a * b).sum();
    let fp_sum: u64 = f_prime.iter().sum();
    chain.push(ChainStep {
        name: "incidence_identity".into(),
        holds: hf == fp_sum,
        detail: format!("<h,f> = {hf}, sum_u f'(u) = {fp_sum}"),
    });

    let fn_norm = f.values.iter().map(|&v| (v as f64).powf(nf)).sum::<f64>().powf(1.0 / nf);
    let via_f = if fn_norm == 0.0 { 0.0 } else { 2.0 * hf as f64 / fn_norm };
    chain.push(ChainStep {
        name: "replace_g_by_f".into(),
        holds: lhs_norm <= via_f * (1.0 + 1e-12),
        detail: format!("||h|| <= 2<h,f>/||f||_n = {via_f}"),
    });

    let num_dirs = dirs.len() as f64;
    let fp_norm = f_prime.iter().map(|&v| (v as f64).powf(nf)).sum::<f64>().powf(1.0 / nf);
    let holder = num_dirs.powf((nf - 1.0) / nf) * fp_norm;
    chain.push(ChainStep {
        name: "holder".into(),
        holds: fp_sum as f64 <= holder * (1.0 + 1e-12),
        detail: format!("sum f' = {fp_sum} <= |P|^((n-1)/n) ||f'||_n = {holder}"),
    });

    Ok(DualNormReport {
        lhs_norm,
        rhs_budget,
        ratio: lhs_norm / rhs_budget,
        chain,
        maximal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> LogBase {
        LogBase::Natural
    }

    #[test]
    fn set_constants() {
        let c = constant_set(&factorize(2).unwrap(), 2, nat());
        assert_eq!(c, Quantity::exact(rat(1, 16)));
        let c = constant_set(&factorize(4).unwrap(), 2, nat());
        assert_eq!(c, Quantity::exact(rat(1, 36)));
        let c = constant_set(&factorize(6).unwrap(), 2, nat());
        let expect = (1.0 / (3f64.ln() + 1.0) / 16.0).powi(2);
        assert!(c.interval().contains(expect));
        assert!((c.to_f64() - 8.87e-4).abs() < 1e-6);
    }

    #[test]
    fn empty_set_with_log_constant() {
        let s = GridFunction::indicator(6, 1, &[]).unwrap();
        let r = check_set_bound(&s, nat()).unwrap();
        assert!(r.rhs.is_exact());
        assert!(r.holds);
        assert_eq!(r.to_json()["rhs"], "0");
    }

    #[test]
    fn prime_power_constants() {
        assert_eq!(constant_pk(2, 2, 2).unwrap().selected(), &rat(1, 16));
        let c = constant_pk(5, 2, 5).unwrap();
        assert!(c.improved_used);
        assert_eq!(c.selected(), &rat(25, 196));
        assert_eq!(constant_pk(2, 2, 4).unwrap().selected(), &rat(1, 36));
        assert!(constant_pk(2, 2, 0).is_err());
    }

    #[test]
    fn general_constant() {
        let fm = factorize(6).unwrap();
        let (c, _) = constant_general(&fm, 2, 3, nat()).unwrap();
        let expect = (1.0 / (2.0 * (3f64.ln() + 1.0) * 2.0)).powi(2) * (1.0f64 / 4.0).powi(2);
        assert!(c.interval().contains(expect));
        let (c1, _) = constant_general(&fm, 2, 1, nat()).unwrap();
        assert!(c1.interval().contains(1.0 / 64.0));
        let mut prev = f64::INFINITY;
        for mw in 1..20 {
            let v = constant_general(&fm, 2, mw, nat()).unwrap().0.to_f64();
            assert!(v <= prev);
            prev = v;
        }
        assert!(constant_general(&factorize(8).unwrap(), 2, 3, nat()).is_err());
    }

    #[test]
    fn set_bound_examples() {
        let s = GridFunction::indicator(2, 2, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let r = check_set_bound(&s, nat()).unwrap();
        assert_eq!(r.lhs.exact, int(3));
        // f* = 2 in all three directions, so the mean of f*^2 is 4.
        assert_eq!(r.rhs.exact, rat(1, 4));
        assert!(r.holds);
        assert_eq!(r.ratio, Some(12.0));
        let r = check_set_bound(&GridFunction::zeros(2, 2), nat()).unwrap();
        assert!(r.holds && r.rhs.exact.is_zero());
        let r = check_set_bound(&GridFunction::constant(2, 2, 1), nat()).unwrap();
        assert_eq!(r.rhs.exact, rat(1, 4));
    }

    #[test]
    fn m_eps_examples() {
        let s = GridFunction::indicator(2, 2, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let r = check_m_eps(&s, 2, &int(1), nat()).unwrap();
        assert_eq!(r.rhs.exact, rat(1, 4));
        assert!(r.holds && !r.vacuous);
        let r = check_m_eps(&s, 0, &int(1), nat()).unwrap();
        assert!(r.holds && r.rhs.exact.is_zero());
        let r = check_m_eps(&GridFunction::constant(4, 2, 1), 4, &int(1), nat()).unwrap();
        assert_eq!(r.rhs.exact, rat(4, 9));
        let r = check_m_eps(&s, 3, &int(1), nat()).unwrap();
        assert!(r.vacuous);
    }

    #[test]
    fn maximal_examples() {
        let r = check_maximal(&GridFunction::constant(2, 2, 1), nat()).unwrap();
        assert_eq!((r.lhs.exact.clone(), r.rhs.exact.clone()), (int(4), rat(1, 4)));
        let r = check_maximal(&GridFunction::zeros(3, 2), nat()).unwrap();
        assert!(r.holds);
        let r = check_maximal(&GridFunction::constant(6, 2, 1), nat()).unwrap();
        assert_eq!(r.theorem, "1.9");
        assert_eq!(r.params["mweight"], json!(3));
        assert!(r.holds);
    }

    #[test]
    fn divisor_products() {
        assert!(divisor_product(&factorize(2).unwrap(), nat()).contains(2f64.ln()));
        let d = divisor_product(&factorize(12).unwrap(), nat());
        assert!((d.mid() - 1.523).abs() < 1e-3);
    }

    #[test]
    fn dual_norm_three_lines() {
        let fm = factorize(2).unwrap();
        let lines: Vec<Line> = enumerate_projective(&fm, 2)
            .into_iter()
            .map(|u| Line::new(ResidueVector::new(2, &[0, 0]), u))
            .collect();
        let r = dual_norm_check(&fm, 2, &lines, nat()).unwrap();
        assert!((r.lhs_norm - 12f64.sqrt()).abs() < 1e-12);
        assert!((r.rhs_budget - 6f64.sqrt()).abs() < 1e-12);
        assert!((r.ratio - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.holds());
        assert!(dual_norm_check(&fm, 2, &lines[..2], nat()).is_err());
    }

    #[test]
    fn ceil_roots() {
        assert_eq!(ceil_root(9, 2), 3);
        assert_eq!(ceil_root(10, 2), 4);
        assert_eq!(ceil_root(0, 2), 0);
        assert_eq!(ceil_root(7, 1), 7);
        assert_eq!(ceil_log(2, 1), 0);
        assert_eq!(ceil_log(2, 5), 3);
        assert_eq!(ceil_log(3, 9), 2);
    }
}
