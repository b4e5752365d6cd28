use std::io::Read;

use anyhow::{anyhow, bail, Context, Result};
use kakeya_core::bounds::{self, BoundReport};
use kakeya_core::decoding::{decode_rich_line, RichLineWeights};
use kakeya_core::ffmax::{build_field, ffmax_check, FieldFunction};
use kakeya_core::geometry::{maximal_profile, GridFunction, Line};
use kakeya_core::interval::LogBase;
use kakeya_core::matrices::{build_m, coeff_matrix, count_nonzero_diagonals, ldu_vandermonde, rank_bound_formula, rank_fp, vandermonde};
use kakeya_core::polymethod::{exponents_below, schwartz_zippel_check, MultiPoly};
use kakeya_core::projective::{canonicalize, enumerate_projective, projective_size};
use kakeya_core::ring::{factorize, prime_power, ResidueVector};
use kakeya_core::{Gf, Rational};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::output::{refuse, vec_cell, Report, Table};
use crate::{search, Cli, Cmd, Theorem};

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.cmd {
        Cmd::Projective { modulus, n } => projective(cli, *modulus, *n),
        Cmd::Maxfn { input } => maxfn(cli, input),
        Cmd::Verify { theorem, input, m, eps } => verify(cli, *theorem, input, *m, eps.as_deref()),
        Cmd::RankExp { p, l, n_vars } => rank_exp(cli, *p, *l, *n_vars),
        Cmd::Ldu { m } => ldu(cli, *m),
        Cmd::Decode { p, k, n_vars, l, d, certificates } => decode(cli, *p, *k, *n_vars, *l, *d, *certificates),
        Cmd::SzTest { q, n_vars, trials, max_degree } => sz_test(cli, *q, *n_vars, *trials, *max_degree),
        Cmd::SearchKakeya { modulus, n, m, eps, max_subsets } => {
            search::search_kakeya(cli, *modulus, *n, *m, &parse_rational(eps)?, *max_subsets)
        }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

/// Accepts "a/b", an integer, or a decimal such as "0.25".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            bail!("cannot parse {s:?} as a rational");
        }
        let digits: String = format!("{int}{frac}");
        let num: BigInt = digits.parse().map_err(|_| anyhow!("cannot parse {s:?} as a rational"))?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(Rational::new(num, den));
    }
    s.parse::<Rational>().map_err(|_| anyhow!("cannot parse {s:?} as a rational"))
}

fn check_grid(cli: &Cli, modulus: u64, n: usize) -> Result<()> {
    let size = (modulus as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cli.max_grid as u128 {
        return Err(refuse(format!("N^n = {modulus}^{n} exceeds --max-grid {}", cli.max_grid)));
    }
    Ok(())
}

fn load_grid(cli: &Cli, input: &str) -> Result<GridFunction> {
    let text = read_input(input)?;
    let head: Value = serde_json::from_str(&text).with_context(|| format!("parsing {input}"))?;
    let (nm, n) = (head["N"].as_u64(), head["n"].as_u64());
    if let (Some(nm), Some(n)) = (nm, n) {
        check_grid(cli, nm, n as usize)?;
    }
    Ok(GridFunction::from_json(&text)?)
}

fn projective(cli: &Cli, modulus: u64, n: usize) -> Result<Report> {
    if n == 0 {
        bail!("n must be at least 1");
    }
    check_grid(cli, modulus, n)?;
    let fm = factorize(modulus)?;
    let dirs = enumerate_projective(&fm, n);
    let size = projective_size(&fm, n);
    let holds = size == dirs.len() as u64;
    let mut table = Table::new(&["direction"]);
    for d in &dirs {
        table.push(vec![vec_cell(d.coords())]);
    }
    let json = json!({
        "N": modulus,
        "n": n,
        "size": size,
        "enumerated": dirs.len(),
        "holds": holds,
        "directions": dirs.iter().map(|d| d.coords()).collect::<Vec<_>>(),
    });
    Ok(Report { json, table, holds })
}

fn maxfn(cli: &Cli, input: &str) -> Result<Report> {
    let f = load_grid(cli, input)?;
    let prof = maximal_profile(&f)?;
    let mut table = Table::new(&["direction", "value", "line_base"]);
    let mut entries = Vec::new();
    for e in &prof.entries {
        table.push(vec![vec_cell(e.dir.coords()), e.value.to_string(), vec_cell(&e.line.base.coords)]);
        entries.push(json!({ "direction": e.dir.coords(), "value": e.value, "line_base": e.line.base.coords }));
    }
    let eps_ge: serde_json::Map<String, Value> =
        (1..=prof.w()).map(|k| (k.to_string(), json!(prof.eps_ge(k).to_string()))).collect();
    let json = json!({
        "N": f.modulus,
        "n": f.n,
        "directions": prof.num_directions(),
        "w": prof.w(),
        "eps_ge": eps_ge,
        "entries": entries,
    });
    Ok(Report { json, table, holds: true })
}

fn report_row(r: &BoundReport) -> Vec<String> {
    vec![
        r.theorem.clone(),
        r.lhs.render(),
        r.rhs.render(),
        r.ratio.map(|x| x.to_string()).unwrap_or_default(),
        r.holds.to_string(),
    ]
}

fn verify(cli: &Cli, theorem: Theorem, input: &str, m: Option<u64>, eps: Option<&str>) -> Result<Report> {
    let base: LogBase = cli.log_base.into();
    let mut table = Table::new(&["theorem", "lhs", "rhs", "ratio", "holds"]);
    let report = match theorem {
        Theorem::SetBound => bounds::check_set_bound(&load_grid(cli, input)?, base)?,
        Theorem::MEps => {
            let s = load_grid(cli, input)?;
            let m = m.ok_or_else(|| anyhow!("--theorem 1.4 needs --m"))?;
            let prof = maximal_profile(&s)?;
            let eps = match eps {
                Some(e) => parse_rational(e)?,
                None => prof.eps_ge(m),
            };
            bounds::check_m_eps_with(&s, &prof, m, &eps, base)?
        }
        Theorem::Maximal | Theorem::MaximalGeneral => {
            let r = bounds::check_maximal(&load_grid(cli, input)?, base)?;
            let want = if theorem == Theorem::Maximal { "1.5" } else { "1.9" };
            if r.theorem != want {
                bail!("input falls under theorem {} rather than {want}; pass --theorem {}", r.theorem, r.theorem);
            }
            r
        }
        Theorem::FiniteField => {
            let text = read_input(input)?;
            let head: Value = serde_json::from_str(&text).with_context(|| format!("parsing {input}"))?;
            if let (Some(q), Some(n)) = (head["q"].as_u64(), head["n"].as_u64()) {
                check_grid(cli, q, n as usize)?;
            }
            ffmax_check(&FieldFunction::from_json(&text)?)
        }
        Theorem::DualNorm => return dual_norm(cli, input, base),
    };
    table.push(report_row(&report));
    Ok(Report { holds: report.holds, json: report.to_json(), table })
}

/// Input: {"N", "n", "lines": [{"base": [...], "dir": [...]}]}; without
/// "lines", one random line per direction is drawn from the seed.
fn dual_norm(cli: &Cli, input: &str, base: LogBase) -> Result<Report> {
    let text = read_input(input)?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {input}"))?;
    let modulus = v["N"].as_u64().ok_or_else(|| anyhow!("missing integer field \"N\""))?;
    let n = v["n"].as_u64().ok_or_else(|| anyhow!("missing integer field \"n\""))? as usize;
    check_grid(cli, modulus, n)?;
    let fm = factorize(modulus)?;
    let lines = match v.get("lines") {
        None | Some(Value::Null) => bounds::random_line_choice(&fm, n, cli.seed),
        Some(Value::Array(items)) => {
            let mut out = Vec::with_capacity(items.len());
            for it in items {
                let base_v = int_vec(&it["base"], n).context("line \"base\"")?;
                let dir_v = int_vec(&it["dir"], n).context("line \"dir\"")?;
                let dir = canonicalize(&ResidueVector::new(modulus, &dir_v), &fm)?;
                out.push(Line::new(ResidueVector::new(modulus, &base_v), dir));
            }
            out
        }
        Some(_) => bail!("\"lines\" must be an array"),
    };
    let rep = bounds::dual_norm_check(&fm, n, &lines, base)?;
    let mut table = Table::new(&["theorem", "lhs", "rhs", "ratio", "holds"]);
    table.push(vec![
        "conj".into(),
        rep.lhs_norm.to_string(),
        rep.rhs_budget.to_string(),
        rep.ratio.to_string(),
        rep.holds().to_string(),
    ]);
    Ok(Report { holds: rep.holds(), json: rep.to_json(), table })
}

fn int_vec(v: &Value, n: usize) -> Result<Vec<i64>> {
    let arr = v.as_array().ok_or_else(|| anyhow!("expected an array"))?;
    if arr.len() != n {
        bail!("expected {n} coordinates, got {}", arr.len());
    }
    arr.iter().map(|x| x.as_i64().ok_or_else(|| anyhow!("coordinate {x} is not an integer"))).collect()
}

fn rank_exp(cli: &Cli, p: u64, l: usize, n: usize) -> Result<Report> {
    if !kakeya_core::ring::is_prime(p) {
        bail!("p = {p} is not prime");
    }
    if l == 0 || n == 0 {
        bail!("l and n-vars must be positive");
    }
    let cols = (l as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if cols > cli.max_dim as u128 {
        return Err(refuse(format!("matrix dimension l^n = {l}^{n} exceeds --max-dim {}", cli.max_dim)));
    }
    let mut table = Table::new(&["l", "formula", "oracle", "rank", "dim", "formula_applicable", "holds"]);
    let mut rows = Vec::new();
    let mut all = true;
    for li in 1..=l {
        let m = li as u64;
        let formula = rank_bound_formula(li, n, p);
        let oracle = count_nonzero_diagonals(li, m, n, p);
        let coeff = coeff_matrix(&build_m(m, n, li, p));
        let rank = rank_fp(&coeff) as u64;
        let dim = coeff.ncols as u64;
        let applicable = formula <= dim.into();
        let holds = rank >= oracle && (!applicable || num_ge(oracle, &formula));
        all &= holds;
        table.push(vec![
            li.to_string(),
            formula.to_string(),
            oracle.to_string(),
            rank.to_string(),
            dim.to_string(),
            applicable.to_string(),
            holds.to_string(),
        ]);
        rows.push(json!({
            "l": li, "m": m, "formula": formula.to_string(), "oracle": oracle, "rank": rank,
            "dim": dim, "formula_applicable": applicable, "holds": holds,
        }));
    }
    let json = json!({ "p": p, "n": n, "holds": all, "rows": rows });
    Ok(Report { json, table, holds: all })
}

fn num_ge(a: u64, b: &BigInt) -> bool {
    BigInt::from(a) >= *b
}

fn ldu(cli: &Cli, m: usize) -> Result<Report> {
    if m == 0 {
        bail!("m must be positive");
    }
    if m as u64 > cli.max_dim || m > 12 {
        return Err(refuse(format!("ldu is limited to m <= 12 (degrees grow as m^2), got {m}")));
    }
    let (l, d) = ldu_vandermonde(m)?;
    let reconstructs = l.mul(&d)? == vandermonde(m);
    let mut table = Table::new(&["matrix", "row", "col", "entry"]);
    for (name, mat) in [("L", &l), ("D", &d)] {
        for (i, r) in mat.rows.iter().enumerate() {
            for (j, e) in r.iter().enumerate() {
                table.push(vec![name.into(), i.to_string(), j.to_string(), e.to_string()]);
            }
        }
    }
    let dump = |mat: &kakeya_core::IntPolyMatrix| -> Vec<Vec<String>> {
        mat.rows.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    };
    let json = json!({ "m": m, "L": dump(&l), "D": dump(&d), "reconstructs": reconstructs, "holds": reconstructs });
    Ok(Report { json, table, holds: reconstructs })
}

#[allow(clippy::too_many_arguments)]
fn decode(cli: &Cli, p: u64, k: u32, n: usize, l: u64, d: u64, certificates: bool) -> Result<Report> {
    if !kakeya_core::ring::is_prime(p) || k == 0 {
        bail!("need a prime p and k >= 1");
    }
    let q = p.checked_pow(k).ok_or_else(|| anyhow!("p^k overflows"))?;
    if n == 0 || l == 0 {
        bail!("n-vars and l must be positive");
    }
    if q > 9 || n > 3 || l > 2 * q || d > 4 {
        return Err(refuse(format!(
            "decode is limited to p^k <= 9, n-vars <= 3, l <= 2p^k, d <= 4 (got p^k={q}, n={n}, l={l}, d={d})"
        )));
    }
    check_grid(cli, q, n)?;
    let fm = factorize(q)?;
    let per_point = l.div_ceil(q);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut table = Table::new(&["direction", "base", "lift", "pi", "monomials_checked", "holds"]);
    let mut lines_json = Vec::new();
    let mut all = true;
    for dir in enumerate_projective(&fm, n) {
        let offset: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        for base in [vec![0; n], offset] {
            let line = Line::new(ResidueVector { modulus: q, coords: base.clone() }, dir.clone());
            let rw = RichLineWeights::from_line(&line, |_| per_point)?;
            let cert = decode_rich_line(&rw, l, 0)?;
            let check = cert.verify(d)?;
            all &= check.holds();
            table.push(vec![
                vec_cell(dir.coords()),
                vec_cell(&base),
                vec_cell(&rw.lift),
                vec_cell(&cert.pi),
                check.monomials_checked.to_string(),
                check.holds().to_string(),
            ]);
            let mut entry = json!({
                "direction": dir.coords(),
                "base": base,
                "lift": rw.lift,
                "pi": cert.pi,
                "monomials_checked": check.monomials_checked,
                "failures": check.failures,
                "holds": check.holds(),
            });
            if certificates {
                entry["certificate"] = cert.to_json();
            }
            lines_json.push(entry);
        }
    }
    let json = json!({ "p": p, "k": k, "n": n, "l": l, "d": d, "holds": all, "lines": lines_json });
    Ok(Report { json, table, holds: all })
}

fn random_poly(field: &std::sync::Arc<kakeya_core::FqField>, n: usize, max_degree: u64, rng: &mut ChaCha8Rng) -> MultiPoly<Gf> {
    let pool: Vec<_> = exponents_below(max_degree + 1, n);
    let q = field.q as u32;
    loop {
        let terms = rng.gen_range(1..=4);
        let poly = MultiPoly::from_terms(
            field,
            n,
            (0..terms).map(|_| (pool[rng.gen_range(0..pool.len())].clone(), Gf::new(field, rng.gen_range(1..q)))),
        );
        if !poly.is_zero() {
            return poly;
        }
    }
}

fn sz_test(cli: &Cli, q: u64, n: usize, trials: usize, max_degree: u64) -> Result<Report> {
    prime_power(q).ok_or_else(|| anyhow!("q = {q} is not a prime power"))?;
    if n == 0 || max_degree == 0 {
        bail!("n-vars and max-degree must be positive");
    }
    check_grid(cli, q, n)?;
    let field = build_field(q)?;
    let universe: Vec<Gf> = (0..q as u32).map(|v| Gf::new(&field, v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut table = Table::new(&["trial", "polynomial", "degree", "lhs", "rhs", "holds"]);
    let mut rows = Vec::new();
    let mut all = true;
    for t in 0..trials {
        let poly = random_poly(&field, n, max_degree, &mut rng);
        let rep = schwartz_zippel_check(&poly, &universe)?;
        let deg = poly.degree().unwrap_or(0);
        all &= rep.holds;
        table.push(vec![
            t.to_string(),
            poly.to_text(),
            deg.to_string(),
            rep.lhs.to_string(),
            rep.rhs.to_string(),
            rep.holds.to_string(),
        ]);
        rows.push(json!({ "trial": t, "polynomial": poly.to_text(), "degree": deg, "lhs": rep.lhs, "rhs": rep.rhs, "holds": rep.holds }));
    }
    let json = json!({ "q": q, "n": n, "trials": trials, "seed": cli.seed, "holds": all, "rows": rows });
    Ok(Report { json, table, holds: all })
}
