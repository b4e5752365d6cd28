//! Small (m, eps)-Kakeya sets by greedy construction and exhaustive search.

use anyhow::{bail, Result};
use kakeya_core::bounds::check_m_eps;
use kakeya_core::geometry::{line_points, GridFunction, Line};
use kakeya_core::projective::enumerate_projective;
use kakeya_core::ring::{factorize, ResidueVector};
use kakeya_core::Rational;
use num_bigint::BigInt;
use serde_json::json;

use crate::output::{refuse, vec_cell, Report, Table};
use crate::Cli;

/// Exhaustive search only runs on grids at most this large.
const EXHAUSTIVE_GRID: u64 = 5000;
/// Cap on directions × points for the line-id table.
const TABLE_CAP: u64 = 50_000_000;

struct Incidence {
    grid: GridFunction,
    /// lines[u][j]: point indices of the j-th line in direction u.
    lines: Vec<Vec<Vec<usize>>>,
    /// line_of[u][x]: index of the line in direction u through x.
    line_of: Vec<Vec<u32>>,
}

impl Incidence {
    fn new(modulus: u64, n: usize) -> Result<Self> {
        let fm = factorize(modulus)?;
        let grid = GridFunction::zeros(modulus, n);
        let size = grid.len();
        let mut lines = Vec::new();
        let mut line_of = Vec::new();
        for u in enumerate_projective(&fm, n) {
            let mut of = vec![u32::MAX; size];
            let mut ls = Vec::new();
            for x in 0..size {
                if of[x] != u32::MAX {
                    continue;
                }
                let line = Line::new(ResidueVector { modulus, coords: grid.point(x) }, u.clone());
                let pts: Vec<usize> = line_points(&line).iter().map(|p| grid.index(p)).collect();
                for &i in &pts {
                    of[i] = ls.len() as u32;
                }
                ls.push(pts);
            }
            lines.push(ls);
            line_of.push(of);
        }
        Ok(Incidence { grid, lines, line_of })
    }

    /// Number of directions u with max_L |S ∩ L| >= m.
    fn rich_directions(&self, set: &[usize], m: u64, counts: &mut Vec<u64>) -> usize {
        let mut good = 0;
        for (u, of) in self.line_of.iter().enumerate() {
            counts.clear();
            counts.resize(self.lines[u].len(), 0);
            if set.iter().any(|&x| {
                let c = &mut counts[of[x] as usize];
                *c += 1;
                *c >= m
            }) {
                good += 1;
            }
        }
        good
    }
}

fn required_directions(eps: &Rational, total: usize) -> usize {
    let need = (eps * BigInt::from(total)).ceil();
    need.to_integer().try_into().unwrap_or(usize::MAX)
}

/// Completes the richest unsatisfied line until enough directions are rich,
/// then drops points that are not needed.
fn greedy(inc: &Incidence, m: u64, need: usize) -> Vec<usize> {
    let size = inc.grid.len();
    let mut member = vec![false; size];
    let mut set: Vec<usize> = Vec::new();
    let mut counts = Vec::new();
    while inc.rich_directions(&set, m, &mut counts) < need {
        let mut best: Option<(usize, usize, usize)> = None;
        for (u, ls) in inc.lines.iter().enumerate() {
            let covered = ls.iter().map(|l| l.iter().filter(|&&x| member[x]).count()).max().unwrap_or(0);
            if covered as u64 >= m {
                continue;
            }
            for (j, l) in ls.iter().enumerate() {
                let missing = m as usize - l.iter().filter(|&&x| member[x]).count().min(m as usize);
                if best.is_none_or(|b| missing < b.0) {
                    best = Some((missing, u, j));
                }
            }
        }
        let (_, u, j) = best.expect("an unsatisfied direction exists");
        let mut added = 0;
        let line = &inc.lines[u][j];
        let have = line.iter().filter(|&&x| member[x]).count();
        for &x in line {
            if have + added >= m as usize {
                break;
            }
            if !member[x] {
                member[x] = true;
                set.push(x);
                added += 1;
            }
        }
    }
    let mut i = set.len();
    while i > 0 {
        i -= 1;
        let x = set.remove(i);
        if inc.rich_directions(&set, m, &mut counts) < need {
            set.insert(i, x);
        }
    }
    set.sort_unstable();
    set
}

enum Exhaustive {
    Optimal { set: Vec<usize>, checked: u64 },
    Budget { proven_min: usize, checked: u64 },
}

/// Sets containing the origin, by increasing size below `upper`; every set
/// has a translate through the origin and translation preserves the property.
fn exhaustive(inc: &Incidence, m: u64, need: usize, upper: usize, max_subsets: u64) -> Exhaustive {
    let size = inc.grid.len();
    let mut checked = 0u64;
    let mut counts = Vec::new();
    let start = (m as usize).max(1);
    for k in start..upper {
        let mut idx: Vec<usize> = (1..k).collect();
        loop {
            if checked >= max_subsets {
                return Exhaustive::Budget { proven_min: k, checked };
            }
            let mut set = Vec::with_capacity(k);
            set.push(0);
            set.extend_from_slice(&idx);
            checked += 1;
            if inc.rich_directions(&set, m, &mut counts) >= need {
                return Exhaustive::Optimal { set, checked };
            }
            // next (k-1)-subset of 1..size
            let r = idx.len();
            let mut t = r;
            while t > 0 && idx[t - 1] == size - r + t - 1 {
                t -= 1;
            }
            if t == 0 {
                break;
            }
            idx[t - 1] += 1;
            for s in t..r {
                idx[s] = idx[s - 1] + 1;
            }
        }
    }
    Exhaustive::Optimal { set: Vec::new(), checked }
}

pub fn search_kakeya(cli: &Cli, modulus: u64, n: usize, m: u64, eps: &Rational, max_subsets: u64) -> Result<Report> {
    if n == 0 {
        bail!("n must be at least 1");
    }
    if m == 0 || m > modulus {
        bail!("m must lie in 1..=N, got {m}");
    }
    if *eps <= Rational::from_integer(0.into()) || *eps > Rational::from_integer(1.into()) {
        bail!("eps must lie in (0, 1], got {eps}");
    }
    let grid = (modulus as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if grid > cli.max_grid as u128 {
        return Err(refuse(format!("N^n = {modulus}^{n} exceeds --max-grid {}", cli.max_grid)));
    }
    let fm = factorize(modulus)?;
    let dirs = kakeya_core::projective::projective_size(&fm, n) as u128;
    if dirs * grid > TABLE_CAP as u128 {
        return Err(refuse(format!("directions × points = {} exceeds the search table cap {TABLE_CAP}", dirs * grid)));
    }
    let inc = Incidence::new(modulus, n)?;
    let need = required_directions(eps, inc.lines.len());
    let greedy_set = greedy(&inc, m, need);

    let (best, exhaustive_json) = if grid as u64 <= EXHAUSTIVE_GRID {
        match exhaustive(&inc, m, need, greedy_set.len(), max_subsets) {
            Exhaustive::Optimal { set, checked } if !set.is_empty() => {
                (set.clone(), json!({ "status": "optimal", "size": set.len(), "subsets_checked": checked }))
            }
            Exhaustive::Optimal { checked, .. } => (
                greedy_set.clone(),
                json!({ "status": "optimal", "size": greedy_set.len(), "subsets_checked": checked }),
            ),
            Exhaustive::Budget { proven_min, checked } => (
                greedy_set.clone(),
                json!({ "status": "budget", "minimum_at_least": proven_min, "subsets_checked": checked }),
            ),
        }
    } else {
        (greedy_set.clone(), json!({ "status": "skipped" }))
    };

    let points = |s: &[usize]| -> Vec<Vec<u64>> { s.iter().map(|&x| inc.grid.point(x)).collect() };
    let best_points = points(&best);
    let s = GridFunction::indicator(modulus, n, &best_points)?;
    let report = check_m_eps(&s, m, eps, cli.log_base.into())?;

    let mut table = Table::new(&["method", "size", "points"]);
    let cell = |s: &[usize]| points(s).iter().map(|p| vec_cell(p)).collect::<Vec<_>>().join(";");
    table.push(vec!["greedy".into(), greedy_set.len().to_string(), cell(&greedy_set)]);
    table.push(vec!["best".into(), best.len().to_string(), cell(&best)]);
    table.push(vec!["lower_bound".into(), report.rhs.render(), String::new()]);

    let json = json!({
        "N": modulus,
        "n": n,
        "m": m,
        "eps": eps.to_string(),
        "directions": inc.lines.len(),
        "required_directions": need,
        "greedy": { "size": greedy_set.len(), "points": points(&greedy_set) },
        "exhaustive": exhaustive_json,
        "best": { "size": best.len(), "points": best_points },
        "bound": report.to_json(),
        "holds": report.holds,
    });
    Ok(Report { json, table, holds: report.holds })
}
