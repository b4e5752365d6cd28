//! Residue rings, projective spaces, lines and the set/maximal bounds against
//! brute-force oracles.

use std::collections::{BTreeMap, BTreeSet};

use kakeya_core::bounds::{check_maximal, check_set_bound, constant_set};
use kakeya_core::geometry::{line_points, line_sum, maximal_profile, mweight, slice_profile, GridFunction, Line};
use kakeya_core::interval::LogBase;
use kakeya_core::projective::{canonicalize, enumerate_projective, Direction};
use kakeya_core::ring::{
    crt_join, crt_split, det_is_unit_mod_p, factorize, identity_mod, inverse_mod_pk, mat_mul_mod, mat_vec_mod,
    random_gl, random_gl_with, ModMatrix, ResidueVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn all_vectors(modulus: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..modulus.pow(n as u32)).map(move |idx| (0..n).map(|i| idx / modulus.pow(i as u32) % modulus).collect())
}

#[test]
fn crt_round_trip_exhaustive() {
    for modulus in 2..=30u64 {
        let fm = factorize(modulus).unwrap();
        for n in 1..=3usize {
            for v in all_vectors(modulus, n) {
                let x = ResidueVector { modulus, coords: v };
                assert_eq!(crt_join(&fm, &crt_split(&x, &fm)).unwrap(), x);
            }
        }
    }
}

#[test]
fn crt_examples() {
    let fm = factorize(12).unwrap();
    let parts = crt_split(&ResidueVector::new(12, &[7]), &fm);
    let by_mod: BTreeMap<u64, Vec<u64>> = parts.iter().map(|c| (c.modulus, c.coords.clone())).collect();
    assert_eq!(by_mod[&4], vec![3]);
    assert_eq!(by_mod[&3], vec![1]);
    assert_eq!(crt_join(&fm, &parts).unwrap().coords, vec![7]);
}

#[test]
fn factorization_matches_sieve() {
    const LIMIT: usize = 1_000_000;
    let mut spf = vec![0u32; LIMIT + 1];
    for i in 2..=LIMIT {
        if spf[i] == 0 {
            for j in (i..=LIMIT).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    for n in 2..=LIMIT {
        let mut want: BTreeMap<u64, u32> = BTreeMap::new();
        let mut x = n;
        while x > 1 {
            *want.entry(spf[x] as u64).or_default() += 1;
            x /= spf[x] as usize;
        }
        let got: BTreeMap<u64, u32> = factorize(n as u64).unwrap().factors.into_iter().collect();
        assert_eq!(got, want, "N = {n}");
    }
}

fn det_mod(m: &ModMatrix, q: u64) -> u64 {
    match m.len() {
        1 => m[0][0] % q,
        2 => (m[0][0] * m[1][1] % q + q * q - m[0][1] * m[1][0] % q) % q,
        _ => unreachable!(),
    }
}

#[test]
fn random_gl_is_invertible_with_lifted_inverse() {
    for (p, k) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
        let q = p.pow(k);
        for n in 1..=4usize {
            for seed in 0..50 {
                let g = random_gl(n, p, k, seed);
                assert!(det_is_unit_mod_p(&g, p));
                let inv = inverse_mod_pk(&g, p, k).unwrap();
                assert_eq!(mat_mul_mod(&g, &inv, q), identity_mod(n));
                assert_eq!(mat_mul_mod(&inv, &g, q), identity_mod(n));
                assert_eq!(random_gl(n, p, k, seed), g);
            }
        }
    }
}

/// Frequencies within three standard deviations of uniform.
fn assert_uniform(counts: &BTreeMap<ModMatrix, usize>, classes: usize, draws: usize) {
    assert_eq!(counts.len(), classes);
    let pr = 1.0 / classes as f64;
    let sigma = (pr * (1.0 - pr) / draws as f64).sqrt();
    for (g, &c) in counts {
        let freq = c as f64 / draws as f64;
        assert!((freq - pr).abs() <= 3.0 * sigma, "{g:?}: {freq} vs {pr} ± {}", 3.0 * sigma);
    }
}

#[test]
fn random_gl_is_uniform_on_small_groups() {
    const DRAWS: usize = 10_000;
    let mut counts = BTreeMap::new();
    for seed in 0..DRAWS as u64 {
        *counts.entry(random_gl(1, 3, 1, seed)).or_insert(0) += 1;
    }
    assert_uniform(&counts, 2, DRAWS);

    let mut counts = BTreeMap::new();
    for seed in 0..DRAWS as u64 {
        let g = random_gl(2, 2, 1, seed);
        assert_eq!(det_mod(&g, 2), 1);
        *counts.entry(g).or_insert(0) += 1;
    }
    assert_uniform(&counts, 6, DRAWS);
}

/// Orbit representatives of primitive vectors under the unit group.
fn orbit_count(modulus: u64, n: usize) -> usize {
    let units: Vec<u64> = (1..modulus).filter(|&u| gcd(u, modulus) == 1).collect();
    let reps: BTreeSet<Vec<u64>> = all_vectors(modulus, n)
        .filter(|v| v.iter().fold(modulus, |g, &x| gcd(g, x)) == 1)
        .map(|v| units.iter().map(|&u| v.iter().map(|&x| x * u % modulus).collect::<Vec<_>>()).min().unwrap())
        .collect();
    reps.len()
}

#[test]
fn projective_sizes_match_orbits() {
    for (modulus, n, size) in [(2, 2, 3), (4, 2, 6), (6, 2, 12), (9, 2, 12)] {
        let fm = factorize(modulus).unwrap();
        assert_eq!(enumerate_projective(&fm, n).len(), size);
        assert_eq!(orbit_count(modulus, n), size);
    }
}

#[test]
fn projective_space_is_product_of_components() {
    for modulus in 2..=30u64 {
        let fm = factorize(modulus).unwrap();
        for n in 1..=3usize {
            let whole = enumerate_projective(&fm, n);
            let parts: Vec<BTreeSet<Vec<u64>>> = fm
                .prime_powers()
                .iter()
                .map(|&q| {
                    enumerate_projective(&factorize(q).unwrap(), n).into_iter().map(|d| d.rep.coords).collect()
                })
                .collect();
            let product: usize = parts.iter().map(|s| s.len()).product();
            assert_eq!(whole.len(), product, "N={modulus} n={n}");
            let mut seen = BTreeSet::new();
            for d in &whole {
                let comps = crt_split(&d.rep, &fm);
                for (c, set) in comps.iter().zip(&parts) {
                    assert!(set.contains(&c.coords), "N={modulus}: component {:?} not canonical", c.coords);
                }
                assert!(seen.insert(comps.into_iter().map(|c| c.coords).collect::<Vec<_>>()));
            }
        }
    }
}

#[test]
fn canonical_form_is_unit_invariant() {
    for modulus in 2..=30u64 {
        let fm = factorize(modulus).unwrap();
        let units: Vec<u64> = (1..modulus).filter(|&u| gcd(u, modulus) == 1).collect();
        for n in 1..=3usize {
            for d in enumerate_projective(&fm, n) {
                for &u in &units {
                    let scaled: Vec<i64> = d.coords().iter().map(|&x| (x * u % modulus) as i64).collect();
                    assert_eq!(canonicalize(&ResidueVector::new(modulus, &scaled), &fm).unwrap(), d);
                }
            }
        }
    }
}

#[test]
fn general_linear_group_acts_transitively() {
    for q in [2u64, 3, 4] {
        let fm = factorize(q).unwrap();
        let p = fm.factors[0].0;
        let group: Vec<ModMatrix> = all_vectors(q, 4)
            .map(|e| vec![vec![e[0], e[1]], vec![e[2], e[3]]])
            .filter(|g| det_mod(g, q) % p != 0)
            .collect();
        let dirs = enumerate_projective(&fm, 2);
        for u in &dirs {
            let reached: BTreeSet<Direction> = group
                .iter()
                .map(|g| {
                    let gu: Vec<i64> = mat_vec_mod(g, u.coords(), q).iter().map(|&x| x as i64).collect();
                    canonicalize(&ResidueVector::new(q, &gu), &fm).unwrap()
                })
                .collect();
            assert_eq!(reached.len(), dirs.len(), "q={q} u={:?}", u.coords());
        }
    }
}

#[test]
fn lines_are_injective_and_sums_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for modulus in 2..=12u64 {
        let fm = factorize(modulus).unwrap();
        for n in 1..=3usize {
            let size = modulus.pow(n as u32) as usize;
            let f = GridFunction::from_values(modulus, n, (0..size).map(|_| rng.gen_range(0..5)).collect()).unwrap();
            for u in enumerate_projective(&fm, n) {
                for a in all_vectors(modulus, n) {
                    let line = Line::new(ResidueVector { modulus, coords: a.clone() }, u.clone());
                    let pts = line_points(&line);
                    let distinct: BTreeSet<&Vec<u64>> = pts.iter().collect();
                    assert_eq!(distinct.len(), modulus as usize);
                    let direct: u64 = (0..modulus)
                        .map(|t| {
                            let y: Vec<u64> =
                                a.iter().zip(u.coords()).map(|(x, c)| (x + t * c) % modulus).collect();
                            f.get(&y)
                        })
                        .sum();
                    assert_eq!(line_sum(&f, &line), direct);
                }
            }
        }
    }
}

#[test]
fn lines_split_as_products_of_component_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for modulus in [6u64, 10, 12] {
        let fm = factorize(modulus).unwrap();
        for n in 1..=3usize {
            for u in enumerate_projective(&fm, n) {
                let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..modulus)).collect();
                let line = Line::new(ResidueVector { modulus, coords: a.clone() }, u.clone());
                let whole: BTreeSet<Vec<u64>> = line_points(&line).into_iter().collect();
                let qs = fm.prime_powers();
                let comp_lines: Vec<Vec<Vec<u64>>> = qs
                    .iter()
                    .map(|&q| {
                        let cfm = factorize(q).unwrap();
                        let dir = canonicalize(&ResidueVector { modulus: q, coords: u.coords().to_vec() }.reduce(q), &cfm)
                            .unwrap();
                        let base = ResidueVector { modulus, coords: a.clone() }.reduce(q);
                        line_points(&Line::new(base, dir))
                    })
                    .collect();
                assert_eq!(comp_lines.len(), 2, "test moduli have two prime factors");
                let mut product = BTreeSet::new();
                for x0 in &comp_lines[0] {
                    for x1 in &comp_lines[1] {
                        let parts = [
                            ResidueVector { modulus: qs[0], coords: x0.clone() },
                            ResidueVector { modulus: qs[1], coords: x1.clone() },
                        ];
                        product.insert(crt_join(&fm, &parts).unwrap().coords);
                    }
                }
                assert_eq!(whole, product, "N={modulus} u={:?}", u.coords());
            }
        }
    }
}

#[test]
fn slice_counts_are_monotone_and_sum_to_line_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let modulus = [6u64, 10, 12][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=2usize);
        let size = modulus.pow(n as u32) as usize;
        let f = GridFunction::from_values(modulus, n, (0..size).map(|_| rng.gen_range(0..4)).collect()).unwrap();
        let p = factorize(modulus).unwrap().descending()[0].0;
        for e in maximal_profile(&f).unwrap().entries {
            let s = slice_profile(&f, &e.line, p).unwrap();
            let w = s.max();
            let b: Vec<usize> = (1..=w).map(|i| s.b_ge(i)).collect();
            assert!(b.windows(2).all(|x| x[0] >= x[1]));
            assert_eq!(b.iter().sum::<usize>() as u64, e.value);
        }
    }
}

/// Sum_i b_{>=i}^n (i^n - (i-1)^n) >= (f*(u) / (ln w + 1))^n on the maximizing line.
#[test]
fn slice_sum_dominates_log_scaled_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut checked = 0;
    for _ in 0..1000 {
        let modulus = [2u64, 3, 4, 6][rng.gen_range(0..4)];
        let n = 2usize;
        let size = modulus.pow(2) as usize;
        let f = GridFunction::from_values(modulus, n, (0..size).map(|_| rng.gen_range(0..5)).collect()).unwrap();
        let p = factorize(modulus).unwrap().descending()[0].0;
        let w = mweight(&f, p).unwrap();
        if w == 0 {
            continue;
        }
        for e in maximal_profile(&f).unwrap().entries {
            let s = slice_profile(&f, &e.line, p).unwrap();
            let lhs: u64 = (1..=w).map(|i| (s.b_ge(i) as u64).pow(2) * (i * i - (i - 1) * (i - 1))).sum();
            let rhs = (e.value as f64 / ((w as f64).ln() + 1.0)).powi(2);
            assert!(lhs as f64 >= rhs * (1.0 - 1e-12), "N={modulus} f={:?}", f.values);
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

fn apply_on_component(u: &Direction, g: &ModMatrix, pk: u64, modulus: u64) -> Direction {
    let fm = factorize(modulus).unwrap();
    let comps: Vec<ResidueVector> = crt_split(&u.rep, &fm)
        .into_iter()
        .map(|c| if c.modulus == pk { ResidueVector { modulus: pk, coords: mat_vec_mod(g, &c.coords, pk) } } else { c })
        .collect();
    canonicalize(&crt_join(&fm, &comps).unwrap(), &fm).unwrap()
}

#[test]
fn maximal_profile_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for (modulus, p, k) in [(2u64, 2u64, 1u32), (4, 2, 2), (8, 2, 3), (3, 3, 1), (9, 3, 2), (5, 5, 1), (6, 2, 1), (6, 3, 1), (12, 2, 2)] {
        let pk = p.pow(k);
        for n in 2..=3usize {
            if modulus.pow(n as u32) > 800 {
                continue;
            }
            let size = modulus.pow(n as u32) as usize;
            let f = GridFunction::from_values(modulus, n, (0..size).map(|_| rng.gen_range(0..4)).collect()).unwrap();
            let g = random_gl_with(n, p, k, &mut rng);
            let ginv = inverse_mod_pk(&g, p, k).unwrap();
            let gf = f.act(&ginv, pk).unwrap();
            let before = maximal_profile(&f).unwrap();
            let after = maximal_profile(&gf).unwrap();
            for e in &before.entries {
                let v = apply_on_component(&e.dir, &g, pk, modulus);
                assert_eq!(after.get(&v).unwrap().value, e.value, "N={modulus} n={n} u={:?}", e.dir.coords());
            }
        }
    }
}

/// (prod_{j<r} 1/(k_j ln p_j + 1) prod_i 1/(2(k_i + ceil(log_{p_i} n))))^n, primes descending.
fn set_constant_f64(modulus: u64, n: usize) -> f64 {
    let mut desc = factorize(modulus).unwrap().factors;
    desc.sort_by(|a, b| b.0.cmp(&a.0));
    let r = desc.len();
    let mut c = 1.0;
    for (j, &(p, k)) in desc.iter().enumerate() {
        if j + 1 < r {
            c /= k as f64 * (p as f64).ln() + 1.0;
        }
        let mut e = 0;
        while p.pow(e) < n as u64 {
            e += 1;
        }
        c /= 2.0 * (k + e) as f64;
    }
    c.powi(n as i32)
}

#[test]
fn set_constant_encloses_float_formula() {
    for modulus in 2..=60u64 {
        for n in 1..=3usize {
            let c = constant_set(&factorize(modulus).unwrap(), n, LogBase::Natural);
            let want = set_constant_f64(modulus, n);
            let iv = c.interval();
            assert!(iv.contains(want), "N={modulus} n={n}: {want} not in {iv:?}");
            assert!(iv.hi - iv.lo <= 1e-12 * want.max(1e-300));
        }
    }
}

#[test]
fn interval_verdicts_agree_with_float_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..500 {
        let modulus = [6u64, 10, 12, 15][rng.gen_range(0..4)];
        let n = rng.gen_range(1..=2usize);
        let size = modulus.pow(n as u32) as usize;
        let pts: Vec<Vec<u64>> = (0..size).filter(|_| rng.gen_bool(0.3)).map(|i| GridFunction::zeros(modulus, n).point(i)).collect();
        let s = GridFunction::indicator(modulus, n, &pts).unwrap();
        let r = check_set_bound(&s, LogBase::Natural).unwrap();
        let prof = maximal_profile(&s).unwrap();
        let mean = prof.sum_pow(n as u32).to_string().parse::<f64>().unwrap() / prof.num_directions() as f64;
        let rhs = set_constant_f64(modulus, n) * mean;
        assert!(r.rhs.interval().contains(rhs) || rhs == 0.0);
        let lhs = s.total() as f64;
        if (lhs - rhs).abs() > 1e-9 * rhs.max(1.0) {
            assert_eq!(r.holds, lhs >= rhs);
        }
    }
}

#[test]
fn set_and_maximal_bounds_agree_on_full_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for modulus in [2u64, 3, 4, 5, 7, 8, 9] {
        let fm = factorize(modulus).unwrap();
        for n in 2..=3usize {
            for _ in 0..20 {
                let size = modulus.pow(n as u32) as usize;
                let mut pts: BTreeSet<Vec<u64>> =
                    (0..size).filter(|_| rng.gen_bool(0.2)).map(|i| GridFunction::zeros(modulus, n).point(i)).collect();
                // a full line makes w* = N
                let dirs = enumerate_projective(&fm, n);
                let u = &dirs[rng.gen_range(0..dirs.len())];
                pts.extend(line_points(&Line::new(ResidueVector { modulus, coords: vec![0; n] }, u.clone())));
                let pts: Vec<Vec<u64>> = pts.into_iter().collect();
                let s = GridFunction::indicator(modulus, n, &pts).unwrap();
                let set = check_set_bound(&s, LogBase::Natural).unwrap();
                let max = check_maximal(&s, LogBase::Natural).unwrap();
                assert!(max.rhs.exact >= set.rhs.exact);
                if max.params["improved"] == false {
                    assert_eq!(max.rhs, set.rhs, "N={modulus} n={n}");
                }
            }
        }
    }
}
