//! Arithmetic over Z/NZ: factorization, CRT decomposition, and random
//! invertible matrices over Z/p^kZ.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredModulus {
    pub n: u64,
    /// (p, k) with ascending primes.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredModulus {
    pub fn new(n: u64) -> Result<Self> {
        factorize(n)
    }

    /// Factors with descending primes, p_1 > p_2 > ... > p_r.
    pub fn descending(&self) -> Vec<(u64, u32)> {
        let mut f = self.factors.clone();
        f.reverse();
        f
    }

    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, k)| p.pow(k)).collect()
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Exponent of `p` in N, or an error when p does not divide N.
    pub fn exponent_of(&self, p: u64) -> Result<u32> {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, k)| k)
            .ok_or(Error::InvalidPrime(p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueVector {
    pub modulus: u64,
    pub coords: Vec<u64>,
}

impl ResidueVector {
    pub fn new(modulus: u64, coords: &[i64]) -> Self {
        let m = modulus as i64;
        ResidueVector { modulus, coords: coords.iter().map(|&c| c.rem_euclid(m) as u64).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn reduce(&self, q: u64) -> ResidueVector {
        ResidueVector { modulus: q, coords: self.coords.iter().map(|c| c % q).collect() }
    }
}

pub fn factorize(n: u64) -> Result<FactoredModulus> {
    if n <= 1 {
        return Err(Error::InvalidModulus(n));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut k = 0;
            while m % d == 0 {
                m /= d;
                k += 1;
            }
            factors.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(FactoredModulus { n, factors })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.factors == vec![(n, 1)]).unwrap_or(false)
}

/// (p, e) with q = p^e, if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factorize(q).ok()?;
    if f.factors.len() == 1 {
        Some(f.factors[0])
    } else {
        None
    }
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Inverse of `a` modulo `m`, when gcd(a, m) = 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd((a % m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

pub fn crt_split(x: &ResidueVector, fm: &FactoredModulus) -> Vec<ResidueVector> {
    fm.prime_powers().into_iter().map(|q| x.reduce(q)).collect()
}

pub fn crt_join(fm: &FactoredModulus, comps: &[ResidueVector]) -> Result<ResidueVector> {
    let qs = fm.prime_powers();
    if comps.len() != qs.len() {
        return Err(Error::Structure(format!(
            "expected {} CRT components, got {}",
            qs.len(),
            comps.len()
        )));
    }
    let n = comps[0].dim();
    if comps.iter().any(|c| c.dim() != n) {
        return Err(Error::Structure("CRT components have different lengths".into()));
    }
    let mut coords = vec![0u64; n];
    for (c, &q) in comps.iter().zip(&qs) {
        if c.modulus != q {
            return Err(Error::Structure(format!("component modulus {} != {}", c.modulus, q)));
        }
        let rest = fm.n / q;
        let e = (rest as u128 * inv_mod(rest % q, q).unwrap() as u128) % fm.n as u128;
        for (acc, &ci) in coords.iter_mut().zip(&c.coords) {
            *acc = ((*acc as u128 + e * ci as u128) % fm.n as u128) as u64;
        }
    }
    Ok(ResidueVector { modulus: fm.n, coords })
}

/// Square matrix over Z/qZ stored row-major as nested vectors.
pub type ModMatrix = Vec<Vec<u64>>;

pub fn mat_mul_mod(a: &ModMatrix, b: &ModMatrix, q: u64) -> ModMatrix {
    let n = a.len();
    let m = b[0].len();
    let mut c = vec![vec![0u64; m]; n];
    for i in 0..n {
        for t in 0..b.len() {
            let ait = a[i][t] as u128;
            if ait == 0 {
                continue;
            }
            for j in 0..m {
                c[i][j] = ((c[i][j] as u128 + ait * b[t][j] as u128) % q as u128) as u64;
            }
        }
    }
    c
}

pub fn mat_vec_mod(a: &ModMatrix, v: &[u64], q: u64) -> Vec<u64> {
    a.iter()
        .map(|row| {
            (row.iter().zip(v).map(|(&x, &y)| x as u128 * y as u128).sum::<u128>() % q as u128)
                as u64
        })
        .collect()
}

pub fn identity_mod(n: usize) -> ModMatrix {
    (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect()
}

/// Inverse over the prime field F_p, or `None` when singular.
pub fn inverse_mod_p(a: &ModMatrix, p: u64) -> Option<ModMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(|x| x % p).collect();
            r.extend((0..n).map(|j| (i == j) as u64));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        let inv = inv_mod(m[col][col], p)?;
        for x in m[col].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..2 * n {
                    m[r][c] = (m[r][c] + p * p - f * m[col][c] % p) % p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det_is_unit_mod_p(a: &ModMatrix, p: u64) -> bool {
    inverse_mod_p(a, p).is_some()
}

/// Inverse modulo p^k obtained by Newton lifting X <- X(2I - AX) of the
/// inverse modulo p.
pub fn inverse_mod_pk(a: &ModMatrix, p: u64, k: u32) -> Option<ModMatrix> {
    let q = p.pow(k);
    let n = a.len();
    let mut x = inverse_mod_p(a, p)?;
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let ax = mat_mul_mod(a, &x, q);
        let mut corr = identity_mod(n);
        for i in 0..n {
            for j in 0..n {
                let two = if i == j { 2 } else { 0 };
                corr[i][j] = (two + q - ax[i][j]) % q;
            }
        }
        x = mat_mul_mod(&x, &corr, q);
    }
    Some(x)
}

/// Uniform element of GL_n(Z/p^kZ) by rejection sampling on the determinant
/// modulo p.
pub fn random_gl_with<R: Rng>(n: usize, p: u64, k: u32, rng: &mut R) -> ModMatrix {
    let q = p.pow(k);
    loop {
        let g: ModMatrix = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
        if det_is_unit_mod_p(&g, p) {
            return g;
        }
    }
}

pub fn random_gl(n: usize, p: u64, k: u32, seed: u64) -> ModMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_gl_with(n, p, k, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(7).unwrap().factors, vec![(7, 1)]);
        assert_eq!(factorize(1), Err(Error::InvalidModulus(1)));
        assert_eq!(factorize(12).unwrap().descending(), vec![(3, 1), (2, 2)]);
    }

    #[test]
    fn crt_examples() {
        let fm6 = factorize(6).unwrap();
        let x = ResidueVector::new(6, &[5]);
        let parts = crt_split(&x, &fm6);
        assert_eq!(parts[0], ResidueVector::new(2, &[1]));
        assert_eq!(parts[1], ResidueVector::new(3, &[2]));
        assert_eq!(crt_join(&fm6, &parts).unwrap(), x);
        let fm12 = factorize(12).unwrap();
        let parts = vec![ResidueVector::new(4, &[3]), ResidueVector::new(3, &[1])];
        assert_eq!(crt_join(&fm12, &parts).unwrap(), ResidueVector::new(12, &[7]));
        assert!(crt_join(&fm12, &parts[..1]).is_err());
    }

    #[test]
    fn gl1_f2_is_trivial() {
        for seed in 0..20 {
            assert_eq!(random_gl(1, 2, 1, seed), vec![vec![1]]);
        }
    }

    #[test]
    fn lifted_inverse() {
        for seed in 0..50 {
            let g = random_gl(3, 2, 3, seed);
            let gi = inverse_mod_pk(&g, 2, 3).unwrap();
            assert_eq!(mat_mul_mod(&g, &gi, 8), identity_mod(3));
            let g = random_gl(2, 3, 2, seed);
            let gi = inverse_mod_pk(&g, 3, 2).unwrap();
            assert_eq!(mat_mul_mod(&gi, &g, 9), identity_mod(2));
        }
    }

    #[test]
    fn inverse_mod_examples() {
        assert_eq!(inv_mod(3, 4), Some(3));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(inv_mod(5, 1), Some(0));
    }
}
