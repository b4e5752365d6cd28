//! The projective space P(Z/NZ)^{n-1}: vectors with a unit coordinate modulo
//! every prime power of N, up to multiplication by units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{crt_join, crt_split, inv_mod, FactoredModulus, ResidueVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction {
    pub rep: ResidueVector,
}

impl Direction {
    pub fn coords(&self) -> &[u64] {
        &self.rep.coords
    }

    pub fn modulus(&self) -> u64 {
        self.rep.modulus
    }
}

/// Canonical form of one prime-power component: the first unit coordinate is
/// scaled to 1. `None` if there is no unit coordinate.
pub fn canonical_component(v: &[u64], p: u64, q: u64) -> Option<Vec<u64>> {
    let first = v.iter().position(|&x| x % p != 0)?;
    let s = inv_mod(v[first] % q, q)?;
    Some(v.iter().map(|&x| ((x % q) as u128 * s as u128 % q as u128) as u64).collect())
}

pub fn canonicalize(v: &ResidueVector, fm: &FactoredModulus) -> Result<Direction> {
    let parts = crt_split(v, fm);
    let mut canon = Vec::with_capacity(parts.len());
    for (part, &(p, _)) in parts.iter().zip(&fm.factors) {
        let c = canonical_component(&part.coords, p, part.modulus)
            .ok_or(Error::NotProjective(part.modulus))?;
        canon.push(ResidueVector { modulus: part.modulus, coords: c });
    }
    Ok(Direction { rep: crt_join(fm, &canon)? })
}

/// Canonical representatives over Z/p^kZ, unsorted: coordinates before the
/// leading 1 are multiples of p, coordinates after it are arbitrary.
pub fn enumerate_prime_power(p: u64, k: u32, n: usize) -> Vec<Vec<u64>> {
    let q = p.pow(k);
    let mut out = Vec::new();
    for lead in 0..n {
        let mut radices = vec![0u64; n];
        for (i, r) in radices.iter_mut().enumerate() {
            *r = if i < lead { q / p } else if i == lead { 1 } else { q };
        }
        let total: u64 = radices.iter().product();
        for mut idx in 0..total {
            let mut v = vec![0u64; n];
            for i in (0..n).rev() {
                let digit = idx % radices[i];
                idx /= radices[i];
                v[i] = if i < lead { digit * p } else if i == lead { 1 } else { digit };
            }
            out.push(v);
        }
    }
    out
}

pub fn enumerate_projective(fm: &FactoredModulus, n: usize) -> Vec<Direction> {
    let comps: Vec<(u64, Vec<Vec<u64>>)> = fm
        .factors
        .iter()
        .map(|&(p, k)| (p.pow(k), enumerate_prime_power(p, k, n)))
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; comps.len()];
    loop {
        let parts: Vec<ResidueVector> = comps
            .iter()
            .zip(&idx)
            .map(|((q, list), &i)| ResidueVector { modulus: *q, coords: list[i].clone() })
            .collect();
        out.push(Direction { rep: crt_join(fm, &parts).expect("component count matches") });
        let mut t = 0;
        loop {
            if t == comps.len() {
                out.sort();
                return out;
            }
            idx[t] += 1;
            if idx[t] < comps[t].1.len() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

pub fn projective_size(fm: &FactoredModulus, n: usize) -> u64 {
    fm.factors
        .iter()
        .map(|&(p, k)| {
            p.pow((k - 1) * (n as u32 - 1)) * (p.pow(n as u32) - 1) / (p - 1)
        })
        .product()
}

/// Directions over the prime power p^k alone, sorted.
pub fn enumerate_projective_pk(p: u64, k: u32, n: usize) -> Vec<Vec<u64>> {
    let mut v = enumerate_prime_power(p, k, n);
    v.sort();
    v
}
