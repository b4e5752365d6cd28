//! Lines, grid functions, maximal functions and slice profiles over (Z/NZ)^n.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projective::{enumerate_projective, Direction};
use crate::ring::{factorize, FactoredModulus, ModMatrix, ResidueVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub base: ResidueVector,
    pub dir: Direction,
}

impl Line {
    pub fn new(base: ResidueVector, dir: Direction) -> Self {
        Line { base, dir }
    }

    pub fn modulus(&self) -> u64 {
        self.base.modulus
    }

    pub fn point(&self, t: u64) -> Vec<u64> {
        let n = self.modulus();
        self.base
            .coords
            .iter()
            .zip(self.dir.coords())
            .map(|(&a, &u)| ((a as u128 + t as u128 * u as u128) % n as u128) as u64)
            .collect()
    }
}

pub fn line_points(l: &Line) -> Vec<Vec<u64>> {
    (0..l.modulus()).map(|t| l.point(t)).collect()
}

/// Dense non-negative integer function on (Z/NZ)^n, row-major with the first
/// coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFunction {
    pub modulus: u64,
    pub n: usize,
    pub values: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    #[serde(rename = "N")]
    modulus: u64,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<u64>>>,
}

impl GridFunction {
    pub fn zeros(modulus: u64, n: usize) -> Self {
        GridFunction { modulus, n, values: vec![0; (modulus as usize).pow(n as u32)] }
    }

    pub fn constant(modulus: u64, n: usize, c: u64) -> Self {
        GridFunction { modulus, n, values: vec![c; (modulus as usize).pow(n as u32)] }
    }

    pub fn from_values(modulus: u64, n: usize, values: Vec<u64>) -> Result<Self> {
        if values.len() != (modulus as usize).pow(n as u32) {
            return Err(Error::Structure(format!(
                "expected {} values, got {}",
                (modulus as usize).pow(n as u32),
                values.len()
            )));
        }
        Ok(GridFunction { modulus, n, values })
    }

    pub fn indicator(modulus: u64, n: usize, points: &[Vec<u64>]) -> Result<Self> {
        let mut f = Self::zeros(modulus, n);
        for x in points {
            if x.len() != n || x.iter().any(|&c| c >= modulus) {
                return Err(Error::Structure(format!("point {:?} is not in the grid", x)));
            }
            let i = f.index(x);
            f.values[i] = 1;
        }
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index(&self, x: &[u64]) -> usize {
        x.iter().fold(0usize, |acc, &c| acc * self.modulus as usize + c as usize)
    }

    pub fn point(&self, mut idx: usize) -> Vec<u64> {
        let mut x = vec![0u64; self.n];
        for i in (0..self.n).rev() {
            x[i] = (idx % self.modulus as usize) as u64;
            idx /= self.modulus as usize;
        }
        x
    }

    pub fn get(&self, x: &[u64]) -> u64 {
        self.values[self.index(x)]
    }

    pub fn is_indicator(&self) -> bool {
        self.values.iter().all(|&v| v <= 1)
    }

    pub fn support(&self) -> Vec<Vec<u64>> {
        (0..self.len()).filter(|&i| self.values[i] > 0).map(|i| self.point(i)).collect()
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    pub fn sum_pow(&self, e: u32) -> BigInt {
        self.values.iter().map(|&v| BigInt::from(v).pow(e)).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GridJson {
            modulus: self.modulus,
            n: self.n,
            values: Some(self.values.clone()),
            points: None,
        })
        .expect("grid serializes")
    }

    pub fn to_points_json(&self) -> Result<String> {
        if !self.is_indicator() {
            return Err(Error::Structure("point form requires a 0/1 function".into()));
        }
        Ok(serde_json::to_string(&GridJson {
            modulus: self.modulus,
            n: self.n,
            values: None,
            points: Some(self.support()),
        })
        .expect("grid serializes"))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: GridJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if g.modulus < 2 {
            return Err(Error::InvalidModulus(g.modulus));
        }
        match (g.values, g.points) {
            (Some(v), None) => Self::from_values(g.modulus, g.n, v),
            (None, Some(p)) => Self::indicator(g.modulus, g.n, &p),
            _ => Err(Error::Parse("exactly one of \"values\" or \"points\" is required".into())),
        }
    }

    /// (G·f)(x) = f(G^{-1}x) where G acts on the p^k-component of x and fixes
    /// the complementary component.
    pub fn act(&self, ginv: &ModMatrix, pk: u64) -> Result<Self> {
        let fm = factorize(self.modulus)?;
        let n1 = self.modulus / pk;
        let mut out = Self::zeros(self.modulus, self.n);
        for idx in 0..self.len() {
            let x = self.point(idx);
            let x0: Vec<u64> = x.iter().map(|c| c % pk).collect();
            let y: Vec<u64> = x.iter().map(|c| c % n1).collect();
            let gx0 = crate::ring::mat_vec_mod(ginv, &x0, pk);
            let src = join_pk(&fm, pk, &gx0, &y)?;
            out.values[idx] = self.get(&src);
        }
        Ok(out)
    }
}

/// CRT-join a p^k-component and a complementary N/p^k-component.
pub fn join_pk(fm: &FactoredModulus, pk: u64, x0: &[u64], y: &[u64]) -> Result<Vec<u64>> {
    let n = fm.n;
    let n1 = n / pk;
    if n1 == 1 {
        return Ok(x0.to_vec());
    }
    let e0 = (n1 as u128 * crate::ring::inv_mod(n1 % pk, pk).ok_or(Error::Structure(
        "p^k and N/p^k must be coprime".into(),
    ))? as u128)
        % n as u128;
    let e1 = (pk as u128 * crate::ring::inv_mod(pk % n1, n1).unwrap() as u128) % n as u128;
    Ok(x0
        .iter()
        .zip(y)
        .map(|(&a, &b)| ((e0 * a as u128 + e1 * b as u128) % n as u128) as u64)
        .collect())
}

pub fn line_sum(f: &GridFunction, l: &Line) -> u64 {
    (0..l.modulus()).map(|t| f.get(&l.point(t))).sum()
}

/// f*(u) and the line attaining it whose base point is lexicographically
/// smallest among all base points of maximizing lines.
pub fn maximal_function(f: &GridFunction, u: &Direction) -> (u64, Line) {
    // Each line is visited once, starting from its lexicographically smallest
    // point; visiting in lexicographic order makes the first strict maximum
    // the line with the smallest base point.
    let size = f.len();
    let mut seen = vec![false; size];
    let nmod = f.modulus;
    let mut best: Option<(u64, usize)> = None;
    for start in 0..size {
        if seen[start] {
            continue;
        }
        let a = f.point(start);
        let mut x = a.clone();
        let mut s = 0u64;
        for _ in 0..nmod {
            let idx = f.index(&x);
            seen[idx] = true;
            s += f.values[idx];
            for (c, &d) in x.iter_mut().zip(u.coords()) {
                *c = (*c + d) % nmod;
            }
        }
        if best.map_or(true, |(b, _)| s > b) {
            best = Some((s, start));
        }
    }
    let (v, start) = best.expect("grid is nonempty");
    (v, Line::new(ResidueVector { modulus: nmod, coords: f.point(start) }, u.clone()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub dir: Direction,
    pub value: u64,
    pub line: Line,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalProfile {
    pub entries: Vec<ProfileEntry>,
}

impl MaximalProfile {
    pub fn num_directions(&self) -> usize {
        self.entries.len()
    }

    /// w = max_u f*(u).
    pub fn w(&self) -> u64 {
        self.entries.iter().map(|e| e.value).max().unwrap_or(0)
    }

    pub fn count_ge(&self, k: u64) -> usize {
        self.entries.iter().filter(|e| e.value >= k).count()
    }

    pub fn count_eq(&self, k: u64) -> usize {
        self.entries.iter().filter(|e| e.value == k).count()
    }

    /// Fraction of directions with f*(u) >= k.
    pub fn eps_ge(&self, k: u64) -> BigRational {
        BigRational::new(self.count_ge(k).into(), self.num_directions().into())
    }

    pub fn eps_eq(&self, k: u64) -> BigRational {
        BigRational::new(self.count_eq(k).into(), self.num_directions().into())
    }

    pub fn directions_ge(&self, k: u64) -> Vec<&Direction> {
        self.entries.iter().filter(|e| e.value >= k).map(|e| &e.dir).collect()
    }

    pub fn sum_pow(&self, e: u32) -> BigInt {
        self.entries.iter().map(|x| BigInt::from(x.value).pow(e)).sum()
    }

    /// Mean of f*(u)^e over directions, exactly.
    pub fn mean_pow(&self, e: u32) -> BigRational {
        BigRational::new(self.sum_pow(e), self.num_directions().into())
    }

    pub fn get(&self, u: &Direction) -> Option<&ProfileEntry> {
        self.entries.binary_search_by(|e| e.dir.cmp(u)).ok().map(|i| &self.entries[i])
    }
}

pub fn maximal_profile(f: &GridFunction) -> Result<MaximalProfile> {
    let fm = factorize(f.modulus)?;
    let entries = enumerate_projective(&fm, f.n)
        .into_iter()
        .map(|u| {
            let (value, line) = maximal_function(f, &u);
            ProfileEntry { dir: u, value, line }
        })
        .collect();
    Ok(MaximalProfile { entries })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceProfile {
    pub p: u64,
    pub k: u32,
    /// Modulus of the complementary factor N_1 = N / p^k.
    pub n1: u64,
    /// Points y of L_1 in order of t mod N_1.
    pub ys: Vec<Vec<u64>>,
    /// g_{L(u)}(y) for each y in `ys`.
    pub g: Vec<u64>,
}

impl SliceProfile {
    pub fn b_ge(&self, i: u64) -> usize {
        self.g.iter().filter(|&&v| v >= i).count()
    }

    pub fn b_eq(&self, i: u64) -> usize {
        self.g.iter().filter(|&&v| v == i).count()
    }

    pub fn max(&self) -> u64 {
        self.g.iter().copied().max().unwrap_or(0)
    }
}

/// Split a line over Z/(p^k N_1)Z into its p-part L_0 and complementary part
/// L_1 and sum f over each slice L_0 x {y}.
pub fn slice_profile(f: &GridFunction, l: &Line, p: u64) -> Result<SliceProfile> {
    let fm = factorize(f.modulus)?;
    let k = fm.exponent_of(p)?;
    let pk = p.pow(k);
    let n1 = f.modulus / pk;
    let mut g = vec![0u64; n1 as usize];
    for t in 0..f.modulus {
        g[(t % n1) as usize] += f.get(&l.point(t));
    }
    let ys = (0..n1).map(|t| l.point(t).iter().map(|c| c % n1).collect()).collect();
    Ok(SliceProfile { p, k, n1, ys, g })
}

pub fn mweight_from_profile(f: &GridFunction, prof: &MaximalProfile, p: u64) -> Result<u64> {
    let mut best = 0;
    for e in &prof.entries {
        best = best.max(slice_profile(f, &e.line, p)?.max());
    }
    Ok(best)
}

/// p-maximal weight of f.
pub fn mweight(f: &GridFunction, p: u64) -> Result<u64> {
    factorize(f.modulus)?.exponent_of(p)?;
    let prof = maximal_profile(f)?;
    mweight_from_profile(f, &prof, p)
}

/// Whether at least an eps fraction of directions have a line meeting S in at
/// least m points. `eps` is compared exactly as a rational.
pub fn is_m_eps_kakeya(s: &GridFunction, m: u64, eps: &BigRational) -> Result<bool> {
    let prof = maximal_profile(s)?;
    Ok(is_m_eps_from_profile(&prof, m, eps))
}

pub fn is_m_eps_from_profile(prof: &MaximalProfile, m: u64, eps: &BigRational) -> bool {
    BigRational::from_integer(prof.count_ge(m).into())
        >= eps * BigRational::from_integer(prof.num_directions().into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::canonicalize;

    fn dir(n: u64, c: &[i64]) -> Direction {
        canonicalize(&ResidueVector::new(n, c), &factorize(n).unwrap()).unwrap()
    }

    #[test]
    fn line_point_examples() {
        let l = Line::new(ResidueVector::new(2, &[0, 0]), dir(2, &[1, 1]));
        assert_eq!(line_points(&l), vec![vec![0, 0], vec![1, 1]]);
        let l = Line::new(ResidueVector::new(3, &[1, 0]), dir(3, &[1, 2]));
        assert_eq!(line_points(&l), vec![vec![1, 0], vec![2, 2], vec![0, 1]]);
        let l = Line::new(ResidueVector::new(4, &[0, 0]), dir(4, &[1, 2]));
        let mut pts = line_points(&l);
        pts.sort();
        pts.dedup();
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn maximal_function_examples() {
        let f = GridFunction::indicator(2, 2, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let (v, l) = maximal_function(&f, &dir(2, &[1, 1]));
        assert_eq!(v, 2);
        assert_eq!(l.base.coords, vec![0, 1]);
        let prof = maximal_profile(&f).unwrap();
        assert!(prof.entries.iter().all(|e| e.value == 2));
        let f = GridFunction::indicator(2, 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        let prof = maximal_profile(&f).unwrap();
        assert_eq!(prof.get(&dir(2, &[1, 0])).unwrap().value, 2);
        assert_eq!(prof.get(&dir(2, &[0, 1])).unwrap().value, 1);
        assert_eq!(prof.get(&dir(2, &[1, 1])).unwrap().value, 1);
        let ones = GridFunction::constant(5, 2, 1);
        assert!(maximal_profile(&ones).unwrap().entries.iter().all(|e| e.value == 5));
        let f = GridFunction::from_values(3, 1, vec![2, 0, 3]).unwrap();
        let prof = maximal_profile(&f).unwrap();
        assert_eq!(prof.entries.len(), 1);
        assert_eq!(prof.entries[0].value, 5);
    }

    #[test]
    fn slice_examples() {
        let ones = GridFunction::constant(6, 2, 1);
        let l = Line::new(ResidueVector::new(6, &[1, 2]), dir(6, &[1, 5]));
        let sp = slice_profile(&ones, &l, 2).unwrap();
        assert_eq!(sp.g, vec![2, 2, 2]);
        assert_eq!((sp.b_ge(1), sp.b_ge(2), sp.b_ge(3)), (3, 3, 0));
        let f = GridFunction::indicator(6, 2, &line_points(&l)).unwrap();
        let sp = slice_profile(&f, &l, 3).unwrap();
        assert_eq!(sp.g, vec![3, 3]);
        assert_eq!(sp.b_ge(3), 2);
        assert_eq!(slice_profile(&f, &l, 5), Err(Error::InvalidPrime(5)));
        assert_eq!(mweight(&ones, 2).unwrap(), 2);
        assert_eq!(mweight(&ones, 3).unwrap(), 3);
    }

    #[test]
    fn kakeya_predicate() {
        let f = GridFunction::indicator(2, 2, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let one = BigRational::from_integer(1.into());
        assert!(is_m_eps_kakeya(&f, 2, &one).unwrap());
        assert!(!is_m_eps_kakeya(&f, 3, &BigRational::new(1.into(), 100.into())).unwrap());
        assert!(is_m_eps_kakeya(&GridFunction::constant(4, 2, 1), 4, &one).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let f = GridFunction::from_values(3, 2, (0..9).collect()).unwrap();
        assert_eq!(GridFunction::from_json(&f.to_json()).unwrap(), f);
        let s = GridFunction::indicator(2, 2, &[vec![1, 0]]).unwrap();
        let js = s.to_points_json().unwrap();
        assert_eq!(js, r#"{"N":2,"n":2,"points":[[1,0]]}"#);
        assert_eq!(GridFunction::from_json(&js).unwrap(), s);
        assert!(GridFunction::from_json(r#"{"N":2,"n":2}"#).is_err());
    }
}
