//! Closed f64 intervals with outward rounding, used for the transcendental
//! factors of the bound constants.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Base of the unsubscripted logarithms appearing in the bound constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

fn widen(lo: f64, hi: f64) -> Interval {
    Interval { lo: lo.next_down(), hi: hi.next_up() }
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn from_u64(x: u64) -> Self {
        let f = x as f64;
        if f as u64 == x {
            Self::point(f)
        } else {
            widen(f, f)
        }
    }

    pub fn from_rational(x: &BigRational) -> Self {
        let f = x.to_f64().expect("finite rational");
        widen(f, f)
    }

    /// log(x) in the requested base; exact zero at x = 1.
    pub fn log(x: u64, base: LogBase) -> Self {
        if x == 1 {
            return Self::point(0.0);
        }
        let v = match base {
            LogBase::Natural => (x as f64).ln(),
            LogBase::Two => (x as f64).log2(),
        };
        // libm log is accurate to within one ulp; two ulps on each side is safe.
        Interval { lo: v.next_down().next_down(), hi: v.next_up().next_up() }
    }

    pub fn add(self, o: Interval) -> Self {
        widen(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn mul(self, o: Interval) -> Self {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi)
    }

    /// 1/x for an interval not containing zero.
    pub fn recip(self) -> Self {
        assert!(self.lo > 0.0 || self.hi < 0.0, "reciprocal of interval containing 0");
        widen(1.0 / self.hi, 1.0 / self.lo)
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::point(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_encloses() {
        let i = Interval::log(2, LogBase::Natural);
        assert!(i.contains(std::f64::consts::LN_2));
        assert!(i.lo < i.hi);
        assert_eq!(Interval::log(1, LogBase::Natural), Interval::point(0.0));
        assert!(Interval::log(8, LogBase::Two).contains(3.0));
    }

    #[test]
    fn arithmetic_is_outward() {
        let a = Interval::point(0.1).add(Interval::point(0.2));
        assert!(a.contains(0.30000000000000004) && a.contains(0.3));
        let r = Interval::point(3.0).recip();
        assert!(r.lo < 1.0 / 3.0 && r.hi > 1.0 / 3.0 - 1e-17);
        let p = Interval::point(1.5).powi(3);
        assert!(p.contains(3.375));
    }
}
