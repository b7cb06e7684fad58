use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;

use super::ProtocolError;

const MAX_DENOMINATOR: u64 = 1_000_000;

/// A rational exponent in `(0, 1]`, kept exact so round and neighbor
/// budgets never depend on floating-point rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Epsilon, ProtocolError> {
        if num == 0 || den == 0 || num > den || den > MAX_DENOMINATOR {
            return Err(ProtocolError::BadEpsilon(format!("{num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(Epsilon {
            num: num / g,
            den: den / g,
        })
    }

    pub fn one() -> Epsilon {
        Epsilon { num: 1, den: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// `ceil(1 / eps)`.
    pub fn rounds(&self) -> usize {
        self.den.div_ceil(self.num) as usize
    }

    /// `max(1, ceil(n^eps))`: the smallest `k >= 1` with `k^den >= n^num`.
    pub fn neighbor_cap(&self, n: usize) -> usize {
        if n <= 1 {
            return 1;
        }
        let target = num_traits::pow(BigUint::from(n), self.num as usize);
        let (mut lo, mut hi) = (1usize, n);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if num_traits::pow(BigUint::from(mid), self.den as usize) >= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }
}

impl FromStr for Epsilon {
    type Err = ProtocolError;

    /// Accepts `a/b` or a decimal such as `0.5`.
    fn from_str(s: &str) -> Result<Epsilon, ProtocolError> {
        let bad = || ProtocolError::BadEpsilon(s.to_string());
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num = a.trim().parse().map_err(|_| bad())?;
            let den = b.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(num, den);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
            || frac.len() > 6
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?;
        Epsilon::new(num, den)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
