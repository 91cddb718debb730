//! Integer vectors indexed by vertices: chip distributions and divisors.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A vector in `Z^V`. Entries may be negative.
///
/// The same type serves as a chip configuration (dynamic view) and as a
/// divisor (algebraic view).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChipDistribution(Vec<i64>);

impl ChipDistribution {
    pub fn new(values: Vec<i64>) -> Self {
        ChipDistribution(values)
    }

    pub fn zeros(n: usize) -> Self {
        ChipDistribution(vec![0; n])
    }

    pub fn constant(n: usize, value: i64) -> Self {
        ChipDistribution(vec![value; n])
    }

    /// Characteristic vector of `v`.
    pub fn unit(n: usize, v: usize) -> Self {
        let mut values = vec![0; n];
        values[v] = 1;
        ChipDistribution(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Pointwise `self >= other`.
    pub fn dominates(&self, other: &ChipDistribution) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn scaled(&self, k: i64) -> ChipDistribution {
        ChipDistribution(self.0.iter().map(|c| c * k).collect())
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<(), Error> {
        if self.0.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.0.len(),
            })
        }
    }
}

impl From<Vec<i64>> for ChipDistribution {
    fn from(values: Vec<i64>) -> Self {
        ChipDistribution(values)
    }
}

impl<const N: usize> From<[i64; N]> for ChipDistribution {
    fn from(values: [i64; N]) -> Self {
        ChipDistribution(values.to_vec())
    }
}

impl Index<usize> for ChipDistribution {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.0[v]
    }
}

impl IndexMut<usize> for ChipDistribution {
    fn index_mut(&mut self, v: usize) -> &mut i64 {
        &mut self.0[v]
    }
}

impl Add<&ChipDistribution> for &ChipDistribution {
    type Output = ChipDistribution;
    fn add(self, rhs: &ChipDistribution) -> ChipDistribution {
        assert_eq!(self.len(), rhs.len(), "length mismatch");
        ChipDistribution(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&ChipDistribution> for &ChipDistribution {
    type Output = ChipDistribution;
    fn sub(self, rhs: &ChipDistribution) -> ChipDistribution {
        assert_eq!(self.len(), rhs.len(), "length mismatch");
        ChipDistribution(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for ChipDistribution {
    type Output = ChipDistribution;
    fn add(self, rhs: ChipDistribution) -> ChipDistribution {
        &self + &rhs
    }
}

impl Sub for ChipDistribution {
    type Output = ChipDistribution;
    fn sub(self, rhs: ChipDistribution) -> ChipDistribution {
        &self - &rhs
    }
}

impl Neg for &ChipDistribution {
    type Output = ChipDistribution;
    fn neg(self) -> ChipDistribution {
        ChipDistribution(self.0.iter().map(|c| -c).collect())
    }
}

/// Comma separated, vertex-index order: `1,0,0,3`.
impl fmt::Display for ChipDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for ChipDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(ChipDistribution::default());
        }
        s.split(',')
            .map(|tok| tok.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map(ChipDistribution)
            .map_err(|_| Error::BadDistribution(s.to_string()))
    }
}

/// All non-negative integer vectors of length `n` summing to `total`, in
/// lexicographic order (largest first coordinate last).
pub fn compositions(n: usize, total: u64) -> Compositions {
    Compositions {
        n,
        current: if n == 0 {
            if total == 0 {
                Some(Vec::new())
            } else {
                None
            }
        } else {
            let mut first = vec![0i64; n];
            first[n - 1] = total as i64;
            Some(first)
        },
    }
}

pub struct Compositions {
    n: usize,
    current: Option<Vec<i64>>,
}

impl Iterator for Compositions {
    type Item = ChipDistribution;

    fn next(&mut self) -> Option<ChipDistribution> {
        let out = self.current.take()?;
        let n = self.n;
        if n > 0 {
            // Successor: find the rightmost position i < n-1 that can take one
            // more unit from the tail, bump it and push the rest of the tail to
            // the last slot.
            let mut next = out.clone();
            let mut i = n - 1;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                let tail: i64 = next[i + 1..].iter().sum();
                if tail > 0 {
                    next[i] += 1;
                    for c in next[i + 1..].iter_mut() {
                        *c = 0;
                    }
                    next[n - 1] = tail - 1;
                    self.current = Some(next);
                    break;
                }
            }
        }
        Some(ChipDistribution(out))
    }
}

/// Number of compositions of `total` into `n` non-negative parts, saturating.
pub fn composition_count(n: usize, total: u64) -> u64 {
    if n == 0 {
        return u64::from(total == 0);
    }
    // C(total + n - 1, n - 1)
    let k = (n - 1) as u64;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * u128::from(total + i) / u128::from(i);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}
