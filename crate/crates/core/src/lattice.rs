//! Exact integer linear algebra over the image lattice of the Laplacian.
//!
//! Two reductions are kept side by side:
//!
//! * an echelon (Hermite-style) basis of the column span of `L`, used for
//!   membership tests and canonical coset representatives;
//! * the Smith form of the first `n - 1` rows of `L`, whose invariant factors
//!   give the class group order and whose left transform walks the cosets.
//!
//! Every column of `L` sums to zero, so the span sits inside the degree-zero
//! sublattice, and dropping the last coordinate identifies that sublattice
//! with `Z^(n-1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chips::ChipDistribution;
use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;

/// Largest class group this crate is willing to enumerate explicitly.
pub const DEFAULT_CLASS_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct LaplacianLattice {
    n: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    invariants: Vec<BigInt>,
    /// Inverse of the Smith left transform, `(n-1) x (n-1)`.
    left_inverse: Vec<Vec<BigInt>>,
    pic0_order: u64,
}

impl LaplacianLattice {
    pub fn new(laplacian: &LaplacianMatrix) -> Result<Self> {
        let n = laplacian.dim();
        let generators: Vec<Vec<BigInt>> = (0..n)
            .map(|c| laplacian.column(c).into_iter().map(BigInt::from).collect())
            .collect();
        let (basis, pivots) = echelon_form(generators, n);
        let expected = n.saturating_sub(1);
        if basis.len() != expected {
            return Err(Error::RankDeficient {
                rank: basis.len(),
                expected,
            });
        }

        let reduced: Vec<Vec<BigInt>> = (0..expected)
            .map(|r| laplacian.row(r).iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let snf = SmithForm::compute(reduced, n);
        if snf.diagonal.iter().any(Zero::is_zero) {
            let rank = snf.diagonal.iter().filter(|d| !d.is_zero()).count();
            return Err(Error::RankDeficient { rank, expected });
        }
        let order: BigInt = snf.diagonal.iter().product();
        let pic0_order = order.to_u64().ok_or(Error::SizeLimitExceeded {
            what: "class group order",
            limit: u64::MAX,
            actual: u64::MAX,
        })?;

        Ok(LaplacianLattice {
            n,
            basis,
            pivots,
            invariants: snf.diagonal,
            left_inverse: snf.left_inverse,
            pic0_order,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Echelon basis rows; row `i` has its first nonzero (positive) entry at
    /// `pivot_columns()[i]`.
    pub fn hnf_basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    pub fn snf_invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    /// Number of linear equivalence classes at any fixed degree.
    pub fn pic0_order(&self) -> u64 {
        self.pic0_order
    }

    fn reduce(&self, x: &[i64]) -> Vec<BigInt> {
        let mut w: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = w[p].div_floor(&row[p]);
            if !q.is_zero() {
                for j in p..self.n {
                    w[j] -= &q * &row[j];
                }
            }
        }
        w
    }

    /// Whether `w` lies in the column span of `L`.
    pub fn contains(&self, w: &ChipDistribution) -> Result<bool> {
        w.check_len(self.n)?;
        Ok(self.reduce(w.as_slice()).iter().all(Zero::is_zero))
    }

    /// `x ~ y`: `x - y` lies in the Laplacian image.
    pub fn equivalent(&self, x: &ChipDistribution, y: &ChipDistribution) -> Result<bool> {
        x.check_len(self.n)?;
        y.check_len(self.n)?;
        if x.degree() != y.degree() {
            return Ok(false);
        }
        self.contains(&(x - y))
    }

    /// Unique representative of the class of `x`: every pivot coordinate is
    /// reduced into `[0, pivot)`.
    ///
    /// Panics if `x` has the wrong length or the result leaves `i64`.
    pub fn canonical_rep(&self, x: &ChipDistribution) -> ChipDistribution {
        assert_eq!(
            x.len(),
            self.n,
            "distribution length does not match lattice"
        );
        ChipDistribution::new(
            self.reduce(x.as_slice())
                .iter()
                .map(|v| v.to_i64().expect("canonical representative exceeds i64"))
                .collect(),
        )
    }

    /// One canonical representative per class of degree `degree`, sorted.
    pub fn enumerate_classes(&self, degree: i64) -> Result<Vec<ChipDistribution>> {
        self.enumerate_classes_with_limit(degree, DEFAULT_CLASS_LIMIT)
    }

    pub fn enumerate_classes_with_limit(
        &self,
        degree: i64,
        limit: u64,
    ) -> Result<Vec<ChipDistribution>> {
        if self.pic0_order > limit {
            return Err(Error::SizeLimitExceeded {
                what: "class enumeration",
                limit,
                actual: self.pic0_order,
            });
        }
        let n = self.n;
        if n == 0 {
            return Ok(Vec::new());
        }
        let m = n - 1;
        let radices: Vec<u64> = self
            .invariants
            .iter()
            .map(|d| d.to_u64().expect("invariant factor bounded by class order"))
            .collect();

        let mut reps = std::collections::BTreeSet::new();
        let mut digits = vec![0u64; m];
        loop {
            // w' = U^{-1} c, lifted to a degree-zero vector, shifted to `degree`.
            let mut x = vec![0i64; n];
            let mut sum = BigInt::zero();
            for (i, slot) in x.iter_mut().take(m).enumerate() {
                let v: BigInt = self.left_inverse[i]
                    .iter()
                    .zip(&digits)
                    .map(|(a, &c)| a * BigInt::from(c))
                    .sum();
                sum += &v;
                *slot = v.to_i64().ok_or(Error::ChipOverflow)?;
            }
            x[m] = (-sum).to_i64().ok_or(Error::ChipOverflow)? + degree;
            reps.insert(self.canonical_rep(&ChipDistribution::new(x)));

            // mixed-radix increment
            let mut i = 0;
            while i < m {
                digits[i] += 1;
                if digits[i] < radices[i] {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        assert_eq!(
            reps.len() as u64,
            self.pic0_order,
            "coset walk must hit every class exactly once"
        );
        Ok(reps.into_iter().collect())
    }
}

/// Row echelon form over `Z` with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`. Returns the nonzero rows and their pivot
/// columns.
fn echelon_form(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut cleared = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                sub_scaled(&mut rows, i, r, &q);
                if !rows[i][col].is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            for v in rows[r].iter_mut() {
                *v = -&*v;
            }
        }
        for i in 0..r {
            let q = rows[i][col].div_floor(&rows[r][col]);
            sub_scaled(&mut rows, i, r, &q);
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// `rows[target] -= q * rows[source]`.
fn sub_scaled(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        *t -= q * s;
    }
}

/// Smith normal form `U A V = D` with the transforms tracked explicitly.
#[derive(Clone, Debug)]
pub(crate) struct SmithForm {
    pub diagonal: Vec<BigInt>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub left: Vec<Vec<BigInt>>,
    pub left_inverse: Vec<Vec<BigInt>>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub right: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn compute(mut a: Vec<Vec<BigInt>>, ncols: usize) -> SmithForm {
        let m = a.len();
        let n = ncols;
        let mut left = identity(m);
        let mut left_inverse = identity(m);
        let mut right = identity(n);

        // Row op `row_i += c * row_j` and its inverse as a column op on U^{-1}.
        fn row_addmul(
            a: &mut [Vec<BigInt>],
            left: &mut [Vec<BigInt>],
            left_inverse: &mut [Vec<BigInt>],
            i: usize,
            j: usize,
            c: &BigInt,
        ) {
            let neg = -c;
            sub_scaled(a, i, j, &neg);
            sub_scaled(left, i, j, &neg);
            for row in left_inverse.iter_mut() {
                let t = &row[i] * c;
                row[j] -= t;
            }
        }
        fn col_addmul(
            a: &mut [Vec<BigInt>],
            right: &mut [Vec<BigInt>],
            i: usize,
            j: usize,
            c: &BigInt,
        ) {
            for row in a.iter_mut().chain(right.iter_mut()) {
                let t = &row[j] * c;
                row[i] += t;
            }
        }

        let steps = m.min(n);
        let mut diagonal = Vec::with_capacity(m);
        for t in 0..steps {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        if a[i][j].is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else { break };
                if bi != t {
                    a.swap(bi, t);
                    left.swap(bi, t);
                    for row in left_inverse.iter_mut() {
                        row.swap(bi, t);
                    }
                }
                if bj != t {
                    for row in a.iter_mut().chain(right.iter_mut()) {
                        row.swap(bj, t);
                    }
                }

                let mut clean = true;
                for i in t + 1..m {
                    if a[i][t].is_zero() {
                        continue;
                    }
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_addmul(&mut a, &mut left, &mut left_inverse, i, t, &-q);
                    clean &= a[i][t].is_zero();
                }
                for j in t + 1..n {
                    if a[t][j].is_zero() {
                        continue;
                    }
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_addmul(&mut a, &mut right, j, t, &-q);
                    clean &= a[t][j].is_zero();
                }
                if !clean {
                    continue;
                }
                let offender =
                    (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
                match offender {
                    Some(i) => {
                        row_addmul(&mut a, &mut left, &mut left_inverse, t, i, &BigInt::one())
                    }
                    None => break,
                }
            }
            if a[t][t].is_negative() {
                for v in a[t].iter_mut().chain(left[t].iter_mut()) {
                    *v = -&*v;
                }
                for row in left_inverse.iter_mut() {
                    row[t] = -&row[t];
                }
            }
            diagonal.push(a[t][t].clone());
        }
        diagonal.resize(m, BigInt::zero());
        SmithForm {
            diagonal,
            left,
            left_inverse,
            right,
        }
    }
}

fn identity(k: usize) -> Vec<Vec<BigInt>> {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}
