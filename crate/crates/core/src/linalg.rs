//! Sparse exact linear algebra over arbitrary-precision rationals.
//!
//! Matrices are immutable once built; `rank`, `kernel_dimension` and `solve`
//! are pure functions, so concurrent use on shared inputs is safe. Elimination
//! keeps rows in primitive integer form after every update and picks pivots of
//! smallest bit length, which keeps intermediate numerators small on the very
//! sparse matrices produced by Chevalley-Eilenberg differentials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar: arbitrary-precision, always in lowest terms with a
/// positive denominator (maintained by `num_rational::Ratio`).
pub type Rational = num_rational::BigRational;

/// Integer rational. Shorthand for tests and table construction.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` as an exact rational. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: matrix has {rows} rows but vector has {len} entries")]
    DimensionMismatch { rows: usize, len: usize },
}

/// Sparse matrix over Q. Absent entries are zero; explicit zeros are never
/// stored and all stored indices lie within the declared bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Sets an entry, dropping it from storage when the value is zero.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rational) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for (i, j, v) in self.iter() {
            m.set(j, i, v.clone());
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (i, j, v) in other.iter() {
            m.add_to(i, j, v);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut m = Self::zero(self.rows, other.cols);
        // group rhs entries by row for sparse row lookup
        let mut rhs_rows: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
        for (k, j, v) in other.iter() {
            rhs_rows.entry(k).or_default().push((j, v));
        }
        for (i, k, v) in self.iter() {
            if let Some(row) = rhs_rows.get(&k) {
                for (j, w) in row {
                    m.add_to(i, *j, &(v * *w));
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![Rational::zero(); self.rows];
        for (i, j, v) in self.iter() {
            out[i] += v * &x[j];
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && self
                .iter()
                .all(|(i, j, v)| i != j && self.get(j, i) == -v.clone())
    }

    /// Rank over Q by exact elimination.
    pub fn rank(&self) -> usize {
        Eliminator::new(self, None).run().rank
    }

    /// `cols - rank`, the dimension of the right kernel.
    pub fn kernel_dimension(&self) -> usize {
        self.cols - self.rank()
    }

    /// One exact solution of `self * x = b`, or `None` when the system is
    /// inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                rows: self.rows,
                len: b.len(),
            });
        }
        let state = Eliminator::new(self, Some(b)).run();
        Ok(state.back_substitute(self.cols))
    }
}

/// Row-echelon elimination state. Rows are kept as primitive integer vectors
/// (denominators cleared, integer content divided out) after every update, so
/// coefficient growth stays close to the determinant bound instead of
/// compounding step by step.
struct Eliminator {
    /// sparse rows: col -> integer coefficient
    rows: Vec<BTreeMap<usize, BigInt>>,
    /// optional augmented column, scaled along with each row
    rhs: Option<Vec<Rational>>,
    /// (pivot column, row index) in elimination order
    pivots: Vec<(usize, usize)>,
    rank: usize,
}

impl Eliminator {
    fn new(m: &RationalMatrix, b: Option<&[Rational]>) -> Self {
        let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); m.rows];
        for (i, j, v) in m.iter() {
            rows[i].insert(j, v.clone());
        }
        let mut int_rows = Vec::with_capacity(m.rows);
        let mut rhs = b.map(|b| b.to_vec());
        for (i, row) in rows.into_iter().enumerate() {
            let (int_row, scale) = to_primitive(row);
            if let (Some(rhs), false) = (rhs.as_mut(), scale.is_zero()) {
                rhs[i] *= &scale;
            }
            int_rows.push(int_row);
        }
        Eliminator {
            rows: int_rows,
            rhs,
            pivots: Vec::new(),
            rank: 0,
        }
    }

    fn run(mut self) -> Self {
        let mut active: Vec<usize> = (0..self.rows.len()).collect();
        active.retain(|&r| !self.rows[r].is_empty());
        while !active.is_empty() {
            // Pivot on the leftmost column present in any active row, choosing
            // the entry of smallest bit length in that column.
            let col = active
                .iter()
                .filter_map(|&r| self.rows[r].keys().next().copied())
                .min()
                .unwrap();
            let mut best: Option<(usize, usize)> = None;
            for (pos, &r) in active.iter().enumerate() {
                if self.rows[r].keys().next() == Some(&col) {
                    let better = match best {
                        None => true,
                        // smallest bit length first; among ties prefer the
                        // sparsest row to limit fill-in
                        Some((_, b)) => {
                            (self.rows[r][&col].bits(), self.rows[r].len())
                                < (self.rows[b][&col].bits(), self.rows[b].len())
                        }
                    };
                    if better {
                        best = Some((pos, r));
                    }
                }
            }
            let (pos, prow) = best.unwrap();
            active.swap_remove(pos);
            self.pivots.push((col, prow));
            self.rank += 1;

            let pivot = self.rows[prow][&col].clone();
            let prow_data: Vec<(usize, BigInt)> = self.rows[prow]
                .iter()
                .map(|(&j, v)| (j, v.clone()))
                .collect();
            let mut i = 0;
            while i < active.len() {
                let r = active[i];
                let Some(c) = self.rows[r].get(&col).cloned() else {
                    i += 1;
                    continue;
                };
                let g = pivot.gcd(&c);
                let (mp, mr) = (&c / &g, &pivot / &g);
                // row_r := (mr * row_r - mp * row_p) / content
                let row = &mut self.rows[r];
                for v in row.values_mut() {
                    *v *= &mr;
                }
                for (j, v) in &prow_data {
                    let upd = row.entry(*j).or_insert_with(BigInt::zero);
                    *upd -= &mp * v;
                    if upd.is_zero() {
                        row.remove(j);
                    }
                }
                let content = row_content(row);
                if !content.is_zero() && !content.is_one() {
                    for v in row.values_mut() {
                        *v /= &content;
                    }
                }
                if let Some(rhs) = self.rhs.as_mut() {
                    let pv = rhs[prow].clone();
                    let mut updated =
                        Rational::from_integer(mr) * &rhs[r] - Rational::from_integer(mp) * pv;
                    if !content.is_zero() && !content.is_one() {
                        updated /= Rational::from_integer(content);
                    }
                    rhs[r] = updated;
                }
                if self.rows[r].is_empty() {
                    active.swap_remove(i);
                } else {
                    i += 1;
                }
            }
        }
        self
    }

    /// After elimination, rows that became empty must carry zero on the right
    /// hand side for the system to be consistent. Free variables are set to 0.
    fn back_substitute(&self, ncols: usize) -> Option<Vec<Rational>> {
        let rhs = self.rhs.as_ref().expect("solve requires a right hand side");
        for (i, row) in self.rows.iter().enumerate() {
            if row.is_empty() && !rhs[i].is_zero() {
                return None;
            }
        }
        let mut x = vec![Rational::zero(); ncols];
        for &(col, r) in self.pivots.iter().rev() {
            let mut acc = rhs[r].clone();
            for (&j, v) in self.rows[r].iter() {
                if j != col {
                    acc -= Rational::from_integer(v.clone()) * &x[j];
                }
            }
            x[col] = acc / Rational::from_integer(self.rows[r][&col].clone());
        }
        Some(x)
    }
}

/// Clears denominators and divides out the integer content of a sparse row.
/// Returns the integer row together with the scale factor applied (so the
/// right hand side can be kept in sync); the scale is 0 for an empty row.
fn to_primitive(row: BTreeMap<usize, Rational>) -> (BTreeMap<usize, BigInt>, Rational) {
    if row.is_empty() {
        return (BTreeMap::new(), Rational::zero());
    }
    let mut lcm = BigInt::one();
    for v in row.values() {
        lcm = lcm.lcm(v.denom());
    }
    let mut int_row: BTreeMap<usize, BigInt> = row
        .iter()
        .map(|(&j, v)| (j, v.numer() * (&lcm / v.denom())))
        .collect();
    let content = row_content(&int_row);
    if !content.is_one() {
        for v in int_row.values_mut() {
            *v /= &content;
        }
    }
    (int_row, Rational::new(lcm, content))
}

fn row_content(row: &BTreeMap<usize, BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rationals_stay_in_lowest_terms() {
        use num_traits::Signed;
        assert_eq!(ratio(2, 4), ratio(1, 2));
        assert_eq!(ratio(3, -6), ratio(-1, 2));
        let x = ratio(3, -6);
        assert!(x.denom().is_positive());
        assert_eq!(*x.numer(), (-1).into());
        let sum = ratio(1, 3) + ratio(1, 6);
        assert_eq!(sum, ratio(1, 2));
    }

    #[test]
    fn rank_empty_matrix_is_zero() {
        assert_eq!(RationalMatrix::zero(0, 0).rank(), 0);
    }

    #[test]
    fn rank_identity() {
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_antisymmetric_unit() {
        // E01 - E10, eliminated by hand: two pivots.
        let m = dense(&[&[0, 1], &[-1, 0]]);
        assert!(m.is_antisymmetric());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_dimension_cases() {
        assert_eq!(RationalMatrix::zero(2, 3).kernel_dimension(), 3);
        assert_eq!(RationalMatrix::identity(3).kernel_dimension(), 0);
        // [1 1]: nullspace is spanned by (1, -1).
        assert_eq!(dense(&[&[1, 1]]).kernel_dimension(), 1);
    }

    #[test]
    fn solve_identity() {
        let m = RationalMatrix::identity(2);
        let x = m.solve(&[rat(1), rat(2)]).unwrap().unwrap();
        assert_eq!(x, vec![rat(1), rat(2)]);
    }

    #[test]
    fn solve_underdetermined_checks_by_substitution() {
        let m = dense(&[&[1, 1]]);
        let b = vec![rat(5)];
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn solve_inconsistent() {
        let m = RationalMatrix::zero(1, 1);
        assert_eq!(m.solve(&[rat(1)]).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = RationalMatrix::identity(2);
        assert!(matches!(
            m.solve(&[rat(1)]),
            Err(LinalgError::DimensionMismatch { rows: 2, len: 1 })
        ));
    }

    #[test]
    fn solve_rational_entries() {
        let m = RationalMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 5), ratio(2, 7)],
        ]);
        let b = vec![ratio(7, 6), ratio(33, 35)];
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn rank_needs_column_restart() {
        // After eliminating col 0 the remaining rows start in different columns.
        let m = dense(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(m.rank(), 2);
    }
}
