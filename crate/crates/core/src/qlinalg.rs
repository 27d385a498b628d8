//! Sparse exact linear algebra over the rationals.
//!
//! Every degreewise computation in the crate (tangency kernels, syzygy
//! harvests, cochain constraint systems, cohomology ranks) reduces to
//! kernels, ranks and solves of sparse matrices over `Q`. Arithmetic is
//! exact: entries are [`Rational`] (arbitrary-precision, always reduced,
//! positive denominator), and there are no tolerances anywhere.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational number: reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for a rational from a fraction; panics on zero denominator.
pub fn rat_frac(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A sparse matrix over `Q` in row-major form.
///
/// Zero entries are never stored; rows are maps from column index to a
/// nonzero rational. Values are immutable once the matrix is built, and
/// all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Rational>>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Set entry (r, c); storing zero removes the entry.
    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    /// Add `v` to entry (r, c).
    pub fn add_to(&mut self, r: usize, c: usize, v: &Rational) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let cur = self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero);
        self.set(r, c, cur + v);
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut m = QMatrix::new(nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                let mut acc = Rational::zero();
                for (&c, a) in row {
                    if !v[c].is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect())
    }

    /// Reduced row echelon form; returns (rref rows, pivot column per rref row).
    fn rref(&self) -> (Vec<BTreeMap<usize, Rational>>, Vec<usize>) {
        let mut work: Vec<BTreeMap<usize, Rational>> =
            self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut reduced: Vec<BTreeMap<usize, Rational>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();

        while let Some(row) = work.pop() {
            let row = reduce_row(row, &reduced, &pivots);
            if row.is_empty() {
                continue;
            }
            let (&p, lead) = row.iter().next().expect("nonempty row");
            let lead = lead.clone();
            let row: BTreeMap<usize, Rational> =
                row.into_iter().map(|(c, v)| (c, v / &lead)).collect();
            // eliminate the new pivot from previously reduced rows
            for prev in reduced.iter_mut() {
                if let Some(coef) = prev.get(&p).cloned() {
                    *prev = row_axpy(prev, &row, &(-coef));
                }
            }
            // keep rows sorted by pivot column
            let at = pivots.partition_point(|&q| q < p);
            pivots.insert(at, p);
            reduced.insert(at, row);
        }
        (reduced, pivots)
    }

    /// Rank over `Q`.
    pub fn rank(&self) -> usize {
        self.rref().0.len()
    }

    /// A basis of the right null space: vectors `v` with `M v = 0`.
    ///
    /// Returned vectors are linearly independent and the count satisfies
    /// `rank + kernel = cols`. An injective matrix yields an empty basis.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (reduced, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[fc] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                if let Some(a) = row.get(&fc) {
                    v[p] = -a.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `M x = b` exactly.
    ///
    /// Returns `Ok(Some(x))` for some solution when the system is consistent
    /// (free variables are set to zero), `Ok(None)` when inconsistent, and an
    /// error when `b` has the wrong length.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinAlgError> {
        if b.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        // augment with b in column `cols`
        let aug_col = self.cols;
        let mut aug = QMatrix::new(self.rows, self.cols + 1);
        aug.data = self.data.clone();
        for (i, v) in b.iter().enumerate() {
            if !v.is_zero() {
                aug.data[i].insert(aug_col, v.clone());
            }
        }
        let (reduced, pivots) = aug.rref();
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in reduced.iter().zip(&pivots) {
            if p == aug_col {
                return Ok(None); // a row 0 = 1
            }
            if let Some(v) = row.get(&aug_col) {
                x[p] = v.clone();
            }
        }
        Ok(Some(x))
    }
}

fn row_axpy(
    a: &BTreeMap<usize, Rational>,
    b: &BTreeMap<usize, Rational>,
    coef: &Rational,
) -> BTreeMap<usize, Rational> {
    let mut out = a.clone();
    for (&c, v) in b {
        let cur = out.get(&c).cloned().unwrap_or_else(Rational::zero);
        let next = cur + coef * v;
        if next.is_zero() {
            out.remove(&c);
        } else {
            out.insert(c, next);
        }
    }
    out
}

fn reduce_row(
    mut row: BTreeMap<usize, Rational>,
    reduced: &[BTreeMap<usize, Rational>],
    pivots: &[usize],
) -> BTreeMap<usize, Rational> {
    loop {
        let Some((&lead_col, _)) = row.iter().next() else {
            return row;
        };
        match pivots.binary_search(&lead_col) {
            Ok(idx) => {
                let coef = -row[&lead_col].clone();
                row = row_axpy(&row, &reduced[idx], &coef);
                debug_assert!(!row.contains_key(&lead_col));
            }
            Err(_) => {
                // leading column is not a pivot; eliminate any later pivot
                // columns so the row is fully reduced
                let mut changed = false;
                for (i, &p) in pivots.iter().enumerate() {
                    if p <= lead_col {
                        continue;
                    }
                    if let Some(coef) = row.get(&p).cloned() {
                        row = row_axpy(&row, &reduced[i], &(-coef));
                        changed = true;
                    }
                }
                if !changed {
                    return row;
                }
            }
        }
    }
}

/// Incremental row reduction: tracks the row space of the vectors fed in so
/// far and answers membership queries. This is the span oracle behind greedy
/// generator extraction and cohomology representative selection.
#[derive(Debug, Clone, Default)]
pub struct RowReducer {
    reduced: Vec<BTreeMap<usize, Rational>>,
    pivots: Vec<usize>,
}

impl RowReducer {
    pub fn new() -> Self {
        RowReducer::default()
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    fn to_sparse(v: &[Rational]) -> BTreeMap<usize, Rational> {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect()
    }

    /// Insert a vector; returns true when it was independent of the rows seen
    /// so far (the rank grew).
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let row = reduce_row(Self::to_sparse(v), &self.reduced, &self.pivots);
        if row.is_empty() {
            return false;
        }
        let (&p, lead) = row.iter().next().expect("nonempty");
        let lead = lead.clone();
        let row: BTreeMap<usize, Rational> =
            row.into_iter().map(|(c, x)| (c, x / &lead)).collect();
        for prev in self.reduced.iter_mut() {
            if let Some(coef) = prev.get(&p).cloned() {
                *prev = row_axpy(prev, &row, &(-coef));
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.reduced.insert(at, row);
        true
    }

    /// Does `v` lie in the span of the inserted vectors?
    pub fn contains(&self, v: &[Rational]) -> bool {
        reduce_row(Self::to_sparse(v), &self.reduced, &self.pivots).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn kernel_of_empty_matrix_is_empty() {
        let k = QMatrix::new(0, 0).kernel_basis();
        assert!(k.is_empty());
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(QMatrix::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_row_of_ones() {
        // [[1,1,1]]: rank 1, kernel dimension 2, and M v = 0 for each vector.
        let mat = m(&[&[1, 1, 1]]);
        let k = mat.kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(mat.rank(), 1);
        for v in &k {
            assert!(mat.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::new(2, 2).rank(), 0);
        assert_eq!(QMatrix::identity(4).rank(), 4);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn solve_identity() {
        let b = vec![rat(3), rat(-7)];
        let x = QMatrix::identity(2).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_underdetermined_verified_by_substitution() {
        let mat = m(&[&[1, 1]]);
        let x = mat.solve(&[rat(2)]).unwrap().unwrap();
        assert_eq!(mat.mul_vec(&x).unwrap(), vec![rat(2)]);
    }

    #[test]
    fn solve_inconsistent() {
        let mat = m(&[&[1], &[1]]);
        assert_eq!(mat.solve(&[rat(1), rat(2)]).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch_is_an_error() {
        let mat = m(&[&[1, 0]]);
        assert!(mat.solve(&[rat(1), rat(1)]).is_err());
    }

    #[test]
    fn row_reducer_tracks_span() {
        let mut rr = RowReducer::new();
        assert!(rr.insert(&[rat(1), rat(0), rat(1)]));
        assert!(rr.insert(&[rat(0), rat(1), rat(1)]));
        assert!(!rr.insert(&[rat(1), rat(1), rat(2)]));
        assert_eq!(rr.rank(), 2);
        assert!(rr.contains(&[rat(2), rat(-1), rat(1)]));
        assert!(!rr.contains(&[rat(0), rat(0), rat(1)]));
    }

    #[test]
    fn rational_invariants() {
        let x = rat_frac(6, -4);
        assert_eq!(x, rat_frac(-3, 2));
        assert!(x.denom() > &num_bigint::BigInt::from(0));
        assert_eq!(rat(0), Rational::zero());
    }

    proptest! {
        #[test]
        fn rational_field_laws(a in -50i64..50, b in 1i64..20, c in -50i64..50,
                               d in 1i64..20, e in -50i64..50, f in 1i64..20) {
            let (x, y, z) = (rat_frac(a, b), rat_frac(c, d), rat_frac(e, f));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
            prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
            prop_assert_eq!((&x * &y) * &z, &x * (&y * &z));
        }

        #[test]
        fn kernel_rank_complement(entries in proptest::collection::vec(-5i64..5, 12)) {
            let rows: Vec<Vec<Rational>> = entries.chunks(4)
                .map(|ch| ch.iter().map(|&x| rat(x)).collect())
                .collect();
            let mat = QMatrix::from_rows(rows);
            let k = mat.kernel_basis();
            prop_assert_eq!(mat.rank() + k.len(), mat.cols());
            for v in &k {
                prop_assert!(mat.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
            }
            // kernel vectors are independent
            let mut rr = RowReducer::new();
            for v in &k {
                prop_assert!(rr.insert(v));
            }
        }
    }
}
