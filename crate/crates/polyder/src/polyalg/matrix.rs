//! Exact linear algebra over `Q`.
//!
//! The workhorse is [`Echelon`], a fraction-free row-echelon accumulator over
//! integers: rational rows are scaled to primitive integer vectors, reduced by
//! cross-multiplication against the current pivots, and re-normalized by their
//! content after every step. Everything else (nullspace, rank, linear solves,
//! span membership) is a thin layer on top.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{integerize, Rational};

/// Incremental reduced row-echelon form over the integers.
///
/// Columns `>= pivot_limit` never carry pivots; they ride along unchanged by
/// the row operations, which is how augmented right-hand sides are threaded
/// through [`RationalMatrix::solve_many`].
pub struct Echelon {
    ncols: usize,
    pivot_limit: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    /// Reduced rows that vanish on the pivot columns but not beyond them.
    stranded: Vec<Vec<BigInt>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self::with_pivot_limit(ncols, ncols)
    }

    pub fn with_pivot_limit(ncols: usize, pivot_limit: usize) -> Self {
        assert!(pivot_limit <= ncols);
        Echelon {
            ncols,
            pivot_limit,
            rows: Vec::new(),
            pivots: Vec::new(),
            stranded: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn stranded(&self) -> &[Vec<BigInt>] {
        &self.stranded
    }

    fn normalize(row: &mut [BigInt]) {
        let mut content = BigInt::zero();
        for x in row.iter() {
            content = num_integer::gcd(content, x.clone());
            if content.is_one() {
                return;
            }
        }
        if !content.is_zero() && !content.is_one() {
            for x in row.iter_mut() {
                *x /= &content;
            }
        }
    }

    // row <- row * pivot_value - pivot_row * row[pivot_col], then content-reduce
    fn eliminate(row: &mut [BigInt], pivot_row: &[BigInt], pivot_col: usize) {
        let factor = row[pivot_col].clone();
        let scale = pivot_row[pivot_col].clone();
        for (r, p) in row.iter_mut().zip(pivot_row) {
            *r = &*r * &scale - p * &factor;
        }
        debug_assert!(row[pivot_col].is_zero());
        Self::normalize(row);
    }

    /// Reduces `row` against the current echelon in place.
    pub fn reduce(&self, row: &mut [BigInt]) {
        assert_eq!(row.len(), self.ncols);
        for (pivot_row, &p) in self.rows.iter().zip(&self.pivots) {
            if !row[p].is_zero() {
                Self::eliminate(row, pivot_row, p);
            }
        }
    }

    /// Inserts a row, returning `true` if it increased the rank.
    pub fn insert(&mut self, mut row: Vec<BigInt>) -> bool {
        self.reduce(&mut row);
        let pivot = match row[..self.pivot_limit].iter().position(|x| !x.is_zero()) {
            Some(p) => p,
            None => {
                if row.iter().any(|x| !x.is_zero()) {
                    self.stranded.push(row);
                }
                return false;
            }
        };
        // keep earlier rows clear of the new pivot column
        for existing in &mut self.rows {
            if !existing[pivot].is_zero() {
                Self::eliminate(existing, &row, pivot);
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, row);
        true
    }

    /// Inserts a rational row after clearing denominators.
    pub fn insert_rational(&mut self, row: &[Rational]) -> bool {
        self.insert(integerize(row))
    }

    /// True iff the rational vector lies in the row span.
    pub fn contains(&self, row: &[Rational]) -> bool {
        let mut v = integerize(row);
        self.reduce(&mut v);
        v.iter().all(Zero::is_zero)
    }

    /// Basis of the solution space `{v : Mv = 0}` where the rows inserted so
    /// far are the rows of `M`. One vector per free column, normalized so the
    /// first nonzero entry is `1`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        assert_eq!(self.pivot_limit, self.ncols, "nullspace needs full pivot range");
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.ncols - self.rank());
        for f in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.ncols];
            v[f] = Rational::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[f].is_zero() {
                    v[p] = -Rational::new(row[f].clone(), row[p].clone());
                }
            }
            let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap();
            for x in &mut v {
                *x /= lead.clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Nullspace of a matrix presented as sparse rows (keyed by row index, each
/// row a list of `(column, value)` contributions, summed per cell).
pub fn nullspace_of_sparse_rows(
    ncols: usize,
    rows: std::collections::BTreeMap<usize, Vec<(usize, Rational)>>,
) -> Vec<Vec<Rational>> {
    let mut ech = Echelon::new(ncols);
    for (_, entries) in rows {
        // full rank already forces an empty nullspace
        if ech.rank() == ncols {
            break;
        }
        let mut row = vec![Rational::zero(); ncols];
        for (col, c) in entries {
            row[col] += c;
        }
        ech.insert_rational(&row);
    }
    ech.nullspace()
}

/// A growing subspace of `Q^dim` with exact membership tests.
pub struct Subspace {
    ech: Echelon,
}

impl Subspace {
    pub fn new(dim: usize) -> Self {
        Subspace {
            ech: Echelon::new(dim),
        }
    }

    /// Adds a vector; `true` if it was independent of the span so far.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        self.ech.insert_rational(v)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.ech.contains(v)
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ech.ncols()
    }

    /// True iff the span equals the whole ambient space.
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }
}

/// Dense matrix over `Q`; the backend for bounded-degree kernel and
/// centralizer computations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        RationalMatrix {
            nrows,
            ncols,
            data: vec![Rational::zero(); nrows * ncols],
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
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        RationalMatrix {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    /// `row[target] -= c * row[source]` (used for unitriangular updates).
    pub fn sub_scaled_row(&mut self, target: usize, source: usize, c: &Rational) {
        for j in 0..self.ncols {
            let delta = self.get(source, j) * c;
            let v = self.get(target, j) - delta;
            self.set(target, j, v);
        }
    }

    /// True iff square with unit diagonal and zeros below it.
    pub fn is_upper_unitriangular(&self) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        for i in 0..self.nrows {
            if !self.get(i, i).is_one() {
                return false;
            }
            for j in 0..i {
                if !self.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ncols);
        (0..self.nrows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.ncols);
        for i in 0..self.nrows {
            ech.insert_rational(self.row(i));
        }
        ech
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Exact basis of `{v : Mv = 0}` by fraction-free Gaussian elimination;
    /// basis vectors are normalized with first nonzero entry `1`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        self.echelon().nullspace()
    }

    /// Solves `M x = b` for every right-hand side in `rhs` simultaneously.
    /// Returns one particular solution per system (free variables set to 0),
    /// or `None` if any system is inconsistent.
    pub fn solve_many(&self, rhs: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
        let k = rhs.len();
        assert!(rhs.iter().all(|b| b.len() == self.nrows), "rhs length mismatch");
        let total = self.ncols + k;
        let mut ech = Echelon::with_pivot_limit(total, self.ncols);
        for i in 0..self.nrows {
            let mut row: Vec<Rational> = self.row(i).to_vec();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            ech.insert_rational(&row);
        }
        // a stranded row means some combination 0 = nonzero rhs
        for s in ech.stranded() {
            if s[self.ncols..].iter().any(|x| !x.is_zero()) {
                return None;
            }
        }
        let mut solutions = vec![vec![Rational::zero(); self.ncols]; k];
        for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
            for (bi, sol) in solutions.iter_mut().enumerate() {
                let num = &row[self.ncols + bi];
                if !num.is_zero() {
                    sol[p] = Rational::new(num.clone(), row[p].clone());
                }
            }
        }
        Some(solutions)
    }
}
