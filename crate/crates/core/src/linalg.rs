//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers and rationals.
//! The Smith normal form is the workhorse: cokernel orders, lattice
//! saturation and integral kernels are all read off from it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("the zero vector has no primitive part")]
    ZeroVector,
    #[error("not a sublattice: {0}")]
    NotSublattice(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense row-major matrix of big integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics if rows have unequal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntegerMatrix { rows: r, cols: c, data }
    }

    /// `rows x cols` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
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

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    pub fn rank(&self) -> usize {
        RationalMatrix::from_integer(self).rank()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

/// Dense row-major matrix of rationals (always kept in lowest terms by `num`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        RationalMatrix { rows: r, cols: c, data }
    }

    pub fn from_integer(m: &IntegerMatrix) -> Self {
        RationalMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|x| Rational::from_integer(x.clone())).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.row_reduce(None).len()
    }

    /// In-place reduced row echelon form; returns pivot columns. When `rhs`
    /// is given the same row operations are applied to it.
    fn row_reduce(&mut self, mut rhs: Option<&mut Vec<Rational>>) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
                if let Some(b) = rhs.as_deref_mut() {
                    b.swap(p, r);
                }
            }
            let inv = self.get(r, c).recip();
            for j in c..cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            if let Some(b) = rhs.as_deref_mut() {
                b[r] = &b[r] * &inv;
            }
            for i in 0..rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..cols {
                    if self.get(r, j).is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
                if let Some(b) = rhs.as_deref_mut() {
                    let v = &b[i] - &f * &b[r];
                    b[i] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// Result of solving `A x = b` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    None,
    Underdetermined,
}

/// Solves `A x = b` over the rationals.
pub fn solve_rational(a: &RationalMatrix, b: &[Rational]) -> LinearSolution {
    assert_eq!(a.rows, b.len(), "right-hand side length mismatch");
    if let Some(sol) = solve_small(a, b) {
        return sol;
    }
    solve_by_reduction(a, b)
}

fn solve_by_reduction(a: &RationalMatrix, b: &[Rational]) -> LinearSolution {
    let mut work = a.clone();
    let mut rhs = b.to_vec();
    let pivots = work.row_reduce(Some(&mut rhs));
    if rhs[pivots.len()..].iter().any(|x| !x.is_zero()) {
        return LinearSolution::None;
    }
    if pivots.len() < a.cols {
        return LinearSolution::Underdetermined;
    }
    let mut x = vec![Rational::zero(); a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rhs[r].clone();
    }
    LinearSolution::Unique(x)
}

/// Fraction-free elimination in `i128`; `None` when an entry does not fit.
fn solve_small(a: &RationalMatrix, b: &[Rational]) -> Option<LinearSolution> {
    use num_traits::ToPrimitive;
    let cols = a.cols;
    let mut m: Vec<Vec<i128>> = Vec::with_capacity(a.rows);
    for r in 0..a.rows {
        let mut den = b[r].denom().clone();
        for c in 0..cols {
            den = den.lcm(a.get(r, c).denom());
        }
        let mut row = Vec::with_capacity(cols + 1);
        for c in 0..cols {
            let x = a.get(r, c);
            row.push((x.numer() * (&den / x.denom())).to_i128()?);
        }
        row.push((b[r].numer() * (&den / b[r].denom())).to_i128()?);
        m.push(row);
    }
    let mut pivots = Vec::new();
    let mut prev: i128 = 1;
    let mut k = 0;
    for c in 0..cols {
        let Some(p) = (k..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(k, p);
        for i in k + 1..m.len() {
            if m[i][c] == 0 {
                // the row still has to be scaled to keep the minors invariant
                for j in c + 1..=cols {
                    m[i][j] = m[k][c].checked_mul(m[i][j])? / prev;
                }
                continue;
            }
            for j in c + 1..=cols {
                let x = m[k][c].checked_mul(m[i][j])?.checked_sub(m[i][c].checked_mul(m[k][j])?)?;
                m[i][j] = x / prev;
            }
            m[i][c] = 0;
        }
        prev = m[k][c];
        pivots.push(c);
        k += 1;
        if k == m.len() {
            break;
        }
    }
    if m[k..].iter().any(|row| row[cols] != 0) {
        return Some(LinearSolution::None);
    }
    if k < cols {
        return Some(LinearSolution::Underdetermined);
    }
    let mut x = vec![Rational::zero(); cols];
    for r in (0..k).rev() {
        let c = pivots[r];
        let mut acc = Rational::from_integer(BigInt::from(m[r][cols]));
        for j in c + 1..cols {
            if m[r][j] != 0 {
                acc -= Rational::from_integer(BigInt::from(m[r][j])) * &x[j];
            }
        }
        x[c] = acc / Rational::from_integer(BigInt::from(m[r][c]));
    }
    Some(LinearSolution::Unique(x))
}

/// Splits a nonzero integer vector into `c * u` with `u` primitive, `c > 0`.
pub fn primitive_part(v: &[BigInt]) -> Result<(Vec<BigInt>, BigInt), LinalgError> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(LinalgError::ZeroVector);
    }
    Ok((v.iter().map(|x| x / &g).collect(), g))
}

/// `U * M * V = D` with unimodular `U`, `V` and `D` in Smith normal form.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The nonzero invariant factors `d_1 | d_2 | ... | d_rank`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct SmithWork {
    a: IntegerMatrix,
    u: Option<IntegerMatrix>,
    v: Option<IntegerMatrix>,
    vinv: Option<IntegerMatrix>,
}

impl SmithWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [Some(&mut self.a), self.u.as_mut()].into_iter().flatten() {
            let c = m.cols;
            for k in 0..c {
                m.data.swap(i * c + k, j * c + k);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [Some(&mut self.a), self.v.as_mut()].into_iter().flatten() {
            let c = m.cols;
            for r in 0..m.rows {
                m.data.swap(r * c + i, r * c + j);
            }
        }
        if let Some(w) = self.vinv.as_mut() {
            let c = w.cols;
            for k in 0..c {
                w.data.swap(i * c + k, j * c + k);
            }
        }
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [Some(&mut self.a), self.u.as_mut()].into_iter().flatten() {
            let c = m.cols;
            for k in 0..c {
                if !m.data[j * c + k].is_zero() {
                    let t = q * &m.data[j * c + k];
                    m.data[i * c + k] += t;
                }
            }
        }
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [Some(&mut self.a), self.v.as_mut()].into_iter().flatten() {
            let c = m.cols;
            for r in 0..m.rows {
                if !m.data[r * c + j].is_zero() {
                    let t = q * &m.data[r * c + j];
                    m.data[r * c + i] += t;
                }
            }
        }
        // inverse op on V^{-1}: row_j -= q * row_i
        if let Some(w) = self.vinv.as_mut() {
            let c = w.cols;
            for k in 0..c {
                if !w.data[i * c + k].is_zero() {
                    let t = q * &w.data[i * c + k];
                    w.data[j * c + k] -= t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [Some(&mut self.a), self.u.as_mut()].into_iter().flatten() {
            let c = m.cols;
            for k in 0..c {
                let v = -std::mem::take(&mut m.data[i * c + k]);
                m.data[i * c + k] = v;
            }
        }
    }

    fn run(&mut self) -> usize {
        let (rows, cols) = (self.a.rows, self.a.cols);
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.min_entry(t, t..rows, t..cols) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a.get(t, t).clone();
                let mut clean = true;
                for i in t + 1..rows {
                    if self.a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = -self.a.get(i, t).div_floor(&p);
                    self.add_row(i, t, &q);
                    clean &= self.a.get(i, t).is_zero();
                }
                for j in t + 1..cols {
                    if self.a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = -self.a.get(t, j).div_floor(&p);
                    self.add_col(j, t, &q);
                    clean &= self.a.get(t, j).is_zero();
                }
                if !clean {
                    // a remainder smaller than the pivot survived; promote it
                    let col = self.min_entry(t, t + 1..rows, t..t + 1);
                    let row = self.min_entry(t, t..t + 1, t + 1..cols);
                    let pick = match (col, row) {
                        (Some(a), Some(b)) => {
                            if self.a.get(a.0, a.1).abs() <= self.a.get(b.0, b.1).abs() {
                                a
                            } else {
                                b
                            }
                        }
                        (Some(a), None) => a,
                        (None, Some(b)) => b,
                        (None, None) => unreachable!("unclean pivot without remainder"),
                    };
                    self.swap_rows(t, pick.0);
                    self.swap_cols(t, pick.1);
                    continue;
                }
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !self.a.get(i, j).is_multiple_of(&p))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }

    fn min_entry(
        &self,
        _t: usize,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in rows {
            for j in cols.clone() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|b| ax < b.2) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

/// Smith normal form with both transformation matrices.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let mut w = SmithWork {
        a: m.clone(),
        u: Some(IntegerMatrix::identity(m.rows)),
        v: Some(IntegerMatrix::identity(m.cols)),
        vinv: None,
    };
    let rank = w.run();
    SmithDecomposition {
        d: w.a,
        u: w.u.unwrap(),
        v: w.v.unwrap(),
        rank,
    }
}

/// Invariant factors only, skipping the transformation bookkeeping.
pub fn invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut w = SmithWork {
        a: m.clone(),
        u: None,
        v: None,
        vinv: None,
    };
    let rank = w.run();
    (0..rank).map(|i| w.a.get(i, i).clone()).collect()
}

/// Order of `Z^rows / column-span(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CokernelOrder {
    Finite(BigInt),
    Infinite,
}

impl CokernelOrder {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            CokernelOrder::Finite(x) => Some(x),
            CokernelOrder::Infinite => None,
        }
    }
}

pub fn cokernel_order(m: &IntegerMatrix) -> CokernelOrder {
    let factors = invariant_factors(m);
    if factors.len() < m.rows {
        return CokernelOrder::Infinite;
    }
    CokernelOrder::Finite(factors.iter().fold(BigInt::one(), |acc, d| acc * d))
}

/// A lattice given by a basis of linearly independent integer vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    ambient_rank: usize,
    vectors: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    /// Panics if the vectors are dependent or of the wrong length.
    pub fn new(ambient_rank: usize, vectors: Vec<Vec<BigInt>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient_rank, "vector length differs from ambient rank");
        }
        let basis = LatticeBasis {
            ambient_rank,
            vectors,
        };
        assert_eq!(
            basis.as_rows().rank(),
            basis.vectors.len(),
            "lattice basis vectors must be independent"
        );
        basis
    }

    pub fn from_i64(ambient_rank: usize, vectors: &[Vec<i64>]) -> Self {
        Self::new(
            ambient_rank,
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn empty(ambient_rank: usize) -> Self {
        LatticeBasis {
            ambient_rank,
            vectors: Vec::new(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn as_rows(&self) -> IntegerMatrix {
        if self.vectors.is_empty() {
            return IntegerMatrix::zeros(0, self.ambient_rank);
        }
        IntegerMatrix::from_rows(&self.vectors)
    }

    /// Whether the basis spans a saturated sublattice of `Z^n`.
    pub fn is_saturated(&self) -> bool {
        self.vectors.is_empty()
            || invariant_factors(&self.as_rows())
                .iter()
                .all(|d| d.is_one())
    }
}

/// Row-style Hermite normal form; zero rows are dropped.
pub fn hermite_rows(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut out_rows = 0;
    for c in 0..n {
        if out_rows == a.len() {
            break;
        }
        // Euclid down the column
        loop {
            let nz: Vec<usize> = (out_rows..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(out_rows, p);
            let mut done = true;
            for i in out_rows + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[out_rows][c]);
                for j in c..n {
                    let t = &q * &a[out_rows][j];
                    a[i][j] -= t;
                }
                done &= a[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if out_rows < a.len() && !a[out_rows][c].is_zero() {
            if a[out_rows][c].is_negative() {
                for j in c..n {
                    a[out_rows][j] = -a[out_rows][j].clone();
                }
            }
            let piv = a[out_rows][c].clone();
            for i in 0..out_rows {
                let q = a[i][c].div_floor(&piv);
                if q.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = &q * &a[out_rows][j];
                    a[i][j] -= t;
                }
            }
            out_rows += 1;
        }
    }
    a.truncate(out_rows);
    a
}

/// Basis of `span_Q(generators) ∩ Z^n`, in Hermite normal form.
pub fn saturate(generators: &[Vec<BigInt>], n: usize) -> LatticeBasis {
    let gens: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if gens.is_empty() {
        return LatticeBasis::empty(n);
    }
    for g in &gens {
        assert_eq!(g.len(), n, "generator length differs from ambient rank");
    }
    let mut w = SmithWork {
        a: IntegerMatrix::from_rows(&gens),
        u: None,
        v: None,
        vinv: Some(IntegerMatrix::identity(n)),
    };
    let rank = w.run();
    let vinv = w.vinv.unwrap();
    let rows: Vec<Vec<BigInt>> = (0..rank).map(|i| vinv.row(i).to_vec()).collect();
    LatticeBasis {
        ambient_rank: n,
        vectors: hermite_rows(&rows, n),
    }
}

/// Integer basis of `{x in Z^n : <r, x> = 0 for every row r}`.
pub fn integer_kernel(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
    }
    let m = IntegerMatrix::from_rows(rows);
    let mut w = SmithWork {
        a: m,
        u: None,
        v: Some(IntegerMatrix::identity(n)),
        vinv: None,
    };
    let rank = w.run();
    let v = w.v.unwrap();
    let cols: Vec<Vec<BigInt>> = (rank..n).map(|j| v.column(j)).collect();
    hermite_rows(&cols, n)
}

/// Index `[sup : sub]` of a full-rank sublattice inside `sup`.
pub fn lattice_index(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<BigInt, LinalgError> {
    if sub.ambient_rank != sup.ambient_rank {
        return Err(LinalgError::DimensionMismatch(format!(
            "ambient ranks {} and {}",
            sub.ambient_rank, sup.ambient_rank
        )));
    }
    if sub.rank() != sup.rank() {
        return Err(LinalgError::NotSublattice(format!(
            "ranks {} and {} differ",
            sub.rank(),
            sup.rank()
        )));
    }
    let k = sup.rank();
    if k == 0 {
        return Ok(BigInt::one());
    }
    let sup_cols = RationalMatrix::from_integer(&IntegerMatrix::from_columns(
        sup.ambient_rank,
        &sup.vectors,
    ));
    let mut coeffs = Vec::with_capacity(k);
    for v in &sub.vectors {
        let rhs: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
        match solve_rational(&sup_cols, &rhs) {
            LinearSolution::Unique(x) => {
                if x.iter().any(|q| !q.is_integer()) {
                    return Err(LinalgError::NotSublattice(format!(
                        "vector {v:?} is not an integral combination"
                    )));
                }
                coeffs.push(x.into_iter().map(|q| q.to_integer()).collect::<Vec<_>>());
            }
            _ => {
                return Err(LinalgError::NotSublattice(format!(
                    "vector {v:?} is outside the rational span"
                )))
            }
        }
    }
    let det = IntegerMatrix::from_rows(&coeffs).determinant();
    if det.is_zero() {
        return Err(LinalgError::NotSublattice("sub does not span".into()));
    }
    Ok(det.abs())
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn small_solver_agrees_with_reduction() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let rows = rng.gen_range(1..7);
            let cols = rng.gen_range(1..7);
            let rank_cap = rng.gen_range(1..=cols);
            let mut data = Vec::new();
            for _ in 0..rows {
                let row: Vec<Rational> = (0..cols)
                    .map(|c| if c < rank_cap { rat(rng.gen_range(-4..5), rng.gen_range(1..4)) } else { rat(0, 1) })
                    .collect();
                data.push(row);
            }
            let a = RationalMatrix::from_rows(data);
            let b: Vec<Rational> = (0..rows).map(|_| rat(rng.gen_range(-9..10), rng.gen_range(1..5))).collect();
            assert_eq!(solve_small(&a, &b), Some(solve_by_reduction(&a, &b)));
        }
    }

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check_smith(mat: &IntegerMatrix) -> SmithDecomposition {
        let s = smith_normal_form(mat);
        assert_eq!(s.u.mul(mat).mul(&s.v), s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        s
    }

    #[test]
    fn primitive_parts() {
        let (u, c) = primitive_part(&int_vec(&[2, 4, 6])).unwrap();
        assert_eq!((u, c), (int_vec(&[1, 2, 3]), BigInt::from(2)));
        let (u, c) = primitive_part(&int_vec(&[0, 0, 5])).unwrap();
        assert_eq!((u, c), (int_vec(&[0, 0, 1]), BigInt::from(5)));
        let (u, c) = primitive_part(&int_vec(&[-3, 6])).unwrap();
        assert_eq!((u, c), (int_vec(&[-1, 2]), BigInt::from(3)));
        assert_eq!(primitive_part(&int_vec(&[0, 0])), Err(LinalgError::ZeroVector));
    }

    #[test]
    fn smith_examples() {
        let s = check_smith(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.d, m(&[&[1, 0], &[0, 6]]));
        let s = check_smith(&IntegerMatrix::identity(3));
        assert_eq!(s.d, IntegerMatrix::identity(3));
        let s = check_smith(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.d, m(&[&[2, 0], &[0, 4]]));
        let s = check_smith(&m(&[&[0, 0], &[0, 0]]));
        assert_eq!(s.rank, 0);
        let s = check_smith(&IntegerMatrix::zeros(0, 3));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel_order(&m(&[&[2]])), CokernelOrder::Finite(2.into()));
        assert_eq!(
            cokernel_order(&IntegerMatrix::identity(2)),
            CokernelOrder::Finite(1.into())
        );
        assert_eq!(cokernel_order(&m(&[&[2, 0], &[0, 0]])), CokernelOrder::Infinite);
        assert_eq!(
            cokernel_order(&IntegerMatrix::zeros(0, 4)),
            CokernelOrder::Finite(1.into())
        );
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(saturate(&[int_vec(&[2, 0])], 2), LatticeBasis::from_i64(2, &[vec![1, 0]]));
        assert_eq!(saturate(&[int_vec(&[2, 3])], 2), LatticeBasis::from_i64(2, &[vec![2, 3]]));
        assert_eq!(saturate(&[], 3).rank(), 0);
        // (-1,-4,1) and (1,0,1) generate an index-2 sublattice of their saturation
        let gens = vec![int_vec(&[-1, -4, 1]), int_vec(&[1, 0, 1])];
        let sub = LatticeBasis::new(3, gens.clone());
        let sat = saturate(&gens, 3);
        assert_eq!(lattice_index(&sub, &sat).unwrap(), BigInt::from(2));
    }

    #[test]
    fn index_examples() {
        let sub = LatticeBasis::from_i64(2, &[vec![2, 0], vec![0, 3]]);
        let sup = LatticeBasis::from_i64(2, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(lattice_index(&sub, &sup).unwrap(), BigInt::from(6));
        assert_eq!(lattice_index(&sup, &sup).unwrap(), BigInt::from(1));
        assert!(matches!(
            lattice_index(&sup, &sub),
            Err(LinalgError::NotSublattice(_))
        ));
        let line = LatticeBasis::from_i64(2, &[vec![1, 1]]);
        let other = LatticeBasis::from_i64(2, &[vec![1, 0]]);
        assert!(lattice_index(&line, &other).is_err());
    }

    #[test]
    fn solve_examples() {
        let id = RationalMatrix::from_integer(&IntegerMatrix::identity(2));
        assert_eq!(
            solve_rational(&id, &rat_vec(&[1, 2])),
            LinearSolution::Unique(rat_vec(&[1, 2]))
        );
        let col = RationalMatrix::from_integer(&m(&[&[1], &[1]]));
        assert_eq!(solve_rational(&col, &rat_vec(&[0, 1])), LinearSolution::None);
        let row = RationalMatrix::from_integer(&m(&[&[1, 1]]));
        assert_eq!(solve_rational(&row, &rat_vec(&[3])), LinearSolution::Underdetermined);
    }

    #[test]
    fn kernel_and_hermite() {
        let k = integer_kernel(&[int_vec(&[1, 1, 1])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(v.iter().fold(BigInt::zero(), |a, x| a + x).is_zero());
        }
        assert!(LatticeBasis::new(3, k).is_saturated());
        let h = hermite_rows(&[int_vec(&[4, 6]), int_vec(&[2, 2])], 2);
        assert_eq!(h, vec![int_vec(&[2, 0]), int_vec(&[0, 2])]);
    }

    #[test]
    fn determinant_matches_cofactor() {
        let a = m(&[&[2, -1, 3], &[0, 4, 1], &[5, 2, -2]]);
        // cofactor expansion by hand: 2(-8-2) +1(0-5) + 3(0-20) = -85
        assert_eq!(a.determinant(), BigInt::from(-85));
    }
}
