//! Exact linear algebra over the rationals.
//!
//! Matrices are stored as sorted sparse rows. Every subspace is kept in its
//! reduced row echelon form, which is unique, so subspace equality is a plain
//! structural comparison.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// A sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("cannot multiply {0}x{1} by {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("vector of length {got} in ambient dimension {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Formats as `"num"` or `"num/den"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, LinalgError> {
    let err = || LinalgError::ParseRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

fn add_into(acc: &mut BTreeMap<usize, Rational>, col: usize, v: Rational) {
    if v.is_zero() {
        return;
    }
    let slot = acc.entry(col).or_insert_with(Rational::zero);
    *slot += v;
    if slot.is_zero() {
        acc.remove(&col);
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    /// A matrix with no rows and `cols` columns, to be filled with [`push_row`](Self::push_row).
    pub fn empty(cols: usize) -> Self {
        Self::zero(0, cols)
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            add_into(&mut acc[r], c, v);
        }
        Ok(Self {
            rows,
            cols,
            data: acc.into_iter().map(|m| m.into_iter().collect()).collect(),
        })
    }

    pub fn from_dense(rows: &[Vec<Rational>], cols: usize) -> Result<Self, LinalgError> {
        let triplets = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone())));
        Self::from_triplets(rows.len(), cols, triplets)
    }

    pub fn from_i64(rows: &[&[i64]], cols: usize) -> Result<Self, LinalgError> {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_dense(&dense, cols)
    }

    /// Appends a row; repeated columns are summed and zeros dropped.
    pub fn push_row<I>(&mut self, entries: I) -> Result<(), LinalgError>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut acc = BTreeMap::new();
        for (c, v) in entries {
            if c >= self.cols {
                return Err(LinalgError::IndexOutOfRange {
                    row: self.rows,
                    col: c,
                    rows: self.rows + 1,
                    cols: self.cols,
                });
            }
            add_into(&mut acc, c, v);
        }
        self.data.push(acc.into_iter().collect());
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[(usize, Rational)]> {
        self.data.iter().map(Vec::as_slice)
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r]
            .binary_search_by_key(&c, |(col, _)| *col)
            .map(|i| self.data[r][i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v.clone()));
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Returns a copy with rows reordered: row `i` of the result is row `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Self {
        Self {
            rows: order.len(),
            cols: self.cols,
            data: order.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, v * s)).collect())
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let triplets = self
            .entries()
            .chain(other.entries())
            .map(|(r, c, v)| (r, c, v.clone()));
        Self::from_triplets(self.rows, self.cols, triplets)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    add_into(&mut acc, *c, a * b);
                }
            }
            data.push(acc.into_iter().collect());
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::VectorLength {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, a)| a * &v[*c]).sum())
            .collect())
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data
            .iter()
            .map(|row| {
                let mut d = vec![Rational::zero(); self.cols];
                for (c, v) in row {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            let cells: Vec<String> = row
                .iter()
                .map(|(c, v)| format!("{c}:{}", format_rational(v)))
                .collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Incrementally maintained reduced row echelon form.
#[derive(Clone, Debug, Default)]
struct Echelon {
    /// pivot column -> fully reduced row with a 1 in that column
    rows: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

impl Echelon {
    fn reduce(&self, v: &mut BTreeMap<usize, Rational>) {
        let hits: Vec<usize> = v
            .keys()
            .copied()
            .filter(|c| self.rows.contains_key(c))
            .collect();
        // Pivot rows are zero on every other pivot column, so one pass suffices.
        for c in hits {
            let Some(coef) = v.get(&c).cloned() else {
                continue;
            };
            for (col, val) in &self.rows[&c] {
                add_into(v, *col, -(&coef * val));
            }
        }
    }

    /// Inserts a vector; returns true if it was independent of the current span.
    fn insert(&mut self, mut v: BTreeMap<usize, Rational>) -> bool {
        self.reduce(&mut v);
        let Some((&lead, lead_val)) = v.iter().next() else {
            return false;
        };
        let inv = lead_val.recip();
        for val in v.values_mut() {
            *val *= &inv;
        }
        for row in self.rows.values_mut() {
            if let Some(coef) = row.get(&lead).cloned() {
                for (col, val) in &v {
                    add_into(row, *col, -(&coef * val));
                }
            }
        }
        self.rows.insert(lead, v);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn into_rows(self) -> Vec<SparseVec> {
        self.rows
            .into_values()
            .map(|r| r.into_iter().collect())
            .collect()
    }
}

fn echelon_of(m: &SparseMatrix) -> Echelon {
    let mut e = Echelon::default();
    for row in &m.data {
        e.insert(row.iter().cloned().collect());
    }
    e
}

/// Rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    echelon_of(m).rank()
}

/// Canonical basis of `{v : m v = 0}`.
pub fn kernel_basis(m: &SparseMatrix) -> Subspace {
    let ech = echelon_of(m);
    let mut kernel = Echelon::default();
    for free in (0..m.cols).filter(|c| !ech.rows.contains_key(c)) {
        let mut v = BTreeMap::new();
        v.insert(free, Rational::one());
        for (pivot, row) in &ech.rows {
            if let Some(val) = row.get(&free) {
                v.insert(*pivot, -val.clone());
            }
        }
        kernel.insert(v);
    }
    Subspace {
        ambient_dim: m.cols,
        basis: kernel.into_rows(),
    }
}

/// Canonical basis of the span of the rows of `m`.
pub fn row_space(m: &SparseMatrix) -> Subspace {
    Subspace {
        ambient_dim: m.cols,
        basis: echelon_of(m).into_rows(),
    }
}

pub fn subspace_equal(a: &Subspace, b: &Subspace) -> Result<bool, LinalgError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(LinalgError::AmbientMismatch(a.ambient_dim, b.ambient_dim));
    }
    Ok(a.basis == b.basis)
}

/// A linear subspace of `Q^ambient_dim`, held as its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        row_space(&SparseMatrix::identity(ambient_dim))
    }

    pub fn from_vectors(
        ambient_dim: usize,
        vectors: &[Vec<Rational>],
    ) -> Result<Self, LinalgError> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(LinalgError::VectorLength {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
        }
        Ok(row_space(&SparseMatrix::from_dense(vectors, ambient_dim)?))
    }

    pub fn from_sparse(ambient_dim: usize, vectors: &[SparseVec]) -> Result<Self, LinalgError> {
        let mut m = SparseMatrix::empty(ambient_dim);
        for v in vectors {
            m.push_row(v.iter().cloned())?;
        }
        Ok(row_space(&m))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|v| v[0].0).collect()
    }

    pub fn dense_basis(&self) -> Vec<Vec<Rational>> {
        self.basis
            .iter()
            .map(|row| {
                let mut d = vec![Rational::zero(); self.ambient_dim];
                for (c, v) in row {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::VectorLength {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        let mut ech = Echelon::default();
        for row in &self.basis {
            ech.rows.insert(row[0].0, row.iter().cloned().collect());
        }
        let mut w: BTreeMap<usize, Rational> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        ech.reduce(&mut w);
        Ok(w.is_empty())
    }

    /// Every basis vector pairs to zero with every row of `m` (rows read as functionals).
    pub fn annihilated_by(&self, m: &SparseMatrix) -> Result<bool, LinalgError> {
        if m.cols() != self.ambient_dim {
            return Err(LinalgError::AmbientMismatch(m.cols(), self.ambient_dim));
        }
        Ok(self.dense_basis().iter().all(|v| {
            m.mul_vec(v)
                .map(|out| out.iter().all(Zero::is_zero))
                .unwrap_or(false)
        }))
    }

    /// Relabels coordinates: coordinate `i` moves to `perm[i]`, scaled by `signs[i]`.
    pub fn transport(&self, perm: &[usize], signs: &[Rational]) -> Result<Self, LinalgError> {
        if perm.len() != self.ambient_dim || signs.len() != self.ambient_dim {
            return Err(LinalgError::VectorLength {
                expected: self.ambient_dim,
                got: perm.len().min(signs.len()),
            });
        }
        let moved: Vec<SparseVec> = self
            .basis
            .iter()
            .map(|row| {
                let mut r: SparseVec = row
                    .iter()
                    .map(|(c, v)| (perm[*c], v * &signs[*c]))
                    .collect();
                r.sort_by_key(|(c, _)| *c);
                r
            })
            .collect();
        Self::from_sparse(self.ambient_dim, &moved)
    }
}

pub fn is_integral(m: &SparseMatrix) -> bool {
    m.entries().all(|(_, _, v)| v.denom().is_one())
}

pub fn max_abs_entry(m: &SparseMatrix) -> Rational {
    m.entries()
        .map(|(_, _, v)| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]], cols: usize) -> SparseMatrix {
        SparseMatrix::from_i64(rows, cols).unwrap()
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        assert_eq!(rank(&SparseMatrix::zero(0, 0)), 0);
        assert_eq!(kernel_basis(&SparseMatrix::zero(0, 0)).dim(), 0);
    }

    #[test]
    fn identity_rank() {
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
        assert_eq!(kernel_basis(&SparseMatrix::identity(2)), Subspace::zero(2));
    }

    #[test]
    fn kernel_of_difference_row() {
        let k = kernel_basis(&m(&[&[1, -1]], 2));
        let expected = Subspace::from_vectors(2, &[vec![int(1), int(1)]]).unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn kernel_with_fractions() {
        // 2x + 3y - z = 0
        let k = kernel_basis(&m(&[&[2, 3, -1]], 3));
        assert_eq!(k.dim(), 2);
        for v in k.dense_basis() {
            let dot = int(2) * &v[0] + int(3) * &v[1] - &v[2];
            assert!(dot.is_zero());
        }
        assert_eq!(k.pivots(), vec![0, 1]);
    }

    #[test]
    fn subspace_equality_is_scale_invariant() {
        let a = Subspace::from_vectors(2, &[vec![int(1), int(0)]]).unwrap();
        let b = Subspace::from_vectors(2, &[vec![int(2), int(0)]]).unwrap();
        let c = Subspace::from_vectors(2, &[vec![int(0), int(1)]]).unwrap();
        assert!(subspace_equal(&a, &b).unwrap());
        assert!(!subspace_equal(&a, &c).unwrap());
        assert_eq!(
            subspace_equal(&a, &Subspace::zero(3)),
            Err(LinalgError::AmbientMismatch(2, 3))
        );
    }

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let x =
            SparseMatrix::from_triplets(1, 2, [(0, 0, int(1)), (0, 0, int(-1)), (0, 1, int(5))])
                .unwrap();
        assert_eq!(x.nnz(), 1);
        assert_eq!(x.get(0, 1), int(5));
        assert!(SparseMatrix::from_triplets(1, 1, [(0, 3, int(1))]).is_err());
    }

    #[test]
    fn rational_text_round_trip() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn matrix_product_and_transpose() {
        let a = m(&[&[1, 2], &[0, 1]], 2);
        let b = m(&[&[1, -2], &[0, 1]], 2);
        assert_eq!(a.mul(&b).unwrap(), SparseMatrix::identity(2));
        assert_eq!(a.transpose().get(1, 0), int(2));
        assert!(a.mul(&SparseMatrix::zero(3, 1)).is_err());
    }

    #[test]
    fn contains_and_transport() {
        let s = Subspace::from_vectors(3, &[vec![int(1), int(1), int(0)]]).unwrap();
        assert!(s.contains(&[int(3), int(3), int(0)]).unwrap());
        assert!(!s.contains(&[int(1), int(0), int(0)]).unwrap());
        let t = s.transport(&[2, 1, 0], &[int(1), int(-1), int(1)]).unwrap();
        assert!(t.contains(&[int(0), int(-1), int(1)]).unwrap());
    }
}
