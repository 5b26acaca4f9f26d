//! Dense linear algebra over a prime field.
//!
//! Row reduction uses a deterministic pivot rule (first nonzero entry
//! scanning columns left to right, rows top to bottom), and affine
//! solution sets enumerate in lexicographic order of their coefficient
//! vectors, so every downstream transcript is reproducible bit for bit.

use std::fmt;
use std::ops::Index;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("cannot combine a {lr}x{lc} matrix with a {rr}x{rc} matrix")]
    DimensionMismatch { lr: usize, lc: usize, rr: usize, rc: usize },
    #[error("expected {rows}x{cols} entries, got {got}")]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, got: usize },
    #[error("right-hand side has {got} entries for {rows} equations")]
    RhsLength { rows: usize, got: usize },
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("enumeration requires {required} vectors, cap is {cap}")]
    CapExceeded { required: u128, cap: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A row-major dense matrix over one field. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    spec: FieldSpec,
}

impl Matrix {
    pub fn new(
        spec: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount { rows, cols, got: entries.len() });
        }
        for e in &entries {
            if e.spec() != spec {
                return Err(FieldError::FieldMismatch(spec.modulus(), e.spec().modulus()).into());
            }
        }
        Ok(Matrix { rows, cols, entries, spec })
    }

    /// Build from integer rows, reducing each entry mod q. All rows must
    /// have the same length.
    pub fn from_rows(spec: FieldSpec, rows: &[Vec<u64>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::RaggedRows { row: i, expected: cols, got: row.len() });
            }
            entries.extend(row.iter().map(|&v| spec.element(v)));
        }
        Ok(Matrix { rows: rows.len(), cols, entries, spec })
    }

    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![spec.zero(); rows * cols], spec }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.entries[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.spec, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Standard matrix product over the field.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.spec != rhs.spec {
            return Err(
                FieldError::FieldMismatch(self.spec.modulus(), rhs.spec.modulus()).into(),
            );
        }
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch {
                lr: self.rows,
                lc: self.cols,
                rr: rhs.rows,
                rc: rhs.cols,
            });
        }
        let mut out = Matrix::zeros(self.spec, self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = self.spec.zero();
                for k in 0..self.cols {
                    acc = acc + self.get(r, k) * rhs.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::RhsLength { rows: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = self.spec.zero();
                for (c, x) in v.iter().enumerate() {
                    acc = acc + self.get(r, c) * *x;
                }
                acc
            })
            .collect())
    }

    /// `v * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, MatrixError> {
        if v.len() != self.rows {
            return Err(MatrixError::RhsLength { rows: self.rows, got: v.len() });
        }
        Ok((0..self.cols)
            .map(|c| {
                let mut acc = self.spec.zero();
                for (r, x) in v.iter().enumerate() {
                    acc = acc + *x * self.get(r, c);
                }
                acc
            })
            .collect())
    }

    pub fn vstack(&self, below: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != below.cols || self.spec != below.spec {
            return Err(MatrixError::DimensionMismatch {
                lr: self.rows,
                lc: self.cols,
                rr: below.rows,
                rc: below.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&below.entries);
        Ok(Matrix { rows: self.rows + below.rows, cols: self.cols, entries, spec: self.spec })
    }

    /// Reduced row echelon form with a deterministic pivot rule: for each
    /// column left to right, the first nonzero entry at or below the
    /// current pivot row becomes the pivot.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if src != pivot_row {
                for c in 0..m.cols {
                    let a = m.get(pivot_row, c);
                    let b = m.get(src, c);
                    m.set(pivot_row, c, b);
                    m.set(src, c, a);
                }
            }
            let inv = m.get(pivot_row, col).inv().expect("pivot is nonzero");
            for c in 0..m.cols {
                m.set(pivot_row, c, m.get(pivot_row, c) * inv);
            }
            for r in 0..m.rows {
                if r == pivot_row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col);
                for c in 0..m.cols {
                    let v = m.get(r, c) - factor * m.get(pivot_row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column in
    /// ascending column order. Size is `cols - rank`.
    pub fn nullspace(&self) -> Vec<Vec<FieldElement>> {
        let r = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &r.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - r.rank);
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![self.spec.zero(); self.cols];
            v[f] = self.spec.one();
            for (row_idx, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.matrix.get(row_idx, f);
            }
            basis.push(v);
        }
        basis
    }

    /// Full affine solution set of `self * x = rhs`, or `Inconsistent`.
    pub fn solve_affine(&self, rhs: &[FieldElement]) -> Result<AffineSolutionSet, MatrixError> {
        if rhs.len() != self.rows {
            return Err(MatrixError::RhsLength { rows: self.rows, got: rhs.len() });
        }
        let mut aug_entries = Vec::with_capacity(self.rows * (self.cols + 1));
        for (r, b) in rhs.iter().enumerate() {
            aug_entries.extend_from_slice(self.row(r));
            if b.spec() != self.spec {
                return Err(
                    FieldError::FieldMismatch(self.spec.modulus(), b.spec().modulus()).into(),
                );
            }
            aug_entries.push(*b);
        }
        let aug = Matrix {
            rows: self.rows,
            cols: self.cols + 1,
            entries: aug_entries,
            spec: self.spec,
        };
        let r = aug.rref();
        if r.pivots.last() == Some(&self.cols) {
            return Err(MatrixError::Inconsistent);
        }
        let mut particular = vec![self.spec.zero(); self.cols];
        for (row_idx, &p) in r.pivots.iter().enumerate() {
            particular[p] = r.matrix.get(row_idx, self.cols);
        }
        Ok(AffineSolutionSet {
            particular,
            basis: self.nullspace(),
            ambient_dim: self.cols,
            spec: self.spec,
        })
    }

    /// True iff the two matrices generate the same row space.
    pub fn same_row_space(&self, other: &Matrix) -> bool {
        if self.cols != other.cols || self.spec != other.spec {
            return false;
        }
        let ra = self.rank();
        let rb = other.rank();
        if ra != rb {
            return false;
        }
        match self.vstack(other) {
            Ok(stacked) => stacked.rank() == ra,
            Err(_) => false,
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        &self.entries[r * self.cols + c]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.rows, self.cols, self.spec.modulus())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of row reduction: the reduced matrix, its rank, and the pivot
/// columns in order.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// The solutions of a consistent linear system: one particular solution
/// plus the span of a nullspace basis. The set has exactly
/// `q^basis.len()` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolutionSet {
    particular: Vec<FieldElement>,
    basis: Vec<Vec<FieldElement>>,
    ambient_dim: usize,
    spec: FieldSpec,
}

impl AffineSolutionSet {
    pub fn particular(&self) -> &[FieldElement] {
        &self.particular
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `q^dimension`, saturating at `u128::MAX`.
    pub fn solution_count(&self) -> u128 {
        pow_saturating(self.spec.modulus(), self.basis.len())
    }

    /// Every solution, ordered by the lexicographic coefficient vector
    /// `(c_1, ..., c_n)` applied to the basis (first coefficient most
    /// significant).
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Vec<FieldElement>>, MatrixError> {
        let required = self.solution_count();
        if required > u128::from(cap) {
            return Err(MatrixError::CapExceeded { required, cap });
        }
        let mut out = Vec::with_capacity(required as usize);
        for coeffs in lex_vectors(self.spec, self.basis.len()) {
            let mut x = self.particular.clone();
            for (c, b) in coeffs.iter().zip(&self.basis) {
                if c.is_zero() {
                    continue;
                }
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi = *xi + *c * *bi;
                }
            }
            out.push(x);
        }
        Ok(out)
    }

    /// Membership test without enumeration.
    pub fn contains(&self, candidate: &[FieldElement]) -> bool {
        if candidate.len() != self.ambient_dim {
            return false;
        }
        let diff: Vec<FieldElement> = candidate
            .iter()
            .zip(&self.particular)
            .map(|(a, b)| *a - *b)
            .collect();
        if self.basis.is_empty() {
            return diff.iter().all(|e| e.is_zero());
        }
        // diff must be a combination of the basis vectors (as columns).
        let mut entries = Vec::with_capacity(self.ambient_dim * self.basis.len());
        for r in 0..self.ambient_dim {
            for b in &self.basis {
                entries.push(b[r]);
            }
        }
        let m = Matrix {
            rows: self.ambient_dim,
            cols: self.basis.len(),
            entries,
            spec: self.spec,
        };
        m.solve_affine(&diff).is_ok()
    }
}

pub(crate) fn pow_saturating(q: u16, e: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = match acc.checked_mul(u128::from(q)) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

/// Iterator over all vectors in `F_q^len` in lexicographic order (first
/// coordinate most significant). Yields exactly one empty vector when
/// `len == 0`.
pub fn lex_vectors(spec: FieldSpec, len: usize) -> LexVectors {
    LexVectors { spec, next: Some(vec![0; len]) }
}

pub struct LexVectors {
    spec: FieldSpec,
    next: Option<Vec<u16>>,
}

impl Iterator for LexVectors {
    type Item = Vec<FieldElement>;

    fn next(&mut self) -> Option<Vec<FieldElement>> {
        let current = self.next.take()?;
        let item = current
            .iter()
            .map(|&v| self.spec.element(u64::from(v)))
            .collect();
        let q = self.spec.modulus();
        let mut digits = current;
        let mut carried = true;
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d == q {
                *d = 0;
            } else {
                carried = false;
                break;
            }
        }
        if !carried {
            self.next = Some(digits);
        }
        Some(item)
    }
}
