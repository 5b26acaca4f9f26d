//! Linear codes over prime fields.
//!
//! A `[V, k]` code is a k-dimensional subspace of `F_q^V`, held here by an
//! explicit generator matrix whose rows are kept verbatim: in the
//! authentication scheme the generator is a public parameter and its
//! columns are receiver identities, so it must not be canonicalized.
//!
//! Besides the usual queries (dual code, minimum distance, enumeration)
//! this module implements the central combinatorial object of the
//! security analysis: the codewords that are *minimal with respect to a
//! coordinate* `i`: component 1 at `i`, with no other such codeword's
//! support strictly contained in theirs. All coordinates are 1-based.

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::matrix::{lex_vectors, pow_saturating, Matrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("generator matrix has no rows")]
    Empty,
    #[error("generator rows are dependent: rank {rank} < {dim} rows")]
    RankDeficient { rank: usize, dim: usize },
    #[error("full-space code has a zero-dimensional dual")]
    TrivialDual,
    #[error("coordinate {coord} out of range 1..={length}")]
    CoordOutOfRange { coord: usize, length: usize },
    #[error("message has {got} symbols, code dimension is {dim}")]
    MessageLength { got: usize, dim: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A linear `[V, k]` code given by a full-rank generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: Matrix,
}

impl LinearCode {
    /// Validate a generator matrix: nonempty and full row rank. The rows
    /// are stored exactly as given.
    pub fn new(generator: Matrix) -> Result<Self, CodeError> {
        if generator.rows() == 0 || generator.cols() == 0 {
            return Err(CodeError::Empty);
        }
        let rank = generator.rank();
        if rank != generator.rows() {
            return Err(CodeError::RankDeficient { rank, dim: generator.rows() });
        }
        Ok(LinearCode { generator })
    }

    /// Build a code over `F_q` from integer generator rows (reduced mod q).
    pub fn from_rows(q: u64, rows: &[Vec<u64>]) -> Result<Self, CodeError> {
        let spec = FieldSpec::new(q)?;
        LinearCode::new(Matrix::from_rows(spec, rows)?)
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn spec(&self) -> FieldSpec {
        self.generator.spec()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Column `coord` (1-based) of the generator: the public vector of
    /// receiver `R_coord` in the scheme.
    pub fn column(&self, coord: usize) -> Result<Vec<FieldElement>, CodeError> {
        self.check_coord(coord)?;
        Ok(self.generator.column(coord - 1))
    }

    fn check_coord(&self, coord: usize) -> Result<(), CodeError> {
        if coord == 0 || coord > self.length() {
            return Err(CodeError::CoordOutOfRange { coord, length: self.length() });
        }
        Ok(())
    }

    /// Encode a message vector: `m * G`.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if message.len() != self.dimension() {
            return Err(CodeError::MessageLength { got: message.len(), dim: self.dimension() });
        }
        Ok(self.generator.vec_mul(message)?)
    }

    /// Membership: is `word` in the row space of the generator?
    pub fn contains(&self, word: &[FieldElement]) -> bool {
        if word.len() != self.length() {
            return false;
        }
        let row = match Matrix::new(self.spec(), 1, self.length(), word.to_vec()) {
            Ok(m) => m,
            Err(_) => return false,
        };
        match self.generator.vstack(&row) {
            Ok(stacked) => stacked.rank() == self.dimension(),
            Err(_) => false,
        }
    }

    /// The dual code: all vectors orthogonal to every codeword. Its
    /// generator `H` satisfies `G * H^T = 0`.
    pub fn dual(&self) -> Result<LinearCode, CodeError> {
        if self.dimension() == self.length() {
            return Err(CodeError::TrivialDual);
        }
        let basis = self.generator.nullspace();
        let mut entries = Vec::with_capacity(basis.len() * self.length());
        for v in &basis {
            entries.extend_from_slice(v);
        }
        let h = Matrix::new(self.spec(), basis.len(), self.length(), entries)?;
        LinearCode::new(h)
    }

    fn check_cap(&self, cap: u64) -> Result<(), CodeError> {
        let required = pow_saturating(self.spec().modulus(), self.dimension());
        if required > u128::from(cap) {
            return Err(MatrixError::CapExceeded { required, cap }.into());
        }
        Ok(())
    }

    /// Minimum Hamming weight over all nonzero codewords, by full
    /// enumeration of the `q^k` messages.
    pub fn min_distance(&self, cap: u64) -> Result<usize, CodeError> {
        self.check_cap(cap)?;
        let mut best = self.length() + 1;
        for m in lex_vectors(self.spec(), self.dimension()) {
            if m.iter().all(|e| e.is_zero()) {
                continue;
            }
            let w = self
                .generator
                .vec_mul(&m)?
                .iter()
                .filter(|e| !e.is_zero())
                .count();
            if w < best {
                best = w;
            }
        }
        Ok(best)
    }

    /// All `q^k` codewords, ordered by lexicographic message vector.
    pub fn enumerate_codewords(&self, cap: u64) -> Result<Vec<Codeword>, CodeError> {
        self.check_cap(cap)?;
        let mut out = Vec::new();
        for m in lex_vectors(self.spec(), self.dimension()) {
            out.push(Codeword::new(self.generator.vec_mul(&m)?));
        }
        Ok(out)
    }

    /// All codewords minimal with respect to coordinate `coord`
    /// (1-based): component exactly 1 at `coord`, and no *other* codeword
    /// with component 1 at `coord` has support strictly contained in
    /// theirs. Sorted lexicographically by vector.
    ///
    /// The filter set is at most `q^(k-1)` codewords, so the quadratic
    /// support scan stays cheap at the scales this crate targets.
    pub fn minimal_codewords_wrt(
        &self,
        coord: usize,
        cap: u64,
    ) -> Result<Vec<Codeword>, CodeError> {
        self.check_coord(coord)?;
        let idx = coord - 1;
        let all = self.enumerate_codewords(cap)?;
        let candidates: Vec<&Codeword> = all
            .iter()
            .filter(|c| c.vector[idx].value() == 1)
            .collect();
        let mut out: Vec<Codeword> = Vec::new();
        'outer: for c in &candidates {
            for other in &candidates {
                if other.vector != c.vector && is_strict_subset(&other.support, &c.support) {
                    continue 'outer;
                }
            }
            out.push((*c).clone());
        }
        out.sort();
        Ok(out)
    }
}

/// True iff `a` is a strict subset of `b` (both sorted ascending).
pub fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() < b.len() && is_subset(a, b)
}

/// True iff `a` is a subset of `b` (both sorted ascending).
pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut bi = b.iter();
    'outer: for x in a {
        for y in bi.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// A codeword with its Hamming weight and support (1-based, ascending)
/// cached at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    vector: Vec<FieldElement>,
    weight: usize,
    support: Vec<usize>,
}

impl Codeword {
    pub fn new(vector: Vec<FieldElement>) -> Self {
        let support: Vec<usize> = vector
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, _)| i + 1)
            .collect();
        Codeword { weight: support.len(), vector, support }
    }

    pub fn vector(&self) -> &[FieldElement] {
        &self.vector
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// The support with one coordinate removed; used to turn minimal
    /// codewords into coalition index sets.
    pub fn support_without(&self, coord: usize) -> Vec<usize> {
        self.support.iter().copied().filter(|&i| i != coord).collect()
    }

    pub fn values(&self) -> Vec<u16> {
        self.vector.iter().map(|e| e.value()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_CAP;

    fn repetition3() -> LinearCode {
        LinearCode::from_rows(2, &[vec![1, 1, 1]]).unwrap()
    }

    #[test]
    fn construction_validates_rank() {
        assert!(repetition3().dimension() == 1);
        let err = LinearCode::from_rows(2, &[vec![1, 0], vec![1, 0]]);
        assert_eq!(err.unwrap_err(), CodeError::RankDeficient { rank: 1, dim: 2 });
        assert_eq!(
            LinearCode::from_rows(2, &[]).unwrap_err(),
            CodeError::Empty
        );
    }

    #[test]
    fn dual_of_repetition_is_even_weight() {
        let c = repetition3();
        let d = c.dual().unwrap();
        assert_eq!((d.length(), d.dimension()), (3, 2));
        assert_eq!(d.min_distance(DEFAULT_CAP).unwrap(), 2);
        // G * H^T = 0
        let prod = c.generator().mul(&d.generator().transpose()).unwrap();
        assert!(prod.entries().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn dual_of_full_space_is_trivial() {
        let c = LinearCode::from_rows(3, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(c.dual().unwrap_err(), CodeError::TrivialDual);
        assert_eq!(c.min_distance(DEFAULT_CAP).unwrap(), 1);
    }

    #[test]
    fn bidual_has_same_codewords() {
        let c = LinearCode::from_rows(5, &[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap();
        let dd = c.dual().unwrap().dual().unwrap();
        assert!(c.generator().same_row_space(dd.generator()));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(repetition3().min_distance(DEFAULT_CAP).unwrap(), 3);
        let mds = LinearCode::from_rows(5, &[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(mds.min_distance(DEFAULT_CAP).unwrap(), 3);
    }

    #[test]
    fn distance_cap() {
        let c = repetition3();
        assert!(matches!(
            c.min_distance(1),
            Err(CodeError::Matrix(MatrixError::CapExceeded { required: 2, cap: 1 }))
        ));
    }

    #[test]
    fn enumeration_counts_and_order() {
        let c = repetition3();
        let words = c.enumerate_codewords(DEFAULT_CAP).unwrap();
        assert_eq!(words.len(), 2);
        assert_eq!(words[0].values(), vec![0, 0, 0]);
        assert_eq!(words[1].values(), vec![1, 1, 1]);

        let c2 = LinearCode::from_rows(3, &[vec![1, 0, 2], vec![0, 1, 1]]).unwrap();
        let words = c2.enumerate_codewords(DEFAULT_CAP).unwrap();
        assert_eq!(words.len(), 9);
        let mut dedup: Vec<_> = words.iter().map(Codeword::values).collect();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 9);
    }

    #[test]
    fn minimal_codewords_even_weight_code() {
        // [3,2] even-weight code over F_2: codewords 000, 110, 101, 011.
        let c = LinearCode::from_rows(2, &[vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        let min1 = c.minimal_codewords_wrt(1, DEFAULT_CAP).unwrap();
        let got: Vec<Vec<u16>> = min1.iter().map(Codeword::values).collect();
        // 110 and 101 qualify; 011 has component 0 at coordinate 1.
        assert_eq!(got, vec![vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn minimal_codewords_empty_when_component_never_one() {
        // Over F_3, scale a [2,1] code so coordinate 1 is never 1:
        // codewords are (0,0), (2,1), (1,2) -> wait, multiples of (2,1):
        // (0,0), (2,1), (4,2)=(1,2). Coordinate 1 takes values 0,2,1 -> 1
        // appears. Use the zero column instead: not allowed (rank).
        // Use coordinate of a [3,1] code over F_3 generated by (1,2,0):
        // codewords (0,0,0),(1,2,0),(2,1,0); coordinate 3 is always 0.
        let c = LinearCode::from_rows(3, &[vec![1, 2, 0]]).unwrap();
        assert!(c.minimal_codewords_wrt(3, DEFAULT_CAP).unwrap().is_empty());
    }

    #[test]
    fn minimal_codeword_invariants_small() {
        // Every returned codeword has component 1 at i; supports are
        // pairwise incomparable; every codeword with component 1 at i has
        // some minimal support below it.
        for (q, rows) in [
            (2u64, vec![vec![1, 1, 0, 1], vec![0, 1, 1, 1]]),
            (3u64, vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]]),
            (5u64, vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]),
        ] {
            let c = LinearCode::from_rows(q, &rows).unwrap();
            for coord in 1..=c.length() {
                let min = c.minimal_codewords_wrt(coord, DEFAULT_CAP).unwrap();
                for m in &min {
                    assert_eq!(m.vector()[coord - 1].value(), 1);
                }
                for a in &min {
                    for b in &min {
                        assert!(!is_strict_subset(a.support(), b.support()));
                    }
                }
                for w in c.enumerate_codewords(DEFAULT_CAP).unwrap() {
                    if w.vector()[coord - 1].value() != 1 {
                        continue;
                    }
                    assert!(
                        min.iter().any(|m| is_subset(m.support(), w.support())),
                        "no minimal support under {:?}",
                        w.values()
                    );
                }
            }
        }
    }

    #[test]
    fn singleton_bound_holds() {
        for (q, rows) in [
            (2u64, vec![vec![1, 1, 1]]),
            (2u64, vec![vec![1, 0, 1, 1], vec![0, 1, 1, 1]]),
            (5u64, vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]),
            (7u64, vec![vec![1, 0, 3, 2, 1], vec![0, 1, 5, 6, 2]]),
        ] {
            let c = LinearCode::from_rows(q, &rows).unwrap();
            let d = c.min_distance(DEFAULT_CAP).unwrap();
            assert!(d <= c.length() - c.dimension() + 1);
        }
    }

    #[test]
    fn subset_predicates() {
        assert!(is_strict_subset(&[1, 3], &[1, 2, 3]));
        assert!(!is_strict_subset(&[1, 2, 3], &[1, 2, 3]));
        assert!(!is_strict_subset(&[1, 4], &[1, 2, 3]));
        assert!(is_subset(&[], &[1]));
        assert!(is_subset(&[2, 5], &[1, 2, 4, 5]));
        assert!(!is_subset(&[2, 6], &[1, 2, 4, 5]));
    }
}
