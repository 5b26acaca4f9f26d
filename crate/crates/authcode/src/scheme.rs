//! The authentication protocol.
//!
//! Four phases run over a public `[V, k]` code with generator `G` and a
//! message budget `M`:
//!
//! 1. **Key generation**: a trusted authority samples a secret matrix
//!    `A` of shape `(M+1) x k`, one polynomial coefficient column per
//!    code dimension.
//! 2. **Key distribution**: the authority computes `B = A * G` and hands
//!    receiver `R_i` the i-th column of `B` as its private key.
//! 3. **Tagging**: for a message `s` in `F_q` the sender broadcasts
//!    `[s, L(s)]` where `L_j(s) = sum_t A[t][j] * s^t`.
//! 4. **Verification**: `R_i` accepts iff its label
//!    `sum_t s^t * b[t][i]` equals `sum_j L_j(s) * g[j][i]`.
//!
//! Both assumptions the security results lean on (minimum distance at
//! least 2 for the code *and* for its dual) are checked eagerly when
//! [`SchemeParams`] is built, so no attack-analysis path can run against
//! a code that violates them.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::code::{CodeError, LinearCode};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{Matrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("scheme requires at least one message (M >= 1)")]
    NoMessages,
    #[error("code minimum distance is {d}, scheme requires at least 2")]
    DistanceTooSmall { d: usize },
    #[error("dual minimum distance is {d}, scheme requires at least 2")]
    DualDistanceTooSmall { d: usize },
    #[error("key matrix is {rows}x{cols}, scheme needs {want_rows}x{want_cols}")]
    KeyShape { rows: usize, cols: usize, want_rows: usize, want_cols: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Public parameters: the code, the message budget `M`, and the two
/// minimum distances computed at validation time.
#[derive(Debug, Clone)]
pub struct SchemeParams {
    code: LinearCode,
    max_messages: usize,
    distance: usize,
    dual_distance: usize,
}

impl SchemeParams {
    /// Validate scheme parameters. Computes `d(C)` and `d(C.dual())`
    /// (cap-bounded enumerations) and refuses codes where either is
    /// below 2.
    ///
    /// `M + 1 <= q` is *not* required here: the protocol itself runs for
    /// any `M >= 1`. Attack analysis needs an unsent message to exist,
    /// and the adversary operations check that themselves.
    pub fn new(code: LinearCode, max_messages: usize, cap: u64) -> Result<Self, SchemeError> {
        if max_messages == 0 {
            return Err(SchemeError::NoMessages);
        }
        let distance = code.min_distance(cap)?;
        if distance < 2 {
            return Err(SchemeError::DistanceTooSmall { d: distance });
        }
        let dual_distance = code.dual()?.min_distance(cap)?;
        if dual_distance < 2 {
            return Err(SchemeError::DualDistanceTooSmall { d: dual_distance });
        }
        Ok(SchemeParams { code, max_messages, distance, dual_distance })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn spec(&self) -> FieldSpec {
        self.code.spec()
    }

    /// The message budget `M`.
    pub fn max_messages(&self) -> usize {
        self.max_messages
    }

    pub fn receivers(&self) -> usize {
        self.code.length()
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn dual_distance(&self) -> usize {
        self.dual_distance
    }

    /// Sample a fresh secret key matrix from a 64-bit seed.
    ///
    /// The stream is ChaCha8 seeded via `seed_from_u64`; entries are
    /// drawn row-major (degree row 0 first, columns left to right within
    /// a row). Each entry consumes 32-bit words until one falls below the
    /// largest multiple of q, then reduces it mod q, so the distribution
    /// is exactly uniform and the same seed always yields the same
    /// matrix.
    pub fn keygen(&self, seed: u64) -> KeyMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = self.spec();
        let q = u64::from(spec.modulus());
        let zone = (1u64 << 32) - ((1u64 << 32) % q);
        let rows = self.max_messages + 1;
        let cols = self.code.dimension();
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let v = loop {
                let x = u64::from(rng.next_u32());
                if x < zone {
                    break x % q;
                }
            };
            entries.push(spec.element(v));
        }
        let matrix = Matrix::new(spec, rows, cols, entries).expect("shape is consistent");
        KeyMatrix { matrix }
    }

    /// Adopt an externally supplied key matrix (for example a published
    /// test vector), checking its shape against the scheme.
    pub fn key_matrix(&self, matrix: Matrix) -> Result<KeyMatrix, SchemeError> {
        let want_rows = self.max_messages + 1;
        let want_cols = self.code.dimension();
        if matrix.rows() != want_rows || matrix.cols() != want_cols {
            return Err(SchemeError::KeyShape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                want_rows,
                want_cols,
            });
        }
        Ok(KeyMatrix { matrix })
    }

    /// Key distribution: `B = A * G`, then one column per receiver.
    pub fn distribute(&self, key: &KeyMatrix) -> Result<(Matrix, Vec<PrivateKey>), SchemeError> {
        let b = key.matrix.mul(self.code.generator())?;
        let keys = (1..=self.receivers())
            .map(|i| PrivateKey { receiver: i, column: b.column(i - 1) })
            .collect();
        Ok((b, keys))
    }
}

/// The trusted authority's secret: an `(M+1) x k` matrix of polynomial
/// coefficients, column `j` holding the coefficients of `L_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMatrix {
    matrix: Matrix,
}

impl KeyMatrix {
    /// Adopt a raw coefficient matrix without a scheme context. Its shape
    /// is checked the moment it meets one (`SchemeParams::key_matrix` or
    /// `distribute`).
    pub fn from_matrix(matrix: Matrix) -> Self {
        KeyMatrix { matrix }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Tag a message: `tag[j] = sum_t A[t][j] * s^t`. Re-tagging the same
    /// message is permitted and yields the identical broadcast.
    pub fn tag(&self, s: FieldElement) -> TaggedMessage {
        let powers = power_row(s, self.matrix.rows());
        let tag = self.matrix.vec_mul(&powers).expect("powers match key rows");
        TaggedMessage { message: s, tag }
    }
}

/// Powers `(1, s, s^2, ..., s^(len-1))`; `s^0 = 1` even at `s = 0`.
pub(crate) fn power_row(s: FieldElement, len: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(len);
    let mut acc = s.spec().one();
    for _ in 0..len {
        out.push(acc);
        acc = acc * s;
    }
    out
}

/// Receiver `R_i`'s private key: the i-th column of `B = A * G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    receiver: usize,
    column: Vec<FieldElement>,
}

impl PrivateKey {
    pub fn new(receiver: usize, column: Vec<FieldElement>) -> Self {
        PrivateKey { receiver, column }
    }

    /// 1-based receiver index.
    pub fn receiver(&self) -> usize {
        self.receiver
    }

    pub fn column(&self) -> &[FieldElement] {
        &self.column
    }

    /// The label of this receiver for message `s`:
    /// `sum_t s^t * b[t][i]`.
    pub fn label(&self, s: FieldElement) -> FieldElement {
        let powers = power_row(s, self.column.len());
        let mut acc = s.spec().zero();
        for (p, b) in powers.iter().zip(&self.column) {
            acc = acc + *p * *b;
        }
        acc
    }

    /// Verification: accept iff the label equals the tag folded with this
    /// receiver's generator column. `g_column` must be column
    /// `self.receiver()` of the public generator.
    pub fn verify(&self, g_column: &[FieldElement], message: &TaggedMessage) -> bool {
        assert_eq!(
            g_column.len(),
            message.tag.len(),
            "generator column and tag disagree on the code dimension"
        );
        let spec = message.message.spec();
        let mut folded = spec.zero();
        for (t, g) in message.tag.iter().zip(g_column) {
            folded = folded + *t * *g;
        }
        self.label(message.message) == folded
    }
}

/// The broadcast unit `[s, L(s)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedMessage {
    pub message: FieldElement,
    pub tag: Vec<FieldElement>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_CAP;

    fn small_params() -> SchemeParams {
        // [4,2] MDS code over F_5.
        let code = LinearCode::from_rows(5, &[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap();
        SchemeParams::new(code, 2, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn params_reject_bad_codes() {
        // d(C) = 1: the unit vector e_1 is a codeword.
        let c = LinearCode::from_rows(2, &[vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(
            SchemeParams::new(c, 1, DEFAULT_CAP).unwrap_err(),
            SchemeError::DistanceTooSmall { d: 1 }
        );
        // d(dual) = 1: zero generator column (but d(C) = 2).
        let c = LinearCode::from_rows(2, &[vec![1, 0, 0, 1], vec![0, 1, 0, 1]]);
        let c = c.unwrap();
        assert_eq!(
            SchemeParams::new(c, 1, DEFAULT_CAP).unwrap_err(),
            SchemeError::DualDistanceTooSmall { d: 1 }
        );
        // full-space code has no usable dual
        let c = LinearCode::from_rows(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            SchemeParams::new(c, 1, DEFAULT_CAP),
            Err(SchemeError::DistanceTooSmall { d: 1 })
        ));
        let params = small_params();
        assert_eq!(
            SchemeParams::new(params.code().clone(), 0, DEFAULT_CAP).unwrap_err(),
            SchemeError::NoMessages
        );
    }

    #[test]
    fn keygen_shape_and_determinism() {
        let params = small_params();
        let a = params.keygen(42);
        assert_eq!((a.matrix().rows(), a.matrix().cols()), (3, 2));
        assert_eq!(params.keygen(42), a);
        assert_ne!(params.keygen(43), a);
        for e in a.matrix().entries() {
            assert!(e.value() < 5);
        }
    }

    #[test]
    fn distribute_shapes_and_identity_code() {
        let params = small_params();
        let a = params.keygen(7);
        let (b, keys) = params.distribute(&a).unwrap();
        assert_eq!((b.rows(), b.cols()), (3, 4));
        assert_eq!(keys.len(), 4);
        for (i, k) in keys.iter().enumerate() {
            assert_eq!(k.receiver(), i + 1);
            assert_eq!(k.column(), &b.column(i)[..]);
        }
    }

    #[test]
    fn tag_at_zero_is_constant_row() {
        let params = small_params();
        let a = params.keygen(3);
        let spec = params.spec();
        let t = a.tag(spec.zero());
        assert_eq!(t.tag, a.matrix().row(0).to_vec());
    }

    #[test]
    fn completeness_exhaustive_small() {
        // Every honestly tagged message verifies at every receiver, for
        // every message value and a spread of keys.
        let params = small_params();
        for seed in 0..20 {
            let a = params.keygen(seed);
            let (_, keys) = params.distribute(&a).unwrap();
            for s in params.spec().elements() {
                let msg = a.tag(s);
                for key in &keys {
                    let g = params.code().column(key.receiver()).unwrap();
                    assert!(key.verify(&g, &msg));
                }
            }
        }
    }

    #[test]
    fn tampered_tag_rejected() {
        let params = small_params();
        let a = params.keygen(11);
        let (_, keys) = params.distribute(&a).unwrap();
        let spec = params.spec();
        let mut msg = a.tag(spec.element(2));
        // receiver 2 has generator column (1, 1); perturb tag coordinate 1
        msg.tag[0] = msg.tag[0] + spec.one();
        let key = &keys[1];
        let g = params.code().column(2).unwrap();
        assert!(!key.verify(&g, &msg));
    }

    #[test]
    fn label_equals_folded_tag() {
        let params = small_params();
        let a = params.keygen(5);
        let (_, keys) = params.distribute(&a).unwrap();
        for s in params.spec().elements() {
            let msg = a.tag(s);
            for key in &keys {
                let g = params.code().column(key.receiver()).unwrap();
                let mut folded = params.spec().zero();
                for (t, gi) in msg.tag.iter().zip(&g) {
                    folded = folded + *t * *gi;
                }
                assert_eq!(key.label(s), folded);
            }
        }
    }

    #[test]
    fn distribute_is_linear_in_key() {
        let params = small_params();
        let a1 = params.keygen(1);
        let a2 = params.keygen(2);
        let spec = params.spec();
        let sum_entries: Vec<_> = a1
            .matrix()
            .entries()
            .iter()
            .zip(a2.matrix().entries())
            .map(|(x, y)| *x + *y)
            .collect();
        let sum = params
            .key_matrix(Matrix::new(spec, 3, 2, sum_entries).unwrap())
            .unwrap();
        let (b1, _) = params.distribute(&a1).unwrap();
        let (b2, _) = params.distribute(&a2).unwrap();
        let (bs, _) = params.distribute(&sum).unwrap();
        for r in 0..bs.rows() {
            for c in 0..bs.cols() {
                assert_eq!(bs.get(r, c), b1.get(r, c) + b2.get(r, c));
            }
        }
    }

    #[test]
    fn label_is_row_times_key_times_column() {
        // The two evaluation orders of the verification chain agree:
        // label_i(s) = (1, s, ..., s^M) * A * g_i.
        let params = small_params();
        let a = params.keygen(9);
        let (_, keys) = params.distribute(&a).unwrap();
        for s in params.spec().elements() {
            let powers = power_row(s, params.max_messages() + 1);
            let row = a.matrix().vec_mul(&powers).unwrap();
            for key in &keys {
                let g = params.code().column(key.receiver()).unwrap();
                let mut acc = params.spec().zero();
                for (r, gi) in row.iter().zip(&g) {
                    acc = acc + *r * *gi;
                }
                assert_eq!(key.label(s), acc);
            }
        }
    }

    #[test]
    fn key_matrix_shape_checked() {
        let params = small_params();
        let bad = Matrix::zeros(params.spec(), 2, 2);
        assert!(matches!(
            params.key_matrix(bad),
            Err(SchemeError::KeyShape { .. })
        ));
    }
}
