//! The embedded reference fixture: a fully worked `[9, 5]` scheme over
//! `F_5` with `M = 3`, used as a regression oracle.
//!
//! All constants here are data, not derivations: the test suite and the
//! `paper-example` CLI command recompute every one of them from the
//! generator matrix and the key matrix alone and diff the results against
//! these tables, so any drift in the field, matrix, code, scheme,
//! adversary, or analysis layers shows up as a concrete mismatch.
//!
//! The fixture follows the source example's own data: the three observed
//! broadcasts carry messages 1, 2 and 3 (the accompanying prose
//! mis-states the third as 4, which is the *fresh* message), and the
//! final table of five-member non-forging coalitions is known to be
//! erroneous (it lists all 56 five-member subsets, including strict
//! supersets of minimal substitution groups). That table is embedded only
//! so the erratum can be reported precisely.

use crate::code::LinearCode;
use crate::matrix::Matrix;
use crate::scheme::{KeyMatrix, SchemeParams};
use crate::DEFAULT_CAP;

/// Field size.
pub const Q: u64 = 5;

/// Message budget `M`.
pub const MAX_MESSAGES: usize = 3;

/// Public generator matrix of the `[9, 5]` code (systematic form).
pub const GENERATOR: [[u64; 9]; 5] = [
    [1, 0, 0, 0, 0, 1, 2, 4, 0],
    [0, 1, 0, 0, 0, 2, 2, 3, 2],
    [0, 0, 1, 0, 0, 3, 1, 3, 4],
    [0, 0, 0, 1, 0, 4, 0, 0, 2],
    [0, 0, 0, 0, 1, 2, 1, 1, 4],
];

/// The trusted authority's secret key matrix `A` (4 x 5).
pub const KEY_MATRIX: [[u64; 5]; 4] = [
    [3, 2, 2, 0, 2],
    [0, 4, 3, 0, 2],
    [0, 1, 2, 3, 1],
    [3, 3, 0, 1, 3],
];

/// The distributed matrix `B = A * G` (4 x 9).
pub const DISTRIBUTED: [[u64; 9]; 4] = [
    [3, 2, 2, 0, 2, 2, 4, 1, 0],
    [0, 4, 3, 0, 2, 1, 3, 3, 3],
    [0, 1, 2, 3, 1, 2, 0, 0, 0],
    [3, 3, 0, 1, 3, 4, 0, 4, 0],
];

/// Minimum distance of the dual code.
pub const DUAL_DISTANCE: usize = 5;

/// The corrupted coalition.
pub const COALITION: [usize; 3] = [1, 2, 3];

/// Messages observed by the coalition (in broadcast order).
pub const OBSERVED_MESSAGES: [u64; 3] = [1, 2, 3];

/// Tags of the observed broadcasts, row `t` belonging to
/// `OBSERVED_MESSAGES[t]`.
pub const OBSERVED_TAGS: [[u64; 5]; 3] = [
    [1, 0, 2, 4, 3],
    [2, 3, 1, 0, 4],
    [4, 4, 4, 4, 3],
];

/// The fresh (unsent) message used for the attack.
pub const FRESH_MESSAGE: u64 = 4;

/// Number of key matrices consistent with the coalition's view.
pub const KEY_SPACE_SIZE: usize = 25;

/// One consistent key matrix, flattened column-major (all four
/// coefficients of `L_1`, then `L_2`, ...).
pub const KEY_SPACE_PARTICULAR: [u64; 20] =
    [3, 0, 0, 3, 2, 4, 1, 3, 2, 3, 2, 0, 1, 4, 4, 0, 1, 3, 0, 4];

/// Two homogeneous solutions spanning the key-space directions, same
/// flattening as [`KEY_SPACE_PARTICULAR`].
pub const KEY_SPACE_NULL_VECTORS: [[u64; 20]; 2] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 4, 1, 4, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 4, 1, 4],
];

/// Receivers outside the coalition whose labels the attack evaluates.
pub const LABEL_TARGETS: [usize; 6] = [4, 5, 6, 7, 8, 9];

/// For each of the 25 consistent keys, the labels of receivers 4..9 for
/// the fresh message 4 (one 6-tuple per key; multiset order per source).
pub const LABEL_TABLE: [[u64; 6]; 25] = [
    [0, 4, 3, 2, 0, 2],
    [0, 3, 1, 1, 4, 3],
    [0, 2, 4, 0, 3, 4],
    [0, 1, 2, 4, 2, 0],
    [0, 0, 0, 3, 1, 1],
    [4, 4, 4, 2, 0, 0],
    [4, 3, 2, 1, 4, 1],
    [4, 2, 0, 0, 3, 2],
    [4, 1, 3, 4, 2, 3],
    [4, 0, 1, 3, 1, 4],
    [3, 4, 0, 2, 0, 3],
    [3, 3, 3, 1, 4, 4],
    [3, 2, 1, 0, 3, 0],
    [3, 1, 4, 4, 2, 1],
    [3, 0, 2, 3, 1, 2],
    [2, 4, 1, 2, 0, 1],
    [2, 3, 4, 1, 4, 2],
    [2, 2, 2, 0, 3, 3],
    [2, 1, 0, 4, 2, 4],
    [2, 0, 3, 3, 1, 0],
    [1, 4, 2, 2, 0, 4],
    [1, 3, 0, 1, 4, 0],
    [1, 2, 3, 0, 3, 1],
    [1, 1, 1, 4, 2, 2],
    [1, 0, 4, 3, 1, 3],
];

/// The 28 dual codewords minimal with respect to coordinate 5, in source
/// order.
pub const MINIMAL_DUAL_CODEWORDS_WRT_5: [[u64; 9]; 28] = [
    [2, 2, 1, 0, 1, 0, 4, 0, 0],
    [0, 1, 0, 3, 1, 2, 0, 2, 2],
    [0, 3, 0, 0, 1, 3, 3, 4, 4],
    [3, 0, 0, 4, 1, 1, 3, 0, 1],
    [2, 0, 0, 0, 1, 2, 4, 2, 1],
    [3, 0, 2, 0, 1, 0, 2, 2, 0],
    [0, 0, 3, 1, 1, 0, 2, 4, 2],
    [0, 4, 0, 1, 1, 1, 2, 0, 0],
    [0, 0, 4, 4, 1, 2, 4, 0, 4],
    [4, 0, 2, 4, 1, 4, 1, 0, 0],
    [1, 0, 1, 4, 1, 0, 2, 0, 3],
    [0, 0, 1, 0, 1, 1, 3, 2, 3],
    [0, 2, 2, 0, 1, 4, 3, 0, 2],
    [1, 0, 0, 1, 1, 3, 0, 4, 1],
    [2, 0, 3, 4, 1, 3, 0, 0, 2],
    [0, 2, 0, 4, 1, 0, 4, 3, 3],
    [4, 0, 0, 3, 1, 0, 2, 3, 1],
    [0, 0, 2, 3, 1, 3, 0, 3, 0],
    [1, 4, 0, 0, 1, 0, 1, 3, 0],
    [3, 3, 0, 2, 1, 0, 0, 3, 4],
    [4, 3, 3, 0, 1, 0, 0, 4, 0],
    [3, 1, 4, 2, 1, 2, 0, 0, 0],
    [0, 3, 1, 3, 1, 0, 0, 0, 1],
    [0, 0, 0, 2, 1, 4, 1, 1, 1],
    [2, 4, 0, 4, 1, 4, 0, 1, 0],
    [4, 2, 0, 0, 1, 1, 0, 0, 3],
    [4, 0, 4, 0, 1, 3, 0, 2, 4],
    [0, 1, 4, 0, 1, 0, 3, 1, 0],
];

/// The supports of [`MINIMAL_DUAL_CODEWORDS_WRT_5`] with coordinate 5
/// removed: the minimal substitution groups for receiver 5, in the same
/// order.
pub const MINIMAL_SUPPORTS_WRT_5: [&[usize]; 28] = [
    &[1, 2, 3, 7],
    &[2, 4, 6, 8, 9],
    &[2, 6, 7, 8, 9],
    &[1, 4, 6, 7, 9],
    &[1, 6, 7, 8, 9],
    &[1, 3, 7, 8],
    &[3, 4, 7, 8, 9],
    &[2, 4, 6, 7],
    &[3, 4, 6, 7, 9],
    &[1, 3, 4, 6, 7],
    &[1, 3, 4, 7, 9],
    &[3, 6, 7, 8, 9],
    &[2, 3, 6, 7, 9],
    &[1, 4, 6, 8, 9],
    &[1, 3, 4, 6, 9],
    &[2, 4, 7, 8, 9],
    &[1, 4, 7, 8, 9],
    &[3, 4, 6, 8],
    &[1, 2, 7, 8],
    &[1, 2, 4, 8, 9],
    &[1, 2, 3, 8],
    &[1, 2, 3, 4, 6],
    &[2, 3, 4, 9],
    &[4, 6, 7, 8, 9],
    &[1, 2, 4, 6, 8],
    &[1, 2, 6, 9],
    &[1, 3, 6, 8, 9],
    &[2, 3, 7, 8],
];

/// The source's table of five-member coalitions said to be unable to
/// forge for receiver 5. Known erratum: it lists *all* 56 five-member
/// subsets of the other receivers, including strict supersets of entries
/// in [`MINIMAL_SUPPORTS_WRT_5`]; kept verbatim so the discrepancy can be
/// reported entry by entry.
pub const CLAIMED_SAFE_FIVE_SETS: [[usize; 5]; 56] = [
    [1, 2, 3, 8, 9],
    [2, 3, 4, 6, 7],
    [3, 4, 6, 8, 9],
    [1, 3, 4, 6, 7],
    [1, 2, 3, 4, 7],
    [3, 4, 7, 8, 9],
    [2, 3, 6, 8, 9],
    [1, 3, 6, 8, 9],
    [2, 4, 6, 7, 9],
    [1, 4, 6, 7, 8],
    [2, 4, 6, 7, 8],
    [1, 4, 6, 7, 9],
    [1, 2, 4, 7, 8],
    [1, 2, 4, 7, 9],
    [1, 2, 6, 7, 8],
    [1, 2, 6, 7, 9],
    [1, 2, 3, 4, 9],
    [1, 3, 6, 7, 9],
    [2, 3, 6, 7, 8],
    [1, 3, 6, 7, 8],
    [2, 3, 6, 7, 9],
    [1, 2, 4, 6, 8],
    [1, 2, 4, 6, 7],
    [1, 2, 3, 4, 8],
    [2, 3, 4, 6, 9],
    [4, 6, 7, 8, 9],
    [1, 3, 4, 6, 8],
    [1, 2, 4, 6, 9],
    [2, 4, 7, 8, 9],
    [1, 2, 3, 7, 8],
    [1, 2, 3, 7, 9],
    [2, 6, 7, 8, 9],
    [1, 2, 6, 8, 9],
    [1, 4, 7, 8, 9],
    [2, 3, 4, 6, 8],
    [3, 6, 7, 8, 9],
    [3, 4, 6, 7, 9],
    [1, 2, 3, 6, 7],
    [1, 3, 4, 6, 9],
    [3, 4, 6, 7, 8],
    [1, 2, 4, 8, 9],
    [1, 3, 4, 8, 9],
    [1, 6, 7, 8, 9],
    [1, 2, 3, 6, 9],
    [1, 2, 7, 8, 9],
    [2, 3, 4, 8, 9],
    [2, 3, 4, 7, 8],
    [1, 3, 4, 7, 9],
    [1, 4, 6, 8, 9],
    [2, 4, 6, 8, 9],
    [2, 3, 4, 7, 9],
    [1, 3, 4, 7, 8],
    [1, 2, 3, 6, 8],
    [1, 3, 7, 8, 9],
    [2, 3, 7, 8, 9],
    [1, 2, 3, 4, 6],
];

/// The fixture code.
pub fn code() -> LinearCode {
    LinearCode::from_rows(Q, &rows_to_vec(&GENERATOR)).expect("fixture generator is valid")
}

/// Scheme parameters for the fixture (`M = 3`).
pub fn scheme_params() -> SchemeParams {
    SchemeParams::new(code(), MAX_MESSAGES, DEFAULT_CAP).expect("fixture code satisfies the scheme assumptions")
}

/// The fixture key matrix, adopted into the scheme.
pub fn key_matrix(params: &SchemeParams) -> KeyMatrix {
    let m = Matrix::from_rows(params.spec(), &rows_to_vec(&KEY_MATRIX))
        .expect("fixture key matrix is well-formed");
    params.key_matrix(m).expect("fixture key matrix has the right shape")
}

/// The expected `B = A * G` as a matrix.
pub fn distributed_matrix(params: &SchemeParams) -> Matrix {
    Matrix::from_rows(params.spec(), &rows_to_vec(&DISTRIBUTED))
        .expect("fixture distributed matrix is well-formed")
}

fn rows_to_vec<const W: usize>(rows: &[[u64; W]]) -> Vec<Vec<u64>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        let params = scheme_params();
        assert_eq!(params.receivers(), 9);
        assert_eq!(params.code().dimension(), 5);
        assert_eq!(params.max_messages(), 3);
        let key = key_matrix(&params);
        assert_eq!((key.matrix().rows(), key.matrix().cols()), (4, 5));
        assert_eq!(MINIMAL_SUPPORTS_WRT_5.len(), MINIMAL_DUAL_CODEWORDS_WRT_5.len());
        assert_eq!(CLAIMED_SAFE_FIVE_SETS.len(), 56);
    }

    #[test]
    fn observed_tags_match_key_matrix() {
        let params = scheme_params();
        let key = key_matrix(&params);
        for (s, tag) in OBSERVED_MESSAGES.iter().zip(&OBSERVED_TAGS) {
            let msg = key.tag(params.spec().element(*s));
            let got: Vec<u64> = msg.tag.iter().map(|e| u64::from(e.value())).collect();
            assert_eq!(&got[..], &tag[..]);
        }
    }

    #[test]
    fn receiver_one_label() {
        // receiver 1 holds key column (3, 0, 0, 3); its label at s = 1 is
        // the column sum, 6 mod 5 = 1
        let params = scheme_params();
        let key = key_matrix(&params);
        let (_, keys) = params.distribute(&key).unwrap();
        assert_eq!(keys[0].label(params.spec().element(1)).value(), 1);
        assert_eq!(keys[0].label(params.spec().element(0)).value(), 3);
    }

    #[test]
    fn supports_match_codewords() {
        for (word, support) in MINIMAL_DUAL_CODEWORDS_WRT_5
            .iter()
            .zip(MINIMAL_SUPPORTS_WRT_5)
        {
            let computed: Vec<usize> = word
                .iter()
                .enumerate()
                .filter(|&(i, &v)| v != 0 && i != 4)
                .map(|(i, _)| i + 1)
                .collect();
            assert_eq!(&computed[..], support);
            assert_eq!(word[4], 1);
        }
    }
}
