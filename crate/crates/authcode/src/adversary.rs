//! Coalition attacks.
//!
//! A coalition of K receivers pools two kinds of knowledge about the
//! secret key matrix `A`: evaluation constraints from every observed
//! broadcast (`S * A = tags`, one Vandermonde row per message), and its
//! own private keys (`A * g_i = b_i` per member). Flattening `A`
//! column-major into a single vector of `k(M+1)` unknowns turns this into
//! one linear system whose coefficient matrix stacks `k` copies of the
//! Vandermonde block on the diagonal above `g`-scaled identity blocks,
//! one block row per member.
//!
//! Solving that system yields the full affine space of key matrices
//! consistent with what the coalition knows: `q^(k - K_0)` of them when
//! all `M` messages were observed, where `K_0` is the dimension spanned
//! by the members' generator columns. Pushing every candidate key through
//! a target's label map for an unsent message gives the coalition's best
//! possible attack: a point mass means the label is determined and a
//! forgery is free; a uniform spread means guessing at rate `1/q` is
//! optimal.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{AffineSolutionSet, Matrix, MatrixError};
use crate::scheme::{power_row, KeyMatrix, PrivateKey, SchemeError, SchemeParams, TaggedMessage};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("observed messages are not pairwise distinct")]
    DuplicateMessages,
    #[error("coalition observed {got} messages, scheme budget is {max}")]
    TooManyObservations { got: usize, max: usize },
    #[error("receiver index {index} out of range 1..={receivers}")]
    IndexOutOfRange { index: usize, receivers: usize },
    #[error("coalition lists receiver {index} twice")]
    DuplicateMember { index: usize },
    #[error("private key for receiver {expected} is missing or out of order (found {got})")]
    KeyMismatch { expected: usize, got: usize },
    #[error("key for receiver {index} has {got} entries, expected {expected}")]
    KeyLength { index: usize, expected: usize, got: usize },
    #[error("tag has {got} coordinates, code dimension is {expected}")]
    TagLength { expected: usize, got: usize },
    #[error("target {target} is a coalition member")]
    TargetInCoalition { target: usize },
    #[error("message {message} was already observed, so it is not fresh")]
    MessageNotFresh { message: u16 },
    #[error("generator column of receiver {target} is zero, no tag can address it")]
    NoNonzeroEntry { target: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// What a coalition knows: its member indices (1-based, ascending), the
/// broadcasts it has observed, and its members' private keys.
///
/// An empty observation list models pure impersonation. The number of
/// observed messages `M'` may be below the scheme budget `M`; the exact
/// `q^(k - K_0)` key-space count and the uniform-or-point-mass label
/// dichotomy are only guaranteed at `M' = M`, when the coalition is at
/// maximum knowledge.
#[derive(Debug, Clone)]
pub struct CoalitionView<'a> {
    params: &'a SchemeParams,
    coalition: Vec<usize>,
    observed: Vec<TaggedMessage>,
    keys: Vec<PrivateKey>,
}

impl<'a> CoalitionView<'a> {
    pub fn new(
        params: &'a SchemeParams,
        coalition: Vec<usize>,
        observed: Vec<TaggedMessage>,
        keys: Vec<PrivateKey>,
    ) -> Result<Self, AdversaryError> {
        let receivers = params.receivers();
        let mut sorted = coalition;
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(AdversaryError::DuplicateMember { index: pair[0] });
            }
        }
        for &i in &sorted {
            if i == 0 || i > receivers {
                return Err(AdversaryError::IndexOutOfRange { index: i, receivers });
            }
        }
        if observed.len() > params.max_messages() {
            return Err(AdversaryError::TooManyObservations {
                got: observed.len(),
                max: params.max_messages(),
            });
        }
        let mut seen = BTreeSet::new();
        for msg in &observed {
            if !seen.insert(msg.message.value()) {
                return Err(AdversaryError::DuplicateMessages);
            }
            if msg.tag.len() != params.code().dimension() {
                return Err(AdversaryError::TagLength {
                    expected: params.code().dimension(),
                    got: msg.tag.len(),
                });
            }
        }
        if keys.len() != sorted.len() {
            return Err(AdversaryError::KeyMismatch {
                expected: sorted.len(),
                got: keys.len(),
            });
        }
        let mut keys = keys;
        keys.sort_by_key(PrivateKey::receiver);
        for (&member, key) in sorted.iter().zip(&keys) {
            if key.receiver() != member {
                return Err(AdversaryError::KeyMismatch { expected: member, got: key.receiver() });
            }
            if key.column().len() != params.max_messages() + 1 {
                return Err(AdversaryError::KeyLength {
                    index: member,
                    expected: params.max_messages() + 1,
                    got: key.column().len(),
                });
            }
        }
        Ok(CoalitionView { params, coalition: sorted, observed, keys })
    }

    /// Honest simulation: the coalition watches the sender tag `messages`
    /// under the true key and receives its own keys from distribution.
    pub fn observe(
        params: &'a SchemeParams,
        key: &KeyMatrix,
        coalition: Vec<usize>,
        messages: &[FieldElement],
    ) -> Result<Self, AdversaryError> {
        let (_, all_keys) = params.distribute(key)?;
        let keys = coalition
            .iter()
            .map(|&i| {
                all_keys
                    .get(i.wrapping_sub(1))
                    .cloned()
                    .ok_or(AdversaryError::IndexOutOfRange { index: i, receivers: params.receivers() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let observed = messages.iter().map(|&s| key.tag(s)).collect();
        CoalitionView::new(params, coalition, observed, keys)
    }

    pub fn params(&self) -> &SchemeParams {
        self.params
    }

    pub fn coalition(&self) -> &[usize] {
        &self.coalition
    }

    pub fn observed(&self) -> &[TaggedMessage] {
        &self.observed
    }

    pub fn keys(&self) -> &[PrivateKey] {
        &self.keys
    }

    fn spec(&self) -> FieldSpec {
        self.params.spec()
    }

    /// Dimension of the span of the members' generator columns (`K_0`).
    pub fn coalition_span_dim(&self) -> usize {
        let k = self.params.code().dimension();
        if self.coalition.is_empty() {
            return 0;
        }
        let mut entries = Vec::with_capacity(k * self.coalition.len());
        for r in 0..k {
            for &i in &self.coalition {
                entries.push(self.params.code().generator().get(r, i - 1));
            }
        }
        Matrix::new(self.spec(), k, self.coalition.len(), entries)
            .expect("shape consistent")
            .rank()
    }

    /// The coalition's combined knowledge as one linear system in the
    /// `k(M+1)` unknowns of the flattened key matrix (column-major: all
    /// coefficients of `L_1`, then `L_2`, ...).
    ///
    /// Layout: for each code dimension `j` one `M' x (M+1)` Vandermonde
    /// block on the diagonal (rows `(1, s, ..., s^M)` per observed
    /// message, right-hand side `L_j(s)`), followed by one `(M+1)`-row
    /// block per member `i` whose `j`-th column block is
    /// `g[j][i] * identity` (right-hand side: the member's key column).
    /// Total: `k*M' + K*(M+1)` rows by `k*(M+1)` columns.
    pub fn assemble_system(&self) -> (Matrix, Vec<FieldElement>) {
        let spec = self.spec();
        let k = self.params.code().dimension();
        let width = self.params.max_messages() + 1;
        let m_obs = self.observed.len();
        let rows = k * m_obs + self.coalition.len() * width;
        let cols = k * width;
        let mut rhs = Vec::with_capacity(rows);

        let powers: Vec<Vec<FieldElement>> = self
            .observed
            .iter()
            .map(|msg| power_row(msg.message, width))
            .collect();

        let mut entries = vec![spec.zero(); rows * cols];
        let mut row = 0;
        for j in 0..k {
            for (obs, pow) in self.observed.iter().zip(&powers) {
                for (t, p) in pow.iter().enumerate() {
                    entries[row * cols + j * width + t] = *p;
                }
                rhs.push(obs.tag[j]);
                row += 1;
            }
        }
        for (&member, key) in self.coalition.iter().zip(&self.keys) {
            for t in 0..width {
                for j in 0..k {
                    entries[row * cols + j * width + t] =
                        self.params.code().generator().get(j, member - 1);
                }
                rhs.push(key.column()[t]);
                row += 1;
            }
        }
        let coeff = Matrix::new(spec, rows, cols, entries).expect("shape consistent");
        (coeff, rhs)
    }

    /// The affine space of key matrices consistent with everything the
    /// coalition knows. The true key is always a member; with all `M`
    /// messages observed the space has exactly `q^(k - K_0)` elements.
    ///
    /// `Inconsistent` signals a tampered view: honest scheme data always
    /// admits at least the true key. The cap bounds the size of the
    /// returned set so that callers can enumerate it afterwards.
    pub fn solve_key_space(&self, cap: u64) -> Result<AffineSolutionSet, AdversaryError> {
        let (coeff, rhs) = self.assemble_system();
        let space = coeff.solve_affine(&rhs)?;
        let required = space.solution_count();
        if required > u128::from(cap) {
            return Err(MatrixError::CapExceeded { required, cap }.into());
        }
        Ok(space)
    }

    fn check_target(&self, target: usize) -> Result<(), AdversaryError> {
        if target == 0 || target > self.params.receivers() {
            return Err(AdversaryError::IndexOutOfRange {
                index: target,
                receivers: self.params.receivers(),
            });
        }
        if self.coalition.binary_search(&target).is_ok() {
            return Err(AdversaryError::TargetInCoalition { target });
        }
        Ok(())
    }

    fn check_fresh(&self, fresh: FieldElement) -> Result<(), AdversaryError> {
        if self.observed.iter().any(|m| m.message == fresh) {
            return Err(AdversaryError::MessageNotFresh { message: fresh.value() });
        }
        Ok(())
    }

    /// How the target's label for an unsent message distributes over the
    /// coalition's consistent key space: `counts[y]` is the number of
    /// consistent keys under which the label is `y`.
    ///
    /// At maximum knowledge (`M' = M`) this is either uniform over all of
    /// `F_q` (the coalition is an adversary group for the target) or a
    /// point mass (a substitution group).
    pub fn label_distribution(
        &self,
        target: usize,
        fresh: FieldElement,
        cap: u64,
    ) -> Result<LabelDistribution, AdversaryError> {
        self.check_target(target)?;
        self.check_fresh(fresh)?;
        let spec = self.spec();
        let width = self.params.max_messages() + 1;
        let g_target = self
            .params
            .code()
            .column(target)
            .expect("target index already validated");
        let powers = power_row(fresh, width);
        let solutions = self.solve_key_space(cap)?.enumerate(cap)?;
        let mut counts = vec![0u128; usize::from(spec.modulus())];
        for flat in &solutions {
            let mut label = spec.zero();
            for (j, g) in g_target.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let mut coord = spec.zero();
                for (t, p) in powers.iter().enumerate() {
                    coord = coord + *p * flat[j * width + t];
                }
                label = label + coord * *g;
            }
            counts[usize::from(label.value())] += 1;
        }
        Ok(LabelDistribution { target, fresh, counts, spec })
    }

    /// Mount the forgery. If the label distribution is a point mass the
    /// coalition knows the target's label and builds a tag for it
    /// deterministically: the single nonzero tag coordinate sits at the
    /// first index `j` where the target's generator column is nonzero,
    /// with value `label / g[j][target]`. Otherwise every candidate label
    /// is returned; a forger can only guess among them.
    pub fn forge(
        &self,
        target: usize,
        fresh: FieldElement,
        cap: u64,
    ) -> Result<ForgeOutcome, AdversaryError> {
        let dist = self.label_distribution(target, fresh, cap)?;
        match dist.point_mass() {
            Some(label) => Ok(ForgeOutcome::Forged {
                message: forge_tag(self.params, target, fresh, label)?,
                label,
            }),
            None => Ok(ForgeOutcome::Ambiguous { candidates: dist.support() }),
        }
    }
}

/// Build the deterministic single-coordinate tag carrying `label` to
/// `target` for message `fresh`.
pub fn forge_tag(
    params: &SchemeParams,
    target: usize,
    fresh: FieldElement,
    label: FieldElement,
) -> Result<TaggedMessage, AdversaryError> {
    let g_target = params
        .code()
        .column(target)
        .map_err(|_| AdversaryError::IndexOutOfRange { index: target, receivers: params.receivers() })?;
    let spec = params.spec();
    let Some(j) = g_target.iter().position(|g| !g.is_zero()) else {
        return Err(AdversaryError::NoNonzeroEntry { target });
    };
    let mut tag = vec![spec.zero(); params.code().dimension()];
    tag[j] = label * g_target[j].inv().expect("entry is nonzero");
    Ok(TaggedMessage { message: fresh, tag })
}

/// Counts of each candidate label over the consistent key space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDistribution {
    target: usize,
    fresh: FieldElement,
    counts: Vec<u128>,
    spec: FieldSpec,
}

impl LabelDistribution {
    pub fn target(&self) -> usize {
        self.target
    }

    pub fn fresh(&self) -> FieldElement {
        self.fresh
    }

    /// Count for one label value.
    pub fn count_of(&self, label: FieldElement) -> u128 {
        self.counts[usize::from(label.value())]
    }

    /// Counts indexed by residue.
    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    /// Labels with nonzero count, ascending.
    pub fn support(&self) -> Vec<FieldElement> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, _)| self.spec.element(v as u64))
            .collect()
    }

    /// The single label carrying all mass, if there is one.
    pub fn point_mass(&self) -> Option<FieldElement> {
        let support = self.support();
        if support.len() == 1 {
            Some(support[0])
        } else {
            None
        }
    }

    /// True iff every label in `F_q` is hit equally often.
    pub fn is_uniform(&self) -> bool {
        let first = self.counts[0];
        first > 0 && self.counts.iter().all(|&c| c == first)
    }
}

/// Result of an attempted forgery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForgeOutcome {
    /// The label was determined; the forged broadcast verifies at the
    /// target with certainty.
    Forged { message: TaggedMessage, label: FieldElement },
    /// The label is not determined; these are the equally consistent
    /// candidates.
    Ambiguous { candidates: Vec<FieldElement> },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::LinearCode;
    use crate::matrix::lex_vectors;
    use crate::DEFAULT_CAP;

    fn params_f5() -> SchemeParams {
        let code = LinearCode::from_rows(5, &[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap();
        SchemeParams::new(code, 2, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn view_validation() {
        let params = params_f5();
        let key = params.keygen(1);
        let spec = params.spec();
        let ok = CoalitionView::observe(&params, &key, vec![2, 1], &[spec.element(1)]);
        assert_eq!(ok.unwrap().coalition(), &[1, 2]);

        let dup = CoalitionView::observe(&params, &key, vec![1, 1], &[]);
        assert!(matches!(dup, Err(AdversaryError::DuplicateMember { index: 1 })));

        let out = CoalitionView::observe(&params, &key, vec![9], &[]);
        assert!(matches!(out, Err(AdversaryError::IndexOutOfRange { index: 9, .. })));

        let stale = CoalitionView::observe(
            &params,
            &key,
            vec![1],
            &[spec.element(1), spec.element(1)],
        );
        assert!(matches!(stale, Err(AdversaryError::DuplicateMessages)));

        let many = CoalitionView::observe(
            &params,
            &key,
            vec![1],
            &[spec.element(0), spec.element(1), spec.element(2)],
        );
        assert!(matches!(many, Err(AdversaryError::TooManyObservations { got: 3, max: 2 })));
    }

    #[test]
    fn empty_view_constrains_nothing() {
        let params = params_f5();
        let key = params.keygen(2);
        let view = CoalitionView::observe(&params, &key, vec![], &[]).unwrap();
        let (coeff, rhs) = view.assemble_system();
        assert_eq!((coeff.rows(), coeff.cols()), (0, 6));
        assert!(rhs.is_empty());
        let space = view.solve_key_space(DEFAULT_CAP).unwrap();
        // every candidate key matrix is consistent: q^(k(M+1)) = 5^6
        assert_eq!(space.solution_count(), 5u128.pow(6));
    }

    #[test]
    fn single_message_no_keys_block_structure() {
        let params = params_f5();
        let key = params.keygen(3);
        let spec = params.spec();
        let view = CoalitionView::observe(&params, &key, vec![], &[spec.element(2)]).unwrap();
        let (coeff, rhs) = view.assemble_system();
        // one evaluation constraint per tag coordinate
        assert_eq!((coeff.rows(), coeff.cols()), (2, 6));
        // row for j-th coordinate: powers of s=2 in the j-th block
        let powers = [1u16, 2, 4];
        for j in 0..2 {
            for (t, p) in powers.iter().enumerate() {
                assert_eq!(coeff.get(j, j * 3 + t).value(), *p);
                assert_eq!(coeff.get(j, (1 - j) * 3 + t).value(), 0);
            }
        }
        assert_eq!(rhs, key.tag(spec.element(2)).tag);
    }

    #[test]
    fn key_space_counts_and_membership() {
        let params = params_f5();
        let spec = params.spec();
        for seed in 0..5 {
            let key = params.keygen(seed);
            let view = CoalitionView::observe(
                &params,
                &key,
                vec![1, 2],
                &[spec.element(0), spec.element(3)],
            )
            .unwrap();
            let space = view.solve_key_space(DEFAULT_CAP).unwrap();
            let k0 = view.coalition_span_dim();
            assert_eq!(k0, 2);
            // M' = M, so the count is exactly q^(k - K_0) = 5^0 = 1.
            assert_eq!(space.solution_count(), 1);
            assert!(space.contains(&flatten(key.matrix())));
        }
    }

    fn flatten(a: &Matrix) -> Vec<FieldElement> {
        // column-major: all of column 0 top to bottom, then column 1, ...
        let mut out = Vec::with_capacity(a.rows() * a.cols());
        for c in 0..a.cols() {
            for r in 0..a.rows() {
                out.push(a.get(r, c));
            }
        }
        out
    }

    #[test]
    fn key_space_equals_brute_force_tiny() {
        // q = 2, k = 2, M = 1: compare against filtering all 2^4 keys.
        let code = LinearCode::from_rows(2, &[vec![1, 0, 1, 1], vec![0, 1, 1, 1]]).unwrap();
        let params = SchemeParams::new(code, 1, DEFAULT_CAP).unwrap();
        let spec = params.spec();
        let key = params.keygen(17);
        let view =
            CoalitionView::observe(&params, &key, vec![3], &[spec.element(1)]).unwrap();
        let space = view.solve_key_space(DEFAULT_CAP).unwrap();
        let mut got = space.enumerate(DEFAULT_CAP).unwrap();
        got.sort();

        let (coeff, rhs) = view.assemble_system();
        let mut brute: Vec<Vec<FieldElement>> = lex_vectors(spec, 4)
            .filter(|x| coeff.mul_vec(x).unwrap() == rhs)
            .collect();
        brute.sort();
        assert_eq!(got, brute);
        assert_eq!(got.len() as u128, space.solution_count());
        // K_0 = 1 (one member), count = 2^(2-1) = 2
        assert_eq!(space.solution_count(), 2);
    }

    #[test]
    fn full_span_coalition_pins_the_key() {
        let params = params_f5();
        let spec = params.spec();
        let key = params.keygen(23);
        // columns 1 and 2 of the MDS generator span F_5^2
        let view = CoalitionView::observe(
            &params,
            &key,
            vec![1, 2],
            &[spec.element(1), spec.element(4)],
        )
        .unwrap();
        let space = view.solve_key_space(DEFAULT_CAP).unwrap();
        assert_eq!(space.solution_count(), 1);
        assert_eq!(space.particular(), &flatten(key.matrix())[..]);
    }

    #[test]
    fn label_distribution_dichotomy_mds() {
        // [4,2] MDS over F_5: single member = adversary group (uniform),
        // two members = substitution group (point mass).
        let params = params_f5();
        let spec = params.spec();
        let key = params.keygen(5);
        let observed = [spec.element(0), spec.element(1)];
        let fresh = spec.element(2);

        let small = CoalitionView::observe(&params, &key, vec![1], &observed).unwrap();
        let dist = small.label_distribution(3, fresh, DEFAULT_CAP).unwrap();
        assert!(dist.is_uniform());
        assert_eq!(dist.total(), 5);

        let big = CoalitionView::observe(&params, &key, vec![1, 2], &observed).unwrap();
        let dist = big.label_distribution(3, fresh, DEFAULT_CAP).unwrap();
        let label = dist.point_mass().unwrap();
        // the determined label is the true one
        let (_, keys) = params.distribute(&key).unwrap();
        assert_eq!(label, keys[2].label(fresh));
    }

    #[test]
    fn forge_accepted_on_point_mass() {
        let params = params_f5();
        let spec = params.spec();
        let key = params.keygen(8);
        let observed = [spec.element(0), spec.element(1)];
        let fresh = spec.element(3);
        let view = CoalitionView::observe(&params, &key, vec![1, 4], &observed).unwrap();
        match view.forge(2, fresh, DEFAULT_CAP).unwrap() {
            ForgeOutcome::Forged { message, .. } => {
                let (_, keys) = params.distribute(&key).unwrap();
                let g = params.code().column(2).unwrap();
                assert!(keys[1].verify(&g, &message));
            }
            ForgeOutcome::Ambiguous { .. } => panic!("MDS pair must determine the label"),
        }
    }

    #[test]
    fn forge_ambiguous_without_knowledge() {
        let params = params_f5();
        let spec = params.spec();
        let key = params.keygen(9);
        // pure impersonation: no members, no observations
        let view = CoalitionView::observe(&params, &key, vec![], &[]).unwrap();
        match view.forge(1, spec.element(2), DEFAULT_CAP).unwrap() {
            ForgeOutcome::Ambiguous { candidates } => {
                assert_eq!(candidates.len(), 5);
            }
            ForgeOutcome::Forged { .. } => panic!("no knowledge cannot determine a label"),
        }
    }

    #[test]
    fn freshness_and_target_checks() {
        let params = params_f5();
        let spec = params.spec();
        let key = params.keygen(10);
        let view =
            CoalitionView::observe(&params, &key, vec![1], &[spec.element(2)]).unwrap();
        assert!(matches!(
            view.label_distribution(1, spec.element(0), DEFAULT_CAP),
            Err(AdversaryError::TargetInCoalition { target: 1 })
        ));
        assert!(matches!(
            view.label_distribution(2, spec.element(2), DEFAULT_CAP),
            Err(AdversaryError::MessageNotFresh { message: 2 })
        ));
    }

    #[test]
    fn growing_coalition_never_grows_key_space() {
        let params = params_f5();
        let spec = params.spec();
        let key = params.keygen(12);
        let observed = [spec.element(1), spec.element(2)];
        let mut last = u128::MAX;
        for members in [vec![], vec![1], vec![1, 3], vec![1, 3, 4]] {
            let view = CoalitionView::observe(&params, &key, members, &observed).unwrap();
            let n = view.solve_key_space(DEFAULT_CAP).unwrap().solution_count();
            assert!(n <= last);
            last = n;
        }
    }
}
