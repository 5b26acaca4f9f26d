//! Multi-receiver, multi-message authentication over linear codes.
//!
//! A trusted authority publishes a linear `[V, k]` code over a prime field
//! `F_q` and hands each of `V` receivers one column of a secret matrix
//! product as a private key. The sender broadcasts field-element messages
//! together with polynomial tags; every receiver independently checks one
//! scalar identity. A coalition of malicious receivers learns exactly an
//! affine subspace of candidate key matrices, and whether it can forge a
//! fresh message for a target receiver is a question about the dual code:
//! the minimal substitution groups for receiver `i` are cut out by the
//! dual codewords that are minimal with respect to coordinate `i`.
//!
//! The crate provides the protocol itself ([`scheme`]), the coalition
//! attack machinery ([`adversary`]), and the combinatorial security
//! analysis ([`analysis`]), on top of exact prime-field linear algebra
//! ([`field`], [`matrix`]) and linear-code queries ([`code`]). The
//! [`fixture`] module embeds a fully worked `[9, 5]` example over `F_5`
//! used as a regression oracle by the test suite and the CLI.

pub mod adversary;
pub mod analysis;
pub mod code;
pub mod field;
pub mod fixture;
pub mod matrix;
pub mod scheme;

pub use adversary::{AdversaryError, CoalitionView, ForgeOutcome, LabelDistribution};
pub use analysis::{
    AnalysisError, AuditCheck, EquivalenceReport, GroupClassification, SecurityReport, Verdict,
    Witness,
};
pub use code::{CodeError, Codeword, LinearCode};
pub use field::{FieldElement, FieldError, FieldSpec};
pub use matrix::{AffineSolutionSet, Matrix, MatrixError, Rref};
pub use scheme::{KeyMatrix, PrivateKey, SchemeError, SchemeParams, TaggedMessage};

/// Default cap on enumeration sizes (codewords, key-space solutions,
/// subset scans). Every cap-bounded operation takes an explicit cap;
/// this is the value callers use when they have no better idea.
pub const DEFAULT_CAP: u64 = 1 << 20;
