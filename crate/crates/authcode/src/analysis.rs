//! Which coalitions can forge for which receivers.
//!
//! For a target receiver `i` and coalition `B` (indices excluding `i`),
//! the ground-truth classification is a span test on generator columns:
//! `B` is a *substitution group* for `i` iff `g_i` lies in the span of
//! `{g_j : j in B}`, and an *adversary group* otherwise. Two equivalent
//! characterizations exist and are used as independent cross-checks: a
//! substitution group is witnessed by a dual codeword with component 1 at
//! `i` supported inside `B ∪ {i}`, and an adversary group by a codeword
//! of the code itself with component 1 at `i` vanishing on all of `B`.
//!
//! The inclusion-minimal substitution groups for `i` are exactly the
//! supports (minus `i`) of the dual codewords minimal with respect to
//! `i`, which is what makes per-receiver security auditable: thresholds
//! `t_i` (largest size at which *every* coalition is an adversary group)
//! and `r_i` (smallest size at which *every* coalition is a substitution
//! group) are computed by exhaustive subset scans and checked against the
//! distance bounds `d(dual)-2 <= t_i <= r_i - 1` and
//! `d(dual)-1 <= r_i <= V - d + 1`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::code::{is_subset, CodeError, Codeword, LinearCode};
use crate::matrix::{pow_saturating, Matrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("target {target} must not be a member of the subset")]
    TargetInSubset { target: usize },
    #[error("index {index} out of range 1..={length}")]
    IndexOutOfRange { index: usize, length: usize },
    #[error("subset scan requires {required} subsets, cap is {cap}")]
    CapExceeded { required: u128, cap: u64 },
    #[error("threshold {which} is undefined for receiver {target}: {reason}")]
    UndefinedThreshold { target: usize, which: &'static str, reason: &'static str },
    #[error("minimal-codeword route and subset brute force disagree for receiver {target}")]
    OracleMismatch { target: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Classification of one `(coalition, target)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The coalition can determine the target's label and forge freely.
    Substitution,
    /// The coalition learns nothing about the target's label.
    Adversary,
}

/// The codeword certifying a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Dual codeword with component 1 at the target, supported inside
    /// `B ∪ {target}`. Exists exactly for substitution groups.
    Dual(Codeword),
    /// Codeword of the code itself with component 1 at the target and
    /// zeros on all of `B`. Exists exactly for adversary groups.
    Primal(Codeword),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupClassification {
    pub target: usize,
    pub subset: Vec<usize>,
    pub verdict: Verdict,
    pub witness: Witness,
}

impl GroupClassification {
    pub fn is_substitution(&self) -> bool {
        self.verdict == Verdict::Substitution
    }
}

fn check_indices(code: &LinearCode, subset: &[usize], target: usize) -> Result<(), AnalysisError> {
    let v = code.length();
    if target == 0 || target > v {
        return Err(AnalysisError::IndexOutOfRange { index: target, length: v });
    }
    for &j in subset {
        if j == 0 || j > v {
            return Err(AnalysisError::IndexOutOfRange { index: j, length: v });
        }
        if j == target {
            return Err(AnalysisError::TargetInSubset { target });
        }
    }
    Ok(())
}

/// Matrix whose columns are the generator columns indexed by `subset`
/// (1-based indices).
fn columns_matrix(code: &LinearCode, subset: &[usize]) -> Matrix {
    let k = code.dimension();
    let g = code.generator();
    let mut entries = Vec::with_capacity(k * subset.len());
    for r in 0..k {
        for &j in subset {
            entries.push(g.get(r, j - 1));
        }
    }
    Matrix::new(code.spec(), k, subset.len(), entries).expect("shape consistent")
}

/// Bare span test: is `g_target` in the span of the subset's columns?
pub fn is_substitution_group(
    code: &LinearCode,
    subset: &[usize],
    target: usize,
) -> Result<bool, AnalysisError> {
    check_indices(code, subset, target)?;
    let g_target = code.column(target)?;
    let cols = columns_matrix(code, subset);
    Ok(cols.solve_affine(&g_target).is_ok())
}

/// Classify a coalition and extract the certifying codeword.
///
/// Substitution: solving `sum_j x_j g_j = g_target` yields the dual
/// witness `c` with `c_target = 1` and `c_j = -x_j` on the subset.
/// Adversary: solving for a message `m` with `m·g_j = 0` on the subset
/// and `m·g_target = 1` yields the primal witness `m * G`.
pub fn classify_group(
    code: &LinearCode,
    subset: &[usize],
    target: usize,
) -> Result<GroupClassification, AnalysisError> {
    check_indices(code, subset, target)?;
    let spec = code.spec();
    let v = code.length();
    let g_target = code.column(target)?;
    let cols = columns_matrix(code, subset);
    match cols.solve_affine(&g_target) {
        Ok(solution) => {
            let x = solution.particular();
            let mut w = vec![spec.zero(); v];
            w[target - 1] = spec.one();
            for (&j, xi) in subset.iter().zip(x) {
                w[j - 1] = -*xi;
            }
            let witness = Codeword::new(w);
            debug_assert!(code.generator().mul_vec(witness.vector()).unwrap().iter().all(|e| e.is_zero()));
            Ok(GroupClassification {
                target,
                subset: sorted(subset),
                verdict: Verdict::Substitution,
                witness: Witness::Dual(witness),
            })
        }
        Err(MatrixError::Inconsistent) => {
            // rows: g_j^T for j in subset, then g_target^T; rhs (0,..,0,1)
            let mut rows: Vec<Vec<u64>> = Vec::with_capacity(subset.len() + 1);
            for &j in subset {
                rows.push(code.column(j)?.iter().map(|e| u64::from(e.value())).collect());
            }
            rows.push(g_target.iter().map(|e| u64::from(e.value())).collect());
            let coeff = Matrix::from_rows(spec, &rows)?;
            let mut rhs = vec![spec.zero(); subset.len()];
            rhs.push(spec.one());
            let m = coeff
                .solve_affine(&rhs)
                .expect("an annihilating message exists when the span test fails");
            let word = code.encode(m.particular())?;
            Ok(GroupClassification {
                target,
                subset: sorted(subset),
                verdict: Verdict::Adversary,
                witness: Witness::Primal(Codeword::new(word)),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn sorted(subset: &[usize]) -> Vec<usize> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s
}

/// All subsets of `[V] \ {target}` in (size, lexicographic) order.
fn subsets_excluding(v: usize, target: usize) -> Vec<Vec<usize>> {
    let others: Vec<usize> = (1..=v).filter(|&i| i != target).collect();
    let n = others.len();
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| {
            (0..n)
                .filter(|&b| mask >> b & 1 == 1)
                .map(|b| others[b])
                .collect()
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn check_subset_cap(v: usize, cap: u64) -> Result<(), AnalysisError> {
    let required = pow_saturating(2, v - 1);
    if required > u128::from(cap) || v > 32 {
        return Err(AnalysisError::CapExceeded { required, cap });
    }
    Ok(())
}

/// One `(subset, target)` pair where the four characterizations did not
/// agree. Expected to never occur; reported rather than asserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub subset: Vec<usize>,
    pub span_membership: bool,
    pub dual_witness_exists: bool,
    pub no_primal_annihilator: bool,
    pub primal_annihilator_exists: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub target: usize,
    pub subsets_checked: u64,
    pub disagreements: Vec<Disagreement>,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Evaluate, independently for every subset `B` of the other receivers:
/// the span test, existence of a dual witness (by scanning all dual
/// codewords), absence of a primal annihilator, and presence of a primal
/// annihilator (both by scanning all codewords). Reports any subset where
/// the routes disagree.
pub fn equivalence_check(
    code: &LinearCode,
    target: usize,
    cap: u64,
) -> Result<EquivalenceReport, AnalysisError> {
    check_indices(code, &[], target)?;
    check_subset_cap(code.length(), cap)?;
    let dual_words = code.dual()?.enumerate_codewords(cap)?;
    let primal_words = code.enumerate_codewords(cap)?;
    let t = target - 1;

    let mut disagreements = Vec::new();
    let subsets = subsets_excluding(code.length(), target);
    let total = subsets.len() as u64;
    for subset in subsets {
        let span = is_substitution_group(code, &subset, target)?;

        let mut closure: Vec<usize> = subset.clone();
        closure.push(target);
        closure.sort_unstable();
        let dual_witness = dual_words
            .iter()
            .any(|c| c.vector()[t].value() == 1 && is_subset(c.support(), &closure));

        let annihilator = primal_words.iter().any(|c| {
            c.vector()[t].value() == 1 && subset.iter().all(|&j| c.vector()[j - 1].is_zero())
        });

        let agree = span == dual_witness && span == !annihilator;
        if !agree {
            disagreements.push(Disagreement {
                subset,
                span_membership: span,
                dual_witness_exists: dual_witness,
                no_primal_annihilator: !annihilator,
                primal_annihilator_exists: annihilator,
            });
        }
    }
    Ok(EquivalenceReport { target, subsets_checked: total, disagreements })
}

/// The inclusion-minimal substitution groups for `target`, computed from
/// the dual codewords minimal with respect to `target` (their supports
/// minus the target), deduplicated and sorted by (size, lexicographic).
///
/// When the exhaustive subset scan also fits under the cap the result is
/// cross-validated against brute force over all subsets; a mismatch
/// (which would falsify the minimal-codeword characterization) surfaces
/// as [`AnalysisError::OracleMismatch`].
pub fn minimal_substitution_groups(
    code: &LinearCode,
    target: usize,
    cap: u64,
) -> Result<Vec<Vec<usize>>, AnalysisError> {
    check_indices(code, &[], target)?;
    let minimal = code.dual()?.minimal_codewords_wrt(target, cap)?;
    let dedup: BTreeSet<Vec<usize>> = minimal
        .iter()
        .map(|c| c.support_without(target))
        .collect();
    let mut groups: Vec<Vec<usize>> = dedup.into_iter().collect();
    groups.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    if check_subset_cap(code.length(), cap).is_ok() {
        let brute = brute_force_minimal_groups(code, target)?;
        if brute != groups {
            return Err(AnalysisError::OracleMismatch { target });
        }
    }
    Ok(groups)
}

/// Inclusion-minimal substitution groups by direct subset scan: a
/// substitution group all of whose one-smaller subsets are adversary
/// groups (substitution groups are upward closed, so this is
/// inclusion-minimality).
fn brute_force_minimal_groups(
    code: &LinearCode,
    target: usize,
) -> Result<Vec<Vec<usize>>, AnalysisError> {
    let mut out = Vec::new();
    for subset in subsets_excluding(code.length(), target) {
        if !is_substitution_group(code, &subset, target)? {
            continue;
        }
        let mut minimal = true;
        for drop in 0..subset.len() {
            let mut smaller = subset.clone();
            smaller.remove(drop);
            if is_substitution_group(code, &smaller, target)? {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(subset);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// `(t_target, r_target)`: the largest size at which every coalition is
/// an adversary group, and the smallest size at which every coalition is
/// a substitution group. Exhaustive over all subsets of the other
/// receivers.
pub fn receiver_thresholds(
    code: &LinearCode,
    target: usize,
    cap: u64,
) -> Result<(usize, usize), AnalysisError> {
    check_indices(code, &[], target)?;
    check_subset_cap(code.length(), cap)?;
    let v = code.length();
    // all_adversary[s] / all_substitution[s] over subsets of size s
    let mut all_adversary = vec![true; v];
    let mut all_substitution = vec![true; v];
    for subset in subsets_excluding(v, target) {
        let is_sub = is_substitution_group(code, &subset, target)?;
        if is_sub {
            all_adversary[subset.len()] = false;
        } else {
            all_substitution[subset.len()] = false;
        }
    }
    let t = all_adversary
        .iter()
        .rposition(|&ok| ok)
        .ok_or(AnalysisError::UndefinedThreshold {
            target,
            which: "t",
            reason: "even the empty coalition determines the label (zero generator column)",
        })?;
    let r = all_substitution
        .iter()
        .position(|&ok| ok)
        .ok_or(AnalysisError::UndefinedThreshold {
            target,
            which: "r",
            reason: "even the full coalition cannot determine the label",
        })?;
    Ok((t, r))
}

/// Sampled estimate of the per-size classification when the exhaustive
/// scan is out of reach. Reports, for each coalition size, how many of
/// the sampled subsets were substitution groups; confidence only, never
/// certainty.
pub fn sample_size_profile(
    code: &LinearCode,
    target: usize,
    samples_per_size: u64,
    seed: u64,
) -> Result<Vec<(usize, u64, u64)>, AnalysisError> {
    use rand_chacha::rand_core::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    check_indices(code, &[], target)?;
    let v = code.length();
    let others: Vec<usize> = (1..=v).filter(|&i| i != target).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for size in 0..v {
        let mut substitution = 0;
        for _ in 0..samples_per_size {
            // draw until `size` distinct members are collected
            let mut chosen = BTreeSet::new();
            while chosen.len() < size {
                let idx = (rng.next_u64() % others.len() as u64) as usize;
                chosen.insert(others[idx]);
            }
            let subset: Vec<usize> = chosen.into_iter().collect();
            if is_substitution_group(code, &subset, target)? {
                substitution += 1;
            }
        }
        out.push((size, substitution, samples_per_size));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceiverThresholds {
    pub receiver: usize,
    /// `t_i`: every coalition of this size or smaller is an adversary group.
    pub adversary_threshold: usize,
    /// `r_i`: every coalition of this size or larger is a substitution group.
    pub substitution_threshold: usize,
}

/// One named pass/fail line of the threshold-bound audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Distances, per-receiver thresholds, and the audited bounds relating
/// them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecurityReport {
    pub modulus: u16,
    pub length: usize,
    pub dimension: usize,
    pub distance: usize,
    pub dual_distance: usize,
    pub is_mds: bool,
    pub receivers: Vec<ReceiverThresholds>,
    pub checks: Vec<AuditCheck>,
    pub min_adversary_threshold: usize,
    pub min_substitution_threshold: usize,
    pub max_substitution_threshold: usize,
}

impl SecurityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "[{}, {}] code over F_{}: d = {}, d(dual) = {}{}",
            self.length,
            self.dimension,
            self.modulus,
            self.distance,
            self.dual_distance,
            if self.is_mds { " (MDS)" } else { "" },
        );
        let _ = writeln!(s, "receiver  t_i  r_i");
        for r in &self.receivers {
            let _ = writeln!(
                s,
                "{:>8}  {:>3}  {:>3}",
                r.receiver, r.adversary_threshold, r.substitution_threshold
            );
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{}: {} ({})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(
            s,
            "note: min r_i = {}; d(dual) - 1 = {}; d(dual) = {} (identity reported, not asserted)",
            self.min_substitution_threshold,
            self.dual_distance - 1,
            self.dual_distance,
        );
        s
    }

    /// Machine-readable `key=value` rendering, one pair per line.
    /// Per-receiver keys are `t_<i>` and `r_<i>`; audit keys are
    /// `check_<name>` with value `pass` or `fail`.
    pub fn render_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "q={}", self.modulus);
        let _ = writeln!(s, "V={}", self.length);
        let _ = writeln!(s, "k={}", self.dimension);
        let _ = writeln!(s, "d={}", self.distance);
        let _ = writeln!(s, "d_dual={}", self.dual_distance);
        let _ = writeln!(s, "mds={}", self.is_mds);
        for r in &self.receivers {
            let _ = writeln!(s, "t_{}={}", r.receiver, r.adversary_threshold);
            let _ = writeln!(s, "r_{}={}", r.receiver, r.substitution_threshold);
        }
        let _ = writeln!(s, "min_t={}", self.min_adversary_threshold);
        let _ = writeln!(s, "min_r={}", self.min_substitution_threshold);
        let _ = writeln!(s, "max_r={}", self.max_substitution_threshold);
        for c in &self.checks {
            let _ = writeln!(s, "check_{}={}", c.name, if c.passed { "pass" } else { "fail" });
        }
        s
    }
}

/// Compute distances and all per-receiver thresholds, then audit the
/// bounds that must relate them. The identity for `min r_i` is reported
/// in the rendering but deliberately not audited (see `render_text`).
pub fn security_report(code: &LinearCode, cap: u64) -> Result<SecurityReport, AnalysisError> {
    let v = code.length();
    let distance = code.min_distance(cap)?;
    let dual_distance = code.dual()?.min_distance(cap)?;
    let is_mds = distance == v - code.dimension() + 1;

    let mut receivers = Vec::with_capacity(v);
    for i in 1..=v {
        let (t, r) = receiver_thresholds(code, i, cap)?;
        receivers.push(ReceiverThresholds {
            receiver: i,
            adversary_threshold: t,
            substitution_threshold: r,
        });
    }
    let min_t = receivers.iter().map(|r| r.adversary_threshold).min().unwrap();
    let min_r = receivers.iter().map(|r| r.substitution_threshold).min().unwrap();
    let max_r = receivers.iter().map(|r| r.substitution_threshold).max().unwrap();

    let mut checks = Vec::new();
    let r_bounds = receivers.iter().all(|r| {
        dual_distance - 1 <= r.substitution_threshold
            && r.substitution_threshold <= v - distance + 1
    });
    checks.push(AuditCheck {
        name: "r_bounds",
        passed: r_bounds,
        detail: format!("d(dual)-1 <= r_i <= V-d+1 for all i, with d(dual)-1={}, V-d+1={}", dual_distance - 1, v - distance + 1),
    });
    let t_bounds = receivers.iter().all(|r| {
        dual_distance - 2 <= r.adversary_threshold
            && r.adversary_threshold < r.substitution_threshold
    });
    checks.push(AuditCheck {
        name: "t_bounds",
        passed: t_bounds,
        detail: format!("d(dual)-2 <= t_i <= r_i-1 for all i, with d(dual)-2={}", dual_distance - 2),
    });
    checks.push(AuditCheck {
        name: "max_r_identity",
        passed: max_r == v - distance + 1,
        detail: format!("max r_i = {max_r}, V-d+1 = {}", v - distance + 1),
    });
    checks.push(AuditCheck {
        name: "min_t_identity",
        passed: min_t == dual_distance - 2,
        detail: format!("min t_i = {min_t}, d(dual)-2 = {}", dual_distance - 2),
    });
    // Coalitions of at least V-d+1 receivers can always forge; coalitions
    // of at most d(dual)-2 never can.
    checks.push(AuditCheck {
        name: "large_subsets_substitute",
        passed: receivers.iter().all(|r| r.substitution_threshold <= v - distance + 1),
        detail: format!("every subset of size >= {} is a substitution group", v - distance + 1),
    });
    checks.push(AuditCheck {
        name: "small_subsets_adversary",
        passed: receivers.iter().all(|r| r.adversary_threshold >= dual_distance - 2),
        detail: format!("every subset of size <= {} is an adversary group", dual_distance - 2),
    });
    if is_mds {
        let exact = receivers.iter().all(|r| {
            r.adversary_threshold == dual_distance - 2
                && r.substitution_threshold == dual_distance - 1
        });
        checks.push(AuditCheck {
            name: "mds_adversary_exact",
            passed: exact,
            detail: format!(
                "MDS: adversary groups are exactly the subsets of size <= {}",
                dual_distance - 2
            ),
        });
    }

    Ok(SecurityReport {
        modulus: code.spec().modulus(),
        length: v,
        dimension: code.dimension(),
        distance,
        dual_distance,
        is_mds,
        receivers,
        checks,
        min_adversary_threshold: min_t,
        min_substitution_threshold: min_r,
        max_substitution_threshold: max_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_CAP;

    fn mds_f5() -> LinearCode {
        LinearCode::from_rows(5, &[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap()
    }

    fn repetition3() -> LinearCode {
        LinearCode::from_rows(2, &[vec![1, 1, 1]]).unwrap()
    }

    #[test]
    fn empty_subset_is_adversary_when_column_nonzero() {
        let code = mds_f5();
        for target in 1..=4 {
            let c = classify_group(&code, &[], target).unwrap();
            assert_eq!(c.verdict, Verdict::Adversary);
        }
    }

    #[test]
    fn mds_pairs_substitute_singletons_do_not() {
        let code = mds_f5();
        for target in 1..=4 {
            let others: Vec<usize> = (1..=4).filter(|&i| i != target).collect();
            for &a in &others {
                let c = classify_group(&code, &[a], target).unwrap();
                assert_eq!(c.verdict, Verdict::Adversary, "singleton {a} vs {target}");
            }
            for &a in &others {
                for &b in &others {
                    if a < b {
                        let c = classify_group(&code, &[a, b], target).unwrap();
                        assert_eq!(c.verdict, Verdict::Substitution);
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_certify_verdicts() {
        let code = mds_f5();
        for target in 1..=4 {
            for subset in subsets_excluding(4, target) {
                let c = classify_group(&code, &subset, target).unwrap();
                match (&c.verdict, &c.witness) {
                    (Verdict::Substitution, Witness::Dual(w)) => {
                        assert_eq!(w.vector()[target - 1].value(), 1);
                        let mut closure = subset.clone();
                        closure.push(target);
                        closure.sort_unstable();
                        assert!(is_subset(w.support(), &closure));
                        // really a dual codeword
                        let image = code.generator().mul_vec(w.vector()).unwrap();
                        assert!(image.iter().all(|e| e.is_zero()));
                    }
                    (Verdict::Adversary, Witness::Primal(w)) => {
                        assert_eq!(w.vector()[target - 1].value(), 1);
                        for &j in &subset {
                            assert!(w.vector()[j - 1].is_zero());
                        }
                        assert!(code.contains(w.vector()));
                    }
                    other => panic!("verdict/witness mismatch: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn substitution_upward_adversary_downward() {
        let code = mds_f5();
        for target in 1..=4 {
            for subset in subsets_excluding(4, target) {
                let sub = is_substitution_group(&code, &subset, target).unwrap();
                if sub {
                    // any superset still substitutes
                    for extra in (1..=4).filter(|i| *i != target && !subset.contains(i)) {
                        let mut bigger = subset.clone();
                        bigger.push(extra);
                        bigger.sort_unstable();
                        assert!(is_substitution_group(&code, &bigger, target).unwrap());
                    }
                } else {
                    for drop in 0..subset.len() {
                        let mut smaller = subset.clone();
                        smaller.remove(drop);
                        assert!(!is_substitution_group(&code, &smaller, target).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn equivalence_zero_disagreements_small_codes() {
        for code in [repetition3(), mds_f5()] {
            for target in 1..=code.length() {
                let rep = equivalence_check(&code, target, DEFAULT_CAP).unwrap();
                assert!(rep.consistent(), "disagreements: {:?}", rep.disagreements);
                assert_eq!(
                    rep.subsets_checked,
                    1 << (code.length() - 1)
                );
            }
        }
    }

    #[test]
    fn minimal_groups_repetition_code() {
        let code = repetition3();
        // dual = even-weight code; minimal wrt 1 are 110 and 101
        let groups = minimal_substitution_groups(&code, 1, DEFAULT_CAP).unwrap();
        assert_eq!(groups, vec![vec![2], vec![3]]);
    }

    #[test]
    fn minimal_groups_mds() {
        let code = mds_f5();
        for target in 1..=4 {
            let groups = minimal_substitution_groups(&code, target, DEFAULT_CAP).unwrap();
            let expected: Vec<Vec<usize>> = subsets_excluding(4, target)
                .into_iter()
                .filter(|s| s.len() == 2)
                .collect();
            assert_eq!(groups, expected, "every pair is minimal for an MDS code");
        }
    }

    #[test]
    fn thresholds_mds() {
        let code = mds_f5();
        for target in 1..=4 {
            let (t, r) = receiver_thresholds(&code, target, DEFAULT_CAP).unwrap();
            assert_eq!((t, r), (1, 2)); // d(dual) = 3: t = d(dual)-2, r = d(dual)-1
        }
    }

    #[test]
    fn thresholds_k1_degenerate() {
        // k = 1: every nonempty coalition (nonzero column) substitutes.
        let code = repetition3();
        for target in 1..=3 {
            let (t, r) = receiver_thresholds(&code, target, DEFAULT_CAP).unwrap();
            assert_eq!((t, r), (0, 1));
        }
    }

    #[test]
    fn report_audits_pass() {
        for code in [repetition3(), mds_f5()] {
            let report = security_report(&code, DEFAULT_CAP).unwrap();
            assert!(report.all_passed(), "{}", report.render_text());
        }
    }

    #[test]
    fn report_kv_contains_thresholds() {
        let report = security_report(&mds_f5(), DEFAULT_CAP).unwrap();
        let kv = report.render_kv();
        assert!(kv.contains("q=5"));
        assert!(kv.contains("t_1=1"));
        assert!(kv.contains("r_4=2"));
        assert!(kv.contains("check_max_r_identity=pass"));
    }

    #[test]
    fn cap_guard() {
        let code = mds_f5();
        assert!(matches!(
            receiver_thresholds(&code, 1, 4),
            Err(AnalysisError::CapExceeded { required: 8, cap: 4 })
        ));
    }

    #[test]
    fn sampled_profile_matches_exhaustive_shape() {
        let code = mds_f5();
        let profile = sample_size_profile(&code, 1, 20, 7).unwrap();
        // size 0 and 1: never substitution; sizes 2 and 3: always.
        assert_eq!(profile[0].1, 0);
        assert_eq!(profile[1].1, 0);
        assert_eq!(profile[2].1, 20);
        assert_eq!(profile[3].1, 20);
    }
}
