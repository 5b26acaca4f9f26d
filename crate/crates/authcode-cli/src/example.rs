//! `paper-example`: recompute the bundled worked example from its
//! generator and key matrices alone and diff every derived object against
//! the embedded tables. The claimed-safe coalition table is known to be
//! erroneous in the source; it is adjudicated and reported as a warning
//! instead of a pass/fail check.

use std::collections::BTreeSet;

use authcode::adversary::CoalitionView;
use authcode::analysis;
use authcode::code::is_subset;
use authcode::field::FieldElement;
use authcode::fixture;
use authcode::DEFAULT_CAP;

use crate::CliError;

struct Checker {
    failures: u32,
}

impl Checker {
    fn check(&mut self, name: &str, ok: bool, detail: &str) {
        if ok {
            println!("PASS {name} ({detail})");
        } else {
            self.failures += 1;
            println!("FAIL {name} ({detail})");
        }
    }
}

pub fn run() -> Result<u8, CliError> {
    let mut c = Checker { failures: 0 };
    let params = fixture::scheme_params();
    let spec = params.spec();
    let key = fixture::key_matrix(&params);

    // key distribution
    let (b, _) = params.distribute(&key)?;
    c.check(
        "distributed-matrix",
        b == fixture::distributed_matrix(&params),
        "B = A*G matches all 36 entries",
    );

    // observed broadcasts
    let observed: Vec<FieldElement> = fixture::OBSERVED_MESSAGES
        .iter()
        .map(|&s| spec.element(s))
        .collect();
    let tags_ok = fixture::OBSERVED_MESSAGES
        .iter()
        .zip(&fixture::OBSERVED_TAGS)
        .all(|(&s, expected)| {
            let tag = key.tag(spec.element(s)).tag;
            tag.iter().map(|e| u64::from(e.value())).eq(expected.iter().copied())
        });
    c.check("observed-tags", tags_ok, "tags of messages 1, 2, 3 match");

    // dual distance
    let dual = params.code().dual()?;
    let d_dual = dual.min_distance(DEFAULT_CAP)?;
    c.check(
        "dual-distance",
        d_dual == fixture::DUAL_DISTANCE,
        &format!("d(dual) = {d_dual}"),
    );

    // key space of the corrupted coalition
    let view = CoalitionView::observe(&params, &key, fixture::COALITION.to_vec(), &observed)?;
    let space = view.solve_key_space(DEFAULT_CAP)?;
    c.check(
        "key-space-size",
        space.solution_count() == fixture::KEY_SPACE_SIZE as u128 && space.dimension() == 2,
        &format!("{} consistent keys, dimension {}", space.solution_count(), space.dimension()),
    );

    let mut got: Vec<Vec<u16>> = space
        .enumerate(DEFAULT_CAP)?
        .iter()
        .map(|x| x.iter().map(|e| e.value()).collect())
        .collect();
    got.sort();
    let particular: Vec<FieldElement> = fixture::KEY_SPACE_PARTICULAR
        .iter()
        .map(|&v| spec.element(v))
        .collect();
    let nulls: Vec<Vec<FieldElement>> = fixture::KEY_SPACE_NULL_VECTORS
        .iter()
        .map(|n| n.iter().map(|&v| spec.element(v)).collect())
        .collect();
    let mut expected: Vec<Vec<u16>> = Vec::new();
    for a1 in 0..5u64 {
        for a2 in 0..5u64 {
            let (c1, c2) = (spec.element(a1), spec.element(a2));
            expected.push(
                particular
                    .iter()
                    .zip(&nulls[0])
                    .zip(&nulls[1])
                    .map(|((p, n1), n2)| (*p + c1 * *n1 + c2 * *n2).value())
                    .collect(),
            );
        }
    }
    expected.sort();
    c.check(
        "key-space-set",
        got == expected,
        "the 25 keys equal the printed particular + two-direction affine set",
    );

    // label table and uniformity for the fresh message, and uniformity at 0
    let fresh = spec.element(fixture::FRESH_MESSAGE);
    let mut tuples: Vec<Vec<u64>> = Vec::new();
    for flat in space.enumerate(DEFAULT_CAP)? {
        let mut tuple = Vec::new();
        for target in fixture::LABEL_TARGETS {
            let g = params.code().column(target)?;
            let width = params.max_messages() + 1;
            let mut label = spec.zero();
            for (j, gj) in g.iter().enumerate() {
                let mut coord = spec.zero();
                let mut p = spec.one();
                for t in 0..width {
                    coord = coord + p * flat[j * width + t];
                    p = p * fresh;
                }
                label = label + coord * *gj;
            }
            tuple.push(u64::from(label.value()));
        }
        tuples.push(tuple);
    }
    tuples.sort();
    let mut expected_tuples: Vec<Vec<u64>> =
        fixture::LABEL_TABLE.iter().map(|r| r.to_vec()).collect();
    expected_tuples.sort();
    c.check(
        "label-table",
        tuples == expected_tuples,
        "25 label 6-tuples for fresh message 4 match as a multiset",
    );

    for fresh_value in [fixture::FRESH_MESSAGE, 0] {
        let fresh = spec.element(fresh_value);
        let uniform = fixture::LABEL_TARGETS.iter().all(|&target| {
            view.label_distribution(target, fresh, DEFAULT_CAP)
                .map(|d| spec.elements().all(|l| d.count_of(l) == 5))
                .unwrap_or(false)
        });
        c.check(
            &format!("label-uniformity-fresh-{fresh_value}"),
            uniform,
            "every label hit by exactly 5 of the 25 keys, all targets 4..9",
        );
    }

    // minimal dual codewords with respect to coordinate 5 and their supports
    let minimal = dual.minimal_codewords_wrt(5, DEFAULT_CAP)?;
    let got_words: BTreeSet<Vec<u64>> = minimal
        .iter()
        .map(|w| w.vector().iter().map(|e| u64::from(e.value())).collect())
        .collect();
    let expected_words: BTreeSet<Vec<u64>> = fixture::MINIMAL_DUAL_CODEWORDS_WRT_5
        .iter()
        .map(|r| r.to_vec())
        .collect();
    c.check(
        "minimal-codewords",
        got_words == expected_words && minimal.len() == 28,
        &format!("{} minimal dual codewords for coordinate 5", minimal.len()),
    );

    let got_supports: BTreeSet<Vec<usize>> =
        minimal.iter().map(|w| w.support_without(5)).collect();
    let expected_supports: BTreeSet<Vec<usize>> = fixture::MINIMAL_SUPPORTS_WRT_5
        .iter()
        .map(|s| s.to_vec())
        .collect();
    c.check(
        "minimal-supports",
        got_supports == expected_supports,
        "28 minimal substitution groups for receiver 5",
    );

    // the claimed-safe table: adjudicated, reported, excluded from pass/fail
    adjudicate_claimed_safe_table(&mut c)?;

    if c.failures == 0 {
        println!("paper-example: ALL CHECKS PASS (claimed-safe table reported as erratum, excluded from pass/fail)");
        Ok(0)
    } else {
        println!("paper-example: {} CHECK(S) FAILED", c.failures);
        Ok(1)
    }
}

fn adjudicate_claimed_safe_table(_c: &mut Checker) -> Result<(), CliError> {
    let code = fixture::code();
    let target = 5;
    let others: Vec<usize> = (1..=9).filter(|&i| i != target).collect();

    let mut truly_safe: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..1 << others.len() {
        let subset: Vec<usize> = (0..others.len())
            .filter(|&bit| mask >> bit & 1 == 1)
            .map(|bit| others[bit])
            .collect();
        if subset.len() != 5 {
            continue;
        }
        if !analysis::is_substitution_group(&code, &subset, target)? {
            truly_safe.push(subset);
        }
    }
    truly_safe.sort();

    println!(
        "WARNING claimed-safe-table: the source lists all 56 five-member coalitions as unable to forge for receiver 5; recomputation finds only {} of them actually are",
        truly_safe.len()
    );
    println!("  truly safe five-member coalitions:");
    for s in &truly_safe {
        println!("    {}", render_set(s));
    }
    println!("  flagged errata (claimed safe, but containing a minimal substitution group):");
    let mut flagged = 0;
    for entry in fixture::CLAIMED_SAFE_FIVE_SETS.iter() {
        let entry: Vec<usize> = entry.to_vec();
        let witness = fixture::MINIMAL_SUPPORTS_WRT_5
            .iter()
            .find(|support| is_subset(support, &entry));
        if let Some(support) = witness {
            flagged += 1;
            println!("    {} contains {}", render_set(&entry), render_set(support));
        }
    }
    println!("  {flagged} of 56 claimed entries flagged as errata");
    Ok(())
}

fn render_set(s: &[usize]) -> String {
    format!(
        "{{{}}}",
        s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
    )
}
