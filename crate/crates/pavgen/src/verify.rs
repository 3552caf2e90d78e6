//! Brute-force oracles and rule verification.
//!
//! The oracle builds S_0(P), S_1(P), ... level by level: every member of a
//! level is expanded through each of its sites and the results filtered by
//! avoidance. This is sound because deleting the largest entry of a
//! P-avoider yields a P-avoider, so every member of S_{n+1}(P) appears
//! exactly once among the expansions. A second, independent oracle filters
//! all n! permutations directly; the two are compared in tests. Everything
//! else in the crate is ultimately checked against these.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::Result;
use crate::generator;
use crate::pattern_set::{PatternSet, RightJustified};
use crate::perm::Permutation;
use crate::sites::{active_sites_unchecked, insert_at_site};
use crate::succession::{structural_color, Label, Rule, SuccessionFunction};

/// Levels S_0(P) .. S_n(P), each in generation order: children of earlier
/// parents first, and children of one parent by ascending site.
pub fn oracle_levels(n: usize, patterns: &PatternSet) -> Vec<Vec<Permutation>> {
    let mut levels: Vec<Vec<Permutation>> = vec![vec![Permutation::empty()]];
    for _ in 0..n {
        let last = levels.last().unwrap();
        let mut next = Vec::new();
        for alpha in last {
            for site in active_sites_unchecked(alpha, patterns) {
                next.push(insert_at_site(alpha, site).expect("site in range"));
            }
        }
        levels.push(next);
    }
    levels
}

/// S_n(P) by levelwise construction.
pub fn oracle_generate(n: usize, patterns: &PatternSet) -> Vec<Permutation> {
    oracle_levels(n, patterns).pop().unwrap()
}

/// S_n(P) by filtering all n! permutations; sorted lexicographically.
/// Exponentially slower than the levelwise oracle and fully independent
/// of it.
pub fn oracle_filter(n: usize, patterns: &PatternSet) -> Vec<Permutation> {
    (1..=n as u32)
        .permutations(n)
        .map(|v| Permutation::new(v).unwrap())
        .filter(|perm| perm.avoids_all(patterns))
        .sorted()
        .collect()
}

/// An oracle node: a permutation with its active sites.
#[derive(Debug, Clone)]
pub struct OracleNode {
    pub perm: Permutation,
    pub active: Vec<usize>,
}

/// The oracle generating tree up to a depth, one node list per level in
/// generation order.
#[derive(Debug, Clone)]
pub struct OracleTree {
    pub levels: Vec<Vec<OracleNode>>,
}

impl OracleTree {
    pub fn build(n: usize, patterns: &PatternSet) -> OracleTree {
        let mut levels = Vec::with_capacity(n + 1);
        let root = Permutation::empty();
        let mut current = vec![OracleNode {
            active: active_sites_unchecked(&root, patterns),
            perm: root,
        }];
        for _ in 0..n {
            let mut next = Vec::new();
            for node in &current {
                for &site in &node.active {
                    let child = insert_at_site(&node.perm, site).expect("site in range");
                    let active = active_sites_unchecked(&child, patterns);
                    next.push(OracleNode { perm: child, active });
                }
            }
            levels.push(current);
            current = next;
        }
        levels.push(current);
        OracleTree { levels }
    }
}

/// Outcome of verifying one entry against the oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum VerifyStatus {
    Pass,
    CountMismatch {
        n: usize,
        expected: u64,
        actual: u64,
    },
    SetMismatch {
        n: usize,
        missing: Option<String>,
        extra: Option<String>,
    },
    LabelMismatch {
        n: usize,
        perm: String,
        expected: String,
        actual: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub entry: String,
    pub max_n: usize,
    pub status: VerifyStatus,
    /// Oracle level sizes up to max_n.
    pub oracle_level_sizes: Vec<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == VerifyStatus::Pass
    }
}

/// Runs the full comparison for one entry: rule validity on its reachable
/// labels, per-length counts, exact set equality, and a lockstep walk
/// checking every tree label (and color, where the entry has a structural
/// color) against the oracle.
pub fn verify_entry(entry: &CatalogEntry, max_n: usize) -> VerificationReport {
    let tree = OracleTree::build(max_n, &entry.patterns);
    let oracle_level_sizes: Vec<u64> = tree.levels.iter().map(|l| l.len() as u64).collect();
    let report = |status: VerifyStatus| VerificationReport {
        entry: entry.display_id(),
        max_n,
        status,
        oracle_level_sizes: oracle_level_sizes.clone(),
    };

    // Rule validity first: an ill-formed rule cannot drive generation.
    if let Err(err) = entry.succession.explore(max_n) {
        return report(VerifyStatus::LabelMismatch {
            n: 0,
            perm: "ε".into(),
            expected: "a rule valid on every label reachable from (1,0)".into(),
            actual: err.to_string(),
        });
    }

    for n in 0..=max_n {
        let mut emitted: Vec<Vec<u32>> = Vec::new();
        generator::generate(entry, n, |perm| emitted.push(perm.to_vec()))
            .expect("rule validated above");
        let oracle: Vec<&OracleNode> = tree.levels[n].iter().collect();
        if emitted.len() != oracle.len() {
            return report(VerifyStatus::CountMismatch {
                n,
                expected: oracle.len() as u64,
                actual: emitted.len() as u64,
            });
        }
        let mut emitted_sorted = emitted;
        emitted_sorted.sort_unstable();
        let oracle_sorted: Vec<Vec<u32>> = oracle
            .iter()
            .map(|node| node.perm.entries().to_vec())
            .sorted()
            .collect();
        if emitted_sorted != oracle_sorted {
            let missing = oracle_sorted
                .iter()
                .find(|perm| emitted_sorted.binary_search(perm).is_err());
            let extra = emitted_sorted
                .iter()
                .find(|perm| oracle_sorted.binary_search(perm).is_err());
            let show = |v: Option<&Vec<u32>>| {
                v.map(|entries| Permutation::new(entries.clone()).unwrap().to_string())
            };
            return report(VerifyStatus::SetMismatch {
                n,
                missing: show(missing),
                extra: show(extra),
            });
        }
    }

    // Lockstep walk of the rule-labeled tree against oracle annotations.
    fn walk(
        entry: &CatalogEntry,
        patterns: &PatternSet,
        perm: &Permutation,
        label: Label,
        remaining: usize,
    ) -> std::result::Result<(), VerifyStatus> {
        let n = perm.len();
        let active = active_sites_unchecked(perm, patterns);
        let interval: Vec<usize> = (1..=label.k as usize).collect();
        if active != interval {
            return Err(VerifyStatus::LabelMismatch {
                n,
                perm: perm.to_string(),
                expected: format!("active sites {:?}", active),
                actual: format!("label k = {}", label.k),
            });
        }
        if let Some(p) = entry.color_param {
            if !perm.is_empty() {
                let color = structural_color(perm, p).expect("oracle node avoids P");
                if i32::from(color) != label.c {
                    return Err(VerifyStatus::LabelMismatch {
                        n,
                        perm: perm.to_string(),
                        expected: format!("structural color {color}"),
                        actual: format!("label color {}", label.c),
                    });
                }
            }
        }
        if remaining == 0 {
            return Ok(());
        }
        for i in 1..=label.k {
            let child = insert_at_site(perm, i as usize).expect("site in range");
            let child_label = entry.succession.eval(i, label).expect("validated rule");
            walk(entry, patterns, &child, child_label, remaining - 1)?;
        }
        Ok(())
    }
    if let Err(status) = walk(
        entry,
        &entry.patterns,
        &Permutation::empty(),
        Label::SEED,
        max_n,
    ) {
        return report(status);
    }

    report(VerifyStatus::Pass)
}

/// An observed regular succession table: (site i, count k) -> next count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularTable {
    pub observations: BTreeMap<(u32, u32), u32>,
    pub max_n: usize,
}

impl RegularTable {
    /// Wraps the table as a usable (empirical) succession function.
    pub fn to_succession(&self) -> SuccessionFunction {
        SuccessionFunction::regular(Rule::Empirical(self.observations.clone()))
    }
}

/// Why a pattern set failed empirical regularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotRegularWitness {
    /// Some avoider does not have its first site active.
    InactiveFirstSite { perm: Permutation },
    /// Two avoiders agree on (i, k) but disagree on the child count.
    Conflict {
        i: u32,
        k: u32,
        first: (Permutation, u32),
        second: (Permutation, u32),
    },
}

/// Result of empirical succession inference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inference {
    /// Single-valued on every observed pair; empirical up to max_n only.
    Regular(RegularTable),
    NotRightJustified { witness: Permutation },
    NotRegular(NotRegularWitness),
}

/// Tabulates (i, k) -> k' over every oracle node with length < max_n and
/// reports the outcome. Rejects non-right-justified sets immediately. The
/// result carries no guarantee beyond the checked depth.
pub fn infer_regular(patterns: &PatternSet, max_n: usize) -> Inference {
    if let RightJustified::No { witness } = patterns.is_right_justified() {
        return Inference::NotRightJustified { witness };
    }
    let mut observations: BTreeMap<(u32, u32), (u32, Permutation)> = BTreeMap::new();
    let root = Permutation::empty();
    let mut current = vec![OracleNode {
        active: active_sites_unchecked(&root, patterns),
        perm: root,
    }];
    for level in 0..max_n {
        let mut next = Vec::new();
        for node in &current {
            if node.active.first() != Some(&1) {
                return Inference::NotRegular(NotRegularWitness::InactiveFirstSite {
                    perm: node.perm.clone(),
                });
            }
            let k = node.active.len() as u32;
            for (idx, &site) in node.active.iter().enumerate() {
                let i = idx as u32 + 1;
                debug_assert_eq!(i as usize, site, "right-justified sets have interval sites");
                let child = insert_at_site(&node.perm, site).expect("site in range");
                let child_active = active_sites_unchecked(&child, patterns);
                let k_next = child_active.len() as u32;
                match observations.get(&(i, k)) {
                    None => {
                        observations.insert((i, k), (k_next, node.perm.clone()));
                    }
                    Some((seen, witness)) if *seen != k_next => {
                        return Inference::NotRegular(NotRegularWitness::Conflict {
                            i,
                            k,
                            first: (witness.clone(), *seen),
                            second: (node.perm.clone(), k_next),
                        });
                    }
                    Some(_) => {}
                }
                if level + 1 == max_n && child_active.first() != Some(&1) {
                    return Inference::NotRegular(NotRegularWitness::InactiveFirstSite {
                        perm: child,
                    });
                }
                next.push(OracleNode { perm: child, active: child_active });
            }
        }
        current = next;
    }
    Inference::Regular(RegularTable {
        observations: observations
            .into_iter()
            .map(|(key, (k_next, _))| (key, k_next))
            .collect(),
        max_n,
    })
}

/// Checks that an observed table and a closed-form rule agree: every
/// observation matches the rule, and every transition of the rule's label
/// graph within `depth` was observed.
pub fn empirical_matches(
    table: &RegularTable,
    rule: &SuccessionFunction,
    depth: usize,
) -> Result<()> {
    use crate::error::Error;
    for (&(i, k), &observed) in &table.observations {
        let got = rule.eval(i, Label::new(k, 0))?.k;
        if got != observed {
            return Err(Error::RuleDomain(format!(
                "rule gives k'={got} at (i={i}, k={k}) but the oracle observed {observed}"
            )));
        }
    }
    let graph = rule.explore(depth)?;
    for (label, children) in &graph.transitions {
        for (idx, child) in children.iter().enumerate() {
            let i = idx as u32 + 1;
            match table.observations.get(&(i, label.k)) {
                Some(&observed) if observed == child.k => {}
                Some(&observed) => {
                    return Err(Error::RuleDomain(format!(
                        "rule gives k'={} at (i={i}, k={}) but the oracle observed {observed}",
                        child.k, label.k
                    )))
                }
                None => {
                    return Err(Error::RuleDomain(format!(
                        "transition (i={i}, k={}) never observed by the oracle",
                        label.k
                    )))
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{entry, CatalogEntry, Params};
    use crate::sequences::{SequenceKind, SequenceRef};
    use crate::succession::gen_padovan_rule;

    fn set(texts: &[&str]) -> PatternSet {
        PatternSet::from_strs(texts).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let padovan = set(&["312", "2431", "4321"]);
        let level4 = oracle_generate(4, &padovan);
        let expected: Vec<Permutation> = [
            "1234", "1243", "1324", "1342", "1432", "2134", "2143", "2314", "2341", "3214",
            "3241", "3421",
        ]
        .iter()
        .map(|t| Permutation::parse(t).unwrap())
        .collect();
        assert_eq!(level4, expected);

        assert_eq!(oracle_generate(5, &set(&["321", "231"])).len(), 16);
        assert_eq!(oracle_generate(3, &PatternSet::empty()).len(), 6);
    }

    #[test]
    fn levelwise_and_filter_oracles_agree() {
        let sets = [
            PatternSet::empty(),
            set(&["1"]),
            set(&["21"]),
            set(&["312"]),
            set(&["132"]),
            set(&["321", "3412", "4123"]),
            set(&["312", "2431", "4321"]),
            set(&["4123", "4213"]),
            set(&["2134", "2143", "2413", "4213"]),
        ];
        for patterns in &sets {
            for n in 0..=6 {
                let levelwise: Vec<Permutation> =
                    oracle_generate(n, patterns).into_iter().sorted().collect();
                assert_eq!(levelwise, oracle_filter(n, patterns), "{patterns} at n={n}");
            }
        }
    }

    #[test]
    fn central_binomial_class_counts_match_the_closed_form() {
        let patterns = set(&["2134", "2143", "2413", "4213"]);
        let seq = SequenceRef::new(SequenceKind::CentralBinomial, None);
        let expected = seq.terms(8);
        let levels = oracle_levels(7, &patterns);
        for (n, level) in levels.iter().enumerate() {
            assert_eq!(
                num_bigint::BigUint::from(level.len()),
                expected[n],
                "n = {n}"
            );
        }
    }

    #[test]
    fn verify_passes_reference_entries() {
        for id in ["padovan-bt", "pell", "catalan-321", "fib-bisect-c"] {
            let e = entry(id, Params::none()).unwrap();
            let report = verify_entry(&e, 6);
            assert!(report.passed(), "{id}: {:?}", report.status);
        }
    }

    #[test]
    fn corrupted_rule_is_caught_by_counts() {
        // {321} with the growth branch flattened: k instead of k+1 at i=1.
        let mut table = BTreeMap::new();
        for k in 1..=12u32 {
            table.insert((1, k), k);
            for i in 2..=k {
                table.insert((i, k), i);
            }
        }
        let corrupted = CatalogEntry::custom(
            "corrupted-321",
            set(&["321"]),
            SuccessionFunction::regular(Rule::Empirical(table)),
        );
        let report = verify_entry(&corrupted, 5);
        assert_eq!(
            report.status,
            VerifyStatus::CountMismatch { n: 2, expected: 2, actual: 1 }
        );
    }

    #[test]
    fn invalid_rule_reports_label_mismatch() {
        let e = entry("gen-fib-c", Params::p(3)).unwrap();
        let report = verify_entry(&e, 5);
        match report.status {
            VerifyStatus::LabelMismatch { actual, .. } => {
                assert!(actual.contains("color -1"), "{actual}")
            }
            other => panic!("expected label mismatch, got {other:?}"),
        }
        // At p = 2 the same row is fine.
        let ok = entry("gen-fib-c", Params::p(2)).unwrap();
        assert!(verify_entry(&ok, 6).passed());
    }

    #[test]
    fn infer_reference_outcomes() {
        // Catalan: the observed table must match i+1 everywhere.
        match infer_regular(&set(&["312"]), 7) {
            Inference::Regular(table) => {
                assert!(table.observations.iter().all(|(&(i, _), &k2)| k2 == i + 1));
                let rule = SuccessionFunction::regular(Rule::Catalan312);
                empirical_matches(&table, &rule, 6).unwrap();
            }
            other => panic!("{other:?}"),
        }

        match infer_regular(&set(&["132"]), 4) {
            Inference::NotRightJustified { witness } => {
                assert_eq!(witness, Permutation::parse("132").unwrap())
            }
            other => panic!("{other:?}"),
        }

        match infer_regular(&set(&["312", "2431"]), 6) {
            Inference::NotRegular(NotRegularWitness::Conflict { i, k, first, second }) => {
                // Replay the witness pair against the oracle.
                let patterns = set(&["312", "2431"]);
                for (perm, expect) in [&first, &second] {
                    let active = active_sites_unchecked(perm, &patterns);
                    assert_eq!(active.len() as u32, k);
                    let child = insert_at_site(perm, i as usize).unwrap();
                    assert_eq!(
                        active_sites_unchecked(&child, &patterns).len() as u32,
                        *expect
                    );
                }
                assert_ne!(first.1, second.1);
            }
            other => panic!("{other:?}"),
        }

        // A set with an unavoidable dead end is rejected for regularity.
        match infer_regular(&set(&["1"]), 2) {
            Inference::NotRegular(NotRegularWitness::InactiveFirstSite { perm }) => {
                assert!(perm.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inferred_table_regenerates_the_class() {
        let patterns = set(&["312", "4321"]);
        let table = match infer_regular(&patterns, 7) {
            Inference::Regular(table) => table,
            other => panic!("{other:?}"),
        };
        let inferred = CatalogEntry::custom("inferred", patterns.clone(), table.to_succession());
        for n in 0..=6 {
            let mut emitted: Vec<Permutation> = Vec::new();
            generator::generate(&inferred, n, |perm| {
                emitted.push(Permutation::new(perm.to_vec()).unwrap());
            })
            .unwrap();
            emitted.sort();
            assert_eq!(emitted, oracle_filter(n, &patterns));
        }
    }

    #[test]
    fn gen_padovan_color_adjudication() {
        // The shipped color update resets at (i = k, c = 0) regardless of
        // k; a variant restricting the reset to k < p contradicts the
        // structural color already at p = 2 on the permutation 21.
        for p in [2u32, 3] {
            let e = entry("gen-padovan", Params::p(p)).unwrap();
            assert!(verify_entry(&e, 6).passed(), "shipped rule fails at p={p}");
        }

        let variant_nu = |i: u32, k: u32, c: i32, p: u32| -> i32 {
            if i == 1 || (i == k && c == 0 && k < p) { 0 } else { 1 }
        };
        let mut found_mismatch = false;
        for p in [2u32, 3] {
            let e = entry("gen-padovan", Params::p(p)).unwrap();
            // Walk the oracle tree assigning variant colors from the seed.
            let tree = OracleTree::build(5, &e.patterns);
            let mut colors: Vec<Vec<i32>> = vec![vec![0]];
            for (level_idx, level) in tree.levels.iter().enumerate().take(5) {
                let mut next = Vec::new();
                for (node, &c) in level.iter().zip(&colors[level_idx]) {
                    let k = node.active.len() as u32;
                    for (idx, _) in node.active.iter().enumerate() {
                        next.push(variant_nu(idx as u32 + 1, k, c, p));
                    }
                }
                colors.push(next);
            }
            for (level, level_colors) in tree.levels.iter().zip(&colors).skip(1) {
                for (node, &c) in level.iter().zip(level_colors) {
                    if i32::from(structural_color(&node.perm, p).unwrap()) != c {
                        found_mismatch = true;
                    }
                }
            }
        }
        assert!(found_mismatch, "the k<p color variant should disagree somewhere");

        // Direct spot check: the shipped rule keeps color 0 at i=k=p.
        assert_eq!(gen_padovan_rule(2, 2, 0, 2).unwrap().1, 0);
        assert_eq!(structural_color(&Permutation::parse("21").unwrap(), 2).unwrap(), 0);
    }
}
