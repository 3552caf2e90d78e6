//! Exhaustive generation driven by succession functions.
//!
//! Permutations are built in a single fixed-capacity buffer. Entering a
//! node of the generating tree appends the next-largest value after the
//! last entry (its first site); successive sibling subtrees are reached by
//! transposing that value one position left at a time, and a symmetric
//! unwind restores the buffer before returning. Work per call is
//! proportional to the call's degree, which is what makes the traversal
//! run in constant amortized time for the catalogued rules.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::pattern_set::PatternSet;
use crate::perm::Permutation;
use crate::sites::insert_at_site;
use crate::succession::{Label, RuleKind, SuccessionFunction};

/// Work counters of one generation run. `recursive_calls` counts the
/// calls made below the root call, i.e. the nonempty prefixes visited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub recursive_calls: u64,
    pub transpositions: u64,
    pub emitted: u64,
}

struct Run<'a, F: FnMut(&[u32])> {
    n: usize,
    buf: Vec<u32>,
    rule: &'a SuccessionFunction,
    counters: Counters,
    visit: F,
}

impl<'a, F: FnMut(&[u32])> Run<'a, F> {
    fn emit(&mut self) {
        self.counters.emitted += 1;
        (self.visit)(&self.buf[..self.n]);
    }

    /// Mirrors the regular algorithm: labels are bare site counts.
    fn go_regular(&mut self, length: usize, k: u32) {
        if length == self.n {
            self.emit();
            return;
        }
        let length = length + 1;
        self.buf[length - 1] = length as u32;
        let snap = prefix_snapshot(&self.buf, length);
        self.counters.recursive_calls += 1;
        let child = self.child(1, k, 0);
        self.go_regular(length, child.k);
        check_prefix(&self.buf, length, &snap);
        for i in 2..=k {
            self.buf.swap(length - i as usize + 1, length - i as usize);
            self.counters.transpositions += 1;
            let snap = prefix_snapshot(&self.buf, length);
            self.counters.recursive_calls += 1;
            let child = self.child(i, k, 0);
            self.go_regular(length, child.k);
            check_prefix(&self.buf, length, &snap);
        }
        for i in (2..=k).rev() {
            self.buf.swap(length - i as usize + 1, length - i as usize);
            self.counters.transpositions += 1;
        }
    }

    /// Mirrors the colored algorithm: labels carry a color.
    fn go_colored(&mut self, length: usize, label: Label) {
        if length == self.n {
            self.emit();
            return;
        }
        let length = length + 1;
        self.buf[length - 1] = length as u32;
        let snap = prefix_snapshot(&self.buf, length);
        self.counters.recursive_calls += 1;
        let child = self.child(1, label.k, label.c);
        self.go_colored(length, child);
        check_prefix(&self.buf, length, &snap);
        for i in 2..=label.k {
            self.buf.swap(length - i as usize + 1, length - i as usize);
            self.counters.transpositions += 1;
            let snap = prefix_snapshot(&self.buf, length);
            self.counters.recursive_calls += 1;
            let child = self.child(i, label.k, label.c);
            self.go_colored(length, child);
            check_prefix(&self.buf, length, &snap);
        }
        for i in (2..=label.k).rev() {
            self.buf.swap(length - i as usize + 1, length - i as usize);
            self.counters.transpositions += 1;
        }
    }

    fn child(&self, i: u32, k: u32, c: i32) -> Label {
        self.rule
            .eval(i, Label::new(k, c))
            .expect("rule was validated over its reachable labels before the run")
    }
}

#[inline]
fn prefix_snapshot(buf: &[u32], length: usize) -> Option<Vec<u32>> {
    if cfg!(debug_assertions) {
        Some(buf[..length].to_vec())
    } else {
        None
    }
}

#[inline]
fn check_prefix(buf: &[u32], length: usize, snap: &Option<Vec<u32>>) {
    if let Some(s) = snap {
        debug_assert_eq!(&buf[..length], &s[..], "buffer prefix not restored");
    }
}

/// Streams every permutation of S_n(P) for the entry's rule, in the
/// generating-tree order. The visitor borrows the buffer; callers that
/// keep permutations must copy.
pub fn generate<F: FnMut(&[u32])>(entry: &CatalogEntry, n: usize, visit: F) -> Result<Counters> {
    entry.succession.explore(n)?;
    let mut run = Run {
        n,
        buf: vec![0; n],
        rule: &entry.succession,
        counters: Counters::default(),
        visit,
    };
    match entry.succession.kind() {
        RuleKind::Regular => run.go_regular(0, Label::SEED.k),
        RuleKind::Colored => run.go_colored(0, Label::SEED),
    }
    Ok(run.counters)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Reverse,
    Complement,
}

impl Transform {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "reverse" => Ok(Transform::Reverse),
            "complement" => Ok(Transform::Complement),
            other => Err(Error::Usage(format!(
                "unknown transform {other:?} (expected reverse or complement)"
            ))),
        }
    }
}

/// As `generate`, but the visitor sees each permutation reversed or
/// complemented; the emitted set is S_n of the reversed (resp.
/// complemented) pattern set.
pub fn generate_transformed<F: FnMut(&[u32])>(
    entry: &CatalogEntry,
    n: usize,
    transform: Transform,
    mut visit: F,
) -> Result<Counters> {
    let mut scratch = vec![0u32; n];
    generate(entry, n, |perm| {
        match transform {
            Transform::Reverse => {
                for (dst, src) in scratch.iter_mut().zip(perm.iter().rev()) {
                    *dst = *src;
                }
            }
            Transform::Complement => {
                for (dst, src) in scratch.iter_mut().zip(perm.iter()) {
                    *dst = n as u32 + 1 - *src;
                }
            }
        }
        visit(&scratch);
    })
}

/// |S_n(P)| by dynamic programming over the label multiset: each label of
/// multiplicity w contributes w to each of its k successors. Exact.
pub fn count(entry: &CatalogEntry, n: usize) -> Result<BigUint> {
    let graph = entry.succession.explore(n)?;
    let mut level: BTreeMap<Label, BigUint> = BTreeMap::new();
    level.insert(Label::SEED, BigUint::from(1u32));
    for _ in 0..n {
        let mut next: BTreeMap<Label, BigUint> = BTreeMap::new();
        for (label, weight) in &level {
            let children = graph
                .transitions
                .get(label)
                .expect("explored to the requested depth");
            for child in children {
                *next.entry(*child).or_default() += weight;
            }
        }
        level = next;
    }
    Ok(level.into_values().sum())
}

/// Depth cap of `generate_tree`; the tree is for inspection, not bulk
/// generation.
pub const TREE_DEPTH_CAP: usize = 6;

/// A materialized generating-tree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenTreeNode {
    pub perm: Permutation,
    pub label: Label,
    pub children: Vec<GenTreeNode>,
}

impl GenTreeNode {
    /// Nodes of each level, root first.
    pub fn levels(&self) -> Vec<Vec<&GenTreeNode>> {
        let mut out: Vec<Vec<&GenTreeNode>> = Vec::new();
        let mut frontier = vec![self];
        while !frontier.is_empty() {
            out.push(frontier.clone());
            frontier = frontier
                .iter()
                .flat_map(|node| node.children.iter())
                .collect();
        }
        out
    }
}

/// Materializes the labeled generating tree down to `depth`.
pub fn generate_tree(entry: &CatalogEntry, depth: usize) -> Result<GenTreeNode> {
    if depth > TREE_DEPTH_CAP {
        return Err(Error::DepthCapExceeded { requested: depth, cap: TREE_DEPTH_CAP });
    }
    entry.succession.explore(depth)?;
    fn build(
        sf: &SuccessionFunction,
        perm: Permutation,
        label: Label,
        remaining: usize,
    ) -> GenTreeNode {
        let children = if remaining == 0 {
            Vec::new()
        } else {
            (1..=label.k)
                .map(|i| {
                    let child_perm = insert_at_site(&perm, i as usize).expect("site in range");
                    let child_label = sf.eval(i, label).expect("validated rule");
                    build(sf, child_perm, child_label, remaining - 1)
                })
                .collect()
        };
        GenTreeNode { perm, label, children }
    }
    Ok(build(&entry.succession, Permutation::empty(), Label::SEED, depth))
}

/// Indented text form of a tree, one `perm (k,c)` node per line.
pub fn render_tree(root: &GenTreeNode) -> String {
    fn compact(perm: &Permutation) -> String {
        if perm.is_empty() {
            "ε".to_string()
        } else if perm.len() <= 9 {
            perm.entries().iter().map(|v| v.to_string()).collect()
        } else {
            perm.to_string()
        }
    }
    fn walk(node: &GenTreeNode, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!(
            "{} ({},{})\n",
            compact(&node.perm),
            node.label.k,
            node.label.c
        ));
        for child in &node.children {
            walk(child, depth + 1, out);
        }
    }
    let mut out = String::new();
    walk(root, 0, &mut out);
    out
}

/// True when some pattern ends with its largest value immediately followed
/// by its second largest. For such sets the first site of a node can be
/// its only active site arbitrarily often, and the constant-amortized-time
/// bound is not guaranteed.
pub fn tail_is_max_next_pair(patterns: &PatternSet) -> bool {
    patterns.iter().any(|tau| {
        let e = tau.entries();
        let k = e.len() as u32;
        k >= 2 && e[e.len() - 2] == k && e[e.len() - 1] == k - 1
    })
}

/// Amortized-cost report of a completed run.
#[derive(Debug, Clone, Serialize)]
pub struct CatReport {
    pub entry: String,
    pub n: usize,
    pub runs: u32,
    pub counters: Counters,
    pub wall_nanos_total: u128,
    pub calls_per_emitted: Option<f64>,
    pub transpositions_per_emitted: Option<f64>,
    pub nanos_per_emitted: Option<f64>,
    /// Set when the pattern set falls outside the CAT guarantee.
    pub cat_exclusion: bool,
}

/// Builds the ratio report for one run. Ratios are `None` when nothing was
/// emitted.
pub fn cat_metrics(
    entry: &CatalogEntry,
    n: usize,
    counters: Counters,
    wall: Duration,
    runs: u32,
) -> CatReport {
    let per = |x: u64| {
        (counters.emitted > 0).then(|| x as f64 / counters.emitted as f64)
    };
    CatReport {
        entry: entry.display_id(),
        n,
        runs,
        counters,
        wall_nanos_total: wall.as_nanos(),
        calls_per_emitted: per(counters.recursive_calls),
        transpositions_per_emitted: per(counters.transpositions),
        nanos_per_emitted: (counters.emitted > 0 && runs > 0).then(|| {
            wall.as_nanos() as f64 / (counters.emitted as f64 * runs as f64)
        }),
        cat_exclusion: tail_is_max_next_pair(&entry.patterns),
    }
}

/// Runs the generator repeatedly (discarding output) until the cumulative
/// wall time reaches `min_wall`, then reports amortized costs. The clock
/// is read outside the recursion only.
pub fn bench(entry: &CatalogEntry, n: usize, min_wall: Duration) -> Result<CatReport> {
    let mut runs = 0u32;
    let mut total = Duration::ZERO;
    let mut counters = Counters::default();
    while runs == 0 || total < min_wall {
        let start = Instant::now();
        counters = generate(entry, n, |_| {})?;
        total += start.elapsed();
        runs += 1;
    }
    Ok(cat_metrics(entry, n, counters, total, runs))
}
