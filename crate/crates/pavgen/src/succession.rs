//! Succession functions for generating trees of pattern-avoiding
//! permutations.
//!
//! A node of the generating tree carries a label: the number k of active
//! sites of its permutation, plus a color c for the colored rules (regular
//! rules keep c = 0). The succession function maps (site i, label) to the
//! child's label, for 1 <= i <= k. The empty permutation is the root and
//! seeds the recursion with label (1, 0).
//!
//! Three catalogued rules are stated only for the labels of nonempty
//! permutations ("3 if i = 1" style constants); for those the root
//! transition is pinned to k' = 2, which is forced for every catalogued
//! set because all its forbidden patterns have length >= 3, so both sites
//! of the length-1 permutation are active. The oracle tests in `verify`
//! confirm this completion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern_set::{self, FamilyDescriptor, FamilyId};
use crate::perm::Permutation;

/// Generating-tree label: active-site count and color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Label {
    pub k: u32,
    pub c: i32,
}

impl Label {
    /// Label of the empty permutation.
    pub const SEED: Label = Label { k: 1, c: 0 };

    pub fn new(k: u32, c: i32) -> Self {
        Label { k, c }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Regular,
    Colored,
}

/// Succession function of {321, wedge(p), jump(m)}, p,m >= 2.
/// Defined for 1 <= i <= k <= m.
pub fn wedge_jump_rule(i: u32, k: u32, p: u32, m: u32) -> Result<u32> {
    if p < 2 || m < 2 {
        return Err(Error::RuleDomain(format!("need p,m >= 2, got p={p} m={m}")));
    }
    if i < 1 || i > k {
        return Err(Error::RuleDomain(format!("site {i} outside 1..={k}")));
    }
    if k > m {
        return Err(Error::RuleDomain(format!("label k={k} exceeds m={m}")));
    }
    Ok(if i == 1 && k < m {
        k + 1
    } else if i == 1 {
        m
    } else if i < p {
        i
    } else {
        p - 1
    })
}

/// Colored succession function of {312, 2431, desc(p)}, p >= 2.
/// Colors are {0, 1}.
pub fn gen_padovan_rule(i: u32, k: u32, c: i32, p: u32) -> Result<(u32, i32)> {
    if p < 2 {
        return Err(Error::RuleDomain(format!("need p >= 2, got p={p}")));
    }
    if i < 1 || i > k {
        return Err(Error::RuleDomain(format!("site {i} outside 1..={k}")));
    }
    if !(0..=1).contains(&c) {
        return Err(Error::RuleDomain(format!("color {c} outside {{0,1}}")));
    }
    let next_k = if i == 1 || (i == k && c == 0 && k < p) { i + 1 } else { i };
    let next_c = if i == 1 || (i == k && c == 0) { 0 } else { 1 };
    Ok((next_k, next_c))
}

/// Colored succession function of {312, 2431, 4321}; agrees with
/// `gen_padovan_rule` at p = 3 on every label reachable from the seed.
pub fn padovan_bt_rule(i: u32, k: u32, c: i32) -> Result<(u32, i32)> {
    if i < 1 || i > k {
        return Err(Error::RuleDomain(format!("site {i} outside 1..={k}")));
    }
    if !(0..=1).contains(&c) {
        return Err(Error::RuleDomain(format!("color {c} outside {{0,1}}")));
    }
    let next_k = if i == 1 || (i == 2 && (c == 1 || k == 3)) { 2 } else { 3 };
    let next_c = if i == 1 || (i == k && c == 0) { 0 } else { 1 };
    Ok((next_k, next_c))
}

/// Colored succession function of {312, 2431}. Colors are {0, 1}.
pub fn fib_bisect_colored_rule(i: u32, k: u32, c: i32) -> Result<(u32, i32)> {
    if i < 1 || i > k {
        return Err(Error::RuleDomain(format!("site {i} outside 1..={k}")));
    }
    if !(0..=1).contains(&c) {
        return Err(Error::RuleDomain(format!("color {c} outside {{0,1}}")));
    }
    let grow = i == 1 || (i == k && c == 0);
    Ok((if grow { i + 1 } else { i }, if grow { 0 } else { 1 }))
}

/// The concrete succession formulas of the catalog, plus an empirical
/// table form used by inference and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// {321,312}: constant 2.
    Pow2,
    /// {321,3412,4123}: 3 if i = 1, else 2 (root transition 2).
    Pell,
    /// {312,4321,3421}: 3 if i = 2, else 2.
    PellAlt,
    /// {321,3412}: k+1 if i = 1, else 2.
    FibBisect1,
    /// {321,4123}: 3 if i = 1, else i (root transition 2).
    FibBisect2,
    /// {312,4321}: 3 if k = 3 and i = 3, else i+1.
    FibBisect3,
    /// {312}: i+1.
    Catalan312,
    /// {321}: k+1 if i = 1, else i.
    Catalan321,
    /// {4123,4213}: k+1 if i = k-1 or i = k, else i+2.
    Schroeder,
    /// {321,231,312}: 1 if i = 2, else 2.
    Fibonacci,
    /// {321, jump(m)}.
    Av321Jump { m: u32 },
    /// {321, wedge(p)}.
    Av321Wedge { p: u32 },
    /// {312, desc(p)}.
    Av312Desc { p: u32 },
    /// {321, 3412, jump(m)}.
    Av3213412Jump { m: u32 },
    /// {321, 231, jump(m)}.
    GenFibonacci { m: u32 },
    /// {321, wedge(p), jump(p)}.
    WedgeJumpEq { p: u32 },
    /// {321, wedge(p), jump(m)}.
    WedgeJump { p: u32, m: u32 },
    /// {312, 2431} (colored).
    FibBisectColored,
    /// {312, 2431, 4321} (colored).
    PadovanBt,
    /// {321, 312, lift(p)} (colored), kept exactly as catalogued even
    /// though its color update c-1 can leave the color set; verification
    /// adjudicates it per parameter.
    GenFibColored { p: u32 },
    /// {321, 4123, bump(p)} (colored; root transition 2).
    Av3214123Bump { p: u32 },
    /// {312, 2431, desc(p)} (colored).
    GenPadovan { p: u32 },
    /// Observed (i,k) -> k' table, e.g. from `verify::infer_regular`.
    /// Only regular rules are inferred.
    Empirical(BTreeMap<(u32, u32), u32>),
}

impl Rule {
    fn eval(&self, i: u32, k: u32, c: i32) -> Result<(u32, i32)> {
        use Rule::*;
        let reg = |k: u32| (k, 0);
        Ok(match self {
            Pow2 => reg(2),
            Pell => reg(if k == 1 { 2 } else if i == 1 { 3 } else { 2 }),
            PellAlt => reg(if i == 2 { 3 } else { 2 }),
            FibBisect1 => reg(if i == 1 { k + 1 } else { 2 }),
            FibBisect2 => reg(if k == 1 { 2 } else if i == 1 { 3 } else { i }),
            FibBisect3 => reg(if k == 3 && i == 3 { 3 } else { i + 1 }),
            Catalan312 => reg(i + 1),
            Catalan321 => reg(if i == 1 { k + 1 } else { i }),
            Schroeder => reg(if i + 1 == k || i == k { k + 1 } else { i + 2 }),
            Fibonacci => reg(if i == 2 { 1 } else { 2 }),
            Av321Jump { m } => reg(if i == 1 && k < *m {
                k + 1
            } else if i == 1 {
                *m
            } else {
                i
            }),
            Av321Wedge { p } => reg(if i == 1 {
                k + 1
            } else if i + 1 < *p {
                i
            } else {
                *p - 1
            }),
            Av312Desc { p } => reg(if k == *p && i == *p { *p } else { i + 1 }),
            Av3213412Jump { m } => reg(if i == 1 && k < *m {
                k + 1
            } else if i == 1 {
                *m
            } else {
                2
            }),
            GenFibonacci { m } => reg(if i == 1 && k < *m {
                k + 1
            } else if i == 1 {
                k
            } else {
                1
            }),
            WedgeJumpEq { p } => reg(if i == 1 && k < *p {
                k + 1
            } else if i == 1 {
                *p
            } else if i == *p && k == *p {
                *p - 1
            } else {
                i
            }),
            WedgeJump { p, m } => reg(wedge_jump_rule(i, k, *p, *m)?),
            FibBisectColored => fib_bisect_colored_rule(i, k, c)?,
            PadovanBt => padovan_bt_rule(i, k, c)?,
            GenFibColored { p } => {
                let top = *p as i32 - 2;
                let next_k = if c == top && i == 2 { 1 } else { 2 };
                let next_c = if i == 1 || c == top { 0 } else { c - 1 };
                (next_k, next_c)
            }
            Av3214123Bump { p } => {
                if k == 1 {
                    (2, 0)
                } else {
                    let top = *p as i32 - 3;
                    let next_k = if i == 2 || (i == 3 && c == top) { 2 } else { 3 };
                    let next_c = if i == 3 && c < top { c + 1 } else { 0 };
                    (next_k, next_c)
                }
            }
            GenPadovan { p } => gen_padovan_rule(i, k, c, *p)?,
            Empirical(table) => reg(*table.get(&(i, k)).ok_or_else(|| {
                Error::RuleDomain(format!("no observation for site {i}, label k={k}"))
            })?),
        })
    }

    /// Human-readable formula, for the catalog listing.
    pub fn describe(&self) -> String {
        use Rule::*;
        match self {
            Pow2 => "2".into(),
            Pell => "3 if i=1; 2 otherwise (2 from the root label)".into(),
            PellAlt => "3 if i=2; 2 otherwise".into(),
            FibBisect1 => "k+1 if i=1; 2 otherwise".into(),
            FibBisect2 => "3 if i=1; i otherwise (2 from the root label)".into(),
            FibBisect3 => "3 if k=3 and i=3; i+1 otherwise".into(),
            Catalan312 => "i+1".into(),
            Catalan321 => "k+1 if i=1; i otherwise".into(),
            Schroeder => "k+1 if i=k-1 or i=k; i+2 otherwise".into(),
            Fibonacci => "1 if i=2; 2 otherwise".into(),
            Av321Jump { m } => {
                format!("k+1 if i=1 and k<{m}; {m} if i=1 and k={m}; i otherwise")
            }
            Av321Wedge { p } => {
                format!("k+1 if i=1; i if 1<i<{}; {} otherwise", p - 1, p - 1)
            }
            Av312Desc { p } => format!("{p} if k={p} and i={p}; i+1 otherwise"),
            Av3213412Jump { m } => {
                format!("k+1 if i=1 and k<{m}; {m} if i=1 and k={m}; 2 otherwise")
            }
            GenFibonacci { m } => {
                format!("k+1 if i=1 and k<{m}; k if i=1 and k={m}; 1 otherwise")
            }
            WedgeJumpEq { p } => format!(
                "k+1 if i=1 and k<{p}; {p} if i=1 and k={p}; {} if i=k={p}; i otherwise",
                p - 1
            ),
            WedgeJump { p, m } => format!(
                "k+1 if i=1 and k<{m}; {m} if i=1 and k={m}; i if 1<i<{p}; {} otherwise",
                p - 1
            ),
            FibBisectColored => {
                "k'=i+1, c'=0 if i=1 or (i=k and c=0); k'=i, c'=1 otherwise".into()
            }
            PadovanBt => {
                "k'=2 if i=1 or (i=2 and (c=1 or k=3)), else 3; c'=0 if i=1 or (i=k and c=0), else 1"
                    .into()
            }
            GenFibColored { p } => format!(
                "k'=1 if c={top} and i=2, else 2; c'=0 if i=1 or c={top}, else c-1",
                top = p - 2
            ),
            Av3214123Bump { p } => format!(
                "k'=2 if i=2 or (i=3 and c={top}), else 3; c'=c+1 if i=3 and c<{top}, else 0 (2 from the root label)",
                top = p - 3
            ),
            GenPadovan { p } => format!(
                "k'=i+1 if i=1 or (i=k and c=0 and k<{p}), else i; c'=0 if i=1 or (i=k and c=0), else 1"
            ),
            Empirical(table) => format!("empirical table over {} observed pairs", table.len()),
        }
    }
}

/// A succession function: a rule plus its declared kind and color range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessionFunction {
    kind: RuleKind,
    max_color: i32,
    rule: Rule,
}

impl SuccessionFunction {
    pub fn regular(rule: Rule) -> Self {
        SuccessionFunction { kind: RuleKind::Regular, max_color: 0, rule }
    }

    pub fn colored(rule: Rule, max_color: i32) -> Self {
        SuccessionFunction { kind: RuleKind::Colored, max_color, rule }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn max_color(&self) -> i32 {
        self.max_color
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn describe(&self) -> String {
        self.rule.describe()
    }

    /// Child label for insertion at site `i` of a node labeled `label`.
    /// The output is not range-checked here; `explore` validates every
    /// transition reachable from the seed.
    pub fn eval(&self, i: u32, label: Label) -> Result<Label> {
        if i < 1 || i > label.k {
            return Err(Error::RuleDomain(format!(
                "site {i} outside 1..={} at label {label}",
                label.k
            )));
        }
        if label.c < 0 || label.c > self.max_color {
            return Err(Error::RuleDomain(format!(
                "color {} outside 0..={} at label {label}",
                label.c, self.max_color
            )));
        }
        let (k, c) = self.rule.eval(i, label.k, label.c)?;
        Ok(Label::new(k, c))
    }

    /// Walks every label reachable from the seed in at most `depth`
    /// insertions, memoizing transitions and rejecting any child label
    /// with k < 1 or a color outside the declared set. This runs before
    /// generation so that a bad rule fails loudly instead of producing a
    /// wrong listing.
    pub fn explore(&self, depth: usize) -> Result<LabelGraph> {
        let mut transitions: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
        let mut known: BTreeSet<Label> = BTreeSet::new();
        known.insert(Label::SEED);
        let mut frontier = vec![Label::SEED];
        for _ in 0..depth {
            let mut next = Vec::new();
            for label in frontier {
                let mut children = Vec::with_capacity(label.k as usize);
                for i in 1..=label.k {
                    let child = self.eval(i, label)?;
                    if child.k < 1 {
                        return Err(Error::InvalidLabelGraph(format!(
                            "label {label}, site {i}: child count {} (dead end)",
                            child.k
                        )));
                    }
                    if child.c < 0 || child.c > self.max_color {
                        return Err(Error::InvalidLabelGraph(format!(
                            "label {label}, site {i}: color {} leaves 0..={}",
                            child.c, self.max_color
                        )));
                    }
                    if self.kind == RuleKind::Regular && child.c != 0 {
                        return Err(Error::InvalidLabelGraph(format!(
                            "regular rule produced color {} at label {label}, site {i}",
                            child.c
                        )));
                    }
                    if known.insert(child) {
                        next.push(child);
                    }
                    children.push(child);
                }
                transitions.insert(label, children);
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        Ok(LabelGraph { depth, transitions })
    }
}

/// Transitions of every label reachable (and expanded) within a depth.
#[derive(Debug, Clone, Serialize)]
pub struct LabelGraph {
    pub depth: usize,
    /// label -> child labels for sites 1..=k, in site order.
    pub transitions: BTreeMap<Label, Vec<Label>>,
}

impl LabelGraph {
    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.transitions.keys()
    }
}

/// The structural color of a nonempty permutation avoiding
/// {312, 2431, desc(p)}: 0 when its largest entry takes part in no
/// occurrence of 231, or when its length-p suffix is decreasing;
/// 1 otherwise. Decided by brute-force occurrence search.
pub fn structural_color(alpha: &Permutation, p: u32) -> Result<u8> {
    if alpha.is_empty() {
        return Err(Error::NotAvoiding("empty permutation has no color".into()));
    }
    let patterns = pattern_set::instantiate_family(&FamilyDescriptor::new(
        FamilyId::GenPadovan,
        Some(p),
        None,
    )?)?;
    if !alpha.avoids_all(&patterns) {
        return Err(Error::NotAvoiding(alpha.to_string()));
    }
    let e = alpha.entries();
    let n = e.len();
    let mut involved = false;
    'outer: for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                // order-isomorphic to 231: last < first < middle
                if e[d] < e[a] && e[a] < e[b] && (e[a] == n as u32 || e[b] == n as u32 || e[d] == n as u32)
                {
                    involved = true;
                    break 'outer;
                }
            }
        }
    }
    let suffix_decreasing =
        n >= p as usize && e[n - p as usize..].windows(2).all(|w| w[0] > w[1]);
    Ok(if !involved || suffix_decreasing { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(text: &str) -> Permutation {
        Permutation::parse(text).unwrap()
    }

    #[test]
    fn wedge_jump_rule_cases() {
        assert_eq!(wedge_jump_rule(1, 1, 3, 3).unwrap(), 2);
        assert_eq!(wedge_jump_rule(1, 3, 3, 3).unwrap(), 3);
        assert_eq!(wedge_jump_rule(2, 3, 3, 3).unwrap(), 2);
        assert_eq!(wedge_jump_rule(3, 3, 3, 3).unwrap(), 2);
        assert_eq!(wedge_jump_rule(1, 2, 3, 3).unwrap(), 3);
        assert!(wedge_jump_rule(4, 3, 3, 3).is_err());
        assert!(wedge_jump_rule(1, 4, 3, 3).is_err());
        assert!(wedge_jump_rule(1, 1, 1, 3).is_err());
    }

    #[test]
    fn gen_padovan_rule_cases() {
        assert_eq!(gen_padovan_rule(1, 1, 0, 3).unwrap(), (2, 0));
        assert_eq!(gen_padovan_rule(2, 2, 1, 3).unwrap(), (2, 1));
        assert_eq!(gen_padovan_rule(3, 3, 0, 3).unwrap(), (3, 0));
        assert_eq!(gen_padovan_rule(2, 2, 0, 3).unwrap(), (3, 0));
        assert_eq!(gen_padovan_rule(2, 3, 0, 3).unwrap(), (2, 1));
        assert!(gen_padovan_rule(1, 1, 2, 3).is_err());
        assert!(gen_padovan_rule(0, 1, 0, 3).is_err());
    }

    #[test]
    fn padovan_bt_rule_cases() {
        assert_eq!(padovan_bt_rule(1, 1, 0).unwrap(), (2, 0));
        assert_eq!(padovan_bt_rule(2, 2, 0).unwrap(), (3, 0));
        assert_eq!(padovan_bt_rule(2, 3, 0).unwrap(), (2, 1));
        assert_eq!(padovan_bt_rule(3, 3, 0).unwrap(), (3, 0));
        assert_eq!(padovan_bt_rule(2, 2, 1).unwrap(), (2, 1));
    }

    #[test]
    fn fib_bisect_colored_rule_cases() {
        assert_eq!(fib_bisect_colored_rule(1, 1, 0).unwrap(), (2, 0));
        assert_eq!(fib_bisect_colored_rule(3, 3, 0).unwrap(), (4, 0));
        assert_eq!(fib_bisect_colored_rule(2, 3, 1).unwrap(), (2, 1));
        assert_eq!(fib_bisect_colored_rule(2, 3, 0).unwrap(), (2, 1));
    }

    #[test]
    fn padovan_bt_agrees_with_gen_padovan_at_p3() {
        let padovan = SuccessionFunction::colored(Rule::PadovanBt, 1);
        let genpad = SuccessionFunction::colored(Rule::GenPadovan { p: 3 }, 1);
        let graph = genpad.explore(12).unwrap();
        for (label, children) in &graph.transitions {
            for (idx, child) in children.iter().enumerate() {
                let i = idx as u32 + 1;
                assert_eq!(
                    padovan.eval(i, *label).unwrap(),
                    *child,
                    "disagree at label {label}, site {i}"
                );
            }
        }
        // Both reach exactly the labels of the depth-4 tree.
        let labels: Vec<Label> = graph.labels().copied().collect();
        assert!(labels.contains(&Label::new(2, 1)));
        assert!(labels.contains(&Label::new(3, 0)));
    }

    #[test]
    fn wedge_jump_labels_stay_at_most_m() {
        for p in 2..=4 {
            for m in 2..=4 {
                let sf = SuccessionFunction::regular(Rule::WedgeJump { p, m });
                let graph = sf.explore(12).unwrap();
                for label in graph.labels() {
                    assert!(label.k <= m, "k={} > m={m} at p={p}", label.k);
                }
            }
        }
    }

    #[test]
    fn gen_fib_colored_is_invalid_as_catalogued_for_p_at_least_3() {
        // p = 2 saturates cleanly.
        let ok = SuccessionFunction::colored(Rule::GenFibColored { p: 2 }, 0);
        assert!(ok.explore(10).is_ok());
        // p >= 3 drives the color to -1 at label (2,0), site 2.
        for p in 3..=4 {
            let bad = SuccessionFunction::colored(Rule::GenFibColored { p }, p as i32 - 2);
            let err = bad.explore(10).unwrap_err();
            match err {
                Error::InvalidLabelGraph(msg) => {
                    assert!(msg.contains("color -1"), "unexpected message: {msg}")
                }
                other => panic!("unexpected error {other:?}"),
            }
        }
    }

    #[test]
    fn no_dead_ends_in_valid_rules() {
        let rules = [
            SuccessionFunction::regular(Rule::Pow2),
            SuccessionFunction::regular(Rule::Catalan312),
            SuccessionFunction::regular(Rule::Schroeder),
            SuccessionFunction::regular(Rule::Fibonacci),
            SuccessionFunction::colored(Rule::PadovanBt, 1),
            SuccessionFunction::colored(Rule::FibBisectColored, 1),
        ];
        for sf in &rules {
            let graph = sf.explore(10).unwrap();
            for (label, children) in &graph.transitions {
                assert_eq!(children.len(), label.k as usize);
                assert!(children.iter().all(|c| c.k >= 1));
            }
        }
    }

    #[test]
    fn structural_color_examples() {
        assert_eq!(structural_color(&perm("231"), 3).unwrap(), 1);
        assert_eq!(structural_color(&perm("321"), 3).unwrap(), 0);
        assert_eq!(structural_color(&perm("1342"), 3).unwrap(), 1);
        assert_eq!(structural_color(&perm("1"), 3).unwrap(), 0);
        assert_eq!(structural_color(&perm("21"), 2).unwrap(), 0);
        // 312 violates the avoidance precondition.
        assert!(structural_color(&perm("312"), 3).is_err());
        assert!(structural_color(&Permutation::empty(), 3).is_err());
    }

    #[test]
    fn empirical_table_rule() {
        let mut table = BTreeMap::new();
        table.insert((1, 1), 2);
        table.insert((1, 2), 3);
        table.insert((2, 2), 2);
        let sf = SuccessionFunction::regular(Rule::Empirical(table));
        assert_eq!(sf.eval(1, Label::SEED).unwrap(), Label::new(2, 0));
        // Unobserved pairs are domain errors, not silent guesses.
        assert!(sf.eval(2, Label::new(3, 0)).is_err());
    }
}
