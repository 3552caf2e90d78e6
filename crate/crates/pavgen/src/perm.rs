//! Permutations in one-line notation and pattern containment.
//!
//! A length-n permutation holds each value 1..=n exactly once. Containment
//! is classical pattern containment: `host` contains `pattern` when some
//! (not necessarily contiguous) subsequence of `host` is order-isomorphic
//! to `pattern`.

use std::fmt;

use crate::error::{Error, Result};
use crate::pattern_set::PatternSet;

/// A permutation of {1,..,n} in one-line notation. n = 0 is the empty
/// permutation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    entries: Vec<u32>,
}

impl Permutation {
    /// The empty permutation.
    pub fn empty() -> Self {
        Permutation { entries: Vec::new() }
    }

    /// Builds a permutation, checking that `entries` is a rearrangement of
    /// 1..=n.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n];
        for &v in &entries {
            if v == 0 || v as usize > n {
                return Err(Error::InvalidPermutation(format!(
                    "entry {v} out of range 1..={n}"
                )));
            }
            if seen[v as usize - 1] {
                return Err(Error::InvalidPermutation(format!("entry {v} repeated")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { entries })
    }

    /// Builds a permutation from entries already known to be valid.
    /// Only checked in debug builds; used on generator/oracle outputs that
    /// are valid by construction.
    pub(crate) fn from_valid(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Parses either space/comma separated entries ("4 6 1 5 3 2") or, for
    /// lengths up to 9, the compact digit form ("461532").
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Permutation::empty());
        }
        let parse_err = |detail: &str| Error::PermutationParse(text.to_string(), detail.into());
        if text.contains(' ') || text.contains(',') {
            let mut entries = Vec::new();
            for tok in text.split(|c| c == ' ' || c == ',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let v: u32 = tok
                    .parse()
                    .map_err(|_| parse_err(&format!("bad entry {tok:?}")))?;
                entries.push(v);
            }
            Permutation::new(entries)
        } else if text.chars().all(|c| c.is_ascii_digit()) {
            if text.len() == 1 {
                // A single digit is unambiguous either way.
                return Permutation::new(vec![text.parse().map_err(|_| parse_err("bad digit"))?]);
            }
            // Compact form: one digit per entry, only sound for n <= 9.
            let entries: Vec<u32> = text.chars().map(|c| c.to_digit(10).unwrap()).collect();
            if entries.contains(&0) {
                return Err(parse_err("compact form uses digits 1-9"));
            }
            Permutation::new(entries)
        } else {
            Err(parse_err("expected digits separated by spaces or commas"))
        }
    }

    /// True when some subsequence of `self` is order-isomorphic to
    /// `pattern`. Decided by backtracking over pattern positions with
    /// order pruning: a partial choice is abandoned as soon as the chosen
    /// prefix violates the pattern's relative order.
    pub fn contains(&self, pattern: &Permutation) -> bool {
        let h = &self.entries;
        let p = &pattern.entries;
        if p.is_empty() {
            return true;
        }
        if p.len() > h.len() {
            return false;
        }
        // chosen[j] = host value matched to pattern position j
        let mut chosen: Vec<u32> = Vec::with_capacity(p.len());
        fn step(h: &[u32], p: &[u32], start: usize, chosen: &mut Vec<u32>) -> bool {
            let j = chosen.len();
            if j == p.len() {
                return true;
            }
            // Not enough host entries left for the remaining pattern.
            let last = h.len() - (p.len() - j - 1);
            for t in start..last {
                let v = h[t];
                if chosen
                    .iter()
                    .enumerate()
                    .all(|(q, &w)| (p[q] < p[j]) == (w < v))
                {
                    chosen.push(v);
                    if step(h, p, t + 1, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        step(h, p, 0, &mut chosen)
    }

    /// True when `self` contains none of the patterns in the set.
    pub fn avoids_all(&self, patterns: &PatternSet) -> bool {
        patterns.iter().all(|tau| !self.contains(tau))
    }

    /// Moves the largest entry one position to the left; `None` when it is
    /// already first.
    pub fn shift_max_left(&self) -> Option<Permutation> {
        let pos = self.max_position()?;
        if pos == 0 {
            return None;
        }
        let mut entries = self.entries.clone();
        entries.swap(pos, pos - 1);
        Some(Permutation { entries })
    }

    /// Moves the largest entry one position to the right; `None` when it is
    /// already last.
    pub fn shift_max_right(&self) -> Option<Permutation> {
        let pos = self.max_position()?;
        if pos == self.entries.len() - 1 {
            return None;
        }
        let mut entries = self.entries.clone();
        entries.swap(pos, pos + 1);
        Some(Permutation { entries })
    }

    /// 0-based position of the largest entry; `None` for the empty
    /// permutation.
    fn max_position(&self) -> Option<usize> {
        let n = self.entries.len() as u32;
        self.entries.iter().position(|&v| v == n)
    }

    /// Deletes the largest entry, keeping the relative order of the rest.
    pub fn remove_max(&self) -> Permutation {
        match self.max_position() {
            None => Permutation::empty(),
            Some(pos) => {
                let mut entries = self.entries.clone();
                entries.remove(pos);
                Permutation { entries }
            }
        }
    }

    /// Entries read right to left.
    pub fn reverse(&self) -> Permutation {
        let mut entries = self.entries.clone();
        entries.reverse();
        Permutation { entries }
    }

    /// Each entry v replaced by n+1-v.
    pub fn complement(&self) -> Permutation {
        let n = self.entries.len() as u32;
        Permutation {
            entries: self.entries.iter().map(|&v| n + 1 - v).collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "ε");
        }
        let mut first = true;
        for v in &self.entries {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl std::str::FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn p(text: &str) -> Permutation {
        Permutation::parse(text).unwrap()
    }

    /// Independent containment oracle: try every index subset of the host
    /// and compare relative orders directly. Exponential and obviously
    /// correct; used only to cross-check the backtracking search.
    fn contains_oracle(host: &Permutation, pattern: &Permutation) -> bool {
        let h = host.entries();
        let q = pattern.entries();
        if q.is_empty() {
            return true;
        }
        (0..h.len()).combinations(q.len()).any(|idx| {
            let sub: Vec<u32> = idx.iter().map(|&i| h[i]).collect();
            (0..q.len())
                .flat_map(|a| (a + 1..q.len()).map(move |b| (a, b)))
                .all(|(a, b)| (q[a] < q[b]) == (sub[a] < sub[b]))
        })
    }

    fn all_perms(n: usize) -> Vec<Permutation> {
        (1..=n as u32)
            .permutations(n)
            .map(|v| Permutation::new(v).unwrap())
            .collect()
    }

    #[test]
    fn containment_examples() {
        assert!(p("461532").contains(&p("312")));
        assert!(!p("24531").contains(&p("312")));
        assert!(p("24531").contains(&Permutation::empty()));
        assert!(p("312").contains(&p("312")));
        assert!(!p("12").contains(&p("312")));
    }

    #[test]
    fn avoids_all_examples() {
        // Oracle-checked: 3412 has no occurrence of 132, but 3 1 2 is an
        // occurrence of 312, and 3142 contains 132 via 1 4 2.
        let set_132 = PatternSet::from_strs(&["132"]).unwrap();
        let set_both = PatternSet::from_strs(&["312", "132"]).unwrap();
        assert!(contains_oracle(&p("3412"), &p("312")));
        assert!(!contains_oracle(&p("3412"), &p("132")));
        assert!(p("3412").avoids_all(&set_132));
        assert!(!p("3142").avoids_all(&set_132));
        assert!(!p("3412").avoids_all(&set_both));
        assert!(Permutation::empty().avoids_all(&set_both));
    }

    #[test]
    fn containment_matches_oracle_exhaustively() {
        for host in all_perms(5) {
            for pattern in all_perms(3) {
                assert_eq!(
                    host.contains(&pattern),
                    contains_oracle(&host, &pattern),
                    "host={host} pattern={pattern}"
                );
            }
        }
        for host in all_perms(4) {
            for pattern in all_perms(4) {
                assert_eq!(host.contains(&pattern), contains_oracle(&host, &pattern));
            }
        }
    }

    #[test]
    fn downset_under_max_removal() {
        // Removing the largest entry of a P-avoider leaves a P-avoider.
        let sets = [
            PatternSet::from_strs(&["312"]).unwrap(),
            PatternSet::from_strs(&["321", "3412"]).unwrap(),
            PatternSet::from_strs(&["312", "2431", "4321"]).unwrap(),
        ];
        for n in 0..=6 {
            for pi in all_perms(n) {
                for set in &sets {
                    if pi.avoids_all(set) {
                        assert!(pi.remove_max().avoids_all(set), "{pi} vs {set}");
                    }
                }
            }
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(p("3142").shift_max_left().unwrap(), p("3412"));
        assert_eq!(p("3142").shift_max_right().unwrap(), p("3124"));
        assert_eq!(p("3412").shift_max_right().unwrap(), p("3142"));
        assert_eq!(p("312").shift_max_left(), None);
        assert_eq!(p("123").shift_max_right(), None);
        assert_eq!(p("12").shift_max_left().unwrap(), p("21"));
        assert_eq!(Permutation::empty().shift_max_left(), None);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("4 6 1 5 3 2").entries(), &[4, 6, 1, 5, 3, 2]);
        assert_eq!(p("4,6,1,5,3,2"), p("461532"));
        assert_eq!(p("1"), Permutation::new(vec![1]).unwrap());
        assert_eq!(p("461532").to_string(), "4 6 1 5 3 2");
        assert_eq!(Permutation::empty().to_string(), "ε");
        let long = Permutation::new((1..=12).rev().collect()).unwrap();
        assert_eq!(Permutation::parse(&long.to_string()).unwrap(), long);
        assert!(Permutation::parse("403").is_err());
        assert!(Permutation::parse("1 1 2").is_err());
        assert!(Permutation::parse("2 3").is_err());
        assert!(Permutation::parse("x").is_err());
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (0..=max_n).prop_flat_map(|n| {
            Just((1..=n as u32).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::new(v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn contains_matches_oracle(host in arb_perm(7), pattern in arb_perm(4)) {
            prop_assert_eq!(host.contains(&pattern), contains_oracle(&host, &pattern));
        }

        // Pattern involvement is transitive.
        #[test]
        fn involvement_transitive(a in arb_perm(6), b in arb_perm(5), c in arb_perm(4)) {
            if a.contains(&b) && b.contains(&c) {
                prop_assert!(a.contains(&c));
            }
        }

        #[test]
        fn shifts_are_mutually_inverse(tau in arb_perm(7)) {
            if let Some(left) = tau.shift_max_left() {
                prop_assert_eq!(left.shift_max_right().unwrap(), tau.clone());
            }
            if let Some(right) = tau.shift_max_right() {
                prop_assert_eq!(right.shift_max_left().unwrap(), tau.clone());
            }
        }

        #[test]
        fn reverse_complement_are_involutions(tau in arb_perm(8)) {
            prop_assert_eq!(tau.reverse().reverse(), tau.clone());
            prop_assert_eq!(tau.complement().complement(), tau.clone());
        }

        #[test]
        fn display_parse_round_trip(tau in arb_perm(12)) {
            prop_assert_eq!(Permutation::parse(&tau.to_string()).unwrap(), tau);
        }
    }
}
