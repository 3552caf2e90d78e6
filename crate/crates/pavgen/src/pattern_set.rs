//! Sets of forbidden patterns, parameterized families, the right-justified
//! decision procedure, and the reverse/complement transforms.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A finite set of forbidden patterns. Kept sorted and deduplicated;
/// never contains the empty permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<Permutation>,
    origin: Option<FamilyDescriptor>,
}

impl PatternSet {
    pub fn empty() -> Self {
        PatternSet { patterns: Vec::new(), origin: None }
    }

    pub fn new(patterns: Vec<Permutation>) -> Result<Self> {
        if patterns.iter().any(|p| p.is_empty()) {
            return Err(Error::InvalidPatternSet(
                "the empty permutation cannot be a forbidden pattern".into(),
            ));
        }
        let mut patterns = patterns;
        patterns.sort_by(|a, b| (a.len(), a.entries()).cmp(&(b.len(), b.entries())));
        patterns.dedup();
        Ok(PatternSet { patterns, origin: None })
    }

    /// Grammar: patterns separated by ';', each pattern either space/comma
    /// separated entries or compact digits (single-digit entries only).
    pub fn parse(text: &str) -> Result<Self> {
        let mut patterns = Vec::new();
        for tok in text.split(';') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            patterns.push(Permutation::parse(tok)?);
        }
        if patterns.is_empty() {
            return Err(Error::InvalidPatternSet(format!(
                "no patterns found in {text:?}"
            )));
        }
        PatternSet::new(patterns)
    }

    pub fn from_strs(texts: &[&str]) -> Result<Self> {
        let patterns = texts
            .iter()
            .map(|t| Permutation::parse(t))
            .collect::<Result<Vec<_>>>()?;
        PatternSet::new(patterns)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.patterns.iter()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }

    pub fn origin(&self) -> Option<&FamilyDescriptor> {
        self.origin.as_ref()
    }

    /// Shortest pattern length in the set, if any.
    pub fn min_pattern_len(&self) -> Option<usize> {
        self.patterns.iter().map(|p| p.len()).min()
    }

    /// Decides whether the set is right-justified: every pattern whose
    /// largest entry can still move left yields, after that move, a
    /// permutation that contains some pattern of the set. On failure the
    /// witness is the offending pattern.
    ///
    /// When all patterns share one length, containment for the shifted
    /// pattern degenerates to set membership, which is used as a fast path.
    pub fn is_right_justified(&self) -> RightJustified {
        let same_len = self
            .patterns
            .windows(2)
            .all(|w| w[0].len() == w[1].len());
        for tau in &self.patterns {
            if let Some(left) = tau.shift_max_left() {
                let hits = if same_len {
                    self.patterns.contains(&left)
                } else {
                    self.patterns.iter().any(|sigma| left.contains(sigma))
                };
                if !hits {
                    return RightJustified::No { witness: tau.clone() };
                }
            }
        }
        RightJustified::Yes
    }

    /// Each pattern read right to left.
    pub fn reverse_set(&self) -> PatternSet {
        PatternSet {
            patterns: {
                let mut v: Vec<_> = self.patterns.iter().map(|p| p.reverse()).collect();
                v.sort_by(|a, b| (a.len(), a.entries()).cmp(&(b.len(), b.entries())));
                v
            },
            origin: None,
        }
    }

    /// Each pattern complemented (v -> k+1-v for a length-k pattern).
    pub fn complement_set(&self) -> PatternSet {
        PatternSet {
            patterns: {
                let mut v: Vec<_> = self.patterns.iter().map(|p| p.complement()).collect();
                v.sort_by(|a, b| (a.len(), a.entries()).cmp(&(b.len(), b.entries())));
                v
            },
            origin: None,
        }
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, p) in self.patterns.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            if p.len() <= 9 {
                for v in p.entries() {
                    write!(f, "{v}")?;
                }
            } else {
                write!(f, "{p}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Outcome of the right-justified decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RightJustified {
    Yes,
    No { witness: Permutation },
}

impl RightJustified {
    pub fn is_yes(&self) -> bool {
        matches!(self, RightJustified::Yes)
    }
}

/// Variable-length pattern shapes used by the parameterized families.
/// Each is a permutation of length p+1 (or m+1):
///
/// - jump(m)  = (m+1) 1 2 .. m
/// - wedge(p) = p (p+1) 1 2 .. (p-1)
/// - desc(p)  = (p+1) p .. 2 1
/// - lift(p)  = 2 3 .. (p+1) 1
/// - bump(p)  = 3 4 .. (p+1) 1 2
pub fn jump(m: u32) -> Permutation {
    let mut v = vec![m + 1];
    v.extend(1..=m);
    Permutation::from_valid(v)
}

pub fn wedge(p: u32) -> Permutation {
    let mut v = vec![p, p + 1];
    v.extend(1..=p - 1);
    Permutation::from_valid(v)
}

pub fn desc(p: u32) -> Permutation {
    Permutation::from_valid((1..=p + 1).rev().collect())
}

pub fn lift(p: u32) -> Permutation {
    let mut v: Vec<u32> = (2..=p + 1).collect();
    v.push(1);
    Permutation::from_valid(v)
}

pub fn bump(p: u32) -> Permutation {
    let mut v: Vec<u32> = (3..=p + 1).collect();
    v.push(1);
    v.push(2);
    Permutation::from_valid(v)
}

/// Identifier of a parameterized forbidden-pattern family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    /// {321, wedge(p), jump(m)}, p,m >= 2
    WedgeJump,
    /// {321, wedge(p), jump(p)}, p >= 2
    WedgeJumpEq,
    /// {321, jump(m)}, m >= 2
    Av321Jump,
    /// {321, wedge(p)}, p >= 2
    Av321Wedge,
    /// {312, desc(p)}, p >= 2
    Av312Desc,
    /// {321, 3412, jump(m)}, m >= 2
    Av3213412Jump,
    /// {321, 231, jump(m)}, m >= 2
    GenFibonacci,
    /// {312, 2431, desc(p)}, p >= 2 (colored)
    GenPadovan,
    /// {321, 312, lift(p)}, p >= 2 (colored)
    GenFibColored,
    /// {321, 4123, bump(p)}, p >= 3 (colored)
    Av3214123Bump,
}

impl FamilyId {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyId::WedgeJump => "wedge-jump",
            FamilyId::WedgeJumpEq => "wedge-jump-eq",
            FamilyId::Av321Jump => "av321-jump",
            FamilyId::Av321Wedge => "av321-wedge",
            FamilyId::Av312Desc => "av312-desc",
            FamilyId::Av3213412Jump => "av321-3412-jump",
            FamilyId::GenFibonacci => "gen-fibonacci",
            FamilyId::GenPadovan => "gen-padovan",
            FamilyId::GenFibColored => "gen-fib-c",
            FamilyId::Av3214123Bump => "av321-4123-bump",
        }
    }

    /// (uses p, uses m, minimum p, minimum m)
    pub fn param_spec(&self) -> (bool, bool, u32, u32) {
        match self {
            FamilyId::WedgeJump => (true, true, 2, 2),
            FamilyId::WedgeJumpEq => (true, false, 2, 0),
            FamilyId::Av321Jump => (false, true, 0, 2),
            FamilyId::Av321Wedge => (true, false, 2, 0),
            FamilyId::Av312Desc => (true, false, 2, 0),
            FamilyId::Av3213412Jump => (false, true, 0, 2),
            FamilyId::GenFibonacci => (false, true, 0, 2),
            FamilyId::GenPadovan => (true, false, 2, 0),
            FamilyId::GenFibColored => (true, false, 2, 0),
            FamilyId::Av3214123Bump => (true, false, 3, 0),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A family together with bound parameter values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyDescriptor {
    pub id: FamilyId,
    pub p: Option<u32>,
    pub m: Option<u32>,
}

impl FamilyDescriptor {
    pub fn new(id: FamilyId, p: Option<u32>, m: Option<u32>) -> Result<Self> {
        let (uses_p, uses_m, min_p, min_m) = id.param_spec();
        let err = |detail: String| Error::ParamOutOfRange {
            family: id.as_str().to_string(),
            detail,
        };
        match (uses_p, p) {
            (true, None) => return Err(err("parameter p is required".into())),
            (true, Some(v)) if v < min_p => {
                return Err(err(format!("p = {v} but the family needs p >= {min_p}")))
            }
            (false, Some(_)) => return Err(err("the family takes no parameter p".into())),
            _ => {}
        }
        match (uses_m, m) {
            (true, None) => return Err(err("parameter m is required".into())),
            (true, Some(v)) if v < min_m => {
                return Err(err(format!("m = {v} but the family needs m >= {min_m}")))
            }
            (false, Some(_)) => return Err(err("the family takes no parameter m".into())),
            _ => {}
        }
        Ok(FamilyDescriptor { id, p, m })
    }
}

/// Expands a family descriptor into its concrete pattern set. Duplicate
/// patterns arising at small parameters are deduplicated; a pattern that
/// contains another pattern of the set is kept as written.
pub fn instantiate_family(desc: &FamilyDescriptor) -> Result<PatternSet> {
    let p = desc.p;
    let m = desc.m;
    let patterns = match desc.id {
        FamilyId::WedgeJump => vec![
            Permutation::parse("321")?,
            wedge(p.unwrap()),
            jump(m.unwrap()),
        ],
        FamilyId::WedgeJumpEq => vec![
            Permutation::parse("321")?,
            wedge(p.unwrap()),
            jump(p.unwrap()),
        ],
        FamilyId::Av321Jump => vec![Permutation::parse("321")?, jump(m.unwrap())],
        FamilyId::Av321Wedge => vec![Permutation::parse("321")?, wedge(p.unwrap())],
        FamilyId::Av312Desc => vec![Permutation::parse("312")?, desc(p.unwrap())],
        FamilyId::Av3213412Jump => vec![
            Permutation::parse("321")?,
            Permutation::parse("3412")?,
            jump(m.unwrap()),
        ],
        FamilyId::GenFibonacci => vec![
            Permutation::parse("321")?,
            Permutation::parse("231")?,
            jump(m.unwrap()),
        ],
        FamilyId::GenPadovan => vec![
            Permutation::parse("312")?,
            Permutation::parse("2431")?,
            desc(p.unwrap()),
        ],
        FamilyId::GenFibColored => vec![
            Permutation::parse("321")?,
            Permutation::parse("312")?,
            lift(p.unwrap()),
        ],
        FamilyId::Av3214123Bump => vec![
            Permutation::parse("321")?,
            Permutation::parse("4123")?,
            bump(p.unwrap()),
        ],
    };
    let mut set = PatternSet::new(patterns)?;
    set.origin = Some(*desc);
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn set(texts: &[&str]) -> PatternSet {
        PatternSet::from_strs(texts).unwrap()
    }

    #[test]
    fn right_justified_examples() {
        assert_eq!(
            set(&["132"]).is_right_justified(),
            RightJustified::No { witness: Permutation::parse("132").unwrap() }
        );
        assert!(set(&["312", "132"]).is_right_justified().is_yes());
        assert!(!set(&["312", "123"]).is_right_justified().is_yes());
        assert!(set(&["312"]).is_right_justified().is_yes());
        // Mixed lengths take the general containment route.
        assert!(set(&["312", "2431"]).is_right_justified().is_yes());
        assert!(set(&["321", "3412"]).is_right_justified().is_yes());
    }

    #[test]
    fn singletons_are_right_justified_iff_max_first() {
        for n in 1..=4usize {
            for v in (1..=n as u32).permutations(n) {
                let tau = Permutation::new(v).unwrap();
                let expected = tau.entries()[0] == n as u32;
                let singleton = PatternSet::new(vec![tau.clone()]).unwrap();
                assert_eq!(
                    singleton.is_right_justified().is_yes(),
                    expected,
                    "tau = {tau}"
                );
            }
        }
    }

    #[test]
    fn right_justified_sets_are_closed_under_max_right_shift() {
        // Definition check, exhaustive over small lengths.
        let sets = [
            set(&["312", "132"]),
            set(&["312", "2431", "4321"]),
            set(&["321", "3412", "4123"]),
            set(&["4123", "4213"]),
        ];
        for s in &sets {
            assert!(s.is_right_justified().is_yes());
            for n in 1..=6usize {
                for v in (1..=n as u32).permutations(n) {
                    let alpha = Permutation::new(v).unwrap();
                    if alpha.avoids_all(s) {
                        if let Some(right) = alpha.shift_max_right() {
                            assert!(right.avoids_all(s), "{alpha} -> {right} left {s}");
                        }
                    }
                }
            }
        }
        // And the classic counterexample for a non-right-justified set.
        let bad = set(&["132"]);
        let alpha = Permutation::parse("3412").unwrap();
        assert!(alpha.avoids_all(&bad));
        assert!(!alpha.shift_max_right().unwrap().avoids_all(&bad));
    }

    #[test]
    fn family_instances() {
        let pell = instantiate_family(
            &FamilyDescriptor::new(FamilyId::WedgeJump, Some(3), Some(3)).unwrap(),
        )
        .unwrap();
        assert_eq!(pell, set(&["321", "3412", "4123"]));

        let padovan = instantiate_family(
            &FamilyDescriptor::new(FamilyId::GenPadovan, Some(3), None).unwrap(),
        )
        .unwrap();
        assert_eq!(padovan, set(&["312", "2431", "4321"]));

        let fib = instantiate_family(
            &FamilyDescriptor::new(FamilyId::WedgeJump, Some(2), Some(2)).unwrap(),
        )
        .unwrap();
        assert_eq!(fib, set(&["321", "231", "312"]));

        assert!(FamilyDescriptor::new(FamilyId::WedgeJump, Some(1), Some(3)).is_err());
        assert!(FamilyDescriptor::new(FamilyId::WedgeJump, Some(3), None).is_err());
        assert!(FamilyDescriptor::new(FamilyId::Av312Desc, Some(2), Some(2)).is_err());
        assert!(FamilyDescriptor::new(FamilyId::Av3214123Bump, Some(2), None).is_err());
    }

    #[test]
    fn shape_builders() {
        assert_eq!(jump(3), Permutation::parse("4123").unwrap());
        assert_eq!(wedge(3), Permutation::parse("3412").unwrap());
        assert_eq!(wedge(2), Permutation::parse("231").unwrap());
        assert_eq!(desc(3), Permutation::parse("4321").unwrap());
        assert_eq!(lift(3), Permutation::parse("2341").unwrap());
        assert_eq!(bump(3), Permutation::parse("3412").unwrap());
        assert_eq!(bump(4), Permutation::parse("34512").unwrap());
    }

    #[test]
    fn reverse_and_complement() {
        assert_eq!(set(&["312"]).reverse_set(), set(&["213"]));
        assert_eq!(set(&["312"]).complement_set(), set(&["132"]));
        assert_eq!(set(&["321"]).complement_set().reverse_set(), set(&["123"]));
        let s = set(&["312", "2431", "4321"]);
        assert_eq!(s.reverse_set().reverse_set(), s);
        assert_eq!(s.complement_set().complement_set(), s);
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(PatternSet::parse("312;132").unwrap(), set(&["312", "132"]));
        assert_eq!(
            PatternSet::parse("3,1,2 ; 1 3 2").unwrap(),
            set(&["312", "132"])
        );
        assert_eq!(
            PatternSet::parse("10 9 8 7 6 5 4 3 2 1").unwrap().patterns()[0].len(),
            10
        );
        assert!(PatternSet::parse("").is_err());
        assert!(PatternSet::parse("312;;").is_ok()); // empty fragments skipped
        assert!(PatternSet::parse("312;321x").is_err());
        // Duplicates collapse.
        assert_eq!(PatternSet::parse("312;312").unwrap().len(), 1);
    }

    #[test]
    fn display_is_stable() {
        assert_eq!(set(&["4123", "321", "312"]).to_string(), "{312, 321, 4123}");
    }
}
