//! The catalog of forbidden-pattern sets with known succession functions.
//!
//! Concrete rows carry their sets literally; parameterized rows expand a
//! family at the requested parameters. The `verified` field records the
//! outcome of oracle verification (re-derived by the test suite, see
//! `verify`): every row passes except `gen-fib-c`, whose catalogued color
//! update is kept exactly as written and fails for p >= 3.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern_set::{instantiate_family, FamilyDescriptor, FamilyId, PatternSet};
use crate::sequences::{SequenceKind, SequenceRef};
use crate::succession::{Rule, RuleKind, SuccessionFunction};

/// Parameter values supplied when instantiating a row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    pub p: Option<u32>,
    pub m: Option<u32>,
}

impl Params {
    pub fn none() -> Self {
        Params::default()
    }

    pub fn p(p: u32) -> Self {
        Params { p: Some(p), m: None }
    }

    pub fn m(m: u32) -> Self {
        Params { p: None, m: Some(m) }
    }

    pub fn pm(p: u32, m: u32) -> Self {
        Params { p: Some(p), m: Some(m) }
    }

    pub fn is_none(&self) -> bool {
        self.p.is_none() && self.m.is_none()
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.p, self.m) {
            (None, None) => Ok(()),
            (Some(p), None) => write!(f, "(p={p})"),
            (None, Some(m)) => write!(f, "(m={m})"),
            (Some(p), Some(m)) => write!(f, "(p={p},m={m})"),
        }
    }
}

/// Adjudicated verification status of a catalog row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verified {
    /// Oracle verification passes on the documented parameter grid.
    Pass,
    /// The rule is kept exactly as catalogued but fails verification.
    FailsAsPrinted { detail: &'static str },
}

#[derive(Debug, Clone)]
enum Source {
    Concrete(&'static [&'static str]),
    Family(FamilyId),
}

/// One catalog row, possibly parameterized.
#[derive(Debug, Clone)]
pub struct CatalogRow {
    pub id: &'static str,
    /// Pattern set in symbolic form, for listings.
    pub shape: &'static str,
    source: Source,
    kind: RuleKind,
    sequence: Option<SequenceKind>,
    pub verified: Verified,
    pub note: &'static str,
}

impl CatalogRow {
    /// (uses p, uses m, min p, min m)
    pub fn param_spec(&self) -> (bool, bool, u32, u32) {
        match &self.source {
            Source::Concrete(_) => (false, false, 0, 0),
            Source::Family(id) => id.param_spec(),
        }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn sequence_kind(&self) -> Option<SequenceKind> {
        self.sequence
    }

    /// Binds parameters and builds the concrete entry.
    pub fn instantiate(&self, params: Params) -> Result<CatalogEntry> {
        let patterns = match &self.source {
            Source::Concrete(texts) => {
                if !params.is_none() {
                    return Err(Error::UnexpectedParam {
                        id: self.id.to_string(),
                        param: if params.p.is_some() { "p" } else { "m" },
                    });
                }
                PatternSet::from_strs(texts)?
            }
            Source::Family(id) => {
                let desc = FamilyDescriptor::new(*id, params.p, params.m)?;
                instantiate_family(&desc)?
            }
        };
        let succession = build_rule(self.id, params)?;
        let seq_param = params.m.or(params.p);
        let sequence = self.sequence.map(|kind| {
            SequenceRef::new(kind, if kind == SequenceKind::GenFib { seq_param } else { None })
        });
        let color_param = match self.id {
            "gen-padovan" => params.p,
            "padovan-bt" => Some(3),
            _ => None,
        };
        Ok(CatalogEntry {
            row_id: self.id.to_string(),
            params,
            patterns,
            succession,
            sequence,
            verified: self.verified,
            color_param,
        })
    }
}

fn build_rule(id: &str, params: Params) -> Result<SuccessionFunction> {
    let p = params.p;
    let m = params.m;
    Ok(match id {
        "pow2" => SuccessionFunction::regular(Rule::Pow2),
        "pell" => SuccessionFunction::regular(Rule::Pell),
        "pell-alt" => SuccessionFunction::regular(Rule::PellAlt),
        "fib-bisect-1" => SuccessionFunction::regular(Rule::FibBisect1),
        "fib-bisect-2" => SuccessionFunction::regular(Rule::FibBisect2),
        "fib-bisect-3" => SuccessionFunction::regular(Rule::FibBisect3),
        "catalan-312" => SuccessionFunction::regular(Rule::Catalan312),
        "catalan-321" => SuccessionFunction::regular(Rule::Catalan321),
        "schroeder" => SuccessionFunction::regular(Rule::Schroeder),
        "fibonacci" => SuccessionFunction::regular(Rule::Fibonacci),
        "av321-jump" => SuccessionFunction::regular(Rule::Av321Jump { m: m.unwrap() }),
        "av321-wedge" => SuccessionFunction::regular(Rule::Av321Wedge { p: p.unwrap() }),
        "av312-desc" => SuccessionFunction::regular(Rule::Av312Desc { p: p.unwrap() }),
        "av321-3412-jump" => {
            SuccessionFunction::regular(Rule::Av3213412Jump { m: m.unwrap() })
        }
        "gen-fibonacci" => SuccessionFunction::regular(Rule::GenFibonacci { m: m.unwrap() }),
        "wedge-jump-eq" => SuccessionFunction::regular(Rule::WedgeJumpEq { p: p.unwrap() }),
        "wedge-jump" => {
            SuccessionFunction::regular(Rule::WedgeJump { p: p.unwrap(), m: m.unwrap() })
        }
        "fib-bisect-c" => SuccessionFunction::colored(Rule::FibBisectColored, 1),
        "padovan-bt" => SuccessionFunction::colored(Rule::PadovanBt, 1),
        "gen-fib-c" => {
            let p = p.unwrap();
            SuccessionFunction::colored(Rule::GenFibColored { p }, p as i32 - 2)
        }
        "av321-4123-bump" => {
            let p = p.unwrap();
            SuccessionFunction::colored(Rule::Av3214123Bump { p }, p as i32 - 3)
        }
        "gen-padovan" => {
            SuccessionFunction::colored(Rule::GenPadovan { p: p.unwrap() }, 1)
        }
        other => return Err(Error::UnknownEntry(other.to_string())),
    })
}

/// A row bound to concrete parameters: the unit the generator, counter and
/// verifier work on.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    row_id: String,
    pub params: Params,
    pub patterns: PatternSet,
    pub succession: SuccessionFunction,
    pub sequence: Option<SequenceRef>,
    pub verified: Verified,
    /// Set for the rows whose colors are checkable against permutation
    /// structure (the suffix parameter of `structural_color`).
    pub color_param: Option<u32>,
}

impl CatalogEntry {
    /// An ad-hoc entry from an arbitrary pattern set and rule; used for
    /// inferred rules and for mutation tests.
    pub fn custom(id: &str, patterns: PatternSet, succession: SuccessionFunction) -> Self {
        CatalogEntry {
            row_id: id.to_string(),
            params: Params::none(),
            patterns,
            succession,
            sequence: None,
            verified: Verified::Pass,
            color_param: None,
        }
    }

    pub fn row_id(&self) -> &str {
        &self.row_id
    }

    /// Row id with bound parameters, e.g. `wedge-jump(p=3,m=4)`.
    pub fn display_id(&self) -> String {
        format!("{}{}", self.row_id, self.params)
    }
}

/// All catalog rows, regular rows first.
pub fn catalog() -> Vec<CatalogRow> {
    use RuleKind::*;
    use SequenceKind as Sq;
    let row = |id, shape, source, kind, sequence, verified, note| CatalogRow {
        id,
        shape,
        source,
        kind,
        sequence,
        verified,
        note,
    };
    let concrete = Source::Concrete;
    let fam = Source::Family;
    vec![
        row("pow2", "{321, 312}", concrete(&["321", "312"]), Regular, Some(Sq::Pow2), Verified::Pass, ""),
        row("pell", "{321, 3412, 4123}", concrete(&["321", "3412", "4123"]), Regular, Some(Sq::Pell), Verified::Pass, "wedge-jump at p=3, m=3"),
        row("pell-alt", "{312, 4321, 3421}", concrete(&["312", "4321", "3421"]), Regular, Some(Sq::Pell), Verified::Pass, ""),
        row("fib-bisect-1", "{321, 3412}", concrete(&["321", "3412"]), Regular, Some(Sq::FibBisect), Verified::Pass, "av321-wedge at p=3"),
        row("fib-bisect-2", "{321, 4123}", concrete(&["321", "4123"]), Regular, Some(Sq::FibBisect), Verified::Pass, "av321-jump at m=3"),
        row("fib-bisect-3", "{312, 4321}", concrete(&["312", "4321"]), Regular, Some(Sq::FibBisect), Verified::Pass, ""),
        row("catalan-312", "{312}", concrete(&["312"]), Regular, Some(Sq::Catalan), Verified::Pass, ""),
        row("catalan-321", "{321}", concrete(&["321"]), Regular, Some(Sq::Catalan), Verified::Pass, ""),
        row("schroeder", "{4123, 4213}", concrete(&["4123", "4213"]), Regular, Some(Sq::Schroeder), Verified::Pass, ""),
        row("fibonacci", "{321, 231, 312}", concrete(&["321", "231", "312"]), Regular, Some(Sq::Fibonacci), Verified::Pass, "wedge-jump at p=2, m=2"),
        row("av321-jump", "{321, jump(m)}", fam(FamilyId::Av321Jump), Regular, None, Verified::Pass, "fib-bisect-2 at m=3"),
        row("av321-wedge", "{321, wedge(p)}", fam(FamilyId::Av321Wedge), Regular, None, Verified::Pass, "fib-bisect-1 at p=3"),
        row("av312-desc", "{312, desc(p)}", fam(FamilyId::Av312Desc), Regular, None, Verified::Pass, ""),
        row("av321-3412-jump", "{321, 3412, jump(m)}", fam(FamilyId::Av3213412Jump), Regular, None, Verified::Pass, "pell at m=3"),
        row("gen-fibonacci", "{321, 231, jump(m)}", fam(FamilyId::GenFibonacci), Regular, Some(Sq::GenFib), Verified::Pass, "fibonacci at m=2"),
        row("wedge-jump-eq", "{321, wedge(p), jump(p)}", fam(FamilyId::WedgeJumpEq), Regular, None, Verified::Pass, ""),
        row("wedge-jump", "{321, wedge(p), jump(m)}", fam(FamilyId::WedgeJump), Regular, None, Verified::Pass, "pell at p=m=3"),
        row("fib-bisect-c", "{312, 2431}", concrete(&["312", "2431"]), Colored, Some(Sq::FibBisect), Verified::Pass, ""),
        row("padovan-bt", "{312, 2431, 4321}", concrete(&["312", "2431", "4321"]), Colored, Some(Sq::PadovanBt), Verified::Pass, "gen-padovan at p=3"),
        row(
            "gen-fib-c",
            "{321, 312, lift(p)}",
            fam(FamilyId::GenFibColored),
            Colored,
            Some(Sq::GenFib),
            Verified::FailsAsPrinted {
                detail: "valid only at p=2; for p>=3 the catalogued color update c-1 leaves \
                         the color set {0..p-2} (first failure: label (2,0), site 2 -> color -1)",
            },
            "",
        ),
        row("av321-4123-bump", "{321, 4123, bump(p)}", fam(FamilyId::Av3214123Bump), Colored, None, Verified::Pass, "same set as pell at p=3"),
        row("gen-padovan", "{312, 2431, desc(p)}", fam(FamilyId::GenPadovan), Colored, None, Verified::Pass, "padovan-bt at p=3"),
    ]
}

/// Looks a row up by id.
pub fn row(id: &str) -> Result<CatalogRow> {
    catalog()
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))
}

/// Looks a row up and instantiates it in one step.
pub fn entry(id: &str, params: Params) -> Result<CatalogEntry> {
    let r = row(id)?;
    let (uses_p, uses_m, _, _) = r.param_spec();
    if uses_p && params.p.is_none() {
        return Err(Error::MissingParam { id: id.to_string(), param: "p" });
    }
    if uses_m && params.m.is_none() {
        return Err(Error::MissingParam { id: id.to_string(), param: "m" });
    }
    r.instantiate(params)
}
