//! Command-line front end. See README for the full interface.

use std::io::{self, BufWriter, Write};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::catalog::{self, CatalogEntry, Params};
use crate::error::{Error, Result};
use crate::generator::{self, Transform};
use crate::pattern_set::PatternSet;
use crate::perm::Permutation;
use crate::succession::RuleKind;
use crate::verify::{self, Inference, NotRegularWitness};

/// Default oracle depth when --max-n is omitted; overridable through the
/// environment.
pub const ORACLE_DEPTH_ENV: &str = "PAVGEN_MAX_ORACLE_N";
const ORACLE_DEPTH_DEFAULT: usize = 7;
const ORACLE_DEPTH_WARN: usize = 7;
const ORACLE_DEPTH_HARD_CAP: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "pavgen",
    about = "Generate, count and verify pattern-avoiding permutations via succession rules",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct EntryArgs {
    /// Catalog entry id (see `pavgen list`).
    #[arg(long)]
    entry: String,
    /// Family parameters, e.g. --params p=3,m=4.
    #[arg(long, value_parser = parse_params)]
    params: Option<Params>,
}

impl EntryArgs {
    fn resolve(&self) -> Result<CatalogEntry> {
        catalog::entry(&self.entry, self.params.unwrap_or_default())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the catalog: id, patterns, counting sequence, verified flag.
    List {
        /// Emit the machine-readable catalog, including each rule as a
        /// decision table over its reachable labels.
        #[arg(long)]
        json: bool,
        /// Parameters used to instantiate the parameterized rows for
        /// --json (default p=3, m=3).
        #[arg(long, value_parser = parse_params)]
        params: Option<Params>,
    },
    /// Stream S_n(P) for a catalog entry or an explicit pattern set.
    Generate {
        #[arg(long)]
        entry: Option<String>,
        /// Explicit pattern set, e.g. "312;2431" (always brute force).
        #[arg(long)]
        patterns: Option<String>,
        #[arg(long, value_parser = parse_params)]
        params: Option<Params>,
        #[arg(long)]
        n: usize,
        /// Output format: lines (default) or json.
        #[arg(long, default_value = "lines")]
        format: String,
        /// Emit the reverse or complement of each permutation.
        #[arg(long)]
        transform: Option<String>,
        /// Force brute-force generation for a catalog entry.
        #[arg(long)]
        oracle: bool,
    },
    /// Count S_n(P) exactly via the label multiset.
    Count {
        #[command(flatten)]
        entry: EntryArgs,
        #[arg(long)]
        n: usize,
    },
    /// Decide right-justifiedness of a pattern set.
    CheckRj {
        #[arg(long)]
        patterns: String,
    },
    /// Compare an entry against the brute-force oracle.
    Verify {
        #[command(flatten)]
        entry: EntryArgs,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Infer an empirical succession table for a pattern set.
    Infer {
        #[arg(long)]
        patterns: String,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Print the labeled generating tree.
    Tree {
        #[command(flatten)]
        entry: EntryArgs,
        #[arg(long)]
        depth: usize,
    },
    /// Report amortized generation cost.
    Bench {
        #[command(flatten)]
        entry: EntryArgs,
        #[arg(long)]
        n: usize,
    },
}

fn parse_params(text: &str) -> std::result::Result<Params, String> {
    let mut params = Params::default();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let value: u32 = value
            .trim()
            .parse()
            .map_err(|_| format!("bad value in {part:?}"))?;
        match key.trim() {
            "p" => params.p = Some(value),
            "m" => params.m = Some(value),
            other => return Err(format!("unknown parameter {other:?} (expected p or m)")),
        }
    }
    Ok(params)
}

/// Entry point: returns the process exit code (0 ok, 1 verification
/// failure, 2 usage error).
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match cli.command {
        Command::List { json, params } => {
            if json {
                list_json(&mut out, params.unwrap_or(Params::pm(3, 3)))?
            } else {
                list_text(&mut out)?
            }
        }
        Command::Generate { entry, patterns, params, n, format, transform, oracle } => {
            let transform = transform.as_deref().map(Transform::parse).transpose()?;
            generate_cmd(&mut out, entry, patterns, params, n, &format, transform, oracle)?
        }
        Command::Count { entry, n } => {
            let e = entry.resolve()?;
            writeln!(&mut out, "{}", generator::count(&e, n)?).map_err(io_err)?;
            0
        }
        Command::CheckRj { patterns } => {
            let set = PatternSet::parse(&patterns)?;
            match set.is_right_justified() {
                crate::pattern_set::RightJustified::Yes => {
                    writeln!(&mut out, "right-justified").map_err(io_err)?;
                }
                crate::pattern_set::RightJustified::No { witness } => {
                    writeln!(&mut out, "not right-justified; witness {witness}")
                        .map_err(io_err)?;
                }
            }
            0
        }
        Command::Verify { entry, max_n, json } => {
            let e = entry.resolve()?;
            let max_n = resolve_oracle_depth(max_n)?;
            let report = verify::verify_entry(&e, max_n);
            if json {
                writeln!(&mut out, "{}", serde_json::to_string_pretty(&report).unwrap())
                    .map_err(io_err)?;
            } else {
                writeln!(&mut out, "entry: {}", report.entry).map_err(io_err)?;
                writeln!(&mut out, "levels: {:?}", report.oracle_level_sizes).map_err(io_err)?;
                writeln!(&mut out, "status: {}", render_status(&report.status))
                    .map_err(io_err)?;
            }
            if report.passed() {
                0
            } else {
                1
            }
        }
        Command::Infer { patterns, max_n } => {
            let set = PatternSet::parse(&patterns)?;
            let max_n = resolve_oracle_depth(max_n)?;
            match verify::infer_regular(&set, max_n) {
                Inference::Regular(table) => {
                    writeln!(&mut out, "regular (empirical up to n={max_n})").map_err(io_err)?;
                    for (&(i, k), &next) in &table.observations {
                        writeln!(&mut out, "  (i={i}, k={k}) -> {next}").map_err(io_err)?;
                    }
                }
                Inference::NotRightJustified { witness } => {
                    writeln!(&mut out, "not right-justified; witness {witness}")
                        .map_err(io_err)?;
                }
                Inference::NotRegular(NotRegularWitness::InactiveFirstSite { perm }) => {
                    writeln!(
                        &mut out,
                        "not regular: first site of {perm} is not active"
                    )
                    .map_err(io_err)?;
                }
                Inference::NotRegular(NotRegularWitness::Conflict { i, k, first, second }) => {
                    writeln!(
                        &mut out,
                        "not regular: at (i={i}, k={k}) {} gives {} but {} gives {}",
                        first.0, first.1, second.0, second.1
                    )
                    .map_err(io_err)?;
                }
            }
            0
        }
        Command::Tree { entry, depth } => {
            let e = entry.resolve()?;
            let tree = generator::generate_tree(&e, depth)?;
            write!(&mut out, "{}", generator::render_tree(&tree)).map_err(io_err)?;
            0
        }
        Command::Bench { entry, n } => {
            let e = entry.resolve()?;
            let report = generator::bench(&e, n, Duration::from_millis(200))?;
            let fmt = |v: Option<f64>| {
                v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "n/a (nothing emitted)".into())
            };
            writeln!(&mut out, "entry: {}", report.entry).map_err(io_err)?;
            writeln!(&mut out, "n: {}", report.n).map_err(io_err)?;
            writeln!(&mut out, "emitted: {}", report.counters.emitted).map_err(io_err)?;
            writeln!(&mut out, "runs: {}", report.runs).map_err(io_err)?;
            writeln!(&mut out, "calls/emitted: {}", fmt(report.calls_per_emitted))
                .map_err(io_err)?;
            writeln!(
                &mut out,
                "transpositions/emitted: {}",
                fmt(report.transpositions_per_emitted)
            )
            .map_err(io_err)?;
            writeln!(&mut out, "ns/emitted: {}", fmt(report.nanos_per_emitted))
                .map_err(io_err)?;
            writeln!(
                &mut out,
                "cat-guarantee: {}",
                if report.cat_exclusion {
                    "not guaranteed (a pattern ends with max, max-1)"
                } else {
                    "applies"
                }
            )
            .map_err(io_err)?;
            0
        }
    };
    out.flush().map_err(io_err)?;
    Ok(code)
}

fn io_err(err: io::Error) -> Error {
    Error::Usage(format!("i/o error: {err}"))
}

fn render_status(status: &verify::VerifyStatus) -> String {
    use verify::VerifyStatus::*;
    match status {
        Pass => "pass".into(),
        CountMismatch { n, expected, actual } => {
            format!("count-mismatch at n={n}: oracle {expected}, generator {actual}")
        }
        SetMismatch { n, missing, extra } => format!(
            "set-mismatch at n={n}: missing {:?}, extra {:?}",
            missing, extra
        ),
        LabelMismatch { n, perm, expected, actual } => {
            format!("label-mismatch at n={n} on {perm}: expected {expected}, got {actual}")
        }
    }
}

fn resolve_oracle_depth(requested: Option<usize>) -> Result<usize> {
    let depth = match requested {
        Some(d) => d,
        None => match std::env::var(ORACLE_DEPTH_ENV) {
            Ok(raw) => raw.parse().map_err(|_| {
                Error::Usage(format!("{ORACLE_DEPTH_ENV} must be an integer, got {raw:?}"))
            })?,
            Err(_) => ORACLE_DEPTH_DEFAULT,
        },
    };
    if depth > ORACLE_DEPTH_HARD_CAP {
        return Err(Error::OracleDepthExceeded {
            requested: depth,
            cap: ORACLE_DEPTH_HARD_CAP,
        });
    }
    if depth > ORACLE_DEPTH_WARN {
        eprintln!(
            "warning: oracle depth {depth} is exponential in cost; this may take a while"
        );
    }
    Ok(depth)
}

fn list_text<W: Write>(out: &mut W) -> Result<i32> {
    for row in catalog::catalog() {
        let seq = row
            .sequence_kind()
            .map(|kind| {
                let sref = crate::sequences::SequenceRef::new(
                    kind,
                    if kind == crate::sequences::SequenceKind::GenFib { Some(2) } else { None },
                );
                match (kind, sref.oeis_id) {
                    (crate::sequences::SequenceKind::GenFib, _) => {
                        "generalized Fibonacci".to_string()
                    }
                    (_, Some(id)) => format!("{} [{id}]", sref.name),
                    (_, None) => sref.name,
                }
            })
            .unwrap_or_else(|| "-".into());
        let verified = match row.verified {
            catalog::Verified::Pass => "verified".to_string(),
            catalog::Verified::FailsAsPrinted { .. } => "FAILS AS CATALOGUED".to_string(),
        };
        let kind = match row.kind() {
            RuleKind::Regular => "regular",
            RuleKind::Colored => "colored",
        };
        writeln!(
            out,
            "{:<16} {:<9} {:<28} {:<42} {}",
            row.id, kind, row.shape, seq, verified
        )
        .map_err(io_err)?;
        if !row.note.is_empty() {
            writeln!(out, "{:<16} {:<9} note: {}", "", "", row.note).map_err(io_err)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct JsonLabel {
    k: u32,
    c: i32,
    children: Vec<(u32, i32)>,
}

#[derive(Serialize)]
struct JsonEntry {
    id: String,
    display_id: String,
    kind: RuleKind,
    patterns: Vec<String>,
    params: Params,
    sequence: Option<crate::sequences::SequenceRef>,
    sequence_terms: Option<Vec<String>>,
    verified: catalog::Verified,
    rule: String,
    /// Decision table over the labels reachable within `table_depth`
    /// insertions; absent when the rule is invalid.
    decision_table: Option<Vec<JsonLabel>>,
    table_depth: usize,
    rule_error: Option<String>,
}

fn list_json<W: Write>(out: &mut W, params: Params) -> Result<i32> {
    const TABLE_DEPTH: usize = 8;
    const TERMS: usize = 12;
    let mut entries = Vec::new();
    for row in catalog::catalog() {
        let (uses_p, uses_m, min_p, min_m) = row.param_spec();
        let bound = Params {
            p: uses_p.then(|| params.p.unwrap_or(3).max(min_p)),
            m: uses_m.then(|| params.m.unwrap_or(3).max(min_m)),
        };
        let e = row.instantiate(bound)?;
        let (decision_table, rule_error) = match e.succession.explore(TABLE_DEPTH) {
            Ok(graph) => (
                Some(
                    graph
                        .transitions
                        .iter()
                        .map(|(label, children)| JsonLabel {
                            k: label.k,
                            c: label.c,
                            children: children.iter().map(|ch| (ch.k, ch.c)).collect(),
                        })
                        .collect(),
                ),
                None,
            ),
            Err(err) => (None, Some(err.to_string())),
        };
        entries.push(JsonEntry {
            id: row.id.to_string(),
            display_id: e.display_id(),
            kind: row.kind(),
            patterns: e.patterns.iter().map(|p| p.to_string()).collect(),
            params: bound,
            sequence_terms: e
                .sequence
                .as_ref()
                .map(|s| s.terms(TERMS).iter().map(|t| t.to_string()).collect()),
            sequence: e.sequence,
            verified: e.verified,
            rule: e.succession.describe(),
            decision_table,
            table_depth: TABLE_DEPTH,
            rule_error,
        });
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&entries).unwrap()).map_err(io_err)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn generate_cmd<W: Write>(
    out: &mut W,
    entry: Option<String>,
    patterns: Option<String>,
    params: Option<Params>,
    n: usize,
    format: &str,
    transform: Option<Transform>,
    oracle: bool,
) -> Result<i32> {
    let json = match format {
        "lines" => false,
        "json" => true,
        other => {
            return Err(Error::Usage(format!(
                "unknown --format {other:?} (expected lines or json)"
            )))
        }
    };

    let mut first = true;
    let mut write_perm = |entries: &[u32], out: &mut W| -> io::Result<()> {
        if json {
            if first {
                out.write_all(b"[")?;
                first = false;
            } else {
                out.write_all(b",\n")?;
            }
            write!(out, "[{}]", entries.iter().map(|v| v.to_string()).join(","))
        } else {
            if !entries.is_empty() {
                write!(out, "{}", entries.iter().map(|v| v.to_string()).join(" "))?;
            } else {
                write!(out, "ε")?;
            }
            writeln!(out)
        }
    };

    match (entry, patterns) {
        (Some(id), None) => {
            let e = catalog::entry(&id, params.unwrap_or_default())?;
            if oracle {
                oracle_stream(&e.patterns, n, transform, &mut write_perm, out)?;
            } else {
                let run = |perm: &[u32]| {
                    write_perm(perm, out).expect("stream write");
                };
                match transform {
                    None => generator::generate(&e, n, run)?,
                    Some(t) => generator::generate_transformed(&e, n, t, run)?,
                };
            }
        }
        (None, Some(text)) => {
            if n > 12 {
                return Err(Error::Usage(
                    "brute-force generation for explicit pattern sets is capped at n = 12".into(),
                ));
            }
            let set = PatternSet::parse(&text)?;
            oracle_stream(&set, n, transform, &mut write_perm, out)?;
        }
        (Some(_), Some(_)) => {
            return Err(Error::Usage("use either --entry or --patterns, not both".into()))
        }
        (None, None) => {
            return Err(Error::Usage("one of --entry or --patterns is required".into()))
        }
    }
    if json {
        if first {
            write!(out, "[").map_err(io_err)?;
        }
        writeln!(out, "]").map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;
    Ok(0)
}

use itertools::Itertools;

fn oracle_stream<W: Write>(
    set: &PatternSet,
    n: usize,
    transform: Option<Transform>,
    write_perm: &mut impl FnMut(&[u32], &mut W) -> io::Result<()>,
    out: &mut W,
) -> Result<()> {
    for perm in verify::oracle_generate(n, set) {
        let entries: Vec<u32> = match transform {
            None => perm.entries().to_vec(),
            Some(Transform::Reverse) => perm.reverse().entries().to_vec(),
            Some(Transform::Complement) => perm.complement().entries().to_vec(),
        };
        write_perm(&entries, out).map_err(io_err)?;
    }
    Ok(())
}
