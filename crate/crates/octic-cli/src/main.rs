use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use octic::check::{corpus_check, CheckOptions, Scope};
use octic::combinatorics::canonical_form;
use octic::combinatorics::census::{census, derive, euler_characteristic};
use octic::combinatorics::subsets::digits;
use octic::corpus;
use octic::enumerate::{enumerate_classes, reachability};
use octic::family::{default_samples, equivalences, special_values, verify_parameter_map};
use octic::fibration::{fiber_model, kummer_partitions, match_fibers};
use octic::report::{parse_param_point, report, ReportOptions};
use octic::{Arrangement, Perm};

#[derive(Parser)]
#[command(
    name = "octic",
    version,
    about = "Arrangements of eight planes and their double octics"
)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a corpus label or an arrangement file.
    Report {
        target: String,
        /// Specialize a family at `a:b` (or `inf`) first.
        #[arg(long)]
        at: Option<String>,
        /// Samples per bundled self-map claim.
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Incidence table, minimal table and minimizing permutation.
    Canon { target: String },
    /// Singular points, census and Euler characteristic.
    Census { target: String },
    /// Kummer partitions and their elliptic fibrations.
    Fibrations { target: String },
    /// Special members of a family.
    Special { target: String },
    /// Projective equivalences between two arrangements.
    Equiv {
        first: String,
        second: String,
        /// Only try this relabeling, in cycle notation.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Check the bundled parameter self-maps of a family.
    Selfmaps {
        label: String,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Enumerate incidence structures by free quadruple additions.
    Enumerate {
        #[arg(long, default_value_t = 7)]
        depth: u32,
        /// Write one canonical state per line to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Stop after this many classes.
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
    },
    /// Compare computed data with the bundled printed data.
    CorpusCheck {
        #[arg(long, default_value = "all")]
        scope: Scope,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
}

/// A corpus label, or a path to an arrangement file.
fn load(target: &str) -> Result<(Arrangement, Option<String>)> {
    if let Some(e) = corpus::get(target) {
        return Ok((e.arrangement.clone(), Some(e.label.to_string())));
    }
    let text = fs::read_to_string(target)
        .with_context(|| format!("`{target}` is neither a corpus label nor a readable file"))?;
    let arr = Arrangement::parse(&text).with_context(|| format!("parsing {target}"))?;
    let label = arr.label().map(str::to_string);
    Ok((arr, label))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    let mut out = std::io::stdout().lock();
    if json {
        serde_json::to_writer_pretty(&mut out, value)?;
        writeln!(out)?;
    } else {
        write!(out, "{}", text())?;
    }
    Ok(())
}

/// Runs a command; `Ok(false)` is a failed check.
fn run(cli: Cli) -> Result<bool> {
    let json = cli.json;
    match cli.command {
        Command::Report {
            target,
            at,
            samples,
        } => {
            let (arr, label) = load(&target)?;
            let at = at.map(|p| parse_param_point(&p, arr.field())).transpose()?;
            let opts = ReportOptions {
                at,
                selfmap_samples: samples,
            };
            let r = report(&arr, label.as_deref(), &opts)?;
            emit(json, &r, || r.to_string())?;
        }
        Command::Canon { target } => {
            let (arr, _) = load(&target)?;
            let table = arr.incidence_table(None)?;
            let c = canonical_form(&table);
            let found = corpus::lookup(&c.minimal);
            #[derive(Serialize)]
            struct Canon {
                table: octic::IncidenceTable,
                minimal: octic::IncidenceTable,
                witness: Perm,
                corpus_match: Option<&'static str>,
            }
            let v = Canon {
                table,
                minimal: c.minimal,
                witness: c.witness,
                corpus_match: found,
            };
            emit(json, &v, || {
                let mut s = format!(
                    "Incidences: {}\nMinimal incidences: {}\nMinimizing permutation: {}\n",
                    v.table, v.minimal, v.witness
                );
                if let Some(l) = found {
                    s += &format!("Corpus class: Arr {l}\n");
                }
                s
            })?;
        }
        Command::Census { target } => {
            let (arr, _) = load(&target)?;
            let table = arr.incidence_table(None)?;
            let c = census(&table, &derive(&table))?;
            let e = euler_characteristic(&c);
            #[derive(Serialize)]
            struct Out<'a> {
                census: &'a octic::combinatorics::Census,
                euler: i64,
            }
            let out = Out {
                census: &c,
                euler: e,
            };
            emit(json, &out, || {
                let mut s = String::new();
                for (m, k) in &c.points {
                    s += &format!("{}: {}\n", k.key(), digits(*m));
                }
                for l in &c.lines {
                    s += &format!("l3: {}\n", digits(*l));
                }
                s += &format!(
                    "l2={} l3={} p3={} p40={} p41={} p50={} p51={} p52={}\n",
                    c.l2, c.l3, c.p3, c.p40, c.p41, c.p50, c.p51, c.p52
                );
                s += &format!("Euler characteristic: {e}\n");
                s
            })?;
        }
        Command::Fibrations { target } => {
            let (arr, _) = load(&target)?;
            let table = arr.incidence_table(None)?;
            let mut models = Vec::new();
            let mut agree = true;
            for p in kummer_partitions(&arr)? {
                let m = fiber_model(&arr, &p)?;
                let matching = match_fibers(&m, &table).map_err(|e| e.to_string());
                agree &= matching.is_ok();
                models.push((m, matching));
            }
            #[derive(Serialize)]
            struct Out<'a> {
                model: &'a octic::fibration::FiberModel,
                matching: &'a std::result::Result<octic::fibration::FiberMatching, String>,
            }
            let out: Vec<Out> = models
                .iter()
                .map(|(model, matching)| Out { model, matching })
                .collect();
            emit(json, &out, || {
                let mut s = String::new();
                for (m, matching) in &models {
                    s += &format!(
                        "{}-{}\n",
                        digits(m.partition.first),
                        digits(m.partition.second)
                    );
                    for (i, side) in m.sides.iter().enumerate() {
                        let cells: Vec<String> = side
                            .iter()
                            .map(|f| format!("{} at {}", f.kodaira, f.position))
                            .collect();
                        s += &format!("  side {}: {}\n", i + 1, cells.join(", "));
                    }
                    if let Err(e) = matching {
                        s += &format!("  matching: {e}\n");
                    }
                }
                if models.is_empty() {
                    s += "no pair of opposite fourfold points\n";
                }
                s
            })?;
            return Ok(agree);
        }
        Command::Special { target } => {
            let (arr, _) = load(&target)?;
            let s = special_values(&arr)?;
            emit(json, &s, || {
                let mut out = String::new();
                for v in &s.values {
                    out += &format!("{}: {}\n", v.at, v.verdict);
                }
                for u in &s.unresolved {
                    out += &format!("unresolved factor: {u}\n");
                }
                out
            })?;
        }
        Command::Equiv {
            first,
            second,
            sigma,
        } => {
            let (a, _) = load(&first)?;
            let (b, _) = load(&second)?;
            let sigma = sigma
                .map(|s| Perm::parse_cycles(&s))
                .transpose()
                .context("parsing --sigma")?;
            let ws = equivalences(&a, &b, sigma.as_ref())?;
            emit(json, &ws, || {
                let mut s = String::new();
                for w in &ws {
                    let rows: Vec<String> = w
                        .matrix
                        .iter()
                        .map(|r| {
                            r.iter()
                                .map(|x| x.to_string())
                                .collect::<Vec<_>>()
                                .join(" ")
                        })
                        .collect();
                    s += &format!(
                        "sigma {}: matrix [{}], cover scalar {}\n",
                        w.sigma,
                        rows.join("; "),
                        w.cover_scalar
                    );
                }
                if ws.is_empty() {
                    s += "not projectively equivalent\n";
                }
                s
            })?;
            return Ok(!ws.is_empty());
        }
        Command::Selfmaps { label, samples } => {
            let Some(entry) = corpus::get(&label) else {
                bail!("no corpus entry `{label}`");
            };
            let fam = &entry.arrangement;
            #[derive(Serialize)]
            struct Row {
                map: String,
                claimed: octic::family::MapKind,
                report: octic::family::ParameterMapReport,
            }
            let mut rows = Vec::new();
            for c in corpus::claims().iter().filter(|c| c.label == label) {
                let s = default_samples(fam, &c.l1, &c.l2, samples)?;
                let report = verify_parameter_map(fam, &c.l1, &c.l2, &s)?;
                rows.push(Row {
                    map: c.text.clone(),
                    claimed: c.kind,
                    report,
                });
            }
            let ok = rows
                .iter()
                .all(|r| r.report.equivalent && r.report.kind == Some(r.claimed));
            emit(json, &rows, || {
                let mut s = String::new();
                for r in &rows {
                    let found = match (r.report.equivalent, r.report.kind) {
                        (true, Some(k)) => k.to_string(),
                        _ => "not equivalent".into(),
                    };
                    s += &format!("({}): claimed {}, found {found}\n", r.map, r.claimed);
                }
                if rows.is_empty() {
                    s += "no bundled self-maps\n";
                }
                s
            })?;
            return Ok(ok);
        }
        Command::Enumerate {
            depth,
            emit: path,
            cap,
        } => {
            if depth == 0 {
                bail!("--depth must be at least 1");
            }
            let e = enumerate_classes(depth, cap);
            if let Some(path) = path {
                let mut text = String::new();
                for c in e.classes.keys() {
                    text += &format!("{c}\n");
                }
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            let reach = reachability(corpus::canonical_tables(), &e, depth);
            #[derive(Serialize)]
            struct Out<'a> {
                classes: usize,
                truncated: bool,
                stats: &'a [octic::enumerate::DepthStats],
                reachability: &'a [octic::enumerate::ReachabilityEntry],
            }
            let out = Out {
                classes: e.classes.len(),
                truncated: e.truncated,
                stats: &e.stats,
                reachability: &reach,
            };
            emit(json, &out, || {
                let mut s = String::new();
                for st in &e.stats {
                    let prunes: Vec<String> =
                        st.prunes.iter().map(|(k, n)| format!("{k}={n}")).collect();
                    s += &format!(
                        "depth {}: {} new classes from {} successors; pruned {}\n",
                        st.depth,
                        st.new_classes,
                        st.successors,
                        if prunes.is_empty() {
                            "none".into()
                        } else {
                            prunes.join(" ")
                        }
                    );
                }
                s += &format!("total {} classes", e.classes.len());
                s += if e.truncated {
                    " (truncated at cap)\n"
                } else {
                    "\n"
                };
                let reached: Vec<&str> = reach
                    .iter()
                    .filter(|r| r.reached == Some(true))
                    .map(|r| r.label.as_str())
                    .collect();
                let deeper = reach.iter().filter(|r| r.reached.is_none()).count();
                s +=
                    &format!(
                    "corpus classes reached: {}; needing more than {depth} additions: {deeper}\n",
                    if reached.is_empty() { "none".into() } else { reached.join(" ") }
                );
                s
            })?;
        }
        Command::CorpusCheck { scope, samples } => {
            let opts = CheckOptions {
                selfmap_samples: samples,
                ..Default::default()
            };
            let summary = corpus_check(scope, &opts);
            emit(json, &summary, || {
                let mut s = String::new();
                for d in &summary.diffs {
                    s += &format!("{d}\n");
                }
                s += &format!(
                    "{} entries checked, {} differences\n",
                    summary.entries.len(),
                    summary.diffs.len()
                );
                s
            })?;
            return Ok(summary.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
