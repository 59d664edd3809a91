//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use quasicone_core::cases::{replay_manual_cases, replay_models};
use quasicone_core::quasicone::{default_bound, enumerate_normal, enumerate_raw};
use quasicone_core::search::{concatenate_strategies, verify_table, SearchOptions, TierRegistry};
use quasicone_core::strategy::{apply_strategy, succeeded, StepRule};
use quasicone_core::{EngineConfig, Strategy, StrategyState};
use serde_json::json;

use crate::matrix_io::{read_matrix, render_matrix};

#[derive(Parser, Debug)]
#[command(name = "quasicone", version, about = "Quasicone subalgebras of affine A_n: enumeration, strategies and search")]
pub struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// JSON documents.
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Closure,
    Literal,
}

impl From<Rule> for StepRule {
    fn from(r: Rule) -> StepRule {
        match r {
            Rule::Closure => StepRule::Closure,
            Rule::Literal => StepRule::Literal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyCase {
    Table,
    Manual,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List canonical (or raw) quasicones with gaps in 1..=bound.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        rank: u64,
        #[arg(long)]
        bound: Option<i64>,
        /// All normal matrices, not one per orbit.
        #[arg(long)]
        raw: bool,
    },
    /// Run strategy tiers over the enumeration.
    Search {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=5))]
        rank: u64,
        #[arg(long, default_value = "shortest,shortest-long,simple-basic,concat", value_parser = parse_tiers)]
        tiers: String,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        max_rounds: u64,
        #[arg(long)]
        bound: Option<i64>,
        /// Also count raw matrices.
        #[arg(long)]
        raw: bool,
        /// Write the full report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a strategy to a matrix.
    Apply {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_parser = parse_strategy, allow_hyphen_values = true)]
        strategy: Strategy,
        /// Start offset as a multiple of δ, e.g. `-1d`.
        #[arg(long, default_value = "-1d", value_parser = parse_weight, allow_hyphen_values = true)]
        start_weight: i64,
        #[arg(long, value_enum, default_value_t = Rule::Closure)]
        rule: Rule,
    },
    /// Print the canonical normal form in the input's file format.
    Normalize {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Print the defect.
    Defect {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Compare against the published results.
    VerifyPaper {
        #[arg(long = "case", value_enum)]
        case: VerifyCase,
        /// Ranks for the table.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        ranks: Vec<usize>,
    },
    /// Start the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Preload residual lists from search reports written with `search --out`.
        #[arg(long)]
        report: Vec<PathBuf>,
    },
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse::<Strategy>().map_err(|e| e.to_string())
}

fn parse_tiers(s: &str) -> Result<String, String> {
    TierRegistry::with_builtin().resolve(s).map_err(|e| e.to_string())?;
    Ok(s.to_string())
}

/// `-1d`, `-2δ`, `0` or a bare integer.
fn parse_weight(s: &str) -> Result<i64, String> {
    let t = s.trim();
    let t = t.strip_suffix('d').or_else(|| t.strip_suffix('δ')).unwrap_or(t);
    match t {
        "" | "+" => Ok(1),
        "-" => Ok(-1),
        _ => t.parse().map_err(|_| format!("expected a multiple of d such as -1d, found {s:?}")),
    }
}

/// Exit status of a run: 0 on success, 1 on engine errors, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Engine(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

enum Failure {
    Usage(String),
    Engine(String),
}

fn emit(format: Format, text: impl FnOnce() -> String, structured: impl FnOnce() -> serde_json::Value) {
    match format {
        Format::Text => print!("{}", text()),
        Format::Structured => println!("{}", serde_json::to_string_pretty(&structured()).expect("json")),
    }
}

fn load(flag: &str, path: &std::path::Path) -> Result<(quasicone_core::QuasiconeMatrix, crate::matrix_io::FileFormat), Failure> {
    read_matrix(path).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Enumerate { rank, bound, raw } => {
            let n = rank as usize;
            let bound = bound.unwrap_or_else(|| default_bound(n));
            if bound < 1 {
                return Err(Failure::Usage("--bound: must be at least 1".into()));
            }
            let list = if raw { enumerate_raw(n, bound) } else { enumerate_normal(n, bound) };
            emit(
                format,
                || list.iter().map(|m| m.to_rows_string() + "\n").collect(),
                || json!({ "rank": n, "bound": bound, "raw": raw, "count": list.len(), "matrices": list }),
            );
        }
        Command::Search { rank, tiers, max_rounds, bound, raw, out } => {
            let n = rank as usize;
            let tiers = TierRegistry::with_builtin().resolve(&tiers).map_err(|e| Failure::Usage(format!("--tiers: {e}")))?;
            let mut opts = SearchOptions::for_rank(n);
            opts.max_rounds = max_rounds as usize;
            opts.raw_counts = raw;
            if let Some(b) = bound {
                if b < 1 {
                    return Err(Failure::Usage("--bound: must be at least 1".into()));
                }
                opts.bound = b;
            }
            let report = concatenate_strategies(n, &tiers, &opts);
            if let Some(path) = out {
                std::fs::write(&path, report.to_json() + "\n")
                    .map_err(|e| Failure::Usage(format!("--out: {}: {e}", path.display())))?;
            }
            emit(
                format,
                || {
                    let mut s = format!("rank {n}, bound {}: {} canonical quasicones", report.bound, report.total_considered);
                    if let Some(r) = report.total_raw {
                        s += &format!(" ({r} raw)");
                    }
                    s += "\n";
                    for t in &report.unsolved_after {
                        s += &format!("  after {:<14} {:>7} unsolved", t.tier, t.unsolved);
                        if let Some(r) = t.unsolved_raw {
                            s += &format!(" ({r} raw)");
                        }
                        s += &format!(", {} round(s)\n", t.rounds);
                    }
                    s += &format!(
                        "  witnesses: {} verified, {} failed\n",
                        report.witnesses_verified, report.witnesses_failed
                    );
                    for m in &report.residual {
                        s += &format!("  residual: {}\n", m.to_rows_string());
                    }
                    s
                },
                || serde_json::to_value(&report).expect("json"),
            );
        }
        Command::Apply { matrix, strategy, start_weight, rule } => {
            let (m, _) = load("matrix", &matrix)?;
            let config = EngineConfig { rule: rule.into(), start_delta: start_weight };
            let start = StrategyState::start(m.clone(), &config);
            let out = apply_strategy(&start, &strategy, &config).map_err(|e| Failure::Engine(e.to_string()))?;
            let ok = succeeded(&m, &out);
            emit(
                format,
                || {
                    format!(
                        "{}\ndefect {} -> {}\noffset {}\nresolved {}\nsucceeded {ok}\n",
                        out.matrix,
                        m.defect(),
                        out.matrix.defect(),
                        out.offset,
                        out.resolved_strategy()
                    )
                },
                || {
                    json!({
                        "matrix": out.matrix,
                        "defect_before": m.defect(),
                        "defect": out.matrix.defect(),
                        "gap": out.matrix.gap(),
                        "offset": out.offset,
                        "resolved": out.resolved_strategy(),
                        "succeeded": ok,
                    })
                },
            );
        }
        Command::Normalize { matrix } => {
            let (m, file_format) = load("matrix", &matrix)?;
            let canon = m.normalize().map_err(|e| Failure::Engine(e.to_string()))?;
            emit(format, || render_matrix(&canon, file_format), || json!({ "matrix": canon }));
        }
        Command::Defect { matrix } => {
            let (m, _) = load("matrix", &matrix)?;
            emit(format, || format!("{}\n", m.defect()), || json!({ "defect": m.defect() }));
        }
        Command::VerifyPaper { case: VerifyCase::Manual, .. } => {
            let models = replay_models();
            let results: Vec<_> = models.iter().map(|m| (m.name, replay_manual_cases(&m.config))).collect();
            emit(
                format,
                || {
                    let mut s = String::new();
                    for (name, rs) in &results {
                        s += &format!("model {name}\n");
                        for r in rs {
                            s += &format!(
                                "  case {}: {} (defect {} -> {}, printed {}; {} differing entries; {:?} vs printed {:?})\n",
                                r.number,
                                if r.passed() { "PASS" } else { "FAIL" },
                                r.input_defect,
                                r.computed_defect.map_or("-".into(), |d| d.to_string()),
                                r.printed_defect,
                                r.diffs.len(),
                                r.verdict,
                                r.printed_verdict
                            );
                        }
                    }
                    s
                },
                || {
                    json!(results
                        .iter()
                        .map(|(name, rs)| {
                            let cases: Vec<_> = rs
                                .iter()
                                .map(|r| {
                                    let mut v = serde_json::to_value(r).expect("json");
                                    v["passed"] = json!(r.passed());
                                    v
                                })
                                .collect();
                            json!({ "model": name, "cases": cases })
                        })
                        .collect::<Vec<_>>())
                },
            );
        }
        Command::VerifyPaper { case: VerifyCase::Table, ranks } => {
            if let Some(bad) = ranks.iter().find(|&&n| !(2..=4).contains(&n)) {
                return Err(Failure::Usage(format!("--ranks: {bad} is outside 2..=4")));
            }
            let rows: Vec<_> = ranks.iter().map(|&n| verify_table(n, &SearchOptions::for_rank(n))).collect();
            emit(
                format,
                || {
                    let cell = |v: &Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
                    rows.iter()
                        .map(|r| {
                            format!(
                                "rank {} bound {}: computed {} | printed {} | {}\n",
                                r.rank,
                                r.bound,
                                r.computed.iter().map(cell).collect::<Vec<_>>().join(" "),
                                r.printed.iter().map(cell).collect::<Vec<_>>().join(" "),
                                if r.matches { "match" } else { "differs" }
                            )
                        })
                        .collect()
                },
                || {
                    json!(rows
                        .iter()
                        .map(|r| json!({
                            "rank": r.rank,
                            "bound": r.bound,
                            "computed": r.computed,
                            "printed": r.printed,
                            "matches": r.matches,
                            "residual": r.report.residual,
                        }))
                        .collect::<Vec<_>>())
                },
            );
        }
        Command::Serve { port, host, report } => {
            let state = crate::server::AppState::new(EngineConfig::default());
            for path in &report {
                state.load_report(path).map_err(|e| Failure::Usage(format!("--report: {e}")))?;
            }
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Engine(e.to_string()))?;
            rt.block_on(crate::server::serve(&host, port, state)).map_err(|e| Failure::Engine(e.to_string()))?;
        }
    }
    Ok(())
}
