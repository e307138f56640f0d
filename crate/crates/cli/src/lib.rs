//! Command implementations behind the `opstar` binary.
//!
//! Every command writes to caller-supplied streams and returns its exit
//! code, so the integration tests drive them in-process.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use oberwolfach::rotational::catalog::{catalog_lookup, catalog_types, CatalogEntry};
use oberwolfach::solver::cache::DiskCache;
use oberwolfach::solver::search::{anneal, orbit_search, starter_search, SearchResult};
use oberwolfach::solver::trace::StrategyTrace;
use oberwolfach::solver::{
    cycle_types, Nonexistence, SearchBudget, Solution, SolveOutcome, Solver, UnknownReason,
};
use oberwolfach::{verify_decomposition, CertificateReport, CycleType, Decomposition, TwoFactor};

pub const FORMAT_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NONEXISTENT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

/// Largest order `batch` accepts.
pub const BATCH_MAX_N: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub ok: bool,
    pub failures: Vec<String>,
}

impl From<&CertificateReport> for CertificateSummary {
    fn from(r: &CertificateReport) -> Self {
        CertificateSummary {
            ok: r.ok,
            failures: r
                .failures
                .iter()
                .map(|f| format!("{:?}: {}", f.kind, f.detail))
                .collect(),
        }
    }
}

/// A solved instance as written to disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub format_version: u32,
    pub n: usize,
    pub cycle_type: Vec<usize>,
    pub trace: StrategyTrace,
    /// Factor, then cycle, then vertex indices in `0..n`.
    pub factors: Vec<Vec<Vec<usize>>>,
    pub certificate: CertificateSummary,
}

impl SolutionDocument {
    pub fn from_solution(s: &Solution) -> Self {
        let d = s.decomposition.canonical();
        SolutionDocument {
            format_version: FORMAT_VERSION,
            n: d.n,
            cycle_type: s.cycle_type.lengths().to_vec(),
            trace: s.trace.clone(),
            factors: d.factors.iter().map(TwoFactor::index_cycles).collect(),
            certificate: (&s.report).into(),
        }
    }

    pub fn cycle_type(&self) -> oberwolfach::Result<CycleType> {
        CycleType::new(self.cycle_type.clone())
    }

    /// The factors as a decomposition; fails on malformed cycles.
    pub fn decomposition(&self) -> oberwolfach::Result<Decomposition> {
        let factors = self
            .factors
            .iter()
            .map(|f| TwoFactor::from_index_cycles(self.n, f))
            .collect::<oberwolfach::Result<Vec<_>>>()?;
        Ok(Decomposition::new(self.n, factors))
    }

    /// One line per factor: `u_0 u_1 u_2 u_0 ∪ u_3 u_4 u_3`.
    pub fn to_text(&self, with_trace: bool) -> String {
        let mut out = format!("n = {}, type {}\n", self.n, type_label(&self.cycle_type));
        if with_trace {
            out.push_str(&self.trace.to_string());
        }
        for (i, f) in self.factors.iter().enumerate() {
            let cycles: Vec<String> = f
                .iter()
                .map(|c| {
                    let mut vs: Vec<String> = c.iter().map(|v| format!("u_{v}")).collect();
                    vs.push(format!("u_{}", c[0]));
                    vs.join(" ")
                })
                .collect();
            out.push_str(&format!("F_{i}: {}\n", cycles.join(" ∪ ")));
        }
        out
    }
}

fn type_label(lengths: &[usize]) -> String {
    let parts: Vec<String> = lengths.iter().map(|m| m.to_string()).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kernel {
    Exact,
    Starter,
    Orbit,
    Anneal,
}

#[derive(Debug, Parser)]
#[command(name = "opstar", about = "Directed Oberwolfach solver", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct BudgetArgs {
    /// Work allowed per search kernel.
    #[arg(long, default_value_t = SearchBudget::default().nodes)]
    pub budget: u64,
    /// Seed for all randomized search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            nodes: self.budget,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one cycle type, e.g. `solve 3 4 5`.
    Solve {
        #[arg(required = true, value_parser = parse_length)]
        lengths: Vec<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Print the strategy trace in text output.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a solution document.
    Verify { path: PathBuf },
    /// Run one search kernel without the constructive rules.
    Search {
        #[arg(required = true, value_parser = parse_length)]
        lengths: Vec<usize>,
        #[arg(long, value_enum, default_value = "exact")]
        kernel: Kernel,
        /// Period of the starter or orbit search.
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// List the hard-coded solutions and check each one.
    Catalog,
    /// Decide every cycle type up to a given order; CSV on stdout.
    Batch {
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn parse_length(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(m) if m >= 2 => Ok(m),
        Ok(m) => Err(format!("cycle length {m} is below 2")),
        Err(_) => Err(format!("{s:?} is not a cycle length")),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve {
            lengths,
            format,
            trace,
            budget,
        } => cmd_solve(lengths, format, trace, budget.budget(), out, err),
        Command::Verify { path } => cmd_verify(&path, out, err),
        Command::Search {
            lengths,
            kernel,
            q,
            format,
            budget,
        } => cmd_search(lengths, kernel, q, format, budget.budget(), out),
        Command::Catalog => cmd_catalog(out),
        Command::Batch { max_n, budget } => cmd_batch(max_n, budget.budget(), out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_USAGE
    })
}

type CmdResult = std::io::Result<i32>;

fn solver(budget: SearchBudget, err: &mut dyn Write) -> Solver {
    let solver = Solver::new(budget);
    match DiskCache::from_env() {
        Ok(Some(cache)) => solver.with_cache(cache),
        Ok(None) => solver,
        Err(e) => {
            let _ = writeln!(err, "warning: {e}; continuing without a cache");
            solver
        }
    }
}

fn emit_solution(
    s: &Solution,
    format: Format,
    trace: bool,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    // Never print anything the checker has not accepted.
    let report = verify_decomposition(&s.decomposition, &s.cycle_type);
    assert!(report.ok, "refusing to emit an uncertified decomposition");
    let doc = SolutionDocument::from_solution(s);
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("documents serialize")
        ),
        Format::Text => write!(out, "{}", doc.to_text(trace)),
    }
}

fn witness_label(w: &Nonexistence) -> String {
    match w {
        Nonexistence::KnownException => "known-exception".into(),
        Nonexistence::ExhaustiveSearch(log) => format!("exhaustive-search ({} nodes)", log.nodes),
    }
}

fn reason_label(r: &UnknownReason) -> String {
    match r {
        UnknownReason::OpenCase => "open-case".into(),
        UnknownReason::BudgetExhausted { searches } => {
            format!("budget-exhausted ({} searches)", searches.len())
        }
    }
}

fn emit_outcome(
    ty: &CycleType,
    outcome: &SolveOutcome,
    format: Format,
    trace: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let (code, body) = match outcome {
        SolveOutcome::Solved(s) => {
            emit_solution(s, format, trace, out)?;
            return Ok(EXIT_OK);
        }
        SolveOutcome::Nonexistent(w) => (EXIT_NONEXISTENT, serde_json::to_value(w)),
        SolveOutcome::Unknown(r) => (EXIT_UNKNOWN, serde_json::to_value(r)),
    };
    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "format_version": FORMAT_VERSION,
                "cycle_type": ty.lengths(),
                "verdict": outcome.verdict(),
                "detail": body.expect("outcomes serialize"),
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("json values serialize")
            )?;
        }
        Format::Text => {
            let label = match outcome {
                SolveOutcome::Nonexistent(w) => witness_label(w),
                SolveOutcome::Unknown(r) => reason_label(r),
                SolveOutcome::Solved(_) => unreachable!(),
            };
            writeln!(out, "{ty}: {} ({label})", outcome.verdict())?;
        }
    }
    Ok(code)
}

fn cmd_solve(
    lengths: Vec<usize>,
    format: Format,
    trace: bool,
    budget: SearchBudget,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let ty = CycleType::new(lengths).expect("lengths validated by the parser");
    let outcome = solver(budget, err).solve(&ty);
    emit_outcome(&ty, &outcome, format, trace, out)
}

fn cmd_verify(path: &std::path::Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let parsed = std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|text| serde_json::from_str::<SolutionDocument>(&text).map_err(|e| e.to_string()))
        .and_then(|doc| {
            let ty = doc.cycle_type().map_err(|e| e.to_string())?;
            let d = doc.decomposition().map_err(|e| e.to_string())?;
            Ok((ty, d))
        });
    let (ty, d) = match parsed {
        Ok(x) => x,
        Err(e) => {
            writeln!(err, "cannot read {}: {e}", path.display())?;
            return Ok(EXIT_USAGE);
        }
    };
    let report = verify_decomposition(&d, &ty);
    if report.ok {
        writeln!(out, "ok: {} factors of type {ty}", d.factors.len())?;
        return Ok(EXIT_OK);
    }
    for f in &report.failures {
        writeln!(out, "{:?}: {}", f.kind, f.detail)?;
    }
    Ok(EXIT_CERTIFICATE)
}

fn cmd_search(
    lengths: Vec<usize>,
    kernel: Kernel,
    q: usize,
    format: Format,
    budget: SearchBudget,
    out: &mut dyn Write,
) -> CmdResult {
    use oberwolfach::solver::trace::Rule;
    let ty = CycleType::new(lengths).expect("lengths validated by the parser");
    let (found, log) = match kernel {
        Kernel::Exact => {
            let outcome = oberwolfach::solver::brute_force_search(&ty, budget);
            return emit_outcome(&ty, &outcome, format, false, out);
        }
        Kernel::Starter => match starter_search(&ty, q, budget.nodes, budget.seed) {
            SearchResult::Found(set) => (
                Some((
                    oberwolfach::rotational::expand_starters(&set),
                    Rule::starters(&set),
                )),
                None,
            ),
            SearchResult::Exhausted(l) | SearchResult::OutOfBudget(l) => (None, Some(l)),
        },
        Kernel::Orbit | Kernel::Anneal => {
            let r = if kernel == Kernel::Orbit {
                orbit_search(&ty, q, budget.nodes, budget.seed)
            } else {
                anneal(&ty, budget.nodes, budget.seed)
            };
            match r {
                SearchResult::Found(d) => {
                    let rule = Rule::explicit(&format!("{kernel:?}").to_lowercase(), &d);
                    (Some((d, rule)), None)
                }
                SearchResult::Exhausted(l) | SearchResult::OutOfBudget(l) => (None, Some(l)),
            }
        }
    };
    let outcome = match found {
        Some((d, rule)) => {
            let d = d.canonical();
            let report = verify_decomposition(&d, &ty);
            SolveOutcome::Solved(Solution {
                trace: StrategyTrace::leaf(&ty, rule),
                cycle_type: ty.clone(),
                decomposition: d,
                report,
            })
        }
        None => SolveOutcome::Unknown(UnknownReason::BudgetExhausted {
            searches: log.into_iter().collect(),
        }),
    };
    emit_outcome(&ty, &outcome, format, false, out)
}

fn cmd_catalog(out: &mut dyn Write) -> CmdResult {
    let mut all_ok = true;
    for ty in catalog_types() {
        let entry = catalog_lookup(&ty).expect("listed types are present");
        let kind = match &entry {
            CatalogEntry::Starters(set) => format!("starters q={}", set.q()),
            CatalogEntry::Explicit(_) => "explicit".to_string(),
        };
        let ok = verify_decomposition(&entry.expand(), &ty).ok;
        all_ok &= ok;
        writeln!(out, "{ty}\t{kind}\t{}", if ok { "ok" } else { "FAILED" })?;
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_CERTIFICATE })
}

/// One row of the batch report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchRow {
    pub cycle_type: CycleType,
    pub verdict: &'static str,
    pub strategy: String,
    pub millis: u128,
}

/// Decides every type of order at most `max_n`, in parallel, in the order
/// of [`cycle_types`].
pub fn batch_rows(max_n: usize, solver: &Solver) -> Vec<BatchRow> {
    cycle_types(max_n)
        .into_par_iter()
        .map(|ty| {
            let start = Instant::now();
            let outcome = solver.solve(&ty);
            let strategy = match &outcome {
                SolveOutcome::Solved(s) => {
                    let root = s.trace.root().expect("traces are non-empty");
                    let params = root.rule.params();
                    if params.is_empty() {
                        root.rule.name().to_string()
                    } else {
                        format!("{} {params}", root.rule.name())
                    }
                }
                SolveOutcome::Nonexistent(w) => witness_label(w),
                SolveOutcome::Unknown(r) => reason_label(r),
            };
            BatchRow {
                verdict: outcome.verdict(),
                cycle_type: ty,
                strategy,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect()
}

fn cmd_batch(
    max_n: usize,
    budget: SearchBudget,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if !(2..=BATCH_MAX_N).contains(&max_n) {
        writeln!(err, "--max-n must lie in 2..={BATCH_MAX_N}")?;
        return Ok(EXIT_USAGE);
    }
    let solver = solver(budget, err);
    writeln!(out, "cycle_type,n,verdict,strategy,millis")?;
    for row in batch_rows(max_n, &solver) {
        writeln!(
            out,
            "\"{}\",{},{},{},{}",
            row.cycle_type,
            row.cycle_type.order(),
            row.verdict,
            row.strategy,
            row.millis
        )?;
    }
    Ok(EXIT_OK)
}
