//! The `itersum` command line.
//!
//! Every subcommand prints its results as catalog records, one JSON object
//! per line. Exit status is 0 on success, 1 when a check fails or a
//! counterexample turns up, and 2 on usage or input errors.

use crate::catalog::{append_records, CatalogRecord, Status};
use crate::config::{default_workers, SweepConfig};
use crate::error::{HarnessError, Result};
use crate::records::{self, VerdictTask};
use crate::sweep::run_sweep;
use clap::{Args, Parser, Subcommand, ValueEnum};
use itersum::{
    default_symmetries, parse_element, parse_group, parse_sequence, parse_subset,
    sequence_leaders, subset_orbits, CorollaryKind, ExampleParams, Family, Group,
    GroupSubset, Sequence, DEFAULT_NODE_BUDGET,
};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

/// Environment variable naming the default directory for catalogs.
pub const OUT_DIR_ENV: &str = "ITERSUM_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "itersum", version, about = "Sumsets, iterated sumsets and subsequence sums in finite abelian groups")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Sweep configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Append records to this catalog.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Append failing records to this file.
    #[arg(long, global = true)]
    emit_counterexamples: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GroupArg {
    /// Group literal, e.g. C2xC4 or [2,4].
    #[arg(long)]
    group: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A + B, or nA with --n.
    Sumset {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Structure of nA.
    Classify {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: usize,
        /// Use the three-element classifier only.
        #[arg(long)]
        size3: bool,
    },
    /// Elementary pair types of (A, B).
    Elementary {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Critical-pair structure of (A, B).
    Kst {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Subsequence sums of a sequence.
    Subsums {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// The coset condition with every violation.
    CosetCheck {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        seq: String,
    },
    /// Kneser bound for n-term subsequence sums.
    KneserReport {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        n: usize,
    },
    /// Search for an n-setpartition of a subsequence.
    Partition {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        n: usize,
        /// Length of the subsequence (default: the whole sequence).
        #[arg(long)]
        len: Option<usize>,
    },
    /// Exact Davenport constant.
    Davenport {
        #[command(flatten)]
        g: GroupArg,
    },
    /// Exhaustive theorem verification.
    Verify {
        which: Verifier,
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        item: Option<u8>,
        /// Single set for cor1/cor2 (default: every set up to symmetry).
        #[arg(long)]
        set: Option<String>,
        /// Single sequence for lemma41 (default: every sequence up to --max-len).
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Extra lengths for t15 beyond the minimal one.
        #[arg(long, default_value_t = 0)]
        extra_lengths: usize,
    },
    /// Build an extremal sequence and re-check its claims.
    Example {
        family: String,
        #[command(flatten)]
        g: GroupArg,
        /// The cyclic summand generator.
        #[arg(long = "gen")]
        generator: Option<String>,
    },
    /// Run a sweep described by a configuration file.
    Sweep { path: Option<PathBuf> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Verifier {
    Egz,
    Olson,
    T12,
    T15,
    Cor1,
    Cor2,
    Lemma41,
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::Usage(msg.into())
}

struct Ctx<'a> {
    global: &'a GlobalOpts,
    stdout: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn budget(&self) -> u64 {
        self.global.budget_nodes.unwrap_or(DEFAULT_NODE_BUDGET)
    }

    fn out_path(&self) -> Option<PathBuf> {
        self.global
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join("catalog.jsonl")))
    }

    /// Prints, persists and scores the records.
    fn emit(&mut self, records: &[CatalogRecord]) -> Result<i32> {
        for r in records {
            writeln!(self.stdout, "{}", r.to_line()).map_err(crate::error::io_error("writing stdout"))?;
        }
        if let Some(path) = self.out_path() {
            append_records(path, records)?;
        }
        let failed: Vec<CatalogRecord> = records
            .iter()
            .filter(|r| r.status == Status::Fail)
            .cloned()
            .collect();
        if let Some(path) = &self.global.emit_counterexamples {
            append_records(path, &failed)?;
        }
        Ok(if failed.is_empty() { 0 } else { 1 })
    }
}

fn group(arg: &GroupArg) -> Result<Group> {
    Ok(parse_group(&arg.group)?)
}

fn subset(g: &Group, s: &str) -> Result<GroupSubset> {
    Ok(parse_subset(g, s)?)
}

fn sequence(g: &Group, s: &str) -> Result<Sequence> {
    Ok(parse_sequence(g, s)?)
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<i32> {
    let budget = ctx.budget();
    let recs = match cmd {
        Command::Sumset { g, a, b, n } => {
            let g = group(g)?;
            let a = subset(&g, a)?;
            match (b, n) {
                (Some(b), None) => vec![records::sumset_record(&a, &subset(&g, b)?)?],
                (None, Some(n)) => vec![records::iterated_record(&a, *n)?],
                _ => return Err(usage("give exactly one of --b and --n")),
            }
        }
        Command::Classify { g, set, n, size3 } => {
            let g = group(g)?;
            vec![records::classify_record(&subset(&g, set)?, *n, *size3)?]
        }
        Command::Elementary { g, a, b } => {
            let g = group(g)?;
            vec![records::elementary_record(&subset(&g, a)?, &subset(&g, b)?)?]
        }
        Command::Kst { g, a, b } => {
            let g = group(g)?;
            vec![records::kst_record(&subset(&g, a)?, &subset(&g, b)?)?]
        }
        Command::Subsums { g, seq, n } => {
            let g = group(g)?;
            vec![records::subsums_record(&sequence(&g, seq)?, *n)?]
        }
        Command::CosetCheck { g, seq } => {
            let g = group(g)?;
            vec![records::coset_record(&sequence(&g, seq)?)?]
        }
        Command::KneserReport { g, seq, n } => {
            let g = group(g)?;
            vec![records::kneser_report_record(&sequence(&g, seq)?, *n)?]
        }
        Command::Partition { g, seq, n, len } => {
            let g = group(g)?;
            let s = sequence(&g, seq)?;
            let len = len.unwrap_or(s.len());
            vec![records::partition_record(&s, len, *n, budget)?]
        }
        Command::Davenport { g } => vec![records::davenport_record(&group(g)?, budget)?],
        Command::Verify {
            which,
            g,
            n,
            item,
            set,
            seq,
            max_len,
            extra_lengths,
        } => verify(*which, &group(g)?, *n, *item, set.as_deref(), seq.as_deref(), *max_len, *extra_lengths, budget)?,
        Command::Example { family, g, generator } => {
            let fam = Family::parse(family).ok_or_else(|| usage(format!("unknown family '{family}'")))?;
            let g = group(g)?;
            let mut params = ExampleParams::default();
            if let Some(x) = generator {
                params.g = Some(parse_element(&g, x)?);
            }
            vec![records::example_record(fam, &g, &params)?]
        }
        Command::Sweep { path } => {
            let path = path
                .as_ref()
                .or(ctx.global.config.as_ref())
                .ok_or_else(|| usage("sweep needs a configuration file"))?;
            let mut config = SweepConfig::from_file(path)?;
            if let Some(w) = ctx.global.workers {
                config.workers = w;
            }
            if let Some(b) = ctx.global.budget_nodes {
                config.budget_nodes = b;
            }
            if config.out.is_none() {
                config.out = ctx.out_path();
            }
            if let Some(p) = &ctx.global.emit_counterexamples {
                config.counterexamples = Some(p.clone());
            }
            let summary = run_sweep(&config)?;
            let line = serde_json::json!({
                "task": config.task.name(),
                "counts": summary.counts,
                "wall_ms": summary.wall.as_millis() as u64,
            });
            writeln!(ctx.stdout, "{line}").map_err(crate::error::io_error("writing stdout"))?;
            return Ok(if summary.counts.failed == 0 { 0 } else { 1 });
        }
    };
    ctx.emit(&recs)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    which: Verifier,
    g: &Group,
    n: Option<usize>,
    item: Option<u8>,
    set: Option<&str>,
    seq: Option<&str>,
    max_len: usize,
    extra: usize,
    budget: u64,
) -> Result<Vec<CatalogRecord>> {
    let need_item = || item.ok_or_else(|| usage("--item is required for t12 and t15"));
    let need_n = || n.ok_or_else(|| usage("--n is required for t12 and t15"));
    Ok(match which {
        Verifier::Egz => vec![records::verdict_record(g, VerdictTask::Egz, budget)?],
        Verifier::Olson => vec![records::verdict_record(g, VerdictTask::Olson, budget)?],
        Verifier::T12 => vec![records::verdict_record(
            g,
            VerdictTask::MainOlson { n: need_n()?, item: need_item()? },
            budget,
        )?],
        Verifier::T15 => vec![records::verdict_record(
            g,
            VerdictTask::MainNSums { n: need_n()?, item: need_item()?, extra },
            budget,
        )?],
        Verifier::Cor1 | Verifier::Cor2 => {
            let kind = if which == Verifier::Cor1 { CorollaryKind::Cor1 } else { CorollaryKind::Cor2 };
            let sets = match set {
                Some(s) => vec![subset(g, s)?],
                None => subset_orbits(&default_symmetries(g))?
                    .into_iter()
                    .map(|o| o.representative)
                    .collect(),
            };
            let exp = g.exponent();
            let ns: Vec<usize> = match n {
                Some(n) => vec![n],
                None => (exp..=exp + 3).collect(),
            };
            let mut out = Vec::new();
            for a in &sets {
                for &n in &ns {
                    out.push(records::corollary_record(a, n, kind)?);
                }
            }
            out
        }
        Verifier::Lemma41 => {
            let seqs = match seq {
                Some(s) => vec![sequence(g, s)?],
                None => {
                    let sym = default_symmetries(g);
                    let mut v = Vec::new();
                    for len in 1..=max_len {
                        v.extend(sequence_leaders(&sym, len, len, budget)?);
                    }
                    v
                }
            };
            seqs.iter().map(records::lemma_record).collect::<itersum::Result<_>>()?
        }
    })
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let workers = cli.global.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        let _ = writeln!(stderr, "error: --workers must be positive");
        return 2;
    }
    // only the first call in a process sizes the global pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    let mut ctx = Ctx {
        global: &cli.global,
        stdout,
    };
    match dispatch(&cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
