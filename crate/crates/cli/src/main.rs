use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mcadvice::adversary::{
    hex_54, hex_chain, path_family, random_cancel_instance, random_instance, SizeParams,
};
use mcadvice::harness::{
    batch, instance_to_json, load_instance, load_manifest, optimum, parse_log, run, run_with_tape,
    verify, witness_to_json, write_csv, RunOptions, RunReport,
};
use mcadvice::instance::Verdict;
use mcadvice::online::Algorithm;
use mcadvice::oracle::Budget;
use mcadvice::GraphKind;

#[derive(Parser)]
#[command(
    name = "mcadvice",
    version,
    about = "Online multi-coloring with advice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file from a generator family.
    Gen(GenArgs),
    /// Compute the optimum and a witness coloring.
    Opt {
        instance: PathBuf,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<Budget>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm on one instance with an oracle-written tape.
    Run {
        instance: PathBuf,
        #[command(flatten)]
        algo: AlgoArgs,
        #[command(flatten)]
        common: RunArgs,
        /// Use the instance file's `tape` instead of the oracle.
        #[arg(long)]
        file_tape: bool,
        /// Write the assignment log (JSON) here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run every entry of a JSON manifest.
    Batch {
        manifest: PathBuf,
        #[command(flatten)]
        common: RunArgs,
    },
    /// Replay an assignment log against an instance.
    Verify { instance: PathBuf, log: PathBuf },
}

#[derive(Args)]
struct AlgoArgs {
    /// greedy_opt, greedy_truncated, greedy_cancel, trivial, fpa or hex43.
    #[arg(long)]
    algo: String,
    /// Truncation width for greedy_truncated.
    #[arg(long)]
    b: Option<u32>,
}

impl AlgoArgs {
    fn resolve(&self) -> Result<Algorithm> {
        Ok(match self.b {
            Some(b) => Algorithm::parse(&self.algo, Some(b))?,
            None => self.algo.parse()?,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Oracle caps as NODES:REQUESTS[:STEPS].
    #[arg(long, value_parser = parse_budget)]
    budget: Option<Budget>,
    /// Record runtimes (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            budget: self.budget.unwrap_or_default(),
            timing: self.timing,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// I_index of the path family for sequence length n.
    Path,
    /// Chain of k hexagonal units; --branch gives one 0/1 per unit.
    Chain,
    /// Single unit scaled by p.
    Gadget,
    /// Random instance of --kind.
    Random,
    /// Random bipartite instance with cancellations.
    Cancel,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long, default_value_t = 40)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Branch bits, e.g. `101`.
    #[arg(long, default_value = "1")]
    branch: String,
    /// Trailing requests to R (chain only).
    #[arg(long, default_value_t = 0)]
    padding: usize,
    #[arg(long, default_value_t = 8)]
    p: u32,
    #[arg(long, value_enum, default_value_t = KindArg::Bipartite)]
    kind: KindArg,
    #[arg(long, default_value_t = 10)]
    nodes: usize,
    #[arg(long, default_value_t = 30)]
    requests: usize,
    /// Edge probability in percent (bipartite).
    #[arg(long, default_value_t = 50)]
    density: u32,
    /// Chance in percent that a request cancels instead (cancel family).
    #[arg(long, default_value_t = 30)]
    cancel_percent: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Path,
    Bipartite,
    Hexagonal,
}

impl From<KindArg> for GraphKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Path => GraphKind::Path,
            KindArg::Bipartite => GraphKind::Bipartite,
            KindArg::Hexagonal => GraphKind::Hexagonal,
        }
    }
}

fn parse_budget(s: &str) -> Result<Budget, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| {
        p.parse::<u64>()
            .map_err(|e| format!("bad budget part `{p}`: {e}"))
    };
    match parts.as_slice() {
        [n, r] => Ok(Budget {
            max_nodes: num(n)? as usize,
            max_requests: num(r)? as usize,
            ..Budget::default()
        }),
        [n, r, s] => Ok(Budget {
            max_nodes: num(n)? as usize,
            max_requests: num(r)? as usize,
            max_steps: num(s)?,
        }),
        _ => Err("expected NODES:REQUESTS[:STEPS]".into()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn render(reports: &[RunReport], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(reports, &mut buf)?;
            String::from_utf8(buf)?
        }
        Format::Json => serde_json::to_string_pretty(reports)?,
    })
}

fn gen(args: &GenArgs) -> Result<String> {
    let branch = || -> Result<Vec<bool>> {
        args.branch
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => bail!("branch bits must be 0 or 1, got {other:?}"),
            })
            .collect()
    };
    let (instance, id) = match args.family {
        Family::Path => {
            let mut fam = path_family(args.n)?;
            if args.index >= fam.len() {
                bail!("index {} out of range 0..={}", args.index, fam.len() - 1);
            }
            (
                fam.swap_remove(args.index),
                format!("path-n{}-i{}", args.n, args.index),
            )
        }
        Family::Chain => {
            let b = branch()?;
            let chain = hex_chain(b.len(), &b, args.padding)?;
            (chain.instance, format!("chain-{}", args.branch))
        }
        Family::Gadget => {
            let b = branch()?;
            if b.len() != 1 {
                bail!("the gadget takes a single branch bit");
            }
            (
                hex_54(args.p, b[0])?.instance,
                format!("gadget-p{}-{}", args.p, args.branch),
            )
        }
        Family::Random => {
            let size = SizeParams {
                nodes: args.nodes,
                requests: args.requests,
                density: args.density,
            };
            let kind = GraphKind::from(args.kind);
            (
                random_instance(kind, size, args.seed)?,
                format!("random-{kind}-s{}", args.seed),
            )
        }
        Family::Cancel => {
            let size = SizeParams {
                nodes: args.nodes,
                requests: args.requests,
                density: args.density,
            };
            (
                random_cancel_instance(size, args.cancel_percent, args.seed)?,
                format!("cancel-s{}", args.seed),
            )
        }
    };
    Ok(instance_to_json(&instance, Some(&id)))
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every run was valid and within its declared bounds.
fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(args) => {
            emit(args.out.as_deref(), &gen(&args)?)?;
            Ok(true)
        }
        Command::Opt {
            instance,
            budget,
            out,
        } => {
            let loaded = load_instance(&instance)?;
            let w = optimum(&loaded.instance, &budget.unwrap_or_default())?;
            emit(out.as_deref(), &witness_to_json(&loaded.instance, &w))?;
            Ok(true)
        }
        Command::Run {
            instance,
            algo,
            common,
            file_tape,
            log,
        } => {
            let algorithm = algo.resolve()?;
            let loaded = load_instance(&instance)?;
            let id = loaded
                .id
                .clone()
                .unwrap_or_else(|| instance.display().to_string());
            let opts = common.options();
            let report = if file_tape {
                let tape = loaded.tape.context("instance file has no `tape`")?;
                run_with_tape(&loaded.instance, &id, algorithm, tape, &opts)
            } else {
                run(&loaded.instance, &id, algorithm, &opts)
            };
            if let Some(path) = log {
                let json = serde_json::to_string(&report.actions)?;
                fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
            }
            let ok = report.is_ok();
            emit(common.out.as_deref(), &render(&[report], common.format)?)?;
            Ok(ok)
        }
        Command::Batch { manifest, common } => {
            let entries = load_manifest(&manifest)?;
            let reports = batch(&entries, &common.options());
            emit(common.out.as_deref(), &render(&reports, common.format)?)?;
            Ok(reports.iter().all(RunReport::is_ok))
        }
        Command::Verify { instance, log } => {
            let loaded = load_instance(&instance)?;
            let text =
                fs::read_to_string(&log).with_context(|| format!("reading {}", log.display()))?;
            match verify(&loaded.instance, &parse_log(&text)?)? {
                Verdict::Ok => {
                    println!("ok");
                    Ok(true)
                }
                Verdict::Violation(v) => {
                    println!("violation: {v}");
                    Ok(false)
                }
            }
        }
    }
}
