use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use biorder::lattice::QuotientLattice;
use biorder::pipeline::{
    bench, exit_code, export, report_exit_code, run_order_check, run_verify, Axiom, BaerChoice, CheckGroup,
    ExportFormat, ExportTarget, RingSpec, RunConfig, Workbench, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use biorder::semigroup::Side;
use biorder::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "biorder", version, about = "Biordered sets of idempotents in finite rings and semigroups")]
struct Cli {
    /// Worker threads for parallel scans (defaults to all cores).
    #[arg(long, global = true, env = "BIORDER_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks and write a JSON report. Exit 0 pass, 1 fail, 2 bad input, 3 over budget.
    Verify(VerifyArgs),
    /// Write the biorder, a quotient lattice or the E-sequence graph as JSON or DOT.
    Export(ExportArgs),
    /// Print a timing table for every stage of a run.
    Bench(BenchArgs),
    /// Check a raw partial order for lattice, modularity and complements.
    CheckOrder(OrderArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RingKind {
    Gfmatrix,
    Zmod,
    Table,
}

#[derive(Args)]
struct RingArgs {
    #[arg(long, value_enum)]
    ring: RingKind,
    /// Matrix dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Prime modulus of the matrix entries.
    #[arg(long)]
    q: Option<u32>,
    /// Modulus of Z_m.
    #[arg(long)]
    m: Option<u32>,
    /// CSV multiplication table, optionally followed by an addition table.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Refuse structures with more elements than this.
    #[arg(long, default_value_t = 1 << 20)]
    max_order: u64,
}

impl RingArgs {
    fn spec(&self) -> Result<RingSpec, Error> {
        let missing = |flag: &str| Error::Config(format!("--ring needs {flag}"));
        Ok(match self.ring {
            RingKind::Gfmatrix => RingSpec::Gfmatrix {
                n: self.n.ok_or_else(|| missing("--n"))?,
                q: self.q.ok_or_else(|| missing("--q"))?,
            },
            RingKind::Zmod => RingSpec::Zmod { m: self.m.ok_or_else(|| missing("--m"))? },
            RingKind::Table => RingSpec::Table { file: self.file.clone().ok_or_else(|| missing("--file"))? },
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BaerArg {
    Auto,
    Full,
    Sampled,
}

#[derive(Args)]
struct CheckArgs {
    /// Comma-separated groups: axioms, baer, lattice, distances, idpersp, basis, all.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Complement axioms to report: e1, e2, e2dual, e3.
    #[arg(long, default_value = "e1,e2,e2dual,e3")]
    axioms: String,
    #[arg(long, value_enum, default_value = "auto")]
    baer: BaerArg,
    /// Samples for checks that do not run exhaustively.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Comma-separated element indices; defaults to the matrix units.
    #[arg(long)]
    basis: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[command(flatten)]
    checks: CheckArgs,
    /// Record per-check wall-clock times (makes reports differ between runs).
    #[arg(long)]
    timings: bool,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Biorder,
    Lattice,
    LatticeRight,
    Graph,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, value_enum)]
    what: Target,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[command(flatten)]
    checks: CheckArgs,
}

#[derive(Args)]
struct OrderArgs {
    /// First line: element count n. Then one `a,b` per line for a ≤ b.
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(ring: &RingArgs, checks: &CheckArgs) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::new(ring.spec()?);
    cfg.max_order = ring.max_order;
    cfg.checks = CheckGroup::parse_list(&checks.checks)?;
    cfg.axioms = Axiom::parse_list(&checks.axioms)?;
    cfg.baer = match checks.baer {
        BaerArg::Auto => BaerChoice::Auto,
        BaerArg::Full => BaerChoice::Full,
        BaerArg::Sampled => BaerChoice::Sampled,
    };
    cfg.samples = checks.samples;
    cfg.seed = checks.seed;
    cfg.basis = checks
        .basis
        .as_deref()
        .map(|list| {
            list.split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|e| Error::Config(format!("basis element `{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    Ok(cfg)
}

fn write_output(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Verify(args) => {
            let mut cfg = config(&args.ring, &args.checks)?;
            cfg.timings = args.timings;
            let report = run_verify(&cfg)?;
            write_output(args.out.as_ref(), &report.to_json())?;
            Ok(report_exit_code(&report))
        }
        Command::Export(args) => {
            let mut wb = Workbench::from_config(&config(&args.ring, &CheckArgs::defaults())?)?;
            let target = match args.what {
                Target::Biorder => ExportTarget::Biorder,
                Target::Lattice => ExportTarget::Lattice(Side::Left),
                Target::LatticeRight => ExportTarget::Lattice(Side::Right),
                Target::Graph => ExportTarget::Graph,
            };
            let format = match args.format {
                Format::Json => ExportFormat::Json,
                Format::Dot => ExportFormat::Dot,
            };
            write_output(args.out.as_ref(), &export(&mut wb, target, format)?)?;
            Ok(0)
        }
        Command::Bench(args) => {
            let rows = bench(&config(&args.ring, &args.checks)?)?;
            let width = rows.iter().map(|r| r.stage.len()).max().unwrap_or(5).max(5);
            println!("{:<width$}  {:>10}  verdict", "stage", "ms");
            for r in rows {
                println!("{:<width$}  {:>10}  {}", r.stage, r.millis, r.verdict);
            }
            Ok(0)
        }
        Command::CheckOrder(args) => {
            let text = std::fs::read_to_string(&args.file).map_err(Error::from)?;
            let report = run_order_check(&QuotientLattice::parse_order(&text)?);
            write_output(args.out.as_ref(), &report.to_json())?;
            Ok(report_exit_code(&report))
        }
    }
}

impl CheckArgs {
    fn defaults() -> Self {
        Self {
            checks: "all".into(),
            axioms: "e1,e2,e2dual,e3".into(),
            baer: BaerArg::Auto,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            basis: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<Error>().map_or(2, exit_code);
            ExitCode::from(code as u8)
        }
    }
}
