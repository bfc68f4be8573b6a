//! Command-line surface: argument parsing, dispatch, reports and exit codes.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! errors and exceeded resource bounds.

mod commands;
mod error;
mod report;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::expr::Style;
use crate::presentations::Bounds;

pub use commands::*;
pub use error::CliError;
pub use report::{CheckRecord, RunReport, Verdict, RUN_SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "qweyl", version, about = "Exact computations in quantum Weyl algebras and the reflection equation algebra")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapName {
    Mu,
    Phi,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of an expression.
    Nf {
        /// dq<N>, dq<N>roots, oq<N>, oq_gl2, oq_gl2_plus, dq_gl2, dq_gl2_plus.
        #[arg(long, default_value = "dq2")]
        algebra: String,
        /// Work at a primitive ell-th root of unity instead of generic q.
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, conflicts_with = "latex")]
        unicode: bool,
        #[arg(long)]
        latex: bool,
        expression: String,
    },
    /// Check an identity catalog: a built-in name, `all`, or a TOML file.
    Verify {
        catalog: String,
        #[arg(long, default_value_t = 4)]
        n_max: i64,
        #[arg(long, default_value_t = 4)]
        m_max: i64,
        /// Override the catalog's rank N.
        #[arg(long = "N")]
        rank: Option<i64>,
    },
    /// Central elements up to a degree bound at a root of unity.
    Center {
        #[arg(long, default_value = "dq1")]
        algebra: String,
        #[arg(long, default_value_t = 3)]
        ell: u32,
        #[arg(long, default_value_t = 6)]
        degree_bound: u32,
    },
    /// The central element z of O_q(GL_2) at a root of unity.
    ZElement {
        #[arg(long)]
        ell: u32,
    },
    /// Certify fibers of D_q(C^N) over central characters.
    Fiber(FiberArgs),
    /// Verify a quantum moment map.
    MomentMap {
        map: MapName,
        #[arg(long, default_value_t = 3)]
        ell: u32,
        /// Also check the restriction to the central subalgebras.
        #[arg(long)]
        frobenius: bool,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Semiclassical Poisson bivector of D_q(C^N).
    Poisson {
        #[arg(long = "N", default_value_t = 2)]
        rank: usize,
    },
    /// Run the acceptance suite.
    All {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Run only these criteria (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Args)]
pub struct FiberArgs {
    #[arg(long = "N", default_value_t = 2)]
    pub rank: usize,
    #[arg(long, default_value_t = 3)]
    pub ell: u32,
    /// Values of x1^l..xN^l, d1^l..dN^l, comma separated.
    #[arg(long = "char", conflicts_with = "sweep", required_unless_present = "sweep")]
    pub character: Option<String>,
    #[arg(long)]
    pub sweep: bool,
    /// Characters sampled inside the locus.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    /// Characters sampled on the vanishing loci.
    #[arg(long, default_value_t = 3)]
    pub outside: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

fn style(unicode: bool, latex: bool) -> Style {
    match (unicode, latex) {
        (true, _) => Style::Unicode,
        (_, true) => Style::Latex,
        _ => Style::Ascii,
    }
}

fn all(seed: u64, samples: usize, only: &[u8], timings: bool) -> RunReport {
    let opts = suite::SuiteOptions { seed, samples };
    let results = suite::run_suite(&opts, only);
    let mut r = RunReport::new("all")
        .param("seed", seed)
        .param("samples", samples)
        .param("only", only);
    r.lines_only = true;
    for c in &results {
        let mut line = c.summary();
        if timings {
            line.push_str(&format!(" [{:.1} s]", c.elapsed.as_secs_f64()));
        }
        r.line(line);
        let failing = c.checks.iter().find(|k| k.failed());
        let mut rec = CheckRecord::new(format!("criterion {} {}", c.id, c.title), "acceptance", c.verdict != Verdict::Fail);
        if c.verdict == Verdict::Skip {
            rec.verdict = Verdict::Skip;
        }
        if let Some(f) = failing {
            rec = rec.with_witness(format!("{}: {}", f.name, f.witness.as_deref().unwrap_or("")));
        }
        r.push(rec);
    }
    r.set_result(&results);
    r
}

/// Execute a parsed command.
pub fn execute(cli: &Cli) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Nf { algebra, ell, unicode, latex, expression } => {
            normal_form(algebra, *ell, expression, style(*unicode, *latex))?
        }
        Command::Verify { catalog, n_max, m_max, rank } => verify(
            catalog,
            Bounds { n_max: *n_max, m_max: *m_max, rank: *rank },
        )?,
        Command::Center { algebra, ell, degree_bound } => center(algebra, *ell, *degree_bound)?,
        Command::ZElement { ell } => z_element(*ell)?,
        Command::Fiber(f) => match &f.character {
            Some(ch) => fiber_single(f.rank, f.ell, ch)?,
            None => fiber_sweep(f.rank, f.ell, f.samples, f.outside, f.seed)?,
        },
        Command::MomentMap { map, ell, frobenius, samples, seed } => match map {
            MapName::Mu => moment_mu(*ell, *frobenius, *samples, *seed)?,
            MapName::Phi => moment_phi(*ell, *frobenius, *samples, *seed)?,
        },
        Command::Poisson { rank } => poisson(*rank)?,
        Command::All { seed, samples, only } => all(*seed, *samples, only, cli.timings),
    };
    if cli.timings {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("QWEYL_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Usage(format!("QWEYL_THREADS must be a positive integer, got {v}")))?;
        if n == 0 {
            return Err(CliError::Usage("QWEYL_THREADS must be positive".into()));
        }
        // A pool may already exist when called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parse `args`, run, print to `out`/`err`, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let body = if cli.json { report.to_json() + "\n" } else { report.to_text() };
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if out.write_all(body.as_bytes()).is_err() {
        return 2;
    }
    report.exit_code()
}
