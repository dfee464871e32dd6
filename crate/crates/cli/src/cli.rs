//! Argument parsing and the top-level run loop shared by the binary and tests.

use crate::commands::{self, parse_pq, Command};
use crate::config::{parse_list, Format, RunConfig};
use crate::error::{CliError, CliResult, ErrorKind};
use clap::error::ErrorKind as ClapKind;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Parser, Debug)]
#[command(name = "waring", version, about = "Exponent bounds, exact counts and exponential sums for Waring's problem")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Debug)]
struct Global {
    /// key = value file applied before the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    k: Option<String>,
    /// a:b, inclusive
    #[arg(long = "k-range", global = true)]
    k_range: Option<String>,
    /// 1 or 2
    #[arg(long, global = true)]
    theorem: Option<String>,
    /// comma-separated list
    #[arg(long = "P", global = true)]
    p: Option<String>,
    #[arg(long, global = true)]
    theta: Option<String>,
    #[arg(long, global = true)]
    s: Option<String>,
    #[arg(long = "budget-ops", global = true, allow_hyphen_values = true)]
    budget_ops: Option<String>,
    #[arg(long = "budget-grid", global = true, allow_hyphen_values = true)]
    budget_grid: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long = "paper-faithful", global = true)]
    paper_faithful: bool,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// G(k) bounds, sigma data and exponent tables over the k range
    Bounds,
    /// Exact S_s counts, optional T_pq runs, exponent fits
    Count {
        /// full ([1..P]) or smooth
        #[arg(long, default_value = "full")]
        source: String,
        #[arg(long, default_value_t = 1)]
        levels: u32,
        /// p,q
        #[arg(long)]
        pq: Option<String>,
    },
    /// Smooth set construction, residue profiles, size estimate
    Smooth {
        /// use the multi-level schedule driven by this delta
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 1)]
        levels: u32,
        #[arg(long, default_value = "3,4,5,7")]
        moduli: String,
        #[arg(long = "set-out")]
        set_out: Option<PathBuf>,
    },
    /// Arc dissection, moments over arcs, Weyl ratios
    Arcs {
        /// comma-separated W values for the minor-arc scaling fit
        #[arg(long = "W")]
        w: Option<String>,
        #[arg(long, default_value_t = 16)]
        samples: u32,
        #[arg(long, default_value_t = 512)]
        points: u32,
    },
    /// Difference polynomials and balancing residuals
    Diff {
        #[arg(long, default_value = "1")]
        h: String,
        #[arg(long, default_value = "2")]
        primes: String,
    },
    /// Runs the acceptance suite
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn resolve(g: &Global) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &g.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        cfg.apply_file(&text)?;
    }
    let flags = [
        ("k", &g.k),
        ("k-range", &g.k_range),
        ("theorem", &g.theorem),
        ("P", &g.p),
        ("theta", &g.theta),
        ("s", &g.s),
        ("budget-ops", &g.budget_ops),
        ("budget-grid", &g.budget_grid),
        ("seed", &g.seed),
        ("format", &g.format),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if let Some(out) = &g.out {
        cfg.out = Some(out.clone());
    }
    cfg.paper_faithful |= g.paper_faithful;
    Ok(cfg)
}

fn command(sub: Sub) -> CliResult<Command> {
    Ok(match sub {
        Sub::Bounds => Command::Bounds,
        Sub::Count { source, levels, pq } => Command::Count {
            source,
            levels,
            pq: pq.as_deref().map(parse_pq).transpose()?,
        },
        Sub::Smooth {
            delta,
            levels,
            moduli,
            set_out,
        } => Command::Smooth {
            delta,
            levels,
            moduli: parse_list("moduli", &moduli)?,
            set_out,
        },
        Sub::Arcs { w, samples, points } => Command::Arcs {
            w: w.as_deref().map(|v| parse_list("W", v)).transpose()?.unwrap_or_default(),
            samples,
            points,
        },
        Sub::Diff { h, primes } => Command::Diff {
            h: parse_list("h", &h)?,
            primes: parse_list("primes", &primes)?,
        },
        Sub::Verify { quick } => Command::Verify { quick },
    })
}

fn timestamp() -> String {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_default()
}

fn failure(e: CliError) -> Invocation {
    Invocation {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: e.to_json() + "\n",
    }
}

/// Parses `args` (program name first) and runs the command. Output is
/// produced only once the command has finished.
pub fn execute<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ClapKind::DisplayHelp | ClapKind::DisplayVersion) => {
            return Invocation {
                code: 0,
                stdout: e.to_string(),
                stderr: String::new(),
            }
        }
        Err(e) => return failure(CliError::config(e.to_string().trim_end().to_string())),
    };
    let run = || -> CliResult<(String, bool, RunConfig)> {
        let cfg = resolve(&cli.global)?;
        let cmd = command(cli.command)?;
        let run = commands::run(&cmd, &cfg)?;
        let text = match cfg.format {
            Format::Csv => run.report.to_csv(&timestamp()),
            Format::Json => run.report.to_json(&timestamp()),
        };
        Ok((text, run.ok, cfg))
    };
    let (text, ok, cfg) = match run() {
        Ok(v) => v,
        Err(e) => return failure(e),
    };
    let stdout = match &cfg.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => String::new(),
            Err(e) => return failure(CliError::io(format!("{}: {e}", path.display()))),
        },
        None => text,
    };
    let (code, stderr) = if ok {
        (0, String::new())
    } else {
        let e = CliError {
            kind: ErrorKind::Verification,
            message: "at least one acceptance criterion failed".into(),
        };
        (e.exit_code(), e.to_json() + "\n")
    };
    Invocation { code, stdout, stderr }
}
