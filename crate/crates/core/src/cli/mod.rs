//! Command-line front end. Every command reads a JSON problem file, runs one
//! operation with its verifications, and prints a deterministic report.
//! Exit status: 0 when every verdict passes, 1 when a verification fails,
//! 2 for usage, parse and precondition errors.

pub mod commands;
pub mod problem;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use commands::{Context, Failure, Outcome, SplineSelector};
pub use problem::{config_digest, parse_point, parse_problem, ParseError, ProblemFile};
pub use report::{CommandEcho, Report, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "vecpart", version, about = "Exact vector partition functions, their decompositions and splines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Verification window radius (overrides the problem file; default 6).
    #[arg(long, global = true)]
    pub window: Option<i64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub out: OutFormat,
    /// Seed for verification sample points; never changes results.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print elapsed time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct TopeArgs {
    /// Tope id as printed by `structure`.
    #[arg(long, conflicts_with = "at")]
    pub tope: Option<usize>,
    /// A point inside the tope, e.g. `2,1`.
    #[arg(long)]
    pub at: Option<String>,
}

#[derive(Debug, Args)]
pub struct WallArgs {
    /// Wall id as printed by `structure`.
    #[arg(long, conflicts_with = "on")]
    pub wall: Option<usize>,
    /// A point in the relative interior of the wall's facet.
    #[arg(long)]
    pub on: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Subspaces, cocircuits, topes, walls and big cells.
    Structure { file: PathBuf },
    /// Value of the partition function at a lattice point.
    Eval {
        file: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Quasi-polynomial agreeing with the partition function near a tope.
    Localize {
        file: PathBuf,
        #[command(flatten)]
        tope: TopeArgs,
    },
    /// Decomposition of the partition function for the collection of a tope or of beta.
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        tope: TopeArgs,
        #[arg(long, conflicts_with_all = ["tope", "at"])]
        beta: Option<String>,
    },
    /// Wall-crossing identity across one wall.
    Wallcross {
        file: PathBuf,
        #[command(flatten)]
        wall: WallArgs,
        /// Swap the two sides of the wall.
        #[arg(long)]
        flip: bool,
    },
    /// Paradan's decomposition for beta (flag or problem file).
    Paradan {
        file: PathBuf,
        #[arg(long)]
        beta: Option<String>,
    },
    /// Multivariate spline: a value, a piece, a wall, a big cell, or all pieces.
    Spline {
        file: PathBuf,
        #[arg(long, conflicts_with_all = ["tope", "wall", "on", "cell"])]
        at: Option<String>,
        #[arg(long, conflicts_with_all = ["wall", "on", "cell"])]
        tope: Option<usize>,
        #[arg(long, conflicts_with_all = ["on", "cell"])]
        wall: Option<usize>,
        #[arg(long, conflicts_with = "cell")]
        on: Option<String>,
        #[arg(long)]
        cell: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Structure { .. } => "structure",
            Command::Eval { .. } => "eval",
            Command::Localize { .. } => "localize",
            Command::Decompose { .. } => "decompose",
            Command::Wallcross { .. } => "wallcross",
            Command::Paradan { .. } => "paradan",
            Command::Spline { .. } => "spline",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Structure { file }
            | Command::Eval { file, .. }
            | Command::Localize { file, .. }
            | Command::Decompose { file, .. }
            | Command::Wallcross { file, .. }
            | Command::Paradan { file, .. }
            | Command::Spline { file, .. } => file,
        }
    }

    fn args(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        match self {
            Command::Structure { .. } => {}
            Command::Eval { point, .. } => put("point", Some(point.clone())),
            Command::Localize { tope, .. } => {
                put("tope", tope.tope.map(|t| t.to_string()));
                put("at", tope.at.clone());
            }
            Command::Decompose { tope, beta, .. } => {
                put("tope", tope.tope.map(|t| t.to_string()));
                put("at", tope.at.clone());
                put("beta", beta.clone());
            }
            Command::Wallcross { wall, flip, .. } => {
                put("wall", wall.wall.map(|t| t.to_string()));
                put("on", wall.on.clone());
                put("flip", Some(flip.to_string()));
            }
            Command::Paradan { beta, .. } => put("beta", beta.clone()),
            Command::Spline {
                at, tope, wall, on, cell, ..
            } => {
                put("at", at.clone());
                put("tope", tope.map(|t| t.to_string()));
                put("wall", wall.map(|t| t.to_string()));
                put("on", on.clone());
                put("cell", cell.map(|t| t.to_string()));
            }
        }
        m
    }
}

/// Errors that mean a check ran and failed, as opposed to bad input.
fn is_verification_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::VerificationFailed { .. }
            | Error::PiecesDisagree { .. }
            | Error::Inconsistent { .. }
            | Error::MembershipViolation { .. }
    )
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn dispatch(cmd: &Command, ctx: &Context) -> Outcome {
    match cmd {
        Command::Structure { .. } => commands::structure(ctx),
        Command::Eval { point, .. } => commands::eval(ctx, point),
        Command::Localize { tope, .. } => commands::localize_cmd(ctx, tope.tope, tope.at.as_deref()),
        Command::Decompose { tope, beta, .. } => {
            commands::decompose(ctx, tope.tope, tope.at.as_deref(), beta.as_deref())
        }
        Command::Wallcross { wall, flip, .. } => commands::wallcross(ctx, wall.wall, wall.on.as_deref(), *flip),
        Command::Paradan { beta, .. } => commands::paradan(ctx, beta.as_deref()),
        Command::Spline {
            at, tope, wall, on, cell, ..
        } => commands::spline(
            ctx,
            SplineSelector {
                at: at.as_deref(),
                tope: *tope,
                wall: *wall,
                on: on.as_deref(),
                cell: *cell,
            },
        ),
    }
}

/// Runs the tool on the given arguments, writing the report to `out` and
/// diagnostics to `err`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let started = Instant::now();
    let cmd = &cli.command;
    let file = cmd.file();
    let text = match read_input(file) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", file.display());
            return 2;
        }
    };
    let problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", file.display());
            return 2;
        }
    };
    let digest = config_digest(&problem.config);
    let ctx = match Context::new(problem, cli.window, cli.seed) {
        Ok(c) => c,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            return 2;
        }
        Err(Failure::Library(e)) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let echo = CommandEcho {
        name: cmd.name().to_string(),
        file: file.display().to_string(),
        args: cmd.args(),
    };
    let window = ctx.window().description().to_string();
    let report = match dispatch(cmd, &ctx) {
        Ok((result, verdicts)) => Report::new(echo, digest, window, result, verdicts),
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            return 2;
        }
        Err(Failure::Library(e)) if is_verification_failure(&e) => Report::new(
            echo,
            digest,
            window,
            serde_json::Value::Null,
            vec![Verdict::new(cmd.name(), false, 0, Some(e.to_string()))],
        ),
        Err(Failure::Library(e)) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let rendered = match cli.out {
        OutFormat::Json => report.to_json() + "\n",
        OutFormat::Text => report.to_text(),
    };
    let _ = out.write_all(rendered.as_bytes());
    if cli.timing {
        let _ = writeln!(err, "elapsed: {} ms", started.elapsed().as_millis());
    }
    if report.passed {
        0
    } else {
        1
    }
}
