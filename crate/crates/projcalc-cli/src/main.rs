//! `projcalc`: batch front door for the two-projection calculus.
//!
//! Every command prints one JSON report to stdout. Exit codes: 0 all
//! checks pass, 1 a residual or agreement check failed, 2 input could
//! not be parsed, 3 input parsed but failed numeric validation.

mod commands;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use projcalc_core::rep::RepSpec;
use projcalc_core::ToleranceConfig;

use formats::{read_spec, CliError, InputDigest, Report, SCHEMA};

#[derive(Parser)]
#[command(
    name = "projcalc",
    version,
    about = "Two-projection calculus: decomposition, index certificates, word algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Bound on ‖P²−P‖ and ‖P−P*‖ accepted as a projection.
    #[arg(long, default_value_t = 1e-9)]
    tol_validate: f64,
    /// Radius for clustering eigenvalues at −1, 0, +1 and for ± pairing.
    #[arg(long, default_value_t = 1e-7)]
    tol_cluster: f64,
    /// Relative singular-value cut for numerical rank.
    #[arg(long, default_value_t = 1e-8)]
    tol_rank: f64,
    /// Residual level reported as failure in certificates.
    #[arg(long, default_value_t = 1e-6)]
    tol_report: f64,
}

impl TolArgs {
    fn config(&self) -> Result<ToleranceConfig, CliError> {
        ToleranceConfig::new(
            self.tol_validate,
            self.tol_cluster,
            self.tol_rank,
            self.tol_report,
        )
        .map_err(CliError::from)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a pair of projections into corners, angles, and a basis.
    Decompose {
        p: PathBuf,
        q: PathBuf,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Certify the index through the rank, trace, and pairing routes.
    Index {
        p: PathBuf,
        q: PathBuf,
        /// Highest k for tr D^{2k+1} and the pairing.
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Symbolic word algebra.
    Word {
        #[command(subcommand)]
        word: WordCommand,
    },
    /// Build the block model of a spec and verify its identities.
    BuildRep {
        spec: PathBuf,
        /// Write {prefix}P1.json, {prefix}P2.json, {prefix}V.json.
        #[arg(long)]
        out_prefix: Option<String>,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Generate a seeded scrambled pair with a ground-truth certificate.
    Gen {
        /// Spec file; alternative to the inline sector flags.
        #[arg(long, conflicts_with_all = ["m11", "m00", "m10", "m01", "point"])]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        m11: usize,
        #[arg(long, default_value_t = 0)]
        m00: usize,
        #[arg(long, default_value_t = 0)]
        m10: usize,
        #[arg(long, default_value_t = 0)]
        m01: usize,
        /// Cell group as THETA:MULT (radians); repeatable.
        #[arg(long = "point", value_name = "THETA:MULT")]
        point: Vec<String>,
        #[arg(long)]
        seed: u64,
        /// Prefix for {prefix}P.json, {prefix}Q.json, {prefix}truth.json.
        #[arg(long)]
        out_prefix: String,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Run the full invariant suite on one pair.
    Check {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Tabulate tr D^{2k+1} for k = 0..=k_max with a stability verdict.
    TracePowers {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[command(flatten)]
        tols: TolArgs,
    },
}

#[derive(Subcommand)]
enum WordCommand {
    /// Multiply two words; --n for the free product, --m for the crossed product.
    Multiply {
        left: String,
        right: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Apply the isomorphism; --m maps a crossed element to the free
    /// product, --n maps a free-product word back.
    Iso {
        input: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Evaluate a word on concrete projections (one --proj per factor).
    Eval {
        input: String,
        #[arg(long = "proj", required = true)]
        projections: Vec<PathBuf>,
        /// Treat the input as a crossed element over m = #projections − 1.
        #[arg(long)]
        crossed: bool,
        #[command(flatten)]
        tols: TolArgs,
    },
}

fn parse_point(raw: &str) -> Result<(f64, usize), CliError> {
    let (theta, mult) = raw
        .split_once(':')
        .ok_or_else(|| CliError::parse(format!("point '{raw}' is not THETA:MULT")))?;
    let theta: f64 = theta
        .parse()
        .map_err(|e| CliError::parse(format!("point '{raw}': {e}")))?;
    let mult: usize = mult
        .parse()
        .map_err(|e| CliError::parse(format!("point '{raw}': {e}")))?;
    Ok((theta, mult))
}

fn run(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Decompose { p, q, tols } => commands::cmd_decompose(&p, &q, &tols.config()?),
        Command::Index { p, q, k_max, tols } => {
            commands::cmd_index(&p, &q, k_max, &tols.config()?)
        }
        Command::Word { word } => match word {
            WordCommand::Multiply {
                left,
                right,
                n,
                m,
                tols,
            } => commands::cmd_word_multiply(&left, &right, n, m, &tols.config()?),
            WordCommand::Iso { input, n, m, tols } => {
                commands::cmd_word_iso(&input, n, m, &tols.config()?)
            }
            WordCommand::Eval {
                input,
                projections,
                crossed,
                tols,
            } => commands::cmd_word_eval(&input, &projections, crossed, &tols.config()?),
        },
        Command::BuildRep {
            spec,
            out_prefix,
            tols,
        } => commands::cmd_build_rep(&spec, out_prefix.as_deref(), &tols.config()?),
        Command::Gen {
            spec,
            m11,
            m00,
            m10,
            m01,
            point,
            seed,
            out_prefix,
            tols,
        } => {
            let tol = tols.config()?;
            let (spec, digest): (RepSpec, Option<InputDigest>) = match spec {
                Some(path) => {
                    let (spec, digest) = read_spec("spec", &path)?;
                    (spec, Some(digest))
                }
                None => {
                    let points = point
                        .iter()
                        .map(|raw| parse_point(raw))
                        .collect::<Result<Vec<_>, _>>()?;
                    (RepSpec::new(m11, m00, m10, m01, points)?, None)
                }
            };
            commands::cmd_gen(spec, digest, seed, &out_prefix, &tol)
        }
        Command::Check { p, q, k_max, tols } => {
            commands::cmd_check(&p, &q, k_max, &tols.config()?)
        }
        Command::TracePowers { p, q, k_max, tols } => {
            commands::cmd_trace_powers(&p, &q, k_max, &tols.config()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            ExitCode::from(u8::from(!report.pass))
        }
        Err(err) => {
            let envelope = serde_json::json!({
                "schema": SCHEMA,
                "error": err.message,
                "exit_code": err.code,
            });
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&envelope).expect("error serializes")
            );
            ExitCode::from(err.code)
        }
    }
}
