use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use taufn::checks::*;
use taufn::giambelli::*;
use taufn::partitions::{Partition, StrictPartition};
use taufn::schur_kp::{expand_schur, schur_poly};
use taufn::schur_q::{expand_q, q_schur_poly};
use taufn::{CheckMode, CheckReport, GradedSeries, Rational};

use crate::json::*;
use crate::selftest;

#[derive(Debug, Parser)]
#[command(
    name = "taufn",
    version,
    about = "Exact checks for KP and BKP tau functions"
)]
pub struct Cli {
    /// Write the JSON result to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Include elapsed times in reports (output is then not reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schur function χ_λ(x).
    Schur {
        /// Comma-separated parts, e.g. 2,1 (empty for the empty partition).
        #[arg(long, allow_hyphen_values = true)]
        partition: String,
    },
    /// Schur Q-function Q_λ(x) for a strict partition.
    Schurq {
        #[arg(long, allow_hyphen_values = true)]
        partition: String,
        /// Evaluate at x/2.
        #[arg(long)]
        half: bool,
    },
    /// Expand a series in the Schur (kp) or Schur Q (bkp) basis.
    Expand {
        #[arg(long)]
        hierarchy: Hierarchy,
        #[arg(long, value_name = "FILE")]
        tau: PathBuf,
        #[arg(long)]
        max_weight: Option<u32>,
    },
    /// Fill a coefficient table from Giambelli seed data and resum it.
    Synth {
        #[arg(long)]
        hierarchy: Hierarchy,
        /// Seed document, or a full table whose hook/pair entries are used.
        #[arg(long, value_name = "FILE")]
        seed_table: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
    },
    /// Check a bilinear identity or the Giambelli criterion.
    Check(CheckArgs),
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        rng_seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    ThreeTerm,
    FourTerm,
    Hirota,
    Determinant,
    Addition,
    PfaffianAddition,
    Giambelli,
}

impl Identity {
    fn hierarchies(self) -> &'static [Hierarchy] {
        use Identity::*;
        match self {
            ThreeTerm | Determinant | Addition => &[Hierarchy::Kp],
            FourTerm | PfaffianAddition => &[Hierarchy::Bkp],
            Hirota | Giambelli => &[Hierarchy::Kp, Hierarchy::Bkp],
        }
    }

    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub hierarchy: Hierarchy,
    #[arg(long)]
    pub identity: Identity,
    #[arg(long, default_value = "graded")]
    pub mode: Mode,
    #[arg(long, value_name = "FILE")]
    pub tau: Option<PathBuf>,
    /// Coefficient table (giambelli only), instead of --tau.
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
    /// Truncate the input to this weight first.
    #[arg(long)]
    pub max_weight: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub rng_seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Order n of the determinant (default 2), addition (3) or
    /// pfaffian-addition (4) identity.
    #[arg(long)]
    pub order: Option<usize>,
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let (text, pass) = match execute(&cli) {
        Ok(v) => v,
        Err(e) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {e:#}\n"),
            }
        }
    };
    let code = if pass { EXIT_PASS } else { EXIT_FAIL };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_series(path: &Path, hierarchy: Hierarchy) -> anyhow::Result<GradedSeries> {
    let doc: SeriesDoc = parse(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    if doc.kind != hierarchy {
        bail!(
            "{} holds a {} series but --hierarchy is {}",
            path.display(),
            doc.kind.as_str(),
            hierarchy.as_str()
        );
    }
    doc.to_series()
        .with_context(|| format!("in {}", path.display()))
}

fn parse_parts(s: &str) -> anyhow::Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .with_context(|| format!("bad part `{p}` in --partition"))
        })
        .collect()
}

fn series_output(s: &GradedSeries) -> anyhow::Result<(String, bool)> {
    Ok((to_canonical(&SeriesDoc::from_series(s)?), true))
}

fn truncate(tau: GradedSeries, max_weight: Option<u32>) -> anyhow::Result<GradedSeries> {
    match max_weight {
        None => Ok(tau),
        Some(w) if w <= tau.truncation() => Ok(tau.truncated(w)),
        Some(w) => bail!(
            "--max-weight {w} exceeds the input truncation weight {}",
            tau.truncation()
        ),
    }
}

fn execute(cli: &Cli) -> anyhow::Result<(String, bool)> {
    match &cli.command {
        Command::Schur { partition } => {
            let lam = Partition::new(parse_parts(partition)?)?;
            series_output(&schur_poly(&lam))
        }
        Command::Schurq { partition, half } => {
            let lam = StrictPartition::new(parse_parts(partition)?)?;
            let mut q = q_schur_poly(&lam);
            if *half {
                q = q.scale_x(&Rational::new(1, 2));
            }
            series_output(&q)
        }
        Command::Expand {
            hierarchy,
            tau,
            max_weight,
        } => {
            let tau = truncate(read_series(tau, *hierarchy)?, *max_weight)?;
            let doc = match hierarchy {
                Hierarchy::Kp => TableDoc::from_schur(&expand_schur(&tau)?),
                Hierarchy::Bkp => TableDoc::from_q(&expand_q(&tau)?),
            };
            Ok((to_canonical(&doc), true))
        }
        Command::Synth {
            hierarchy,
            seed_table,
            max_weight,
        } => {
            let text = read(seed_table)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .with_context(|| format!("in {}", seed_table.display()))?;
            let from_table = value.get("basis").is_some();
            let ctx = || format!("in {}", seed_table.display());
            let (table, tau) = match hierarchy {
                Hierarchy::Kp => {
                    let seed = if from_table {
                        match parse::<TableDoc>(&text)
                            .and_then(|d| d.to_table())
                            .with_context(ctx)?
                        {
                            Table::Schur(t) => KpHookSeed::from_table(&t),
                            Table::Q(_) => bail!("a schur-q table cannot seed a kp synthesis"),
                        }
                    } else {
                        parse::<KpSeedDoc>(&text)
                            .and_then(|d| d.to_seed())
                            .with_context(ctx)?
                    };
                    let (table, tau) = giambelli_synthesize_kp(&seed, *max_weight);
                    (TableDoc::from_schur(&table), tau)
                }
                Hierarchy::Bkp => {
                    let seed = if from_table {
                        match parse::<TableDoc>(&text)
                            .and_then(|d| d.to_table())
                            .with_context(ctx)?
                        {
                            Table::Q(t) => BkpPairSeed::from_table(&t),
                            Table::Schur(_) => bail!("a schur table cannot seed a bkp synthesis"),
                        }
                    } else {
                        parse::<BkpSeedDoc>(&text)
                            .and_then(|d| d.to_seed())
                            .with_context(ctx)?
                    };
                    let (table, tau) = giambelli_synthesize_bkp(&seed, *max_weight);
                    (TableDoc::from_q(&table), tau)
                }
            };
            let doc = json!({
                "table": serde_json::to_value(&table)?,
                "tau": serde_json::to_value(SeriesDoc::from_series(&tau)?)?,
            });
            Ok((to_canonical(&doc), true))
        }
        Command::Check(args) => {
            let mut report = check(args)?;
            if args.hierarchy == Hierarchy::Bkp && report.convention.is_none() {
                report = report.with_convention(BKP_CONVENTION);
            }
            let doc = ReportDoc::from_report(&report, cli.timing);
            Ok((to_canonical(&doc), report.pass))
        }
        Command::Selftest {
            max_weight,
            rng_seed,
        } => {
            if !(selftest::MIN_WEIGHT..=selftest::MAX_WEIGHT).contains(max_weight) {
                bail!(
                    "selftest --max-weight must lie in {}..={}",
                    selftest::MIN_WEIGHT,
                    selftest::MAX_WEIGHT
                );
            }
            let cfg = selftest::Config {
                max_weight: *max_weight,
                seed: *rng_seed,
            };
            let outcomes = selftest::run_all(&cfg);
            let pass = outcomes.iter().all(|o| o.pass);
            let criteria: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|o| {
                    let mut v = serde_json::to_value(o).expect("outcome serializes");
                    if cli.timing {
                        v["elapsed_ms"] = json!(o.elapsed.as_millis() as u64);
                    }
                    v
                })
                .collect();
            let doc = json!({ "max_weight": max_weight, "rng_seed": rng_seed, "pass": pass, "criteria": criteria });
            Ok((to_canonical(&doc), pass))
        }
    }
}

fn check(args: &CheckArgs) -> anyhow::Result<CheckReport> {
    let h = args.hierarchy;
    let id = args.identity;
    if !id.hierarchies().contains(&h) {
        bail!(
            "identity {} does not apply to the {} hierarchy",
            id.name(),
            h.as_str()
        );
    }
    let mode: CheckMode = args.mode.into();
    if matches!(id, Identity::Hirota | Identity::Giambelli) && mode == CheckMode::Exact {
        bail!("identity {} is only available in graded mode", id.name());
    }
    if args.table.is_some() && id != Identity::Giambelli {
        bail!("--table is only accepted by the giambelli identity");
    }
    if args.order.is_some()
        && !matches!(
            id,
            Identity::Determinant | Identity::Addition | Identity::PfaffianAddition
        )
    {
        bail!("--order does not apply to identity {}", id.name());
    }
    if args.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let opts = CheckOptions {
        seed: args.rng_seed,
        samples: args.samples,
    };

    if id == Identity::Giambelli {
        let table = match (&args.table, &args.tau) {
            (Some(path), None) => {
                let doc: TableDoc =
                    parse(&read(path)?).with_context(|| format!("in {}", path.display()))?;
                let table = doc
                    .to_table()
                    .with_context(|| format!("in {}", path.display()))?;
                if table.hierarchy() != h {
                    bail!("{}", DocError::Basis(format!("{:?}", doc.basis)));
                }
                match (table, args.max_weight) {
                    (Table::Schur(t), Some(w)) => Table::Schur(t.restricted(w)),
                    (Table::Q(t), Some(w)) => Table::Q(t.restricted(w)),
                    (t, None) => t,
                }
            }
            (None, Some(path)) => {
                let tau = truncate(read_series(path, h)?, args.max_weight)?;
                match h {
                    Hierarchy::Kp => Table::Schur(expand_schur(&tau)?),
                    Hierarchy::Bkp => Table::Q(expand_q(&tau)?),
                }
            }
            _ => bail!("giambelli needs exactly one of --tau or --table"),
        };
        return Ok(match table {
            Table::Schur(t) => giambelli_verify_kp(&t)?,
            Table::Q(t) => giambelli_verify_bkp(&t)?,
        });
    }

    let path = args
        .tau
        .as_ref()
        .ok_or_else(|| anyhow!("--tau is required"))?;
    let tau = truncate(read_series(path, h)?, args.max_weight)?;
    let report = match id {
        Identity::ThreeTerm => kp_three_term_check(&tau, mode, &opts)?,
        Identity::FourTerm => bkp_four_term_check(&tau, mode, &opts)?,
        Identity::Determinant => {
            kp_determinant_formula_check(&tau, args.order.unwrap_or(2), mode, &opts)?
        }
        Identity::Addition => {
            kp_addition_formula_check(&tau, args.order.unwrap_or(3), mode, &opts)?
        }
        Identity::PfaffianAddition => {
            bkp_pfaffian_addition_check(&tau, args.order.unwrap_or(4), mode, &opts)?
        }
        Identity::Hirota => match h {
            Hierarchy::Kp => kp_hirota_check(&tau)?,
            Hierarchy::Bkp => bkp_hirota_check(&tau)?,
        },
        Identity::Giambelli => unreachable!("handled above"),
    };
    Ok(report)
}
