use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use domsets::engine::{
    count_dominating_exact_with, estimate_dominating_fraction, minimum_dominating_set, CountOptions,
    DEFAULT_WORK_BUDGET,
};
use domsets::generators::{epsilon_schedule, erdos_renyi, gjj_gamma3, markov_epsilon_threshold};
use domsets::moments::{cor24_lower_bound, cor32_bracket, eq1_max_a, MomentReport};
use domsets::oracle::brute_expectation;
use domsets::{Error, Graph};
use domsets_cli::{all_rows_over_budget, run_experiment, write_csv, ExperimentConfig, ExperimentError};
use serde_json::json;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "domsets", version, about = "Dominating sets in dense random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenModel {
    Er,
    Gjj,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Gen {
        #[arg(long, value_enum)]
        model: GenModel,
        #[arg(long)]
        n: usize,
        /// Edge probability for `er`.
        #[arg(long, conflicts_with = "gamma")]
        p: Option<f64>,
        /// Derive p = 1 - epsilon from the schedule for this gamma
        /// (or from the first-moment threshold when --delta is given).
        #[arg(long)]
        gamma: Option<usize>,
        #[arg(long, requires = "gamma")]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Domination number, a minimum dominating set and the row-zero profile.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Count (or estimate the fraction of) dominating k-sets.
    Count {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Estimate from this many uniform k-subsets instead of counting.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
        budget: u64,
    },
    /// Moment formulas and bound brackets for G(n, 1 - epsilon).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        epsilon: f64,
        /// Chebyshev scale; defaults to ln n.
        #[arg(long)]
        phi: Option<f64>,
    },
    /// Exact moments by enumerating every graph on n <= 6 vertices.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        epsilon: f64,
    },
    /// Run an experiment config and write the result CSV.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            Some(Error::NegativeVariance { .. }) | None => EXIT_FAILURE,
            Some(_) => EXIT_CONFIG,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Graph::from_edge_list(&text)?)
}

fn write_output(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen {
            model,
            n,
            p,
            gamma,
            delta,
            seed,
            out,
        } => {
            let g = match model {
                GenModel::Gjj => gjj_gamma3(n)?,
                GenModel::Er => {
                    let p = match (p, gamma) {
                        (Some(p), _) => p,
                        (None, Some(gamma)) => {
                            let eps = match delta {
                                Some(d) => markov_epsilon_threshold(gamma, n, d)?,
                                None => epsilon_schedule(gamma, n)?,
                            };
                            1.0 - eps
                        }
                        (None, None) => {
                            return Err(Failure {
                                code: EXIT_CONFIG,
                                error: anyhow::anyhow!("er needs --p or --gamma"),
                            });
                        }
                    };
                    erdos_renyi(n, p, seed)?
                }
            };
            write_output(&out, &g.to_edge_list())?;
        }
        Command::Analyze { input } => {
            let g = read_graph(&input)?;
            let mut set = minimum_dominating_set(&g);
            set.sort_unstable();
            print_json(&json!({
                "n": g.n(),
                "edges": g.edge_count(),
                "domination_number": set.len(),
                "minimum_dominating_set": set,
                "row_zero_profile": g.row_zero_profile(),
            }));
        }
        Command::Count {
            input,
            k,
            sample,
            seed,
            budget,
        } => {
            let g = read_graph(&input)?;
            let value = match sample {
                Some(trials) => serde_json::to_value(estimate_dominating_fraction(&g, k, trials, seed)?),
                None => {
                    let opts = CountOptions {
                        budget,
                        ..CountOptions::default()
                    };
                    serde_json::to_value(count_dominating_exact_with(&g, k, opts)?)
                }
            }
            .expect("results serialize");
            print_json(&value);
        }
        Command::Bounds { n, gamma, epsilon, phi } => {
            let phi = phi.unwrap_or((n as f64).ln());
            let moments = MomentReport::new(n, gamma, epsilon, phi)?;
            let or_error = |r: domsets::Result<serde_json::Value>| match r {
                Ok(v) => v,
                Err(e) => json!({ "error": e.to_string() }),
            };
            let b = gamma.saturating_sub(1);
            print_json(&json!({
                "moments": moments,
                "max_count_lower_bound": or_error(cor24_lower_bound(n, gamma).map(|v| json!(v))),
                "bracket": or_error(cor32_bracket(n, gamma).map(|v| json!(v))),
                "row_zero_threshold": or_error(eq1_max_a(n, b).map(|v| json!(v))),
            }));
        }
        Command::Oracle { n, gamma, epsilon } => {
            let exact = brute_expectation(n, gamma, epsilon)?;
            let formula = MomentReport::new(n, gamma, epsilon, 1.0)?;
            print_json(&json!({
                "enumerated": exact,
                "formula_expected": formula.expected,
                "formula_second_moment": formula.second_moment,
            }));
        }
        Command::Experiment { config, out } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = ExperimentConfig::from_toml(&text).map_err(|e| Failure {
                code: EXIT_CONFIG,
                error: e.into(),
            })?;
            let rows = run_experiment(&cfg).map_err(|e| match e {
                ExperimentError::Config(c) => Failure {
                    code: EXIT_CONFIG,
                    error: c.into(),
                },
                ExperimentError::Core(c) => c.into(),
            })?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf).context("formatting csv")?;
            write_output(&out, &String::from_utf8(buf).expect("csv output is utf-8"))?;
            if all_rows_over_budget(&rows) {
                return Err(Failure {
                    code: EXIT_BUDGET,
                    error: anyhow::anyhow!("every row exceeded the work budget of {}", cfg.budget),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
