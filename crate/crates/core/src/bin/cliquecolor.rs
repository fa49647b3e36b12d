//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a search or repair budget ran out.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use cliquecolor::coloring::{exact_chromatic_number, exact_clique_chromatic_number, monochromatic_maximal_cliques, ExactBudget};
use cliquecolor::harness::{compare_with_theory, comparison_table, read_records, run_sweep, write_records, SweepConfig};
use cliquecolor::lower::{certify, CertifyOptions};
use cliquecolor::params::lambda_report;
use cliquecolor::upper::{color_and_repair, Variant};
use cliquecolor::{Coloring, Error, Graph, ParamSchedule, Result};

#[derive(Parser)]
#[command(name = "cliquecolor", version, about = "Clique colorings of random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G(n, p) and write it as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact clique chromatic number (or proper chromatic number).
    Chromatic {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 50_000_000)]
        node_limit: u64,
        /// Compute the proper chromatic number instead.
        #[arg(long)]
        proper: bool,
    },
    /// Color with procedure A or B, then repair.
    Color {
        #[arg(long, conflicts_with = "n")]
        graph: Option<PathBuf>,
        #[arg(long, requires = "p")]
        n: Option<usize>,
        /// Edge probability; estimated from the edge density when absent.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "A")]
        variant: Variant,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        repair_budget: usize,
        /// Where to write the final coloring.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search a coloring for a monochromatic inclusion-maximal clique.
    Certify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        /// Edge probability for the schedule; estimated when absent.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Candidates sampled from the candidate family.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Replace the non-neighbor threshold by this fraction of |W|.
        #[arg(long)]
        relax: Option<f64>,
    },
    /// Print the parameter schedule and bound calculus for (n, p).
    Params {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Override delta.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Run a sweep described by a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the CSV path of the config; stdout when neither is set.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare sweep records with the closed-form predictions.
    Compare {
        #[arg(long)]
        records: PathBuf,
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Check a coloring for monochromatic maximal cliques; exits 0 iff valid.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_budget() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// A closed stdout (e.g. piping into `head`) ends the run quietly.
fn is_broken_pipe(e: &Error) -> bool {
    let io = match e {
        Error::Io(io) => Some(io),
        Error::Csv(c) => match c.kind() {
            csv::ErrorKind::Io(io) => Some(io),
            _ => None,
        },
        _ => None,
    };
    io.is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn density(g: &Graph) -> f64 {
    let n = g.n() as f64;
    if n < 2.0 {
        return 0.5;
    }
    (g.edge_count() as f64 / (n * (n - 1.0) / 2.0)).clamp(1e-6, 1.0 - 1e-6)
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Gen { n, p, seed, out } => {
            let g = Graph::sample_gnp(n, p, seed)?;
            match out {
                Some(path) => g.save(&path)?,
                None => emit(&g.to_edge_list())?,
            }
        }
        Command::Chromatic {
            graph,
            node_limit,
            proper,
        } => {
            let g = Graph::load(&graph)?;
            let budget = ExactBudget { node_limit };
            let r = if proper {
                exact_chromatic_number(&g, &budget)?
            } else {
                exact_clique_chromatic_number(&g, &budget)?
            };
            print_json(&json!({
                "measure": if proper { "chromatic" } else { "clique_chromatic" },
                "value": r.value,
                "nodes": r.nodes,
                "witness": r.witness.as_slice(),
            }))?;
        }
        Command::Color {
            graph,
            n,
            p,
            seed,
            variant,
            epsilon,
            repair_budget,
            out,
        } => {
            let g = match (graph, n) {
                (Some(path), _) => Graph::load(&path)?,
                (None, Some(n)) => Graph::sample_gnp(n, p.expect("clap requires p"), seed)?,
                (None, None) => return Err(Error::Config("either --graph or --n is required".into())),
            };
            let p = p.unwrap_or_else(|| density(&g));
            let run = color_and_repair(&g, variant, p, epsilon, repair_budget)?;
            let final_coloring = run.repaired.as_ref().unwrap_or(&run.pre_repair);
            if let Some(path) = out {
                final_coloring.save(&path)?;
            }
            print_json(&json!({
                "n": g.n(),
                "p": p,
                "report": run.report,
                "palette": final_coloring.palette_size(),
                "repairs": run.repair.as_ref().map(|r| r.extra_colors),
                "valid": run.repaired.is_some(),
                "repair_error": run.repair_error,
            }))?;
            if run.repaired.is_none() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Certify {
            graph,
            coloring,
            p,
            seed,
            budget,
            relax,
        } => {
            let g = Graph::load(&graph)?;
            let c = Coloring::load(&coloring, g.n())?;
            let p = p.unwrap_or_else(|| density(&g));
            let sch = ParamSchedule::build(g.n().max(3) as f64, p, None)?;
            let opts = CertifyOptions {
                candidate_budget: budget,
                relax,
                ..CertifyOptions::new(&sch, seed)
            };
            let start = std::time::Instant::now();
            let r = certify(&g, &c, &sch, &opts)?;
            print_json(&json!({
                "certificate": r.certificate.as_ref().map(|k| k.one_based()),
                "report": r,
                "wall_ms": start.elapsed().as_secs_f64() * 1e3,
            }))?;
        }
        Command::Params { n, p, epsilon, delta } => {
            let mut sch = ParamSchedule::build(n, p, epsilon)?;
            if let Some(d) = delta {
                sch = sch.with_delta(d)?;
            }
            match lambda_report(&sch) {
                Ok(rep) => print_json(&serde_json::to_value(rep)?)?,
                Err(e) => print_json(&json!({ "schedule": sch, "lambda_error": e.to_string() }))?,
            }
        }
        Command::Sweep { config, csv } => {
            let cfg = SweepConfig::load(&config)?;
            let out = run_sweep(&cfg)?;
            match csv.or_else(|| cfg.output.csv.clone()) {
                Some(path) => write_records(&out.records, std::fs::File::create(path)?)?,
                None => write_records(&out.records, std::io::stdout().lock())?,
            }
            if let Some(path) = &cfg.output.json {
                let summary = json!({
                    "config": cfg,
                    "records": out.records,
                    "wall_ms": out.wall_ms,
                    "comparison": compare_with_theory(&out.records),
                });
                std::fs::write(path, serde_json::to_string_pretty(&summary)?)?;
            }
            if out.budget_exhausted() {
                eprintln!("warning: a repair budget ran out in at least one trial");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Compare { records, json } => {
            let recs = read_records(std::fs::File::open(records)?)?;
            if recs.is_empty() {
                return Err(Error::Config("no records to compare".into()));
            }
            let rows = compare_with_theory(&recs);
            if json {
                print_json(&serde_json::to_value(rows)?)?;
            } else {
                emit(&comparison_table(&rows))?;
            }
        }
        Command::Validate { graph, coloring } => {
            let g = Graph::load(&graph)?;
            let c = Coloring::load(&coloring, g.n())?;
            let mono = monochromatic_maximal_cliques(&g, &c, Some(10))?;
            print_json(&json!({
                "valid": mono.is_empty(),
                "palette": c.palette_size(),
                "monochromatic_cliques": mono.iter().map(|k| k.one_based()).collect::<Vec<_>>(),
            }))?;
            if !mono.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
