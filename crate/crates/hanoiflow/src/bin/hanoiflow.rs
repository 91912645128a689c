use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hanoiflow::commands::{self, DiscRange, FlowOptions, Target};
use hanoiflow::records::{write_csv, write_json, Format, TableRow};
use hanoiflow::search::with_workers;
use hanoiflow::verify::{self, Level};
use hanoiflow_core::builder::{build_uniform_mcf, BuildMode};
use hanoiflow_core::oracles::{DEFAULT_EXPANSION_BUDGET, DEFAULT_TREEWIDTH_BUDGET};
use hanoiflow_core::Exact;

#[derive(Parser)]
#[command(name = "hanoiflow", version, about = "Flows, expansion and treewidth on Hanoi graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap on worker threads (default: all available).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex and edge counts, degree histogram, sibling matchings and facet sizes.
    Graph {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = commands::DEFAULT_GRAPH_BUDGET)]
        budget_vertices: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Builds the uniform multicommodity flow and reports congestion and bounds.
    Flow {
        #[arg(long)]
        p: usize,
        /// Disc count `n` or inclusive range `a..b`.
        #[arg(long)]
        n: DiscRange,
        /// Exact rational arithmetic instead of floating point.
        #[arg(long)]
        exact: bool,
        /// Track and validate every commodity (small graphs only).
        #[arg(long)]
        per_commodity: bool,
        /// Vertex budget for the construction.
        #[arg(long, default_value_t = commands::DEFAULT_FLOW_BUDGET)]
        budget_vertices: usize,
        /// Write the aggregate flow of the largest `n` as `tail head amount` records.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the acceptance checks; exits nonzero if any fails.
    Verify {
        /// Structural invariants only.
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        /// Every check, including exact oracles (the default).
        #[arg(long)]
        full: bool,
        /// Check a single instance instead of the suite.
        #[arg(long, requires = "n")]
        p: Option<usize>,
        #[arg(long, requires = "p")]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_EXPANSION_BUDGET)]
        budget_vertices: usize,
        /// Seed for the random graphs in the oracle cross-check.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact edge and vertex expansion with witness sets.
    Expansion {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = DEFAULT_EXPANSION_BUDGET)]
        budget_vertices: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exact treewidth with an elimination order.
    Treewidth {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = DEFAULT_TREEWIDTH_BUDGET)]
        budget_vertices: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct TargetArgs {
    #[arg(long, requires = "n", conflicts_with = "random")]
    p: Option<usize>,
    #[arg(long, requires = "p")]
    n: Option<usize>,
    /// Use a seeded random connected graph with this many vertices.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl TargetArgs {
    fn target(&self) -> anyhow::Result<Target> {
        match (self.p, self.n, self.random) {
            (Some(p), Some(n), None) => Ok(Target::Hanoi { p, n }),
            (None, None, Some(vertices)) => Ok(Target::Random { vertices, seed: self.seed }),
            _ => bail!("give either --p and --n, or --random"),
        }
    }
}

fn output(common: &Common) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &common.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<T: serde::Serialize>(
    common: &Common,
    record: &T,
    csv_rows: Option<&[TableRow]>,
    text: impl FnOnce() -> String,
) -> anyhow::Result<()> {
    let mut out = output(common)?;
    match common.format {
        Format::Text => out.write_all(text().as_bytes())?,
        Format::Json => write_json(record, &mut out)?,
        Format::Csv => match csv_rows {
            Some(rows) => write_csv(rows, &mut out)?,
            None => write_csv(std::slice::from_ref(record), &mut out)?,
        },
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Graph { p, n, budget_vertices, common } => {
            let r = with_workers(common.workers, || commands::graph_report(p, n, budget_vertices))??;
            match common.format {
                // Nested lists do not fit a flat CSV row.
                Format::Csv => bail!("graph reports are available as text or json"),
                _ => emit(&common, &r, None, || commands::render_graph_text(&r))?,
            }
            Ok(r.connected)
        }
        Command::Flow { p, n, exact, per_commodity, budget_vertices, dump, common } => {
            let opts = FlowOptions { exact, per_commodity, budget: budget_vertices, ..Default::default() };
            let records = with_workers(common.workers, || {
                n.0.clone().map(|n| commands::flow_report(p, n, opts)).collect::<Result<Vec<_>, _>>()
            })??;
            let rows: Vec<TableRow> = records.iter().map(TableRow::from).collect();
            emit(&common, &records, Some(&rows), || commands::render_flow_text(&records))?;
            if let Some(path) = dump {
                let n = *n.0.end();
                let file = BufWriter::new(File::create(&path).with_context(|| format!("cannot create {}", path.display()))?);
                if exact {
                    let out = build_uniform_mcf::<Exact>(p, n, BuildMode::Aggregate)?;
                    hanoiflow::dump::write_flow(&out.mcf.aggregate, file)?;
                } else {
                    let out = build_uniform_mcf::<f64>(p, n, BuildMode::Aggregate)?;
                    hanoiflow::dump::write_flow(&out.mcf.aggregate, file)?;
                }
            }
            Ok(records.iter().all(|r| r.validation.passed))
        }
        Command::Verify { quick, full: _, p, n, budget_vertices, seed, common } => {
            let results = with_workers(common.workers, || match (p, n) {
                (Some(p), Some(n)) => verify::verify_instance(p, n, budget_vertices),
                _ => Ok(verify::run_suite(if quick { Level::Quick } else { Level::Full }, seed)),
            })??;
            match common.format {
                Format::Csv => {
                    let mut out = output(&common)?;
                    write_csv(&results, &mut out)?;
                    out.flush()?;
                }
                _ => emit(&common, &results, None, || verify::render_text(&results))?,
            }
            Ok(results.iter().all(|r| r.passed))
        }
        Command::Expansion { target, budget_vertices, common } => {
            let target = target.target()?;
            let r = with_workers(common.workers, || commands::expansion_report(target, budget_vertices))??;
            match common.format {
                Format::Csv => bail!("expansion reports are available as text or json"),
                _ => emit(&common, &r, None, || commands::render_expansion_text(&r))?,
            }
            Ok(true)
        }
        Command::Treewidth { target, budget_vertices, common } => {
            let target = target.target()?;
            let r = with_workers(common.workers, || commands::treewidth_report(target, budget_vertices))??;
            match common.format {
                Format::Csv => bail!("treewidth reports are available as text or json"),
                _ => emit(&common, &r, None, || commands::render_treewidth_text(&r))?,
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
