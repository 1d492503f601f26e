//! `qgt` — run distributed-optimization experiments from TOML configs,
//! compare the resulting traces, and inspect graph spectra.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use qgt::engine::step_size_bound;
use qgt::experiment::{run_experiment_file, ExperimentConfig, ExperimentError, OUT_DIR_ENV};
use qgt::graph::{spectrum_of, WeightedDigraph};
use qgt::report::compare_files;

#[derive(Parser)]
#[command(
    name = "qgt",
    version,
    about = "Quantized gradient tracking over weight-balanced digraphs",
    after_help = format!("Output directory precedence: --out-dir, then ${OUT_DIR_ENV}, then the config's [output] dir.")
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config; writes <name>.csv and <name>.svg.
    Run {
        /// Experiment config (TOML).
        config: PathBuf,
        /// Directory for the trace and chart.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Align two or more trace CSVs: final gaps, fitted log-slopes, one SVG.
    Compare {
        /// Trace CSV files (at least two, identical stride grids).
        #[arg(num_args = 2.., required = true)]
        traces: Vec<PathBuf>,
        /// Combined SVG output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the algebraic connectivity of an edge-list graph, and the
    /// admissible step-size bound when the smoothness constant is given.
    Spectrum {
        /// Edge-list file (`n <count> directed <0|1>` header).
        edgelist: PathBuf,
        /// Smoothness constant L of the cost model.
        #[arg(long, short = 'L')]
        smoothness: Option<f64>,
        /// Upper sector constant of the link nonlinearity.
        #[arg(long, default_value_t = 1.0)]
        sector_upper: f64,
    },
    /// Check a config file without running it.
    Validate {
        /// Experiment config (TOML).
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run { config, out_dir } => {
            let artifacts = match run_experiment_file(&config, out_dir.as_deref()) {
                Ok(a) => a,
                Err(ExperimentError::Run {
                    name,
                    source,
                    partial_csv,
                }) => {
                    if let Some(path) = &partial_csv {
                        eprintln!("partial trace saved to {}", path.display());
                    }
                    return Err(anyhow::anyhow!(source)).context(format!("run `{name}` aborted"));
                }
                Err(other) => return Err(other.into()),
            };
            print!("{}", artifacts.trace.summary_block());
            println!("csv        {}", artifacts.csv_path.display());
            println!("svg        {}", artifacts.svg_path.display());
            Ok(())
        }
        Command::Compare { traces, out } => {
            let paths: Vec<&std::path::Path> = traces.iter().map(PathBuf::as_path).collect();
            let report = compare_files(&paths, &out)
                .with_context(|| format!("comparing {} traces", traces.len()))?;
            print!("{}", report.to_table());
            println!("svg: {}", out.display());
            Ok(())
        }
        Command::Spectrum {
            edgelist,
            smoothness,
            sector_upper,
        } => {
            let graph = WeightedDigraph::read_edge_list(&edgelist)
                .with_context(|| format!("reading {}", edgelist.display()))?;
            let spectrum = spectrum_of(&graph)?;
            println!("nodes            = {}", graph.node_count());
            println!("links            = {}", graph.links().len());
            println!("lambda2_real_abs = {}", spectrum.lambda2_real_abs);
            if let Some(l) = smoothness {
                let bound = step_size_bound(
                    spectrum.lambda2_real_abs,
                    spectrum.lambda2_real_abs,
                    l,
                    sector_upper,
                )?;
                println!("alpha_bar        = {bound}");
            }
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            println!("ok: {} (seed {}, {} iterations)", cfg.name, cfg.seed, cfg.iterations);
            Ok(())
        }
    }
}
