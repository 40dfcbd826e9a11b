use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use arbcolor_cli::commands::{cmd_generate, cmd_run, cmd_sweep, cmd_verify};
use arbcolor_cli::config::{build_run_config, Algo, RunOverrides, SweepConfig};
use arbcolor_core::generate::{Family, GenSpec};
use arbcolor_core::higharb::Finisher;

#[derive(Clone, Copy, Debug, ValueEnum)]
#[clap(rename_all = "kebab-case")]
enum FamilyArg {
    ForestUnion,
    DisjointCliques,
    RandomTree,
    Grid,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::ForestUnion => Family::ForestUnion,
            FamilyArg::DisjointCliques => Family::DisjointCliques,
            FamilyArg::RandomTree => Family::RandomTree,
            FamilyArg::Grid => Family::Grid,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[clap(rename_all = "kebab-case")]
enum FinisherArg {
    LowArb,
    Linial,
}

impl From<FinisherArg> for Finisher {
    fn from(f: FinisherArg) -> Finisher {
        match f {
            FinisherArg::LowArb => Finisher::LowArb,
            FinisherArg::Linial => Finisher::Linial,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "arbcolor",
    about = "Distributed arboricity-dependent graph coloring: generate graphs, run algorithms on the round simulator, sweep parameter grids, verify colorings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a generated graph in edge-list text format.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm over one graph for a list of seeds and emit the
    /// verification reports as JSON. Flags override the config file.
    Run {
        /// JSON config file (same fields as the flags).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Edge-list file to color (requires --alpha).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Generator family, as an alternative to --graph.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long)]
        n: Option<usize>,
        /// Declared arboricity bound (generator target, or the bound for
        /// --graph input).
        #[arg(long)]
        alpha: Option<usize>,
        /// Generator seed (distinct from the run seeds).
        #[arg(long)]
        gen_seed: Option<u64>,
        #[arg(long, value_enum)]
        algo: Option<Algo>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Run seeds, comma separated.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long)]
        round_limit: Option<usize>,
        /// Auto-dispatch bound: high-arb when alpha >= threshold * log2 n.
        #[arg(long)]
        dispatch_threshold: Option<f64>,
        /// Concentration-regime guard multiplier for the phase schedule.
        #[arg(long)]
        degree_guard: Option<f64>,
        #[arg(long)]
        congest_c: Option<f64>,
        #[arg(long, value_enum)]
        finisher: Option<FinisherArg>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the computed coloring(s) as JSON.
        #[arg(long)]
        save_coloring: Option<PathBuf>,
        #[arg(long, env = "ARBCOLOR_WORKERS")]
        workers: Option<usize>,
    },
    /// Run a parameter grid and emit one CSV row per cell.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "ARBCOLOR_WORKERS")]
        workers: Option<usize>,
    },
    /// Check a coloring file against a graph and report.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, default_value_t = 4.0)]
        congest_c: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Generate {
            family,
            n,
            alpha,
            seed,
            out,
        } => cmd_generate(
            &GenSpec {
                family: family.into(),
                n,
                alpha,
                seed,
            },
            &out,
        ),
        Cmd::Run {
            config,
            graph,
            family,
            n,
            alpha,
            gen_seed,
            algo,
            epsilon,
            seeds,
            round_limit,
            dispatch_threshold,
            degree_guard,
            congest_c,
            finisher,
            out,
            save_coloring,
            workers,
        } => {
            let overrides = RunOverrides {
                graph,
                family: family.map(Into::into),
                n,
                alpha,
                gen_seed,
                algo,
                epsilon,
                seeds,
                round_limit,
                dispatch_threshold,
                degree_guard,
                congest_c,
                finisher: finisher.map(Into::into),
                out,
                save_coloring,
                workers,
            };
            (match config {
                Some(path) => std::fs::read_to_string(&path)
                    .map_err(anyhow::Error::from)
                    .and_then(|text| build_run_config(Some(&text), overrides)),
                None => build_run_config(None, overrides),
            })
            .and_then(|cfg| cmd_run(&cfg))
        }
        Cmd::Sweep {
            config,
            out,
            workers,
        } => std::fs::read_to_string(&config)
            .map_err(anyhow::Error::from)
            .and_then(|text| serde_json::from_str::<SweepConfig>(&text).map_err(Into::into))
            .and_then(|mut cfg| {
                if out.is_some() {
                    cfg.out = out;
                }
                cmd_sweep(&cfg, workers)
            }),
        Cmd::Verify {
            graph,
            coloring,
            congest_c,
            out,
        } => cmd_verify(&graph, &coloring, congest_c, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
