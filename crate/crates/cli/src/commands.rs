//! The four subcommands: generate, run, sweep, verify. All outputs are
//! deterministic byte-for-byte for a fixed config: no timestamps, stable
//! field order, and sweep rows buffered back into grid order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Serialize;

use arbcolor_core::coloring::ColoringState;
use arbcolor_core::error::Error;
use arbcolor_core::generate::{self, Family, GenSpec};
use arbcolor_core::graph::Graph;
use arbcolor_core::pipeline::PipelineSummary;
use arbcolor_core::verify::{self, VerificationReport, VerifyConfig};

use crate::config::{Algo, GraphSource, RunConfig, SweepConfig};
use crate::dispatch::{run_algorithm, RunOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IMPROPER: i32 = 2;
pub const EXIT_NON_TERMINATION: i32 = 3;

fn write_or_print(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validate_spec(spec: &GenSpec) -> anyhow::Result<()> {
    if spec.n == 0 || spec.alpha == 0 {
        bail!("generator requires n >= 1 and alpha >= 1");
    }
    match spec.family {
        Family::ForestUnion | Family::RandomTree if spec.n < 2 => {
            bail!("forest generators require n >= 2")
        }
        Family::DisjointCliques if spec.n < 2 * spec.alpha => {
            bail!(
                "disjoint-cliques requires n >= 2 * alpha (n = {}, alpha = {})",
                spec.n,
                spec.alpha
            )
        }
        _ => Ok(()),
    }
}

pub fn load_graph(source: &GraphSource) -> anyhow::Result<(Graph, usize)> {
    match source {
        GraphSource::Generate(spec) => {
            validate_spec(spec)?;
            let g = generate::generate(spec)?;
            Ok((g, spec.declared_alpha()))
        }
        GraphSource::File { path, alpha } => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let g = Graph::from_edge_list_text(&text)?;
            Ok((g, *alpha))
        }
    }
}

pub fn cmd_generate(spec: &GenSpec, out: &Option<PathBuf>) -> anyhow::Result<i32> {
    validate_spec(spec)?;
    let g = generate::generate(spec)?;
    write_or_print(out, &g.to_edge_list_text())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RunEntry {
    seed: u64,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<PipelineSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<VerificationReport>,
}

#[derive(Serialize)]
struct RunDocument {
    algo: &'static str,
    graph: String,
    n: usize,
    m: usize,
    alpha: usize,
    epsilon: f64,
    runs: Vec<RunEntry>,
}

pub fn cmd_run(cfg: &RunConfig) -> anyhow::Result<i32> {
    let (g, alpha) = load_graph(&cfg.graph)?;
    let opts = RunOptions {
        epsilon: cfg.epsilon,
        round_limit: cfg.round_limit,
        dispatch_threshold: cfg.dispatch_threshold,
        degree_guard: cfg.degree_guard,
        finisher: cfg.finisher,
    };
    let verify_cfg = VerifyConfig {
        congest_c: cfg.congest_c,
    };
    let mut runs = Vec::new();
    let mut saw_improper = false;
    let mut saw_non_termination = false;
    for &seed in &cfg.seeds {
        match run_algorithm(&g, alpha, cfg.algo, &opts, seed) {
            Ok(result) => {
                let report = verify::report(&g, &result.coloring, &result.stats, None, &verify_cfg);
                saw_improper |= !report.proper;
                if let Some(path) = &cfg.save_coloring {
                    let path = coloring_path(path, seed, cfg.seeds.len() > 1);
                    fs::write(&path, serde_json::to_string_pretty(&result.coloring)?)
                        .with_context(|| format!("writing {}", path.display()))?;
                }
                runs.push(RunEntry {
                    seed,
                    status: "ok".into(),
                    summary: Some(result.summary()),
                    report: Some(report),
                });
            }
            Err(e @ Error::NonTermination { .. }) => {
                saw_non_termination = true;
                runs.push(RunEntry {
                    seed,
                    status: format!("non-termination: {e}"),
                    summary: None,
                    report: None,
                });
            }
            Err(e) => bail!("seed {seed}: {e}"),
        }
    }
    let doc = RunDocument {
        algo: cfg.algo.name(),
        graph: cfg.graph.label(),
        n: g.n(),
        m: g.m(),
        alpha,
        epsilon: cfg.epsilon,
        runs,
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    write_or_print(&cfg.out, &text)?;
    Ok(if saw_improper {
        EXIT_IMPROPER
    } else if saw_non_termination {
        EXIT_NON_TERMINATION
    } else {
        EXIT_OK
    })
}

fn coloring_path(base: &Path, seed: u64, multi: bool) -> PathBuf {
    if multi {
        let mut name = base.as_os_str().to_os_string();
        name.push(format!(".seed{seed}"));
        PathBuf::from(name)
    } else {
        base.to_path_buf()
    }
}

pub fn sweep_csv_header() -> String {
    format!("family,n,alpha,epsilon,algo,seed,{},proper,status", verify::csv_header())
}

fn sweep_row(
    family: Family,
    n: usize,
    alpha: usize,
    epsilon: f64,
    algo: Algo,
    seed: u64,
    cfg: &SweepConfig,
) -> String {
    let prefix = format!(
        "{},{},{},{},{},{}",
        family.name(),
        n,
        alpha,
        epsilon,
        algo.name(),
        seed
    );
    let spec = GenSpec {
        family,
        n,
        alpha,
        seed,
    };
    let build = validate_spec(&spec)
        .map_err(|e| e.to_string())
        .and_then(|_| generate::generate(&spec).map_err(|e| e.to_string()));
    let g = match build {
        Ok(g) => g,
        Err(e) => {
            return format!("{prefix},,,,,,,{}", sanitize(&format!("error: {e}")));
        }
    };
    let opts = RunOptions {
        epsilon,
        round_limit: cfg.round_limit,
        dispatch_threshold: cfg.dispatch_threshold,
        degree_guard: cfg.degree_guard,
        finisher: arbcolor_core::higharb::Finisher::LowArb,
    };
    match run_algorithm(&g, spec.declared_alpha(), algo, &opts, seed) {
        Ok(result) => {
            let report = verify::report(
                &g,
                &result.coloring,
                &result.stats,
                None,
                &VerifyConfig {
                    congest_c: cfg.congest_c,
                },
            );
            format!("{prefix},{},{},ok", report.csv_fields(), report.proper)
        }
        Err(e) => format!("{prefix},,,,,,,{}", sanitize(&format!("error: {e}"))),
    }
}

fn sanitize(s: &str) -> String {
    s.replace([',', '\n'], ";")
}

/// Cross-product execution in deterministic grid order; rows run in parallel
/// up to the worker budget and are emitted in order regardless.
pub fn cmd_sweep(cfg: &SweepConfig, workers: Option<usize>) -> anyhow::Result<i32> {
    let mut grid = Vec::new();
    for &family in &cfg.families {
        for &n in &cfg.n {
            for &alpha in &cfg.alpha {
                for &epsilon in &cfg.epsilon {
                    for &algo in &cfg.algos {
                        for &seed in &cfg.seeds {
                            grid.push((family, n, alpha, epsilon, algo, seed));
                        }
                    }
                }
            }
        }
    }
    let workers = workers.or(cfg.workers);
    let rows: Vec<String> = {
        let run_all = || {
            use rayon::prelude::*;
            grid.par_iter()
                .map(|&(f, n, a, e, algo, s)| sweep_row(f, n, a, e, algo, s, cfg))
                .collect()
        };
        match workers {
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .context("building worker pool")?
                .install(run_all),
            None => run_all(),
        }
    };
    let mut text = sweep_csv_header();
    text.push('\n');
    for row in &rows {
        let _ = writeln!(text, "{row}");
    }
    write_or_print(&cfg.out, &text)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(
    graph: &Path,
    coloring: &Path,
    congest_c: f64,
    out: &Option<PathBuf>,
) -> anyhow::Result<i32> {
    let text =
        fs::read_to_string(graph).with_context(|| format!("reading {}", graph.display()))?;
    let g = Graph::from_edge_list_text(&text)?;
    let coloring_text =
        fs::read_to_string(coloring).with_context(|| format!("reading {}", coloring.display()))?;
    let coloring: ColoringState =
        serde_json::from_str(&coloring_text).context("parsing coloring JSON")?;
    if coloring.colors.len() != g.n() {
        bail!(
            "coloring covers {} nodes but the graph has {}",
            coloring.colors.len(),
            g.n()
        );
    }
    let stats = arbcolor_core::sim::RoundStats::default();
    let report = verify::report(&g, &coloring, &stats, None, &VerifyConfig { congest_c });
    let proper = report.proper;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    write_or_print(out, &text)?;
    Ok(if proper { EXIT_OK } else { EXIT_IMPROPER })
}
