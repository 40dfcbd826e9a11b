//! Run and sweep configuration: a JSON file plus flag overrides, flags
//! winning.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use arbcolor_core::generate::{Family, GenSpec};

use arbcolor_core::higharb::Finisher;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[clap(rename_all = "kebab-case")]
pub enum Algo {
    GreedyOracle,
    HpartitionLinialBaseline,
    HighArb,
    LowArbLogalpha,
    LowArbTradeoff,
    AutoDispatch,
    Step2Recurse,
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::GreedyOracle => "greedy-oracle",
            Algo::HpartitionLinialBaseline => "hpartition-linial-baseline",
            Algo::HighArb => "high-arb",
            Algo::LowArbLogalpha => "low-arb-logalpha",
            Algo::LowArbTradeoff => "low-arb-tradeoff",
            Algo::AutoDispatch => "auto-dispatch",
            Algo::Step2Recurse => "step2-recurse",
        }
    }
}

/// Where the input graph comes from: a generator spec or an edge-list file
/// (which needs an explicit arboricity bound for the algorithms).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Generate(GenSpec),
    File { path: PathBuf, alpha: usize },
}

impl GraphSource {
    pub fn label(&self) -> String {
        match self {
            GraphSource::Generate(spec) => spec.family.name().to_string(),
            GraphSource::File { path, .. } => path.display().to_string(),
        }
    }
}

fn default_epsilon() -> f64 {
    1.0
}
fn default_seeds() -> Vec<u64> {
    vec![1]
}
fn default_round_limit() -> usize {
    usize::MAX
}
fn default_dispatch_threshold() -> f64 {
    40.0
}
fn default_degree_guard() -> f64 {
    40.0
}
fn default_congest_c() -> f64 {
    4.0
}
fn default_finisher() -> Finisher {
    Finisher::LowArb
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub graph: GraphSource,
    pub algo: Algo,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_round_limit")]
    pub round_limit: usize,
    #[serde(default = "default_dispatch_threshold")]
    pub dispatch_threshold: f64,
    #[serde(default = "default_degree_guard")]
    pub degree_guard: f64,
    #[serde(default = "default_congest_c")]
    pub congest_c: f64,
    #[serde(default = "default_finisher")]
    pub finisher: Finisher,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub save_coloring: Option<PathBuf>,
    #[serde(default)]
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_families")]
    pub families: Vec<Family>,
    pub n: Vec<usize>,
    pub alpha: Vec<usize>,
    #[serde(default = "default_epsilons")]
    pub epsilon: Vec<f64>,
    pub algos: Vec<Algo>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_round_limit")]
    pub round_limit: usize,
    #[serde(default = "default_dispatch_threshold")]
    pub dispatch_threshold: f64,
    #[serde(default = "default_degree_guard")]
    pub degree_guard: f64,
    #[serde(default = "default_congest_c")]
    pub congest_c: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub workers: Option<usize>,
}

fn default_families() -> Vec<Family> {
    vec![Family::ForestUnion]
}
fn default_epsilons() -> Vec<f64> {
    vec![1.0]
}

/// Flag-level overrides applied on top of a config file (or of a skeleton
/// when no file is given). Flags win.
#[derive(Clone, Debug, Default)]
pub struct RunOverrides {
    pub graph: Option<PathBuf>,
    pub family: Option<Family>,
    pub n: Option<usize>,
    pub alpha: Option<usize>,
    pub gen_seed: Option<u64>,
    pub algo: Option<Algo>,
    pub epsilon: Option<f64>,
    pub seeds: Option<Vec<u64>>,
    pub round_limit: Option<usize>,
    pub dispatch_threshold: Option<f64>,
    pub degree_guard: Option<f64>,
    pub congest_c: Option<f64>,
    pub finisher: Option<Finisher>,
    pub out: Option<PathBuf>,
    pub save_coloring: Option<PathBuf>,
    pub workers: Option<usize>,
}

pub fn build_run_config(
    config_json: Option<&str>,
    ov: RunOverrides,
) -> anyhow::Result<RunConfig> {
    let mut cfg: RunConfig = match config_json {
        Some(text) => serde_json::from_str(text)?,
        None => {
            let source = match (&ov.graph, ov.family, ov.n) {
                (Some(path), _, _) => GraphSource::File {
                    path: path.clone(),
                    alpha: ov.alpha.unwrap_or(1),
                },
                (None, Some(family), Some(n)) => GraphSource::Generate(GenSpec {
                    family,
                    n,
                    alpha: ov.alpha.unwrap_or(1),
                    seed: ov.gen_seed.unwrap_or(1),
                }),
                _ => anyhow::bail!(
                    "need --config, --graph <path> --alpha, or --family/--n/--alpha"
                ),
            };
            let algo = ov
                .algo
                .ok_or_else(|| anyhow::anyhow!("--algo is required without --config"))?;
            serde_json::from_value(serde_json::json!({
                "graph": serde_json::to_value(&source)?,
                "algo": serde_json::to_value(algo)?,
            }))?
        }
    };
    if let Some(path) = ov.graph {
        let alpha = ov.alpha.unwrap_or(match &cfg.graph {
            GraphSource::File { alpha, .. } => *alpha,
            GraphSource::Generate(s) => s.alpha,
        });
        cfg.graph = GraphSource::File { path, alpha };
    } else if let (Some(family), Some(n)) = (ov.family, ov.n) {
        cfg.graph = GraphSource::Generate(GenSpec {
            family,
            n,
            alpha: ov.alpha.unwrap_or(1),
            seed: ov.gen_seed.unwrap_or(1),
        });
    } else if let Some(a) = ov.alpha {
        match &mut cfg.graph {
            GraphSource::File { alpha, .. } => *alpha = a,
            GraphSource::Generate(spec) => spec.alpha = a,
        }
    }
    if let Some(s) = ov.gen_seed {
        if let GraphSource::Generate(spec) = &mut cfg.graph {
            spec.seed = s;
        }
    }
    if let Some(a) = ov.algo {
        cfg.algo = a;
    }
    if let Some(e) = ov.epsilon {
        cfg.epsilon = e;
    }
    if let Some(s) = ov.seeds {
        cfg.seeds = s;
    }
    if let Some(r) = ov.round_limit {
        cfg.round_limit = r;
    }
    if let Some(t) = ov.dispatch_threshold {
        cfg.dispatch_threshold = t;
    }
    if let Some(g) = ov.degree_guard {
        cfg.degree_guard = g;
    }
    if let Some(c) = ov.congest_c {
        cfg.congest_c = c;
    }
    if let Some(f) = ov.finisher {
        cfg.finisher = f;
    }
    if ov.out.is_some() {
        cfg.out = ov.out;
    }
    if ov.save_coloring.is_some() {
        cfg.save_coloring = ov.save_coloring;
    }
    if ov.workers.is_some() {
        cfg.workers = ov.workers;
    }
    Ok(cfg)
}
