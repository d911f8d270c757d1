//! Report document written by every subcommand.

use num_rational::Ratio;
use serde::Serialize;
use ufh_core::cyclespace::ProfileRow;
use ufh_core::expansion::CheegerResult;
use ufh_core::graph::WindowStats;
use ufh_core::trees::{ClauseResult, CombGrowth};
use ufh_core::triad::TriadReport;

use crate::config::RunConfig;

pub const SCHEMA: &str = "ufh-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config: RunConfig,
    pub body: Body,
}

impl Report {
    pub fn new(command: &'static str, config: &RunConfig, body: Body) -> Self {
        Self { schema: SCHEMA, command, seed: config.seed, config: config.clone(), body }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Body {
    Generate(Vec<GeneratedWindow>),
    Triad(TriadReport),
    TreeIso(TreeIsoSection),
    Basis(Vec<BasisWindow>),
    Expansion(Vec<ExpansionWindow>),
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratedWindow {
    pub radius: usize,
    pub stats: WindowStats,
    pub keys: Vec<Vec<i64>>,
    pub edges: Vec<(usize, usize)>,
    pub boundary: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeIsoSection {
    pub spec: String,
    pub depth: usize,
    pub ray_len: usize,
    pub bips: usize,
    pub tameness: Vec<ClauseResult>,
    pub cycles: usize,
    pub exact_round_trips: usize,
    /// Largest `|f| / |c|` over the sampled cycles.
    pub max_norm_ratio: Option<Ratio<u64>>,
    pub norm_bound_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comb: Option<CombGrowth>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisWindow {
    pub radius: usize,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub circuits: usize,
    /// Length bound actually used when the circuit cap forced a smaller one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capped_at: Option<usize>,
    pub basis_size: usize,
    /// `|E| - |V| + components`.
    pub cycle_rank: usize,
    pub distinct_leading: bool,
    pub dimensions: Vec<ProfileRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionWindow {
    pub radius: usize,
    pub cheeger: Option<CheegerResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cheeger_error: Option<String>,
    pub ball_ratios: Vec<(usize, Ratio<i64>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h0: Option<H0Row>,
    pub probes: Vec<ProbeSample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct H0Row {
    pub set_size: usize,
    pub targets: usize,
    pub eps: Ratio<i64>,
    pub norm: u64,
    pub bound: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeSample {
    pub sample: usize,
    pub circuit_length: usize,
    pub set_size: usize,
    pub rips_radius: usize,
    pub feasible: Option<bool>,
    pub norm: Option<u64>,
    pub support: usize,
    pub verified: bool,
}
