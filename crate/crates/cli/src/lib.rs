//! Subcommands of the `ufh` tool. Each takes a validated [`RunConfig`] and
//! returns a [`Report`]; all randomness comes from one generator seeded
//! with the config seed.

pub mod config;
pub mod error;
pub mod report;

use num_rational::Ratio;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ufh_core::cyclespace::{
    enumerate_simple_circuits, enumerate_simple_circuits_in, gaussian_leading_basis, ProfileRow,
};
use ufh_core::expansion::{
    ball_ratios, cheeger, h0_expansion_witness, h1_expansion_probe_z2, verify_filling, CheegerMode, SearchLimits,
    EXACT_CHEEGER_LIMIT,
};
use ufh_core::trees::{comb_counterexample_check, construct_bips, BranchNode, TreeSpec};
use ufh_core::triad::{triad_report, TriadParams};
use ufh_core::{build_window, Error, RipsComplex, Z2Chain};

pub use config::RunConfig;
pub use error::CliError;
pub use report::{Body, Report};

use report::{BasisWindow, ExpansionWindow, GeneratedWindow, H0Row, ProbeSample, TreeIsoSection};

fn rng(config: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed)
}

pub fn cmd_generate(config: &RunConfig) -> Result<Report, CliError> {
    let mut windows = Vec::new();
    for &radius in &config.windows.radii {
        let w = build_window(&config.family, None, radius)?;
        windows.push(GeneratedWindow {
            radius,
            stats: w.stats(),
            keys: (0..w.vertex_count()).map(|v| w.key(v).to_vec()).collect(),
            edges: w.edges().to_vec(),
            boundary: w.boundary_vertices(),
        });
    }
    Ok(Report::new("generate", config, Body::Generate(windows)))
}

pub fn cmd_triad(config: &RunConfig) -> Result<Report, CliError> {
    let params = TriadParams {
        window_radii: config.windows.radii.clone(),
        rips_radii: config.rips.radii.clone(),
        r_max: config.profile.r_max,
        margin: config.windows.margin,
        circuit_cap: config.max_circuits,
        limits: SearchLimits { max_coefficient: config.probe.max_coefficient, node_budget: config.probe.node_budget },
    };
    let report = triad_report(&config.family, &params)?;
    Ok(Report::new("triad", config, Body::Triad(report)))
}

/// Random branching spec of exactly the given depth with positions below
/// `ray_len`.
pub fn random_tree_spec(rng: &mut impl Rng, depth: usize, ray_len: usize) -> TreeSpec {
    fn nodes(
        rng: &mut impl Rng,
        positions: Vec<i64>,
        levels_left: usize,
        ray_len: usize,
        force: bool,
    ) -> Vec<BranchNode> {
        if levels_left == 0 {
            return Vec::new();
        }
        let count = if force { 1 } else { 0 }.max(rng.random_range(0..=positions.len().min(2)));
        let mut picked: Vec<i64> = positions.choose_multiple(rng, count).copied().collect();
        picked.sort_unstable();
        let children_at: Vec<i64> = (1..ray_len as i64).collect();
        picked
            .into_iter()
            .enumerate()
            .map(|(i, position)| BranchNode {
                position,
                children: nodes(rng, children_at.clone(), levels_left - 1, ray_len, force && i == 0),
            })
            .collect()
    }
    let spine: Vec<i64> = (1..ray_len as i64).flat_map(|p| [-p, p]).collect();
    TreeSpec::new(nodes(rng, spine, depth.saturating_sub(1), ray_len, true))
}

pub fn cmd_tree_iso(config: &RunConfig) -> Result<Report, CliError> {
    let tree = config.tree.as_ref().ok_or_else(|| CliError::Config("tree-iso needs a [tree] section".into()))?;
    let mut rng = rng(config);
    let spec = if tree.random_spec { random_tree_spec(&mut rng, tree.depth, tree.ray_len) } else { tree.spec.clone() };
    let mut section = TreeIsoSection {
        spec: spec.to_string(),
        depth: tree.depth,
        ray_len: tree.ray_len,
        bips: 0,
        tameness: Vec::new(),
        cycles: tree.cycles,
        exact_round_trips: 0,
        max_norm_ratio: None,
        norm_bound_holds: true,
        error: None,
        comb: None,
    };
    match construct_bips(&spec, tree.depth, tree.ray_len) {
        Err(e) => section.error = Some(e.to_string()),
        Ok(basis) => {
            section.bips = basis.len();
            section.tameness = basis.tameness();
            for _ in 0..tree.cycles {
                let f: Vec<i64> =
                    (0..basis.len()).map(|_| rng.random_range(-tree.max_coefficient..=tree.max_coefficient)).collect();
                let c = basis.bips_to_cycle(&f);
                match basis.tree_coefficients(&c) {
                    Ok(back) => {
                        if back == f && basis.bips_to_cycle(&back) == c {
                            section.exact_round_trips += 1;
                        }
                        let top = back.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
                        let norm = c.sup_norm();
                        if norm > 0 {
                            let r = Ratio::new(top, norm);
                            if section.max_norm_ratio.is_none_or(|m| r > m) {
                                section.max_norm_ratio = Some(r);
                            }
                        }
                    }
                    Err(Error::NormBound(_)) => section.norm_bound_holds = false,
                    Err(e) => {
                        section.error = Some(e.to_string());
                        break;
                    }
                }
            }
        }
    }
    if let Some(teeth) = tree.comb_teeth {
        section.comb = Some(comb_counterexample_check(teeth)?);
    }
    Ok(Report::new("tree-iso", config, Body::TreeIso(section)))
}

pub fn cmd_basis(config: &RunConfig) -> Result<Report, CliError> {
    let mut windows = Vec::new();
    for &radius in &config.windows.radii {
        let w = build_window(&config.family, None, radius)?;
        let mut bound = config.profile.r_max;
        let mut capped_at = None;
        let circuits = loop {
            match enumerate_simple_circuits(&w, bound, config.max_circuits) {
                Ok(c) => break c,
                Err(Error::CircuitCap(_)) if bound > 3 => {
                    bound -= 1;
                    capped_at = Some(bound);
                }
                Err(e) => return Err(e.into()),
            }
        };
        let basis = gaussian_leading_basis(w.edge_count(), &circuits);
        let components = w.components(&vec![true; w.vertex_count()]).len();
        let mut dimensions = Vec::new();
        let mut prev = 0;
        for r in 3..=bound {
            let d = basis.dimension_at(r);
            dimensions.push(ProfileRow { r, dimension: d, new_elements: d - prev });
            prev = d;
        }
        windows.push(BasisWindow {
            radius,
            vertices: w.vertex_count(),
            edges: w.edge_count(),
            components,
            circuits: circuits.len(),
            capped_at,
            basis_size: basis.len(),
            cycle_rank: w.edge_count() + components - w.vertex_count(),
            distinct_leading: basis.has_distinct_leading(),
            dimensions,
        });
    }
    Ok(Report::new("basis", config, Body::Basis(windows)))
}

pub fn cmd_expansion(config: &RunConfig) -> Result<Report, CliError> {
    let mut rng = rng(config);
    let mut windows = Vec::new();
    for &radius in &config.windows.radii {
        let w = build_window(&config.family, None, radius)?;
        let mode = if w.vertex_count() <= EXACT_CHEEGER_LIMIT { CheegerMode::Exact } else { CheegerMode::Heuristic };
        let (cheeger_value, cheeger_error) = match cheeger(&w, mode) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let center = w.center();
        let half = w.ball(center, radius / 2);
        let h0 = match &cheeger_value {
            Some(c) if c.value > Ratio::from_integer(0) => {
                let g = h0_expansion_witness(&w, &half, &half, c.value)?;
                Some(H0Row {
                    set_size: half.len(),
                    targets: half.len(),
                    eps: c.value,
                    norm: g.sup_norm(),
                    bound: c.value.recip().ceil().to_integer(),
                })
            }
            _ => None,
        };

        let interior = w.interior_mask(2);
        let circuits =
            enumerate_simple_circuits_in(&w, &interior, config.profile.r_max, config.max_circuits).unwrap_or_default();
        let mut probes = Vec::new();
        let mut complexes = Vec::new();
        for &r in &config.rips.radii {
            complexes.push((r, RipsComplex::build(&w, r)?));
        }
        for sample in 0..config.probe.samples.min(circuits.len().max(1)) {
            let Some(c) = circuits.choose(&mut rng) else {
                break;
            };
            let spread = rng.random_range(0..=1usize);
            let mut set: Vec<usize> = c.vertices.iter().flat_map(|&v| w.ball(v, spread)).collect();
            set.sort_unstable();
            set.dedup();
            let f = Z2Chain::closed_walk(&c.vertices);
            for (r, rips) in &complexes {
                let p = h1_expansion_probe_z2(rips, &set, &f)?;
                let verified = p.filling.as_ref().is_none_or(|g| verify_filling(rips, &set, &f, g));
                probes.push(ProbeSample {
                    sample,
                    circuit_length: c.len(),
                    set_size: set.len(),
                    rips_radius: *r,
                    feasible: p.feasible,
                    norm: p.norm,
                    support: p.support,
                    verified,
                });
            }
        }
        windows.push(ExpansionWindow {
            radius,
            cheeger: cheeger_value,
            cheeger_error,
            ball_ratios: ball_ratios(&w, center, radius),
            h0,
            probes,
        });
    }
    Ok(Report::new("expansion", config, Body::Expansion(windows)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> RunConfig {
        RunConfig::from_toml(text).unwrap()
    }

    #[test]
    fn generate_counts() {
        let c = config("[family]\nkind = \"grid2d\"\n[windows]\nradii = [2]\n");
        let Body::Generate(w) = cmd_generate(&c).unwrap().body else {
            panic!("wrong body");
        };
        assert_eq!(w[0].stats.vertices, 13);
        let c = config("[family]\nkind = \"cycle\"\nn = 6\n[windows]\nradii = [3]\n");
        let Body::Generate(w) = cmd_generate(&c).unwrap().body else {
            panic!("wrong body");
        };
        assert_eq!((w[0].stats.vertices, w[0].stats.edges), (6, 6));
    }

    #[test]
    fn random_specs_have_the_requested_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for depth in 1..=4 {
            for _ in 0..20 {
                let spec = random_tree_spec(&mut rng, depth, 6);
                assert_eq!(spec.depth(), depth, "{spec}");
                assert!(spec.validate(6).is_ok());
            }
        }
    }

    #[test]
    fn tree_iso_depth_one() {
        let c = config("[family]\nkind = \"biinfinite_line\"\n[tree]\ndepth = 1\nray_len = 4\ncycles = 5\n");
        let Body::TreeIso(s) = cmd_tree_iso(&c).unwrap().body else {
            panic!("wrong body");
        };
        assert_eq!(s.bips, 1);
        assert_eq!(s.exact_round_trips, 5);
    }
}
