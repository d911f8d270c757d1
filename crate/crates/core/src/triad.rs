//! Per-family evidence for the three sources of nonvanishing first
//! homology: several ends, large circuits, and failure of expansion.

use serde::Serialize;

use crate::cyclespace::{
    enumerate_simple_circuits_in, stabilization_verdict, window_profile, ProfileVerdict, WindowProfile,
};
use crate::ends::end_partition;
use crate::error::{Error, Result};
use crate::expansion::{h1_expansion_probe_z, SearchLimits};
use crate::family::{build_window, FamilySpec};
use crate::rips::RipsComplex;
use crate::ZChain;

/// Parameters of a triad run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriadParams {
    pub window_radii: Vec<usize>,
    pub rips_radii: Vec<usize>,
    /// Largest circuit length in the profiles.
    pub r_max: usize,
    pub margin: usize,
    pub circuit_cap: usize,
    pub limits: SearchLimits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phenomenon {
    Ends,
    LargeCircuits,
    NonExpansion,
}

impl Phenomenon {
    pub fn label(self) -> &'static str {
        match self {
            Self::Ends => "ends",
            Self::LargeCircuits => "large circuits",
            Self::NonExpansion => "non-expansion",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndsRow {
    pub window_radius: usize,
    pub separator_radius: usize,
    pub pseudo_ends: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub window_radius: usize,
    pub rips_radius: usize,
    pub circuit_length: usize,
    pub feasible: Option<bool>,
    pub norm: Option<u64>,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriadReport {
    pub family: String,
    pub ends: Vec<EndsRow>,
    pub profiles: Vec<WindowProfile>,
    pub profile_verdict: ProfileVerdict,
    pub probes: Vec<ProbeRow>,
    /// Phenomena with evidence, in a fixed order.
    pub detected: Vec<Phenomenon>,
    pub verdict: String,
    /// Non-expansion from finitely many probes is a heuristic.
    pub expansion_heuristic: bool,
}

fn validate(params: &TriadParams) -> Result<()> {
    if params.window_radii.is_empty() || params.window_radii.contains(&0) {
        return Err(Error::InvalidFamily("window radii must be positive".into()));
    }
    if params.rips_radii.is_empty() || params.rips_radii.contains(&0) {
        return Err(Error::ZeroRadius);
    }
    let smallest = *params.window_radii.iter().min().expect("nonempty");
    if params.margin >= smallest {
        return Err(Error::MarginTooLarge { margin: params.margin, radius: smallest });
    }
    Ok(())
}

/// Evidence for each phenomenon across the configured radii.
///
/// Ends: at least two pseudo-ends of `w - B(center, R/2)` at every window
/// radius `R`. Large circuits: the interior profiles fail to settle below
/// `r_max`. Non-expansion: the shortest circuit near the center has no
/// filling at the largest Rips radius in some window, or its minimal
/// filling norm grows strictly over three or more window radii.
pub fn triad_report(spec: &FamilySpec, params: &TriadParams) -> Result<TriadReport> {
    spec.validate()?;
    validate(params)?;
    let mut radii = params.window_radii.clone();
    radii.sort_unstable();
    radii.dedup();
    let mut rips_radii = params.rips_radii.clone();
    rips_radii.sort_unstable();
    rips_radii.dedup();

    let mut ends = Vec::new();
    let mut profiles = Vec::new();
    let mut probes = Vec::new();
    for &radius in &radii {
        let w = build_window(spec, None, radius)?;
        let separator_radius = radius / 2;
        let parts = end_partition(&w, &w.ball(w.center(), separator_radius), false)?;
        ends.push(EndsRow { window_radius: radius, separator_radius, pseudo_ends: parts.pseudo_ends.len() });
        profiles.push(window_profile(&w, params.r_max, params.margin, params.circuit_cap)?);

        let Some(circuit) = central_circuit(&w, params) else {
            continue;
        };
        let mut set: Vec<usize> = circuit.iter().flat_map(|&v| w.ball(v, 1)).collect();
        set.sort_unstable();
        set.dedup();
        let f = ZChain::closed_walk(&circuit);
        for &r in &rips_radii {
            let rips = RipsComplex::build(&w, r)?;
            let p = h1_expansion_probe_z(&rips, &set, &f, params.limits)?;
            probes.push(ProbeRow {
                window_radius: radius,
                rips_radius: r,
                circuit_length: circuit.len(),
                feasible: p.feasible,
                norm: p.norm,
                exact: p.exact,
            });
        }
    }
    let profile_verdict = stabilization_verdict(&profiles, params.r_max);

    let mut detected = Vec::new();
    if ends.iter().all(|e| e.pseudo_ends >= 2) {
        detected.push(Phenomenon::Ends);
    }
    if matches!(profile_verdict, ProfileVerdict::LargeCircuits { .. }) {
        detected.push(Phenomenon::LargeCircuits);
    }
    let top = *rips_radii.last().expect("nonempty");
    let at_top: Vec<&ProbeRow> = probes.iter().filter(|p| p.rips_radius == top).collect();
    let unfillable = at_top.iter().any(|p| p.feasible == Some(false));
    let norms: Vec<u64> = at_top.iter().filter_map(|p| p.norm).collect();
    let growing = norms.len() >= 3 && norms.len() == at_top.len() && norms.windows(2).all(|n| n[0] < n[1]);
    if unfillable || growing {
        detected.push(Phenomenon::NonExpansion);
    }
    let verdict = if detected.is_empty() {
        "none".to_string()
    } else {
        detected.iter().map(|p| p.label()).collect::<Vec<_>>().join(" + ")
    };
    Ok(TriadReport {
        family: spec.name().to_string(),
        ends,
        profiles,
        profile_verdict,
        probes,
        detected,
        verdict,
        expansion_heuristic: true,
    })
}

/// Shortest simple circuit in the smallest ball around the center that
/// holds one, staying clear of the window boundary.
fn central_circuit(w: &crate::GraphWindow, params: &TriadParams) -> Option<Vec<usize>> {
    let interior = w.interior_mask(2);
    for rho in 1..w.inner_radius() {
        let mut mask = w.mask_of(&w.ball(w.center(), rho));
        for (m, &i) in mask.iter_mut().zip(&interior) {
            *m &= i;
        }
        if let Ok(found) = enumerate_simple_circuits_in(w, &mask, params.r_max, params.circuit_cap) {
            if let Some(c) = found.into_iter().next() {
                return Some(c.vertices);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(window_radii: Vec<usize>, rips_radii: Vec<usize>, r_max: usize) -> TriadParams {
        TriadParams {
            window_radii,
            rips_radii,
            r_max,
            margin: 1,
            circuit_cap: 100_000,
            limits: SearchLimits::default(),
        }
    }

    #[test]
    fn line_has_ends() {
        let r = triad_report(&FamilySpec::BiinfiniteLine, &params(vec![4, 6, 8], vec![1], 8)).unwrap();
        assert_eq!(r.verdict, "ends");
        assert!(r.probes.is_empty());
    }

    #[test]
    fn plain_grid_needs_radius_two() {
        let spec = FamilySpec::Grid2d { triangulated: false };
        let r = triad_report(&spec, &params(vec![4, 5], vec![1], 6)).unwrap();
        assert!(r.detected.contains(&Phenomenon::NonExpansion));
        let r = triad_report(&spec, &params(vec![4, 5], vec![1, 2], 6)).unwrap();
        assert!(!r.detected.contains(&Phenomenon::NonExpansion));
        assert!(r.probes.iter().any(|p| p.rips_radius == 1 && p.feasible == Some(false)));
    }

    #[test]
    fn bad_params() {
        let spec = FamilySpec::BiinfiniteLine;
        assert!(triad_report(&spec, &params(vec![], vec![1], 4)).is_err());
        assert_eq!(triad_report(&spec, &params(vec![3], vec![0], 4)).unwrap_err(), Error::ZeroRadius);
    }
}
