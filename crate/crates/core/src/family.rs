//! Standard infinite graph families and window construction.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, VertexKey};
use crate::trees::{build_tree, TreeSpec};

/// An infinite (or, for `Cycle` and `GrowingCircuitChain`, finite) ULF graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// The square lattice; `triangulated` adds the `(1, 1)` diagonals.
    Grid2d {
        #[serde(default)]
        triangulated: bool,
    },
    /// Cayley graph of the free group on `generators` letters.
    CayleyFree {
        generators: usize,
    },
    BiinfiniteLine,
    /// Spine `Z x {0}` with a tooth `{x} x N` at every spine vertex.
    BiinfiniteComb,
    Cycle {
        n: usize,
    },
    /// Circuits of the given even lengths, consecutive ones joined by a
    /// single bridge edge.
    GrowingCircuitChain {
        lengths: Vec<usize>,
    },
    TrivalentTree {
        tree: TreeSpec,
        depth: usize,
    },
    /// Regular tree of the given degree.
    RegularTree {
        degree: usize,
    },
    Ladder,
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Grid2d { .. } => "grid2d",
            FamilySpec::CayleyFree { .. } => "cayley_free",
            FamilySpec::BiinfiniteLine => "biinfinite_line",
            FamilySpec::BiinfiniteComb => "biinfinite_comb",
            FamilySpec::Cycle { .. } => "cycle",
            FamilySpec::GrowingCircuitChain { .. } => "growing_circuit_chain",
            FamilySpec::TrivalentTree { .. } => "trivalent_tree",
            FamilySpec::RegularTree { .. } => "regular_tree",
            FamilySpec::Ladder => "ladder",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidFamily(m.to_string()));
        match self {
            FamilySpec::CayleyFree { generators } if *generators == 0 => {
                bad("cayley_free needs at least one generator")
            }
            FamilySpec::Cycle { n } if *n < 3 => bad("cycle length must be at least 3"),
            FamilySpec::GrowingCircuitChain { lengths } => {
                if lengths.is_empty() {
                    return bad("growing_circuit_chain needs at least one length");
                }
                if lengths.iter().any(|&l| l < 4 || l % 2 != 0) {
                    return bad("circuit lengths must be even and at least 4");
                }
                if lengths.windows(2).any(|p| p[0] >= p[1]) {
                    return bad("circuit lengths must be strictly increasing");
                }
                Ok(())
            }
            FamilySpec::RegularTree { degree } if *degree < 2 => bad("regular tree degree must be at least 2"),
            FamilySpec::TrivalentTree { tree, depth } => {
                if *depth == 0 {
                    return bad("tree depth must be positive");
                }
                tree.validate(usize::MAX)
            }
            _ => Ok(()),
        }
    }

    /// Uniform degree bound of the infinite graph.
    pub fn degree_bound(&self) -> usize {
        match self {
            FamilySpec::Grid2d { triangulated } => {
                if *triangulated {
                    6
                } else {
                    4
                }
            }
            FamilySpec::CayleyFree { generators } => 2 * generators,
            FamilySpec::BiinfiniteLine | FamilySpec::Cycle { .. } => 2,
            FamilySpec::BiinfiniteComb
            | FamilySpec::GrowingCircuitChain { .. }
            | FamilySpec::TrivalentTree { .. }
            | FamilySpec::Ladder => 3,
            FamilySpec::RegularTree { degree } => *degree,
        }
    }

    /// Key of the default seed vertex.
    pub fn origin(&self) -> VertexKey {
        match self {
            FamilySpec::Grid2d { .. }
            | FamilySpec::BiinfiniteComb
            | FamilySpec::GrowingCircuitChain { .. }
            | FamilySpec::Ladder => vec![0, 0],
            FamilySpec::BiinfiniteLine | FamilySpec::Cycle { .. } => vec![0],
            FamilySpec::CayleyFree { .. } | FamilySpec::RegularTree { .. } => vec![],
            FamilySpec::TrivalentTree { .. } => vec![0],
        }
    }

    /// True when the graph is finite, so a large enough window is all of it.
    pub fn is_finite(&self) -> bool {
        matches!(self, FamilySpec::Cycle { .. } | FamilySpec::GrowingCircuitChain { .. })
    }

    fn is_vertex(&self, key: &[i64]) -> bool {
        match self {
            FamilySpec::Grid2d { .. } => key.len() == 2,
            FamilySpec::BiinfiniteLine => key.len() == 1,
            FamilySpec::BiinfiniteComb => key.len() == 2 && key[1] >= 0,
            FamilySpec::Cycle { n } => key.len() == 1 && (0..*n as i64).contains(&key[0]),
            FamilySpec::GrowingCircuitChain { lengths } => {
                key.len() == 2
                    && (0..lengths.len() as i64).contains(&key[0])
                    && (0..lengths[key[0] as usize] as i64).contains(&key[1])
            }
            FamilySpec::Ladder => key.len() == 2 && (key[1] == 0 || key[1] == 1),
            FamilySpec::CayleyFree { generators } => {
                let k = *generators as i64;
                key.iter().all(|&a| a != 0 && a.abs() <= k) && key.windows(2).all(|p| p[0] != -p[1])
            }
            FamilySpec::RegularTree { degree } => {
                let d = *degree as i64;
                key.iter().enumerate().all(|(i, &a)| a >= 0 && a < if i == 0 { d } else { d - 1 })
            }
            FamilySpec::TrivalentTree { .. } => true,
        }
    }

    /// Neighbours of a vertex in the infinite graph.
    fn neighbors(&self, key: &[i64]) -> Vec<VertexKey> {
        match self {
            FamilySpec::Grid2d { triangulated } => {
                let (x, y) = (key[0], key[1]);
                let mut out = vec![vec![x + 1, y], vec![x - 1, y], vec![x, y + 1], vec![x, y - 1]];
                if *triangulated {
                    out.push(vec![x + 1, y + 1]);
                    out.push(vec![x - 1, y - 1]);
                }
                out
            }
            FamilySpec::BiinfiniteLine => vec![vec![key[0] - 1], vec![key[0] + 1]],
            FamilySpec::BiinfiniteComb => {
                let (x, y) = (key[0], key[1]);
                let mut out = vec![vec![x, y + 1]];
                if y == 0 {
                    out.push(vec![x - 1, 0]);
                    out.push(vec![x + 1, 0]);
                } else {
                    out.push(vec![x, y - 1]);
                }
                out
            }
            FamilySpec::Cycle { n } => {
                let n = *n as i64;
                vec![vec![(key[0] + 1).rem_euclid(n)], vec![(key[0] - 1).rem_euclid(n)]]
            }
            FamilySpec::GrowingCircuitChain { lengths } => {
                let (c, p) = (key[0], key[1]);
                let len = lengths[c as usize] as i64;
                let mut out = vec![vec![c, (p + 1).rem_euclid(len)], vec![c, (p - 1).rem_euclid(len)]];
                if p == len / 2 && (c as usize) + 1 < lengths.len() {
                    out.push(vec![c + 1, 0]);
                }
                if p == 0 && c > 0 {
                    out.push(vec![c - 1, lengths[c as usize - 1] as i64 / 2]);
                }
                out
            }
            FamilySpec::Ladder => {
                let (x, s) = (key[0], key[1]);
                vec![vec![x - 1, s], vec![x + 1, s], vec![x, 1 - s]]
            }
            FamilySpec::CayleyFree { generators } => {
                let k = *generators as i64;
                let mut out = Vec::new();
                if let Some((_, prefix)) = key.split_last() {
                    out.push(prefix.to_vec());
                }
                for a in (-k..=k).filter(|&a| a != 0) {
                    if key.last() != Some(&-a) {
                        let mut w = key.to_vec();
                        w.push(a);
                        out.push(w);
                    }
                }
                out
            }
            FamilySpec::RegularTree { degree } => {
                let d = *degree as i64;
                let mut out = Vec::new();
                if let Some((_, prefix)) = key.split_last() {
                    out.push(prefix.to_vec());
                }
                let children = if key.is_empty() { d } else { d - 1 };
                for a in 0..children {
                    let mut w = key.to_vec();
                    w.push(a);
                    out.push(w);
                }
                out
            }
            FamilySpec::TrivalentTree { .. } => unreachable!("tree windows are built directly"),
        }
    }
}

/// Ball of the given radius around `center` (default: the family origin).
///
/// Vertices missing one of their infinite-graph neighbours are marked as
/// boundary. Trivalent tree windows are instead built by uniform ray
/// truncation at length `radius`; see [`build_tree`].
pub fn build_window(spec: &FamilySpec, center: Option<&[i64]>, radius: usize) -> Result<GraphWindow> {
    spec.validate()?;
    if let FamilySpec::TrivalentTree { tree, depth } = spec {
        if radius == 0 {
            return Err(Error::EmptyWindow);
        }
        let mut w = build_tree(tree, *depth, radius)?;
        w.set_family(spec.clone());
        return Ok(w);
    }
    let seed: VertexKey = center.map(<[i64]>::to_vec).unwrap_or_else(|| spec.origin());
    if !spec.is_vertex(&seed) {
        return Err(Error::EmptyWindow);
    }
    let mut seen: HashSet<VertexKey> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.clone());
    queue.push_back((seed.clone(), 0usize));
    while let Some((key, d)) = queue.pop_front() {
        order.push(key.clone());
        if d == radius {
            continue;
        }
        for nb in spec.neighbors(&key) {
            if seen.insert(nb.clone()) {
                queue.push_back((nb, d + 1));
            }
        }
    }
    let mut edges = Vec::new();
    let mut boundary = Vec::new();
    for key in &order {
        let nbrs = spec.neighbors(key);
        if nbrs.iter().any(|nb| !seen.contains(nb)) {
            boundary.push(key.clone());
        }
        for nb in nbrs {
            if seen.contains(&nb) && key < &nb {
                edges.push((key.clone(), nb));
            }
        }
    }
    GraphWindow::from_keyed(order, edges, boundary, &seed, radius, spec.degree_bound(), Some(spec.clone()))
}
