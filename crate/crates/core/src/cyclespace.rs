//! GF(2) cycle spaces: simple circuits, leading-index elimination, nested
//! bases filtered by circuit length, and the large-circuit profile.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{build_window, FamilySpec};
use crate::graph::GraphWindow;
use crate::Z2Chain;

/// Default cap on enumerated circuits.
pub const DEFAULT_CIRCUIT_CAP: usize = 1_000_000;

/// Dense GF(2) vector over window edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet {
    words: Vec<u64>,
}

impl EdgeSet {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_ids(len: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::zeros(len);
        for i in ids {
            s.flip(i);
        }
        s
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest index in the support.
    pub fn leading(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ids(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// A simple circuit: its vertex cycle and edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub vertices: Vec<usize>,
    pub edges: EdgeSet,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn from_vertices(w: &GraphWindow, vertices: Vec<usize>) -> Result<Self> {
        crate::rips::check_circuit(w, &vertices)?;
        let ids = (0..vertices.len())
            .map(|i| w.edge_id(vertices[i], vertices[(i + 1) % vertices.len()]).expect("checked circuit"));
        Ok(Self { edges: EdgeSet::from_ids(w.edge_count(), ids), vertices })
    }
}

/// Edge set of a GF(2) chain on window edges.
pub fn chain_edge_set(w: &GraphWindow, f: &Z2Chain) -> Result<EdgeSet> {
    f.expect_degree(1)?;
    let mut ids = Vec::new();
    for ((u, v), _) in f.edge_terms() {
        ids.push(w.edge_id(u, v).ok_or_else(|| Error::NotInComplex(vec![u, v]))?);
    }
    Ok(EdgeSet::from_ids(w.edge_count(), ids))
}

/// All simple circuits of length at most `max_len`, each once up to
/// rotation and reflection, sorted by length and then by edge set.
pub fn enumerate_simple_circuits(w: &GraphWindow, max_len: usize, cap: usize) -> Result<Vec<Circuit>> {
    enumerate_simple_circuits_in(w, &vec![true; w.vertex_count()], max_len, cap)
}

/// As [`enumerate_simple_circuits`], keeping only circuits inside `mask`.
pub fn enumerate_simple_circuits_in(
    w: &GraphWindow,
    mask: &[bool],
    max_len: usize,
    cap: usize,
) -> Result<Vec<Circuit>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut on_path = vec![false; w.vertex_count()];
    let mut path = Vec::new();
    for s in 0..w.vertex_count() {
        if !mask[s] {
            continue;
        }
        path.push(s);
        on_path[s] = true;
        extend(w, mask, s, max_len, cap, &mut path, &mut on_path, &mut found)?;
        on_path[s] = false;
        path.pop();
    }
    let mut out: Vec<Circuit> =
        found.into_iter().map(|v| Circuit::from_vertices(w, v).expect("enumerated circuit")).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.edges.ids().cmp(&b.edges.ids())));
    Ok(out)
}

// DFS over vertices larger than the start; a circuit is recorded from its
// smallest vertex, in the direction where the second vertex is smaller than
// the last.
#[allow(clippy::too_many_arguments)]
fn extend(
    w: &GraphWindow,
    mask: &[bool],
    start: usize,
    max_len: usize,
    cap: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    found: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let cur = *path.last().expect("nonempty path");
    for &next in w.neighbors(cur) {
        if next == start && path.len() >= 3 && path[1] < cur {
            if found.len() >= cap {
                return Err(Error::CircuitCap(cap));
            }
            found.push(path.clone());
        }
        if next > start && mask[next] && !on_path[next] && path.len() < max_len {
            path.push(next);
            on_path[next] = true;
            extend(w, mask, start, max_len, cap, path, on_path, found)?;
            on_path[next] = false;
            path.pop();
        }
    }
    Ok(())
}

/// One element of a leading-index basis.
#[derive(Clone, Debug)]
pub struct BasisElement {
    /// Reduced row; its leading index is unique in the basis.
    pub row: EdgeSet,
    pub leading: usize,
    /// Length of the circuit that produced it.
    pub circuit_len: usize,
    /// Input circuits whose sum is `row`.
    pub sources: Vec<usize>,
}

/// Leading-index basis of the span of an ordered circuit list. Fed by
/// length, every prefix `B_i` (elements from circuits of length at most
/// `i`) spans the circuits of length at most `i`.
#[derive(Clone, Debug)]
pub struct FilteredCycleBasis {
    edge_count: usize,
    circuit_count: usize,
    elements: Vec<BasisElement>,
    pivot: Vec<Option<usize>>,
    /// For each input circuit, the basis elements summing to it.
    expressions: Vec<Vec<usize>>,
}

pub fn gaussian_leading_basis(edge_count: usize, circuits: &[Circuit]) -> FilteredCycleBasis {
    let mut basis = FilteredCycleBasis {
        edge_count,
        circuit_count: circuits.len(),
        elements: Vec::new(),
        pivot: vec![None; edge_count],
        expressions: Vec::with_capacity(circuits.len()),
    };
    for (i, c) in circuits.iter().enumerate() {
        let mut row = c.edges.clone();
        let mut sources = EdgeSet::from_ids(circuits.len(), [i]);
        let mut used = Vec::new();
        while let Some(l) = row.leading() {
            match basis.pivot[l] {
                Some(j) => {
                    row.xor_with(&basis.elements[j].row);
                    for &s in &basis.elements[j].sources {
                        sources.flip(s);
                    }
                    used.push(j);
                }
                None => {
                    let j = basis.elements.len();
                    basis.pivot[l] = Some(j);
                    basis.elements.push(BasisElement { row, leading: l, circuit_len: c.len(), sources: sources.ids() });
                    used.push(j);
                    break;
                }
            }
        }
        used.sort_unstable();
        basis.expressions.push(used);
    }
    basis
}

/// Outcome of reducing a cycle against a prefix of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Input circuits summing to the cycle, when it is a member.
    pub circuits: Vec<usize>,
    /// Basis elements used.
    pub elements: Vec<usize>,
}

impl FilteredCycleBasis {
    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Basis elements whose sum is input circuit `i`.
    pub fn expression(&self, i: usize) -> &[usize] {
        &self.expressions[i]
    }

    /// Size of `B_i`.
    pub fn dimension_at(&self, max_len: usize) -> usize {
        self.elements.iter().filter(|e| e.circuit_len <= max_len).count()
    }

    /// Indices of `B_i`; a prefix of the element list.
    pub fn prefix(&self, max_len: usize) -> std::ops::Range<usize> {
        0..self.dimension_at(max_len)
    }

    pub fn has_distinct_leading(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.elements.iter().all(|e| seen.insert(e.leading))
    }

    /// Reduce `f` against `B_max_len`.
    pub fn membership(&self, f: &EdgeSet, max_len: usize) -> Membership {
        let mut row = f.clone();
        let mut elements = Vec::new();
        let mut sources = EdgeSet::zeros(self.circuit_count.max(1));
        while let Some(l) = row.leading() {
            match self.pivot[l] {
                Some(j) if self.elements[j].circuit_len <= max_len => {
                    row.xor_with(&self.elements[j].row);
                    for &s in &self.elements[j].sources {
                        sources.flip(s);
                    }
                    elements.push(j);
                }
                _ => return Membership { member: false, circuits: Vec::new(), elements: Vec::new() },
            }
        }
        elements.sort_unstable();
        Membership { member: true, circuits: sources.ids(), elements }
    }

    /// Largest number of basis rows through a single edge.
    pub fn max_edge_load(&self) -> usize {
        let mut load = vec![0usize; self.edge_count];
        for e in &self.elements {
            for i in e.row.ids() {
                load[i] += 1;
            }
        }
        load.into_iter().max().unwrap_or(0)
    }
}

/// One row of a large-circuit profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub r: usize,
    pub dimension: usize,
    pub new_elements: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProfileVerdict {
    Stabilized { r0: usize },
    LargeCircuits { up_to: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowProfile {
    pub window_radius: usize,
    pub rows: Vec<ProfileRow>,
    /// Smallest `r` from which the dimension stays constant up to the
    /// largest length examined.
    pub settles_at: usize,
    /// Set when the circuit cap forced a smaller length bound.
    pub capped_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitProfile {
    pub family: String,
    pub r_max: usize,
    pub margin: usize,
    pub windows: Vec<WindowProfile>,
    pub verdict: ProfileVerdict,
}

/// Interior cycle-space dimensions for circuit lengths `3..=r_max` in one
/// window. Only circuits whose vertices all lie at least `margin` from the
/// window boundary count.
pub fn window_profile(w: &GraphWindow, r_max: usize, margin: usize, cap: usize) -> Result<WindowProfile> {
    let mask = w.interior_mask(margin);
    let mut bound = r_max;
    let mut capped_at = None;
    let circuits = loop {
        match enumerate_simple_circuits_in(w, &mask, bound, cap) {
            Ok(c) => break c,
            Err(Error::CircuitCap(_)) if bound > 3 => {
                bound -= 1;
                capped_at = Some(bound);
            }
            Err(e) => return Err(e),
        }
    };
    let basis = gaussian_leading_basis(w.edge_count(), &circuits);
    let mut rows = Vec::new();
    let mut prev = 0;
    for r in 3..=bound {
        let d = basis.dimension_at(r);
        rows.push(ProfileRow { r, dimension: d, new_elements: d - prev });
        prev = d;
    }
    let settles_at = rows.iter().rev().take_while(|row| row.dimension == prev).last().map_or(3, |row| row.r);
    Ok(WindowProfile { window_radius: w.inner_radius(), rows, settles_at, capped_at })
}

/// Profile at `window_radius` and the next radius; stabilized when both
/// settle at the same `r0 < r_max`.
pub fn large_circuit_profile(
    spec: &FamilySpec,
    r_max: usize,
    window_radius: usize,
    margin: usize,
    cap: usize,
) -> Result<CircuitProfile> {
    if margin >= window_radius {
        return Err(Error::MarginTooLarge { margin, radius: window_radius });
    }
    let mut windows = Vec::new();
    for radius in [window_radius, window_radius + 1] {
        let w = build_window(spec, None, radius)?;
        windows.push(window_profile(&w, r_max, margin, cap)?);
    }
    let verdict = stabilization_verdict(&windows, r_max);
    Ok(CircuitProfile { family: spec.name().to_string(), r_max, margin, windows, verdict })
}

/// Stabilized at `r0` when consecutive windows settle at the same
/// `r0 < r_max` without hitting the cap.
pub fn stabilization_verdict(windows: &[WindowProfile], r_max: usize) -> ProfileVerdict {
    let r0 = windows[0].settles_at;
    let agree = windows.windows(2).all(|p| p[0].settles_at == p[1].settles_at);
    let capped = windows.iter().any(|w| w.capped_at.is_some());
    if agree && !capped && r0 < r_max {
        ProfileVerdict::Stabilized { r0 }
    } else {
        ProfileVerdict::LargeCircuits { up_to: r_max }
    }
}
