//! Finite windows of infinite, uniformly locally finite graphs.
//!
//! A [`GraphWindow`] is an induced finite piece of an infinite graph. Vertices
//! are dense indices `0..n` assigned in lexicographic order of their family
//! keys, and every edge is stored once as `(u, v)` with `u < v`; that pair is
//! the positive orientation used by integer chains.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilySpec;

/// Family-level vertex name, e.g. grid coordinates or a reduced word.
pub type VertexKey = Vec<i64>;

/// An oriented edge, always stored with `.0 < .1`.
pub type Edge = (usize, usize);

#[derive(Clone, Debug)]
pub struct GraphWindow {
    keys: Vec<VertexKey>,
    key_index: HashMap<VertexKey, usize>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    edge_ids: HashMap<Edge, usize>,
    boundary: Vec<bool>,
    center: usize,
    inner_radius: usize,
    degree_bound: usize,
    family: Option<FamilySpec>,
}

/// Summary used by reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowStats {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub degree_bound: usize,
    pub boundary_vertices: usize,
}

impl GraphWindow {
    /// Assemble a window from keyed vertices and key pairs.
    ///
    /// Vertices are re-indexed in lexicographic key order. Self loops and
    /// duplicate edges are dropped.
    pub fn from_keyed(
        keys: Vec<VertexKey>,
        edges: impl IntoIterator<Item = (VertexKey, VertexKey)>,
        boundary_keys: impl IntoIterator<Item = VertexKey>,
        center: &VertexKey,
        inner_radius: usize,
        degree_bound: usize,
        family: Option<FamilySpec>,
    ) -> Result<Self> {
        let mut keys = keys;
        keys.sort();
        keys.dedup();
        if keys.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let key_index: HashMap<VertexKey, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let lookup = |k: &VertexKey| key_index.get(k).copied().ok_or(Error::EmptyWindow);
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (u, v) = (lookup(&a)?, lookup(&b)?);
            if u != v {
                pairs.push((u.min(v), u.max(v)));
            }
        }
        let mut boundary = vec![false; keys.len()];
        for k in boundary_keys {
            boundary[lookup(&k)?] = true;
        }
        let center = lookup(center)?;
        let mut w = Self::assemble(keys, pairs, boundary, center, inner_radius, degree_bound)?;
        w.family = family;
        Ok(w)
    }

    /// Window over plain indices `0..n`; keys are `[i]`.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = Edge>,
        boundary: Vec<bool>,
        center: usize,
        inner_radius: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyWindow);
        }
        if boundary.len() != n {
            return Err(Error::InvalidFamily("boundary mask length mismatch".into()));
        }
        if center >= n {
            return Err(Error::UnknownVertex(center));
        }
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(u.max(v)));
            }
            if u != v {
                pairs.push((u.min(v), u.max(v)));
            }
        }
        let keys = (0..n).map(|i| vec![i as i64]).collect();
        let degree_bound = 0;
        let mut w = Self::assemble(keys, pairs, boundary, center, inner_radius, degree_bound)?;
        w.degree_bound = w.max_degree();
        Ok(w)
    }

    fn assemble(
        keys: Vec<VertexKey>,
        mut pairs: Vec<Edge>,
        boundary: Vec<bool>,
        center: usize,
        inner_radius: usize,
        degree_bound: usize,
    ) -> Result<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        let n = keys.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &pairs {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let edge_ids = pairs.iter().copied().enumerate().map(|(i, e)| (e, i)).collect();
        let key_index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(Self {
            keys,
            key_index,
            adjacency,
            edges: pairs,
            edge_ids,
            boundary,
            center,
            inner_radius,
            degree_bound,
            family: None,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.keys.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn key(&self, v: usize) -> &VertexKey {
        &self.keys[v]
    }

    pub fn vertex_of(&self, key: &[i64]) -> Option<usize> {
        self.key_index.get(key).copied()
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn inner_radius(&self) -> usize {
        self.inner_radius
    }

    pub fn family(&self) -> Option<&FamilySpec> {
        self.family.as_ref()
    }

    pub(crate) fn set_family(&mut self, spec: FamilySpec) {
        self.family = Some(spec);
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.boundary[v]).collect()
    }

    /// Index of the edge `{u, v}` if present.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_ids.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn stats(&self) -> WindowStats {
        WindowStats {
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            max_degree: self.max_degree(),
            degree_bound: self.degree_bound,
            boundary_vertices: self.boundary.iter().filter(|&&b| b).count(),
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        self.distances_from_set(std::slice::from_ref(&source))
    }

    /// Multi-source BFS distances.
    pub fn distances_from_set(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices have distances");
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Graph distance inside the window; `Ok(None)` means unreachable.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.distances_from(u)[v])
    }

    /// Full distance matrix (`usize::MAX` for unreachable pairs).
    pub fn all_distances(&self) -> Vec<Vec<usize>> {
        (0..self.vertex_count())
            .map(|s| self.distances_from(s).into_iter().map(|d| d.unwrap_or(usize::MAX)).collect())
            .collect()
    }

    /// Shortest path from `u` to `v`, breaking ties by smallest next vertex.
    pub fn shortest_path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let to_v = self.distances_from(v);
        self.descend(u, &to_v)
    }

    /// Walk from `u` down a distance field to its zero, choosing the smallest
    /// neighbour at each step.
    pub(crate) fn descend(&self, u: usize, field: &[Option<usize>]) -> Option<Vec<usize>> {
        let mut d = field[u]?;
        let mut path = vec![u];
        let mut cur = u;
        while d > 0 {
            cur = *self.adjacency[cur]
                .iter()
                .find(|&&w| field[w] == Some(d - 1))
                .expect("BFS field has a descending neighbour");
            path.push(cur);
            d -= 1;
        }
        Some(path)
    }

    /// Vertices within `radius` of `v`.
    pub fn ball(&self, v: usize, radius: usize) -> Vec<usize> {
        self.distances_from(v)
            .into_iter()
            .enumerate()
            .filter_map(|(i, d)| d.filter(|&d| d <= radius).map(|_| i))
            .collect()
    }

    /// Distance of every vertex to the window boundary (`None` when the
    /// window has no boundary).
    pub fn distance_to_boundary(&self) -> Vec<Option<usize>> {
        let b = self.boundary_vertices();
        self.distances_from_set(&b)
    }

    /// Vertices at distance at least `margin` from the boundary. With no
    /// boundary every vertex qualifies.
    pub fn interior_mask(&self, margin: usize) -> Vec<bool> {
        self.distance_to_boundary().into_iter().map(|d| d.is_none_or(|d| d >= margin)).collect()
    }

    /// Edges with exactly one endpoint in `set`.
    pub fn edge_boundary(&self, set: &[usize]) -> Vec<Edge> {
        let mask = self.mask_of(set);
        self.edges.iter().copied().filter(|&(u, v)| mask[u] != mask[v]).collect()
    }

    pub fn mask_of(&self, set: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count()];
        for &v in set {
            mask[v] = true;
        }
        mask
    }

    /// Connected components of the subgraph induced on `mask`, each sorted,
    /// listed by smallest vertex.
    pub fn components(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for s in 0..self.vertex_count() {
            if !mask[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adjacency[u] {
                    if mask[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(&vec![true; self.vertex_count()]).len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.vertex_count()
    }

    /// Induced subgraph on `mask`, keeping keys, boundary marks and bounds.
    /// Vertices that lose a neighbour become boundary vertices.
    pub fn induced(&self, mask: &[bool], center: usize, inner_radius: usize) -> Result<Self> {
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&v| mask[v]).collect();
        let keys: Vec<VertexKey> = keep.iter().map(|&v| self.keys[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| mask[u] && mask[v])
            .map(|&(u, v)| (self.keys[u].clone(), self.keys[v].clone()));
        let boundary = keep
            .iter()
            .filter(|&&v| self.boundary[v] || self.adjacency[v].iter().any(|&w| !mask[w]))
            .map(|&v| self.keys[v].clone());
        if !mask[center] {
            return Err(Error::UnknownVertex(center));
        }
        Self::from_keyed(
            keys,
            edges,
            boundary,
            &self.keys[center].clone(),
            inner_radius,
            self.degree_bound,
            self.family.clone(),
        )
    }
}

/// Result of unfolding high-degree stars into combs.
#[derive(Clone, Debug)]
pub struct CombUnfolding {
    pub tree: GraphWindow,
    /// Image of each original vertex in the unfolded tree.
    pub vertex_map: Vec<usize>,
}

/// Replace every vertex of degree `d > 3` by a path of `d - 2` vertices.
///
/// Incident edges (in neighbour order) are attached two at each end of the
/// path and one at every internal vertex, so the result has maximum degree 3.
pub fn star_to_comb(tree: &GraphWindow) -> Result<CombUnfolding> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    let n = tree.vertex_count();
    // slot[v][j] = new vertex carrying v's j-th incident edge
    let mut slots: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut vertex_map = Vec::with_capacity(n);
    let mut next = 0usize;
    let mut new_edges = Vec::new();
    let mut boundary = Vec::new();
    for v in 0..n {
        let d = tree.degree(v);
        if d <= 3 {
            slots.push(vec![next; d]);
            vertex_map.push(next);
            boundary.push(tree.is_boundary(v));
            next += 1;
        } else {
            let path: Vec<usize> = (next..next + d - 2).collect();
            next += d - 2;
            for pair in path.windows(2) {
                new_edges.push((pair[0], pair[1]));
            }
            let mut s = Vec::with_capacity(d);
            s.push(path[0]);
            s.push(path[0]);
            s.extend_from_slice(&path[1..path.len() - 1]);
            s.push(path[path.len() - 1]);
            s.push(path[path.len() - 1]);
            slots.push(s);
            vertex_map.push(path[0]);
            boundary.extend(std::iter::repeat_n(tree.is_boundary(v), d - 2));
        }
    }
    for &(u, v) in tree.edges() {
        let iu = tree.neighbors(u).binary_search(&v).expect("adjacency is symmetric");
        let iv = tree.neighbors(v).binary_search(&u).expect("adjacency is symmetric");
        new_edges.push((slots[u][iu], slots[v][iv]));
    }
    let unfolded = GraphWindow::from_edges(next, new_edges, boundary, vertex_map[tree.center()], tree.inner_radius())?;
    Ok(CombUnfolding { tree: unfolded, vertex_map })
}

/// Group vertices by BFS layer from `root`.
pub fn layers(w: &GraphWindow, root: usize) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, d) in w.distances_from(root).into_iter().enumerate() {
        if let Some(d) = d {
            out.entry(d).or_default().push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(d: usize) -> GraphWindow {
        let mut boundary = vec![true; d + 1];
        boundary[0] = false;
        GraphWindow::from_edges(d + 1, (1..=d).map(|i| (0, i)), boundary, 0, 1).unwrap()
    }

    #[test]
    fn edge_boundary_of_everything_is_empty() {
        let w = star(4);
        let all: Vec<usize> = (0..5).collect();
        assert!(w.edge_boundary(&all).is_empty());
        assert_eq!(w.edge_boundary(&[0]).len(), 4);
    }

    #[test]
    fn degree_three_star_unchanged() {
        let w = star(3);
        let c = star_to_comb(&w).unwrap();
        assert_eq!(c.tree.vertex_count(), 4);
        assert_eq!(c.tree.edge_count(), 3);
    }

    #[test]
    fn degree_four_star_becomes_two_comb_vertices() {
        let c = star_to_comb(&star(4)).unwrap();
        assert_eq!(c.tree.vertex_count(), 4 + 2);
        assert!(c.tree.is_tree());
        assert!(c.tree.max_degree() <= 3);
    }

    #[test]
    fn degree_six_star_distortion() {
        let w = star(6);
        let c = star_to_comb(&w).unwrap();
        assert_eq!(c.tree.vertex_count(), 6 + 4);
        assert!(c.tree.max_degree() <= 3);
        for a in 1..=6 {
            for b in 1..=6 {
                let old = w.distance(a, b).unwrap().unwrap();
                let new = c.tree.distance(c.vertex_map[a], c.vertex_map[b]).unwrap().unwrap();
                assert!(new >= old);
                assert!(new - old <= 4, "leaves {a},{b}: {old} -> {new}");
            }
        }
    }

    #[test]
    fn star_to_comb_rejects_cycles() {
        let w = GraphWindow::from_edges(3, [(0, 1), (1, 2), (0, 2)], vec![false; 3], 0, 1).unwrap();
        assert_eq!(star_to_comb(&w).unwrap_err(), Error::NotATree);
    }

    #[test]
    fn shortest_path_prefers_small_vertices() {
        // 4-cycle 0-1-3-2-0: from 0 to 3 both 1 and 2 work; 1 wins.
        let w = GraphWindow::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)], vec![false; 4], 0, 2).unwrap();
        assert_eq!(w.shortest_path(0, 3).unwrap(), vec![0, 1, 3]);
        assert_eq!(w.distance(0, 0).unwrap(), Some(0));
    }

    #[test]
    fn unreachable_pairs_are_none() {
        let w = GraphWindow::from_edges(3, [(0, 1)], vec![false; 3], 0, 1).unwrap();
        assert_eq!(w.distance(0, 2).unwrap(), None);
        assert!(matches!(w.distance(0, 7), Err(Error::UnknownVertex(7))));
    }
}
