//! Rips complexes of a window and the passages between circuits, Rips
//! 2-chains and virtual edges.

use std::collections::BTreeMap;

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::graph::{Edge, GraphWindow};
use crate::scalar::Coefficient;

/// Radius-`r` Rips complex of a window, truncated at dimension 2.
///
/// Virtual edges join vertices at base distance at most `r`; every virtual
/// edge `u < v` carries a fixed shortest path `p(u, v)` and `p(v, u)` is its
/// reverse.
#[derive(Clone, Debug)]
pub struct RipsComplex {
    base: GraphWindow,
    radius: usize,
    dist: Vec<Vec<usize>>,
    virtual_edges: Vec<Edge>,
    paths: BTreeMap<Edge, Vec<usize>>,
}

impl RipsComplex {
    pub fn build(base: &GraphWindow, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::ZeroRadius);
        }
        let dist = base.all_distances();
        let n = base.vertex_count();
        let mut virtual_edges = Vec::new();
        let mut paths = BTreeMap::new();
        for u in 0..n {
            let to_u: Vec<Option<usize>> = dist[u].iter().map(|&d| (d != usize::MAX).then_some(d)).collect();
            for v in u + 1..n {
                if dist[u][v] <= radius {
                    virtual_edges.push((u, v));
                    // walk from v down to u, then reverse: path starts at u
                    let mut p = base.descend(v, &to_u).expect("reachable pair");
                    p.reverse();
                    paths.insert((u, v), p);
                }
            }
        }
        Ok(Self { base: base.clone(), radius, dist, virtual_edges, paths })
    }

    pub fn base(&self) -> &GraphWindow {
        &self.base
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.dist[u][v]
    }

    pub fn virtual_edges(&self) -> &[Edge] {
        &self.virtual_edges
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.dist[u][v] <= self.radius
    }

    pub fn contains_triangle(&self, a: usize, b: usize, c: usize) -> bool {
        self.contains_edge(a, b) && self.contains_edge(b, c) && self.contains_edge(a, c)
    }

    /// The fixed shortest path from `u` to `v`.
    pub fn path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        if u < v {
            self.paths.get(&(u, v)).cloned()
        } else {
            self.paths.get(&(v, u)).map(|p| p.iter().rev().copied().collect())
        }
    }

    /// All virtual triangles `(a, b, c)` with `a < b < c`.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        self.triangles_where(|_| true)
    }

    /// Virtual triangles with at least `min_inside` vertices in `mask`.
    pub fn triangles_meeting(&self, mask: &[bool], min_inside: usize) -> Vec<[usize; 3]> {
        self.triangles_where(|t| t.iter().filter(|&&v| mask[v]).count() >= min_inside)
    }

    fn triangles_where(&self, keep: impl Fn(&[usize; 3]) -> bool) -> Vec<[usize; 3]> {
        let n = self.base.vertex_count();
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in &self.virtual_edges {
            nbrs[u].push(v);
        }
        let mut out = Vec::new();
        for a in 0..n {
            for (i, &b) in nbrs[a].iter().enumerate() {
                for &c in &nbrs[a][i + 1..] {
                    let t = [a, b, c];
                    if self.dist[b][c] <= self.radius && keep(&t) {
                        out.push(t);
                    }
                }
            }
        }
        out
    }

    /// The 1-skeleton as a window on the same vertex indices.
    pub fn one_skeleton(&self) -> Result<GraphWindow> {
        GraphWindow::from_edges(
            self.base.vertex_count(),
            self.virtual_edges.iter().copied(),
            self.base.boundary_mask().to_vec(),
            self.base.center(),
            self.base.inner_radius(),
        )
    }

    /// Map each triangle `(u, v, w)` of `g` to the closed walk
    /// `p(u, v) p(v, w) p(w, u)` with coefficient `g(t)`.
    pub fn circuits_from_2chain<R: Coefficient>(&self, g: &Chain<R>) -> Result<Vec<(Vec<usize>, R)>> {
        g.expect_degree(2)?;
        let mut out = Vec::new();
        for (s, &c) in g.iter() {
            let [u, v, w] = [s.vertices()[0], s.vertices()[1], s.vertices()[2]];
            if !self.contains_triangle(u, v, w) {
                return Err(Error::NotInComplex(s.vertices().to_vec()));
            }
            let mut walk = self.path(u, v).expect("virtual edge");
            walk.pop();
            walk.extend(self.path(v, w).expect("virtual edge"));
            walk.pop();
            walk.extend(self.path(w, u).expect("virtual edge"));
            walk.pop();
            out.push((walk, c));
        }
        Ok(out)
    }

    /// Replace each virtual edge of a cycle by its fixed path.
    ///
    /// Returns `(traced, witness)` where `traced` lives on genuine edges and
    /// `boundary(witness) = f - traced`.
    pub fn trace_virtual_edges<R: Coefficient>(&self, f: &Chain<R>) -> Result<(Chain<R>, Chain<R>)> {
        f.expect_degree(1)?;
        if !f.is_cycle(&self.base) {
            return Err(Error::NotACycle);
        }
        let mut traced = Chain::zero(1);
        let mut witness = Chain::zero(2);
        for ((u, v), c) in f.edge_terms() {
            if !self.contains_edge(u, v) {
                return Err(Error::NotInComplex(vec![u, v]));
            }
            let p = self.path(u, v).expect("virtual edge");
            traced.add_scaled(&Chain::path(&p), c);
            // fan from u over the path: its boundary is p - (u, v)
            for i in 1..p.len().saturating_sub(1) {
                witness.add_term(&[u, p[i], p[i + 1]], -c);
            }
        }
        Ok((traced, witness))
    }
}

/// Check that `walk` is a closed walk of the base graph.
pub fn check_circuit(w: &GraphWindow, walk: &[usize]) -> Result<()> {
    if walk.len() < 3 {
        return Err(Error::CircuitTooShort(walk.len()));
    }
    for i in 0..walk.len() {
        let (a, b) = (walk[i], walk[(i + 1) % walk.len()]);
        if a >= w.vertex_count() || b >= w.vertex_count() || !w.has_edge(a, b) {
            return Err(Error::NotACircuit(format!("{a}-{b} is not an edge")));
        }
    }
    Ok(())
}

/// Fan triangulation `sum_i (v_1, v_i, v_{i+1})` of a circuit of length `s`.
///
/// Returns the 2-chain together with the Rips radius it needs, which is at
/// most `ceil(s / 2)`.
pub fn triangulate_circuit<R: Coefficient>(w: &GraphWindow, circuit: &[usize]) -> Result<(Chain<R>, usize)> {
    check_circuit(w, circuit)?;
    let s = circuit.len();
    let mut fan = Chain::zero(2);
    let from_first = w.distances_from(circuit[0]);
    let mut needed = 1;
    for i in 1..s - 1 {
        fan.add_term(&[circuit[0], circuit[i], circuit[i + 1]], R::one());
        for &x in &circuit[i..=i + 1] {
            needed = needed.max(from_first[x].expect("circuit is connected"));
        }
    }
    debug_assert!(needed <= s.div_ceil(2));
    Ok((fan, needed.max(1)))
}

/// Sum of coefficient-weighted closed walks.
pub fn edge_sum<R: Coefficient>(walks: &[(Vec<usize>, R)]) -> Chain<R> {
    let mut out = Chain::zero(1);
    for (walk, c) in walks {
        out.add_scaled(&Chain::closed_walk(walk), *c);
    }
    out
}
