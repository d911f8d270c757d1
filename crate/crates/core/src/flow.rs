//! Flows on windows: decomposition into circuits and window bips, layered
//! circuit decomposition, lifting GF(2) cycles to integers, ray extension and
//! finite extension of partial flows.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::Zero;
use serde::Serialize;

use crate::chain::Chain;
use crate::ends::end_partition;
use crate::error::{Error, Result};
use crate::graph::GraphWindow;
use crate::scalar::{Coefficient, Z2};
use crate::{Z2Chain, ZChain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    Circuit,
    /// Boundary-to-boundary truncation of a bi-infinite path.
    WindowBip,
}

/// A circuit (closed, last vertex joined to the first) or an open
/// boundary-to-boundary path, carrying a coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathPiece<R> {
    pub kind: PieceKind,
    pub vertices: Vec<usize>,
    #[serde(skip)]
    pub coeff: R,
}

impl<R: Coefficient> PathPiece<R> {
    /// Unit chain traced by the piece (without the coefficient).
    pub fn unit_chain(&self) -> Chain<R> {
        match self.kind {
            PieceKind::Circuit => Chain::closed_walk(&self.vertices),
            PieceKind::WindowBip => Chain::path(&self.vertices),
        }
    }

    pub fn chain(&self) -> Chain<R> {
        self.unit_chain().scale(self.coeff)
    }

    /// Edges as unordered pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let v = &self.vertices;
        let mut out: Vec<(usize, usize)> = v.windows(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
        if self.kind == PieceKind::Circuit && v.len() > 1 {
            let (a, b) = (v[v.len() - 1], v[0]);
            out.push((a.min(b), a.max(b)));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.edges().len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition<R> {
    pub pieces: Vec<PathPiece<R>>,
    /// Largest number of pieces covering a single edge.
    pub multiplicity: usize,
}

impl<R: Coefficient> Decomposition<R> {
    pub fn edge_sum(&self) -> Chain<R> {
        let mut out = Chain::zero(1);
        for p in &self.pieces {
            out.add_scaled(&p.unit_chain(), p.coeff);
        }
        out
    }

    pub fn circuits(&self) -> impl Iterator<Item = &PathPiece<R>> {
        self.pieces.iter().filter(|p| p.kind == PieceKind::Circuit)
    }

    pub fn bips(&self) -> impl Iterator<Item = &PathPiece<R>> {
        self.pieces.iter().filter(|p| p.kind == PieceKind::WindowBip)
    }

    fn finish(pieces: Vec<PathPiece<R>>) -> Self {
        let mut cover: HashMap<(usize, usize), usize> = HashMap::new();
        for p in &pieces {
            for e in p.edges() {
                *cover.entry(e).or_default() += 1;
            }
        }
        let multiplicity = cover.values().copied().max().unwrap_or(0);
        Self { pieces, multiplicity }
    }
}

/// Directed residual flow with lexicographic traversal.
struct Residual {
    out: Vec<BTreeMap<usize, u64>>,
    excess: Vec<i64>,
}

impl Residual {
    fn from_chain(n: usize, f: &ZChain) -> Self {
        let mut out = vec![BTreeMap::new(); n];
        let mut excess = vec![0i64; n];
        for ((u, v), c) in f.edge_terms() {
            let (a, b) = if c > 0 { (u, v) } else { (v, u) };
            let m = c.unsigned_abs();
            out[a].insert(b, m);
            excess[a] += c.abs();
            excess[b] -= c.abs();
        }
        Self { out, excess }
    }

    fn take(&mut self, a: usize, b: usize, amount: u64) {
        let slot = self.out[a].get_mut(&b).expect("residual edge");
        *slot -= amount;
        if *slot == 0 {
            self.out[a].remove(&b);
        }
    }
}

/// Follow flow greedily, splitting an inner-closed integer flow into
/// circuits and window bips whose weighted sum is `f`.
pub fn decompose_flow(w: &GraphWindow, f: &ZChain) -> Result<Decomposition<i64>> {
    f.expect_degree(1)?;
    if !f.is_cycle(w) {
        return Err(Error::NotACycle);
    }
    let n = w.vertex_count();
    let mut res = Residual::from_chain(n, f);
    let mut pieces = Vec::new();
    loop {
        let source = (0..n).find(|&v| res.excess[v] > 0);
        let start = match source {
            Some(s) => s,
            None => match (0..n).find(|&v| !res.out[v].is_empty()) {
                Some(s) => s,
                None => break,
            },
        };
        let mut path = vec![start];
        let mut pos: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        let mut cur = start;
        loop {
            if source.is_some() && path.len() > 1 && res.excess[cur] < 0 {
                let mut amount = res.excess[start].unsigned_abs().min(res.excess[cur].unsigned_abs());
                for p in path.windows(2) {
                    amount = amount.min(res.out[p[0]][&p[1]]);
                }
                for p in path.windows(2) {
                    res.take(p[0], p[1], amount);
                }
                res.excess[start] -= amount as i64;
                res.excess[cur] += amount as i64;
                pieces.push(PathPiece { kind: PieceKind::WindowBip, vertices: path, coeff: amount as i64 });
                break;
            }
            let Some((&next, _)) = res.out[cur].iter().next() else {
                return Err(Error::NonzeroResidue);
            };
            if let Some(&i) = pos.get(&next) {
                let cycle: Vec<usize> = path[i..].to_vec();
                let mut amount = u64::MAX;
                for k in 0..cycle.len() {
                    let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                    amount = amount.min(res.out[a][&b]);
                }
                for k in 0..cycle.len() {
                    res.take(cycle[k], cycle[(k + 1) % cycle.len()], amount);
                }
                pieces.push(PathPiece { kind: PieceKind::Circuit, vertices: cycle, coeff: amount as i64 });
                break;
            }
            pos.insert(next, path.len());
            path.push(next);
            cur = next;
        }
    }
    let d = Decomposition::finish(pieces);
    if d.edge_sum() != *f {
        return Err(Error::NonzeroResidue);
    }
    Ok(d)
}

/// GF(2) version of [`decompose_flow`]; pieces have pairwise disjoint
/// edge sets.
pub fn decompose_z2(w: &GraphWindow, f: &Z2Chain) -> Result<Decomposition<Z2>> {
    f.expect_degree(1)?;
    if !f.is_cycle(w) {
        return Err(Error::NotACycle);
    }
    let n = w.vertex_count();
    let mut adj: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for ((u, v), _) in f.edge_terms() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let mut pieces = Vec::new();
    loop {
        let source = (0..n).find(|&v| adj[v].len() % 2 == 1);
        let start = match source {
            Some(s) => s,
            None => match (0..n).find(|&v| !adj[v].is_empty()) {
                Some(s) => s,
                None => break,
            },
        };
        let mut path = vec![start];
        let mut pos: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        let mut cur = start;
        let mut prev: Option<usize> = None;
        loop {
            if source.is_some() && path.len() > 1 && adj[cur].len() % 2 == 1 {
                for p in path.windows(2) {
                    adj[p[0]].remove(&p[1]);
                    adj[p[1]].remove(&p[0]);
                }
                pieces.push(PathPiece { kind: PieceKind::WindowBip, vertices: path, coeff: Z2::ONE });
                break;
            }
            let Some(&next) = adj[cur].iter().find(|&&x| Some(x) != prev) else {
                return Err(Error::NonzeroResidue);
            };
            if let Some(&i) = pos.get(&next) {
                let cycle: Vec<usize> = path[i..].to_vec();
                for k in 0..cycle.len() {
                    let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                    adj[a].remove(&b);
                    adj[b].remove(&a);
                }
                pieces.push(PathPiece { kind: PieceKind::Circuit, vertices: cycle, coeff: Z2::ONE });
                break;
            }
            pos.insert(next, path.len());
            path.push(next);
            prev = Some(cur);
            cur = next;
        }
    }
    let d = Decomposition::finish(pieces);
    if d.edge_sum() != *f {
        return Err(Error::NonzeroResidue);
    }
    Ok(d)
}

/// Split a multiset of circuits (vertex lists) into layers of pairwise
/// vertex-disjoint circuits. Each layer is a maximal disjoint subfamily of
/// what remains, chosen greedily in input order. Returns indices.
pub fn layered_circuit_decomposition(circuits: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..circuits.len()).collect();
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let mut used = std::collections::HashSet::new();
        let mut layer = Vec::new();
        let mut rest = Vec::new();
        for &i in &remaining {
            if circuits[i].iter().any(|v| used.contains(v)) {
                rest.push(i);
            } else {
                used.extend(circuits[i].iter().copied());
                layer.push(i);
            }
        }
        layers.push(layer);
        remaining = rest;
    }
    layers
}

/// Largest number of other circuits a single circuit meets.
pub fn max_intersection_degree(circuits: &[Vec<usize>]) -> usize {
    let sets: Vec<std::collections::HashSet<usize>> = circuits.iter().map(|c| c.iter().copied().collect()).collect();
    (0..sets.len())
        .map(|i| (0..sets.len()).filter(|&j| j != i && !sets[i].is_disjoint(&sets[j])).count())
        .max()
        .unwrap_or(0)
}

/// Lift an inner-closed GF(2) chain to an integer cycle of norm 1 by
/// orienting each piece of its decomposition along its traversal.
pub fn lift_z2_to_z(w: &GraphWindow, f: &Z2Chain) -> Result<ZChain> {
    let d = decompose_z2(w, f)?;
    let mut out = ZChain::zero(1);
    for p in &d.pieces {
        let unit = match p.kind {
            PieceKind::Circuit => ZChain::closed_walk(&p.vertices),
            PieceKind::WindowBip => ZChain::path(&p.vertices),
        };
        out.add_scaled(&unit, 1);
    }
    Ok(out)
}

/// Extend an integer partial flow `r <= phi` until it closes on the inner
/// region, adding unit flow only in directions `phi` allows.
///
/// Excess inflow at an inner vertex is pushed out along an edge where `phi`
/// still exceeds the current flow, and a deficit is fed symmetrically.
/// Boundary vertices act as sinks.
pub fn extend_ray(w: &GraphWindow, phi: &ZChain, r: &ZChain) -> Result<ZChain> {
    phi.expect_degree(1)?;
    r.expect_degree(1)?;
    if !phi.is_cycle(w) {
        return Err(Error::NotACycle);
    }
    for ((u, v), c) in r.edge_terms() {
        let p = phi.coeff(&[u, v]);
        if p.signum() != c.signum() || c.abs() > p.abs() {
            return Err(Error::DominanceViolated((u, v)));
        }
    }
    let mut cur = r.clone();
    loop {
        let defect = cur.inner_defect(w)?;
        let Some((s, &d)) = defect.iter().next() else {
            return Ok(cur);
        };
        let v = s.vertices()[0];
        // d > 0: more flows in than out, push one unit out of v
        let step = w.neighbors(v).iter().copied().find_map(|u| {
            let (a, b) = if d > 0 { (v, u) } else { (u, v) };
            let allowed = phi.coeff(&[a, b]);
            (allowed > 0 && allowed > cur.coeff(&[a, b])).then_some((a, b))
        });
        let (a, b) = step.ok_or(Error::NotACycle)?;
        cur.add_term(&[a, b], 1);
    }
}

/// GF(2) ray extension: `r <= phi` means the support of `r` lies in that of
/// `phi`; odd inner vertices of `r` are fixed by adding `phi`-edges.
pub fn extend_ray_z2(w: &GraphWindow, phi: &Z2Chain, r: &Z2Chain) -> Result<Z2Chain> {
    phi.expect_degree(1)?;
    r.expect_degree(1)?;
    if !phi.is_cycle(w) {
        return Err(Error::NotACycle);
    }
    for ((u, v), _) in r.edge_terms() {
        if phi.coeff(&[u, v]).is_zero() {
            return Err(Error::DominanceViolated((u, v)));
        }
    }
    let mut cur = r.clone();
    loop {
        let defect = cur.inner_defect(w)?;
        let Some((s, _)) = defect.iter().next() else {
            return Ok(cur);
        };
        let v = s.vertices()[0];
        let u = w
            .neighbors(v)
            .iter()
            .copied()
            .find(|&u| !phi.coeff(&[v, u]).is_zero() && cur.coeff(&[v, u]).is_zero())
            .ok_or(Error::NotACycle)?;
        cur.add_term(&[v, u], Z2::ONE);
    }
}

/// Close a flow `f` on the induced subgraph of `set` by joining its
/// boundary defects with paths running outside `set`.
///
/// Positive and negative defects are paired smallest-first; each connecting
/// path avoids edges already used by earlier repair paths when possible.
pub fn finite_extension(w: &GraphWindow, set: &[usize], f: &ZChain) -> Result<ZChain> {
    f.expect_degree(1)?;
    let inside = w.mask_of(set);
    for ((u, v), _) in f.edge_terms() {
        if !(inside[u] && inside[v]) {
            return Err(Error::NotInComplex(vec![u, v]));
        }
    }
    let rim: Vec<bool> =
        (0..w.vertex_count()).map(|v| inside[v] && w.neighbors(v).iter().any(|&x| !inside[x])).collect();
    let defect = f.boundary()?;
    let mut excess = vec![0i64; w.vertex_count()];
    let mut total = 0i64;
    for (s, &c) in defect.iter() {
        let v = s.vertices()[0];
        if !rim[v] {
            return Err(Error::DefectOffBoundary);
        }
        excess[v] = c;
        total += c;
    }
    if total != 0 {
        return Err(Error::DefectSumNonzero(total));
    }
    if excess.iter().all(|&e| e == 0) {
        return Ok(f.clone());
    }
    let ends = end_partition(w, set, false)?;
    if ends.pseudo_ends.len() > 1 {
        return Err(Error::PseudoEndCount(ends.pseudo_ends.len()));
    }
    let mut out = f.clone();
    let mut used: std::collections::HashSet<(usize, usize)> = Default::default();
    while let Some(v) = (0..w.vertex_count()).find(|&v| excess[v] > 0) {
        let target = |t: usize| excess[t] < 0;
        let path = outside_path(w, &inside, &target, v, Some(&used))
            .or_else(|| outside_path(w, &inside, &target, v, None))
            .ok_or_else(|| {
                let t = (0..w.vertex_count()).find(|&t| excess[t] < 0).unwrap_or(v);
                Error::NoConnectingPath(v, t)
            })?;
        for p in path.windows(2) {
            out.add_term(p, 1);
            used.insert((p[0].min(p[1]), p[0].max(p[1])));
        }
        excess[v] -= 1;
        excess[*path.last().expect("nonempty")] += 1;
    }
    Ok(out)
}

/// GF(2) version of [`finite_extension`]: odd vertices of `f` are joined
/// in pairs, smallest first, by paths outside `set`.
pub fn finite_extension_z2(w: &GraphWindow, set: &[usize], f: &Z2Chain) -> Result<Z2Chain> {
    f.expect_degree(1)?;
    let inside = w.mask_of(set);
    for ((u, v), _) in f.edge_terms() {
        if !(inside[u] && inside[v]) {
            return Err(Error::NotInComplex(vec![u, v]));
        }
    }
    let mut odd = vec![false; w.vertex_count()];
    for (s, _) in f.boundary()?.iter() {
        let v = s.vertices()[0];
        if !w.neighbors(v).iter().any(|&x| !inside[x]) {
            return Err(Error::DefectOffBoundary);
        }
        odd[v] = true;
    }
    if !odd.iter().any(|&o| o) {
        return Ok(f.clone());
    }
    let ends = end_partition(w, set, false)?;
    if ends.pseudo_ends.len() > 1 {
        return Err(Error::PseudoEndCount(ends.pseudo_ends.len()));
    }
    let mut out = f.clone();
    let mut used: std::collections::HashSet<(usize, usize)> = Default::default();
    while let Some(v) = (0..w.vertex_count()).find(|&v| odd[v]) {
        odd[v] = false;
        let target = |t: usize| odd[t];
        let path = outside_path(w, &inside, &target, v, Some(&used))
            .or_else(|| outside_path(w, &inside, &target, v, None))
            .ok_or(Error::NoConnectingPath(v, v))?;
        for p in path.windows(2) {
            out.add_term(p, Z2::ONE);
            used.insert((p[0].min(p[1]), p[0].max(p[1])));
        }
        odd[*path.last().expect("nonempty")] = false;
    }
    Ok(out)
}

/// BFS from `v` through vertices outside the set to a target in the set.
fn outside_path(
    w: &GraphWindow,
    inside: &[bool],
    target: &dyn Fn(usize) -> bool,
    v: usize,
    avoid: Option<&std::collections::HashSet<(usize, usize)>>,
) -> Option<Vec<usize>> {
    let n = w.vertex_count();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[v] = true;
    let mut queue = VecDeque::from([v]);
    let blocked = |a: usize, b: usize| avoid.is_some_and(|s| s.contains(&(a.min(b), a.max(b))));
    while let Some(x) = queue.pop_front() {
        for &y in w.neighbors(x) {
            if seen[y] || blocked(x, y) {
                continue;
            }
            if inside[y] {
                // only enter the set again at a negative defect, after leaving it
                if x != v && target(y) {
                    let mut path = vec![y, x];
                    let mut cur = x;
                    while let Some(p) = parent[cur] {
                        path.push(p);
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                continue;
            }
            seen[y] = true;
            parent[y] = Some(x);
            queue.push_back(y);
        }
    }
    None
}
