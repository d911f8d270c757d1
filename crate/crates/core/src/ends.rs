//! Pseudo-ends of windows, end-defining trees with ball separators, and
//! pushing GF(2) cycles onto such a tree.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{decompose_z2, PieceKind};
use crate::graph::{Edge, GraphWindow};
use crate::scalar::Z2;
use crate::Z2Chain;

/// Components of a window minus a finite set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndPartition {
    /// Components meeting the window boundary, the finite stand-ins for
    /// infinite components.
    pub pseudo_ends: Vec<Vec<usize>>,
    pub finite: Vec<Vec<usize>>,
}

/// Split `w - set` into pseudo-ends and finite components.
///
/// With `as_separator` the set must also be connected and avoid the window
/// boundary.
pub fn end_partition(w: &GraphWindow, set: &[usize], as_separator: bool) -> Result<EndPartition> {
    if let Some(&v) = set.iter().find(|&&v| v >= w.vertex_count()) {
        return Err(Error::UnknownVertex(v));
    }
    let inside = w.mask_of(set);
    if as_separator {
        if set.iter().any(|&v| w.is_boundary(v)) {
            return Err(Error::SeparatorTouchesBoundary);
        }
        if w.components(&inside).len() > 1 {
            return Err(Error::DisconnectedSeparator);
        }
    }
    let outside: Vec<bool> = inside.iter().map(|&b| !b).collect();
    let (pseudo_ends, finite) = w.components(&outside).into_iter().partition(|c| c.iter().any(|&v| w.is_boundary(v)));
    Ok(EndPartition { pseudo_ends, finite })
}

/// A tree in the window whose branches match the pseudo-ends, with the
/// balls `K_n = B(root, n)` as separators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndTree {
    pub root: usize,
    pub edges: Vec<Edge>,
    /// Largest `n` with `B(root, n)` clear of the window boundary.
    pub radius: usize,
    /// Pseudo-end count of `w - K_n` for `n = 0..=radius`.
    pub pseudo_end_counts: Vec<usize>,
    /// Smallest `n` from which every `K_m`, `n <= m <= radius`, separates
    /// the tree's branches like the pseudo-ends.
    pub first_separator: usize,
    /// One boundary vertex per pseudo-end of `w - K_radius`; the tree is the
    /// union of the root paths to these.
    pub targets: Vec<usize>,
    #[serde(skip)]
    on_tree: Vec<bool>,
    #[serde(skip)]
    parent: Vec<Option<usize>>,
}

impl EndTree {
    pub fn contains_vertex(&self, v: usize) -> bool {
        self.on_tree[v]
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.parent[u] == Some(v) || self.parent[v] == Some(u)
    }

    /// Tree path from `v` up to the root.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Separator `K_n`.
    pub fn separator(&self, w: &GraphWindow, n: usize) -> Vec<usize> {
        w.ball(self.root, n)
    }
}

/// Join the center to one boundary vertex of each pseudo-end of
/// `w - B(center, R)` by lexicographic geodesics, `R` two less than the
/// distance to the boundary. The separators are the balls
/// `K_n = B(center, n)` from the first `n` after which tree edges leaving
/// `K_n` always match the pseudo-ends of `w - K_n`.
pub fn end_defining_tree(w: &GraphWindow) -> Result<EndTree> {
    if !w.is_connected() {
        return Err(Error::DisconnectedWindow);
    }
    let root = w.center();
    let n = w.vertex_count();
    let from_root = w.distances_from(root);
    let radius = w.boundary_vertices().iter().filter_map(|&b| from_root[b]).min().map_or(0, |d| d.saturating_sub(2));
    let mut parent = vec![None; n];
    let mut on_tree = vec![false; n];
    on_tree[root] = true;
    let mut targets = Vec::new();
    if !w.boundary_vertices().is_empty() {
        let far = end_partition(w, &w.ball(root, radius), false)?;
        for comp in &far.pseudo_ends {
            let t = *comp.iter().find(|&&v| w.is_boundary(v)).expect("pseudo-end meets boundary");
            targets.push(t);
            let path = w.descend(t, &from_root).expect("connected window");
            for p in path.windows(2) {
                parent[p[0]] = Some(p[1]);
                on_tree[p[0]] = true;
            }
        }
    }
    let mut edges: Vec<Edge> = (0..n).filter_map(|v| parent[v].map(|p| (v.min(p), v.max(p)))).collect();
    edges.sort_unstable();
    let mut tree =
        EndTree { root, edges, radius, pseudo_end_counts: Vec::new(), first_separator: 0, targets, on_tree, parent };
    if w.boundary_vertices().is_empty() {
        return Ok(tree);
    }
    let mut first = None;
    for k in 0..=radius {
        let ball = w.ball(root, k);
        let parts = end_partition(w, &ball, true)?;
        tree.pseudo_end_counts.push(parts.pseudo_ends.len());
        if separates(w, &tree, &ball, &parts) {
            first.get_or_insert(k);
        } else {
            first = None;
        }
    }
    tree.first_separator = first.ok_or(Error::SeparatorBijection(radius))?;
    Ok(tree)
}

/// Tree edges leaving `ball` match the pseudo-ends of `w - ball` one to
/// one, and the tree stays connected inside the ball.
fn separates(w: &GraphWindow, tree: &EndTree, ball: &[usize], parts: &EndPartition) -> bool {
    let inside = w.mask_of(ball);
    let mut hits = vec![0usize; parts.pseudo_ends.len()];
    for &(a, b) in tree.edges.iter().filter(|&&(a, b)| inside[a] != inside[b]) {
        let out = if inside[a] { b } else { a };
        match parts.pseudo_ends.iter().position(|c| c.binary_search(&out).is_ok()) {
            Some(i) => hits[i] += 1,
            None => return false,
        }
    }
    let tree_part: Vec<bool> = (0..w.vertex_count()).map(|v| inside[v] && tree.on_tree[v]).collect();
    hits.iter().all(|&h| h == 1) && w.components(&tree_part).len() == 1
}

/// Result of pushing a cycle onto a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePush {
    pub circuits: Vec<Vec<usize>>,
    pub residue: Z2Chain,
}

/// Subtract circuits from `f` until what is left inside `K_radius` runs
/// along the tree.
///
/// Each window bip of `f`, running between boundary vertices `a` and `b`,
/// is closed up by paths outside the separator from `a` and `b` to the tree
/// targets of their pseudo-ends and by the tree path between those targets.
/// The closed walk splits into circuits; circuits of `f` itself are taken
/// whole.
pub fn push_to_tree_z2(w: &GraphWindow, f: &Z2Chain, tree: &EndTree) -> Result<TreePush> {
    let ball = tree.separator(w, tree.radius);
    let inside = w.mask_of(&ball);
    let on_tree_inside =
        f.edge_terms().filter(|&((a, b), _)| inside[a] && inside[b]).all(|((a, b), _)| tree.contains_edge(a, b));
    if on_tree_inside {
        decompose_z2(w, f)?;
        return Ok(TreePush { circuits: Vec::new(), residue: f.clone() });
    }
    let parts = end_partition(w, &ball, false)?;
    let end_of = |v: usize| parts.pseudo_ends.iter().position(|c| c.binary_search(&v).is_ok());
    let target_of =
        |comp: usize| tree.targets.iter().copied().find(|&t| parts.pseudo_ends[comp].binary_search(&t).is_ok());
    let decomposition = decompose_z2(w, f)?;
    let mut circuits = Vec::new();
    for piece in &decomposition.pieces {
        match piece.kind {
            PieceKind::Circuit => circuits.push(piece.vertices.clone()),
            PieceKind::WindowBip => {
                let mut closing = piece.unit_chain();
                for &v in [piece.vertices[0], *piece.vertices.last().expect("bip")].iter() {
                    let comp = end_of(v).ok_or(Error::NoTreeParallel)?;
                    let t = target_of(comp).ok_or(Error::NoTreeParallel)?;
                    let member = w.mask_of(&parts.pseudo_ends[comp]);
                    let path = path_within(w, &member, v, t).ok_or(Error::NoTreeParallel)?;
                    closing.add_scaled(&Z2Chain::path(&path), Z2::ONE);
                    closing.add_scaled(&Z2Chain::path(&tree.root_path(t)), Z2::ONE);
                }
                let closed = decompose_z2(w, &closing)?;
                circuits.extend(closed.pieces.into_iter().map(|p| p.vertices));
            }
        }
    }
    let mut residue = f.clone();
    for c in &circuits {
        residue.add_scaled(&Z2Chain::closed_walk(c), Z2::ONE);
    }
    Ok(TreePush { circuits, residue })
}

fn path_within(w: &GraphWindow, mask: &[bool], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; w.vertex_count()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &y in w.neighbors(x) {
            if mask[y] && parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}
