//! Trivalent trees built from branching rays, their tame bip sets and the
//! coefficient recovery `l^inf(P) -> H_1`.
//!
//! Windows truncate every ray uniformly at `ray_len`: the spine spans
//! `-ray_len..=ray_len` and every other ray has `ray_len` edges. Truncation
//! ends are the boundary vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::graph::{Edge, GraphWindow, VertexKey};
use crate::scalar::Coefficient;

/// A branching point: its position on the parent ray and the branching
/// points on the new ray it starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchNode {
    pub position: i64,
    pub children: Vec<BranchNode>,
}

/// Branching points of depth one (positions on the spine, nonzero) with
/// their descendants.
///
/// Written as a nested list, e.g. `-2(1,3(2)),2`: spine branching points at
/// -2 and 2, the ray at -2 branching at 1 and 3, and the ray at 3 on it
/// branching at 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TreeSpec {
    pub branches: Vec<BranchNode>,
}

impl TreeSpec {
    pub fn new(branches: Vec<BranchNode>) -> Self {
        Self { branches }
    }

    /// Spine branching points at the given positions, no deeper branching.
    pub fn spine(positions: &[i64]) -> Self {
        Self::new(positions.iter().map(|&p| BranchNode::leaf(p)).collect())
    }

    /// Number of branching levels the spec describes.
    pub fn depth(&self) -> usize {
        fn go(nodes: &[BranchNode]) -> usize {
            nodes.iter().map(|n| 1 + go(&n.children)).max().unwrap_or(0)
        }
        1 + go(&self.branches)
    }

    /// Check positions against the ray length: spine points satisfy
    /// `0 < |p| < ray_len`, points on rays `1 <= p < ray_len`, and no ray
    /// carries the same position twice.
    pub fn validate(&self, ray_len: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidTreeSpec(m));
        let limit = i64::try_from(ray_len).unwrap_or(i64::MAX);
        let mut seen = HashSet::new();
        for b in &self.branches {
            if b.position == 0 || b.position.abs() >= limit {
                return bad(format!("spine position {} outside 0 < |p| < {ray_len}", b.position));
            }
            if !seen.insert(b.position) {
                return bad(format!("spine position {} repeated", b.position));
            }
            validate_ray(&b.children, limit)?;
        }
        Ok(())
    }
}

fn validate_ray(nodes: &[BranchNode], limit: i64) -> Result<()> {
    let mut seen = HashSet::new();
    for n in nodes {
        if n.position < 1 || n.position >= limit {
            return Err(Error::InvalidTreeSpec(format!("ray position {} outside 1 <= p < {limit}", n.position)));
        }
        if !seen.insert(n.position) {
            return Err(Error::InvalidTreeSpec(format!("ray position {} repeated", n.position)));
        }
        validate_ray(&n.children, limit)?;
    }
    Ok(())
}

impl BranchNode {
    pub fn leaf(position: i64) -> Self {
        Self { position, children: Vec::new() }
    }
}

impl fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_list(f: &mut fmt::Formatter<'_>, nodes: &[BranchNode]) -> fmt::Result {
            for (i, n) in nodes.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", n.position)?;
                if !n.children.is_empty() {
                    write!(f, "(")?;
                    write_list(f, &n.children)?;
                    write!(f, ")")?;
                }
            }
            Ok(())
        }
        write_list(f, &self.branches)
    }
}

impl FromStr for TreeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let branches = parse_list(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::InvalidTreeSpec(format!("unexpected `{}` at {pos}", chars[pos])));
        }
        Ok(Self { branches })
    }
}

fn parse_list(chars: &[char], pos: &mut usize) -> Result<Vec<BranchNode>> {
    let mut out = Vec::new();
    if *pos >= chars.len() || chars[*pos] == ')' {
        return Ok(out);
    }
    loop {
        let start = *pos;
        if *pos < chars.len() && chars[*pos] == '-' {
            *pos += 1;
        }
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        let text: String = chars[start..*pos].iter().collect();
        let position: i64 =
            text.parse().map_err(|_| Error::InvalidTreeSpec(format!("expected an integer at {start}")))?;
        let mut children = Vec::new();
        if *pos < chars.len() && chars[*pos] == '(' {
            *pos += 1;
            children = parse_list(chars, pos)?;
            if *pos >= chars.len() || chars[*pos] != ')' {
                return Err(Error::InvalidTreeSpec("unclosed `(`".into()));
            }
            *pos += 1;
        }
        out.push(BranchNode { position, children });
        if *pos < chars.len() && chars[*pos] == ',' {
            *pos += 1;
        } else {
            return Ok(out);
        }
    }
}

impl TryFrom<String> for TreeSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TreeSpec> for String {
    fn from(t: TreeSpec) -> String {
        t.to_string()
    }
}

/// A ray (or the spine) of the window with its used branching points.
#[derive(Clone, Debug)]
struct Ray {
    level: usize,
    /// From the attaching vertex outwards; the spine runs left to right.
    vertices: Vec<usize>,
    /// `(index into vertices, child ray)`, sorted by index.
    branches: Vec<(usize, usize)>,
}

struct Layout {
    window: GraphWindow,
    rays: Vec<Ray>,
}

struct RayKeys {
    level: usize,
    keys: Vec<VertexKey>,
    branches: Vec<(usize, usize)>,
}

fn layout(spec: &TreeSpec, depth: usize, ray_len: usize) -> Result<Layout> {
    if depth == 0 || ray_len == 0 {
        return Err(Error::InvalidTreeSpec("depth and ray length must be positive".into()));
    }
    spec.validate(ray_len)?;
    let len = ray_len as i64;
    let mut rays = vec![RayKeys { level: 1, keys: (-len..=len).map(|x| vec![x]).collect(), branches: Vec::new() }];
    let mut todo: Vec<(usize, &[BranchNode])> = vec![(0, &spec.branches)];
    while let Some((ray, nodes)) = todo.pop() {
        if rays[ray].level >= depth {
            continue;
        }
        let mut sorted: Vec<&BranchNode> = nodes.iter().collect();
        sorted.sort_by_key(|n| n.position);
        for node in sorted {
            let index = if ray == 0 { (node.position + len) as usize } else { node.position as usize };
            let origin = rays[ray].keys[index].clone();
            let mut keys = vec![origin.clone()];
            for t in 1..=len {
                let mut k = origin.clone();
                k.push(t);
                keys.push(k);
            }
            let child = rays.len();
            rays.push(RayKeys { level: rays[ray].level + 1, keys, branches: Vec::new() });
            rays[ray].branches.push((index, child));
            todo.push((child, &node.children));
        }
    }
    let mut all_keys = Vec::new();
    let mut edges = Vec::new();
    let mut boundary = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        let start = if i == 0 { 0 } else { 1 };
        all_keys.extend(r.keys[start..].iter().cloned());
        for p in r.keys.windows(2) {
            edges.push((p[0].clone(), p[1].clone()));
        }
        boundary.push(r.keys.last().expect("ray").clone());
        if i == 0 {
            boundary.push(r.keys[0].clone());
        }
    }
    let window = GraphWindow::from_keyed(all_keys, edges, boundary, &vec![0], ray_len, 3, None)?;
    let rays = rays
        .into_iter()
        .map(|r| Ray {
            level: r.level,
            vertices: r.keys.iter().map(|k| window.vertex_of(k).expect("key in window")).collect(),
            branches: r.branches,
        })
        .collect();
    Ok(Layout { window, rays })
}

/// Window of the trivalent tree described by `spec`, truncated to `depth`
/// levels of rays, each ray of length `ray_len`.
pub fn build_tree(spec: &TreeSpec, depth: usize, ray_len: usize) -> Result<GraphWindow> {
    Ok(layout(spec, depth, ray_len)?.window)
}

/// An oriented window bip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bip {
    /// `1` for the spine, `n + 1` for bips built on rays of level `n`.
    pub level: usize,
    pub vertices: Vec<usize>,
}

impl Bip {
    fn edges(&self) -> impl Iterator<Item = (Edge, i8)> + '_ {
        self.vertices.windows(2).map(|p| if p[0] < p[1] { ((p[0], p[1]), 1) } else { ((p[1], p[0]), -1) })
    }
}

/// Outcome of one tameness clause.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: u8,
    pub passed: bool,
    pub detail: String,
}

/// Tame bip set of a tree window with its partial order, well order and
/// last-bip partition of the edges.
#[derive(Clone, Debug)]
pub struct BipBasis {
    tree: GraphWindow,
    bips: Vec<Bip>,
    edge_level: HashMap<Edge, usize>,
    cover: BTreeMap<Edge, Vec<(usize, i8)>>,
    preds: Vec<BTreeSet<usize>>,
    order: Vec<usize>,
    last: BTreeMap<Edge, usize>,
}

/// Build the bip set of the tree: the spine, then for every ray the bips
/// `R_a^-1 + [a, b] + R_b` between consecutive branching points `a, b` and a
/// final bip from the last branching point to the end of the ray.
pub fn construct_bips(spec: &TreeSpec, depth: usize, ray_len: usize) -> Result<BipBasis> {
    let Layout { window, rays } = layout(spec, depth, ray_len)?;
    let mut bips = vec![Bip { level: 1, vertices: rays[0].vertices.clone() }];
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(r) = queue.pop_front() {
        let ray = &rays[r];
        for (k, &(index, child)) in ray.branches.iter().enumerate() {
            let mut path: Vec<usize> = rays[child].vertices.iter().rev().copied().collect();
            match ray.branches.get(k + 1) {
                Some(&(next, next_child)) => {
                    path.extend_from_slice(&ray.vertices[index + 1..=next]);
                    path.extend_from_slice(&rays[next_child].vertices[1..]);
                }
                None => path.extend_from_slice(&ray.vertices[index + 1..]),
            }
            bips.push(Bip { level: ray.level + 1, vertices: path });
        }
        queue.extend(ray.branches.iter().map(|&(_, c)| c));
    }
    let mut edge_level = HashMap::new();
    for ray in &rays {
        for p in ray.vertices.windows(2) {
            edge_level.insert((p[0].min(p[1]), p[0].max(p[1])), ray.level);
        }
    }
    BipBasis::new(window, bips, edge_level)
}

impl BipBasis {
    fn new(tree: GraphWindow, bips: Vec<Bip>, edge_level: HashMap<Edge, usize>) -> Result<Self> {
        let mut cover: BTreeMap<Edge, Vec<(usize, i8)>> = BTreeMap::new();
        for (i, b) in bips.iter().enumerate() {
            for (e, s) in b.edges() {
                cover.entry(e).or_default().push((i, s));
            }
        }
        let mut direct: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); bips.len()];
        for list in cover.values() {
            for &(p, _) in list {
                for &(q, _) in list {
                    if bips[q].level == bips[p].level + 1 {
                        direct[q].insert(p);
                    }
                }
            }
        }
        // bips are listed by level, so predecessors are complete when reached
        let mut preds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); bips.len()];
        for q in 0..bips.len() {
            let mut all = BTreeSet::new();
            for &p in &direct[q] {
                all.insert(p);
                all.extend(preds[p].iter().copied());
            }
            preds[q] = all;
        }
        let order = well_order(&preds);
        let mut rank = vec![0; bips.len()];
        for (i, &p) in order.iter().enumerate() {
            rank[p] = i;
        }
        let last = cover
            .iter()
            .map(|(&e, list)| (e, list.iter().map(|&(p, _)| p).max_by_key(|&p| rank[p]).expect("covered")))
            .collect();
        let basis = Self { tree, bips, edge_level, cover, preds, order, last };
        basis.check_tameness()?;
        Ok(basis)
    }

    pub fn tree(&self) -> &GraphWindow {
        &self.tree
    }

    pub fn bips(&self) -> &[Bip] {
        &self.bips
    }

    pub fn len(&self) -> usize {
        self.bips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bips.is_empty()
    }

    /// Strict predecessors of `p` in the partial order.
    pub fn predecessors(&self, p: usize) -> &BTreeSet<usize> {
        &self.preds[p]
    }

    pub fn less(&self, p: usize, q: usize) -> bool {
        self.preds[q].contains(&p)
    }

    /// Bips in well order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Bips covering `e`, with their orientation on it.
    pub fn covering(&self, e: Edge) -> &[(usize, i8)] {
        self.cover.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Edges whose last bip (in the well order) is `p`.
    pub fn last_edges(&self, p: usize) -> Vec<Edge> {
        self.last.iter().filter(|&(_, &q)| q == p).map(|(&e, _)| e).collect()
    }

    /// Edges where `p` is last in the partial order: every other bip over
    /// the edge is strictly smaller.
    pub fn partial_last_edges(&self, p: usize) -> Vec<Edge> {
        self.cover
            .iter()
            .filter(|(_, list)| {
                list.iter().any(|&(q, _)| q == p) && list.iter().all(|&(q, _)| q == p || self.less(q, p))
            })
            .map(|(&e, _)| e)
            .collect()
    }

    /// Evaluate the six tameness clauses, plus the well-order partition
    /// (reported under clauses 4 and 6).
    pub fn tameness(&self) -> Vec<ClauseResult> {
        let mut out = Vec::new();
        let mut push = |clause: u8, failure: Option<String>| {
            out.push(ClauseResult { clause, passed: failure.is_none(), detail: failure.unwrap_or_default() });
        };
        let max_level = self.bips.iter().map(|b| b.level).max().unwrap_or(0);

        push(
            1,
            self.cover
                .iter()
                .find(|(_, l)| l.len() > 3)
                .map(|(e, l)| format!("edge {e:?} covered by {} bips", l.len())),
        );

        // edge form: a new bip of level n+1 contains no edge of T_{n-1}
        push(
            2,
            self.bips.iter().enumerate().find_map(|(i, b)| {
                b.edges()
                    .find(|(e, _)| self.edge_level.get(e).is_some_and(|&l| l + 2 <= b.level))
                    .map(|(e, _)| format!("bip {i} uses edge {e:?} of an old level"))
            }),
        );

        push(
            3,
            (1..=max_level).find_map(|n| {
                self.edge_level
                    .iter()
                    .filter(|&(_, &l)| l <= n)
                    .find(|&(e, _)| !self.covering(*e).iter().any(|&(q, _)| self.bips[q].level <= n))
                    .map(|(e, _)| format!("edge {e:?} of T_{n} not covered by P_{n}"))
            }),
        );

        push(
            4,
            (0..self.len()).find_map(|p| {
                if self.partial_last_edges(p).is_empty() {
                    Some(format!("bip {p} is last over no edge"))
                } else if self.last_edges(p).is_empty() {
                    Some(format!("bip {p} is last over no edge in the well order"))
                } else {
                    None
                }
            }),
        );

        push(5, (0..self.len()).find_map(|p| self.clause_five(p)));

        push(
            6,
            (0..self.len()).find_map(|p| {
                if !self.connected(&self.partial_last_edges(p)) {
                    Some(format!("M_{p} is disconnected"))
                } else if !self.connected(&self.last_edges(p)) {
                    Some(format!("M_{p} is disconnected in the well order"))
                } else {
                    None
                }
            }),
        );
        out
    }

    fn clause_five(&self, p: usize) -> Option<String> {
        let level = self.bips[p].level;
        if level == 1 {
            return None;
        }
        for e in self.partial_last_edges(p) {
            let below: BTreeSet<usize> = self.covering(e).iter().map(|&(q, _)| q).filter(|&q| q != p).collect();
            if below.iter().any(|&q| self.bips[q].level >= level) {
                return Some(format!("edge {e:?}: a predecessor of bip {p} is not older"));
            }
            let near_old = |v: usize| {
                self.tree.neighbors(v).iter().any(|&w| {
                    let key = (v.min(w), v.max(w));
                    self.edge_level.get(&key).is_some_and(|&l| l < level)
                })
            };
            // with no predecessors the witness is a fresh edge hanging off
            // T_n, which no bip of P_n covers
            let found = self.cover.iter().any(|(&(a, b), list)| {
                let covering: BTreeSet<usize> = if below.is_empty() {
                    list.iter().map(|&(q, _)| q).filter(|&q| self.bips[q].level < level).collect()
                } else {
                    list.iter().map(|&(q, _)| q).collect()
                };
                (near_old(a) || near_old(b)) && covering == below
            });
            if !found {
                return Some(format!("no edge carries exactly the predecessors of bip {p} over {e:?}"));
            }
        }
        None
    }

    fn connected(&self, edges: &[Edge]) -> bool {
        if edges.is_empty() {
            return true;
        }
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(a, b) in edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let start = edges[0].0;
        let mut seen = HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == adj.len()
    }

    pub fn check_tameness(&self) -> Result<()> {
        match self.tameness().into_iter().find(|c| !c.passed) {
            Some(c) => Err(Error::Tameness { clause: c.clause, detail: c.detail }),
            None => Ok(()),
        }
    }

    /// Recover the coefficients of a cycle: in well order,
    /// `f(p) = s_p(e) (c(e) - sum_{q < p, e in q} s_q(e) f(q))` for an edge
    /// `e` where `p` is last, with `s` the orientation of a bip on `e`.
    ///
    /// Every edge where `p` is last must give the same value, and every
    /// coefficient is at most twice the sup-norm of `c`.
    pub fn tree_coefficients<R: Coefficient>(&self, c: &Chain<R>) -> Result<Vec<R>> {
        c.expect_degree(1)?;
        if !c.is_cycle(&self.tree) {
            return Err(Error::NotACycle);
        }
        let mut f = vec![R::zero(); self.len()];
        let signed = |v: R, s: i8| if s > 0 { v } else { -v };
        for &p in &self.order {
            let mut value = None;
            for e in self.last_edges(p) {
                let mut rest = c.coeff(&[e.0, e.1]);
                let mut own = 1;
                for &(q, s) in self.covering(e) {
                    if q == p {
                        own = s;
                    } else {
                        rest = rest - signed(f[q], s);
                    }
                }
                let candidate = signed(rest, own);
                match value {
                    None => value = Some(candidate),
                    Some(v) if v != candidate => return Err(Error::IllDefinedCoefficient(p)),
                    Some(_) => {}
                }
            }
            f[p] = value.ok_or(Error::IllDefinedCoefficient(p))?;
        }
        let bound = 2 * c.sup_norm();
        if let Some(p) = f.iter().position(|x| x.magnitude() > bound) {
            return Err(Error::NormBound(p));
        }
        Ok(f)
    }

    /// `c_f(e) = sum over bips p through e of f(p)`, oriented along `p`.
    pub fn bips_to_cycle<R: Coefficient>(&self, f: &[R]) -> Chain<R> {
        let mut out = Chain::zero(1);
        for (b, &coeff) in self.bips.iter().zip(f) {
            out.add_scaled(&Chain::path(&b.vertices), coeff);
        }
        out
    }
}

/// Extend a partial order with finite lower sets to a well order by the
/// diagonal sweep over height layers.
///
/// Layer `j` holds the bips all of whose predecessors lie in layers below
/// `j`. The sweep visits layers in the order `0, 1, 0, 1, 2, 0, 1, 2, 3, ...`
/// and at each visit places the first unplaced bip of that layer (in input
/// order) whose predecessors are already placed. A visit that finds nothing
/// is skipped rather than ending the sweep.
pub fn well_order(preds: &[BTreeSet<usize>]) -> Vec<usize> {
    let n = preds.len();
    let mut height = vec![0usize; n];
    let mut done = vec![false; n];
    let mut resolved = 0;
    while resolved < n {
        for p in 0..n {
            if !done[p] && preds[p].iter().all(|&q| done[q]) {
                height[p] = preds[p].iter().map(|&q| height[q] + 1).max().unwrap_or(0);
                done[p] = true;
                resolved += 1;
            }
        }
    }
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let (mut j, mut k) = (0usize, 0usize);
    while order.len() < n {
        let pick = (0..n).find(|&p| !placed[p] && height[p] <= j && preds[p].iter().all(|&q| placed[q]));
        if let Some(p) = pick {
            placed[p] = true;
            order.push(p);
        }
        if j <= k {
            j += 1;
        } else {
            j = 0;
            k += 1;
        }
    }
    order
}

/// Coefficient growth for the comb with alternating teeth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombGrowth {
    pub teeth: usize,
    /// `|f|` along the green bips (joining teeth 1, 3, 5, ...), left to right.
    pub green: Vec<u64>,
    /// `|f|` along the red bips (joining teeth 2, 4, 6, ...), left to right.
    pub red: Vec<u64>,
    pub max: u64,
    /// Whether every bip admits an edge carrying exactly its predecessors.
    pub clause_five_holds: bool,
    /// The recovered coefficients reproduce the cycle on every tooth.
    pub reproduces_teeth: bool,
}

/// Run the coefficient recursion on the comb whose spine has a tooth at
/// every odd position `1, 3, ..., 2n - 1`, with the cycle `+1, -1, +1, ...`
/// up the teeth.
///
/// Green bips join every other tooth starting with the first, red bips
/// every other tooth starting with the second; the first bip of each
/// colour enters from the left end of the spine and the last leaves through
/// the right end. The recursion is seeded with zero on the spine and on the
/// two bips entering from the left.
pub fn comb_counterexample_check(n_teeth: usize) -> Result<CombGrowth> {
    if n_teeth == 0 {
        return Err(Error::InvalidTreeSpec("the comb needs at least one tooth".into()));
    }
    let height = 2i64;
    let right = 2 * n_teeth as i64;
    let mut keys: Vec<VertexKey> = (0..=right).map(|x| vec![x, 0]).collect();
    let mut edges: Vec<(VertexKey, VertexKey)> = (0..right).map(|x| (vec![x, 0], vec![x + 1, 0])).collect();
    let tooth_x: Vec<i64> = (0..n_teeth as i64).map(|i| 2 * i + 1).collect();
    for &x in &tooth_x {
        for y in 1..=height {
            keys.push(vec![x, y]);
            edges.push((vec![x, y - 1], vec![x, y]));
        }
    }
    let mut boundary: Vec<VertexKey> = vec![vec![0, 0], vec![right, 0]];
    boundary.extend(tooth_x.iter().map(|&x| vec![x, height]));
    let w = GraphWindow::from_keyed(keys, edges, boundary, &vec![1, 0], 1, 3, None)?;
    let at = |x: i64, y: i64| w.vertex_of(&[x, y]).expect("comb vertex");
    let up = |x: i64| (0..=height).map(|y| at(x, y)).collect::<Vec<_>>();
    let down = |x: i64| (0..=height).rev().map(|y| at(x, y)).collect::<Vec<_>>();
    let spine = |a: i64, b: i64| (a..=b).map(|x| at(x, 0)).collect::<Vec<_>>();
    let join = |parts: Vec<Vec<usize>>| {
        let mut out: Vec<usize> = Vec::new();
        for part in parts {
            let skip = usize::from(out.last() == part.first());
            out.extend_from_slice(&part[skip..]);
        }
        out
    };

    // balance the spine: flow into tooth x at (x, 0) must equal the tooth value
    let mut c = Chain::<i64>::zero(1);
    let mut along = 0i64;
    for x in 0..right {
        let tooth = tooth_x.iter().position(|&t| t == x);
        if let Some(i) = tooth {
            let v = if i % 2 == 0 { 1 } else { -1 };
            c.add_scaled(&Chain::path(&up(x)), v);
            along -= v;
        }
        c.add_scaled(&Chain::path(&spine(x, x + 1)), along);
    }
    debug_assert!(c.is_cycle(&w));

    // colour 0 = green (teeth 0, 2, 4, ... by index), colour 1 = red
    let mut colours: Vec<Vec<Vec<usize>>> = vec![Vec::new(), Vec::new()];
    for colour in 0..2usize {
        let teeth: Vec<i64> = tooth_x.iter().skip(colour).step_by(2).copied().collect();
        if teeth.is_empty() {
            continue;
        }
        colours[colour].push(join(vec![spine(0, teeth[0]), up(teeth[0])]));
        for pair in teeth.windows(2) {
            colours[colour].push(join(vec![down(pair[0]), spine(pair[0], pair[1]), up(pair[1])]));
        }
        let last = *teeth.last().expect("nonempty");
        colours[colour].push(join(vec![down(last), spine(last, right)]));
    }

    let coeff_on = |path: &[usize], e: (usize, usize)| -> i64 {
        for p in path.windows(2) {
            if (p[0], p[1]) == e {
                return 1;
            }
            if (p[1], p[0]) == e {
                return -1;
            }
        }
        0
    };
    let mut magnitudes = [Vec::new(), Vec::new()];
    let mut reproduces = true;
    for colour in 0..2 {
        let bips = &colours[colour];
        let mut f = vec![0i64; bips.len()];
        for m in 1..bips.len() {
            // the first tooth of bip m is shared with bip m - 1 only
            let x = tooth_x[colour + 2 * (m - 1)];
            let e = (at(x, 0), at(x, 1));
            let s_prev = coeff_on(&bips[m - 1], e);
            let s_own = coeff_on(&bips[m], e);
            f[m] = s_own * (c.coeff(&[e.0, e.1]) - s_prev * f[m - 1]);
            let recon = s_prev * f[m - 1] + s_own * f[m];
            reproduces &= recon == c.coeff(&[e.0, e.1]);
        }
        magnitudes[colour] = f.iter().map(|v| v.unsigned_abs()).collect();
    }

    // clause five: the predecessor of bip m over its first tooth is bip
    // m - 1 alone, so some edge must carry exactly bip m - 1
    let spine_bip = spine(0, right);
    let all: Vec<&Vec<usize>> = std::iter::once(&spine_bip).chain(colours.iter().flatten()).collect();
    let mut clause_five_holds = true;
    for colour in 0..2 {
        let offset = 1 + if colour == 0 { 0 } else { colours[0].len() };
        for m in 1..colours[colour].len() {
            let target = offset + m - 1;
            let found = w.edges().iter().any(|&(a, b)| {
                let over: Vec<usize> = (0..all.len()).filter(|&i| coeff_on(all[i], (a, b)) != 0).collect();
                over == vec![target]
            });
            clause_five_holds &= found;
        }
    }

    let max = magnitudes.iter().flatten().copied().max().unwrap_or(0);
    Ok(CombGrowth {
        teeth: n_teeth,
        green: magnitudes[0].clone(),
        red: magnitudes[1].clone(),
        max,
        clause_five_holds,
        reproduces_teeth: reproduces,
    })
}
