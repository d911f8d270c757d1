//! Cheeger constants, degree-0 expansion witnesses from max-flow, and
//! degree-1 filling probes on Rips complexes.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::Serialize;

use crate::chain::Chain;
use crate::cyclespace::EdgeSet;
use crate::error::{Error, Result};
use crate::flow::{decompose_flow, finite_extension, finite_extension_z2};
use crate::graph::{Edge, GraphWindow};
use crate::rips::{triangulate_circuit, RipsComplex};
use crate::scalar::{Coefficient, Z2};
use crate::{Z2Chain, ZChain};

/// Largest window for exhaustive Cheeger enumeration.
pub const EXACT_CHEEGER_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheegerMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheegerResult {
    /// `|dU| / |U|` for the witness.
    pub value: Ratio<i64>,
    pub witness: Vec<usize>,
    /// False when the value is only an upper bound.
    pub exact: bool,
}

/// Minimum of `|dU| / |U|` over nonempty `U` with `|U| <= |V| / 2`, edges
/// counted inside the window.
pub fn cheeger(w: &GraphWindow, mode: CheegerMode) -> Result<CheegerResult> {
    let n = w.vertex_count();
    if n < 2 {
        return Err(Error::EmptyWindow);
    }
    match mode {
        CheegerMode::Exact => cheeger_exact(w),
        CheegerMode::Heuristic => Ok(cheeger_heuristic(w)),
    }
}

fn cheeger_exact(w: &GraphWindow) -> Result<CheegerResult> {
    let n = w.vertex_count();
    if n > EXACT_CHEEGER_LIMIT {
        return Err(Error::TooManyVertices(n));
    }
    // walk all subsets in Gray-code order, updating |U| and |dU| per flip
    let mut member = vec![false; n];
    let (mut size, mut cut) = (0i64, 0i64);
    let mut best: Option<(i64, i64, Vec<bool>)> = None;
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let inside_nbrs = w.neighbors(v).iter().filter(|&&x| member[x]).count() as i64;
        let deg = w.degree(v) as i64;
        if member[v] {
            member[v] = false;
            size -= 1;
            cut += 2 * inside_nbrs - deg;
        } else {
            member[v] = true;
            size += 1;
            cut += deg - 2 * inside_nbrs;
        }
        if 2 * size as usize > n {
            continue;
        }
        let better = match &best {
            None => true,
            Some((c, s, _)) => cut * s < c * size,
        };
        if better {
            best = Some((cut, size, member.clone()));
        }
    }
    let (c, s, mask) = best.expect("some subset has at most half the vertices");
    Ok(CheegerResult { value: Ratio::new(c, s), witness: (0..n).filter(|&v| mask[v]).collect(), exact: true })
}

fn ratio_of(w: &GraphWindow, set: &[usize]) -> Ratio<i64> {
    Ratio::new(w.edge_boundary(set).len() as i64, set.len() as i64)
}

fn cheeger_heuristic(w: &GraphWindow) -> CheegerResult {
    let n = w.vertex_count();
    let mut best: Option<(Ratio<i64>, Vec<usize>)> = None;
    let mut offer = |set: Vec<usize>| {
        if set.is_empty() || 2 * set.len() > n {
            return;
        }
        let r = ratio_of(w, &set);
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, set));
        }
    };
    for v in 0..n {
        let dist = w.distances_from(v);
        let far = dist.iter().flatten().copied().max().unwrap_or(0);
        for r in 0..=far {
            offer((0..n).filter(|&x| dist[x].is_some_and(|d| d <= r)).collect());
        }
    }
    let (mut value, mut set) = best.expect("windows with two vertices have a small ball");
    // greedy shrink: drop a vertex while that lowers the ratio
    loop {
        let mut improved = false;
        for i in 0..set.len() {
            if set.len() == 1 {
                break;
            }
            let mut smaller = set.clone();
            smaller.remove(i);
            let r = ratio_of(w, &smaller);
            if r < value {
                value = r;
                set = smaller;
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }
    CheegerResult { value, witness: set, exact: false }
}

/// `|dB(center, r)| / |B(center, r)|` for `r = 0..=max_r`.
pub fn ball_ratios(w: &GraphWindow, center: usize, max_r: usize) -> Vec<(usize, Ratio<i64>)> {
    (0..=max_r).map(|r| (r, ratio_of(w, &w.ball(center, r)))).collect()
}

/// A flow `g` with `boundary(g)` equal to the indicator of `W` on `U`.
///
/// Unit demand at each vertex of `W` is fed from vertices outside `U` by
/// max-flow, raising the edge capacity from 1 up to `ceil(1 / eps)` until
/// every demand is met.
pub fn h0_expansion_witness(w: &GraphWindow, set: &[usize], targets: &[usize], eps: Ratio<i64>) -> Result<ZChain> {
    if eps <= Ratio::from_integer(0) {
        return Err(Error::NonPositiveEpsilon);
    }
    let inside = w.mask_of(set);
    if targets.iter().any(|&t| !inside[t]) {
        return Err(Error::NotSubset);
    }
    if targets.is_empty() {
        return Ok(ZChain::zero(1));
    }
    let bound = eps.recip().ceil().to_integer();
    let n = w.vertex_count();
    let (source, sink) = (n, n + 1);
    for c in 1..=bound {
        let mut net = FlowNetwork::new(n + 2);
        let mut arcs = Vec::new();
        for &(u, v) in w.edges() {
            arcs.push(((u, v), net.add_undirected(u, v, c)));
        }
        for v in 0..n {
            if !inside[v] {
                net.add_arc(source, v, i64::MAX / 4);
            }
        }
        for &t in targets {
            net.add_arc(t, sink, 1);
        }
        if net.max_flow(source, sink) == targets.len() as i64 {
            let mut g = ZChain::zero(1);
            for ((u, v), arc) in arcs {
                let f = net.flow_on(arc);
                if f != 0 {
                    g.add_term(&[u, v], f);
                }
            }
            return Ok(g);
        }
    }
    Err(Error::FlowInfeasible)
}

/// Edmonds-Karp on an arc list with paired residual arcs.
struct FlowNetwork {
    head: Vec<usize>,
    cap: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        Self { head: Vec::new(), cap: Vec::new(), out: vec![Vec::new(); n] }
    }

    fn add_pair(&mut self, u: usize, v: usize, forward: i64, backward: i64) -> usize {
        let id = self.head.len();
        self.head.push(v);
        self.cap.push(forward);
        self.out[u].push(id);
        self.head.push(u);
        self.cap.push(backward);
        self.out[v].push(id + 1);
        id
    }

    fn add_arc(&mut self, u: usize, v: usize, c: i64) -> usize {
        self.add_pair(u, v, c, 0)
    }

    fn add_undirected(&mut self, u: usize, v: usize, c: i64) -> usize {
        self.add_pair(u, v, c, c)
    }

    /// Net flow `u -> v` on an undirected pair created with capacity `c`
    /// each way.
    fn flow_on(&self, id: usize) -> i64 {
        (self.cap[id + 1] - self.cap[id]) / 2
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut via = vec![usize::MAX; self.out.len()];
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            while let Some(x) = queue.pop_front() {
                if x == t {
                    reached = true;
                    break;
                }
                for &a in &self.out[x] {
                    let y = self.head[a];
                    if self.cap[a] > 0 && via[y] == usize::MAX && y != s {
                        via[y] = a;
                        queue.push_back(y);
                    }
                }
            }
            if !reached {
                return total;
            }
            let mut push = i64::MAX;
            let mut x = t;
            while x != s {
                let a = via[x];
                push = push.min(self.cap[a]);
                x = self.head[a ^ 1];
            }
            let mut x = t;
            while x != s {
                let a = via[x];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                x = self.head[a ^ 1];
            }
            total += push;
        }
    }
}

/// Linear system `boundary(g) = f` on the virtual edges inside `U`, over
/// the virtual triangles meeting `U` in at least two vertices.
struct FillingSystem {
    rows: Vec<Edge>,
    triangles: Vec<[usize; 3]>,
    /// Per row: `(triangle, sign)`.
    row_terms: Vec<Vec<(usize, i64)>>,
    /// Per triangle: `(row, sign)`.
    tri_terms: Vec<Vec<(usize, i64)>>,
}

impl FillingSystem {
    fn new(rips: &RipsComplex, inside: &[bool]) -> Self {
        let rows: Vec<Edge> = rips.virtual_edges().iter().copied().filter(|&(u, v)| inside[u] && inside[v]).collect();
        let row_of: std::collections::HashMap<Edge, usize> = rows.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let triangles = rips.triangles_meeting(inside, 2);
        let mut row_terms = vec![Vec::new(); rows.len()];
        let mut tri_terms = vec![Vec::new(); triangles.len()];
        for (t, &[a, b, c]) in triangles.iter().enumerate() {
            for (e, sign) in [((b, c), 1), ((a, c), -1), ((a, b), 1)] {
                if let Some(&r) = row_of.get(&e) {
                    row_terms[r].push((t, sign));
                    tri_terms[t].push((r, sign));
                }
            }
        }
        Self { rows, triangles, row_terms, tri_terms }
    }

    fn target<R: Coefficient>(&self, f: &Chain<R>) -> Vec<R> {
        self.rows.iter().map(|&(u, v)| f.coeff(&[u, v])).collect()
    }

    fn chain<R: Coefficient>(&self, values: &[R]) -> Chain<R> {
        let mut g = Chain::zero(2);
        for (t, &x) in values.iter().enumerate() {
            g.add_term(&self.triangles[t], x);
        }
        g
    }

    /// Solve over GF(2); `None` when infeasible.
    fn solve_z2(&self, target: &[Z2]) -> Option<Vec<bool>> {
        let m = self.triangles.len();
        let aug = m;
        let mut pivots: Vec<(usize, EdgeSet)> = Vec::new();
        let mut pivot_of: Vec<Option<usize>> = vec![None; m];
        for (r, terms) in self.row_terms.iter().enumerate() {
            let mut row = EdgeSet::from_ids(m + 1, terms.iter().map(|&(t, _)| t));
            if target[r].bit() {
                row.flip(aug);
            }
            loop {
                match row.leading() {
                    None => break,
                    Some(l) if l == aug => return None,
                    Some(l) => match pivot_of[l] {
                        Some(p) => row.xor_with(&pivots[p].1),
                        None => {
                            pivot_of[l] = Some(pivots.len());
                            pivots.push((l, row));
                            break;
                        }
                    },
                }
            }
        }
        let mut x = vec![false; m];
        let mut order: Vec<&(usize, EdgeSet)> = pivots.iter().collect();
        order.sort_by_key(|p| std::cmp::Reverse(p.0));
        for (l, row) in order {
            let mut v = row.get(aug);
            for j in row.ids() {
                if j != *l && j != aug && x[j] {
                    v = !v;
                }
            }
            x[*l] = v;
        }
        // greedy support reduction along null vectors of the free columns
        let free: Vec<usize> = (0..m).filter(|&j| pivot_of[j].is_none()).collect();
        let null: Vec<Vec<bool>> = free
            .iter()
            .map(|&j| {
                let mut y = vec![false; m];
                y[j] = true;
                let mut order: Vec<&(usize, EdgeSet)> = pivots.iter().collect();
                order.sort_by_key(|p| std::cmp::Reverse(p.0));
                for (l, row) in order {
                    let mut v = false;
                    for k in row.ids() {
                        if k != *l && k != aug && y[k] {
                            v = !v;
                        }
                    }
                    y[*l] = v;
                }
                y
            })
            .collect();
        loop {
            let weight = x.iter().filter(|&&b| b).count();
            let better = null.iter().find(|y| x.iter().zip(y.iter()).filter(|(a, b)| **a != **b).count() < weight);
            match better {
                Some(y) => {
                    for (a, b) in x.iter_mut().zip(y) {
                        *a ^= *b;
                    }
                }
                None => break,
            }
        }
        Some(x)
    }
}

/// Result of a filling probe. `norm` is exact when `exact` is set and an
/// upper bound otherwise; `feasible` is `None` when the search budget ran
/// out before a decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "Chain<R>: Serialize"))]
pub struct FillingProbe<R> {
    pub feasible: Option<bool>,
    pub norm: Option<u64>,
    pub support: usize,
    pub exact: bool,
    pub filling: Option<Chain<R>>,
}

/// Limits for the integer filling search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    pub max_coefficient: i64,
    pub node_budget: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_coefficient: 3, node_budget: 200_000 }
    }
}

fn check_probe_input<R: Coefficient>(rips: &RipsComplex, inside: &[bool], f: &Chain<R>) -> Result<()> {
    f.expect_degree(1)?;
    for ((u, v), _) in f.edge_terms() {
        if !(inside[u] && inside[v]) || !rips.contains_edge(u, v) {
            return Err(Error::NotInComplex(vec![u, v]));
        }
    }
    let n = inside.len();
    for (s, _) in f.boundary()?.iter() {
        let v = s.vertices()[0];
        let on_rim = (0..n).any(|x| !inside[x] && rips.contains_edge(v, x));
        if !on_rim {
            return Err(Error::DefectOffBoundary);
        }
    }
    Ok(())
}

/// Check `boundary(g) = f` on the virtual edges inside `U`.
pub fn verify_filling<R: Coefficient>(rips: &RipsComplex, set: &[usize], f: &Chain<R>, g: &Chain<R>) -> bool {
    let inside = rips.base().mask_of(set);
    let Ok(d) = g.boundary() else {
        return false;
    };
    let d = d.restrict(|v| inside[v]);
    d == f.restrict(|v| inside[v])
}

/// GF(2) filling of `f` on `U`: exact feasibility by elimination; the
/// support of the returned filling is reduced greedily.
pub fn h1_expansion_probe_z2(rips: &RipsComplex, set: &[usize], f: &Z2Chain) -> Result<FillingProbe<Z2>> {
    let inside = rips.base().mask_of(set);
    check_probe_input(rips, &inside, f)?;
    let system = FillingSystem::new(rips, &inside);
    let target = system.target(f);
    Ok(match system.solve_z2(&target) {
        None => FillingProbe { feasible: Some(false), norm: None, support: 0, exact: true, filling: None },
        Some(x) => {
            let values: Vec<Z2> = x.into_iter().map(Z2::new).collect();
            let g = system.chain(&values);
            FillingProbe {
                feasible: Some(true),
                norm: Some(g.sup_norm()),
                support: g.support_len(),
                exact: true,
                filling: Some(g),
            }
        }
    })
}

/// Integer filling of `f` on `U` with smallest sup-norm up to
/// `limits.max_coefficient`.
///
/// Infeasibility over GF(2) settles infeasibility outright. Otherwise a
/// depth-first search with unit propagation runs for each bound in turn;
/// the norm is exact when every smaller bound was searched to completion.
pub fn h1_expansion_probe_z(
    rips: &RipsComplex,
    set: &[usize],
    f: &ZChain,
    limits: SearchLimits,
) -> Result<FillingProbe<i64>> {
    let inside = rips.base().mask_of(set);
    check_probe_input(rips, &inside, f)?;
    let system = FillingSystem::new(rips, &inside);
    let target = system.target(f);
    let mod2: Vec<Z2> = target.iter().map(|&t| Z2::new(t % 2 != 0)).collect();
    let infeasible = FillingProbe { feasible: Some(false), norm: None, support: 0, exact: true, filling: None };
    if system.solve_z2(&mod2).is_none() {
        return Ok(infeasible);
    }
    if target.iter().all(|&t| t == 0) {
        return Ok(FillingProbe {
            feasible: Some(true),
            norm: Some(0),
            support: 0,
            exact: true,
            filling: Some(Chain::zero(2)),
        });
    }
    let mut complete = true;
    for bound in 1..=limits.max_coefficient {
        let mut search = Search::new(&system, &target, bound, limits.node_budget);
        match search.run() {
            Some(values) => {
                let g = system.chain(&values);
                return Ok(FillingProbe {
                    feasible: Some(true),
                    norm: Some(g.sup_norm()),
                    support: g.support_len(),
                    exact: complete,
                    filling: Some(g),
                });
            }
            None => complete &= !search.exhausted,
        }
    }
    Ok(if complete { infeasible } else { FillingProbe { feasible: None, exact: false, ..infeasible } })
}

struct Search<'a> {
    system: &'a FillingSystem,
    bound: i64,
    budget: usize,
    nodes: usize,
    exhausted: bool,
    value: Vec<Option<i64>>,
    need: Vec<i64>,
    open: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(system: &'a FillingSystem, target: &[i64], bound: i64, budget: usize) -> Self {
        Self {
            system,
            bound,
            budget,
            nodes: 0,
            exhausted: false,
            value: vec![None; system.triangles.len()],
            need: target.to_vec(),
            open: system.row_terms.iter().map(Vec::len).collect(),
        }
    }

    fn run(&mut self) -> Option<Vec<i64>> {
        if self.open.iter().zip(&self.need).any(|(&o, &n)| o == 0 && n != 0) {
            return None;
        }
        if self.step() {
            Some(self.value.iter().map(|v| v.unwrap_or(0)).collect())
        } else {
            None
        }
    }

    fn assign(&mut self, t: usize, x: i64) -> bool {
        self.value[t] = Some(x);
        let mut ok = true;
        for &(r, s) in &self.system.tri_terms[t] {
            self.need[r] -= s * x;
            self.open[r] -= 1;
            if self.open[r] == 0 && self.need[r] != 0 {
                ok = false;
            }
        }
        ok
    }

    fn unassign(&mut self, t: usize) {
        let x = self.value[t].take().expect("assigned");
        for &(r, s) in &self.system.tri_terms[t] {
            self.need[r] += s * x;
            self.open[r] += 1;
        }
    }

    fn free_term(&self, r: usize) -> (usize, i64) {
        *self.system.row_terms[r].iter().find(|&&(t, _)| self.value[t].is_none()).expect("open row has a free triangle")
    }

    fn step(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        // forced: a row with one free triangle left
        if let Some(r) = (0..self.need.len()).find(|&r| self.open[r] == 1) {
            let (t, s) = self.free_term(r);
            let x = s * self.need[r];
            if x.abs() > self.bound {
                return false;
            }
            let ok = self.assign(t, x);
            if ok && self.step() {
                return true;
            }
            self.unassign(t);
            return false;
        }
        let Some(r) =
            (0..self.need.len()).filter(|&r| self.open[r] > 0 && self.need[r] != 0).min_by_key(|&r| self.open[r])
        else {
            // every remaining row is already balanced: leave the rest at zero
            return true;
        };
        let (t, _) = self.free_term(r);
        let mut choices = vec![0];
        for k in 1..=self.bound {
            choices.push(k);
            choices.push(-k);
        }
        for x in choices {
            let ok = self.assign(t, x);
            if ok && self.step() {
                return true;
            }
            self.unassign(t);
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

/// Answer of the pure filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PureVerdict {
    pub extensible: bool,
    /// False when the integer answer rests on the GF(2) test alone.
    pub exact: bool,
}

fn bounds_z2(rips: &RipsComplex, f: &Z2Chain) -> bool {
    let all = vec![true; rips.base().vertex_count()];
    let system = FillingSystem::new(rips, &all);
    system.solve_z2(&system.target(f)).is_some()
}

/// Whether `f` on `U` extends to a GF(2) boundary of the whole window:
/// close it outside `U`, then test the closed chain against the boundary
/// image of the Rips triangles.
pub fn pure_filter_z2(rips: &RipsComplex, set: &[usize], f: &Z2Chain) -> Result<bool> {
    let inside = rips.base().mask_of(set);
    check_probe_input(rips, &inside, f)?;
    let skeleton = rips.one_skeleton()?;
    let closed = finite_extension_z2(&skeleton, set, f)?;
    Ok(bounds_z2(rips, &closed))
}

/// Integer pure filter. The closed extension is traced onto the base graph
/// and split into circuits; if every circuit has a fan filling within the
/// Rips radius the answer is an exact yes, if the GF(2) test fails an
/// exact no, and otherwise a yes resting on the GF(2) test.
pub fn pure_filter_z(rips: &RipsComplex, set: &[usize], f: &ZChain) -> Result<PureVerdict> {
    let inside = rips.base().mask_of(set);
    check_probe_input(rips, &inside, f)?;
    let skeleton = rips.one_skeleton()?;
    let closed = finite_extension(&skeleton, set, f)?;
    let (traced, _) = rips.trace_virtual_edges(&closed)?;
    let pieces = decompose_flow(rips.base(), &traced)?;
    let mut fits = true;
    for p in pieces.circuits() {
        let (_, needed) = triangulate_circuit::<i64>(rips.base(), &p.vertices)?;
        fits &= needed <= rips.radius();
    }
    if fits && pieces.bips().next().is_none() {
        return Ok(PureVerdict { extensible: true, exact: true });
    }
    let mod2 = bounds_z2(rips, &closed.to_z2());
    Ok(PureVerdict { extensible: mod2, exact: !mod2 })
}
