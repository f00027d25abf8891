//! Seeded random Eulerian instances on near-triangulations.
//!
//! The graph grows from a triangle by inserting vertices into random bounded
//! faces (joined to the whole face) or onto the outer face (joined to a short
//! run of it). Two bounded faces become holes and are widened by deleting
//! edges into neighbouring triangles; the outer face is the last hole.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::excess::{CheckOptions, Checker};
use crate::graph::EmbeddedGraph;
use crate::instance::{Demand, Instance};
use crate::oracle::{self, CutFilter, MetricFilter, OracleConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Any,
    Solvable,
    CutTight,
    MetricViolating,
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(Target::Any),
            "solvable" => Ok(Target::Solvable),
            "cut-tight" => Ok(Target::CutTight),
            "metric-violating" => Ok(Target::MetricViolating),
            _ => Err(format!("unknown target `{s}`")),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Any => "any",
            Target::Solvable => "solvable",
            Target::CutTight => "cut-tight",
            Target::MetricViolating => "metric-violating",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub holes: usize,
    /// Boundary length the bounded holes are widened towards.
    pub hole_len: usize,
    /// Outer boundary length the construction steers towards.
    pub outer_len: usize,
    pub demands: usize,
    pub max_capacity: i64,
    pub max_demand: i64,
    pub target: Target,
    pub retries: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 8,
            holes: 3,
            hole_len: 4,
            outer_len: 5,
            demands: 3,
            max_capacity: 3,
            max_demand: 3,
            target: Target::Any,
            retries: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{holes} holes need at least {min} vertices, got {n}")]
    TooSmall { n: usize, holes: usize, min: usize },
    #[error("between 1 and 3 holes are supported, got {0}")]
    Holes(usize),
    #[error("target {target} needs the exhaustive oracle, which is limited to {bound} vertices")]
    TooLargeForTarget { target: Target, bound: usize },
    #[error("target {target} not reached within {attempts} attempts")]
    Unreachable { target: Target, attempts: usize },
}

/// A simple plane graph as clockwise neighbour lists.
struct Plane {
    rot: Vec<Vec<usize>>,
}

impl Plane {
    fn triangle() -> Self {
        Plane {
            rot: vec![vec![1, 2], vec![2, 0], vec![0, 1]],
        }
    }

    /// Dart `a -> b` is followed by `b -> succ_b(a)`.
    fn next(&self, (a, b): (usize, usize)) -> (usize, usize) {
        let r = &self.rot[b];
        let i = r.iter().position(|&x| x == a).expect("dart exists");
        (b, r[(i + 1) % r.len()])
    }

    fn walk(&self, start: (usize, usize)) -> Vec<usize> {
        let mut out = vec![start.0];
        let mut d = self.next(start);
        while d != start {
            out.push(d.0);
            d = self.next(d);
        }
        out
    }

    /// Walks of all faces, each given once, by its smallest dart.
    fn faces(&self) -> Vec<Vec<usize>> {
        let mut seen = BTreeMap::new();
        let mut out = Vec::new();
        for a in 0..self.rot.len() {
            for &b in &self.rot[a] {
                if seen.contains_key(&(a, b)) {
                    continue;
                }
                let w = self.walk((a, b));
                for k in 0..w.len() {
                    seen.insert((w[k], w[(k + 1) % w.len()]), out.len());
                }
                out.push(w);
            }
        }
        out
    }

    fn insert_after(&mut self, at: usize, after: usize, x: usize) {
        let r = &mut self.rot[at];
        let i = r.iter().position(|&y| y == after).expect("neighbour exists");
        r.insert(i + 1, x);
    }

    /// New vertex inside the face walked by `w`, joined to all of it.
    fn stellar(&mut self, w: &[usize]) {
        let x = self.rot.len();
        let k = w.len();
        for i in 0..k {
            self.insert_after(w[i], w[(i + k - 1) % k], x);
        }
        self.rot.push(w.iter().rev().copied().collect());
    }

    /// New vertex in the outer face, joined to `w[start..=start + r]` of the
    /// outer walk `w`. Returns a dart on the new outer face.
    fn outer_run(&mut self, w: &[usize], start: usize, r: usize) -> (usize, usize) {
        let x = self.rot.len();
        let k = w.len();
        let at = |i: usize| w[(start + i) % k];
        let before = w[(start + k - 1) % k];
        self.insert_after(at(0), before, x);
        for i in 1..=r {
            self.insert_after(at(i), at(i - 1), x);
        }
        self.rot.push((0..=r).rev().map(at).collect());
        (x, at(r))
    }

    fn delete(&mut self, a: usize, b: usize) {
        self.rot[a].retain(|&y| y != b);
        self.rot[b].retain(|&y| y != a);
    }

    fn edge_count(&self) -> usize {
        self.rot.iter().map(Vec::len).sum::<usize>() / 2
    }
}

fn min_vertices(holes: usize) -> usize {
    if holes == 3 {
        4
    } else {
        3
    }
}

/// Grows the graph and picks the holes. Returns the plane graph, a dart on
/// the outer face and a dart per hole (outer last).
fn build(rng: &mut ChaCha8Rng, p: &GenParams) -> (Plane, (usize, usize), Vec<(usize, usize)>) {
    let mut g = Plane::triangle();
    let mut outer = (1, 0);
    while g.rot.len() < p.n {
        let faces = g.faces();
        let ow = g.walk(outer);
        let bounded: Vec<&Vec<usize>> = faces
            .iter()
            .filter(|f| !same_face(f, &ow))
            .collect();
        let to_outer = rng.gen_bool(0.3) || bounded.is_empty();
        if to_outer {
            let k = ow.len();
            let r = if k < p.outer_len { 1 } else { rng.gen_range(1..=3.min(k - 2).max(1)) };
            let start = rng.gen_range(0..k);
            outer = g.outer_run(&ow, start, r);
        } else {
            let f = bounded[rng.gen_range(0..bounded.len())].clone();
            g.stellar(&f);
        }
    }

    let bounded_holes = p.holes - 1;
    let ow = g.walk(outer);
    let mut candidates: Vec<Vec<usize>> = g.faces().into_iter().filter(|f| !same_face(f, &ow)).collect();
    candidates.shuffle(rng);
    let mut holes: Vec<(usize, usize)> = candidates
        .iter()
        .take(bounded_holes)
        .map(|f| (f[0], f[1]))
        .collect();
    for h in 0..holes.len() {
        widen(&mut g, rng, &mut holes, h, outer, p.hole_len);
    }
    holes.push(outer);
    (g, outer, holes)
}

fn same_face(f: &[usize], walk: &[usize]) -> bool {
    let darts = |w: &[usize]| -> Vec<(usize, usize)> {
        let mut d: Vec<_> = (0..w.len()).map(|k| (w[k], w[(k + 1) % w.len()])).collect();
        d.sort();
        d
    };
    f.len() == walk.len() && darts(f) == darts(walk)
}

/// Deletes edges between hole `h` and neighbouring triangles whose apex is
/// off the hole boundary, keeping that boundary a simple cycle.
fn widen(g: &mut Plane, rng: &mut ChaCha8Rng, holes: &mut [(usize, usize)], h: usize, outer: (usize, usize), len: usize) {
    loop {
        let w = g.walk(holes[h]);
        if w.len() >= len {
            return;
        }
        let others: Vec<Vec<usize>> = holes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != h)
            .map(|(_, &d)| g.walk(d))
            .chain(std::iter::once(g.walk(outer)))
            .collect();
        let mut options = Vec::new();
        for k in 0..w.len() {
            let (a, b) = (w[k], w[(k + 1) % w.len()]);
            let across = g.walk((b, a));
            if across.len() != 3 || others.iter().any(|o| same_face(o, &across)) {
                continue;
            }
            let apex = across[2];
            if !w.contains(&apex) {
                options.push((a, b, apex));
            }
        }
        if options.is_empty() {
            return;
        }
        let (a, b, apex) = options[rng.gen_range(0..options.len())];
        g.delete(a, b);
        holes[h] = (a, apex);
    }
}

/// Embedded graph with edge ids in order of (smaller end, rotation).
fn embed(g: &Plane) -> (EmbeddedGraph, BTreeMap<(usize, usize), usize>) {
    let mut ids = BTreeMap::new();
    let mut ends = Vec::new();
    for u in 0..g.rot.len() {
        for &v in &g.rot[u] {
            if u < v {
                ids.insert((u, v), ends.len());
                ends.push([u, v]);
            }
        }
    }
    let rotation = g
        .rot
        .iter()
        .enumerate()
        .map(|(u, r)| r.iter().map(|&v| ids[&(u.min(v), u.max(v))]).collect())
        .collect();
    let eg = EmbeddedGraph::new(g.rot.len(), ends, rotation).expect("construction is plane and connected");
    (eg, ids)
}

fn dart_of(ids: &BTreeMap<(usize, usize), usize>, (a, b): (usize, usize)) -> usize {
    2 * ids[&(a.min(b), a.max(b))] + usize::from(a > b)
}

/// Makes every vertex even by raising capacities along a BFS tree.
fn repair_parity(g: &EmbeddedGraph, capacity: &mut [i64], demands: &[Demand]) {
    let n = g.vertex_count();
    let mut odd = vec![false; n];
    for e in 0..g.edge_count() {
        for v in g.ends(e) {
            odd[v] ^= capacity[e] % 2 != 0;
        }
    }
    for d in demands {
        odd[d.s] ^= d.value % 2 != 0;
        odd[d.t] ^= d.value % 2 != 0;
    }
    let mut parent = vec![None; n];
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &e in g.rotation(v) {
            let [a, b] = g.ends(e);
            let w = if a == v { b } else { a };
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, e));
                order.push(w);
            }
        }
    }
    for &v in order.iter().rev() {
        if let (true, Some((p, e))) = (odd[v], parent[v]) {
            capacity[e] += 1;
            odd[v] = false;
            odd[p] ^= true;
        }
    }
    debug_assert!(odd.iter().all(|&o| !o));
}

fn sample(rng: &mut ChaCha8Rng, p: &GenParams) -> Instance {
    let (plane, outer, holes) = build(rng, p);
    let (g, ids) = embed(&plane);
    let mut capacity: Vec<i64> = (0..plane.edge_count())
        .map(|_| {
            if rng.gen_ratio(1, 8) {
                0
            } else {
                rng.gen_range(1..=p.max_capacity.max(1))
            }
        })
        .collect();
    let walks: Vec<Vec<usize>> = holes.iter().map(|&d| plane.walk(d)).collect();
    let mut demands = Vec::new();
    for _ in 0..p.demands {
        let h = rng.gen_range(0..walks.len());
        let pair: Vec<&usize> = walks[h].choose_multiple(rng, 2).collect();
        let value = rng.gen_range(1..=p.max_demand.max(1));
        demands.push(Demand::new(*pair[0], *pair[1], h, value));
    }
    repair_parity(&g, &mut capacity, &demands);
    let hole_darts = holes.iter().map(|&d| dart_of(&ids, d)).collect();
    Instance::new(g, dart_of(&ids, outer), hole_darts, capacity, demands).expect("generated instance is well formed")
}

/// Polynomial verdicts steer the search; on small instances the accepted
/// candidate is confirmed by the exhaustive oracle.
struct Judge {
    confirm: bool,
}

impl Judge {
    fn report(inst: &Instance, skip_metric: bool) -> crate::excess::ExcessReport {
        Checker::new(inst)
            .report(CheckOptions {
                skip_metric,
                max_quad: None,
            })
            .expect("no cap")
    }

    fn cut_min(&self, inst: &Instance) -> crate::Ext {
        Self::report(inst, true).cut_min()
    }

    fn solvable(&self, inst: &Instance) -> bool {
        !Self::report(inst, false).is_violated()
    }

    fn confirm_solvable(&self, inst: &Instance) -> bool {
        !self.confirm || oracle::oracle_solvable(inst, OracleConfig::default()).expect("within bound")
    }

    fn confirm_cut_tight(&self, inst: &Instance) -> bool {
        !self.confirm
            || oracle::oracle_cut_min(inst, CutFilter::All, oracle::DEFAULT_CUT_BOUND).expect("within bound").value
                == crate::Ext::ZERO
    }

    /// Every cut holds and some metric fails. Only called with the oracle.
    fn metric_violating(&self, inst: &Instance) -> bool {
        let cuts = oracle::oracle_cut_min(inst, CutFilter::All, oracle::DEFAULT_CUT_BOUND).expect("within bound");
        !cuts.value.is_negative()
            && oracle::oracle_metric_min(inst, MetricFilter::All, oracle::DEFAULT_METRIC_BOUND)
                .expect("within bound")
                .value
                .is_negative()
    }
}

fn bump(inst: &Instance, rng: &mut ChaCha8Rng) -> Option<Instance> {
    if inst.demands().is_empty() {
        return None;
    }
    let k = rng.gen_range(0..inst.demands().len());
    let mut demands = inst.demands().to_vec();
    demands[k].value += 2;
    Some(inst.with_values(inst.capacities().to_vec(), demands))
}

/// Raises demands by 2 while `keep` holds; returns the last state kept and
/// the first state rejected.
fn push_up(mut inst: Instance, rng: &mut ChaCha8Rng, keep: impl Fn(&Instance) -> bool) -> (Instance, Option<Instance>) {
    for _ in 0..64 {
        let Some(next) = bump(&inst, rng) else {
            return (inst, None);
        };
        if keep(&next) {
            inst = next;
        } else {
            return (inst, Some(next));
        }
    }
    (inst, None)
}

pub fn generate(seed: u64, p: &GenParams) -> Result<Instance, GenError> {
    if !(1..=3).contains(&p.holes) {
        return Err(GenError::Holes(p.holes));
    }
    let min = min_vertices(p.holes);
    if p.n < min {
        return Err(GenError::TooSmall {
            n: p.n,
            holes: p.holes,
            min,
        });
    }
    let small = p.n <= oracle::DEFAULT_METRIC_BOUND;
    if p.target == Target::MetricViolating && !small {
        return Err(GenError::TooLargeForTarget {
            target: p.target,
            bound: oracle::DEFAULT_METRIC_BOUND,
        });
    }
    let judge = Judge { confirm: small };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..p.retries.max(1) {
        let inst = sample(&mut rng, p);
        match p.target {
            Target::Any => return Ok(inst),
            Target::Solvable => {
                if judge.solvable(&inst) && judge.confirm_solvable(&inst) {
                    return Ok(inst);
                }
            }
            Target::CutTight => {
                if !judge.solvable(&inst) {
                    continue;
                }
                let (last, _) = push_up(inst, &mut rng, |i| judge.solvable(i));
                if judge.cut_min(&last) == crate::Ext::ZERO
                    && judge.confirm_solvable(&last)
                    && judge.confirm_cut_tight(&last)
                {
                    return Ok(last);
                }
            }
            Target::MetricViolating => {
                // Infeasible with nonnegative regular cut bounds points at a
                // metric; the oracle settles non-regular cuts.
                let candidate = if judge.solvable(&inst) {
                    let (_, first_bad) = push_up(inst, &mut rng, |i| judge.solvable(i));
                    first_bad
                } else {
                    Some(inst)
                };
                if let Some(c) = candidate.filter(|c| !judge.cut_min(c).is_negative()) {
                    if judge.metric_violating(&c) {
                        return Ok(c);
                    }
                }
            }
        }
    }
    Err(GenError::Unreachable {
        target: p.target,
        attempts: p.retries.max(1),
    })
}
