//! Exponential ground truth for small instances: cut and (2,3)-metric excesses
//! by enumeration, the regularity predicates, solvability, and the largest
//! feasible reduction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ext::Ext;
use crate::graph::VertexId;
use crate::instance::{BoundaryCycle, Instance};
use crate::reduction::{self, Move};

pub const DEFAULT_CUT_BOUND: usize = 12;
pub const DEFAULT_METRIC_BOUND: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub cut_bound: usize,
    pub metric_bound: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cut_bound: DEFAULT_CUT_BOUND,
            metric_bound: DEFAULT_METRIC_BOUND,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{vertices} vertices exceed the {what} enumeration bound of {bound}")]
    TooLarge {
        what: &'static str,
        vertices: usize,
        bound: usize,
    },
}

fn ensure(inst: &Instance, what: &'static str, bound: usize) -> Result<(), OracleError> {
    let vertices = inst.graph().vertex_count();
    if vertices > bound {
        return Err(OracleError::TooLarge { what, vertices, bound });
    }
    Ok(())
}

/// How `[X]` meets a hole boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Meet {
    Empty,
    Full,
    Segment,
    Scattered,
}

/// Boundaries and face vertex sets, computed once per enumeration.
struct Shape<'a> {
    inst: &'a Instance,
    boundaries: Vec<BoundaryCycle>,
}

impl<'a> Shape<'a> {
    fn new(inst: &'a Instance) -> Self {
        let boundaries = (0..inst.hole_count()).map(|h| inst.hole_boundary(h)).collect();
        Shape { inst, boundaries }
    }

    fn meet(&self, hole: usize, x: &[bool]) -> Meet {
        let walk = &self.boundaries[hole].vertices;
        let l = walk.len();
        let inside = walk.iter().filter(|&&v| x[v]).count();
        if inside == 0 {
            return Meet::Empty;
        }
        if inside == l {
            return Meet::Full;
        }
        let starts = (0..l).filter(|&k| x[walk[k]] && !x[walk[(k + l - 1) % l]]).count();
        if starts == 1 {
            Meet::Segment
        } else {
            Meet::Scattered
        }
    }

    /// `R(X)` is simply connected: `[X]` is connected, the outer face is not
    /// swallowed, and what is left of the plane is connected.
    fn simply_connected(&self, x: &[bool]) -> bool {
        let g = self.inst.graph();
        let n = g.vertex_count();
        let m = g.edge_count();
        if !induced_connected(self.inst, x) {
            return false;
        }
        let swallowed: Vec<bool> = g.faces().iter().map(|f| f.iter().all(|&d| x[g.tail(d)])).collect();
        if swallowed[self.inst.outer_face()] {
            return false;
        }
        // union-find over vertices, edges and faces outside R(X)
        let mut uf = UnionFind::new(n + m + g.face_count());
        let mut outside = vec![false; n + m + g.face_count()];
        for e in 0..m {
            let [a, b] = g.ends(e);
            if x[a] && x[b] {
                continue;
            }
            outside[n + e] = true;
            for v in [a, b] {
                if !x[v] {
                    outside[v] = true;
                    uf.union(n + e, v);
                }
            }
            for f in g.faces_of_edge(e) {
                if !swallowed[f] {
                    outside[n + m + f] = true;
                    uf.union(n + e, n + m + f);
                }
            }
        }
        for v in 0..n {
            outside[v] |= !x[v];
        }
        let mut roots = (0..outside.len()).filter(|&k| outside[k]).map(|k| uf.find(k));
        match roots.next() {
            None => true,
            Some(r) => roots.all(|s| s == r),
        }
    }

    fn describe(&self, x: &[bool]) -> SubsetDescriptor {
        let inst = self.inst;
        let g = inst.graph();
        let cut_capacity = (0..g.edge_count())
            .filter(|&e| {
                let [a, b] = g.ends(e);
                x[a] != x[b]
            })
            .map(|e| inst.capacity(e))
            .sum();
        let separated_demand = inst.demands().iter().filter(|d| x[d.s] != x[d.t]).map(|d| d.value).sum();
        let meets: Vec<Meet> = (0..inst.hole_count()).map(|h| self.meet(h, x)).collect();
        let holes = meets
            .iter()
            .enumerate()
            .filter(|(_, m)| matches!(m, Meet::Segment | Meet::Scattered))
            .fold(0u8, |acc, (h, _)| acc | 1 << h);
        SubsetDescriptor {
            members: x.to_vec(),
            cut_capacity,
            separated_demand,
            segments: meets.iter().all(|&m| m != Meet::Scattered),
            simply_connected: self.simply_connected(x),
            holes,
        }
    }
}

fn induced_connected(inst: &Instance, x: &[bool]) -> bool {
    let g = inst.graph();
    let Some(start) = x.iter().position(|&b| b) else {
        return false;
    };
    let mut seen = vec![false; x.len()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &e in g.rotation(v) {
            let [a, b] = g.ends(e);
            let w = if a == v { b } else { a };
            if x[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    (0..x.len()).all(|v| !x[v] || seen[v])
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetDescriptor {
    pub members: Vec<bool>,
    pub cut_capacity: i64,
    pub separated_demand: i64,
    pub simply_connected: bool,
    /// Every hole boundary meets `[X]` in a segment (possibly empty or whole).
    pub segments: bool,
    /// Holes whose boundary meets `[X]` properly, as a bit mask.
    pub holes: u8,
}

impl SubsetDescriptor {
    pub fn describe(inst: &Instance, x: &[bool]) -> Self {
        Shape::new(inst).describe(x)
    }

    pub fn excess(&self) -> i64 {
        self.cut_capacity - self.separated_demand
    }

    pub fn is_regular(&self) -> bool {
        self.simply_connected && self.segments
    }

    pub fn hole_type(&self) -> usize {
        self.holes.count_ones() as usize
    }

    pub fn passes(&self, filter: CutFilter) -> bool {
        match filter {
            CutFilter::All => true,
            CutFilter::Regular => self.is_regular(),
            CutFilter::RegularType(k) => self.is_regular() && self.hole_type() == k,
            CutFilter::SemiRegular => self.segments,
        }
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        (0..self.members.len()).filter(|&v| self.members[v]).collect()
    }
}

impl fmt::Display for SubsetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "X={:?} c={} d={} excess={} regular={} type={}",
            self.vertices(),
            self.cut_capacity,
            self.separated_demand,
            self.excess(),
            self.is_regular(),
            self.hole_type()
        )
    }
}

/// Regular type of `X`, or `None` when `X` is not regular.
pub fn is_regular(inst: &Instance, x: &[bool]) -> Option<usize> {
    let d = SubsetDescriptor::describe(inst, x);
    d.is_regular().then(|| d.hole_type())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutFilter {
    All,
    Regular,
    RegularType(usize),
    SemiRegular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutMin {
    pub value: Ext,
    pub witness: Option<SubsetDescriptor>,
}

fn for_each_subset(inst: &Instance, bound: usize, mut visit: impl FnMut(&Shape, &[bool])) -> Result<(), OracleError> {
    ensure(inst, "cut", bound)?;
    let n = inst.graph().vertex_count();
    let shape = Shape::new(inst);
    let mut x = vec![false; n];
    for mask in 1u64..(1u64 << n).saturating_sub(1) {
        for (v, slot) in x.iter_mut().enumerate() {
            *slot = mask >> v & 1 == 1;
        }
        visit(&shape, &x);
    }
    Ok(())
}

/// Minimum of `c(delta(X)) - d(rho(X))` over nonempty proper `X` passing
/// `filter`.
pub fn oracle_cut_min(inst: &Instance, filter: CutFilter, bound: usize) -> Result<CutMin, OracleError> {
    let mut best = CutMin {
        value: Ext::Infinite,
        witness: None,
    };
    for_each_subset(inst, bound, |shape, x| {
        let d = shape.describe(x);
        if d.passes(filter) && Ext::Finite(d.excess()) < best.value {
            best.value = Ext::Finite(d.excess());
            best.witness = Some(d);
        }
    })?;
    Ok(best)
}

/// Excess values of all regular sets, grouped by the holes they meet.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegularProfile {
    pub hole_count: usize,
    pub by_holes: BTreeMap<u8, BTreeSet<i64>>,
}

impl RegularProfile {
    pub fn min_of_type(&self, k: usize) -> Ext {
        self.by_holes
            .iter()
            .filter(|(mask, _)| mask.count_ones() as usize == k)
            .filter_map(|(_, vals)| vals.first().copied())
            .map(Ext::Finite)
            .min()
            .unwrap_or(Ext::Infinite)
    }

    fn values(&self, mask: u8) -> impl Iterator<Item = i64> + '_ {
        self.by_holes.get(&mask).into_iter().flatten().copied()
    }

    fn sums_to(&self, masks: &[u8], target: i64) -> bool {
        match masks {
            [] => target == 0,
            [m, rest @ ..] => self.values(*m).any(|v| self.sums_to(rest, target - v)),
        }
    }

    /// Whether `value` is a sum of excesses of regular sets in the pattern
    /// allowed for a type-`k` bound: two type-1 sets at different holes for
    /// `k = 2`; for `k = 3` one type-1 set per hole, or a type-1 set plus a
    /// type-2 set meeting the other two holes.
    pub fn decomposes(&self, value: i64, k: usize) -> bool {
        let singles: Vec<u8> = (0..self.hole_count).map(|h| 1 << h).collect();
        match k {
            2 => singles
                .iter()
                .enumerate()
                .any(|(i, &a)| singles[i + 1..].iter().any(|&b| self.sums_to(&[a, b], value))),
            3 if singles.len() == 3 => {
                let all = singles.iter().fold(0, |a, m| a | m);
                self.sums_to(&singles, value) || singles.iter().any(|&a| self.sums_to(&[a, all & !a], value))
            }
            _ => false,
        }
    }
}

pub fn regular_profile(inst: &Instance, bound: usize) -> Result<RegularProfile, OracleError> {
    let mut out = RegularProfile {
        hole_count: inst.hole_count(),
        ..Default::default()
    };
    for_each_subset(inst, bound, |shape, x| {
        let d = shape.describe(x);
        if d.is_regular() {
            out.by_holes.entry(d.holes).or_default().insert(d.excess());
        }
    })?;
    Ok(out)
}

/// Vertices of `K_{2,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum K23 {
    T1,
    T2,
    S1,
    S2,
    S3,
}

impl K23 {
    pub const ALL: [K23; 5] = [K23::T1, K23::T2, K23::S1, K23::S2, K23::S3];

    pub fn is_t(self) -> bool {
        matches!(self, K23::T1 | K23::T2)
    }

    /// Index `i` of `S_{i+1}`.
    pub fn s_index(self) -> Option<usize> {
        match self {
            K23::S1 => Some(0),
            K23::S2 => Some(1),
            K23::S3 => Some(2),
            _ => None,
        }
    }

    pub fn distance(self, other: K23) -> i64 {
        if self == other {
            0
        } else if self.is_t() == other.is_t() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for K23 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            K23::T1 => "t1",
            K23::T2 => "t2",
            K23::S1 => "s1",
            K23::S2 => "s2",
            K23::S3 => "s3",
        };
        f.write_str(s)
    }
}

/// A map `sigma: V -> V(K_{2,3})` and the metric it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaAssignment {
    pub classes: Vec<K23>,
}

impl SigmaAssignment {
    pub fn metric(&self, u: VertexId, v: VertexId) -> i64 {
        self.classes[u].distance(self.classes[v])
    }

    pub fn members(&self, k: K23) -> Vec<bool> {
        self.classes.iter().map(|&c| c == k).collect()
    }

    pub fn capacity(&self, inst: &Instance) -> i64 {
        let g = inst.graph();
        (0..g.edge_count())
            .map(|e| {
                let [a, b] = g.ends(e);
                inst.capacity(e) * self.metric(a, b)
            })
            .sum()
    }

    pub fn demand(&self, inst: &Instance) -> i64 {
        inst.demands().iter().map(|d| d.value * self.metric(d.s, d.t)).sum()
    }

    pub fn excess(&self, inst: &Instance) -> i64 {
        self.capacity(inst) - self.demand(inst)
    }
}

impl fmt::Display for SigmaAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in K23::ALL.iter().enumerate() {
            let vs: Vec<usize> = (0..self.classes.len()).filter(|&v| self.classes[v] == *k).collect();
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={vs:?}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricFilter {
    All,
    SemiRegular,
    Regular,
}

fn semi_regular_with(shape: &Shape, classes: &[K23]) -> bool {
    if shape.inst.hole_count() != 3 {
        return false;
    }
    let s: Vec<Vec<bool>> = [K23::S1, K23::S2, K23::S3]
        .iter()
        .map(|&k| classes.iter().map(|&c| c == k).collect())
        .collect();
    if s.iter().any(|x| !x.contains(&true)) {
        return false;
    }
    (0..3).all(|i| {
        (0..3).all(|j| match shape.meet(j, &s[i]) {
            Meet::Empty => i == j,
            Meet::Segment | Meet::Full => i != j,
            Meet::Scattered => false,
        })
    })
}

fn regular_with(shape: &Shape, classes: &[K23]) -> bool {
    semi_regular_with(shape, classes)
        && classes.contains(&K23::T1)
        && classes.contains(&K23::T2)
        && [K23::S1, K23::S2, K23::S3].iter().all(|&k| {
            let x: Vec<bool> = classes.iter().map(|&c| c == k).collect();
            shape.simply_connected(&x)
        })
        && t_sides_apart(shape.inst, classes)
}

/// Removing the holes and the regions of `S1`, `S2`, `S3` from the plane
/// leaves `T1` inside one component and `T2` inside another. Without this
/// the gaps between the `S` segments on a hole may mix `T1` and `T2`, and
/// the metric no longer reads its demand off the boundary quadruples.
fn t_sides_apart(inst: &Instance, classes: &[K23]) -> bool {
    let g = inst.graph();
    let (n, m) = (g.vertex_count(), g.edge_count());
    let in_s = |v: usize| classes[v].s_index().is_some();
    let inside_face: Vec<bool> = g
        .faces()
        .iter()
        .enumerate()
        .map(|(f, darts)| {
            (0..inst.hole_count()).any(|h| inst.hole_face(h) == f) || {
                let c = classes[g.tail(darts[0])];
                c.s_index().is_some() && darts.iter().all(|&d| classes[g.tail(d)] == c)
            }
        })
        .collect();
    let mut uf = UnionFind::new(n + m + g.face_count());
    for e in 0..m {
        let [a, b] = g.ends(e);
        if in_s(a) && in_s(b) && classes[a] == classes[b] {
            continue;
        }
        for v in [a, b] {
            if !in_s(v) {
                uf.union(n + e, v);
            }
        }
        for f in g.faces_of_edge(e) {
            if !inside_face[f] {
                uf.union(n + e, n + m + f);
            }
        }
    }
    let mut side = |k: K23| -> Option<usize> {
        let roots: Vec<usize> = (0..n).filter(|&v| classes[v] == k).map(|v| uf.find(v)).collect();
        let r = *roots.first()?;
        roots.iter().all(|&x| x == r).then_some(r)
    };
    let (t1, t2) = (side(K23::T1), side(K23::T2));
    matches!((t1, t2), (Some(a), Some(b)) if a != b)
}

pub fn is_semi_regular_metric(inst: &Instance, sigma: &SigmaAssignment) -> bool {
    semi_regular_with(&Shape::new(inst), &sigma.classes)
}

pub fn is_regular_metric(inst: &Instance, sigma: &SigmaAssignment) -> bool {
    regular_with(&Shape::new(inst), &sigma.classes)
}

/// Depth-first enumeration of assignments with running excess. `T1`/`T2`
/// are interchangeable for every filter, so `T2` is only used after `T1`;
/// without a filter the `S` classes are interchangeable too.
struct Sigmas<'a, F> {
    /// Signed weights `(w, c or -d)` towards earlier vertices `w`.
    lower: Vec<Vec<(usize, i64)>>,
    /// Classes a vertex may not take (bit per `K23::ALL` index).
    forbidden: Vec<u8>,
    s_symmetric: bool,
    classes: Vec<K23>,
    visit: &'a mut F,
}

impl<F: FnMut(&[K23], i64) -> bool> Sigmas<'_, F> {
    fn go(&mut self, v: usize, acc: i64, t_used: usize, s_used: usize) -> bool {
        if v == self.classes.len() {
            return (self.visit)(&self.classes, acc);
        }
        for (idx, &k) in K23::ALL.iter().enumerate() {
            if self.forbidden[v] >> idx & 1 == 1 {
                continue;
            }
            let (t_next, s_next) = match k {
                K23::T1 => (t_used.max(1), s_used),
                K23::T2 if t_used < 1 => continue,
                K23::T2 => (2, s_used),
                _ => {
                    let i = k.s_index().unwrap();
                    if self.s_symmetric && i > s_used {
                        continue;
                    }
                    (t_used, s_used.max(i + 1))
                }
            };
            let delta: i64 = self.lower[v].iter().map(|&(w, wt)| wt * k.distance(self.classes[w])).sum();
            self.classes[v] = k;
            if self.go(v + 1, acc + delta, t_next, s_next) {
                return true;
            }
        }
        false
    }
}

/// Visits every assignment passing `filter` up to the symmetries above,
/// with its excess `c(m) - d(m)`, until `visit` returns `true`.
pub fn for_each_sigma(
    inst: &Instance,
    filter: MetricFilter,
    bound: usize,
    mut visit: impl FnMut(&SigmaAssignment, i64) -> bool,
) -> Result<(), OracleError> {
    ensure(inst, "metric", bound)?;
    let shape = Shape::new(inst);
    let mut accept = |classes: &[K23], acc: i64| {
        let ok = match filter {
            MetricFilter::All => true,
            MetricFilter::SemiRegular => semi_regular_with(&shape, classes),
            MetricFilter::Regular => regular_with(&shape, classes),
        };
        ok && visit(&SigmaAssignment { classes: classes.to_vec() }, acc)
    };
    enumerate(inst, filter, &mut accept);
    Ok(())
}

fn enumerate<F: FnMut(&[K23], i64) -> bool>(inst: &Instance, filter: MetricFilter, visit: &mut F) {
    let g = inst.graph();
    let n = g.vertex_count();
    let mut lower = vec![Vec::new(); n];
    let mut add = |a: usize, b: usize, w: i64| {
        if a != b && w != 0 {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            lower[hi].push((lo, w));
        }
    };
    for e in 0..g.edge_count() {
        let [a, b] = g.ends(e);
        add(a, b, inst.capacity(e));
    }
    for d in inst.demands() {
        add(d.s, d.t, -d.value);
    }
    let mut forbidden = vec![0u8; n];
    if filter != MetricFilter::All {
        if inst.hole_count() != 3 {
            return;
        }
        for h in 0..3 {
            for v in inst.hole_boundary(h).vertices {
                forbidden[v] |= 1 << (2 + h);
            }
        }
    }
    let mut sig = Sigmas {
        lower,
        forbidden,
        s_symmetric: filter == MetricFilter::All,
        classes: vec![K23::T1; n],
        visit,
    };
    sig.go(0, 0, 0, 0);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricMin {
    pub value: Ext,
    pub witness: Option<SigmaAssignment>,
}

/// Minimum of `c(m) - d(m)` over (2,3)-metrics passing `filter`.
pub fn oracle_metric_min(inst: &Instance, filter: MetricFilter, bound: usize) -> Result<MetricMin, OracleError> {
    ensure(inst, "metric", bound)?;
    let shape = Shape::new(inst);
    let mut best = MetricMin {
        value: Ext::Infinite,
        witness: None,
    };
    // the filter is only evaluated on improving candidates
    let mut visit = |classes: &[K23], acc: i64| {
        if Ext::Finite(acc) < best.value {
            let ok = match filter {
                MetricFilter::All => true,
                MetricFilter::SemiRegular => semi_regular_with(&shape, classes),
                MetricFilter::Regular => regular_with(&shape, classes),
            };
            if ok {
                best.value = Ext::Finite(acc);
                best.witness = Some(SigmaAssignment { classes: classes.to_vec() });
            }
        }
        false
    };
    enumerate(inst, filter, &mut visit);
    Ok(best)
}

/// Solvability by the cut and (2,3)-metric conditions over all sets and all
/// assignments.
pub fn oracle_solvable(inst: &Instance, cfg: OracleConfig) -> Result<bool, OracleError> {
    ensure(inst, "metric", cfg.metric_bound)?;
    if oracle_cut_min(inst, CutFilter::All, cfg.cut_bound)?.value.is_negative() {
        return Ok(false);
    }
    let mut violated = false;
    enumerate(inst, MetricFilter::All, &mut |_: &[K23], acc: i64| {
        violated = acc < 0;
        violated
    });
    Ok(!violated)
}

/// Largest `eps` whose reduction keeps `inst` solvable. The feasible values
/// form a prefix of `[0, min(c(e), d(st))]`, so a binary search suffices.
pub fn oracle_max_eps(inst: &Instance, m: &Move, cfg: OracleConfig) -> Result<i64, OracleError> {
    let feasible = |eps: i64| -> Result<bool, OracleError> {
        let r = reduction::reduce(inst, m, eps).expect("eps within range");
        oracle_solvable(&r, cfg)
    };
    let (mut lo, mut hi) = (0, reduction::eps_cap(inst, m));
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::EmbeddedGraph;
    use crate::instance::tests::theta;
    use crate::instance::Demand;

    const BIG: usize = 12;

    /// `rows x cols` grid; rotation east, north, west, south.
    pub fn grid(rows: usize, cols: usize) -> EmbeddedGraph {
        let id = |i: usize, j: usize| i * cols + j;
        let mut ends = Vec::new();
        let mut east = vec![None; rows * cols];
        let mut south = vec![None; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                if j + 1 < cols {
                    east[id(i, j)] = Some(ends.len());
                    ends.push([id(i, j), id(i, j + 1)]);
                }
                if i + 1 < rows {
                    south[id(i, j)] = Some(ends.len());
                    ends.push([id(i, j), id(i + 1, j)]);
                }
            }
        }
        let mut rotation = vec![Vec::new(); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                let r = &mut rotation[id(i, j)];
                r.extend(east[id(i, j)]);
                if i > 0 {
                    r.extend(south[id(i - 1, j)]);
                }
                if j > 0 {
                    r.extend(east[id(i, j - 1)]);
                }
                r.extend(south[id(i, j)]);
            }
        }
        EmbeddedGraph::new(rows * cols, ends, rotation).unwrap()
    }

    fn longest_face_dart(g: &EmbeddedGraph) -> usize {
        g.faces().iter().max_by_key(|f| f.len()).unwrap()[0]
    }

    fn members(n: usize, xs: &[usize]) -> Vec<bool> {
        (0..n).map(|v| xs.contains(&v)).collect()
    }

    #[test]
    fn theta_cut_minimum() {
        let inst = theta([1, 1, 1], 5);
        let best = oracle_cut_min(&inst, CutFilter::All, BIG).unwrap();
        assert_eq!(best.value, Ext::Finite(-2));
        assert_eq!(best.witness.unwrap().members.iter().filter(|&&b| b).count(), 1);
        assert_eq!(
            oracle_cut_min(&inst, CutFilter::RegularType(1), BIG).unwrap().value,
            Ext::Infinite
        );
        assert_eq!(is_regular(&inst, &[true, false]), Some(3));
        assert_eq!(is_regular(&inst, &[false, true]), Some(3));
    }

    #[test]
    fn zero_demand_cut_minimum_is_min_cut() {
        let inst = theta([2, 1, 3], 0);
        assert_eq!(oracle_cut_min(&inst, CutFilter::All, BIG).unwrap().value, Ext::Finite(6));
        assert_eq!(oracle_metric_min(&inst, MetricFilter::All, BIG).unwrap().value, Ext::ZERO);
    }

    #[test]
    fn opposite_corners_are_not_regular() {
        let g = grid(2, 2);
        let inst = Instance::new(g, longest_face_dart(&grid(2, 2)), vec![], vec![1; 4], vec![]).unwrap();
        assert_eq!(is_regular(&inst, &members(4, &[0, 3])), None);
        assert_eq!(is_regular(&inst, &members(4, &[0, 1])), Some(0));
    }

    #[test]
    fn ring_of_a_grid_is_not_simply_connected() {
        let g = grid(3, 3);
        let outer = longest_face_dart(&g);
        let inst = Instance::new(g, outer, vec![outer], vec![1; 12], vec![]).unwrap();
        let ring: Vec<usize> = (0..9).filter(|&v| v != 4).collect();
        let d = SubsetDescriptor::describe(&inst, &members(9, &ring));
        assert!(!d.simply_connected);
        assert!(d.segments);
        assert_eq!(is_regular(&inst, &members(9, &[0, 1, 3, 4])), Some(1));
        // everything but a corner
        assert_eq!(is_regular(&inst, &members(9, &[1, 2, 3, 4, 5, 6, 7, 8])), Some(1));
    }

    #[test]
    fn theta_metric_minima() {
        let inst = theta([1, 1, 1], 3);
        let best = oracle_metric_min(&inst, MetricFilter::All, BIG).unwrap();
        assert_eq!(best.value, Ext::ZERO);
        assert_eq!(
            oracle_metric_min(&inst, MetricFilter::SemiRegular, BIG).unwrap().value,
            Ext::Infinite
        );
        let worst = oracle_metric_min(&theta([1, 1, 1], 5), MetricFilter::All, BIG).unwrap();
        assert_eq!(worst.value, Ext::Finite(-4));
        let sigma = worst.witness.unwrap();
        assert_eq!(sigma.metric(0, 1), 2);
        assert_eq!(sigma.excess(&theta([1, 1, 1], 5)), -4);
    }

    #[test]
    fn theta_solvability() {
        let cfg = OracleConfig::default();
        assert!(oracle_solvable(&theta([1, 1, 2], 2), cfg).unwrap());
        assert!(oracle_solvable(&theta([1, 1, 1], 3), cfg).unwrap());
        assert!(!oracle_solvable(&theta([1, 1, 1], 5), cfg).unwrap());
        assert!(oracle_solvable(&theta([0, 2, 0], 0), cfg).unwrap());
    }

    #[test]
    fn theta_max_eps() {
        let inst = theta([1, 1, 2], 2);
        let m = reduction::orient(&inst, 0, 0, 0, 1).unwrap();
        assert_eq!(oracle_max_eps(&inst, &m, OracleConfig::default()).unwrap(), 1);
        let done = reduction::reduce(&inst, &m, 1).unwrap();
        let m0 = reduction::orient(&done, 0, 0, 0, 1).unwrap();
        assert_eq!(oracle_max_eps(&done, &m0, OracleConfig::default()).unwrap(), 0);
    }

    #[test]
    fn size_bounds_are_errors() {
        let g = grid(3, 4);
        let outer = longest_face_dart(&g);
        let inst = Instance::new(g, outer, vec![outer], vec![2; 17], vec![Demand::new(0, 11, 0, 1)]).unwrap();
        assert!(matches!(
            oracle_metric_min(&inst, MetricFilter::All, DEFAULT_METRIC_BOUND),
            Err(OracleError::TooLarge { vertices: 12, bound: 10, .. })
        ));
        assert!(oracle_cut_min(&inst, CutFilter::All, DEFAULT_CUT_BOUND).is_ok());
        assert!(oracle_cut_min(&inst, CutFilter::All, 11).is_err());
    }

    #[test]
    fn filters_are_nested() {
        let g = grid(3, 3);
        let outer = longest_face_dart(&g);
        let inner: Vec<usize> = (0..g.face_count()).filter(|&f| f != g.face_of(outer)).collect();
        let holes = vec![g.face(inner[0])[0], g.face(inner[3])[0], outer];
        let inst = Instance::new(
            g,
            outer,
            holes,
            vec![1; 12],
            vec![Demand::new(0, 8, 2, 2), Demand::new(2, 6, 2, 1)],
        )
        .unwrap();
        let all = oracle_metric_min(&inst, MetricFilter::All, BIG).unwrap().value;
        let semi = oracle_metric_min(&inst, MetricFilter::SemiRegular, BIG).unwrap().value;
        let reg = oracle_metric_min(&inst, MetricFilter::Regular, BIG).unwrap().value;
        assert!(all <= semi && semi <= reg, "{all} {semi} {reg}");
        let cut_all = oracle_cut_min(&inst, CutFilter::All, BIG).unwrap().value;
        let cut_semi = oracle_cut_min(&inst, CutFilter::SemiRegular, BIG).unwrap().value;
        let cut_reg = oracle_cut_min(&inst, CutFilter::Regular, BIG).unwrap().value;
        assert!(cut_all <= cut_semi && cut_all <= cut_reg);
    }
}
