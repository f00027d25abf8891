//! Integer multiflows as weighted paths, and their admissibility check.
//!
//! Paths are written in vertex and edge *labels* so that flows computed on
//! sub-instances (after deletions and splits) compose without translation.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlowPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl FlowPath {
    pub fn single_edge(from: usize, edge: usize, to: usize) -> Self {
        Self {
            vertices: vec![from, to],
            edges: vec![edge],
        }
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Self { vertices, edges }
    }

    /// The same path starting at `from`, which must be one of its ends.
    pub fn oriented_from(&self, from: usize) -> Self {
        if self.first() == from {
            self.clone()
        } else {
            debug_assert_eq!(self.last(), from);
            self.reversed()
        }
    }

    pub fn joins(&self, a: usize, b: usize) -> bool {
        (self.first() == a && self.last() == b) || (self.first() == b && self.last() == a)
    }

    /// `self` (ending at `u`), then edge `e` to `v`, then `tail` (starting at `v`).
    pub fn concat(&self, edge: usize, tail: &FlowPath) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&tail.vertices);
        let mut edges = self.edges.clone();
        edges.push(edge);
        edges.extend_from_slice(&tail.edges);
        Self { vertices, edges }
    }

    /// Removes closed subwalks, keeping the endpoints.
    pub fn loop_erased(&self) -> Self {
        let mut vertices: Vec<usize> = Vec::with_capacity(self.vertices.len());
        let mut edges: Vec<usize> = Vec::with_capacity(self.edges.len());
        let mut at: HashMap<usize, usize> = HashMap::new();
        for (k, &v) in self.vertices.iter().enumerate() {
            if let Some(&p) = at.get(&v) {
                for w in vertices.drain(p + 1..) {
                    at.remove(&w);
                }
                edges.truncate(p);
            } else {
                if k > 0 {
                    edges.push(self.edges[k - 1]);
                }
                at.insert(v, vertices.len());
                vertices.push(v);
            }
        }
        Self { vertices, edges }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiflow {
    pub entries: Vec<(FlowPath, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("needed {needed} units of flow between {a} and {b}, found {found}")]
pub struct Shortfall {
    pub a: usize,
    pub b: usize,
    pub needed: i64,
    pub found: i64,
}

impl Multiflow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, path: FlowPath, weight: i64) {
        if weight > 0 {
            self.entries.push((path, weight));
        }
    }

    pub fn extend(&mut self, other: Multiflow) {
        self.entries.extend(other.entries);
    }

    pub fn total_weight(&self) -> i64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    pub fn value_between(&self, a: usize, b: usize) -> i64 {
        self.entries
            .iter()
            .filter(|(p, _)| p.joins(a, b))
            .map(|(_, w)| w)
            .sum()
    }

    /// Splits off exactly `amount` units of `a`-`b` paths, oriented from `a`.
    /// Paths may be split into two copies whose weights sum to the original.
    pub fn extract_subflow(
        &self,
        a: usize,
        b: usize,
        amount: i64,
    ) -> Result<(Multiflow, Multiflow), Shortfall> {
        let mut taken = Multiflow::new();
        let mut rest = Multiflow::new();
        let mut need = amount;
        for (path, w) in &self.entries {
            if need > 0 && path.joins(a, b) {
                let take = need.min(*w);
                taken.push(path.oriented_from(a), take);
                rest.push(path.clone(), w - take);
                need -= take;
            } else {
                rest.push(path.clone(), *w);
            }
        }
        if need > 0 {
            return Err(Shortfall {
                a,
                b,
                needed: amount,
                found: amount - need,
            });
        }
        Ok((taken, rest))
    }

    /// `amount` units of `x`-`y` flow oriented from `x`, and the rest. When
    /// `x == y` the taken part is a trivial one-vertex path.
    fn take(&self, x: usize, y: usize, amount: i64) -> Result<(Multiflow, Multiflow), Shortfall> {
        if x != y {
            return self.extract_subflow(x, y, amount);
        }
        let mut trivial = Multiflow::new();
        trivial.push(
            FlowPath {
                vertices: vec![x],
                edges: vec![],
            },
            amount,
        );
        Ok((trivial, self.clone()))
    }

    /// Replaces `amount` units of `s-u` flow and of `v-t` flow by `s-t`
    /// paths running through `edge = uv`.
    pub fn join_through(
        self,
        (s, u): (usize, usize),
        edge: usize,
        (v, t): (usize, usize),
        amount: i64,
    ) -> Result<Multiflow, Shortfall> {
        if amount == 0 {
            return Ok(self);
        }
        let (head, rest) = self.take(s, u, amount)?;
        let (tail, mut rest) = rest.take(v, t, amount)?;
        let mut pieces = tail.entries.into_iter();
        let mut cur = pieces.next();
        for (h, mut wh) in head.entries {
            while wh > 0 {
                let (p, wp) = cur.take().expect("both sides carry `amount`");
                let w = wh.min(wp);
                rest.push(h.concat(edge, &p), w);
                wh -= w;
                cur = if wp > w { Some((p, wp - w)) } else { pieces.next() };
            }
        }
        Ok(rest)
    }

    /// Loop-erases every path, merges equal paths and sorts the entries.
    pub fn simplified(&self) -> Multiflow {
        let mut merged: BTreeMap<FlowPath, i64> = BTreeMap::new();
        for (path, w) in &self.entries {
            let mut p = path.loop_erased();
            if p.last() < p.first() {
                p = p.reversed();
            }
            *merged.entry(p).or_insert(0) += w;
        }
        Multiflow {
            entries: merged.into_iter().filter(|(_, w)| *w > 0).collect(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdmissibilityReport {
    /// Per edge (local index): flow load and slack `c(e) - load`.
    pub load: Vec<i64>,
    pub slack: Vec<i64>,
    /// Edges (labels) carrying more than their capacity: (edge, load, capacity).
    pub capacity_violations: Vec<(usize, i64, i64)>,
    /// Per demand endpoint pair (labels): (s, t, demanded, routed).
    pub pair_flow: Vec<(usize, usize, i64, i64)>,
    /// Paths that are not walks in the graph, join no demand pair, or carry a
    /// non-positive weight.
    pub malformed: Vec<String>,
}

impl AdmissibilityReport {
    pub fn demand_mismatches(&self) -> impl Iterator<Item = &(usize, usize, i64, i64)> + '_ {
        self.pair_flow.iter().filter(|(_, _, d, f)| d != f)
    }

    pub fn is_admissible(&self) -> bool {
        self.capacity_violations.is_empty()
            && self.malformed.is_empty()
            && self.demand_mismatches().next().is_none()
    }
}

/// Exact check of the capacity constraints and of the demand equalities.
pub fn check_admissible(inst: &Instance, flow: &Multiflow) -> AdmissibilityReport {
    let g = inst.graph();
    let vertex: HashMap<usize, usize> = inst
        .vertex_labels()
        .iter()
        .enumerate()
        .map(|(k, &l)| (l, k))
        .collect();
    let edge: HashMap<usize, usize> = inst
        .edge_labels()
        .iter()
        .enumerate()
        .map(|(k, &l)| (l, k))
        .collect();

    let mut demanded: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for d in inst.demands() {
        let (a, b) = (inst.vertex_label(d.s), inst.vertex_label(d.t));
        *demanded.entry((a.min(b), a.max(b))).or_insert(0) += d.value;
    }
    let mut routed: BTreeMap<(usize, usize), i64> = demanded.keys().map(|&k| (k, 0)).collect();
    let mut load = vec![0i64; g.edge_count()];
    let mut malformed = Vec::new();

    for (k, (path, w)) in flow.entries.iter().enumerate() {
        if *w <= 0 {
            malformed.push(format!("path {k} has non-positive weight {w}"));
            continue;
        }
        if path.vertices.len() != path.edges.len() + 1 || path.edges.is_empty() {
            malformed.push(format!("path {k} has inconsistent length"));
            continue;
        }
        let mut ok = true;
        for (j, &el) in path.edges.iter().enumerate() {
            let (Some(&e), Some(&a), Some(&b)) = (
                edge.get(&el),
                vertex.get(&path.vertices[j]),
                vertex.get(&path.vertices[j + 1]),
            ) else {
                ok = false;
                break;
            };
            let [x, y] = g.ends(e);
            if !((x == a && y == b) || (x == b && y == a)) {
                ok = false;
                break;
            }
        }
        if !ok {
            malformed.push(format!("path {k} is not a walk in the graph"));
            continue;
        }
        let (a, b) = (path.first(), path.last());
        let Some(r) = routed.get_mut(&(a.min(b), a.max(b))) else {
            malformed.push(format!("path {k} joins {a} and {b}, which is not a demand pair"));
            continue;
        };
        *r += w;
        for el in &path.edges {
            load[edge[el]] += w;
        }
    }

    let capacity_violations = (0..g.edge_count())
        .filter(|&e| load[e] > inst.capacity(e))
        .map(|e| (inst.edge_label(e), load[e], inst.capacity(e)))
        .collect();
    let slack = (0..g.edge_count()).map(|e| inst.capacity(e) - load[e]).collect();
    let pair_flow = demanded
        .iter()
        .map(|(&(a, b), &d)| (a, b, d, routed[&(a, b)]))
        .collect();
    AdmissibilityReport {
        load,
        slack,
        capacity_violations,
        pair_flow,
        malformed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::tests::theta;

    fn two_edge_flow() -> Multiflow {
        let mut f = Multiflow::new();
        f.push(FlowPath::single_edge(0, 0, 1), 1);
        f.push(FlowPath::single_edge(0, 1, 1), 1);
        f
    }

    #[test]
    fn theta_flow_is_admissible() {
        let r = check_admissible(&theta([1, 1, 2], 2), &two_edge_flow());
        assert!(r.is_admissible(), "{r:?}");
        assert_eq!(r.slack, vec![0, 0, 2]);
    }

    #[test]
    fn shortfall_is_reported() {
        let r = check_admissible(&theta([1, 1, 2], 3), &two_edge_flow());
        assert!(!r.is_admissible());
        assert_eq!(r.demand_mismatches().collect::<Vec<_>>(), vec![&(0, 1, 3, 2)]);
    }

    #[test]
    fn capacity_violation_is_reported() {
        let mut f = Multiflow::new();
        f.push(FlowPath::single_edge(0, 0, 1), 2);
        let r = check_admissible(&theta([1, 1, 2], 2), &f);
        assert_eq!(r.capacity_violations, vec![(0, 2, 1)]);
    }

    #[test]
    fn non_walks_are_malformed() {
        let mut f = Multiflow::new();
        f.push(
            FlowPath {
                vertices: vec![0, 0],
                edges: vec![0],
            },
            1,
        );
        let r = check_admissible(&theta([1, 1, 2], 2), &f);
        assert_eq!(r.malformed.len(), 1);
    }

    #[test]
    fn extract_splits_paths() {
        let mut f = Multiflow::new();
        f.push(FlowPath::single_edge(5, 9, 7), 3);
        let (sub, rest) = f.extract_subflow(7, 5, 2).unwrap();
        assert_eq!(sub.entries, vec![(FlowPath::single_edge(7, 9, 5), 2)]);
        assert_eq!(rest.entries, vec![(FlowPath::single_edge(5, 9, 7), 1)]);

        let (sub, rest) = f.extract_subflow(5, 7, 3).unwrap();
        assert_eq!(sub.total_weight(), 3);
        assert_eq!(rest.value_between(5, 7), 0);

        let (sub, rest) = f.extract_subflow(5, 7, 0).unwrap();
        assert!(sub.entries.is_empty());
        assert_eq!(rest, f);

        assert_eq!(
            f.extract_subflow(5, 7, 4).unwrap_err(),
            Shortfall {
                a: 5,
                b: 7,
                needed: 4,
                found: 3
            }
        );
    }

    #[test]
    fn loop_erasure_keeps_endpoints() {
        let p = FlowPath {
            vertices: vec![0, 1, 2, 1, 3],
            edges: vec![10, 11, 12, 13],
        };
        let q = p.loop_erased();
        assert_eq!(q.vertices, vec![0, 1, 3]);
        assert_eq!(q.edges, vec![10, 13]);
    }
}
