//! Demand problems on an embedded graph: capacities, holes and demand pairs.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{edge_of, Dart, EdgeId, EmbeddedGraph, FaceId, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("at most three holes are supported, got {0}")]
    TooManyHoles(usize),
    #[error("dart {0} does not exist")]
    NoSuchDart(Dart),
    #[error("expected {expected} capacities, got {got}")]
    CapacityCount { expected: usize, got: usize },
    #[error("edge {0} has negative capacity")]
    NegativeCapacity(EdgeId),
    #[error("demand {s}-{t} has a negative value")]
    NegativeDemand { s: VertexId, t: VertexId },
    #[error("demand {s}-{t} refers to a vertex outside the graph")]
    DemandVertex { s: VertexId, t: VertexId },
    #[error("demand {s}-{t} refers to hole index {hole}, which does not exist")]
    DemandHole { s: VertexId, t: VertexId, hole: usize },
    #[error("edge {0} has positive capacity and cannot be deleted")]
    PositiveCapacity(EdgeId),
    #[error("edge {0} is a bridge")]
    Bridge(EdgeId),
    #[error("edge {0} is not a bridge")]
    NotBridge(EdgeId),
    #[error("hole {0} still carries demands")]
    HoleHasDemands(usize),
    #[error("bridge {0} separates demand pairs")]
    SeparatedDemand(EdgeId),
}

/// A demand pair located on hole `hole` (index into the instance's hole list).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Demand {
    pub s: VertexId,
    pub t: VertexId,
    pub hole: usize,
    pub value: i64,
}

impl Demand {
    pub fn new(s: VertexId, t: VertexId, hole: usize, value: i64) -> Self {
        Self { s, t, hole, value }
    }

    /// Pairs are keyed by hole and unordered endpoints.
    pub fn key(&self) -> (usize, VertexId, VertexId) {
        (self.hole, self.s.min(self.t), self.s.max(self.t))
    }

    pub fn connects(&self, a: VertexId, b: VertexId) -> bool {
        (self.s == a && self.t == b) || (self.s == b && self.t == a)
    }
}

/// What deleting a zero-capacity edge did to the hole structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyEvent {
    /// Holes `i < j` became one face; the result keeps index `i`, and `j` is gone.
    HolesMerged(usize, usize),
    HoleGrew(usize),
    Interior,
}

#[derive(Debug, Clone)]
pub struct Instance {
    graph: Arc<EmbeddedGraph>,
    outer: Dart,
    holes: Vec<Dart>,
    capacity: Vec<i64>,
    demands: Vec<Demand>,
    vertex_label: Vec<usize>,
    edge_label: Vec<usize>,
}

/// Merges pairs with equal keys, drops `s == t`, orients `s < t` and sorts.
fn canonical_demands(demands: impl IntoIterator<Item = Demand>) -> Vec<Demand> {
    let mut merged: BTreeMap<(usize, VertexId, VertexId), i64> = BTreeMap::new();
    for d in demands {
        if d.s == d.t {
            continue;
        }
        *merged.entry(d.key()).or_insert(0) += d.value;
    }
    merged
        .into_iter()
        .filter(|&(_, value)| value != 0)
        .map(|((hole, s, t), value)| Demand { s, t, hole, value })
        .collect()
}

impl Instance {
    /// Holes and the outer face are designated by a dart on their boundary.
    pub fn new(
        graph: EmbeddedGraph,
        outer: Dart,
        holes: Vec<Dart>,
        capacity: Vec<i64>,
        demands: Vec<Demand>,
    ) -> Result<Self, InstanceError> {
        let n = graph.vertex_count();
        let m = graph.edge_count();
        Self::assemble(
            Arc::new(graph),
            outer,
            holes,
            capacity,
            demands,
            (0..n).collect(),
            (0..m).collect(),
        )
    }

    fn assemble(
        graph: Arc<EmbeddedGraph>,
        outer: Dart,
        holes: Vec<Dart>,
        capacity: Vec<i64>,
        demands: Vec<Demand>,
        vertex_label: Vec<usize>,
        edge_label: Vec<usize>,
    ) -> Result<Self, InstanceError> {
        let darts = 2 * graph.edge_count();
        if holes.len() > 3 {
            return Err(InstanceError::TooManyHoles(holes.len()));
        }
        for &d in holes.iter().chain(std::iter::once(&outer)) {
            if d >= darts {
                return Err(InstanceError::NoSuchDart(d));
            }
        }
        if capacity.len() != graph.edge_count() {
            return Err(InstanceError::CapacityCount {
                expected: graph.edge_count(),
                got: capacity.len(),
            });
        }
        if let Some(e) = capacity.iter().position(|&c| c < 0) {
            return Err(InstanceError::NegativeCapacity(e));
        }
        for d in &demands {
            if d.s >= graph.vertex_count() || d.t >= graph.vertex_count() {
                return Err(InstanceError::DemandVertex { s: d.s, t: d.t });
            }
            if d.hole >= holes.len() {
                return Err(InstanceError::DemandHole {
                    s: d.s,
                    t: d.t,
                    hole: d.hole,
                });
            }
            if d.value < 0 {
                return Err(InstanceError::NegativeDemand { s: d.s, t: d.t });
            }
        }
        Ok(Self {
            graph,
            outer,
            holes,
            capacity,
            demands: canonical_demands(demands),
            vertex_label,
            edge_label,
        })
    }

    /// Attaches external vertex and edge labels (used by multiflows).
    pub fn with_labels(mut self, vertex_label: Vec<usize>, edge_label: Vec<usize>) -> Self {
        assert_eq!(vertex_label.len(), self.graph.vertex_count());
        assert_eq!(edge_label.len(), self.graph.edge_count());
        self.vertex_label = vertex_label;
        self.edge_label = edge_label;
        self
    }

    /// Same graph and holes, new capacities and demands.
    pub fn with_values(&self, capacity: Vec<i64>, demands: Vec<Demand>) -> Self {
        debug_assert_eq!(capacity.len(), self.capacity.len());
        Self {
            graph: Arc::clone(&self.graph),
            outer: self.outer,
            holes: self.holes.clone(),
            capacity,
            demands: canonical_demands(demands),
            vertex_label: self.vertex_label.clone(),
            edge_label: self.edge_label.clone(),
        }
    }

    pub fn graph(&self) -> &EmbeddedGraph {
        &self.graph
    }

    pub fn outer_dart(&self) -> Dart {
        self.outer
    }

    pub fn outer_face(&self) -> FaceId {
        self.graph.face_of(self.outer)
    }

    pub fn hole_count(&self) -> usize {
        self.holes.len()
    }

    pub fn hole_darts(&self) -> &[Dart] {
        &self.holes
    }

    pub fn hole_face(&self, i: usize) -> FaceId {
        self.graph.face_of(self.holes[i])
    }

    pub fn hole_of_face(&self, f: FaceId) -> Option<usize> {
        (0..self.holes.len()).find(|&i| self.hole_face(i) == f)
    }

    pub fn capacity(&self, e: EdgeId) -> i64 {
        self.capacity[e]
    }

    pub fn capacities(&self) -> &[i64] {
        &self.capacity
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn demands_on(&self, hole: usize) -> impl Iterator<Item = &Demand> + '_ {
        self.demands.iter().filter(move |d| d.hole == hole)
    }

    pub fn vertex_label(&self, v: VertexId) -> usize {
        self.vertex_label[v]
    }

    pub fn edge_label(&self, e: EdgeId) -> usize {
        self.edge_label[e]
    }

    pub fn vertex_labels(&self) -> &[usize] {
        &self.vertex_label
    }

    pub fn edge_labels(&self) -> &[usize] {
        &self.edge_label
    }

    pub fn vertex_by_label(&self, label: usize) -> Option<VertexId> {
        self.vertex_label.iter().position(|&l| l == label)
    }

    pub fn edge_by_label(&self, label: usize) -> Option<EdgeId> {
        self.edge_label.iter().position(|&l| l == label)
    }

    pub fn total_demand(&self) -> i64 {
        self.demands.iter().map(|d| d.value).sum()
    }

    /// `c(delta(v)) - d(rho(v))` for every vertex.
    pub fn vertex_balance(&self) -> Vec<i64> {
        let g = &self.graph;
        let mut bal = vec![0i64; g.vertex_count()];
        for (e, &[u, v]) in g.edges().iter().enumerate() {
            bal[u] += self.capacity[e];
            bal[v] += self.capacity[e];
        }
        for d in &self.demands {
            bal[d.s] -= d.value;
            bal[d.t] -= d.value;
        }
        bal
    }

    pub fn odd_vertices(&self) -> Vec<VertexId> {
        self.vertex_balance()
            .iter()
            .enumerate()
            .filter(|(_, b)| b.rem_euclid(2) == 1)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn is_eulerian(&self) -> bool {
        self.odd_vertices().is_empty()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport {
            odd_vertices: self.odd_vertices(),
            ..Default::default()
        };
        for i in 0..self.holes.len() {
            for j in i + 1..self.holes.len() {
                if self.hole_face(i) == self.hole_face(j) {
                    report.coinciding_holes.push((i, j));
                }
            }
        }
        if self.holes.len() == 3 && self.hole_face(2) != self.outer_face() {
            report.outer_not_last_hole = true;
        }
        let on_hole: Vec<Vec<bool>> = (0..self.holes.len())
            .map(|i| {
                let mut mark = vec![false; self.graph.vertex_count()];
                for &d in self.graph.face(self.hole_face(i)) {
                    mark[self.graph.tail(d)] = true;
                }
                mark
            })
            .collect();
        for d in &self.demands {
            if !on_hole[d.hole][d.s] || !on_hole[d.hole][d.t] {
                report.misplaced_demands.push(*d);
            }
        }
        report
    }

    pub fn hole_boundary(&self, i: usize) -> BoundaryCycle {
        BoundaryCycle::new(&self.graph, i, self.hole_face(i))
    }

    /// A bridge lying on the boundary of some hole, if any.
    pub fn hole_isthmus(&self) -> Option<EdgeId> {
        (0..self.graph.edge_count()).find(|&e| {
            self.graph.is_bridge(e) && self.hole_of_face(self.graph.face_of(2 * e)).is_some()
        })
    }

    /// Removes a zero-capacity edge that is not a bridge.
    pub fn delete_edge(&self, e: EdgeId) -> Result<(Instance, TopologyEvent), InstanceError> {
        if self.capacity[e] != 0 {
            return Err(InstanceError::PositiveCapacity(e));
        }
        if self.graph.is_bridge(e) {
            return Err(InstanceError::Bridge(e));
        }
        let g = &self.graph;
        let [fa, fb] = g.faces_of_edge(e);
        let ha = self.hole_of_face(fa);
        let hb = self.hole_of_face(fb);
        let event = match (ha, hb) {
            (Some(a), Some(b)) => TopologyEvent::HolesMerged(a.min(b), a.max(b)),
            (Some(a), None) | (None, Some(a)) => TopologyEvent::HoleGrew(a),
            (None, None) => TopologyEvent::Interior,
        };
        let off_edge = |mut d: Dart| {
            while edge_of(d) == e {
                d = g.next(d);
            }
            d
        };
        let mut removed = vec![false; g.edge_count()];
        removed[e] = true;
        let r = g.restrict(&vec![true; g.vertex_count()], &removed)?;
        let map = |d: Dart| EmbeddedGraph::map_dart(&r.edge_map, off_edge(d)).unwrap();

        let mut holes: Vec<Dart> = self.holes.iter().map(|&d| map(d)).collect();
        let mut demands = self.demands.clone();
        if let TopologyEvent::HolesMerged(i, j) = event {
            holes.remove(j);
            for d in &mut demands {
                if d.hole == j {
                    d.hole = i;
                } else if d.hole > j {
                    d.hole -= 1;
                }
            }
        }
        let capacity = (0..g.edge_count())
            .filter(|&f| f != e)
            .map(|f| self.capacity[f])
            .collect();
        let edge_label = (0..g.edge_count())
            .filter(|&f| f != e)
            .map(|f| self.edge_label[f])
            .collect();
        let inst = Self::assemble(
            Arc::new(r.graph),
            map(self.outer),
            holes,
            capacity,
            demands,
            self.vertex_label.clone(),
            edge_label,
        )?;
        Ok((inst, event))
    }

    /// Turns hole `i` into an ordinary face. The hole must carry no demands.
    pub fn withdraw_hole(&self, i: usize) -> Result<Instance, InstanceError> {
        if self.demands_on(i).any(|d| d.value != 0) {
            return Err(InstanceError::HoleHasDemands(i));
        }
        let mut out = self.clone();
        out.holes.remove(i);
        out.demands = self
            .demands
            .iter()
            .filter(|d| d.hole != i)
            .map(|d| Demand {
                hole: if d.hole > i { d.hole - 1 } else { d.hole },
                ..*d
            })
            .collect();
        Ok(out)
    }

    /// Demand indices whose endpoints lie on different sides of bridge `e`,
    /// each with the side mask of `ends(e)[0]`.
    pub fn separated_by_bridge(&self, e: EdgeId) -> (Vec<bool>, Vec<usize>) {
        let side = self.graph.side_of_edge(e, 0);
        let sep = self
            .demands
            .iter()
            .enumerate()
            .filter(|(_, d)| d.value != 0 && side[d.s] != side[d.t])
            .map(|(k, _)| k)
            .collect();
        (side, sep)
    }

    /// Deletes bridge `e` and returns the two components. A component without
    /// edges is returned as `None`. No demand may cross the bridge.
    pub fn split_at_bridge(&self, e: EdgeId) -> Result<[Option<Instance>; 2], InstanceError> {
        if !self.graph.is_bridge(e) {
            return Err(InstanceError::NotBridge(e));
        }
        let (side_a, sep) = self.separated_by_bridge(e);
        if !sep.is_empty() {
            return Err(InstanceError::SeparatedDemand(e));
        }
        let g = &self.graph;
        let bridge_face = g.face_of(2 * e);
        let mut parts = [None, None];
        for (k, part) in parts.iter_mut().enumerate() {
            let keep: Vec<bool> = side_a.iter().map(|&a| a == (k == 0)).collect();
            if keep.iter().filter(|&&x| x).count() < 2 {
                continue;
            }
            let mut removed = vec![false; g.edge_count()];
            removed[e] = true;
            let r = g.restrict(&keep, &removed)?;
            let dart_in_side = |f: FaceId| {
                g.face(f)
                    .iter()
                    .copied()
                    .find(|&d| edge_of(d) != e && keep[g.tail(d)])
                    .and_then(|d| EmbeddedGraph::map_dart(&r.edge_map, d))
            };
            let outer = dart_in_side(self.outer_face())
                .or_else(|| dart_in_side(bridge_face))
                .expect("component with edges touches the bridge face");
            let mut hole_map = vec![None; self.holes.len()];
            let mut holes = Vec::new();
            for i in 0..self.holes.len() {
                if let Some(d) = dart_in_side(self.hole_face(i)) {
                    hole_map[i] = Some(holes.len());
                    holes.push(d);
                }
            }
            let demands = self
                .demands
                .iter()
                .filter(|d| keep[d.s])
                .map(|d| Demand {
                    s: r.vertex_map[d.s].unwrap(),
                    t: r.vertex_map[d.t].unwrap(),
                    hole: hole_map[d.hole].expect("demand endpoints lie on their hole"),
                    value: d.value,
                })
                .collect();
            let mut capacity = vec![0; r.graph.edge_count()];
            let mut edge_label = vec![0; r.graph.edge_count()];
            for (old, new) in r.edge_map.iter().enumerate() {
                if let Some(new) = *new {
                    capacity[new] = self.capacity[old];
                    edge_label[new] = self.edge_label[old];
                }
            }
            let mut vertex_label = vec![0; r.graph.vertex_count()];
            for (old, new) in r.vertex_map.iter().enumerate() {
                if let Some(new) = *new {
                    vertex_label[new] = self.vertex_label[old];
                }
            }
            *part = Some(Self::assemble(
                Arc::new(r.graph),
                outer,
                holes,
                capacity,
                demands,
                vertex_label,
                edge_label,
            )?);
        }
        Ok(parts)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub odd_vertices: Vec<VertexId>,
    pub misplaced_demands: Vec<Demand>,
    pub coinciding_holes: Vec<(usize, usize)>,
    /// With three holes, the last one must be the outer face.
    pub outer_not_last_hole: bool,
}

impl ValidationReport {
    pub fn is_eulerian(&self) -> bool {
        self.odd_vertices.is_empty()
    }

    /// Structurally valid: holes and demands are well placed. Parity is
    /// reported separately.
    pub fn is_well_formed(&self) -> bool {
        self.misplaced_demands.is_empty()
            && self.coinciding_holes.is_empty()
            && !self.outer_not_last_hole
    }

    pub fn is_valid(&self) -> bool {
        self.is_well_formed() && self.is_eulerian()
    }
}

/// The boundary walk of a hole as a cyclic sequence: edge `edges[k]` runs from
/// `vertices[k]` to `vertices[k + 1]`.
#[derive(Debug, Clone)]
pub struct BoundaryCycle {
    pub hole: usize,
    pub darts: Vec<Dart>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    edge_pos: Vec<Option<usize>>,
    vertex_pos: Vec<Option<usize>>,
    repeated_edge: bool,
}

impl BoundaryCycle {
    fn new(g: &EmbeddedGraph, hole: usize, face: FaceId) -> Self {
        let darts = g.face(face).to_vec();
        let vertices: Vec<_> = darts.iter().map(|&d| g.tail(d)).collect();
        let edges: Vec<_> = darts.iter().map(|&d| edge_of(d)).collect();
        let mut edge_pos = vec![None; g.edge_count()];
        let mut vertex_pos = vec![None; g.vertex_count()];
        let mut repeated_edge = false;
        for (k, &e) in edges.iter().enumerate() {
            if edge_pos[e].is_some() {
                repeated_edge = true;
            } else {
                edge_pos[e] = Some(k);
            }
        }
        for (k, &v) in vertices.iter().enumerate() {
            vertex_pos[v].get_or_insert(k);
        }
        Self {
            hole,
            darts,
            vertices,
            edges,
            edge_pos,
            vertex_pos,
            repeated_edge,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn position_of_edge(&self, e: EdgeId) -> Option<usize> {
        self.edge_pos.get(e).copied().flatten()
    }

    /// First position at which `v` occurs on the walk.
    pub fn position_of_vertex(&self, v: VertexId) -> Option<usize> {
        self.vertex_pos.get(v).copied().flatten()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.position_of_vertex(v).is_some()
    }

    pub fn has_isthmus(&self) -> bool {
        self.repeated_edge
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.vertices.iter().all(|v| seen.insert(*v))
    }
}
