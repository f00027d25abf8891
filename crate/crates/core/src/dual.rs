//! Planar dual with every hole vertex split into pendant terminals, one per
//! boundary edge of the hole, and exact shortest distances between terminals.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::ext::Ext;
use crate::graph::{edge_of, EdgeId};
use crate::instance::{BoundaryCycle, Instance};

#[derive(Debug, Clone)]
pub struct DualGraph {
    /// Dual node of each ordinary (non-hole) face, indexed by face id.
    pub face_node: Vec<Option<usize>>,
    /// `terminals[i][k]` is the terminal of the `k`-th boundary edge of hole `i`.
    pub terminals: Vec<Vec<usize>>,
    /// For a terminal node: (hole, boundary position).
    pub terminal_of: Vec<Option<(usize, usize)>>,
    /// Endpoints of the dual edge `e*`, one per primal edge.
    pub edge_ends: Vec<[usize; 2]>,
    pub length: Vec<i64>,
    pub boundaries: Vec<BoundaryCycle>,
    adjacency: Vec<Vec<(usize, EdgeId)>>,
}

impl DualGraph {
    /// Hole boundaries must be free of isthmuses.
    pub fn build(inst: &Instance) -> DualGraph {
        let g = inst.graph();
        let boundaries: Vec<BoundaryCycle> =
            (0..inst.hole_count()).map(|i| inst.hole_boundary(i)).collect();
        for b in &boundaries {
            assert!(!b.has_isthmus(), "hole {} has an isthmus", b.hole);
        }
        let mut nodes = 0;
        let mut face_node = vec![None; g.face_count()];
        for (f, slot) in face_node.iter_mut().enumerate() {
            if inst.hole_of_face(f).is_none() {
                *slot = Some(nodes);
                nodes += 1;
            }
        }
        let mut terminal_of = vec![None; nodes];
        let mut terminals = Vec::with_capacity(boundaries.len());
        let mut dart_node = vec![usize::MAX; 2 * g.edge_count()];
        for b in &boundaries {
            let mut ids = Vec::with_capacity(b.len());
            for (k, &d) in b.darts.iter().enumerate() {
                ids.push(nodes);
                dart_node[d] = nodes;
                terminal_of.push(Some((b.hole, k)));
                nodes += 1;
            }
            terminals.push(ids);
        }
        for (d, slot) in dart_node.iter_mut().enumerate() {
            if *slot == usize::MAX {
                *slot = face_node[g.face_of(d)].expect("dart of an ordinary face");
            }
        }
        let mut adjacency = vec![Vec::new(); nodes];
        let mut edge_ends = Vec::with_capacity(g.edge_count());
        for e in 0..g.edge_count() {
            let (a, b) = (dart_node[2 * e], dart_node[2 * e + 1]);
            edge_ends.push([a, b]);
            if a != b {
                adjacency[a].push((b, e));
                adjacency[b].push((a, e));
            }
        }
        DualGraph {
            face_node,
            terminals,
            terminal_of,
            edge_ends,
            length: inst.capacities().to_vec(),
            boundaries,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn terminal(&self, hole: usize, position: usize) -> usize {
        self.terminals[hole][position]
    }

    /// Terminal of boundary edge `e` of hole `hole`.
    pub fn terminal_of_edge(&self, hole: usize, e: EdgeId) -> Option<usize> {
        self.boundaries[hole]
            .position_of_edge(e)
            .map(|k| self.terminals[hole][k])
    }

    /// Single-source shortest paths; predecessor ties go to the smaller node.
    pub fn shortest_paths(&self, source: usize) -> ShortestPaths {
        let n = self.node_count();
        let mut dist = vec![Ext::Infinite; n];
        let mut pred: Vec<Option<(usize, EdgeId)>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = Ext::ZERO;
        heap.push(Reverse((0i64, source)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, e) in &self.adjacency[u] {
                let nd = du + self.length[e];
                let better = match dist[v] {
                    Ext::Infinite => true,
                    Ext::Finite(old) => {
                        nd < old || (nd == old && !done[v] && pred[v].is_some_and(|(p, _)| u < p))
                    }
                };
                if better {
                    dist[v] = Ext::Finite(nd);
                    pred[v] = Some((u, e));
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        ShortestPaths { dist, pred }
    }

    /// Distances from every terminal to every terminal.
    pub fn terminal_distances(&self) -> DistanceTable {
        let all: Vec<usize> = self.terminals.iter().flatten().copied().collect();
        let rows = all
            .iter()
            .map(|&t| {
                let sp = self.shortest_paths(t);
                all.iter().map(|&u| sp.dist[u]).collect()
            })
            .collect();
        DistanceTable {
            offsets: self
                .terminals
                .iter()
                .scan(0, |acc, ts| {
                    let start = *acc;
                    *acc += ts.len();
                    Some(start)
                })
                .collect(),
            rows,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub dist: Vec<Ext>,
    pub pred: Vec<Option<(usize, EdgeId)>>,
}

impl ShortestPaths {
    /// Primal edges whose duals form the reported shortest path to `target`.
    pub fn path_edges(&self, target: usize) -> Option<Vec<EdgeId>> {
        if !self.dist[target].is_finite() {
            return None;
        }
        let mut edges = Vec::new();
        let mut at = target;
        while let Some((p, e)) = self.pred[at] {
            edges.push(e);
            at = p;
        }
        edges.reverse();
        Some(edges)
    }
}

/// Terminal-to-terminal distances, addressed by (hole, boundary position).
#[derive(Debug, Clone)]
pub struct DistanceTable {
    offsets: Vec<usize>,
    rows: Vec<Vec<Ext>>,
}

impl DistanceTable {
    #[inline]
    pub fn get(&self, hole_a: usize, pos_a: usize, hole_b: usize, pos_b: usize) -> Ext {
        self.rows[self.offsets[hole_a] + pos_a][self.offsets[hole_b] + pos_b]
    }

    pub fn hole_count(&self) -> usize {
        self.offsets.len()
    }

    pub fn terminal_count(&self) -> usize {
        self.rows.len()
    }
}

/// Edge of a hole boundary at position `pos`.
pub fn boundary_edge(dual: &DualGraph, hole: usize, pos: usize) -> EdgeId {
    edge_of(dual.boundaries[hole].darts[pos])
}
