//! Connected planar multigraphs given by a rotation system.
//!
//! Every undirected edge `e = (u, v)` owns two darts: `2e` runs `u -> v` and
//! `2e + 1` runs `v -> u`. The rotation at a vertex lists its incident edges in
//! clockwise order. The face traced after dart `a -> b` continues with the edge
//! that immediately follows `b -> a` in the clockwise rotation at `b`.

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Dart = usize;
pub type FaceId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no edges")]
    Empty,
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} has endpoint {vertex} outside 0..{count}")]
    EndpointOutOfRange {
        edge: EdgeId,
        vertex: VertexId,
        count: usize,
    },
    #[error("rotation at vertex {vertex} does not list exactly its incident edges")]
    BadRotation { vertex: VertexId },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("Euler relation fails: |V| - |E| + |F| = {value}, rotation system is not planar")]
    NotPlanar { value: i64 },
}

#[inline]
pub fn edge_of(d: Dart) -> EdgeId {
    d >> 1
}

#[inline]
pub fn reverse(d: Dart) -> Dart {
    d ^ 1
}

#[derive(Debug, Clone)]
pub struct EmbeddedGraph {
    vertex_count: usize,
    ends: Vec<[VertexId; 2]>,
    rotation: Vec<Vec<EdgeId>>,
    next: Vec<Dart>,
    face_of: Vec<FaceId>,
    faces: Vec<Vec<Dart>>,
}

impl EmbeddedGraph {
    /// Builds the graph and traces its faces.
    ///
    /// Faces are numbered by their smallest dart, and each face's dart list
    /// starts at that dart.
    pub fn new(
        vertex_count: usize,
        ends: Vec<[VertexId; 2]>,
        rotation: Vec<Vec<EdgeId>>,
    ) -> Result<Self, GraphError> {
        if ends.is_empty() {
            return Err(GraphError::Empty);
        }
        for (e, &[u, v]) in ends.iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::EndpointOutOfRange {
                        edge: e,
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { edge: e, vertex: u });
            }
        }
        if rotation.len() != vertex_count {
            return Err(GraphError::BadRotation {
                vertex: rotation.len().min(vertex_count),
            });
        }

        // position of each edge-end inside its vertex rotation
        let mut slot = vec![[usize::MAX; 2]; ends.len()];
        for (w, rot) in rotation.iter().enumerate() {
            for (p, &e) in rot.iter().enumerate() {
                if e >= ends.len() {
                    return Err(GraphError::BadRotation { vertex: w });
                }
                let side = if ends[e][0] == w {
                    0
                } else if ends[e][1] == w {
                    1
                } else {
                    return Err(GraphError::BadRotation { vertex: w });
                };
                if slot[e][side] != usize::MAX {
                    return Err(GraphError::BadRotation { vertex: w });
                }
                slot[e][side] = p;
            }
        }
        for (e, s) in slot.iter().enumerate() {
            for side in 0..2 {
                if s[side] == usize::MAX {
                    return Err(GraphError::BadRotation {
                        vertex: ends[e][side],
                    });
                }
            }
        }

        let mut adjacency = vec![Vec::new(); vertex_count];
        for &[u, v] in &ends {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut seen = vec![false; vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(w) = stack.pop() {
            for &x in &adjacency[w] {
                if !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GraphError::Disconnected);
        }

        let darts = 2 * ends.len();
        let mut next = vec![0; darts];
        for d in 0..darts {
            let e = edge_of(d);
            let head_side = 1 - (d & 1);
            let head = ends[e][head_side];
            let rot = &rotation[head];
            let p = slot[e][head_side];
            let f = rot[(p + 1) % rot.len()];
            next[d] = if ends[f][0] == head { 2 * f } else { 2 * f + 1 };
        }

        let mut face_of = vec![usize::MAX; darts];
        let mut faces = Vec::new();
        for start in 0..darts {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = id;
                walk.push(d);
                d = next[d];
                if d == start {
                    break;
                }
            }
            faces.push(walk);
        }

        let euler = vertex_count as i64 - ends.len() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(GraphError::NotPlanar { value: euler });
        }

        Ok(Self {
            vertex_count,
            ends,
            rotation,
            next,
            face_of,
            faces,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn ends(&self, e: EdgeId) -> [VertexId; 2] {
        self.ends[e]
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.ends
    }

    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<EdgeId>] {
        &self.rotation
    }

    pub fn tail(&self, d: Dart) -> VertexId {
        self.ends[edge_of(d)][d & 1]
    }

    pub fn head(&self, d: Dart) -> VertexId {
        self.ends[edge_of(d)][1 - (d & 1)]
    }

    /// Successor of `d` along its face.
    pub fn next(&self, d: Dart) -> Dart {
        self.next[d]
    }

    pub fn face_of(&self, d: Dart) -> FaceId {
        self.face_of[d]
    }

    pub fn face(&self, f: FaceId) -> &[Dart] {
        &self.faces[f]
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    /// The two faces on either side of `e` (equal for a bridge).
    pub fn faces_of_edge(&self, e: EdgeId) -> [FaceId; 2] {
        [self.face_of[2 * e], self.face_of[2 * e + 1]]
    }

    pub fn is_bridge(&self, e: EdgeId) -> bool {
        self.face_of[2 * e] == self.face_of[2 * e + 1]
    }

    /// Vertices reachable from `ends(e)[side]` without crossing `e`.
    pub fn side_of_edge(&self, e: EdgeId, side: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        let start = self.ends[e][side];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(w) = stack.pop() {
            for &f in &self.rotation[w] {
                if f == e {
                    continue;
                }
                let [a, b] = self.ends[f];
                let x = if a == w { b } else { a };
                if !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        seen
    }

    /// Rebuilds the graph without the edges flagged in `removed`, keeping the
    /// listed vertex subset. Returns the new graph together with the old-to-new
    /// vertex and edge maps.
    pub fn restrict(
        &self,
        keep_vertex: &[bool],
        removed: &[bool],
    ) -> Result<Restricted, GraphError> {
        let mut vmap = vec![None; self.vertex_count];
        let mut count = 0;
        for v in 0..self.vertex_count {
            if keep_vertex[v] {
                vmap[v] = Some(count);
                count += 1;
            }
        }
        let mut emap = vec![None; self.ends.len()];
        let mut ends = Vec::new();
        for (e, &[u, v]) in self.ends.iter().enumerate() {
            if removed[e] {
                continue;
            }
            if let (Some(a), Some(b)) = (vmap[u], vmap[v]) {
                emap[e] = Some(ends.len());
                ends.push([a, b]);
            }
        }
        let mut rotation = vec![Vec::new(); count];
        for v in 0..self.vertex_count {
            if let Some(nv) = vmap[v] {
                rotation[nv] = self.rotation[v].iter().filter_map(|&e| emap[e]).collect();
            }
        }
        let graph = EmbeddedGraph::new(count, ends, rotation)?;
        Ok(Restricted {
            graph,
            vertex_map: vmap,
            edge_map: emap,
        })
    }

    /// Maps a dart through an edge map produced by [`EmbeddedGraph::restrict`].
    pub fn map_dart(edge_map: &[Option<EdgeId>], d: Dart) -> Option<Dart> {
        edge_map[edge_of(d)].map(|e| 2 * e + (d & 1))
    }
}

#[derive(Debug, Clone)]
pub struct Restricted {
    pub graph: EmbeddedGraph,
    pub vertex_map: Vec<Option<VertexId>>,
    pub edge_map: Vec<Option<EdgeId>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> EmbeddedGraph {
        EmbeddedGraph::new(2, vec![[0, 1]; 3], vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap()
    }

    fn face_edges(g: &EmbeddedGraph, f: FaceId) -> Vec<EdgeId> {
        let mut es: Vec<_> = g.face(f).iter().map(|&d| edge_of(d)).collect();
        es.sort();
        es
    }

    #[test]
    fn theta_has_three_two_gons() {
        let g = theta();
        assert_eq!(g.face_count(), 3);
        assert_eq!(face_edges(&g, 0), vec![0, 2]);
        assert_eq!(face_edges(&g, 1), vec![0, 1]);
        assert_eq!(face_edges(&g, 2), vec![1, 2]);
    }

    #[test]
    fn single_edge_has_one_face() {
        let g = EmbeddedGraph::new(2, vec![[0, 1]], vec![vec![0], vec![0]]).unwrap();
        assert_eq!(g.face_count(), 1);
        assert!(g.is_bridge(0));
        assert_eq!(g.face(0), &[0, 1]);
    }

    #[test]
    fn k4_planar_rotation() {
        // K4 drawn as triangle 0,1,2 with 3 in the middle.
        // edges: 0:01 1:12 2:20 3:03 4:13 5:23
        let ends = vec![[0, 1], [1, 2], [2, 0], [0, 3], [1, 3], [2, 3]];
        let rotation = vec![vec![0, 3, 2], vec![1, 4, 0], vec![2, 5, 1], vec![3, 4, 5]];
        let g = EmbeddedGraph::new(4, ends, rotation).unwrap();
        assert_eq!(g.face_count(), 4);
        for f in 0..4 {
            assert_eq!(g.face(f).len(), 3);
        }
    }

    #[test]
    fn nonplanar_rotation_rejected() {
        let ends = vec![[0, 1], [1, 2], [2, 0], [0, 3], [1, 3], [2, 3]];
        let rotation = vec![vec![0, 2, 3], vec![1, 4, 0], vec![2, 5, 1], vec![3, 4, 5]];
        assert!(matches!(
            EmbeddedGraph::new(4, ends, rotation),
            Err(GraphError::NotPlanar { .. })
        ));
    }

    #[test]
    fn input_errors() {
        assert_eq!(
            EmbeddedGraph::new(2, vec![[0, 0]], vec![vec![0], vec![]]).unwrap_err(),
            GraphError::SelfLoop { edge: 0, vertex: 0 }
        );
        assert_eq!(
            EmbeddedGraph::new(4, vec![[0, 1], [2, 3]], vec![vec![0], vec![0], vec![1], vec![1]])
                .unwrap_err(),
            GraphError::Disconnected
        );
        assert!(matches!(
            EmbeddedGraph::new(2, vec![[0, 1]; 2], vec![vec![0, 1], vec![0]]),
            Err(GraphError::BadRotation { vertex: 1 })
        ));
    }

    #[test]
    fn every_dart_in_exactly_one_face() {
        let g = theta();
        let mut count = vec![0; 6];
        for f in g.faces() {
            for &d in f {
                count[d] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 1));
    }

    #[test]
    fn restrict_drops_edge_and_merges_faces() {
        let g = theta();
        let r = g.restrict(&[true, true], &[false, true, false]).unwrap();
        assert_eq!(r.graph.edge_count(), 2);
        assert_eq!(r.graph.face_count(), 2);
        assert_eq!(r.edge_map, vec![Some(0), None, Some(1)]);
    }
}
