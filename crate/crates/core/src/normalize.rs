//! Splitting an instance at bridges that lie on hole boundaries.
//!
//! A bridge `e = ab` on the boundary of hole `H` is the whole cut between its
//! two sides, so every pair of `H` it separates must route through it. Such a
//! pair `st` (s on a's side) is replaced by `sa` and `bt`; the two sides then
//! become independent instances and their flows are glued back through `e`.

use crate::graph::EdgeId;
use crate::instance::{Demand, Instance};
use crate::multiflow::{Multiflow, Shortfall};

/// One crossing pair rewritten at a bridge, in labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueRecord {
    pub s: usize,
    pub a: usize,
    pub edge: usize,
    pub b: usize,
    pub t: usize,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeViolation {
    /// Edge label of the bridge.
    pub edge: usize,
    pub capacity: i64,
    pub demand: i64,
}

impl BridgeViolation {
    pub fn excess(&self) -> i64 {
        self.capacity - self.demand
    }
}

#[derive(Debug, Clone, Default)]
pub struct Normalized {
    pub parts: Vec<Instance>,
    pub glue: Vec<GlueRecord>,
}

impl Normalized {
    /// Combines flows of the parts into a flow of the original instance.
    pub fn glue_flows(&self, mut flow: Multiflow) -> Result<Multiflow, Shortfall> {
        for r in self.glue.iter().rev() {
            flow = flow.join_through((r.s, r.a), r.edge, (r.b, r.t), r.value)?;
        }
        Ok(flow)
    }
}

/// Splits at hole-boundary bridges until every hole boundary is a cycle
/// without repeated edges.
pub fn normalize(inst: &Instance) -> Result<Normalized, BridgeViolation> {
    let mut out = Normalized::default();
    let mut stack = vec![inst.clone()];
    while let Some(cur) = stack.pop() {
        match cur.hole_isthmus() {
            None => out.parts.push(cur),
            Some(e) => {
                let (parts, glue) = split(&cur, e)?;
                out.glue.extend(glue);
                stack.extend(parts.into_iter().rev());
            }
        }
    }
    Ok(out)
}

fn split(inst: &Instance, e: EdgeId) -> Result<(Vec<Instance>, Vec<GlueRecord>), BridgeViolation> {
    let g = inst.graph();
    let (side_a, crossing) = inst.separated_by_bridge(e);
    let demand: i64 = crossing.iter().map(|&k| inst.demands()[k].value).sum();
    let capacity = inst.capacity(e);
    if capacity < demand {
        return Err(BridgeViolation {
            edge: inst.edge_label(e),
            capacity,
            demand,
        });
    }
    let [x, y] = g.ends(e);
    let (a, b) = if side_a[x] { (x, y) } else { (y, x) };
    let mut demands: Vec<Demand> = Vec::new();
    let mut glue = Vec::new();
    for (k, d) in inst.demands().iter().enumerate() {
        if !crossing.contains(&k) {
            demands.push(*d);
            continue;
        }
        let (s, t) = if side_a[d.s] { (d.s, d.t) } else { (d.t, d.s) };
        demands.push(Demand::new(s, a, d.hole, d.value));
        demands.push(Demand::new(b, t, d.hole, d.value));
        let l = |v| inst.vertex_label(v);
        glue.push(GlueRecord {
            s: l(s),
            a: l(a),
            edge: inst.edge_label(e),
            b: l(b),
            t: l(t),
            value: d.value,
        });
    }
    let rewritten = inst.with_values(inst.capacities().to_vec(), demands);
    let parts = rewritten
        .split_at_bridge(e)
        .expect("no demand crosses the bridge after rewriting");
    Ok((parts.into_iter().flatten().collect(), glue))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EmbeddedGraph;
    use crate::multiflow::{check_admissible, FlowPath};

    /// Two digons (vertices 0-1 and 2-3) joined by the bridge 1-2. Every
    /// face is a hole; the outer face carries a demand across the bridge.
    fn dumbbell(bridge: i64, across: i64) -> Instance {
        let ends = vec![[0, 1], [0, 1], [1, 2], [2, 3], [2, 3]];
        let rotation = vec![vec![0, 1], vec![1, 0, 2], vec![2, 3, 4], vec![4, 3]];
        let g = EmbeddedGraph::new(4, ends, rotation).unwrap();
        let outer = g.face_of(4);
        let inner: Vec<usize> = (0..g.face_count()).filter(|&f| f != outer).collect();
        assert_eq!(inner.len(), 2);
        let dart = |f| g.face(f)[0];
        let holes = vec![dart(inner[0]), dart(inner[1]), 4];
        Instance::new(g, 4, holes, vec![1, 1, bridge, 1, 1], vec![Demand::new(0, 3, 2, across)]).unwrap()
    }

    #[test]
    fn isthmus_free_is_unchanged() {
        let inst = crate::instance::tests::theta([1, 1, 2], 2);
        let n = normalize(&inst).unwrap();
        assert_eq!(n.parts.len(), 1);
        assert!(n.glue.is_empty());
    }

    #[test]
    fn bridge_splits_into_two_digons() {
        let inst = dumbbell(2, 2);
        assert!(inst.is_eulerian());
        let n = normalize(&inst).unwrap();
        assert_eq!(n.parts.len(), 2);
        assert_eq!(n.glue.len(), 1);
        for p in &n.parts {
            assert!(p.is_eulerian());
            assert_eq!(p.graph().edge_count(), 2);
            assert_eq!(p.total_demand(), 2);
            assert!(p.hole_isthmus().is_none());
        }
        // each digon routes its half-pair over both parallel edges
        let mut f = Multiflow::new();
        for (s, e, t) in [(0, 0, 1), (0, 1, 1), (2, 3, 3), (2, 4, 3)] {
            f.push(FlowPath::single_edge(s, e, t), 1);
        }
        let glued = n.glue_flows(f).unwrap();
        let r = check_admissible(&inst, &glued);
        assert!(r.is_admissible(), "{r:?}");
        assert_eq!(glued.entries.len(), 2);
    }

    #[test]
    fn overloaded_bridge_is_infeasible() {
        let v = normalize(&dumbbell(0, 2)).unwrap_err();
        assert_eq!((v.edge, v.capacity, v.demand, v.excess()), (2, 0, 2, -2));
    }
}
