//! The `(e, st, eps)`-reduction, its maximal feasible `eps`, and the inverse
//! transformation of flows.
//!
//! For a boundary edge `e = uv` of hole `i` and a pair `st` of that hole with
//! `s, u, v, t` in this order around the boundary, the reduction lowers
//! `c(e)` and `d(st)` by `eps` and raises `d(su)` and `d(vt)` by `eps`. A flow
//! of the reduced problem turns back into one of the original by joining
//! `eps` units of `s-u` flow and `eps` units of `v-t` flow through `e`.

use thiserror::Error;

use crate::excess::{CheckOptions, Checker};
use crate::ext::Ext;
use crate::graph::{EdgeId, VertexId};
use crate::instance::{Demand, Instance};
use crate::metric::MetricError;
use crate::multiflow::{Multiflow, Shortfall};

/// An oriented choice of hole, boundary edge and demand pair (local ids).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub hole: usize,
    pub edge: EdgeId,
    pub s: VertexId,
    pub u: VertexId,
    pub v: VertexId,
    pub t: VertexId,
}

/// An applied reduction, in labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRecord {
    pub hole: usize,
    pub edge: usize,
    pub s: usize,
    pub u: usize,
    pub v: usize,
    pub t: usize,
    pub eps: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("eps {eps} outside [0, {max}]")]
    OutOfRange { eps: i64, max: i64 },
    #[error("edge {0} is not on the boundary of hole {1}")]
    NotOnBoundary(EdgeId, usize),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("reduction schedule produced eps {eps} < 0; the state was not solvable")]
    Negative { eps: i64 },
}

/// Orients the pair `{a, b}` against edge `e` of hole `hole`: walking the
/// boundary backwards from `u` (away from `v`) meets `s` before `t`.
pub fn orient(inst: &Instance, hole: usize, e: EdgeId, a: VertexId, b: VertexId) -> Result<Move, ReduceError> {
    let bc = inst.hole_boundary(hole);
    let p = bc.position_of_edge(e).ok_or(ReduceError::NotOnBoundary(e, hole))?;
    let len = bc.len();
    let u = bc.vertices[p];
    let v = bc.vertices[(p + 1) % len];
    let (s, t) = if a == u || b == v {
        (a, b)
    } else if b == u || a == v {
        (b, a)
    } else {
        let back = |x: VertexId| (p + len - bc.position_of_vertex(x).expect("pair on its hole")) % len;
        if back(a) <= back(b) {
            (a, b)
        } else {
            (b, a)
        }
    };
    Ok(Move { hole, edge: e, s, u, v, t })
}

pub fn demand_of(inst: &Instance, hole: usize, a: VertexId, b: VertexId) -> i64 {
    inst.demands()
        .iter()
        .filter(|d| d.hole == hole && d.connects(a, b))
        .map(|d| d.value)
        .sum()
}

/// Upper end of the range of `eps`: `min(c(e), d(st))`.
pub fn eps_cap(inst: &Instance, m: &Move) -> i64 {
    inst.capacity(m.edge).min(demand_of(inst, m.hole, m.s, m.t))
}

pub fn reduce(inst: &Instance, m: &Move, eps: i64) -> Result<Instance, ReduceError> {
    let max = eps_cap(inst, m);
    if eps < 0 || eps > max {
        return Err(ReduceError::OutOfRange { eps, max });
    }
    let mut capacity = inst.capacities().to_vec();
    capacity[m.edge] -= eps;
    let mut demands = inst.demands().to_vec();
    demands.push(Demand::new(m.s, m.t, m.hole, -eps));
    demands.push(Demand::new(m.s, m.u, m.hole, eps));
    demands.push(Demand::new(m.v, m.t, m.hole, eps));
    Ok(inst.with_values(capacity, demands))
}

pub fn record(inst: &Instance, m: &Move, eps: i64) -> ReductionRecord {
    let l = |x| inst.vertex_label(x);
    ReductionRecord {
        hole: m.hole,
        edge: inst.edge_label(m.edge),
        s: l(m.s),
        u: l(m.u),
        v: l(m.v),
        t: l(m.t),
        eps,
    }
}

/// Outcome of an eps search: the value and the (eps, excess) rounds tried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsSearch {
    pub eps: i64,
    pub rounds: Vec<(i64, Ext)>,
}

/// Minimum excess after reducing by `eps`; all four terms with three holes,
/// cut terms otherwise.
pub fn excess_after(inst: &Instance, m: &Move, eps: i64, opts: CheckOptions) -> Result<Ext, ReduceError> {
    let reduced = reduce(inst, m, eps)?;
    let checker = Checker::new(&reduced);
    if inst.hole_count() == 3 {
        Ok(checker.report(opts)?.min())
    } else {
        Ok(checker.cut_min_base().0)
    }
}

/// Largest feasible `eps` with three holes, in at most three checker rounds:
/// `eps1 = min(c(e), d(st))`, then `eps2 = eps1 + floor(n1 / 4)` and
/// `eps3 = eps2 + n2 / 2` while the minimum excess `n_k` stays negative.
pub fn max_feasible_eps(inst: &Instance, m: &Move, opts: CheckOptions) -> Result<EpsSearch, ReduceError> {
    let e1 = eps_cap(inst, m);
    let mut rounds = Vec::new();
    if e1 == 0 {
        return Ok(EpsSearch { eps: 0, rounds });
    }
    let n1 = excess_after(inst, m, e1, opts)?;
    rounds.push((e1, n1));
    let Ext::Finite(x1) = n1 else {
        return Ok(EpsSearch { eps: e1, rounds });
    };
    if x1 >= 0 {
        return Ok(EpsSearch { eps: e1, rounds });
    }
    let e2 = e1 + x1.div_euclid(4);
    if e2 < 0 {
        return Err(ReduceError::Negative { eps: e2 });
    }
    let n2 = excess_after(inst, m, e2, opts)?;
    rounds.push((e2, n2));
    let x2 = n2.finite().unwrap_or(0);
    if x2 >= 0 {
        return Ok(EpsSearch { eps: e2, rounds });
    }
    debug_assert!(x2 % 2 == 0, "odd excess {x2}");
    let e3 = e2 + x2 / 2;
    if e3 < 0 {
        return Err(ReduceError::Negative { eps: e3 });
    }
    Ok(EpsSearch { eps: e3, rounds })
}

/// Largest feasible `eps` with at most two holes, where only cuts matter and
/// every cut loses 0 or 2 per unit of `eps`: one correction step.
pub fn max_feasible_eps_base(inst: &Instance, m: &Move) -> Result<EpsSearch, ReduceError> {
    let e1 = eps_cap(inst, m);
    let mut rounds = Vec::new();
    if e1 == 0 {
        return Ok(EpsSearch { eps: 0, rounds });
    }
    let n1 = excess_after(inst, m, e1, CheckOptions::default())?;
    rounds.push((e1, n1));
    let x1 = n1.finite().unwrap_or(0);
    if x1 >= 0 {
        return Ok(EpsSearch { eps: e1, rounds });
    }
    debug_assert!(x1 % 2 == 0, "odd excess {x1}");
    let eps = e1 + x1 / 2;
    if eps < 0 {
        return Err(ReduceError::Negative { eps });
    }
    Ok(EpsSearch { eps, rounds })
}

/// Undoes `records` last-first on a flow of the final reduced state.
pub fn unwind(records: &[ReductionRecord], mut flow: Multiflow) -> Result<Multiflow, Shortfall> {
    for r in records.iter().rev() {
        flow = flow.join_through((r.s, r.u), r.edge, (r.v, r.t), r.eps)?;
    }
    Ok(flow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EmbeddedGraph;
    use crate::instance::tests::theta;
    use crate::multiflow::{check_admissible, FlowPath};

    #[test]
    fn theta_reduction_on_its_own_edge() {
        let inst = theta([1, 1, 2], 2);
        let m = orient(&inst, 0, 0, 1, 0).unwrap();
        assert_eq!((m.s, m.t), (m.u, m.v));
        let r = reduce(&inst, &m, 1).unwrap();
        assert_eq!(r.capacities(), &[0, 1, 2]);
        assert_eq!(r.demands().len(), 1);
        assert_eq!(r.demands()[0].value, 1);
        assert!(r.is_eulerian());
        assert_eq!(reduce(&inst, &m, 0).unwrap().demands(), inst.demands());
        assert!(reduce(&inst, &m, 2).is_err());
    }

    #[test]
    fn theta_first_eps_is_feasible() {
        let inst = theta([1, 1, 2], 2);
        let m = orient(&inst, 0, 0, 0, 1).unwrap();
        let s = max_feasible_eps(&inst, &m, CheckOptions::default()).unwrap();
        assert_eq!(s.eps, 1);
        assert_eq!(s.rounds.len(), 1);
    }

    fn octagon() -> (Instance, Move) {
        let n = 8;
        let ends: Vec<[usize; 2]> = (0..n).map(|k| [k, (k + 1) % n]).collect();
        let rotation = (0..n).map(|k| vec![k, (k + n - 1) % n]).collect();
        let g = EmbeddedGraph::new(n, ends, rotation).unwrap();
        let inst = Instance::new(g, 0, vec![0], vec![2; n], vec![Demand::new(1, 6, 0, 2)]).unwrap();
        let bc = inst.hole_boundary(0);
        // an edge strictly inside one of the two arcs between 1 and 6
        let e = bc.edges[(bc.position_of_vertex(6).unwrap() + 1) % n];
        let m = orient(&inst, 0, e, 1, 6).unwrap();
        (inst, m)
    }

    #[test]
    fn octagon_reduction_keeps_parity() {
        let (inst, m) = octagon();
        assert!(inst.is_eulerian());
        assert!(m.s != m.u && m.v != m.t);
        let r = reduce(&inst, &m, 2).unwrap();
        assert!(r.is_eulerian());
        assert_eq!(demand_of(&r, 0, m.s, m.t), 0);
        assert_eq!(demand_of(&r, 0, m.s, m.u), 2);
        assert_eq!(demand_of(&r, 0, m.v, m.t), 2);
    }

    #[test]
    fn unwind_restores_an_admissible_flow() {
        let (inst, m) = octagon();
        let r = reduce(&inst, &m, 2).unwrap();
        let bc = r.hole_boundary(0);
        // s-u and v-t forwards along the boundary avoid e
        let arc = |from: usize, to: usize| {
            let mut p = bc.position_of_vertex(from).unwrap();
            let mut path = FlowPath {
                vertices: vec![from],
                edges: vec![],
            };
            while bc.vertices[p] != to {
                path.edges.push(bc.edges[p]);
                p = (p + 1) % bc.len();
                path.vertices.push(bc.vertices[p]);
            }
            path
        };
        let mut f = Multiflow::new();
        f.push(arc(m.s, m.u), 2);
        f.push(arc(m.v, m.t), 2);
        assert!(check_admissible(&r, &f).is_admissible());
        let rec = record(&inst, &m, 2);
        let back = unwind(&[rec.clone()], f.clone()).unwrap();
        let rep = check_admissible(&inst, &back);
        assert!(rep.is_admissible(), "{rep:?}");
        assert_eq!(unwind(&[ReductionRecord { eps: 0, ..rec }], f.clone()).unwrap(), f);
    }
}
