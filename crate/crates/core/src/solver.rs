//! The solve loop: verify the conditions once, then reduce until no demand is
//! left, handling zero capacities, hole merges, withdrawn holes and new
//! bridges on the way, and finally unwind the reductions into a flow.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::cut::CutCertificate;
use crate::excess::{check, Certificate, CheckOptions};
use crate::instance::{Instance, TopologyEvent};
use crate::metric::{MetricCertificate, MetricError};
use crate::multiflow::{Multiflow, Shortfall};
use crate::normalize::{normalize, BridgeViolation};
use crate::reduction::{self, EpsSearch, Move, ReduceError, ReductionRecord};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub check: CheckOptions,
    /// Keep every (state, move, eps search) triple in the trace.
    pub record_states: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Infeasibility {
    /// Certificate with edges given by label.
    Excess(Certificate),
    Bridge(BridgeViolation),
}

impl Infeasibility {
    pub fn excess(&self) -> i64 {
        match self {
            Infeasibility::Excess(c) => c.value(),
            Infeasibility::Bridge(b) => b.excess(),
        }
    }
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::Excess(c) => c.fmt(f),
            Infeasibility::Bridge(b) => write!(
                f,
                "bridge {} excess {} = {} - {}",
                b.edge,
                b.excess(),
                b.capacity,
                b.demand
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Solved(Multiflow),
    Infeasible(Infeasibility),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Reduced { record: ReductionRecord, rounds: Vec<(i64, crate::Ext)> },
    Deleted { edge: usize, event: TopologyEvent },
    Withdrawn { hole: usize },
    Split { parts: usize },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Reduced { record: r, rounds } => {
                write!(
                    f,
                    "reduce hole {} edge {} pair {}-{} via {},{} eps {}",
                    r.hole, r.edge, r.s, r.t, r.u, r.v, r.eps
                )?;
                for (e, x) in rounds {
                    write!(f, " [eps {e}: excess {x}]")?;
                }
                Ok(())
            }
            TraceEvent::Deleted { edge, event } => write!(f, "delete edge {edge}: {event:?}"),
            TraceEvent::Withdrawn { hole } => write!(f, "withdraw hole {hole}"),
            TraceEvent::Split { parts } => write!(f, "split at bridges into {parts} parts"),
        }
    }
}

/// One eps query made by the loop, with the state it was made in.
#[derive(Debug, Clone)]
pub struct Step {
    pub state: Instance,
    pub mv: Move,
    pub search: EpsSearch,
}

#[derive(Debug, Clone, Default)]
pub struct SolveTrace {
    pub events: Vec<TraceEvent>,
    pub iterations: usize,
    pub steps: Vec<Step>,
    /// Oriented moves found exhausted, as (edge, s, u, t) labels, per sub-solve.
    pub exhausted: Vec<Vec<(usize, usize, usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("instance is not Eulerian at vertices {0:?}")]
    NotEulerian(Vec<usize>),
    #[error(transparent)]
    Cap(#[from] MetricError),
    #[error("internal: {0}")]
    Internal(String),
}

impl From<ReduceError> for SolveError {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::Metric(m) => SolveError::Cap(m),
            other => SolveError::Internal(other.to_string()),
        }
    }
}

impl From<Shortfall> for SolveError {
    fn from(e: Shortfall) -> Self {
        SolveError::Internal(format!("unwinding: {e}"))
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub verdict: Verdict,
    pub trace: SolveTrace,
}

fn relabel_cut(inst: &Instance, c: CutCertificate) -> CutCertificate {
    CutCertificate {
        pairs: c
            .pairs
            .iter()
            .map(|&(h, e, g)| (h, inst.edge_label(e), inst.edge_label(g)))
            .collect(),
        ..c
    }
}

fn relabel_metric(inst: &Instance, m: MetricCertificate) -> MetricCertificate {
    MetricCertificate {
        edges: m.edges.map(|q| q.map(|e| inst.edge_label(e))),
        ..m
    }
}

/// Certificate of `inst` with edges given by label.
pub fn relabel(inst: &Instance, c: Certificate) -> Certificate {
    match c {
        Certificate::Cut(c) => Certificate::Cut(relabel_cut(inst, c)),
        Certificate::Metric(m) => Certificate::Metric(relabel_metric(inst, m)),
    }
}

/// Decides solvability and, when solvable, builds an integer multiflow.
pub fn solve(inst: &Instance, opts: SolveOptions) -> Result<Outcome, SolveError> {
    let odd = inst.odd_vertices();
    if !odd.is_empty() {
        return Err(SolveError::NotEulerian(odd.iter().map(|&v| inst.vertex_label(v)).collect()));
    }
    let mut trace = SolveTrace::default();
    let mut norm = match normalize(inst) {
        Ok(n) => n,
        Err(b) => {
            return Ok(Outcome {
                verdict: Verdict::Infeasible(Infeasibility::Bridge(b)),
                trace,
            })
        }
    };
    if norm.parts.len() > 1 {
        trace.events.push(TraceEvent::Split { parts: norm.parts.len() });
    }
    for part in &norm.parts {
        let report = check(part, opts.check)?;
        if report.is_violated() {
            let cert = report.certificate().expect("violated report has a certificate");
            return Ok(Outcome {
                verdict: Verdict::Infeasible(Infeasibility::Excess(relabel(part, cert))),
                trace,
            });
        }
    }
    let mut flow = Multiflow::new();
    for part in std::mem::take(&mut norm.parts) {
        flow.extend(run(part, opts, &mut trace)?);
    }
    let flow = norm.glue_flows(flow)?.simplified();
    Ok(Outcome {
        verdict: Verdict::Solved(flow),
        trace,
    })
}

/// Solves an instance with at most two holes; only cut conditions matter.
pub fn solve_base(inst: &Instance, opts: SolveOptions) -> Result<Outcome, SolveError> {
    assert!(inst.hole_count() <= 2, "base solver takes at most two holes");
    solve(inst, opts)
}

/// Deletes zero-capacity edges that are not bridges, one at a time.
fn strip_zero_capacities(mut state: Instance, trace: &mut SolveTrace) -> Instance {
    while let Some(e) = (0..state.graph().edge_count())
        .find(|&e| state.capacity(e) == 0 && !state.graph().is_bridge(e))
    {
        let label = state.edge_label(e);
        let (next, event) = state.delete_edge(e).expect("zero-capacity non-bridge");
        trace.events.push(TraceEvent::Deleted { edge: label, event });
        state = next;
    }
    state
}

fn withdraw_idle_holes(mut state: Instance, trace: &mut SolveTrace) -> Instance {
    while let Some(h) = (0..state.hole_count()).find(|&h| state.demands_on(h).next().is_none()) {
        state = state.withdraw_hole(h).expect("hole without demands");
        trace.events.push(TraceEvent::Withdrawn { hole: h });
    }
    state
}

type Key = (usize, usize, usize, usize);

fn key(state: &Instance, m: &Move) -> Key {
    let l = |v| state.vertex_label(v);
    (state.edge_label(m.edge), l(m.s), l(m.u), l(m.t))
}

/// Next unexhausted move, scanning holes round-robin from `start`; within a
/// hole, edges and pairs in label order.
fn next_move(state: &Instance, start: usize, exhausted: &HashSet<Key>) -> Option<Move> {
    let k = state.hole_count();
    for h in (0..k).map(|x| (start + x) % k) {
        let bc = state.hole_boundary(h);
        let mut edges: Vec<_> = bc.edges.iter().copied().filter(|&e| state.capacity(e) > 0).collect();
        edges.sort_by_key(|&e| state.edge_label(e));
        let mut pairs: Vec<_> = state.demands_on(h).map(|d| (d.s, d.t)).collect();
        pairs.sort_by_key(|&(s, t)| {
            let (a, b) = (state.vertex_label(s), state.vertex_label(t));
            (a.min(b), a.max(b))
        });
        for &e in &edges {
            for &(s, t) in &pairs {
                let m = reduction::orient(state, h, e, s, t).expect("edge on its boundary");
                if !exhausted.contains(&key(state, &m)) {
                    return Some(m);
                }
            }
        }
    }
    None
}

/// The reduction loop on a solvable, Eulerian, bridge-normalized instance.
fn run(inst: Instance, opts: SolveOptions, trace: &mut SolveTrace) -> Result<Multiflow, SolveError> {
    let mut state = inst;
    let mut records: Vec<ReductionRecord> = Vec::new();
    let mut exhausted: HashSet<Key> = HashSet::new();
    let mut start = 0;
    let flow = loop {
        state = strip_zero_capacities(state, trace);
        if state.hole_isthmus().is_some() {
            let mut norm = normalize(&state)
                .map_err(|b| SolveError::Internal(format!("bridge {} overloaded mid-run", b.edge)))?;
            trace.events.push(TraceEvent::Split { parts: norm.parts.len() });
            let mut flow = Multiflow::new();
            for part in std::mem::take(&mut norm.parts) {
                flow.extend(run(part, opts, trace)?);
            }
            break norm.glue_flows(flow)?;
        }
        state = withdraw_idle_holes(state, trace);
        if state.demands().is_empty() {
            break Multiflow::new();
        }
        let Some(m) = next_move(&state, start, &exhausted) else {
            return Err(SolveError::Internal(format!(
                "no move left with {} holes and {} pairs",
                state.hole_count(),
                state.demands().len()
            )));
        };
        let search = if state.hole_count() == 3 {
            reduction::max_feasible_eps(&state, &m, opts.check)?
        } else {
            reduction::max_feasible_eps_base(&state, &m)?
        };
        trace.iterations += 1;
        exhausted.insert(key(&state, &m));
        if opts.record_states {
            trace.steps.push(Step {
                state: state.clone(),
                mv: m,
                search: search.clone(),
            });
        }
        start = (m.hole + 1) % state.hole_count();
        if search.eps > 0 {
            let record = reduction::record(&state, &m, search.eps);
            state = reduction::reduce(&state, &m, search.eps)?;
            trace.events.push(TraceEvent::Reduced {
                record: record.clone(),
                rounds: search.rounds,
            });
            records.push(record);
        }
    };
    let mut keys: Vec<Key> = exhausted.into_iter().collect();
    keys.sort();
    trace.exhausted.push(keys);
    Ok(reduction::unwind(&records, flow)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::tests::theta;
    use crate::multiflow::check_admissible;

    fn solved(inst: &Instance) -> Multiflow {
        match solve(inst, SolveOptions::default()).unwrap().verdict {
            Verdict::Solved(f) => f,
            v => panic!("expected a flow, got {v:?}"),
        }
    }

    #[test]
    fn theta_cases() {
        for (cap, d) in [([1, 1, 2], 2), ([1, 1, 1], 3)] {
            let inst = theta(cap, d);
            let f = solved(&inst);
            let r = check_admissible(&inst, &f);
            assert!(r.is_admissible(), "{cap:?} {d}: {r:?}");
            assert_eq!(f.total_weight(), d);
        }
        let out = solve(&theta([1, 1, 1], 5), SolveOptions::default()).unwrap();
        match out.verdict {
            Verdict::Infeasible(c) => assert_eq!(c.excess(), -2),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn empty_demands_give_empty_flow() {
        assert!(solved(&theta([2, 0, 2], 0)).entries.is_empty());
    }

    #[test]
    fn odd_instances_are_refused() {
        assert!(matches!(
            solve(&theta([1, 1, 1], 2), SolveOptions::default()),
            Err(SolveError::NotEulerian(_))
        ));
    }
}
