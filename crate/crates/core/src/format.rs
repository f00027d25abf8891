//! Line-oriented text formats for instances and solutions.
//!
//! An instance file:
//!
//! ```text
//! vertices 2
//! edge 0 0 1 1
//! edge 1 0 1 1
//! edge 2 0 1 2
//! rot 0 0 1 2
//! rot 1 2 1 0
//! outer 0 +
//! hole 1 0 -
//! hole 2 1 -
//! hole 3 0 +
//! demand 0 1 1 2
//! ```
//!
//! Rotations are clockwise. `outer` and `hole` name a face by an edge end on
//! its boundary: `+` traverses the edge from its first to its second listed
//! vertex. Hole numbers are 1-based and hole 3 is the outer face. `#` starts a
//! comment.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::cut::CutCertificate;
use crate::excess::Certificate;
use crate::graph::{edge_of, Dart, EmbeddedGraph};
use crate::instance::{Demand, Instance};
use crate::metric::MetricCertificate;
use crate::multiflow::{FlowPath, Multiflow};
use crate::normalize::BridgeViolation;
use crate::solver::{Infeasibility, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line: Some(line),
        message: message.into(),
    })
}

/// Tokens of one non-empty line, comments removed.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .or_else(|_| err(line, format!("expected {what}, found `{tok}`")))
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<(), ParseError> {
    if toks.len() != n {
        return err(line, format!("`{}` takes {} fields, found {}", toks[0], n - 1, toks.len() - 1));
    }
    Ok(())
}

fn dart(line: usize, edge: usize, sign: &str) -> Result<Dart, ParseError> {
    match sign {
        "+" => Ok(2 * edge),
        "-" => Ok(2 * edge + 1),
        _ => err(line, format!("expected + or -, found `{sign}`")),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut vertices: Option<(usize, usize)> = None;
    let mut edges: BTreeMap<usize, (usize, [usize; 2], i64)> = BTreeMap::new();
    let mut rots: BTreeMap<usize, (usize, Vec<usize>)> = BTreeMap::new();
    let mut outer: Option<(usize, usize, Dart)> = None;
    let mut holes: BTreeMap<usize, (usize, usize, Dart)> = BTreeMap::new();
    let mut demands: Vec<(usize, Demand)> = Vec::new();

    for (ln, toks) in lines(text) {
        match toks[0] {
            "vertices" => {
                arity(ln, &toks, 2)?;
                if vertices.is_some() {
                    return err(ln, "second `vertices` line");
                }
                vertices = Some((ln, num(ln, toks[1], "a vertex count")?));
            }
            "edge" => {
                arity(ln, &toks, 5)?;
                let id: usize = num(ln, toks[1], "an edge id")?;
                let u = num(ln, toks[2], "a vertex")?;
                let v = num(ln, toks[3], "a vertex")?;
                let cap: i64 = num(ln, toks[4], "a capacity")?;
                if edges.insert(id, (ln, [u, v], cap)).is_some() {
                    return err(ln, format!("edge {id} defined twice"));
                }
            }
            "rot" => {
                if toks.len() < 2 {
                    return err(ln, "`rot` needs a vertex");
                }
                let v: usize = num(ln, toks[1], "a vertex")?;
                let list = toks[2..]
                    .iter()
                    .map(|t| num(ln, t, "an edge id"))
                    .collect::<Result<Vec<usize>, _>>()?;
                if rots.insert(v, (ln, list)).is_some() {
                    return err(ln, format!("rotation of vertex {v} given twice"));
                }
            }
            "outer" => {
                arity(ln, &toks, 3)?;
                if outer.is_some() {
                    return err(ln, "second `outer` line");
                }
                let e = num(ln, toks[1], "an edge id")?;
                outer = Some((ln, e, dart(ln, e, toks[2])?));
            }
            "hole" => {
                arity(ln, &toks, 4)?;
                let k: usize = num(ln, toks[1], "a hole number")?;
                if !(1..=3).contains(&k) {
                    return err(ln, format!("hole number {k} outside 1..3"));
                }
                let e = num(ln, toks[2], "an edge id")?;
                if holes.insert(k, (ln, e, dart(ln, e, toks[3])?)).is_some() {
                    return err(ln, format!("hole {k} given twice"));
                }
            }
            "demand" => {
                arity(ln, &toks, 5)?;
                let s = num(ln, toks[1], "a vertex")?;
                let t = num(ln, toks[2], "a vertex")?;
                let h: usize = num(ln, toks[3], "a hole number")?;
                let value = num(ln, toks[4], "a demand value")?;
                if h == 0 {
                    return err(ln, "hole numbers start at 1");
                }
                demands.push((ln, Demand::new(s, t, h - 1, value)));
            }
            other => return err(ln, format!("unknown keyword `{other}`")),
        }
    }

    let Some((vline, n)) = vertices else {
        return Err(ParseError {
            line: None,
            message: "missing `vertices` line".into(),
        });
    };
    let m = edges.len();
    if let Some((&id, &(ln, _, _))) = edges.iter().find(|(&id, _)| id >= m) {
        return err(ln, format!("edge ids must be 0..{m}, found {id}"));
    }
    for (&id, &(ln, [u, v], cap)) in &edges {
        if u >= n || v >= n {
            return err(ln, format!("edge {id} has an endpoint outside 0..{n}"));
        }
        if cap < 0 {
            return err(ln, format!("edge {id} has negative capacity"));
        }
    }
    if let Some((&v, &(ln, _))) = rots.iter().find(|(&v, _)| v >= n) {
        return err(ln, format!("rotation for vertex {v} outside 0..{n}"));
    }
    if let Some(v) = (0..n).find(|v| !rots.contains_key(v)) {
        return err(vline, format!("vertex {v} has no `rot` line"));
    }
    let ends: Vec<[usize; 2]> = edges.values().map(|&(_, e, _)| e).collect();
    let capacity: Vec<i64> = edges.values().map(|&(_, _, c)| c).collect();
    let rotation: Vec<Vec<usize>> = rots.values().map(|(_, r)| r.clone()).collect();
    let g = EmbeddedGraph::new(n, ends, rotation).map_err(|e| ParseError {
        line: Some(vline),
        message: e.to_string(),
    })?;

    let Some((oline, oe, odart)) = outer else {
        return Err(ParseError {
            line: None,
            message: "missing `outer` line".into(),
        });
    };
    if oe >= m {
        return err(oline, format!("edge {oe} does not exist"));
    }
    let k = holes.len();
    if let Some((&h, &(ln, _, _))) = holes.iter().find(|(&h, _)| h > k) {
        return err(ln, format!("hole {h} given without hole {}", h - 1));
    }
    let mut hole_darts = Vec::new();
    for (&h, &(ln, e, d)) in &holes {
        if e >= m {
            return err(ln, format!("edge {e} does not exist"));
        }
        if h == 3 && g.face_of(d) != g.face_of(odart) {
            return err(ln, "hole 3 must be the outer face");
        }
        hole_darts.push(d);
    }
    for &(ln, d) in &demands {
        if d.hole >= k {
            return err(ln, format!("demand refers to hole {}, which is not declared", d.hole + 1));
        }
        if d.s >= n || d.t >= n {
            return err(ln, format!("demand endpoint outside 0..{n}"));
        }
        if d.value < 0 {
            return err(ln, "negative demand");
        }
    }
    let demands = demands.into_iter().map(|(_, d)| d).collect();
    Instance::new(g, odart, hole_darts, capacity, demands).map_err(|e| ParseError {
        line: None,
        message: e.to_string(),
    })
}

fn face_ref(g: &EmbeddedGraph, d: Dart) -> String {
    let first = g.face(g.face_of(d))[0];
    let sign = if first % 2 == 0 { '+' } else { '-' };
    format!("{} {sign}", edge_of(first))
}

/// Canonical text of an instance, in local ids.
pub fn print_instance(inst: &Instance) -> String {
    let g = inst.graph();
    let mut out = String::new();
    writeln!(out, "vertices {}", g.vertex_count()).unwrap();
    for e in 0..g.edge_count() {
        let [u, v] = g.ends(e);
        writeln!(out, "edge {e} {u} {v} {}", inst.capacity(e)).unwrap();
    }
    for v in 0..g.vertex_count() {
        write!(out, "rot {v}").unwrap();
        for e in g.rotation(v) {
            write!(out, " {e}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "outer {}", face_ref(g, inst.outer_dart())).unwrap();
    for (i, &d) in inst.hole_darts().iter().enumerate() {
        writeln!(out, "hole {} {}", i + 1, face_ref(g, d)).unwrap();
    }
    for d in inst.demands() {
        writeln!(out, "demand {} {} {} {}", d.s, d.t, d.hole + 1, d.value).unwrap();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Cut,
    Metric,
}

/// The certificate section of an INFEASIBLE solution file. Edges are labels,
/// holes 1-based as in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateText {
    pub kind: CertificateKind,
    pub cut_type: Option<u8>,
    pub bridge: Option<usize>,
    pub pairs: Vec<(usize, [usize; 2])>,
    pub quads: Vec<(usize, [usize; 4])>,
    pub capacity: i64,
    pub demand: i64,
    pub excess: i64,
}

impl CertificateText {
    pub fn from_infeasibility(inf: &Infeasibility) -> Self {
        match inf {
            Infeasibility::Excess(Certificate::Cut(c)) => Self::cut(c),
            Infeasibility::Excess(Certificate::Metric(m)) => Self::metric(m),
            Infeasibility::Bridge(b) => Self::bridge(b),
        }
    }

    fn cut(c: &CutCertificate) -> Self {
        CertificateText {
            kind: CertificateKind::Cut,
            cut_type: Some(c.kind),
            bridge: None,
            pairs: c.pairs.iter().map(|&(h, e, g)| (h + 1, [e, g])).collect(),
            quads: vec![],
            capacity: c.distance,
            demand: c.demand,
            excess: c.value(),
        }
    }

    fn metric(m: &MetricCertificate) -> Self {
        CertificateText {
            kind: CertificateKind::Metric,
            cut_type: None,
            bridge: None,
            pairs: vec![],
            quads: m.edges.iter().enumerate().map(|(h, q)| (h + 1, *q)).collect(),
            capacity: m.zeta,
            demand: m.demand,
            excess: m.value(),
        }
    }

    fn bridge(b: &BridgeViolation) -> Self {
        CertificateText {
            kind: CertificateKind::Cut,
            cut_type: None,
            bridge: Some(b.edge),
            pairs: vec![],
            quads: vec![],
            capacity: b.capacity,
            demand: b.demand,
            excess: b.excess(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionFile {
    Solved(Multiflow),
    Infeasible(CertificateText),
}

impl SolutionFile {
    pub fn from_verdict(v: &Verdict) -> Self {
        match v {
            Verdict::Solved(f) => SolutionFile::Solved(f.clone()),
            Verdict::Infeasible(inf) => SolutionFile::Infeasible(CertificateText::from_infeasibility(inf)),
        }
    }
}

pub fn print_solution(sol: &SolutionFile) -> String {
    let mut out = String::new();
    match sol {
        SolutionFile::Solved(flow) => {
            out.push_str("verdict SOLVED\n");
            for (p, w) in &flow.entries {
                write!(out, "path {w} {}", p.vertices[0]).unwrap();
                for (e, v) in p.edges.iter().zip(&p.vertices[1..]) {
                    write!(out, " {e} {v}").unwrap();
                }
                out.push('\n');
            }
        }
        SolutionFile::Infeasible(c) => {
            out.push_str("verdict INFEASIBLE\n");
            let kind = match c.kind {
                CertificateKind::Cut => "cut",
                CertificateKind::Metric => "metric",
            };
            writeln!(out, "certificate {kind}").unwrap();
            if let Some(t) = c.cut_type {
                writeln!(out, "type {t}").unwrap();
            }
            if let Some(e) = c.bridge {
                writeln!(out, "bridge {e}").unwrap();
            }
            for (h, [e, g]) in &c.pairs {
                writeln!(out, "pair {h} {e} {g}").unwrap();
            }
            for (h, q) in &c.quads {
                writeln!(out, "quad {h} {} {} {} {}", q[0], q[1], q[2], q[3]).unwrap();
            }
            writeln!(out, "capacity {}", c.capacity).unwrap();
            writeln!(out, "demand {}", c.demand).unwrap();
            writeln!(out, "excess {}", c.excess).unwrap();
        }
    }
    out
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, ParseError> {
    let mut it = lines(text);
    let Some((ln, toks)) = it.next() else {
        return Err(ParseError {
            line: None,
            message: "empty solution file".into(),
        });
    };
    if toks.len() != 2 || toks[0] != "verdict" {
        return err(ln, "expected `verdict SOLVED|INFEASIBLE`");
    }
    match toks[1] {
        "SOLVED" => {
            let mut flow = Multiflow::new();
            for (ln, toks) in it {
                if toks[0] != "path" || toks.len() < 3 || toks.len() % 2 == 0 {
                    return err(ln, "expected `path <weight> v0 e1 v1 ...`");
                }
                let w: i64 = num(ln, toks[1], "a weight")?;
                let ids = toks[2..]
                    .iter()
                    .map(|t| num(ln, t, "an id"))
                    .collect::<Result<Vec<usize>, _>>()?;
                let path = FlowPath {
                    vertices: ids.iter().step_by(2).copied().collect(),
                    edges: ids.iter().skip(1).step_by(2).copied().collect(),
                };
                flow.push(path, w);
            }
            Ok(SolutionFile::Solved(flow))
        }
        "INFEASIBLE" => parse_certificate(it).map(SolutionFile::Infeasible),
        other => err(ln, format!("unknown verdict `{other}`")),
    }
}

fn parse_certificate<'a>(mut it: impl Iterator<Item = (usize, Vec<&'a str>)>) -> Result<CertificateText, ParseError> {
    let kind = match it.next() {
        Some((_, t)) if t == ["certificate", "cut"] => CertificateKind::Cut,
        Some((_, t)) if t == ["certificate", "metric"] => CertificateKind::Metric,
        Some((ln, _)) => return err(ln, "expected `certificate cut|metric`"),
        None => {
            return Err(ParseError {
                line: None,
                message: "missing certificate".into(),
            })
        }
    };
    let mut c = CertificateText {
        kind,
        cut_type: None,
        bridge: None,
        pairs: vec![],
        quads: vec![],
        capacity: 0,
        demand: 0,
        excess: 0,
    };
    let mut seen_excess = false;
    for (ln, toks) in it {
        let ints = toks[1..]
            .iter()
            .map(|t| num(ln, t, "an integer"))
            .collect::<Result<Vec<i64>, _>>()?;
        let ids = || ints.iter().map(|&x| x as usize).collect::<Vec<_>>();
        match (toks[0], ints.len()) {
            ("type", 1) => c.cut_type = Some(ints[0] as u8),
            ("bridge", 1) => c.bridge = Some(ints[0] as usize),
            ("pair", 3) => {
                let v = ids();
                c.pairs.push((v[0], [v[1], v[2]]));
            }
            ("quad", 5) => {
                let v = ids();
                c.quads.push((v[0], [v[1], v[2], v[3], v[4]]));
            }
            ("capacity", 1) => c.capacity = ints[0],
            ("demand", 1) => c.demand = ints[0],
            ("excess", 1) => {
                c.excess = ints[0];
                seen_excess = true;
            }
            _ => return err(ln, format!("unexpected certificate line `{}`", toks.join(" "))),
        }
    }
    if !seen_excess {
        return Err(ParseError {
            line: None,
            message: "certificate without `excess` line".into(),
        });
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const THETA: &str = "\
vertices 2
edge 0 0 1 1
edge 1 0 1 1
edge 2 0 1 2
rot 0 0 1 2
rot 1 2 1 0
outer 0 +
hole 1 0 -
hole 2 1 -
hole 3 0 +
demand 0 1 1 2
";

    #[test]
    fn theta_round_trip() {
        let inst = parse_instance(THETA).unwrap();
        assert_eq!(inst.hole_count(), 3);
        assert!(inst.validate().is_valid());
        assert_eq!(print_instance(&inst), THETA);
    }

    #[test]
    fn comments_and_order_are_free() {
        let shuffled = "# theta\ndemand 0 1 1 2\nhole 3 2 -  # outer again\nvertices 2\n\
                        rot 1 2 1 0\nrot 0 0 1 2\nedge 2 0 1 2\nedge 1 0 1 1\nedge 0 0 1 1\n\
                        outer 2 -\nhole 2 2 +\nhole 1 1 +\n";
        let inst = parse_instance(shuffled).unwrap();
        assert_eq!(print_instance(&inst), THETA);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let missing_rot = THETA.replace("rot 1 2 1 0\n", "");
        let e = parse_instance(&missing_rot).unwrap_err();
        assert_eq!(e.line, Some(1));
        assert!(e.message.contains("vertex 1"), "{e}");

        let e = parse_instance(&THETA.replace("edge 2 0 1 2", "edge 2 0 1 x")).unwrap_err();
        assert_eq!(e.line, Some(4));

        let e = parse_instance(&THETA.replace("hole 3 0 +", "hole 3 0 -")).unwrap_err();
        assert_eq!(e.line, Some(10));
        assert!(e.message.contains("outer"));

        let e = parse_instance(&THETA.replace("demand 0 1 1 2", "demand 0 1 4 2")).unwrap_err();
        assert_eq!(e.line, Some(11));
    }

    #[test]
    fn solution_round_trip() {
        let mut f = Multiflow::new();
        f.push(FlowPath::single_edge(0, 0, 1), 1);
        f.push(FlowPath::single_edge(0, 1, 1), 1);
        let sol = SolutionFile::Solved(f);
        let text = print_solution(&sol);
        assert_eq!(text, "verdict SOLVED\npath 1 0 0 1\npath 1 0 1 1\n");
        assert_eq!(parse_solution(&text).unwrap(), sol);

        let cert = SolutionFile::Infeasible(CertificateText {
            kind: CertificateKind::Cut,
            cut_type: Some(3),
            bridge: None,
            pairs: vec![(1, [0, 1]), (2, [1, 2]), (3, [0, 2])],
            quads: vec![],
            capacity: 3,
            demand: 5,
            excess: -2,
        });
        let text = print_solution(&cert);
        assert_eq!(parse_solution(&text).unwrap(), cert);
        assert!(parse_solution("verdict MAYBE\n").is_err());
    }
}
