use holeflow::excess::{check, CheckOptions};
use holeflow::format::{parse_instance, print_instance, print_solution, SolutionFile};
use holeflow::generate::{generate, GenParams, Target};
use holeflow::solver::{solve, SolveOptions, Verdict};
use holeflow::Instance;
use serde::Serialize;
use wasm_bindgen::prelude::*;

// Barycentric sweeps for interior vertices. Plenty for the sizes a page can draw.
const SWEEPS: usize = 400;

#[derive(Serialize)]
pub struct Point {
    pub label: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Serialize)]
pub struct Segment {
    pub label: usize,
    pub u: usize,
    pub v: usize,
    pub capacity: i64,
}

#[derive(Serialize)]
pub struct Request {
    pub hole: usize,
    pub s: usize,
    pub t: usize,
    pub value: i64,
}

#[derive(Serialize)]
pub struct Ring {
    pub outer: bool,
    pub vertices: Vec<usize>,
}

#[derive(Serialize)]
pub struct Layout {
    pub vertices: Vec<Point>,
    pub edges: Vec<Segment>,
    /// Vertex indices around each hole, hole 1 first.
    pub holes: Vec<Ring>,
    pub demands: Vec<Request>,
}

#[derive(Serialize)]
pub struct Routed {
    pub value: i64,
    pub edges: Vec<usize>,
}

#[derive(Serialize)]
pub struct Solved {
    pub solved: bool,
    pub text: String,
    pub paths: Vec<Routed>,
}

fn load(text: &str) -> Result<Instance, String> {
    let inst = parse_instance(text).map_err(|e| e.to_string())?;
    if !inst.is_eulerian() {
        return Err("not Eulerian: capacity plus demand is odd at some vertex".into());
    }
    Ok(inst)
}

/// Unit-disc coordinates: outer boundary on the circle, every other vertex
/// at the mean of its neighbours.
pub fn place(inst: &Instance) -> Vec<(f64, f64)> {
    let g = inst.graph();
    let n = g.vertex_count();
    let mut rim = Vec::new();
    for &d in g.face(inst.outer_face()) {
        let v = g.tail(d);
        if !rim.contains(&v) {
            rim.push(v);
        }
    }
    let mut pos = vec![(0.0, 0.0); n];
    let mut fixed = vec![false; n];
    let k = rim.len().max(1) as f64;
    for (i, &v) in rim.iter().enumerate() {
        // A mirrored rim still gives a planar drawing, so the walk direction is irrelevant.
        let a = std::f64::consts::TAU * i as f64 / k;
        pos[v] = (a.cos(), a.sin());
        fixed[v] = true;
    }
    let mut nbrs = vec![Vec::new(); n];
    for &[u, v] in g.edges() {
        if u != v {
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
    }
    for _ in 0..SWEEPS {
        for v in 0..n {
            if fixed[v] || nbrs[v].is_empty() {
                continue;
            }
            let m = nbrs[v].len() as f64;
            let (sx, sy) = nbrs[v].iter().fold((0.0, 0.0), |(x, y), &w| (x + pos[w].0, y + pos[w].1));
            pos[v] = (sx / m, sy / m);
        }
    }
    pos
}

pub fn layout_of(text: &str) -> Result<Layout, String> {
    let inst = parse_instance(text).map_err(|e| e.to_string())?;
    let g = inst.graph();
    let vertices = place(&inst)
        .into_iter()
        .enumerate()
        .map(|(v, (x, y))| Point {
            label: inst.vertex_label(v),
            x,
            y,
        })
        .collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &[u, v])| Segment {
            label: inst.edge_label(e),
            u,
            v,
            capacity: inst.capacity(e),
        })
        .collect();
    let holes = (0..inst.hole_count())
        .map(|h| Ring {
            outer: inst.hole_face(h) == inst.outer_face(),
            vertices: inst.hole_boundary(h).vertices,
        })
        .collect();
    let demands = inst
        .demands()
        .iter()
        .map(|d| Request {
            hole: d.hole,
            s: d.s,
            t: d.t,
            value: d.value,
        })
        .collect();
    Ok(Layout {
        vertices,
        edges,
        holes,
        demands,
    })
}

pub fn check_text(text: &str) -> Result<String, String> {
    let inst = load(text)?;
    let report = check(&inst, CheckOptions::default()).map_err(|e| e.to_string())?;
    Ok(report.to_string())
}

pub fn solve_text(text: &str) -> Result<Solved, String> {
    let inst = load(text)?;
    let out = solve(&inst, SolveOptions::default()).map_err(|e| e.to_string())?;
    let text = print_solution(&SolutionFile::from_verdict(&out.verdict));
    Ok(match out.verdict {
        Verdict::Solved(flow) => Solved {
            solved: true,
            text,
            paths: flow
                .entries
                .into_iter()
                .map(|(p, value)| Routed {
                    value,
                    edges: p.edges.iter().filter_map(|&l| inst.edge_by_label(l)).collect(),
                })
                .collect(),
        },
        Verdict::Infeasible(_) => Solved {
            solved: false,
            text,
            paths: Vec::new(),
        },
    })
}

pub fn generate_text(seed: u64, n: usize, demands: usize, target: &str) -> Result<String, String> {
    let p = GenParams {
        n,
        demands,
        target: target.parse::<Target>()?,
        ..GenParams::default()
    };
    let inst = generate(seed, &p).map_err(|e| e.to_string())?;
    Ok(print_instance(&inst))
}

fn to_js(e: String) -> JsValue {
    JsValue::from_str(&e)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain structs serialize")
}

#[wasm_bindgen(js_name = check)]
pub fn check_js(text: &str) -> Result<String, JsValue> {
    check_text(text).map_err(to_js)
}

/// JSON: `{solved, text, paths: [{value, edges}]}`. Path edges index the
/// layout's edge list, not the file's labels.
#[wasm_bindgen(js_name = solve)]
pub fn solve_js(text: &str) -> Result<String, JsValue> {
    solve_text(text).map(|s| json(&s)).map_err(to_js)
}

#[wasm_bindgen(js_name = generate)]
pub fn generate_js(seed: u64, n: usize, demands: usize, target: &str) -> Result<String, JsValue> {
    generate_text(seed, n, demands, target).map_err(to_js)
}

#[wasm_bindgen(js_name = layout)]
pub fn layout_js(text: &str) -> Result<String, JsValue> {
    layout_of(text).map(|l| json(&l)).map_err(to_js)
}
