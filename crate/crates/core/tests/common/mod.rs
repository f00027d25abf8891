#![allow(dead_code)]

use std::path::PathBuf;

use holeflow::format::parse_instance;
use holeflow::generate::{generate, GenError, GenParams, Target};
use holeflow::Instance;

pub struct Case {
    pub name: String,
    pub inst: Instance,
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture(name: &str) -> Instance {
    let text = std::fs::read_to_string(fixture_dir().join(name)).unwrap();
    parse_instance(&text).unwrap()
}

pub fn theta_fixtures() -> Vec<Case> {
    ["t0_112_d2.txt", "t0_111_d3.txt", "t0_111_d5.txt"]
        .iter()
        .map(|f| Case {
            name: f.to_string(),
            inst: fixture(f),
        })
        .collect()
}

const TARGETS: [Target; 4] = [Target::Any, Target::Solvable, Target::CutTight, Target::MetricViolating];

/// Like `generate`, falling back to an unconstrained instance when the
/// target is not reached.
pub fn generate_or_any(seed: u64, p: &GenParams) -> (Instance, bool) {
    match generate(seed, p) {
        Ok(inst) => (inst, true),
        Err(GenError::Unreachable { .. }) => (generate(seed, &GenParams { target: Target::Any, ..*p }).unwrap(), false),
        Err(e) => panic!("{e}"),
    }
}

/// Instances with at most ten vertices: the theta fixtures plus `count`
/// generated ones over mixed targets and sizes.
pub fn small_corpus(count: usize) -> Vec<Case> {
    let mut out = theta_fixtures();
    for i in 0..count {
        let target = TARGETS[i % 4];
        let p = GenParams {
            n: 4 + (i / 4) % 7,
            holes: 3,
            hole_len: 3 + i % 2,
            outer_len: 4,
            demands: 1 + i % 4,
            max_capacity: 3,
            max_demand: 4,
            target,
            retries: 60,
        };
        let (inst, hit) = generate_or_any(i as u64, &p);
        let tag = if hit { target.to_string() } else { format!("{target}->any") };
        out.push(Case {
            name: format!("gen seed={i} n={} {tag}", p.n),
            inst,
        });
    }
    out
}

/// Solvable instances between 12 and 200 vertices, judged by the checker.
pub fn large_corpus(count: usize) -> Vec<Case> {
    const SIZES: [usize; 8] = [12, 16, 24, 40, 60, 100, 150, 200];
    (0..count)
        .filter_map(|i| {
            let n = SIZES[i % SIZES.len()];
            let p = GenParams {
                n,
                holes: 3,
                hole_len: 4 + i % 3,
                outer_len: 6,
                demands: 2 + i % 5,
                max_capacity: 4,
                max_demand: 3,
                target: Target::Solvable,
                retries: 40,
            };
            let seed = 10_000 + i as u64;
            generate(seed, &p).ok().map(|inst| Case {
                name: format!("gen seed={seed} n={n} solvable"),
                inst,
            })
        })
        .collect()
}
