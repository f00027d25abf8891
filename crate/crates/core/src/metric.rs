//! Minimum excess over semi-regular (2,3)-metrics.
//!
//! A triple of boundary quadruples fixes the demand side `d(A)`; the capacity
//! side `zeta(A)` is the cheapest system of six dual paths whose ends are the
//! twelve quadruple terminals, two paths per pair of holes.
//!
//! Minimising `zeta(A) - d(A)` over all triples is done jointly with the path
//! matching. Each hole splits its four terminals into a pair sent to each of
//! the other two holes; the objective then becomes a cycle
//! `P01 - P10 - P12 - P21 - P20 - P02 - P01` over unordered position pairs,
//! solved by fixing `P01` and sweeping the other five.

use std::fmt;

use thiserror::Error;

use crate::cut::Scan;
use crate::ext::Ext;
use crate::graph::EdgeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("boundary of hole {hole} has {len} edges, above the quadruple cap of {cap}")]
    BoundaryTooLong { hole: usize, len: usize, cap: usize },
}

/// Boundary positions of the three quadruples, each in clockwise order.
pub type QuadrupleTriple = [[usize; 4]; 3];

/// A terminal: (hole, boundary position).
pub type Terminal = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricCertificate {
    pub positions: QuadrupleTriple,
    /// The same quadruples as boundary edges.
    pub edges: [[EdgeId; 4]; 3],
    pub zeta: i64,
    pub demand: i64,
    /// Six terminal pairs realising `zeta`.
    pub matching: Vec<(Terminal, Terminal)>,
}

impl MetricCertificate {
    pub fn value(&self) -> i64 {
        self.zeta - self.demand
    }
}

impl fmt::Display for MetricCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "metric excess {} = {} - {}", self.value(), self.zeta, self.demand)?;
        for (h, q) in self.edges.iter().enumerate() {
            write!(f, " [hole {h}: {},{},{},{}]", q[0], q[1], q[2], q[3])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricBound {
    pub value: Ext,
    pub certificate: Option<MetricCertificate>,
}

/// Cheapest admissible six-path system for a fixed quadruple triple.
pub fn zeta(scan: &Scan, a: &QuadrupleTriple) -> (Ext, Vec<(Terminal, Terminal)>) {
    // Slot subsets of size two, as bit masks over the four quadruple entries.
    const HALVES: [u8; 6] = [0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100];
    let slots = |mask: u8, hole: usize| -> [usize; 2] {
        let mut out = [0; 2];
        let mut k = 0;
        for s in 0..4 {
            if mask & (1 << s) != 0 {
                out[k] = a[hole][s];
                k += 1;
            }
        }
        out
    };
    let mut best = Ext::Infinite;
    let mut matching = Vec::new();
    // Hole 0 sends `m0` to hole 1, hole 1 sends `m1` to hole 2 and hole 2
    // sends `m2` to hole 0; complements go the other way round.
    for m0 in HALVES {
        for m1 in HALVES {
            for m2 in HALVES {
                let p01 = slots(m0, 0);
                let p02 = slots(!m0 & 0xf, 0);
                let p12 = slots(m1, 1);
                let p10 = slots(!m1 & 0xf, 1);
                let p20 = slots(m2, 2);
                let p21 = slots(!m2 & 0xf, 2);
                for twist in 0..8u8 {
                    let mut paths = Vec::with_capacity(6);
                    let mut join = |hi: usize, x: [usize; 2], hj: usize, y: [usize; 2], flip: bool| {
                        let y = if flip { [y[1], y[0]] } else { y };
                        paths.push(((hi, x[0]), (hj, y[0])));
                        paths.push(((hi, x[1]), (hj, y[1])));
                    };
                    join(0, p01, 1, p10, twist & 1 != 0);
                    join(1, p12, 2, p21, twist & 2 != 0);
                    join(2, p20, 0, p02, twist & 4 != 0);
                    debug_assert!((0..3).all(|h| {
                        let ends = paths.iter().filter(|(x, y)| x.0 == h || y.0 == h).count();
                        let within = paths.iter().filter(|(x, y)| x.0 == h && y.0 == h).count();
                        ends == 4 && within == 0
                    }));
                    let len = paths
                        .iter()
                        .fold(Ext::ZERO, |acc, &((i, p), (j, q))| acc + scan.dist.get(i, p, j, q));
                    if len < best {
                        best = len;
                        matching = paths;
                    }
                }
            }
        }
    }
    (best, matching)
}

/// Demand side of a quadruple triple.
pub fn triple_demand(scan: &Scan, a: &QuadrupleTriple) -> i64 {
    (0..3)
        .map(|h| scan.demand.quad(h, a[h]).expect("quadruple in clockwise order"))
        .sum()
}

/// `zeta(A) - d(A)`; negative values certify that no multiflow exists.
pub fn excess_tilde(scan: &Scan, a: &QuadrupleTriple) -> Ext {
    zeta(scan, a).0 - triple_demand(scan, a)
}

fn pairs(len: usize) -> Vec<(usize, usize)> {
    (0..len).flat_map(|p| (p..len).map(move |q| (p, q))).collect()
}

fn sorted4(x: (usize, usize), y: (usize, usize)) -> [usize; 4] {
    let mut q = [x.0, x.1, y.0, y.1];
    q.sort_unstable();
    q
}

/// Minimum of `excess_tilde` over all quadruple triples. Boundaries longer
/// than `max_quad` are refused rather than approximated.
pub fn mu_hat(scan: &Scan, max_quad: Option<usize>) -> Result<MetricBound, MetricError> {
    let holes = scan.dist.hole_count();
    for h in 0..holes {
        let len = scan.demand.boundary_len(h);
        if let Some(cap) = max_quad {
            if len > cap {
                return Err(MetricError::BoundaryTooLong { hole: h, len, cap });
            }
        }
    }
    if holes < 3 {
        return Ok(MetricBound {
            value: Ext::Infinite,
            certificate: None,
        });
    }
    // Work on runs of interchangeable positions: the demand side only sees
    // the run of each terminal, and every terminal ends exactly one path, so
    // its position inside the run can be chosen for that path alone.
    let cls: [Vec<Vec<usize>>; 3] = [0, 1, 2].map(|h| scan.demand.position_classes(h));
    let rep = |h: usize, k: usize| cls[h][k][0];
    let near = |i: usize, j: usize| -> Vec<Vec<(Ext, usize, usize)>> {
        cls[i]
            .iter()
            .map(|ci| {
                cls[j]
                    .iter()
                    .map(|cj| {
                        let mut best = (Ext::Infinite, ci[0], cj[0]);
                        for &p in ci {
                            for &q in cj {
                                let v = scan.dist.get(i, p, j, q);
                                if v < best.0 {
                                    best = (v, p, q);
                                }
                            }
                        }
                        best
                    })
                    .collect()
            })
            .collect()
    };
    let near = [near(0, 1), near(1, 2), near(2, 0)];
    let pr: [Vec<(usize, usize)>; 3] = [0, 1, 2].map(|h| pairs(cls[h].len()));
    let quad: [Vec<Vec<i64>>; 3] = [0, 1, 2].map(|h| {
        pr[h]
            .iter()
            .map(|&(x0, x1)| {
                pr[h]
                    .iter()
                    .map(|&(y0, y1)| scan.demand.quad(h, sorted4((rep(h, x0), rep(h, x1)), (rep(h, y0), rep(h, y1)))).unwrap())
                    .collect()
            })
            .collect()
    });
    // Cheaper of the two ways of joining run pair `x` of hole `i` to run
    // pair `y` of hole `i+1`, as the two joined position pairs.
    let joint = |i: usize, x: (usize, usize), y: (usize, usize)| -> (Ext, [(usize, usize); 2]) {
        let n = &near[i];
        let straight = n[x.0][y.0].0 + n[x.1][y.1].0;
        let crossed = n[x.0][y.1].0 + n[x.1][y.0].0;
        let ends = |a: (Ext, usize, usize)| (a.1, a.2);
        if straight <= crossed {
            (straight, [ends(n[x.0][y.0]), ends(n[x.1][y.1])])
        } else {
            (crossed, [ends(n[x.0][y.1]), ends(n[x.1][y.0])])
        }
    };
    let link = |i: usize| -> Vec<Vec<Ext>> {
        let j = (i + 1) % 3;
        pr[i].iter().map(|&x| pr[j].iter().map(|&y| joint(i, x, y).0).collect()).collect()
    };
    let (m01, m12, m20) = (link(0), link(1), link(2));

    // Sweep: relax `next[y] = min_x cur[x] + w(x, y)`, keeping argmins.
    fn sweep<W: Fn(usize, usize) -> Ext>(cur: &[Ext], n: usize, w: W, next: &mut Vec<(Ext, usize)>) {
        next.clear();
        next.resize(n, (Ext::Infinite, 0));
        for (x, &cx) in cur.iter().enumerate() {
            if !cx.is_finite() {
                continue;
            }
            for (y, slot) in next.iter_mut().enumerate() {
                let v = cx + w(x, y);
                if v < slot.0 {
                    *slot = (v, x);
                }
            }
        }
    }
    let values = |v: &[(Ext, usize)]| v.iter().map(|s| s.0).collect::<Vec<_>>();

    let mut best = Ext::Infinite;
    let mut arg = None;
    let (mut s12, mut s21, mut s20, mut s02) = (vec![], vec![], vec![], vec![]);
    for a in 0..pr[0].len() {
        sweep(&m01[a], pr[1].len(), |x, y| Ext::Finite(-quad[1][x][y]), &mut s12);
        sweep(&values(&s12), pr[2].len(), |x, y| m12[x][y], &mut s21);
        sweep(&values(&s21), pr[2].len(), |x, y| Ext::Finite(-quad[2][x][y]), &mut s20);
        sweep(&values(&s20), pr[0].len(), |x, y| m20[x][y], &mut s02);
        for (f, &(v, _)) in s02.iter().enumerate() {
            let total = v - quad[0][f][a];
            if total < best {
                best = total;
                let e = s02[f].1;
                let d = s20[e].1;
                let c = s21[d].1;
                let b = s12[c].1;
                arg = Some([a, b, c, d, e, f]);
            }
        }
    }
    let Some([a, b, c, d, e, f]) = arg else {
        return Ok(MetricBound {
            value: Ext::Infinite,
            certificate: None,
        });
    };
    let [j01, j12, j20] = [joint(0, pr[0][a], pr[1][b]), joint(1, pr[1][c], pr[2][d]), joint(2, pr[2][e], pr[0][f])];
    let pick = |x: [(usize, usize); 2], y: [(usize, usize); 2]| sorted4((x[0].0, x[1].0), (y[0].1, y[1].1));
    let positions = [pick(j01.1, j20.1), pick(j12.1, j01.1), pick(j20.1, j12.1)];
    let (z, matching) = zeta(scan, &positions);
    let demand = triple_demand(scan, &positions);
    debug_assert_eq!(z - demand, best);
    let edges = [0, 1, 2].map(|h| positions[h].map(|p| scan.dual.boundaries[h].edges[p]));
    Ok(MetricBound {
        value: best,
        certificate: Some(MetricCertificate {
            positions,
            edges,
            zeta: z.finite().expect("finite minimiser"),
            demand,
            matching,
        }),
    })
}

/// Every clockwise quadruple of a boundary of length `len`, in canonical
/// (sorted) form.
pub fn quadruples(len: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for p1 in 0..len {
        for p2 in p1..len {
            for p3 in p2..len {
                for p4 in p3..len {
                    out.push([p1, p2, p3, p4]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cut::tests::Built;
    use crate::instance::tests::theta;

    /// Plain scan over all quadruple triples.
    pub(crate) fn mu_hat_naive(scan: &Scan) -> Ext {
        let q: Vec<Vec<[usize; 4]>> = (0..3).map(|h| quadruples(scan.demand.boundary_len(h))).collect();
        let mut best = Ext::Infinite;
        for a0 in &q[0] {
            for a1 in &q[1] {
                for a2 in &q[2] {
                    best = best.min(excess_tilde(scan, &[*a0, *a1, *a2]));
                }
            }
        }
        best
    }

    fn theta_triple(b: &Built) -> QuadrupleTriple {
        let p = |h: usize, e| b.dual.boundaries[h].position_of_edge(e).unwrap();
        let q = |h: usize, x, y| {
            let mut v = [p(h, x), p(h, x), p(h, y), p(h, y)];
            v.sort();
            v
        };
        [q(0, 0, 1), q(1, 1, 2), q(2, 2, 0)]
    }

    #[test]
    fn theta_zeta_uses_every_dual_edge_twice() {
        let b = Built::new(&theta([1, 1, 2], 2));
        let a = theta_triple(&b);
        let (z, m) = zeta(&b.scan(), &a);
        assert_eq!(z, Ext::Finite(8));
        assert_eq!(m.len(), 6);
        assert_eq!(triple_demand(&b.scan(), &a), 4);
        assert_eq!(excess_tilde(&b.scan(), &a), Ext::Finite(4));

        let b = Built::new(&theta([1, 1, 1], 5));
        assert_eq!(excess_tilde(&b.scan(), &theta_triple(&b)), Ext::Finite(-4));
    }

    #[test]
    fn zero_capacities_give_zero_zeta() {
        let b = Built::new(&theta([0, 0, 0], 0));
        assert_eq!(zeta(&b.scan(), &theta_triple(&b)).0, Ext::ZERO);
        // other triples of the theta graph need a path between disjoint dual edges
        assert_eq!(zeta(&b.scan(), &[[0; 4]; 3]).0, Ext::Infinite);
    }

    #[test]
    fn excess_is_invariant_under_rotation() {
        let b = Built::new(&theta([3, 1, 2], 4));
        let a = theta_triple(&b);
        let mut r = a;
        r[0].rotate_left(1);
        r[2].rotate_left(3);
        assert_eq!(excess_tilde(&b.scan(), &a), excess_tilde(&b.scan(), &r));
    }

    #[test]
    fn cycle_dp_matches_the_plain_scan_on_thetas() {
        for cap in [[1, 1, 2], [1, 1, 1], [2, 0, 4], [3, 5, 2]] {
            for d in [0, 1, 2, 3, 5, 8] {
                let b = Built::new(&theta(cap, d));
                let fast = mu_hat(&b.scan(), None).unwrap();
                assert_eq!(fast.value, mu_hat_naive(&b.scan()), "{cap:?} {d}");
                if let Some(c) = fast.certificate {
                    assert_eq!(Ext::Finite(c.value()), fast.value);
                }
            }
        }
    }

    #[test]
    fn cycle_dp_matches_the_plain_scan_on_generated_instances() {
        use crate::generate::{generate, GenParams};
        for seed in 0..12 {
            let p = GenParams {
                n: 6 + seed as usize % 3,
                hole_len: 3,
                outer_len: 4,
                demands: 2 + seed as usize % 3,
                ..GenParams::default()
            };
            let inst = generate(seed, &p).unwrap();
            let b = Built::new(&inst);
            let fast = mu_hat(&b.scan(), None).unwrap();
            assert_eq!(fast.value, mu_hat_naive(&b.scan()), "seed {seed}");
            if let Some(c) = fast.certificate {
                assert_eq!(Ext::Finite(c.value()), fast.value);
                assert_eq!(excess_tilde(&b.scan(), &c.positions), fast.value);
            }
        }
    }

    #[test]
    fn cap_is_a_hard_error() {
        let b = Built::new(&theta([1, 1, 2], 2));
        assert_eq!(
            mu_hat(&b.scan(), Some(1)),
            Err(MetricError::BoundaryTooLong { hole: 0, len: 2, cap: 1 })
        );
    }
}
