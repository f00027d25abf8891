//! Excess bounds for regular cuts of types 1, 2 and 3, read off the terminal
//! distances of the split dual.
//!
//! A type-1 set is cut out by one dual path between two terminals of the same
//! hole; types 2 and 3 by two or three paths between terminals of different
//! holes. All minimisations here are exact over the stated combinatorial
//! families; `nu2` and `nu3` run a cycle DP instead of the plain O(L^4) and
//! O(L^6) scans (which the tests keep as reference implementations).

use std::fmt;

use crate::dual::{DistanceTable, DualGraph};
use crate::ext::Ext;
use crate::graph::EdgeId;
use crate::instance::{BoundaryCycle, Instance};

/// Demand between boundary positions of each hole, as 2-D prefix sums.
#[derive(Debug, Clone)]
pub struct SeparatedDemandTable {
    holes: Vec<HoleTable>,
}

#[derive(Debug, Clone)]
struct HoleTable {
    len: usize,
    edge_pos: Vec<Option<usize>>,
    /// `prefix[a][b]` = sum of `m[x][y]` over `x < a`, `y < b`.
    prefix: Vec<Vec<i64>>,
}

/// A cyclic run of boundary positions `start, start+1, ...` of length `len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadError {
    #[error("edge {0} is not on the boundary of hole {1}")]
    NotOnBoundary(EdgeId, usize),
    #[error("positions {0:?} are not in clockwise order")]
    OutOfOrder([usize; 4]),
}

impl HoleTable {
    fn new(inst: &Instance, b: &BoundaryCycle) -> Self {
        let len = b.len();
        let mut m = vec![vec![0i64; len]; len];
        for d in inst.demands_on(b.hole) {
            let (Some(x), Some(y)) = (b.position_of_vertex(d.s), b.position_of_vertex(d.t)) else {
                panic!("demand endpoint off the boundary of hole {}", b.hole);
            };
            m[x][y] += d.value;
            m[y][x] += d.value;
        }
        let mut prefix = vec![vec![0i64; len + 1]; len + 1];
        for x in 0..len {
            for y in 0..len {
                prefix[x + 1][y + 1] = m[x][y] + prefix[x][y + 1] + prefix[x + 1][y] - prefix[x][y];
            }
        }
        let edge_pos = (0..inst.graph().edge_count()).map(|e| b.position_of_edge(e)).collect();
        HoleTable { len, edge_pos, prefix }
    }

    fn rect(&self, x0: usize, x1: usize, y0: usize, y1: usize) -> i64 {
        let p = &self.prefix;
        p[x1][y1] - p[x0][y1] - p[x1][y0] + p[x0][y0]
    }

    fn pieces(&self, s: Segment) -> [(usize, usize); 2] {
        let end = s.start + s.len;
        if end <= self.len {
            [(s.start, end), (0, 0)]
        } else {
            [(s.start, self.len), (0, end - self.len)]
        }
    }

    fn block(&self, a: Segment, b: Segment) -> i64 {
        let mut sum = 0;
        for (x0, x1) in self.pieces(a) {
            for (y0, y1) in self.pieces(b) {
                if x0 < x1 && y0 < y1 {
                    sum += self.rect(x0, x1, y0, y1);
                }
            }
        }
        sum
    }

    /// Vertex positions strictly after edge position `p`, up to and including
    /// the tail of edge position `q`.
    fn between(&self, p: usize, q: usize) -> Segment {
        Segment {
            start: (p + 1) % self.len,
            len: (q + self.len - p) % self.len,
        }
    }

    fn separated(&self, p: usize, q: usize) -> i64 {
        if p == q {
            return 0;
        }
        let inside = self.between(p, q);
        let outside = self.between(q, p);
        self.block(inside, outside)
    }

    fn quad(&self, pos: [usize; 4]) -> Result<i64, QuadError> {
        let mut seg = [0, 1, 2, 3].map(|q| self.between(pos[q], pos[(q + 1) % 4]));
        let total: usize = seg.iter().map(|s| s.len).sum();
        if total == 0 {
            seg[3].len = self.len;
        } else if total != self.len {
            return Err(QuadError::OutOfOrder(pos));
        }
        let mut d = 0;
        for q in 0..4 {
            d += self.block(seg[q], seg[(q + 1) % 4]);
        }
        d += 2 * (self.block(seg[0], seg[2]) + self.block(seg[1], seg[3]));
        Ok(d)
    }
}

impl SeparatedDemandTable {
    pub fn new(inst: &Instance, boundaries: &[BoundaryCycle]) -> Self {
        SeparatedDemandTable {
            holes: boundaries.iter().map(|b| HoleTable::new(inst, b)).collect(),
        }
    }

    /// Rebuilds the table of one hole after its demands changed.
    pub fn refresh_hole(&mut self, inst: &Instance, boundary: &BoundaryCycle) {
        self.holes[boundary.hole] = HoleTable::new(inst, boundary);
    }

    pub fn boundary_len(&self, hole: usize) -> usize {
        self.holes[hole].len
    }

    /// Boundary positions grouped into cyclic runs with no demand endpoint
    /// between neighbours. Positions of one run are interchangeable in every
    /// separated or quadruple demand. Each run starts at its first position
    /// in clockwise order.
    pub fn position_classes(&self, hole: usize) -> Vec<Vec<usize>> {
        let t = &self.holes[hole];
        let starts: Vec<usize> = (0..t.len).filter(|&x| t.rect(x, x + 1, 0, t.len) != 0).collect();
        let Some(&first) = starts.first() else {
            return vec![(0..t.len).collect()];
        };
        let mut out = Vec::with_capacity(starts.len());
        for (k, &a) in starts.iter().enumerate() {
            let b = starts.get(k + 1).copied().unwrap_or(first + t.len);
            out.push((a..b).map(|p| p % t.len).collect());
        }
        out
    }

    /// Demand of hole `hole` separated by removing the edges at positions `p`, `q`.
    #[inline]
    pub fn separated(&self, hole: usize, p: usize, q: usize) -> i64 {
        self.holes[hole].separated(p, q)
    }

    pub fn separated_edges(&self, hole: usize, e: EdgeId, g: EdgeId) -> Result<i64, QuadError> {
        let [p, q] = [e, g].map(|x| self.position(hole, x));
        Ok(self.separated(hole, p?, q?))
    }

    /// Quadruple demand: neighbouring segments once, opposite segments twice.
    /// Positions must be in clockwise cyclic order; repeats are allowed.
    pub fn quad(&self, hole: usize, pos: [usize; 4]) -> Result<i64, QuadError> {
        self.holes[hole].quad(pos)
    }

    pub fn quad_edges(&self, hole: usize, edges: [EdgeId; 4]) -> Result<i64, QuadError> {
        let mut pos = [0; 4];
        for (slot, e) in pos.iter_mut().zip(edges) {
            *slot = self.position(hole, e)?;
        }
        self.quad(hole, pos)
    }

    fn position(&self, hole: usize, e: EdgeId) -> Result<usize, QuadError> {
        self.holes[hole]
            .edge_pos
            .get(e)
            .copied()
            .flatten()
            .ok_or(QuadError::NotOnBoundary(e, hole))
    }
}

/// Minimiser of a cut bound: for each involved hole, the two boundary edges
/// the cut passes through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCertificate {
    pub kind: u8,
    /// (hole, e, g) per involved hole.
    pub pairs: Vec<(usize, EdgeId, EdgeId)>,
    pub distance: i64,
    pub demand: i64,
    /// `true` for the type-1 value, which is the exact minimum excess.
    pub exact: bool,
}

impl CutCertificate {
    pub fn value(&self) -> i64 {
        self.distance - self.demand
    }
}

impl fmt::Display for CutCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {} excess {} =", self.kind, self.value())?;
        write!(f, " {} - {}", self.distance, self.demand)?;
        for (h, e, g) in &self.pairs {
            write!(f, " [hole {h}: {e},{g}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutBound {
    pub value: Ext,
    pub certificate: Option<CutCertificate>,
}

impl CutBound {
    fn infinite() -> Self {
        CutBound {
            value: Ext::Infinite,
            certificate: None,
        }
    }

    /// The smaller of two bounds, keeping `self` on ties.
    fn or(self, other: CutBound) -> CutBound {
        if other.value < self.value {
            other
        } else {
            self
        }
    }
}

/// Shared inputs of the cut and metric scans.
pub struct Scan<'a> {
    pub dual: &'a DualGraph,
    pub dist: &'a DistanceTable,
    pub demand: &'a SeparatedDemandTable,
}

impl Scan<'_> {
    fn len(&self, hole: usize) -> usize {
        self.demand.boundary_len(hole)
    }

    fn edge(&self, hole: usize, pos: usize) -> EdgeId {
        self.dual.boundaries[hole].edges[pos]
    }

    fn certificate(&self, kind: u8, picks: &[(usize, usize, usize)], distance: Ext) -> CutCertificate {
        let demand = picks.iter().map(|&(h, p, q)| self.demand.separated(h, p, q)).sum();
        CutCertificate {
            kind,
            pairs: picks
                .iter()
                .map(|&(h, p, q)| (h, self.edge(h, p), self.edge(h, q)))
                .collect(),
            distance: distance.finite().expect("finite certificate"),
            demand,
            exact: kind == 1,
        }
    }
}

/// Exact minimum excess over regular sets of type 1.
pub fn mu1(scan: &Scan) -> CutBound {
    let mut best = CutBound::infinite();
    for h in 0..scan.dist.hole_count() {
        best = best.or(mu1_hole(scan, h));
    }
    best
}

fn mu1_hole(scan: &Scan, h: usize) -> CutBound {
    let mut best = CutBound::infinite();
    let l = scan.len(h);
    for p in 0..l {
        for q in p + 1..l {
            let dist = scan.dist.get(h, p, h, q);
            let v = dist - scan.demand.separated(h, p, q);
            if v < best.value {
                best = CutBound {
                    value: v,
                    certificate: Some(scan.certificate(1, &[(h, p, q)], dist)),
                };
            }
        }
    }
    best
}

/// Sum of independent bounds on disjoint sets of holes, reported as one
/// certificate of the given kind.
fn join(kind: u8, parts: &[&CutBound]) -> CutBound {
    let mut cert = CutCertificate {
        kind,
        pairs: Vec::new(),
        distance: 0,
        demand: 0,
        exact: false,
    };
    for part in parts {
        let Some(c) = &part.certificate else {
            return CutBound::infinite();
        };
        cert.pairs.extend_from_slice(&c.pairs);
        cert.distance += c.distance;
        cert.demand += c.demand;
    }
    cert.pairs.sort_unstable();
    CutBound {
        value: Ext::Finite(cert.value()),
        certificate: Some(cert),
    }
}

/// Lower bound on the minimum excess over regular sets of type 2.
///
/// Per pair of holes this is the better of two dual paths joining a terminal
/// pair of hole `i` to one of hole `j`, and two type-1 cuts at `i` and `j`.
/// When the two joining paths of an optimum cross, uncrossing them yields
/// either a type-2 set of no larger cut or two type-1 paths of no larger
/// total length, so the value is either exact or a sum of two type-1
/// excesses.
pub fn nu2(scan: &Scan) -> CutBound {
    let singles: Vec<CutBound> = (0..scan.dist.hole_count()).map(|h| mu1_hole(scan, h)).collect();
    let mut best = CutBound::infinite();
    let k = scan.dist.hole_count();
    for i in 0..k {
        for j in i + 1..k {
            best = best.or(nu2_holes(scan, &singles, i, j));
        }
    }
    best
}

fn nu2_holes(scan: &Scan, singles: &[CutBound], i: usize, j: usize) -> CutBound {
    nu2_pair(scan, i, j).or(join(2, &[&singles[i], &singles[j]]))
}

/// Cycle DP over `a_i - a_j - b_j - b_i - a_i` for one pair of holes.
fn nu2_pair(scan: &Scan, i: usize, j: usize) -> CutBound {
    let (li, lj) = (scan.len(i), scan.len(j));
    let mut best = Ext::Infinite;
    let mut arg = None;
    let mut via_bj = vec![(Ext::Infinite, 0usize); lj];
    let mut via_bi = vec![(Ext::Infinite, 0usize); li];
    for ai in 0..li {
        // g(bj) = min over aj != bj of dist(ai, aj) - sep_j(aj, bj)
        for (bj, slot) in via_bj.iter_mut().enumerate() {
            *slot = (Ext::Infinite, 0);
            for aj in 0..lj {
                if aj == bj {
                    continue;
                }
                let v = scan.dist.get(i, ai, j, aj) - scan.demand.separated(j, aj, bj);
                if v < slot.0 {
                    *slot = (v, aj);
                }
            }
        }
        // h(bi) = min over bj of g(bj) + dist(bj, bi)
        for (bi, slot) in via_bi.iter_mut().enumerate() {
            *slot = (Ext::Infinite, 0);
            for (bj, &(g, _)) in via_bj.iter().enumerate() {
                let v = g + scan.dist.get(j, bj, i, bi);
                if v < slot.0 {
                    *slot = (v, bj);
                }
            }
        }
        for (bi, &(h, bj)) in via_bi.iter().enumerate() {
            if bi == ai {
                continue;
            }
            let v = h - scan.demand.separated(i, ai, bi);
            if v < best {
                best = v;
                arg = Some((ai, via_bj[bj].1, bj, bi));
            }
        }
    }
    match arg {
        None => CutBound::infinite(),
        Some((ai, aj, bj, bi)) => {
            let dist = scan.dist.get(i, ai, j, aj) + scan.dist.get(i, bi, j, bj);
            let cert = scan.certificate(2, &[(i, ai.min(bi), ai.max(bi)), (j, aj.min(bj), aj.max(bj))], dist);
            debug_assert_eq!(Ext::Finite(cert.value()), best);
            CutBound {
                value: best,
                certificate: Some(cert),
            }
        }
    }
}

/// Lower bound on the minimum excess over regular sets of type 3.
///
/// The joining case takes three dual paths, one per pair of holes; the
/// alternatives are three type-1 cuts, or one type-1 cut plus a type-2 bound
/// on the other two holes, which is what crossing optimal paths uncross into.
pub fn nu3(scan: &Scan) -> CutBound {
    if scan.dist.hole_count() < 3 {
        return CutBound::infinite();
    }
    let singles: Vec<CutBound> = (0..3).map(|h| mu1_hole(scan, h)).collect();
    let mut best = nu3_joined(scan).or(join(3, &[&singles[0], &singles[1], &singles[2]]));
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let pair = nu2_holes(scan, &singles, j.min(k), j.max(k));
        best = best.or(join(3, &[&singles[i], &pair]));
    }
    best
}

/// Hole `h` sends its terminal `a_h` towards hole `h+1` and `b_h` towards
/// hole `h-1`; the objective is a cycle `a1 - b2 - a2 - b3 - a3 - b1 - a1`.
fn nu3_joined(scan: &Scan) -> CutBound {
    let l = [scan.len(0), scan.len(1), scan.len(2)];
    let d = scan.dist;
    let sep = |h: usize, p: usize, q: usize| scan.demand.separated(h, p, q);
    let mut best = Ext::Infinite;
    let mut arg = None;

    // Stage tables, each (value, argmin of the previous variable).
    let mut f_a2 = vec![(Ext::Infinite, 0usize); l[1]];
    let mut f_b3 = vec![(Ext::Infinite, 0usize); l[2]];
    let mut f_a3 = vec![(Ext::Infinite, 0usize); l[2]];
    let mut f_b1 = vec![(Ext::Infinite, 0usize); l[0]];
    for a1 in 0..l[0] {
        // a2 <- min over b2 != a2 of dist(a1, b2) - sep2(a2, b2)
        for (a2, slot) in f_a2.iter_mut().enumerate() {
            *slot = (Ext::Infinite, 0);
            for b2 in 0..l[1] {
                if b2 != a2 {
                    let v = d.get(0, a1, 1, b2) - sep(1, a2, b2);
                    if v < slot.0 {
                        *slot = (v, b2);
                    }
                }
            }
        }
        // b3 <- min over a2 of f(a2) + dist(a2, b3)
        for (b3, slot) in f_b3.iter_mut().enumerate() {
            *slot = (Ext::Infinite, 0);
            for (a2, &(v0, _)) in f_a2.iter().enumerate() {
                let v = v0 + d.get(1, a2, 2, b3);
                if v < slot.0 {
                    *slot = (v, a2);
                }
            }
        }
        // a3 <- min over b3 != a3 of f(b3) - sep3(a3, b3)
        for (a3, slot) in f_a3.iter_mut().enumerate() {
            *slot = (Ext::Infinite, 0);
            for (b3, &(v0, _)) in f_b3.iter().enumerate() {
                if b3 != a3 {
                    let v = v0 - sep(2, a3, b3);
                    if v < slot.0 {
                        *slot = (v, b3);
                    }
                }
            }
        }
        // b1 <- min over a3 of f(a3) + dist(a3, b1)
        for (b1, slot) in f_b1.iter_mut().enumerate() {
            *slot = (Ext::Infinite, 0);
            for (a3, &(v0, _)) in f_a3.iter().enumerate() {
                let v = v0 + d.get(2, a3, 0, b1);
                if v < slot.0 {
                    *slot = (v, a3);
                }
            }
        }
        for (b1, &(v0, a3)) in f_b1.iter().enumerate() {
            if b1 == a1 {
                continue;
            }
            let v = v0 - sep(0, a1, b1);
            if v < best {
                best = v;
                let b3 = f_a3[a3].1;
                let a2 = f_b3[b3].1;
                let b2 = f_a2[a2].1;
                arg = Some([a1, b1, a2, b2, a3, b3]);
            }
        }
    }
    let Some([a1, b1, a2, b2, a3, b3]) = arg else {
        return CutBound::infinite();
    };
    let dist = d.get(0, a1, 1, b2) + d.get(1, a2, 2, b3) + d.get(2, a3, 0, b1);
    let picks = [(0, a1.min(b1), a1.max(b1)), (1, a2.min(b2), a2.max(b2)), (2, a3.min(b3), a3.max(b3))];
    let cert = scan.certificate(3, &picks, dist);
    debug_assert_eq!(Ext::Finite(cert.value()), best);
    CutBound {
        value: best,
        certificate: Some(cert),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::instance::tests::theta;
    use crate::instance::Demand;

    pub(crate) struct Built {
        pub dual: DualGraph,
        pub dist: DistanceTable,
        pub demand: SeparatedDemandTable,
    }

    impl Built {
        pub fn new(inst: &Instance) -> Self {
            let dual = DualGraph::build(inst);
            let dist = dual.terminal_distances();
            let demand = SeparatedDemandTable::new(inst, &dual.boundaries);
            Built { dual, dist, demand }
        }

        pub fn scan(&self) -> Scan<'_> {
            Scan {
                dual: &self.dual,
                dist: &self.dist,
                demand: &self.demand,
            }
        }
    }

    /// Plain O(L^4) scan.
    pub(crate) fn nu2_naive(scan: &Scan) -> Ext {
        let mut best = Ext::Infinite;
        let k = scan.dist.hole_count();
        for i in 0..k {
            for j in i + 1..k {
                for p in 0..scan.len(i) {
                    for q in p + 1..scan.len(i) {
                        for r in 0..scan.len(j) {
                            for s in r + 1..scan.len(j) {
                                let straight = scan.dist.get(i, p, j, r) + scan.dist.get(i, q, j, s);
                                let crossed = scan.dist.get(i, p, j, s) + scan.dist.get(i, q, j, r);
                                let apart = scan.dist.get(i, p, i, q) + scan.dist.get(j, r, j, s);
                                let v = straight.min(crossed).min(apart)
                                    - scan.demand.separated(i, p, q)
                                    - scan.demand.separated(j, r, s);
                                best = best.min(v);
                            }
                        }
                    }
                }
            }
        }
        best
    }

    /// Plain O(L^6) scan over six-tuples and the eight endpoint assignments.
    pub(crate) fn nu3_naive(scan: &Scan) -> Ext {
        let d = scan.dist;
        let pairs = |h: usize| -> Vec<(usize, usize)> {
            let l = scan.len(h);
            (0..l).flat_map(|p| (p + 1..l).map(move |q| (p, q))).collect()
        };
        let mut best = Ext::Infinite;
        for &(p1, q1) in &pairs(0) {
            for &(p2, q2) in &pairs(1) {
                for &(p3, q3) in &pairs(2) {
                    let demand = scan.demand.separated(0, p1, q1)
                        + scan.demand.separated(1, p2, q2)
                        + scan.demand.separated(2, p3, q3);
                    let own = [d.get(0, p1, 0, q1), d.get(1, p2, 1, q2), d.get(2, p3, 2, q3)];
                    let ends = [(p1, q1), (p2, q2), (p3, q3)];
                    best = best.min(own[0] + own[1] + own[2] - demand);
                    for i in 0..3 {
                        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                        let ((pj, qj), (pk, qk)) = (ends[j], ends[k]);
                        let straight = d.get(j, pj, k, pk) + d.get(j, qj, k, qk);
                        let crossed = d.get(j, pj, k, qk) + d.get(j, qj, k, pk);
                        best = best.min(own[i] + straight.min(crossed) - demand);
                    }
                    for mask in 0..8 {
                        let (a1, b1) = if mask & 1 == 0 { (p1, q1) } else { (q1, p1) };
                        let (a2, b2) = if mask & 2 == 0 { (p2, q2) } else { (q2, p2) };
                        let (a3, b3) = if mask & 4 == 0 { (p3, q3) } else { (q3, p3) };
                        let v = d.get(0, a1, 1, b2) + d.get(1, a2, 2, b3) + d.get(2, a3, 0, b1);
                        best = best.min(v - demand);
                    }
                }
            }
        }
        best
    }

    /// Direct scan over demand pairs.
    fn separated_scan(inst: &Instance, b: &BoundaryCycle, p: usize, q: usize) -> i64 {
        let (lo, hi) = (p.min(q), p.max(q));
        let inside = |v| {
            let x = b.position_of_vertex(v).unwrap();
            lo < x && x <= hi
        };
        inst.demands_on(b.hole)
            .filter(|d| inside(d.s) != inside(d.t))
            .map(|d| d.value)
            .sum()
    }

    /// Segment index of each endpoint, then weight by cyclic segment distance.
    fn quad_scan(inst: &Instance, b: &BoundaryCycle, quad: [usize; 4]) -> i64 {
        let segment = |v| {
            let x = b.position_of_vertex(v).unwrap();
            (0..4)
                .find(|&q| {
                    let (lo, hi) = (quad[q], quad[(q + 1) % 4]);
                    if q < 3 {
                        lo < x && x <= hi
                    } else {
                        x > lo || x <= hi
                    }
                })
                .unwrap()
        };
        inst.demands_on(b.hole)
            .map(|d| {
                let gap = (segment(d.s) + 4 - segment(d.t)) % 4;
                d.value * [0, 1, 2, 1][gap]
            })
            .sum()
    }

    #[test]
    fn theta_has_no_type_one_sets() {
        let inst = theta([1, 1, 2], 2);
        let b = Built::new(&inst);
        assert_eq!(mu1(&b.scan()).value, Ext::Infinite);
        assert_eq!(b.demand.separated_edges(0, 0, 1), Ok(2));
        assert_eq!(b.demand.separated_edges(0, 1, 1), Ok(0));
        assert!(b.demand.separated_edges(0, 2, 1).is_err());
    }

    #[test]
    fn theta_bounds() {
        let inst = theta([1, 1, 2], 2);
        let b = Built::new(&inst);
        assert!(nu2(&b.scan()).value >= Ext::ZERO);
        assert!(nu3(&b.scan()).value >= Ext::ZERO);

        let b = Built::new(&theta([1, 1, 1], 5));
        let n3 = nu3(&b.scan());
        assert_eq!(n3.value, Ext::Finite(-2));
        let cert = n3.certificate.unwrap();
        assert_eq!((cert.distance, cert.demand), (3, 5));

        let b = Built::new(&theta([1, 1, 1], 3));
        assert_eq!(nu3(&b.scan()).value, Ext::Finite(0));
    }

    #[test]
    fn cycle_dp_agrees_with_plain_scan_on_thetas() {
        for cap in [[1, 1, 2], [2, 0, 4], [3, 5, 2]] {
            for d in [0, 2, 4, 6, 8] {
                let b = Built::new(&theta(cap, d));
                assert_eq!(nu2(&b.scan()).value, nu2_naive(&b.scan()), "{cap:?} {d}");
                assert_eq!(nu3(&b.scan()).value, nu3_naive(&b.scan()), "{cap:?} {d}");
            }
        }
    }

    #[test]
    fn cycle_dp_agrees_with_plain_scan_on_generated_instances() {
        use crate::generate::{generate, GenParams};
        for seed in 0..40 {
            let p = GenParams {
                n: 6 + seed as usize % 5,
                demands: 2 + seed as usize % 4,
                ..GenParams::default()
            };
            let b = Built::new(&generate(seed, &p).unwrap());
            assert_eq!(nu2(&b.scan()).value, nu2_naive(&b.scan()), "seed {seed}");
            assert_eq!(nu3(&b.scan()).value, nu3_naive(&b.scan()), "seed {seed}");
            for bound in [mu1(&b.scan()), nu2(&b.scan()), nu3(&b.scan())] {
                if let Some(c) = bound.certificate {
                    assert_eq!(Ext::Finite(c.value()), bound.value);
                }
            }
        }
    }

    #[test]
    fn position_classes_split_at_demand_endpoints() {
        let b = Built::new(&four_cycle(1));
        // the hole has endpoints at vertices 0 and 2
        let classes = b.demand.position_classes(0);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), 4);
        let b = Built::new(&theta([1, 1, 2], 0));
        assert_eq!(b.demand.position_classes(1), vec![vec![0, 1]]);
    }

    fn four_cycle(demand: i64) -> Instance {
        // the outer face is the only hole
        let g = crate::graph::EmbeddedGraph::new(
            4,
            vec![[0, 1], [1, 2], [2, 3], [3, 0]],
            vec![vec![0, 3], vec![1, 0], vec![2, 1], vec![3, 2]],
        )
        .unwrap();
        Instance::new(g, 1, vec![1], vec![1; 4], vec![Demand::new(0, 2, 0, demand)]).unwrap()
    }

    #[test]
    fn four_cycle_type_one() {
        for (d, want) in [(1, 1), (3, -1)] {
            let inst = four_cycle(d);
            let b = Built::new(&inst);
            assert_eq!(mu1(&b.scan()).value, Ext::Finite(want));
        }
    }

    #[test]
    fn quad_demand_on_a_two_gon() {
        let inst = theta([1, 1, 2], 2);
        let b = Built::new(&inst);
        assert_eq!(b.demand.quad_edges(0, [0, 0, 1, 1]), Ok(4));
        assert_eq!(b.demand.quad_edges(0, [1, 1, 1, 1]), Ok(0));
    }

    #[test]
    fn separated_matches_pair_scan_on_an_octagon() {
        let n = 8;
        let ends: Vec<[usize; 2]> = (0..n).map(|k| [k, (k + 1) % n]).collect();
        let rotation = (0..n).map(|k| vec![k, (k + n - 1) % n]).collect();
        let g = crate::graph::EmbeddedGraph::new(n, ends, rotation).unwrap();
        let demands = vec![
            Demand::new(0, 3, 0, 2),
            Demand::new(1, 6, 0, 4),
            Demand::new(2, 5, 0, 2),
            Demand::new(7, 4, 0, 6),
        ];
        let inst = Instance::new(g, 0, vec![1, 0], vec![2; n], demands).unwrap();
        let b = Built::new(&inst);
        let bc = &b.dual.boundaries[0];
        for p in 0..n {
            for q in 0..n {
                assert_eq!(b.demand.separated(0, p, q), separated_scan(&inst, bc, p, q));
            }
        }
        let l = n;
        for p1 in 0..l {
            for p2 in p1..l {
                for p3 in p2..l {
                    for p4 in p3..l {
                        let quad = [p1, p2, p3, p4];
                        assert_eq!(b.demand.quad(0, quad), Ok(quad_scan(&inst, bc, quad)), "{quad:?}");
                    }
                }
            }
        }
        assert!(b.demand.quad(0, [2, 0, 3, 1]).is_err());
    }
}
