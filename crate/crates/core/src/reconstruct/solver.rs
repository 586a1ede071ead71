//! Backtracking search for axis frames.
//!
//! Variables are the normal of every face and the direction of every
//! half-edge, each a signed axis. The gauge fixes face 0's normal to +Z and
//! its first half-edge to +X. Propagation applies, until nothing changes:
//!
//! - twin half-edges point in opposite directions;
//! - two known normals across an edge force its direction, `u = s (n_f × n_g)`;
//! - a known normal and direction force the neighbour, `n_g = s (u × n_f)`;
//! - directions are perpendicular to their face normal;
//! - consecutive boundary directions never reverse;
//! - a completed boundary turns once counterclockwise about its normal;
//! - the known part of a face boundary can still close up (L1 bound), and a
//!   completed boundary closes exactly.
//!
//! `s` is +1 for convex and −1 for reflex edges.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{CombinatorialPoly, CpIndex};
use crate::geom::Axis;

/// Axis normal per face and axis direction per half-edge (indexed as in
/// [`CpIndex`]).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FrameAssignment {
    pub normals: Vec<Axis>,
    pub dirs: Vec<Axis>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Use edge lengths (partial and full face closure).
    pub closure: bool,
    /// Stop after this many solutions.
    pub limit: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { closure: true, limit: None }
    }
}

struct Problem<'a> {
    idx: &'a CpIndex,
    sign: Vec<i64>,
    /// Lengths scaled to integers by a common denominator.
    len: Vec<BigInt>,
    opts: SolveOptions,
}

#[derive(Clone)]
struct State {
    normals: Vec<Option<Axis>>,
    dirs: Vec<Option<Axis>>,
}

fn set(slot: &mut Option<Axis>, value: Axis, changed: &mut bool) -> bool {
    match *slot {
        Some(v) => v == value,
        None => {
            *slot = Some(value);
            *changed = true;
            true
        }
    }
}

impl<'a> Problem<'a> {
    fn new(cp: &CombinatorialPoly, idx: &'a CpIndex, opts: SolveOptions) -> Self {
        let denom = cp.edges.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.length.denom()));
        let scaled: Vec<BigInt> = cp.edges.iter().map(|e| (e.length.numer() * &denom) / e.length.denom()).collect();
        Problem {
            idx,
            sign: idx.edge.iter().map(|&e| cp.edges[e].label.sign()).collect(),
            len: idx.edge.iter().map(|&e| scaled[e].clone()).collect(),
            opts,
        }
    }

    fn propagate(&self, st: &mut State) -> bool {
        let idx = self.idx;
        loop {
            let mut changed = false;
            for h in 0..idx.num_halfedges() {
                let t = idx.twin[h];
                let (f, g) = (idx.face[h], idx.face[t]);
                if let Some(d) = st.dirs[h] {
                    if !set(&mut st.dirs[t], -d, &mut changed) {
                        return false;
                    }
                }
                if let (Some(nf), Some(ng)) = (st.normals[f], st.normals[g]) {
                    match nf.cross(ng) {
                        Some(c) => {
                            if !set(&mut st.dirs[h], self.sign[h] * c, &mut changed) {
                                return false;
                            }
                        }
                        None => return false,
                    }
                }
                if let (Some(nf), Some(d)) = (st.normals[f], st.dirs[h]) {
                    match d.cross(nf) {
                        Some(c) => {
                            if !set(&mut st.normals[g], self.sign[h] * c, &mut changed) {
                                return false;
                            }
                        }
                        None => return false,
                    }
                }
                if let (Some(a), Some(b)) = (st.dirs[h], st.dirs[idx.next(h)]) {
                    if b == -a {
                        return false;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let faces = 0..idx.face_start.len();
        faces.clone().all(|f| self.turning_ok(st, f)) && (!self.opts.closure || faces.into_iter().all(|f| self.closure_ok(st, f)))
    }

    /// A completed boundary makes four more left turns than right turns about
    /// its normal, so the face is counterclockwise seen from outside.
    fn turning_ok(&self, st: &State, f: usize) -> bool {
        let Some(n) = st.normals[f] else { return true };
        let mut quarter_turns = 0i64;
        for h in self.idx.face_halfedges(f) {
            let (Some(a), Some(b)) = (st.dirs[h], st.dirs[self.idx.next(h)]) else { return true };
            match a.cross(b) {
                Some(c) if c == n => quarter_turns += 1,
                Some(c) if c == -n => quarter_turns -= 1,
                _ => {}
            }
        }
        quarter_turns == 4
    }

    fn closure_ok(&self, st: &State, f: usize) -> bool {
        let mut sum = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        let mut open = BigInt::zero();
        let mut complete = true;
        for h in self.idx.face_halfedges(f) {
            match st.dirs[h] {
                Some(d) => {
                    if d.sign() > 0 {
                        sum[d.index()] += &self.len[h];
                    } else {
                        sum[d.index()] -= &self.len[h];
                    }
                }
                None => {
                    complete = false;
                    open += &self.len[h];
                }
            }
        }
        if complete {
            sum.iter().all(Zero::is_zero)
        } else {
            let l1: BigInt = sum.iter().map(|s| s.abs()).sum();
            l1 <= open
        }
    }

    fn branch_point(&self, st: &State) -> Option<(usize, Vec<Axis>)> {
        let idx = self.idx;
        for &f in &idx.face_order {
            let Some(nf) = st.normals[f] else { continue };
            for h in idx.face_halfedges(f) {
                if st.dirs[h].is_some() {
                    continue;
                }
                let prev = st.dirs[idx.prev(h)];
                let cands = Axis::ALL
                    .iter()
                    .copied()
                    .filter(|a| a.perpendicular(nf) && Some(-*a) != prev)
                    .collect();
                return Some((h, cands));
            }
        }
        None
    }

    fn search(&self, mut st: State, out: &mut Vec<FrameAssignment>) {
        if self.opts.limit.is_some_and(|l| out.len() >= l) || !self.propagate(&mut st) {
            return;
        }
        if let Some((h, cands)) = self.branch_point(&st) {
            for a in cands {
                let mut child = st.clone();
                child.dirs[h] = Some(a);
                self.search(child, out);
            }
            return;
        }
        if let Some(f) = st.normals.iter().position(Option::is_none) {
            // Unreachable on connected input; kept so the search stays total.
            for a in Axis::ALL {
                let mut child = st.clone();
                child.normals[f] = Some(a);
                self.search(child, out);
            }
            return;
        }
        let frame = FrameAssignment {
            normals: st.normals.iter().map(|n| n.expect("complete")).collect(),
            dirs: st.dirs.iter().map(|d| d.expect("complete")).collect(),
        };
        out.push(frame);
    }
}

/// All gauge-fixed frames passing every invariant including closure.
/// Returns an empty list for input that fails validation.
pub fn solve_frames(cp: &CombinatorialPoly) -> Vec<FrameAssignment> {
    match CpIndex::build(cp) {
        Ok(idx) => solve_frames_with(cp, &idx, SolveOptions::default()),
        Err(_) => Vec::new(),
    }
}

pub fn solve_frames_with(cp: &CombinatorialPoly, idx: &CpIndex, opts: SolveOptions) -> Vec<FrameAssignment> {
    let problem = Problem::new(cp, idx, opts);
    let mut st = State { normals: vec![None; cp.faces.len()], dirs: vec![None; idx.num_halfedges()] };
    st.normals[0] = Some(Axis::PosZ);
    st.dirs[idx.face_start[0]] = Some(Axis::PosX);
    let mut out = Vec::new();
    problem.search(st, &mut out);
    out.sort();
    out
}

impl FrameAssignment {
    /// Direction of the half-edge `a -> b`, if the faces use it.
    pub fn direction(&self, idx: &CpIndex, a: usize, b: usize) -> Option<Axis> {
        (0..idx.num_halfedges()).find(|&h| idx.from[h] == a && idx.to[h] == b).map(|h| self.dirs[h])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::test_support::cube_cp;
    use crate::reconstruct::DihedralLabel;

    #[test]
    fn cube_has_one_frame() {
        let cp = cube_cp(1, 2, 3);
        let frames = solve_frames(&cp);
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].normals[0], Axis::PosZ);
    }

    #[test]
    fn one_reflex_edge_kills_the_cube() {
        let mut cp = cube_cp(1, 1, 1);
        cp.edges[5].label = DihedralLabel::Reflex;
        assert!(solve_frames(&cp).is_empty());
    }

    #[test]
    fn all_reflex_cube_is_label_inconsistent_or_closes_inside_out() {
        let cp = cube_cp(1, 1, 1).with_all_labels(DihedralLabel::Reflex);
        let idx = CpIndex::build(&cp).unwrap();
        let open = solve_frames_with(&cp, &idx, SolveOptions { closure: false, limit: None });
        let closed = solve_frames(&cp);
        assert!(closed.len() <= open.len());
    }

    #[test]
    fn limit_stops_early() {
        let cp = cube_cp(1, 1, 1);
        let idx = CpIndex::build(&cp).unwrap();
        let got = solve_frames_with(&cp, &idx, SolveOptions { closure: true, limit: Some(1) });
        assert_eq!(got.len(), 1);
    }
}
