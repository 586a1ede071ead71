//! Reference solids and their property checklists.
//!
//! Three non-orthogonal solids have every dihedral angle equal to π/2 or
//! 3π/2:
//!
//! - `fig1_left`: a box with a square pit turned by 45° (disconnected graph);
//! - `fig1_middle`: a box carrying a 45° tower whose base corners split the
//!   top rim (connected, degree-5 vertices, π/4 facial angles);
//! - `fig1_right`: two stacked bars, the upper one turned by atan(3/4)
//!   (connected, genus 0, degrees 3 and 4, every face geometrically a
//!   quadrilateral).
//!
//! `fig1_right_ortho` is the same construction with the upper bar axis
//! aligned. It builds vertices in the same order, so the identity map is a
//! graph isomorphism between the two. Boxes, boxes with pits and L-prisms fill
//! out the orthogonal side.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angles::{angle_report, facial_angle_at, AngleTag};
use crate::geom::{q, qf, Mat3, Vec3, Q};
use crate::mesh::{ring_normal, Arithmetic, MeshError, SurfaceMesh};
use crate::orthotest::{is_orthogonal, theorem2_check};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GalleryError {
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("pit not contained in top face")]
    PitNotContained,
    #[error("pit pierces solid (depth must be less than the box height)")]
    PitPierces,
    #[error("degenerate arm: the cross-section is not an L")]
    DegenerateArm,
    #[error("unknown gallery entry `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

fn pt(x: &Q, y: &Q, z: &Q) -> Vec3 {
    Vec3::new(x.clone(), y.clone(), z.clone())
}

/// Collects faces given by coordinates, assigning vertex ids in order of first
/// appearance and orienting each ring against a rough outward direction.
struct Builder {
    positions: Vec<Vec3>,
    ids: HashMap<Vec3, usize>,
    faces: Vec<Vec<Vec<usize>>>,
}

impl Builder {
    fn new() -> Self {
        Builder { positions: Vec::new(), ids: HashMap::new(), faces: Vec::new() }
    }

    fn id(&mut self, p: &Vec3) -> usize {
        if let Some(&i) = self.ids.get(p) {
            return i;
        }
        self.positions.push(p.clone());
        self.ids.insert(p.clone(), self.positions.len() - 1);
        self.positions.len() - 1
    }

    fn oriented(&mut self, ring: &[Vec3], outward: &Vec3, is_hole: bool) -> Vec<usize> {
        let mut ids: Vec<usize> = ring.iter().map(|p| self.id(p)).collect();
        let along = ring_normal(&self.positions, &ids).dot(outward);
        if along.is_negative() != is_hole {
            ids.reverse();
        }
        ids
    }

    fn face(&mut self, outer: &[Vec3], holes: &[Vec<Vec3>], outward: Vec3) {
        let mut rings = vec![self.oriented(outer, &outward, false)];
        for h in holes {
            rings.push(self.oriented(h, &outward, true));
        }
        self.faces.push(rings);
    }

    fn finish(self) -> Result<SurfaceMesh, GalleryError> {
        Ok(SurfaceMesh::new(self.positions, self.faces, Arithmetic::Exact)?)
    }
}

fn axis(i: usize, sign: i64) -> Vec3 {
    let mut v = Vec3::zero();
    v.0[i] = q(sign);
    v
}

/// Box walls except the top, for a box `[0,a]×[0,b]×[0,c]`.
fn box_sides(bd: &mut Builder, a: &Q, b: &Q, c: &Q, skip_back: bool) {
    let z = Q::zero();
    bd.face(&[pt(&z, &z, &z), pt(a, &z, &z), pt(a, b, &z), pt(&z, b, &z)], &[], axis(2, -1));
    bd.face(&[pt(&z, &z, &z), pt(a, &z, &z), pt(a, &z, c), pt(&z, &z, c)], &[], axis(1, -1));
    if !skip_back {
        bd.face(&[pt(&z, b, &z), pt(a, b, &z), pt(a, b, c), pt(&z, b, c)], &[], axis(1, 1));
    }
    bd.face(&[pt(&z, &z, &z), pt(&z, b, &z), pt(&z, b, c), pt(&z, &z, c)], &[], axis(0, -1));
    bd.face(&[pt(a, &z, &z), pt(a, b, &z), pt(a, b, c), pt(a, &z, c)], &[], axis(0, 1));
}

fn require_positive(v: &Q, what: &'static str) -> Result<(), GalleryError> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(GalleryError::NonPositive(what))
    }
}

/// Axis-aligned box `[0,a]×[0,b]×[0,c]`.
pub fn make_cube(a: &Q, b: &Q, c: &Q) -> Result<SurfaceMesh, GalleryError> {
    require_positive(a, "a")?;
    require_positive(b, "b")?;
    require_positive(c, "c")?;
    let mut bd = Builder::new();
    box_sides(&mut bd, a, b, c, false);
    let z = Q::zero();
    bd.face(&[pt(&z, &z, c), pt(a, &z, c), pt(a, b, c), pt(&z, b, c)], &[], axis(2, 1));
    bd.finish()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PitPlacement {
    /// Pit `[x0,x1]×[y0,y1]` strictly inside the top face.
    Interior { x0: Q, y0: Q, x1: Q, y1: Q },
    /// Pit `[x0,x1]×[y0,b]` running out through the back wall `y = b`.
    FlushBack { x0: Q, x1: Q, y0: Q },
}

/// Box `[0,a]×[0,b]×[0,c]` with a rectangular pit of the given depth sunk
/// into its top.
pub fn make_box_with_axis_pit(a: &Q, b: &Q, c: &Q, pit: &PitPlacement, depth: &Q) -> Result<SurfaceMesh, GalleryError> {
    require_positive(a, "a")?;
    require_positive(b, "b")?;
    require_positive(c, "c")?;
    require_positive(depth, "depth")?;
    if depth >= c {
        return Err(GalleryError::PitPierces);
    }
    let z = Q::zero();
    let floor = c - depth;
    let (x0, y0, x1, y1, flush) = match pit {
        PitPlacement::Interior { x0, y0, x1, y1 } => (x0, y0, x1, y1, false),
        PitPlacement::FlushBack { x0, x1, y0 } => (x0, y0, x1, b, true),
    };
    let inside = |lo: &Q, hi: &Q, max: &Q, open_hi: bool| &z < lo && lo < hi && (hi < max || (open_hi && hi == max));
    if !inside(x0, x1, a, false) || !inside(y0, y1, b, flush) {
        return Err(GalleryError::PitNotContained);
    }
    let mut bd = Builder::new();
    box_sides(&mut bd, a, b, c, flush);
    let top = |x: &Q, y: &Q| pt(x, y, c);
    let low = |x: &Q, y: &Q| pt(x, y, &floor);
    if flush {
        bd.face(
            &[top(&z, &z), top(a, &z), top(a, b), top(x1, b), top(x1, y0), top(x0, y0), top(x0, b), top(&z, b)],
            &[],
            axis(2, 1),
        );
        bd.face(
            &[pt(&z, b, &z), pt(a, b, &z), pt(a, b, c), top(x1, b), low(x1, b), low(x0, b), top(x0, b), pt(&z, b, c)],
            &[],
            axis(1, 1),
        );
    } else {
        bd.face(
            &[top(&z, &z), top(a, &z), top(a, b), top(&z, b)],
            &[vec![top(x0, y0), top(x1, y0), top(x1, y1), top(x0, y1)]],
            axis(2, 1),
        );
        bd.face(&[top(x0, y1), top(x1, y1), low(x1, y1), low(x0, y1)], &[], axis(1, -1));
    }
    bd.face(&[top(x0, y0), top(x0, y1), low(x0, y1), low(x0, y0)], &[], axis(0, 1));
    bd.face(&[top(x1, y0), top(x1, y1), low(x1, y1), low(x1, y0)], &[], axis(0, -1));
    bd.face(&[top(x0, y0), top(x1, y0), low(x1, y0), low(x0, y0)], &[], axis(1, 1));
    bd.face(&[low(x0, y0), low(x1, y0), low(x1, y1), low(x0, y1)], &[], axis(2, 1));
    bd.finish()
}

/// L-shaped prism: cross-section `[0,a]×[0,t] ∪ [0,s]×[0,b]` extruded to height `h`.
pub fn make_l_prism(a: &Q, b: &Q, s: &Q, t: &Q, h: &Q) -> Result<SurfaceMesh, GalleryError> {
    for (v, n) in [(a, "a"), (b, "b"), (s, "s"), (t, "t"), (h, "h")] {
        require_positive(v, n)?;
    }
    if s >= a || t >= b {
        return Err(GalleryError::DegenerateArm);
    }
    let z = Q::zero();
    let profile = [(&z, &z), (a, &z), (a, t), (s, t), (s, b), (&z, b)];
    let mut bd = Builder::new();
    let ring = |height: &Q| profile.iter().map(|(x, y)| pt(x, y, height)).collect::<Vec<_>>();
    bd.face(&ring(&z), &[], axis(2, -1));
    bd.face(&ring(h), &[], axis(2, 1));
    for k in 0..6 {
        let (p, r) = (profile[k], profile[(k + 1) % 6]);
        let d = (r.0 - p.0, r.1 - p.1);
        let outward = Vec3::new(d.1.clone(), -d.0.clone(), Q::zero());
        bd.face(&[pt(p.0, p.1, &z), pt(r.0, r.1, &z), pt(r.0, r.1, h), pt(p.0, p.1, h)], &[], outward);
    }
    bd.finish()
}

/// Box `[0,4]²×[0,2]` with a square pit of depth 1 turned by 45°, its corners
/// at `(2±1, 2)` and `(2, 2±1)`.
pub fn make_fig1_left() -> SurfaceMesh {
    let (z, one, two, three, four) = (q(0), q(1), q(2), q(3), q(4));
    let mut bd = Builder::new();
    box_sides(&mut bd, &four, &four, &two, false);
    let diamond = [(&one, &two), (&two, &one), (&three, &two), (&two, &three)];
    let rim: Vec<Vec3> = diamond.iter().map(|(x, y)| pt(x, y, &two)).collect();
    let floor: Vec<Vec3> = diamond.iter().map(|(x, y)| pt(x, y, &one)).collect();
    bd.face(&[pt(&z, &z, &two), pt(&four, &z, &two), pt(&four, &four, &two), pt(&z, &four, &two)], std::slice::from_ref(&rim), axis(2, 1));
    for k in 0..4 {
        let n = (k + 1) % 4;
        // Pit walls face the pit centre (2, 2).
        let mid = (&(diamond[k].0 + diamond[n].0) / q(2), &(diamond[k].1 + diamond[n].1) / q(2));
        let outward = Vec3::new(&two - &mid.0, &two - &mid.1, Q::zero());
        bd.face(&[rim[k].clone(), rim[n].clone(), floor[n].clone(), floor[k].clone()], &[], outward);
    }
    bd.face(&floor, &[], axis(2, 1));
    bd.finish().expect("fixed construction is valid")
}

/// Box `[0,4]²×[0,2]` with a tower on the 45° square through the top rim
/// midpoints, extruded to `z = 3`.
pub fn make_fig1_middle() -> SurfaceMesh {
    let (z, two, three, four) = (q(0), q(2), q(3), q(4));
    let mut bd = Builder::new();
    let c = &two;
    bd.face(&[pt(&z, &z, &z), pt(&four, &z, &z), pt(&four, &four, &z), pt(&z, &four, &z)], &[], axis(2, -1));
    // Side walls are pentagons: the rim midpoint is a straight corner.
    bd.face(&[pt(&z, &z, &z), pt(&four, &z, &z), pt(&four, &z, c), pt(&two, &z, c), pt(&z, &z, c)], &[], axis(1, -1));
    bd.face(&[pt(&four, &z, &z), pt(&four, &four, &z), pt(&four, &four, c), pt(&four, &two, c), pt(&four, &z, c)], &[], axis(0, 1));
    bd.face(&[pt(&four, &four, &z), pt(&z, &four, &z), pt(&z, &four, c), pt(&two, &four, c), pt(&four, &four, c)], &[], axis(1, 1));
    bd.face(&[pt(&z, &four, &z), pt(&z, &z, &z), pt(&z, &z, c), pt(&z, &two, c), pt(&z, &four, c)], &[], axis(0, -1));
    let mids = [(&two, &z), (&four, &two), (&two, &four), (&z, &two)];
    let corners = [(&four, &z), (&four, &four), (&z, &four), (&z, &z)];
    for k in 0..4 {
        let (m, n) = (mids[k], mids[(k + 1) % 4]);
        bd.face(&[pt(m.0, m.1, c), pt(corners[k].0, corners[k].1, c), pt(n.0, n.1, c)], &[], axis(2, 1));
        let outward = Vec3::new(m.0 + n.0 - q(4), m.1 + n.1 - q(4), Q::zero());
        bd.face(&[pt(m.0, m.1, c), pt(n.0, n.1, c), pt(n.0, n.1, &three), pt(m.0, m.1, &three)], &[], outward);
    }
    let top: Vec<Vec3> = mids.iter().map(|(x, y)| pt(x, y, &three)).collect();
    bd.face(&top, &[], axis(2, 1));
    bd.finish().expect("fixed construction is valid")
}

type P2 = (Q, Q);

fn cross_y(p: &P2, r: &P2, y: &Q) -> P2 {
    let t = (y - &p.1) / (&r.1 - &p.1);
    (&p.0 + (&r.0 - &p.0) * t, y.clone())
}

/// Bar `[0,6]×[2,4]×[0,1]` with a second bar of height 1 on top whose
/// footprint is the counterclockwise quad `[p0, p1, p2, p3]`; `p0, p1` lie
/// below `y = 2`, `p2, p3` above `y = 4`, and `p1→p2`, `p3→p0` are the long
/// sides crossing the lower bar.
fn crossed_bars(foot: [P2; 4]) -> Result<SurfaceMesh, GalleryError> {
    let (z, one, two, four, six) = (q(0), q(1), q(2), q(4), q(6));
    let [p0, p1, p2, p3] = foot;
    let a2 = cross_y(&p1, &p2, &two);
    let a4 = cross_y(&p1, &p2, &four);
    let b4 = cross_y(&p3, &p0, &four);
    let b2 = cross_y(&p3, &p0, &two);
    let at = |p: &P2, h: &Q| pt(&p.0, &p.1, h);
    let outward = |p: &P2, r: &P2| Vec3::new(&r.1 - &p.1, &p.0 - &r.0, Q::zero());
    let mut bd = Builder::new();
    bd.face(&[pt(&z, &two, &z), pt(&six, &two, &z), pt(&six, &four, &z), pt(&z, &four, &z)], &[], axis(2, -1));
    bd.face(
        &[pt(&z, &two, &z), pt(&six, &two, &z), pt(&six, &two, &one), at(&a2, &one), at(&b2, &one), pt(&z, &two, &one)],
        &[],
        axis(1, -1),
    );
    bd.face(
        &[pt(&z, &four, &z), pt(&z, &four, &one), at(&b4, &one), at(&a4, &one), pt(&six, &four, &one), pt(&six, &four, &z)],
        &[],
        axis(1, 1),
    );
    bd.face(&[pt(&z, &two, &z), pt(&z, &four, &z), pt(&z, &four, &one), pt(&z, &two, &one)], &[], axis(0, -1));
    bd.face(&[pt(&six, &two, &z), pt(&six, &four, &z), pt(&six, &four, &one), pt(&six, &two, &one)], &[], axis(0, 1));
    bd.face(&[pt(&z, &two, &one), at(&b2, &one), at(&b4, &one), pt(&z, &four, &one)], &[], axis(2, 1));
    bd.face(&[at(&a2, &one), pt(&six, &two, &one), pt(&six, &four, &one), at(&a4, &one)], &[], axis(2, 1));
    bd.face(&[at(&b2, &one), at(&p0, &one), at(&p1, &one), at(&a2, &one)], &[], axis(2, -1));
    bd.face(&[at(&b4, &one), at(&a4, &one), at(&p2, &one), at(&p3, &one)], &[], axis(2, -1));
    bd.face(
        &[at(&p1, &one), at(&a2, &one), at(&a4, &one), at(&p2, &one), at(&p2, &two), at(&p1, &two)],
        &[],
        outward(&p1, &p2),
    );
    bd.face(
        &[at(&p3, &one), at(&b4, &one), at(&b2, &one), at(&p0, &one), at(&p0, &two), at(&p3, &two)],
        &[],
        outward(&p3, &p0),
    );
    bd.face(&[at(&p0, &one), at(&p1, &one), at(&p1, &two), at(&p0, &two)], &[], outward(&p0, &p1));
    bd.face(&[at(&p2, &one), at(&p3, &one), at(&p3, &two), at(&p2, &two)], &[], outward(&p2, &p3));
    bd.face(&[at(&p0, &two), at(&p1, &two), at(&p2, &two), at(&p3, &two)], &[], axis(2, 1));
    bd.finish()
}

/// Crossed bars with the upper bar centred at `(3, 3)` and turned so its long
/// axis runs along `(-3/5, 4/5)`: footprint corners `(4,0)`, `(28/5,6/5)`,
/// `(2,6)`, `(2/5,24/5)`.
pub fn make_fig1_right() -> SurfaceMesh {
    crossed_bars([(q(4), q(0)), (qf(28, 5), qf(6, 5)), (q(2), q(6)), (qf(2, 5), qf(24, 5))])
        .expect("fixed construction is valid")
}

/// The axis-aligned twin of [`make_fig1_right`]: upper bar `[2,4]×[0,6]×[1,2]`.
pub fn make_fig1_right_ortho() -> SurfaceMesh {
    crossed_bars([(q(2), q(0)), (q(4), q(0)), (q(4), q(6)), (q(2), q(6))]).expect("fixed construction is valid")
}

/// Vertex map from `fig1_right` to `fig1_right_ortho` (old id -> new id).
pub fn fig1_right_isomorphism() -> Vec<usize> {
    (0..make_fig1_right().num_vertices()).collect()
}

/// True when `map` carries the edge set of `a` onto the edge set of `b`.
pub fn is_graph_isomorphism(a: &SurfaceMesh, b: &SurfaceMesh, map: &[usize]) -> bool {
    if map.len() != a.num_vertices() || a.num_vertices() != b.num_vertices() {
        return false;
    }
    let mut mapped: Vec<(usize, usize)> = a
        .edge_set()
        .iter()
        .map(|&(u, v)| (map[u].min(map[v]), map[u].max(map[v])))
        .collect();
    mapped.sort_unstable();
    mapped == b.edge_set()
}

/// Expected properties of a gallery mesh. Faces are counted by geometric
/// corners: ring corners whose facial angle is not π, summed over rings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checklist {
    pub components: usize,
    /// `None` where genus is undefined (faces with holes).
    pub genus: Option<Vec<u64>>,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub corner_histogram: BTreeMap<usize, usize>,
    pub dihedral_classes: BTreeSet<String>,
    pub facial_classes: BTreeSet<String>,
    pub orthogonal: bool,
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub params: String,
    pub mesh: SurfaceMesh,
    pub checklist: Checklist,
}

pub const NAMES: [&str; 9] = [
    "cube",
    "box_1x2x3",
    "l_prism",
    "box_with_pit",
    "box_with_flush_pit",
    "fig1_left",
    "fig1_middle",
    "fig1_right",
    "fig1_right_ortho",
];

fn hist(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    pairs.iter().copied().collect()
}

fn classes(tags: &[AngleTag]) -> BTreeSet<String> {
    tags.iter().map(|t| t.to_string()).collect()
}

const R1: AngleTag = AngleTag::RightMultiple(1);
const R2: AngleTag = AngleTag::RightMultiple(2);
const R3: AngleTag = AngleTag::RightMultiple(3);
const OTHER: AngleTag = AngleTag::NotRightMultiple;

pub fn build(name: &str) -> Result<GalleryEntry, GalleryError> {
    let box_check = |orth| Checklist {
        components: 1,
        genus: Some(vec![0]),
        degree_histogram: hist(&[(3, 8)]),
        corner_histogram: hist(&[(4, 6)]),
        dihedral_classes: classes(&[R1]),
        facial_classes: classes(&[R1]),
        orthogonal: orth,
    };
    let (mesh, params, checklist) = match name {
        "cube" => (make_cube(&q(1), &q(1), &q(1))?, "a=b=c=1".to_string(), box_check(true)),
        "box_1x2x3" => (make_cube(&q(1), &q(2), &q(3))?, "a=1 b=2 c=3".to_string(), box_check(true)),
        "l_prism" => (
            make_l_prism(&q(2), &q(2), &q(1), &q(1), &q(1))?,
            "a=2 b=2 s=1 t=1 h=1".to_string(),
            Checklist {
                components: 1,
                genus: Some(vec![0]),
                degree_histogram: hist(&[(3, 12)]),
                corner_histogram: hist(&[(4, 6), (6, 2)]),
                dihedral_classes: classes(&[R1, R3]),
                facial_classes: classes(&[R1, R3]),
                orthogonal: true,
            },
        ),
        "box_with_pit" => (
            make_box_with_axis_pit(
                &q(4),
                &q(4),
                &q(2),
                &PitPlacement::Interior { x0: q(1), y0: q(1), x1: q(3), y1: q(3) },
                &q(1),
            )?,
            "box 4x4x2, pit [1,3]x[1,3], depth 1".to_string(),
            Checklist {
                components: 2,
                genus: None,
                degree_histogram: hist(&[(3, 16)]),
                corner_histogram: hist(&[(4, 10), (8, 1)]),
                dihedral_classes: classes(&[R1, R3]),
                facial_classes: classes(&[R1, R3]),
                orthogonal: true,
            },
        ),
        "box_with_flush_pit" => (
            make_box_with_axis_pit(&q(4), &q(4), &q(2), &PitPlacement::FlushBack { x0: q(1), x1: q(3), y0: q(2) }, &q(1))?,
            "box 4x4x2, pit [1,3]x[2,4] open at y=4, depth 1".to_string(),
            Checklist {
                components: 1,
                genus: Some(vec![0]),
                degree_histogram: hist(&[(3, 16)]),
                corner_histogram: hist(&[(4, 8), (8, 2)]),
                dihedral_classes: classes(&[R1, R3]),
                facial_classes: classes(&[R1, R3]),
                orthogonal: true,
            },
        ),
        "fig1_left" => (
            make_fig1_left(),
            "box [0,4]^2x[0,2], 45-degree pit through (2±1,2),(2,2±1), depth 1".to_string(),
            Checklist {
                components: 2,
                genus: None,
                degree_histogram: hist(&[(3, 16)]),
                corner_histogram: hist(&[(4, 10), (8, 1)]),
                dihedral_classes: classes(&[R1, R3]),
                facial_classes: classes(&[R1, R3]),
                orthogonal: false,
            },
        ),
        "fig1_middle" => (
            make_fig1_middle(),
            "box [0,4]^2x[0,2], 45-degree tower on the rim midpoints up to z=3".to_string(),
            Checklist {
                components: 1,
                genus: Some(vec![0]),
                degree_histogram: hist(&[(3, 12), (5, 4)]),
                corner_histogram: hist(&[(3, 4), (4, 10)]),
                dihedral_classes: classes(&[R1, R3]),
                facial_classes: classes(&[R1, R2, OTHER]),
                orthogonal: false,
            },
        ),
        "fig1_right" | "fig1_right_ortho" => {
            let ortho = name == "fig1_right_ortho";
            let mesh = if ortho { make_fig1_right_ortho() } else { make_fig1_right() };
            let facial = if ortho { classes(&[R1, R2]) } else { classes(&[R1, R2, OTHER]) };
            let params = if ortho {
                "bars [0,6]x[2,4]x[0,1] and [2,4]x[0,6]x[1,2]"
            } else {
                "bars [0,6]x[2,4]x[0,1] and a 2x6x1 bar centred at (3,3) turned to (4/5,3/5)"
            };
            (
                mesh,
                params.to_string(),
                Checklist {
                    components: 1,
                    genus: Some(vec![0]),
                    degree_histogram: hist(&[(3, 16), (4, 4)]),
                    corner_histogram: hist(&[(4, 14)]),
                    dihedral_classes: classes(&[R1, R3]),
                    facial_classes: facial,
                    orthogonal: ortho,
                },
            )
        }
        other => return Err(GalleryError::Unknown(other.to_string())),
    };
    let name = NAMES.iter().copied().find(|n| *n == name).expect("matched above");
    Ok(GalleryEntry { name, params, mesh, checklist })
}

pub fn all_entries() -> Vec<GalleryEntry> {
    NAMES.iter().map(|n| build(n).expect("gallery entries build")).collect()
}

/// Measures the checklist quantities on a mesh.
pub fn measure(mesh: &SurfaceMesh) -> Result<Checklist, String> {
    let report = angle_report(mesh).map_err(|e| e.to_string())?;
    let mut degree_histogram = BTreeMap::new();
    for d in mesh.vertex_degrees() {
        *degree_histogram.entry(d).or_insert(0) += 1;
    }
    let mut corner_histogram = BTreeMap::new();
    for (f, face) in mesh.faces().iter().enumerate() {
        let mut corners = 0;
        for (r, ring) in face.rings.iter().enumerate() {
            for k in 0..ring.len() {
                let a = facial_angle_at(mesh, f, r, k).map_err(|e| e.to_string())?;
                if a.tag != R2 {
                    corners += 1;
                }
            }
        }
        *corner_histogram.entry(corners).or_insert(0) += 1;
    }
    Ok(Checklist {
        components: mesh.graph_components().count,
        genus: mesh.euler_genus().ok(),
        degree_histogram,
        corner_histogram,
        dihedral_classes: report.dihedral.iter().map(|r| r.angle.tag.to_string()).collect(),
        facial_classes: report.facial.iter().map(|r| r.angle.tag.to_string()).collect(),
        orthogonal: is_orthogonal(mesh).orthogonal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub property: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} (expected {})", self.property, self.actual, self.expected)
    }
}

fn show<T: fmt::Debug>(v: &T) -> String {
    format!("{v:?}")
}

/// Runs the checklist and reports every mismatch.
pub fn verify_entry(entry: &GalleryEntry) -> Result<(), Vec<Mismatch>> {
    let actual = match measure(&entry.mesh) {
        Ok(a) => a,
        Err(e) => {
            return Err(vec![Mismatch { property: "angles".into(), expected: "computable".into(), actual: e }]);
        }
    };
    let exp = &entry.checklist;
    let mut out = Vec::new();
    let mut cmp = |property: &str, e: String, a: String| {
        if e != a {
            out.push(Mismatch { property: property.into(), expected: e, actual: a });
        }
    };
    cmp("components", exp.components.to_string(), actual.components.to_string());
    cmp("genus", show(&exp.genus), show(&actual.genus));
    cmp("degrees", show(&exp.degree_histogram), show(&actual.degree_histogram));
    cmp("face corners", show(&exp.corner_histogram), show(&actual.corner_histogram));
    cmp("dihedral classes", show(&exp.dihedral_classes), show(&actual.dihedral_classes));
    cmp("facial classes", show(&exp.facial_classes), show(&actual.facial_classes));
    cmp("orthogonal", exp.orthogonal.to_string(), actual.orthogonal.to_string());
    cmp("theorem check", "true".into(), theorem2_check(&entry.mesh).to_string());
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// `n` rational rotations from integer quaternions drawn with a fixed seed.
pub fn seeded_rotations(n: usize, seed: u64) -> Vec<Mat3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let w: i64 = rng.gen_range(-6..=6);
        let x: i64 = rng.gen_range(-6..=6);
        let y: i64 = rng.gen_range(-6..=6);
        let z: i64 = rng.gen_range(-6..=6);
        // Skip the zero quaternion and signed-axis rotations.
        let nonzero = [w, x, y, z].iter().filter(|c| **c != 0).count();
        if nonzero >= 3 {
            out.push(Mat3::from_quaternion(w, x, y, z));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::save_offx;

    #[test]
    fn every_entry_matches_its_checklist() {
        for e in all_entries() {
            if let Err(m) = verify_entry(&e) {
                panic!("{}: {}", e.name, m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "));
            }
        }
    }

    #[test]
    fn builders_are_deterministic() {
        for n in NAMES {
            assert_eq!(save_offx(&build(n).unwrap().mesh), save_offx(&build(n).unwrap().mesh));
        }
    }

    #[test]
    fn negative_controls_name_the_failure() {
        let mut e = build("cube").unwrap();
        e.checklist.dihedral_classes = classes(&[R1, R3]);
        let m = verify_entry(&e).unwrap_err();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].property, "dihedral classes");

        let mut e = build("fig1_left").unwrap();
        e.checklist.components = 1;
        let m = verify_entry(&e).unwrap_err();
        assert_eq!(m[0].to_string(), "components = 2 (expected 1)");
    }

    #[test]
    fn builder_errors() {
        let pit = PitPlacement::Interior { x0: q(1), y0: q(1), x1: q(3), y1: q(3) };
        assert_eq!(make_box_with_axis_pit(&q(4), &q(4), &q(2), &pit, &q(2)).unwrap_err(), GalleryError::PitPierces);
        let wide = PitPlacement::Interior { x0: q(1), y0: q(1), x1: q(5), y1: q(3) };
        assert_eq!(make_box_with_axis_pit(&q(4), &q(4), &q(2), &wide, &q(1)).unwrap_err(), GalleryError::PitNotContained);
        assert_eq!(make_cube(&q(0), &q(1), &q(1)).unwrap_err(), GalleryError::NonPositive("a"));
        assert_eq!(make_l_prism(&q(1), &q(2), &q(1), &q(1), &q(1)).unwrap_err(), GalleryError::DegenerateArm);
        assert!(matches!(build("nonsuch"), Err(GalleryError::Unknown(_))));
    }

    #[test]
    fn right_twins_share_a_graph() {
        let (a, b) = (make_fig1_right(), make_fig1_right_ortho());
        assert!(is_graph_isomorphism(&a, &b, &fig1_right_isomorphism()));
        assert_eq!((a.num_vertices(), a.num_edges(), a.num_faces()), (20, 32, 14));
    }

    #[test]
    fn rotations_are_rational_rotations() {
        let rs = seeded_rotations(10, 7);
        assert_eq!(rs.len(), 10);
        assert!(rs.iter().all(Mat3::is_rotation));
        assert_eq!(rs, seeded_rotations(10, 7));
    }
}
