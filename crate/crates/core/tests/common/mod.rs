//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orthopoly::gallery;
use orthopoly::geom::{q, Q};
use orthopoly::mesh::SurfaceMesh;
use orthopoly::reconstruct::{extract_combinatorial, solve_frames, CombinatorialPoly, CpEdge, CpIndex, DihedralLabel};

pub type IVec = [i64; 3];

fn cross(a: IVec, b: IVec) -> IVec {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn is_zero(a: IVec) -> bool {
    a == [0, 0, 0]
}

fn neg(a: IVec) -> IVec {
    [-a[0], -a[1], -a[2]]
}

const AXES: [IVec; 6] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];

/// Lengths scaled to integers by a common denominator.
fn integer_lengths(cp: &CombinatorialPoly) -> Vec<i64> {
    let denom = cp.edges.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.length.denom()));
    cp.edges
        .iter()
        .map(|e| (e.length.numer() * &denom / e.length.denom()).to_i64().expect("small lengths"))
        .collect()
}

/// Face normals of every frame, found by trying all `6^(F-1)` normal choices
/// with face 0 fixed to +Z. Edge directions follow from the normals; a choice
/// survives when directions exist, its first edge points along +X, no face
/// boundary reverses, every face turns once counterclockwise about its normal
/// and every face closes with the given lengths.
pub fn brute_force_normals(cp: &CombinatorialPoly) -> BTreeSet<Vec<IVec>> {
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (f, face) in cp.faces.iter().enumerate() {
        for k in 0..face.len() {
            owner.insert((face[k], face[(k + 1) % face.len()]), f);
        }
    }
    let lengths = integer_lengths(cp);
    let mut edge_info: HashMap<(usize, usize), (i64, i64)> = HashMap::new();
    for (e, l) in cp.edges.iter().zip(lengths) {
        edge_info.insert((e.u, e.v), (e.label.sign(), l));
        edge_info.insert((e.v, e.u), (e.label.sign(), l));
    }
    // Per face boundary: (neighbour face, label sign, length).
    let sides: Vec<Vec<(usize, i64, i64)>> = cp
        .faces
        .iter()
        .map(|face| {
            (0..face.len())
                .map(|k| {
                    let (a, b) = (face[k], face[(k + 1) % face.len()]);
                    let (s, l) = edge_info[&(a, b)];
                    (owner[&(b, a)], s, l)
                })
                .collect()
        })
        .collect();
    let n = cp.faces.len();
    let mut out = BTreeSet::new();
    let mut normals = vec![[0, 0, 1]; n];
    let mut dirs: Vec<IVec> = Vec::new();
    let total = 6usize.pow((n - 1) as u32);
    'outer: for code in 0..total {
        let mut c = code;
        for slot in normals.iter_mut().skip(1) {
            *slot = AXES[c % 6];
            c /= 6;
        }
        for (f, side) in sides.iter().enumerate() {
            dirs.clear();
            for &(g, s, _) in side {
                let d = cross(normals[f], normals[g]);
                if is_zero(d) {
                    continue 'outer;
                }
                dirs.push([s * d[0], s * d[1], s * d[2]]);
            }
            if f == 0 && dirs[0] != [1, 0, 0] {
                continue 'outer;
            }
            let m = side.len();
            let mut turns = 0;
            let mut sum = [0i64; 3];
            for k in 0..m {
                let (a, b) = (dirs[k], dirs[(k + 1) % m]);
                if b == neg(a) {
                    continue 'outer;
                }
                let t = cross(a, b);
                if t == normals[f] {
                    turns += 1;
                } else if t == neg(normals[f]) {
                    turns -= 1;
                }
                for i in 0..3 {
                    sum[i] += side[k].2 * a[i];
                }
            }
            if turns != 4 || sum != [0, 0, 0] {
                continue 'outer;
            }
        }
        out.insert(normals.clone());
    }
    out
}

/// Solver frames as normal lists; panics when a solver direction disagrees
/// with the direction forced by its normals.
pub fn solver_normals(cp: &CombinatorialPoly) -> BTreeSet<Vec<IVec>> {
    let idx = CpIndex::build(cp).expect("valid input");
    let mut out = BTreeSet::new();
    for fr in solve_frames(cp) {
        let normals: Vec<IVec> = fr.normals.iter().map(|a| axis_vec(a.index(), a.sign())).collect();
        for h in 0..idx.num_halfedges() {
            let d = fr.dirs[h];
            let (f, g) = (idx.face[h], idx.face[idx.twin[h]]);
            let s = cp.edges[idx.edge[h]].label.sign();
            let c = cross(normals[f], normals[g]);
            assert_eq!(axis_vec(d.index(), d.sign()), [s * c[0], s * c[1], s * c[2]], "solver direction at half-edge {h}");
        }
        out.insert(normals);
    }
    out
}

fn axis_vec(index: usize, sign: i64) -> IVec {
    let mut v = [0; 3];
    v[index] = sign;
    v
}

/// Abstract description of a mesh graph: outer rings as faces, lengths and
/// labels supplied by the caller.
pub fn graph_cp(mesh: &SurfaceMesh, length: impl Fn(usize) -> Q, label: impl Fn(usize) -> DihedralLabel) -> CombinatorialPoly {
    let edges = (0..mesh.num_edges())
        .map(|e| {
            let (u, v) = mesh.edge_endpoints(e);
            CpEdge { u, v, length: length(e), label: label(e) }
        })
        .collect();
    CombinatorialPoly {
        num_vertices: mesh.num_vertices(),
        edges,
        faces: mesh.faces().iter().map(|f| f.outer().to_vec()).collect(),
    }
}

pub fn flip(label: DihedralLabel) -> DihedralLabel {
    match label {
        DihedralLabel::Convex => DihedralLabel::Reflex,
        DihedralLabel::Reflex => DihedralLabel::Convex,
    }
}

/// Instances with at most eight faces: gallery shapes, every single-edge
/// label flip, seeded random labelings and perturbed lengths.
pub fn small_corpus() -> Vec<(String, CombinatorialPoly)> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for name in ["cube", "box_1x2x3", "l_prism"] {
        let cp = extract_combinatorial(&gallery::build(name).unwrap().mesh).unwrap();
        assert!(cp.faces.len() <= 8);
        for e in 0..cp.edges.len() {
            let mut c = cp.clone();
            c.edges[e].label = flip(c.edges[e].label);
            out.push((format!("{name} flip {e}"), c));
        }
        for k in 0..6 {
            let mut c = cp.clone();
            for e in &mut c.edges {
                if rng.gen_bool(0.5) {
                    e.label = flip(e.label);
                }
            }
            out.push((format!("{name} random labels {k}"), c));
        }
        for k in 0..3 {
            let mut c = cp.clone();
            let e = rng.gen_range(0..c.edges.len());
            c.edges[e].length = &c.edges[e].length + q(k + 1);
            out.push((format!("{name} stretched edge {e}"), c));
        }
        out.push((format!("{name} all reflex"), cp.with_all_labels(DihedralLabel::Reflex)));
        out.push((name.to_string(), cp));
    }
    out
}

/// Faces in floating point for repeated point-in-solid queries.
type Ring = Vec<[f64; 3]>;

pub struct Solid {
    /// Normal and rings of each face.
    faces: Vec<([f64; 3], Vec<Ring>)>,
}

impl Solid {
    pub fn new(mesh: &SurfaceMesh) -> Self {
        let faces = (0..mesh.num_faces())
            .map(|f| {
                let rings = mesh.face(f).rings.iter().map(|r| r.iter().map(|&v| mesh.position(v).to_f64()).collect()).collect();
                (mesh.face_normal(f).to_f64(), rings)
            })
            .collect();
        Solid { faces }
    }

    /// Point-in-solid by ray parity.
    pub fn contains(&self, p: [f64; 3]) -> bool {
        let dir = [0.5773, 0.3128, 0.7541];
        let mut crossings = 0;
        for (n, rings) in &self.faces {
            let denom = n[0] * dir[0] + n[1] * dir[1] + n[2] * dir[2];
            if denom.abs() < 1e-12 {
                continue;
            }
            let v0 = rings[0][0];
            let t = (n[0] * (v0[0] - p[0]) + n[1] * (v0[1] - p[1]) + n[2] * (v0[2] - p[2])) / denom;
            if t <= 0.0 {
                continue;
            }
            let x = [p[0] + t * dir[0], p[1] + t * dir[1], p[2] + t * dir[2]];
            let drop = (0..3).max_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs())).unwrap();
            let (i, j) = ((drop + 1) % 3, (drop + 2) % 3);
            let mut parity = false;
            for ring in rings {
                for k in 0..ring.len() {
                    let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
                    if (a[j] > x[j]) != (b[j] > x[j]) {
                        let at = a[i] + (x[j] - a[j]) * (b[i] - a[i]) / (b[j] - a[j]);
                        if at > x[i] {
                            parity = !parity;
                        }
                    }
                }
            }
            if parity {
                crossings += 1;
            }
        }
        crossings % 2 == 1
    }
}

pub fn inside(mesh: &SurfaceMesh, p: [f64; 3]) -> bool {
    Solid::new(mesh).contains(p)
}

/// Interior dihedral angle at an edge, in quarter turns, from the fraction of
/// a small circle around the edge midpoint that lies inside the solid.
pub fn occupancy_quarters(mesh: &SurfaceMesh, solid: &Solid, edge: usize) -> Option<u8> {
    let (u, v) = mesh.edge_endpoints(edge);
    let (a, b) = (mesh.position(u).to_f64(), mesh.position(v).to_f64());
    let e = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0];
    let f = mesh.halfedge(mesh.edges()[edge].halfedges[0]).face;
    let n = mesh.face_normal(f).to_f64();
    let unit = |w: [f64; 3]| {
        let l = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        [w[0] / l, w[1] / l, w[2] / l]
    };
    let x = unit(n);
    let y = unit([e[1] * n[2] - e[2] * n[1], e[2] * n[0] - e[0] * n[2], e[0] * n[1] - e[1] * n[0]]);
    let r = 1e-3 * mesh.bounding_scale().max(1.0);
    let samples = 64;
    let mut hits = 0;
    for k in 0..samples {
        let t = (k as f64 + 0.5) / samples as f64 * std::f64::consts::TAU;
        let (c, s) = (t.cos() * r, t.sin() * r);
        let p = [m[0] + c * x[0] + s * y[0], m[1] + c * x[1] + s * y[1], m[2] + c * x[2] + s * y[2]];
        if solid.contains(p) {
            hits += 1;
        }
    }
    let quarters = (hits * 4) as f64 / samples as f64;
    (quarters.fract() == 0.0).then(|| quarters.to_u8()).flatten()
}
