//! Closed polyhedral surfaces with exact coordinates.
//!
//! A [`SurfaceMesh`] stores vertex positions, faces made of one outer ring and
//! any number of hole rings, and a half-edge table with twin pairing. Every
//! constructor validates that the surface is a closed, consistently oriented
//! 2-manifold; [`SurfaceMesh::new`] additionally orients each shell outward.
//!
//! Ring convention: seen from the outward side, the outer ring runs
//! counterclockwise and hole rings run clockwise, so the face interior is
//! always to the left of a directed half-edge.

mod io;

pub use io::{load_auto, load_off, load_offx, save_off, save_offx, MeshFormat};

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::geom::{q, Mat3, Vec3, Q};

/// Arithmetic used for tolerance-sensitive predicates. Coordinates are always
/// stored as rationals; float mode only changes how comparisons are made.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize)]
pub enum Arithmetic {
    #[default]
    Exact,
    /// `epsilon` is the relative coplanarity tolerance, `angle_epsilon` the
    /// angle classification tolerance in radians.
    Float { epsilon: f64, angle_epsilon: f64 },
}

impl Arithmetic {
    pub const DEFAULT_EPSILON: f64 = 1e-9;
    pub const DEFAULT_ANGLE_EPSILON: f64 = 1e-7;

    pub fn float() -> Self {
        Arithmetic::Float { epsilon: Self::DEFAULT_EPSILON, angle_epsilon: Self::DEFAULT_ANGLE_EPSILON }
    }

    /// Float mode with both tolerances set to `eps`.
    pub fn float_with(eps: f64) -> Self {
        Arithmetic::Float { epsilon: eps, angle_epsilon: eps }
    }

    pub fn angle_epsilon(&self) -> f64 {
        match self {
            Arithmetic::Exact => 0.0,
            Arithmetic::Float { angle_epsilon, .. } => *angle_epsilon,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Arithmetic::Exact)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("face {face}: ring {ring} has fewer than 3 vertices")]
    RingTooShort { face: usize, ring: usize },
    #[error("face {face}: vertex index {vertex} out of range")]
    VertexOutOfRange { face: usize, vertex: usize },
    #[error("face {face}: repeated consecutive vertex {vertex}")]
    RepeatedVertex { face: usize, vertex: usize },
    #[error("zero-length edge between vertices {0} and {1}")]
    ZeroLengthEdge(usize, usize),
    #[error("non-manifold edge {0}-{1}")]
    NonManifoldEdge(usize, usize),
    #[error("open surface: edge {0}-{1} has only one incident face")]
    OpenSurface(usize, usize),
    #[error("vertex {0} is not used by any face")]
    IsolatedVertex(usize),
    #[error("face {0} is not planar")]
    NonPlanarFace(usize),
    #[error("face {0} has zero area")]
    DegenerateFace(usize),
    #[error("face {face}: hole ring {ring} is not oriented opposite to the outer ring")]
    InconsistentHole { face: usize, ring: usize },
    #[error("degenerate solid: signed volume is zero")]
    DegenerateSolid,
    #[error("face {0} has hole rings; use the OFFX writer")]
    HoleRingsPresent(usize),
    #[error("genus undefined without ring bridging (face {0} has hole rings)")]
    GenusUndefined(usize),
    #[error("Euler characteristic {chi} of surface component {component} does not give an integer genus")]
    NonIntegerGenus { component: usize, chi: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub origin: usize,
    pub face: usize,
    pub ring: usize,
    pub next: usize,
    pub prev: usize,
    pub twin: usize,
    pub edge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Vertex cycles; `rings[0]` is the outer ring.
    pub rings: Vec<Vec<usize>>,
    /// First half-edge of each ring.
    pub ring_halfedges: Vec<usize>,
}

impl Face {
    pub fn outer(&self) -> &[usize] {
        &self.rings[0]
    }

    pub fn is_simple(&self) -> bool {
        self.rings.len() == 1
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    /// `halfedges[0]` is the lower-index half-edge.
    pub halfedges: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Components {
    pub count: usize,
    /// Component label per vertex, numbered in order of lowest vertex id.
    pub labels: Vec<usize>,
}

impl Components {
    pub fn partition(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.count];
        for (v, &c) in self.labels.iter().enumerate() {
            parts[c].push(v);
        }
        parts
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceMesh {
    positions: Vec<Vec3>,
    faces: Vec<Face>,
    halfedges: Vec<HalfEdge>,
    edges: Vec<Edge>,
    mode: Arithmetic,
}

impl PartialEq for SurfaceMesh {
    fn eq(&self, other: &Self) -> bool {
        self.positions == other.positions && self.faces == other.faces
    }
}

impl SurfaceMesh {
    /// Validates and orients every shell outward.
    pub fn new(positions: Vec<Vec3>, rings: Vec<Vec<Vec<usize>>>, mode: Arithmetic) -> Result<Self, MeshError> {
        SurfaceMesh::from_rings(positions, rings, mode)?.outward_orient()
    }

    /// Validates without touching orientation.
    pub fn from_rings(positions: Vec<Vec3>, rings: Vec<Vec<Vec<usize>>>, mode: Arithmetic) -> Result<Self, MeshError> {
        let nv = positions.len();
        let mut halfedges = Vec::new();
        let mut faces = Vec::with_capacity(rings.len());
        let mut used = vec![false; nv];
        for (fi, face_rings) in rings.into_iter().enumerate() {
            if face_rings.is_empty() {
                return Err(MeshError::RingTooShort { face: fi, ring: 0 });
            }
            let mut ring_halfedges = Vec::with_capacity(face_rings.len());
            for (ri, ring) in face_rings.iter().enumerate() {
                if ring.len() < 3 {
                    return Err(MeshError::RingTooShort { face: fi, ring: ri });
                }
                let start = halfedges.len();
                ring_halfedges.push(start);
                let n = ring.len();
                for (k, &v) in ring.iter().enumerate() {
                    if v >= nv {
                        return Err(MeshError::VertexOutOfRange { face: fi, vertex: v });
                    }
                    let w = ring[(k + 1) % n];
                    if v == w {
                        return Err(MeshError::RepeatedVertex { face: fi, vertex: v });
                    }
                    if w < nv && positions[v] == positions[w] {
                        return Err(MeshError::ZeroLengthEdge(v, w));
                    }
                    used[v] = true;
                    halfedges.push(HalfEdge {
                        origin: v,
                        face: fi,
                        ring: ri,
                        next: start + (k + 1) % n,
                        prev: start + (k + n - 1) % n,
                        twin: usize::MAX,
                        edge: usize::MAX,
                    });
                }
            }
            faces.push(Face { rings: face_rings, ring_halfedges });
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(MeshError::IsolatedVertex(v));
        }

        let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(halfedges.len());
        for h in 0..halfedges.len() {
            let key = (halfedges[h].origin, halfedges[halfedges[h].next].origin);
            if directed.insert(key, h).is_some() {
                return Err(MeshError::NonManifoldEdge(key.0, key.1));
            }
        }
        let mut edges = Vec::with_capacity(halfedges.len() / 2);
        for h in 0..halfedges.len() {
            let (a, b) = (halfedges[h].origin, halfedges[halfedges[h].next].origin);
            let t = *directed.get(&(b, a)).ok_or(MeshError::OpenSurface(a, b))?;
            halfedges[h].twin = t;
            if h < t {
                let e = edges.len();
                edges.push(Edge { halfedges: [h, t] });
                halfedges[h].edge = e;
                halfedges[t].edge = e;
            }
        }

        let mesh = SurfaceMesh { positions, faces, halfedges, edges, mode };
        mesh.check_faces()?;
        Ok(mesh)
    }

    fn check_faces(&self) -> Result<(), MeshError> {
        for (fi, face) in self.faces.iter().enumerate() {
            let normal = ring_normal(&self.positions, face.outer());
            if normal.is_zero() {
                return Err(MeshError::DegenerateFace(fi));
            }
            let anchor = &self.positions[face.outer()[0]];
            for ring in &face.rings {
                for &v in ring {
                    let offset = &self.positions[v] - anchor;
                    if !self.coplanar(&normal, &offset) {
                        return Err(MeshError::NonPlanarFace(fi));
                    }
                }
            }
            for (ri, ring) in face.rings.iter().enumerate().skip(1) {
                if !ring_normal(&self.positions, ring).dot(&normal).is_negative() {
                    return Err(MeshError::InconsistentHole { face: fi, ring: ri });
                }
            }
        }
        Ok(())
    }

    fn coplanar(&self, normal: &Vec3, offset: &Vec3) -> bool {
        match self.mode {
            Arithmetic::Exact => normal.dot(offset).is_zero(),
            Arithmetic::Float { epsilon, .. } => {
                let n = normal.to_f64();
                let o = offset.to_f64();
                let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
                let on = (o[0] * o[0] + o[1] * o[1] + o[2] * o[2]).sqrt();
                let d = (n[0] * o[0] + n[1] * o[1] + n[2] * o[2]) / nn;
                d.abs() <= epsilon * on.max(1.0)
            }
        }
    }

    /// Flips the rings of every shell whose signed volume is negative.
    pub fn outward_orient(self) -> Result<Self, MeshError> {
        let shells = self.surface_components();
        let mut flip = vec![false; shells.count];
        for (c, faces) in shells.partition().iter().enumerate() {
            let vol = faces.iter().fold(Q::zero(), |acc, &f| acc + self.face_volume_term(f));
            if vol.is_zero() {
                return Err(MeshError::DegenerateSolid);
            }
            flip[c] = vol.is_negative();
        }
        if !flip.iter().any(|&f| f) {
            return Ok(self);
        }
        let rings = self
            .faces
            .iter()
            .enumerate()
            .map(|(fi, face)| {
                if flip[shells.labels[fi]] {
                    face.rings.iter().map(|r| reverse_ring(r)).collect()
                } else {
                    face.rings.clone()
                }
            })
            .collect();
        SurfaceMesh::from_rings(self.positions, rings, self.mode)
    }

    fn face_volume_term(&self, f: usize) -> Q {
        let mut acc = Q::zero();
        for ring in &self.faces[f].rings {
            let a = &self.positions[ring[0]];
            for k in 1..ring.len() - 1 {
                let b = &self.positions[ring[k]];
                let c = &self.positions[ring[k + 1]];
                acc += a.dot(&b.cross(c));
            }
        }
        acc
    }

    /// Divergence-theorem volume over fan-triangulated rings.
    pub fn signed_volume(&self) -> Q {
        (0..self.faces.len()).fold(Q::zero(), |acc, f| acc + self.face_volume_term(f)) / q(6)
    }

    pub fn mode(&self) -> Arithmetic {
        self.mode
    }

    pub fn with_mode(mut self, mode: Arithmetic) -> Self {
        self.mode = mode;
        self
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> &Vec3 {
        &self.positions[v]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn halfedges(&self) -> &[HalfEdge] {
        &self.halfedges
    }

    pub fn halfedge(&self, h: usize) -> &HalfEdge {
        &self.halfedges[h]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.positions.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn dest(&self, h: usize) -> usize {
        self.halfedges[self.halfedges[h].next].origin
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let h = self.edges[e].halfedges[0];
        (self.halfedges[h].origin, self.dest(h))
    }

    pub fn halfedge_vector(&self, h: usize) -> Vec3 {
        &self.positions[self.dest(h)] - &self.positions[self.halfedges[h].origin]
    }

    /// Newell normal of the outer ring; length is twice the outer-ring area.
    pub fn face_normal(&self, f: usize) -> Vec3 {
        ring_normal(&self.positions, self.faces[f].outer())
    }

    pub fn all_simple(&self) -> bool {
        self.faces.iter().all(Face::is_simple)
    }

    /// Connected components of the vertex-edge graph.
    pub fn graph_components(&self) -> Components {
        let mut uf = UnionFind::new(self.positions.len());
        for e in 0..self.edges.len() {
            let (a, b) = self.edge_endpoints(e);
            uf.union(a, b);
        }
        uf.components()
    }

    /// Components of the face-adjacency relation (labels are per face).
    pub fn surface_components(&self) -> Components {
        let mut uf = UnionFind::new(self.faces.len());
        for he in &self.halfedges {
            uf.union(he.face, self.halfedges[he.twin].face);
        }
        uf.components()
    }

    /// Genus of every surface component. Refuses faces with hole rings.
    pub fn euler_genus(&self) -> Result<Vec<u64>, MeshError> {
        if let Some(f) = self.faces.iter().position(|f| !f.is_simple()) {
            return Err(MeshError::GenusUndefined(f));
        }
        let comps = self.graph_components();
        let mut chi = vec![0i64; comps.count];
        for &c in &comps.labels {
            chi[c] += 1;
        }
        for e in 0..self.edges.len() {
            chi[comps.labels[self.edge_endpoints(e).0]] -= 1;
        }
        for face in &self.faces {
            chi[comps.labels[face.outer()[0]]] += 1;
        }
        chi.iter()
            .enumerate()
            .map(|(component, &chi)| {
                if chi > 2 || (2 - chi) % 2 != 0 {
                    Err(MeshError::NonIntegerGenus { component, chi })
                } else {
                    Ok(((2 - chi) / 2) as u64)
                }
            })
            .collect()
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.positions.len()];
        for e in 0..self.edges.len() {
            let (a, b) = self.edge_endpoints(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Applies `p -> m p + t` to every vertex. Rings are kept; an orientation
    /// reversing `m` is followed by re-orientation.
    pub fn transformed(&self, m: &Mat3, t: &Vec3) -> Result<SurfaceMesh, MeshError> {
        let positions = self.positions.iter().map(|p| &m.apply(p) + t).collect();
        let rings = self.faces.iter().map(|f| f.rings.clone()).collect();
        SurfaceMesh::new(positions, rings, self.mode)
    }

    /// Relabels vertices by `perm` (old id -> new id).
    pub fn relabeled(&self, perm: &[usize]) -> Result<SurfaceMesh, MeshError> {
        let mut positions = vec![Vec3::zero(); self.positions.len()];
        for (old, p) in self.positions.iter().enumerate() {
            positions[perm[old]] = p.clone();
        }
        let rings = self
            .faces
            .iter()
            .map(|f| f.rings.iter().map(|r| r.iter().map(|&v| perm[v]).collect()).collect())
            .collect();
        SurfaceMesh::new(positions, rings, self.mode)
    }

    /// Sorted list of undirected edges as vertex pairs.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.edges.len())
            .map(|e| {
                let (a, b) = self.edge_endpoints(e);
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn bounding_scale(&self) -> f64 {
        let mut m = 0.0f64;
        for p in &self.positions {
            for c in p.to_f64() {
                m = m.max(c.abs());
            }
        }
        m.max(1.0)
    }
}

pub(crate) fn ring_normal(positions: &[Vec3], ring: &[usize]) -> Vec3 {
    let mut n = Vec3::zero();
    for k in 0..ring.len() {
        let a = &positions[ring[k]];
        let b = &positions[ring[(k + 1) % ring.len()]];
        n = &n + &a.cross(b);
    }
    n
}

fn reverse_ring(ring: &[usize]) -> Vec<usize> {
    let mut r = Vec::with_capacity(ring.len());
    r.push(ring[0]);
    r.extend(ring[1..].iter().rev());
    r
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn components(mut self) -> Components {
        let n = self.parent.len();
        let mut label_of_root = HashMap::new();
        let mut labels = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            let next = label_of_root.len();
            labels.push(*label_of_root.entry(r).or_insert(next));
        }
        Components { count: label_of_root.len(), labels }
    }
}
