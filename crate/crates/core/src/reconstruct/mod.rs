//! Reconstruction of orthogonal polyhedra from labeled combinatorics.
//!
//! Input is a [`CombinatorialPoly`]: abstract vertices, edges carrying a
//! length and a convex/reflex label, and faces as vertex cycles oriented
//! counterclockwise from outside. [`reconstruct`] searches every gauge-fixed
//! assignment of axis normals and edge directions, integrates coordinates
//! and keeps the assignments whose surface embeds without self-contact.

mod cpa;
mod embedding;
mod pipeline;
mod solver;

pub use cpa::{parse_cpa, write_cpa, CpaError};
pub use embedding::{check_embedding, check_surface_embedding, EmbeddingViolation};
pub use pipeline::{
    congruent_orthogonal, extract_combinatorial, integrate_coordinates, reconstruct, ExtractError, IntegrationError,
    NoSolutionKind, ReconstructOutcome, Realization,
};
pub use solver::{solve_frames, solve_frames_with, FrameAssignment, SolveOptions};

use std::collections::{HashMap, VecDeque};

use num_traits::Signed;
use serde::Serialize;

use crate::geom::Q;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DihedralLabel {
    /// Interior dihedral π/2.
    Convex,
    /// Interior dihedral 3π/2.
    Reflex,
}

impl DihedralLabel {
    pub fn sign(self) -> i64 {
        match self {
            DihedralLabel::Convex => 1,
            DihedralLabel::Reflex => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DihedralLabel::Convex => "convex",
            DihedralLabel::Reflex => "reflex",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpEdge {
    pub u: usize,
    pub v: usize,
    pub length: Q,
    pub label: DihedralLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialPoly {
    pub num_vertices: usize,
    pub edges: Vec<CpEdge>,
    /// Vertex cycles, counterclockwise seen from outside.
    pub faces: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("face {face}: fewer than 3 vertices")]
    FaceTooShort { face: usize },
    #[error("vertex index {vertex} out of range")]
    VertexOutOfRange { vertex: usize },
    #[error("face {face}: vertex {vertex} appears twice")]
    RepeatedVertex { face: usize, vertex: usize },
    #[error("edge {edge}: endpoints are equal")]
    LoopEdge { edge: usize },
    #[error("edges {first} and {second} join the same vertices")]
    DuplicateEdge { first: usize, second: usize },
    #[error("edge {edge}: length must be positive")]
    NonPositiveLength { edge: usize },
    #[error("face {face} uses {u}-{v}, which is not a listed edge")]
    UnlistedEdge { face: usize, u: usize, v: usize },
    #[error("non-manifold: directed edge {u}-{v} appears in more than one face")]
    NonManifold { u: usize, v: usize },
    #[error("edge {edge} ({u}-{v}) is not used once in each direction by the faces")]
    EdgeNotPaired { edge: usize, u: usize, v: usize },
    #[error("vertex {vertex} is not on any face")]
    IsolatedVertex { vertex: usize },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("genus ≠ 0: V - E + F = {chi}")]
    GenusNotZero { chi: i64 },
}

/// Half-edge index over a combinatorial polyhedron. Half-edge `face_start[f] + i`
/// runs from `faces[f][i]` to `faces[f][i + 1]`.
#[derive(Clone, Debug)]
pub struct CpIndex {
    pub face_start: Vec<usize>,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub face: Vec<usize>,
    pub twin: Vec<usize>,
    pub edge: Vec<usize>,
    /// Faces in breadth-first order from face 0 over edge adjacency.
    pub face_order: Vec<usize>,
}

impl CpIndex {
    pub fn build(cp: &CombinatorialPoly) -> Result<CpIndex, InputError> {
        let n = cp.num_vertices;
        let mut by_pair: HashMap<(usize, usize), usize> = HashMap::new();
        for (e, edge) in cp.edges.iter().enumerate() {
            for &x in &[edge.u, edge.v] {
                if x >= n {
                    return Err(InputError::VertexOutOfRange { vertex: x });
                }
            }
            if edge.u == edge.v {
                return Err(InputError::LoopEdge { edge: e });
            }
            if !edge.length.is_positive() {
                return Err(InputError::NonPositiveLength { edge: e });
            }
            let key = (edge.u.min(edge.v), edge.u.max(edge.v));
            if let Some(first) = by_pair.insert(key, e) {
                return Err(InputError::DuplicateEdge { first, second: e });
            }
        }
        let mut idx = CpIndex {
            face_start: Vec::with_capacity(cp.faces.len()),
            from: Vec::new(),
            to: Vec::new(),
            face: Vec::new(),
            twin: Vec::new(),
            edge: Vec::new(),
            face_order: Vec::new(),
        };
        let mut used = vec![false; n];
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (f, ring) in cp.faces.iter().enumerate() {
            if ring.len() < 3 {
                return Err(InputError::FaceTooShort { face: f });
            }
            idx.face_start.push(idx.from.len());
            let mut seen = std::collections::HashSet::new();
            for (i, &a) in ring.iter().enumerate() {
                if a >= n {
                    return Err(InputError::VertexOutOfRange { vertex: a });
                }
                if !seen.insert(a) {
                    return Err(InputError::RepeatedVertex { face: f, vertex: a });
                }
                used[a] = true;
                let b = ring[(i + 1) % ring.len()];
                let e = *by_pair
                    .get(&(a.min(b), a.max(b)))
                    .ok_or(InputError::UnlistedEdge { face: f, u: a, v: b })?;
                if directed.insert((a, b), idx.from.len()).is_some() {
                    return Err(InputError::NonManifold { u: a, v: b });
                }
                idx.from.push(a);
                idx.to.push(b);
                idx.face.push(f);
                idx.edge.push(e);
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(InputError::IsolatedVertex { vertex: v });
        }
        for (e, edge) in cp.edges.iter().enumerate() {
            if !directed.contains_key(&(edge.u, edge.v)) || !directed.contains_key(&(edge.v, edge.u)) {
                return Err(InputError::EdgeNotPaired { edge: e, u: edge.u, v: edge.v });
            }
        }
        idx.twin = (0..idx.from.len()).map(|h| directed[&(idx.to[h], idx.from[h])]).collect();

        let components = vertex_components(n, &cp.edges);
        if components != 1 {
            return Err(InputError::Disconnected { components });
        }
        let chi = n as i64 - cp.edges.len() as i64 + cp.faces.len() as i64;
        if chi != 2 {
            return Err(InputError::GenusNotZero { chi });
        }

        let mut seen = vec![false; cp.faces.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(f) = queue.pop_front() {
            idx.face_order.push(f);
            for h in idx.face_halfedges(f) {
                let g = idx.face[idx.twin[h]];
                if !seen[g] {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
        Ok(idx)
    }

    pub fn num_halfedges(&self) -> usize {
        self.from.len()
    }

    pub fn face_halfedges(&self, f: usize) -> std::ops::Range<usize> {
        let end = self.face_start.get(f + 1).copied().unwrap_or(self.from.len());
        self.face_start[f]..end
    }

    pub fn next(&self, h: usize) -> usize {
        let r = self.face_halfedges(self.face[h]);
        if h + 1 == r.end {
            r.start
        } else {
            h + 1
        }
    }

    pub fn prev(&self, h: usize) -> usize {
        let r = self.face_halfedges(self.face[h]);
        if h == r.start {
            r.end - 1
        } else {
            h - 1
        }
    }
}

fn vertex_components(n: usize, edges: &[CpEdge]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeFlag {
    pub vertex: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub degrees: Vec<usize>,
    /// Vertices of degree 5 or at least 7. No orthogonal polyhedron has such
    /// a vertex; the flag is advisory and the solver re-derives it.
    pub unrealizable_degrees: Vec<DegreeFlag>,
}

impl InputReport {
    pub fn flagged(&self) -> bool {
        !self.unrealizable_degrees.is_empty()
    }
}

/// Structural checks: manifold pairing, connectivity, genus 0, positive lengths.
pub fn validate_input(cp: &CombinatorialPoly) -> Result<InputReport, InputError> {
    CpIndex::build(cp)?;
    let mut degrees = vec![0usize; cp.num_vertices];
    for e in &cp.edges {
        degrees[e.u] += 1;
        degrees[e.v] += 1;
    }
    let unrealizable_degrees = degrees
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 5 || d >= 7)
        .map(|(vertex, &degree)| DegreeFlag { vertex, degree })
        .collect();
    Ok(InputReport {
        vertices: cp.num_vertices,
        edges: cp.edges.len(),
        faces: cp.faces.len(),
        degrees,
        unrealizable_degrees,
    })
}

impl CombinatorialPoly {
    /// Same combinatorics with every label set to `label`.
    pub fn with_all_labels(&self, label: DihedralLabel) -> Self {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.label = label;
        }
        out
    }

    pub fn scaled(&self, factor: &Q) -> Self {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.length = &e.length * factor;
        }
        out
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.iter().position(|e| (e.u == a && e.v == b) || (e.u == b && e.v == a))
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::geom::q;

    /// Unit cube with vertex `i` at the bits of `i`.
    pub fn cube_cp(a: i64, b: i64, c: i64) -> CombinatorialPoly {
        let faces = vec![
            vec![0, 2, 3, 1],
            vec![4, 5, 7, 6],
            vec![0, 1, 5, 4],
            vec![2, 6, 7, 3],
            vec![0, 4, 6, 2],
            vec![1, 3, 7, 5],
        ];
        let mut edges = Vec::new();
        for i in 0..8usize {
            for bit in 0..3 {
                let j = i | (1 << bit);
                if j != i {
                    let len = [a, b, c][bit];
                    edges.push(CpEdge { u: i, v: j, length: q(len), label: DihedralLabel::Convex });
                }
            }
        }
        CombinatorialPoly { num_vertices: 8, edges, faces }
    }
}
