//! Frames to coordinates, the full reconstruction pipeline and its inverse.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::embedding::{check_embedding, EmbeddingViolation};
use super::solver::{solve_frames_with, FrameAssignment, SolveOptions};
use super::{validate_input, CombinatorialPoly, CpEdge, CpIndex, DihedralLabel, InputError, InputReport};
use crate::angles::{dihedral_angle, AngleTag};
use crate::geom::{axis_rotations, format_q, q_sqrt, Vec3};
use crate::mesh::{Arithmetic, SurfaceMesh};
use crate::orthotest::is_orthogonal;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntegrationError {
    #[error("edge {u}-{v} disagrees with the integrated coordinates")]
    CycleInconsistent { u: usize, v: usize },
    #[error("frame does not match the input size")]
    SizeMismatch,
    #[error(transparent)]
    Input(#[from] InputError),
}

/// Places vertex 0 at the origin and walks the graph breadth first; every
/// edge is then rechecked, and the result is shifted so its minimum corner is
/// the origin.
pub fn integrate_coordinates(cp: &CombinatorialPoly, frame: &FrameAssignment) -> Result<Vec<Vec3>, IntegrationError> {
    let idx = CpIndex::build(cp)?;
    if frame.dirs.len() != idx.num_halfedges() || frame.normals.len() != cp.faces.len() {
        return Err(IntegrationError::SizeMismatch);
    }
    let step = |h: usize| frame.dirs[h].scaled(&cp.edges[idx.edge[h]].length);
    let mut out_edges = vec![Vec::new(); cp.num_vertices];
    for h in 0..idx.num_halfedges() {
        out_edges[idx.from[h]].push(h);
    }
    let mut coords: Vec<Option<Vec3>> = vec![None; cp.num_vertices];
    coords[0] = Some(Vec3::zero());
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let here = coords[v].clone().expect("queued vertices are placed");
        for &h in &out_edges[v] {
            let w = idx.to[h];
            if coords[w].is_none() {
                coords[w] = Some(&here + &step(h));
                queue.push_back(w);
            }
        }
    }
    let coords: Vec<Vec3> = coords.into_iter().map(|c| c.expect("graph is connected")).collect();
    for h in 0..idx.num_halfedges() {
        if coords[idx.to[h]] != &coords[idx.from[h]] + &step(h) {
            return Err(IntegrationError::CycleInconsistent { u: idx.from[h], v: idx.to[h] });
        }
    }
    let lo = coords.iter().skip(1).fold(coords[0].clone(), |m, p| m.min_corner(p));
    Ok(coords.iter().map(|p| p - &lo).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoSolutionKind {
    /// No frame satisfies the labels even ignoring lengths.
    LabelsInconsistent,
    /// Frames exist, but none closes with the given lengths.
    ClosureFailure,
    /// Frames close, but every integrated surface touches itself.
    EmbeddingFailure { violation: EmbeddingViolation },
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub coords: Vec<Vec3>,
    pub frame: FrameAssignment,
    /// Frames passing closure, integration and embedding.
    pub solution_count: usize,
    /// Frames passing closure alone.
    pub closure_count: usize,
    pub mesh: SurfaceMesh,
    pub input: InputReport,
}

#[derive(Clone, Debug)]
pub enum ReconstructOutcome {
    Realized(Box<Realization>),
    NoSolution { kind: NoSolutionKind, closure_count: usize, input: InputReport },
}

impl ReconstructOutcome {
    pub fn realization(&self) -> Option<&Realization> {
        match self {
            ReconstructOutcome::Realized(r) => Some(r),
            ReconstructOutcome::NoSolution { .. } => None,
        }
    }

    pub fn is_realized(&self) -> bool {
        self.realization().is_some()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        match self {
            ReconstructOutcome::Realized(r) => serde_json::json!({
                "realizable": true,
                "solution_count": r.solution_count,
                "closure_count": r.closure_count,
                "coords": r.coords.iter().map(|p| p.0.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "unrealizable_degrees": r.input.unrealizable_degrees,
            }),
            ReconstructOutcome::NoSolution { kind, closure_count, input } => serde_json::json!({
                "realizable": false,
                "solution_count": 0,
                "closure_count": closure_count,
                "violation": kind,
                "unrealizable_degrees": input.unrealizable_degrees,
            }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let input = match self {
            ReconstructOutcome::Realized(r) => {
                s.push_str(&format!(
                    "realizable: yes\nsolution_count: {}\nclosure_count: {}\n",
                    r.solution_count, r.closure_count
                ));
                &r.input
            }
            ReconstructOutcome::NoSolution { kind, closure_count, input } => {
                let why = match kind {
                    NoSolutionKind::LabelsInconsistent => "labels inconsistent (no frame exists for any lengths)".to_string(),
                    NoSolutionKind::ClosureFailure => "closure failure (frames exist, faces do not close)".to_string(),
                    NoSolutionKind::EmbeddingFailure { violation } => format!("embedding failure: {violation}"),
                };
                s.push_str(&format!("realizable: no\nsolution_count: 0\nclosure_count: {closure_count}\ncertificate: {why}\n"));
                input
            }
        };
        for d in &input.unrealizable_degrees {
            s.push_str(&format!("advisory: vertex {} has degree {} (not realizable orthogonally)\n", d.vertex, d.degree));
        }
        s
    }
}

/// Validates, solves, integrates and checks every frame.
pub fn reconstruct(cp: &CombinatorialPoly) -> Result<ReconstructOutcome, InputError> {
    let input = validate_input(cp)?;
    let idx = CpIndex::build(cp)?;
    let frames = solve_frames_with(cp, &idx, SolveOptions::default());
    let closure_count = frames.len();
    let mut first_violation = None;
    let mut solutions = Vec::new();
    for frame in frames {
        let coords = match integrate_coordinates(cp, &frame) {
            Ok(c) => c,
            Err(_) => continue,
        };
        match check_embedding(cp, &coords) {
            Ok(()) => solutions.push((coords, frame)),
            Err(v) => {
                first_violation.get_or_insert(v);
            }
        }
    }
    let solution_count = solutions.len();
    if let Some((coords, frame)) = solutions.into_iter().next() {
        let rings = cp.faces.iter().map(|f| vec![f.clone()]).collect();
        if let Ok(mesh) = SurfaceMesh::new(coords.clone(), rings, Arithmetic::Exact) {
            return Ok(ReconstructOutcome::Realized(Box::new(Realization {
                coords,
                frame,
                solution_count,
                closure_count,
                mesh,
                input,
            })));
        }
    }
    let kind = if let Some(violation) = first_violation {
        NoSolutionKind::EmbeddingFailure { violation }
    } else if closure_count == 0 {
        let open = solve_frames_with(cp, &idx, SolveOptions { closure: false, limit: Some(1) });
        if open.is_empty() {
            NoSolutionKind::LabelsInconsistent
        } else {
            NoSolutionKind::ClosureFailure
        }
    } else {
        NoSolutionKind::EmbeddingFailure { violation: EmbeddingViolation::NonPositiveVolume }
    };
    Ok(ReconstructOutcome::NoSolution { kind, closure_count, input })
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtractError {
    #[error("graph disconnected ({0} components)")]
    Disconnected(usize),
    #[error("face {0} has hole rings")]
    HoleRings(usize),
    #[error("not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("edge {0} has dihedral angle π")]
    FlatEdge(usize),
    #[error("edge {0} has a dihedral angle that is not π/2 or 3π/2")]
    NonRightDihedral(usize),
    #[error("edge {0} has irrational length")]
    IrrationalLength(usize),
    #[error("angle error: {0}")]
    Angle(String),
}

/// Abstract copy of an orthogonal mesh: lengths from coordinates, labels from
/// dihedral angles.
pub fn extract_combinatorial(mesh: &SurfaceMesh) -> Result<CombinatorialPoly, ExtractError> {
    let comps = mesh.graph_components();
    if comps.count != 1 {
        return Err(ExtractError::Disconnected(comps.count));
    }
    if let Some(f) = mesh.faces().iter().position(|f| !f.is_simple()) {
        return Err(ExtractError::HoleRings(f));
    }
    let verdict = is_orthogonal(mesh);
    if let Some(o) = verdict.obstruction() {
        return Err(ExtractError::NotOrthogonal(o.to_string()));
    }
    let mut edges = Vec::with_capacity(mesh.num_edges());
    for e in 0..mesh.num_edges() {
        let label = match dihedral_angle(mesh, e).map_err(|err| ExtractError::Angle(err.to_string()))?.tag {
            AngleTag::RightMultiple(1) => DihedralLabel::Convex,
            AngleTag::RightMultiple(3) => DihedralLabel::Reflex,
            AngleTag::RightMultiple(_) => return Err(ExtractError::FlatEdge(e)),
            AngleTag::NotRightMultiple => return Err(ExtractError::NonRightDihedral(e)),
        };
        let (u, v) = mesh.edge_endpoints(e);
        let length = q_sqrt(&(mesh.position(v) - mesh.position(u)).norm2()).ok_or(ExtractError::IrrationalLength(e))?;
        edges.push(CpEdge { u, v, length, label });
    }
    Ok(CombinatorialPoly {
        num_vertices: mesh.num_vertices(),
        edges,
        faces: mesh.faces().iter().map(|f| f.outer().to_vec()).collect(),
    })
}

fn canonical_ring(ring: &[usize]) -> Vec<usize> {
    let start = (0..ring.len()).min_by_key(|&k| ring[k]).unwrap_or(0);
    ring[start..].iter().chain(&ring[..start]).copied().collect()
}

fn canonical_faces(mesh: &SurfaceMesh, relabel: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut faces: Vec<Vec<Vec<usize>>> = mesh
        .faces()
        .iter()
        .map(|f| {
            let mut rings: Vec<Vec<usize>> =
                f.rings.iter().map(|r| canonical_ring(&r.iter().map(|&v| relabel[v]).collect::<Vec<_>>())).collect();
            rings[1..].sort();
            rings
        })
        .collect();
    faces.sort();
    faces
}

fn to_origin(points: &[Vec3]) -> Vec<Vec3> {
    let lo = points.iter().skip(1).fold(points[0].clone(), |m, p| m.min_corner(p));
    points.iter().map(|p| p - &lo).collect()
}

/// True when a signed-axis rotation plus translation carries `a` onto `b`,
/// vertices and face cycles included.
pub fn congruent_orthogonal(a: &SurfaceMesh, b: &SurfaceMesh) -> bool {
    if a.num_vertices() != b.num_vertices() || a.num_faces() != b.num_faces() || a.num_edges() != b.num_edges() {
        return false;
    }
    let bp = to_origin(b.positions());
    let lookup: HashMap<&Vec3, usize> = bp.iter().enumerate().map(|(i, p)| (p, i)).collect();
    if lookup.len() != bp.len() {
        return false;
    }
    let identity: Vec<usize> = (0..b.num_vertices()).collect();
    let target = canonical_faces(b, &identity);
    for r in axis_rotations() {
        let rotated: Vec<Vec3> = a.positions().iter().map(|p| r.apply(p)).collect();
        let moved = to_origin(&rotated);
        let map: Option<Vec<usize>> = moved.iter().map(|p| lookup.get(p).copied()).collect();
        let Some(map) = map else { continue };
        if canonical_faces(a, &map) == target {
            return true;
        }
    }
    false
}
