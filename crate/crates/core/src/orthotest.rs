//! Orthogonality of embedded polyhedra.
//!
//! [`is_orthogonal`] works from the definition: the face normals must span
//! exactly three pairwise perpendicular lines and every edge must run along
//! one of them. [`propagate_alignment`] is the constructive route: rotate one
//! face into a coordinate plane and walk across edges, checking that every
//! neighbour lands on a coordinate plane too.

use std::collections::VecDeque;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::angles::angle_report;
use crate::geom::{format_q, q_sqrt, q_to_f64, Axis, Mat3, Vec3, Q};
use crate::mesh::{Arithmetic, SurfaceMesh};

/// Rows of an aligning rotation. Rows are unit length when `normalized`;
/// otherwise each row is a positive multiple of the unit row, because the
/// exact square root needed to normalize it is irrational.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub rows: Mat3,
    pub normalized: bool,
}

impl Frame {
    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.rows.apply(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    GraphDisconnected { components: usize },
    SurfaceDisconnected { surface_components: usize },
    DegenerateAngle { message: String },
    NonRightFacialAngle { face: usize, ring: usize, vertex: usize, radians: f64, angle: String },
    NonRightDihedral { edge: usize, endpoints: [usize; 2], radians: f64, angle: String },
    NormalLineCount { count: usize },
    LinesNotPerpendicular { faces: [usize; 2] },
    EdgeOffAxis { edge: usize, endpoints: [usize; 2] },
    NormalOffAxis { face: usize, from_face: usize, edge: usize },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::GraphDisconnected { components } => write!(f, "graph disconnected ({components} components)"),
            Obstruction::SurfaceDisconnected { surface_components } => {
                write!(f, "faces are not edge-connected ({surface_components} pieces)")
            }
            Obstruction::DegenerateAngle { message } => write!(f, "degenerate angle: {message}"),
            Obstruction::NonRightFacialAngle { face, ring, vertex, angle, .. } => {
                write!(f, "facial angle {angle} at face {face} ring {ring} vertex {vertex} is not a multiple of π/2")
            }
            Obstruction::NonRightDihedral { edge, endpoints, angle, .. } => write!(
                f,
                "dihedral angle {angle} at edge {edge} ({}-{}) is not a multiple of π/2",
                endpoints[0], endpoints[1]
            ),
            Obstruction::NormalLineCount { count } => {
                write!(f, "face normals span {count} distinct lines (need exactly 3)")
            }
            Obstruction::LinesNotPerpendicular { faces } => {
                write!(f, "normal lines of faces {} and {} are not perpendicular", faces[0], faces[1])
            }
            Obstruction::EdgeOffAxis { edge, endpoints } => {
                write!(f, "edge {edge} ({}-{}) is not parallel to a frame axis", endpoints[0], endpoints[1])
            }
            Obstruction::NormalOffAxis { face, from_face, edge } => write!(
                f,
                "propagation contradiction: face {face} reached from face {from_face} across edge {edge} is not axis-aligned"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Rotation(Box<Frame>),
    Obstruction(Obstruction),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthoVerdict {
    pub orthogonal: bool,
    pub witness: Witness,
}

impl OrthoVerdict {
    fn yes(frame: Frame) -> Self {
        OrthoVerdict { orthogonal: true, witness: Witness::Rotation(Box::new(frame)) }
    }

    fn no(o: Obstruction) -> Self {
        OrthoVerdict { orthogonal: false, witness: Witness::Obstruction(o) }
    }

    pub fn frame(&self) -> Option<&Frame> {
        match &self.witness {
            Witness::Rotation(f) => Some(f),
            Witness::Obstruction(_) => None,
        }
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match &self.witness {
            Witness::Obstruction(o) => Some(o),
            Witness::Rotation(_) => None,
        }
    }

    pub fn to_text(&self) -> String {
        match &self.witness {
            Witness::Rotation(fr) => {
                let mut s = String::from("orthogonal: yes\nwitness:\n");
                for row in &fr.rows.0 {
                    s.push_str(&format!("  [{} {} {}]\n", format_q(row.x()), format_q(row.y()), format_q(row.z())));
                }
                if !fr.normalized {
                    s.push_str("  (rows scaled: exact normalization is irrational)\n");
                }
                s
            }
            Witness::Obstruction(o) => format!("orthogonal: no\nobstruction: {o}\n"),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let witness = self.frame().map(|fr| {
            let rows: Vec<Vec<String>> = fr.rows.0.iter().map(|r| r.0.iter().map(format_q).collect()).collect();
            serde_json::json!({ "rows": rows, "normalized": fr.normalized })
        });
        serde_json::json!({
            "orthogonal": self.orthogonal,
            "witness": witness,
            "obstruction": self.obstruction().map(|o| serde_json::json!({
                "description": o.to_string(),
                "detail": o,
            })),
        })
    }
}

fn unit_f64(v: &Vec3) -> [f64; 3] {
    let f = v.to_f64();
    let n = (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt();
    [f[0] / n, f[1] / n, f[2] / n]
}

fn parallel(mode: Arithmetic, a: &Vec3, b: &Vec3) -> bool {
    match mode {
        Arithmetic::Exact => a.parallel(b),
        Arithmetic::Float { angle_epsilon, .. } => {
            let (x, y) = (unit_f64(a), unit_f64(b));
            let c = [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]];
            (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt() <= angle_epsilon
        }
    }
}

fn perpendicular(mode: Arithmetic, a: &Vec3, b: &Vec3) -> bool {
    match mode {
        Arithmetic::Exact => a.dot(b).is_zero(),
        Arithmetic::Float { angle_epsilon, .. } => {
            let (x, y) = (unit_f64(a), unit_f64(b));
            (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]).abs() <= angle_epsilon
        }
    }
}

/// The signed axis `v` points along, exactly or within the angle tolerance.
pub fn axis_of(mode: Arithmetic, v: &Vec3) -> Option<Axis> {
    match mode {
        Arithmetic::Exact => Axis::of_vec(v),
        Arithmetic::Float { .. } => {
            let u = unit_f64(v);
            let i = (0..3).max_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))?;
            let axis = Axis::from_parts(i, u[i] > 0.0);
            parallel(mode, v, &axis.to_vec()).then_some(axis)
        }
    }
}

fn frame_row(mode: Arithmetic, v: &Vec3) -> (Vec3, bool) {
    match mode {
        Arithmetic::Exact => match q_sqrt(&v.norm2()) {
            Some(n) => (v.scale(&(Q::from_integer(1.into()) / n)), true),
            None => (v.clone(), false),
        },
        Arithmetic::Float { .. } => {
            let u = unit_f64(v);
            let c = |x: f64| Q::from_float(x).unwrap_or_else(Q::zero);
            (Vec3::new(c(u[0]), c(u[1]), c(u[2])), true)
        }
    }
}

/// Frame sending the normal of face 0 to +Z and its first outer edge to +X.
fn seed_frame(mesh: &SurfaceMesh) -> Frame {
    let mode = mesh.mode();
    let n = mesh.face_normal(0);
    let e = mesh.halfedge_vector(mesh.face(0).ring_halfedges[0]);
    let (z, zn) = frame_row(mode, &n);
    let (x, xn) = frame_row(mode, &e);
    let y = z.cross(&x);
    let y = if mode.is_exact() { y } else { frame_row(mode, &y).0 };
    Frame { rows: Mat3([x, y, z]), normalized: zn && xn }
}

fn edge_endpoints(mesh: &SurfaceMesh, e: usize) -> [usize; 2] {
    let (a, b) = mesh.edge_endpoints(e);
    [a, b]
}

/// Decides orthogonality from the normal lines and edge directions.
pub fn is_orthogonal(mesh: &SurfaceMesh) -> OrthoVerdict {
    let mode = mesh.mode();
    // (representative normal, first face on the line)
    let mut lines: Vec<(Vec3, usize)> = Vec::new();
    for f in 0..mesh.num_faces() {
        let n = mesh.face_normal(f);
        if !lines.iter().any(|(l, _)| parallel(mode, l, &n)) {
            lines.push((n, f));
        }
    }
    if lines.len() != 3 {
        return OrthoVerdict::no(Obstruction::NormalLineCount { count: lines.len() });
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if !perpendicular(mode, &lines[i].0, &lines[j].0) {
                return OrthoVerdict::no(Obstruction::LinesNotPerpendicular { faces: [lines[i].1, lines[j].1] });
            }
        }
    }
    for e in 0..mesh.num_edges() {
        let u = mesh.halfedge_vector(mesh.edges()[e].halfedges[0]);
        if !lines.iter().any(|(l, _)| parallel(mode, l, &u)) {
            return OrthoVerdict::no(Obstruction::EdgeOffAxis { edge: e, endpoints: edge_endpoints(mesh, e) });
        }
    }
    let already_aligned = lines.iter().all(|(l, _)| Axis::of_vec(l).is_some());
    if already_aligned {
        return OrthoVerdict::yes(Frame { rows: Mat3::identity(), normalized: true });
    }
    OrthoVerdict::yes(seed_frame(mesh))
}

/// Constructive alignment: seed face 0 and propagate across edges.
pub fn propagate_alignment(mesh: &SurfaceMesh) -> OrthoVerdict {
    let comps = mesh.graph_components();
    if comps.count != 1 {
        return OrthoVerdict::no(Obstruction::GraphDisconnected { components: comps.count });
    }
    let report = match angle_report(mesh) {
        Ok(r) => r,
        Err(e) => return OrthoVerdict::no(Obstruction::DegenerateAngle { message: e.to_string() }),
    };
    if let Some(r) = report.first_non_right_facial() {
        return OrthoVerdict::no(Obstruction::NonRightFacialAngle {
            face: r.face,
            ring: r.ring,
            vertex: r.vertex,
            radians: r.angle.value,
            angle: r.angle.describe(),
        });
    }
    if let Some(r) = report.first_non_right_dihedral() {
        return OrthoVerdict::no(Obstruction::NonRightDihedral {
            edge: r.edge,
            endpoints: r.endpoints,
            radians: r.angle.value,
            angle: r.angle.describe(),
        });
    }

    let mode = mesh.mode();
    let frame = seed_frame(mesh);
    let mut seen = vec![false; mesh.num_faces()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for &start in &mesh.face(f).ring_halfedges {
            let mut h = start;
            loop {
                let he = mesh.halfedge(h);
                if axis_of(mode, &frame.apply(&mesh.halfedge_vector(h))).is_none() {
                    return OrthoVerdict::no(Obstruction::EdgeOffAxis { edge: he.edge, endpoints: edge_endpoints(mesh, he.edge) });
                }
                let g = mesh.halfedge(he.twin).face;
                if !seen[g] {
                    if axis_of(mode, &frame.apply(&mesh.face_normal(g))).is_none() {
                        return OrthoVerdict::no(Obstruction::NormalOffAxis { face: g, from_face: f, edge: he.edge });
                    }
                    seen[g] = true;
                    queue.push_back(g);
                }
                h = he.next;
                if h == start {
                    break;
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return OrthoVerdict::no(Obstruction::SurfaceDisconnected { surface_components: mesh.surface_components().count });
    }
    OrthoVerdict::yes(frame)
}

/// `(connected ∧ all angles right multiples) ⇒ orthogonal` on this mesh.
pub fn theorem2_check(mesh: &SurfaceMesh) -> bool {
    if mesh.graph_components().count != 1 {
        return true;
    }
    match angle_report(mesh) {
        Ok(r) if r.hypotheses_hold() => {
            let a = is_orthogonal(mesh);
            let b = propagate_alignment(mesh);
            a.orthogonal && b.orthogonal && frame_aligns(mesh, b.frame().expect("orthogonal verdict has a frame"))
        }
        _ => true,
    }
}

/// True when every rotated edge vector and face normal has at most one
/// nonzero component (exact) or lies within tolerance of an axis (float).
pub fn frame_aligns(mesh: &SurfaceMesh, frame: &Frame) -> bool {
    let mode = mesh.mode();
    let edges_ok = mesh
        .edges()
        .iter()
        .all(|e| axis_of(mode, &frame.apply(&mesh.halfedge_vector(e.halfedges[0]))).is_some());
    let normals_ok = (0..mesh.num_faces()).all(|f| axis_of(mode, &frame.apply(&mesh.face_normal(f))).is_some());
    edges_ok && normals_ok && frame_is_orthogonal(mode, frame)
}

fn frame_is_orthogonal(mode: Arithmetic, frame: &Frame) -> bool {
    let r = &frame.rows.0;
    let pairwise = perpendicular(mode, &r[0], &r[1]) && perpendicular(mode, &r[0], &r[2]) && perpendicular(mode, &r[1], &r[2]);
    let det = q_to_f64(&frame.rows.det());
    pairwise && det > 0.0
}
