//! Facial and dihedral angles with π/2-multiple classification.
//!
//! Exact mode decides the class from the signs of a dot product and a
//! triple product. Float mode compares the measured angle against k·π/2
//! within the mesh's angle tolerance. The measured value is always reported.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::geom::{Vec3, Q};
use crate::mesh::{Arithmetic, SurfaceMesh};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AngleError {
    #[error("face {face}: vertex {vertex} is not on ring {ring}")]
    VertexNotOnRing { face: usize, ring: usize, vertex: usize },
    #[error("face {face} ring {ring}: zero-length edge at vertex {vertex}")]
    DegenerateEdge { face: usize, ring: usize, vertex: usize },
    #[error("face {face} ring {ring}: ring folds back on itself at vertex {vertex}")]
    Spike { face: usize, ring: usize, vertex: usize },
    #[error("edge {edge} ({a}-{b}): faces fold onto each other (dihedral angle 0 or 2π)")]
    DegenerateDihedral { edge: usize, a: usize, b: usize },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AngleTag {
    /// `k·π/2` for k in 1..=3; k = 2 is a straight angle.
    RightMultiple(u8),
    NotRightMultiple,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AngleClass {
    pub tag: AngleTag,
    /// Measured angle in radians.
    pub value: f64,
}

impl AngleClass {
    pub fn is_right(&self) -> bool {
        matches!(self.tag, AngleTag::RightMultiple(_))
    }

    pub fn multiple(&self) -> Option<u8> {
        match self.tag {
            AngleTag::RightMultiple(k) => Some(k),
            AngleTag::NotRightMultiple => None,
        }
    }

    /// `π/4`, `3π/2` and similar when the value is a small fraction of π.
    pub fn describe(&self) -> String {
        if let Some(k) = self.multiple() {
            return match k {
                1 => "π/2".into(),
                2 => "π".into(),
                _ => "3π/2".into(),
            };
        }
        pi_fraction(self.value).unwrap_or_else(|| format!("{:.9}", self.value))
    }
}

fn pi_fraction(value: f64) -> Option<String> {
    let r = value / PI;
    for d in 1..=12i64 {
        let n = (r * d as f64).round();
        if n >= 1.0 && (r * d as f64 - n).abs() < 1e-9 && num_integer::gcd(n as i64, d) == 1 {
            let num = if n == 1.0 { "π".to_string() } else { format!("{}π", n as i64) };
            return Some(if d == 1 { num } else { format!("{num}/{d}") });
        }
    }
    None
}

impl std::fmt::Display for AngleTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AngleTag::RightMultiple(1) => f.write_str("π/2"),
            AngleTag::RightMultiple(2) => f.write_str("π"),
            AngleTag::RightMultiple(k) => write!(f, "{k}π/2"),
            AngleTag::NotRightMultiple => f.write_str("other"),
        }
    }
}

impl Serialize for AngleClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AngleClass", 3)?;
        st.serialize_field("class", if self.is_right() { "right_multiple" } else { "not_right_multiple" })?;
        st.serialize_field("k", &self.multiple())?;
        st.serialize_field("radians", &self.value)?;
        st.end()
    }
}

fn unit(v: &Vec3) -> [f64; 3] {
    let f = v.to_f64();
    let n = (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt();
    [f[0] / n, f[1] / n, f[2] / n]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Sign-based class for an angle `π - atan2(c, d)` (shared by both angle kinds).
/// Returns `None` for the degenerate case c = 0, d < 0.
fn exact_class(c: &Q, d: &Q) -> Option<AngleTag> {
    if d.is_zero() {
        Some(AngleTag::RightMultiple(if c.is_positive() { 1 } else { 3 }))
    } else if c.is_zero() {
        d.is_positive().then_some(AngleTag::RightMultiple(2))
    } else {
        Some(AngleTag::NotRightMultiple)
    }
}

fn float_class(value: f64, eps: f64) -> Option<AngleTag> {
    if value <= eps || value >= 2.0 * PI - eps {
        return None;
    }
    for k in 1..=3u8 {
        if (value - k as f64 * FRAC_PI_2).abs() <= eps {
            return Some(AngleTag::RightMultiple(k));
        }
    }
    Some(AngleTag::NotRightMultiple)
}

fn classify(mode: Arithmetic, c: &Q, d: &Q, value: f64) -> Option<AngleTag> {
    match mode {
        Arithmetic::Exact => exact_class(c, d),
        Arithmetic::Float { angle_epsilon, .. } => float_class(value, angle_epsilon),
    }
}

/// Interior angle of `face` at the `index`-th corner of ring `ring`.
pub fn facial_angle_at(mesh: &SurfaceMesh, face: usize, ring: usize, index: usize) -> Result<AngleClass, AngleError> {
    let r = &mesh.face(face).rings[ring];
    let n = r.len();
    let (p, v, w) = (r[(index + n - 1) % n], r[index], r[(index + 1) % n]);
    let a = mesh.position(v) - mesh.position(p);
    let b = mesh.position(w) - mesh.position(v);
    if a.is_zero() || b.is_zero() {
        return Err(AngleError::DegenerateEdge { face, ring, vertex: v });
    }
    let normal = mesh.face_normal(face);
    let c = a.cross(&b).dot(&normal);
    let d = a.dot(&b);
    let (ua, ub, un) = (unit(&a), unit(&b), unit(&normal));
    let turn = dot3(cross3(ua, ub), un).atan2(dot3(ua, ub));
    let value = PI - turn;
    let tag = classify(mesh.mode(), &c, &d, value).ok_or(AngleError::Spike { face, ring, vertex: v })?;
    Ok(AngleClass { tag, value })
}

/// Interior angle of `face` at vertex id `vertex` on ring `ring`.
pub fn facial_angle(mesh: &SurfaceMesh, face: usize, ring: usize, vertex: usize) -> Result<AngleClass, AngleError> {
    let index = mesh.face(face).rings[ring]
        .iter()
        .position(|&x| x == vertex)
        .ok_or(AngleError::VertexNotOnRing { face, ring, vertex })?;
    facial_angle_at(mesh, face, ring, index)
}

/// Interior dihedral angle across the edge of half-edge `h`, with `f` the
/// face of `h` and `u` the direction of `h`.
pub fn dihedral_at_halfedge(mesh: &SurfaceMesh, h: usize) -> Result<AngleClass, AngleError> {
    let he = mesh.halfedge(h);
    let nf = mesh.face_normal(he.face);
    let ng = mesh.face_normal(mesh.halfedge(he.twin).face);
    let u = mesh.halfedge_vector(h);
    let cr = nf.cross(&ng);
    let c = cr.dot(&u);
    let d = nf.dot(&ng);
    let (uf, ug, uu) = (unit(&nf), unit(&ng), unit(&u));
    let value = PI - dot3(cross3(uf, ug), uu).atan2(dot3(uf, ug));
    let tag = classify(mesh.mode(), &c, &d, value).ok_or(AngleError::DegenerateDihedral {
        edge: he.edge,
        a: he.origin,
        b: mesh.dest(h),
    })?;
    Ok(AngleClass { tag, value })
}

pub fn dihedral_angle(mesh: &SurfaceMesh, edge: usize) -> Result<AngleClass, AngleError> {
    dihedral_at_halfedge(mesh, mesh.edges()[edge].halfedges[0])
}

#[derive(Clone, Debug, Serialize)]
pub struct FacialRecord {
    pub face: usize,
    pub ring: usize,
    pub vertex: usize,
    #[serde(flatten)]
    pub angle: AngleClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct DihedralRecord {
    pub edge: usize,
    pub endpoints: [usize; 2],
    pub faces: [usize; 2],
    #[serde(flatten)]
    pub angle: AngleClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct AngleReport {
    pub exact: bool,
    pub facial: Vec<FacialRecord>,
    pub dihedral: Vec<DihedralRecord>,
    pub all_facial_right: bool,
    pub all_dihedral_right: bool,
}

pub fn angle_report(mesh: &SurfaceMesh) -> Result<AngleReport, AngleError> {
    let mut facial = Vec::new();
    for (fi, face) in mesh.faces().iter().enumerate() {
        for (ri, ring) in face.rings.iter().enumerate() {
            for (k, &v) in ring.iter().enumerate() {
                facial.push(FacialRecord { face: fi, ring: ri, vertex: v, angle: facial_angle_at(mesh, fi, ri, k)? });
            }
        }
    }
    let mut dihedral = Vec::with_capacity(mesh.num_edges());
    for (e, edge) in mesh.edges().iter().enumerate() {
        let [h, t] = edge.halfedges;
        dihedral.push(DihedralRecord {
            edge: e,
            endpoints: [mesh.halfedge(h).origin, mesh.dest(h)],
            faces: [mesh.halfedge(h).face, mesh.halfedge(t).face],
            angle: dihedral_at_halfedge(mesh, h)?,
        });
    }
    Ok(AngleReport {
        exact: mesh.mode().is_exact(),
        all_facial_right: facial.iter().all(|r| r.angle.is_right()),
        all_dihedral_right: dihedral.iter().all(|r| r.angle.is_right()),
        facial,
        dihedral,
    })
}

impl AngleReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.all_facial_right && self.all_dihedral_right
    }

    pub fn first_non_right_facial(&self) -> Option<&FacialRecord> {
        self.facial.iter().find(|r| !r.angle.is_right())
    }

    pub fn first_non_right_dihedral(&self) -> Option<&DihedralRecord> {
        self.dihedral.iter().find(|r| !r.angle.is_right())
    }

    pub fn to_text(&self) -> String {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", if self.exact { "exact" } else { "float" });
        let _ = writeln!(out, "facial angles: {} incidences, all right multiples: {}", self.facial.len(), yes(self.all_facial_right));
        let _ = writeln!(out, "dihedral angles: {} edges, all right multiples: {}", self.dihedral.len(), yes(self.all_dihedral_right));
        for r in self.facial.iter().filter(|r| !r.angle.is_right()) {
            let _ = writeln!(out, "facial {} at face {} ring {} vertex {}", r.angle.describe(), r.face, r.ring, r.vertex);
        }
        for r in self.dihedral.iter().filter(|r| !r.angle.is_right()) {
            let _ = writeln!(
                out,
                "dihedral {} at edge {} ({}-{})",
                r.angle.describe(),
                r.edge,
                r.endpoints[0],
                r.endpoints[1]
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Exact winding of the edge directions of a ring about the face normal:
/// the sum of exterior turns divided by 2π.
pub fn turning_number(mesh: &SurfaceMesh, face: usize, ring: usize) -> i64 {
    let normal = mesh.face_normal(face);
    let drop = (0..3)
        .max_by(|&i, &j| normal.0[i].abs().cmp(&normal.0[j].abs()))
        .expect("three axes");
    let (i, j) = ((drop + 1) % 3, (drop + 2) % 3);
    let r = &mesh.face(face).rings[ring];
    let dirs: Vec<(Q, Q)> = (0..r.len())
        .map(|k| {
            let d = mesh.position(r[(k + 1) % r.len()]) - mesh.position(r[k]);
            (d.0[i].clone(), d.0[j].clone())
        })
        .collect();
    let mut w = 0i64;
    for k in 0..dirs.len() {
        let (a, b) = (&dirs[k], &dirs[(k + 1) % dirs.len()]);
        let turn = &a.0 * &b.1 - &a.1 * &b.0;
        if turn.is_positive() && angle_cmp(b, a).is_lt() {
            w += 1;
        } else if turn.is_negative() && angle_cmp(b, a).is_gt() {
            w -= 1;
        }
    }
    if normal.0[drop].is_negative() {
        -w
    } else {
        w
    }
}

/// Orders 2D directions by polar angle in [0, 2π).
fn angle_cmp(a: &(Q, Q), b: &(Q, Q)) -> std::cmp::Ordering {
    let upper = |v: &(Q, Q)| v.1.is_positive() || (v.1.is_zero() && v.0.is_positive());
    match (upper(a), upper(b)) {
        (true, false) => std::cmp::Ordering::Less,
        (false, true) => std::cmp::Ordering::Greater,
        _ => {
            let cr = &a.0 * &b.1 - &a.1 * &b.0;
            Q::zero().cmp(&cr)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TurningRecord {
    pub face: usize,
    pub ring: usize,
    pub winding: i64,
    pub expected: i64,
    /// Σ(π − interior) from the measured angles.
    pub float_sum: f64,
}

impl TurningRecord {
    pub fn holds(&self) -> bool {
        self.winding == self.expected && (self.float_sum - 2.0 * PI * self.expected as f64).abs() < 1e-6
    }
}

/// Turning-sum identity for every ring: +1 winding on outer rings, −1 on holes.
pub fn turning_sums(mesh: &SurfaceMesh) -> Result<Vec<TurningRecord>, AngleError> {
    let mut out = Vec::new();
    for (fi, face) in mesh.faces().iter().enumerate() {
        for ri in 0..face.rings.len() {
            let mut float_sum = 0.0;
            for k in 0..face.rings[ri].len() {
                float_sum += PI - facial_angle_at(mesh, fi, ri, k)?.value;
            }
            out.push(TurningRecord {
                face: fi,
                ring: ri,
                winding: turning_number(mesh, fi, ri),
                expected: if ri == 0 { 1 } else { -1 },
                float_sum,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}
