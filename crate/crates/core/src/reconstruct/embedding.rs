//! Exact self-contact tests for integrated surfaces.
//!
//! Each face is projected to 2D by dropping the dominant axis of its normal.
//! Coplanar pairs are tested by sampling every edge at its crossings with the
//! other face's boundary and by sampling the cells of the joint vertex grid.
//! Pairs in perpendicular axis planes are sampled along the common line. A
//! sample inside one face's interior that is not outside the other is a
//! violation; contact between boundaries alone is allowed.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::CombinatorialPoly;
use crate::geom::{q, Vec3, Q};
use crate::mesh::SurfaceMesh;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbeddingViolation {
    #[error("vertices {a} and {b} have the same coordinates")]
    DuplicateVertex { a: usize, b: usize },
    #[error("face {face} has zero area")]
    DegenerateFace { face: usize },
    #[error("face {face} is not planar")]
    NonPlanarFace { face: usize },
    #[error("boundary of face {face} intersects itself")]
    SelfIntersectingFace { face: usize },
    #[error("faces {a} and {b} intersect")]
    FacesIntersect { a: usize, b: usize },
    #[error("faces {a} and {b} are neither coplanar nor in perpendicular axis planes; contact test unsupported")]
    Unsupported { a: usize, b: usize },
    #[error("signed volume is not positive")]
    NonPositiveVolume,
}

type P2 = (Q, Q);

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Loc {
    Inside,
    Boundary,
    Outside,
}

struct FaceGeom {
    normal: Vec3,
    /// Dropped coordinate.
    drop: usize,
    /// Plane offset `normal · p`.
    offset: Q,
    rings3: Vec<Vec<Vec3>>,
    lo: Vec3,
    hi: Vec3,
}

fn cross2(o: &P2, a: &P2, b: &P2) -> Q {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

fn within(v: &Q, a: &Q, b: &Q) -> bool {
    (a <= v && v <= b) || (b <= v && v <= a)
}

fn on_segment(p: &P2, a: &P2, b: &P2) -> bool {
    cross2(a, b, p).is_zero() && within(&p.0, &a.0, &b.0) && within(&p.1, &a.1, &b.1)
}

fn segments_touch(a: &P2, b: &P2, c: &P2, d: &P2) -> bool {
    let d1 = cross2(c, d, a).signum();
    let d2 = cross2(c, d, b).signum();
    let d3 = cross2(a, b, c).signum();
    let d4 = cross2(a, b, d).signum();
    if d1 * d2 < Q::zero() && d3 * d4 < Q::zero() {
        return true;
    }
    on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b)
}

fn locate(p: &P2, rings: &[Vec<P2>]) -> Loc {
    let mut inside = false;
    for ring in rings {
        for k in 0..ring.len() {
            let (a, b) = (&ring[k], &ring[(k + 1) % ring.len()]);
            if on_segment(p, a, b) {
                return Loc::Boundary;
            }
            if (a.1 > p.1) != (b.1 > p.1) {
                let x = &a.0 + (&p.1 - &a.1) * (&b.0 - &a.0) / (&b.1 - &a.1);
                if p.0 < x {
                    inside = !inside;
                }
            }
        }
    }
    if inside {
        Loc::Inside
    } else {
        Loc::Outside
    }
}

impl FaceGeom {
    fn new(rings3: Vec<Vec<Vec3>>) -> Self {
        let outer = &rings3[0];
        let mut normal = Vec3::zero();
        for k in 0..outer.len() {
            normal = &normal + &outer[k].cross(&outer[(k + 1) % outer.len()]);
        }
        let drop = (0..3).max_by(|&i, &j| normal.0[i].abs().cmp(&normal.0[j].abs())).expect("three axes");
        let offset = normal.dot(&outer[0]);
        let mut lo = outer[0].clone();
        let mut hi = outer[0].clone();
        for p in rings3.iter().flatten() {
            for i in 0..3 {
                if p.0[i] < lo.0[i] {
                    lo.0[i] = p.0[i].clone();
                }
                if p.0[i] > hi.0[i] {
                    hi.0[i] = p.0[i].clone();
                }
            }
        }
        FaceGeom { normal, drop, offset, rings3, lo, hi }
    }

    fn project(&self, p: &Vec3) -> P2 {
        (p.0[(self.drop + 1) % 3].clone(), p.0[(self.drop + 2) % 3].clone())
    }

    fn rings2(&self) -> Vec<Vec<P2>> {
        self.rings3.iter().map(|r| r.iter().map(|p| self.project(p)).collect()).collect()
    }

    fn segments(&self) -> impl Iterator<Item = (&Vec3, &Vec3)> {
        self.rings3.iter().flat_map(|r| (0..r.len()).map(move |k| (&r[k], &r[(k + 1) % r.len()])))
    }

    fn is_axis(&self) -> bool {
        self.normal.support() == 1
    }

    fn boxes_touch(&self, o: &FaceGeom) -> bool {
        (0..3).all(|i| self.lo.0[i] <= o.hi.0[i] && o.lo.0[i] <= self.hi.0[i])
    }

    fn is_simple(&self) -> bool {
        let segs: Vec<(P2, P2)> = self
            .rings2()
            .iter()
            .flat_map(|r| (0..r.len()).map(move |k| (r[k].clone(), r[(k + 1) % r.len()].clone())))
            .collect();
        let ring_of: Vec<(usize, usize, usize)> = self
            .rings3
            .iter()
            .enumerate()
            .flat_map(|(ri, r)| (0..r.len()).map(move |k| (ri, k, r.len())))
            .collect();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (ri, ki, ni) = ring_of[i];
                let (rj, kj, _) = ring_of[j];
                let adjacent = ri == rj && ((ki + 1) % ni == kj || (kj + 1) % ni == ki);
                let (a, b) = (&segs[i].0, &segs[i].1);
                let (c, d) = (&segs[j].0, &segs[j].1);
                if adjacent {
                    // Shared endpoint only; overlapping collinear pieces fold back.
                    let (shared, other_i, other_j) = if (ki + 1) % ni == kj { (b, a, d) } else { (a, b, c) };
                    if cross2(shared, other_i, other_j).is_zero() {
                        let u = (&other_i.0 - &shared.0, &other_i.1 - &shared.1);
                        let v = (&other_j.0 - &shared.0, &other_j.1 - &shared.1);
                        if (&u.0 * &v.0 + &u.1 * &v.1).is_positive() {
                            return false;
                        }
                    }
                } else if segments_touch(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    fn term(&self) -> Q {
        let mut acc = Q::zero();
        for r in &self.rings3 {
            for k in 1..r.len() - 1 {
                acc += r[0].dot(&r[k].cross(&r[k + 1]));
            }
        }
        acc
    }
}

fn conflict(a: Loc, b: Loc) -> bool {
    (a == Loc::Inside && b != Loc::Outside) || (b == Loc::Inside && a != Loc::Outside)
}

fn sorted_unique(mut v: Vec<Q>) -> Vec<Q> {
    v.sort();
    v.dedup();
    v
}

fn with_midpoints(v: &[Q]) -> Vec<Q> {
    let mut out = Vec::with_capacity(2 * v.len());
    for k in 0..v.len() {
        out.push(v[k].clone());
        if k + 1 < v.len() {
            out.push((&v[k] + &v[k + 1]) / q(2));
        }
    }
    out
}

fn coplanar_conflict(fa: &FaceGeom, fb: &FaceGeom) -> bool {
    let (ra, rb) = (fa.rings2(), fb.rings2());
    // Edges of one face against the interior of the other.
    for (src, dst) in [(&ra, &rb), (&rb, &ra)] {
        for ring in src.iter() {
            for k in 0..ring.len() {
                let (p, r) = (&ring[k], &ring[(k + 1) % ring.len()]);
                let d = (&r.0 - &p.0, &r.1 - &p.1);
                let dd = &d.0 * &d.0 + &d.1 * &d.1;
                let mut ts = vec![Q::zero(), q(1)];
                for other in dst.iter() {
                    for m in 0..other.len() {
                        let (s, e) = (&other[m], &other[(m + 1) % other.len()]);
                        let w = (&e.0 - &s.0, &e.1 - &s.1);
                        let den = &d.0 * &w.1 - &d.1 * &w.0;
                        if den.is_zero() {
                            for x in [s, e] {
                                ts.push(((&x.0 - &p.0) * &d.0 + (&x.1 - &p.1) * &d.1) / &dd);
                            }
                        } else {
                            ts.push(((&s.0 - &p.0) * &w.1 - (&s.1 - &p.1) * &w.0) / den);
                        }
                    }
                }
                let ts = sorted_unique(ts.into_iter().filter(|t| !t.is_negative() && *t <= q(1)).collect());
                for t in with_midpoints(&ts) {
                    let pt = (&p.0 + &d.0 * &t, &p.1 + &d.1 * &t);
                    if locate(&pt, dst) == Loc::Inside {
                        return true;
                    }
                }
            }
        }
    }
    // Interiors, sampled at the cell centres of the joint vertex grid.
    let xs = sorted_unique(ra.iter().chain(rb.iter()).flatten().map(|p| p.0.clone()).collect());
    let ys = sorted_unique(ra.iter().chain(rb.iter()).flatten().map(|p| p.1.clone()).collect());
    for x in xs.windows(2).map(|w| (&w[0] + &w[1]) / q(2)) {
        for y in ys.windows(2).map(|w| (&w[0] + &w[1]) / q(2)) {
            let pt = (x.clone(), y);
            if conflict(locate(&pt, &ra), locate(&pt, &rb)) {
                return true;
            }
        }
    }
    false
}

/// Parameters along the common line (coordinate `k`) where `f`'s boundary
/// meets the plane `coord[b] = cb`.
fn crossings(f: &FaceGeom, b: usize, cb: &Q, k: usize, out: &mut Vec<Q>) {
    for (p, r) in f.segments() {
        let (pb, rb) = (&p.0[b] - cb, &r.0[b] - cb);
        if pb.is_zero() {
            out.push(p.0[k].clone());
        }
        if rb.is_zero() {
            out.push(r.0[k].clone());
        }
        if (pb.is_positive() && rb.is_negative()) || (pb.is_negative() && rb.is_positive()) {
            let t = &pb / (&pb - &rb);
            out.push(&p.0[k] + (&r.0[k] - &p.0[k]) * t);
        }
    }
}

fn perpendicular_conflict(fa: &FaceGeom, fb: &FaceGeom) -> bool {
    let (a, b) = (fa.normal.support_axis(), fb.normal.support_axis());
    let k = 3 - a - b;
    let ca = fa.rings3[0][0].0[a].clone();
    let cb = fb.rings3[0][0].0[b].clone();
    let mut ts = Vec::new();
    crossings(fa, b, &cb, k, &mut ts);
    crossings(fb, a, &ca, k, &mut ts);
    let ts = sorted_unique(ts);
    let (ra, rb) = (fa.rings2(), fb.rings2());
    for t in with_midpoints(&ts) {
        let mut p = Vec3::zero();
        p.0[a] = ca.clone();
        p.0[b] = cb.clone();
        p.0[k] = t;
        if conflict(locate(&fa.project(&p), &ra), locate(&fb.project(&p), &rb)) {
            return true;
        }
    }
    false
}

trait SupportAxis {
    fn support_axis(&self) -> usize;
}

impl SupportAxis for Vec3 {
    fn support_axis(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).expect("nonzero normal")
    }
}

fn check_faces(coords: &[Vec3], faces: Vec<Vec<Vec<usize>>>) -> Result<(), EmbeddingViolation> {
    let mut seen: HashMap<&Vec3, usize> = HashMap::new();
    for (v, p) in coords.iter().enumerate() {
        if let Some(&a) = seen.get(p) {
            return Err(EmbeddingViolation::DuplicateVertex { a, b: v });
        }
        seen.insert(p, v);
    }
    let geoms: Vec<FaceGeom> = faces
        .iter()
        .map(|rings| FaceGeom::new(rings.iter().map(|r| r.iter().map(|&v| coords[v].clone()).collect()).collect()))
        .collect();
    for (f, g) in geoms.iter().enumerate() {
        if g.normal.is_zero() {
            return Err(EmbeddingViolation::DegenerateFace { face: f });
        }
        if g.rings3.iter().flatten().any(|p| g.normal.dot(p) != g.offset) {
            return Err(EmbeddingViolation::NonPlanarFace { face: f });
        }
        if !g.is_simple() {
            return Err(EmbeddingViolation::SelfIntersectingFace { face: f });
        }
    }
    for i in 0..geoms.len() {
        for j in i + 1..geoms.len() {
            let (fa, fb) = (&geoms[i], &geoms[j]);
            if !fa.boxes_touch(fb) {
                continue;
            }
            let hit = if fa.normal.parallel(&fb.normal) {
                // Same plane iff the offsets agree after scaling to one normal.
                let ratio = fb.normal.dot(&fa.normal) / fa.normal.norm2();
                if fb.offset != &fa.offset * &ratio {
                    continue;
                }
                coplanar_conflict(fa, fb)
            } else if fa.is_axis() && fb.is_axis() {
                perpendicular_conflict(fa, fb)
            } else {
                return Err(EmbeddingViolation::Unsupported { a: i, b: j });
            };
            if hit {
                return Err(EmbeddingViolation::FacesIntersect { a: i, b: j });
            }
        }
    }
    let volume: Q = geoms.iter().map(FaceGeom::term).sum();
    if !volume.is_positive() {
        return Err(EmbeddingViolation::NonPositiveVolume);
    }
    Ok(())
}

/// Checks that `coords` embed the faces of `cp` as a simple closed surface.
pub fn check_embedding(cp: &CombinatorialPoly, coords: &[Vec3]) -> Result<(), EmbeddingViolation> {
    check_faces(coords, cp.faces.iter().map(|f| vec![f.clone()]).collect())
}

/// Same test on a mesh, hole rings included.
pub fn check_surface_embedding(mesh: &SurfaceMesh) -> Result<(), EmbeddingViolation> {
    check_faces(mesh.positions(), mesh.faces().iter().map(|f| f.rings.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::test_support::cube_cp;

    fn cube_coords(a: i64, b: i64, c: i64) -> Vec<Vec3> {
        (0..8).map(|i| Vec3::from_ints(a * (i & 1), b * ((i >> 1) & 1), c * ((i >> 2) & 1))).collect()
    }

    #[test]
    fn cube_embeds() {
        assert_eq!(check_embedding(&cube_cp(1, 1, 1), &cube_coords(1, 1, 1)), Ok(()));
    }

    #[test]
    fn inside_out_cube_has_negative_volume() {
        let mut cp = cube_cp(1, 1, 1);
        for f in &mut cp.faces {
            f.reverse();
        }
        assert_eq!(check_embedding(&cp, &cube_coords(1, 1, 1)), Err(EmbeddingViolation::NonPositiveVolume));
    }

    #[test]
    fn duplicate_coordinates() {
        let mut c = cube_coords(1, 1, 1);
        c[7] = c[0].clone();
        assert_eq!(check_embedding(&cube_cp(1, 1, 1), &c), Err(EmbeddingViolation::DuplicateVertex { a: 0, b: 7 }));
    }

    #[test]
    fn point_location() {
        let sq = vec![vec![(q(0), q(0)), (q(2), q(0)), (q(2), q(2)), (q(0), q(2))]];
        assert_eq!(locate(&(q(1), q(1)), &sq), Loc::Inside);
        assert_eq!(locate(&(q(2), q(1)), &sq), Loc::Boundary);
        assert_eq!(locate(&(q(3), q(1)), &sq), Loc::Outside);
        assert_eq!(locate(&(q(0), q(0)), &sq), Loc::Boundary);
    }
}
