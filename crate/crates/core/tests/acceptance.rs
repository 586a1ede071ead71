//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orthopoly::angles::{angle_report, dihedral_at_halfedge, turning_sums, AngleTag};
use orthopoly::gallery::{self, measure};
use orthopoly::geom::{q, Vec3};
use orthopoly::mesh::{Arithmetic, SurfaceMesh};
use orthopoly::orthotest::{is_orthogonal, propagate_alignment, Frame};
use orthopoly::reconstruct::{congruent_orthogonal, extract_combinatorial, reconstruct, DihedralLabel, ReconstructOutcome};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_dihedral_right(mesh: &SurfaceMesh) -> bool {
    angle_report(mesh).unwrap().dihedral.iter().all(|d| matches!(d.angle.tag, AngleTag::RightMultiple(1 | 3)))
}

fn all_facial_right(mesh: &SurfaceMesh) -> bool {
    angle_report(mesh).unwrap().facial.iter().all(|f| matches!(f.angle.tag, AngleTag::RightMultiple(1 | 3)))
}

/// Every rotated edge vector has at most one nonzero component.
fn witness_ok(mesh: &SurfaceMesh, frame: &Frame) -> bool {
    (0..mesh.num_edges()).all(|e| {
        let (u, v) = mesh.edge_endpoints(e);
        let w = frame.apply(&(mesh.position(v) - mesh.position(u)));
        w.0.iter().filter(|c| !c.is_zero()).count() <= 1
    })
}

fn theorem_suite() -> Check {
    let rotations = gallery::seeded_rotations(10, 0x5eed);
    let mut runs = 0;
    for entry in gallery::all_entries() {
        let m = &entry.mesh;
        let report = angle_report(m).unwrap();
        if m.graph_components().count != 1 || !m.all_simple() || !report.hypotheses_hold() {
            continue;
        }
        for (k, r) in std::iter::once(None).chain(rotations.iter().map(Some)).enumerate() {
            let mesh = match r {
                Some(r) => m.transformed(r, &Vec3::from_ints(k as i64, 1, -2)).unwrap(),
                None => m.clone(),
            };
            for (which, verdict) in [("is_orthogonal", is_orthogonal(&mesh)), ("propagate_alignment", propagate_alignment(&mesh))] {
                let frame = verdict.frame().ok_or_else(|| format!("{} rotation {k}: {which} says not orthogonal", entry.name))?;
                ensure(witness_ok(&mesh, frame), || format!("{} rotation {k}: {which} witness leaves an edge off-axis", entry.name))?;
            }
            runs += 1;
        }
    }
    ensure(runs >= 5 * 11, || format!("only {runs} qualifying meshes"))?;
    Ok(format!("{runs} meshes, both procedures, exact witnesses"))
}

fn fig1_left() -> Check {
    let m = gallery::make_fig1_left();
    let comps = m.graph_components().count;
    ensure(comps == 2, || format!("components = {comps}"))?;
    ensure(all_facial_right(&m), || "a facial angle outside {π/2, 3π/2}".into())?;
    ensure(all_dihedral_right(&m), || "a dihedral angle outside {π/2, 3π/2}".into())?;
    ensure(!is_orthogonal(&m).orthogonal, || "reported orthogonal".into())?;
    Ok("components 2, facial and dihedral in {π/2, 3π/2}, not orthogonal".into())
}

fn fig1_middle() -> Check {
    let m = gallery::make_fig1_middle();
    ensure(m.graph_components().count == 1, || "graph disconnected".into())?;
    let fives = m.vertex_degrees().iter().filter(|&&d| d == 5).count();
    ensure(fives >= 1, || "no degree-5 vertex".into())?;
    ensure(all_dihedral_right(&m), || "a dihedral angle outside {π/2, 3π/2}".into())?;
    ensure(!is_orthogonal(&m).orthogonal, || "reported orthogonal".into())?;
    let report = angle_report(&m).unwrap();
    let odd = report.first_non_right_facial().ok_or("every facial angle is a right multiple")?;
    Ok(format!("connected, {fives} degree-5 vertices, facial {} present, not orthogonal", odd.angle.describe()))
}

fn fig1_right() -> Check {
    let m = gallery::make_fig1_right();
    ensure(m.graph_components().count == 1, || "graph disconnected".into())?;
    let genus = m.euler_genus().map_err(|e| e.to_string())?;
    ensure(genus == vec![0], || format!("genus {genus:?}"))?;
    let degrees: BTreeSet<usize> = m.vertex_degrees().into_iter().collect();
    ensure(degrees.iter().all(|d| *d == 3 || *d == 4), || format!("degrees {degrees:?}"))?;
    let corners = measure(&m)?.corner_histogram;
    ensure(corners.keys().all(|&k| k == 4), || format!("face corner counts {corners:?}"))?;
    ensure(all_dihedral_right(&m), || "a dihedral angle outside {π/2, 3π/2}".into())?;
    ensure(!is_orthogonal(&m).orthogonal, || "reported orthogonal".into())?;
    Ok(format!(
        "connected, genus [0], degrees {degrees:?}, {} faces with 4 corners (straight vertices not counted), not orthogonal",
        corners.get(&4).copied().unwrap_or(0)
    ))
}

fn round_trip() -> Check {
    let mut slowest = Duration::ZERO;
    for name in ["cube", "box_1x2x3", "l_prism", "box_with_flush_pit", "fig1_right_ortho"] {
        let mesh = gallery::build(name).unwrap().mesh;
        let start = Instant::now();
        let cp = extract_combinatorial(&mesh).map_err(|e| format!("{name}: {e}"))?;
        let outcome = reconstruct(&cp).map_err(|e| format!("{name}: {e}"))?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let r = outcome.realization().ok_or_else(|| format!("{name}: no solution"))?;
        ensure(r.solution_count == 1, || format!("{name}: solution_count = {}", r.solution_count))?;
        ensure(congruent_orthogonal(&r.mesh, &mesh), || format!("{name}: not congruent"))?;
        ensure(elapsed < Duration::from_secs(1), || format!("{name}: took {elapsed:?}"))?;
    }
    Ok(format!("5 shapes, solution_count 1, congruent, slowest {} ms", slowest.as_millis()))
}

fn non_realizable() -> Check {
    let cube = extract_combinatorial(&gallery::build("cube").unwrap().mesh).unwrap();
    for e in 0..cube.edges.len() {
        let mut cp = cube.clone();
        cp.edges[e].label = DihedralLabel::Reflex;
        ensure(!reconstruct(&cp).unwrap().is_realized(), || format!("cube with reflex edge {e} realized"))?;
    }
    let middle = gallery::make_fig1_middle();
    let geometric: Vec<DihedralLabel> = angle_report(&middle)
        .unwrap()
        .dihedral
        .iter()
        .map(|d| if d.angle.tag == AngleTag::RightMultiple(3) { DihedralLabel::Reflex } else { DihedralLabel::Convex })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut kinds = BTreeSet::new();
    for k in 0..20 {
        let labels: Vec<DihedralLabel> = if k == 0 {
            geometric.clone()
        } else {
            (0..middle.num_edges()).map(|_| if rng.gen_bool(0.3) { DihedralLabel::Reflex } else { DihedralLabel::Convex }).collect()
        };
        let lengths: Vec<i64> = (0..middle.num_edges()).map(|_| rng.gen_range(1..6)).collect();
        let cp = common::graph_cp(&middle, |e| q(lengths[e]), |e| labels[e]);
        match reconstruct(&cp).map_err(|e| format!("labeling {k}: {e}"))? {
            ReconstructOutcome::Realized(_) => return Err(format!("fig1_middle labeling {k} realized")),
            ReconstructOutcome::NoSolution { kind, .. } => {
                kinds.insert(serde_json::to_value(&kind).unwrap()["kind"].as_str().unwrap().to_string());
            }
        }
    }
    Ok(format!("12 single-reflex cubes and 20 fig1_middle labelings: NoSolution ({})", kinds.into_iter().collect::<Vec<_>>().join(", ")))
}

fn oracle_equivalence() -> Check {
    let corpus = common::small_corpus();
    let mut frames = 0;
    for (name, cp) in &corpus {
        ensure(cp.faces.len() <= 8, || format!("{name} has {} faces", cp.faces.len()))?;
        let expected = common::brute_force_normals(cp);
        let got = common::solver_normals(cp);
        ensure(got == expected, || format!("{name}: solver {} frames, brute force {}", got.len(), expected.len()))?;
        frames += expected.len();
    }
    Ok(format!("{} instances, {frames} frames, identical sets", corpus.len()))
}

fn angle_identities() -> Check {
    let mut rings = 0;
    let mut edges = 0;
    for entry in gallery::all_entries() {
        let m = &entry.mesh;
        for t in turning_sums(m).map_err(|e| e.to_string())? {
            ensure(t.holds(), || format!("{} face {} ring {}: winding {}", entry.name, t.face, t.ring, t.winding))?;
            rings += 1;
        }
        for e in m.edges() {
            let [h, t] = e.halfedges;
            let (a, b) = (dihedral_at_halfedge(m, h).unwrap(), dihedral_at_halfedge(m, t).unwrap());
            ensure(a.tag == b.tag && (a.value - b.value).abs() < 1e-12, || format!("{}: asymmetric dihedral at half-edge {h}", entry.name))?;
            edges += 1;
        }
        let exact = angle_report(m).unwrap();
        let float = angle_report(&m.clone().with_mode(Arithmetic::float_with(1e-7))).unwrap();
        let tags = |r: &orthopoly::angles::AngleReport| {
            (r.facial.iter().map(|f| f.angle.tag).collect::<Vec<_>>(), r.dihedral.iter().map(|d| d.angle.tag).collect::<Vec<_>>())
        };
        ensure(tags(&exact) == tags(&float), || format!("{}: exact and float classifications differ", entry.name))?;
    }
    Ok(format!("{rings} rings turn ±2π, {edges} edges symmetric, exact = float"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("theorem suite", theorem_suite),
        ("fig1_left", fig1_left),
        ("fig1_middle", fig1_middle),
        ("fig1_right", fig1_right),
        ("reconstruction round trip", round_trip),
        ("non-realizability", non_realizable),
        ("oracle equivalence", oracle_equivalence),
        ("angle identities", angle_identities),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail} [{} ms]", i + 1, t.elapsed().as_millis()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 8 passed in {} ms", 8 - failed, start.elapsed().as_millis());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
