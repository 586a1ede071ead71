//! Invariance of verdicts under rotation, translation and scaling.

use proptest::prelude::*;

use orthopoly::angles::angle_report;
use orthopoly::gallery;
use orthopoly::geom::{qf, Mat3, Vec3};
use orthopoly::orthotest::{frame_aligns, is_orthogonal, propagate_alignment, theorem2_check};
use orthopoly::reconstruct::{congruent_orthogonal, extract_combinatorial, reconstruct};

fn tags(mesh: &orthopoly::mesh::SurfaceMesh) -> (Vec<String>, Vec<String>) {
    let r = angle_report(mesh).unwrap();
    (
        r.facial.iter().map(|f| f.angle.tag.to_string()).collect(),
        r.dihedral.iter().map(|d| d.angle.tag.to_string()).collect(),
    )
}

fn quaternion() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4).prop_filter("nonzero", |(w, x, y, z)| (w, x, y, z) != (&0, &0, &0, &0))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn rotation_keeps_angles_and_verdict(entry in 0..gallery::NAMES.len(), (w, x, y, z) in quaternion(), t in -5i64..5) {
        let e = gallery::build(gallery::NAMES[entry]).unwrap();
        let r = Mat3::from_quaternion(w, x, y, z);
        let moved = e.mesh.transformed(&r, &Vec3::from_ints(t, -t, 2 * t)).unwrap();
        prop_assert_eq!(tags(&moved), tags(&e.mesh));
        let verdict = is_orthogonal(&moved);
        prop_assert_eq!(verdict.orthogonal, e.checklist.orthogonal);
        if let Some(fr) = verdict.frame() {
            prop_assert!(frame_aligns(&moved, fr));
        }
        if moved.graph_components().count == 1 {
            prop_assert_eq!(propagate_alignment(&moved).orthogonal, verdict.orthogonal);
        }
        prop_assert!(theorem2_check(&moved));
    }

    #[test]
    fn scaling_commutes_with_reconstruction(entry in prop::sample::select(vec!["cube", "box_1x2x3", "l_prism", "box_with_flush_pit"]), num in 1i64..7, den in 1i64..5) {
        let mesh = gallery::build(entry).unwrap().mesh;
        let scale = qf(num, den);
        let m = Mat3(Mat3::identity().0.map(|row| row.scale(&scale)));
        let scaled = mesh.transformed(&m, &Vec3::zero()).unwrap();
        let cp = extract_combinatorial(&mesh).unwrap();
        let outcome = reconstruct(&cp.scaled(&scale)).unwrap();
        let real = outcome.realization().expect("realizes");
        prop_assert_eq!(real.solution_count, 1);
        prop_assert!(congruent_orthogonal(&real.mesh, &scaled));
    }
}
