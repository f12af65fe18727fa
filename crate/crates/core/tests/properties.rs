use proptest::prelude::*;
use tetrakit::heron_forms::{reversible_factors, reversible_volume_sq_expanded};
use tetrakit::linalg3::{cross, dot};
use tetrakit::sampling::rotation;
use tetrakit::sampling::seeded_rng;
use tetrakit::tetra::{DEFAULT_CLASSIFY_TOL, EDGE_PAIRS};
use tetrakit::*;

fn rel(x: f64, y: f64) -> f64 {
    let s = x.abs().max(y.abs());
    if s == 0.0 {
        0.0
    } else {
        (x - y).abs() / s
    }
}

fn vec3() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-10.0..10.0f64).prop_map(|[x, y, z]| Vec3::new(x, y, z))
}

/// Tetrahedra with 6V ≥ 1e-3·L³, so volume comparisons stay well conditioned.
fn tetrahedron() -> impl Strategy<Value = Tetrahedron> {
    prop::array::uniform4(vec3()).prop_filter_map("flat", |v| {
        let t = Tetrahedron::new(v).ok()?;
        (t.six_volume() >= 1e-3 * t.longest_edge().powi(3)).then_some(t)
    })
}

fn reversible() -> impl Strategy<Value = ReversibleParams> {
    prop::array::uniform4(0.1..10.0f64).prop_filter_map("not realizable", |[a, b, c, d]| {
        let p = ReversibleParams::new(a, b, c, d).ok()?;
        let r = realizability(&p);
        (r.realizable && r.degeneracy_kind == DegeneracyKind::None).then_some(p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cross_is_orthogonal(u in vec3(), v in vec3()) {
        let w = cross(u, v);
        let scale = u.norm() * v.norm() * w.norm().max(1.0);
        prop_assert!(dot(w, u).abs() <= 1e-13 * scale.max(1.0));
        prop_assert!(dot(w, v).abs() <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn det_is_triple_product(u in vec3(), v in vec3(), w in vec3()) {
        let m = Mat3::from_cols(u, v, w);
        let triple = dot(u, cross(v, w));
        prop_assert!((m.det() - triple).abs() <= 1e-12 * (u.norm() * v.norm() * w.norm()).max(1.0));
    }

    #[test]
    fn volume_oracles_agree(t in tetrahedron()) {
        let v2 = volume_from_vertices(&t).powi(2);
        let cm = cayley_menger_volume_sq(&edge_lengths(&t));
        prop_assert!(rel(v2, cm) <= 1e-9, "{v2} vs {cm}");
    }

    #[test]
    fn volume_is_rigid_and_homogeneous(t in tetrahedron(), shift in vec3(), seed in any::<u64>(), s in 0.1..10.0f64) {
        let v = volume_from_vertices(&t);
        let r = rotation(&mut seeded_rng(seed));
        prop_assert!(rel(volume_from_vertices(&t.translated(shift)), v) <= 1e-9);
        prop_assert!(rel(volume_from_vertices(&t.transformed(&r)), v) <= 1e-9);
        prop_assert!(rel(volume_from_vertices(&t.scaled(s)), s.powi(3) * v) <= 1e-12);
    }

    #[test]
    fn facet_normals_close_and_point_outward(t in tetrahedron()) {
        let d = facet_data(&t).unwrap();
        let scale = d.areas().iter().copied().fold(0.0, f64::max);
        prop_assert!(d.weighted_normal_sum().norm() <= 1e-12 * scale);
        for (i, f) in facets(&t).iter().enumerate() {
            let n = d.record(i).normal;
            prop_assert!((n.norm() - 1.0).abs() <= 1e-12);
            prop_assert!(dot(n, t.vertex(i) - f.centroid()) < 0.0);
            prop_assert!(rel(d.record(i).area, f.area()) <= 1e-12);
        }
    }

    #[test]
    fn reconstruction_round_trips(t in tetrahedron()) {
        let d = facet_data(&t).unwrap();
        let r = reconstruct(&d).unwrap();
        prop_assert!(!r.relabeled);
        prop_assert!(r.roundtrip_normal_error <= 1e-8);
        prop_assert!(r.roundtrip_area_error <= 1e-8);
        prop_assert!(uniqueness_check(&d, &r.tetrahedron, &t.at_origin()));
    }

    #[test]
    fn reversible_volume_matches_oracles(p in reversible()) {
        let formula = reversible_volume_sq(&p);
        let t = build_reversible(&p).unwrap();
        prop_assert!(rel(formula, volume_from_vertices(&t).powi(2)) <= 1e-9);
        prop_assert!(rel(formula, cayley_menger_volume_sq(&p.edge_lengths().unwrap())) <= 1e-9);
        let [f1, f2, f3] = reversible_factors(&p);
        prop_assert!(rel(formula, f1 * f2 * f3 / 72.0) <= 1e-15);
        let floor = p.max_length().powi(6) / 72.0;
        prop_assert!((formula - reversible_volume_sq_expanded(&p)).abs() <= 1e-12 * formula.abs().max(floor));
    }

    #[test]
    fn reversible_builds_are_reversible(p in reversible()) {
        let t = build_reversible(&p).unwrap();
        let c = classify(&t, DEFAULT_CLASSIFY_TOL).unwrap();
        prop_assert!(c.verdict >= Verdict::Reversible);
        let l = edge_lengths(&t);
        let want = p.edge_lengths().unwrap();
        for (i, j) in EDGE_PAIRS {
            prop_assert!(rel(l.get(i, j), want.get(i, j)) <= 1e-12);
        }
    }

    #[test]
    fn reversible_volume_is_degree_six(p in reversible(), s in 0.1..10.0f64) {
        let q = p.scaled(s).unwrap();
        prop_assert!(rel(reversible_volume_sq(&q), s.powi(6) * reversible_volume_sq(&p)) <= 1e-12);
    }

    #[test]
    fn isosceles_is_the_reversible_special_case(a in 0.1..10.0f64, b in 0.1..10.0f64, c in 0.1..10.0f64) {
        let p = ReversibleParams::new(a, b, c, c);
        prop_assume!(p.is_ok());
        prop_assert!(rel(reversible_volume_sq(&p.unwrap()), isosceles_volume_sq(a, b, c)) <= 1e-13);
    }

    #[test]
    fn regge_actions_are_volume_preserving_involutions(p in reversible()) {
        let v2 = reversible_volume_sq(&p);
        for action in ReggeAction::ALL {
            let Ok(q) = regge_transform(&p, action) else { continue };
            prop_assert!(rel(reversible_volume_sq(&q), v2) <= 1e-9);
            let back = regge_transform(&q, action).unwrap();
            for (x, y) in back.as_array().iter().zip(p.as_array()) {
                prop_assert!(rel(*x, y) <= 1e-12);
            }
        }
    }

    #[test]
    fn reversible_pairing_has_equal_perimeters(p in reversible()) {
        let l = p.edge_lengths().unwrap();
        let check = perimeter_pairing_implication(&l, FacetPairing::P01_23, 1e-12);
        prop_assert!(check.perimeters_match);
        prop_assert_eq!(check.implied_hold, Some(true));
    }
}

#[test]
fn classification_is_rotation_invariant() {
    let t = build_reversible(&ReversibleParams::new(3.0, 4.0, 4.0, 3.0).unwrap()).unwrap();
    let r = rotation(&mut seeded_rng(11));
    let moved = t.transformed(&r).translated(Vec3::new(1.0, -2.0, 5.0));
    let a = classify(&t, DEFAULT_CLASSIFY_TOL).unwrap();
    let b = classify(&moved, DEFAULT_CLASSIFY_TOL).unwrap();
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.passing_pairings(), b.passing_pairings());
}
