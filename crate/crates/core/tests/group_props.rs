use nilprofile::group::{canonical_rep, dilate, group_inv, group_mul, left_pushforward, theta};
use nilprofile::{GroupPoint, LatticeElement};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = GroupPoint> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| GroupPoint::new(x, y, z))
}

fn close(a: &GroupPoint, b: &GroupPoint, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol * (1.0 + a.coords().iter().map(|c| c.abs()).fold(0.0, f64::max))
}

proptest! {
    #[test]
    fn associative(a in point(), b in point(), c in point()) {
        prop_assert!(close(&group_mul(&group_mul(&a, &b), &c), &group_mul(&a, &group_mul(&b, &c)), 1e-12));
    }

    #[test]
    fn inverse_both_sides(a in point()) {
        prop_assert!(close(&group_mul(&a, &group_inv(&a)), &GroupPoint::IDENTITY, 1e-12));
        prop_assert!(close(&group_mul(&group_inv(&a), &a), &GroupPoint::IDENTITY, 1e-12));
    }

    #[test]
    fn contact_form_left_invariant(g in point(), p in point(), v in prop::array::uniform3(-1.0..1.0f64)) {
        let lhs = theta(&group_mul(&g, &p), left_pushforward(&g, v));
        prop_assert!((lhs - theta(&p, v)).abs() <= 1e-11);
    }

    #[test]
    fn dilations_compose_and_respect_products(a in point(), b in point(), s in 0.1..3.0f64, t in 0.1..3.0f64) {
        let lhs = dilate(t, &group_mul(&a, &b)).unwrap();
        let rhs = group_mul(&dilate(t, &a).unwrap(), &dilate(t, &b).unwrap());
        prop_assert!(close(&lhs, &rhs, 1e-12));
        let st = dilate(s, &dilate(t, &a).unwrap()).unwrap();
        prop_assert!(close(&st, &dilate(s * t, &a).unwrap(), 1e-12));
    }

    #[test]
    fn canonical_representative_in_fundamental_box(p in point(), t in 0.3..3.0f64) {
        let (q, g) = canonical_rep(&p, t).unwrap();
        prop_assert!(q.x >= 0.0 && q.x < t && q.y >= 0.0 && q.y < t && q.z >= 0.0 && q.z < t * t);
        prop_assert!(close(&g.act(t, &p), &q, 1e-10));
        prop_assert!(close(&g.inverse().act(t, &q), &p, 1e-10));
    }

    #[test]
    fn lattice_composition_matches_points(j in -4i64..4, k in -4i64..4, m in -4i64..4, t in 0.3..3.0f64) {
        let a = LatticeElement::new(j, k, m);
        let b = LatticeElement::new(k, m, j);
        let composed = a.compose(&b).to_point(t);
        prop_assert!(close(&composed, &group_mul(&a.to_point(t), &b.to_point(t)), 1e-12));
        prop_assert_eq!(a.compose(&a.inverse()), LatticeElement::IDENTITY);
    }
}
