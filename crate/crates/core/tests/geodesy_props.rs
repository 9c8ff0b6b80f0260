use nilprofile::geodesy::{d_cc, d_eps};
use nilprofile::group::{dilate, group_mul};
use nilprofile::GroupPoint;
use proptest::prelude::*;

const K: usize = 12;
// Discretisation tolerance for K-edge paths.
const TOL: f64 = 1e-2;

fn point() -> impl Strategy<Value = GroupPoint> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, z)| GroupPoint::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn cc_distance_left_invariant(p in point(), q in point(), g in point()) {
        let a = d_cc(&p, &q, K).unwrap().value;
        let b = d_cc(&group_mul(&g, &p), &group_mul(&g, &q), K).unwrap().value;
        prop_assert!((a - b).abs() <= TOL * a, "{a} vs {b}");
    }

    #[test]
    fn cc_distance_homogeneous(p in point(), q in point(), t in 0.3..3.0f64) {
        let a = d_cc(&p, &q, K).unwrap().value;
        let b = d_cc(&dilate(t, &p).unwrap(), &dilate(t, &q).unwrap(), K).unwrap().value;
        prop_assert!((b - t * a).abs() <= TOL * t * a, "{b} vs {}", t * a);
    }

    #[test]
    fn riemannian_distance_increases_as_eps_shrinks(p in point(), q in point()) {
        let coarse = d_eps(&p, &q, 1.0, K).unwrap().value;
        let fine = d_eps(&p, &q, 0.2, K).unwrap().value;
        let cc = d_cc(&p, &q, K).unwrap().value;
        prop_assert!(fine >= coarse * (1.0 - TOL));
        prop_assert!(fine <= cc * (1.0 + TOL));
        let horizontal = (q.x - p.x).hypot(q.y - p.y);
        prop_assert!(coarse >= horizontal * (1.0 - 1e-9));
    }
}

#[test]
fn distance_to_self_is_zero() {
    let p = GroupPoint::new(0.3, -0.2, 0.9);
    assert_eq!(d_cc(&p, &p, K).unwrap().value, 0.0);
}

#[test]
fn rejects_short_paths() {
    assert!(d_cc(&GroupPoint::IDENTITY, &GroupPoint::new(1.0, 0.0, 0.0), 3).is_err());
}
