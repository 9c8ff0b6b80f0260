use nilprofile::measures::{riem_area, s3_area, Dilated, LeftTranslated, PlanePatch, SpherePatch};
use nilprofile::GroupPoint;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn horizontal_plane_weight_is_abs_x() {
    // z-plane over [x0, x1] × [y0, y1] with x0 ≥ 0: ∫|x| = (x1² − x0²)/2 · Δy.
    let p = PlanePatch::new(2, 0.3, [0.2, -1.0], [1.1, 0.5]);
    let got = s3_area(&p, 1.0).unwrap().value;
    let want = 0.5 * (1.1f64.powi(2) - 0.2f64.powi(2)) * 1.5;
    assert!(rel(got, want) < 1e-12, "{got} vs {want}");
}

#[test]
fn vertical_planes_have_unit_weight() {
    let p = PlanePatch::new(0, 0.7, [-0.5, 0.0], [0.5, 2.0]);
    assert!(rel(s3_area(&p, 0.3).unwrap().value, 2.0) < 1e-12);
}

fn sphere() -> impl Strategy<Value = SpherePatch> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.1..1.0f64).prop_map(|(x, y, z, r)| SpherePatch {
        center: GroupPoint::new(x, y, z),
        radius: r,
        order: 12,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn left_translation_preserves_measures(s in sphere(), g in prop::array::uniform3(-2.0..2.0f64), eps in 0.2..2.0f64) {
        let moved = LeftTranslated { by: g.into(), inner: &s };
        prop_assert!(rel(s3_area(&moved, eps).unwrap().value, s3_area(&s, eps).unwrap().value) < 1e-9);
        prop_assert!(rel(riem_area(&moved, eps).unwrap().value, riem_area(&s, eps).unwrap().value) < 1e-9);
    }

    #[test]
    fn dilation_scales_s3_by_t_cubed(s in sphere(), t in 0.2..4.0f64) {
        let d = Dilated { t, inner: &s };
        let ratio = s3_area(&d, 1.0).unwrap().value / s3_area(&s, 1.0).unwrap().value;
        prop_assert!(rel(ratio, t.powi(3)) < 1e-9);
    }
}
