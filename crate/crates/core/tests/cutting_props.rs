use nilprofile::cutting::{choose_cut_levels, fiber_slices, full_reduction, log_cut, pillar_cut};
use nilprofile::domains::{domain_volume, Ambient, VolumeKind};
use nilprofile::samples::random_blob;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificates_hold_and_volume_is_conserved(seed in 0u64..100_000, scale in 0.2..1.3f64) {
        let d = random_blob(seed, Ambient::Quotient { t: 1.0 }, [32; 3], scale).unwrap();
        let v = domain_volume(&d, VolumeKind::S4).unwrap().value;
        let (pillar, c1) = pillar_cut(&d).unwrap();
        prop_assert!(c1.slack >= 0.0, "{c1:?}");
        prop_assert_eq!(pillar.domain().occupied_count(), d.occupied_count());
        let lc = log_cut(&pillar).unwrap();
        prop_assert!(lc.certificate.slack >= 0.0, "{:?}", lc.certificate);
        let out = domain_volume(&lc.domain, VolumeKind::S4).unwrap().value;
        prop_assert!(out <= v * (1.0 + 1e-12));
        let red = full_reduction(&d).unwrap();
        prop_assert!(red.certificates.iter().all(|c| c.holds()));
    }

    #[test]
    fn slices_sum_to_volume_and_levels_are_minimal(seed in 0u64..100_000) {
        let d = random_blob(seed, Ambient::Quotient { t: 1.0 }, [24; 3], 1.0).unwrap();
        let v = domain_volume(&d, VolumeKind::S4).unwrap().value;
        for axis in 0..2 {
            let h = d.spacing()[axis];
            let total: f64 = fiber_slices(&d, axis).unwrap().iter().map(|s| s.measure * h).sum();
            prop_assert!((total - v).abs() <= 1e-12 * v.max(1.0));
        }
        let levels = choose_cut_levels(&d).unwrap();
        prop_assert!(levels.m_x <= v + 1e-12 && levels.m_y <= v + 1e-12);
        let xs = fiber_slices(&d, 0).unwrap();
        prop_assert!(xs[..levels.ix].iter().all(|s| s.measure > v));
    }
}
