use num_complex::Complex64;
use proptest::prelude::*;
use schwarz_lab::bounds::{self, Verdict};
use schwarz_lab::numerics::{image_arc_length, ArcSpec};
use schwarz_lab::{BoundaryPoint, DiskPoint, DiskSelfMap};

fn disk_point(cap: f64) -> impl Strategy<Value = DiskPoint> {
    (0.0..cap, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| DiskPoint::polar(r, t).unwrap())
}

prop_compose! {
    fn blaschke(max_free: usize)(
        origin in 0u32..3,
        free in prop::collection::vec((disk_point(0.95), 1u32..3), 1..=max_free),
        phase in 0.0..std::f64::consts::TAU,
    ) -> DiskSelfMap {
        let mut zeros = free;
        if origin > 0 {
            zeros.push((DiskPoint::ORIGIN, origin));
        }
        DiskSelfMap::new(phase, zeros, None).unwrap()
    }
}

prop_compose! {
    fn fixing_origin()(f in blaschke(5), origin in 1u32..3) -> DiskSelfMap {
        let mut zeros: Vec<_> = f.zeros().iter().filter(|z| !z.point.is_origin()).map(|z| (z.point, z.multiplicity)).collect();
        zeros.push((DiskPoint::ORIGIN, origin));
        DiskSelfMap::new(f.phase(), zeros, None).unwrap()
    }
}

prop_compose! {
    fn shifted()(f in blaschke(5), c in disk_point(0.8)) -> DiskSelfMap {
        f.post_compose(c)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn maps_disk_into_disk(f in shifted(), z in disk_point(1.0 - 1e-6)) {
        prop_assert!(f.eval_disk(z).norm() < 1.0);
    }

    #[test]
    fn unimodular_on_circle(f in shifted(), theta in -10.0..10.0f64) {
        let b = BoundaryPoint::new(theta).unwrap();
        prop_assert!((f.eval_boundary(b).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_is_bit_exact(f in shifted()) {
        let back = DiskSelfMap::from_json(&f.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn f_transform_fixes_origin(f in shifted()) {
        let t = f.f_transform();
        prop_assert!(t.eval(Complex64::new(0.0, 0.0)).unwrap().norm() <= 1e-13);
        prop_assert!(t.derivative_at_origin().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn boundary_chain_is_monotone(f in shifted(), theta in 0.0..std::f64::consts::TAU) {
        let b = BoundaryPoint::new(theta).unwrap();
        let julia = bounds::julia_type_bound(&f, b).unwrap();
        let general = bounds::general_boundary_bound(&f, b).unwrap();
        prop_assert!(julia.bound <= general.bound + 1e-15);
        prop_assert!(general.bound <= general.measured + 1e-9);
        prop_assert!(general.holds() && julia.holds());
    }

    #[test]
    fn lemma1_sound_and_strict(f in fixing_origin(), theta in 0.0..std::f64::consts::TAU) {
        let b = BoundaryPoint::new(theta).unwrap();
        let r = bounds::bound_lemma1(&f, b).unwrap();
        prop_assert!(r.slack >= -1e-9);
        let m = bounds::magnification(&f, b).unwrap();
        prop_assert!(m.strictness_holds());
        prop_assert!(f.derivative_at_origin().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn interior_and_quotient_forms_agree(f in fixing_origin(), z in disk_point(0.999)) {
        prop_assume!(z.modulus() > 1e-3);
        let i = bounds::interior_bound(&f, z).unwrap();
        let q = bounds::quotient_map_bound(&f, z).unwrap();
        let r = z.modulus();
        prop_assert!((q.slack * r - i.slack).abs() <= 1e-12);
        prop_assert!((q.bound * r - i.bound).abs() <= 1e-12);
        prop_assert!(i.slack >= -1e-10);
    }

    #[test]
    fn kth_bounds_hold(f in fixing_origin(), z in disk_point(0.999), theta in 0.0..std::f64::consts::TAU) {
        let interior = bounds::kth_interior_bound(&f, z).unwrap();
        prop_assert!(interior.slack >= -1e-10);
        let boundary = bounds::kth_boundary_bound(&f, BoundaryPoint::new(theta).unwrap()).unwrap();
        prop_assert!(boundary.slack >= -1e-9);
        prop_assert!(boundary.bound >= f64::from(f.leading_order().order));
    }

    #[test]
    fn arc_length_is_additive(f in fixing_origin(), start in 0.0..3.0f64, mid in 0.1..1.5f64, tail in 0.1..1.5f64) {
        let a = ArcSpec::new(start, start + mid).unwrap();
        let b = ArcSpec::new(start + mid, start + mid + tail).unwrap();
        let whole = ArcSpec::new(start, start + mid + tail).unwrap();
        let sum = image_arc_length(&f, a).unwrap().value + image_arc_length(&f, b).unwrap().value;
        let joined = image_arc_length(&f, whole).unwrap().value;
        prop_assert!((sum - joined).abs() <= 2e-10, "{} vs {}", sum, joined);
    }
}

#[test]
fn verdict_predicate_is_single_sided() {
    let r = bounds::SlackReport::upper(schwarz_lab::EquationTag::Eq6, 0.5, 0.5 + 5e-10, 1e-9);
    assert_eq!(r.verdict, Verdict::Equality);
    assert!(r.holds());
}
