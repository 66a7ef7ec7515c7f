use proptest::prelude::*;

use supcone::formulas::{sublevel_normal_cone_formula, Mode, SGrid};
use supcone::functions::{eps_normal_set, eps_subdifferential, PolyhedralFunction};
use supcone::gen::Gen;
use supcone::geometry::{cone_equal, h_to_v, recession_cone, v_to_h, ConeGen, HalfSpace, PolyhedronH};
use supcone::io::{parse_instance, print_instance, InstanceFile};
use supcone::num::{format_rational, parse_rational, rat, ratio, Rational, Vector};
use supcone::oracle;
use supcone::verify::{compare, Verdict};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn int_vec(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n)
}

fn rays(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(int_vec(n), 0..5)
}

fn polyhedron(n: usize) -> impl Strategy<Value = PolyhedronH> {
    prop::collection::vec((int_vec(n), -3i64..=3), 0..5).prop_map(move |rows| {
        let hs = rows
            .into_iter()
            .map(|(a, b)| HalfSpace::new(Vector::from_ints(&a), rat(b)))
            .collect();
        PolyhedronH::new(n, hs).expect("dimensions agree")
    })
}

fn dim() -> impl Strategy<Value = usize> {
    2usize..=3
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rationals_print_and_parse_back(p in -1000i64..1000, q in 1i64..1000) {
        let r = ratio(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn cone_form_ignores_order_and_scale(
        (n, rs) in dim().prop_flat_map(|n| (Just(n), rays(n))),
        k in 1i64..5,
    ) {
        let vs: Vec<Vector> = rs.iter().map(|r| Vector::from_ints(r)).collect();
        let mut shuffled: Vec<Vector> = vs.iter().rev().map(|v| v.scale(&ratio(k, 3))).collect();
        shuffled.extend(vs.iter().take(1).cloned());
        let a = ConeGen::new(n, vs).unwrap();
        let b = ConeGen::new(n, shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        for r in a.rays() {
            let ints: Vec<Rational> = r.primitive_ints().into_iter().map(Rational::from_integer).collect();
            prop_assert_eq!(r, &Vector::new(ints));
        }
    }

    #[test]
    fn cone_membership_weights_reproduce_the_vector(
        (n, rs, t) in dim().prop_flat_map(|n| (Just(n), rays(n), int_vec(n))),
    ) {
        let c = ConeGen::new(n, rs.iter().map(|r| Vector::from_ints(r)).collect()).unwrap();
        let t = Vector::from_ints(&t);
        if let Some(w) = c.contains(&t).unwrap() {
            prop_assert!(w.iter().all(|x| *x >= Rational::from_integer(0.into())));
            let mut s = Vector::zeros(n);
            for (wi, r) in w.iter().zip(c.rays()) {
                s = &s + &r.scale(wi);
            }
            prop_assert_eq!(s, t);
        }
    }

    #[test]
    fn polar_is_an_involution((n, rs) in dim().prop_flat_map(|n| (Just(n), rays(n)))) {
        let c = ConeGen::new(n, rs.iter().map(|r| Vector::from_ints(r)).collect()).unwrap();
        prop_assert!(cone_equal(&c.polar().unwrap().polar().unwrap(), &c).unwrap());
    }

    #[test]
    fn double_description_round_trips(p in dim().prop_flat_map(polyhedron)) {
        let back = v_to_h(&h_to_v(&p).unwrap()).unwrap();
        prop_assert!(back.same_set(&p).unwrap());
    }

    #[test]
    fn recession_cone_is_translation_invariant(
        (p, v) in dim().prop_flat_map(|n| (polyhedron(n), int_vec(n))),
    ) {
        let moved = p.translate(&Vector::from_ints(&v));
        prop_assert!(cone_equal(&recession_cone(&p).unwrap(), &recession_cone(&moved).unwrap()).unwrap());
    }

    #[test]
    fn eps_normal_sets_grow_with_eps_and_match_the_indicator(seed in any::<u64>(), n in dim()) {
        let mut g = Gen::new(seed);
        let x = g.vector(n, -2, 2);
        let d = g.polyhedron_at(&x, 3);
        let small = eps_normal_set(&d, &x, &ratio(1, 4)).unwrap();
        let large = eps_normal_set(&d, &x, &rat(2)).unwrap();
        prop_assert!(small.is_subset_of(&large).unwrap());
        let via = eps_subdifferential(&PolyhedralFunction::indicator(d), &x, &ratio(1, 4)).unwrap();
        prop_assert!(small.same_set(&via).unwrap());
    }

    #[test]
    fn affine_closed_form_equals_the_oracle(seed in any::<u64>(), n in dim(), members in 1usize..6) {
        let mut g = Gen::new(seed);
        let inst = g.affine_instance("p", n, members, seed % 3 == 0);
        let f = sublevel_normal_cone_formula(&inst.family, &inst.x, &rat(1), &SGrid::default_grid(), Mode::ExactAffine).unwrap();
        let truth = oracle::sublevel_normal_cone(&inst.family, &inst.x).unwrap();
        prop_assert_eq!(compare(&f.cone, &truth).unwrap(), Verdict::Equal);
    }

    #[test]
    fn sampled_formula_stays_inside_the_oracle(seed in any::<u64>(), n in dim(), members in 1usize..4) {
        let mut g = Gen::new(seed);
        let inst = g.max_affine_instance("p", n, members);
        let grid = SGrid::geometric(rat(2), -3, 3).unwrap();
        let f = sublevel_normal_cone_formula(&inst.family, &inst.x, &ratio(1, 2), &grid, Mode::Sampled).unwrap();
        let truth = oracle::sublevel_normal_cone(&inst.family, &inst.x).unwrap();
        prop_assert!(f.cone.is_subset_of(&truth).unwrap());
    }

    #[test]
    fn generated_files_round_trip(seed in any::<u64>(), n in dim(), members in 1usize..5) {
        let mut g = Gen::new(seed);
        let inst = g.restricted_domain_instance("p", n, members);
        let text = print_instance(&InstanceFile::from_family("p", &inst.family).with_point(&inst.x));
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(print_instance(&parsed), text.clone());
        let family = parsed.sup_family().unwrap();
        prop_assert_eq!(print_instance(&InstanceFile::from_family("p", &family).with_point(&inst.x)), text);
    }
}
