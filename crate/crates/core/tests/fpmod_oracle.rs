mod support;

use cofun_core::exact::{IntMatrix, RingSpec};
use cofun_core::fpmod::{
    hom_module, is_exact_at, is_pure_submodule, split_retraction, submodule, tensor_module, tensor_morphism, FpModule,
    FpMorphism,
};
use cofun_testkit::{hom_profile, morphism_profiles, tensor_profile, Gen};
use proptest::prelude::*;
use support::{
    finite, finite_module, integer_module, module, profile, random_finite_morphism, random_morphism, raw, ring,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn normal_forms_agree_with_cosets((n, g, rows) in finite_module(6, 2), x in prop::collection::vec(0i64..6, 2), y in prop::collection::vec(0i64..6, 2)) {
        let m = module(&ring(n), g, &rows);
        let q = finite(&m);
        prop_assert_eq!(profile(&m), q.profile());
        let (x, y) = (support::ints(&x[..g]), support::ints(&y[..g]));
        let raw_x: Vec<i64> = x.iter().map(|v| v.try_into().unwrap()).collect();
        let raw_y: Vec<i64> = y.iter().map(|v| v.try_into().unwrap()).collect();
        prop_assert_eq!(m.elements_equal(&x, &y), q.same(&raw_x, &raw_y));
    }

    #[test]
    fn hom_and_tensor_match_enumeration(a in finite_module(6, 2), b_rows in prop::collection::vec(prop::collection::vec(0i64..6, 2), 0..=2), bg in 1usize..=2) {
        let (n, g, rows) = a;
        let r = ring(n);
        let m = module(&r, g, &rows);
        let b_rows: Vec<Vec<i64>> = b_rows.into_iter().map(|v| v[..bg].to_vec()).collect();
        let t = module(&r, bg, &b_rows);
        let hom = hom_module(&m, &t).unwrap();
        prop_assert_eq!(profile(&hom.module), hom_profile(&finite(&m), &finite(&t)));
        for h in hom.generators() {
            prop_assert!(cofun_testkit::morphism_profiles(&finite(&m), &finite(&t), &raw(h.matrix())).well_defined);
        }
        prop_assert_eq!(profile(&tensor_module(&m, &t).unwrap()), tensor_profile(&finite(&m), &finite(&t)));
    }

    #[test]
    fn kernel_image_cokernel_match_enumeration(a in finite_module(6, 2), b in finite_module(6, 2), seed in any::<u64>()) {
        let n = a.0;
        let r = ring(n);
        let m = module(&r, a.1, &a.2);
        let t = module(&r, b.1, &b.2.iter().map(|row| row.iter().map(|x| x % n as i64).collect()).collect::<Vec<_>>());
        let f = random_finite_morphism(&mut Gen::new(seed), &m, &t);
        let oracle = morphism_profiles(&finite(&m), &finite(&t), &raw(f.matrix()));
        prop_assert!(oracle.well_defined);
        let (k, ki) = f.kernel();
        let (c, cp) = f.cokernel();
        let im = f.image();
        prop_assert_eq!(profile(&k), oracle.kernel);
        prop_assert_eq!(profile(&im.module), oracle.image);
        prop_assert_eq!(profile(&c), oracle.cokernel);
        prop_assert!(ki.then(&f).unwrap().is_zero());
        prop_assert!(f.then(&cp).unwrap().is_zero());
        prop_assert!(im.surjection.then(&im.inclusion).unwrap().equals(&f));
        prop_assert!(is_exact_at(&ki, &f) && is_exact_at(&f, &cp));
    }

    #[test]
    fn integer_bookkeeping(a in integer_module(3, 3, 6), b in integer_module(3, 2, 6), seed in any::<u64>()) {
        let z = RingSpec::Integers;
        let m = if a.1.is_empty() { FpModule::free(&z, a.0) } else { module(&z, a.0, &a.1) };
        let t = if b.1.is_empty() { FpModule::free(&z, b.0) } else { module(&z, b.0, &b.1) };
        let f = random_morphism(&mut Gen::new(seed), &m, &t);
        let (_, ki) = f.kernel();
        let (_, cp) = f.cokernel();
        let im = f.image();
        prop_assert!(ki.then(&f).unwrap().is_zero() && f.then(&cp).unwrap().is_zero());
        prop_assert!(im.surjection.then(&im.inclusion).unwrap().equals(&f));
        prop_assert!(im.surjection.is_surjective() && im.inclusion.is_injective() && ki.is_injective() && cp.is_surjective());
    }

    #[test]
    fn tensor_preserves_surjections(a in integer_module(3, 2, 6), s in integer_module(2, 2, 6), seed in any::<u64>()) {
        let z = RingSpec::Integers;
        let mut gen = Gen::new(seed);
        let b = if a.1.is_empty() { FpModule::free(&z, a.0) } else { module(&z, a.0, &a.1) };
        let s = if s.1.is_empty() { FpModule::free(&z, s.0) } else { module(&z, s.0, &s.1) };
        // p: B -> C is the quotient by a random element.
        let x = IntMatrix::from_i64(&z, b.gens(), &gen.matrix(1, b.gens(), 4)).unwrap();
        let p = cofun_core::fpmod::quotient(&b, &x).projection;
        let (_, _, sp) = tensor_morphism(&FpMorphism::identity(&s), &p).unwrap();
        prop_assert!(sp.is_surjective());
    }

    #[test]
    fn hom_is_left_exact(a in integer_module(2, 2, 5), s in integer_module(2, 2, 5), seed in any::<u64>()) {
        let z = RingSpec::Integers;
        let mut gen = Gen::new(seed);
        let b = if a.1.is_empty() { FpModule::free(&z, a.0) } else { module(&z, a.0, &a.1) };
        let s = if s.1.is_empty() { FpModule::free(&z, s.0) } else { module(&z, s.0, &s.1) };
        let gens = IntMatrix::from_i64(&z, b.gens(), &{ let k = 1 + gen.below(2); gen.matrix(k, b.gens(), 3) }).unwrap();
        let sub = submodule(&b, &gens);
        let i = sub.inclusion;
        let (_, p) = i.cokernel();
        let c = p.target().clone();
        let hc = hom_module(&c, &s).unwrap();
        let hb = hom_module(&b, &s).unwrap();
        let ha = hom_module(i.source(), &s).unwrap();
        let p_star = hc.induced_map(&hb, |phi| p.then(phi)).unwrap();
        let i_star = hb.induced_map(&ha, |phi| i.then(phi)).unwrap();
        prop_assert!(p_star.is_injective());
        prop_assert!(is_exact_at(&p_star, &i_star));
    }

    #[test]
    fn split_iff_pure(a in integer_module(3, 2, 4), seed in any::<u64>()) {
        let z = RingSpec::Integers;
        let mut gen = Gen::new(seed);
        let m = if a.1.is_empty() { FpModule::free(&z, a.0) } else { module(&z, a.0, &a.1) };
        let gens = IntMatrix::from_i64(&z, m.gens(), &{ let k = 1 + gen.below(2); gen.sparse_matrix(k, m.gens(), 3, 0.6) }).unwrap();
        let i = submodule(&m, &gens).inclusion;
        let split = split_retraction(&i).unwrap();
        prop_assert_eq!(split.is_some(), is_pure_submodule(&i).unwrap());
        if let Some(r) = split {
            prop_assert!(i.then(&r).unwrap().equals(&FpMorphism::identity(i.source())));
        }
    }

    #[test]
    fn split_iff_pure_over_residues((n, g, rows) in finite_module(12, 2), seed in any::<u64>()) {
        let r = ring(n);
        let mut gen = Gen::new(seed);
        let m = module(&r, g, &rows);
        let gens = IntMatrix::from_i64(&r, g, &gen.matrix(1, g, n as i64)).unwrap();
        let i = submodule(&m, &gens).inclusion;
        prop_assert_eq!(split_retraction(&i).unwrap().is_some(), is_pure_submodule(&i).unwrap());
    }
}
