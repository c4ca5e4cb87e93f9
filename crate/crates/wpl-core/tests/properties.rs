use proptest::prelude::*;
use wpl_core::concrete::ConcreteTilting;
use wpl_core::k0::K0;
use wpl_core::lattice::Comparison;
use wpl_core::rep::{hom_space, is_isomorphic, line_bundle_module, QuiverPresentation};
use wpl_core::tilting::tilting_numeric_report;
use wpl_core::{Error, LVector, WeightDescriptor};

const TYPES: &[&[i64]] = &[&[], &[3], &[2, 3], &[2, 2, 2], &[2, 3, 5], &[3, 3, 3], &[2, 3, 7], &[2, 2, 2, 2]];

fn descriptor() -> impl Strategy<Value = WeightDescriptor> {
    prop::sample::select(TYPES).prop_map(|w| WeightDescriptor::with_default_lambdas(w.to_vec()).unwrap())
}

fn element(d: &WeightDescriptor, span: i64) -> impl Strategy<Value = LVector> {
    let d = d.clone();
    (prop::collection::vec(-20i64..20, d.arms()), -span..=span).prop_map(move |(a, m)| d.normal_form(&a, m))
}

fn with_elements(k: usize) -> impl Strategy<Value = (WeightDescriptor, Vec<LVector>)> {
    descriptor().prop_flat_map(move |d| {
        let e = prop::collection::vec(element(&d, 4), k);
        (Just(d), e)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_is_additive((d, v) in with_elements(2)) {
        let (x, y) = (&v[0], &v[1]);
        prop_assert_eq!(d.delta(&d.add(x, y)), d.delta(x) + d.delta(y));
        for i in 0..d.t() {
            prop_assert_eq!(d.delta(&d.x(i)) * d.weights()[i], d.pbar());
        }
    }

    #[test]
    fn normal_form_is_idempotent(d in descriptor(), a in prop::collection::vec(-30i64..30, 0..6), m in -5i64..5) {
        let mut a = a;
        a.resize(d.arms(), 0);
        let x = d.normal_form(&a, m);
        prop_assert_eq!(d.normal_form(&x.arm, x.central), x.clone());
        let raw: i64 = a.iter().zip(d.padded()).map(|(ai, p)| ai * (d.pbar() / p)).sum::<i64>() + m * d.pbar();
        prop_assert_eq!(d.delta(&x), raw);
    }

    #[test]
    fn graded_pieces_sit_in_the_positive_cone((d, v) in with_elements(1)) {
        let x = &v[0];
        if d.graded_dim(x) > 0 {
            prop_assert!(d.leq(&d.zero(), x));
        }
        if *x != d.zero() {
            prop_assert_eq!(d.graded_dim(x) * d.graded_dim(&d.neg(x)), 0);
        }
        let top = d.add(&d.c(), &d.omega());
        prop_assert!(d.leq(&d.zero(), x) || d.leq(x, &top));
    }

    #[test]
    fn comparison_is_antisymmetric((d, v) in with_elements(2)) {
        let (x, y) = (&v[0], &v[1]);
        let flip = match d.compare(x, y).unwrap() {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            c => c,
        };
        prop_assert_eq!(d.compare(y, x).unwrap(), flip);
    }

    #[test]
    fn line_bundles_are_rigid_in_a_window((d, v) in with_elements(2)) {
        let (x, y) = (&v[0], &v[1]);
        let (_, e1) = d.line_pair_dims(x, y);
        let (_, e2) = d.line_pair_dims(y, x);
        let diff = d.sub(y, x);
        let inside = d.leq(&d.neg(&d.c()), &diff) && d.leq(&diff, &d.c());
        prop_assert_eq!(e1 == 0 && e2 == 0, inside);
    }

    #[test]
    fn canonical_relations_hold_on_multiplication((d, v) in with_elements(1)) {
        let x = &v[0];
        let pow = |i: usize| {
            let mut e = vec![0; d.arms()];
            e[i] = d.padded()[i];
            d.monomial_action(x, &e)
        };
        for i in 2..d.arms() {
            let rhs = pow(1).sub(&pow(0).scale(d.lambda(i)));
            prop_assert_eq!(pow(i), rhs);
        }
    }

    #[test]
    fn euler_form_matches_line_bundle_dims((d, v) in with_elements(2)) {
        let k0 = K0::new(&d);
        let (x, y) = (&v[0], &v[1]);
        let (hom, ext) = d.line_pair_dims(x, y);
        prop_assert_eq!(k0.euler_unchecked(&k0.line_bundle_class(x), &k0.line_bundle_class(y)), hom as i64 - ext as i64);
        prop_assert_eq!(k0.line_bundle_locate(&k0.line_bundle_class(x)).unwrap(), x.clone());
    }

    #[test]
    fn twists_form_a_representation((d, v) in with_elements(2)) {
        let k0 = K0::new(&d);
        let (x, y) = (&v[0], &v[1]);
        let tx = k0.twist_matrix(x);
        prop_assert_eq!(tx.mul(&k0.twist_matrix(y)), k0.twist_matrix(&d.add(x, y)));
        prop_assert_eq!(tx.det().abs(), 1);
        prop_assert_eq!(tx.mul_vec(&k0.line_bundle_class(y)), k0.line_bundle_class(&d.add(x, y)));
    }

    #[test]
    fn coxeter_is_an_isometry(d in descriptor(), a in prop::collection::vec(-3i64..4, 16), b in prop::collection::vec(-3i64..4, 16)) {
        let k0 = K0::new(&d);
        let n = k0.n();
        let (a, b) = (&a[..n], &b[..n]);
        let phi = k0.coxeter_matrix();
        prop_assert_eq!(phi.clone(), k0.twist_matrix(&d.omega()));
        prop_assert_eq!(k0.euler_unchecked(&phi.mul_vec(a), &phi.mul_vec(b)), k0.euler_unchecked(a, b));
        prop_assert_eq!(k0.euler_unchecked(b, &phi.mul_vec(a)), -k0.euler_unchecked(a, b));
        let shifted = phi.pow(d.pbar() as u64).mul_vec(a);
        let w = k0.w();
        let expected: Vec<i64> = a.iter().zip(&w).map(|(ai, wi)| ai + k0.rk(a) * d.delta_omega() * wi).collect();
        prop_assert_eq!(shifted, expected);
    }
}

/// Random walks by reflections at labels that have a polarity.
fn walk() -> impl Strategy<Value = (WeightDescriptor, Vec<usize>)> {
    let small: &[&[i64]] = &[&[2, 3], &[2, 2, 2], &[2, 3, 4], &[3, 3, 3], &[2, 2, 2, 2], &[2, 2, 2, 2, 2]];
    (prop::sample::select(small), prop::collection::vec(0usize..64, 1..7))
        .prop_map(|(w, picks)| (WeightDescriptor::with_default_lambdas(w.to_vec()).unwrap(), picks))
}

fn step(t: &mut ConcreteTilting, pick: usize) -> Option<i64> {
    let labels: Vec<i64> = t.labels().iter().copied().filter(|&l| t.formal_polarity(l).is_ok()).collect();
    let l = labels[pick % labels.len()];
    match t.huebner_reflect(l) {
        Ok(_) => Some(l),
        Err(Error::NoPolarity(_)) => None,
        Err(e) => panic!("reflection at {l} failed: {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reflections_keep_tilting_invariants((d, picks) in walk()) {
        let mut t = ConcreteTilting::canonical(&d).unwrap();
        for p in picks {
            if step(&mut t, p).is_none() {
                continue;
            }
            let k0 = t.k0().clone();
            let hom = t.hom_dims();
            for (i, a) in t.classes().iter().enumerate() {
                for (j, b) in t.classes().iter().enumerate() {
                    prop_assert_eq!(hom[i][j] as i64, k0.euler_unchecked(a, b));
                }
            }
            let datum = t.datum();
            datum.check_unimodular(&k0).unwrap();
            let report = tilting_numeric_report(&k0, &datum).unwrap();
            prop_assert!(report.identities_hold);
            prop_assert!(report.hom_nonnegative);
            prop_assert!(report.central_simples <= k0.n() - 2);
        }
    }

    #[test]
    fn reflecting_twice_is_the_identity((d, picks) in walk()) {
        let mut t = ConcreteTilting::canonical(&d).unwrap();
        for p in picks {
            let before = t.classes().to_vec();
            let Some(l) = step(&mut t, p) else { continue };
            t.huebner_reflect(l).unwrap();
            prop_assert_eq!(t.classes(), &before[..]);
            t.huebner_reflect(l).unwrap();
        }
    }

    #[test]
    fn undo_restores_the_previous_state((d, picks) in walk()) {
        let mut t = ConcreteTilting::canonical(&d).unwrap();
        for p in picks {
            let before = (t.classes().to_vec(), t.hom_dims(), t.history().to_vec());
            if step(&mut t, p).is_none() {
                continue;
            }
            let mut u = t.clone();
            u.undo().unwrap();
            prop_assert_eq!((u.classes().to_vec(), u.hom_dims(), u.history().to_vec()), before);
        }
    }

    #[test]
    fn summand_modules_follow_euler_predictions((d, picks) in walk()) {
        let mut t = ConcreteTilting::canonical(&d).unwrap();
        t.retilt_reference(d.zero()).unwrap();
        for p in picks.into_iter().take(3) {
            if step(&mut t, p).is_none() {
                continue;
            }
        }
        let k0 = t.k0().clone();
        let pres = QuiverPresentation::canonical(&d);
        let mods = t.summand_modules().unwrap();
        let r = t.reference().unwrap().clone();
        for (m, c) in mods.iter().zip(t.classes()) {
            m.validate(&pres).unwrap();
            for (k, y) in d.window().iter().enumerate() {
                let probe = k0.line_bundle_class(&d.add(y, &r));
                prop_assert_eq!(m.dims[k] as i64, k0.euler_unchecked(&probe, c));
            }
            prop_assert_eq!(hom_space(&pres, m, m).len(), 1);
        }
    }
}

#[test]
fn line_bundle_modules_are_exceptional_and_distinct() {
    for w in [vec![2, 3], vec![2, 2, 2], vec![2, 3, 4]] {
        let d = WeightDescriptor::with_default_lambdas(w).unwrap();
        let k0 = K0::new(&d);
        let pres = QuiverPresentation::canonical(&d);
        let mods: Vec<_> = d.window().iter().map(|y| line_bundle_module(&d, y).unwrap()).collect();
        for (a, ma) in mods.iter().enumerate() {
            for (b, mb) in mods.iter().enumerate() {
                assert_eq!(hom_space(&pres, ma, mb).len() as i64, k0.cartan()[(a, b)]);
                assert_eq!(a == b, is_isomorphic(&pres, ma, mb));
            }
        }
    }
}
