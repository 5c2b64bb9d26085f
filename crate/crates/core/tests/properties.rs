use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use closurium::algebra::{Carrier, FuzzyPredicateAlgebra, HeytingAlgebra, PowersetAlgebra};
use closurium::bitset::PointSet;
use closurium::doctrine::{check_closure_laws, check_map_continuity, CheckMode, FiniteMap, Law};
use closurium::logic::ops::{self, UNTIL_ORACLE_CAP};
use closurium::logic::{parse_formula, Formula};
use closurium::spaces::random::random_graph;
use closurium::spaces::{PointSpace, Space, Value};

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        "[a-d]".prop_map(|s| Formula::atom(&s)),
        ("[pq]", prop_oneof![Just("x"), Just("y")]).prop_map(|(p, v)| Formula::Atom {
            name: p,
            arg: Some(v.to_string())
        }),
        Just(Formula::Eq("x".into(), "y".into())),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::closure),
            inner.clone().prop_map(Formula::boundary),
            (inner.clone(), proptest::option::of(1u32..5)).prop_map(|(a, b)| Formula::reach(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::surrounded(a, b)),
            inner.clone().prop_map(|b| Formula::Exists {
                var: "y".into(),
                sort: "X".into(),
                body: Box::new(b)
            }),
            inner.prop_map(|b| Formula::Forall {
                var: "x".into(),
                sort: "X".into(),
                body: Box::new(b)
            }),
        ]
    })
}

/// A random graph space plus two predicates on it.
fn space_and_pair() -> impl Strategy<Value = (PointSpace, PointSet, PointSet)> {
    (1usize..=7, any::<u64>(), any::<u64>(), any::<u64>()).prop_map(|(n, seed, a, b)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = random_graph(&mut rng, n, 0.35);
        let mask = (1u64 << n) - 1;
        (space, PointSet::from_mask(n, a & mask), PointSet::from_mask(n, b & mask))
    })
}

fn val(p: &PointSpace, s: &PointSet) -> Value {
    Value::Set(p.algebra().from_set(s.clone()).unwrap())
}

proptest! {
    #[test]
    fn display_parse_round_trip(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn powerset_is_heyting(n in 1usize..8, a: u64, b: u64, c: u64) {
        let alg = PowersetAlgebra::new(Carrier::indexed(n));
        let mask = (1u64 << n) - 1;
        let s = |m: u64| alg.from_set(PointSet::from_mask(n, m & mask)).unwrap();
        let (a, b, c) = (s(a), s(b), s(c));
        // c ∧ a ≤ b  ⇔  c ≤ a ⇒ b
        let lhs = alg.leq(&alg.meet(&c, &a).unwrap(), &b).unwrap();
        let rhs = alg.leq(&c, &alg.implies(&a, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(alg.join(&a, &alg.negate(&a).unwrap()).unwrap(), alg.top());
    }

    #[test]
    fn fuzzy_is_heyting(vals in proptest::collection::vec(0u32..=5, 9)) {
        let alg = FuzzyPredicateAlgebra::new(Carrier::indexed(3), 5).unwrap();
        let a = alg.set(vals[0..3].to_vec()).unwrap();
        let b = alg.set(vals[3..6].to_vec()).unwrap();
        let c = alg.set(vals[6..9].to_vec()).unwrap();
        let lhs = alg.leq(&alg.meet(&c, &a).unwrap(), &b).unwrap();
        let rhs = alg.leq(&c, &alg.implies(&a, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // distributivity
        let l = alg.meet(&a, &alg.join(&b, &c).unwrap()).unwrap();
        let r = alg.join(&alg.meet(&a, &b).unwrap(), &alg.meet(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn boundary_is_disjoint_from_argument((p, a, _) in space_and_pair()) {
        let s = Space::Points(p.clone());
        let a = val(&p, &a);
        let b = ops::boundary(&s, &a).unwrap();
        prop_assert_eq!(s.meet(&b, &a).unwrap(), s.bottom());
    }

    #[test]
    fn until_and_surrounded_are_monotone((p, a, b) in space_and_pair(), extra: u64) {
        let s = Space::Points(p.clone());
        let n = p.len();
        let a2 = a.union(&PointSet::from_mask(n, extra & ((1u64 << n) - 1)));
        let (va, va2, vb) = (val(&p, &a), val(&p, &a2), val(&p, &b));
        let u = ops::until(&s, &va, &vb, UNTIL_ORACLE_CAP).unwrap();
        let u2 = ops::until(&s, &va2, &vb, UNTIL_ORACLE_CAP).unwrap();
        prop_assert!(s.leq(&u, &u2).unwrap());
        let w = ops::surrounded(&s, &va, &vb).unwrap();
        let w2 = ops::surrounded(&s, &va2, &vb).unwrap();
        prop_assert!(s.leq(&w, &w2).unwrap());
        prop_assert!(s.leq(&u, &w).unwrap());
    }

    #[test]
    fn trivial_until_laws((p, a, b) in space_and_pair()) {
        let s = Space::Points(p.clone());
        let (va, vb) = (val(&p, &a), val(&p, &b));
        prop_assert_eq!(ops::until(&s, &s.top(), &vb, UNTIL_ORACLE_CAP).unwrap(), s.top());
        prop_assert_eq!(ops::until(&s, &va, &s.top(), UNTIL_ORACLE_CAP).unwrap(), va.clone());
        // φ 𝒰 ψ ≤ φ
        prop_assert!(s.leq(&ops::until(&s, &va, &vb, UNTIL_ORACLE_CAP).unwrap(), &va).unwrap());
    }

    #[test]
    fn reach_is_a_topological_closure((p, a, b) in space_and_pair()) {
        let s = Space::Points(p.clone());
        let (va, vb) = (val(&p, &a), val(&p, &b));
        let r = |v: &Value| ops::reach(&s, v, None).unwrap();
        prop_assert_eq!(r(&s.bottom()), s.bottom());
        prop_assert!(s.leq(&va, &r(&va)).unwrap());
        prop_assert_eq!(r(&r(&va)), r(&va));
        prop_assert_eq!(r(&s.join(&va, &vb).unwrap()), s.join(&r(&va), &r(&vb)).unwrap());
    }

    #[test]
    fn graph_spaces_are_quasi_discrete(seed: u64, n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_graph(&mut rng, n, 0.4);
        let r = check_closure_laws(&p, CheckMode::exhaustive(), &[Law::Grounded, Law::FullyAdditive]).unwrap();
        prop_assert!(r.status(Law::Grounded).holds());
        prop_assert!(r.status(Law::FullyAdditive).holds());
    }

    #[test]
    fn identity_and_constants_are_continuous(seed: u64, n in 1usize..6, k in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_graph(&mut rng, n, 0.4);
        let id = FiniteMap::identity(Carrier::indexed(n));
        prop_assert!(check_map_continuity(&id, &p, &p, CheckMode::exhaustive()).unwrap().holds());
        let constant = FiniteMap::new(Carrier::indexed(n), Carrier::indexed(n), vec![k % n; n]).unwrap();
        prop_assert!(check_map_continuity(&constant, &p, &p, CheckMode::exhaustive()).unwrap().holds());
    }
}
