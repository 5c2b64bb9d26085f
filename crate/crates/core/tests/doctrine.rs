//! Doctrine structure: adjunctions, Frobenius, Beck–Chevalley and the
//! continuity / image-inequality equivalence, on crisp and fuzzy predicates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use closurium::algebra::{Carrier, FuzzyPredicateAlgebra, HeytingAlgebra, PowersetAlgebra};
use closurium::doctrine::{
    check_beck_chevalley, check_frobenius, check_image_inequality, check_map_continuity, direct_image, preimage,
    universal_image, CheckMode, FiniteMap, Quantifier,
};
use closurium::spaces::random::{random_graph, random_kripke};
use closurium::spaces::{FuzzySpace, KripkeMode};

fn random_map(rng: &mut ChaCha8Rng, m: usize, n: usize) -> FiniteMap {
    let image = (0..m).map(|_| rng.gen_range(0..n)).collect();
    FiniteMap::new(Carrier::indexed(m), Carrier::indexed(n), image).unwrap()
}

fn fuzzy(rng: &mut ChaCha8Rng, n: usize, res: u32) -> FuzzyPredicateAlgebra {
    let alpha = (0..n).map(|_| rng.gen_range(1..=res)).collect();
    FuzzyPredicateAlgebra::with_membership(Carrier::indexed(n), res, alpha).unwrap()
}

/// `∃f a ≤ b ⇔ a ≤ f* b` and `f* b ≤ a ⇔ b ≤ ∀f a`, exhaustively.
fn adjunctions<A>(f: &FiniteMap, dom: &A, cod: &A)
where
    A: closurium::doctrine::Fibration,
{
    for a in dom.elements(1 << 12).unwrap() {
        let ex = direct_image(f, dom, cod, &a).unwrap();
        let all = universal_image(f, dom, cod, &a).unwrap();
        for b in cod.elements(1 << 12).unwrap() {
            let pulled = preimage(f, dom, cod, &b).unwrap();
            assert_eq!(cod.leq(&ex, &b).unwrap(), dom.leq(&a, &pulled).unwrap());
            assert_eq!(dom.leq(&pulled, &a).unwrap(), cod.leq(&b, &all).unwrap());
        }
    }
}

#[test]
fn powerset_adjunctions() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let f = random_map(&mut rng, m, n);
        adjunctions(
            &f,
            &PowersetAlgebra::new(Carrier::indexed(m)),
            &PowersetAlgebra::new(Carrier::indexed(n)),
        );
    }
}

#[test]
fn fuzzy_adjunctions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let (m, n) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let f = random_map(&mut rng, m, n);
        let dom = fuzzy(&mut rng, m, 3);
        // a fuzzy-set map needs α(x) ≤ β(f(x))
        let mut beta: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        for x in 0..m {
            beta[f.apply(x)] = beta[f.apply(x)].max(dom.membership()[x]);
        }
        let cod = FuzzyPredicateAlgebra::with_membership(Carrier::indexed(n), 3, beta).unwrap();
        adjunctions(&f, &dom, &cod);
    }
}

#[test]
fn preimage_is_functorial() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let (a, b, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let f = random_map(&mut rng, a, b);
        let g = random_map(&mut rng, b, c);
        let gf = FiniteMap::new(
            Carrier::indexed(a),
            Carrier::indexed(c),
            (0..a).map(|x| g.apply(f.apply(x))).collect(),
        )
        .unwrap();
        let (pa, pb, pc) = (
            PowersetAlgebra::new(Carrier::indexed(a)),
            PowersetAlgebra::new(Carrier::indexed(b)),
            PowersetAlgebra::new(Carrier::indexed(c)),
        );
        for s in pc.elements(1 << 10).unwrap() {
            let two = preimage(&f, &pa, &pb, &preimage(&g, &pb, &pc, &s).unwrap()).unwrap();
            assert_eq!(preimage(&gf, &pa, &pc, &s).unwrap(), two);
        }
    }
}

#[test]
fn frobenius_and_beck_chevalley_on_fuzzy_predicates() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mode = CheckMode::Sampled { samples: 200, seed: 4 };
    let plain = |n| FuzzyPredicateAlgebra::new(Carrier::indexed(n), 3).unwrap();
    for _ in 0..5 {
        let (d, c, c2) = (rng.gen_range(1..=2), rng.gen_range(1..=3), rng.gen_range(1..=3));
        assert!(check_frobenius(&plain(d), &plain(c), mode).unwrap().holds());
        let f = random_map(&mut rng, c2, c);
        for q in [Quantifier::Exists, Quantifier::Forall] {
            let v = check_beck_chevalley(&f, &plain(d), &plain(c2), &plain(c), q, mode).unwrap();
            assert!(v.holds());
        }
    }
}

#[test]
fn continuity_iff_image_inequality_on_spaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut continuous = 0;
    for i in 0..40 {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let f = random_map(&mut rng, m, n);
        let (cd, cc) = if i % 2 == 0 {
            (random_graph(&mut rng, m, 0.4), random_graph(&mut rng, n, 0.4))
        } else {
            (
                random_kripke(&mut rng, m, 0.4, KripkeMode::Pre),
                random_kripke(&mut rng, n, 0.4, KripkeMode::Pre),
            )
        };
        let a = check_map_continuity(&f, &cd, &cc, CheckMode::exhaustive()).unwrap();
        let b = check_image_inequality(&f, &cd, &cc, CheckMode::exhaustive()).unwrap();
        assert_eq!(a.holds(), b.holds());
        continuous += usize::from(a.holds());
    }
    // both outcomes occur
    assert!(continuous > 0 && continuous < 40);
}

#[test]
fn identity_is_continuous_on_fuzzy_space() {
    let alg = FuzzyPredicateAlgebra::new(Carrier::indexed(3), 4).unwrap();
    let s = FuzzySpace::new(alg, vec![1, 0, 2]).unwrap();
    let id = FiniteMap::identity(Carrier::indexed(3));
    assert!(check_map_continuity(&id, &s, &s, CheckMode::exhaustive()).unwrap().holds());
    assert!(check_image_inequality(&id, &s, &s, CheckMode::exhaustive()).unwrap().holds());
}
