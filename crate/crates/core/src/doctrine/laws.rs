use std::collections::HashMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{direct_image, preimage, universal_image, FiniteMap, Fibration};
use crate::algebra::HeytingAlgebra;
use crate::error::{Error, Result};

/// A monotone, inflationary endo-map on a predicate algebra.
pub trait ClosureOperator {
    type Algebra: HeytingAlgebra;

    fn algebra(&self) -> &Self::Algebra;
    fn apply(
        &self,
        a: &<Self::Algebra as HeytingAlgebra>::Elem,
    ) -> Result<<Self::Algebra as HeytingAlgebra>::Elem>;
}

/// A closure operator given by a function.
pub struct FnClosure<A: HeytingAlgebra, F> {
    algebra: A,
    f: F,
}

impl<A, F> FnClosure<A, F>
where
    A: HeytingAlgebra,
    F: Fn(&A, &A::Elem) -> Result<A::Elem>,
{
    pub fn new(algebra: A, f: F) -> Self {
        FnClosure { algebra, f }
    }
}

impl<A, F> ClosureOperator for FnClosure<A, F>
where
    A: HeytingAlgebra,
    F: Fn(&A, &A::Elem) -> Result<A::Elem>,
{
    type Algebra = A;

    fn algebra(&self) -> &A {
        &self.algebra
    }

    fn apply(&self, a: &A::Elem) -> Result<A::Elem> {
        (self.f)(&self.algebra, a)
    }
}

/// How a law is checked: over every element, or over `samples` elements
/// drawn from a ChaCha8 stream seeded with `seed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive { cap: u64 },
    Sampled { samples: usize, seed: u64 },
}

impl CheckMode {
    pub fn exhaustive() -> Self {
        CheckMode::Exhaustive {
            cap: crate::algebra::DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            CheckMode::Exhaustive { .. } => None,
            CheckMode::Sampled { seed, .. } => Some(*seed),
        }
    }

    fn to_json(self) -> Value {
        match self {
            CheckMode::Exhaustive { cap } => json!({"kind": "exhaustive", "cap": cap}),
            CheckMode::Sampled { samples, seed } => {
                json!({"kind": "sampled", "samples": samples, "seed": seed})
            }
        }
    }
}

/// Draws the elements a check ranges over. Sampled mode always includes the
/// bottom and top elements.
fn population<A: HeytingAlgebra>(alg: &A, mode: CheckMode) -> Result<Vec<A::Elem>> {
    match mode {
        CheckMode::Exhaustive { cap } => Ok(alg.elements(cap)?.collect()),
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = vec![alg.bottom(), alg.top()];
            out.extend((0..samples).map(|_| alg.random_element(&mut rng)));
            Ok(out)
        }
    }
}

/// Pairs a binary check ranges over: all ordered pairs in exhaustive mode,
/// consecutive pairs of the sampled population otherwise.
fn pairs(n: usize, mode: CheckMode) -> Box<dyn Iterator<Item = (usize, usize)>> {
    match mode {
        CheckMode::Exhaustive { .. } => Box::new((0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))),
        CheckMode::Sampled { .. } => Box::new((0..n).map(move |i| (i, (i + 1) % n))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    Inflationary,
    Monotone,
    Grounded,
    Additive,
    FinitelyAdditive,
    FullyAdditive,
    Idempotent,
}

impl Law {
    pub const ALL: [Law; 7] = [
        Law::Inflationary,
        Law::Monotone,
        Law::Grounded,
        Law::Additive,
        Law::FinitelyAdditive,
        Law::FullyAdditive,
        Law::Idempotent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Inflationary => "inflationary",
            Law::Monotone => "monotone",
            Law::Grounded => "grounded",
            Law::Additive => "additive",
            Law::FinitelyAdditive => "finitely_additive",
            Law::FullyAdditive => "fully_additive",
            Law::Idempotent => "idempotent",
        }
    }

    pub fn from_name(name: &str) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.name() == name.trim())
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawStatus<E> {
    Holds,
    /// The violating element(s). For `additive` a pair `[a, b]`; for
    /// `monotone` a pair `[a, b]` with `a ≤ b`; for `finitely_additive` and
    /// `fully_additive` the family whose join is not preserved (empty for the
    /// empty join); otherwise a single element.
    Fails(Vec<E>),
    NotChecked,
}

impl<E> LawStatus<E> {
    pub fn holds(&self) -> bool {
        matches!(self, LawStatus::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, LawStatus::Fails(_))
    }

    pub fn witness(&self) -> Option<&[E]> {
        match self {
            LawStatus::Fails(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LawReport<E> {
    pub mode: CheckMode,
    pub statuses: Vec<(Law, LawStatus<E>)>,
}

impl<E: Clone> LawReport<E> {
    pub fn status(&self, law: Law) -> &LawStatus<E> {
        self.statuses
            .iter()
            .find(|(l, _)| *l == law)
            .map(|(_, s)| s)
            .unwrap_or(&LawStatus::NotChecked)
    }

    pub fn seed(&self) -> Option<u64> {
        self.mode.seed()
    }

    /// Re-applies the operator to every recorded witness and confirms that
    /// the violation is reproduced.
    pub fn reverify<C>(&self, op: &C) -> Result<bool>
    where
        C: ClosureOperator,
        C::Algebra: HeytingAlgebra<Elem = E>,
    {
        for (law, status) in &self.statuses {
            if let LawStatus::Fails(w) = status {
                if !violates(op, *law, w)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json<A>(&self, algebra: &A) -> Value
    where
        A: HeytingAlgebra<Elem = E>,
    {
        let mut laws = serde_json::Map::new();
        for (law, status) in &self.statuses {
            let v = match status {
                LawStatus::Holds => json!({"status": "holds"}),
                LawStatus::NotChecked => json!({"status": "not_checked"}),
                LawStatus::Fails(w) => json!({
                    "status": "fails",
                    "witness": w.iter().map(|e| algebra.describe(e)).collect::<Vec<_>>(),
                }),
            };
            laws.insert(law.name().to_string(), v);
        }
        json!({
            "mode": self.mode.to_json(),
            "seed": self.seed(),
            "laws": laws,
        })
    }
}

/// Whether `witness` violates `law` for `op`.
fn violates<C: ClosureOperator>(
    op: &C,
    law: Law,
    w: &[<C::Algebra as HeytingAlgebra>::Elem],
) -> Result<bool> {
    let alg = op.algebra();
    Ok(match (law, w) {
        (Law::Inflationary, [a]) => !alg.leq(a, &op.apply(a)?)?,
        (Law::Monotone, [a, b]) => alg.leq(a, b)? && !alg.leq(&op.apply(a)?, &op.apply(b)?)?,
        (Law::Grounded, [a]) => *a == alg.bottom() && op.apply(a)? != *a,
        (Law::Additive, [a, b]) => {
            op.apply(&alg.join(a, b)?)? != alg.join(&op.apply(a)?, &op.apply(b)?)?
        }
        (Law::FinitelyAdditive | Law::FullyAdditive, family) => {
            if law == Law::FullyAdditive && family.is_empty() {
                return Ok(false);
            }
            let images = family.iter().map(|e| op.apply(e)).collect::<Result<Vec<_>>>()?;
            op.apply(&alg.join_all(family)?)? != alg.join_all(&images)?
        }
        (Law::Idempotent, [a]) => {
            let c = op.apply(a)?;
            op.apply(&c)? != c
        }
        _ => false,
    })
}

struct Memo<'a, C: ClosureOperator> {
    op: &'a C,
    cache: HashMap<<C::Algebra as HeytingAlgebra>::Elem, <C::Algebra as HeytingAlgebra>::Elem>,
}

impl<'a, C: ClosureOperator> Memo<'a, C> {
    fn apply(
        &mut self,
        a: &<C::Algebra as HeytingAlgebra>::Elem,
    ) -> Result<<C::Algebra as HeytingAlgebra>::Elem> {
        if let Some(c) = self.cache.get(a) {
            return Ok(c.clone());
        }
        let c = self.op.apply(a)?;
        self.cache.insert(a.clone(), c.clone());
        Ok(c)
    }
}

/// Checks the selected closure-operator laws.
///
/// Exhaustive mode visits every element (and every ordered pair for binary
/// laws); the first violation in enumeration order is reported.
pub fn check_closure_laws<C: ClosureOperator>(
    op: &C,
    mode: CheckMode,
    selection: &[Law],
) -> Result<LawReport<<C::Algebra as HeytingAlgebra>::Elem>> {
    let alg = op.algebra();
    let elems = population(alg, mode)?;
    let mut memo = Memo {
        op,
        cache: HashMap::new(),
    };
    let images = elems.iter().map(|e| memo.apply(e)).collect::<Result<Vec<_>>>()?;
    let n = elems.len();

    let mut statuses = Vec::new();
    for law in Law::ALL {
        if !selection.contains(&law) {
            statuses.push((law, LawStatus::NotChecked));
            continue;
        }
        let mut witness = None;
        match law {
            Law::Inflationary => {
                for (a, c) in elems.iter().zip(&images) {
                    if !alg.leq(a, c)? {
                        witness = Some(vec![a.clone()]);
                        break;
                    }
                }
            }
            Law::Grounded => {
                let bot = alg.bottom();
                if memo.apply(&bot)? != bot {
                    witness = Some(vec![bot]);
                }
            }
            Law::Idempotent => {
                for (a, c) in elems.iter().zip(&images) {
                    if memo.apply(c)? != *c {
                        witness = Some(vec![a.clone()]);
                        break;
                    }
                }
            }
            Law::Monotone => {
                for (i, j) in pairs(n, mode) {
                    let upper = alg.join(&elems[i], &elems[j])?;
                    if !alg.leq(&images[i], &memo.apply(&upper)?)? {
                        witness = Some(vec![elems[i].clone(), upper]);
                        break;
                    }
                }
            }
            Law::Additive | Law::FinitelyAdditive => {
                if law == Law::FinitelyAdditive {
                    let bot = alg.bottom();
                    if memo.apply(&bot)? != bot {
                        statuses.push((law, LawStatus::Fails(Vec::new())));
                        continue;
                    }
                }
                for (i, j) in pairs(n, mode) {
                    if matches!(mode, CheckMode::Exhaustive { .. }) && j < i {
                        continue;
                    }
                    let joined = alg.join(&elems[i], &elems[j])?;
                    if memo.apply(&joined)? != alg.join(&images[i], &images[j])? {
                        witness = Some(vec![elems[i].clone(), elems[j].clone()]);
                        break;
                    }
                }
            }
            Law::FullyAdditive => {
                for (a, c) in elems.iter().zip(&images) {
                    let parts = alg.join_irreducibles(a);
                    if parts.is_empty() {
                        continue;
                    }
                    let mut acc = alg.bottom();
                    for p in &parts {
                        acc = alg.join(&acc, &memo.apply(p)?)?;
                    }
                    if acc != *c {
                        witness = Some(parts);
                        break;
                    }
                }
            }
        }
        statuses.push((law, witness.map_or(LawStatus::Holds, LawStatus::Fails)));
    }
    Ok(LawReport { mode, statuses })
}

/// Outcome of a law that either holds or is refuted by a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Violated(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Continuity of `f` from `(dom, cd)` to `(cod, cc)`:
/// `cd(f*(b)) ≤ f*(cc(b))` for every `b` over the codomain.
pub fn check_map_continuity<A, D, C>(
    f: &FiniteMap,
    cd: &D,
    cc: &C,
    mode: CheckMode,
) -> Result<Verdict<A::Elem>>
where
    A: Fibration,
    D: ClosureOperator<Algebra = A>,
    C: ClosureOperator<Algebra = A>,
{
    let (dom, cod) = (cd.algebra(), cc.algebra());
    for b in population(cod, mode)? {
        let lhs = cd.apply(&preimage(f, dom, cod, &b)?)?;
        let rhs = preimage(f, dom, cod, &cc.apply(&b)?)?;
        if !dom.leq(&lhs, &rhs)? {
            return Ok(Verdict::Violated(b));
        }
    }
    Ok(Verdict::Holds)
}

/// The image form of continuity: `∃_f(cd(a)) ≤ cc(∃_f(a))` for every `a`
/// over the domain.
pub fn check_image_inequality<A, D, C>(
    f: &FiniteMap,
    cd: &D,
    cc: &C,
    mode: CheckMode,
) -> Result<Verdict<A::Elem>>
where
    A: Fibration,
    D: ClosureOperator<Algebra = A>,
    C: ClosureOperator<Algebra = A>,
{
    let (dom, cod) = (cd.algebra(), cc.algebra());
    for a in population(dom, mode)? {
        let lhs = direct_image(f, dom, cod, &cd.apply(&a)?)?;
        let rhs = cc.apply(&direct_image(f, dom, cod, &a)?)?;
        if !cod.leq(&lhs, &rhs)? {
            return Ok(Verdict::Violated(a));
        }
    }
    Ok(Verdict::Holds)
}

/// Frobenius reciprocity for the projection `π: D × C → C`:
/// `∃_π(π*(α) ∧ β) = α ∧ ∃_π(β)` for `α` over `C` and `β` over `D × C`.
///
/// The witness is the pair `(α, β)`, `α` in `base`, `β` in the product.
pub fn check_frobenius<A: Fibration>(
    side: &A,
    base: &A,
    mode: CheckMode,
) -> Result<Verdict<(A::Elem, A::Elem)>> {
    let prod = side.product(base)?;
    let pi = &prod.second;
    let pa = &prod.algebra;
    let alphas = population(base, mode)?;
    let betas = population(pa, mode)?;
    let exhaustive = matches!(mode, CheckMode::Exhaustive { .. });
    let check = |alpha: &A::Elem, beta: &A::Elem| -> Result<bool> {
        let pulled = preimage(pi, pa, base, alpha)?;
        let lhs = direct_image(pi, pa, base, &pa.meet(&pulled, beta)?)?;
        let rhs = base.meet(alpha, &direct_image(pi, pa, base, beta)?)?;
        Ok(lhs == rhs)
    };
    if exhaustive {
        for alpha in &alphas {
            for beta in &betas {
                if !check(alpha, beta)? {
                    return Ok(Verdict::Violated((alpha.clone(), beta.clone())));
                }
            }
        }
    } else {
        for (alpha, beta) in alphas.iter().zip(&betas) {
            if !check(alpha, beta)? {
                return Ok(Verdict::Violated((alpha.clone(), beta.clone())));
            }
        }
    }
    Ok(Verdict::Holds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Beck–Chevalley for `f: C′ → C` against the product projections out of
/// `D × C′` and `D × C`:
/// `Q_{π_{C′}} ∘ (1_D × f)* = f* ∘ Q_{π_C}` for `Q` either quantifier.
///
/// The witness is an element over `D × C`.
pub fn check_beck_chevalley<A: Fibration>(
    f: &FiniteMap,
    side: &A,
    source: &A,
    target: &A,
    quantifier: Quantifier,
    mode: CheckMode,
) -> Result<Verdict<A::Elem>> {
    if f.domain() != source.carrier() || f.codomain() != target.carrier() {
        return Err(Error::AlgebraMismatch);
    }
    let upper = side.product(source)?;
    let lower = side.product(target)?;
    let m = target.carrier().len();
    let lift: Vec<usize> = (0..upper.algebra.carrier().len())
        .map(|i| upper.first.apply(i) * m + f.apply(upper.second.apply(i)))
        .collect();
    let lift = FiniteMap::new(
        upper.algebra.carrier().clone(),
        lower.algebra.carrier().clone(),
        lift,
    )?;
    let quantify = |g: &FiniteMap, dom: &A, cod: &A, a: &A::Elem| match quantifier {
        Quantifier::Exists => direct_image(g, dom, cod, a),
        Quantifier::Forall => universal_image(g, dom, cod, a),
    };
    for beta in population(&lower.algebra, mode)? {
        let pulled = preimage(&lift, &upper.algebra, &lower.algebra, &beta)?;
        let lhs = quantify(&upper.second, &upper.algebra, source, &pulled)?;
        let projected = quantify(&lower.second, &lower.algebra, target, &beta)?;
        let rhs = preimage(f, source, target, &projected)?;
        if lhs != rhs {
            return Ok(Verdict::Violated(beta));
        }
    }
    Ok(Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Carrier, FuzzyPredicateAlgebra, PowersetAlgebra, Subset};
    use crate::bitset::PointSet;

    fn chain_closure(n: usize) -> FnClosure<PowersetAlgebra, impl Fn(&PowersetAlgebra, &Subset) -> Result<Subset>> {
        // forward successor closure on the chain 0 → 1 → … → n-1
        FnClosure::new(PowersetAlgebra::new(Carrier::indexed(n)), move |alg, a| {
            let mut out = a.points().clone();
            for x in a.points().iter() {
                if x + 1 < n {
                    out.insert(x + 1);
                }
            }
            alg.from_set(out)
        })
    }

    fn discrete(n: usize) -> FnClosure<PowersetAlgebra, impl Fn(&PowersetAlgebra, &Subset) -> Result<Subset>> {
        FnClosure::new(PowersetAlgebra::new(Carrier::indexed(n)), |_, a| Ok(a.clone()))
    }

    #[test]
    fn chain_successor_profile() {
        let op = chain_closure(4);
        let r = check_closure_laws(&op, CheckMode::exhaustive(), &Law::ALL).unwrap();
        for law in [
            Law::Inflationary,
            Law::Monotone,
            Law::Grounded,
            Law::Additive,
            Law::FinitelyAdditive,
            Law::FullyAdditive,
        ] {
            assert!(r.status(law).holds(), "{law}");
        }
        assert!(r.status(Law::Idempotent).fails());
        assert!(r.reverify(&op).unwrap());
        assert_eq!(r.seed(), None);
    }

    #[test]
    fn selection_leaves_others_unchecked() {
        let op = chain_closure(3);
        let r = check_closure_laws(&op, CheckMode::exhaustive(), &[Law::Grounded]).unwrap();
        assert!(r.status(Law::Grounded).holds());
        assert_eq!(r.status(Law::Idempotent), &LawStatus::NotChecked);
    }

    #[test]
    fn constant_closure_not_grounded() {
        let alg = PowersetAlgebra::new(Carrier::indexed(3));
        let op = FnClosure::new(alg, |alg, a| alg.join(a, &alg.subset([0])?));
        let r = check_closure_laws(&op, CheckMode::Sampled { samples: 20, seed: 7 }, &Law::ALL).unwrap();
        assert!(r.status(Law::Grounded).fails());
        assert_eq!(r.status(Law::FinitelyAdditive), &LawStatus::Fails(vec![]));
        assert!(r.status(Law::Additive).holds());
        assert!(r.status(Law::FullyAdditive).holds());
        assert_eq!(r.seed(), Some(7));
        assert!(r.reverify(&op).unwrap());
        let j = r.to_json(op.algebra());
        assert_eq!(j["laws"]["grounded"]["status"], "fails");
        assert_eq!(j["seed"], 7);
    }

    #[test]
    fn identity_map_is_continuous() {
        let op = chain_closure(3);
        let f = FiniteMap::identity(Carrier::indexed(3));
        assert!(check_map_continuity(&f, &op, &op, CheckMode::exhaustive()).unwrap().holds());
        assert!(check_image_inequality(&f, &op, &op, CheckMode::exhaustive()).unwrap().holds());
    }

    #[test]
    fn constant_map_into_discrete_point() {
        let dom = chain_closure(2);
        let cod = discrete(1);
        let f = FiniteMap::new(Carrier::indexed(2), Carrier::indexed(1), vec![0, 0]).unwrap();
        assert!(check_map_continuity(&f, &dom, &cod, CheckMode::exhaustive()).unwrap().holds());
        assert!(check_image_inequality(&f, &dom, &cod, CheckMode::exhaustive()).unwrap().holds());
    }

    #[test]
    fn dropping_an_edge_breaks_continuity() {
        let dom = chain_closure(2);
        let cod = discrete(2);
        let f = FiniteMap::identity(Carrier::indexed(2));
        let point0 = Subset::clone(&cod.algebra().subset([0]).unwrap());
        assert_eq!(
            check_map_continuity(&f, &dom, &cod, CheckMode::exhaustive()).unwrap(),
            Verdict::Violated(point0.clone())
        );
        assert_eq!(
            check_image_inequality(&f, &dom, &cod, CheckMode::exhaustive()).unwrap(),
            Verdict::Violated(point0)
        );
    }

    #[test]
    fn frobenius_small_powerset() {
        let d = PowersetAlgebra::new(Carrier::indexed(2));
        let c = PowersetAlgebra::new(Carrier::indexed(2));
        assert!(check_frobenius(&d, &c, CheckMode::exhaustive()).unwrap().holds());
    }

    #[test]
    fn frobenius_fuzzy() {
        let d = FuzzyPredicateAlgebra::with_membership(Carrier::indexed(2), 2, vec![1, 2]).unwrap();
        let c = FuzzyPredicateAlgebra::new(Carrier::indexed(2), 2).unwrap();
        assert!(check_frobenius(&d, &c, CheckMode::exhaustive()).unwrap().holds());
    }

    #[test]
    fn beck_chevalley_constant_map() {
        let d = PowersetAlgebra::new(Carrier::indexed(2));
        let c = PowersetAlgebra::new(Carrier::indexed(2));
        let c1 = PowersetAlgebra::new(Carrier::indexed(1));
        let f = FiniteMap::new(Carrier::indexed(1), Carrier::indexed(2), vec![1]).unwrap();
        for q in [Quantifier::Exists, Quantifier::Forall] {
            let v = check_beck_chevalley(&f, &d, &c1, &c, q, CheckMode::exhaustive()).unwrap();
            assert!(v.holds(), "{q:?}");
        }
        let id = FiniteMap::identity(Carrier::indexed(2));
        assert!(check_beck_chevalley(&id, &d, &c, &c, Quantifier::Exists, CheckMode::exhaustive())
            .unwrap()
            .holds());
    }

    #[test]
    fn beck_chevalley_fuzzy() {
        let d = FuzzyPredicateAlgebra::with_membership(Carrier::indexed(2), 2, vec![2, 1]).unwrap();
        let src = FuzzyPredicateAlgebra::with_membership(Carrier::indexed(2), 2, vec![1, 2]).unwrap();
        let tgt = FuzzyPredicateAlgebra::new(Carrier::indexed(1), 2).unwrap();
        let f = FiniteMap::new(Carrier::indexed(2), Carrier::indexed(1), vec![0, 0]).unwrap();
        for q in [Quantifier::Exists, Quantifier::Forall] {
            assert!(check_beck_chevalley(&f, &d, &src, &tgt, q, CheckMode::exhaustive())
                .unwrap()
                .holds());
        }
    }

    #[test]
    fn exhaustive_too_large() {
        let alg = PowersetAlgebra::new(Carrier::indexed(22));
        let op = FnClosure::new(alg, |_, a| Ok(a.clone()));
        assert!(matches!(
            check_closure_laws(&op, CheckMode::exhaustive(), &Law::ALL),
            Err(Error::TooLarge { .. })
        ));
        let _ = PointSet::empty(1);
    }
}
