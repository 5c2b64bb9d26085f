use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check::{check_derivation, Rule};
use super::{format_path, Derivation, Sequent};
use crate::error::Result;
use crate::logic::{eval, Formula};
use crate::spaces::{random::random_graph_model, SpaceModel};

/// Whether `⋀Φ ≤ φ` holds in the model.
pub fn satisfied(model: &SpaceModel, s: &Sequent) -> Result<bool> {
    let lhs = s
        .ante
        .iter()
        .cloned()
        .reduce(Formula::and)
        .unwrap_or(Formula::True);
    // a ≤ b exactly when a → b is the top element, in every fiber
    let imp = eval(model, &s.ctx, &Formula::implies(lhs, s.cons.clone()))?;
    Ok(imp == eval(model, &s.ctx, &Formula::True)?)
}

/// A rule instance whose premises hold in a model but whose conclusion does
/// not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnsoundNode {
    pub path: String,
    pub rule: String,
    pub sequent: String,
    pub model: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelVerdict {
    pub model: usize,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub verdicts: Vec<ModelVerdict>,
    /// The first offending rule instance, when some model fails.
    pub unsound: Option<UnsoundNode>,
}

impl SoundnessReport {
    pub fn all_satisfied(&self) -> bool {
        self.verdicts.iter().all(|v| v.satisfied)
    }
}

/// Locates, in post-order, the first node whose premises are satisfied in
/// `model` while its conclusion is not.
pub fn find_unsound_node<'d>(d: &'d Derivation, model: &SpaceModel) -> Result<Option<(String, &'d Derivation)>> {
    type Found<'a> = Option<(String, &'a Derivation)>;
    fn go<'a>(d: &'a Derivation, m: &SpaceModel, path: &mut Vec<usize>) -> Result<(bool, Found<'a>)> {
        let mut premises_hold = true;
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            let (ok, found) = go(p, m, path)?;
            path.pop();
            if found.is_some() {
                return Ok((false, found));
            }
            premises_hold &= ok;
        }
        let ok = satisfied(m, &d.conclusion)?;
        if premises_hold && !ok {
            return Ok((false, Some((format_path(path), d))));
        }
        Ok((ok, None))
    }
    Ok(go(d, model, &mut Vec::new())?.1)
}

/// Checks the derivation, then evaluates its conclusion in every model.
pub fn soundness_check(d: &Derivation, models: &[SpaceModel]) -> Result<SoundnessReport> {
    check_derivation(d)?;
    let mut verdicts = Vec::with_capacity(models.len());
    let mut unsound = None;
    for (i, m) in models.iter().enumerate() {
        let ok = satisfied(m, &d.conclusion)?;
        if !ok && unsound.is_none() {
            unsound = find_unsound_node(d, m)?.map(|(path, node)| UnsoundNode {
                path,
                rule: node.rule.clone(),
                sequent: node.conclusion.to_string(),
                model: i,
            });
        }
        verdicts.push(ModelVerdict { model: i, satisfied: ok });
    }
    Ok(SoundnessReport { verdicts, unsound })
}

/// `count` seeded random graph models on `n` points valuing `atoms`.
pub fn random_models(seed: u64, count: usize, n: usize, density: f64, atoms: &[&str]) -> Vec<SpaceModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_graph_model(&mut rng, n, density, atoms))
        .collect()
}

#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub depth: usize,
    pub atoms: Vec<String>,
    pub rules: BTreeSet<Rule>,
}

impl GeneratorConfig {
    pub fn new(depth: usize, atoms: &[&str]) -> Self {
        GeneratorConfig {
            depth: depth.max(1),
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            rules: Rule::ALL.into_iter().collect(),
        }
    }

    pub fn without(mut self, rules: &[Rule]) -> Self {
        for r in rules {
            self.rules.remove(r);
        }
        self
    }

    fn has(&self, r: Rule) -> bool {
        self.rules.contains(&r)
    }
}

struct Gen<'c> {
    rng: ChaCha8Rng,
    cfg: &'c GeneratorConfig,
}

type Ante = BTreeSet<Formula>;

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

impl Gen<'_> {
    fn atom(&mut self) -> Formula {
        let a = pick(&mut self.rng, &self.cfg.atoms).clone();
        Formula::atom(&a)
    }

    fn formula(&mut self, size: usize) -> Formula {
        if size <= 1 || self.rng.gen_bool(0.3) {
            return match self.rng.gen_range(0..12) {
                0 => Formula::True,
                1 => Formula::False,
                _ => self.atom(),
            };
        }
        match self.rng.gen_range(0..5) {
            0 => Formula::and(self.formula(size / 2), self.formula(size / 2)),
            1 => Formula::or(self.formula(size / 2), self.formula(size / 2)),
            2 => Formula::implies(self.formula(size / 2), self.formula(size / 2)),
            3 => Formula::not(self.formula(size - 1)),
            _ => Formula::closure(self.formula(size - 1)),
        }
    }

    fn root_antecedents(&mut self) -> Ante {
        let mut ante = Ante::new();
        for _ in 0..self.rng.gen_range(1..=3) {
            let f = self.formula(4);
            ante.insert(f);
        }
        if self.rng.gen_bool(0.4) {
            let a = self.atom();
            let b = self.formula(2);
            ante.insert(a.clone());
            ante.insert(Formula::implies(a, b));
        }
        if self.rng.gen_bool(0.3) {
            let a = self.formula(2);
            ante.insert(Formula::closure(a));
        }
        ante
    }

    fn leaf(&mut self, ctx: &Sequent, ante: &Ante) -> Derivation {
        let mk = |cons: Formula| Sequent {
            ctx: ctx.ctx.clone(),
            ante: ante.clone(),
            cons,
        };
        if self.cfg.has(Rule::BotL) && ante.contains(&Formula::False) && self.rng.gen_bool(0.3) {
            let cons = self.formula(3);
            return Derivation::leaf(Rule::BotL, mk(cons));
        }
        if self.cfg.has(Rule::Axiom) && !ante.is_empty() {
            let items: Vec<&Formula> = ante.iter().collect();
            let f = (*pick(&mut self.rng, &items)).clone();
            return Derivation::leaf(Rule::Axiom, mk(f));
        }
        Derivation::leaf(Rule::TopR, mk(Formula::True))
    }

    fn gen(&mut self, proto: &Sequent, depth: usize, ante: Ante) -> Derivation {
        let seq = |ante: &Ante, cons: Formula| Sequent {
            ctx: proto.ctx.clone(),
            ante: ante.clone(),
            cons,
        };
        if depth <= 1 || self.rng.gen_bool(0.15) {
            return self.leaf(proto, &ante);
        }
        let principal = |pred: fn(&Formula) -> bool| ante.iter().filter(|f| pred(f)).cloned().collect::<Vec<_>>();
        let ands = principal(|f| matches!(f, Formula::And(..)));
        let ors = principal(|f| matches!(f, Formula::Or(..)));
        let closures = principal(|f| matches!(f, Formula::Closure(_)));
        let imps: Vec<Formula> = ante
            .iter()
            .filter(|f| match f {
                Formula::Implies(a, _) => **a == Formula::True || (ante.contains(a) && **a != **f),
                _ => false,
            })
            .cloned()
            .collect();
        let mut options: Vec<Rule> = [
            Rule::AndR,
            Rule::OrR1,
            Rule::OrR2,
            Rule::ImpR,
            Rule::Cut,
            Rule::Cl1,
        ]
        .into_iter()
        .collect();
        if !ante.is_empty() {
            options.extend([Rule::Weakening, Rule::UntilI]);
        }
        if !ands.is_empty() {
            options.push(Rule::AndL);
        }
        if !ors.is_empty() && depth >= 3 && self.cfg.has(Rule::OrR1) && self.cfg.has(Rule::OrR2) {
            options.push(Rule::OrL);
        }
        if !imps.is_empty() && (self.cfg.has(Rule::Axiom) && self.cfg.has(Rule::TopR)) {
            options.push(Rule::ImpL);
        }
        if !closures.is_empty() {
            options.push(Rule::Cl2);
        }
        options.retain(|r| self.cfg.has(*r));
        if options.is_empty() {
            return self.leaf(proto, &ante);
        }
        let rule = *pick(&mut self.rng, &options);
        let d = depth - 1;
        match rule {
            Rule::AndR => {
                let p1 = self.gen(proto, d, ante.clone());
                let p2 = self.gen(proto, d, ante.clone());
                let cons = Formula::and(p1.conclusion.cons.clone(), p2.conclusion.cons.clone());
                Derivation::new(rule, seq(&ante, cons), vec![p1, p2])
            }
            Rule::OrR1 | Rule::OrR2 => {
                let p = self.gen(proto, d, ante.clone());
                let other = self.formula(3);
                let c = p.conclusion.cons.clone();
                let cons = if rule == Rule::OrR1 {
                    Formula::or(c, other)
                } else {
                    Formula::or(other, c)
                };
                Derivation::new(rule, seq(&ante, cons), vec![p])
            }
            Rule::ImpR => {
                let hyp = self.formula(3);
                let mut inner = ante.clone();
                inner.insert(hyp.clone());
                let p = self.gen(proto, d, inner);
                let cons = Formula::implies(hyp, p.conclusion.cons.clone());
                Derivation::new(rule, seq(&ante, cons), vec![p])
            }
            Rule::Cut => {
                let p1 = self.gen(proto, d, ante.clone());
                let mut inner = ante.clone();
                inner.insert(p1.conclusion.cons.clone());
                let p2 = self.gen(proto, d, inner);
                let cons = p2.conclusion.cons.clone();
                Derivation::new(rule, seq(&ante, cons), vec![p1, p2])
            }
            Rule::Cl1 => {
                let p = self.gen(proto, d, ante.clone());
                let cons = Formula::closure(p.conclusion.cons.clone());
                Derivation::new(rule, seq(&ante, cons), vec![p])
            }
            Rule::Weakening => {
                let items: Vec<Formula> = ante.iter().cloned().collect();
                let drop = pick(&mut self.rng, &items).clone();
                let mut inner = ante.clone();
                inner.remove(&drop);
                let p = self.gen(proto, d, inner);
                let cons = p.conclusion.cons.clone();
                Derivation::new(rule, seq(&ante, cons), vec![p])
            }
            Rule::AndL => {
                let f = pick(&mut self.rng, &ands).clone();
                let Formula::And(a, b) = &f else { unreachable!() };
                let mut inner = ante.clone();
                inner.remove(&f);
                inner.insert((**a).clone());
                inner.insert((**b).clone());
                let p = self.gen(proto, d, inner);
                let cons = p.conclusion.cons.clone();
                Derivation::new(rule, seq(&ante, cons), vec![p])
            }
            Rule::OrL => {
                let f = pick(&mut self.rng, &ors).clone();
                let Formula::Or(a, b) = &f else { unreachable!() };
                let mut left = ante.clone();
                left.remove(&f);
                let mut right = left.clone();
                left.insert((**a).clone());
                right.insert((**b).clone());
                let q1 = self.gen(proto, d - 1, left.clone());
                let q2 = self.gen(proto, d - 1, right.clone());
                let chi = Formula::or(q1.conclusion.cons.clone(), q2.conclusion.cons.clone());
                let p1 = Derivation::new(Rule::OrR1, seq(&left, chi.clone()), vec![q1]);
                let p2 = Derivation::new(Rule::OrR2, seq(&right, chi.clone()), vec![q2]);
                Derivation::new(rule, seq(&ante, chi), vec![p1, p2])
            }
            Rule::ImpL => {
                let f = pick(&mut self.rng, &imps).clone();
                let Formula::Implies(a, b) = &f else { unreachable!() };
                let mut side = ante.clone();
                side.remove(&f);
                let p1 = if **a == Formula::True {
                    Derivation::leaf(Rule::TopR, seq(&side, Formula::True))
                } else {
                    Derivation::leaf(Rule::Axiom, seq(&side, (**a).clone()))
                };
                let mut inner = side;
                inner.insert((**b).clone());
                let p2 = self.gen(proto, d, inner);
                let cons = p2.conclusion.cons.clone();
                Derivation::new(rule, seq(&ante, cons), vec![p1, p2])
            }
            Rule::Cl2 => {
                let f = pick(&mut self.rng, &closures).clone();
                let Formula::Closure(psi) = &f else { unreachable!() };
                let mut inner = ante.clone();
                inner.remove(&f);
                inner.insert((**psi).clone());
                let p = self.gen(proto, d, inner);
                let cons = Formula::closure(p.conclusion.cons.clone());
                Derivation::new(rule, seq(&ante, cons), vec![p])
            }
            Rule::UntilI => {
                let items: Vec<Formula> = ante.iter().cloned().collect();
                let rho = pick(&mut self.rng, &items).clone();
                let p1 = self.gen(proto, d, ante.clone());
                let phi = p1.conclusion.cons.clone();
                let mut inner = ante.clone();
                inner.remove(&rho);
                inner.insert(Formula::closure(rho));
                inner.insert(Formula::not(phi.clone()));
                let p2 = self.gen(proto, d, inner);
                let cons = Formula::until(phi, p2.conclusion.cons.clone());
                Derivation::new(rule, seq(&ante, cons), vec![p1, p2])
            }
            Rule::Axiom | Rule::TopR | Rule::BotL => self.leaf(proto, &ante),
        }
    }
}

fn mentions_closure(d: &Derivation) -> bool {
    d.nodes().iter().any(|(_, n)| {
        let s = &n.conclusion;
        s.ante.iter().chain(std::iter::once(&s.cons)).any(|f| {
            let mut hit = false;
            f.visit(&mut |g| hit |= matches!(g, Formula::Closure(_)));
            hit
        })
    })
}

/// A random derivation that passes [`check_derivation`], built top-down by
/// instantiating rule schemas. With a closure rule enabled and depth at
/// least two, the result mentions a closure.
pub fn random_derivation_with(seed: u64, cfg: &GeneratorConfig) -> Derivation {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        cfg,
    };
    let want_closure = cfg.depth >= 2 && (cfg.has(Rule::Cl1) || cfg.has(Rule::Cl2));
    let mut last = None;
    for _ in 0..64 {
        let ante = g.root_antecedents();
        let proto = Sequent::new(Default::default(), [], Formula::True);
        let d = g.gen(&proto, cfg.depth, ante);
        if !want_closure || mentions_closure(&d) {
            return d;
        }
        last = Some(d);
    }
    last.expect("at least one attempt")
}

pub fn random_derivation(seed: u64, depth: usize, atoms: &[&str]) -> Derivation {
    random_derivation_with(seed, &GeneratorConfig::new(depth, atoms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Carrier;
    use crate::spaces::{KripkeFrame, KripkeMode, PointBackend, PointSpace, QuasiDiscreteSpace, Space};

    const ATOMS: [&str; 3] = ["a", "b", "c"];

    #[test]
    fn generated_derivations_check() {
        for seed in 0..200 {
            for depth in 1..=6 {
                let d = random_derivation(seed, depth, &ATOMS);
                assert!(d.depth() <= depth, "seed {seed}");
                check_derivation(&d).unwrap_or_else(|e| panic!("seed {seed} depth {depth}: {e}\n{d:#?}"));
            }
        }
    }

    #[test]
    fn depth_one_is_axiom_and_seeds_reproduce() {
        let d = random_derivation(1, 1, &ATOMS);
        assert_eq!(d.rule, "Axiom");
        let a = random_derivation(42, 5, &ATOMS).to_json().to_string();
        let b = random_derivation(42, 5, &ATOMS).to_json().to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn closure_rules_produce_closures() {
        for seed in 0..20 {
            assert!(mentions_closure(&random_derivation(seed, 4, &ATOMS)));
        }
    }

    #[test]
    fn cl1_is_satisfied_on_the_four_point_frame() {
        let k = KripkeFrame::new(Carrier::indexed(4), vec![vec![3], vec![2, 3], vec![2], vec![3]]).unwrap();
        let mut m = SpaceModel::new(Space::Points(PointSpace::new(PointBackend::Kripke(k, KripkeMode::Pre))));
        m.set_points("a", &[2, 3]).unwrap();
        let ax = Derivation::leaf(Rule::Axiom, Sequent::parse(&["a"], "a").unwrap());
        let d = Derivation::new(Rule::Cl1, Sequent::parse(&["a"], "C(a)").unwrap(), vec![ax.clone()]);
        let r = soundness_check(&d, std::slice::from_ref(&m)).unwrap();
        assert!(r.all_satisfied() && r.unsound.is_none());
        assert!(soundness_check(&ax, &[m]).unwrap().all_satisfied());
    }

    #[test]
    fn cl2_with_side_formulas_is_caught() {
        // 0 → 1, a = {0}, b = {1}: b ∧ C(a) = {1} but C(a ∧ b) = ∅
        let g = QuasiDiscreteSpace::chain(2);
        let mut m = SpaceModel::new(Space::Points(PointSpace::new(PointBackend::Graph(g))));
        m.set_points("a", &[0]).unwrap();
        m.set_points("b", &[1]).unwrap();
        let ax = |c: &str| Derivation::leaf(Rule::Axiom, Sequent::parse(&["b", "a"], c).unwrap());
        let premise = Derivation::new(
            Rule::AndR,
            Sequent::parse(&["b", "a"], "a & b").unwrap(),
            vec![ax("a"), ax("b")],
        );
        let d = Derivation::new(Rule::Cl2, Sequent::parse(&["b", "C(a)"], "C(a & b)").unwrap(), vec![premise]);
        let r = soundness_check(&d, &[m]).unwrap();
        assert!(!r.all_satisfied());
        let u = r.unsound.unwrap();
        assert_eq!((u.path.as_str(), u.rule.as_str()), ("root", "Cl-2"));
    }

    #[test]
    fn sound_fragment_fuzz() {
        let cfg = GeneratorConfig::new(5, &ATOMS).without(&[Rule::Cl2, Rule::UntilI]);
        let models = random_models(3, 5, 5, 0.3, &ATOMS);
        for seed in 0..40 {
            let d = random_derivation_with(seed, &cfg);
            let r = soundness_check(&d, &models).unwrap();
            assert!(r.all_satisfied(), "seed {seed}: {:?}", r.unsound);
        }
    }
}
