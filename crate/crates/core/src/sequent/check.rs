use std::collections::BTreeSet;

use super::{format_path, Derivation, Sequent};
use crate::error::{Error, Result};
use crate::logic::{Formula, IMPLICIT_VAR};

/// The inference rules. Schemas, with `Φ` the side formulas:
///
/// ```text
/// Axiom      Φ, φ ⊢ φ
/// ⊤R         Φ ⊢ ⊤
/// ⊥L         Φ, ⊥ ⊢ χ
/// ∧L         Φ, φ, ψ ⊢ χ                  ⟹  Φ, φ∧ψ ⊢ χ
/// ∧R         Φ ⊢ φ    Φ ⊢ ψ               ⟹  Φ ⊢ φ∧ψ
/// ∨L         Φ, φ ⊢ χ    Φ, ψ ⊢ χ         ⟹  Φ, φ∨ψ ⊢ χ
/// ∨R₁ / ∨R₂  Φ ⊢ φ  (resp. Φ ⊢ ψ)         ⟹  Φ ⊢ φ∨ψ
/// →L         Φ ⊢ φ    Φ, ψ ⊢ χ            ⟹  Φ, φ→ψ ⊢ χ
/// →R         Φ, φ ⊢ ψ                     ⟹  Φ ⊢ φ→ψ
/// Weakening  Φ ⊢ φ                        ⟹  Φ, Ψ ⊢ φ
/// Cut        Φ ⊢ φ    Φ, φ ⊢ ψ            ⟹  Φ ⊢ ψ
/// Cl-1       Φ ⊢ ψ                        ⟹  Φ ⊢ C(ψ)
/// Cl-2       Φ, ψ ⊢ φ                     ⟹  Φ, C(ψ) ⊢ C(φ)
/// U-I        Φ, ϱ ⊢ φ    Φ, C(ϱ), ¬φ ⊢ ψ  ⟹  Φ, ϱ ⊢ φ U ψ
/// ```
///
/// In left rules the principal formula may also remain among the side
/// formulas of the premises (antecedents are sets).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Axiom,
    TopR,
    BotL,
    AndL,
    AndR,
    OrL,
    OrR1,
    OrR2,
    ImpL,
    ImpR,
    Weakening,
    Cut,
    Cl1,
    Cl2,
    UntilI,
}

impl Rule {
    pub const ALL: [Rule; 15] = [
        Rule::Axiom,
        Rule::TopR,
        Rule::BotL,
        Rule::AndL,
        Rule::AndR,
        Rule::OrL,
        Rule::OrR1,
        Rule::OrR2,
        Rule::ImpL,
        Rule::ImpR,
        Rule::Weakening,
        Rule::Cut,
        Rule::Cl1,
        Rule::Cl2,
        Rule::UntilI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Axiom => "Axiom",
            Rule::TopR => "⊤R",
            Rule::BotL => "⊥L",
            Rule::AndL => "∧L",
            Rule::AndR => "∧R",
            Rule::OrL => "∨L",
            Rule::OrR1 => "∨R₁",
            Rule::OrR2 => "∨R₂",
            Rule::ImpL => "→L",
            Rule::ImpR => "→R",
            Rule::Weakening => "Weakening",
            Rule::Cut => "Cut",
            Rule::Cl1 => "Cl-1",
            Rule::Cl2 => "Cl-2",
            Rule::UntilI => "𝒰-I",
        }
    }

    /// Accepts the canonical names and ASCII spellings (`TopR`, `AndL`,
    /// `OrR1`, `ImpR`, `Cl1`, `U-I`, ...), case-insensitively for the latter.
    pub fn from_name(name: &str) -> Option<Rule> {
        if let Some(r) = Rule::ALL.iter().find(|r| r.name() == name) {
            return Some(*r);
        }
        let key: String = name
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        Some(match key.as_str() {
            "axiom" | "ax" | "id" => Rule::Axiom,
            "topr" | "truer" => Rule::TopR,
            "botl" | "falsel" => Rule::BotL,
            "andl" => Rule::AndL,
            "andr" => Rule::AndR,
            "orl" => Rule::OrL,
            "orr1" => Rule::OrR1,
            "orr2" => Rule::OrR2,
            "impl" | "impliesl" => Rule::ImpL,
            "impr" | "impliesr" => Rule::ImpR,
            "weakening" | "weak" | "w" => Rule::Weakening,
            "cut" => Rule::Cut,
            "cl1" => Rule::Cl1,
            "cl2" => Rule::Cl2,
            "ui" | "untili" => Rule::UntilI,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Axiom | Rule::TopR | Rule::BotL => 0,
            Rule::AndL | Rule::OrR1 | Rule::OrR2 | Rule::ImpR | Rule::Weakening | Rule::Cl1 | Rule::Cl2 => 1,
            Rule::AndR | Rule::OrL | Rule::ImpL | Rule::Cut | Rule::UntilI => 2,
        }
    }
}

type Ante = BTreeSet<Formula>;

fn with(base: &Ante, extra: &[&Formula]) -> Ante {
    let mut out = base.clone();
    out.extend(extra.iter().map(|f| (*f).clone()));
    out
}

fn without(base: &Ante, f: &Formula) -> Ante {
    let mut out = base.clone();
    out.remove(f);
    out
}

/// Whether `premise` equals the conclusion's antecedents with `principal`
/// replaced by (or supplemented with) `added`.
fn side_ok(conclusion: &Ante, principal: &Formula, premise: &Ante, added: &[&Formula]) -> bool {
    *premise == with(&without(conclusion, principal), added) || *premise == with(conclusion, added)
}

fn schema(rule: Rule, c: &Sequent, ps: &[&Sequent]) -> std::result::Result<(), String> {
    let fail = |msg: &str| Err(msg.to_string());
    let ante = &c.ante;
    match rule {
        Rule::Axiom => {
            if ante.contains(&c.cons) {
                Ok(())
            } else {
                fail("consequent is not among the antecedents")
            }
        }
        Rule::TopR => match c.cons {
            Formula::True => Ok(()),
            _ => fail("consequent is not ⊤"),
        },
        Rule::BotL => {
            if ante.contains(&Formula::False) {
                Ok(())
            } else {
                fail("⊥ is not among the antecedents")
            }
        }
        Rule::AndL => {
            let p = ps[0];
            if p.cons != c.cons {
                return fail("premise consequent differs from the conclusion's");
            }
            let found = ante.iter().any(|f| match f {
                Formula::And(a, b) => side_ok(ante, f, &p.ante, &[a, b]),
                _ => false,
            });
            if found {
                Ok(())
            } else {
                fail("no conjunction in the antecedents matches the premise")
            }
        }
        Rule::AndR => {
            let Formula::And(a, b) = &c.cons else {
                return fail("consequent is not a conjunction");
            };
            if ps[0].ante != *ante || ps[1].ante != *ante {
                return fail("premise antecedents differ from the conclusion's");
            }
            if ps[0].cons != **a || ps[1].cons != **b {
                return fail("premise consequents are not the conjuncts");
            }
            Ok(())
        }
        Rule::OrL => {
            if ps[0].cons != c.cons || ps[1].cons != c.cons {
                return fail("premise consequents differ from the conclusion's");
            }
            let found = ante.iter().any(|f| match f {
                Formula::Or(a, b) => side_ok(ante, f, &ps[0].ante, &[a]) && side_ok(ante, f, &ps[1].ante, &[b]),
                _ => false,
            });
            if found {
                Ok(())
            } else {
                fail("no disjunction in the antecedents matches the premises")
            }
        }
        Rule::OrR1 | Rule::OrR2 => {
            let Formula::Or(a, b) = &c.cons else {
                return fail("consequent is not a disjunction");
            };
            if ps[0].ante != *ante {
                return fail("premise antecedents differ from the conclusion's");
            }
            let want = if rule == Rule::OrR1 { a } else { b };
            if ps[0].cons != **want {
                return fail("premise consequent is not the chosen disjunct");
            }
            Ok(())
        }
        Rule::ImpL => {
            if ps[1].cons != c.cons {
                return fail("second premise consequent differs from the conclusion's");
            }
            let found = ante.iter().any(|f| match f {
                Formula::Implies(a, b) => {
                    ps[0].cons == **a && side_ok(ante, f, &ps[0].ante, &[]) && side_ok(ante, f, &ps[1].ante, &[b])
                }
                _ => false,
            });
            if found {
                Ok(())
            } else {
                fail("no implication in the antecedents matches the premises")
            }
        }
        Rule::ImpR => {
            let Formula::Implies(a, b) = &c.cons else {
                return fail("consequent is not an implication");
            };
            if ps[0].cons != **b {
                return fail("premise consequent is not the implication's conclusion");
            }
            if ps[0].ante != with(ante, &[a]) {
                return fail("premise antecedents are not the conclusion's plus the hypothesis");
            }
            Ok(())
        }
        Rule::Weakening => {
            if ps[0].cons != c.cons {
                return fail("premise consequent differs from the conclusion's");
            }
            if !ps[0].ante.is_subset(ante) {
                return fail("premise antecedents are not contained in the conclusion's");
            }
            Ok(())
        }
        Rule::Cut => {
            if ps[0].ante != *ante {
                return fail("first premise antecedents differ from the conclusion's");
            }
            if ps[1].cons != c.cons {
                return fail("second premise consequent differs from the conclusion's");
            }
            if ps[1].ante != with(ante, &[&ps[0].cons]) {
                return fail("second premise does not assume the cut formula");
            }
            Ok(())
        }
        Rule::Cl1 => {
            let Formula::Closure(inner) = &c.cons else {
                return fail("consequent is not a closure");
            };
            if ps[0].ante != *ante || ps[0].cons != **inner {
                return fail("premise is not the conclusion without the closure");
            }
            Ok(())
        }
        Rule::Cl2 => {
            let Formula::Closure(phi) = &c.cons else {
                return fail("consequent is not a closure");
            };
            if ps[0].cons != **phi {
                return fail("premise consequent is not the closed formula");
            }
            let found = ante.iter().any(|f| match f {
                Formula::Closure(psi) => side_ok(ante, f, &ps[0].ante, &[psi]),
                _ => false,
            });
            if found {
                Ok(())
            } else {
                fail("no closure in the antecedents matches the premise")
            }
        }
        Rule::UntilI => {
            let Formula::Until(phi, psi) = &c.cons else {
                return fail("consequent is not an until");
            };
            if ps[0].ante != *ante || ps[0].cons != **phi {
                return fail("first premise is not Φ, ϱ ⊢ φ");
            }
            if ps[1].cons != **psi {
                return fail("second premise consequent is not ψ");
            }
            let not_phi = Formula::Not(phi.clone());
            let found = ante.iter().any(|rho| {
                let c_rho = Formula::closure(rho.clone());
                side_ok(ante, rho, &ps[1].ante, &[&c_rho, &not_phi])
            });
            if found {
                Ok(())
            } else {
                fail("second premise is not Φ, C(ϱ), ¬φ ⊢ ψ for any ϱ in the antecedents")
            }
        }
    }
}

fn well_formed(s: &Sequent) -> std::result::Result<(), String> {
    let bound = |v: &str| {
        if s.ctx.is_empty() {
            v == IMPLICIT_VAR
        } else {
            s.ctx.position(v).is_some()
        }
    };
    for f in s.ante.iter().chain(std::iter::once(&s.cons)) {
        if let Some(v) = f.free_vars().into_iter().find(|v| !bound(v)) {
            return Err(format!("variable `{v}` in `{f}` is not bound by the context"));
        }
    }
    Ok(())
}

fn check_node(d: &Derivation) -> std::result::Result<(), String> {
    let rule = Rule::from_name(&d.rule).ok_or_else(|| format!("unknown rule `{}`", d.rule))?;
    well_formed(&d.conclusion)?;
    if d.premises.len() != rule.arity() {
        return Err(format!(
            "{} takes {} premise(s), found {}",
            rule.name(),
            rule.arity(),
            d.premises.len()
        ));
    }
    if let Some(p) = d.premises.iter().find(|p| p.conclusion.ctx != d.conclusion.ctx) {
        return Err(format!("premise context `{}` differs from `{}`", p.conclusion.ctx, d.conclusion.ctx));
    }
    let ps: Vec<&Sequent> = d.premises.iter().map(|p| &p.conclusion).collect();
    schema(rule, &d.conclusion, &ps).map_err(|e| format!("{}: {e}", rule.name()))
}

/// Checks every node, premises before conclusions, and reports the first
/// failing node in that order.
pub fn check_derivation(d: &Derivation) -> Result<()> {
    fn go(d: &Derivation, path: &mut Vec<usize>) -> Result<()> {
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            go(p, path)?;
            path.pop();
        }
        check_node(d).map_err(|reason| Error::RuleViolation {
            path: format_path(path),
            reason,
        })
    }
    go(d, &mut Vec::new())
}
