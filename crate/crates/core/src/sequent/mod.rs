//! Sequents `Γ | Φ ⊢ φ` of the propositional closure logic, derivation trees,
//! a rule checker and a semantic soundness harness.

mod check;
mod fuzz;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::logic::{parse_formula, Context, Formula};

pub use check::{check_derivation, Rule};
pub use fuzz::{
    find_unsound_node, random_derivation, random_derivation_with, random_models, soundness_check, GeneratorConfig,
    ModelVerdict, SoundnessReport, UnsoundNode,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub ctx: Context,
    pub ante: BTreeSet<Formula>,
    pub cons: Formula,
}

impl Sequent {
    pub fn new(ctx: Context, ante: impl IntoIterator<Item = Formula>, cons: Formula) -> Self {
        Sequent {
            ctx,
            ante: ante.into_iter().collect(),
            cons,
        }
    }

    /// Parses each formula of `ante ⊢ cons` in the empty context.
    pub fn parse(ante: &[&str], cons: &str) -> Result<Self> {
        let ante = ante.iter().map(|t| parse_formula(t)).collect::<Result<Vec<_>>>()?;
        Ok(Sequent::new(Context::new(), ante, parse_formula(cons)?))
    }

    pub fn to_json(&self) -> Json {
        json!({
            "ctx": self.ctx.to_string(),
            "ante": self.ante.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "cons": self.cons.to_string(),
        })
    }

    pub fn from_json(v: &Json) -> Result<Self> {
        let ctx = match v.get("ctx") {
            None | Some(Json::Null) => Context::new(),
            Some(Json::String(s)) => Context::parse(s)?,
            Some(Json::Array(items)) => {
                let parts = items
                    .iter()
                    .map(|i| i.as_str().ok_or_else(|| Error::invalid("context entries must be strings")))
                    .collect::<Result<Vec<_>>>()?;
                Context::parse(&parts.join(","))?
            }
            Some(_) => return Err(Error::invalid("`ctx` must be a string or a list of strings")),
        };
        let ante = match v.get("ante") {
            None | Some(Json::Null) => Vec::new(),
            Some(Json::Array(items)) => items
                .iter()
                .map(|i| {
                    i.as_str()
                        .ok_or_else(|| Error::invalid("antecedents must be formula strings"))
                        .and_then(parse_formula)
                })
                .collect::<Result<_>>()?,
            Some(_) => return Err(Error::invalid("`ante` must be a list")),
        };
        let cons = v
            .get("cons")
            .and_then(Json::as_str)
            .ok_or_else(|| Error::invalid("sequent needs a `cons` formula string"))?;
        Ok(Sequent::new(ctx, ante, parse_formula(cons)?))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ante: Vec<String> = self.ante.iter().map(|a| a.to_string()).collect();
        if !self.ctx.is_empty() {
            write!(f, "{} | ", self.ctx)?;
        }
        write!(f, "{} ⊢ {}", ante.join(", "), self.cons)
    }
}

/// A derivation tree. The rule is kept by name so that files naming an
/// unknown rule still load and are rejected by the checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: String,
    pub conclusion: Sequent,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(rule: Rule, conclusion: Sequent, premises: Vec<Derivation>) -> Self {
        Derivation {
            rule: rule.name().to_string(),
            conclusion,
            premises,
        }
    }

    pub fn leaf(rule: Rule, conclusion: Sequent) -> Self {
        Derivation::new(rule, conclusion, Vec::new())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Derivation::depth).max().unwrap_or(0)
    }

    /// Pre-order traversal with node paths.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &Derivation)> {
        fn go<'a>(d: &'a Derivation, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Derivation)>) {
            out.push((path.clone(), d));
            for (i, p) in d.premises.iter().enumerate() {
                path.push(i);
                go(p, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn to_json(&self) -> Json {
        json!({
            "rule": self.rule,
            "conclusion": self.conclusion.to_json(),
            "premises": self.premises.iter().map(Derivation::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Json) -> Result<Self> {
        let rule = v
            .get("rule")
            .and_then(Json::as_str)
            .ok_or_else(|| Error::invalid("derivation node needs a `rule` string"))?;
        let conclusion = Sequent::from_json(
            v.get("conclusion")
                .ok_or_else(|| Error::invalid("derivation node needs a `conclusion`"))?,
        )?;
        let premises = match v.get("premises") {
            None | Some(Json::Null) => Vec::new(),
            Some(Json::Array(items)) => items.iter().map(Derivation::from_json).collect::<Result<_>>()?,
            Some(_) => return Err(Error::invalid("`premises` must be a list")),
        };
        Ok(Derivation {
            rule: rule.to_string(),
            conclusion,
            premises,
        })
    }
}

pub fn load_derivation(path: &Path) -> Result<Derivation> {
    let text = std::fs::read_to_string(path)?;
    Derivation::from_json(&serde_json::from_str(&text)?)
}

/// Renders a node path as `root.0.1`.
pub fn format_path(path: &[usize]) -> String {
    let mut s = String::from("root");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}
