use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ast::Formula;
use super::ops::{self, Connectivity, PATH_CAP, UNTIL_ORACLE_CAP};
use crate::bitset::PointSet;
use crate::doctrine::{direct_image, preimage, universal_image, FiniteMap};
use crate::error::{Error, Result};
use crate::spaces::{product_space, random::random_points, PointSpace, Space, SpaceModel, Value};

/// Variable name of the implicit context used for propositional evaluation.
pub const IMPLICIT_VAR: &str = "_";
pub const MAX_CONTEXT: usize = 3;

/// An ordered list of sort-annotated variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    vars: Vec<(String, String)>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut ctx = Context::new();
        for (v, s) in pairs {
            ctx = ctx.extend(v, s)?;
        }
        Ok(ctx)
    }

    /// Parses `x:X, y:X`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Context::new());
        }
        let mut ctx = Context::new();
        for part in text.split(',') {
            let (v, s) = part
                .split_once(':')
                .ok_or_else(|| Error::invalid(format!("context entry `{}` is not `var:sort`", part.trim())))?;
            ctx = ctx.extend(v.trim(), s.trim())?;
        }
        Ok(ctx)
    }

    pub fn extend(&self, var: impl Into<String>, sort: impl Into<String>) -> Result<Self> {
        let var = var.into();
        if self.position(&var).is_some() {
            return Err(Error::invalid(format!("variable `{var}` bound twice in context")));
        }
        let mut vars = self.vars.clone();
        vars.push((var, sort.into()));
        Ok(Context { vars })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[(String, String)] {
        &self.vars
    }

    pub fn position(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|(v, _)| v == var)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vars.iter().map(|(v, s)| format!("{v}:{s}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub until_cap: u64,
    pub path_cap: u64,
    pub max_context: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            until_cap: UNTIL_ORACLE_CAP,
            path_cap: PATH_CAP,
            max_context: MAX_CONTEXT,
        }
    }
}

/// The space interpreting a context: the product of one copy of the model's
/// space per variable, row-major.
struct ContextSpace {
    ctx: Context,
    space: Space,
}

struct Evaluator<'m> {
    model: &'m SpaceModel,
    opts: EvalOptions,
}

impl<'m> Evaluator<'m> {
    fn context_space(&self, ctx: &Context) -> Result<ContextSpace> {
        if ctx.len() > self.opts.max_context {
            return Err(Error::unsupported(format!(
                "contexts of {} variables (cap {})",
                ctx.len(),
                self.opts.max_context
            )));
        }
        for (_, sort) in ctx.vars() {
            if sort != self.model.sort() {
                return Err(Error::UnknownSort(sort.clone()));
            }
        }
        Ok(ContextSpace {
            ctx: ctx.clone(),
            space: product_power(self.model.space(), ctx.len())?,
        })
    }

    /// Projection of the context space onto variable `i`.
    fn projection(&self, cs: &ContextSpace, i: usize) -> Result<FiniteMap> {
        let n = self.model.space().len();
        let k = cs.ctx.len();
        let stride = n.pow((k - 1 - i) as u32);
        FiniteMap::new(
            cs.space.carrier().clone(),
            self.model.space().carrier().clone(),
            (0..cs.space.len()).map(|t| (t / stride) % n).collect(),
        )
    }

    fn eval(&self, cs: &ContextSpace, f: &Formula) -> Result<Value> {
        let space = &cs.space;
        Ok(match f {
            Formula::True => space.top(),
            Formula::False => space.bottom(),
            Formula::Atom { name, arg } => {
                let value = self.model.atom(name)?;
                let i = match arg {
                    None => 0,
                    Some(v) => cs
                        .ctx
                        .position(v)
                        .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
                };
                if cs.ctx.len() == 1 {
                    value.clone()
                } else {
                    self.pull(cs, i, value)?
                }
            }
            Formula::Eq(x, y) => {
                let i = cs.ctx.position(x).ok_or_else(|| Error::UnboundVariable(x.clone()))?;
                let j = cs.ctx.position(y).ok_or_else(|| Error::UnboundVariable(y.clone()))?;
                match space {
                    Space::Points(p) => {
                        let (pi, pj) = (self.projection(cs, i)?, self.projection(cs, j)?);
                        let pts = (0..p.len()).filter(|&t| pi.apply(t) == pj.apply(t));
                        Value::Set(p.algebra().from_set(PointSet::from_indices(p.len(), pts))?)
                    }
                    // a fuzzy context has exactly one variable
                    Space::Fuzzy(_) => space.top(),
                }
            }
            Formula::Not(a) => space.negate(&self.eval(cs, a)?)?,
            Formula::And(a, b) => space.meet(&self.eval(cs, a)?, &self.eval(cs, b)?)?,
            Formula::Or(a, b) => space.join(&self.eval(cs, a)?, &self.eval(cs, b)?)?,
            Formula::Implies(a, b) => space.implies(&self.eval(cs, a)?, &self.eval(cs, b)?)?,
            Formula::Closure(a) => crate::spaces::closure_of(space, &self.eval(cs, a)?)?,
            Formula::Boundary(a) => ops::boundary(space, &self.eval(cs, a)?)?,
            Formula::Until(a, b) => {
                ops::until(space, &self.eval(cs, a)?, &self.eval(cs, b)?, self.opts.until_cap)?
            }
            Formula::Reach(a, bound) => ops::reach(space, &self.eval(cs, a)?, *bound)?,
            Formula::Surrounded(a, b) => ops::surrounded(space, &self.eval(cs, a)?, &self.eval(cs, b)?)?,
            Formula::Exists { var, sort, body } | Formula::Forall { var, sort, body } => {
                let inner = self.context_space(&cs.ctx.extend(var.clone(), sort.clone())?)?;
                let v = self.eval(&inner, body)?;
                let (Space::Points(outer), Space::Points(wide)) = (&cs.space, &inner.space) else {
                    return Err(Error::unsupported("quantifiers over fuzzy sorts"));
                };
                let m = self.model.space().len();
                let proj = FiniteMap::new(
                    inner.space.carrier().clone(),
                    cs.space.carrier().clone(),
                    (0..inner.space.len()).map(|t| t / m).collect(),
                )?;
                let Value::Set(s) = v else {
                    return Err(Error::AlgebraMismatch);
                };
                let out = if matches!(f, Formula::Exists { .. }) {
                    direct_image(&proj, wide.algebra(), outer.algebra(), &s)?
                } else {
                    universal_image(&proj, wide.algebra(), outer.algebra(), &s)?
                };
                Value::Set(out)
            }
        })
    }

    fn pull(&self, cs: &ContextSpace, i: usize, value: &Value) -> Result<Value> {
        let (Space::Points(wide), Space::Points(base), Value::Set(s)) = (&cs.space, self.model.space(), value)
        else {
            return Err(Error::unsupported("multi-variable contexts over fuzzy sorts"));
        };
        let proj = self.projection(cs, i)?;
        Ok(Value::Set(preimage(&proj, wide.algebra(), base.algebra(), s)?))
    }
}

fn product_power(base: &Space, k: usize) -> Result<Space> {
    let mut space = base.clone();
    for _ in 1..k {
        space = product_space(&space, base)?;
    }
    Ok(space)
}

/// The space over which [`eval`] returns results for `ctx`: one copy of the
/// model's space per variable (the empty context counts as one).
pub fn context_space(model: &SpaceModel, ctx: &Context) -> Result<Space> {
    product_power(model.space(), ctx.len().max(1))
}

/// Evaluates `φ` in context `Γ`; the empty context means one implicit
/// variable of the model's sort. The result lives over the context product.
pub fn eval_with(model: &SpaceModel, ctx: &Context, f: &Formula, opts: &EvalOptions) -> Result<Value> {
    let ctx = if ctx.is_empty() {
        Context::new().extend(IMPLICIT_VAR, model.sort())?
    } else {
        ctx.clone()
    };
    let ev = Evaluator { model, opts: *opts };
    let cs = ev.context_space(&ctx)?;
    ev.eval(&cs, f)
}

pub fn eval(model: &SpaceModel, ctx: &Context, f: &Formula) -> Result<Value> {
    eval_with(model, ctx, f, &EvalOptions::default())
}

/// Propositional evaluation.
pub fn eval_formula(model: &SpaceModel, f: &Formula) -> Result<Value> {
    eval(model, &Context::new(), f)
}

pub fn eval_boundary(model: &SpaceModel, phi: &Formula) -> Result<Value> {
    ops::boundary(model.space(), &eval_formula(model, phi)?)
}

pub fn eval_until(model: &SpaceModel, phi: &Formula, psi: &Formula) -> Result<Value> {
    let (a, b) = (eval_formula(model, phi)?, eval_formula(model, psi)?);
    ops::until(model.space(), &a, &b, UNTIL_ORACLE_CAP)
}

pub fn eval_reach(model: &SpaceModel, phi: &Formula, bound: Option<u32>) -> Result<Value> {
    ops::reach(model.space(), &eval_formula(model, phi)?, bound)
}

pub fn eval_surrounded(model: &SpaceModel, phi: &Formula, psi: &Formula) -> Result<Value> {
    let (a, b) = (eval_formula(model, phi)?, eval_formula(model, psi)?);
    ops::surrounded(model.space(), &a, &b)
}

pub fn is_connected(model: &SpaceModel, a: &Value, variant: Connectivity) -> Result<bool> {
    ops::is_connected(model.space(), a, variant, UNTIL_ORACLE_CAP)
}

/// Outcome of sampling `φ 𝒰 ψ ≤ φ 𝒮 ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UntilSurroundReport {
    pub seed: u64,
    pub samples: usize,
    /// Violating `(φ, ψ)` pairs.
    pub violations: Vec<(PointSet, PointSet)>,
}

impl UntilSurroundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples random `(φ, ψ)` pairs and compares until with surrounded.
pub fn check_until_leq_surrounded(space: &PointSpace, samples: usize, seed: u64) -> Result<UntilSurroundReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Space::Points(space.clone());
    let n = space.len();
    let mut violations = Vec::new();
    for _ in 0..samples {
        let phi = random_points(&mut rng, n, 0.5);
        let psi = random_points(&mut rng, n, 0.5);
        let a = Value::Set(space.algebra().from_set(phi.clone())?);
        let b = Value::Set(space.algebra().from_set(psi.clone())?);
        let u = ops::until(&s, &a, &b, UNTIL_ORACLE_CAP)?;
        let v = ops::surrounded(&s, &a, &b)?;
        if !s.leq(&u, &v)? {
            violations.push((phi, psi));
        }
    }
    Ok(UntilSurroundReport {
        seed,
        samples,
        violations,
    })
}
