use std::fmt;

/// Closure-logic formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    /// An atomic predicate, optionally applied to a context variable; a bare
    /// atom refers to the first variable of the context.
    Atom {
        name: String,
        arg: Option<String>,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Closure(Box<Formula>),
    Boundary(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    /// Reachability; `Some(n)` restricts to paths of `n` points.
    Reach(Box<Formula>, Option<u32>),
    Surrounded(Box<Formula>, Box<Formula>),
    Exists {
        var: String,
        sort: String,
        body: Box<Formula>,
    },
    Forall {
        var: String,
        sort: String,
        body: Box<Formula>,
    },
    Eq(String, String),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom {
            name: name.to_string(),
            arg: None,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn closure(a: Formula) -> Formula {
        Formula::Closure(Box::new(a))
    }

    pub fn boundary(a: Formula) -> Formula {
        Formula::Boundary(Box::new(a))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn surrounded(a: Formula, b: Formula) -> Formula {
        Formula::Surrounded(Box::new(a), Box::new(b))
    }

    pub fn reach(a: Formula, bound: Option<u32>) -> Formula {
        Formula::Reach(Box::new(a), bound)
    }

    /// Names of atoms occurring in the formula, sorted and deduplicated.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom { name, .. } = f {
                out.push(name.clone());
            }
        });
        out.sort();
        out.dedup();
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => {}
            Formula::Not(a) | Formula::Closure(a) | Formula::Boundary(a) | Formula::Reach(a, _) => {
                a.visit(f)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::Surrounded(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Exists { body, .. } | Formula::Forall { body, .. } => body.visit(f),
        }
    }

    /// Variables occurring free, sorted and deduplicated.
    pub fn free_vars(&self) -> Vec<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            let mut use_var = |v: &String, bound: &Vec<String>| {
                if !bound.contains(v) {
                    out.push(v.clone());
                }
            };
            match f {
                Formula::True | Formula::False | Formula::Atom { arg: None, .. } => {}
                Formula::Atom { arg: Some(x), .. } => use_var(x, bound),
                Formula::Eq(x, y) => {
                    use_var(x, bound);
                    use_var(y, bound);
                }
                Formula::Not(a) | Formula::Closure(a) | Formula::Boundary(a) | Formula::Reach(a, _) => {
                    go(a, bound, out)
                }
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Until(a, b)
                | Formula::Surrounded(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Exists { var, body, .. } | Formula::Forall { var, body, .. } => {
                    bound.push(var.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Exists { .. } | Formula::Forall { .. } => 0,
            Formula::Implies(..) => 1,
            Formula::Until(..) | Formula::Surrounded(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) | Formula::Closure(_) | Formula::Boundary(_) | Formula::Reach(..) => 5,
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => 6,
        }
    }

    /// Writes `self`, parenthesized when its precedence is below `min`.
    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom { name, arg: None } => f.write_str(name),
            Formula::Atom { name, arg: Some(x) } => write!(f, "{name}({x})"),
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Not(a) => {
                f.write_str("!")?;
                a.write_at(f, 5)
            }
            Formula::Closure(a) => unary(f, "C", a),
            Formula::Boundary(a) => unary(f, "B", a),
            Formula::Reach(a, None) => unary(f, "R", a),
            Formula::Reach(a, Some(n)) => unary(f, &format!("R[{n}]"), a),
            // left-associative levels: the right operand needs one level more
            Formula::And(a, b) => binary(f, a, " & ", b, 4, 5),
            Formula::Or(a, b) => binary(f, a, " | ", b, 3, 4),
            Formula::Until(a, b) => binary(f, a, " U ", b, 2, 3),
            Formula::Surrounded(a, b) => binary(f, a, " S ", b, 2, 3),
            // right-associative
            Formula::Implies(a, b) => binary(f, a, " -> ", b, 2, 1),
            Formula::Exists { var, sort, body } => {
                write!(f, "E {var}:{sort}. ")?;
                body.write_at(f, 0)
            }
            Formula::Forall { var, sort, body } => {
                write!(f, "A {var}:{sort}. ")?;
                body.write_at(f, 0)
            }
        }
    }
}

fn unary(f: &mut fmt::Formatter<'_>, op: &str, a: &Formula) -> fmt::Result {
    write!(f, "{op}(")?;
    a.write_at(f, 0)?;
    f.write_str(")")
}

fn binary(
    f: &mut fmt::Formatter<'_>,
    a: &Formula,
    op: &str,
    b: &Formula,
    left: u8,
    right: u8,
) -> fmt::Result {
    // quantifiers extend to the right, so only a trailing one may go bare
    a.write_at(f, left.max(1))?;
    f.write_str(op)?;
    b.write_at(f, right)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
