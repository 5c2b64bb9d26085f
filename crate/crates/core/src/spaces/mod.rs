//! Finite closure-space backends and models (a space plus atom valuations).

mod backends;
mod descriptor;
pub mod pgm;
pub mod random;
mod steps;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

pub use backends::{
    Adjacency, Direction, ExplicitSpace, ExplicitTable, FuzzySpace, GridSpace, KripkeFrame,
    KripkeMode, MarkovFrame, QuasiDiscreteSpace, EXPLICIT_MAX_POINTS,
};
pub use descriptor::{atom_value, build_space, load_model, parse_rational, value_to_json, SCHEMA_VERSION};
pub use steps::StepGraph;

use crate::algebra::{Carrier, FuzzyPredicateAlgebra, FuzzySet, HeytingAlgebra, PowersetAlgebra, Subset};
use crate::bitset::PointSet;
use crate::doctrine::ClosureOperator;
use crate::error::{Error, Result};

/// Closure backends over the powerset of a finite carrier.
#[derive(Clone, Debug)]
pub enum PointBackend {
    Graph(QuasiDiscreteSpace),
    Grid(GridSpace),
    Kripke(KripkeFrame, KripkeMode),
    Markov(MarkovFrame),
    Explicit(ExplicitSpace),
}

impl PointBackend {
    pub fn kind(&self) -> &'static str {
        match self {
            PointBackend::Graph(_) => "graph",
            PointBackend::Grid(_) => "grid",
            PointBackend::Kripke(_, KripkeMode::Pre) => "kripke-pre",
            PointBackend::Kripke(_, KripkeMode::Suc) => "kripke-suc",
            PointBackend::Markov(_) => "markov",
            PointBackend::Explicit(_) => "explicit",
        }
    }

    fn carrier(&self) -> &Carrier {
        match self {
            PointBackend::Graph(g) => g.carrier(),
            PointBackend::Grid(g) => g.graph().carrier(),
            PointBackend::Kripke(k, _) => k.carrier(),
            PointBackend::Markov(m) => m.carrier(),
            PointBackend::Explicit(e) => e.carrier(),
        }
    }
}

/// A closure space whose predicates are subsets.
#[derive(Clone, Debug)]
pub struct PointSpace {
    algebra: PowersetAlgebra,
    backend: PointBackend,
    steps: Arc<OnceLock<StepGraph>>,
}

impl PointSpace {
    pub fn new(backend: PointBackend) -> Self {
        let algebra = PowersetAlgebra::new(backend.carrier().clone());
        PointSpace {
            algebra,
            backend,
            steps: Arc::new(OnceLock::new()),
        }
    }

    pub fn algebra(&self) -> &PowersetAlgebra {
        &self.algebra
    }

    pub fn carrier(&self) -> &Carrier {
        self.algebra.carrier()
    }

    pub fn len(&self) -> usize {
        self.algebra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebra.is_empty()
    }

    pub fn backend(&self) -> &PointBackend {
        &self.backend
    }

    /// Whether the backend is additive by construction; this selects the
    /// local (fixpoint and walk-based) evaluation strategies.
    pub fn is_additive(&self) -> bool {
        match &self.backend {
            PointBackend::Graph(_) | PointBackend::Grid(_) => true,
            PointBackend::Kripke(_, mode) => *mode == KripkeMode::Suc,
            PointBackend::Markov(_) => false,
            PointBackend::Explicit(e) => e.is_additive(),
        }
    }

    pub fn close_points(&self, a: &PointSet) -> PointSet {
        match &self.backend {
            PointBackend::Graph(g) => g.close(a),
            PointBackend::Grid(g) => g.graph().close(a),
            PointBackend::Kripke(k, mode) => k.close(*mode, a),
            PointBackend::Markov(m) => m.close(a),
            PointBackend::Explicit(e) => e.close(a),
        }
    }

    /// The singleton-closure step relation.
    pub fn steps(&self) -> &StepGraph {
        self.steps.get_or_init(|| match &self.backend {
            PointBackend::Graph(g) => g.steps().clone(),
            PointBackend::Grid(g) => g.graph().steps().clone(),
            _ => {
                let n = self.len();
                StepGraph::from_lists(
                    n,
                    (0..n).map(|x| self.close_points(&PointSet::singleton(n, x)).to_vec()),
                )
            }
        })
    }

    pub fn close(&self, a: &Subset) -> Result<Subset> {
        let pts = self.algebra.check(a)?;
        Ok(self.algebra.wrap(self.close_points(pts)))
    }
}

impl ClosureOperator for PointSpace {
    type Algebra = PowersetAlgebra;

    fn algebra(&self) -> &PowersetAlgebra {
        &self.algebra
    }

    fn apply(&self, a: &Subset) -> Result<Subset> {
        self.close(a)
    }
}

impl FuzzySpace {
    pub fn close(&self, a: &FuzzySet) -> Result<FuzzySet> {
        let v = self.algebra().check(a)?;
        Ok(self.algebra().wrap(self.close_values(v)))
    }
}

impl ClosureOperator for FuzzySpace {
    type Algebra = FuzzyPredicateAlgebra;

    fn algebra(&self) -> &FuzzyPredicateAlgebra {
        FuzzySpace::algebra(self)
    }

    fn apply(&self, a: &FuzzySet) -> Result<FuzzySet> {
        self.close(a)
    }
}

/// A predicate: a subset for point backends, a fuzzy subset otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Set(Subset),
    Fuzzy(FuzzySet),
}

impl Value {
    pub fn as_set(&self) -> Option<&Subset> {
        match self {
            Value::Set(s) => Some(s),
            Value::Fuzzy(_) => None,
        }
    }

    pub fn points(&self) -> Option<&PointSet> {
        self.as_set().map(Subset::points)
    }

    pub fn as_fuzzy(&self) -> Option<&FuzzySet> {
        match self {
            Value::Fuzzy(f) => Some(f),
            Value::Set(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Space {
    Points(PointSpace),
    Fuzzy(FuzzySpace),
}

macro_rules! lift2 {
    ($self:ident, $a:ident, $b:ident, $op:ident) => {
        match ($self, $a, $b) {
            (Space::Points(s), Value::Set(x), Value::Set(y)) => s.algebra().$op(x, y).map(Value::Set),
            (Space::Fuzzy(s), Value::Fuzzy(x), Value::Fuzzy(y)) => {
                s.algebra().$op(x, y).map(Value::Fuzzy)
            }
            _ => Err(Error::AlgebraMismatch),
        }
    };
}

impl Space {
    pub fn kind(&self) -> &'static str {
        match self {
            Space::Points(p) => p.backend().kind(),
            Space::Fuzzy(_) => "fuzzy",
        }
    }

    pub fn carrier(&self) -> &Carrier {
        match self {
            Space::Points(p) => p.carrier(),
            Space::Fuzzy(f) => f.algebra().carrier(),
        }
    }

    pub fn len(&self) -> usize {
        self.carrier().len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier().is_empty()
    }

    pub fn as_points(&self) -> Option<&PointSpace> {
        match self {
            Space::Points(p) => Some(p),
            Space::Fuzzy(_) => None,
        }
    }

    pub fn top(&self) -> Value {
        match self {
            Space::Points(p) => Value::Set(p.algebra().top()),
            Space::Fuzzy(f) => Value::Fuzzy(f.algebra().top()),
        }
    }

    pub fn bottom(&self) -> Value {
        match self {
            Space::Points(p) => Value::Set(p.algebra().bottom()),
            Space::Fuzzy(f) => Value::Fuzzy(f.algebra().bottom()),
        }
    }

    pub fn meet(&self, a: &Value, b: &Value) -> Result<Value> {
        lift2!(self, a, b, meet)
    }

    pub fn join(&self, a: &Value, b: &Value) -> Result<Value> {
        lift2!(self, a, b, join)
    }

    pub fn implies(&self, a: &Value, b: &Value) -> Result<Value> {
        lift2!(self, a, b, implies)
    }

    pub fn leq(&self, a: &Value, b: &Value) -> Result<bool> {
        match (self, a, b) {
            (Space::Points(s), Value::Set(x), Value::Set(y)) => s.algebra().leq(x, y),
            (Space::Fuzzy(s), Value::Fuzzy(x), Value::Fuzzy(y)) => s.algebra().leq(x, y),
            _ => Err(Error::AlgebraMismatch),
        }
    }

    pub fn negate(&self, a: &Value) -> Result<Value> {
        match (self, a) {
            (Space::Points(s), Value::Set(x)) => s.algebra().negate(x).map(Value::Set),
            (Space::Fuzzy(s), Value::Fuzzy(x)) => s.algebra().negate(x).map(Value::Fuzzy),
            _ => Err(Error::AlgebraMismatch),
        }
    }

    pub fn describe(&self, a: &Value) -> serde_json::Value {
        match (self, a) {
            (Space::Points(s), Value::Set(x)) => s.algebra().describe(x),
            (Space::Fuzzy(s), Value::Fuzzy(x)) => s.algebra().describe(x),
            _ => serde_json::Value::Null,
        }
    }
}

/// Applies the space's closure to a predicate.
pub fn closure_of(space: &Space, a: &Value) -> Result<Value> {
    match (space, a) {
        (Space::Points(s), Value::Set(x)) => s.close(x).map(Value::Set),
        (Space::Fuzzy(s), Value::Fuzzy(x)) => s.close(x).map(Value::Fuzzy),
        _ => Err(Error::AlgebraMismatch),
    }
}

/// The product of two spaces, with closure the additive extension of
/// `c((x, y)) = c₁({x}) × {y} ∪ {x} × c₂({y})`. Points are laid out
/// row-major: `(x, y) ↦ x · |s2| + y`.
pub fn product_space(s1: &Space, s2: &Space) -> Result<Space> {
    let (a, b) = match (s1, s2) {
        (Space::Points(a), Space::Points(b)) => (a, b),
        _ => return Err(Error::unsupported("products of fuzzy spaces")),
    };
    for s in [a, b] {
        match s.backend() {
            PointBackend::Markov(_) => return Err(Error::unsupported("products of Markov frames")),
            PointBackend::Explicit(e) if !e.is_additive() => {
                return Err(Error::unsupported("products of full-table explicit spaces"))
            }
            _ => {}
        }
    }
    let carrier = a.carrier().product(b.carrier());
    let m = b.len();
    let (sa, sb) = (a.steps(), b.steps());
    let mut edges = Vec::with_capacity(sa.edge_count() * m + sb.edge_count() * a.len());
    for x in 0..a.len() {
        for y in 0..m {
            let here = x * m + y;
            edges.extend(sa.successors(x).map(|x2| (here, x2 * m + y)));
            edges.extend(sb.successors(y).map(|y2| (here, x * m + y2)));
        }
    }
    let graph = QuasiDiscreteSpace::new(carrier, edges, Direction::Forward)?;
    Ok(Space::Points(PointSpace::new(PointBackend::Graph(graph))))
}

/// A space together with a valuation of atomic predicates.
#[derive(Clone, Debug)]
pub struct SpaceModel {
    sort: String,
    space: Space,
    atoms: BTreeMap<String, Value>,
}

pub const DEFAULT_SORT: &str = "X";

impl SpaceModel {
    pub fn new(space: Space) -> Self {
        SpaceModel {
            sort: DEFAULT_SORT.to_string(),
            space,
            atoms: BTreeMap::new(),
        }
    }

    pub fn with_sort(mut self, sort: impl Into<String>) -> Self {
        self.sort = sort.into();
        self
    }

    pub fn sort(&self) -> &str {
        &self.sort
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn atoms(&self) -> &BTreeMap<String, Value> {
        &self.atoms
    }

    pub fn atom(&self, name: &str) -> Result<&Value> {
        self.atoms
            .get(name)
            .ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    pub fn set_atom(&mut self, name: impl Into<String>, value: Value) -> Result<()> {
        let ok = match (&self.space, &value) {
            (Space::Points(p), Value::Set(s)) => p.algebra().check(s).is_ok(),
            (Space::Fuzzy(f), Value::Fuzzy(v)) => f.algebra().check(v).is_ok(),
            _ => false,
        };
        if !ok {
            return Err(Error::AlgebraMismatch);
        }
        self.atoms.insert(name.into(), value);
        Ok(())
    }

    /// Sets a point-set atom from indices.
    pub fn set_points(&mut self, name: impl Into<String>, points: &[usize]) -> Result<()> {
        let p = self
            .space
            .as_points()
            .ok_or_else(|| Error::unsupported("point-set atoms on a fuzzy space"))?;
        let s = p.algebra().subset(points.iter().copied())?;
        self.set_atom(name, Value::Set(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Space {
        Space::Points(PointSpace::new(PointBackend::Graph(QuasiDiscreteSpace::chain(n))))
    }

    #[test]
    fn product_of_chains() {
        let p = product_space(&chain(2), &chain(2)).unwrap();
        let ps = p.as_points().unwrap();
        assert_eq!(ps.len(), 4);
        let origin = ps.algebra().subset([0]).unwrap();
        // (0,0) ↦ {(0,0), (0,1), (1,0)} = indices {0, 1, 2}
        assert_eq!(ps.close(&origin).unwrap(), ps.algebra().subset([0, 1, 2]).unwrap());
        assert_eq!(ps.carrier().name(1), "(0,1)");
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let one = Space::Points(PointSpace::new(PointBackend::Graph(QuasiDiscreteSpace::chain(1))));
        let base = chain(3);
        let p = product_space(&base, &one).unwrap();
        let (ps, bs) = (p.as_points().unwrap(), base.as_points().unwrap());
        for mask in 0..8u64 {
            let a = PointSet::from_mask(3, mask);
            assert_eq!(ps.close_points(&a), bs.close_points(&a));
        }
    }

    #[test]
    fn markov_product_unsupported() {
        use num_rational::BigRational;
        let one = BigRational::from_integer(1.into());
        let m = MarkovFrame::new(Carrier::indexed(1), vec![vec![one.clone()]], one).unwrap();
        let s = Space::Points(PointSpace::new(PointBackend::Markov(m)));
        assert!(matches!(product_space(&s, &s), Err(Error::Unsupported(_))));
    }

    #[test]
    fn steps_from_generic_closure() {
        let k = KripkeFrame::new(Carrier::indexed(4), vec![vec![3], vec![2, 3], vec![2], vec![3]]).unwrap();
        let s = PointSpace::new(PointBackend::Kripke(k, KripkeMode::Pre));
        // pre({3}) = {0,3}: a step from 3 to 0
        assert_eq!(s.steps().successors(3).collect::<Vec<_>>(), vec![0]);
        assert!(!s.is_additive());
    }

    #[test]
    fn atoms_checked_against_space() {
        let mut m = SpaceModel::new(chain(2));
        assert!(m.set_points("a", &[1]).is_ok());
        let other = PowersetAlgebra::new(Carrier::indexed(3));
        assert_eq!(m.set_atom("b", Value::Set(other.top())), Err(Error::AlgebraMismatch));
        assert!(matches!(m.atom("zz"), Err(Error::UnknownAtom(_))));
    }
}
