use num_rational::BigRational;
use num_traits::{One, Zero};

use super::steps::StepGraph;
use crate::algebra::{format_grade, Carrier, FuzzyPredicateAlgebra};
use crate::bitset::PointSet;
use crate::error::{Error, Result};

/// Which neighbours a closure step adds in a relation-induced space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Direction {
    /// `c(A) = A ∪ {y : (a, y) ∈ E}` — successors.
    #[default]
    Forward,
    /// `c(A) = A ∪ {y : (y, a) ∈ E}` — predecessors.
    Backward,
    Symmetric,
}

impl Direction {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Direction::Forward),
            "backward" => Ok(Direction::Backward),
            "symmetric" => Ok(Direction::Symmetric),
            _ => Err(Error::invalid(format!(
                "unknown direction `{s}` (expected forward, backward or symmetric)"
            ))),
        }
    }
}

/// A closure space induced by a binary relation.
#[derive(Clone, Debug)]
pub struct QuasiDiscreteSpace {
    carrier: Carrier,
    edges: Vec<(usize, usize)>,
    direction: Direction,
    steps: StepGraph,
}

impl QuasiDiscreteSpace {
    pub fn new(carrier: Carrier, edges: Vec<(usize, usize)>, direction: Direction) -> Result<Self> {
        let n = carrier.len();
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::invalid(format!(
                "edge ({a}, {b}) leaves a carrier of {n} points"
            )));
        }
        let mut lists = vec![Vec::new(); n];
        for &(a, b) in &edges {
            if matches!(direction, Direction::Forward | Direction::Symmetric) {
                lists[a].push(b);
            }
            if matches!(direction, Direction::Backward | Direction::Symmetric) {
                lists[b].push(a);
            }
        }
        let steps = StepGraph::from_lists(n, lists);
        Ok(QuasiDiscreteSpace {
            carrier,
            edges,
            direction,
            steps,
        })
    }

    /// The chain `0 → 1 → … → n-1`.
    pub fn chain(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(Carrier::indexed(n), edges, Direction::Forward).expect("chain edges in range")
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn steps(&self) -> &StepGraph {
        &self.steps
    }

    pub fn close(&self, a: &PointSet) -> PointSet {
        self.steps.close(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjacency {
    VonNeumann4,
    Moore8,
}

impl Adjacency {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "von-neumann-4" | "4" => Ok(Adjacency::VonNeumann4),
            "moore-8" | "8" => Ok(Adjacency::Moore8),
            _ => Err(Error::invalid(format!(
                "unknown adjacency `{s}` (expected von-neumann-4 or moore-8)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Adjacency::VonNeumann4 => "von-neumann-4",
            Adjacency::Moore8 => "moore-8",
        }
    }
}

/// A rectangular pixel grid; point `(x, y)` has index `y * width + x` and
/// name `"x,y"`.
#[derive(Clone, Debug)]
pub struct GridSpace {
    width: usize,
    height: usize,
    adjacency: Adjacency,
    graph: QuasiDiscreteSpace,
}

impl GridSpace {
    pub fn new(width: usize, height: usize, adjacency: Adjacency) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("grid dimensions must be positive"));
        }
        let carrier = Carrier::new(
            (0..width * height).map(|i| format!("{},{}", i % width, i / width)),
        )?;
        let offsets: &[(isize, isize)] = match adjacency {
            Adjacency::VonNeumann4 => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            Adjacency::Moore8 => &[
                (1, 0),
                (-1, 0),
                (0, 1),
                (0, -1),
                (1, 1),
                (1, -1),
                (-1, 1),
                (-1, -1),
            ],
        };
        let mut edges = Vec::with_capacity(width * height * offsets.len());
        for y in 0..height {
            for x in 0..width {
                for &(dx, dy) in offsets {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    if nx >= 0 && ny >= 0 && (nx as usize) < width && (ny as usize) < height {
                        edges.push((y * width + x, ny as usize * width + nx as usize));
                    }
                }
            }
        }
        let graph = QuasiDiscreteSpace::new(carrier, edges, Direction::Forward)?;
        Ok(GridSpace {
            width,
            height,
            adjacency,
            graph,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn adjacency(&self) -> Adjacency {
        self.adjacency
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn graph(&self) -> &QuasiDiscreteSpace {
        &self.graph
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KripkeMode {
    /// `A ∪ {x : γ(x) ⊆ A}`.
    Pre,
    /// `A ∪ ⋃_{a∈A} γ(a)`.
    Suc,
}

impl KripkeMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pre" => Ok(KripkeMode::Pre),
            "suc" => Ok(KripkeMode::Suc),
            _ => Err(Error::invalid(format!("unknown kripke mode `{s}` (expected pre or suc)"))),
        }
    }
}

/// A finite Kripke frame: a successor set `γ(x)` for every point.
#[derive(Clone, Debug)]
pub struct KripkeFrame {
    carrier: Carrier,
    gamma: Vec<PointSet>,
}

impl KripkeFrame {
    pub fn new(carrier: Carrier, gamma: Vec<Vec<usize>>) -> Result<Self> {
        let n = carrier.len();
        if gamma.len() != n {
            return Err(Error::invalid(format!(
                "successor map is not total: {} entries for {n} points",
                gamma.len()
            )));
        }
        let mut sets = Vec::with_capacity(n);
        for (x, succ) in gamma.into_iter().enumerate() {
            if let Some(&y) = succ.iter().find(|&&y| y >= n) {
                return Err(Error::invalid(format!(
                    "successor {y} of point `{}` is outside the carrier",
                    carrier.name(x)
                )));
            }
            sets.push(PointSet::from_indices(n, succ));
        }
        Ok(KripkeFrame {
            carrier,
            gamma: sets,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn successors(&self, x: usize) -> &PointSet {
        &self.gamma[x]
    }

    pub fn close(&self, mode: KripkeMode, a: &PointSet) -> PointSet {
        let mut out = a.clone();
        match mode {
            KripkeMode::Pre => {
                for (x, g) in self.gamma.iter().enumerate() {
                    if g.is_subset(a) {
                        out.insert(x);
                    }
                }
            }
            KripkeMode::Suc => {
                for x in a.iter() {
                    out.union_with(&self.gamma[x]);
                }
            }
        }
        out
    }
}

/// A finite Markov chain with a probability threshold.
#[derive(Clone, Debug)]
pub struct MarkovFrame {
    carrier: Carrier,
    rows: Vec<Vec<(usize, BigRational)>>,
    threshold: BigRational,
}

impl MarkovFrame {
    /// `rows[x][y]` is the probability of moving from `x` to `y`.
    pub fn new(carrier: Carrier, rows: Vec<Vec<BigRational>>, threshold: BigRational) -> Result<Self> {
        let n = carrier.len();
        if rows.len() != n {
            return Err(Error::invalid(format!("expected {n} rows, got {}", rows.len())));
        }
        if threshold < BigRational::zero() || threshold > BigRational::one() {
            return Err(Error::invalid(format!("threshold {threshold} outside [0,1]")));
        }
        let mut sparse = Vec::with_capacity(n);
        for (x, row) in rows.into_iter().enumerate() {
            let name = carrier.name(x);
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row `{name}` has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|p| *p < BigRational::zero()) {
                return Err(Error::invalid(format!("row `{name}` has a negative entry")));
            }
            let sum: BigRational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::invalid(format!(
                    "row-sum of `{name}` is {sum}, expected exactly 1"
                )));
            }
            sparse.push(
                row.into_iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .collect(),
            );
        }
        Ok(MarkovFrame {
            carrier,
            rows: sparse,
            threshold,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn threshold(&self) -> &BigRational {
        &self.threshold
    }

    /// Probability of entering `a` from `x` in one step.
    pub fn mass(&self, x: usize, a: &PointSet) -> BigRational {
        self.rows[x]
            .iter()
            .filter(|(y, _)| a.contains(*y))
            .map(|(_, p)| p)
            .sum()
    }

    pub fn close(&self, a: &PointSet) -> PointSet {
        let mut out = a.clone();
        for x in 0..self.carrier.len() {
            if !a.contains(x) && self.mass(x, a) >= self.threshold {
                out.insert(x);
            }
        }
        out
    }
}

/// How an explicit space stores its closure.
#[derive(Clone, Debug)]
pub enum ExplicitTable {
    /// `c(A)` for every subset, indexed by the subset's bit mask.
    Full(Vec<PointSet>),
    /// `c({x})` per point, extended to `c(A) = A ∪ ⋃ c({a})`.
    Additive(Vec<PointSet>),
}

pub const EXPLICIT_MAX_POINTS: usize = 20;

/// A closure space given by table.
#[derive(Clone, Debug)]
pub struct ExplicitSpace {
    carrier: Carrier,
    table: ExplicitTable,
}

fn show(carrier: &Carrier, s: &PointSet) -> String {
    let names: Vec<&str> = s.iter().map(|x| carrier.name(x)).collect();
    format!("{{{}}}", names.join(","))
}

impl ExplicitSpace {
    pub fn new(carrier: Carrier, table: ExplicitTable) -> Result<Self> {
        let n = carrier.len();
        if n > EXPLICIT_MAX_POINTS {
            return Err(Error::invalid(format!(
                "explicit spaces hold at most {EXPLICIT_MAX_POINTS} points, got {n}"
            )));
        }
        match &table {
            ExplicitTable::Additive(single) => {
                if single.len() != n {
                    return Err(Error::invalid(format!(
                        "expected {n} singleton closures, got {}",
                        single.len()
                    )));
                }
                for (x, c) in single.iter().enumerate() {
                    if c.len() != n {
                        return Err(Error::AlgebraMismatch);
                    }
                    if !c.contains(x) {
                        return Err(Error::invalid(format!(
                            "not inflationary: c({{{0}}}) = {1} misses {0}",
                            carrier.name(x),
                            show(&carrier, c)
                        )));
                    }
                }
            }
            ExplicitTable::Full(rows) => {
                if rows.len() != 1 << n {
                    return Err(Error::invalid(format!(
                        "full table needs {} entries, got {}",
                        1u64 << n,
                        rows.len()
                    )));
                }
                for (mask, c) in rows.iter().enumerate() {
                    let a = PointSet::from_mask(n, mask as u64);
                    if c.len() != n {
                        return Err(Error::AlgebraMismatch);
                    }
                    if !a.is_subset(c) {
                        return Err(Error::invalid(format!(
                            "not inflationary: c({}) = {}",
                            show(&carrier, &a),
                            show(&carrier, c)
                        )));
                    }
                    // monotonicity along covering pairs implies it everywhere
                    for x in 0..n {
                        if mask & (1 << x) == 0 {
                            let up = &rows[mask | (1 << x)];
                            if !c.is_subset(up) {
                                return Err(Error::invalid(format!(
                                    "not monotone: c({}) = {} is not below c({}) = {}",
                                    show(&carrier, &a),
                                    show(&carrier, c),
                                    show(&carrier, &PointSet::from_mask(n, (mask | (1 << x)) as u64)),
                                    show(&carrier, up)
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(ExplicitSpace { carrier, table })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn table(&self) -> &ExplicitTable {
        &self.table
    }

    pub fn is_additive(&self) -> bool {
        matches!(self.table, ExplicitTable::Additive(_))
    }

    pub fn close(&self, a: &PointSet) -> PointSet {
        match &self.table {
            ExplicitTable::Full(rows) => rows[a.mask() as usize].clone(),
            ExplicitTable::Additive(single) => {
                let mut out = a.clone();
                for x in a.iter() {
                    out.union_with(&single[x]);
                }
                out
            }
        }
    }
}

/// A fuzzy set `(X, α)` with closure `c(ξ) = min(ξ + ε, 1) ∧ α`.
#[derive(Clone, Debug)]
pub struct FuzzySpace {
    algebra: FuzzyPredicateAlgebra,
    epsilon: Vec<u32>,
}

impl FuzzySpace {
    pub fn new(algebra: FuzzyPredicateAlgebra, epsilon: Vec<u32>) -> Result<Self> {
        if epsilon.len() != algebra.len() {
            return Err(Error::invalid(format!(
                "expected {} epsilon values, got {}",
                algebra.len(),
                epsilon.len()
            )));
        }
        let k = algebra.resolution();
        if let Some(e) = epsilon.iter().find(|&&e| e > k) {
            return Err(Error::invalid(format!("epsilon {} exceeds 1", format_grade(*e, k))));
        }
        Ok(FuzzySpace { algebra, epsilon })
    }

    pub fn algebra(&self) -> &FuzzyPredicateAlgebra {
        &self.algebra
    }

    pub fn epsilon(&self) -> &[u32] {
        &self.epsilon
    }

    pub fn close_values(&self, xi: &[u32]) -> Vec<u32> {
        let k = self.algebra.resolution();
        xi.iter()
            .zip(&self.epsilon)
            .zip(self.algebra.membership())
            .map(|((&v, &e), &m)| (v + e).min(k).min(m))
            .collect()
    }
}
