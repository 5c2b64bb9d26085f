//! Seeded random spaces and models for property tests and fuzzing.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    KripkeFrame, KripkeMode, MarkovFrame, PointBackend, PointSpace, QuasiDiscreteSpace, Space,
    SpaceModel, Direction,
};
use crate::algebra::Carrier;
use crate::bitset::PointSet;

/// Each ordered pair of distinct points becomes an edge with probability
/// `density`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> PointSpace {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    let g = QuasiDiscreteSpace::new(Carrier::indexed(n), edges, Direction::Forward)
        .expect("edges in range");
    PointSpace::new(PointBackend::Graph(g))
}

/// A Kripke frame where every point has at least one successor.
pub fn random_kripke<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64, mode: KripkeMode) -> PointSpace {
    let gamma = (0..n)
        .map(|_| {
            let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
            if s.is_empty() {
                s.push(rng.gen_range(0..n));
            }
            s
        })
        .collect();
    let k = KripkeFrame::new(Carrier::indexed(n), gamma).expect("successors in range");
    PointSpace::new(PointBackend::Kripke(k, mode))
}

/// A Markov chain whose rows are random compositions of `denominator`.
pub fn random_markov<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    denominator: u32,
    threshold: BigRational,
) -> PointSpace {
    let d = BigRational::from_integer(denominator.into());
    let rows = (0..n)
        .map(|_| {
            let mut counts = vec![0u32; n];
            for _ in 0..denominator {
                counts[rng.gen_range(0..n)] += 1;
            }
            counts
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()) / &d)
                .collect()
        })
        .collect();
    let m = MarkovFrame::new(Carrier::indexed(n), rows, threshold).expect("rows sum to one");
    PointSpace::new(PointBackend::Markov(m))
}

pub fn random_points<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> PointSet {
    PointSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(p)))
}

/// A random graph model with atoms named by `atoms`, each a random subset.
pub fn random_graph_model<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    density: f64,
    atoms: &[&str],
) -> SpaceModel {
    let space = random_graph(rng, n, density);
    let mut model = SpaceModel::new(Space::Points(space));
    for name in atoms {
        let pts = random_points(rng, n, 0.5).to_vec();
        model.set_points(*name, &pts).expect("points in range");
    }
    model
}

/// Shuffled point order, handy for randomized traversal tests.
pub fn permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}
