use crate::bitset::PointSet;

/// Singleton closures `c({x}) ∖ {x}` as a compressed adjacency structure,
/// with the reverse relation alongside.
///
/// A path `p` is continuous exactly when each `p(i+1)` is `p(i)` or one of
/// its steps, so reachability and escape questions reduce to walks here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepGraph {
    fwd_off: Vec<u32>,
    fwd: Vec<u32>,
    rev_off: Vec<u32>,
    rev: Vec<u32>,
}

impl StepGraph {
    /// Builds from per-point step lists; self-loops and duplicates are dropped.
    pub fn from_lists<I, J>(n: usize, lists: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = usize>,
    {
        let mut fwd_off = Vec::with_capacity(n + 1);
        let mut fwd = Vec::new();
        let mut indeg = vec![0u32; n];
        fwd_off.push(0);
        let mut scratch = Vec::new();
        for (x, list) in lists.into_iter().enumerate() {
            scratch.clear();
            scratch.extend(list.into_iter().filter(|&y| y != x));
            scratch.sort_unstable();
            scratch.dedup();
            for &y in &scratch {
                indeg[y] += 1;
                fwd.push(y as u32);
            }
            fwd_off.push(fwd.len() as u32);
        }
        assert_eq!(fwd_off.len(), n + 1, "one step list per point");

        let mut rev_off = Vec::with_capacity(n + 1);
        rev_off.push(0u32);
        for d in &indeg {
            rev_off.push(rev_off.last().unwrap() + d);
        }
        let mut fill = rev_off[..n].to_vec();
        let mut rev = vec![0u32; fwd.len()];
        for x in 0..n {
            for &y in &fwd[fwd_off[x] as usize..fwd_off[x + 1] as usize] {
                rev[fill[y as usize] as usize] = x as u32;
                fill[y as usize] += 1;
            }
        }
        StepGraph {
            fwd_off,
            fwd,
            rev_off,
            rev,
        }
    }

    pub fn len(&self) -> usize {
        self.fwd_off.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_count(&self) -> usize {
        self.fwd.len()
    }

    /// `c({x}) ∖ {x}`.
    #[inline]
    pub fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.fwd[self.fwd_off[x] as usize..self.fwd_off[x + 1] as usize]
            .iter()
            .map(|&y| y as usize)
    }

    /// Points `y ≠ x` with `x ∈ c({y})`.
    #[inline]
    pub fn predecessors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.rev[self.rev_off[x] as usize..self.rev_off[x + 1] as usize]
            .iter()
            .map(|&y| y as usize)
    }

    /// The additive closure `A ∪ ⋃_{a∈A} c({a})`.
    pub fn close(&self, a: &PointSet) -> PointSet {
        let mut out = a.clone();
        for x in a.iter() {
            for y in self.successors(x) {
                out.insert(y);
            }
        }
        out
    }

    /// Everything reachable from `a` by walks of at most `max_steps` steps
    /// (unbounded when `None`).
    pub fn reach(&self, a: &PointSet, max_steps: Option<usize>) -> PointSet {
        let mut seen = a.clone();
        let mut frontier: Vec<usize> = a.iter().collect();
        let mut steps = 0;
        while !frontier.is_empty() && max_steps.is_none_or(|m| steps < m) {
            let mut next = Vec::new();
            for &x in &frontier {
                for y in self.successors(x) {
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
            steps += 1;
        }
        seen
    }

    /// Points that reach `target` through walks staying inside `allowed`
    /// (the target points themselves must be allowed too).
    pub fn co_reach_within(&self, target: &PointSet, allowed: &PointSet) -> PointSet {
        let mut seen = target.intersection(allowed);
        let mut stack: Vec<usize> = seen.iter().collect();
        while let Some(x) = stack.pop() {
            for y in self.predecessors(x) {
                if allowed.contains(y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }
}
