//! The spatial operators on a single space, with fast paths and the
//! definition-literal oracles they are tested against.

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::spaces::{closure_of, PointSpace, Space, Value};

/// Enumeration cap for the until oracle.
pub const UNTIL_ORACLE_CAP: u64 = 1 << 16;
/// Path-count cap for the surrounded oracle.
pub const PATH_CAP: u64 = 1_000_000;

fn points_of<'a>(space: &PointSpace, v: &'a Value) -> Result<&'a PointSet> {
    match v {
        Value::Set(s) => space.algebra().check(s),
        Value::Fuzzy(_) => Err(Error::AlgebraMismatch),
    }
}

fn point_space<'a>(space: &'a Space, op: &str) -> Result<&'a PointSpace> {
    space
        .as_points()
        .ok_or_else(|| Error::unsupported(format!("{op} on fuzzy spaces")))
}

/// External boundary `c(a) ∧ ¬a`.
pub fn boundary(space: &Space, a: &Value) -> Result<Value> {
    let c = closure_of(space, a)?;
    space.meet(&c, &space.negate(a)?)
}

/// Greatest `W ⊆ φ` with every step out of `W` landing in `ψ`; for additive
/// closures this is the join of `{W ≤ φ : ∂⁺W ≤ ψ}`.
pub fn until_fixpoint(space: &PointSpace, phi: &PointSet, psi: &PointSet) -> PointSet {
    let steps = space.steps();
    let n = space.len();
    let mut w = phi.clone();
    // bad[x]: steps from x leaving W ∪ ψ
    let mut bad = vec![0u32; n];
    let mut dead = Vec::new();
    for x in phi.iter() {
        bad[x] = steps
            .successors(x)
            .filter(|&y| !phi.contains(y) && !psi.contains(y))
            .count() as u32;
        if bad[x] > 0 {
            dead.push(x);
        }
    }
    for &x in &dead {
        w.remove(x);
    }
    while let Some(x) = dead.pop() {
        if psi.contains(x) {
            continue;
        }
        for p in steps.predecessors(x) {
            if w.contains(p) {
                bad[p] += 1;
                if bad[p] == 1 {
                    w.remove(p);
                    dead.push(p);
                }
            }
        }
    }
    w
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UntilOracle {
    pub value: Value,
    /// Whether the join is itself a member, i.e. the supremum is attained.
    pub attained: bool,
}

/// Joins every `ϱ ≤ φ` with `∂⁺ϱ ≤ ψ`, by enumeration.
pub fn until_oracle(space: &Space, phi: &Value, psi: &Value, cap: u64) -> Result<UntilOracle> {
    let member = |r: &Value| -> Result<bool> { space.leq(&boundary(space, r)?, psi) };
    let mut acc = space.bottom();
    match (space, phi) {
        (Space::Points(p), Value::Set(s)) => {
            let phi_pts = p.algebra().check(s)?;
            points_of(p, psi)?;
            let members = phi_pts.to_vec();
            let count = members.len();
            if count >= 64 || (1u64 << count) > cap {
                return Err(Error::too_large(
                    "until oracle enumeration",
                    if count >= 128 { u128::MAX } else { 1u128 << count },
                    cap as u128,
                ));
            }
            let n = p.len();
            let mut joined = PointSet::empty(n);
            for mask in 0..(1u64 << count) {
                let sub = PointSet::from_indices(
                    n,
                    members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x),
                );
                if !sub.is_subset(&joined) {
                    let r = Value::Set(p.algebra().from_set(sub.clone())?);
                    if member(&r)? {
                        joined.union_with(&sub);
                    }
                }
            }
            acc = Value::Set(p.algebra().from_set(joined)?);
        }
        (Space::Fuzzy(f), Value::Fuzzy(v)) => {
            let alg = f.algebra();
            let bound = alg.check(v)?.to_vec();
            let size = bound
                .iter()
                .try_fold(1u128, |s, &b| s.checked_mul(b as u128 + 1))
                .unwrap_or(u128::MAX);
            if size > cap as u128 {
                return Err(Error::too_large("until oracle enumeration", size, cap as u128));
            }
            let mut cur = vec![0u32; bound.len()];
            loop {
                let r = Value::Fuzzy(alg.set(cur.clone())?);
                if member(&r)? {
                    acc = space.join(&acc, &r)?;
                }
                // mixed-radix increment below φ
                let mut i = 0;
                while i < cur.len() && cur[i] == bound[i] {
                    cur[i] = 0;
                    i += 1;
                }
                if i == cur.len() {
                    break;
                }
                cur[i] += 1;
            }
        }
        _ => return Err(Error::AlgebraMismatch),
    }
    let attained = member(&acc)?;
    Ok(UntilOracle {
        value: acc,
        attained,
    })
}

/// `φ 𝒰 ψ`: the fixpoint on additive point spaces, the oracle otherwise.
pub fn until(space: &Space, phi: &Value, psi: &Value, cap: u64) -> Result<Value> {
    if let Space::Points(p) = space {
        if p.is_additive() {
            let (a, b) = (points_of(p, phi)?, points_of(p, psi)?);
            return Ok(Value::Set(p.algebra().from_set(until_fixpoint(p, a, b))?));
        }
    }
    until_oracle(space, phi, psi, cap).map(|o| o.value)
}

/// Points reachable from `φ` along continuous paths; `bound = Some(n)`
/// limits paths to `n` points (`n - 1` steps).
pub fn reach(space: &Space, phi: &Value, bound: Option<u32>) -> Result<Value> {
    let p = point_space(space, "reachability")?;
    let a = points_of(p, phi)?;
    let steps = bound.map(|n| n.saturating_sub(1) as usize);
    Ok(Value::Set(p.algebra().from_set(p.steps().reach(a, steps))?))
}

/// `φ 𝒮 ψ`: `φ` minus every point with a `ψ`-free walk to `¬φ ∧ ¬ψ`.
pub fn surrounded(space: &Space, phi: &Value, psi: &Value) -> Result<Value> {
    let p = point_space(space, "surrounded")?;
    let (a, b) = (points_of(p, phi)?, points_of(p, psi)?);
    let free = b.complement();
    let exits = a.complement().intersection(&free);
    let escaping = p.steps().co_reach_within(&exits, &free);
    Ok(Value::Set(p.algebra().from_set(a.difference(&escaping))?))
}

/// Whether the path is an escape route from `phi` avoiding `psi`, checking
/// the three defining conditions over the chain order.
pub fn is_escape_route(path: &[usize], phi: &PointSet, psi: &PointSet) -> bool {
    let in_phi: Vec<bool> = path.iter().map(|&x| phi.contains(x)).collect();
    // (1) φ somewhere on the path
    if !in_phi.iter().any(|&b| b) {
        return false;
    }
    // (2) every φ position is followed (weakly) by a ¬φ position
    let mut later_exit = vec![false; path.len()];
    let mut seen = false;
    for i in (0..path.len()).rev() {
        seen |= !in_phi[i];
        later_exit[i] = seen;
    }
    if (0..path.len()).any(|i| in_phi[i] && !later_exit[i]) {
        return false;
    }
    // (3) no ψ position after some φ and before some ¬φ
    let mut earlier_phi = false;
    for t in 0..path.len() {
        earlier_phi |= in_phi[t];
        if earlier_phi && later_exit[t] && psi.contains(path[t]) {
            return false;
        }
    }
    true
}

/// `φ 𝒮 ψ` by enumerating every continuous path of at most `maxlen` points
/// (default: the carrier size) and removing the images of escape routes.
pub fn surrounded_oracle(
    space: &Space,
    phi: &Value,
    psi: &Value,
    maxlen: Option<usize>,
    cap: u64,
) -> Result<Value> {
    let p = point_space(space, "surrounded")?;
    let (a, b) = (points_of(p, phi)?, points_of(p, psi)?);
    let n = p.len();
    let maxlen = maxlen.unwrap_or(n);
    let steps = p.steps();
    let mut image = PointSet::empty(n);
    let mut count = 0u64;
    let mut path = Vec::with_capacity(maxlen);

    #[allow(clippy::too_many_arguments)]
    fn walk(
        path: &mut Vec<usize>,
        maxlen: usize,
        steps: &crate::spaces::StepGraph,
        a: &PointSet,
        b: &PointSet,
        image: &mut PointSet,
        count: &mut u64,
        cap: u64,
    ) -> Result<()> {
        *count += 1;
        if *count > cap {
            return Err(Error::too_large("surrounded oracle path count", *count as u128, cap as u128));
        }
        if is_escape_route(path, a, b) {
            for &x in path.iter() {
                image.insert(x);
            }
        }
        if path.len() == maxlen {
            return Ok(());
        }
        let last = *path.last().expect("nonempty path");
        // stuttering is continuous too
        let nexts: Vec<usize> = std::iter::once(last).chain(steps.successors(last)).collect();
        for y in nexts {
            path.push(y);
            walk(path, maxlen, steps, a, b, image, count, cap)?;
            path.pop();
        }
        Ok(())
    }

    for x in 0..n {
        path.clear();
        path.push(x);
        walk(&mut path, maxlen, steps, a, b, &mut image, &mut count, cap)?;
    }
    Ok(Value::Set(p.algebra().from_set(a.difference(&image))?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    /// Every nonempty proper part `P` of `a` has `c(P)` meeting `a ∖ P`.
    OneSided,
    /// For every split of `a`, at least one part's closure meets the other.
    Symmetric,
}

/// Connectedness of `a` by checking every split `a = P ∪ Q` (disjoint,
/// both nonempty).
pub fn is_connected_brute(space: &Space, a: &Value, variant: Connectivity, cap: u64) -> Result<bool> {
    let p = point_space(space, "connectedness")?;
    let pts = points_of(p, a)?;
    let members = pts.to_vec();
    let k = members.len();
    if k >= 64 || (1u64 << k) > cap {
        return Err(Error::too_large(
            "connectedness splits",
            if k >= 128 { u128::MAX } else { 1u128 << k },
            cap as u128,
        ));
    }
    let n = p.len();
    for mask in 1..(1u64 << k).saturating_sub(1) {
        let part = PointSet::from_indices(
            n,
            members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x),
        );
        let rest = pts.difference(&part);
        let forward = !p.close_points(&part).is_disjoint(&rest);
        let ok = match variant {
            Connectivity::OneSided => forward,
            Connectivity::Symmetric => forward || !p.close_points(&rest).is_disjoint(&part),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Connectedness: strong (one-sided) or weak (symmetric) connectivity of
/// the step graph restricted to `a` on additive spaces, brute force
/// otherwise.
pub fn is_connected(space: &Space, a: &Value, variant: Connectivity, cap: u64) -> Result<bool> {
    let p = point_space(space, "connectedness")?;
    if !p.is_additive() {
        return is_connected_brute(space, a, variant, cap);
    }
    let pts = points_of(p, a)?;
    let Some(root) = pts.iter().next() else {
        return Ok(true);
    };
    let steps = p.steps();
    let search = |forward: bool, undirected: bool| {
        let mut seen = PointSet::singleton(p.len(), root);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            let mut push = |y: usize| {
                if pts.contains(y) && seen.insert(y) {
                    stack.push(y);
                }
            };
            if forward || undirected {
                steps.successors(x).for_each(&mut push);
            }
            if !forward || undirected {
                steps.predecessors(x).for_each(&mut push);
            }
        }
        seen.count() == pts.count()
    };
    Ok(match variant {
        Connectivity::OneSided => search(true, false) && search(false, false),
        Connectivity::Symmetric => search(true, true),
    })
}

/// Fuzzy helper: the pointwise values of a fuzzy predicate.
pub fn fuzzy_values(space: &Space, v: &Value) -> Result<Vec<u32>> {
    match (space, v) {
        (Space::Fuzzy(f), Value::Fuzzy(x)) => Ok(f.algebra().check(x)?.to_vec()),
        _ => Err(Error::AlgebraMismatch),
    }
}
