use rand::{Rng, RngCore};

use super::chain::godel_implies;
use super::{check_enumerable, format_grade, parse_grade, AlgebraId, Carrier, HeytingAlgebra};
use crate::error::{Error, Result};

/// Fuzzy subsets of a fuzzy set `(X, α)`: maps `ξ: X → {0, 1/k, …, 1}` with
/// `ξ ≤ α` pointwise. With `α ≡ 1` these are all chain-valued predicates.
///
/// Lattice operations are pointwise; implication is `α ∧ (ξ ⇒ ζ)` with Gödel
/// `⇒`, so `(¬ξ)(x) = α(x)` when `ξ(x) = 0` and `0` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuzzyPredicateAlgebra {
    carrier: Carrier,
    resolution: u32,
    membership: Vec<u32>,
    id: AlgebraId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuzzySet {
    algebra: AlgebraId,
    values: Vec<u32>,
}

impl FuzzySet {
    /// Numerators over the algebra's resolution.
    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

impl FuzzyPredicateAlgebra {
    /// All chain-valued maps on `carrier` (membership `α ≡ 1`).
    pub fn new(carrier: Carrier, resolution: u32) -> Result<Self> {
        let membership = vec![resolution; carrier.len()];
        Self::with_membership(carrier, resolution, membership)
    }

    pub fn with_membership(carrier: Carrier, resolution: u32, membership: Vec<u32>) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::invalid("chain resolution must be positive"));
        }
        if membership.len() != carrier.len() {
            return Err(Error::invalid("membership length differs from carrier size"));
        }
        if let Some(v) = membership.iter().find(|&&v| v > resolution) {
            return Err(Error::invalid(format!("membership value {v}/{resolution} exceeds 1")));
        }
        let id = AlgebraId::fingerprint("fuzzy", &(&carrier, resolution, &membership));
        Ok(FuzzyPredicateAlgebra {
            carrier,
            resolution,
            membership,
            id,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn membership(&self) -> &[u32] {
        &self.membership
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// A fuzzy subset from numerators; each must lie below the membership.
    pub fn set(&self, values: Vec<u32>) -> Result<FuzzySet> {
        if values.len() != self.len() {
            return Err(Error::invalid(format!(
                "expected {} values, got {}",
                self.len(),
                values.len()
            )));
        }
        for (x, (&v, &m)) in values.iter().zip(&self.membership).enumerate() {
            if v > m {
                return Err(Error::invalid(format!(
                    "value {} at point `{}` exceeds membership {}",
                    format_grade(v, self.resolution),
                    self.carrier.name(x),
                    format_grade(m, self.resolution)
                )));
            }
        }
        Ok(self.wrap(values))
    }

    /// A fuzzy subset from textual rationals.
    pub fn parse_set(&self, values: &[&str]) -> Result<FuzzySet> {
        let v = values
            .iter()
            .map(|t| parse_grade(t, self.resolution))
            .collect::<Result<Vec<_>>>()?;
        self.set(v)
    }

    pub(crate) fn wrap(&self, values: Vec<u32>) -> FuzzySet {
        debug_assert_eq!(values.len(), self.len());
        FuzzySet {
            algebra: self.id,
            values,
        }
    }

    pub(crate) fn check<'a>(&self, a: &'a FuzzySet) -> Result<&'a [u32]> {
        if a.algebra != self.id {
            return Err(Error::AlgebraMismatch);
        }
        Ok(&a.values)
    }

    fn pointwise(
        &self,
        a: &FuzzySet,
        b: &FuzzySet,
        f: impl Fn(u32, u32, u32) -> u32,
    ) -> Result<FuzzySet> {
        let (x, y) = (self.check(a)?, self.check(b)?);
        Ok(self.wrap(
            x.iter()
                .zip(y)
                .zip(&self.membership)
                .map(|((&s, &t), &m)| f(s, t, m))
                .collect(),
        ))
    }
}

impl HeytingAlgebra for FuzzyPredicateAlgebra {
    type Elem = FuzzySet;

    fn id(&self) -> AlgebraId {
        self.id
    }

    fn top(&self) -> FuzzySet {
        self.wrap(self.membership.clone())
    }

    fn bottom(&self) -> FuzzySet {
        self.wrap(vec![0; self.len()])
    }

    fn meet(&self, a: &FuzzySet, b: &FuzzySet) -> Result<FuzzySet> {
        self.pointwise(a, b, |s, t, _| s.min(t))
    }

    fn join(&self, a: &FuzzySet, b: &FuzzySet) -> Result<FuzzySet> {
        self.pointwise(a, b, |s, t, _| s.max(t))
    }

    fn implies(&self, a: &FuzzySet, b: &FuzzySet) -> Result<FuzzySet> {
        let k = self.resolution;
        self.pointwise(a, b, |s, t, m| godel_implies(s, t, k).min(m))
    }

    fn leq(&self, a: &FuzzySet, b: &FuzzySet) -> Result<bool> {
        let (x, y) = (self.check(a)?, self.check(b)?);
        Ok(x.iter().zip(y).all(|(s, t)| s <= t))
    }

    fn size(&self) -> u128 {
        self.membership
            .iter()
            .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128 + 1))
            .unwrap_or(u128::MAX)
    }

    fn elements(&self, cap: u64) -> Result<Box<dyn Iterator<Item = FuzzySet> + '_>> {
        check_enumerable("fuzzy predicate algebra", self.size(), cap)?;
        let mut current: Option<Vec<u32>> = Some(vec![0; self.len()]);
        Ok(Box::new(std::iter::from_fn(move || {
            let out = current.take()?;
            // mixed-radix increment, radix α(x)+1 at position x
            let mut next = out.clone();
            let mut carry = true;
            for (v, &m) in next.iter_mut().zip(&self.membership) {
                if *v < m {
                    *v += 1;
                    carry = false;
                    break;
                }
                *v = 0;
            }
            if !carry {
                current = Some(next);
            }
            Some(self.wrap(out))
        })))
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> FuzzySet {
        let values = self.membership.iter().map(|&m| rng.gen_range(0..=m)).collect();
        self.wrap(values)
    }

    fn join_irreducibles(&self, a: &FuzzySet) -> Vec<FuzzySet> {
        a.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(x, &v)| {
                let mut slice = vec![0; self.len()];
                slice[x] = v;
                self.wrap(slice)
            })
            .collect()
    }

    fn describe(&self, a: &FuzzySet) -> serde_json::Value {
        let map = a
            .values
            .iter()
            .enumerate()
            .map(|(x, &v)| {
                (
                    self.carrier.name(x).to_string(),
                    serde_json::Value::String(format_grade(v, self.resolution)),
                )
            })
            .collect();
        serde_json::Value::Object(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_meet() {
        let a = FuzzyPredicateAlgebra::new(Carrier::indexed(2), 10).unwrap();
        let f = a.parse_set(&["0.2", "0.9"]).unwrap();
        let g = a.parse_set(&["0.5", "0.4"]).unwrap();
        assert_eq!(a.meet(&f, &g).unwrap(), a.parse_set(&["0.2", "0.4"]).unwrap());
    }

    #[test]
    fn negation_detects_zero() {
        let a = FuzzyPredicateAlgebra::new(Carrier::indexed(3), 10).unwrap();
        let f = a.parse_set(&["0", "0.1", "1"]).unwrap();
        assert_eq!(a.negate(&f).unwrap(), a.parse_set(&["1", "0", "0"]).unwrap());
    }

    #[test]
    fn membership_bounds_elements() {
        let a = FuzzyPredicateAlgebra::with_membership(Carrier::indexed(2), 10, vec![4, 10]).unwrap();
        assert!(a.parse_set(&["0.5", "0"]).is_err());
        // ¬0 = α, not 1
        assert_eq!(a.negate(&a.bottom()).unwrap(), a.top());
        assert_eq!(a.top().values(), &[4, 10]);
        assert_eq!(a.size(), 5 * 11);
    }

    #[test]
    fn enumeration_counts() {
        let a = FuzzyPredicateAlgebra::new(Carrier::indexed(2), 1).unwrap();
        let all: Vec<_> = a.elements(1 << 20).unwrap().collect();
        assert_eq!(all.len(), 4);
        let distinct: std::collections::HashSet<_> = all.into_iter().collect();
        assert_eq!(distinct.len(), 4);
    }
}
