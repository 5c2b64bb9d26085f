//! Finite Heyting algebras used as truth-value and predicate lattices.
//!
//! Three families are provided: [`HeytingChain`] (the exact rationals
//! `0, 1/k, …, 1` with Gödel implication), [`PowersetAlgebra`] (bitsets over a
//! finite carrier) and [`FuzzyPredicateAlgebra`] (maps from a carrier into a
//! chain, bounded pointwise by a membership function).
//!
//! Elements carry the [`AlgebraId`] of the algebra that produced them; every
//! operation checks it and returns [`Error::AlgebraMismatch`] on misuse.

mod chain;
mod fuzzy;
mod powerset;

pub use chain::{format_grade, parse_grade, Grade, HeytingChain};
pub use fuzzy::{FuzzyPredicateAlgebra, FuzzySet};
pub use powerset::{PowersetAlgebra, Subset};

use std::collections::hash_map::DefaultHasher;
use std::fmt::Debug;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::RngCore;

use crate::error::{Error, Result};

/// Default cap on the number of elements an enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// Identity token of an algebra.
///
/// Derived from the algebra's structure (kind, carrier, chain resolution,
/// membership), so two independently built algebras over the same data are
/// interchangeable while algebras over different carriers never are.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraId(u64);

impl AlgebraId {
    pub(crate) fn fingerprint<T: Hash>(tag: &str, data: &T) -> Self {
        let mut h = DefaultHasher::new();
        tag.hash(&mut h);
        data.hash(&mut h);
        AlgebraId(h.finish())
    }
}

/// A finite, ordered set of named points.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Carrier {
    names: Arc<[String]>,
}

impl Carrier {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::invalid(format!("duplicate point name `{n}`")));
            }
        }
        Ok(Carrier {
            names: names.into(),
        })
    }

    /// Carrier `{0, 1, …, n-1}` named by index.
    pub fn indexed(n: usize) -> Self {
        Carrier {
            names: (0..n).map(|i| i.to_string()).collect::<Vec<_>>().into(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Cartesian product with row-major pairing: `(i, j) ↦ i·|other| + j`.
    pub fn product(&self, other: &Carrier) -> Carrier {
        let mut names = Vec::with_capacity(self.len() * other.len());
        for a in self.names.iter() {
            for b in other.names.iter() {
                names.push(format!("({a},{b})"));
            }
        }
        Carrier {
            names: names.into(),
        }
    }
}

impl Debug for Carrier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

/// A finite Heyting algebra with identity-checked elements.
pub trait HeytingAlgebra {
    type Elem: Clone + Eq + std::hash::Hash + Debug;

    fn id(&self) -> AlgebraId;
    fn top(&self) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Relative pseudo-complement `a ⇒ b`.
    fn implies(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool>;

    fn negate(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.implies(a, &self.bottom())
    }

    /// Number of elements, saturating at `u128::MAX`.
    fn size(&self) -> u128;

    /// Every element exactly once, in a fixed order. Fails with
    /// [`Error::TooLarge`] when [`size`](Self::size) exceeds `cap`.
    fn elements(&self, cap: u64) -> Result<Box<dyn Iterator<Item = Self::Elem> + '_>>;

    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// A decomposition of `a` into join-irreducible parts whose join is `a`.
    /// Empty for the bottom element.
    fn join_irreducibles(&self, a: &Self::Elem) -> Vec<Self::Elem>;

    /// JSON rendering (point lists or value maps).
    fn describe(&self, a: &Self::Elem) -> serde_json::Value;

    fn join_all<'a, I>(&self, items: I) -> Result<Self::Elem>
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut acc = self.bottom();
        for x in items {
            acc = self.join(&acc, x)?;
        }
        Ok(acc)
    }

    fn meet_all<'a, I>(&self, items: I) -> Result<Self::Elem>
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut acc = self.top();
        for x in items {
            acc = self.meet(&acc, x)?;
        }
        Ok(acc)
    }
}

pub(crate) fn check_enumerable(what: &str, size: u128, cap: u64) -> Result<()> {
    if size > cap as u128 {
        Err(Error::too_large(what, size, cap as u128))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carrier_rejects_duplicates() {
        assert!(Carrier::new(["a", "a"]).is_err());
        let c = Carrier::new(["a", "b"]).unwrap();
        assert_eq!(c.index_of("b"), Some(1));
    }

    #[test]
    fn product_is_row_major() {
        let a = Carrier::indexed(2);
        let b = Carrier::new(["x", "y", "z"]).unwrap();
        let p = a.product(&b);
        assert_eq!(p.len(), 6);
        assert_eq!(p.name(3 + 2), "(1,z)");
    }
}
