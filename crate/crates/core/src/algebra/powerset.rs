use rand::{Rng, RngCore};

use super::{check_enumerable, AlgebraId, Carrier, HeytingAlgebra};
use crate::bitset::PointSet;
use crate::error::{Error, Result};

/// The Boolean algebra of all subsets of a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowersetAlgebra {
    carrier: Carrier,
    id: AlgebraId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    algebra: AlgebraId,
    points: PointSet,
}

impl Subset {
    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn into_points(self) -> PointSet {
        self.points
    }
}

impl PowersetAlgebra {
    pub fn new(carrier: Carrier) -> Self {
        let id = AlgebraId::fingerprint("powerset", &carrier);
        PowersetAlgebra { carrier, id }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, points: I) -> Result<Subset> {
        let n = self.len();
        let mut s = PointSet::empty(n);
        for p in points {
            if p >= n {
                return Err(Error::invalid(format!("point {p} outside carrier of size {n}")));
            }
            s.insert(p);
        }
        Ok(self.wrap(s))
    }

    pub fn from_set(&self, points: PointSet) -> Result<Subset> {
        if points.len() != self.len() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.wrap(points))
    }

    /// Subset by point names.
    pub fn named(&self, names: &[&str]) -> Result<Subset> {
        let idx = names
            .iter()
            .map(|n| {
                self.carrier
                    .index_of(n)
                    .ok_or_else(|| Error::invalid(format!("unknown point `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.subset(idx)
    }

    pub(crate) fn wrap(&self, points: PointSet) -> Subset {
        debug_assert_eq!(points.len(), self.len());
        Subset {
            algebra: self.id,
            points,
        }
    }

    pub(crate) fn check<'a>(&self, a: &'a Subset) -> Result<&'a PointSet> {
        if a.algebra != self.id {
            return Err(Error::AlgebraMismatch);
        }
        Ok(&a.points)
    }
}

impl HeytingAlgebra for PowersetAlgebra {
    type Elem = Subset;

    fn id(&self) -> AlgebraId {
        self.id
    }

    fn top(&self) -> Subset {
        self.wrap(PointSet::full(self.len()))
    }

    fn bottom(&self) -> Subset {
        self.wrap(PointSet::empty(self.len()))
    }

    fn meet(&self, a: &Subset, b: &Subset) -> Result<Subset> {
        Ok(self.wrap(self.check(a)?.intersection(self.check(b)?)))
    }

    fn join(&self, a: &Subset, b: &Subset) -> Result<Subset> {
        Ok(self.wrap(self.check(a)?.union(self.check(b)?)))
    }

    fn implies(&self, a: &Subset, b: &Subset) -> Result<Subset> {
        let mut s = self.check(a)?.complement();
        s.union_with(self.check(b)?);
        Ok(self.wrap(s))
    }

    fn negate(&self, a: &Subset) -> Result<Subset> {
        Ok(self.wrap(self.check(a)?.complement()))
    }

    fn leq(&self, a: &Subset, b: &Subset) -> Result<bool> {
        Ok(self.check(a)?.is_subset(self.check(b)?))
    }

    fn size(&self) -> u128 {
        if self.len() >= 128 {
            u128::MAX
        } else {
            1u128 << self.len()
        }
    }

    fn elements(&self, cap: u64) -> Result<Box<dyn Iterator<Item = Subset> + '_>> {
        check_enumerable("powerset", self.size(), cap)?;
        let n = self.len();
        let total = 1u64 << n;
        Ok(Box::new(
            (0..total).map(move |mask| self.wrap(PointSet::from_mask(n, mask))),
        ))
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> Subset {
        let n = self.len();
        self.wrap(PointSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5))))
    }

    fn join_irreducibles(&self, a: &Subset) -> Vec<Subset> {
        a.points
            .iter()
            .map(|x| self.wrap(PointSet::singleton(self.len(), x)))
            .collect()
    }

    fn describe(&self, a: &Subset) -> serde_json::Value {
        serde_json::Value::Array(
            a.points
                .iter()
                .map(|x| serde_json::Value::String(self.carrier.name(x).to_string()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> PowersetAlgebra {
        PowersetAlgebra::new(Carrier::indexed(3))
    }

    #[test]
    fn meet_is_intersection() {
        let p = p3();
        let m = p.meet(&p.subset([0, 1]).unwrap(), &p.subset([1, 2]).unwrap()).unwrap();
        assert_eq!(m, p.subset([1]).unwrap());
    }

    #[test]
    fn implication_is_material() {
        let p = p3();
        let i = p.implies(&p.subset([0, 1]).unwrap(), &p.subset([1]).unwrap()).unwrap();
        assert_eq!(i, p.subset([1, 2]).unwrap());
    }

    #[test]
    fn negation_of_empty_is_carrier() {
        let p = p3();
        assert_eq!(p.negate(&p.bottom()).unwrap(), p.top());
    }

    #[test]
    fn leq_is_inclusion() {
        let p = p3();
        assert!(p.leq(&p.subset([1]).unwrap(), &p.subset([1, 2]).unwrap()).unwrap());
    }

    #[test]
    fn enumeration_and_cap() {
        let p = PowersetAlgebra::new(Carrier::new(["a", "b"]).unwrap());
        assert_eq!(p.elements(1 << 20).unwrap().count(), 4);
        let big = PowersetAlgebra::new(Carrier::indexed(25));
        let err = big.elements(1 << 20).err();
        assert!(matches!(err, Some(Error::TooLarge { size, .. }) if size == 1 << 25));
    }

    #[test]
    fn cross_carrier_mismatch() {
        let (a, b) = (p3(), PowersetAlgebra::new(Carrier::indexed(4)));
        assert_eq!(a.join(&a.top(), &b.top()), Err(Error::AlgebraMismatch));
        // same carrier data gives the same identity
        assert_eq!(p3().join(&a.top(), &p3().bottom()).unwrap(), a.top());
    }
}
