//! Predicate transformations along maps between finite carriers, and
//! checkers for the closure-operator and doctrine laws.
//!
//! For powersets, `preimage` is inverse image, `direct_image` the forward
//! image, `universal_image` the set of points whose whole fiber lies inside
//! the argument. For fuzzy algebras over `(X, α)` and `(Y, β)`:
//!
//! ```text
//! f*(ξ)(x)  = α(x) ∧ ξ(f(x))
//! ∃_f(ξ)(y) = ⋁_{x ∈ f⁻¹(y)} ξ(x)
//! ∀_f(ξ)(y) = β(y) ∧ ⋀_{x ∈ f⁻¹(y)} (α(x) ⇒ ξ(x))
//! δ(x, y)   = α(x) if x = y, else 0
//! ```

mod laws;

pub use laws::{
    check_beck_chevalley, check_closure_laws, check_frobenius, check_image_inequality,
    check_map_continuity, CheckMode, ClosureOperator, FnClosure, Law, LawReport, LawStatus,
    Quantifier, Verdict,
};

use crate::algebra::{Carrier, FuzzyPredicateAlgebra, FuzzySet, HeytingAlgebra, PowersetAlgebra, Subset};
use crate::bitset::PointSet;
use crate::error::{Error, Result};

/// A total function between finite carriers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMap {
    domain: Carrier,
    codomain: Carrier,
    image: Vec<usize>,
}

impl FiniteMap {
    pub fn new(domain: Carrier, codomain: Carrier, image: Vec<usize>) -> Result<Self> {
        if image.len() != domain.len() {
            return Err(Error::invalid(format!(
                "map is not total: {} images for {} domain points",
                image.len(),
                domain.len()
            )));
        }
        if let Some((x, &y)) = image.iter().enumerate().find(|(_, &y)| y >= codomain.len()) {
            return Err(Error::invalid(format!(
                "point `{}` maps to {y}, outside a codomain of size {}",
                domain.name(x),
                codomain.len()
            )));
        }
        Ok(FiniteMap {
            domain,
            codomain,
            image,
        })
    }

    pub fn identity(carrier: Carrier) -> Self {
        let image = (0..carrier.len()).collect();
        FiniteMap {
            domain: carrier.clone(),
            codomain: carrier,
            image,
        }
    }

    pub fn domain(&self) -> &Carrier {
        &self.domain
    }

    pub fn codomain(&self) -> &Carrier {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FiniteMap) -> Result<FiniteMap> {
        if self.codomain != other.domain {
            return Err(Error::invalid("maps are not composable"));
        }
        FiniteMap::new(
            self.domain.clone(),
            other.codomain.clone(),
            self.image.iter().map(|&y| other.image[y]).collect(),
        )
    }

    pub fn fiber(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.image
            .iter()
            .enumerate()
            .filter(move |(_, &z)| z == y)
            .map(|(x, _)| x)
    }
}

/// A binary product together with its projections.
#[derive(Clone, Debug)]
pub struct Product<A> {
    pub algebra: A,
    pub first: FiniteMap,
    pub second: FiniteMap,
}

/// Predicate algebras indexed over finite carriers, with substitution and
/// quantification along maps.
pub trait Fibration: HeytingAlgebra + Sized {
    fn carrier(&self) -> &Carrier;

    fn preimage(f: &FiniteMap, dom: &Self, cod: &Self, b: &Self::Elem) -> Result<Self::Elem>;
    fn direct_image(f: &FiniteMap, dom: &Self, cod: &Self, a: &Self::Elem) -> Result<Self::Elem>;
    fn universal_image(f: &FiniteMap, dom: &Self, cod: &Self, a: &Self::Elem) -> Result<Self::Elem>;

    /// `self × other` with row-major point layout.
    fn product(&self, other: &Self) -> Result<Product<Self>>;

    /// Fibered equality `δ` on `self × self`.
    fn diagonal(&self) -> Result<(Self, Self::Elem)>;
}

fn check_ends<A: Fibration>(f: &FiniteMap, dom: &A, cod: &A) -> Result<()> {
    if f.domain() != dom.carrier() || f.codomain() != cod.carrier() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

pub fn preimage<A: Fibration>(f: &FiniteMap, dom: &A, cod: &A, b: &A::Elem) -> Result<A::Elem> {
    A::preimage(f, dom, cod, b)
}

pub fn direct_image<A: Fibration>(f: &FiniteMap, dom: &A, cod: &A, a: &A::Elem) -> Result<A::Elem> {
    A::direct_image(f, dom, cod, a)
}

pub fn universal_image<A: Fibration>(f: &FiniteMap, dom: &A, cod: &A, a: &A::Elem) -> Result<A::Elem> {
    A::universal_image(f, dom, cod, a)
}

fn product_maps(a: &Carrier, b: &Carrier) -> (Carrier, FiniteMap, FiniteMap) {
    let prod = a.product(b);
    let m = b.len();
    let first = (0..prod.len()).map(|i| i / m).collect();
    let second = (0..prod.len()).map(|i| i % m).collect();
    (
        prod.clone(),
        FiniteMap {
            domain: prod.clone(),
            codomain: a.clone(),
            image: first,
        },
        FiniteMap {
            domain: prod,
            codomain: b.clone(),
            image: second,
        },
    )
}

impl Fibration for PowersetAlgebra {
    fn carrier(&self) -> &Carrier {
        PowersetAlgebra::carrier(self)
    }

    fn preimage(f: &FiniteMap, dom: &Self, cod: &Self, b: &Subset) -> Result<Subset> {
        check_ends(f, dom, cod)?;
        let b = cod.check(b)?;
        let n = dom.len();
        Ok(dom.wrap(PointSet::from_indices(n, (0..n).filter(|&x| b.contains(f.apply(x))))))
    }

    fn direct_image(f: &FiniteMap, dom: &Self, cod: &Self, a: &Subset) -> Result<Subset> {
        check_ends(f, dom, cod)?;
        let a = dom.check(a)?;
        Ok(cod.wrap(PointSet::from_indices(cod.len(), a.iter().map(|x| f.apply(x)))))
    }

    fn universal_image(f: &FiniteMap, dom: &Self, cod: &Self, a: &Subset) -> Result<Subset> {
        check_ends(f, dom, cod)?;
        let a = dom.check(a)?;
        let mut out = PointSet::full(cod.len());
        for x in 0..dom.len() {
            if !a.contains(x) {
                out.remove(f.apply(x));
            }
        }
        Ok(cod.wrap(out))
    }

    fn product(&self, other: &Self) -> Result<Product<Self>> {
        let (carrier, first, second) = product_maps(self.carrier(), other.carrier());
        Ok(Product {
            algebra: PowersetAlgebra::new(carrier),
            first,
            second,
        })
    }

    fn diagonal(&self) -> Result<(Self, Subset)> {
        let n = self.len();
        let prod = PowersetAlgebra::new(self.carrier().product(self.carrier()));
        let delta = prod.wrap(PointSet::from_indices(n * n, (0..n).map(|x| x * n + x)));
        Ok((prod, delta))
    }
}

impl FuzzyPredicateAlgebra {
    fn check_arrow(f: &FiniteMap, dom: &Self, cod: &Self) -> Result<()> {
        if dom.resolution() != cod.resolution() {
            return Err(Error::AlgebraMismatch);
        }
        for x in 0..dom.len() {
            if dom.membership()[x] > cod.membership()[f.apply(x)] {
                return Err(Error::invalid(format!(
                    "not a fuzzy-set map: membership of `{}` exceeds that of its image",
                    dom.carrier().name(x)
                )));
            }
        }
        Ok(())
    }
}

impl Fibration for FuzzyPredicateAlgebra {
    fn carrier(&self) -> &Carrier {
        FuzzyPredicateAlgebra::carrier(self)
    }

    fn preimage(f: &FiniteMap, dom: &Self, cod: &Self, b: &FuzzySet) -> Result<FuzzySet> {
        check_ends(f, dom, cod)?;
        if dom.resolution() != cod.resolution() {
            return Err(Error::AlgebraMismatch);
        }
        let b = cod.check(b)?;
        let values = (0..dom.len())
            .map(|x| dom.membership()[x].min(b[f.apply(x)]))
            .collect();
        Ok(dom.wrap(values))
    }

    fn direct_image(f: &FiniteMap, dom: &Self, cod: &Self, a: &FuzzySet) -> Result<FuzzySet> {
        check_ends(f, dom, cod)?;
        Self::check_arrow(f, dom, cod)?;
        let a = dom.check(a)?;
        let mut out = vec![0; cod.len()];
        for (x, &v) in a.iter().enumerate() {
            let y = f.apply(x);
            out[y] = out[y].max(v);
        }
        Ok(cod.wrap(out))
    }

    fn universal_image(f: &FiniteMap, dom: &Self, cod: &Self, a: &FuzzySet) -> Result<FuzzySet> {
        check_ends(f, dom, cod)?;
        Self::check_arrow(f, dom, cod)?;
        let a = dom.check(a)?;
        let k = dom.resolution();
        let mut out = cod.membership().to_vec();
        for (x, &v) in a.iter().enumerate() {
            let y = f.apply(x);
            let imp = if dom.membership()[x] <= v { k } else { v };
            out[y] = out[y].min(imp);
        }
        Ok(cod.wrap(out))
    }

    fn product(&self, other: &Self) -> Result<Product<Self>> {
        if self.resolution() != other.resolution() {
            return Err(Error::AlgebraMismatch);
        }
        let (carrier, first, second) = product_maps(self.carrier(), other.carrier());
        let membership = (0..carrier.len())
            .map(|i| self.membership()[first.apply(i)].min(other.membership()[second.apply(i)]))
            .collect();
        Ok(Product {
            algebra: FuzzyPredicateAlgebra::with_membership(carrier, self.resolution(), membership)?,
            first,
            second,
        })
    }

    fn diagonal(&self) -> Result<(Self, FuzzySet)> {
        let prod = self.product(self)?;
        let n = self.len();
        let mut values = vec![0; n * n];
        for x in 0..n {
            values[x * n + x] = self.membership()[x];
        }
        let delta = prod.algebra.wrap(values);
        Ok((prod.algebra, delta))
    }
}
