use rand::{Rng, RngCore};

use super::{check_enumerable, AlgebraId, HeytingAlgebra};
use crate::error::{Error, Result};

/// The finite chain `{0, 1/k, …, 1}` with Gödel implication.
///
/// Values are stored as integer numerators over the fixed resolution `k`;
/// comparisons never touch floating point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeytingChain {
    resolution: u32,
    id: AlgebraId,
}

/// An element of a [`HeytingChain`]: the numerator of `value / k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    algebra: AlgebraId,
    numerator: u32,
}

impl Grade {
    pub fn numerator(&self) -> u32 {
        self.numerator
    }
}

impl HeytingChain {
    pub fn new(resolution: u32) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::invalid("chain resolution must be positive"));
        }
        Ok(HeytingChain {
            resolution,
            id: AlgebraId::fingerprint("chain", &resolution),
        })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// The grade `numerator / k`.
    pub fn grade(&self, numerator: u32) -> Result<Grade> {
        if numerator > self.resolution {
            return Err(Error::invalid(format!(
                "grade {numerator}/{} exceeds 1",
                self.resolution
            )));
        }
        Ok(Grade {
            algebra: self.id,
            numerator,
        })
    }

    /// Parses `"num/den"`, a decimal such as `"0.3"`, or an integer.
    pub fn parse(&self, text: &str) -> Result<Grade> {
        self.grade(parse_grade(text, self.resolution)?)
    }

    fn check(&self, g: &Grade) -> Result<u32> {
        if g.algebra != self.id {
            return Err(Error::AlgebraMismatch);
        }
        Ok(g.numerator)
    }
}

/// Gödel implication on numerators.
#[inline]
pub(crate) fn godel_implies(t: u32, s: u32, top: u32) -> u32 {
    if t <= s {
        top
    } else {
        s
    }
}

impl HeytingAlgebra for HeytingChain {
    type Elem = Grade;

    fn id(&self) -> AlgebraId {
        self.id
    }

    fn top(&self) -> Grade {
        Grade {
            algebra: self.id,
            numerator: self.resolution,
        }
    }

    fn bottom(&self) -> Grade {
        Grade {
            algebra: self.id,
            numerator: 0,
        }
    }

    fn meet(&self, a: &Grade, b: &Grade) -> Result<Grade> {
        let (x, y) = (self.check(a)?, self.check(b)?);
        self.grade(x.min(y))
    }

    fn join(&self, a: &Grade, b: &Grade) -> Result<Grade> {
        let (x, y) = (self.check(a)?, self.check(b)?);
        self.grade(x.max(y))
    }

    fn implies(&self, a: &Grade, b: &Grade) -> Result<Grade> {
        let (x, y) = (self.check(a)?, self.check(b)?);
        self.grade(godel_implies(x, y, self.resolution))
    }

    fn leq(&self, a: &Grade, b: &Grade) -> Result<bool> {
        Ok(self.check(a)? <= self.check(b)?)
    }

    fn size(&self) -> u128 {
        self.resolution as u128 + 1
    }

    fn elements(&self, cap: u64) -> Result<Box<dyn Iterator<Item = Grade> + '_>> {
        check_enumerable("chain", self.size(), cap)?;
        let id = self.id;
        Ok(Box::new((0..=self.resolution).map(move |numerator| Grade {
            algebra: id,
            numerator,
        })))
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> Grade {
        Grade {
            algebra: self.id,
            numerator: rng.gen_range(0..=self.resolution),
        }
    }

    fn join_irreducibles(&self, a: &Grade) -> Vec<Grade> {
        if a.numerator == 0 {
            Vec::new()
        } else {
            vec![*a]
        }
    }

    fn describe(&self, a: &Grade) -> serde_json::Value {
        serde_json::Value::String(format_grade(a.numerator, self.resolution))
    }
}

/// Parses a value in `[0,1]` that must be an exact multiple of `1/k`.
pub fn parse_grade(text: &str, k: u32) -> Result<u32> {
    let t = text.trim();
    let (num, den): (u128, u128) = if let Some((n, d)) = t.split_once('/') {
        let n = n.trim().parse().map_err(|_| bad_grade(t))?;
        let d = d.trim().parse().map_err(|_| bad_grade(t))?;
        (n, d)
    } else if let Some((int, frac)) = t.split_once('.') {
        if frac.len() > 18 || frac.is_empty() && int.is_empty() {
            return Err(bad_grade(t));
        }
        let int: u128 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad_grade(t))?
        };
        let den = 10u128.pow(frac.len() as u32);
        let frac: u128 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad_grade(t))?
        };
        (int * den + frac, den)
    } else {
        (t.parse().map_err(|_| bad_grade(t))?, 1)
    };
    if den == 0 {
        return Err(bad_grade(t));
    }
    if num > den {
        return Err(Error::invalid(format!("value {t} exceeds 1")));
    }
    let scaled = num * k as u128;
    if !scaled.is_multiple_of(den) {
        return Err(Error::invalid(format!(
            "value {t} is not a multiple of 1/{k}"
        )));
    }
    Ok((scaled / den) as u32)
}

fn bad_grade(t: &str) -> Error {
    Error::invalid(format!("cannot parse `{t}` as a rational in [0,1]"))
}

/// Renders `numerator / k` as a reduced `"num/den"` string (`"0"` and `"1"`
/// for the extremes).
pub fn format_grade(numerator: u32, k: u32) -> String {
    if numerator == 0 {
        return "0".into();
    }
    if numerator == k {
        return "1".into();
    }
    let g = gcd(numerator, k);
    format!("{}/{}", numerator / g, k / g)
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k10() -> HeytingChain {
        HeytingChain::new(10).unwrap()
    }

    #[test]
    fn meet_is_min() {
        let c = k10();
        let m = c.meet(&c.parse("0.3").unwrap(), &c.parse("0.7").unwrap()).unwrap();
        assert_eq!(m, c.parse("3/10").unwrap());
    }

    #[test]
    fn godel_implication_cases() {
        let c = k10();
        let (lo, hi) = (c.parse("0.3").unwrap(), c.parse("0.7").unwrap());
        assert_eq!(c.implies(&lo, &hi).unwrap(), c.top());
        assert_eq!(c.implies(&hi, &lo).unwrap(), lo);
    }

    #[test]
    fn negation_is_godel() {
        let c = k10();
        assert_eq!(c.negate(&c.parse("0.4").unwrap()).unwrap(), c.bottom());
        assert_eq!(c.negate(&c.bottom()).unwrap(), c.top());
    }

    #[test]
    fn chain_is_not_boolean() {
        let c = k10();
        let half = c.parse("1/2").unwrap();
        let nn = c.negate(&c.negate(&half).unwrap()).unwrap();
        assert_eq!(nn, c.top());
        assert_ne!(nn, half);
    }

    #[test]
    fn mismatched_resolution_rejected() {
        let (a, b) = (k10(), HeytingChain::new(5).unwrap());
        assert_eq!(a.meet(&a.top(), &b.top()), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn grade_parsing() {
        assert_eq!(parse_grade("1/5", 10).unwrap(), 2);
        assert_eq!(parse_grade("0.25", 4).unwrap(), 1);
        assert_eq!(parse_grade("1", 7).unwrap(), 7);
        assert!(parse_grade("1/3", 10).is_err());
        assert!(parse_grade("3/2", 10).is_err());
        assert!(parse_grade("x", 10).is_err());
        assert_eq!(format_grade(2, 10), "1/5");
        assert_eq!(format_grade(10, 10), "1");
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(k10().elements(1 << 20).unwrap().count(), 11);
        assert!(k10().elements(5).is_err());
    }
}
