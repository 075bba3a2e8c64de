//! Closed subsets of the unit ball that the solvers iterate on, with exact
//! membership tests and samplers that produce members by construction.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, ElementShape};
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Valuation};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainSpec {
    /// `||x|| <= 1`.
    UnitBall,
    /// `||x|| = 1`.
    UnitSphere,
    /// `|x|_p = 1` and `|x - 1|_p <= 1/p`, componentwise.
    Ep,
    /// One predicate per component of a vector or sequence.
    Product(Vec<DomainSpec>),
}

/// `|x| = 1` and `|x - 1| <= 1/p`.
pub fn in_ep(x: &PadicNumber) -> bool {
    if x.valuation() != Valuation::Finite(0) {
        return false;
    }
    // a unit is in E_p exactly when its lowest digit is 1
    (x.unit() % x.prime()) == BigUint::from(1u32)
}

impl DomainSpec {
    fn contains_scalar(&self, x: &PadicNumber) -> bool {
        match self {
            DomainSpec::UnitBall => x.valuation().is_at_least(0),
            DomainSpec::UnitSphere => x.valuation() == Valuation::Finite(0),
            DomainSpec::Ep => in_ep(x),
            DomainSpec::Product(parts) => parts.len() == 1 && parts[0].contains_scalar(x),
        }
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        match (self, x) {
            (_, AlgebraElement::Scalar(s)) => self.contains_scalar(s),
            (DomainSpec::Product(parts), _) => {
                parts.len() == x.components().len()
                    && parts.iter().zip(x.components()).all(|(d, c)| d.contains_scalar(c))
            }
            (DomainSpec::UnitSphere, AlgebraElement::Seq(_)) => x.valuation() == Valuation::Finite(0),
            (_, _) => x.components().iter().all(|c| self.contains_scalar(c)),
        }
    }

    /// Like [`contains`](Self::contains) but explains a failure.
    pub fn check(&self, x: &AlgebraElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::domain(format!("{x} is not in {}", self.name())))
        }
    }

    pub fn name(&self) -> String {
        match self {
            DomainSpec::UnitBall => "the closed unit ball".into(),
            DomainSpec::UnitSphere => "the unit sphere".into(),
            DomainSpec::Ep => "E_p".into(),
            DomainSpec::Product(parts) => {
                let names: Vec<_> = parts.iter().map(DomainSpec::name).collect();
                format!("product({})", names.join(", "))
            }
        }
    }

    fn part(&self, index: usize) -> &DomainSpec {
        match self {
            DomainSpec::Product(parts) => &parts[index.min(parts.len().saturating_sub(1))],
            other => other,
        }
    }

    /// A deterministic member: all components 1 (every predicate contains 1).
    pub fn canonical_point(&self, shape: ElementShape, prime: u64, digits: u32) -> AlgebraElement {
        AlgebraElement::filled(shape, &PadicNumber::one(prime, digits))
    }

    /// A pseudorandom member with `digits` significant digits per component.
    ///
    /// E_p members are `1 + p*r` and sphere members have a uniform nonzero
    /// leading digit, so membership holds by construction.
    pub fn sample<R: Rng + ?Sized>(&self, shape: ElementShape, prime: u64, digits: u32, rng: &mut R) -> AlgebraElement {
        let comps = (0..shape.len()).map(|i| self.part(i).sample_scalar(prime, digits, rng)).collect();
        let x = AlgebraElement::from_components(shape, comps).expect("consistent shape");
        if matches!(self, DomainSpec::UnitSphere) && !self.contains(&x) {
            // a sequence on the sphere needs at least one unit component
            let mut comps = x.components().to_vec();
            comps[0] = DomainSpec::UnitSphere.sample_scalar(prime, digits, rng);
            return AlgebraElement::from_components(shape, comps).expect("consistent shape");
        }
        x
    }

    fn sample_scalar<R: Rng + ?Sized>(&self, prime: u64, digits: u32, rng: &mut R) -> PadicNumber {
        let mut ds: Vec<u64> = (0..digits).map(|_| rng.gen_range(0..prime)).collect();
        match self {
            DomainSpec::UnitBall => {
                let value = ds.iter().rev().fold(BigUint::zero(), |acc, &d| acc * prime + d);
                if value.is_zero() {
                    return PadicNumber::zero(prime);
                }
                let shift = ds.iter().take_while(|&&d| d == 0).count();
                let unit = &ds[shift..];
                PadicNumber::from_digits(prime, shift as i64, unit).expect("valid digits")
            }
            DomainSpec::UnitSphere => {
                ds[0] = rng.gen_range(1..prime);
                PadicNumber::from_digits(prime, 0, &ds).expect("valid digits")
            }
            DomainSpec::Ep | DomainSpec::Product(_) => {
                ds[0] = 1;
                PadicNumber::from_digits(prime, 0, &ds).expect("valid digits")
            }
        }
    }

    /// A member close to `x`: some components moved by `p^s * t` with
    /// `s >= 1`, which never leaves any of the predicates.
    pub fn perturb<R: Rng + ?Sized>(&self, x: &AlgebraElement, rng: &mut R) -> AlgebraElement {
        let prime = x.prime().unwrap_or(2);
        let digits = x.components().iter().map(PadicNumber::digits).filter(|&d| d > 0).min().unwrap_or(1);
        let max_shift = digits.saturating_sub(1).clamp(1, 12);
        let n = x.components().len();
        let forced = rng.gen_range(0..n);
        let comps = x
            .components()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i != forced && rng.gen_bool(0.5) {
                    return c.clone();
                }
                let shift = rng.gen_range(1..=max_shift);
                let t = DomainSpec::UnitSphere.sample_scalar(prime, digits, rng);
                let step = PadicNumber::from_digits(prime, shift as i64, &t.unit_digits()).expect("valid digits");
                c.add(&step).expect("same prime")
            })
            .collect();
        AlgebraElement::from_components(x.shape(), comps).expect("same shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Qp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ep_examples() {
        let q = Qp::new(5, 6).unwrap();
        assert!(in_ep(&q.int(1)));
        assert!(in_ep(&q.int(6)));
        assert!(!in_ep(&q.int(5)));
        assert!(!in_ep(&q.int(2)));
        assert!(!in_ep(&q.zero()));
    }

    #[test]
    fn samples_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let domains = [DomainSpec::UnitBall, DomainSpec::UnitSphere, DomainSpec::Ep];
        let shapes = [ElementShape::Scalar, ElementShape::Vector(3), ElementShape::Seq(4)];
        for d in &domains {
            for s in shapes {
                for _ in 0..50 {
                    let x = d.sample(s, 7, 12, &mut rng);
                    assert!(d.contains(&x), "{x} not in {}", d.name());
                    let y = d.perturb(&x, &mut rng);
                    assert!(d.contains(&y));
                    assert!(x.sub(&y).unwrap().valuation().is_at_least(1));
                }
            }
        }
    }

    #[test]
    fn product_domain_componentwise() {
        let q = Qp::new(3, 5).unwrap();
        let d = DomainSpec::Product(vec![DomainSpec::Ep, DomainSpec::UnitBall]);
        assert!(d.contains(&AlgebraElement::Vector(vec![q.int(4), q.int(3)])));
        assert!(!d.contains(&AlgebraElement::Vector(vec![q.int(3), q.int(4)])));
        assert!(d.check(&AlgebraElement::Vector(vec![q.int(2), q.int(1)])).is_err());
    }
}
