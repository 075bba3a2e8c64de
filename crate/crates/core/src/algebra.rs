//! The three concrete non-Archimedean algebras: Q_p itself, Q_p^m with the
//! sup norm, and finitely truncated c0 sequences.

use crate::error::{Error, Result};
use crate::padic::{Norm, PadicNumber, Valuation};

/// Which algebra an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementShape {
    Scalar,
    Vector(usize),
    /// Truncated c0 sequence with `T` stored terms; later terms are exactly 0.
    Seq(usize),
}

impl ElementShape {
    pub fn len(&self) -> usize {
        match self {
            ElementShape::Scalar => 1,
            ElementShape::Vector(n) | ElementShape::Seq(n) => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraElement {
    Scalar(PadicNumber),
    Vector(Vec<PadicNumber>),
    Seq(Vec<PadicNumber>),
}

impl From<PadicNumber> for AlgebraElement {
    fn from(x: PadicNumber) -> Self {
        AlgebraElement::Scalar(x)
    }
}

impl AlgebraElement {
    /// Builds an element of the given shape from its components.
    pub fn from_components(shape: ElementShape, components: Vec<PadicNumber>) -> Result<Self> {
        if components.len() != shape.len() {
            return Err(Error::Shape(format!("{shape:?} needs {} components, got {}", shape.len(), components.len())));
        }
        if let Some(first) = components.first() {
            if let Some(bad) = components.iter().find(|c| c.prime() != first.prime()) {
                return Err(Error::PrimeMismatch(first.prime(), bad.prime()));
            }
        }
        Ok(match shape {
            ElementShape::Scalar => AlgebraElement::Scalar(components.into_iter().next().expect("one component")),
            ElementShape::Vector(_) => AlgebraElement::Vector(components),
            ElementShape::Seq(_) => AlgebraElement::Seq(components),
        })
    }

    /// Every component set to `value`.
    pub fn filled(shape: ElementShape, value: &PadicNumber) -> Self {
        Self::from_components(shape, vec![value.clone(); shape.len()]).expect("uniform components")
    }

    pub fn shape(&self) -> ElementShape {
        match self {
            AlgebraElement::Scalar(_) => ElementShape::Scalar,
            AlgebraElement::Vector(v) => ElementShape::Vector(v.len()),
            AlgebraElement::Seq(v) => ElementShape::Seq(v.len()),
        }
    }

    pub fn components(&self) -> &[PadicNumber] {
        match self {
            AlgebraElement::Scalar(x) => std::slice::from_ref(x),
            AlgebraElement::Vector(v) | AlgebraElement::Seq(v) => v,
        }
    }

    pub fn as_scalar(&self) -> Option<&PadicNumber> {
        match self {
            AlgebraElement::Scalar(x) => Some(x),
            _ => None,
        }
    }

    pub fn prime(&self) -> Option<u64> {
        self.components().first().map(PadicNumber::prime)
    }

    /// Minimum component valuation, i.e. the valuation of the sup norm.
    pub fn valuation(&self) -> Valuation {
        self.components().iter().map(PadicNumber::valuation).min().unwrap_or(Valuation::Infinite)
    }

    pub fn norm(&self) -> Norm {
        Norm::new(self.prime().unwrap_or(2), self.valuation())
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(PadicNumber::is_zero)
    }

    /// Smallest absolute precision among the components (`None` if all exact zeros).
    pub fn precision(&self) -> Option<i64> {
        self.components().iter().filter_map(PadicNumber::precision).min()
    }

    /// Decides `valuation(self) >= target` at the tracked precision.
    ///
    /// A component that cancelled to zero below `p^target` cannot certify the
    /// bound and yields a precision error.
    pub fn meets(&self, target: i64) -> Result<bool> {
        let mut undecided = None;
        for c in self.components() {
            match c.valuation() {
                Valuation::Finite(v) if v < target => return Ok(false),
                Valuation::Finite(_) => {}
                Valuation::Infinite => {
                    if let Some(prec) = c.precision() {
                        if prec < target {
                            undecided = Some(prec);
                        }
                    }
                }
            }
        }
        match undecided {
            Some(prec) => Err(Error::precision(format!(
                "difference vanished modulo p^{prec} but valuation {target} was requested"
            ))),
            None => Ok(true),
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&PadicNumber, &PadicNumber) -> Result<PadicNumber>) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        let comps =
            self.components().iter().zip(other.components()).map(|(a, b)| op(a, b)).collect::<Result<Vec<_>>>()?;
        Self::from_components(self.shape(), comps)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, PadicNumber::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, PadicNumber::sub)
    }

    /// Componentwise product (the algebra multiplication of Q_p^m and c0).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, PadicNumber::mul)
    }

    pub fn neg(&self) -> Self {
        let comps = self.components().iter().map(PadicNumber::neg).collect();
        Self::from_components(self.shape(), comps).expect("same shape")
    }

    pub fn scale(&self, factor: &PadicNumber) -> Result<Self> {
        let comps = self.components().iter().map(|c| c.mul(factor)).collect::<Result<Vec<_>>>()?;
        Self::from_components(self.shape(), comps)
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        let comps = self.components().iter().map(|c| c.pow(exp)).collect::<Result<Vec<_>>>()?;
        Self::from_components(self.shape(), comps)
    }

    /// Product of a nonempty list of elements of one shape.
    pub fn product<'a>(items: impl IntoIterator<Item = &'a AlgebraElement>) -> Result<Self> {
        let mut iter = items.into_iter();
        let first = iter.next().ok_or_else(|| Error::invalid("empty product"))?.clone();
        iter.try_fold(first, |acc, x| acc.mul(x))
    }

    /// Sum of a nonempty list of elements of one shape.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a AlgebraElement>) -> Result<Self> {
        let mut iter = items.into_iter();
        let first = iter.next().ok_or_else(|| Error::invalid("empty sum"))?.clone();
        iter.try_fold(first, |acc, x| acc.add(x))
    }
}

impl std::fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraElement::Scalar(x) => write!(f, "{x}"),
            AlgebraElement::Vector(v) | AlgebraElement::Seq(v) => {
                let tag = if matches!(self, AlgebraElement::Vector(_)) { "vec" } else { "seq" };
                write!(f, "{tag}[")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Checks `||prod a_i - prod b_i|| <= max_i ||a_i - b_i||` for unit-ball tuples.
pub fn product_difference_bound(a: &[AlgebraElement], b: &[AlgebraElement]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("tuples of length {} and {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Ok(true);
    }
    if let Some(x) = a.iter().chain(b).find(|x| !x.valuation().is_at_least(0)) {
        return Err(Error::domain(format!("{x} lies outside the unit ball")));
    }
    let lhs = AlgebraElement::product(a)?.sub(&AlgebraElement::product(b)?)?;
    let rhs = a
        .iter()
        .zip(b)
        .map(|(x, y)| x.sub(y).map(|d| d.valuation()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .unwrap_or(Valuation::Infinite);
    Ok(lhs.valuation() >= rhs)
}

/// Stopping test shared by all solvers: did the last step move by
/// valuation at least `target_valuation`?
pub fn is_cauchy_gap(trace: &[AlgebraElement], target_valuation: i64) -> bool {
    let [.., prev, last] = trace else {
        return false;
    };
    last.sub(prev).and_then(|d| d.meets(target_valuation)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Qp;

    fn q() -> Qp {
        Qp::new(5, 10).unwrap()
    }

    #[test]
    fn vector_norm_is_sup() {
        let v = AlgebraElement::Vector(vec![q().int(1), q().int(5), q().int(25)]);
        assert_eq!(v.norm().exponent(), Some(0));
        assert!(AlgebraElement::Scalar(q().zero()).norm().is_zero());
        let s = AlgebraElement::Seq(vec![q().int(5), q().int(25), q().zero()]);
        assert_eq!(s.norm().exponent(), Some(-1));
    }

    #[test]
    fn scaling_a_component_by_p() {
        let v = AlgebraElement::Vector(vec![q().int(5), q().int(2)]);
        let w = AlgebraElement::Vector(vec![q().int(5), q().int(10)]);
        assert_eq!(v.valuation(), Valuation::Finite(0));
        assert_eq!(w.valuation(), Valuation::Finite(1));
    }

    #[test]
    fn product_bound_trivial_cases() {
        let a = vec![AlgebraElement::Scalar(q().int(3)), AlgebraElement::Scalar(q().int(7))];
        assert!(product_difference_bound(&a, &a).unwrap());
        let x = vec![AlgebraElement::Scalar(q().int(3))];
        let y = vec![AlgebraElement::Scalar(q().int(8))];
        assert!(product_difference_bound(&x, &y).unwrap());
        let outside = vec![AlgebraElement::Scalar(q().ratio(1, 5).unwrap())];
        assert!(matches!(product_difference_bound(&outside, &y), Err(Error::Domain(_))));
    }

    #[test]
    fn cauchy_gap_examples() {
        let c = AlgebraElement::Scalar(q().int(7));
        assert!(is_cauchy_gap(&[c.clone(), c.clone()], 9));
        let trace: Vec<_> =
            [1i64, 1 + 5, 1 + 5 + 25, 1 + 5 + 25 + 125].iter().map(|&n| AlgebraElement::Scalar(q().int(n))).collect();
        assert!(is_cauchy_gap(&trace, 3));
        assert!(!is_cauchy_gap(&trace, 4));
        assert!(!is_cauchy_gap(&trace[..1], 0));
    }

    #[test]
    fn meets_reports_precision_exhaustion() {
        let x = AlgebraElement::Scalar(q().int(3));
        let d = x.sub(&x).unwrap();
        assert!(d.meets(10).unwrap());
        assert!(matches!(d.meets(11), Err(Error::Precision(_))));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = AlgebraElement::Vector(vec![q().int(1)]);
        let b = AlgebraElement::Seq(vec![q().int(1)]);
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
    }
}
