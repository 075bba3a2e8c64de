//! Fixtures shared by the benchmarks.

use ultrafix::applications::{make_mobius, MobiusParams};
use ultrafix::*;

pub const PRIME: u64 = 5;
pub const DIGITS: u32 = 60;

/// `f(x, y) = (xy + x + y + 1) / (xy + x + y + 6)`.
pub fn mobius() -> ContractiveMap {
    make_mobius(&MobiusParams::from_integers([1, 1, 1, 1, 1, 6], PRIME, DIGITS).unwrap()).unwrap()
}

pub fn scalar(x: i64) -> AlgebraElement {
    PadicNumber::from_integer(x, PRIME, DIGITS).unwrap().into()
}

pub fn recurrence() -> (RecurrenceSpec, Vec<AlgebraElement>) {
    (RecurrenceSpec::single(mobius()), vec![scalar(1), scalar(6)])
}

pub fn binary_tree(depth: usize, seed: u64) -> TreeProblem {
    TreeProblem::new(
        TreeShape::uniform(2, depth).unwrap(),
        MapFamily::Uniform(vec![mobius()]),
        EdgeArgument::FullTuple,
        &Boundary::Random { seed },
    )
    .unwrap()
}

/// A pair of full-precision units for arithmetic benchmarks.
pub fn operands() -> (PadicNumber, PadicNumber) {
    let q = Qp::new(PRIME, DIGITS).unwrap();
    (q.ratio(123_456_789, 987_654_321).unwrap(), q.ratio(-31_415_926, 27_182_818).unwrap())
}
