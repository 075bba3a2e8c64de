//! Fixed-precision p-adic numbers.
//!
//! A nonzero [`PadicNumber`] is stored as `p^v * u` where `u` is a unit
//! known modulo `p^digits`, so the value itself is known modulo
//! `p^(v + digits)` (its absolute precision). Zero is an explicit marker:
//! either an exact zero, or a zero that is only known modulo `p^N` because
//! every significant digit cancelled.
//!
//! Precision propagates by the usual rules: sums keep the smallest absolute
//! precision of their operands, products and quotients keep the smallest
//! relative precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default number of significant base-p digits.
pub const DEFAULT_DIGITS: u32 = 60;

/// The p-adic order of a number; zero has infinite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn is_at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }

    /// Adds `by` to a finite valuation; infinity absorbs.
    pub fn shift(self, by: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// `self - other`, with `inf - finite = inf`. Returns `None` for `inf - inf`.
    pub fn gap_over(self, other: Valuation) -> Option<Valuation> {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Some(Valuation::Finite(a - b)),
            (Valuation::Infinite, Valuation::Finite(_)) => Some(Valuation::Infinite),
            (Valuation::Finite(_), Valuation::Infinite) => Some(Valuation::Finite(i64::MIN)),
            (Valuation::Infinite, Valuation::Infinite) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// An exact p-adic norm `p^(-valuation)`, or 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Norm {
    prime: u64,
    valuation: Valuation,
}

impl Norm {
    pub fn new(prime: u64, valuation: Valuation) -> Self {
        Norm { prime, valuation }
    }

    pub fn zero(prime: u64) -> Self {
        Norm { prime, valuation: Valuation::Infinite }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// The exponent `e` with norm `p^e`; `None` for the zero norm.
    pub fn exponent(&self) -> Option<i64> {
        self.valuation.finite().map(|v| -v)
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_infinite()
    }
}

impl PartialOrd for Norm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Norm {
    fn cmp(&self, other: &Self) -> Ordering {
        other.valuation.cmp(&self.valuation)
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent() {
            None => f.write_str("0"),
            Some(0) => f.write_str("1"),
            Some(e) => write!(f, "{}^{}", self.prime, e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// `precision == None` is an exact zero, otherwise zero modulo `p^precision`.
    Zero {
        precision: Option<i64>,
    },
    Nonzero {
        valuation: i64,
        unit: BigUint,
        digits: u32,
    },
}

/// An element of Q_p carried to a fixed number of significant digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u64,
    repr: Repr,
}

pub(crate) fn prime_power(prime: u64, exp: u32) -> BigUint {
    BigUint::from(prime).pow(exp)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent of `p` in a nonzero integer and the cofactor.
fn split_prime(value: &BigUint, prime: u64) -> (u32, BigUint) {
    let p = BigUint::from(prime);
    let mut rest = value.clone();
    let mut count = 0;
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return (count, rest);
        }
        rest = q;
        count += 1;
    }
}

fn pow_mod_u64(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of a unit modulo `p^digits` by Newton lifting `y <- y(2 - uy)`,
/// which doubles the number of correct digits per round.
pub(crate) fn inverse_unit(unit: &BigUint, prime: u64, digits: u32) -> BigUint {
    let low = (unit % prime).to_u64().expect("residue fits in u64");
    debug_assert!(low != 0, "inverse_unit called on a non-unit");
    // Fermat seed; for p = 2 this is 1, the only unit mod 2.
    let mut inv = BigUint::from(pow_mod_u64(low, prime - 2, prime));
    let mut known = 1u32;
    while known < digits {
        known = (known * 2).min(digits);
        let modulus = prime_power(prime, known);
        let t = (unit * &inv) % &modulus;
        let correction = (&modulus + 2u32 - t) % &modulus;
        inv = (inv * correction) % &modulus;
    }
    inv
}

fn validate_prime(prime: u64) -> Result<()> {
    if is_prime(prime) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{prime} is not a prime")))
    }
}

impl PadicNumber {
    pub fn zero(prime: u64) -> Self {
        PadicNumber { prime, repr: Repr::Zero { precision: None } }
    }

    /// Zero known only modulo `p^precision`.
    pub fn approximate_zero(prime: u64, precision: i64) -> Self {
        PadicNumber { prime, repr: Repr::Zero { precision: Some(precision) } }
    }

    pub fn one(prime: u64, digits: u32) -> Self {
        PadicNumber { prime, repr: Repr::Nonzero { valuation: 0, unit: BigUint::one(), digits } }
    }

    /// Builds `numerator / denominator` in canonical form.
    pub fn from_rational(numerator: i64, denominator: i64, prime: u64, digits: u32) -> Result<Self> {
        Self::from_bigint_ratio(&BigInt::from(numerator), &BigInt::from(denominator), prime, digits)
    }

    pub fn from_integer(n: i64, prime: u64, digits: u32) -> Result<Self> {
        Self::from_rational(n, 1, prime, digits)
    }

    pub fn from_bigint_ratio(numerator: &BigInt, denominator: &BigInt, prime: u64, digits: u32) -> Result<Self> {
        validate_prime(prime)?;
        if digits == 0 {
            return Err(Error::invalid("digit count must be positive"));
        }
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if numerator.is_zero() {
            return Ok(Self::zero(prime));
        }
        let sign_negative = (numerator.sign() == Sign::Minus) != (denominator.sign() == Sign::Minus);
        let (a, num) = split_prime(numerator.magnitude(), prime);
        let (b, den) = split_prime(denominator.magnitude(), prime);
        let modulus = prime_power(prime, digits);
        let mut unit = (num % &modulus) * inverse_unit(&(den % &modulus), prime, digits) % &modulus;
        if sign_negative {
            unit = &modulus - unit;
        }
        Ok(PadicNumber { prime, repr: Repr::Nonzero { valuation: a as i64 - b as i64, unit, digits } })
    }

    /// Builds `p^valuation * unit` from its parts; `unit` must be a unit below `p^digits`.
    pub fn from_parts(prime: u64, valuation: i64, unit: BigUint, digits: u32) -> Result<Self> {
        validate_prime(prime)?;
        if digits == 0 {
            return Err(Error::invalid("digit count must be positive"));
        }
        if unit >= prime_power(prime, digits) {
            return Err(Error::invalid("unit exceeds p^digits"));
        }
        if (&unit % prime).is_zero() {
            return Err(Error::invalid("unit part is divisible by the prime"));
        }
        Ok(PadicNumber { prime, repr: Repr::Nonzero { valuation, unit, digits } })
    }

    /// Builds `p^valuation * u` where `u` has the given little-endian base-p digits.
    pub fn from_digits(prime: u64, valuation: i64, unit_digits: &[u64]) -> Result<Self> {
        if unit_digits.iter().any(|&d| d >= prime) {
            return Err(Error::invalid("digit out of range for the prime"));
        }
        let unit = unit_digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * prime + d);
        Self::from_parts(prime, valuation, unit, unit_digits.len() as u32)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { precision: None })
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero { .. } => Valuation::Infinite,
            Repr::Nonzero { valuation, .. } => Valuation::Finite(*valuation),
        }
    }

    /// The unit part; zero for the zero marker.
    pub fn unit(&self) -> BigUint {
        match &self.repr {
            Repr::Zero { .. } => BigUint::zero(),
            Repr::Nonzero { unit, .. } => unit.clone(),
        }
    }

    /// Significant digits of the unit part (0 for zero).
    pub fn digits(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { digits, .. } => *digits,
        }
    }

    /// Absolute precision: the value is known modulo `p^precision`.
    /// `None` only for an exact zero.
    pub fn precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { precision } => *precision,
            Repr::Nonzero { valuation, digits, .. } => Some(valuation + *digits as i64),
        }
    }

    pub fn norm(&self) -> Norm {
        Norm::new(self.prime, self.valuation())
    }

    /// Little-endian base-p digits of the unit part.
    pub fn unit_digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Zero { .. } => Vec::new(),
            Repr::Nonzero { unit, digits, .. } => {
                let p = BigUint::from(self.prime);
                let mut rest = unit.clone();
                (0..*digits)
                    .map(|_| {
                        let (q, r) = rest.div_rem(&p);
                        rest = q;
                        r.to_u64().unwrap_or(0)
                    })
                    .collect()
            }
        }
    }

    /// Residue of an integral value modulo `p^k`, as an integer in `[0, p^k)`.
    pub fn residue(&self, k: u32) -> Result<BigUint> {
        if let Some(prec) = self.precision() {
            if prec < k as i64 {
                return Err(Error::precision(format!("value known modulo p^{prec}, residue mod p^{k} requested")));
            }
        }
        match &self.repr {
            Repr::Zero { .. } => Ok(BigUint::zero()),
            Repr::Nonzero { valuation, unit, .. } => {
                if *valuation < 0 {
                    return Err(Error::domain("residue of a non-integral value"));
                }
                if *valuation >= k as i64 {
                    return Ok(BigUint::zero());
                }
                let modulus = prime_power(self.prime, k);
                Ok(unit * prime_power(self.prime, *valuation as u32) % modulus)
            }
        }
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        }
    }

    /// Forgets every digit at or beyond absolute position `precision`.
    fn truncated(&self, precision: Option<i64>) -> Self {
        let Some(limit) = precision else {
            return self.clone();
        };
        match &self.repr {
            Repr::Zero { precision: None } => Self::approximate_zero(self.prime, limit),
            Repr::Zero { precision: Some(p) } => Self::approximate_zero(self.prime, (*p).min(limit)),
            Repr::Nonzero { valuation, unit, digits } => {
                if valuation + *digits as i64 <= limit {
                    self.clone()
                } else if limit <= *valuation {
                    Self::approximate_zero(self.prime, limit)
                } else {
                    let kept = (limit - valuation) as u32;
                    PadicNumber {
                        prime: self.prime,
                        repr: Repr::Nonzero {
                            valuation: *valuation,
                            unit: unit % prime_power(self.prime, kept),
                            digits: kept,
                        },
                    }
                }
            }
        }
    }

    /// Drops the value to at most `digits` significant digits.
    pub fn with_digits(&self, digits: u32) -> Self {
        match &self.repr {
            Repr::Nonzero { valuation, .. } => self.truncated(Some(valuation + digits as i64)),
            Repr::Zero { .. } => self.clone(),
        }
    }

    /// Caps the absolute precision at `precision`.
    pub fn with_precision(&self, precision: i64) -> Self {
        self.truncated(Some(precision))
    }

    /// `p^base * value` where `value < p^width`, put in canonical form.
    fn normalize(prime: u64, base: i64, value: BigUint, width: u32) -> Self {
        if value.is_zero() {
            return Self::approximate_zero(prime, base + width as i64);
        }
        let (shift, unit) = split_prime(&value, prime);
        PadicNumber { prime, repr: Repr::Nonzero { valuation: base + shift as i64, unit, digits: width - shift } }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { valuation, unit, digits } => PadicNumber {
                prime: self.prime,
                repr: Repr::Nonzero {
                    valuation: *valuation,
                    unit: prime_power(self.prime, *digits) - unit,
                    digits: *digits,
                },
            },
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        match (&self.repr, &other.repr) {
            (Repr::Zero { precision }, _) => Ok(other.truncated(*precision)),
            (_, Repr::Zero { precision }) => Ok(self.truncated(*precision)),
            (
                Repr::Nonzero { valuation: va, unit: ua, digits: da },
                Repr::Nonzero { valuation: vb, unit: ub, digits: db },
            ) => {
                let precision = (va + *da as i64).min(vb + *db as i64);
                let base = (*va).min(*vb);
                let width = (precision - base) as u32;
                let modulus = prime_power(self.prime, width);
                let lift = |u: &BigUint, v: i64| u * prime_power(self.prime, (v - base) as u32);
                let sum = (lift(ua, *va) + lift(ub, *vb)) % modulus;
                Ok(Self::normalize(self.prime, base, sum, width))
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let prime = self.prime;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { precision: None }, _) | (_, Repr::Zero { precision: None }) => Self::zero(prime),
            (Repr::Zero { precision: Some(a) }, Repr::Zero { precision: Some(b) }) => {
                Self::approximate_zero(prime, a + b)
            }
            (Repr::Zero { precision: Some(a) }, Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::Zero { precision: Some(a) }) => {
                Self::approximate_zero(prime, a + valuation)
            }
            (
                Repr::Nonzero { valuation: va, unit: ua, digits: da },
                Repr::Nonzero { valuation: vb, unit: ub, digits: db },
            ) => {
                let digits = (*da).min(*db);
                let unit = ua * ub % prime_power(prime, digits);
                PadicNumber { prime, repr: Repr::Nonzero { valuation: va + vb, unit, digits } }
            }
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero { precision: None } => Err(Error::DivisionByZero),
            Repr::Zero { precision: Some(p) } => {
                Err(Error::precision(format!("divisor is zero modulo p^{p}, its unit part is unknown")))
            }
            Repr::Nonzero { valuation, unit, digits } => Ok(PadicNumber {
                prime: self.prime,
                repr: Repr::Nonzero {
                    valuation: -valuation,
                    unit: inverse_unit(unit, self.prime, *digits),
                    digits: *digits,
                },
            }),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let inv = other.inverse()?;
        self.mul(&inv)
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        let digits = self.digits().max(1);
        let mut acc = Self::one(self.prime, digits);
        if exp == 0 {
            return Ok(acc);
        }
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Canonical text form `p^v * u (mod p^(v+d))`.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime;
        match &self.repr {
            Repr::Zero { precision: None } => f.write_str("0"),
            Repr::Zero { precision: Some(n) } => write!(f, "0 (mod {p}^{n})"),
            Repr::Nonzero { valuation, unit, digits } => {
                write!(f, "{p}^{valuation} * {unit} (mod {p}^{})", valuation + *digits as i64)
            }
        }
    }
}

/// A prime together with a working precision, for building numbers tersely.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Qp {
    prime: u64,
    digits: u32,
}

impl Qp {
    pub fn new(prime: u64, digits: u32) -> Result<Self> {
        validate_prime(prime)?;
        if digits == 0 {
            return Err(Error::invalid("digit count must be positive"));
        }
        Ok(Qp { prime, digits })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn int(&self, n: i64) -> PadicNumber {
        PadicNumber::from_integer(n, self.prime, self.digits).expect("validated prime and digits")
    }

    pub fn ratio(&self, numerator: i64, denominator: i64) -> Result<PadicNumber> {
        PadicNumber::from_rational(numerator, denominator, self.prime, self.digits)
    }

    pub fn zero(&self) -> PadicNumber {
        PadicNumber::zero(self.prime)
    }

    pub fn one(&self) -> PadicNumber {
        PadicNumber::one(self.prime, self.digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> Qp {
        Qp::new(5, 4).unwrap()
    }

    #[test]
    fn from_rational_examples() {
        let one = PadicNumber::from_rational(1, 1, 5, 4).unwrap();
        assert_eq!(one.valuation(), Valuation::Finite(0));
        assert_eq!(one.unit(), BigUint::one());

        let x = PadicNumber::from_rational(75, 2, 5, 4).unwrap();
        assert_eq!(x.valuation(), Valuation::Finite(2));
        assert_eq!(x.norm().exponent(), Some(-2));
        // 75/2 = 25 * 3/2, and 3/2 mod 625 = 3 * 313
        assert_eq!(x.unit(), BigUint::from(3u32 * 313 % 625));

        let six = PadicNumber::from_rational(6, 1, 5, 2).unwrap();
        assert_eq!(six.valuation(), Valuation::Finite(0));
        assert_eq!(six.unit(), BigUint::from(6u32));
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(PadicNumber::from_rational(1, 0, 5, 4), Err(Error::DivisionByZero));
    }

    #[test]
    fn negative_values_wrap() {
        let m1 = q5().int(-1);
        assert_eq!(m1.unit(), BigUint::from(624u32));
        assert!(m1.add(&q5().int(1)).unwrap().is_zero());
    }

    #[test]
    fn add_neg_is_zero() {
        let x = q5().ratio(7, 3).unwrap();
        let s = x.add(&x.neg()).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.norm(), Norm::zero(5));
        assert_eq!(s.precision(), Some(4));
    }

    #[test]
    fn five_times_one_fifth() {
        let a = PadicNumber::from_rational(5, 1, 5, 4).unwrap();
        let b = PadicNumber::from_rational(1, 5, 5, 4).unwrap();
        assert_eq!(a.mul(&b).unwrap(), q5().one());
    }

    #[test]
    fn ultrametric_equality_case() {
        let a = q5().int(5 * 3);
        let b = q5().int(125 * 2);
        let s = a.add(&b).unwrap();
        assert_eq!(s.norm().exponent(), Some(-1));
    }

    #[test]
    fn cancellation_loses_digits() {
        let q = Qp::new(5, 4).unwrap();
        let a = q.int(1 + 25 * 3);
        let s = a.sub(&q.one()).unwrap();
        assert_eq!(s.valuation(), Valuation::Finite(2));
        assert_eq!(s.digits(), 2);
        assert_eq!(s.precision(), Some(4));
    }

    #[test]
    fn division_errors() {
        let q = q5();
        assert_eq!(q.one().div(&q.zero()), Err(Error::DivisionByZero));
        let vanished = q.int(3).sub(&q.int(3)).unwrap();
        assert!(matches!(q.one().div(&vanished), Err(Error::Precision(_))));
    }

    #[test]
    fn prime_mismatch() {
        let a = PadicNumber::one(3, 4);
        let b = PadicNumber::one(5, 4);
        assert_eq!(a.add(&b), Err(Error::PrimeMismatch(3, 5)));
    }

    #[test]
    fn newton_inverse_matches_definition() {
        for p in [2u64, 3, 5, 7, 101] {
            for u in [1u64, 3, 7, 11, 123456] {
                if u % p == 0 {
                    continue;
                }
                for d in [1u32, 2, 5, 17, 60] {
                    let inv = inverse_unit(&BigUint::from(u), p, d);
                    let m = prime_power(p, d);
                    assert!(inv < m);
                    assert_eq!((inv * u) % &m, BigUint::one() % &m, "p={p} u={u} d={d}");
                }
            }
        }
    }

    #[test]
    fn two_adic_arithmetic_works() {
        let q = Qp::new(2, 10).unwrap();
        let x = q.ratio(1, 3).unwrap();
        assert_eq!(x.mul(&q.int(3)).unwrap(), q.one());
        assert_eq!(q.int(12).valuation(), Valuation::Finite(2));
    }

    #[test]
    fn digit_list_round_trip() {
        let x = PadicNumber::from_digits(5, -1, &[2, 0, 4, 1]).unwrap();
        assert_eq!(x.unit_digits(), vec![2, 0, 4, 1]);
        assert_eq!(x.valuation(), Valuation::Finite(-1));
        assert!(PadicNumber::from_digits(5, 0, &[0, 1]).is_err());
    }

    #[test]
    fn residue_and_text() {
        let x = Qp::new(5, 3).unwrap().ratio(4, 9).unwrap();
        // 9 * 14 = 126 = 1 mod 125, so 4/9 = 56 mod 125
        assert_eq!(x.residue(3).unwrap(), BigUint::from(56u32));
        assert_eq!(x.to_string(), "5^0 * 56 (mod 5^3)");
        assert!(x.residue(4).is_err());
    }

    #[test]
    fn pow_and_valuation() {
        let q = Qp::new(3, 8).unwrap();
        let x = q.ratio(6, 5).unwrap();
        let y = x.pow(3).unwrap();
        assert_eq!(y.valuation(), Valuation::Finite(3));
        assert_eq!(y, q.ratio(216, 125).unwrap());
    }

    #[test]
    fn non_prime_rejected() {
        assert!(PadicNumber::from_rational(1, 1, 4, 3).is_err());
        assert!(PadicNumber::from_rational(1, 1, 5, 0).is_err());
    }
}
