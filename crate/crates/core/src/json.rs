//! JSON encodings of numbers, elements, valuations and traces.
//!
//! A p-adic number is written as
//! `{"prime": 5, "valuation": 2, "unit_digits": [3, 2, 2, 4]}` with
//! little-endian base-p unit digits, or with `"valuation": "inf"` for zero.
//! An approximate zero also carries `"precision": N`.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{AlgebraElement, ElementShape};
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JsonValuation(pub Valuation);

impl Serialize for JsonValuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Valuation::Finite(v) => s.serialize_i64(v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for JsonValuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonValuation(Valuation::Finite(v))),
            Raw::Text(t) if t == "inf" => Ok(JsonValuation(Valuation::Infinite)),
            Raw::Text(t) => Err(D::Error::custom(format!("valuation must be an integer or \"inf\", got {t:?}"))),
        }
    }
}

pub fn serialize_valuation<S: Serializer>(v: &Valuation, s: S) -> std::result::Result<S::Ok, S::Error> {
    JsonValuation(*v).serialize(s)
}

/// A trace as `[[n, valuation], ...]`.
pub fn serialize_trace<S: Serializer>(trace: &[(usize, Valuation)], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(trace.iter().map(|(n, v)| (n, JsonValuation(*v))))
}

pub fn serialize_element<S: Serializer>(x: &AlgebraElement, s: S) -> std::result::Result<S::Ok, S::Error> {
    ElementJson::from(x).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadicJson {
    pub prime: u64,
    pub valuation: JsonValuation,
    #[serde(default)]
    pub unit_digits: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
}

impl From<&PadicNumber> for PadicJson {
    fn from(x: &PadicNumber) -> Self {
        let precision = if x.is_zero() { x.precision() } else { None };
        PadicJson { prime: x.prime(), valuation: JsonValuation(x.valuation()), unit_digits: x.unit_digits(), precision }
    }
}

impl PadicJson {
    pub fn to_number(&self) -> Result<PadicNumber> {
        match self.valuation.0 {
            Valuation::Infinite => {
                if self.unit_digits.iter().any(|&d| d != 0) {
                    return Err(Error::invalid("a zero must not carry nonzero unit digits"));
                }
                Ok(match self.precision {
                    Some(n) => PadicNumber::approximate_zero(self.prime, n),
                    None => PadicNumber::zero(self.prime),
                })
            }
            Valuation::Finite(v) => PadicNumber::from_digits(self.prime, v, &self.unit_digits),
        }
    }
}

/// A scalar given as an integer, a `"a/b"` string, or a full p-adic encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberJson {
    Int(i64),
    Text(String),
    Padic(PadicJson),
}

impl NumberJson {
    pub fn to_number(&self, prime: u64, digits: u32) -> Result<PadicNumber> {
        match self {
            NumberJson::Int(n) => PadicNumber::from_integer(*n, prime, digits),
            NumberJson::Text(t) => parse_rational(t, prime, digits),
            NumberJson::Padic(p) => {
                if p.prime != prime {
                    return Err(Error::PrimeMismatch(prime, p.prime));
                }
                p.to_number()
            }
        }
    }
}

/// Parses `"a"` or `"a/b"` with arbitrary-size integers.
pub fn parse_rational(text: &str, prime: u64, digits: u32) -> Result<PadicNumber> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let parse = |s: &str| s.parse::<BigInt>().map_err(|_| Error::invalid(format!("`{text}` is not a rational number")));
    PadicNumber::from_bigint_ratio(&parse(num)?, &parse(den)?, prime, digits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Vector { vector: Vec<NumberJson> },
    Seq { seq: Vec<NumberJson> },
    Scalar(NumberJson),
}

impl From<&AlgebraElement> for ElementJson {
    fn from(x: &AlgebraElement) -> Self {
        let comps = || x.components().iter().map(|c| NumberJson::Padic(c.into())).collect();
        match x {
            AlgebraElement::Scalar(s) => ElementJson::Scalar(NumberJson::Padic(s.into())),
            AlgebraElement::Vector(_) => ElementJson::Vector { vector: comps() },
            AlgebraElement::Seq(_) => ElementJson::Seq { seq: comps() },
        }
    }
}

impl ElementJson {
    pub fn to_element(&self, prime: u64, digits: u32) -> Result<AlgebraElement> {
        let convert = |xs: &[NumberJson]| xs.iter().map(|x| x.to_number(prime, digits)).collect::<Result<Vec<_>>>();
        match self {
            ElementJson::Scalar(x) => Ok(x.to_number(prime, digits)?.into()),
            ElementJson::Vector { vector } => {
                AlgebraElement::from_components(ElementShape::Vector(vector.len()), convert(vector)?)
            }
            ElementJson::Seq { seq } => AlgebraElement::from_components(ElementShape::Seq(seq.len()), convert(seq)?),
        }
    }
}
