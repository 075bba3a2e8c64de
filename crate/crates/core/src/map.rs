//! Contractive maps `f: C^m -> C` and the sampled contraction check.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraElement, ElementShape};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Valuation};

/// Evaluation rule of a map.
pub trait MapRule: Send + Sync {
    fn eval(&self, args: &[AlgebraElement]) -> Result<AlgebraElement>;
}

impl<F> MapRule for F
where
    F: Fn(&[AlgebraElement]) -> Result<AlgebraElement> + Send + Sync,
{
    fn eval(&self, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        self(args)
    }
}

/// A map `C^arity -> C` with a declared contraction exponent `k`, meaning
/// `||f(x) - f(y)|| <= p^(-k) max_i ||x_i - y_i||`.
#[derive(Clone)]
pub struct ContractiveMap {
    label: String,
    arity: usize,
    shape: ElementShape,
    domain: DomainSpec,
    prime: u64,
    digits: u32,
    contraction_exponent: u32,
    dependency_mask: Option<Vec<bool>>,
    rule: Arc<dyn MapRule>,
}

impl fmt::Debug for ContractiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContractiveMap")
            .field("label", &self.label)
            .field("arity", &self.arity)
            .field("shape", &self.shape)
            .field("domain", &self.domain)
            .field("prime", &self.prime)
            .field("contraction_exponent", &self.contraction_exponent)
            .finish_non_exhaustive()
    }
}

impl ContractiveMap {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        label: impl Into<String>,
        arity: usize,
        shape: ElementShape,
        domain: DomainSpec,
        prime: u64,
        digits: u32,
        contraction_exponent: u32,
        rule: impl MapRule + 'static,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::invalid("map arity must be at least 1"));
        }
        if contraction_exponent == 0 {
            return Err(Error::invalid("contraction exponent must be at least 1"));
        }
        Ok(ContractiveMap {
            label: label.into(),
            arity,
            shape,
            domain,
            prime,
            digits,
            contraction_exponent,
            dependency_mask: None,
            rule: Arc::new(rule),
        })
    }

    /// The map with constant value `value`. Its exponent is the working
    /// digit count, which every constant map satisfies at that precision.
    pub fn constant(arity: usize, domain: DomainSpec, value: AlgebraElement, digits: u32) -> Result<Self> {
        domain.check(&value)?;
        let prime = value.prime().ok_or_else(|| Error::invalid("empty constant"))?;
        let shape = value.shape();
        ContractiveMap::new(
            "constant",
            arity,
            shape,
            domain,
            prime,
            digits,
            digits.max(1),
            move |_: &[AlgebraElement]| Ok(value.clone()),
        )
        .map(|m| m.with_dependency_mask(vec![false; arity]))
    }

    /// The projection onto the first argument, declared with exponent `k`.
    /// It is not contractive, so [`verify_contraction`] reports a failure.
    pub fn identity(shape: ElementShape, domain: DomainSpec, prime: u64, digits: u32, k: u32) -> Result<Self> {
        ContractiveMap::new("identity", 1, shape, domain, prime, digits, k, |args: &[AlgebraElement]| {
            Ok(args[0].clone())
        })
    }

    /// Restricts the contraction check to the arguments the map depends on.
    pub fn with_dependency_mask(mut self, mask: Vec<bool>) -> Self {
        self.dependency_mask = Some(mask);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn shape(&self) -> ElementShape {
        self.shape
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn contraction_exponent(&self) -> u32 {
        self.contraction_exponent
    }

    pub fn dependency_mask(&self) -> Option<&[bool]> {
        self.dependency_mask.as_deref()
    }

    pub fn eval(&self, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        if args.len() != self.arity {
            return Err(Error::invalid(format!(
                "map `{}` takes {} arguments, got {}",
                self.label,
                self.arity,
                args.len()
            )));
        }
        self.rule.eval(args)
    }

    /// `f(x, ..., x)`.
    pub fn eval_diagonal(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let args = vec![x.clone(); self.arity];
        self.eval(&args)
    }

    /// The one-argument map `x -> f(x, ..., x)` with the same exponent.
    pub fn diagonal(&self) -> ContractiveMap {
        let inner = self.clone();
        ContractiveMap {
            label: format!("{}-diagonal", self.label),
            arity: 1,
            dependency_mask: None,
            rule: Arc::new(move |args: &[AlgebraElement]| inner.eval_diagonal(&args[0])),
            ..self.clone()
        }
    }

    fn depends_on(&self, i: usize) -> bool {
        self.dependency_mask.as_ref().is_none_or(|m| m.get(i).copied().unwrap_or(true))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionReport {
    pub label: String,
    pub samples: usize,
    pub declared_exponent: u32,
    /// Smallest `v(f(x) - f(y)) - min_i v(x_i - y_i)` seen; `Infinite` when
    /// every sampled pair had identical images.
    #[serde(serialize_with = "crate::json::serialize_valuation")]
    pub min_observed_gap: Valuation,
    /// Sampled points whose image left the domain.
    pub closure_violations: usize,
    pub pass: bool,
}

/// Samples `samples` pairs in `domain^m`, half of them independent and half
/// close perturbations, and measures the contraction gap and range closure.
pub fn verify_contraction(f: &ContractiveMap, samples: usize, seed: u64) -> Result<ContractionReport> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Vec<AlgebraElement>, Vec<AlgebraElement>)> = (0..samples)
        .map(|i| {
            let x: Vec<_> = (0..f.arity).map(|_| f.domain.sample(f.shape, f.prime, f.digits, &mut rng)).collect();
            let y: Vec<_> = if i % 2 == 0 {
                (0..f.arity).map(|_| f.domain.sample(f.shape, f.prime, f.digits, &mut rng)).collect()
            } else {
                x.iter().map(|xi| f.domain.perturb(xi, &mut rng)).collect()
            };
            (x, y)
        })
        .collect();

    let outcomes = pairs
        .par_iter()
        .map(|(x, y)| -> Result<(Option<Valuation>, usize)> {
            let fx = f.eval(x)?;
            let fy = f.eval(y)?;
            let escaped = usize::from(!f.domain.contains(&fx)) + usize::from(!f.domain.contains(&fy));
            let input_gap = x
                .iter()
                .zip(y)
                .enumerate()
                .filter(|(i, _)| f.depends_on(*i))
                .map(|(_, (a, b))| a.sub(b).map(|d| d.valuation()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .unwrap_or(Valuation::Infinite);
            let output = fx.sub(&fy)?.valuation();
            Ok((output.gap_over(input_gap), escaped))
        })
        .collect::<Result<Vec<_>>>()?;

    let min_gap = outcomes.iter().filter_map(|(g, _)| *g).min().unwrap_or(Valuation::Infinite);
    let closure_violations = outcomes.iter().map(|(_, e)| e).sum();
    let pass = min_gap.is_at_least(f.contraction_exponent as i64) && closure_violations == 0;
    Ok(ContractionReport {
        label: f.label.clone(),
        samples,
        declared_exponent: f.contraction_exponent,
        min_observed_gap: min_gap,
        closure_violations,
        pass,
    })
}

/// Scalar argument helper used by the concrete map families.
pub(crate) fn scalar_arg<'a>(args: &'a [AlgebraElement], i: usize, label: &str) -> Result<&'a PadicNumber> {
    args.get(i)
        .and_then(AlgebraElement::as_scalar)
        .ok_or_else(|| Error::Shape(format!("`{label}` expects scalar arguments")))
}
