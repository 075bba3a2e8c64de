//! Four families of contractive rational maps and the equations built from them.
//!
//! Every constructor checks its hypotheses exactly and then samples the
//! resulting map with [`verify_contraction`] before handing it out.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, ElementShape};
use crate::domain::{in_ep, DomainSpec};
use crate::error::{Error, Result};
use crate::map::{scalar_arg, verify_contraction, ContractiveMap};
use crate::padic::{PadicNumber, Valuation};
use crate::recurrence::{Factor, OffsetRule, RecurrenceSpec};

/// Samples drawn by the constructors' self-check.
pub const CONSTRUCTOR_SAMPLES: usize = 64;
const CONSTRUCTOR_SEED: u64 = 0x5eed;

fn require_odd_prime(prime: u64) -> Result<()> {
    if prime < 3 {
        return Err(Error::domain(format!("the map families need p >= 3, got p = {prime}")));
    }
    Ok(())
}

fn require_ep(name: &str, x: &PadicNumber) -> Result<()> {
    if in_ep(x) {
        Ok(())
    } else {
        Err(Error::domain(format!("parameter {name} = {x} is not in E_p")))
    }
}

fn common_prime<'a>(xs: impl IntoIterator<Item = &'a PadicNumber>) -> Result<u64> {
    let mut iter = xs.into_iter();
    let p = iter.next().ok_or_else(|| Error::invalid("no parameters"))?.prime();
    for x in iter {
        if x.prime() != p {
            return Err(Error::PrimeMismatch(p, x.prime()));
        }
    }
    Ok(p)
}

fn common_digits<'a>(xs: impl IntoIterator<Item = &'a PadicNumber>) -> u32 {
    xs.into_iter().map(PadicNumber::digits).filter(|&d| d > 0).min().unwrap_or(1)
}

fn self_check(map: ContractiveMap) -> Result<ContractiveMap> {
    let report = verify_contraction(&map, CONSTRUCTOR_SAMPLES, CONSTRUCTOR_SEED)?;
    if report.pass {
        Ok(map)
    } else {
        Err(Error::domain(format!(
            "`{}` failed its sampled check: gap {} against declared {}, {} closure violations",
            report.label, report.min_observed_gap, report.declared_exponent, report.closure_violations
        )))
    }
}

/// Parameters of `f(x, y) = (a xy + b(x + y) + c) / (a1 xy + b1(x + y) + c1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusParams {
    pub a: PadicNumber,
    pub b: PadicNumber,
    pub c: PadicNumber,
    pub a1: PadicNumber,
    pub b1: PadicNumber,
    pub c1: PadicNumber,
}

impl MobiusParams {
    pub fn from_integers(values: [i64; 6], prime: u64, digits: u32) -> Result<Self> {
        let n = |v| PadicNumber::from_integer(v, prime, digits);
        Ok(MobiusParams {
            a: n(values[0])?,
            b: n(values[1])?,
            c: n(values[2])?,
            a1: n(values[3])?,
            b1: n(values[4])?,
            c1: n(values[5])?,
        })
    }

    fn named(&self) -> [(&'static str, &PadicNumber); 6] {
        [("a", &self.a), ("b", &self.b), ("c", &self.c), ("a1", &self.a1), ("b1", &self.b1), ("c1", &self.c1)]
    }
}

/// `f(x, y)` on `E_p^2` with contraction exponent 1.
pub fn make_mobius(params: &MobiusParams) -> Result<ContractiveMap> {
    let named = params.named();
    let prime = common_prime(named.iter().map(|(_, x)| *x))?;
    require_odd_prime(prime)?;
    for (name, x) in &named {
        require_ep(name, x)?;
    }
    let digits = common_digits(named.iter().map(|(_, x)| *x));
    let p = params.clone();
    let map = ContractiveMap::new(
        "mobius",
        2,
        ElementShape::Scalar,
        DomainSpec::Ep,
        prime,
        digits,
        1,
        move |args: &[AlgebraElement]| {
            let x = scalar_arg(args, 0, "mobius")?;
            let y = scalar_arg(args, 1, "mobius")?;
            let xy = x.mul(y)?;
            let s = x.add(y)?;
            let num = p.a.mul(&xy)?.add(&p.b.mul(&s)?)?.add(&p.c)?;
            let den = p.a1.mul(&xy)?.add(&p.b1.mul(&s)?)?.add(&p.c1)?;
            Ok(num.div(&den)?.into())
        },
    )?;
    self_check(map)
}

/// Monomial `coefficient * x_1^(e_1) ... x_m^(e_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: PadicNumber,
}

/// `F(x) = (P(x) + C) / (Q(x) + C1)` with `P`, `Q` free of constant terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolyParams {
    pub arity: usize,
    pub degree: u32,
    pub numerator: Vec<Monomial>,
    pub denominator: Vec<Monomial>,
    pub c: PadicNumber,
    pub c1: PadicNumber,
}

fn eval_poly(terms: &[Monomial], xs: &[&PadicNumber], prime: u64) -> Result<PadicNumber> {
    let mut acc = PadicNumber::zero(prime);
    for t in terms {
        let mut term = t.coefficient.clone();
        for (x, &e) in xs.iter().zip(&t.exponents) {
            if e > 0 {
                term = term.mul(&x.pow(e)?)?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `F` on `S(0,1)^m` with contraction exponent 1.
pub fn make_rational_poly(params: &RationalPolyParams) -> Result<ContractiveMap> {
    let m = params.arity;
    if m == 0 {
        return Err(Error::invalid("arity must be at least 1"));
    }
    let coeffs = params.numerator.iter().chain(&params.denominator).map(|t| &t.coefficient);
    let prime = common_prime(coeffs.clone().chain([&params.c, &params.c1]))?;
    require_odd_prime(prime)?;
    for (side, terms) in [("numerator", &params.numerator), ("denominator", &params.denominator)] {
        for t in terms {
            if t.exponents.len() != m {
                return Err(Error::invalid(format!("{side} monomial {:?} needs {m} exponents", t.exponents)));
            }
            let total: u32 = t.exponents.iter().sum();
            if total == 0 || total > params.degree {
                return Err(Error::invalid(format!(
                    "{side} monomial {:?} has total degree {total}, outside 1..={}",
                    t.exponents, params.degree
                )));
            }
            if !t.coefficient.valuation().is_at_least(1) {
                return Err(Error::domain(format!(
                    "{side} coefficient {} of {:?} must have valuation >= 1",
                    t.coefficient, t.exponents
                )));
            }
        }
    }
    for (name, x) in [("C", &params.c), ("C1", &params.c1)] {
        if x.valuation() != Valuation::Finite(0) {
            return Err(Error::domain(format!("{name} = {x} must have norm 1")));
        }
    }
    let digits = common_digits(coeffs.chain([&params.c, &params.c1]));
    let p = params.clone();
    let map = ContractiveMap::new(
        "ratpoly",
        m,
        ElementShape::Scalar,
        DomainSpec::UnitSphere,
        prime,
        digits,
        1,
        move |args: &[AlgebraElement]| {
            let xs = (0..args.len()).map(|i| scalar_arg(args, i, "ratpoly")).collect::<Result<Vec<_>>>()?;
            let num = eval_poly(&p.numerator, &xs, prime)?.add(&p.c)?;
            let den = eval_poly(&p.denominator, &xs, prime)?.add(&p.c1)?;
            Ok(num.div(&den)?.into())
        },
    )?;
    self_check(map)
}

/// `f(x)_k = (sum_j a[k][j] x_j + a0[k]) / (sum_j b[k][j] x_j + b0[k])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFractionalParams {
    pub a: Vec<Vec<PadicNumber>>,
    pub a0: Vec<PadicNumber>,
    pub b: Vec<Vec<PadicNumber>>,
    pub b0: Vec<PadicNumber>,
}

impl LinearFractionalParams {
    /// Every entry equal to `value`.
    pub fn filled(m: usize, value: &PadicNumber) -> Self {
        let row = vec![value.clone(); m];
        LinearFractionalParams { a: vec![row.clone(); m], a0: row.clone(), b: vec![row.clone(); m], b0: row }
    }

    pub fn dimension(&self) -> usize {
        self.a0.len()
    }
}

/// `f` on `E_p^m` (vector shape, arity 1) with contraction exponent 1.
pub fn make_linear_fractional(params: &LinearFractionalParams) -> Result<ContractiveMap> {
    let m = params.dimension();
    if m == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    for (name, rows) in [("a", &params.a), ("b", &params.b)] {
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::invalid(format!("{name} must be a {m}x{m} matrix")));
        }
    }
    if params.b0.len() != m {
        return Err(Error::invalid(format!("b0 must have {m} entries")));
    }
    let entries: Vec<(String, &PadicNumber)> = (0..m)
        .flat_map(|k| {
            (0..m).flat_map(move |j| {
                [(format!("a[{k}][{j}]"), &params.a[k][j]), (format!("b[{k}][{j}]"), &params.b[k][j])]
            })
        })
        .chain((0..m).flat_map(|k| [(format!("a0[{k}]"), &params.a0[k]), (format!("b0[{k}]"), &params.b0[k])]))
        .collect();
    let prime = common_prime(entries.iter().map(|(_, x)| *x))?;
    require_odd_prime(prime)?;
    if (m as u64 + 1).is_multiple_of(prime) {
        return Err(Error::domain(format!("p = {prime} divides m + 1 = {}", m + 1)));
    }
    for (name, x) in &entries {
        require_ep(name, x)?;
    }
    let digits = common_digits(entries.iter().map(|(_, x)| *x));
    let p = params.clone();
    let map = ContractiveMap::new(
        "linfrac",
        1,
        ElementShape::Vector(m),
        DomainSpec::Ep,
        prime,
        digits,
        1,
        move |args: &[AlgebraElement]| {
            let x = match args.first() {
                Some(AlgebraElement::Vector(v)) if v.len() == m => v,
                _ => return Err(Error::Shape(format!("`linfrac` expects a vector of length {m}"))),
            };
            let comps = (0..m)
                .map(|k| {
                    let mut num = p.a0[k].clone();
                    let mut den = p.b0[k].clone();
                    for ((aj, bj), xj) in p.a[k].iter().zip(&p.b[k]).zip(x) {
                        num = num.add(&aj.mul(xj)?)?;
                        den = den.add(&bj.mul(xj)?)?;
                    }
                    num.div(&den)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AlgebraElement::Vector(comps))
        },
    )?;
    self_check(map)
}

type InnerFn = dyn Fn(&[PadicNumber], usize) -> Result<PadicNumber> + Send + Sync;

/// The functions `f_k` inside the sequence map. Each must have norm 1 and be
/// 1-Lipschitz on the unit ball.
#[derive(Clone)]
pub enum InnerFamily {
    /// `f_k(x) = p * sum_j x_j + 1`.
    Km2009,
    /// `f_k(x) = sum_j weights[j] x_j + constant`.
    Affine { weights: Vec<PadicNumber>, constant: PadicNumber },
    /// `f(x, k)` with 0-based `k`.
    Custom(Arc<InnerFn>),
}

impl fmt::Debug for InnerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InnerFamily::Km2009 => f.write_str("Km2009"),
            InnerFamily::Affine { weights, constant } => {
                f.debug_struct("Affine").field("weights", weights).field("constant", constant).finish()
            }
            InnerFamily::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl InnerFamily {
    fn eval(&self, x: &[PadicNumber], k: usize, prime: u64, digits: u32) -> Result<PadicNumber> {
        match self {
            InnerFamily::Km2009 => {
                let mut s = PadicNumber::zero(prime);
                for xj in x {
                    s = s.add(xj)?;
                }
                s.mul(&PadicNumber::from_integer(prime as i64, prime, digits)?)?.add(&PadicNumber::one(prime, digits))
            }
            InnerFamily::Affine { weights, constant } => {
                let mut s = constant.clone();
                for (w, xj) in weights.iter().zip(x) {
                    s = s.add(&w.mul(xj)?)?;
                }
                Ok(s)
            }
            InnerFamily::Custom(f) => f(x, k),
        }
    }
}

/// `(F(x))_k = lambda_k (a x_k + f_k(x)) / (b + f_k(x))` on truncated sequences.
#[derive(Clone, Debug)]
pub struct SeqMapParams {
    pub lambda: Vec<PadicNumber>,
    pub a: PadicNumber,
    pub b: PadicNumber,
    pub inner: InnerFamily,
    /// Number of shifted factors in [`shifted_product_map`].
    pub shifts: usize,
}

impl SeqMapParams {
    /// `a = p(theta - 1)`, `b = theta - 1`, `f_k(x) = p sum_j x_j + 1`, `lambda = 1`.
    pub fn km2009(theta: &PadicNumber, truncation: usize, shifts: usize) -> Result<Self> {
        require_ep("theta", theta)?;
        let prime = theta.prime();
        let digits = theta.digits();
        let b = theta.sub(&PadicNumber::one(prime, digits))?;
        let a = b.mul(&PadicNumber::from_integer(prime as i64, prime, digits)?)?;
        Ok(SeqMapParams {
            lambda: vec![PadicNumber::one(prime, digits); truncation],
            a,
            b,
            inner: InnerFamily::Km2009,
            shifts,
        })
    }

    pub fn truncation(&self) -> usize {
        self.lambda.len()
    }
}

struct SeqSetup {
    prime: u64,
    digits: u32,
    exponent: u32,
}

fn seq_setup(params: &SeqMapParams) -> Result<SeqSetup> {
    let t = params.truncation();
    if t == 0 {
        return Err(Error::invalid("truncation length must be at least 1"));
    }
    let mut all: Vec<&PadicNumber> = params.lambda.iter().chain([&params.a, &params.b]).collect();
    if let InnerFamily::Affine { weights, constant } = &params.inner {
        if weights.len() != t {
            return Err(Error::invalid(format!("affine inner family needs {t} weights")));
        }
        all.extend(weights.iter().chain([constant]));
    }
    let prime = common_prime(all.iter().copied())?;
    require_odd_prime(prime)?;
    if let Some(l) = params.lambda.iter().find(|l| !l.valuation().is_at_least(0)) {
        return Err(Error::domain(format!("lambda entry {l} has norm > 1")));
    }
    for (name, x) in [("a", &params.a), ("b", &params.b)] {
        if !x.valuation().is_at_least(1) {
            return Err(Error::domain(format!("{name} = {x} must satisfy |{name}|_p < 1")));
        }
    }
    let digits = common_digits(all.iter().copied());
    let exponent = match params.a.valuation().min(params.b.valuation()) {
        Valuation::Finite(v) => v as u32,
        Valuation::Infinite => digits,
    };
    if let InnerFamily::Affine { weights, constant } = &params.inner {
        if weights.iter().any(|w| !w.valuation().is_at_least(1)) || constant.valuation() != Valuation::Finite(0) {
            return Err(Error::domain("affine inner family needs weights of valuation >= 1 and a unit constant"));
        }
    }
    if let InnerFamily::Custom(_) = params.inner {
        check_inner_family(&params.inner, t, prime, digits)?;
    }
    Ok(SeqSetup { prime, digits, exponent })
}

/// Samples `|f_k| = 1` and `|f_k(x) - f_k(y)| <= ||x - y||` on the unit ball.
fn check_inner_family(inner: &InnerFamily, t: usize, prime: u64, digits: u32) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(CONSTRUCTOR_SEED);
    let shape = ElementShape::Seq(t);
    for _ in 0..CONSTRUCTOR_SAMPLES {
        let x = DomainSpec::UnitBall.sample(shape, prime, digits, &mut rng);
        let y = DomainSpec::UnitBall.perturb(&x, &mut rng);
        let dist = x.sub(&y)?.valuation();
        for k in 0..t {
            let fx = inner.eval(x.components(), k, prime, digits)?;
            let fy = inner.eval(y.components(), k, prime, digits)?;
            if fx.valuation() != Valuation::Finite(0) {
                return Err(Error::domain(format!("inner function f_{} has norm != 1 at a sampled point", k + 1)));
            }
            if fx.sub(&fy)?.valuation() < dist {
                return Err(Error::domain(format!("inner function f_{} is not 1-Lipschitz", k + 1)));
            }
        }
    }
    Ok(())
}

fn seq_apply(params: &SeqMapParams, x: &[PadicNumber], prime: u64, digits: u32) -> Result<Vec<PadicNumber>> {
    (0..x.len())
        .map(|k| {
            let f = params.inner.eval(x, k, prime, digits)?;
            let num = params.a.mul(&x[k])?.add(&f)?;
            let den = params.b.add(&f)?;
            params.lambda[k].mul(&num.div(&den)?)
        })
        .collect()
}

fn seq_arg<'a>(args: &'a [AlgebraElement], t: usize, label: &str) -> Result<&'a [PadicNumber]> {
    match args.first() {
        Some(AlgebraElement::Seq(v)) if v.len() == t => Ok(v),
        _ => Err(Error::Shape(format!("`{label}` expects a sequence of length {t}"))),
    }
}

/// The sequence map on the unit ball of `c0` truncated at `T = lambda.len()`,
/// with contraction exponent `min(v(a), v(b))`.
pub fn make_seq_map(params: &SeqMapParams) -> Result<ContractiveMap> {
    let SeqSetup { prime, digits, exponent } = seq_setup(params)?;
    let t = params.truncation();
    let label = if matches!(params.inner, InnerFamily::Km2009) { "seqmap-km2009" } else { "seqmap" };
    let p = params.clone();
    let map = ContractiveMap::new(
        label,
        1,
        ElementShape::Seq(t),
        DomainSpec::UnitBall,
        prime,
        digits,
        exponent,
        move |args: &[AlgebraElement]| {
            let x = seq_arg(args, t, "seqmap")?;
            Ok(AlgebraElement::Seq(seq_apply(&p, x, prime, digits)?))
        },
    )?;
    self_check(map)
}

/// `sigma(x)_k = x_(k+1)`, with the last slot set to 0.
pub fn shift(x: &AlgebraElement) -> Result<AlgebraElement> {
    match x {
        AlgebraElement::Seq(v) => {
            let mut out: Vec<PadicNumber> = v.iter().skip(1).cloned().collect();
            if let Some(p) = x.prime() {
                out.push(PadicNumber::zero(p));
            }
            Ok(AlgebraElement::Seq(out))
        }
        _ => Err(Error::Shape("shift is defined on sequences only".into())),
    }
}

/// `x -> prod_{j=1..N} sigma^j(F(x))` with `N = params.shifts`.
pub fn shifted_product_map(params: &SeqMapParams) -> Result<ContractiveMap> {
    if params.shifts == 0 {
        return Err(Error::invalid("the number of shifts must be at least 1"));
    }
    let SeqSetup { prime, digits, exponent } = seq_setup(params)?;
    let t = params.truncation();
    let p = params.clone();
    let map = ContractiveMap::new(
        "shiftprod",
        1,
        ElementShape::Seq(t),
        DomainSpec::UnitBall,
        prime,
        digits,
        exponent,
        move |args: &[AlgebraElement]| {
            let x = seq_arg(args, t, "shiftprod")?;
            let mut shifted = AlgebraElement::Seq(seq_apply(&p, x, prime, digits)?);
            let mut factors = Vec::with_capacity(p.shifts);
            for _ in 0..p.shifts {
                shifted = shift(&shifted)?;
                factors.push(shifted.clone());
            }
            AlgebraElement::product(&factors)
        },
    )?;
    self_check(map)
}

/// `X_{n+2m} = F(X_n..X_{n+m-1}) F(X_{n+1}..X_{n+m}) F(X_{n+m}..X_{n+2m-1})`,
/// whose limit solves `X = F(X, ..., X)^3`. Needs `m >= 2`.
pub fn triple_product_recurrence(f: &ContractiveMap) -> Result<RecurrenceSpec> {
    let m = f.arity();
    if m < 2 {
        return Err(Error::invalid("the triple-product recurrence needs arity m >= 2"));
    }
    let factors = [0, 1, m].into_iter().map(|offset| Factor::new(f.clone(), offset)).collect();
    RecurrenceSpec::new(vec![factors], OffsetRule::Relaxed { min_gap: 1 })
}
