//! Recurrence iterations built from products of contractive maps.
//!
//! A [`RecurrenceSpec`] describes
//!
//! ```text
//! x_{n+L} = sum_k prod_i f_i^(k)(x_{n+l_i^(k)}, ..., x_{n+l_i^(k)+m-1})
//! ```
//!
//! and [`solve_recurrence`] iterates it until successive iterates agree to
//! the requested valuation and the limit solves the fixed-point equation
//! `x = sum_k prod_i f_i^(k)(x, ..., x)` to the same valuation.
//!
//! With every factor contracting by `p^-k`, an iterate depends on the `L`
//! values before it, so the distance to the limit gains `k` valuation every
//! `L` steps: `v(x_{n+L} - x*) >= k * ceil(n / L)` for unit-ball initials.

use serde::Serialize;

use crate::algebra::{AlgebraElement, ElementShape};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::map::ContractiveMap;
use crate::padic::Valuation;

pub const DEFAULT_MAX_ITER: usize = 512;
/// Digits kept in reserve above the target valuation.
pub const DEFAULT_SAFETY_MARGIN: u32 = 4;

/// Admissible spacing between consecutive offsets `l_{i-1}, l_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OffsetRule {
    /// `2 <= l_i - l_{i-1} <= m - 1`.
    #[default]
    Strict,
    /// `min_gap <= l_i - l_{i-1} <= max(m - 1, min_gap)`.
    Relaxed { min_gap: usize },
}

impl OffsetRule {
    fn bounds(self, window: usize) -> (usize, usize) {
        match self {
            OffsetRule::Strict => (2, window.saturating_sub(1)),
            OffsetRule::Relaxed { min_gap } => (min_gap, window.saturating_sub(1).max(min_gap)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub map: ContractiveMap,
    pub offset: usize,
}

impl Factor {
    pub fn new(map: ContractiveMap, offset: usize) -> Self {
        Factor { map, offset }
    }
}

#[derive(Clone, Debug)]
pub struct RecurrenceSpec {
    terms: Vec<Vec<Factor>>,
    window: usize,
    lookback: usize,
    domain: DomainSpec,
    shape: ElementShape,
    prime: u64,
    digits: u32,
    contraction_exponent: u32,
}

impl RecurrenceSpec {
    /// Validates the offsets and the map family. Each inner vector is one
    /// summand; its factors carry their offsets, the first of which must be 0.
    pub fn new(terms: Vec<Vec<Factor>>, rule: OffsetRule) -> Result<Self> {
        let first = terms
            .first()
            .and_then(|t| t.first())
            .ok_or_else(|| Error::invalid("a recurrence needs at least one term with one factor"))?;
        let window = first.map.arity();
        let domain = first.map.domain().clone();
        let shape = first.map.shape();
        let prime = first.map.prime();
        let (lo, hi) = rule.bounds(window);
        let mut max_last = 0;
        for (k, term) in terms.iter().enumerate() {
            if term.is_empty() {
                return Err(Error::invalid(format!("term {} has no factors", k + 1)));
            }
            if term[0].offset != 0 {
                return Err(Error::invalid(format!("term {}: first offset must be 0", k + 1)));
            }
            for pair in term.windows(2) {
                let gap = pair[1]
                    .offset
                    .checked_sub(pair[0].offset)
                    .ok_or_else(|| Error::invalid(format!("term {}: offsets must be nondecreasing", k + 1)))?;
                if gap < lo || gap > hi {
                    return Err(Error::invalid(format!(
                        "term {}: offset gap {gap} outside [{lo}, {hi}] for window {window}",
                        k + 1
                    )));
                }
            }
            for f in term {
                let m = &f.map;
                if m.arity() != window {
                    return Err(Error::invalid(format!(
                        "map `{}` has arity {}, expected {window}",
                        m.label(),
                        m.arity()
                    )));
                }
                if m.domain() != &domain || m.shape() != shape {
                    return Err(Error::invalid(format!("map `{}` uses a different domain or shape", m.label())));
                }
                if m.prime() != prime {
                    return Err(Error::PrimeMismatch(prime, m.prime()));
                }
            }
            max_last = max_last.max(term.last().expect("nonempty").offset);
        }
        let maps = terms.iter().flatten().map(|f| &f.map);
        let contraction_exponent = maps.clone().map(ContractiveMap::contraction_exponent).min().expect("nonempty");
        let digits = maps.map(ContractiveMap::digits).min().expect("nonempty");
        Ok(RecurrenceSpec {
            lookback: max_last + window,
            terms,
            window,
            domain,
            shape,
            prime,
            digits,
            contraction_exponent,
        })
    }

    /// `x_{n+m} = f(x_n, ..., x_{n+m-1})`.
    pub fn single(map: ContractiveMap) -> Self {
        RecurrenceSpec::new(vec![vec![Factor::new(map, 0)]], OffsetRule::Strict).expect("one factor is always valid")
    }

    /// `x_{n+m} = f(x_n, ..., x_{n+m-1})^power`, whose limit solves `x = f(x, ..., x)^power`.
    pub fn power(map: ContractiveMap, power: usize) -> Result<Self> {
        if power == 0 {
            return Err(Error::invalid("power must be at least 1"));
        }
        let factors = (0..power).map(|_| Factor::new(map.clone(), 0)).collect();
        RecurrenceSpec::new(vec![factors], OffsetRule::Relaxed { min_gap: 0 })
    }

    pub fn terms(&self) -> &[Vec<Factor>] {
        &self.terms
    }

    /// Width `m` of each factor's argument window.
    pub fn window(&self) -> usize {
        self.window
    }

    /// Number of initial values `L = max_k l_N^(k) + m`.
    pub fn lookback(&self) -> usize {
        self.lookback
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn shape(&self) -> ElementShape {
        self.shape
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// `k` with `alpha = p^-k` the largest contraction factor in the family.
    pub fn contraction_exponent(&self) -> u32 {
        self.contraction_exponent
    }

    /// Right-hand side evaluated on `window[0..L]`, which holds `x_n, ..., x_{n+L-1}`.
    fn rhs(&self, window: &[AlgebraElement]) -> Result<AlgebraElement> {
        let summands = self
            .terms
            .iter()
            .map(|term| {
                let values = term
                    .iter()
                    .map(|f| f.map.eval(&window[f.offset..f.offset + self.window]))
                    .collect::<Result<Vec<_>>>()?;
                AlgebraElement::product(&values)
            })
            .collect::<Result<Vec<_>>>()?;
        AlgebraElement::sum(&summands)
    }

    /// `sum_k prod_i f_i^(k)(x, ..., x)`.
    pub fn diagonal(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let window = vec![x.clone(); self.lookback];
        self.rhs(&window)
    }
}

/// One application of the recurrence: `x_{n+L}` from `window = [x_n, ..., x_{n+L-1}]`.
/// `n` is the 1-based index of the first window entry, used in error reports.
pub fn step(spec: &RecurrenceSpec, window: &[AlgebraElement], n: usize) -> Result<AlgebraElement> {
    if window.len() < spec.lookback {
        return Err(Error::invalid(format!("window holds {} values, {} needed", window.len(), spec.lookback)));
    }
    for (j, x) in window[..spec.lookback].iter().enumerate() {
        if !spec.domain.contains(x) {
            return Err(Error::DomainAt { index: n + j, reason: format!("{x} is not in {}", spec.domain.name()) });
        }
    }
    spec.rhs(window)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub target_valuation: i64,
    pub max_iter: usize,
    pub safety_margin: u32,
}

impl SolveOptions {
    pub fn new(target_valuation: i64) -> Self {
        SolveOptions { target_valuation, max_iter: DEFAULT_MAX_ITER, safety_margin: DEFAULT_SAFETY_MARGIN }
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn safety_margin(mut self, margin: u32) -> Self {
        self.safety_margin = margin;
        self
    }

    fn check(&self, digits: u32) -> Result<()> {
        if self.target_valuation < 0 {
            return Err(Error::invalid("target valuation must be nonnegative"));
        }
        if self.target_valuation + self.safety_margin as i64 > digits as i64 {
            return Err(Error::precision(format!(
                "target {} plus margin {} exceeds the working precision of {digits} digits",
                self.target_valuation, self.safety_margin
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceCertificate {
    pub iterations: usize,
    #[serde(serialize_with = "crate::json::serialize_element")]
    pub limit: AlgebraElement,
    /// `v(x* - RHS(x*))` at the reported limit.
    #[serde(serialize_with = "crate::json::serialize_valuation")]
    pub residual_valuation: Valuation,
    /// Valuation the contraction argument guarantees for `x_{n+L} - x*`
    /// after the last iteration `n`.
    pub guaranteed_valuation: i64,
    /// `(n, v(x_{n+L} - x_{n+L-1}))` for each iteration.
    #[serde(serialize_with = "crate::json::serialize_trace")]
    pub trace: Vec<(usize, Valuation)>,
    #[serde(skip)]
    pub sequence: Vec<AlgebraElement>,
    #[serde(skip)]
    pub lookback: usize,
    #[serde(skip)]
    pub contraction_exponent: u32,
}

impl ConvergenceCertificate {
    /// `(j, v(x_j - x*))` for every stored iterate, 1-based.
    pub fn limit_gaps(&self) -> Result<Vec<(usize, Valuation)>> {
        self.sequence.iter().enumerate().map(|(j, x)| Ok((j + 1, x.sub(&self.limit)?.valuation()))).collect()
    }

    /// The rate bound `v(x_{n+L} - x*) >= k * ceil(n / L)` on every stored iterate.
    pub fn rate_bound_holds(&self) -> Result<bool> {
        let gaps = self.limit_gaps()?;
        let l = self.lookback;
        let k = self.contraction_exponent as i64;
        Ok(gaps.iter().filter(|(j, _)| *j > l).all(|(j, v)| v.is_at_least(k * guaranteed_steps(j - l, l))))
    }
}

/// `ceil(n / lookback)`: number of full contraction rounds after `n` steps.
pub fn guaranteed_steps(n: usize, lookback: usize) -> i64 {
    n.div_ceil(lookback.max(1)) as i64
}

/// Iterates the recurrence from `initial` (only the first `L` values are used)
/// until both the Cauchy gap and the fixed-point residual reach the target.
pub fn solve_recurrence(
    spec: &RecurrenceSpec,
    initial: &[AlgebraElement],
    options: SolveOptions,
) -> Result<ConvergenceCertificate> {
    options.check(spec.digits)?;
    let l = spec.lookback;
    if initial.len() < l {
        return Err(Error::invalid(format!("{} initial values given, {l} needed", initial.len())));
    }
    let mut seq: Vec<AlgebraElement> = Vec::with_capacity(l + options.max_iter);
    for (j, x) in initial[..l].iter().enumerate() {
        if x.shape() != spec.shape {
            return Err(Error::Shape(format!("initial value {} has shape {:?}", j + 1, x.shape())));
        }
        if !spec.domain.contains(x) {
            return Err(Error::DomainAt { index: j + 1, reason: format!("{x} is not in {}", spec.domain.name()) });
        }
        seq.push(x.clone());
    }
    let target = options.target_valuation;
    let mut trace = Vec::new();
    for n in 1..=options.max_iter {
        let next = spec.rhs(&seq[n - 1..n - 1 + l])?;
        if !spec.domain.contains(&next) {
            return Err(Error::DomainAt { index: n + l, reason: format!("{next} is not in {}", spec.domain.name()) });
        }
        let gap = next.sub(seq.last().expect("nonempty"))?;
        trace.push((n, gap.valuation()));
        seq.push(next);
        if gap.meets(target)? {
            let limit = seq.last().expect("nonempty").clone();
            let residual = limit.sub(&spec.diagonal(&limit)?)?;
            if residual.meets(target)? {
                return Ok(ConvergenceCertificate {
                    iterations: n,
                    limit,
                    residual_valuation: residual.valuation(),
                    guaranteed_valuation: spec.contraction_exponent as i64 * guaranteed_steps(n, l),
                    trace,
                    sequence: seq,
                    lookback: l,
                    contraction_exponent: spec.contraction_exponent,
                });
            }
        }
    }
    Err(Error::MaxIterations(options.max_iter))
}

/// Solves `x = f(x, ..., x)^power` by iterating `x_{n+m} = f(x_n, ..., x_{n+m-1})^power`
/// from the domain's canonical point.
pub fn solve_power_fixed_point(
    f: &ContractiveMap,
    power: usize,
    options: SolveOptions,
) -> Result<ConvergenceCertificate> {
    let spec = RecurrenceSpec::power(f.clone(), power)?;
    let start = f.domain().canonical_point(f.shape(), f.prime(), f.digits());
    let initial = vec![start; spec.lookback()];
    solve_recurrence(&spec, &initial, options)
}

/// Three coupled sequences updated in staggered order:
///
/// ```text
/// x_{n+1} = sum_k F1(x_n, y_n)         F2(y_n, z_n)
/// y_{n+1} = sum_k G1(x_{n+1}, y_n)     G2(y_n, z_n)
/// z_{n+1} = sum_k H1(x_{n+1}, y_{n+1}) H2(y_{n+1}, z_n)
/// ```
#[derive(Clone, Debug)]
pub struct CoupledSpec {
    f: Vec<(ContractiveMap, ContractiveMap)>,
    g: Vec<(ContractiveMap, ContractiveMap)>,
    h: Vec<(ContractiveMap, ContractiveMap)>,
    domain: DomainSpec,
    digits: u32,
    contraction_exponent: u32,
}

type PairFamily = Vec<(ContractiveMap, ContractiveMap)>;

impl CoupledSpec {
    pub fn new(f: PairFamily, g: PairFamily, h: PairFamily) -> Result<Self> {
        let all: Vec<&ContractiveMap> = f.iter().chain(&g).chain(&h).flat_map(|(a, b)| [a, b]).collect();
        if f.is_empty() || g.is_empty() || h.is_empty() {
            return Err(Error::invalid("each of the three families needs at least one pair"));
        }
        let domain = all[0].domain().clone();
        let prime = all[0].prime();
        for m in &all {
            if m.arity() != 2 {
                return Err(Error::invalid(format!("map `{}` must take two arguments", m.label())));
            }
            if m.domain() != &domain {
                return Err(Error::invalid(format!("map `{}` uses a different domain", m.label())));
            }
            if m.prime() != prime {
                return Err(Error::PrimeMismatch(prime, m.prime()));
            }
        }
        let contraction_exponent = all.iter().map(|m| m.contraction_exponent()).min().expect("nonempty");
        let digits = all.iter().map(|m| m.digits()).min().expect("nonempty");
        Ok(CoupledSpec { f, g, h, domain, digits, contraction_exponent })
    }

    /// The same family for all three equations.
    pub fn symmetric(family: PairFamily) -> Result<Self> {
        CoupledSpec::new(family.clone(), family.clone(), family)
    }

    pub fn contraction_exponent(&self) -> u32 {
        self.contraction_exponent
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    fn apply(
        family: &[(ContractiveMap, ContractiveMap)],
        first: (&AlgebraElement, &AlgebraElement),
        second: (&AlgebraElement, &AlgebraElement),
    ) -> Result<AlgebraElement> {
        let summands = family
            .iter()
            .map(|(a, b)| {
                let u = a.eval(&[first.0.clone(), first.1.clone()])?;
                let v = b.eval(&[second.0.clone(), second.1.clone()])?;
                u.mul(&v)
            })
            .collect::<Result<Vec<_>>>()?;
        AlgebraElement::sum(&summands)
    }

    /// One staggered update.
    pub fn step(&self, x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<[AlgebraElement; 3]> {
        let x1 = Self::apply(&self.f, (x, y), (y, z))?;
        let y1 = Self::apply(&self.g, (&x1, y), (y, z))?;
        let z1 = Self::apply(&self.h, (&x1, &y1), (&y1, z))?;
        Ok([x1, y1, z1])
    }

    /// Residuals of the limiting system `x = F(x,y)F(y,z)`, `y = G(x,y)G(y,z)`, `z = H(x,y)H(y,z)`.
    pub fn residuals(&self, x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<[AlgebraElement; 3]> {
        Ok([
            x.sub(&Self::apply(&self.f, (x, y), (y, z))?)?,
            y.sub(&Self::apply(&self.g, (x, y), (y, z))?)?,
            z.sub(&Self::apply(&self.h, (x, y), (y, z))?)?,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoupledCertificate {
    pub iterations: usize,
    /// `(n, v(d_n))` with `d_n = max(||x_{n+1}-x_n||, ||y_{n+1}-y_n||, ||z_{n+1}-z_n||)`.
    #[serde(serialize_with = "crate::json::serialize_trace")]
    pub d_trace: Vec<(usize, Valuation)>,
    pub x: ConvergenceCertificate,
    pub y: ConvergenceCertificate,
    pub z: ConvergenceCertificate,
}

/// Iterates the staggered system until `d_n` and all three residuals reach the target.
pub fn solve_coupled(
    spec: &CoupledSpec,
    initial: (&AlgebraElement, &AlgebraElement, &AlgebraElement),
    options: SolveOptions,
) -> Result<CoupledCertificate> {
    options.check(spec.digits)?;
    let target = options.target_valuation;
    let mut seqs: [Vec<AlgebraElement>; 3] =
        [vec![initial.0.clone()], vec![initial.1.clone()], vec![initial.2.clone()]];
    for (i, s) in seqs.iter().enumerate() {
        if !spec.domain.contains(&s[0]) {
            return Err(Error::DomainAt {
                index: 1,
                reason: format!("initial component {} = {} is not in {}", i + 1, s[0], spec.domain.name()),
            });
        }
    }
    let mut traces: [Vec<(usize, Valuation)>; 3] = Default::default();
    let mut d_trace = Vec::new();
    for n in 1..=options.max_iter {
        let next = spec.step(seqs[0].last().unwrap(), seqs[1].last().unwrap(), seqs[2].last().unwrap())?;
        let mut diffs = Vec::with_capacity(3);
        for (i, value) in next.into_iter().enumerate() {
            if !spec.domain.contains(&value) {
                return Err(Error::DomainAt {
                    index: n + 1,
                    reason: format!("component {} = {value} left {}", i + 1, spec.domain.name()),
                });
            }
            let d = value.sub(seqs[i].last().unwrap())?;
            traces[i].push((n, d.valuation()));
            seqs[i].push(value);
            diffs.push(d);
        }
        d_trace.push((n, diffs.iter().map(AlgebraElement::valuation).min().expect("three")));
        let mut settled = true;
        for d in &diffs {
            settled &= d.meets(target)?;
        }
        if !settled {
            continue;
        }
        let limits =
            [seqs[0].last().unwrap().clone(), seqs[1].last().unwrap().clone(), seqs[2].last().unwrap().clone()];
        let residuals = spec.residuals(&limits[0], &limits[1], &limits[2])?;
        let mut solved = true;
        for r in &residuals {
            solved &= r.meets(target)?;
        }
        if solved {
            let k = spec.contraction_exponent;
            let [sx, sy, sz] = seqs;
            let [tx, ty, tz] = traces;
            let [rx, ry, rz] = residuals;
            let [lx, ly, lz] = limits;
            let make = |limit, residual: AlgebraElement, trace, sequence| ConvergenceCertificate {
                iterations: n,
                limit,
                residual_valuation: residual.valuation(),
                guaranteed_valuation: k as i64 * (n as i64 - 1),
                trace,
                sequence,
                lookback: 1,
                contraction_exponent: k,
            };
            return Ok(CoupledCertificate {
                iterations: n,
                d_trace,
                x: make(lx, rx, tx, sx),
                y: make(ly, ry, ty, sy),
                z: make(lz, rz, tz, sz),
            });
        }
    }
    Err(Error::MaxIterations(options.max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Qp;

    fn constant(q: Qp, arity: usize, value: i64) -> ContractiveMap {
        ContractiveMap::constant(arity, DomainSpec::Ep, q.int(value).into(), q.digits()).unwrap()
    }

    #[test]
    fn offsets_validated() {
        let q = Qp::new(5, 20).unwrap();
        let f = constant(q, 4, 6);
        // gaps of 2 and 3 are fine for m = 4, L = 5 + 4
        let spec = RecurrenceSpec::new(
            vec![vec![Factor::new(f.clone(), 0), Factor::new(f.clone(), 2), Factor::new(f.clone(), 5)]],
            OffsetRule::Strict,
        )
        .unwrap();
        assert_eq!(spec.lookback(), 9);
        // gap 1 violates the strict rule but passes the relaxed one
        let adjacent = vec![vec![Factor::new(f.clone(), 0), Factor::new(f.clone(), 1)]];
        assert!(RecurrenceSpec::new(adjacent.clone(), OffsetRule::Strict).is_err());
        assert!(RecurrenceSpec::new(adjacent, OffsetRule::Relaxed { min_gap: 1 }).is_ok());
        // gap 4 > m - 1
        assert!(RecurrenceSpec::new(
            vec![vec![Factor::new(f.clone(), 0), Factor::new(f.clone(), 4)]],
            OffsetRule::Strict
        )
        .is_err());
        // nonzero first offset
        assert!(RecurrenceSpec::new(vec![vec![Factor::new(f, 1)]], OffsetRule::Strict).is_err());
    }

    #[test]
    fn constant_step_and_solve() {
        let q = Qp::new(5, 20).unwrap();
        let spec = RecurrenceSpec::single(constant(q, 1, 6));
        let window = vec![AlgebraElement::from(q.int(11))];
        assert_eq!(step(&spec, &window, 1).unwrap(), AlgebraElement::from(q.int(6)));
        let cert = solve_recurrence(&spec, &window, SolveOptions::new(10)).unwrap();
        assert_eq!(cert.limit, AlgebraElement::from(q.int(6)));
        assert_eq!(cert.iterations, 2);
        let cert = solve_recurrence(&spec, &[q.int(6).into()], SolveOptions::new(10)).unwrap();
        assert_eq!(cert.iterations, 1);
    }

    #[test]
    fn window_outside_domain() {
        let q = Qp::new(5, 20).unwrap();
        let spec = RecurrenceSpec::single(constant(q, 2, 6));
        let window = vec![AlgebraElement::from(q.int(1)), AlgebraElement::from(q.int(2))];
        assert_eq!(
            step(&spec, &window, 7).unwrap_err(),
            Error::DomainAt { index: 8, reason: format!("{} is not in E_p", q.int(2)) }
        );
        assert!(matches!(
            solve_recurrence(&spec, &window, SolveOptions::new(5)),
            Err(Error::DomainAt { index: 2, .. })
        ));
    }

    #[test]
    fn target_needs_headroom() {
        let q = Qp::new(5, 20).unwrap();
        let spec = RecurrenceSpec::single(constant(q, 1, 6));
        let init = vec![AlgebraElement::from(q.int(1))];
        assert!(matches!(solve_recurrence(&spec, &init, SolveOptions::new(17)), Err(Error::Precision(_))));
        assert!(solve_recurrence(&spec, &init, SolveOptions::new(16)).is_ok());
    }

    #[test]
    fn power_fixed_point_of_constant() {
        let q = Qp::new(5, 20).unwrap();
        let c = solve_power_fixed_point(&constant(q, 1, 6), 1, SolveOptions::new(10)).unwrap();
        assert_eq!(c.limit, AlgebraElement::from(q.int(6)));
        let c = solve_power_fixed_point(&constant(q, 2, 6), 3, SolveOptions::new(10)).unwrap();
        assert_eq!(c.limit, AlgebraElement::from(q.int(216)));
    }

    #[test]
    fn coupled_constants_settle_after_one_step() {
        let q = Qp::new(5, 20).unwrap();
        let c = constant(q, 2, 6);
        let spec = CoupledSpec::symmetric(vec![(c.clone(), c)]).unwrap();
        let one = AlgebraElement::from(q.int(36));
        let cert = solve_coupled(&spec, (&one, &one, &one), SolveOptions::new(10)).unwrap();
        assert_eq!(cert.iterations, 1);
        assert_eq!(cert.x.limit, one);
        assert_eq!(cert.d_trace, vec![(1, Valuation::Infinite)]);
    }

    #[test]
    fn max_iterations_reported() {
        let q = Qp::new(5, 40).unwrap();
        let p = q.int(5);
        let one = q.int(1);
        // x -> 1 + 5(x - 1) converges one digit per step
        let f = ContractiveMap::new(
            "slow",
            1,
            ElementShape::Scalar,
            DomainSpec::Ep,
            5,
            40,
            1,
            move |a: &[AlgebraElement]| {
                let x = a[0].as_scalar().unwrap();
                Ok(one.add(&x.sub(&one)?.mul(&p)?)?.into())
            },
        )
        .unwrap();
        let spec = RecurrenceSpec::single(f);
        let init = vec![AlgebraElement::from(q.int(6))];
        assert_eq!(solve_recurrence(&spec, &init, SolveOptions::new(30).max_iter(5)), Err(Error::MaxIterations(5)));
        let cert = solve_recurrence(&spec, &init, SolveOptions::new(30)).unwrap();
        assert!(cert.rate_bound_holds().unwrap());
    }
}
