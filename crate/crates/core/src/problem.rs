//! JSON problem specifications and their translation into solver inputs.
//!
//! Parsing is strict: unknown fields are rejected and every error names the
//! offending field path.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::algebra::{AlgebraElement, ElementShape};
use crate::applications::{
    make_linear_fractional, make_mobius, make_rational_poly, make_seq_map, shifted_product_map, InnerFamily,
    LinearFractionalParams, MobiusParams, Monomial, RationalPolyParams, SeqMapParams,
};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::json::{ElementJson, NumberJson};
use crate::map::ContractiveMap;
use crate::padic::{PadicNumber, DEFAULT_DIGITS};
use crate::recurrence::{CoupledSpec, Factor, OffsetRule, RecurrenceSpec};
use crate::tree::{Boundary, EdgeArgument, MapFamily, TreeProblem, TreeShape, DEFAULT_MAX_LEAVES};

/// Builtin map identifiers.
pub const BUILTINS: [&str; 8] =
    ["mobius", "ratpoly", "linfrac", "seqmap", "seqmap-km2009", "shiftprod", "constant", "identity"];

/// Prime and precision after applying command-line overrides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Context {
    pub prime: u64,
    pub digits: u32,
    pub seed: u64,
}

/// Values that may come from the command line instead of the file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub prime: Option<u64>,
    pub precision: Option<u32>,
    pub seed: u64,
}

impl Overrides {
    pub fn context(&self, prime: Option<u64>, precision: Option<u32>) -> Result<Context> {
        let prime = self
            .prime
            .or(prime)
            .ok_or_else(|| Error::invalid("prime: missing (set it in the spec or with --prime)"))?;
        let digits = self.precision.or(precision).unwrap_or(DEFAULT_DIGITS);
        if digits == 0 {
            return Err(Error::invalid("precision: must be positive"));
        }
        crate::padic::Qp::new(prime, digits).map_err(|e| Error::invalid(format!("prime: {e}")))?;
        Ok(Context { prime, digits, seed: self.seed })
    }
}

fn parse_value<T: DeserializeOwned>(value: &Value, path: &str) -> Result<T> {
    T::deserialize(value).map_err(|e| Error::invalid(format!("{path}: {e}")))
}

/// Parses a whole document of type `T`, naming the document kind on failure.
pub fn parse_document<T: DeserializeOwned>(text: &str, kind: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("{kind} spec: {e}")))
}

fn number(x: &NumberJson, ctx: &Context, path: &str) -> Result<PadicNumber> {
    x.to_number(ctx.prime, ctx.digits).map_err(|e| at(path, e))
}

fn numbers(xs: &[NumberJson], ctx: &Context, path: &str) -> Result<Vec<PadicNumber>> {
    xs.iter().enumerate().map(|(i, x)| number(x, ctx, &format!("{path}[{i}]"))).collect()
}

fn element(x: &ElementJson, ctx: &Context, path: &str) -> Result<AlgebraElement> {
    x.to_element(ctx.prime, ctx.digits).map_err(|e| at(path, e))
}

/// Prefixes construction errors with a field path, keeping domain errors as domain errors.
fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Invalid(m) => Error::Invalid(format!("{path}: {m}")),
        Error::Domain(m) => Error::Domain(format!("{path}: {m}")),
        Error::Shape(m) => Error::Invalid(format!("{path}: {m}")),
        other => other,
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MobiusJson {
    a: NumberJson,
    b: NumberJson,
    c: NumberJson,
    a1: NumberJson,
    b1: NumberJson,
    c1: NumberJson,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialJson {
    exponents: Vec<u32>,
    coefficient: NumberJson,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalPolyJson {
    arity: usize,
    degree: u32,
    #[serde(default)]
    numerator: Vec<MonomialJson>,
    #[serde(default)]
    denominator: Vec<MonomialJson>,
    c: NumberJson,
    c1: NumberJson,
}

impl RationalPolyJson {
    fn to_params(&self, ctx: &Context, path: &str) -> Result<RationalPolyParams> {
        let monos = |ms: &[MonomialJson], side: &str| -> Result<Vec<Monomial>> {
            ms.iter()
                .enumerate()
                .map(|(i, m)| {
                    Ok(Monomial {
                        exponents: m.exponents.clone(),
                        coefficient: number(&m.coefficient, ctx, &format!("{path}.{side}[{i}].coefficient"))?,
                    })
                })
                .collect()
        };
        Ok(RationalPolyParams {
            arity: self.arity,
            degree: self.degree,
            numerator: monos(&self.numerator, "numerator")?,
            denominator: monos(&self.denominator, "denominator")?,
            c: number(&self.c, ctx, &format!("{path}.c"))?,
            c1: number(&self.c1, ctx, &format!("{path}.c1"))?,
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinfracJson {
    a: Vec<Vec<NumberJson>>,
    a0: Vec<NumberJson>,
    b: Vec<Vec<NumberJson>>,
    b0: Vec<NumberJson>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineJson {
    weights: Vec<NumberJson>,
    constant: NumberJson,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum InnerJson {
    Km2009,
    Affine(AffineJson),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqMapJson {
    lambda: Vec<NumberJson>,
    a: NumberJson,
    b: NumberJson,
    #[serde(default = "default_inner")]
    inner: InnerJson,
    #[serde(default = "one")]
    shifts: usize,
}

fn default_inner() -> InnerJson {
    InnerJson::Km2009
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Km2009Json {
    theta: NumberJson,
    truncation: usize,
    #[serde(default = "one")]
    shifts: usize,
}

/// Either the full sequence-map parameters or the KM2009 preset.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ShiftProdJson {
    Preset(Km2009Json),
    Full(SeqMapJson),
}

impl SeqMapJson {
    fn to_params(&self, ctx: &Context, path: &str) -> Result<SeqMapParams> {
        let inner = match &self.inner {
            InnerJson::Km2009 => InnerFamily::Km2009,
            InnerJson::Affine(a) => InnerFamily::Affine {
                weights: numbers(&a.weights, ctx, &format!("{path}.inner.affine.weights"))?,
                constant: number(&a.constant, ctx, &format!("{path}.inner.affine.constant"))?,
            },
        };
        Ok(SeqMapParams {
            lambda: numbers(&self.lambda, ctx, &format!("{path}.lambda"))?,
            a: number(&self.a, ctx, &format!("{path}.a"))?,
            b: number(&self.b, ctx, &format!("{path}.b"))?,
            inner,
            shifts: self.shifts,
        })
    }
}

impl Km2009Json {
    fn to_params(&self, ctx: &Context, path: &str) -> Result<SeqMapParams> {
        let theta = number(&self.theta, ctx, &format!("{path}.theta"))?;
        SeqMapParams::km2009(&theta, self.truncation, self.shifts).map_err(|e| at(&format!("{path}.theta"), e))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantJson {
    value: ElementJson,
    #[serde(default = "one")]
    arity: usize,
    #[serde(default = "default_domain")]
    domain: DomainSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdentityJson {
    #[serde(default = "default_ball")]
    domain: DomainSpec,
    #[serde(default)]
    length: Option<usize>,
    #[serde(default = "one_u32")]
    declared_k: u32,
}

fn default_domain() -> DomainSpec {
    DomainSpec::Ep
}

fn default_ball() -> DomainSpec {
    DomainSpec::UnitBall
}

fn one_u32() -> u32 {
    1
}

/// A map reference: a builtin with parameters, or a rational-polynomial literal.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    #[serde(default)]
    builtin: Option<String>,
    #[serde(default)]
    params: Option<Value>,
    #[serde(default)]
    rational: Option<RationalPolyJson>,
}

impl MapJson {
    pub fn builtin(id: &str, params: Value) -> Self {
        MapJson { builtin: Some(id.to_string()), params: Some(params), rational: None }
    }

    pub fn build(&self, ctx: &Context, path: &str) -> Result<ContractiveMap> {
        match (&self.builtin, &self.rational) {
            (Some(id), None) => build_builtin(id, self.params.as_ref().unwrap_or(&Value::Null), ctx, path),
            (None, Some(r)) => {
                if self.params.is_some() {
                    return Err(Error::invalid(format!("{path}.params: not allowed with `rational`")));
                }
                make_rational_poly(&r.to_params(ctx, &format!("{path}.rational"))?).map_err(|e| at(path, e))
            }
            _ => Err(Error::invalid(format!("{path}: give exactly one of `builtin` or `rational`"))),
        }
    }
}

/// Builds a builtin map from its JSON parameter block.
pub fn build_builtin(id: &str, params: &Value, ctx: &Context, path: &str) -> Result<ContractiveMap> {
    let ppath = format!("{path}.params");
    let map = match id {
        "mobius" => {
            let j: MobiusJson = parse_value(params, &ppath)?;
            let n = |x: &NumberJson, f: &str| number(x, ctx, &format!("{ppath}.{f}"));
            let p = MobiusParams {
                a: n(&j.a, "a")?,
                b: n(&j.b, "b")?,
                c: n(&j.c, "c")?,
                a1: n(&j.a1, "a1")?,
                b1: n(&j.b1, "b1")?,
                c1: n(&j.c1, "c1")?,
            };
            make_mobius(&p)
        }
        "ratpoly" => {
            let j: RationalPolyJson = parse_value(params, &ppath)?;
            make_rational_poly(&j.to_params(ctx, &ppath)?)
        }
        "linfrac" => {
            let j: LinfracJson = parse_value(params, &ppath)?;
            let matrix = |rows: &[Vec<NumberJson>], f: &str| -> Result<Vec<Vec<PadicNumber>>> {
                rows.iter().enumerate().map(|(k, r)| numbers(r, ctx, &format!("{ppath}.{f}[{k}]"))).collect()
            };
            let p = LinearFractionalParams {
                a: matrix(&j.a, "a")?,
                a0: numbers(&j.a0, ctx, &format!("{ppath}.a0"))?,
                b: matrix(&j.b, "b")?,
                b0: numbers(&j.b0, ctx, &format!("{ppath}.b0"))?,
            };
            make_linear_fractional(&p)
        }
        "seqmap" => {
            let j: SeqMapJson = parse_value(params, &ppath)?;
            make_seq_map(&j.to_params(ctx, &ppath)?)
        }
        "seqmap-km2009" => {
            let j: Km2009Json = parse_value(params, &ppath)?;
            make_seq_map(&j.to_params(ctx, &ppath)?)
        }
        "shiftprod" => {
            let params = match parse_value::<ShiftProdJson>(params, &ppath)? {
                ShiftProdJson::Preset(j) => j.to_params(ctx, &ppath)?,
                ShiftProdJson::Full(j) => j.to_params(ctx, &ppath)?,
            };
            shifted_product_map(&params)
        }
        "constant" => {
            let j: ConstantJson = parse_value(params, &ppath)?;
            let value = element(&j.value, ctx, &format!("{ppath}.value"))?;
            ContractiveMap::constant(j.arity, j.domain, value, ctx.digits)
        }
        "identity" => {
            let j: IdentityJson = if params.is_null() {
                parse_value(&Value::Object(Default::default()), &ppath)?
            } else {
                parse_value(params, &ppath)?
            };
            let shape = j.length.map_or(ElementShape::Scalar, ElementShape::Vector);
            ContractiveMap::identity(shape, j.domain, ctx.prime, ctx.digits, j.declared_k)
        }
        other => {
            return Err(Error::invalid(format!(
                "{path}.builtin: unknown map `{other}`, expected one of {}",
                BUILTINS.join(", ")
            )))
        }
    };
    map.map_err(|e| at(path, e))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OffsetRuleJson {
    Strict,
    Relaxed(usize),
}

/// Initial values: explicit elements, or `"canonical"` / `"random"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum InitialJson {
    Keyword(String),
    Values(Vec<ElementJson>),
}

impl Default for InitialJson {
    fn default() -> Self {
        InitialJson::Keyword("canonical".into())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorJson {
    map: MapJson,
    #[serde(default)]
    offset: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    factors: Vec<FactorJson>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceJson {
    #[serde(default)]
    prime: Option<u64>,
    #[serde(default)]
    precision: Option<u32>,
    #[serde(default)]
    domain: Option<DomainSpec>,
    #[serde(default)]
    offset_rule: Option<OffsetRuleJson>,
    terms: Vec<TermJson>,
    #[serde(default)]
    initial: InitialJson,
    #[serde(default)]
    target: Option<i64>,
    #[serde(default)]
    max_iter: Option<usize>,
}

/// A recurrence ready to solve.
#[derive(Clone, Debug)]
pub struct RecurrenceProblem {
    pub context: Context,
    pub spec: RecurrenceSpec,
    pub initial: Vec<AlgebraElement>,
    pub target: Option<i64>,
    pub max_iter: Option<usize>,
}

fn initial_values(
    init: &InitialJson,
    count: usize,
    domain: &DomainSpec,
    shape: ElementShape,
    ctx: &Context,
) -> Result<Vec<AlgebraElement>> {
    match init {
        InitialJson::Keyword(k) if k == "canonical" => {
            Ok(vec![domain.canonical_point(shape, ctx.prime, ctx.digits); count])
        }
        InitialJson::Keyword(k) if k == "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            Ok((0..count).map(|_| domain.sample(shape, ctx.prime, ctx.digits, &mut rng)).collect())
        }
        InitialJson::Keyword(k) => {
            Err(Error::invalid(format!("initial: expected \"canonical\", \"random\" or a list, got {k:?}")))
        }
        InitialJson::Values(vs) => {
            vs.iter().enumerate().map(|(i, v)| element(v, ctx, &format!("initial[{i}]"))).collect()
        }
    }
}

fn check_domain(declared: &Option<DomainSpec>, actual: &DomainSpec) -> Result<()> {
    match declared {
        Some(d) if d != actual => {
            Err(Error::invalid(format!("domain: spec declares {} but the maps act on {}", d.name(), actual.name())))
        }
        _ => Ok(()),
    }
}

impl RecurrenceJson {
    pub fn parse(text: &str) -> Result<Self> {
        parse_document(text, "recurrence")
    }

    pub fn build(&self, overrides: &Overrides) -> Result<RecurrenceProblem> {
        let ctx = overrides.context(self.prime, self.precision)?;
        let rule = match self.offset_rule {
            None | Some(OffsetRuleJson::Strict) => OffsetRule::Strict,
            Some(OffsetRuleJson::Relaxed(g)) if g <= 1 => OffsetRule::Relaxed { min_gap: g },
            Some(OffsetRuleJson::Relaxed(g)) => {
                return Err(Error::invalid(format!("offset_rule.relaxed: minimum gap {g} must be 0 or 1")))
            }
        };
        if self.terms.is_empty() {
            return Err(Error::invalid("terms: at least one term is required"));
        }
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                t.factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        Ok(Factor::new(f.map.build(&ctx, &format!("terms[{k}].factors[{i}].map"))?, f.offset))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = RecurrenceSpec::new(terms, rule).map_err(|e| at("terms", e))?;
        check_domain(&self.domain, spec.domain())?;
        let initial = initial_values(&self.initial, spec.lookback(), spec.domain(), spec.shape(), &ctx)?;
        if initial.len() < spec.lookback() {
            return Err(Error::invalid(format!("initial: {} values given, {} needed", initial.len(), spec.lookback())));
        }
        Ok(RecurrenceProblem { context: ctx, spec, initial, target: self.target, max_iter: self.max_iter })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairJson {
    first: MapJson,
    second: MapJson,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupledJson {
    #[serde(default)]
    prime: Option<u64>,
    #[serde(default)]
    precision: Option<u32>,
    #[serde(default)]
    domain: Option<DomainSpec>,
    /// Used for all three equations unless `f`, `g`, `h` are given.
    #[serde(default)]
    family: Option<Vec<PairJson>>,
    #[serde(default)]
    f: Option<Vec<PairJson>>,
    #[serde(default)]
    g: Option<Vec<PairJson>>,
    #[serde(default)]
    h: Option<Vec<PairJson>>,
    #[serde(default)]
    initial: InitialJson,
    #[serde(default)]
    target: Option<i64>,
    #[serde(default)]
    max_iter: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct CoupledProblem {
    pub context: Context,
    pub spec: CoupledSpec,
    pub initial: [AlgebraElement; 3],
    pub target: Option<i64>,
    pub max_iter: Option<usize>,
}

impl CoupledJson {
    pub fn parse(text: &str) -> Result<Self> {
        parse_document(text, "coupled")
    }

    pub fn build(&self, overrides: &Overrides) -> Result<CoupledProblem> {
        let ctx = overrides.context(self.prime, self.precision)?;
        let pairs = |ps: &[PairJson], name: &str| -> Result<Vec<(ContractiveMap, ContractiveMap)>> {
            ps.iter()
                .enumerate()
                .map(|(k, p)| {
                    Ok((
                        p.first.build(&ctx, &format!("{name}[{k}].first"))?,
                        p.second.build(&ctx, &format!("{name}[{k}].second"))?,
                    ))
                })
                .collect()
        };
        let pick = |own: &Option<Vec<PairJson>>, name: &str| -> Result<Vec<(ContractiveMap, ContractiveMap)>> {
            match (own, &self.family) {
                (Some(ps), _) => pairs(ps, name),
                (None, Some(ps)) => pairs(ps, "family"),
                (None, None) => Err(Error::invalid(format!("{name}: missing (give `family` or all of `f`, `g`, `h`)"))),
            }
        };
        let spec = CoupledSpec::new(pick(&self.f, "f")?, pick(&self.g, "g")?, pick(&self.h, "h")?)
            .map_err(|e| at("family", e))?;
        check_domain(&self.domain, spec.domain())?;
        let first = pick(&self.f, "f")?.remove(0).0;
        let values = initial_values(&self.initial, 3, spec.domain(), first.shape(), &ctx)?;
        let [x, y, z]: [AlgebraElement; 3] = values
            .try_into()
            .map_err(|v: Vec<_>| Error::invalid(format!("initial: expected 3 values, got {}", v.len())))?;
        Ok(CoupledProblem { context: ctx, spec, initial: [x, y, z], target: self.target, max_iter: self.max_iter })
    }
}

/// `"constant"` (every leaf at the canonical point), `"random"`, `{"constant": value}`, or a list.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum BoundaryJson {
    Keyword(String),
    Constant { constant: ElementJson },
    Values(Vec<ElementJson>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum EdgeArgumentJson {
    FullTuple,
    OwnSuccessor,
}

/// One map, or a list of `M` summand maps.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum MapsJson {
    One(Box<MapJson>),
    Many(Vec<MapJson>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    #[serde(default)]
    prime: Option<u64>,
    #[serde(default)]
    precision: Option<u32>,
    branching: usize,
    depth: usize,
    #[serde(default)]
    map: Option<MapsJson>,
    /// `by_successor[i][j]`: summand `i`, successor `j`.
    #[serde(default)]
    by_successor: Option<Vec<Vec<MapJson>>>,
    #[serde(default)]
    edge_argument: Option<EdgeArgumentJson>,
    #[serde(default = "default_boundary")]
    boundary: BoundaryJson,
    #[serde(default)]
    max_leaves: Option<usize>,
    #[serde(default)]
    target: Option<i64>,
}

fn default_boundary() -> BoundaryJson {
    BoundaryJson::Keyword("constant".into())
}

#[derive(Clone, Debug)]
pub struct TreeSetup {
    pub context: Context,
    pub problem: TreeProblem,
    pub target: Option<i64>,
}

impl TreeJson {
    pub fn parse(text: &str) -> Result<Self> {
        parse_document(text, "tree")
    }

    pub fn build(&self, overrides: &Overrides) -> Result<TreeSetup> {
        let ctx = overrides.context(self.prime, self.precision)?;
        let shape = TreeShape::new(
            crate::tree::Branching::Uniform(self.branching),
            self.depth,
            self.max_leaves.unwrap_or(DEFAULT_MAX_LEAVES),
        )
        .map_err(|e| at("depth", e))?;
        let family = match (&self.map, &self.by_successor) {
            (Some(MapsJson::One(m)), None) => MapFamily::Uniform(vec![m.build(&ctx, "map")?]),
            (Some(MapsJson::Many(ms)), None) => MapFamily::Uniform(
                ms.iter().enumerate().map(|(i, m)| m.build(&ctx, &format!("map[{i}]"))).collect::<Result<_>>()?,
            ),
            (None, Some(rows)) => MapFamily::BySuccessor(
                rows.iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, m)| m.build(&ctx, &format!("by_successor[{i}][{j}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(Error::invalid("map: give exactly one of `map` or `by_successor`")),
        };
        let edge = match self.edge_argument {
            None | Some(EdgeArgumentJson::FullTuple) => EdgeArgument::FullTuple,
            Some(EdgeArgumentJson::OwnSuccessor) => EdgeArgument::OwnSuccessor,
        };
        let boundary = self.boundary(&ctx)?;
        let problem = TreeProblem::new(shape, family, edge, &boundary).map_err(|e| at("boundary", e))?;
        Ok(TreeSetup { context: ctx, problem, target: self.target })
    }

    fn boundary(&self, ctx: &Context) -> Result<Boundary> {
        resolve_boundary(&self.boundary, ctx, "boundary")
    }
}

/// Turns a boundary description into a [`Boundary`]; `"constant"` means the
/// canonical point and `"random"` draws from `ctx.seed`.
pub fn resolve_boundary(b: &BoundaryJson, ctx: &Context, path: &str) -> Result<Boundary> {
    match b {
        BoundaryJson::Keyword(k) if k == "random" => Ok(Boundary::Random { seed: ctx.seed }),
        BoundaryJson::Keyword(k) if k == "constant" => {
            Ok(Boundary::Constant(AlgebraElement::Scalar(PadicNumber::one(ctx.prime, ctx.digits))))
        }
        BoundaryJson::Keyword(k) => Err(Error::invalid(format!(
            "{path}: expected \"constant\", \"random\", {{\"constant\": value}} or a list, got {k:?}"
        ))),
        BoundaryJson::Constant { constant } => {
            Ok(Boundary::Constant(element(constant, ctx, &format!("{path}.constant"))?))
        }
        BoundaryJson::Values(vs) => Ok(Boundary::Explicit(
            vs.iter().enumerate().map(|(i, v)| element(v, ctx, &format!("{path}[{i}]"))).collect::<Result<_>>()?,
        )),
    }
}

impl TreeSetup {
    /// The canonical point in the problem's own element shape.
    pub fn canonical_boundary(&self) -> Boundary {
        let shape = self.problem.boundary()[0].shape();
        Boundary::Constant(self.problem.domain().canonical_point(shape, self.context.prime, self.context.digits))
    }
}

/// Either a map applied to arguments or one of the series functions.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalJson {
    #[serde(default)]
    prime: Option<u64>,
    #[serde(default)]
    precision: Option<u32>,
    #[serde(default)]
    map: Option<MapJson>,
    #[serde(default)]
    args: Option<Vec<ElementJson>>,
    #[serde(default)]
    function: Option<String>,
    #[serde(default)]
    x: Option<NumberJson>,
}

#[derive(Clone, Debug)]
pub enum EvalRequest {
    Map { map: ContractiveMap, args: Vec<AlgebraElement> },
    Exp(PadicNumber),
    Log(PadicNumber),
}

impl EvalJson {
    pub fn parse(text: &str) -> Result<Self> {
        parse_document(text, "eval")
    }

    pub fn build(&self, overrides: &Overrides) -> Result<(Context, EvalRequest)> {
        let ctx = overrides.context(self.prime, self.precision)?;
        let req = match (&self.map, &self.function) {
            (Some(m), None) => {
                let map = m.build(&ctx, "map")?;
                let args = self.args.as_ref().ok_or_else(|| Error::invalid("args: missing"))?;
                let args = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| element(a, &ctx, &format!("args[{i}]")))
                    .collect::<Result<_>>()?;
                EvalRequest::Map { map, args }
            }
            (None, Some(f)) => {
                let x = self.x.as_ref().ok_or_else(|| Error::invalid("x: missing"))?;
                let x = number(x, &ctx, "x")?;
                match f.as_str() {
                    "exp" => EvalRequest::Exp(x),
                    "log" => EvalRequest::Log(x),
                    other => {
                        return Err(Error::invalid(format!("function: expected \"exp\" or \"log\", got {other:?}")))
                    }
                }
            }
            _ => return Err(Error::invalid("map: give exactly one of `map` or `function`")),
        };
        Ok((ctx, req))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn ov(prime: u64) -> Overrides {
        Overrides { prime: Some(prime), precision: Some(30), seed: 0 }
    }

    #[test]
    fn recurrence_from_json() {
        let text = r#"{
            "prime": 5, "precision": 30,
            "terms": [{"factors": [{"map": {"builtin": "mobius", "params": {"a":1,"b":1,"c":1,"a1":1,"b1":1,"c1":6}}, "offset": 0}]}],
            "initial": [1, 6]
        }"#;
        let p = RecurrenceJson::parse(text).unwrap().build(&Overrides::default()).unwrap();
        assert_eq!(p.spec.lookback(), 2);
        assert_eq!(p.initial.len(), 2);
        assert_eq!(p.context.digits, 30);
    }

    #[test]
    fn unknown_field_is_named() {
        let text = r#"{"prime": 5, "terms": [], "initail": []}"#;
        let err = RecurrenceJson::parse(text).unwrap_err();
        assert!(err.to_string().contains("initail"), "{err}");
        let bad_param = json!({"a":1,"b":1,"c":1,"a1":1,"b1":1,"c2":6});
        let ctx = ov(5).context(None, None).unwrap();
        let err = build_builtin("mobius", &bad_param, &ctx, "map").unwrap_err();
        assert!(err.to_string().contains("c2"), "{err}");
    }

    #[test]
    fn domain_error_survives_paths() {
        let ctx = ov(5).context(None, None).unwrap();
        let params = json!({"a":1,"b":1,"c":5,"a1":1,"b1":1,"c1":6});
        let err = build_builtin("mobius", &params, &ctx, "map").unwrap_err();
        assert!(err.is_domain(), "{err}");
    }

    #[test]
    fn missing_prime() {
        let text = r#"{"terms": [{"factors": [{"map": {"builtin": "identity"}}]}]}"#;
        let err = RecurrenceJson::parse(text).unwrap().build(&Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("prime"));
    }

    #[test]
    fn tree_and_eval() {
        let text = r#"{"branching": 2, "depth": 3, "map": {"builtin": "constant", "params": {"value": 6, "arity": 2}}, "boundary": "random"}"#;
        let t = TreeJson::parse(text).unwrap().build(&ov(5)).unwrap();
        assert_eq!(t.problem.shape().leaf_count(), 8);
        let e = EvalJson::parse(r#"{"function": "exp", "x": 5}"#).unwrap();
        assert!(matches!(e.build(&ov(5)).unwrap().1, EvalRequest::Exp(_)));
    }
}
