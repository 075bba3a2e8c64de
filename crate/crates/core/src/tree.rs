//! Reverse recurrences on finite k-ary trees.
//!
//! Vertices are addressed by coordinate tuples `(i_1, ..., i_n)` with
//! 1-based entries; the root is `()`. The value at an interior vertex `x` is
//!
//! ```text
//! u_x = sum_i prod_{y in S(x)} f_xy^(i)(args)
//! ```
//!
//! where `args` is either the whole successor tuple `(u_(x,1), ..., u_(x,k_x))`
//! or just `u_y`, see [`EdgeArgument`]. Values at depth `D` are the boundary.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraElement, ElementShape};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::map::ContractiveMap;
use crate::padic::Valuation;
use crate::recurrence::{solve_recurrence, ConvergenceCertificate, Factor, OffsetRule, RecurrenceSpec, SolveOptions};

/// Largest number of leaves a tree may have (`2^12` for a binary tree).
pub const DEFAULT_MAX_LEAVES: usize = 4096;

type BranchFn = dyn Fn(&[usize]) -> usize + Send + Sync;
type EdgeFn = dyn Fn(&[usize], usize) -> Vec<ContractiveMap> + Send + Sync;

#[derive(Clone)]
pub enum Branching {
    Uniform(usize),
    /// `k_x` as a function of the vertex coordinates.
    PerVertex(Arc<BranchFn>),
}

impl fmt::Debug for Branching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branching::Uniform(k) => write!(f, "Uniform({k})"),
            Branching::PerVertex(_) => f.write_str("PerVertex(..)"),
        }
    }
}

#[derive(Clone, Debug)]
struct Level {
    coords: Vec<Vec<usize>>,
    /// `children[v]` indexes the next level; empty at the leaves.
    children: Vec<std::ops::Range<usize>>,
}

#[derive(Clone, Debug)]
pub struct TreeShape {
    branching: Branching,
    depth: usize,
    levels: Vec<Level>,
}

impl TreeShape {
    pub fn new(branching: Branching, depth: usize, max_leaves: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::invalid("tree depth must be at least 1"));
        }
        let mut levels = vec![Level { coords: vec![Vec::new()], children: Vec::new() }];
        for d in 0..depth {
            let current = &levels[d];
            let mut next = Vec::new();
            let mut children = Vec::with_capacity(current.coords.len());
            for x in &current.coords {
                let k = match &branching {
                    Branching::Uniform(k) => *k,
                    Branching::PerVertex(f) => f(x),
                };
                if k == 0 {
                    return Err(Error::invalid(format!("vertex {x:?} above depth {depth} has no successors")));
                }
                let start = next.len();
                if start + k > max_leaves {
                    return Err(Error::invalid(format!(
                        "depth {depth} exceeds the cap of {max_leaves} vertices per level"
                    )));
                }
                next.extend((1..=k).map(|i| {
                    let mut c = x.clone();
                    c.push(i);
                    c
                }));
                children.push(start..start + k);
            }
            levels[d].children = children;
            levels.push(Level { coords: next, children: Vec::new() });
        }
        Ok(TreeShape { branching, depth, levels })
    }

    /// The Cayley-type tree with `k` successors everywhere.
    pub fn uniform(k: usize, depth: usize) -> Result<Self> {
        TreeShape::new(Branching::Uniform(k), depth, DEFAULT_MAX_LEAVES)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn branching(&self) -> &Branching {
        &self.branching
    }

    /// Coordinates of the vertices at distance `level` from the root.
    pub fn level(&self, level: usize) -> &[Vec<usize>] {
        &self.levels[level].coords
    }

    pub fn leaf_count(&self) -> usize {
        self.levels[self.depth].coords.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.levels.iter().map(|l| l.coords.len()).sum()
    }

    /// `S(x)` as coordinates.
    pub fn successors(&self, x: &[usize]) -> Vec<Vec<usize>> {
        match self.locate(x) {
            Some((d, v)) if d < self.depth => {
                self.levels[d].children[v].clone().map(|c| self.levels[d + 1].coords[c].clone()).collect()
            }
            _ => Vec::new(),
        }
    }

    fn locate(&self, x: &[usize]) -> Option<(usize, usize)> {
        let level = self.levels.get(x.len())?;
        level.coords.binary_search(&x.to_vec()).ok().map(|v| (x.len(), v))
    }
}

/// How the factor for edge `<x, y>` reads the successor values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EdgeArgument {
    /// `f_xy(u_(x,1), ..., u_(x,k_x))`, arity `k_x`.
    #[default]
    FullTuple,
    /// `f_xy(u_y)`, arity 1.
    OwnSuccessor,
}

/// The maps `f_xy^(i)`, `1 <= i <= M`.
#[derive(Clone)]
pub enum MapFamily {
    /// The same `M` maps on every edge.
    Uniform(Vec<ContractiveMap>),
    /// `maps[i][j]` is used on the edge to the `(j+1)`-th successor.
    BySuccessor(Vec<Vec<ContractiveMap>>),
    /// The `M` maps for vertex `x` and 0-based successor index `j`.
    PerEdge(Arc<EdgeFn>),
}

impl fmt::Debug for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapFamily::Uniform(m) => f.debug_tuple("Uniform").field(m).finish(),
            MapFamily::BySuccessor(m) => f.debug_tuple("BySuccessor").field(m).finish(),
            MapFamily::PerEdge(_) => f.write_str("PerEdge(..)"),
        }
    }
}

impl MapFamily {
    fn maps(&self, x: &[usize], j: usize) -> Result<Vec<ContractiveMap>> {
        match self {
            MapFamily::Uniform(maps) => Ok(maps.clone()),
            MapFamily::BySuccessor(rows) => rows
                .iter()
                .map(|row| {
                    row.get(j)
                        .cloned()
                        .ok_or_else(|| Error::invalid(format!("no map for successor {} of vertex {x:?}", j + 1)))
                })
                .collect(),
            MapFamily::PerEdge(f) => Ok(f(x, j)),
        }
    }
}

/// Values assigned to the depth-`D` vertices.
#[derive(Clone, Debug)]
pub enum Boundary {
    Constant(AlgebraElement),
    /// Independent samples from the domain.
    Random {
        seed: u64,
    },
    /// One value per leaf in coordinate order.
    Explicit(Vec<AlgebraElement>),
}

#[derive(Clone, Debug)]
pub struct TreeProblem {
    shape: TreeShape,
    family: MapFamily,
    edge_argument: EdgeArgument,
    leaves: Vec<AlgebraElement>,
    domain: DomainSpec,
    elem_shape: ElementShape,
    prime: u64,
    digits: u32,
    beta_exponent: u32,
}

impl TreeProblem {
    pub fn new(shape: TreeShape, family: MapFamily, edge_argument: EdgeArgument, boundary: &Boundary) -> Result<Self> {
        let mut first: Option<ContractiveMap> = None;
        let mut beta = u32::MAX;
        let mut digits = u32::MAX;
        for d in 0..shape.depth {
            let level = &shape.levels[d];
            for (x, range) in level.coords.iter().zip(&level.children) {
                let k = range.len();
                for j in 0..k {
                    let maps = family.maps(x, j)?;
                    if maps.is_empty() {
                        return Err(Error::invalid(format!("edge from {x:?} has no maps")));
                    }
                    for m in &maps {
                        let arity = match edge_argument {
                            EdgeArgument::FullTuple => k,
                            EdgeArgument::OwnSuccessor => 1,
                        };
                        if m.arity() != arity {
                            return Err(Error::invalid(format!(
                                "map `{}` at vertex {x:?} has arity {}, expected {arity}",
                                m.label(),
                                m.arity()
                            )));
                        }
                        if let Some(f) = &first {
                            if m.domain() != f.domain() || m.shape() != f.shape() {
                                return Err(Error::invalid(format!(
                                    "map `{}` uses a different domain or shape",
                                    m.label()
                                )));
                            }
                            if m.prime() != f.prime() {
                                return Err(Error::PrimeMismatch(f.prime(), m.prime()));
                            }
                        } else {
                            first = Some(m.clone());
                        }
                        beta = beta.min(m.contraction_exponent());
                        digits = digits.min(m.digits());
                    }
                }
                if matches!(family, MapFamily::Uniform(_) | MapFamily::BySuccessor(_)) && d > 0 {
                    break;
                }
            }
        }
        let first = first.expect("depth >= 1 gives at least one edge");
        let mut problem = TreeProblem {
            shape,
            family,
            edge_argument,
            leaves: Vec::new(),
            domain: first.domain().clone(),
            elem_shape: first.shape(),
            prime: first.prime(),
            digits,
            beta_exponent: beta,
        };
        problem.leaves = problem.resolve(boundary)?;
        Ok(problem)
    }

    fn resolve(&self, boundary: &Boundary) -> Result<Vec<AlgebraElement>> {
        let coords = self.shape.level(self.shape.depth);
        let values = match boundary {
            Boundary::Constant(c) => vec![c.clone(); coords.len()],
            Boundary::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..coords.len())
                    .map(|_| self.domain.sample(self.elem_shape, self.prime, self.digits, &mut rng))
                    .collect()
            }
            Boundary::Explicit(values) => {
                if values.len() != coords.len() {
                    return Err(Error::invalid(format!(
                        "boundary has {} values for {} leaves",
                        values.len(),
                        coords.len()
                    )));
                }
                values.clone()
            }
        };
        for (x, v) in coords.iter().zip(&values) {
            if v.shape() != self.elem_shape {
                return Err(Error::Shape(format!("boundary value at leaf {x:?} has shape {:?}", v.shape())));
            }
            if !self.domain.contains(v) {
                return Err(Error::domain(format!(
                    "boundary value {v} at leaf {x:?} is not in {}",
                    self.domain.name()
                )));
            }
        }
        Ok(values)
    }

    /// The same problem with a different boundary.
    pub fn with_boundary(&self, boundary: &Boundary) -> Result<Self> {
        let leaves = self.resolve(boundary)?;
        Ok(TreeProblem { leaves, ..self.clone() })
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn boundary(&self) -> &[AlgebraElement] {
        &self.leaves
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `k_beta` with `beta = p^(-k_beta)`.
    pub fn beta_exponent(&self) -> u32 {
        self.beta_exponent
    }

    fn rhs(&self, x: &[usize], children: &[AlgebraElement]) -> Result<AlgebraElement> {
        let k = children.len();
        let mut per_edge = Vec::with_capacity(k);
        for j in 0..k {
            per_edge.push(self.family.maps(x, j)?);
        }
        let m = per_edge[0].len();
        let mut summands = Vec::with_capacity(m);
        for i in 0..m {
            let factors = (0..k)
                .map(|j| {
                    let f = per_edge[j].get(i).ok_or_else(|| {
                        Error::invalid(format!("edge {} of vertex {x:?} has fewer than {} maps", j + 1, i + 1))
                    })?;
                    match self.edge_argument {
                        EdgeArgument::FullTuple => f.eval(children),
                        EdgeArgument::OwnSuccessor => f.eval(std::slice::from_ref(&children[j])),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            summands.push(AlgebraElement::product(&factors)?);
        }
        AlgebraElement::sum(&summands)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSolution {
    /// `values[d][v]` belongs to the `v`-th vertex at depth `d` in coordinate order.
    pub values: Vec<Vec<AlgebraElement>>,
    /// `v(u_x - RHS(x))` for the interior levels `0..D`.
    pub residuals: Vec<Vec<Valuation>>,
    coords: Vec<Vec<Vec<usize>>>,
}

impl TreeSolution {
    pub fn root(&self) -> &AlgebraElement {
        &self.values[0][0]
    }

    pub fn value(&self, x: &[usize]) -> Option<&AlgebraElement> {
        let level = self.coords.get(x.len())?;
        let v = level.binary_search(&x.to_vec()).ok()?;
        Some(&self.values[x.len()][v])
    }

    pub fn level(&self, level: usize) -> &[AlgebraElement] {
        &self.values[level]
    }

    pub fn depth(&self) -> usize {
        self.values.len() - 1
    }

    pub fn min_residual(&self) -> Valuation {
        self.residuals.iter().flatten().copied().min().unwrap_or(Valuation::Infinite)
    }
}

/// Evaluates the equation level by level from depth `D - 1` up to the root.
pub fn backward_sweep(problem: &TreeProblem) -> Result<TreeSolution> {
    let depth = problem.shape.depth;
    let mut values = vec![Vec::new(); depth + 1];
    values[depth] = problem.leaves.clone();
    let mut residuals = vec![Vec::new(); depth];
    for d in (0..depth).rev() {
        let level = &problem.shape.levels[d];
        let below = &values[d + 1];
        let computed = level
            .coords
            .par_iter()
            .zip(&level.children)
            .map(|(x, range)| -> Result<(AlgebraElement, Valuation)> {
                let u = problem.rhs(x, &below[range.clone()])?;
                if !problem.domain.contains(&u) {
                    return Err(Error::domain(format!("value {u} at vertex {x:?} left {}", problem.domain.name())));
                }
                let residual = u.sub(&problem.rhs(x, &below[range.clone()])?)?.valuation();
                Ok((u, residual))
            })
            .collect::<Result<Vec<_>>>()?;
        let (vals, res): (Vec<_>, Vec<_>) = computed.into_iter().unzip();
        values[d] = vals;
        residuals[d] = res;
    }
    let coords = problem.shape.levels.iter().map(|l| l.coords.clone()).collect();
    Ok(TreeSolution { values, residuals, coords })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    #[serde(serialize_with = "crate::json::serialize_valuation")]
    pub root_gap: Valuation,
    /// `D * k_beta`.
    pub bound: i64,
    /// `(d, min_x v(u_x - v_x))` over the vertices at depth `d`.
    #[serde(serialize_with = "crate::json::serialize_trace")]
    pub level_gaps: Vec<(usize, Valuation)>,
    /// Every level `d` satisfies `gap >= (D - d) * k_beta`.
    pub holds: bool,
}

/// Solves with the problem's boundary and with `other`, and compares.
pub fn uniqueness_gap(problem: &TreeProblem, other: &Boundary) -> Result<UniquenessReport> {
    let second = problem.with_boundary(other)?;
    let u = backward_sweep(problem)?;
    let v = backward_sweep(&second)?;
    let depth = problem.shape.depth;
    let k = problem.beta_exponent as i64;
    let level_gaps = (0..=depth)
        .map(|d| {
            let gaps = u.values[d]
                .iter()
                .zip(&v.values[d])
                .map(|(a, b)| a.sub(b).map(|x| x.valuation()))
                .collect::<Result<Vec<_>>>()?;
            Ok((d, gaps.into_iter().min().unwrap_or(Valuation::Infinite)))
        })
        .collect::<Result<Vec<_>>>()?;
    let holds = level_gaps.iter().all(|(d, g)| g.is_at_least((depth - d) as i64 * k));
    Ok(UniquenessReport { root_gap: level_gaps[0].1, bound: depth as i64 * k, level_gaps, holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSolution {
    #[serde(serialize_with = "crate::json::serialize_element")]
    pub value: AlgebraElement,
    /// `v(u* - RHS(u*, ..., u*))` for the constant assignment.
    #[serde(serialize_with = "crate::json::serialize_valuation")]
    pub residual_valuation: Valuation,
    pub certificate: ConvergenceCertificate,
}

/// The translation-invariant solution `u_x = u*` of a problem whose family
/// is the same at every vertex: `u*` solves `u = sum_i prod_j f^(i)_j(u, ..., u)`.
pub fn invariant_solution(problem: &TreeProblem, options: SolveOptions) -> Result<InvariantSolution> {
    let k = match problem.shape.branching {
        Branching::Uniform(k) => k,
        Branching::PerVertex(_) => return Err(Error::domain("invariant solutions need uniform branching")),
    };
    let terms: Vec<Vec<Factor>> = match &problem.family {
        MapFamily::Uniform(maps) => maps.iter().map(|f| (0..k).map(|_| Factor::new(f.clone(), 0)).collect()).collect(),
        MapFamily::BySuccessor(rows) => {
            rows.iter().map(|row| row[..k].iter().map(|f| Factor::new(f.clone(), 0)).collect()).collect()
        }
        MapFamily::PerEdge(_) => return Err(Error::domain("invariant solutions need a translation-invariant family")),
    };
    let spec = RecurrenceSpec::new(terms, OffsetRule::Relaxed { min_gap: 0 })?;
    let start = problem.domain.canonical_point(problem.elem_shape, problem.prime, problem.digits);
    let certificate = solve_recurrence(&spec, &vec![start; spec.lookback()], options)?;
    // keep iterating until the value is reproduced exactly
    let mut value = certificate.limit.clone();
    for _ in 0..4 * problem.digits as usize {
        let next = spec.diagonal(&value)?;
        if next == value {
            break;
        }
        value = next;
    }
    let children = vec![value.clone(); k];
    let residual_valuation = value.sub(&problem.rhs(&[], &children)?)?.valuation();
    Ok(InvariantSolution { value, residual_valuation, certificate })
}
