//! Hypercubes `H = Π {a_j, b_j}`, their constraint sets, Kronecker deltas
//! and multilinear normal forms modulo `g_j = (x_j - a_j)(x_j - b_j)`.
//!
//! Vertices are addressed by a bitmask: bit `j` set selects `b_j`, clear
//! selects `a_j`. Enumeration is lazy, so memory stays `O(n)` per vertex and
//! disjoint index ranges can be consumed independently.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Degree, Monomial, SparsePoly};
use crate::rational::{format_rational, parse_rational};
use crate::scalar::Scalar;
use crate::text::{ParseError, PolySource};
use crate::Rational;

pub const DEFAULT_VERTEX_CAP: usize = 20;
pub const MAX_VERTEX_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("root pair {j} is not strictly increasing (need a_j < b_j)")]
    InvalidRoots { j: usize },
    #[error("dimension {n} exceeds the vertex cap {cap}")]
    DimensionTooLarge { n: usize, cap: usize },
    #[error("point is not a vertex of the hypercube (coordinate {j})")]
    NotAVertex { j: usize },
    #[error("dimension mismatch: cube has {cube} variables, polynomial has {poly}")]
    DimensionMismatch { cube: usize, poly: usize },
    #[error("box constant must be at least the largest root magnitude")]
    BoxConstantTooSmall,
    #[error("bad cube description `{0}`")]
    BadShorthand(String),
    #[error("bad JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypercube<S> {
    roots: Vec<(S, S)>,
}

/// One of the two facet-defining linear polynomials of coordinate `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinearFactor {
    /// `x_j - a_j`
    Lower(usize),
    /// `b_j - x_j`
    Upper(usize),
}

impl LinearFactor {
    pub fn index(self) -> usize {
        match self {
            LinearFactor::Lower(j) | LinearFactor::Upper(j) => j,
        }
    }

    pub fn to_poly<S: Scalar>(self, cube: &Hypercube<S>) -> SparsePoly<S> {
        let n = cube.dim();
        let j = self.index();
        let (a, b) = &cube.roots[j];
        let x = SparsePoly::var(n, j);
        match self {
            LinearFactor::Lower(_) => &x - &SparsePoly::constant(n, a.clone()),
            LinearFactor::Upper(_) => &SparsePoly::constant(n, b.clone()) - &x,
        }
    }

    pub fn evaluate<S: Scalar>(self, cube: &Hypercube<S>, point: &[S]) -> S {
        let j = self.index();
        let (a, b) = &cube.roots[j];
        match self {
            LinearFactor::Lower(_) => point[j].clone() - a.clone(),
            LinearFactor::Upper(_) => b.clone() - point[j].clone(),
        }
    }
}

/// `δ_v = scale · Π factors` with `scale = Π 1/(b_j - a_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaFactored<S> {
    pub scale: S,
    pub factors: Vec<LinearFactor>,
}

impl<S: Scalar> DeltaFactored<S> {
    pub fn expand(&self, cube: &Hypercube<S>) -> SparsePoly<S> {
        let n = cube.dim();
        self.factors
            .iter()
            .fold(SparsePoly::constant(n, self.scale.clone()), |acc, f| &acc * &f.to_poly(cube))
    }

    pub fn evaluate(&self, cube: &Hypercube<S>, point: &[S]) -> S {
        self.factors
            .iter()
            .fold(self.scale.clone(), |acc, f| acc * f.evaluate(cube, point))
    }
}

/// `f = Σ quotients[j]·g_j + remainder` with a multilinear remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormResult<S> {
    pub remainder: SparsePoly<S>,
    pub quotients: Vec<SparsePoly<S>>,
}

/// Lazy vertex stream over an index range.
pub struct Vertices<'a, S> {
    cube: &'a Hypercube<S>,
    range: Range<u64>,
}

impl<S: Scalar> Iterator for Vertices<'_, S> {
    type Item = Vec<S>;

    fn next(&mut self) -> Option<Vec<S>> {
        self.range.next().map(|i| self.cube.vertex(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.range.size_hint()
    }
}

impl<S: Scalar> ExactSizeIterator for Vertices<'_, S> {}

impl<S: Scalar> Hypercube<S> {
    pub fn new(roots: Vec<(S, S)>) -> Result<Self, CubeError> {
        for (j, (a, b)) in roots.iter().enumerate() {
            if !(a < b) {
                return Err(CubeError::InvalidRoots { j });
            }
        }
        Ok(Hypercube { roots })
    }

    /// `{-1, 1}^n`
    pub fn pm1(n: usize) -> Self {
        Hypercube { roots: vec![(-S::one(), S::one()); n] }
    }

    /// `{0, 1}^n`
    pub fn zero_one(n: usize) -> Self {
        Hypercube { roots: vec![(S::zero(), S::one()); n] }
    }

    pub fn dim(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[(S, S)] {
        &self.roots
    }

    /// `g_j = x_j² - (a_j + b_j) x_j + a_j b_j`
    pub fn g(&self, j: usize) -> SparsePoly<S> {
        let n = self.dim();
        let (a, b) = &self.roots[j];
        let mut p = SparsePoly::zero(n);
        p.add_term(Monomial::var(n, j).with_entry(j, 2), S::one());
        p.add_term(Monomial::var(n, j), -(a.clone() + b.clone()));
        p.add_term(Monomial::one(n), a.clone() * b.clone());
        p
    }

    pub fn check_cap(&self, cap: usize) -> Result<(), CubeError> {
        let cap = cap.min(MAX_VERTEX_CAP);
        if self.dim() > cap {
            return Err(CubeError::DimensionTooLarge { n: self.dim(), cap });
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> u64 {
        1u64 << self.dim()
    }

    pub fn vertex(&self, index: u64) -> Vec<S> {
        self.roots
            .iter()
            .enumerate()
            .map(|(j, (a, b))| if index >> j & 1 == 1 { b.clone() } else { a.clone() })
            .collect()
    }

    pub fn vertices(&self) -> Result<Vertices<'_, S>, CubeError> {
        self.vertices_with_cap(DEFAULT_VERTEX_CAP)
    }

    pub fn vertices_with_cap(&self, cap: usize) -> Result<Vertices<'_, S>, CubeError> {
        self.check_cap(cap)?;
        Ok(Vertices { cube: self, range: 0..self.vertex_count() })
    }

    /// Vertices with indices in `range` (clamped to the cube).
    pub fn vertex_range(&self, range: Range<u64>) -> Vertices<'_, S> {
        let end = range.end.min(self.vertex_count());
        Vertices { cube: self, range: range.start.min(end)..end }
    }

    pub fn vertex_index(&self, v: &[S]) -> Result<u64, CubeError> {
        if v.len() != self.dim() {
            return Err(CubeError::DimensionMismatch { cube: self.dim(), poly: v.len() });
        }
        let mut idx = 0u64;
        for (j, ((a, b), x)) in self.roots.iter().zip(v).enumerate() {
            if x == b {
                idx |= 1 << j;
            } else if x != a {
                return Err(CubeError::NotAVertex { j });
            }
        }
        Ok(idx)
    }

    pub fn delta_factored(&self, index: u64) -> DeltaFactored<S> {
        let mut scale = S::one();
        let mut factors = Vec::with_capacity(self.dim());
        for (j, (a, b)) in self.roots.iter().enumerate() {
            scale = scale / (b.clone() - a.clone());
            factors.push(if index >> j & 1 == 1 { LinearFactor::Lower(j) } else { LinearFactor::Upper(j) });
        }
        DeltaFactored { scale, factors }
    }

    /// Kronecker delta of vertex `v`, factored and expanded.
    pub fn kronecker_delta(&self, v: &[S]) -> Result<(DeltaFactored<S>, SparsePoly<S>), CubeError> {
        let idx = self.vertex_index(v)?;
        let d = self.delta_factored(idx);
        let e = d.expand(self);
        Ok((d, e))
    }

    /// Division by `{g_j}`: repeatedly rewrites the glex-largest term that
    /// has some exponent `≥ 2`, using the smallest such variable, via
    /// `x_j² → (a_j + b_j) x_j − a_j b_j`.
    pub fn normal_form(&self, f: &SparsePoly<S>) -> Result<NormalFormResult<S>, CubeError> {
        let n = self.dim();
        if f.dim() != n {
            return Err(CubeError::DimensionMismatch { cube: n, poly: f.dim() });
        }
        let mut p = f.clone();
        let mut quotients = vec![SparsePoly::zero(n); n];
        loop {
            let found = p
                .terms()
                .rev()
                .find(|(m, _)| m.exponents().iter().any(|&e| e >= 2))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = found else { break };
            let j = m.exponents().iter().position(|&e| e >= 2).unwrap();
            let q = m.with_entry(j, m.exponents()[j] - 2);
            let (a, b) = &self.roots[j];
            quotients[j].add_term(q.clone(), c.clone());
            p.remove_term(&m);
            let qx = q.with_entry(j, q.exponents()[j] + 1);
            p.add_term(qx, c.clone() * (a.clone() + b.clone()));
            p.add_term(q, -(c * a.clone() * b.clone()));
        }
        Ok(NormalFormResult { remainder: p, quotients })
    }

    /// `S(g_i, g_j)` for `i > j` from its closed form
    /// `(a_j+b_j) x_i² x_j − (a_i+b_i) x_i x_j² − a_j b_j x_i² + a_i b_i x_j²`.
    pub fn s_polynomial(&self, i: usize, j: usize) -> SparsePoly<S> {
        let n = self.dim();
        let (ai, bi) = &self.roots[i];
        let (aj, bj) = &self.roots[j];
        let mono = |ei: u32, ej: u32| {
            let m = Monomial::one(n).with_entry(i, ei);
            m.with_entry(j, ej)
        };
        let mut s = SparsePoly::zero(n);
        s.add_term(mono(2, 1), aj.clone() + bj.clone());
        s.add_term(mono(1, 2), -(ai.clone() + bi.clone()));
        s.add_term(mono(2, 0), -(aj.clone() * bj.clone()));
        s.add_term(mono(0, 2), ai.clone() * bi.clone());
        s
    }

    /// First pair `(i, j)`, `i > j`, whose S-polynomial leaves a nonzero
    /// remainder.
    pub fn first_failing_s_pair(&self) -> Option<(usize, usize)> {
        for i in 1..self.dim() {
            for j in 0..i {
                let r = self.normal_form(&self.s_polynomial(i, j)).expect("same dimension");
                if !r.remainder.is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Buchberger's criterion for `{g_1, …, g_n}`.
    pub fn s_polynomial_check(&self) -> bool {
        self.first_failing_s_pair().is_none()
    }
}

/// Inequalities `p_i ≥ 0` together with the box constant `N` of the
/// constraints `N ± x_j ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet<S> {
    inequalities: Vec<SparsePoly<S>>,
    box_constant: S,
}

impl<S: Scalar> ConstraintSet<S> {
    /// `box_constant` defaults to `1 + max_j max(|a_j|, |b_j|)`.
    pub fn new(
        cube: &Hypercube<S>,
        inequalities: Vec<SparsePoly<S>>,
        box_constant: Option<S>,
    ) -> Result<Self, CubeError> {
        for p in &inequalities {
            if p.dim() != cube.dim() {
                return Err(CubeError::DimensionMismatch { cube: cube.dim(), poly: p.dim() });
            }
        }
        let max_root = cube
            .roots()
            .iter()
            .flat_map(|(a, b)| [a.abs(), b.abs()])
            .fold(S::zero(), |m, x| if x > m { x } else { m });
        let box_constant = match box_constant {
            Some(nv) if nv < max_root => return Err(CubeError::BoxConstantTooSmall),
            Some(nv) => nv,
            None => S::one() + max_root,
        };
        Ok(ConstraintSet { inequalities, box_constant })
    }

    pub fn empty(cube: &Hypercube<S>) -> Self {
        Self::new(cube, Vec::new(), None).expect("no constraints to mismatch")
    }

    pub fn inequalities(&self) -> &[SparsePoly<S>] {
        &self.inequalities
    }

    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    pub fn box_constant(&self) -> &S {
        &self.box_constant
    }

    /// Largest constraint degree, 0 without constraints.
    pub fn max_degree(&self) -> u32 {
        self.inequalities
            .iter()
            .filter_map(|p| p.degree().finite())
            .max()
            .unwrap_or(0)
    }

    /// `N + x_j`
    pub fn box_plus(&self, j: usize) -> SparsePoly<S> {
        let n = self.dim_hint(j);
        &SparsePoly::constant(n, self.box_constant.clone()) + &SparsePoly::var(n, j)
    }

    /// `N − x_j`
    pub fn box_minus(&self, j: usize) -> SparsePoly<S> {
        let n = self.dim_hint(j);
        &SparsePoly::constant(n, self.box_constant.clone()) - &SparsePoly::var(n, j)
    }

    fn dim_hint(&self, j: usize) -> usize {
        self.inequalities.first().map_or(j + 1, SparsePoly::dim)
    }

    pub fn is_feasible(&self, v: &[S]) -> bool {
        self.inequalities.iter().all(|p| !p.evaluate(v).is_negative())
    }

    /// Smallest index `i` with `p_i(v) < 0`.
    pub fn first_violated(&self, v: &[S]) -> Option<usize> {
        self.inequalities.iter().position(|p| p.evaluate(v).is_negative())
    }
}

impl<S: Scalar> Hypercube<S> {
    /// `N + x_j` for the cube's dimension.
    pub fn box_plus(&self, c: &ConstraintSet<S>, j: usize) -> SparsePoly<S> {
        let n = self.dim();
        &SparsePoly::constant(n, c.box_constant().clone()) + &SparsePoly::var(n, j)
    }

    /// `N − x_j` for the cube's dimension.
    pub fn box_minus(&self, c: &ConstraintSet<S>, j: usize) -> SparsePoly<S> {
        let n = self.dim();
        &SparsePoly::constant(n, c.box_constant().clone()) - &SparsePoly::var(n, j)
    }
}

/// Vertices satisfying every inequality.
pub fn feasible_vertices<S: Scalar>(
    cube: &Hypercube<S>,
    constraints: &ConstraintSet<S>,
    cap: usize,
) -> Result<Vec<Vec<S>>, CubeError> {
    Ok(cube
        .vertices_with_cap(cap)?
        .filter(|v| constraints.is_feasible(v))
        .collect())
}

#[derive(Serialize, Deserialize)]
struct CubeJson {
    roots: Vec<[String; 2]>,
}

impl Hypercube<Rational> {
    /// `pm1:n`, `01:n`, or the JSON form `{"roots": [["-1","1"], …]}`.
    pub fn from_shorthand(spec: &str) -> Result<Self, CubeError> {
        let bad = || CubeError::BadShorthand(spec.to_string());
        let (kind, n) = spec.split_once(':').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "pm1" => Ok(Self::pm1(n)),
            "01" => Ok(Self::zero_one(n)),
            _ => Err(bad()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CubeError> {
        let raw: CubeJson = serde_json::from_str(text).map_err(|e| CubeError::Json(e.to_string()))?;
        let mut roots = Vec::with_capacity(raw.roots.len());
        for [a, b] in raw.roots {
            let a = parse_rational(&a).map_err(|e| CubeError::Json(e.to_string()))?;
            let b = parse_rational(&b).map_err(|e| CubeError::Json(e.to_string()))?;
            roots.push((a, b));
        }
        Self::new(roots)
    }

    pub fn to_json(&self) -> String {
        let raw = CubeJson {
            roots: self
                .roots
                .iter()
                .map(|(a, b)| [format_rational(a), format_rational(b)])
                .collect(),
        };
        serde_json::to_string(&raw).expect("plain data")
    }
}

#[derive(Deserialize)]
struct ConstraintJsonIn {
    #[serde(default)]
    polys: Vec<PolySource>,
    #[serde(rename = "N", default)]
    box_constant: Option<String>,
}

#[derive(Serialize)]
struct ConstraintJsonOut<'a> {
    polys: &'a [SparsePoly<Rational>],
    #[serde(rename = "N")]
    box_constant: String,
}

impl ConstraintSet<Rational> {
    /// `{"polys": [...], "N": "2"}`; each poly is a JSON polynomial or a
    /// text string.
    pub fn from_json(cube: &Hypercube<Rational>, text: &str) -> Result<Self, CubeError> {
        let raw: ConstraintJsonIn =
            serde_json::from_str(text).map_err(|e| CubeError::Json(e.to_string()))?;
        let polys = raw
            .polys
            .into_iter()
            .map(|p| p.into_poly(cube.dim()))
            .collect::<Result<Vec<_>, _>>()?;
        let nv = raw
            .box_constant
            .map(|s| parse_rational(&s).map_err(|e| CubeError::Json(e.to_string())))
            .transpose()?;
        Self::new(cube, polys, nv)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ConstraintJsonOut {
            polys: &self.inequalities,
            box_constant: format_rational(&self.box_constant),
        })
        .expect("plain data")
    }
}

/// Degree of the normal-form quotients never exceeds `deg f − 2`.
pub fn quotient_degree_ok<S: Scalar>(f: &SparsePoly<S>, nf: &NormalFormResult<S>) -> bool {
    match f.degree() {
        Degree::NegInfinity => nf.quotients.iter().all(SparsePoly::is_zero),
        Degree::Finite(d) => nf.quotients.iter().all(|q| match q.degree() {
            Degree::NegInfinity => true,
            Degree::Finite(qd) => qd + 2 <= d,
        }),
    }
}
