//! SONC certificates over constrained hypercubes.
//!
//! A certificate is a list of terms `weight · scale · s · Π atoms` whose sum
//! is the target polynomial, with `s` a nonnegative circuit polynomial and
//! every atom nonnegative on the feasible vertices (`±g_j` vanish there).

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{CircuitError, CircuitPoly};
use crate::hypercube::{ConstraintSet, CubeError, LinearFactor};
use crate::poly::{Degree, Monomial};
use crate::rational::{format_rational, serde_str};
use crate::{Cube, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("f is negative on the feasible vertex {0:?}")]
    NegativeOnFeasibleVertex(Vec<String>),
    #[error("f is negative at {0:?} but no constraint is violated there")]
    NoViolatedConstraint(Vec<String>),
    #[error("polynomial does not vanish on the hypercube")]
    DoesNotVanish,
    #[error("degree {degree} exceeds the dimension {n}; reduce first")]
    DegreeExceedsDimension { degree: u32, n: usize },
    #[error("dimension mismatch: cube has {cube} variables, polynomial has {poly}")]
    DimensionMismatch { cube: usize, poly: usize },
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error("internal circuit construction failed: {0}")]
    Circuit(#[from] CircuitError),
}

fn show_vertex(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

/// A factor of a constraint product. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Atom {
    #[serde(rename = "ONE")]
    One,
    /// `g_j`
    #[serde(rename = "G")]
    G { j: usize },
    /// `−g_j`
    #[serde(rename = "NEG_G")]
    NegG { j: usize },
    /// `N + x_j`
    #[serde(rename = "BOXPLUS")]
    BoxPlus { j: usize },
    /// `N − x_j`
    #[serde(rename = "BOXMINUS")]
    BoxMinus { j: usize },
    /// `x_j − a_j`
    #[serde(rename = "LOWER")]
    Lower { j: usize },
    /// `b_j − x_j`
    #[serde(rename = "UPPER")]
    Upper { j: usize },
    /// `p_i`
    #[serde(rename = "P")]
    P { i: usize },
}

impl From<LinearFactor> for Atom {
    fn from(f: LinearFactor) -> Atom {
        match f {
            LinearFactor::Lower(j) => Atom::Lower { j },
            LinearFactor::Upper(j) => Atom::Upper { j },
        }
    }
}

impl Atom {
    pub fn expand(self, cube: &Cube, constraints: &ConstraintSet<Rational>) -> Option<Poly> {
        let n = cube.dim();
        let in_cube = |j: usize| (j < n).then_some(());
        Some(match self {
            Atom::One => Poly::one(n),
            Atom::G { j } => {
                in_cube(j)?;
                cube.g(j)
            }
            Atom::NegG { j } => {
                in_cube(j)?;
                -&cube.g(j)
            }
            Atom::BoxPlus { j } => {
                in_cube(j)?;
                cube.box_plus(constraints, j)
            }
            Atom::BoxMinus { j } => {
                in_cube(j)?;
                cube.box_minus(constraints, j)
            }
            Atom::Lower { j } => {
                in_cube(j)?;
                LinearFactor::Lower(j).to_poly(cube)
            }
            Atom::Upper { j } => {
                in_cube(j)?;
                LinearFactor::Upper(j).to_poly(cube)
            }
            Atom::P { i } => constraints.inequalities().get(i)?.clone(),
        })
    }
}

/// Multiset of atoms, kept sorted; `ONE` atoms are implicit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstraintProduct {
    atoms: Vec<Atom>,
}

impl ConstraintProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut atoms: Vec<Atom> = atoms.into_iter().filter(|a| *a != Atom::One).collect();
        atoms.sort();
        ConstraintProduct { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn expand(&self, cube: &Cube, constraints: &ConstraintSet<Rational>) -> Option<Poly> {
        self.atoms.iter().try_fold(Poly::one(cube.dim()), |acc, a| {
            Some(&acc * &a.expand(cube, constraints)?)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertTerm {
    #[serde(with = "serde_str")]
    pub weight: Rational,
    #[serde(with = "serde_str", default = "Rational::one")]
    pub scale: Rational,
    pub circuit: CircuitPoly,
    pub product: ConstraintProduct,
}

impl CertTerm {
    pub fn coefficient(&self) -> Rational {
        &self.weight * &self.scale
    }
}

/// Form tag for certificates built over a hypercube with the degree claim
/// `degree ≤ n + d`.
pub const HYPERCUBE_FORM: &str = "hypercube";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub terms: Vec<CertTerm>,
}

impl Certificate {
    pub fn new(degree: u32, terms: Vec<CertTerm>) -> Self {
        let mut c = Certificate { degree, form: None, seed: None, terms };
        c.normalize();
        c
    }

    /// Drops zero-weight terms and sorts by (product, circuit support).
    pub fn normalize(&mut self) {
        self.terms.retain(|t| !t.weight.is_zero());
        self.terms
            .sort_by_cached_key(|t| (t.product.clone(), t.circuit.support_key()));
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// `Σ weight · scale · circuit · product`; `None` on a dangling index.
    pub fn expand(&self, cube: &Cube, constraints: &ConstraintSet<Rational>) -> Option<Poly> {
        let mut acc = Poly::zero(cube.dim());
        for t in &self.terms {
            let p = t.product.expand(cube, constraints)?;
            acc = &acc + &(&t.circuit.to_poly().scale(&t.coefficient()) * &p);
        }
        Some(acc)
    }
}

/// One summand `circuit · sign · g_j`, optionally times a linear factor.
#[derive(Debug, Clone, PartialEq)]
pub struct VanishingTerm {
    pub circuit: CircuitPoly,
    pub sign: i8,
    pub j: usize,
    pub linear: Option<LinearFactor>,
}

impl VanishingTerm {
    pub fn product(&self) -> ConstraintProduct {
        let g = if self.sign > 0 { Atom::G { j: self.j } } else { Atom::NegG { j: self.j } };
        ConstraintProduct::new(std::iter::once(g).chain(self.linear.map(Atom::from)))
    }

    pub fn to_poly(&self, cube: &Cube) -> Poly {
        let mut g = cube.g(self.j);
        if self.sign < 0 {
            g = -&g;
        }
        if let Some(l) = self.linear {
            g = &g * &l.to_poly(cube);
        }
        &self.circuit.to_poly() * &g
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VanishingDecomposition {
    pub terms: Vec<VanishingTerm>,
}

impl VanishingDecomposition {
    pub fn to_poly(&self, cube: &Cube) -> Poly {
        self.terms
            .iter()
            .fold(Poly::zero(cube.dim()), |acc, t| &acc + &t.to_poly(cube))
    }

    pub fn max_circuit_degree(&self) -> Degree {
        self.terms
            .iter()
            .map(|t| t.circuit.degree())
            .max()
            .unwrap_or(Degree::NegInfinity)
    }
}

/// `(α(1), α(2))` for an exponent with odd coordinates: the odd indices,
/// ascending, are split after the first `⌈k/2⌉`; `α(1)` rounds the first
/// part up and the rest down, `α(2)` the other way round.
pub fn case2_vertices(beta: &Monomial) -> (Monomial, Monomial) {
    let odd = beta.odd_indices();
    let h = odd.len().div_ceil(2);
    let mut a1 = beta.exponents().to_vec();
    let mut a2 = a1.clone();
    for (pos, &i) in odd.iter().enumerate() {
        if pos < h {
            a1[i] += 1;
            a2[i] -= 1;
        } else {
            a1[i] -= 1;
            a2[i] += 1;
        }
    }
    (Monomial::new(a1), Monomial::new(a2))
}

/// Writes `coef · x^beta · (±g_j) · linear` as nonnegative circuits times
/// `±g_j · linear`.
fn push_monomial(
    out: &mut Vec<VanishingTerm>,
    beta: &Monomial,
    coef: &Rational,
    j: usize,
    linear: Option<LinearFactor>,
) -> Result<(), CertifyError> {
    if beta.is_even() {
        let sign = if coef.is_positive() { 1 } else { -1 };
        let circuit = CircuitPoly::monomial_square(beta.clone(), coef.abs())?;
        out.push(VanishingTerm { circuit, sign, j, linear });
        return Ok(());
    }
    let (a1, a2) = case2_vertices(beta);
    let abs = coef.abs();
    let n = beta.dim();
    let s = Poly::from_terms(
        n,
        [(a1.clone(), abs.clone()), (a2.clone(), abs.clone()), (beta.clone(), coef.clone())],
    )
    .expect("same dimension");
    out.push(VanishingTerm { circuit: CircuitPoly::validate(&s)?, sign: 1, j, linear });
    out.push(VanishingTerm {
        circuit: CircuitPoly::monomial_square(a1, abs.clone())?,
        sign: -1,
        j,
        linear,
    });
    out.push(VanishingTerm { circuit: CircuitPoly::monomial_square(a2, abs)?, sign: -1, j, linear });
    Ok(())
}

/// Decomposes a polynomial vanishing on every vertex into
/// `Σ s_j g_j + Σ s'_j (−g_j)` with nonnegative circuits, one monomial of
/// each normal-form quotient at a time.
pub fn decompose_vanishing(f: &Poly, cube: &Cube) -> Result<VanishingDecomposition, CertifyError> {
    decompose_vanishing_within(f, cube, None)
}

/// As [`decompose_vanishing`], but keeps `deg(circuit · g_j · linear)` within
/// `budget`. An odd number of odd coordinates raises the circuit degree by
/// one; when that would break the budget, one odd coordinate `x_i` is
/// replaced by `(b_i (x_i − a_i) + a_i (b_i − x_i)) / (b_i − a_i)`, leaving
/// an even count of odd coordinates and a linear multiplier.
pub fn decompose_vanishing_within(
    f: &Poly,
    cube: &Cube,
    budget: Option<u32>,
) -> Result<VanishingDecomposition, CertifyError> {
    if f.dim() != cube.dim() {
        return Err(CertifyError::DimensionMismatch { cube: cube.dim(), poly: f.dim() });
    }
    let nf = cube.normal_form(f)?;
    if !nf.remainder.is_zero() {
        return Err(CertifyError::DoesNotVanish);
    }
    let mut out = Vec::new();
    for (j, q) in nf.quotients.iter().enumerate() {
        for (beta, coef) in q.terms() {
            let odd = beta.odd_indices();
            let over = budget.is_some_and(|b| odd.len() % 2 == 1 && beta.degree() + 3 > b);
            if !over {
                push_monomial(&mut out, beta, coef, j, None)?;
                continue;
            }
            let i = odd[0];
            let rest = beta.with_entry(i, beta.exponents()[i] - 1);
            let (a, b) = &cube.roots()[i];
            let width = b - a;
            for (factor, w) in [(LinearFactor::Lower(i), b), (LinearFactor::Upper(i), a)] {
                let c = coef * w / &width;
                if !c.is_zero() {
                    push_monomial(&mut out, &rest, &c, j, Some(factor))?;
                }
            }
        }
    }
    Ok(VanishingDecomposition { terms: out })
}

/// Smallest index `i` with `p_i(v) < 0`.
pub fn tie_break_pv(v: &[Rational], constraints: &ConstraintSet<Rational>) -> Result<usize, CertifyError> {
    constraints
        .first_violated(v)
        .ok_or_else(|| CertifyError::NoViolatedConstraint(show_vertex(v)))
}

/// Degree `n + d` certificate of `f ≥ 0` on the feasible vertices.
///
/// Vertex values go into `c_v δ_v` (times `p_v` at infeasible vertices where
/// `f(v) < 0`), and the residual, which vanishes on the cube, is decomposed
/// by [`decompose_vanishing_within`] with budget `n + d`.
pub fn certify_hypercube(
    f: &Poly,
    cube: &Cube,
    constraints: &ConstraintSet<Rational>,
) -> Result<Certificate, CertifyError> {
    certify_hypercube_with_cap(f, cube, constraints, crate::hypercube::DEFAULT_VERTEX_CAP)
}

pub fn certify_hypercube_with_cap(
    f: &Poly,
    cube: &Cube,
    constraints: &ConstraintSet<Rational>,
    cap: usize,
) -> Result<Certificate, CertifyError> {
    let n = cube.dim();
    if f.dim() != n {
        return Err(CertifyError::DimensionMismatch { cube: n, poly: f.dim() });
    }
    if let Degree::Finite(d) = f.degree() {
        if d as usize > n {
            return Err(CertifyError::DegreeExceedsDimension { degree: d, n });
        }
    }
    cube.check_cap(cap)?;
    let declared = n as u32 + constraints.max_degree();
    let unit = CircuitPoly::monomial_square(Monomial::one(n), Rational::one())?;

    let vertex_terms: Vec<(CertTerm, Poly)> = (0..cube.vertex_count())
        .into_par_iter()
        .map(|idx| -> Result<Option<(CertTerm, Poly)>, CertifyError> {
            let v = cube.vertex(idx);
            let fv = f.evaluate(&v);
            let (weight, p_index) = if constraints.is_feasible(&v) {
                if fv.is_negative() {
                    return Err(CertifyError::NegativeOnFeasibleVertex(show_vertex(&v)));
                }
                (fv, None)
            } else if fv.is_negative() {
                let i = tie_break_pv(&v, constraints)?;
                let pv = constraints.inequalities()[i].evaluate(&v);
                (fv / pv, Some(i))
            } else {
                (fv, None)
            };
            if weight.is_zero() {
                return Ok(None);
            }
            let delta = cube.delta_factored(idx);
            let mut expanded = delta.expand(cube).scale(&weight);
            if let Some(i) = p_index {
                expanded = &expanded * &constraints.inequalities()[i];
            }
            let atoms = delta
                .factors
                .iter()
                .map(|&f| Atom::from(f))
                .chain(p_index.map(|i| Atom::P { i }));
            let term = CertTerm {
                weight,
                scale: delta.scale,
                circuit: unit.clone(),
                product: ConstraintProduct::new(atoms),
            };
            Ok(Some((term, expanded)))
        })
        .filter_map(Result::transpose)
        .collect::<Result<_, _>>()?;

    let mut residual = f.clone();
    let mut terms = Vec::with_capacity(vertex_terms.len());
    for (t, e) in vertex_terms {
        residual = &residual - &e;
        terms.push(t);
    }

    let dec = decompose_vanishing_within(&residual, cube, Some(declared))?;
    for vt in dec.terms {
        let product = vt.product();
        terms.push(CertTerm {
            weight: Rational::one(),
            scale: Rational::one(),
            circuit: vt.circuit,
            product,
        });
    }
    let mut cert = Certificate::new(declared, terms);
    cert.form = Some(HYPERCUBE_FORM.to_string());
    Ok(cert)
}

/// Degree of `circuit · product` without expanding it.
pub fn term_degree(t: &CertTerm, constraints: &ConstraintSet<Rational>) -> Degree {
    let Degree::Finite(mut d) = t.circuit.degree() else {
        return Degree::NegInfinity;
    };
    for a in t.product.atoms() {
        d += match a {
            Atom::One => 0,
            Atom::G { .. } | Atom::NegG { .. } => 2,
            Atom::P { i } => match constraints.inequalities().get(*i).map(Poly::degree) {
                Some(Degree::Finite(pd)) => pd,
                _ => return Degree::NegInfinity,
            },
            _ => 1,
        };
    }
    Degree::Finite(d)
}
