//! Circuit polynomials and their exact nonnegativity test.
//!
//! A circuit polynomial has outer terms `f_α(j) x^α(j)` (positive
//! coefficients, even exponents forming the vertices of a simplex) and at
//! most one inner term `f_β x^β` with `β` strictly inside the simplex. Its
//! circuit number is `Θ = Π (f_α(j)/λ_j)^λ_j`, with `λ` the barycentric
//! coordinates of `β`. Nonnegativity is decided by comparing `|f_β|` to `Θ`
//! without leaving the rationals: with `D` the common denominator of the
//! `λ_j`, both sides are raised to the power `D`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg;
use crate::poly::{Degree, Monomial};
use crate::rational::{pow_rational, serde_str, serde_str_vec};
use crate::{Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("the zero polynomial is not a circuit")]
    ZeroPolynomial,
    #[error("outer exponents are not affinely independent")]
    NotASimplex,
    #[error("vertex exponent {0:?} is not even")]
    VertexNotEven(Vec<u32>),
    #[error("inner exponent is not strictly inside the simplex")]
    InnerNotStrictlyInterior,
    #[error("more than one term lies off the simplex vertices")]
    TooManyInnerTerms,
    #[error("outer coefficient of {0:?} is not positive")]
    NegativeOuterCoefficient(Vec<u32>),
    #[error("circuit has no inner term")]
    NoInnerTerm,
}

/// Result of comparing `|f_β|` with the circuit number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CircuitNumberCmp {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for CircuitNumberCmp {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => CircuitNumberCmp::Less,
            Ordering::Equal => CircuitNumberCmp::Equal,
            Ordering::Greater => CircuitNumberCmp::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitPoly {
    n: usize,
    outer: Vec<(Monomial, Rational)>,
    inner: Option<(Monomial, Rational)>,
    lambdas: Vec<Rational>,
}

fn affinely_independent(points: &[&Monomial]) -> bool {
    let Some((first, rest)) = points.split_first() else {
        return true;
    };
    let rows: Vec<Vec<BigInt>> = rest
        .iter()
        .map(|p| {
            p.exponents()
                .iter()
                .zip(first.exponents())
                .map(|(a, b)| BigInt::from(*a) - BigInt::from(*b))
                .collect()
        })
        .collect();
    linalg::rank(&rows) == rest.len()
}

/// Solves `[α(0) … α(r); 1 … 1]·λ = [β; 1]`.
fn barycentric(vertices: &[&Monomial], beta: &Monomial) -> Option<Vec<Rational>> {
    let n = beta.dim();
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for i in 0..n {
        a.push(
            vertices
                .iter()
                .map(|v| Rational::from_integer(v.exponents()[i].into()))
                .collect(),
        );
        b.push(Rational::from_integer(beta.exponents()[i].into()));
    }
    a.push(vec![Rational::one(); vertices.len()]);
    b.push(Rational::one());
    linalg::solve_unique(&a, &b)
}

impl CircuitPoly {
    /// Recognises `candidate` as a circuit polynomial and computes `λ`.
    ///
    /// A single even term with positive coefficient is a monomial square.
    /// Several even positive terms on affinely independent exponents and no
    /// inner term are accepted as a degenerate circuit (trivially
    /// nonnegative).
    pub fn validate(candidate: &Poly) -> Result<CircuitPoly, CircuitError> {
        let n = candidate.dim();
        let terms: Vec<(Monomial, Rational)> =
            candidate.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        if terms.is_empty() {
            return Err(CircuitError::ZeroPolynomial);
        }
        let vertex_like = |(m, c): &(Monomial, Rational)| m.is_even() && c.is_positive();
        if terms.len() == 1 {
            let (m, c) = &terms[0];
            if !m.is_even() {
                return Err(CircuitError::VertexNotEven(m.exponents().to_vec()));
            }
            if !c.is_positive() {
                return Err(CircuitError::NegativeOuterCoefficient(m.exponents().to_vec()));
            }
            return Ok(CircuitPoly { n, outer: terms, inner: None, lambdas: Vec::new() });
        }

        let off: Vec<usize> = (0..terms.len()).filter(|&i| !vertex_like(&terms[i])).collect();
        if off.len() >= 2 {
            return Err(CircuitError::TooManyInnerTerms);
        }
        if off.is_empty() {
            let all: Vec<&Monomial> = terms.iter().map(|(m, _)| m).collect();
            if affinely_independent(&all) {
                return Ok(CircuitPoly { n, outer: terms, inner: None, lambdas: Vec::new() });
            }
        }
        let candidates: Vec<usize> = if off.is_empty() { (0..terms.len()).collect() } else { off };

        let mut err = CircuitError::NotASimplex;
        for idx in candidates {
            let vertices: Vec<&Monomial> = terms
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != idx)
                .map(|(_, (m, _))| m)
                .collect();
            if vertices.len() > n + 1 || !affinely_independent(&vertices) {
                continue;
            }
            match barycentric(&vertices, &terms[idx].0) {
                Some(l) if l.iter().all(Signed::is_positive) => {
                    let inner = terms[idx].clone();
                    let outer = terms
                        .into_iter()
                        .enumerate()
                        .filter(|(i, _)| *i != idx)
                        .map(|(_, t)| t)
                        .collect();
                    return Ok(CircuitPoly { n, outer, inner: Some(inner), lambdas: l });
                }
                _ => err = CircuitError::InnerNotStrictlyInterior,
            }
        }
        Err(err)
    }

    /// Builds a circuit from stored parts without any checking; used when
    /// reading certificates, which the verifier re-validates.
    pub fn from_parts_unchecked(
        n: usize,
        outer: Vec<(Monomial, Rational)>,
        inner: Option<(Monomial, Rational)>,
        lambdas: Vec<Rational>,
    ) -> CircuitPoly {
        CircuitPoly { n, outer, inner, lambdas }
    }

    /// `c·x^m` with `m` even and `c > 0`.
    pub fn monomial_square(m: Monomial, c: Rational) -> Result<CircuitPoly, CircuitError> {
        CircuitPoly::validate(&Poly::term(m, c))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn outer(&self) -> &[(Monomial, Rational)] {
        &self.outer
    }

    pub fn inner(&self) -> Option<&(Monomial, Rational)> {
        self.inner.as_ref()
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn is_monomial_square(&self) -> bool {
        self.inner.is_none() && self.outer.len() == 1
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::zero(self.n);
        for (m, c) in self.outer.iter().chain(self.inner.iter()) {
            if m.dim() == self.n {
                p.add_term(m.clone(), c.clone());
            }
        }
        p
    }

    pub fn degree(&self) -> Degree {
        self.to_poly().degree()
    }

    /// Sorted exponent list, used as an ordering key.
    pub fn support_key(&self) -> Vec<Vec<u32>> {
        let mut k: Vec<Vec<u32>> = self
            .outer
            .iter()
            .chain(self.inner.iter())
            .map(|(m, _)| m.exponents().to_vec())
            .collect();
        k.sort();
        k
    }

    /// `(D, Θ^D)` where `D` is the least common denominator of the `λ_j`.
    pub fn circuit_number_power(&self) -> Result<(u64, Rational), CircuitError> {
        if self.inner.is_none() {
            return Err(CircuitError::NoInnerTerm);
        }
        let d = self
            .lambdas
            .iter()
            .fold(BigInt::one(), |acc, l| acc.lcm(l.denom()));
        let d_u = d.to_u64().expect("barycentric denominator fits in u64");
        let mut theta_pow = Rational::one();
        for ((_, f), l) in self.outer.iter().zip(&self.lambdas) {
            let e = (l * Rational::from_integer(d.clone())).to_integer();
            let base = f / l;
            theta_pow *= pow_rational(&base, e.to_u64().expect("exponent fits in u64"));
        }
        Ok((d_u, theta_pow))
    }

    /// Exact comparison of `|f_β|` against `Θ`.
    pub fn circuit_number_compare(&self) -> Result<CircuitNumberCmp, CircuitError> {
        let (d, theta_pow) = self.circuit_number_power()?;
        let fb = &self.inner.as_ref().expect("checked above").1;
        let lhs = pow_rational(&fb.abs(), d);
        Ok(lhs.cmp(&theta_pow).into())
    }

    /// Nonnegativity on all of `ℝ^n`.
    pub fn is_nonnegative(&self) -> bool {
        let Some((beta, fb)) = &self.inner else {
            return true;
        };
        if beta.is_even() && !fb.is_negative() {
            return true;
        }
        self.circuit_number_compare()
            .map(|c| c != CircuitNumberCmp::Greater)
            .unwrap_or(false)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    #[serde(with = "serde_str")]
    coef: Rational,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    outer: Vec<TermJson>,
    inner: Option<TermJson>,
    #[serde(with = "serde_str_vec", default)]
    lambda: Vec<Rational>,
}

impl Serialize for CircuitPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let t = |(m, c): &(Monomial, Rational)| TermJson { exp: m.exponents().to_vec(), coef: c.clone() };
        CircuitJson {
            outer: self.outer.iter().map(t).collect(),
            inner: self.inner.as_ref().map(t),
            lambda: self.lambdas.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircuitPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = CircuitJson::deserialize(d)?;
        let n = raw
            .outer
            .first()
            .map(|t| t.exp.len())
            .ok_or_else(|| D::Error::custom("circuit needs at least one outer term"))?;
        let t = |t: TermJson| (Monomial::new(t.exp), t.coef);
        Ok(CircuitPoly::from_parts_unchecked(
            n,
            raw.outer.into_iter().map(t).collect(),
            raw.inner.map(t),
            raw.lambda,
        ))
    }
}
