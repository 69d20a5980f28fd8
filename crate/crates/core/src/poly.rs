//! Sparse multivariate polynomials over a [`Scalar`] field.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is the
//! graded lexicographic order (total degree first, then lexicographic with
//! `x1 > x2 > ... > xn`). Iteration is therefore ascending in glex and the
//! leading term is the last entry. Zero coefficients are never stored, so
//! the zero polynomial is the empty map.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("substitution needs {expected} images, got {got}")]
    SubstitutionArity { expected: usize, got: usize },
}

/// Exponent vector `α ∈ ℕ^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// `x_i` (0-based index).
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Even lattice point: every entry is even.
    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    /// Indices with an odd exponent, ascending.
    pub fn odd_indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| *e % 2 == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.dim(), other.dim());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if self.dim() != other.dim() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn with_entry(&self, i: usize, value: u32) -> Monomial {
        let mut e = self.0.clone();
        e[i] = value;
        Monomial(e)
    }

    /// Value of `x^α` at `point`.
    pub fn evaluate<S: Scalar>(&self, point: &[S]) -> S {
        let mut acc = S::one();
        for (x, &e) in point.iter().zip(&self.0) {
            if e > 0 {
                acc = acc * num_traits::pow(x.clone(), e as usize);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn at_most(self, bound: u32) -> bool {
        match self {
            Degree::NegInfinity => true,
            Degree::Finite(d) => d <= bound,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<S> {
    n: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Eq> Eq for SparsePoly<S> {}

impl<S: Scalar> SparsePoly<S> {
    pub fn zero(n: usize) -> Self {
        SparsePoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self::term(Monomial::one(n), c)
    }

    /// `x_i` (0-based index).
    pub fn var(n: usize, i: usize) -> Self {
        Self::term(Monomial::var(n, i), S::one())
    }

    pub fn term(m: Monomial, c: S) -> Self {
        let mut p = Self::zero(m.dim());
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            if m.dim() != n {
                return Err(PolyError::DimensionMismatch { left: n, right: m.dim() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending glex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&S> {
        self.terms.get(m)
    }

    /// Glex-largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().next_back()
    }

    pub fn support(&self) -> BTreeSet<Monomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::degree)
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Adds `c·x^m` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: S) {
        debug_assert_eq!(m.dim(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn remove_term(&mut self, m: &Monomial) -> Option<S> {
        self.terms.remove(m)
    }

    fn check_dim(&self, other: &Self) -> Result<(), PolyError> {
        if self.n != other.n {
            return Err(PolyError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `k`.
    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        SparsePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone() * k.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &S) -> Self {
        let mut out = Self::zero(self.n);
        for (mm, cc) in &self.terms {
            out.add_term(mm.mul(m), cc.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `point`.
    ///
    /// Panics if `point.len()` differs from the dimension.
    pub fn evaluate(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.n, "evaluation point has wrong length");
        self.terms
            .iter()
            .fold(S::zero(), |acc, (m, c)| acc + c.clone() * m.evaluate(point))
    }

    /// Replaces `x_i` by `images[i]` and expands.
    pub fn substitute(&self, images: &[SparsePoly<S>]) -> Result<Self, PolyError> {
        if images.len() != self.n {
            return Err(PolyError::SubstitutionArity { expected: self.n, got: images.len() });
        }
        let target = images.first().map_or(0, |p| p.n);
        for img in images {
            if img.n != target {
                return Err(PolyError::DimensionMismatch { left: target, right: img.n });
            }
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (img, &e) in images.iter().zip(m.exponents()) {
                if e > 0 {
                    t = &t * &img.pow(e);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// True when every variable appears with exponent at most one.
    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.exponents().iter().all(|&e| e <= 1))
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparsePoly<T> {
        let mut out = SparsePoly::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<S: Scalar> Add for &SparsePoly<S> {
    type Output = SparsePoly<S>;
    fn add(self, rhs: Self) -> SparsePoly<S> {
        self.checked_add(rhs).expect("polynomial dimensions must match")
    }
}

impl<S: Scalar> Sub for &SparsePoly<S> {
    type Output = SparsePoly<S>;
    fn sub(self, rhs: Self) -> SparsePoly<S> {
        self.checked_sub(rhs).expect("polynomial dimensions must match")
    }
}

impl<S: Scalar> Mul for &SparsePoly<S> {
    type Output = SparsePoly<S>;
    fn mul(self, rhs: Self) -> SparsePoly<S> {
        self.checked_mul(rhs).expect("polynomial dimensions must match")
    }
}

impl<S: Scalar> Neg for &SparsePoly<S> {
    type Output = SparsePoly<S>;
    fn neg(self) -> SparsePoly<S> {
        self.scale(&-S::one())
    }
}
