//! Carathéodory pruning of certificates.
//!
//! Terms sharing a constraint product are a conic combination of circuit
//! polynomials living in the space of polynomials of degree `≤ cap`, so at
//! most `dim + 1` of them are needed, `dim = C(n + cap, cap)`. Each step
//! finds an exact kernel vector of the lifted coefficient matrix and moves
//! the weights along it until one reaches zero.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::certify::{CertTerm, Certificate, ConstraintProduct};
use crate::circuit::CircuitPoly;
use crate::linalg;
use crate::poly::{Degree, Monomial};
use crate::Rational;

/// Terms bucketed by constraint product.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedCert {
    pub degree: u32,
    pub form: Option<String>,
    pub seed: Option<u64>,
    pub groups: BTreeMap<ConstraintProduct, Vec<CertTerm>>,
}

impl GroupedCert {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let mut groups: BTreeMap<ConstraintProduct, Vec<CertTerm>> = BTreeMap::new();
        for t in &cert.terms {
            groups.entry(t.product.clone()).or_default().push(t.clone());
        }
        GroupedCert { degree: cert.degree, form: cert.form.clone(), seed: cert.seed, groups }
    }

    pub fn into_certificate(self) -> Certificate {
        let terms = self.groups.into_values().flatten().collect();
        let mut c = Certificate::new(self.degree, terms);
        c.form = self.form;
        c.seed = self.seed;
        c
    }
}

/// `C(n + d, d)`, saturating at `usize::MAX`.
pub fn monomial_count(n: usize, d: u32) -> usize {
    let mut acc = BigUint::one();
    for k in 1..=d as usize {
        acc = acc * BigUint::from(n + k) / BigUint::from(k);
    }
    acc.to_usize().unwrap_or(usize::MAX)
}

/// Sums the weights of identical circuits, keeping first occurrences in
/// order.
fn merge_duplicates(terms: Vec<(Rational, CircuitPoly)>) -> Vec<(Rational, CircuitPoly)> {
    let mut out: Vec<(Rational, CircuitPoly)> = Vec::with_capacity(terms.len());
    let mut seen: BTreeMap<Vec<(Vec<u32>, Rational)>, usize> = BTreeMap::new();
    for (w, c) in terms {
        let key: Vec<(Vec<u32>, Rational)> = c
            .to_poly()
            .terms()
            .map(|(m, q)| (m.exponents().to_vec(), q.clone()))
            .collect();
        match seen.get(&key) {
            Some(&i) => out[i].0 += w,
            None => {
                seen.insert(key, out.len());
                out.push((w, c));
            }
        }
    }
    out
}

/// Coefficient rows (one per monomial) plus the all-ones lift row for the
/// given columns.
fn lifted_matrix(terms: &[(Rational, CircuitPoly)], cols: &[usize]) -> Vec<Vec<Rational>> {
    let polys: Vec<_> = cols.iter().map(|&i| terms[i].1.to_poly()).collect();
    let monos: BTreeSet<Monomial> = polys.iter().flat_map(|p| p.support()).collect();
    let mut rows: Vec<Vec<Rational>> = monos
        .iter()
        .map(|m| polys.iter().map(|p| p.coeff(m).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    rows.push(vec![Rational::one(); cols.len()]);
    rows
}

/// A kernel vector on a window of columns: columns are added until they
/// outnumber the rows, which forces a dependency.
fn find_dependency(terms: &[(Rational, CircuitPoly)]) -> Option<(Vec<usize>, Vec<Rational>)> {
    let mut cols = Vec::new();
    let mut monos: BTreeSet<Monomial> = BTreeSet::new();
    for i in 0..terms.len() {
        cols.push(i);
        monos.extend(terms[i].1.to_poly().support());
        if cols.len() > monos.len() + 1 {
            break;
        }
    }
    let a = lifted_matrix(terms, &cols);
    linalg::kernel_vector(&a).map(|g| (cols, g))
}

/// Reduces a positive combination of circuits to at most
/// `C(n + degree_cap, degree_cap) + 1` terms with the same sum.
pub fn caratheodory_prune(
    terms: Vec<(Rational, CircuitPoly)>,
    n: usize,
    degree_cap: u32,
) -> Vec<(Rational, CircuitPoly)> {
    let limit = monomial_count(n, degree_cap).saturating_add(1);
    let mut terms = merge_duplicates(terms);
    while terms.len() > limit {
        let Some((cols, mut gamma)) = find_dependency(&terms) else {
            break;
        };
        if !gamma.iter().any(Signed::is_positive) {
            gamma.iter_mut().for_each(|g| *g = -g.clone());
        }
        let mut best: Option<(usize, Rational)> = None;
        for (k, g) in gamma.iter().enumerate() {
            if g.is_positive() {
                let t = &terms[cols[k]].0 / g;
                if best.as_ref().is_none_or(|(_, b)| t < *b) {
                    best = Some((k, t));
                }
            }
        }
        let (blocking, t) = best.expect("lift row forces a positive entry");
        for (k, g) in gamma.iter().enumerate() {
            let w = &mut terms[cols[k]].0;
            *w -= &t * g;
        }
        terms[cols[blocking]].0 = Rational::zero();
        terms.retain(|(w, _)| !w.is_zero());
    }
    terms
}

fn group_cap(terms: &[CertTerm]) -> u32 {
    terms
        .iter()
        .filter_map(|t| match t.circuit.degree() {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        })
        .max()
        .unwrap_or(0)
}

/// Prunes every product group; `degree_cap` defaults to the group's largest
/// circuit degree. Groups that need no change keep their original terms.
pub fn shorten_certificate_with_cap(cert: &Certificate, n: usize, degree_cap: Option<u32>) -> Certificate {
    let mut grouped = GroupedCert::from_certificate(cert);
    let pruned: Vec<(ConstraintProduct, Vec<CertTerm>)> = std::mem::take(&mut grouped.groups)
        .into_par_iter()
        .map(|(product, terms)| {
            let cap = degree_cap.unwrap_or_else(|| group_cap(&terms));
            let before = terms.len();
            let input = terms
                .iter()
                .filter(|t| !t.weight.is_zero())
                .map(|t| (t.coefficient(), t.circuit.clone()))
                .collect();
            let out = caratheodory_prune(input, n, cap);
            if out.len() == before {
                return (product, terms);
            }
            let new_terms = out
                .into_iter()
                .map(|(w, circuit)| CertTerm {
                    weight: w,
                    scale: Rational::one(),
                    circuit,
                    product: product.clone(),
                })
                .collect();
            (product, new_terms)
        })
        .collect();
    grouped.groups = pruned.into_iter().collect();
    grouped.into_certificate()
}

pub fn shorten_certificate(cert: &Certificate, n: usize) -> Certificate {
    shorten_certificate_with_cap(cert, n, None)
}
