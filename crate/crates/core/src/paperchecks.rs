//! Executable regressions for the structural results: products and affine
//! images of SONC polynomials, and the impossibility of single-multiplier
//! SONC representations of `f_a` on `{±1}^n` beyond the bound
//! `(2^n − 1)/(2^{n−2} − 1)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{CircuitNumberCmp, CircuitPoly};
use crate::hypercube::DEFAULT_VERTEX_CAP;
use crate::poly::Monomial;
use crate::rational::{frac, int};
use crate::text::parse_poly;
use crate::{Cube, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("the bound needs n ≥ 3, got {n}")]
    DimensionTooSmall { n: usize },
    #[error("dimension {n} exceeds the vertex cap {cap}")]
    DimensionTooLarge { n: usize, cap: usize },
}

/// `f_a = (a − 1) Π (x_i + 1)/2 + 1`: equal to `a` at `(1, …, 1)` and to 1
/// at every other vertex of `{±1}^n`.
pub fn build_fa(n: usize, a: &Rational) -> Poly {
    let half = frac(1, 2);
    let mut prod = Poly::one(n);
    for i in 0..n {
        let mut lin = Poly::constant(n, half.clone());
        lin.add_term(Monomial::var(n, i), half.clone());
        prod = &prod * &lin;
    }
    &prod.scale(&(a - Rational::one())) + &Poly::one(n)
}

/// `(2^n − 1) / (2^{n−2} − 1)`
pub fn putinar_bound(n: usize) -> Result<Rational, CheckError> {
    if n < 3 {
        return Err(CheckError::DimensionTooSmall { n });
    }
    let two = BigInt::from(2);
    let num = num_traits::pow(two.clone(), n) - 1;
    let den = num_traits::pow(two, n - 2) - 1;
    Ok(Rational::new(num, den))
}

/// Value histogram over `{±1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueProfile {
    pub histogram: BTreeMap<Rational, u64>,
}

impl ValueProfile {
    pub fn distinct(&self) -> usize {
        self.histogram.len()
    }

    pub fn total(&self) -> u64 {
        self.histogram.values().sum()
    }

    pub fn min_count(&self) -> u64 {
        self.histogram.values().copied().min().unwrap_or(0)
    }
}

pub fn value_profile(s: &Poly, n: usize) -> Result<ValueProfile, CheckError> {
    value_profile_with_cap(s, n, DEFAULT_VERTEX_CAP)
}

pub fn value_profile_with_cap(s: &Poly, n: usize, cap: usize) -> Result<ValueProfile, CheckError> {
    let cube = Cube::pm1(n);
    let vs = cube
        .vertices_with_cap(cap)
        .map_err(|_| CheckError::DimensionTooLarge { n, cap })?;
    let mut histogram = BTreeMap::new();
    for v in vs {
        *histogram.entry(s.evaluate(&v)).or_insert(0) += 1;
    }
    Ok(ValueProfile { histogram })
}

/// `1 + c + sign·x_i` with `c ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxAtom {
    pub i: usize,
    pub c: Rational,
    pub positive: bool,
}

impl BoxAtom {
    pub fn new(i: usize, c: Rational, positive: bool) -> Self {
        BoxAtom { i, c, positive }
    }

    pub fn to_poly(&self, n: usize) -> Poly {
        let mut p = Poly::constant(n, Rational::one() + &self.c);
        p.add_term(Monomial::var(n, self.i), if self.positive { int(1) } else { int(-1) });
        p
    }
}

/// At most two values on `{±1}^n`, each taken on exactly half the vertices
/// when there are two.
pub fn check_two_values(circuit: &CircuitPoly, n: usize) -> bool {
    let Ok(p) = value_profile(&circuit.to_poly(), n) else {
        return false;
    };
    match p.distinct() {
        1 => true,
        2 => p.histogram.values().all(|&c| c == 1 << (n - 1)),
        _ => false,
    }
}

/// For a circuit times a box atom: at most four values, each taken on at
/// least a quarter of the vertices.
pub fn check_four_values(circuit: &CircuitPoly, atom: &BoxAtom, n: usize) -> bool {
    if atom.c.is_negative() || atom.i >= n {
        return false;
    }
    let prod = &circuit.to_poly() * &atom.to_poly(n);
    let Ok(p) = value_profile(&prod, n) else {
        return false;
    };
    p.distinct() <= 4 && n >= 2 && p.min_count() >= 1 << (n - 2)
}

/// Circuit with value `w (1 + ρ χ_I(x))` on `{±1}^n`, where
/// `χ_I = Π_{i∈I} x_i`: vertices from the odd-index split of the indicator
/// of `I`, outer coefficients `w/2`, inner `ρ w`. It sits exactly on the
/// circuit-number boundary.
pub fn two_valued_circuit(n: usize, support: &[usize], rho_positive: bool, w: &Rational) -> Poly {
    let mut beta = vec![0u32; n];
    for &i in support {
        beta[i] = 1;
    }
    let beta = Monomial::new(beta);
    let (a1, a2) = crate::certify::case2_vertices(&beta);
    let half = w / int(2);
    let inner = if rho_positive { w.clone() } else { -w.clone() };
    Poly::from_terms(n, [(a1, half.clone()), (a2, half), (beta, inner)]).expect("same dimension")
}

/// Linear feasibility of `A·c ≥ b` by Fourier–Motzkin elimination.
fn fm_feasible(mut rows: Vec<(Vec<Rational>, Rational)>) -> bool {
    let k = rows.first().map_or(0, |r| r.0.len());
    for var in 0..k {
        let (zero, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r.0[var].is_zero());
        let (pos, neg): (Vec<_>, Vec<_>) = rest.into_iter().partition(|r| r.0[var].is_positive());
        let mut next = zero;
        for (pa, pb) in &pos {
            for (na, nb) in &neg {
                let sp = -&na[var];
                let sn = pa[var].clone();
                let a: Vec<Rational> = pa.iter().zip(na).map(|(x, y)| x * &sp + y * &sn).collect();
                next.push((a, pb * &sp + nb * &sn));
            }
        }
        rows = next;
    }
    rows.iter().all(|(_, b)| !b.is_positive())
}

/// Chain of facts behind the product obstruction for
/// `r = (1 − x1)²(1 − x2)²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub factors_are_boundary_circuits: bool,
    pub expansion_matches: bool,
    pub x1x2_coefficient_is_four: bool,
    pub obstruction_infeasible: bool,
}

impl ProductReport {
    pub fn passed(&self) -> bool {
        self.factors_are_boundary_circuits
            && self.expansion_matches
            && self.x1x2_coefficient_is_four
            && self.obstruction_infeasible
    }
}

pub fn product_report() -> ProductReport {
    let p1 = parse_poly("1 - 2*x1 + x1^2", Some(2)).expect("literal");
    let p2 = parse_poly("1 - 2*x2 + x2^2", Some(2)).expect("literal");
    let boundary = |p: &Poly| {
        CircuitPoly::validate(p).is_ok_and(|c| {
            c.lambdas() == [frac(1, 2), frac(1, 2)]
                && c.circuit_number_power() == Ok((2, int(4)))
                && c.circuit_number_compare() == Ok(CircuitNumberCmp::Equal)
                && c.is_nonnegative()
        })
    };
    let r = &p1 * &p2;
    let expected = parse_poly(
        "1 - 2*x1 - 2*x2 + 4*x1*x2 + x1^2 + x2^2 - 2*x1^2*x2 - 2*x1*x2^2 + x1^2*x2^2",
        Some(2),
    )
    .expect("literal");

    // Inner term −2·x1 needs a circuit on {1, x1²}; with the x1² budget 1,
    // 2 ≤ 2·sqrt(c1·1) forces c1 ≥ f_β²/(4·1). Same for x2; both draw on
    // the constant budget 1.
    let fb = int(-2);
    let x_budget = r.coeff(&Monomial::new(vec![2, 0])).cloned().unwrap_or_default();
    let c_min = &fb * &fb / (int(4) * &x_budget);
    let const_budget = r.coeff(&Monomial::one(2)).cloned().unwrap_or_default();
    let system = vec![
        (vec![int(1), int(0)], c_min.clone()),
        (vec![int(0), int(1)], c_min),
        (vec![int(-1), int(-1)], -const_budget),
    ];

    ProductReport {
        factors_are_boundary_circuits: boundary(&p1) && boundary(&p2),
        expansion_matches: r == expected && r.len() == 9,
        x1x2_coefficient_is_four: r.coeff(&Monomial::new(vec![1, 1])) == Some(&int(4)),
        obstruction_infeasible: !fm_feasible(system),
    }
}

pub fn product_regression() -> bool {
    product_report().passed()
}

/// `x1²x2²` under `x_i → 1 − x_i` is `r`; the map is an involution and the
/// identity map changes nothing.
pub fn affine_image_regression() -> bool {
    let m = parse_poly("x1^2*x2^2", Some(2)).expect("literal");
    let flip: Vec<Poly> = (0..2)
        .map(|i| &Poly::one(2) - &Poly::var(2, i))
        .collect();
    let ident: Vec<Poly> = (0..2).map(|i| Poly::var(2, i)).collect();
    let r = &parse_poly("1 - 2*x1 + x1^2", Some(2)).expect("literal")
        * &parse_poly("1 - 2*x2 + x2^2", Some(2)).expect("literal");
    let Ok(image) = m.substitute(&flip) else { return false };
    let square_ok = CircuitPoly::validate(&m).is_ok_and(|c| c.is_monomial_square());
    square_ok
        && image == r
        && m.substitute(&ident).as_ref() == Ok(&m)
        && image.substitute(&flip).as_ref() == Ok(&m)
}

/// Outcome of the aggregate argument against a candidate
/// `f_a = Σ s_k ℓ_k` on `{±1}^n` (`ℓ_k` a box atom or 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateCheck {
    /// The candidate agrees with `f_a` on every vertex.
    pub vertex_match: bool,
    /// Every circuit is nonnegative, every box atom has `c ≥ 0`, and every
    /// term satisfies the matching value-count law.
    pub terms_admissible: bool,
    /// `Σ_x Σ_k s_k(x) ℓ_k(x)`; equals `2^n − 1 + a` on a vertex match.
    pub total_sum: Rational,
    /// `2^{n−2} Σ_k s_k(e) ℓ_k(e)`.
    pub e_weighted_lower: Rational,
    /// `2^{n−2} a > 2^n − 1 + a`, i.e. `a` is above the bound.
    pub bound_refutes: bool,
}

impl AggregateCheck {
    /// No contradiction: the candidate matches, is admissible, and the
    /// aggregate inequality holds.
    pub fn consistent(&self) -> bool {
        self.vertex_match && self.terms_admissible && !self.bound_refutes && self.total_sum >= self.e_weighted_lower
    }

    /// A vertex-matching candidate refuted by the bound alone.
    pub fn refuted(&self) -> bool {
        self.vertex_match && self.bound_refutes
    }
}

pub fn aggregate_check(
    n: usize,
    a: &Rational,
    candidate_terms: &[(Poly, Option<BoxAtom>)],
) -> Result<AggregateCheck, CheckError> {
    if n < 3 {
        return Err(CheckError::DimensionTooSmall { n });
    }
    let cube = Cube::pm1(n);
    let vertices: Vec<Vec<Rational>> = cube
        .vertices()
        .map_err(|_| CheckError::DimensionTooLarge { n, cap: DEFAULT_VERTEX_CAP })?
        .collect();
    let fa = build_fa(n, a);
    let e = vec![int(1); n];
    let quarter = int(1i64 << (n - 2));

    let mut total = Poly::zero(n);
    let mut admissible = true;
    let mut total_sum = Rational::zero();
    let mut e_sum = Rational::zero();
    for (s, atom) in candidate_terms {
        if s.dim() != n {
            admissible = false;
            continue;
        }
        let circuit = CircuitPoly::validate(s).ok().filter(CircuitPoly::is_nonnegative);
        let term = match atom {
            Some(b) if b.i < n => s * &b.to_poly(n),
            Some(_) => {
                admissible = false;
                continue;
            }
            None => s.clone(),
        };
        admissible &= match (&circuit, atom) {
            (None, _) => false,
            (Some(c), None) => check_two_values(c, n),
            (Some(c), Some(b)) => check_four_values(c, b, n),
        };
        for v in &vertices {
            total_sum += term.evaluate(v);
        }
        e_sum += term.evaluate(&e);
        total = &total + &term;
    }
    let vertex_match = vertices.iter().all(|v| total.evaluate(v) == fa.evaluate(v));
    let lhs = &quarter * a;
    let rhs = int((1i64 << n) - 1) + a;
    Ok(AggregateCheck {
        vertex_match,
        terms_admissible: admissible,
        total_sum,
        e_weighted_lower: quarter * e_sum,
        bound_refutes: lhs > rhs,
    })
}

/// `true` when the aggregate argument raises no contradiction; `false` is a
/// refutation (or a candidate that does not match `f_a`).
pub fn aggregate_check_passes(n: usize, a: &Rational, candidate_terms: &[(Poly, Option<BoxAtom>)]) -> bool {
    aggregate_check(n, a, candidate_terms).is_ok_and(|c| c.consistent())
}

/// An admissible decomposition of `f_{11/3}` on `{±1}^4`: eleven boundary
/// circuits, ten of them times a box atom `1 ± x_i`.
pub fn boundary_candidate_n4() -> (Rational, Vec<(Poly, Option<BoxAtom>)>) {
    let n = 4;
    let spec: [(&[usize], bool, Option<(usize, bool)>, i64); 11] = [
        (&[0], true, Some((2, true)), 1),
        (&[0], false, Some((2, false)), 1),
        (&[0, 1], true, Some((2, true)), 2),
        (&[0, 3], true, Some((1, true)), 1),
        (&[0, 3], true, Some((2, true)), 1),
        (&[1, 2], true, Some((3, true)), 2),
        (&[1, 3], true, Some((0, true)), 2),
        (&[2, 3], true, Some((1, true)), 1),
        (&[2, 3], true, Some((1, false)), 1),
        (&[0, 1, 3], false, Some((2, false)), 1),
        (&[0, 2, 3], true, Some((1, true)), 1),
    ];
    let terms = spec
        .iter()
        .map(|(support, rho, atom, twelfths)| {
            let s = two_valued_circuit(n, support, *rho, &frac(*twelfths, 12));
            (s, atom.map(|(i, pos)| BoxAtom::new(i, Rational::zero(), pos)))
        })
        .collect();
    (frac(11, 3), terms)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
}

/// Every regression with a pass/fail line.
pub fn run_all() -> Vec<CheckRow> {
    let row = |name: &str, passed: bool| CheckRow { name: name.to_string(), passed };
    let fa_ok = {
        let f = build_fa(3, &int(8));
        f.evaluate(&[int(1), int(1), int(1)]) == int(8)
            && f.evaluate(&[int(-1), int(1), int(1)]) == int(1)
            && build_fa(3, &int(1)) == Poly::one(3)
    };
    let bound_ok = putinar_bound(4) == Ok(int(5))
        && putinar_bound(3) == Ok(int(7))
        && putinar_bound(10) == Ok(frac(1023, 255))
        && putinar_bound(2).is_err();
    let (a0, control) = boundary_candidate_n4();
    let control_ok = aggregate_check_passes(4, &a0, &control);
    let refute_ok = aggregate_check(4, &int(6), &[(build_fa(4, &int(6)), None)]).is_ok_and(|c| c.refuted())
        && !aggregate_check_passes(4, &int(6), &[(build_fa(4, &int(6)), None)]);
    let no_refute_ok = aggregate_check(4, &int(4), &[(build_fa(4, &int(4)), None)])
        .is_ok_and(|c| c.vertex_match && !c.bound_refutes);
    let empty_ok = aggregate_check(4, &int(4), &[]).is_ok_and(|c| !c.vertex_match);
    let l52 = {
        let c = CircuitPoly::validate(&parse_poly("1 + x1^2 - 2*x1", Some(2)).expect("literal")).expect("circuit");
        check_two_values(&c, 2) && check_four_values(&c, &BoxAtom::new(0, Rational::zero(), true), 2)
    };
    vec![
        row("product of circuits (r = p1 p2)", product_regression()),
        row("affine image of x1^2 x2^2", affine_image_regression()),
        row("f_a vertex values", fa_ok),
        row("putinar bound values", bound_ok),
        row("value counts on {-1,1}^n", l52),
        row("aggregate check accepts f_{11/3} boundary decomposition", control_ok),
        row("aggregate check refutes at n=4, a=6", refute_ok),
        row("aggregate bound silent at n=4, a=4", no_refute_ok),
        row("empty candidate does not match", empty_ok),
    ]
}
