//! Independent certificate checking.
//!
//! Nothing here trusts the certificate or reuses the constructor: atoms are
//! rebuilt from the cube roots with plain polynomial arithmetic, circuits are
//! re-validated from their raw coefficients (stored `λ` are ignored), and
//! the identity is checked by exact expansion.

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{Atom, CertTerm, Certificate, HYPERCUBE_FORM};
use crate::circuit::CircuitPoly;
use crate::hypercube::{ConstraintSet, DEFAULT_VERTEX_CAP, MAX_VERTEX_CAP};
use crate::poly::{Degree, Monomial};
use crate::{Cube, Poly, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest number of terms any intermediate expansion may hold.
    pub term_cap: usize,
    /// Vertex spot-checks run only for `n ≤ vertex_cap`.
    pub vertex_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { term_cap: 1 << 22, vertex_cap: DEFAULT_VERTEX_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub identity_ok: bool,
    pub circuits_ok: bool,
    pub first_failing_circuit: Option<usize>,
    pub weights_ok: bool,
    pub degree_ok: bool,
    pub recomputed_degree: Option<u32>,
    pub vertex_spotcheck_ok: bool,
    pub overall: bool,
    pub notes: Vec<String>,
}

struct Context<'a> {
    n: usize,
    cube: &'a Cube,
    constraints: &'a ConstraintSet<Rational>,
}

impl Context<'_> {
    fn linear(&self, j: usize, coef_x: i64, constant: Rational) -> Poly {
        let mut p = Poly::constant(self.n, constant);
        p.add_term(Monomial::var(self.n, j), Rational::from_integer(coef_x.into()));
        p
    }

    /// `(x_j − a_j)(x_j − b_j)`
    fn vanishing(&self, j: usize) -> Poly {
        let (a, b) = &self.cube.roots()[j];
        &self.linear(j, 1, -a.clone()) * &self.linear(j, 1, -b.clone())
    }

    fn atom(&self, atom: &Atom) -> Option<Poly> {
        let roots = self.cube.roots();
        let nb = self.constraints.box_constant();
        let j_ok = |j: usize| (j < self.n).then_some(j);
        Some(match *atom {
            Atom::One => Poly::one(self.n),
            Atom::G { j } => self.vanishing(j_ok(j)?),
            Atom::NegG { j } => -&self.vanishing(j_ok(j)?),
            Atom::BoxPlus { j } => self.linear(j_ok(j)?, 1, nb.clone()),
            Atom::BoxMinus { j } => self.linear(j_ok(j)?, -1, nb.clone()),
            Atom::Lower { j } => self.linear(j_ok(j)?, 1, -roots[j].0.clone()),
            Atom::Upper { j } => self.linear(j_ok(j)?, -1, roots[j_ok(j)?].1.clone()),
            Atom::P { i } => {
                let p = self.constraints.inequalities().get(i)?;
                (p.dim() == self.n).then(|| p.clone())?
            }
        })
    }

    fn atom_value(&self, atom: &Atom, v: &[Rational]) -> Option<Rational> {
        self.atom(atom).map(|p| p.evaluate(v))
    }

    /// The circuit as the plain sum of its listed terms.
    fn circuit_poly(&self, c: &CircuitPoly) -> Option<Poly> {
        let mut p = Poly::zero(self.n);
        for (m, q) in c.outer().iter().chain(c.inner()) {
            if m.dim() != self.n {
                return None;
            }
            p.add_term(m.clone(), q.clone());
        }
        Some(p)
    }
}

struct TermCheck {
    expanded: Option<Poly>,
    circuit_ok: bool,
    weight_ok: bool,
    degree: Option<Degree>,
    note: Option<String>,
}

fn check_term(ctx: &Context<'_>, t: &CertTerm, cap: usize) -> TermCheck {
    let weight_ok = !t.weight.is_negative() && t.scale.is_positive();
    let Some(s) = ctx.circuit_poly(&t.circuit) else {
        return TermCheck {
            expanded: None,
            circuit_ok: false,
            weight_ok,
            degree: None,
            note: Some("circuit exponent has the wrong length".into()),
        };
    };
    let circuit_ok = CircuitPoly::validate(&s).is_ok_and(|c| c.is_nonnegative());
    let atoms: Option<Vec<Poly>> = t.product.atoms().iter().map(|a| ctx.atom(a)).collect();
    let Some(atoms) = atoms else {
        return TermCheck {
            expanded: None,
            circuit_ok,
            weight_ok,
            degree: None,
            note: Some("product refers to a missing constraint or coordinate".into()),
        };
    };
    let degree = atoms.iter().try_fold(s.degree(), |acc, a| match (acc, a.degree()) {
        (Degree::Finite(x), Degree::Finite(y)) => Some(Degree::Finite(x + y)),
        _ => Some(Degree::NegInfinity),
    });
    let mut acc = s.scale(&(&t.weight * &t.scale));
    for a in &atoms {
        acc = &acc * a;
        if acc.len() > cap {
            return TermCheck {
                expanded: None,
                circuit_ok,
                weight_ok,
                degree,
                note: Some(format!("term expansion exceeds the cap of {cap} terms")),
            };
        }
    }
    TermCheck { expanded: Some(acc), circuit_ok, weight_ok, degree, note: None }
}

pub fn verify_certificate(
    f: &Poly,
    cert: &Certificate,
    cube: &Cube,
    constraints: &ConstraintSet<Rational>,
) -> VerifyReport {
    verify_certificate_with(f, cert, cube, constraints, VerifyOptions::default())
}

pub fn verify_certificate_with(
    f: &Poly,
    cert: &Certificate,
    cube: &Cube,
    constraints: &ConstraintSet<Rational>,
    opts: VerifyOptions,
) -> VerifyReport {
    let n = cube.dim();
    let ctx = Context { n, cube, constraints };
    let mut notes = Vec::new();

    let checks: Vec<TermCheck> = cert
        .terms
        .par_iter()
        .map(|t| check_term(&ctx, t, opts.term_cap))
        .collect();

    let first_failing_circuit = checks.iter().position(|c| !c.circuit_ok);
    let circuits_ok = first_failing_circuit.is_none();
    let weights_ok = checks.iter().all(|c| c.weight_ok);
    if !weights_ok {
        notes.push("negative weight or nonpositive scale".into());
    }
    for (k, c) in checks.iter().enumerate() {
        if let Some(msg) = &c.note {
            notes.push(format!("term {k}: {msg}"));
        }
    }

    let identity_ok = if f.dim() != n {
        notes.push("polynomial dimension differs from the cube".into());
        false
    } else if checks.iter().any(|c| c.expanded.is_none()) {
        false
    } else {
        let sum = checks
            .par_iter()
            .map(|c| c.expanded.clone().expect("checked above"))
            .reduce(|| Poly::zero(n), |a, b| &a + &b);
        sum.len() <= opts.term_cap && &sum - f == Poly::zero(n)
    };

    let recomputed = checks
        .iter()
        .try_fold(Degree::NegInfinity, |acc, c| c.degree.map(|d| acc.max(d)));
    let recomputed_degree = recomputed.map(|d| d.finite().unwrap_or(0));
    let mut degree_ok = match recomputed {
        None => false,
        Some(d) => d.at_most(cert.degree),
    };
    if cert.form.as_deref() == Some(HYPERCUBE_FORM) {
        let bound = n as u32 + constraints.max_degree();
        if cert.degree > bound {
            notes.push(format!("declared degree {} exceeds n + d = {bound}", cert.degree));
            degree_ok = false;
        }
    }

    let vertex_spotcheck_ok = if n > opts.vertex_cap.min(MAX_VERTEX_CAP) {
        notes.push(format!("vertex spot-check skipped for n = {n}"));
        true
    } else {
        spotcheck(&ctx, cert)
    };

    let overall = identity_ok && circuits_ok && weights_ok && degree_ok && vertex_spotcheck_ok;
    VerifyReport {
        identity_ok,
        circuits_ok,
        first_failing_circuit,
        weights_ok,
        degree_ok,
        recomputed_degree,
        vertex_spotcheck_ok,
        overall,
        notes,
    }
}

/// Every term is nonnegative at every feasible vertex.
fn spotcheck(ctx: &Context<'_>, cert: &Certificate) -> bool {
    let total = 1u64 << ctx.n;
    (0..total).into_par_iter().all(|idx| {
        let v = ctx.cube.vertex(idx);
        if !ctx.constraints.inequalities().iter().all(|p| !p.evaluate(&v).is_negative()) {
            return true;
        }
        cert.terms.iter().all(|t| {
            let Some(s) = ctx.circuit_poly(&t.circuit) else {
                return false;
            };
            let mut val = &t.weight * &t.scale * s.evaluate(&v);
            for a in t.product.atoms() {
                match ctx.atom_value(a, &v) {
                    Some(x) => val *= x,
                    None => return false,
                }
            }
            !val.is_negative()
        })
    })
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn failing(note: &str) -> Self {
        VerifyReport {
            identity_ok: false,
            circuits_ok: false,
            first_failing_circuit: None,
            weights_ok: false,
            degree_ok: false,
            recomputed_degree: None,
            vertex_spotcheck_ok: false,
            overall: false,
            notes: vec![note.to_string()],
        }
    }
}
