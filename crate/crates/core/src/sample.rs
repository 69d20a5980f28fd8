//! Seeded random instances for tests, benchmarks and the CLI.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::CircuitPoly;
use crate::hypercube::ConstraintSet;
use crate::poly::Monomial;
use crate::rational::{frac, int};
use crate::{Cube, Poly, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ max_num`, `1 ≤ q ≤ max_den`.
pub fn rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    frac(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    loop {
        let q = rational(rng, max_num, max_den);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Random roots `a_j < b_j` with small numerators and denominators.
pub fn cube<R: Rng>(rng: &mut R, n: usize) -> Cube {
    let roots = (0..n)
        .map(|_| {
            let a = rational(rng, 6, 4);
            let gap = frac(rng.gen_range(1..=8), rng.gen_range(1..=4));
            let b = &a + gap;
            (a, b)
        })
        .collect();
    Cube::new(roots).expect("a < b by construction")
}

pub fn monomial<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> Monomial {
    let d = rng.gen_range(0..=max_degree);
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    Monomial::new(e)
}

/// Up to `terms` random terms of total degree `≤ max_degree`.
pub fn poly<R: Rng>(rng: &mut R, n: usize, max_degree: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(n);
    for _ in 0..terms {
        let m = monomial(rng, n, max_degree);
        p.add_term(m, nonzero_rational(rng, 9, 5));
    }
    p
}

pub fn multilinear<R: Rng>(rng: &mut R, n: usize, max_degree: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(n);
    for _ in 0..terms {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        let d = rng.gen_range(0..=max_degree.min(n as u32)) as usize;
        let mut e = vec![0u32; n];
        for &i in &idx[..d] {
            e[i] = 1;
        }
        p.add_term(Monomial::new(e), nonzero_rational(rng, 9, 5));
    }
    p
}

/// `Σ p_j g_j` with random `p_j` of degree `≤ max_quotient_degree`.
pub fn vanishing<R: Rng>(rng: &mut R, cube: &Cube, max_quotient_degree: u32, terms: usize) -> Poly {
    let n = cube.dim();
    let mut f = Poly::zero(n);
    for j in 0..n {
        if rng.gen_bool(0.3) && j + 1 < n {
            continue;
        }
        let pj = poly(rng, n, max_quotient_degree, terms);
        f = &f + &(&pj * &cube.g(j));
    }
    f
}

/// Constraint set of `m` polynomials of degree `≤ d` on the cube.
pub fn constraints<R: Rng>(rng: &mut R, cube: &Cube, m: usize, d: u32) -> ConstraintSet<Rational> {
    let n = cube.dim();
    let polys = (0..m)
        .map(|_| {
            let mut p = poly(rng, n, d, 3);
            if p.is_zero() {
                p = Poly::var(n, 0);
            }
            p
        })
        .collect();
    ConstraintSet::new(cube, polys, None).expect("dimensions agree")
}

/// Multilinear `f` shifted by a constant so that `f ≥ 0` on the feasible
/// vertices (found by enumeration), sometimes with a zero on one of them.
pub fn nonnegative_on_feasible<R: Rng>(
    rng: &mut R,
    cube: &Cube,
    cs: &ConstraintSet<Rational>,
    terms: usize,
) -> Poly {
    let n = cube.dim();
    let mut f = multilinear(rng, n, n as u32, terms);
    let min = cube
        .vertices()
        .expect("small cube")
        .filter(|v| cs.is_feasible(v))
        .map(|v| f.evaluate(&v))
        .min();
    if let Some(min) = min {
        let slack = if rng.gen_bool(0.5) { Rational::zero() } else { frac(rng.gen_range(0..4), 3) };
        if min.is_negative() || rng.gen_bool(0.3) {
            f = &f + &Poly::constant(n, slack - min);
        }
    }
    f
}

/// Random circuit with barycentric denominators dividing some `K ≤ max_k`.
///
/// Weights are `λ_j = k_j/K` with `k_last = 1`; even vertices `2u_j` are
/// chosen so that `Σ k_j u_j ≡ 0 (mod K/gcd(K, 2))`, which makes
/// `β = Σ λ_j α(j)` a lattice point. The inner coefficient is drawn around
/// the circuit number so all three comparison outcomes occur.
pub fn circuit<R: Rng>(rng: &mut R, n: usize, max_k: u32) -> CircuitPoly {
    loop {
        if let Some(c) = try_circuit(rng, n, max_k) {
            return c;
        }
    }
}

fn try_circuit<R: Rng>(rng: &mut R, n: usize, max_k: u32) -> Option<CircuitPoly> {
    let r = rng.gen_range(1..=n);
    let verts = r + 1;
    let k_total = rng.gen_range(verts as u32..=max_k.max(verts as u32));
    // composition of k_total into `verts` positive parts with the last = 1
    let mut ks = vec![1u32; verts];
    for _ in 0..(k_total - verts as u32) {
        let j = rng.gen_range(0..verts - 1);
        ks[j] += 1;
    }
    let modulus = (k_total / k_total.gcd(&2)) as i64;
    let mut us: Vec<Vec<i64>> = (0..verts).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect();
    for i in 0..n {
        let s: i64 = (0..verts - 1).map(|j| ks[j] as i64 * us[j][i]).sum();
        let need = (-s).rem_euclid(modulus);
        let extra = rng.gen_range(0..=1) * modulus;
        us[verts - 1][i] = need + extra;
    }
    let alphas: Vec<Monomial> = us
        .iter()
        .map(|u| Monomial::new(u.iter().map(|&x| 2 * x as u32).collect()))
        .collect();
    let beta: Vec<u32> = (0..n)
        .map(|i| {
            let num: i64 = (0..verts).map(|j| ks[j] as i64 * 2 * us[j][i]).sum();
            (num / k_total as i64) as u32
        })
        .collect();
    let beta = Monomial::new(beta);
    let coefs: Vec<Rational> = (0..verts).map(|_| frac(rng.gen_range(1..=9), rng.gen_range(1..=4))).collect();

    let mut theta = 1.0f64;
    for j in 0..verts {
        let l = ks[j] as f64 / k_total as f64;
        theta *= (coefs[j].to_f64()? / l).powf(l);
    }
    let fb = match rng.gen_range(0..3) {
        0 => frac(rng.gen_range(1..=9), rng.gen_range(1..=4)),
        _ => {
            let eps: f64 = rng.gen_range(-0.02..0.02);
            let t = theta * (1.0 + eps);
            let den = 1i64 << rng.gen_range(4..20);
            frac((t * den as f64).round().max(1.0) as i64, den)
        }
    };
    let fb = if rng.gen_bool(0.5) { -fb } else { fb };

    let mut p = Poly::zero(n);
    for (a, c) in alphas.iter().zip(&coefs) {
        if p.coeff(a).is_some() {
            return None;
        }
        p.add_term(a.clone(), c.clone());
    }
    if p.coeff(&beta).is_some() {
        return None;
    }
    p.add_term(beta, fb);
    let c = CircuitPoly::validate(&p).ok()?;
    (c.lambdas().len() == verts && c.inner().is_some()).then_some(c)
}

/// Random nonnegative circuit with barycentric denominators dividing some
/// `K ≤ 6`.
pub fn pm1_circuit<R: Rng>(rng: &mut R, n: usize) -> CircuitPoly {
    loop {
        let c = circuit(rng, n, 6);
        if c.is_nonnegative() {
            return c;
        }
        // scale the inner term down to the safe side
        let (beta, fb) = c.inner().cloned().expect("generated with inner term");
        let mut p = c.to_poly();
        p.remove_term(&beta);
        p.add_term(beta, fb / int(4));
        if let Ok(c2) = CircuitPoly::validate(&p) {
            if c2.is_nonnegative() {
                return c2;
            }
        }
    }
}
