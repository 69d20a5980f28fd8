//! Exact construction, shortening and checking of SONC (sums of nonnegative
//! circuit polynomials) certificates over constrained hypercubes
//! `{a_1,b_1} × … × {a_n,b_n}`.
//!
//! The polynomial and hypercube layers are generic over a [`Scalar`]
//! coefficient field; everything that produces or checks a certificate is
//! pinned to the exact [`Rational`] instantiation.

pub mod certify;
pub mod circuit;
pub mod hypercube;
pub mod linalg;
pub mod paperchecks;
pub mod poly;
pub mod rational;
pub mod sample;
pub mod scalar;
pub mod shorten;
pub mod text;
pub mod verify;

pub use certify::{certify_hypercube, decompose_vanishing, Certificate, CertTerm, ConstraintProduct};
pub use circuit::{CircuitNumberCmp, CircuitPoly};
pub use hypercube::{ConstraintSet, Hypercube};
pub use poly::{Degree, Monomial, SparsePoly};
pub use scalar::Scalar;
pub use verify::{verify_certificate, VerifyReport};

/// Arbitrary-precision rational; the coefficient type of every certificate.
pub type Rational = num_rational::BigRational;

/// Fixed-width exact rational, for small experiments.
pub type SmallRational = num_rational::Rational64;

/// Exact polynomial.
pub type Poly = SparsePoly<Rational>;

/// Floating-point polynomial (never used for certificates).
pub type PolyF64 = SparsePoly<f64>;

/// Hypercube with exact roots.
pub type Cube = Hypercube<Rational>;
