//! Coefficient field abstraction.
//!
//! The polynomial and hypercube layers only need field operations and an
//! ordering, so they are written against [`Scalar`]. Every certificate path
//! instantiates them with [`crate::Rational`]; `f64` and `Ratio<i64>` are
//! available for quick experiments but never enter a certificate.

use std::fmt;

use num_traits::Signed;

/// An ordered field element usable as a polynomial coefficient.
pub trait Scalar: Clone + PartialOrd + Signed + fmt::Debug + Send + Sync {}

impl<T> Scalar for T where T: Clone + PartialOrd + Signed + fmt::Debug + Send + Sync {}
