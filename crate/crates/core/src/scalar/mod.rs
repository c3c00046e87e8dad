//! Ground-field backends.
//!
//! Every algebraic routine in the crate is generic over [`Scalar`]. Three
//! backends are provided:
//!
//! * [`Rational`]: exact arbitrary-precision rationals, the default for
//!   every structural check.
//! * [`Complex64`]: binary64 complex numbers. Equality is decided against a
//!   tolerance that is passed in by the caller and never stored in values.
//! * [`Cyclotomic`]: exact elements of a cyclotomic field `Q(ζ_N)`.
//!
//! Backends never mix: algebras, vectors and matrices are parameterised by a
//! single scalar type, and conversions are explicit.

mod complex;
mod cyclotomic;
mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

pub use cyclotomic::Cyclotomic;
pub use num_complex::Complex64;
pub use rational::{parse_rational, Rational};

use crate::error::Error;

/// Default absolute/relative tolerance used by the floating backend.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Comparison tolerance carried by a computation context.
///
/// Exact backends ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol(pub f64);

impl Default for Tol {
    fn default() -> Self {
        Tol(DEFAULT_TOL)
    }
}

impl Tol {
    pub fn new(value: f64) -> Result<Self, Error> {
        if value > 0.0 && value.is_finite() {
            Ok(Tol(value))
        } else {
            Err(Error::InvalidInput(format!(
                "tolerance must be positive, got {value}"
            )))
        }
    }
}

/// Runtime tag naming a scalar backend, as used in the JSON schemas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Rational,
    Complex,
    Cyclotomic(u32),
}

impl ScalarKind {
    /// Smallest kind able to hold values of both kinds without coercion.
    pub fn join(self, other: ScalarKind) -> Result<ScalarKind, Error> {
        use ScalarKind::*;
        match (self, other) {
            (Rational, Rational) => Ok(Rational),
            (Complex, Complex) => Ok(Complex),
            (Cyclotomic(a), Cyclotomic(b)) => {
                let l = num_integer::lcm(a.max(1), b.max(1));
                if l == a.max(1) || l == b.max(1) {
                    Ok(Cyclotomic(l))
                } else {
                    Err(Error::BackendMismatch(format!(
                        "cyclotomic conductors {a} and {b} are not nested"
                    )))
                }
            }
            (a, b) => Err(Error::BackendMismatch(format!("{a} vs {b}"))),
        }
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => write!(f, "rational"),
            ScalarKind::Complex => write!(f, "complex"),
            ScalarKind::Cyclotomic(n) => write!(f, "cyclotomic:{n}"),
        }
    }
}

impl FromStr for ScalarKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(ScalarKind::Rational),
            "complex" => Ok(ScalarKind::Complex),
            _ => {
                let n = s
                    .strip_prefix("cyclotomic:")
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::Parse(format!("unknown scalar backend '{s}'")))?;
                Ok(ScalarKind::Cyclotomic(n))
            }
        }
    }
}

/// A field element in one of the supported backends.
///
/// Arithmetic goes through the std operator traits. Equality is always
/// decided through [`Scalar::is_zero`] / [`Scalar::approx_eq`] with an
/// explicit tolerance, which exact backends ignore.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()))
    }

    /// Whether equality in this backend is decided exactly.
    fn is_exact() -> bool;

    fn is_zero(&self, tol: Tol) -> bool;

    /// Equality up to `tol`; floating backends scale the tolerance by the
    /// magnitude of the operands.
    fn approx_eq(&self, other: &Self, tol: Tol) -> bool {
        (self.clone() - other.clone()).is_zero(tol)
    }

    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    /// Integer power; negative exponents invert (and fail on zero).
    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * sq.clone();
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }

    /// Principal `k`-th root, when the backend can represent it.
    fn nth_root(&self, k: u32) -> Option<Self>;

    /// `S_{m,t} = exp(2πi m / t)`, when representable.
    fn root_of_unity(m: u64, t: u64) -> Option<Self>;

    /// Modulus as a float (pivot selection and reporting only).
    fn magnitude(&self) -> f64;

    fn to_complex(&self) -> Complex64;

    fn kind(&self) -> ScalarKind;

    /// Kind of the additive identity; used when an algebra has no nonzero
    /// constants.
    fn base_kind() -> ScalarKind;

    /// Re-express the value in a (compatible) wider backend instance, e.g. a
    /// cyclotomic element of conductor 4 inside conductor 12.
    fn lift_to(&self, kind: ScalarKind) -> Result<Self, Error> {
        if kind == self.kind() {
            Ok(self.clone())
        } else {
            Err(Error::BackendMismatch(format!(
                "cannot express {} as {kind}",
                self.kind()
            )))
        }
    }

    fn to_json(&self) -> serde_json::Value;

    fn from_json(value: &serde_json::Value, kind: ScalarKind) -> Result<Self, Error>;

    /// Rank of a matrix over this field. Exact rationals override this with
    /// fraction-free elimination.
    fn rank_of(m: &crate::linalg::Matrix<Self>, tol: Tol) -> usize {
        crate::linalg::gaussian_rank(m, tol)
    }
}

/// Convenience: `a / b` panicking on division by zero. Only used where the
/// divisor is known to be nonzero by construction.
pub(crate) fn quot<F: Scalar>(a: &F, b: &F) -> F {
    a.div(b).expect("division by a nonzero scalar")
}
