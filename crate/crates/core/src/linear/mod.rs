//! Exact rational and integer linear algebra.
//!
//! Everything in this crate is computed without floating point: rationals are
//! [`BigRational`], integers are [`BigInt`]. The three pieces here are dense
//! rational matrices with reduced row echelon forms, dense integer matrices with
//! Smith normal forms, and affine subspaces of `A^n` stored in a canonical
//! equation form so that equality of subspaces is syntactic.

mod integer;
mod rational;
mod subspace;

pub use integer::{IntegerMatrix, IntegerSolver, SmithForm};
pub use rational::RationalMatrix;
pub use subspace::{orthogonal_complement, AffineSubspace};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bilinear form is degenerate on the tangent directions")]
    DegeneratePairing,
    #[error("basepoint does not lie on the tangent subspace")]
    BasepointNotOnTangent,
    #[error("empty subspace has no tangent directions")]
    EmptyTangent,
    #[error("cannot parse rational number {0:?}")]
    BadRational(String),
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`, reduced.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `"p/q"`, or as a bare integer when `q = 1`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p/q"`, `"-p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<BigRational, LinearError> {
    let bad = || LinearError::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Least non-negative residue of `x` modulo `n`.
pub fn mod_floor(x: &BigInt, n: u64) -> u64 {
    let m = BigInt::from(n);
    let r = ((x % &m) + &m) % &m;
    u64::try_from(r).expect("residue fits in u64")
}
