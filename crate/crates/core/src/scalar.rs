//! Exact scalar rings used as coefficients.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Coefficient ring for every exact computation in the crate.
///
/// Anything that behaves like the integers (a Euclidean domain with a sign and
/// a total order) qualifies. `i64`/`i128` are fast but may overflow inside
/// Smith reductions; [`num_bigint::BigInt`] never does and is the default
/// behind the [`crate::Int`] alias.
pub trait Scalar:
    Clone + Debug + Display + Eq + Ord + Hash + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("i64 always embeds")
    }

    /// `(-1)^e`.
    fn sign(e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + Eq + Ord + Hash + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}
