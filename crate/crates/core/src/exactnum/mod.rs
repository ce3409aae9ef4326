//! Exact rationals, p-adic valuations and truncated p-adic numbers.

mod frobenius;
mod padic;
mod rational;

pub use frobenius::{frobenius_roots, FrobeniusRoots, RootsKind};
pub use padic::{digit_terms, render_digits, render_digits_spaced, PadicContext, PadicValue};
pub use rational::{
    factorial, format_rational, int_pow, integer_valuation, is_p_integral, is_prime,
    padic_valuation, parse_rational, rat, rat_int, rational_pow, reduce_mod_prime_power,
    ExactRational, Valuation,
};
#[allow(unused_imports)]
pub(crate) use rational::{
    biguint_to_bigint, mod_inverse, prime_power, rational_unit_residue, require_prime,
    split_prime_power, unit_residue, valuation_unchecked,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactNumError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("digit precision must be positive")]
    ZeroPrecision,
    #[error("Newton polygon has a single slope (ord a_p = {ord_a}, ord norm = {ord_norm})")]
    EqualSlopes { ord_a: i64, ord_norm: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("p-adic values for different primes {0} and {1}")]
    PrimeMismatch(u64, u64),
    #[error("need precision {needed}, have {available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("value has negative valuation {0}")]
    NonIntegral(i64),
}

/// Embeds a rational with the context's digit precision.
pub fn to_padic(x: &ExactRational, ctx: PadicContext) -> PadicValue {
    PadicValue::from_rational(x, ctx)
}
