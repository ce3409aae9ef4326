use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ExactNumError;

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type ExactRational = BigRational;

/// p-adic order of a value; `Infinite` only for zero.
///
/// Ordered so that every finite valuation is below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

pub fn rat(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(n.into())
}

/// Parses `a` or `a/b`.
pub fn parse_rational(text: &str) -> Option<ExactRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}

pub fn format_rational(x: &ExactRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<(), ExactNumError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(ExactNumError::NonPrime(p))
    }
}

/// Splits a nonzero integer as `p^v * rest` with `p ∤ rest`.
pub(crate) fn split_prime_power(n: &BigInt, p: u64) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let p_big = BigInt::from(p);
    let mut rest = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = rest.div_rem(&p_big);
        if !r.is_zero() {
            break;
        }
        rest = q;
        v += 1;
    }
    (v, rest)
}

/// ord_p of an integer; +∞ for zero. `p` is assumed prime.
pub fn integer_valuation(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(split_prime_power(n, p).0)
    }
}

pub fn padic_valuation(x: &ExactRational, p: u64) -> Result<Valuation, ExactNumError> {
    require_prime(p)?;
    Ok(valuation_unchecked(x, p))
}

pub(crate) fn valuation_unchecked(x: &ExactRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let (vn, _) = split_prime_power(x.numer(), p);
    let (vd, _) = split_prime_power(x.denom(), p);
    Valuation::Finite(vn - vd)
}

/// Writes a nonzero rational as `p^v * unit` and returns `(v, unit mod p^digits)`.
pub(crate) fn rational_unit_residue(x: &ExactRational, p: u64, digits: u32) -> (i64, BigUint) {
    let (vn, un) = split_prime_power(x.numer(), p);
    let (vd, ud) = split_prime_power(x.denom(), p);
    let modulus = prime_power(p, digits);
    let residue = unit_residue(&un, &ud, &modulus);
    (vn - vd, residue)
}

/// `num / den mod modulus` for `den` invertible modulo `modulus`.
pub(crate) fn unit_residue(num: &BigInt, den: &BigInt, modulus: &BigUint) -> BigUint {
    let m = BigInt::from(modulus.clone());
    let n = num.mod_floor(&m);
    let d = den.mod_floor(&m);
    let inv = mod_inverse(&d, &m).expect("denominator must be a unit modulo p^r");
    (n * inv).mod_floor(&m).to_biguint().expect("nonnegative residue")
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let ext = a.mod_floor(m).extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

pub(crate) fn prime_power(p: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), e as usize)
}

pub(crate) fn biguint_to_bigint(x: BigUint) -> BigInt {
    BigInt::from_biguint(if x.is_zero() { Sign::NoSign } else { Sign::Plus }, x)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `n^e` for a signed integer base and nonnegative exponent.
pub fn int_pow(n: i64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(n), e as usize)
}

/// `n^e` for a signed exponent, as a rational. `n` must be nonzero when `e < 0`.
pub fn rational_pow(n: i64, e: i64) -> ExactRational {
    if e >= 0 {
        rat_int(int_pow(n, e as u32))
    } else {
        BigRational::new(BigInt::one(), int_pow(n, (-e) as u32))
    }
}

pub fn is_p_integral(x: &ExactRational, p: u64) -> bool {
    x.is_zero() || !x.denom().is_multiple_of(&BigInt::from(p))
}

/// Reduction of a p-integral rational modulo `p^m` into `[0, p^m)`.
pub fn reduce_mod_prime_power(x: &ExactRational, p: u64, m: u32) -> Option<BigUint> {
    if !is_p_integral(x, p) {
        return None;
    }
    let modulus = prime_power(p, m);
    Some(unit_residue(x.numer(), x.denom(), &modulus))
}
