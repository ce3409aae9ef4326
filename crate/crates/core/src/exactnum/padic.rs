//! Truncated p-adic numbers.
//!
//! A nonzero value is stored as `p^valuation * unit` where `unit` is known
//! modulo `p^rel_prec`. Every operation reports only digits that are
//! guaranteed by its inputs, so a value's absolute precision
//! `valuation + rel_prec` is an honest bound. A value whose digits have all
//! cancelled is kept as `O(p^N)`: zero to absolute precision `N`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::rational::{
    biguint_to_bigint, mod_inverse, prime_power, rational_unit_residue, require_prime,
    ExactRational, Valuation,
};
use super::ExactNumError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicContext {
    prime: u64,
    digits: u32,
}

impl PadicContext {
    pub fn new(prime: u64, digits: u32) -> Result<Self, ExactNumError> {
        require_prime(prime)?;
        if digits == 0 {
            return Err(ExactNumError::ZeroPrecision);
        }
        Ok(Self { prime, digits })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Number of significant digits carried by freshly embedded values.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn with_digits(&self, digits: u32) -> Result<Self, ExactNumError> {
        Self::new(self.prime, digits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Zero,
    Approx {
        valuation: i64,
        unit: BigUint,
        rel_prec: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicValue {
    ctx: PadicContext,
    repr: Repr,
}

impl PadicValue {
    pub fn zero(ctx: PadicContext) -> Self {
        Self { ctx, repr: Repr::Zero }
    }

    pub fn one(ctx: PadicContext) -> Self {
        Self::from_rational(&ExactRational::one(), ctx)
    }

    /// Zero known only modulo `p^abs_prec`.
    pub fn inexact_zero(ctx: PadicContext, abs_prec: i64) -> Self {
        Self {
            ctx,
            repr: Repr::Approx { valuation: abs_prec, unit: BigUint::zero(), rel_prec: 0 },
        }
    }

    /// Image of a rational, carrying `ctx.digits()` significant digits.
    pub fn from_rational(x: &ExactRational, ctx: PadicContext) -> Self {
        Self::from_rational_digits(x, ctx, ctx.digits)
    }

    pub fn from_rational_digits(x: &ExactRational, ctx: PadicContext, digits: u32) -> Self {
        if x.is_zero() {
            return Self::zero(ctx);
        }
        let (valuation, unit) = rational_unit_residue(x, ctx.prime, digits);
        Self { ctx, repr: Repr::Approx { valuation, unit, rel_prec: digits } }
    }

    pub fn from_integer(n: i64, ctx: PadicContext) -> Self {
        Self::from_rational(&ExactRational::from_integer(BigInt::from(n)), ctx)
    }

    /// Builds a value from its base-p digit expansion starting at `valuation`.
    /// Leading zero digits are absorbed into the valuation.
    pub fn from_digits(valuation: i64, digits: &[u32], ctx: PadicContext) -> Self {
        let p = BigUint::from(ctx.prime);
        let mut unit = BigUint::zero();
        for d in digits.iter().rev() {
            unit = unit * &p + BigUint::from(*d);
        }
        let rel = digits.len() as u32;
        Self::normalize(ctx, valuation, unit, rel)
    }

    fn normalize(ctx: PadicContext, valuation: i64, mut unit: BigUint, rel_prec: u32) -> Self {
        let abs = valuation + rel_prec as i64;
        if rel_prec == 0 {
            return Self::inexact_zero(ctx, abs);
        }
        unit %= prime_power(ctx.prime, rel_prec);
        if unit.is_zero() {
            return Self::inexact_zero(ctx, abs);
        }
        let p = BigUint::from(ctx.prime);
        let mut shift = 0u32;
        loop {
            let (q, r) = unit.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            unit = q;
            shift += 1;
        }
        Self {
            ctx,
            repr: Repr::Approx {
                valuation: valuation + shift as i64,
                unit,
                rel_prec: rel_prec - shift,
            },
        }
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn prime(&self) -> u64 {
        self.ctx.prime
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True for exact zero and for values whose known digits are all zero.
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Zero => true,
            Repr::Approx { rel_prec, .. } => *rel_prec == 0,
        }
    }

    /// The valuation; for `O(p^N)` this is the lower bound `N`.
    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinite,
            Repr::Approx { valuation, .. } => Valuation::Finite(*valuation),
        }
    }

    pub fn relative_precision(&self) -> u32 {
        match &self.repr {
            Repr::Zero => u32::MAX,
            Repr::Approx { rel_prec, .. } => *rel_prec,
        }
    }

    /// `None` for exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Approx { valuation, rel_prec, .. } => Some(valuation + *rel_prec as i64),
        }
    }

    /// Base-p digits of the unit part, least significant first; `unit_digits[0] != 0`.
    pub fn unit_digits(&self) -> Vec<u32> {
        match &self.repr {
            Repr::Zero => Vec::new(),
            Repr::Approx { unit, rel_prec, .. } => {
                let p = BigUint::from(self.ctx.prime);
                let mut rest = unit.clone();
                let mut out = Vec::with_capacity(*rel_prec as usize);
                for _ in 0..*rel_prec {
                    let (q, r) = rest.div_rem(&p);
                    out.push(r.to_u32().expect("digit fits"));
                    rest = q;
                }
                out
            }
        }
    }

    /// The unit part as an integer in `[0, p^rel_prec)`.
    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Approx { unit, rel_prec, .. } if *rel_prec > 0 => Some(unit),
            Repr::Approx { .. } => None,
        }
    }

    /// A rational whose expansion agrees with this value to its precision.
    pub fn rational_lift(&self) -> ExactRational {
        match &self.repr {
            Repr::Zero => ExactRational::zero(),
            Repr::Approx { valuation, unit, .. } => {
                let u = ExactRational::from_integer(biguint_to_bigint(unit.clone()));
                let p = BigInt::from(self.ctx.prime);
                if *valuation >= 0 {
                    u * ExactRational::from_integer(num_traits::pow(p, *valuation as usize))
                } else {
                    u / ExactRational::from_integer(num_traits::pow(p, (-*valuation) as usize))
                }
            }
        }
    }

    /// Drops digits beyond absolute precision `abs_prec`.
    pub fn truncate_absolute(&self, abs_prec: i64) -> Self {
        match &self.repr {
            Repr::Zero => Self::inexact_zero(self.ctx, abs_prec),
            Repr::Approx { valuation, unit, rel_prec } => {
                let current = valuation + *rel_prec as i64;
                if abs_prec >= current {
                    return self.clone();
                }
                if abs_prec <= *valuation {
                    return Self::inexact_zero(self.ctx, abs_prec);
                }
                let rel = (abs_prec - valuation) as u32;
                Self::normalize(self.ctx, *valuation, unit.clone(), rel)
            }
        }
    }

    /// Caps the relative precision at `digits`.
    pub fn truncate_relative(&self, digits: u32) -> Self {
        match &self.repr {
            Repr::Approx { valuation, rel_prec, .. } if *rel_prec > digits => {
                self.truncate_absolute(valuation + digits as i64)
            }
            _ => self.clone(),
        }
    }

    fn check_prime(&self, other: &Self) -> Result<(), ExactNumError> {
        if self.ctx.prime == other.ctx.prime {
            Ok(())
        } else {
            Err(ExactNumError::PrimeMismatch(self.ctx.prime, other.ctx.prime))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactNumError> {
        self.check_prime(other)?;
        let (va, ua, ra) = match &self.repr {
            Repr::Zero => return Ok(other.clone()),
            Repr::Approx { valuation, unit, rel_prec } => (*valuation, unit, *rel_prec),
        };
        let (vb, ub, rb) = match &other.repr {
            Repr::Zero => return Ok(self.clone()),
            Repr::Approx { valuation, unit, rel_prec } => (*valuation, unit, *rel_prec),
        };
        let abs = (va + ra as i64).min(vb + rb as i64);
        let base = va.min(vb);
        if abs <= base {
            return Ok(Self::inexact_zero(self.ctx, abs));
        }
        let p = self.ctx.prime;
        let sum = ua * prime_power(p, (va - base) as u32) + ub * prime_power(p, (vb - base) as u32);
        Ok(Self::normalize(self.ctx, base, sum, (abs - base) as u32))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactNumError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactNumError> {
        self.check_prime(other)?;
        let (va, ua, ra) = match &self.repr {
            Repr::Zero => return Ok(Self::zero(self.ctx)),
            Repr::Approx { valuation, unit, rel_prec } => (*valuation, unit, *rel_prec),
        };
        let (vb, ub, rb) = match &other.repr {
            Repr::Zero => return Ok(Self::zero(self.ctx)),
            Repr::Approx { valuation, unit, rel_prec } => (*valuation, unit, *rel_prec),
        };
        // O(p^N) * x is O(p^(N + ord x)).
        if ra == 0 || rb == 0 {
            return Ok(Self::inexact_zero(self.ctx, va + vb + ra.min(rb) as i64));
        }
        let rel = ra.min(rb);
        let unit = (ua * ub) % prime_power(self.ctx.prime, rel);
        Ok(Self { ctx: self.ctx, repr: Repr::Approx { valuation: va + vb, unit, rel_prec: rel } })
    }

    pub fn neg_ref(&self) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Approx { valuation, unit, rel_prec } => {
                if *rel_prec == 0 {
                    return self.clone();
                }
                let modulus = prime_power(self.ctx.prime, *rel_prec);
                Self {
                    ctx: self.ctx,
                    repr: Repr::Approx {
                        valuation: *valuation,
                        unit: (&modulus - unit) % &modulus,
                        rel_prec: *rel_prec,
                    },
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self, ExactNumError> {
        match &self.repr {
            Repr::Zero => Err(ExactNumError::DivisionByZero),
            Repr::Approx { rel_prec: 0, .. } => Err(ExactNumError::DivisionByZero),
            Repr::Approx { valuation, unit, rel_prec } => {
                let modulus = BigInt::from(prime_power(self.ctx.prime, *rel_prec));
                let inv = mod_inverse(&BigInt::from(unit.clone()), &modulus)
                    .expect("unit part is invertible");
                Ok(Self {
                    ctx: self.ctx,
                    repr: Repr::Approx {
                        valuation: -valuation,
                        unit: inv.to_biguint().expect("nonnegative"),
                        rel_prec: *rel_prec,
                    },
                })
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactNumError> {
        self.check_prime(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// Multiplication by an exact rational; loses no precision.
    pub fn scale_rational(&self, q: &ExactRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.ctx);
        }
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Approx { valuation, unit, rel_prec } => {
                let (vq, uq) = rational_unit_residue(q, self.ctx.prime, (*rel_prec).max(1));
                if *rel_prec == 0 {
                    return Self::inexact_zero(self.ctx, valuation + vq);
                }
                let unit = (unit * uq) % prime_power(self.ctx.prime, *rel_prec);
                Self {
                    ctx: self.ctx,
                    repr: Repr::Approx { valuation: valuation + vq, unit, rel_prec: *rel_prec },
                }
            }
        }
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self, ExactNumError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = Self::one(self.ctx);
        if let Repr::Approx { rel_prec, .. } = &base.repr {
            result = result.truncate_relative(*rel_prec);
        }
        let mut acc = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result = result.checked_mul(&acc)?;
            }
            n >>= 1;
            if n > 0 {
                acc = acc.checked_mul(&acc)?;
            }
        }
        Ok(result)
    }

    /// Residue modulo `p^m` of a p-integral value known to at least `p^m`.
    pub fn residue_mod(&self, m: u32) -> Result<BigUint, ExactNumError> {
        match &self.repr {
            Repr::Zero => Ok(BigUint::zero()),
            Repr::Approx { valuation, unit, rel_prec } => {
                let abs = valuation + *rel_prec as i64;
                if abs < m as i64 {
                    return Err(ExactNumError::InsufficientPrecision { needed: m as i64, available: abs });
                }
                if *valuation >= m as i64 {
                    return Ok(BigUint::zero());
                }
                if *valuation < 0 {
                    return Err(ExactNumError::NonIntegral(*valuation));
                }
                let modulus = prime_power(self.ctx.prime, m);
                Ok((unit * prime_power(self.ctx.prime, *valuation as u32)) % modulus)
            }
        }
    }

    /// True when `self - other` vanishes modulo `p^abs_prec`.
    pub fn agrees_with(&self, other: &Self, abs_prec: i64) -> bool {
        match self.checked_sub(other) {
            Ok(diff) => diff.valuation() >= Valuation::Finite(abs_prec),
            Err(_) => false,
        }
    }
}

impl Add for &PadicValue {
    type Output = PadicValue;
    fn add(self, rhs: &PadicValue) -> PadicValue {
        self.checked_add(rhs).expect("p-adic prime mismatch")
    }
}

impl Sub for &PadicValue {
    type Output = PadicValue;
    fn sub(self, rhs: &PadicValue) -> PadicValue {
        self.checked_sub(rhs).expect("p-adic prime mismatch")
    }
}

impl Mul for &PadicValue {
    type Output = PadicValue;
    fn mul(self, rhs: &PadicValue) -> PadicValue {
        self.checked_mul(rhs).expect("p-adic prime mismatch")
    }
}

impl Neg for &PadicValue {
    type Output = PadicValue;
    fn neg(self) -> PadicValue {
        self.neg_ref()
    }
}

impl fmt::Display for PadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_digits(self, 5))
    }
}

fn power_label(p: u64, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => format!("{p}"),
        _ => {
            let exp = e.to_string();
            if exp.len() > 1 {
                format!("{p}^{{{exp}}}")
            } else {
                format!("{p}^{exp}")
            }
        }
    }
}

/// Terms `d(p^e)` for the first `max_terms` nonzero digits, lowest power first.
pub fn digit_terms(v: &PadicValue, max_terms: usize) -> Vec<String> {
    let Repr::Approx { valuation, .. } = &v.repr else {
        return Vec::new();
    };
    let p = v.ctx.prime;
    v.unit_digits()
        .into_iter()
        .enumerate()
        .filter(|(_, d)| *d != 0)
        .take(max_terms)
        .map(|(i, d)| {
            let e = valuation + i as i64;
            let power = power_label(p, e);
            match (d, power.is_empty()) {
                (_, true) => d.to_string(),
                (1, false) => power,
                (_, false) => format!("{d}({power})"),
            }
        })
        .collect()
}

fn render_with(v: &PadicValue, max_terms: usize, sep: &str) -> String {
    match &v.repr {
        Repr::Zero => "0".to_string(),
        Repr::Approx { valuation, rel_prec: 0, .. } => match *valuation {
            0 => "O(1)".to_string(),
            e => format!("O({})", power_label(v.ctx.prime, e)),
        },
        Repr::Approx { .. } => {
            let mut terms = digit_terms(v, max_terms);
            terms.push("...".to_string());
            terms.join(sep)
        }
    }
}

/// Sum-of-powers rendering, e.g. `3^{-2}+3^{-1}+2+...`.
pub fn render_digits(v: &PadicValue, max_terms: usize) -> String {
    render_with(v, max_terms, "+")
}

/// Same as [`render_digits`] with spaced separators, e.g. `3^5 + 3^6 + 3^8 + ...`.
pub fn render_digits_spaced(v: &PadicValue, max_terms: usize) -> String {
    render_with(v, max_terms, " + ")
}
