use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::convolution::mul_integer_sequences;
use crate::exactnum::{
    format_rational, parse_rational, ExactRational, PadicContext, PadicValue, Valuation,
};

/// Denominator bound (in bits) above which rational products fall back to
/// coefficientwise multiplication instead of clearing denominators.
const CLEARED_DENOMINATOR_BITS: u64 = 8192;

/// Marker domain for exact rational coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

/// A coefficient ring for [`LaurentSeries`](super::LaurentSeries).
pub trait Coefficient: Clone + Debug + PartialEq + Sized {
    type Domain: Clone + Debug + PartialEq;

    fn zero_in(domain: &Self::Domain) -> Self;
    fn from_rational_in(x: &ExactRational, domain: &Self::Domain) -> Self;
    fn is_exact_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, q: &ExactRational) -> Self;
    fn inverse(&self) -> Option<Self>;

    /// True when values from the two domains may be combined.
    fn compatible(a: &Self::Domain, b: &Self::Domain) -> bool;
    fn domain_tag(domain: &Self::Domain) -> String;
    fn parse_domain(tag: &str) -> Option<Self::Domain>;
    fn serialize(&self) -> String;
    fn parse(text: &str, domain: &Self::Domain) -> Option<Self>;

    /// First `n_out` coefficients of the product of two dense sequences.
    fn convolve(a: &[Self], b: &[Self], n_out: usize, domain: &Self::Domain) -> Vec<Self> {
        let mut out = vec![Self::zero_in(domain); n_out];
        for (i, x) in a.iter().enumerate().take(n_out) {
            if x.is_exact_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(n_out - i) {
                if !y.is_exact_zero() {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
        }
        out
    }
}

impl Coefficient for ExactRational {
    type Domain = Rationals;

    fn zero_in(_: &Rationals) -> Self {
        ExactRational::zero()
    }
    fn from_rational_in(x: &ExactRational, _: &Rationals) -> Self {
        x.clone()
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, q: &ExactRational) -> Self {
        self * q
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn compatible(_: &Rationals, _: &Rationals) -> bool {
        true
    }
    fn domain_tag(_: &Rationals) -> String {
        "rational".to_string()
    }
    fn parse_domain(tag: &str) -> Option<Rationals> {
        (tag == "rational").then_some(Rationals)
    }
    fn serialize(&self) -> String {
        format_rational(self)
    }
    fn parse(text: &str, _: &Rationals) -> Option<Self> {
        parse_rational(text)
    }

    fn convolve(a: &[Self], b: &[Self], n_out: usize, domain: &Rationals) -> Vec<Self> {
        let a = &a[..a.len().min(n_out)];
        let b = &b[..b.len().min(n_out)];
        let (Some((na, da)), Some((nb, db))) = (clear_denominators(a), clear_denominators(b)) else {
            return default_convolve(a, b, n_out, domain);
        };
        let scale = ExactRational::new(BigInt::one(), da * db);
        mul_integer_sequences(&na, &nb, n_out)
            .into_iter()
            .map(|c| if c.is_zero() { ExactRational::zero() } else { ExactRational::from_integer(c) * &scale })
            .collect()
    }
}

fn default_convolve(
    a: &[ExactRational],
    b: &[ExactRational],
    n_out: usize,
    _: &Rationals,
) -> Vec<ExactRational> {
    let mut out = vec![ExactRational::zero(); n_out];
    for (i, x) in a.iter().enumerate() {
        if Zero::is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n_out - i) {
            if !Zero::is_zero(y) {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Integer numerators over a common denominator, unless that denominator is huge.
fn clear_denominators(xs: &[ExactRational]) -> Option<(Vec<BigInt>, BigInt)> {
    let mut d = BigInt::one();
    for x in xs {
        if !x.denom().is_one() {
            d = d.lcm(x.denom());
            if d.bits() > CLEARED_DENOMINATOR_BITS {
                return None;
            }
        }
    }
    let nums = xs
        .iter()
        .map(|x| if x.denom().is_one() { x.numer() * &d } else { x.numer() * (&d / x.denom()) })
        .collect();
    Some((nums, d))
}

impl Coefficient for PadicValue {
    type Domain = PadicContext;

    fn zero_in(ctx: &PadicContext) -> Self {
        PadicValue::zero(*ctx)
    }
    fn from_rational_in(x: &ExactRational, ctx: &PadicContext) -> Self {
        PadicValue::from_rational(x, *ctx)
    }
    fn is_exact_zero(&self) -> bool {
        PadicValue::is_exact_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn scale(&self, q: &ExactRational) -> Self {
        self.scale_rational(q)
    }
    fn inverse(&self) -> Option<Self> {
        PadicValue::inverse(self).ok()
    }
    fn compatible(a: &PadicContext, b: &PadicContext) -> bool {
        a.prime() == b.prime()
    }
    fn domain_tag(ctx: &PadicContext) -> String {
        format!("padic:{}:{}", ctx.prime(), ctx.digits())
    }
    fn parse_domain(tag: &str) -> Option<PadicContext> {
        let rest = tag.strip_prefix("padic:")?;
        let (p, d) = rest.split_once(':')?;
        PadicContext::new(p.parse().ok()?, d.parse().ok()?).ok()
    }

    /// `0` for exact zero, otherwise `v:unit:rel` meaning `p^v * unit` known
    /// modulo `p^(v + rel)`.
    fn serialize(&self) -> String {
        match self.valuation() {
            Valuation::Infinite => "0".to_string(),
            Valuation::Finite(v) => {
                let unit = self.unit().map(|u| u.to_string()).unwrap_or_else(|| "0".to_string());
                format!("{v}:{unit}:{}", self.relative_precision())
            }
        }
    }

    fn parse(text: &str, ctx: &PadicContext) -> Option<Self> {
        if text.trim() == "0" {
            return Some(PadicValue::zero(*ctx));
        }
        let mut parts = text.trim().split(':');
        let v: i64 = parts.next()?.parse().ok()?;
        let unit: num_bigint::BigUint = parts.next()?.parse().ok()?;
        let rel: u32 = parts.next()?.parse().ok()?;
        if parts.next().is_some() {
            return None;
        }
        if rel == 0 {
            return Some(PadicValue::inexact_zero(*ctx, v));
        }
        let lifted = ExactRational::from_integer(BigInt::from(unit));
        let value = PadicValue::from_rational_digits(&lifted, *ctx, rel)
            .scale_rational(&crate::exactnum::rational_pow(ctx.prime() as i64, v));
        Some(value)
    }
}
