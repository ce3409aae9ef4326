//! Truncated formal Laurent series in q.
//!
//! A series stores coefficients densely for exponents in `[lowest, prec)`.
//! Exponents below `lowest` are zero; exponents at or above `prec` are
//! unknown and reading them is an error.

mod coefficient;
mod convolution;
mod io;

pub use coefficient::{Coefficient, Rationals};
pub use convolution::mul_integer_sequences;
pub use io::{read_series, write_series};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exactnum::{ExactRational, PadicContext, PadicValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient domains differ")]
    DomainMismatch,
    #[error("coefficient at q^{index} requested but series is known only below q^{prec}")]
    OutOfPrecision { index: i64, prec: i64 },
    #[error("leading coefficient is not invertible")]
    NonUnitLeading,
    #[error("invalid precision: lowest {lowest} must be below prec {prec}")]
    InvalidPrecision { lowest: i64, prec: i64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Reporting-only annotation; never consulted by arithmetic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeriesMeta {
    pub weight: Option<i64>,
    pub level: Option<u64>,
    pub character: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C: Coefficient> {
    lowest: i64,
    prec: i64,
    coeffs: Vec<C>,
    domain: C::Domain,
    pub meta: SeriesMeta,
}

pub type QSeries = LaurentSeries<ExactRational>;
pub type PadicSeries = LaurentSeries<PadicValue>;

impl<C: Coefficient> LaurentSeries<C> {
    /// Builds a series from coefficients of `q^lowest, q^(lowest+1), ...`;
    /// missing entries up to `prec` are zero and extra entries are dropped.
    pub fn from_coeffs(
        lowest: i64,
        prec: i64,
        mut coeffs: Vec<C>,
        domain: C::Domain,
    ) -> Result<Self, SeriesError> {
        if lowest >= prec {
            return Err(SeriesError::InvalidPrecision { lowest, prec });
        }
        let len = (prec - lowest) as usize;
        coeffs.truncate(len);
        coeffs.resize(len, C::zero_in(&domain));
        Ok(Self { lowest, prec, coeffs, domain, meta: SeriesMeta::default() })
    }

    pub fn zero(prec: i64, domain: C::Domain) -> Self {
        Self::from_coeffs(prec - 1, prec, Vec::new(), domain).expect("valid range")
    }

    pub fn from_fn(
        lowest: i64,
        prec: i64,
        domain: C::Domain,
        mut f: impl FnMut(i64) -> C,
    ) -> Result<Self, SeriesError> {
        let coeffs = (lowest..prec).map(&mut f).collect();
        Self::from_coeffs(lowest, prec, coeffs, domain)
    }

    /// `c q^n + O(q^prec)`.
    pub fn monomial(n: i64, c: C, prec: i64, domain: C::Domain) -> Result<Self, SeriesError> {
        let mut s = Self::from_coeffs(n, prec, Vec::new(), domain)?;
        s.coeffs[0] = c;
        Ok(s)
    }

    pub fn with_meta(mut self, meta: SeriesMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn domain(&self) -> &C::Domain {
        &self.domain
    }

    /// Coefficients of `q^lowest .. q^(prec-1)`.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coefficient(&self, n: i64) -> Result<C, SeriesError> {
        if n >= self.prec {
            return Err(SeriesError::OutOfPrecision { index: n, prec: self.prec });
        }
        if n < self.lowest {
            return Ok(C::zero_in(&self.domain));
        }
        Ok(self.coeffs[(n - self.lowest) as usize].clone())
    }

    /// Borrowing accessor; `None` below `lowest`.
    pub fn coefficient_ref(&self, n: i64) -> Result<Option<&C>, SeriesError> {
        if n >= self.prec {
            return Err(SeriesError::OutOfPrecision { index: n, prec: self.prec });
        }
        if n < self.lowest {
            return Ok(None);
        }
        Ok(Some(&self.coeffs[(n - self.lowest) as usize]))
    }

    /// Exponent of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_exact_zero()).map(|i| self.lowest + i as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Iterates `(n, a(n))` over the stored range.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.lowest + i as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let lowest = self.lowest.min(prec - 1);
        let coeffs = (lowest..prec).map(|n| self.coefficient(n).expect("in range")).collect();
        Self::from_coeffs(lowest, prec, coeffs, self.domain.clone())
            .expect("valid range")
            .with_meta(self.meta.clone())
    }

    /// Drops leading zero coefficients.
    pub fn trimmed(&self) -> Self {
        match self.valuation() {
            Some(v) if v > self.lowest => {
                let start = (v - self.lowest) as usize;
                Self {
                    lowest: v,
                    prec: self.prec,
                    coeffs: self.coeffs[start..].to_vec(),
                    domain: self.domain.clone(),
                    meta: self.meta.clone(),
                }
            }
            Some(_) => self.clone(),
            None => Self::zero(self.prec, self.domain.clone()).with_meta(self.meta.clone()),
        }
    }

    /// Multiplication by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            lowest: self.lowest + shift,
            prec: self.prec + shift,
            coeffs: self.coeffs.clone(),
            domain: self.domain.clone(),
            meta: self.meta.clone(),
        }
    }

    /// Applies `f(n, a(n))` to every stored coefficient.
    pub fn map(&self, mut f: impl FnMut(i64, &C) -> C) -> Self {
        let coeffs = self.iter().map(|(n, c)| f(n, c)).collect();
        Self {
            lowest: self.lowest,
            prec: self.prec,
            coeffs,
            domain: self.domain.clone(),
            meta: self.meta.clone(),
        }
    }

    fn check_domain(&self, other: &Self) -> Result<(), SeriesError> {
        if C::compatible(&self.domain, &other.domain) {
            Ok(())
        } else {
            Err(SeriesError::DomainMismatch)
        }
    }

    fn combine(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Result<Self, SeriesError> {
        self.check_domain(other)?;
        let prec = self.prec.min(other.prec);
        let lowest = self.lowest.min(other.lowest).min(prec - 1);
        let zero = C::zero_in(&self.domain);
        let coeffs = (lowest..prec)
            .map(|n| {
                let a = self.coefficient_ref(n).expect("below prec").unwrap_or(&zero);
                let b = other.coefficient_ref(n).expect("below prec").unwrap_or(&zero);
                f(a, b)
            })
            .collect();
        Ok(Self::from_coeffs(lowest, prec, coeffs, self.domain.clone())?.with_meta(self.meta.clone()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|_, c| c.neg())
    }

    pub fn scale(&self, q: &ExactRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.prec, self.domain.clone()).with_meta(self.meta.clone());
        }
        self.map(|_, c| c.scale(q))
    }

    pub fn scale_by(&self, c: &C) -> Self {
        self.map(|_, x| x.mul(c))
    }

    /// Product; precision is `min(prec_A + v_B, prec_B + v_A)` with `v` the
    /// true leading exponents (`prec` for a zero series).
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_domain(other)?;
        let va = self.valuation().unwrap_or(self.prec);
        let vb = other.valuation().unwrap_or(other.prec);
        let prec = (self.prec + vb).min(other.prec + va);
        let lowest = (va + vb).min(prec - 1);
        let n_out = (prec - lowest) as usize;
        let a = self.coeffs_from(va);
        let b = other.coeffs_from(vb);
        let coeffs = if va + vb < prec {
            C::convolve(a, b, n_out, &self.domain)
        } else {
            Vec::new()
        };
        Self::from_coeffs(lowest, prec, coeffs, self.domain.clone())
    }

    fn coeffs_from(&self, n: i64) -> &[C] {
        let start = ((n - self.lowest).max(0) as usize).min(self.coeffs.len());
        &self.coeffs[start..]
    }

    /// Multiplicative inverse to the precision the input supports.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let v = self.valuation().ok_or(SeriesError::NonUnitLeading)?;
        let lead = self.coefficient(v)?;
        let lead_inv = lead.inverse().ok_or(SeriesError::NonUnitLeading)?;
        // u = q^{-v} self has unit leading term; invert u by Newton iteration.
        let n = (self.prec - v) as usize;
        let u: Vec<C> = self.coeffs_from(v).to_vec();
        let one = C::from_rational_in(&ExactRational::from_integer(BigInt::from(1)), &self.domain);
        let two = one.add(&one);
        let mut g = vec![lead_inv];
        let mut len = 1usize;
        while len < n {
            let next = (2 * len).min(n);
            let ug = C::convolve(&u[..next.min(u.len())], &g, next, &self.domain);
            let mut corr: Vec<C> = ug.iter().map(|c| c.neg()).collect();
            corr[0] = corr[0].add(&two);
            g = C::convolve(&g, &corr, next, &self.domain);
            len = next;
        }
        Self::from_coeffs(-v, self.prec - 2 * v, g, self.domain.clone())
    }

    pub fn pow(&self, e: u32) -> Result<Self, SeriesError> {
        let one = C::from_rational_in(&ExactRational::from_integer(BigInt::from(1)), &self.domain);
        let rel = self.prec - self.valuation().unwrap_or(0);
        let mut result = Self::monomial(0, one, rel.max(1), self.domain.clone())?;
        let mut acc = self.clone();
        let mut e = e;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first { acc.clone() } else { result.checked_mul(&acc)? };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                acc = acc.checked_mul(&acc)?;
            }
        }
        Ok(result)
    }
}

impl QSeries {
    pub fn rational_zero(prec: i64) -> Self {
        Self::zero(prec, Rationals)
    }

    pub fn from_rationals(lowest: i64, prec: i64, coeffs: Vec<ExactRational>) -> Result<Self, SeriesError> {
        Self::from_coeffs(lowest, prec, coeffs, Rationals)
    }

    pub fn from_integers(lowest: i64, prec: i64, coeffs: Vec<BigInt>) -> Result<Self, SeriesError> {
        Self::from_coeffs(lowest, prec, coeffs.into_iter().map(ExactRational::from_integer).collect(), Rationals)
    }

    /// Integer coefficients, or `None` if some coefficient is not integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn to_padic(&self, ctx: PadicContext) -> PadicSeries {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| if c.is_zero() { PadicValue::zero(ctx) } else { PadicValue::from_rational(c, ctx) })
            .collect();
        LaurentSeries::from_coeffs(self.lowest, self.prec, coeffs, ctx)
            .expect("valid range")
            .with_meta(self.meta.clone())
    }
}

macro_rules! forward_ops {
    ($($tr:ident $method:ident $checked:ident),*) => {$(
        impl<C: Coefficient> std::ops::$tr for &LaurentSeries<C> {
            type Output = LaurentSeries<C>;
            fn $method(self, rhs: &LaurentSeries<C>) -> LaurentSeries<C> {
                self.$checked(rhs).expect("series coefficient domains differ")
            }
        }
    )*};
}

forward_ops!(Add add checked_add, Sub sub checked_sub, Mul mul checked_mul);

impl<C: Coefficient> std::ops::Neg for &LaurentSeries<C> {
    type Output = LaurentSeries<C>;
    fn neg(self) -> LaurentSeries<C> {
        LaurentSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};

    fn series(lowest: i64, prec: i64, xs: &[i64]) -> QSeries {
        QSeries::from_rationals(lowest, prec, xs.iter().map(|&x| rat(x, 1)).collect()).unwrap()
    }

    #[test]
    fn q_inverse_times_q() {
        let a = series(-1, 10, &[1]);
        let b = series(1, 10, &[1]);
        let p = &a * &b;
        assert_eq!(p.coefficient(0).unwrap(), rat(1, 1));
        assert_eq!(p.valuation(), Some(0));
        assert_eq!(p.prec(), 9);
    }

    #[test]
    fn scale_by_zero_keeps_precision() {
        let a = series(0, 7, &[1, 2, 3]);
        let z = a.scale(&rat(0, 1));
        assert!(z.is_zero());
        assert_eq!(z.prec(), 7);
    }

    #[test]
    fn geometric_inverse() {
        let a = series(0, 20, &[1, -1]);
        let inv = a.invert().unwrap();
        for n in 0..20 {
            assert_eq!(inv.coefficient(n).unwrap(), rat(1, 1));
        }
        assert!(matches!(inv.coefficient(20), Err(SeriesError::OutOfPrecision { .. })));
    }

    #[test]
    fn laurent_inverse() {
        // q^-1 (1 + 2q) -> q (1 - 2q + 4q^2 ...)
        let a = series(-1, 10, &[1, 2]);
        let inv = a.invert().unwrap();
        assert_eq!(inv.lowest(), 1);
        assert_eq!(inv.prec(), 12);
        assert_eq!(inv.coefficient(3).unwrap(), rat(4, 1));
        let one = &a * &inv;
        assert_eq!(one.coefficient(0).unwrap(), rat(1, 1));
        for n in 1..one.prec() {
            assert_eq!(one.coefficient(n).unwrap(), rat(0, 1));
        }
    }

    #[test]
    fn zero_leading_is_not_a_unit() {
        let z = QSeries::rational_zero(5);
        assert_eq!(z.invert(), Err(SeriesError::NonUnitLeading));
    }

    #[test]
    fn addition_uses_min_precision() {
        let a = series(-2, 5, &[1, 0, 3]);
        let b = series(0, 3, &[1, 1]);
        let s = &a + &b;
        assert_eq!(s.prec(), 3);
        assert_eq!(s.lowest(), -2);
        assert_eq!(s.coefficient(0).unwrap(), rat(4, 1));
    }

    #[test]
    fn rational_products_with_denominators() {
        let a = QSeries::from_rationals(0, 6, vec![rat(1, 2), rat(1, 3), rat(-5, 7)]).unwrap();
        let b = QSeries::from_rationals(0, 6, vec![rat(2, 9), rat(0, 1), rat(4, 1)]).unwrap();
        let p = &a * &b;
        assert_eq!(p.coefficient(0).unwrap(), rat(1, 9));
        assert_eq!(p.coefficient(2).unwrap(), rat(2, 1) - rat(10, 63));
        assert_eq!(p.coefficient(4).unwrap(), rat(-20, 7));
    }

    #[test]
    fn padic_mismatch_is_reported() {
        let a = series(0, 5, &[1, 2]).to_padic(PadicContext::new(3, 10).unwrap());
        let b = series(0, 5, &[1, 2]).to_padic(PadicContext::new(5, 10).unwrap());
        assert_eq!(a.checked_add(&b), Err(SeriesError::DomainMismatch));
        assert_eq!(a.checked_mul(&b), Err(SeriesError::DomainMismatch));
    }

    #[test]
    fn power() {
        let a = series(0, 10, &[1, 1]);
        let c = a.pow(3).unwrap();
        assert_eq!(c.coefficient(2).unwrap(), rat_int(3));
        assert_eq!(c.coefficient(4).unwrap(), rat_int(0));
    }
}
