//! Operators on q-expansions: U(p), V(p), D^j, Hecke T(n), twists and B(p).
//!
//! All operators act on the right, so `H | B U` means B first, then U.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{int_pow, rat_int, rational_pow, ExactRational};
use crate::modforms::{factorize, DirichletCharacter};
use crate::qseries::{Coefficient, LaurentSeries, QSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("Hecke index must be positive")]
    InvalidIndex,
    #[error("character value at {0} is not rational")]
    NonRealCharacter(u64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// `sum a(p n) q^n`.
pub fn apply_u<C: Coefficient>(h: &LaurentSeries<C>, p: u64) -> LaurentSeries<C> {
    let p = p as i64;
    let lowest = ceil_div(h.lowest(), p);
    let prec = ceil_div(h.prec(), p).max(lowest + 1);
    let mut out = LaurentSeries::from_fn(lowest, prec, h.domain().clone(), |n| {
        h.coefficient(p * n).unwrap_or_else(|_| C::zero_in(h.domain()))
    })
    .expect("valid range");
    out.meta = h.meta.clone();
    out
}

/// `sum a(n) q^(p n)`.
pub fn apply_v<C: Coefficient>(h: &LaurentSeries<C>, p: u64) -> LaurentSeries<C> {
    let p = p as i64;
    let lowest = p * h.lowest();
    let prec = p * (h.prec() - 1) + 1;
    let zero = C::zero_in(h.domain());
    let mut out = LaurentSeries::from_fn(lowest, prec, h.domain().clone(), |n| {
        if n % p == 0 {
            h.coefficient(n / p).expect("below prec")
        } else {
            zero.clone()
        }
    })
    .expect("valid range");
    out.meta = h.meta.clone();
    out.meta.level = h.meta.level.map(|l| l * p as u64);
    out
}

/// Signed power `n^j` as a rational.
pub fn signed_power(n: i64, j: u32) -> ExactRational {
    rat_int(int_pow(n, j))
}

/// `sum n^j a(n) q^n`; constants vanish for `j >= 1`.
pub fn apply_d_pow<C: Coefficient>(h: &LaurentSeries<C>, j: u32) -> LaurentSeries<C> {
    if j == 0 {
        return h.clone();
    }
    let zero = C::zero_in(h.domain());
    let mut out = h.map(|n, c| if n == 0 || c.is_exact_zero() { zero.clone() } else { c.scale(&signed_power(n, j)) });
    out.meta.weight = h.meta.weight.map(|w| w + 2 * j as i64);
    out
}

/// `sum a(n) q^n / n^j` over `n != 0`; the constant term is dropped.
pub fn apply_d_inverse_pow<C: Coefficient>(h: &LaurentSeries<C>, j: u32) -> LaurentSeries<C> {
    let zero = C::zero_in(h.domain());
    h.map(|n, c| if n == 0 || c.is_exact_zero() { zero.clone() } else { c.scale(&signed_power(n, j).recip()) })
}

fn chi_rational(chi: &DirichletCharacter, p: u64) -> Result<ExactRational, HeckeError> {
    chi.rational_value(p as i64).ok_or(HeckeError::NonRealCharacter(p))
}

/// Weight-`k` Hecke operator at a prime: `a(p n) + chi(p) p^(k-1) a(n/p)`.
/// `k` may be negative (for example `2 - k` on Eichler integrals).
pub fn apply_t_prime<C: Coefficient>(
    h: &LaurentSeries<C>,
    p: u64,
    k: i64,
    chi_p: &ExactRational,
) -> LaurentSeries<C> {
    let u = apply_u(h, p);
    let v = apply_v(h, p).scale(&(chi_p * rational_pow(p as i64, k - 1)));
    &u + &v
}

/// Weight-`k` Hecke operator `T(n)` built from prime powers by multiplicativity.
pub fn apply_t<C: Coefficient>(
    h: &LaurentSeries<C>,
    n: u64,
    k: i64,
    chi: &DirichletCharacter,
) -> Result<LaurentSeries<C>, HeckeError> {
    if n == 0 {
        return Err(HeckeError::InvalidIndex);
    }
    let mut cur = h.clone();
    for (p, r) in factorize(n) {
        let chi_p = chi_rational(chi, p)?;
        cur = apply_t_prime_power(&cur, p, r, k, &chi_p);
    }
    Ok(cur)
}

/// `T(p^r) = T(p) T(p^(r-1)) - chi(p) p^(k-1) T(p^(r-2))`.
fn apply_t_prime_power<C: Coefficient>(
    h: &LaurentSeries<C>,
    p: u64,
    r: u32,
    k: i64,
    chi_p: &ExactRational,
) -> LaurentSeries<C> {
    if r == 0 {
        return h.clone();
    }
    let norm = chi_p * rational_pow(p as i64, k - 1);
    let mut prev = h.clone();
    let mut cur = apply_t_prime(h, p, k, chi_p);
    for _ in 1..r {
        let next = &apply_t_prime(&cur, p, k, chi_p) - &prev.scale(&norm);
        prev = cur;
        cur = next;
    }
    cur
}

/// A function on residues modulo `modulus`, used for twisting.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistTable {
    pub modulus: u64,
    pub values: Vec<ExactRational>,
}

impl TwistTable {
    pub fn from_fn(modulus: u64, f: impl Fn(u64) -> ExactRational) -> Self {
        Self { modulus, values: (0..modulus).map(f).collect() }
    }

    pub fn from_character(chi: &DirichletCharacter) -> Result<Self, HeckeError> {
        let values = (0..chi.modulus())
            .map(|d| chi.rational_value(d as i64).ok_or(HeckeError::NonRealCharacter(d)))
            .collect::<Result<_, _>>()?;
        Ok(Self { modulus: chi.modulus(), values })
    }

    /// `n -> 1` if `p` does not divide `n`, else `0`.
    pub fn prime_indicator(p: u64) -> Self {
        Self::from_fn(p, |d| if d == 0 { ExactRational::zero() } else { ExactRational::one() })
    }

    pub fn value(&self, n: i64) -> &ExactRational {
        &self.values[n.rem_euclid(self.modulus as i64) as usize]
    }
}

/// `sum a(n) chi(n) q^n`.
pub fn apply_twist<C: Coefficient>(h: &LaurentSeries<C>, table: &TwistTable) -> LaurentSeries<C> {
    let zero = C::zero_in(h.domain());
    h.map(|n, c| {
        let v = table.value(n);
        if v.is_zero() {
            zero.clone()
        } else {
            c.scale(v)
        }
    })
}

/// `B(p) = U(p) + chi(p) p^(1-k) V(p) - a_p p^(1-k)`.
pub fn apply_b<C: Coefficient>(
    h: &LaurentSeries<C>,
    p: u64,
    a_p: &ExactRational,
    chi_p: &ExactRational,
    k: u32,
) -> LaurentSeries<C> {
    let scale = rational_pow(p as i64, 1 - k as i64);
    let u = apply_u(h, p);
    let v = apply_v(h, p).scale(&(chi_p * &scale));
    let w = h.scale(&(a_p * &scale));
    &(&u + &v) - &w
}

/// `-beta p^(1-k) (1 - beta' p^(1-k) V(p)) (1 - beta^(-1) p^(k-1) U(p))`,
/// with the roots given as coefficients of the series' domain.
pub fn apply_b_factored<C: Coefficient>(h: &LaurentSeries<C>, p: u64, beta: &C, beta_prime: &C, k: u32) -> LaurentSeries<C> {
    let down = rational_pow(p as i64, 1 - k as i64);
    let up = rational_pow(p as i64, k as i64 - 1);
    let first = h - &apply_v(h, p).scale_by(&beta_prime.scale(&down));
    let beta_inv = beta.inverse().expect("beta is invertible");
    let second = &first - &apply_u(&first, p).scale_by(&beta_inv.scale(&up));
    second.scale_by(&beta.scale(&down).neg())
}

/// An operator with its parameters, for table-driven application.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSpec {
    U { p: u64 },
    V { p: u64 },
    DPow { j: u32 },
    T { n: u64, weight: i64, character: DirichletCharacter },
    Twist(TwistTable),
    B { p: u64, a_p: ExactRational, chi_p: ExactRational, k: u32 },
}

impl OperatorSpec {
    pub fn apply(&self, h: &QSeries) -> Result<QSeries, HeckeError> {
        Ok(match self {
            OperatorSpec::U { p } => apply_u(h, *p),
            OperatorSpec::V { p } => apply_v(h, *p),
            OperatorSpec::DPow { j } => apply_d_pow(h, *j),
            OperatorSpec::T { n, weight, character } => apply_t(h, *n, *weight, character)?,
            OperatorSpec::Twist(table) => apply_twist(h, table),
            OperatorSpec::B { p, a_p, chi_p, k } => apply_b(h, *p, a_p, chi_p, *k),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::modforms::{delta, eta_power_cm, CmField};

    fn series(lowest: i64, prec: i64, xs: &[i64]) -> QSeries {
        QSeries::from_rationals(lowest, prec, xs.iter().map(|&x| rat(x, 1)).collect()).unwrap()
    }

    #[test]
    fn u_fixes_geometric_series() {
        let g = series(0, 30, &[1; 30]);
        let u = apply_u(&g, 3);
        assert_eq!(u.prec(), 10);
        assert!(u.iter().all(|(_, c)| *c == rat(1, 1)));
    }

    #[test]
    fn v_then_u_is_identity() {
        let h = series(-2, 12, &[3, 0, 5, -1, 2, 7]);
        let back = apply_u(&apply_v(&h, 5), 5);
        assert_eq!(back.lowest(), h.lowest());
        assert_eq!(back.prec(), h.prec());
        assert_eq!(back.coeffs(), h.coeffs());
    }

    #[test]
    fn v_of_q_and_level() {
        let mut q = series(1, 5, &[1]);
        q.meta.level = Some(4);
        let v = apply_v(&q, 3);
        assert_eq!(v.coefficient(3).unwrap(), rat(1, 1));
        assert_eq!(v.coefficient(1).unwrap(), rat(0, 1));
        assert_eq!(v.meta.level, Some(12));
    }

    #[test]
    fn d_power_signs() {
        let h = series(-1, 3, &[1, 5]);
        let d = apply_d_pow(&h, 11);
        assert_eq!(d.coefficient(-1).unwrap(), rat(-1, 1));
        assert_eq!(d.coefficient(0).unwrap(), rat(0, 1));
        assert_eq!(apply_d_pow(&h, 0), h);
    }

    #[test]
    fn delta_is_t2_eigenform() {
        let d = delta(60);
        let t = apply_t(d.series(), 2, 12, &d.character).unwrap();
        let expected = d.series().scale(&rat(-24, 1)).truncate(t.prec());
        assert_eq!(t.coeffs(), expected.coeffs());
        let t6 = apply_t(d.series(), 6, 12, &d.character).unwrap();
        assert_eq!(t6.coefficient(1).unwrap(), d.a(6).unwrap());
    }

    #[test]
    fn eta_u3_is_nine_v3() {
        let g = eta_power_cm(300);
        let u = apply_u(g.series(), 3);
        let v = apply_v(g.series(), 3).scale(&rat(9, 1));
        let prec = u.prec().min(v.prec());
        assert!((&u.truncate(prec) - &v.truncate(prec)).is_zero());
    }

    #[test]
    fn cm_self_twist() {
        let g = eta_power_cm(200);
        let chi = DirichletCharacter::from_cm_field(&CmField::gaussian(), 4);
        let twisted = apply_twist(g.series(), &TwistTable::from_character(&chi).unwrap());
        assert_eq!(twisted.coeffs(), g.series().coeffs());
    }

    #[test]
    fn prime_indicator_twist() {
        let h = series(0, 10, &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        let t = apply_twist(&h, &TwistTable::prime_indicator(3));
        for (n, c) in t.iter() {
            assert_eq!(c.is_zero(), n % 3 == 0);
        }
    }

    #[test]
    fn b_on_zero() {
        let z = QSeries::rational_zero(20);
        assert!(apply_b(&z, 3, &rat(252, 1), &rat(1, 1), 12).is_zero());
    }

    #[test]
    fn factored_b_with_rational_roots() {
        // beta = 9, beta' = 3^9, k = 12, p = 3.
        let h = series(-1, 40, &[2, 0, 1, -3, 5, 8, 13, 21, 34, 55, 89, 1, 4, 9, 16, 25, 36]);
        let beta = rat(9, 1);
        let beta_prime = rat(19683, 1);
        let expanded = apply_b(&h, 3, &(&beta + &beta_prime), &rat(1, 1), 12);
        let factored = apply_b_factored(&h, 3, &beta, &beta_prime, 12);
        let prec = expanded.prec().min(factored.prec());
        assert!((&expanded.truncate(prec) - &factored.truncate(prec)).is_zero());
    }
}
