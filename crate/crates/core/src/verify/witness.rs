//! Coefficient-level evidence: denominator growth, the Euler congruence at
//! primes with `a_g(p) = 0`, and the CM twist identity.

use std::ops::RangeInclusive;

use num_traits::Zero;
use serde::Serialize;

use super::VerifyError;
use crate::exactnum::{padic_valuation, rat, rational_pow, reduce_mod_prime_power, ExactRational};
use crate::heckeops::{apply_twist, TwistTable};
use crate::modforms::{CmField, NewformData};
use crate::qseries::QSeries;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenominatorReport {
    pub prime: u64,
    pub weight: u32,
    /// `(m, ord_p a_{D^(k-1) H}(p^m))`; `None` for a zero coefficient.
    pub orders: Vec<(u32, Option<i64>)>,
    /// Smallest `A` with `ord >= m(k-1) - A` on the range.
    pub best_constant: i64,
    /// Least-squares slope of the orders in `m`.
    pub slope: f64,
    /// Orders grow no faster than `m(k-1)/2`.
    pub violation_trend: bool,
}

/// Orders of `a_{D^(k-1) H}(p^m) = p^(m(k-1)) a_H(p^m)` against the bound
/// `m(k-1) - A` that a p-adic modular form would satisfy.
pub fn denominator_witness(h: &QSeries, p: u64, k: u32, m_range: RangeInclusive<u32>) -> Result<DenominatorReport, VerifyError> {
    let mut orders = Vec::new();
    for m in m_range {
        let n = (p as i64).checked_pow(m).ok_or_else(|| VerifyError::HypothesisViolated("index overflow".into()))?;
        let c = h.coefficient(n)? * rational_pow(p as i64, i64::from(m) * (i64::from(k) - 1));
        orders.push((m, padic_valuation(&c, p)?.finite()));
    }
    let pts: Vec<(f64, f64)> = orders.iter().filter_map(|&(m, o)| o.map(|o| (f64::from(m), o as f64))).collect();
    let best_constant = orders
        .iter()
        .filter_map(|&(m, o)| o.map(|o| i64::from(m) * (i64::from(k) - 1) - o))
        .max()
        .unwrap_or(0)
        .max(0);
    let slope = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    } else {
        f64::INFINITY
    };
    Ok(DenominatorReport {
        prime: p,
        weight: k,
        violation_trend: slope <= f64::from(k - 1) / 2.0,
        orders,
        best_constant,
        slope,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub ell: i64,
    pub holds: bool,
    pub first_failure: Option<i64>,
    pub checked: i64,
}

/// Checks `E_g = D^(l_m) g (mod p^m)` with `l_m = C(p^m - p^(m-1)) - (k-1)`
/// over the available coefficients.
pub fn euler_congruence_check(g: &NewformData, p: u64, m: u32, c: u64) -> Result<EulerReport, VerifyError> {
    if !g.level.is_multiple_of(p) {
        return Err(VerifyError::HypothesisViolated(format!("{p} does not divide the level {}", g.level)));
    }
    if !g.a(p as i64)?.is_zero() {
        return Err(VerifyError::HypothesisViolated(format!("a_g({p}) is nonzero")));
    }
    let k = i64::from(g.weight);
    let ell = c as i64 * (p.pow(m) - p.pow(m - 1)) as i64 - (k - 1);
    if ell <= 0 {
        return Err(VerifyError::HypothesisViolated(format!("l_m = {ell} is not positive")));
    }
    let mut first_failure = None;
    for n in 1..g.prec() {
        let a = g.a(n)?;
        let ok = if (n as u64).is_multiple_of(p) {
            a.is_zero()
        } else {
            let lhs = reduce_mod_prime_power(&(&a * rational_pow(n, 1 - k)), p, m);
            let rhs = reduce_mod_prime_power(&(&a * rational_pow(n, ell)), p, m);
            lhs.is_some() && lhs == rhs
        };
        if !ok {
            first_failure = Some(n);
            break;
        }
    }
    Ok(EulerReport { ell, holds: first_failure.is_none(), first_failure, checked: g.prec() - 1 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistReport {
    pub holds: bool,
    pub first_failure: Option<i64>,
    pub checked: usize,
}

/// Builds `R = (M + M (x) chi_K)/2 (x) chi_K` and checks `a_R(n) = a_M(n)`
/// when `chi_K(n) = 1` and `a_R(n) = 0` otherwise.
pub fn twist_lemma_check(m_series: &QSeries, cm: &CmField) -> TwistReport {
    let table = TwistTable::from_fn(cm.discriminant.unsigned_abs(), |n| rat(cm.chi(n as i64), 1));
    let twisted = apply_twist(m_series, &table);
    let half = (m_series + &twisted).scale(&rat(1, 2));
    let r = apply_twist(&half, &table);
    let one = ExactRational::from_integer(1.into());
    let first_failure = m_series.iter().map(|(n, _)| n).find(|&n| {
        let a_r = r.coefficient(n).expect("same range");
        let expected = if *table.value(n) == one { m_series.coefficient(n).expect("in range") } else { ExactRational::zero() };
        a_r != expected
    });
    TwistReport { holds: first_failure.is_none(), first_failure, checked: m_series.coeffs().len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mockcorrect::eichler_integral;
    use crate::modforms::{delta, eta_power_cm};

    #[test]
    fn eichler_integral_of_delta_breaks_the_bound() {
        let e = eichler_integral(&delta(800), 800);
        let r = denominator_witness(&e, 3, 12, 1..=6).unwrap();
        assert!(r.violation_trend);
        assert!(r.orders.iter().all(|&(m, o)| o.unwrap() <= 6 * i64::from(m)));
        assert!(r.best_constant > 30);
    }

    #[test]
    fn holomorphic_forms_satisfy_the_bound() {
        let r = denominator_witness(delta(800).series(), 3, 12, 1..=6).unwrap();
        assert_eq!(r.best_constant, 0);
        assert!(!r.violation_trend);
    }

    #[test]
    fn euler_congruence_for_eta_power() {
        let g = eta_power_cm(3000);
        for m in 1..=3 {
            let r = euler_congruence_check(&g, 2, m, 3).unwrap();
            assert!(r.holds, "m = {m}: {r:?}");
        }
        assert!(matches!(euler_congruence_check(&g, 3, 1, 3), Err(VerifyError::HypothesisViolated(_))));
        assert!(matches!(euler_congruence_check(&delta(10), 2, 1, 3), Err(VerifyError::HypothesisViolated(_))));
    }

    #[test]
    fn twist_identity_on_arbitrary_series() {
        let s = QSeries::from_rationals(-2, 40, (0..42).map(|n| rat(n * n - 7, n % 5 + 1)).collect()).unwrap();
        assert!(twist_lemma_check(&s, &CmField::gaussian()).holds);
        assert!(twist_lemma_check(&s, &CmField::new(-7).unwrap()).holds);
    }
}
