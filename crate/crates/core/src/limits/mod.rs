//! Certified p-adic limits and the correction constants.
//!
//! A limit is accepted only with a certificate: the valuations of successive
//! differences of approximants. Precision is whatever the p-adic arithmetic
//! can vouch for, so an imprecise input (say a truncated `gamma`) shows up as
//! fewer certified digits rather than wrong ones.

pub mod fixtures;

use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{ExactNumError, ExactRational, FrobeniusRoots, PadicContext, PadicValue, Valuation};
use crate::mockcorrect::MockSeed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("operation needs {0} Frobenius roots")]
    ModeMismatch(&'static str),
    #[error(transparent)]
    Arithmetic(#[from] ExactNumError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitStatus {
    Converged,
    Diverged,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitResult {
    pub value: PadicValue,
    /// `(m, ord_p(a_{m+1} - a_m))`.
    pub certificate: Vec<(u32, i64)>,
    pub status: LimitStatus,
}

#[derive(Serialize)]
struct LimitReport<'a> {
    value_digits: Vec<u32>,
    valuation: Option<i64>,
    absolute_precision: Option<i64>,
    certificate: &'a [(u32, i64)],
    status: LimitStatus,
}

impl LimitResult {
    pub fn is_converged(&self) -> bool {
        self.status == LimitStatus::Converged
    }

    /// Number of certified p-adic digits, counted from `p^0`.
    pub fn certified_precision(&self) -> i64 {
        self.certificate.last().map_or(i64::MIN, |&(_, a)| a)
    }

    /// True when the value is zero to at least `digits` absolute digits.
    pub fn is_zero_to(&self, digits: i64) -> bool {
        match self.value.valuation() {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= digits,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let report = LimitReport {
            value_digits: self.value.unit_digits(),
            valuation: self.value.valuation().finite(),
            absolute_precision: self.value.absolute_precision(),
            certificate: &self.certificate,
            status: self.status,
        };
        serde_json::to_value(report).expect("plain data")
    }
}

/// Runs approximants `a_m` for `m` in `range` and certifies their limit.
///
/// `approximant` returns `None` when the underlying data runs out; the
/// iteration then stops with what it has.
pub fn padic_limit<F>(mut approximant: F, range: RangeInclusive<u32>, target: i64) -> Result<LimitResult, LimitError>
where
    F: FnMut(u32) -> Result<Option<PadicValue>, LimitError>,
{
    let mut certificate: Vec<(u32, i64)> = Vec::new();
    let mut prev: Option<(u32, PadicValue)> = None;
    for m in range {
        let Some(current) = approximant(m)? else {
            break;
        };
        let mut adopt = true;
        let mut stop = false;
        if let Some((pm, pv)) = &prev {
            let diff = current.checked_sub(pv)?;
            let last = certificate.last().map(|&(_, a)| a);
            match diff.valuation() {
                Valuation::Finite(v) if diff.relative_precision() > 0 => certificate.push((*pm, v)),
                valuation => {
                    // All digits cancelled: agreement up to the available precision only.
                    let available = match valuation {
                        Valuation::Finite(v) => v,
                        Valuation::Infinite => current.absolute_precision().unwrap_or(i64::from(current.context().digits())),
                    };
                    if last.is_none_or(|a| available > a) {
                        certificate.push((*pm, available));
                    } else {
                        adopt = false;
                    }
                    stop = true;
                }
            }
        }
        if adopt {
            prev = Some((m, current));
        }
        if stop {
            break;
        }
    }
    let Some((_, last_value)) = prev else {
        return Err(LimitError::HypothesisViolated("no approximants available".into()));
    };
    let value = match certificate.last() {
        Some(&(_, a)) => last_value.truncate_absolute(a),
        None => last_value,
    };
    Ok(LimitResult { status: classify(&certificate, target), value, certificate })
}

/// Converged when three consecutive agreements strictly increase up to at
/// least `target`, allowing one trailing step that stalls without dropping.
fn classify(certificate: &[(u32, i64)], target: i64) -> LimitStatus {
    let a: Vec<i64> = certificate.iter().map(|&(_, v)| v).collect();
    let n = a.len();
    if n < 3 {
        return LimitStatus::Exhausted;
    }
    let rising = |j: usize| a[j - 2] < a[j - 1] && a[j - 1] < a[j] && a[j] >= target;
    if rising(n - 1) || (n >= 4 && rising(n - 2) && a[n - 1] >= a[n - 2]) {
        LimitStatus::Converged
    } else if a[n - 3] >= a[n - 2] && a[n - 2] >= a[n - 1] {
        LimitStatus::Diverged
    } else {
        LimitStatus::Exhausted
    }
}

fn generic_roots(roots: &FrobeniusRoots) -> Result<(&PadicValue, &PadicValue), LimitError> {
    match (roots.beta(), roots.beta_prime()) {
        (Some(b), Some(bp)) => Ok((b, bp)),
        _ => Err(LimitError::ModeMismatch("distinct-slope")),
    }
}

fn ord(x: &PadicValue) -> i64 {
    x.valuation().finite().unwrap_or(i64::MAX)
}

/// Coefficient access into a mock seed, in the p-adic domain.
struct SeedView<'a> {
    seed: &'a MockSeed,
    ctx: PadicContext,
}

impl SeedView<'_> {
    fn index(&self, n: u64) -> Option<i64> {
        let n = i64::try_from(n).ok()?;
        (n < self.seed.prec()).then_some(n)
    }

    /// `b_M(n)`.
    fn b(&self, n: u64) -> Option<PadicValue> {
        let n = self.index(n)?;
        self.seed.b(n).ok().map(|x| PadicValue::from_rational(&x, self.ctx))
    }

    /// `a_g(n)`, zero for non-integral `n`.
    fn a(&self, num: u64, den: u64) -> Option<PadicValue> {
        if !num.is_multiple_of(den) {
            return Some(PadicValue::zero(self.ctx));
        }
        let n = self.index(num / den)?;
        let x = self.seed.shadow.a(n).ok()?;
        Some(PadicValue::from_rational(&x, self.ctx))
    }

    /// `b_alpha(n) = b_M(n) - gamma a_g(n)`.
    fn b_alpha(&self, gamma: &PadicValue, num: u64, den: u64) -> Option<PadicValue> {
        if !num.is_multiple_of(den) {
            return Some(PadicValue::zero(self.ctx));
        }
        let b = self.b(num / den)?;
        Some(&b - &(gamma * &self.a(num, den)?))
    }
}

fn ipow(p: u64, m: u32) -> Option<u64> {
    p.checked_pow(m)
}

/// `gamma_0 + lim b*(p^m) / beta^m` evaluated on `F_{a_M(1)} - gamma_0 E_g`.
///
/// With `offset = 0` this is the offset `gamma` of the distinguished `alpha`;
/// with `offset = gamma_0` it is `gamma - gamma_0`.
pub fn compute_gamma_star(
    seed: &MockSeed,
    offset: &PadicValue,
    roots: &FrobeniusRoots,
    max_m: u32,
    target: i64,
) -> Result<LimitResult, LimitError> {
    let (beta, beta_prime) = generic_roots(roots)?;
    let view = SeedView { seed, ctx: roots.context() };
    let p = roots.prime();
    padic_limit(
        |m| {
            let Some(pm) = ipow(p, m) else { return Ok(None) };
            let (Some(hi), Some(lo)) = (view.b_alpha(offset, pm, 1), view.b_alpha(offset, pm / p, 1)) else {
                return Ok(None);
            };
            let star = &hi - &(beta_prime * &lo);
            Ok(Some(star.checked_div(&beta.pow(m as i64)?)?))
        },
        1..=max_m,
        target,
    )
}

/// `(beta - beta') lim b_M(p^m) / beta^(m+1)`, the second formula for gamma.
pub fn compute_gamma_alt(seed: &MockSeed, roots: &FrobeniusRoots, max_m: u32, target: i64) -> Result<LimitResult, LimitError> {
    let (beta, beta_prime) = generic_roots(roots)?;
    let view = SeedView { seed, ctx: roots.context() };
    let p = roots.prime();
    let gap = beta - beta_prime;
    padic_limit(
        |m| {
            let Some(b) = ipow(p, m).and_then(|pm| view.b(pm)) else { return Ok(None) };
            Ok(Some((&gap * &b).checked_div(&beta.pow(m as i64 + 1)?)?))
        },
        1..=max_m,
        target,
    )
}

/// `delta = lim b_alpha(p^m) / beta'^m` at the certified `gamma`.
pub fn compute_delta(
    seed: &MockSeed,
    gamma: &PadicValue,
    roots: &FrobeniusRoots,
    max_m: u32,
    target: i64,
) -> Result<LimitResult, LimitError> {
    let (beta, beta_prime) = generic_roots(roots)?;
    let k = i64::from(seed.weight());
    if ord(beta_prime) == k - 1 {
        return Err(LimitError::HypothesisViolated(format!("ord beta' = k - 1 = {}", k - 1)));
    }
    if ord(beta) >= ord(beta_prime) {
        return Err(LimitError::HypothesisViolated("ord beta must be below ord beta'".into()));
    }
    let view = SeedView { seed, ctx: roots.context() };
    let p = roots.prime();
    padic_limit(
        |m| {
            let Some(b) = ipow(p, m).and_then(|pm| view.b_alpha(gamma, pm, 1)) else { return Ok(None) };
            Ok(Some(b.checked_div(&beta_prime.pow(m as i64)?)?))
        },
        1..=max_m,
        target,
    )
}

/// Coefficient `n` of `h_alpha = lim beta^-m F_alpha | U(p^m)`.
pub fn h_alpha_coefficient(
    seed: &MockSeed,
    gamma: &PadicValue,
    roots: &FrobeniusRoots,
    n: u64,
    max_m: u32,
    target: i64,
) -> Result<LimitResult, LimitError> {
    let (beta, _) = generic_roots(roots)?;
    let view = SeedView { seed, ctx: roots.context() };
    let p = roots.prime();
    padic_limit(
        |m| {
            let Some(b) = ipow(p, m).and_then(|pm| pm.checked_mul(n)).and_then(|idx| view.b_alpha(gamma, idx, 1)) else {
                return Ok(None);
            };
            Ok(Some(b.checked_div(&beta.pow(m as i64)?)?))
        },
        0..=max_m,
        target,
    )
}

/// Coefficient `n` of `h_{alpha,delta} = lim beta'^-m F_{alpha,delta} | U(p^m)`.
pub fn h_alpha_delta_coefficient(
    seed: &MockSeed,
    gamma: &PadicValue,
    delta: &PadicValue,
    roots: &FrobeniusRoots,
    n: u64,
    max_m: u32,
    target: i64,
) -> Result<LimitResult, LimitError> {
    let (beta, beta_prime) = generic_roots(roots)?;
    let view = SeedView { seed, ctx: roots.context() };
    let p = roots.prime();
    padic_limit(
        |m| {
            let Some(idx) = ipow(p, m).and_then(|pm| pm.checked_mul(n)) else { return Ok(None) };
            let (Some(b), Some(a_hi), Some(a_lo)) = (view.b_alpha(gamma, idx, 1), view.a(idx, 1), view.a(idx, p)) else {
                return Ok(None);
            };
            let correction = &a_hi - &(beta * &a_lo);
            let value = &b - &(delta * &correction);
            Ok(Some(value.checked_div(&beta_prime.pow(m as i64)?)?))
        },
        0..=max_m,
        target,
    )
}

/// Coefficient data of `D^(k-1) M+` together with its shadow.
pub trait MockCoefficients {
    fn weight(&self) -> u32;
    /// `a_{D^(k-1) M+}(n)`.
    fn d_coefficient(&self, n: u64) -> Option<ExactRational>;
    /// `a_g(n)`.
    fn shadow_coefficient(&self, n: u64) -> Option<ExactRational>;
}

fn inert_beta_squared(roots: &FrobeniusRoots) -> Result<PadicValue, LimitError> {
    if roots.is_generic() {
        return Err(LimitError::ModeMismatch("inert"));
    }
    Ok(roots.beta_squared())
}

/// `lim a_{D^(k-1) M+}(p^(2m+1)) / beta^(2m)`.
pub fn compute_alpha_inert(
    data: &dyn MockCoefficients,
    roots: &FrobeniusRoots,
    max_m: u32,
    target: i64,
) -> Result<LimitResult, LimitError> {
    inert_coefficient_limit(data, &PadicValue::zero(roots.context()), roots, 1, max_m, target)
}

/// Coefficient `n` of `W_alpha = lim beta^(-2m) F~_alpha | U(p^(2m+1))`.
fn inert_coefficient_limit(
    data: &dyn MockCoefficients,
    alpha_tilde: &PadicValue,
    roots: &FrobeniusRoots,
    n: u64,
    max_m: u32,
    target: i64,
) -> Result<LimitResult, LimitError> {
    let beta_sq = inert_beta_squared(roots)?;
    let ctx = roots.context();
    let p = roots.prime();
    padic_limit(
        |m| {
            let Some(idx) = ipow(p, 2 * m + 1).and_then(|q| q.checked_mul(n)) else { return Ok(None) };
            let Some(d) = data.d_coefficient(idx) else { return Ok(None) };
            let Some(a) = data.shadow_coefficient(idx / p) else { return Ok(None) };
            let value = &PadicValue::from_rational(&d, ctx) - &(alpha_tilde * &PadicValue::from_rational(&a, ctx));
            Ok(Some(value.checked_div(&beta_sq.pow(m as i64)?)?))
        },
        0..=max_m,
        target,
    )
}

/// The first `r` coefficients of `W_alpha`, each with its certificate.
pub fn inert_w_limit(
    data: &dyn MockCoefficients,
    alpha_tilde: &PadicValue,
    roots: &FrobeniusRoots,
    r: u64,
    max_m: u32,
    target: i64,
) -> Result<Vec<LimitResult>, LimitError> {
    (1..=r).map(|n| inert_coefficient_limit(data, alpha_tilde, roots, n, max_m, target)).collect()
}

/// `lim b_M(p^m) / a_g(p)^m` at a prime dividing the level.
///
/// `b[m]` holds `b_M(p^m)`.
pub fn compute_alpha_badprime(
    b: &[ExactRational],
    a_p: &ExactRational,
    k: u32,
    ctx: PadicContext,
    max_m: u32,
    target: i64,
) -> Result<LimitResult, LimitError> {
    let a = PadicValue::from_rational(a_p, ctx);
    let expected = i64::from(k / 2) - 1;
    if k % 2 == 1 || a.is_zero() || ord(&a) != expected {
        return Err(LimitError::HypothesisViolated(format!(
            "ord_p a_g(p) must be k/2 - 1 = {expected} with k even; got {}",
            if a.is_zero() { "infinite".to_string() } else { ord(&a).to_string() }
        )));
    }
    padic_limit(
        |m| {
            let Some(bm) = b.get(m as usize) else { return Ok(None) };
            Ok(Some(PadicValue::from_rational(bm, ctx).checked_div(&a.pow(m as i64)?)?))
        },
        1..=max_m,
        target,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};

    fn ctx() -> PadicContext {
        PadicContext::new(3, 40).unwrap()
    }

    fn from_int(n: i64) -> PadicValue {
        PadicValue::from_integer(n, ctx())
    }

    #[test]
    fn powers_of_p_converge_to_zero() {
        let r = padic_limit(|m| Ok(Some(from_int(3i64.pow(m)))), 0..=12, 8).unwrap();
        assert_eq!(r.status, LimitStatus::Converged);
        assert!(r.is_zero_to(8));
        assert_eq!(r.certificate[0], (0, 0));
    }

    #[test]
    fn alternating_signs_diverge() {
        let r = padic_limit(|m| Ok(Some(from_int(if m % 2 == 0 { 1 } else { -1 }))), 0..=10, 8).unwrap();
        assert_eq!(r.status, LimitStatus::Diverged);
    }

    #[test]
    fn geometric_sum_has_all_one_digits() {
        let r = padic_limit(
            |m| Ok(Some(PadicValue::from_rational(&rat_int((3i64.pow(m + 1) - 1) / 2), ctx()))),
            0..=15,
            10,
        )
        .unwrap();
        assert_eq!(r.status, LimitStatus::Converged);
        assert_eq!(r.value.unit_digits(), vec![1; 15]);
        // The exact limit is -1/2.
        assert!(r.value.agrees_with(&PadicValue::from_rational(&rat(-1, 2), ctx()), 15));
    }

    #[test]
    fn short_runs_are_exhausted() {
        let r = padic_limit(|m| Ok(Some(from_int(3i64.pow(m)))), 0..=2, 1).unwrap();
        assert_eq!(r.status, LimitStatus::Exhausted);
        let r = padic_limit(|m| Ok((m < 2).then(|| from_int(3i64.pow(m)))), 0..=20, 1).unwrap();
        assert_eq!(r.status, LimitStatus::Exhausted);
    }

    #[test]
    fn one_trailing_stall_is_tolerated() {
        let cert = |v: &[i64]| v.iter().enumerate().map(|(i, &a)| (i as u32, a)).collect::<Vec<_>>();
        assert_eq!(classify(&cert(&[18, 22, 24, 24]), 8), LimitStatus::Converged);
        assert_eq!(classify(&cert(&[18, 22, 24, 24, 24]), 8), LimitStatus::Diverged);
        assert_eq!(classify(&cert(&[18, 22, 24, 23]), 8), LimitStatus::Exhausted);
        assert_eq!(classify(&cert(&[2, 3, 4]), 8), LimitStatus::Exhausted);
    }

    #[test]
    fn json_report_shape() {
        let r = padic_limit(|m| Ok(Some(from_int(3i64.pow(m)))), 0..=6, 3).unwrap();
        let j = r.to_json();
        assert_eq!(j["status"], "converged");
        assert_eq!(j["certificate"][2], serde_json::json!([2, 2]));
    }

    #[test]
    fn badprime_guard() {
        let b = vec![rat(1, 1); 5];
        let err = compute_alpha_badprime(&b, &rat(9, 1), 4, ctx(), 4, 2).unwrap_err();
        assert!(matches!(err, LimitError::HypothesisViolated(_)));
    }
}
