//! Corrected series built from a mock seed.
//!
//! The holomorphic part of the mock form is represented by its rational part
//! `F = M+ - a_M(1) E_g`. The transcendental `a_M(1)` never enters: a choice
//! `alpha = a_M(1) + gamma` is represented by the offset `gamma` alone.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use thiserror::Error;

use crate::exactnum::{factorial, rat, rat_int, rational_pow, ExactRational, FrobeniusRoots, PadicContext, PadicValue};
use crate::heckeops::{apply_d_inverse_pow, apply_d_pow, apply_v, signed_power};
use crate::modforms::{
    delta, level_one_dimension, miller_basis, weakly_holomorphic_solve, DirichletCharacter, ModFormError, MockPlusData,
    NewformData,
};
use crate::qseries::{LaurentSeries, PadicSeries, QSeries, SeriesError, SeriesMeta};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MockError {
    #[error("operation needs distinct-slope Frobenius roots")]
    ModeMismatch,
    #[error("only level one seeds can be solved for; got level {0}")]
    UnsupportedLevel(u64),
    #[error("incompatible seed data: {0}")]
    Incompatible(String),
    #[error(transparent)]
    ModForm(#[from] ModFormError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `-2615348736000 / (691 * 11!)`, the constant term of the Delta seed.
pub fn delta_seed_constant_term() -> ExactRational {
    rat_int(-2615348736000i64) / (rat(691, 1) * rat_int(factorial(11)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MockSeed {
    pub shadow: NewformData,
    /// Principal part of `M+` (negative exponents).
    pub principal: BTreeMap<i64, ExactRational>,
    pub constant_term: ExactRational,
    /// `F_{a_M(1)}`, weight `2 - k`.
    pub rational_part: QSeries,
    /// `D^(k-1)` of the rational part, weight `k`.
    pub d_image: QSeries,
}

impl MockSeed {
    pub fn weight(&self) -> u32 {
        self.shadow.weight
    }

    pub fn prec(&self) -> i64 {
        self.rational_part.prec()
    }

    /// `b_M(n)`: coefficient of `D^(k-1) F_{a_M(1)}`.
    pub fn b(&self, n: i64) -> Result<ExactRational, MockError> {
        Ok(self.d_image.coefficient(n)?)
    }

    pub fn to_mockplus(&self) -> MockPlusData {
        MockPlusData {
            weight: self.shadow.weight,
            level: self.shadow.level,
            character: self.shadow.character.clone(),
            series: self.rational_part.clone(),
        }
    }
}

/// Solves for the level one seed with the given principal part of `M+`,
/// normalized by `b_M(0) = b_M(1) = 0`.
pub fn build_seed(
    shadow: NewformData,
    principal: BTreeMap<i64, ExactRational>,
    constant_term: ExactRational,
    prec: i64,
) -> Result<MockSeed, MockError> {
    if shadow.level != 1 {
        return Err(MockError::UnsupportedLevel(shadow.level));
    }
    let k = shadow.weight;
    let d_principal: BTreeMap<i64, ExactRational> =
        principal.iter().filter(|(&e, _)| e < 0).map(|(&e, c)| (e, c * signed_power(e, k - 1))).collect();
    let d_image = weakly_holomorphic_solve(k as i64, &d_principal, &BTreeSet::from([0, 1]), prec)?;
    let mut rational_part = apply_d_inverse_pow(&d_image, k - 1);
    let lowest = rational_part.lowest().min(0);
    let mut coeffs: Vec<ExactRational> = (lowest..prec).map(|n| rational_part.coefficient(n)).collect::<Result<_, _>>()?;
    coeffs[(-lowest) as usize] = constant_term.clone();
    rational_part = QSeries::from_rationals(lowest, prec, coeffs)?.with_meta(SeriesMeta {
        weight: Some(2 - k as i64),
        level: Some(1),
        character: None,
    });
    Ok(MockSeed { shadow, principal, constant_term, rational_part, d_image })
}

/// The normalized cusp form of level one and weight `k`, when `S_k` is one
/// dimensional.
pub fn level_one_shadow(k: u32, prec: i64) -> Result<NewformData, MockError> {
    if level_one_dimension(i64::from(k)) != 2 {
        return Err(MockError::Incompatible(format!("S_{k} is not one dimensional")));
    }
    let f = miller_basis(i64::from(k), prec)?.swap_remove(1);
    Ok(NewformData::new_unchecked(k, 1, DirichletCharacter::trivial(1), f)?)
}

impl MockSeed {
    /// Reads an externally computed `M+` of weight `2 - k`. Its coefficient
    /// at `q^1` is absorbed into the Eichler integral, so offsets are
    /// measured from that value.
    pub fn from_mockplus(data: &MockPlusData, shadow: NewformData) -> Result<Self, MockError> {
        if data.level != shadow.level || data.weight != shadow.weight {
            return Err(MockError::Incompatible(format!(
                "seed has weight {} level {}, shadow has weight {} level {}",
                data.weight, data.level, shadow.weight, shadow.level
            )));
        }
        let k = shadow.weight;
        let prec = data.series.prec().min(shadow.prec());
        let a1 = data.series.coefficient(1)?;
        let eg = eichler_integral(&shadow, prec);
        let rational_part = (&data.series.truncate(prec) - &eg.scale(&a1)).with_meta(SeriesMeta {
            weight: Some(2 - k as i64),
            level: Some(shadow.level),
            character: None,
        });
        let principal = rational_part.iter().filter(|(n, c)| *n < 0 && !c.is_zero()).map(|(n, c)| (n, c.clone())).collect();
        let constant_term = rational_part.coefficient(0)?;
        let d_image = apply_d_pow(&rational_part, k - 1);
        Ok(MockSeed { shadow, principal, constant_term, rational_part, d_image })
    }
}

/// The Delta seed: principal part `q^-1` and the stated constant term.
pub fn build_delta_seed(prec: i64) -> Result<MockSeed, MockError> {
    build_seed(delta(prec), BTreeMap::from([(-1, rat(1, 1))]), delta_seed_constant_term(), prec)
}

/// `E_g = sum n^(1-k) a_g(n) q^n`.
pub fn eichler_integral(g: &NewformData, prec: i64) -> QSeries {
    let s = g.series().truncate(prec);
    let mut e = apply_d_inverse_pow(&s, g.weight - 1);
    e.meta.weight = Some(2 - g.weight as i64);
    e
}

/// Eichler integral of `g | V(p)`: coefficient `n^(1-k) a_g(n/p)`.
pub fn eichler_integral_v(g: &NewformData, p: u64, prec: i64) -> QSeries {
    let gv = apply_v(g.series(), p).truncate(prec);
    apply_d_inverse_pow(&gv, g.weight - 1)
}

/// `D^(k-1) H`.
pub fn d_power_image<C: crate::qseries::Coefficient>(h: &LaurentSeries<C>, k: u32) -> LaurentSeries<C> {
    apply_d_pow(h, k - 1)
}

fn generic_roots(roots: &FrobeniusRoots) -> Result<(&PadicValue, &PadicValue), MockError> {
    match (roots.beta(), roots.beta_prime()) {
        (Some(b), Some(bp)) => Ok((b, bp)),
        _ => Err(MockError::ModeMismatch),
    }
}

/// `F_alpha = F_{a_M(1)} - gamma E_g`.
pub fn f_alpha(seed: &MockSeed, gamma: &PadicValue, prec: i64) -> PadicSeries {
    let ctx = gamma.context();
    let rational = seed.rational_part.truncate(prec).to_padic(ctx);
    if gamma.is_exact_zero() {
        return rational;
    }
    let eg = eichler_integral(&seed.shadow, prec).to_padic(ctx);
    &rational - &eg.scale_by(gamma)
}

/// `F*_alpha = F_alpha | (1 - p^(1-k) beta' V(p))`.
pub fn f_alpha_star(seed: &MockSeed, gamma: &PadicValue, roots: &FrobeniusRoots, prec: i64) -> Result<PadicSeries, MockError> {
    let (_, beta_prime) = generic_roots(roots)?;
    let p = roots.prime();
    let fa = f_alpha(seed, gamma, prec);
    let factor = beta_prime.scale_rational(&rational_pow(p as i64, 1 - seed.weight() as i64));
    let v = apply_v(&fa, p).truncate(fa.prec()).scale_by(&factor);
    Ok(&fa - &v)
}

/// `F_{alpha,delta} = F_alpha - delta (E_g - beta E_{g|V(p)})`.
pub fn f_alpha_delta(
    seed: &MockSeed,
    gamma: &PadicValue,
    delta_value: &PadicValue,
    roots: &FrobeniusRoots,
    prec: i64,
) -> Result<PadicSeries, MockError> {
    let (beta, _) = generic_roots(roots)?;
    let fa = f_alpha(seed, gamma, prec);
    if delta_value.is_exact_zero() {
        return Ok(fa);
    }
    let ctx = gamma.context();
    let eg = eichler_integral(&seed.shadow, prec).to_padic(ctx);
    let egv = eichler_integral_v(&seed.shadow, roots.prime(), prec).to_padic(ctx);
    let correction = &eg - &egv.scale_by(beta);
    Ok(&fa - &correction.scale_by(delta_value))
}

/// `F~_alpha = M+ - alpha E_{g|V(p)}`.
pub fn f_tilde(mplus: &QSeries, g: &NewformData, alpha_tilde: &PadicValue, p: u64, prec: i64) -> PadicSeries {
    let ctx = alpha_tilde.context();
    let m = mplus.truncate(prec).to_padic(ctx);
    if alpha_tilde.is_exact_zero() {
        return m;
    }
    let egv = eichler_integral_v(g, p, prec).to_padic(ctx);
    &m - &egv.scale_by(alpha_tilde)
}

/// The offsets defining the corrected family.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionParams {
    pub gamma: PadicValue,
    pub delta: PadicValue,
    pub alpha_tilde: PadicValue,
}

impl CorrectionParams {
    pub fn new(gamma: PadicValue, delta: PadicValue, alpha_tilde: PadicValue) -> Option<Self> {
        let ctx = gamma.context();
        (delta.context() == ctx && alpha_tilde.context() == ctx).then_some(Self { gamma, delta, alpha_tilde })
    }

    pub fn zero(ctx: PadicContext) -> Self {
        Self { gamma: PadicValue::zero(ctx), delta: PadicValue::zero(ctx), alpha_tilde: PadicValue::zero(ctx) }
    }
}

/// `(k-1)!`, the scaling used when displaying weight `2 - k` coefficients.
pub fn display_scale(k: u32) -> ExactRational {
    rat_int(factorial(k - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::frobenius_roots;

    fn eleven_factorial() -> ExactRational {
        rat_int(factorial(11))
    }

    #[test]
    fn delta_seed_low_coefficients() {
        let seed = build_delta_seed(8).unwrap();
        let f = seed.rational_part.scale(&eleven_factorial());
        assert_eq!(f.coefficient(-1).unwrap(), eleven_factorial());
        assert_eq!(f.coefficient(0).unwrap(), rat_int(-2615348736000i64) / rat(691, 1));
        assert_eq!(f.coefficient(1).unwrap(), rat(0, 1));
        assert_eq!(f.coefficient(2).unwrap(), rat_int(-929888675100i64));
        assert_eq!(f.coefficient(3).unwrap(), rat_int(-80840909811200i64) / rat(9, 1));
        assert_eq!(seed.b(1).unwrap(), rat(0, 1));
    }

    #[test]
    fn eichler_integral_inverts_d() {
        let g = delta(40);
        let e = eichler_integral(&g, 40);
        assert_eq!(e.coefficient(1).unwrap(), rat(1, 1));
        assert_eq!(e.coefficient(2).unwrap(), rat(-24, 2048));
        assert_eq!(d_power_image(&e, 12).coeffs(), g.series().coeffs());
    }

    #[test]
    fn zero_offsets_are_identities() {
        let seed = build_delta_seed(30).unwrap();
        let ctx = PadicContext::new(3, 40).unwrap();
        let roots = frobenius_roots(&rat(252, 1), &rat(1, 1), 12, ctx).unwrap();
        let zero = PadicValue::zero(ctx);
        let fa = f_alpha(&seed, &zero, 30);
        assert_eq!(fa, seed.rational_part.to_padic(ctx));
        let gamma = PadicValue::from_integer(5, ctx);
        let fa = f_alpha(&seed, &gamma, 30);
        assert_eq!(f_alpha_delta(&seed, &gamma, &zero, &roots, 30).unwrap(), fa);
    }

    #[test]
    fn inert_roots_rejected_for_star() {
        let seed = build_delta_seed(10).unwrap();
        let ctx = PadicContext::new(3, 20).unwrap();
        let roots = frobenius_roots(&rat(0, 1), &rat(-1, 1), 3, ctx).unwrap();
        let zero = PadicValue::zero(ctx);
        assert_eq!(f_alpha_star(&seed, &zero, &roots, 10).unwrap_err(), MockError::ModeMismatch);
    }

    #[test]
    fn mockplus_roundtrip() {
        let seed = build_delta_seed(60).unwrap();
        let back = MockSeed::from_mockplus(&seed.to_mockplus(), level_one_shadow(12, 60).unwrap()).unwrap();
        assert_eq!(back.rational_part, seed.rational_part);
        assert_eq!(back.d_image, seed.d_image);
        assert_eq!(back.constant_term, seed.constant_term);
    }

    #[test]
    fn shifted_q1_coefficient_is_absorbed() {
        let seed = build_delta_seed(40).unwrap();
        let mut data = seed.to_mockplus();
        data.series = &data.series + &eichler_integral(&seed.shadow, 40).scale(&rat(7, 2));
        let back = MockSeed::from_mockplus(&data, seed.shadow.clone()).unwrap();
        assert_eq!(back.d_image, seed.d_image);
    }

    #[test]
    fn shadow_needs_one_dimensional_cusp_space() {
        assert_eq!(level_one_shadow(12, 30).unwrap().series(), delta(30).series());
        assert!(matches!(level_one_shadow(24, 30), Err(MockError::Incompatible(_))));
    }
}
