//! Witnesses `H = H_m (mod p^m)` by level one forms.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::VerifyError;
use crate::exactnum::{prime_power, reduce_mod_prime_power, ExactNumError, ExactRational};
use crate::modforms::{delta_power, level_one_dimension, miller_basis};
use crate::qseries::{PadicSeries, QSeries};

/// Weights tried past the first candidate, beyond the hint itself.
const SCHEDULE_LENGTH: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceWitness {
    pub prime: u64,
    pub modulus_exponent: u32,
    /// `l_m`, before the `Delta^t` clearing.
    pub weight: i64,
    /// `t` with `Delta^t H` holomorphic at infinity.
    pub clearing: i64,
    /// Coordinates modulo `p^m` in the Miller basis of weight `l_m + 12t`.
    pub coordinates: Vec<BigUint>,
    /// Expansion of the witness modulo `p^m`, exponents `0..checked_range`
    /// (after clearing).
    pub expansion: Vec<BigUint>,
    pub checked_range: i64,
    pub schedule: Vec<i64>,
}

impl CongruenceWitness {
    pub fn modulus(&self) -> BigUint {
        prime_power(self.prime, self.modulus_exponent)
    }

    /// First exponent where the witness differs from `target` modulo `p^m`,
    /// comparing over the checked range.
    pub fn first_difference(&self, target: &QSeries) -> Option<i64> {
        let m = self.modulus_exponent;
        (0..self.checked_range).find(|&n| {
            let t = target.coefficient(n).ok().and_then(|c| reduce_mod_prime_power(&c, self.prime, m));
            t.as_ref() != Some(&self.expansion[n as usize])
        })
    }

    pub fn matches(&self, target: &QSeries) -> bool {
        self.first_difference(target).is_none()
    }

    /// The same witness read modulo `p^j` for `j <= m`.
    pub fn reduce(&self, j: u32) -> Vec<BigUint> {
        let modulus = prime_power(self.prime, j.min(self.modulus_exponent));
        self.expansion.iter().map(|x| x % &modulus).collect()
    }
}

fn residues(h: &PadicSeries, m: u32, range: i64) -> Result<Vec<BigUint>, VerifyError> {
    (0..range)
        .map(|n| {
            let c = h.coefficient(n)?;
            c.residue_mod(m).map_err(|e| match e {
                ExactNumError::NonIntegral(_) => VerifyError::NonIntegral { index: n },
                _ => VerifyError::InsufficientPrecision { index: n, needed: m },
            })
        })
        .collect()
}

fn reduced_basis(weight: i64, range: i64, p: u64, m: u32) -> Result<Vec<Vec<BigUint>>, VerifyError> {
    let basis = miller_basis(weight, range)?;
    basis
        .iter()
        .map(|f| {
            (0..range)
                .map(|n| {
                    let c = f.coefficient(n)?;
                    reduce_mod_prime_power(&c, p, m).ok_or(VerifyError::NonIntegral { index: n })
                })
                .collect()
        })
        .collect()
}

/// Searches for a level one weakly holomorphic form congruent to
/// `scalar * H` modulo `p^m` on exponents below `range`.
///
/// Weights are tried in the class of `weight_hint` modulo `(p-1) p^(m-1)`,
/// smallest nonnegative first, up to at least `weight_hint`. Poles at
/// infinity are cleared by `Delta^t`.
pub fn check_padic_form(
    h: &PadicSeries,
    p: u64,
    m: u32,
    weight_hint: i64,
    range: i64,
    scalar: &ExactRational,
) -> Result<CongruenceWitness, VerifyError> {
    if m == 0 {
        return Err(VerifyError::HypothesisViolated("modulus exponent must be positive".into()));
    }
    let mut h = h.scale(scalar);
    let t = h.valuation().map_or(0, |v| (-v).max(0));
    if t > 0 {
        h = &h * &delta_power(t, h.prec() + t).to_padic(*h.domain());
    }
    if h.prec() < range {
        return Err(VerifyError::InsufficientPrecision { index: h.prec(), needed: m });
    }
    let target = residues(&h, m, range)?;
    let modulus = prime_power(p, m);
    let step = ((p - 1) * p.pow(m - 1)) as i64;
    let first = weight_hint.rem_euclid(step);
    let mut schedule = Vec::new();
    let count = SCHEDULE_LENGTH.max((weight_hint - first) / step + 1);
    for i in 0..count {
        let weight = first + i * step;
        schedule.push(weight);
        let total = weight + 12 * t;
        let dim = level_one_dimension(total);
        if dim == 0 || dim as i64 > range {
            continue;
        }
        let basis = reduced_basis(total, range, p, m)?;
        // Echelon basis: coordinates are the leading coefficients.
        let coordinates: Vec<BigUint> = target[..dim].to_vec();
        let mut expansion = vec![BigUint::zero(); range as usize];
        for (x, f) in coordinates.iter().zip(&basis) {
            if x.is_zero() {
                continue;
            }
            for (e, c) in expansion.iter_mut().zip(f) {
                *e = (&*e + x * c) % &modulus;
            }
        }
        if expansion == target {
            return Ok(CongruenceWitness {
                prime: p,
                modulus_exponent: m,
                weight,
                clearing: t,
                coordinates,
                expansion,
                checked_range: range,
                schedule,
            });
        }
    }
    Err(VerifyError::NoWitness { schedule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, PadicContext};
    use crate::modforms::eisenstein;

    fn ctx() -> PadicContext {
        PadicContext::new(3, 30).unwrap()
    }

    #[test]
    fn e2_is_congruent_to_e8_mod_9() {
        let e2 = eisenstein(2, 200).unwrap().to_padic(ctx());
        let w = check_padic_form(&e2, 3, 2, 2, 200, &rat(1, 1)).unwrap();
        assert_eq!(w.weight, 8);
        assert_eq!(w.schedule, vec![2, 8]);
        assert!(w.matches(&eisenstein(2, 200).unwrap()));
        assert!(w.matches(&eisenstein(8, 200).unwrap()));
    }

    #[test]
    fn pole_is_cleared() {
        let j = crate::modforms::j_invariant(150).to_padic(ctx());
        let w = check_padic_form(&j, 3, 2, 0, 120, &rat(1, 1)).unwrap();
        assert_eq!(w.clearing, 1);
    }

    #[test]
    fn non_integral_input_is_rejected() {
        let s = QSeries::from_rationals(0, 10, vec![rat(1, 3); 10]).unwrap().to_padic(ctx());
        assert_eq!(check_padic_form(&s, 3, 1, 0, 10, &rat(1, 1)).unwrap_err(), VerifyError::NonIntegral { index: 0 });
    }

    #[test]
    fn random_noise_has_no_witness() {
        let s = QSeries::from_rationals(0, 60, (0..60).map(|n| rat((n * n + 1) % 7, 1)).collect()).unwrap();
        let err = check_padic_form(&s.to_padic(ctx()), 3, 1, 0, 60, &rat(1, 1)).unwrap_err();
        assert!(matches!(err, VerifyError::NoWitness { .. }));
    }
}
