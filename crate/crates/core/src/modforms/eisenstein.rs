use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ModFormError;
use crate::exactnum::{rat_int, ExactRational};
use crate::qseries::{QSeries, SeriesMeta};

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<ExactRational> {
    let mut b = vec![ExactRational::zero(); n + 1];
    b[0] = ExactRational::one();
    for m in 1..=n {
        // sum_{j<=m} C(m+1, j) B_j = 0
        let mut binom = BigInt::one();
        let mut acc = ExactRational::zero();
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += bj * ExactRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b[m] = -acc / ExactRational::from_integer(BigInt::from(m + 1));
    }
    b
}

/// `sigma_e(n)` for `0 <= n < len` (with `sigma_e(0) = 0`).
pub fn divisor_sums(e: u32, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for d in 1..len {
        let de = num_traits::pow(BigInt::from(d), e as usize);
        let mut m = d;
        while m < len {
            out[m] += &de;
            m += d;
        }
    }
    out
}

/// `E_r = 1 - (2r / B_r) sum sigma_{r-1}(n) q^n`; `E_2` is the quasimodular one.
pub fn eisenstein(r: u32, prec: usize) -> Result<QSeries, ModFormError> {
    if r < 2 || r % 2 == 1 {
        return Err(ModFormError::InvalidWeight(r as i64));
    }
    let b = bernoulli_numbers(r as usize)[r as usize].clone();
    let factor = -rat_int(2 * r as i64) / b;
    let sigmas = divisor_sums(r - 1, prec);
    let coeffs = sigmas
        .into_iter()
        .enumerate()
        .map(|(n, s)| if n == 0 { ExactRational::one() } else { &factor * ExactRational::from_integer(s) })
        .collect();
    Ok(QSeries::from_rationals(0, prec as i64, coeffs)?
        .with_meta(SeriesMeta { weight: Some(r as i64), level: Some(1), character: None }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        assert_eq!(b[7], rat(0, 1));
    }

    #[test]
    fn small_eisenstein_coefficients() {
        let e2 = eisenstein(2, 5).unwrap();
        assert_eq!(e2.coefficient(1).unwrap(), rat(-24, 1));
        assert_eq!(e2.coefficient(4).unwrap(), rat(-24 * 7, 1));
        let e4 = eisenstein(4, 3).unwrap();
        assert_eq!(e4.coefficient(1).unwrap(), rat(240, 1));
        let e12 = eisenstein(12, 3).unwrap();
        assert_eq!(e12.coefficient(0).unwrap(), rat(1, 1));
        assert_eq!(e12.coefficient(1).unwrap(), rat(65520, 691));
    }

    #[test]
    fn odd_weight_rejected() {
        assert!(matches!(eisenstein(3, 5), Err(ModFormError::InvalidWeight(3))));
        assert!(matches!(eisenstein(0, 5), Err(ModFormError::InvalidWeight(0))));
    }
}
