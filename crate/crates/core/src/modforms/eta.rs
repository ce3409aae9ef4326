//! Powers of the Euler product `prod (1 - q^n)`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::qseries::{QSeries, SeriesMeta};

/// Signs of `prod (1 - q^n)` at the generalized pentagonal numbers below `len`.
fn pentagonal(len: usize) -> Vec<(usize, i64)> {
    let mut out = vec![(0, 1)];
    let mut k = 1i64;
    loop {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let a = (k * (3 * k - 1) / 2) as usize;
        let b = (k * (3 * k + 1) / 2) as usize;
        if a >= len {
            break;
        }
        out.push((a, sign));
        if b < len {
            out.push((b, sign));
        }
        k += 1;
    }
    out
}

/// Coefficients of `prod (1 - q^n)^a` below `q^len`, for any integer `a`.
///
/// Uses `n f_n = sum_j ((a+1) j - n) g_j f_{n-j}` with `g` the sparse
/// pentagonal series, so the cost is `O(len^1.5)` big-integer operations.
pub fn euler_power(a: i64, len: usize) -> Vec<BigInt> {
    let g = pentagonal(len);
    let mut f = vec![BigInt::zero(); len];
    if len == 0 {
        return f;
    }
    f[0] = BigInt::from(1);
    for n in 1..len {
        let mut acc = BigInt::zero();
        for &(j, s) in g.iter().skip(1) {
            if j > n {
                break;
            }
            let w = ((a + 1) * j as i64 - n as i64) * s;
            if w != 0 {
                acc += &f[n - j] * w;
            }
        }
        f[n] = acc / BigInt::from(n);
    }
    f
}

/// `q^shift prod (1 - q^(step n))^a` to precision `prec`.
pub fn eta_quotient(a: i64, step: usize, shift: i64, prec: i64) -> QSeries {
    let len = ((prec - shift).max(0) as usize).div_ceil(step);
    let base = euler_power(a, len);
    let mut coeffs = vec![BigInt::zero(); (prec - shift).max(1) as usize];
    for (i, c) in base.into_iter().enumerate() {
        if i * step < coeffs.len() {
            coeffs[i * step] = c;
        }
    }
    QSeries::from_integers(shift, prec.max(shift + 1), coeffs).expect("valid range")
}

/// `Delta^t = q^t prod (1 - q^n)^(24 t)` to precision `prec`; `t` may be negative.
pub fn delta_power(t: i64, prec: i64) -> QSeries {
    eta_quotient(24 * t, 1, t, prec).with_meta(SeriesMeta {
        weight: Some(12 * t),
        level: Some(1),
        character: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_power(a: u32, len: usize) -> Vec<BigInt> {
        let mut f = vec![BigInt::zero(); len];
        f[0] = BigInt::from(1);
        for n in 1..len {
            for _ in 0..a {
                for i in (n..len).rev() {
                    let prev = f[i - n].clone();
                    f[i] -= prev;
                }
            }
        }
        f
    }

    #[test]
    fn recurrence_matches_direct_product() {
        assert_eq!(euler_power(24, 40), naive_power(24, 40));
        assert_eq!(euler_power(6, 60), naive_power(6, 60));
        assert_eq!(euler_power(1, 30), naive_power(1, 30));
    }

    #[test]
    fn negative_power_is_inverse() {
        let f = euler_power(24, 50);
        let g = euler_power(-24, 50);
        let prod = crate::qseries::mul_integer_sequences(&f, &g, 50);
        assert_eq!(prod[0], BigInt::from(1));
        assert!(prod[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn partitions_from_inverse() {
        let p = euler_power(-1, 12);
        let expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56];
        assert_eq!(p, expected.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    }
}
