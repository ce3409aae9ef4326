//! Truncated products of integer sequences.
//!
//! Large products go through Kronecker substitution: each sequence is packed
//! into one big integer with 32-bit-aligned slots, the integers are
//! multiplied once, and the slots are read back. A constant offset in every
//! slot keeps the packed product nonnegative so slots can be sliced directly.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

const SCHOOLBOOK_LIMIT: usize = 2048;

/// First `n_out` coefficients of the product of `a` and `b`.
pub fn mul_integer_sequences(a: &[BigInt], b: &[BigInt], n_out: usize) -> Vec<BigInt> {
    let a = &a[..a.len().min(n_out)];
    let b = &b[..b.len().min(n_out)];
    if a.is_empty() || b.is_empty() || n_out == 0 {
        return vec![BigInt::zero(); n_out];
    }
    if a.len() * b.len() <= SCHOOLBOOK_LIMIT {
        return schoolbook(a, b, n_out);
    }
    kronecker(a, b, n_out)
}

fn schoolbook(a: &[BigInt], b: &[BigInt], n_out: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n_out];
    for (i, x) in a.iter().enumerate().take(n_out) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n_out - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn max_bits(xs: &[BigInt]) -> u64 {
    xs.iter().map(|x| x.bits()).max().unwrap_or(0)
}

fn pack(xs: &[BigInt], words: usize) -> BigInt {
    let mut pos = vec![0u32; xs.len() * words];
    let mut neg = vec![0u32; xs.len() * words];
    let mut any_neg = false;
    for (i, x) in xs.iter().enumerate() {
        let (sign, digits) = x.to_u32_digits();
        let target = match sign {
            Sign::Minus => {
                any_neg = true;
                &mut neg
            }
            Sign::Plus => &mut pos,
            Sign::NoSign => continue,
        };
        target[i * words..i * words + digits.len()].copy_from_slice(&digits);
    }
    let p = BigInt::from_biguint(Sign::Plus, BigUint::new(pos));
    if any_neg {
        p - BigInt::from_biguint(Sign::Plus, BigUint::new(neg))
    } else {
        p
    }
}

fn kronecker(a: &[BigInt], b: &[BigInt], n_out: usize) -> Vec<BigInt> {
    let terms = a.len().min(b.len()) as u64;
    let slot_bits = max_bits(a) + max_bits(b) + (64 - terms.leading_zeros() as u64) + 2;
    let words = slot_bits.div_ceil(32) as usize;
    let slots = a.len() + b.len() - 1;

    let product = pack(a, words) * pack(b, words);

    let mut offset = vec![0u32; slots * words];
    for s in 0..slots {
        offset[s * words + words - 1] = 1 << 31;
    }
    let shifted = product + BigInt::from_biguint(Sign::Plus, BigUint::new(offset));
    let (sign, digits) = shifted.to_u32_digits();
    debug_assert!(sign != Sign::Minus);

    let half = BigInt::from(1u8) << (32 * words - 1);
    (0..n_out)
        .map(|s| {
            if s >= slots {
                return BigInt::zero();
            }
            let start = s * words;
            let end = ((s + 1) * words).min(digits.len());
            let slot = if start < digits.len() {
                BigUint::from_slice(&digits[start..end])
            } else {
                BigUint::zero()
            };
            BigInt::from_biguint(Sign::Plus, slot) - &half
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_seq(rng: &mut ChaCha8Rng, len: usize, bits: u32) -> Vec<BigInt> {
        (0..len)
            .map(|_| {
                let mut x = BigInt::zero();
                for _ in 0..bits.div_ceil(32) {
                    x = (x << 32) + BigInt::from(rng.gen::<u32>());
                }
                if rng.gen_bool(0.5) {
                    -x
                } else {
                    x
                }
            })
            .collect()
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(la, lb, bits, n) in &[(80, 90, 40, 170), (200, 150, 300, 120), (64, 64, 1, 127), (100, 3, 95, 102)] {
            let a = random_seq(&mut rng, la, bits);
            let b = random_seq(&mut rng, lb, bits);
            assert_eq!(kronecker(&a, &b, n), schoolbook(&a, &b, n));
        }
    }

    #[test]
    fn zeros_and_short_output() {
        let a = vec![BigInt::zero(); 100];
        let b: Vec<BigInt> = (0..100).map(BigInt::from).collect();
        assert!(mul_integer_sequences(&a, &b, 150).iter().all(|x| x.is_zero()));
        let one = vec![BigInt::from(1)];
        assert_eq!(mul_integer_sequences(&one, &b, 5), b[..5].to_vec());
    }
}
