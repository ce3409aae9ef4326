//! Synthetic mock data with planted limits.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};

use super::MockCoefficients;
use crate::exactnum::{rat, rat_int, rational_pow, ExactRational};
use crate::heckeops::{apply_d_inverse_pow, apply_v};
use crate::modforms::{eta_power_cm, factorize, NewformData};
use crate::qseries::QSeries;

/// `sigma_3(n)` from the factorization of `n`.
fn sigma3(n: u64) -> BigInt {
    factorize(n).into_iter().fold(BigInt::one(), |acc, (p, e)| {
        let p3 = BigInt::from(p).pow(3);
        let mut term = BigInt::one();
        let mut power = BigInt::one();
        for _ in 0..e {
            power *= &p3;
            term += &power;
        }
        acc * term
    })
}

/// `M+ = c E_{g|V(3)} + W` for `g = eta(4z)^6` at the inert prime 3, where
/// `W = q^-1 + 240 sum sigma_3(n) q^n` stands in for the weakly holomorphic
/// remainder: all the limit argument uses is its bounded denominators.
#[derive(Clone, Debug)]
pub struct InertFixture {
    pub g: NewformData,
    pub planted: ExactRational,
}

impl InertFixture {
    pub const PRIME: u64 = 3;

    pub fn new(planted: ExactRational, g_prec: i64) -> Self {
        Self { g: eta_power_cm(g_prec), planted }
    }

    fn w(n: u64) -> ExactRational {
        rat_int(sigma3(n) * 240)
    }

    /// Weight `2 - k` expansion of `M+` up to `q^prec`.
    pub fn mplus_series(&self, prec: i64) -> QSeries {
        let k = self.g.weight;
        let gv = apply_v(self.g.series(), Self::PRIME).truncate(prec);
        let egv = apply_d_inverse_pow(&gv, k - 1).scale(&self.planted);
        let mut coeffs = vec![ExactRational::zero(); (prec + 1) as usize];
        coeffs[0] = rat(1, 1);
        for n in 1..prec {
            coeffs[(n + 1) as usize] = Self::w(n as u64);
        }
        let w = QSeries::from_rationals(-1, prec, coeffs).expect("valid range");
        &egv + &w
    }
}

impl MockCoefficients for InertFixture {
    fn weight(&self) -> u32 {
        self.g.weight
    }

    fn d_coefficient(&self, n: u64) -> Option<ExactRational> {
        if n == 0 {
            return Some(ExactRational::zero());
        }
        let shadow = self.shadow_coefficient(n / Self::PRIME).filter(|_| n.is_multiple_of(Self::PRIME));
        let shadow = shadow.unwrap_or_else(ExactRational::zero);
        let power = rational_pow(n as i64, i64::from(self.g.weight) - 1);
        Some(&self.planted * shadow + power * Self::w(n))
    }

    fn shadow_coefficient(&self, n: u64) -> Option<ExactRational> {
        self.g.a_extended(n).ok()
    }
}

/// Coefficients of `D^(k-1) M+` read from a finite series.
#[derive(Clone, Debug)]
pub struct SeriesMockData {
    pub d_series: QSeries,
    pub shadow: NewformData,
}

impl MockCoefficients for SeriesMockData {
    fn weight(&self) -> u32 {
        self.shadow.weight
    }

    fn d_coefficient(&self, n: u64) -> Option<ExactRational> {
        self.d_series.coefficient(i64::try_from(n).ok()?).ok()
    }

    fn shadow_coefficient(&self, n: u64) -> Option<ExactRational> {
        self.shadow.a_extended(n).ok()
    }
}

/// `b_M(p^m) = c a_p^m + p^(m(k-1)) w_m` at a prime dividing the level.
#[derive(Clone, Debug)]
pub struct BadPrimeFixture {
    pub p: u64,
    pub k: u32,
    pub a_p: ExactRational,
    pub planted: ExactRational,
    /// `b[m] = b_M(p^m)`.
    pub b: Vec<ExactRational>,
}

impl BadPrimeFixture {
    pub fn build(p: u64, k: u32, a_p: ExactRational, planted: ExactRational, noise: &[i64]) -> Self {
        let b = noise
            .iter()
            .enumerate()
            .map(|(m, &w)| {
                let m = m as i64;
                &planted * pow(&a_p, m) + rational_pow(p as i64, m * (i64::from(k) - 1)) * rat(w, 1)
            })
            .collect();
        Self { p, k, a_p, planted, b }
    }

    /// A fixture with `ord_p a_p = k/2 - 1`, random unit part, planted
    /// constant and noise.
    pub fn random(rng: &mut impl Rng, len: usize) -> Self {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let k = [4u32, 6, 8][rng.gen_range(0..3)];
        let unit = loop {
            let u: i64 = rng.gen_range(1..60);
            if u % p as i64 != 0 {
                break if rng.gen_bool(0.5) { u } else { -u };
            }
        };
        let a_p = rational_pow(p as i64, i64::from(k / 2) - 1) * rat(unit, 1);
        let planted = rat(rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(1..=999));
        let noise: Vec<i64> = (0..len).map(|_| rng.gen_range(-1000..=1000)).collect();
        Self::build(p, k, a_p, planted, &noise)
    }

    /// [`BadPrimeFixture::random`] from a fixed seed.
    pub fn seeded(seed: u64, len: usize) -> Self {
        Self::random(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), len)
    }
}

fn pow(x: &ExactRational, e: i64) -> ExactRational {
    (0..e).fold(ExactRational::one(), |acc, _| acc * x)
}
