//! Roots of the Hecke polynomial `x^2 - a_p x + chi(p) p^(k-1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::padic::{PadicContext, PadicValue};
use super::rational::{
    biguint_to_bigint, prime_power, rat_int, rational_pow, rational_unit_residue,
    valuation_unchecked, ExactRational, Valuation,
};
use super::ExactNumError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootsKind {
    /// `ord beta < ord beta'`; both roots lie in Q_p.
    Generic { beta: PadicValue, beta_prime: PadicValue },
    /// `a_p = 0`; only `beta^2 = -chi(p) p^(k-1)` is stored.
    InertSquare { beta_squared: PadicValue },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusRoots {
    pub a_p: ExactRational,
    pub norm_term: ExactRational,
    pub weight: u32,
    pub kind: RootsKind,
    /// `ord_p f(y_i)` along the Hensel iteration, capped at the working precision.
    pub hensel_trace: Vec<i64>,
}

impl FrobeniusRoots {
    pub fn context(&self) -> PadicContext {
        match &self.kind {
            RootsKind::Generic { beta, .. } => beta.context(),
            RootsKind::InertSquare { beta_squared } => beta_squared.context(),
        }
    }

    pub fn prime(&self) -> u64 {
        self.context().prime()
    }

    pub fn is_generic(&self) -> bool {
        matches!(self.kind, RootsKind::Generic { .. })
    }

    pub fn beta(&self) -> Option<&PadicValue> {
        match &self.kind {
            RootsKind::Generic { beta, .. } => Some(beta),
            RootsKind::InertSquare { .. } => None,
        }
    }

    pub fn beta_prime(&self) -> Option<&PadicValue> {
        match &self.kind {
            RootsKind::Generic { beta_prime, .. } => Some(beta_prime),
            RootsKind::InertSquare { .. } => None,
        }
    }

    /// `beta^2`; computed from `beta` in generic mode.
    pub fn beta_squared(&self) -> PadicValue {
        match &self.kind {
            RootsKind::Generic { beta, .. } => beta * beta,
            RootsKind::InertSquare { beta_squared } => beta_squared.clone(),
        }
    }
}

/// Factors `x^2 - a_p x + chi_p p^(k-1)` over Q_p.
pub fn frobenius_roots(
    a_p: &ExactRational,
    chi_p: &ExactRational,
    k: u32,
    ctx: PadicContext,
) -> Result<FrobeniusRoots, ExactNumError> {
    let p = ctx.prime();
    let norm_term = chi_p * rational_pow(p as i64, k as i64 - 1);
    if a_p.is_zero() {
        let beta_squared = PadicValue::from_rational(&-norm_term.clone(), ctx);
        return Ok(FrobeniusRoots {
            a_p: a_p.clone(),
            norm_term,
            weight: k,
            kind: RootsKind::InertSquare { beta_squared },
            hensel_trace: Vec::new(),
        });
    }
    let Valuation::Finite(v) = valuation_unchecked(a_p, p) else { unreachable!() };
    let c_val = match valuation_unchecked(&norm_term, p) {
        Valuation::Finite(c) => c,
        Valuation::Infinite => {
            // chi(p) = 0: the roots are a_p and 0.
            let beta = PadicValue::from_rational(a_p, ctx);
            return Ok(FrobeniusRoots {
                a_p: a_p.clone(),
                norm_term,
                weight: k,
                kind: RootsKind::Generic { beta, beta_prime: PadicValue::zero(ctx) },
                hensel_trace: Vec::new(),
            });
        }
    };
    if 2 * v >= c_val {
        return Err(ExactNumError::EqualSlopes { ord_a: v, ord_norm: c_val });
    }

    // x = p^v y:  y^2 - u y + c' with u a unit and ord c' > 0.
    let n = ctx.digits();
    let modulus = biguint_to_bigint(prime_power(p, n));
    let u = residue(&(a_p / rational_pow(p as i64, v)), p, n);
    let c = residue(&(&norm_term / rational_pow(p as i64, 2 * v)), p, n);
    let f = |y: &BigInt| (y * y - &u * y + &c).mod_floor(&modulus);
    let mut y = u.mod_floor(&BigInt::from(p));
    let mut trace = Vec::new();
    loop {
        let fy = f(&y);
        let ord = if fy.is_zero() { n as i64 } else { integer_ord(&fy, p).min(n as i64) };
        trace.push(ord);
        if ord >= n as i64 {
            break;
        }
        let dfy = (BigInt::from(2) * &y - &u).mod_floor(&modulus);
        let inv = super::rational::mod_inverse(&dfy, &modulus).expect("derivative is a unit");
        y = (&y - fy * inv).mod_floor(&modulus);
    }

    let y_val = PadicValue::from_rational(&rat_int(y), ctx);
    let beta = y_val.scale_rational(&rational_pow(p as i64, v));
    let beta_prime = beta.inverse()?.scale_rational(&norm_term);
    Ok(FrobeniusRoots {
        a_p: a_p.clone(),
        norm_term,
        weight: k,
        kind: RootsKind::Generic { beta, beta_prime },
        hensel_trace: trace,
    })
}

fn residue(x: &ExactRational, p: u64, n: u32) -> BigInt {
    let (val, unit) = rational_unit_residue(x, p, n);
    debug_assert!(val >= 0);
    let modulus = prime_power(p, n);
    biguint_to_bigint((unit * prime_power(p, val as u32)) % modulus)
}

fn integer_ord(x: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    #[test]
    fn delta_at_three() {
        let ctx = PadicContext::new(3, 60).unwrap();
        let roots = frobenius_roots(&rat(252, 1), &rat(1, 1), 12, ctx).unwrap();
        let beta = roots.beta().unwrap();
        let beta_prime = roots.beta_prime().unwrap();
        assert_eq!(beta.valuation(), Valuation::Finite(2));
        assert_eq!(beta_prime.valuation(), Valuation::Finite(9));
        let sum = beta + beta_prime;
        assert!(sum.agrees_with(&PadicValue::from_integer(252, ctx), 62));
        let prod = beta * beta_prime;
        assert!(prod.agrees_with(&PadicValue::from_rational(&rational_pow(3, 11), ctx), 71));
    }

    #[test]
    fn inert_square_mode() {
        let ctx = PadicContext::new(3, 20).unwrap();
        let roots = frobenius_roots(&rat(0, 1), &rat(-1, 1), 3, ctx).unwrap();
        assert!(!roots.is_generic());
        assert_eq!(roots.beta_squared(), PadicValue::from_integer(9, ctx));
    }

    #[test]
    fn equal_slopes_refused() {
        // x^2 - 3x + 9 at p = 3: both roots have valuation 1.
        let ctx = PadicContext::new(3, 20).unwrap();
        let err = frobenius_roots(&rat(3, 1), &rat(1, 1), 3, ctx).unwrap_err();
        assert!(matches!(err, ExactNumError::EqualSlopes { .. }));
    }

    #[test]
    fn hensel_converges_quadratically() {
        let ctx = PadicContext::new(3, 200).unwrap();
        let roots = frobenius_roots(&rat(252, 1), &rat(1, 1), 12, ctx).unwrap();
        let t = &roots.hensel_trace;
        assert!(t.len() >= 3);
        for w in t.windows(2) {
            assert!(w[1] >= (2 * w[0]).min(200), "{t:?}");
        }
    }

    #[test]
    fn rational_roots_recovered() {
        // (x - 4)(x - 5^3 * 7) at p = 5
        let ctx = PadicContext::new(5, 30).unwrap();
        let a = rat(4 + 875, 1);
        let roots = frobenius_roots(&a, &rat(28, 1), 4, ctx).unwrap();
        assert!(roots.beta().unwrap().agrees_with(&PadicValue::from_integer(4, ctx), 30));
        assert!(roots.beta_prime().unwrap().agrees_with(&PadicValue::from_integer(875, ctx), 33));
    }
}
