use num_integer::Integer;
use num_traits::{One, Zero};

use super::eta::{delta_power, eta_quotient};
use super::ModFormError;
use crate::exactnum::{int_pow, rat_int, ExactRational};
use crate::qseries::{QSeries, SeriesMeta};

/// A root of unity `zeta_order^exponent`, or zero when `order == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicValue {
    pub order: u32,
    pub exponent: u32,
}

impl CyclotomicValue {
    pub const ZERO: Self = Self { order: 0, exponent: 0 };
    pub const ONE: Self = Self { order: 1, exponent: 0 };
    pub const MINUS_ONE: Self = Self { order: 2, exponent: 1 };

    pub fn from_sign(s: i64) -> Self {
        match s.signum() {
            0 => Self::ZERO,
            1 => Self::ONE,
            _ => Self::MINUS_ONE,
        }
    }

    /// The value as a rational when it is 0 or +-1.
    pub fn to_rational(self) -> Option<ExactRational> {
        if self.order == 0 {
            return Some(ExactRational::zero());
        }
        let e = self.exponent % self.order;
        if e == 0 {
            Some(ExactRational::one())
        } else if 2 * e == self.order {
            Some(-ExactRational::one())
        } else {
            None
        }
    }

    fn mul(self, other: Self) -> Self {
        if self.order == 0 || other.order == 0 {
            return Self::ZERO;
        }
        let order = self.order.lcm(&other.order);
        let e = (self.exponent * (order / self.order) + other.exponent * (order / other.order)) % order;
        Self { order, exponent: e }.reduced()
    }

    fn reduced(self) -> Self {
        if self.order == 0 {
            return self;
        }
        let g = self.exponent.gcd(&self.order);
        let g = if self.exponent == 0 { self.order } else { g };
        Self { order: self.order / g, exponent: self.exponent / g }
    }
}

/// A Dirichlet character modulo `modulus`, stored as its value table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<CyclotomicValue>,
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        let values = (0..modulus)
            .map(|d| if d.gcd(&modulus) == 1 { CyclotomicValue::ONE } else { CyclotomicValue::ZERO })
            .collect();
        Self { modulus, values }
    }

    pub fn from_values(modulus: u64, values: Vec<CyclotomicValue>) -> Result<Self, ModFormError> {
        if values.len() as u64 != modulus || modulus == 0 {
            return Err(ModFormError::InvariantViolation {
                index: values.len() as i64,
                message: format!("character table needs {modulus} values"),
            });
        }
        Ok(Self { modulus, values: values.into_iter().map(CyclotomicValue::reduced).collect() })
    }

    /// The quadratic character attached to an imaginary quadratic field.
    pub fn from_cm_field(cm: &CmField, modulus: u64) -> Self {
        let values = (0..modulus).map(|d| CyclotomicValue::from_sign(cm.chi(d as i64))).collect();
        Self { modulus, values }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self, n: i64) -> CyclotomicValue {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// `chi(n)` as a rational; `None` for non-real values.
    pub fn rational_value(&self, n: i64) -> Option<ExactRational> {
        self.value(n).to_rational()
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.modulus).all(|d| {
            let v = self.values[d as usize];
            if d.gcd(&self.modulus) == 1 {
                v.to_rational() == Some(ExactRational::one())
            } else {
                v.order == 0
            }
        })
    }

    pub fn is_multiplicative(&self) -> bool {
        let m = self.modulus;
        (0..m).all(|a| (0..m).all(|b| self.value((a * b) as i64) == self.value(a as i64).mul(self.value(b as i64))))
    }

    pub fn values(&self) -> &[CyclotomicValue] {
        &self.values
    }

    pub fn label(&self) -> String {
        if self.is_trivial() {
            format!("trivial mod {}", self.modulus)
        } else {
            format!("character mod {}", self.modulus)
        }
    }
}

/// `K = Q(sqrt(-D))` with `-D` a fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CmField {
    pub discriminant: i64,
}

impl CmField {
    pub fn new(discriminant: i64) -> Result<Self, ModFormError> {
        let ok = discriminant < 0
            && (discriminant.rem_euclid(4) == 1 || (discriminant.rem_euclid(16) == 8 || discriminant.rem_euclid(16) == 12));
        if !ok {
            return Err(ModFormError::InvalidDiscriminant(discriminant));
        }
        Ok(Self { discriminant })
    }

    pub fn gaussian() -> Self {
        Self { discriminant: -4 }
    }

    /// Kronecker symbol `(disc / n)`.
    pub fn chi(&self, n: i64) -> i64 {
        kronecker_symbol(self.discriminant, n)
    }
}

/// Kronecker symbol `(a / n)` for `n >= 0`; `(a / 0) = [a = +-1]`.
pub fn kronecker_symbol(a: i64, n: i64) -> i64 {
    if n == 0 {
        return i64::from(a.abs() == 1);
    }
    let mut n = n.abs();
    let mut result = 1;
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    result * jacobi(a.rem_euclid(n), n)
}

fn jacobi(mut a: i64, mut n: i64) -> i64 {
    let mut result = 1;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A normalized Hecke eigenform with its q-expansion `sum_{n >= 1} a(n) q^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct NewformData {
    pub weight: u32,
    pub level: u64,
    pub character: DirichletCharacter,
    coefficients: QSeries,
}

impl NewformData {
    /// Validates normalization, multiplicativity and the prime power recursion.
    pub fn new(weight: u32, level: u64, character: DirichletCharacter, coefficients: QSeries) -> Result<Self, ModFormError> {
        let g = Self::new_unchecked(weight, level, character, coefficients)?;
        g.validate()?;
        Ok(g)
    }

    pub(crate) fn new_unchecked(
        weight: u32,
        level: u64,
        character: DirichletCharacter,
        coefficients: QSeries,
    ) -> Result<Self, ModFormError> {
        if weight < 2 {
            return Err(ModFormError::InvalidWeight(weight as i64));
        }
        if coefficients.prec() < 2 {
            return Err(ModFormError::InvariantViolation { index: 1, message: "no coefficients".into() });
        }
        let prec = coefficients.prec();
        let coeffs = (1..prec).map(|n| coefficients.coefficient(n)).collect::<Result<Vec<_>, _>>()?;
        let meta = SeriesMeta { weight: Some(weight as i64), level: Some(level), character: Some(character.label()) };
        let coefficients = QSeries::from_rationals(1, prec, coeffs)?.with_meta(meta);
        Ok(Self { weight, level, character, coefficients })
    }

    pub fn series(&self) -> &QSeries {
        &self.coefficients
    }

    pub fn prec(&self) -> i64 {
        self.coefficients.prec()
    }

    /// `a(n)` within the stored range.
    pub fn a(&self, n: i64) -> Result<ExactRational, ModFormError> {
        if n <= 0 {
            return Ok(ExactRational::zero());
        }
        Ok(self.coefficients.coefficient(n)?)
    }

    /// `chi(p) p^(k-1)`.
    pub fn norm_term(&self, p: u64) -> Result<ExactRational, ModFormError> {
        let chi = self.character.rational_value(p as i64).ok_or(ModFormError::NonRealCharacter(p))?;
        Ok(chi * rat_int(int_pow(p as i64, self.weight - 1)))
    }

    /// `a(n)` for any `n >= 1` whose prime factors are below the stored
    /// precision, using multiplicativity and the Hecke recursion.
    pub fn a_extended(&self, n: u64) -> Result<ExactRational, ModFormError> {
        if n == 0 {
            return Ok(ExactRational::zero());
        }
        if (n as i64) < self.prec() {
            return self.a(n as i64);
        }
        let mut result = ExactRational::one();
        for (p, r) in factorize(n) {
            result *= self.a_prime_power(p, r)?;
        }
        Ok(result)
    }

    fn a_prime_power(&self, p: u64, r: u32) -> Result<ExactRational, ModFormError> {
        let ap = self.a(p as i64).map_err(|_| ModFormError::InsufficientData(p))?;
        let norm = self.norm_term(p)?;
        let (mut prev, mut cur) = (ExactRational::one(), ap.clone());
        if r == 0 {
            return Ok(prev);
        }
        for _ in 1..r {
            let next = &ap * &cur - &norm * &prev;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// First index violating normalization, multiplicativity or the recursion.
    pub fn validate(&self) -> Result<(), ModFormError> {
        let prec = self.prec();
        if self.a(1)? != ExactRational::one() {
            return Err(ModFormError::InvariantViolation { index: 1, message: "a(1) must be 1".into() });
        }
        for n in 2..prec {
            let factors = factorize(n as u64);
            if factors.len() > 1 {
                let (p, r) = factors[0];
                let q = p.pow(r);
                let m = n as u64 / q;
                if self.a(n)? != self.a(q as i64)? * self.a(m as i64)? {
                    return Err(ModFormError::InvariantViolation {
                        index: n,
                        message: format!("a({n}) != a({q}) a({m})"),
                    });
                }
            } else if let Some(&(p, r)) = factors.first() {
                if r >= 2 {
                    let expected = match self.character.rational_value(p as i64) {
                        Some(chi) => {
                            let pk = rat_int(int_pow(p as i64, self.weight - 1));
                            self.a(p as i64)? * self.a(n / p as i64)? - chi * pk * self.a(n / (p * p) as i64)?
                        }
                        None => continue,
                    };
                    if self.a(n)? != expected {
                        return Err(ModFormError::InvariantViolation {
                            index: n,
                            message: format!("a({n}) breaks the recursion at p = {p}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut r = 0;
            while n.is_multiple_of(d) {
                n /= d;
                r += 1;
            }
            out.push((d, r));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Delta = q prod (1 - q^n)^24` as a level one newform.
pub fn delta(prec: i64) -> NewformData {
    let series = delta_power(1, prec);
    NewformData::new_unchecked(12, 1, DirichletCharacter::trivial(1), series).expect("Delta is well formed")
}

/// `eta(4z)^6`, weight 3, level 16, character `chi_{-4}`, CM by `Q(i)`.
pub fn eta_power_cm(prec: i64) -> NewformData {
    let series = eta_quotient(6, 4, 1, prec);
    let chi = DirichletCharacter::from_cm_field(&CmField::gaussian(), 16);
    NewformData::new_unchecked(3, 16, chi, series).expect("eta(4z)^6 is well formed")
}
