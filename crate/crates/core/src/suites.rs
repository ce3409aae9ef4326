//! Seeded randomized checks of the operator identities, annihilation lemmas,
//! extraction oracles and fixture recoveries, grouped by module.

use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactnum::{
    frobenius_roots, is_prime, rat, rat_int, rational_pow, ExactRational, PadicContext, PadicValue,
};
use crate::heckeops::{apply_b, apply_b_factored, apply_d_inverse_pow, apply_d_pow, apply_t, apply_u, apply_v};
use crate::limits::fixtures::{BadPrimeFixture, InertFixture};
use crate::limits::{
    compute_alpha_badprime, compute_alpha_inert, compute_gamma_star, h_alpha_coefficient, inert_w_limit, padic_limit,
    LimitError,
};
use crate::mockcorrect::{
    build_delta_seed, eichler_integral, eichler_integral_v, f_alpha, f_alpha_delta, f_alpha_star, MockSeed,
};
use crate::modforms::{
    decompose_in_basis, delta, delta_power, eisenstein, eta_power_cm, miller_basis, CmField, DirichletCharacter,
    NewformData,
};
use crate::qseries::{PadicSeries, QSeries};
use crate::verify::{
    check_padic_form, denominator_witness, digit_table, euler_congruence_check, twist_lemma_check, TableSpec,
};

pub const SUITES: [&str; 7] = ["exactnum", "qseries", "modforms", "heckeops", "mockcorrect", "limits", "verify"];

/// Failure messages kept per check.
const KEPT_FAILURES: usize = 5;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Randomized cases per identity.
    pub cases: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 20240601, cases: 100 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    #[serde(serialize_with = "as_seconds")]
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn elapsed(&self) -> Duration {
        self.checks.iter().map(|c| c.elapsed).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "[{}] {} ({:.2}s)\n",
            self.suite,
            if self.passed() { "pass" } else { "FAIL" },
            self.elapsed().as_secs_f64()
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  {:<4} {:<28} {:>5} cases {:>8.3}s\n",
                if c.passed() { "ok" } else { "FAIL" },
                c.name,
                c.cases,
                c.elapsed.as_secs_f64()
            ));
            for f in &c.failures {
                out.push_str(&format!("       {f}\n"));
            }
        }
        out
    }
}

fn as_seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

struct Runner {
    seed: u64,
    ordinal: u64,
    checks: Vec<CheckReport>,
}

impl Runner {
    fn new(seed: u64, salt: u64) -> Self {
        Self { seed: seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt << 32), ordinal: 0, checks: Vec::new() }
    }

    fn check(&mut self, name: &str, cases: usize, mut f: impl FnMut(&mut ChaCha8Rng) -> Result<(), String>) {
        self.ordinal += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(self.ordinal));
        let start = Instant::now();
        let mut failed = 0;
        let mut failures = Vec::new();
        for i in 0..cases {
            if let Err(msg) = f(&mut rng) {
                failed += 1;
                if failures.len() < KEPT_FAILURES {
                    failures.push(format!("case {i}: {msg}"));
                }
            }
        }
        self.checks.push(CheckReport { name: name.to_string(), cases, failed, failures, elapsed: start.elapsed() });
    }

    fn finish(self, suite: &str) -> SuiteReport {
        SuiteReport { suite: suite.to_string(), checks: self.checks }
    }
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Option<SuiteReport> {
    let salt = SUITES.iter().position(|s| *s == name)? as u64;
    let mut r = Runner::new(config.seed, salt);
    match name {
        "exactnum" => exactnum_suite(&mut r, config.cases),
        "qseries" => qseries_suite(&mut r, config.cases),
        "modforms" => modforms_suite(&mut r, config.cases),
        "heckeops" => heckeops_suite(&mut r, config.cases),
        "mockcorrect" => mockcorrect_suite(&mut r, config.cases),
        "limits" => limits_suite(&mut r),
        "verify" => verify_suite(&mut r, config.cases),
        _ => return None,
    }
    Some(r.finish(name))
}

pub fn run_all(config: &SuiteConfig) -> Vec<SuiteReport> {
    SUITES.iter().filter_map(|s| run_suite(s, config)).collect()
}

fn random_rational(rng: &mut impl Rng, bound: i64) -> ExactRational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=9))
}

fn random_series(rng: &mut impl Rng) -> QSeries {
    let lowest = rng.gen_range(-3..=0);
    let len = rng.gen_range(20..60);
    let coeffs: Vec<ExactRational> = (0..len).map(|_| random_rational(rng, 50)).collect();
    QSeries::from_rationals(lowest, lowest + len, coeffs).expect("valid range")
}

fn random_prime(rng: &mut impl Rng) -> u64 {
    [2u64, 3, 5, 7][rng.gen_range(0..4)]
}

/// Exact agreement of two rational series up to their common precision.
fn same(a: &QSeries, b: &QSeries) -> Result<(), String> {
    let prec = a.prec().min(b.prec());
    let diff = &a.truncate(prec) - &b.truncate(prec);
    match diff.valuation() {
        None => Ok(()),
        Some(n) => Err(format!("first difference at q^{n} (precision {prec})")),
    }
}

/// Agreement of two p-adic series to carried precision.
fn same_padic(a: &PadicSeries, b: &PadicSeries) -> Result<(), String> {
    let prec = a.prec().min(b.prec());
    let diff = &a.truncate(prec) - &b.truncate(prec);
    let bad = diff.iter().find(|(_, c)| !c.is_zero()).map(|(n, c)| format!("difference {c:?} at q^{n}"));
    bad.map_or(Ok(()), Err)
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exactnum_suite(r: &mut Runner, cases: usize) {
    r.check("padic_field_ops", cases, |rng| {
        let p = random_prime(rng);
        let ctx = PadicContext::new(p, rng.gen_range(10..40)).map_err(|e| e.to_string())?;
        let (a, b) = (random_rational(rng, 10_000), random_rational(rng, 10_000));
        if b == rat(0, 1) {
            return Ok(());
        }
        let (pa, pb) = (PadicValue::from_rational(&a, ctx), PadicValue::from_rational(&b, ctx));
        let q = (&pa * &pb).checked_div(&pb).map_err(|e| e.to_string())?;
        expect((&q - &pa).is_zero(), || format!("(a b)/b != a for a = {a}, b = {b}, p = {p}"))?;
        let s = PadicValue::from_rational(&(&a + &b), ctx);
        expect((&s - &(&pa + &pb)).is_zero(), || format!("sum mismatch for a = {a}, b = {b}"))
    });

    r.check("frobenius_vieta", cases, |rng| {
        let p = random_prime(rng);
        let k = 2 * rng.gen_range(2..=6u32);
        let a_p = loop {
            let a: i64 = rng.gen_range(-500..=500);
            if a % p as i64 != 0 {
                break rat(a, 1);
            }
        };
        let ctx = PadicContext::new(p, 30).map_err(|e| e.to_string())?;
        let roots = frobenius_roots(&a_p, &rat(1, 1), k, ctx).map_err(|e| e.to_string())?;
        let (Some(b), Some(bp)) = (roots.beta(), roots.beta_prime()) else {
            return Err("ordinary prime without split roots".into());
        };
        let trace = &(b + bp) - &PadicValue::from_rational(&a_p, ctx);
        let norm = &(b * bp) - &PadicValue::from_rational(&rational_pow(p as i64, i64::from(k) - 1), ctx);
        expect(trace.is_zero() && norm.is_zero(), || format!("Vieta fails for a_p = {a_p}, p = {p}, k = {k}"))
    });
}

fn qseries_suite(r: &mut Runner, cases: usize) {
    r.check("mul_inverse", cases, |rng| {
        let a = random_series(rng);
        if a.valuation().is_none() {
            return Ok(());
        }
        let inv = a.invert().map_err(|e| e.to_string())?;
        let prod = &a * &inv;
        let one = QSeries::from_rationals(0, prod.prec(), vec![rat(1, 1)]).expect("valid");
        same(&prod, &one)
    });

    r.check("mul_assoc_comm", cases, |rng| {
        let (a, b, c) = (random_series(rng), random_series(rng), random_series(rng));
        same(&(&a * &b), &(&b * &a))?;
        same(&(&(&a * &b) * &c), &(&a * &(&b * &c)))
    });

    r.check("text_roundtrip", cases, |rng| {
        let a = random_series(rng);
        let back: QSeries = crate::qseries::read_series(&crate::qseries::write_series(&a)).map_err(|e| e.to_string())?;
        same(&a, &back)?;
        expect(a.prec() == back.prec(), || "precision lost".into())
    });
}

fn modforms_suite(r: &mut Runner, cases: usize) {
    r.check("cm_vanishing_eta6", 1, |_| {
        let g = eta_power_cm(10_001);
        let cm = CmField::gaussian();
        for n in 1..g.prec() {
            if cm.chi(n) != 1 && !g.a(n).map_err(|e| e.to_string())?.eq(&rat(0, 1)) {
                return Err(format!("a({n}) is nonzero"));
            }
        }
        Ok(())
    });

    r.check("inert_u_equals_9v", 1, |_| {
        let g = eta_power_cm(3001);
        let u = apply_u(g.series(), 3);
        let v = apply_v(g.series(), 3).scale(&rat(9, 1));
        same(&u, &v)
    });

    r.check("eisenstein_products", cases / 10, |rng| {
        let prec = rng.gen_range(20..120usize);
        let e = |k| eisenstein(k, prec).expect("even weight");
        same(&(&e(4) * &e(4)), &e(8))?;
        same(&(&e(4) * &e(6)), &e(10))?;
        same(&(&e(6) * &e(8)), &e(14))
    });

    r.check("miller_basis_span", cases / 10, |rng| {
        let k = 2 * rng.gen_range(2..=20i64);
        let prec = 80;
        let basis = miller_basis(k, prec).map_err(|e| e.to_string())?;
        let f = eisenstein(k as u32, prec as usize).map_err(|e| e.to_string())?;
        let (_, residual) = decompose_in_basis(&f, &basis).map_err(|e| e.to_string())?;
        expect(residual.is_none(), || format!("E_{k} residual at q^{residual:?}"))
    });
}

/// Level one eigenforms of dimension-one weights, and `eta(4z)^6`.
fn eigenform_pool(prec: i64) -> Vec<NewformData> {
    let d = delta_power(1, prec);
    let e = |k| eisenstein(k, prec as usize).expect("even weight");
    let one = |k, s: QSeries| {
        NewformData::new_unchecked(k, 1, DirichletCharacter::trivial(1), s.truncate(prec)).expect("well formed")
    };
    vec![
        delta(prec),
        one(16, &e(4) * &d),
        one(18, &e(6) * &d),
        one(20, &(&e(4) * &e(4)) * &d),
        one(22, &(&e(4) * &e(6)) * &d),
        eta_power_cm(prec),
    ]
}

fn chi_at(g: &NewformData, p: u64) -> ExactRational {
    g.character.rational_value(p as i64).expect("real character")
}

/// Coefficient of a synthetic `g` at `p^r m`: `s_r c(m)` with
/// `s_r = (beta^(r+1) - beta'^(r+1)) / (beta - beta')`.
fn synthetic_eigen(p: u64, beta: &ExactRational, beta_prime: &ExactRational, unit: &[ExactRational], prec: i64) -> QSeries {
    let mut coeffs = vec![rat(0, 1); prec as usize];
    for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let mut m = n as u64;
        let mut r = 0i32;
        while m.is_multiple_of(p) {
            m /= p;
            r += 1;
        }
        let s = (beta.pow(r + 1) - beta_prime.pow(r + 1)) / (beta - beta_prime);
        *slot = s * &unit[(m as usize - 1) % unit.len()];
    }
    QSeries::from_rationals(0, prec, coeffs).expect("valid")
}

fn heckeops_suite(r: &mut Runner, cases: usize) {
    r.check("hecke_commute", cases, |rng| {
        let e = random_series(rng);
        let k = rng.gen_range(2..=12u32);
        let n = rng.gen_range(1..=12u64);
        let chi = DirichletCharacter::trivial(1);
        let lhs = apply_d_pow(&apply_t(&e, n, 2 - i64::from(k), &chi).map_err(|e| e.to_string())?, k - 1)
            .scale(&rational_pow(n as i64, i64::from(k) - 1));
        let rhs = apply_t(&apply_d_pow(&e, k - 1), n, i64::from(k), &chi).map_err(|e| e.to_string())?;
        same(&lhs, &rhs)
    });

    r.check("v_commutes_with_d", cases, |rng| {
        let f = random_series(rng);
        let k = rng.gen_range(2..=12u32);
        let p = random_prime(rng);
        let lhs = apply_v(&apply_d_pow(&f, k - 1), p);
        let rhs = apply_d_pow(&apply_v(&f, p), k - 1).scale(&rational_pow(p as i64, 1 - i64::from(k)));
        same(&lhs, &rhs)
    });

    r.check("u_commutes_with_d", cases, |rng| {
        let f = random_series(rng);
        let k = rng.gen_range(2..=12u32);
        let p = random_prime(rng);
        let lhs = apply_u(&apply_d_pow(&f, k - 1), p);
        let rhs = apply_d_pow(&apply_u(&f, p), k - 1).scale(&rational_pow(p as i64, i64::from(k) - 1));
        same(&lhs, &rhs)
    });

    r.check("u_after_v_is_identity", cases, |rng| {
        let f = random_series(rng);
        let p = random_prime(rng);
        same(&apply_u(&apply_v(&f, p), p), &f)
    });

    r.check("b_factored_vs_expanded", cases, |rng| {
        let f = random_series(rng);
        let p = random_prime(rng);
        let k = rng.gen_range(2..=12u32);
        let a = rng.gen_range(0..k) as i64;
        let beta = rational_pow(p as i64, a);
        let beta_prime = rational_pow(p as i64, i64::from(k) - 1 - a);
        let expanded = apply_b(&f, p, &(&beta + &beta_prime), &rat(1, 1), k);
        let factored = apply_b_factored(&f, p, &beta, &beta_prime, k);
        same(&expanded, &factored)
    });

    let pool = eigenform_pool(400);
    r.check("eichler_annihilated_by_b", cases, |rng| {
        let g = &pool[rng.gen_range(0..pool.len())];
        let p = random_prime(rng);
        let prec = rng.gen_range(60..400);
        let e = eichler_integral(g, prec);
        let a_p = g.a(p as i64).map_err(|e| e.to_string())?;
        let b = apply_b(&e, p, &a_p, &chi_at(g, p), g.weight);
        expect(b.valuation().is_none(), || format!("weight {} at p = {p}: nonzero at q^{:?}", g.weight, b.valuation()))
    });

    r.check("eichler_v_annihilated_by_bu", cases, |rng| {
        let g = &pool[rng.gen_range(0..pool.len())];
        let p = random_prime(rng);
        let prec = rng.gen_range(60..400);
        let e = eichler_integral_v(g, p, prec);
        let a_p = g.a(p as i64).map_err(|e| e.to_string())?;
        let bu = apply_u(&apply_b(&e, p, &a_p, &chi_at(g, p), g.weight), p);
        expect(bu.valuation().is_none(), || format!("weight {} at p = {p}: nonzero at q^{:?}", g.weight, bu.valuation()))
    });

    r.check("bu_annihilates_u_eigenseries", cases, |rng| {
        let p = random_prime(rng);
        let k = rng.gen_range(2..=12u32);
        let a = rng.gen_range(0..k) as i64;
        let beta = rational_pow(p as i64, a);
        let beta_prime = rational_pow(p as i64, i64::from(k) - 1 - a);
        let lambda = if rng.gen_bool(0.5) { &beta } else { &beta_prime } * rational_pow(p as i64, 1 - i64::from(k));
        // c(p n) = lambda c(n) on exponents 1..prec.
        let prec = rng.gen_range(30..200i64);
        let mut coeffs = vec![rat(0, 1); prec as usize];
        for n in 1..prec as usize {
            coeffs[n] = if (n as u64).is_multiple_of(p) { &lambda * &coeffs[n / p as usize] } else { random_rational(rng, 30) };
        }
        let h = QSeries::from_rationals(0, prec, coeffs).expect("valid");
        let bu = apply_u(&apply_b(&h, p, &(&beta + &beta_prime), &rat(1, 1), k), p);
        expect(bu.truncate(bu.prec()).valuation().is_none_or(|v| v == 0), || format!("nonzero at q^{:?}", bu.valuation()))
            .and_then(|_| expect(bu.iter().all(|(n, c)| n == 0 || *c == rat(0, 1)), || "nonzero coefficient".into()))
    });

    r.check("stabilized_eigen_synthetic", cases, |rng| {
        let p = random_prime(rng);
        let k = rng.gen_range(2..=12u32);
        let a = rng.gen_range(0..k) as i64;
        let beta = rational_pow(p as i64, a);
        let beta_prime = rational_pow(p as i64, i64::from(k) - 1 - a);
        if beta == beta_prime {
            return Ok(());
        }
        let unit: Vec<ExactRational> = (0..7).map(|_| random_rational(rng, 20)).collect();
        let g = synthetic_eigen(p, &beta, &beta_prime, &unit, rng.gen_range(30..150));
        for (root, other) in [(&beta, &beta_prime), (&beta_prime, &beta)] {
            let stab = &g - &apply_v(&g, p).scale(other);
            same(&apply_u(&stab, p), &stab.scale(root))?;
        }
        Ok(())
    });

    r.check("stabilized_eigen_delta", 3, {
        let primes = [2u64, 3, 5];
        let mut i = 0;
        move |_| {
            let p = primes[i];
            i += 1;
            let g = delta(600);
            let ctx = PadicContext::new(p, 40).map_err(|e| e.to_string())?;
            let a_p = g.a(p as i64).map_err(|e| e.to_string())?;
            let roots = frobenius_roots(&a_p, &rat(1, 1), 12, ctx).map_err(|e| e.to_string())?;
            let (Some(b), Some(bp)) = (roots.beta(), roots.beta_prime()) else { return Err("no roots".into()) };
            let gp = g.series().to_padic(ctx);
            for (root, other) in [(b, bp), (bp, b)] {
                let stab = &gp - &apply_v(&gp, p).scale_by(other);
                same_padic(&apply_u(&stab, p), &stab.scale_by(root))?;
            }
            Ok(())
        }
    });
}

fn delta_seed(prec: i64) -> MockSeed {
    build_delta_seed(prec).expect("builtin seed")
}

fn mockcorrect_suite(r: &mut Runner, cases: usize) {
    let seed = delta_seed(400);
    r.check("b_image_bounded_denominators", 3, {
        let primes = [2u64, 3, 5];
        let mut i = 0;
        let seed = &seed;
        move |_| {
            let p = primes[i];
            i += 1;
            let tau = seed.shadow.a(p as i64).map_err(|e| e.to_string())?;
            let image = apply_b(&seed.rational_part, p, &tau, &rat(1, 1), 12);
            let ord = |range: std::ops::Range<i64>| {
                range
                    .filter_map(|n| image.coefficient(n).ok())
                    .filter_map(|c| crate::exactnum::padic_valuation(&c, p).ok().and_then(|v| v.finite()))
                    .min()
                    .unwrap_or(0)
            };
            let half = image.prec() / 2;
            let (first, second) = (ord(image.lowest()..half), ord(half..image.prec()));
            expect(second >= first, || format!("p = {p}: denominators grow, {first} then {second}"))
        }
    });

    r.check("delta_times_image_in_m24", 1, |_| {
        let h = &seed.d_image * &delta_power(1, seed.d_image.prec() + 1);
        let basis = miller_basis(24, h.prec()).map_err(|e| e.to_string())?;
        let (_, residual) = decompose_in_basis(&h, &basis).map_err(|e| e.to_string())?;
        expect(residual.is_none() && h.lowest() >= 0, || format!("residual at q^{residual:?}"))
    });

    let ctx = PadicContext::new(3, 60).expect("valid");
    let tau3 = seed.shadow.a(3).expect("in range");
    let roots = frobenius_roots(&tau3, &rat(1, 1), 12, ctx).expect("ordinary");
    r.check("delta_zero_is_f_alpha", cases / 10, |rng| {
        let gamma = PadicValue::from_rational(&random_rational(rng, 1000), ctx);
        let prec = rng.gen_range(50..400);
        let fa = f_alpha(&seed, &gamma, prec);
        let fd = f_alpha_delta(&seed, &gamma, &PadicValue::zero(ctx), &roots, prec).map_err(|e| e.to_string())?;
        same_padic(&fa, &fd)
    });

    r.check("star_linear_in_gamma", cases / 10, |rng| {
        let (g1, g2) = (random_rational(rng, 1000), random_rational(rng, 1000));
        let prec = rng.gen_range(50..400);
        let (p1, p2) = (PadicValue::from_rational(&g1, ctx), PadicValue::from_rational(&g2, ctx));
        let f1 = f_alpha_star(&seed, &p1, &roots, prec).map_err(|e| e.to_string())?;
        let f2 = f_alpha_star(&seed, &p2, &roots, prec).map_err(|e| e.to_string())?;
        let beta_prime = roots.beta_prime().expect("generic");
        let direction =
            &eichler_integral(&seed.shadow, prec).to_padic(ctx) - &eichler_integral_v(&seed.shadow, 3, prec).to_padic(ctx).scale_by(beta_prime);
        same_padic(&(&f1 - &f2), &direction.scale_by(&(&p2 - &p1)))
    });
}

fn limits_suite(r: &mut Runner) {
    let seed = delta_seed(730);
    let ctx = PadicContext::new(3, 100).expect("valid");
    let tau3 = seed.shadow.a(3).expect("in range");
    let roots = frobenius_roots(&tau3, &rat(1, 1), 12, ctx).expect("ordinary");
    let zero = PadicValue::zero(ctx);
    let gamma = compute_gamma_star(&seed, &zero, &roots, 6, 10).expect("gamma");

    r.check("gamma_offset_linearity", 10, |rng| {
        let g0 = PadicValue::from_rational(&random_rational(rng, 1_000_000), ctx);
        let shifted = compute_gamma_star(&seed, &g0, &roots, 6, 10).map_err(|e| e.to_string())?;
        let digits = shifted.certified_precision().min(gamma.certified_precision());
        let want = &gamma.value - &g0;
        expect(shifted.is_converged() && shifted.value.agrees_with(&want, digits), || format!("offset {g0:?}: {shifted:?}"))
    });

    r.check("gamma_reproducible", 1, |_| {
        let small = compute_gamma_star(&seed, &zero, &roots, 5, 10).map_err(|e| e.to_string())?;
        let digits = small.certified_precision();
        expect(small.value.agrees_with(&gamma.value, digits), || format!("max_m 5 and 6 disagree below p^{digits}"))
    });

    r.check("perturbed_gamma_nonzero", 3, {
        let mut shifts = [1i64, 3, 9].into_iter();
        move |_| {
            let eps = shifts.next().expect("three cases");
            let g = &gamma.value + &PadicValue::from_integer(eps, ctx);
            let h = h_alpha_coefficient(&seed, &g, &roots, 1, 6, 8).map_err(|e| e.to_string())?;
            let digits = h.certified_precision();
            expect(!h.is_zero_to(digits), || format!("gamma + {eps}: h_alpha(1) is zero to {digits} digits"))
        }
    });

    let w = eisenstein_over_delta(3i64.pow(6) * 5 + 1);
    r.check("eigen_extraction_oracle", 20, |rng| eigen_extraction_case(rng, &w));

    r.check("inert_fixture", 5, |rng| {
        let planted = random_rational(rng, 10_000);
        if planted == rat(0, 1) {
            return Ok(());
        }
        let fx = InertFixture::new(planted.clone(), 400);
        let ctx = PadicContext::new(3, 40).map_err(|e| e.to_string())?;
        let roots = frobenius_roots(&rat(0, 1), &rat(-1, 1), 3, ctx).map_err(|e| e.to_string())?;
        let alpha = compute_alpha_inert(&fx, &roots, 7, 8).map_err(|e| e.to_string())?;
        expect(
            alpha.is_converged() && alpha.value.agrees_with(&PadicValue::from_rational(&planted, ctx), 8),
            || format!("planted {planted}: {alpha:?}"),
        )?;
        // At alpha~ = 0 the limit is L~ g with L~ = planted.
        let w = inert_w_limit(&fx, &PadicValue::zero(ctx), &roots, 50, 7, 8).map_err(|e| e.to_string())?;
        for (n, limit) in (1..).zip(&w) {
            let want = PadicValue::from_rational(&(fx.g.a(n).map_err(|e| e.to_string())? * &planted), ctx);
            if !limit.value.agrees_with(&want, 8) {
                return Err(format!("W/L differs from g at n = {n}"));
            }
        }
        Ok(())
    });

    r.check("badprime_fixture", 10, |rng| {
        let fx = BadPrimeFixture::random(rng, 14);
        let ctx = PadicContext::new(fx.p, 40).map_err(|e| e.to_string())?;
        let got = compute_alpha_badprime(&fx.b, &fx.a_p, fx.k, ctx, 13, 8).map_err(|e| e.to_string())?;
        expect(
            got.is_converged() && got.value.agrees_with(&PadicValue::from_rational(&fx.planted, ctx), 8),
            || format!("p = {}, k = {}, planted {}: {got:?}", fx.p, fx.k, fx.planted),
        )
    });
}

/// `E4 / Delta`, weight `-8 = 2 - 10`, integral coefficients.
fn eisenstein_over_delta(prec: i64) -> QSeries {
    let inv = delta_power(1, prec + 2).invert().expect("unit leading term");
    (&eisenstein(4, prec as usize + 1).expect("weight 4") * &inv).truncate(prec)
}

/// `H = c E_{g - beta' g|V} + E4/Delta` at weight `2 - 10`, `p = 3`, with a
/// synthetic `g` whose Frobenius roots are `3^a` and `3^(9-a)`. The limit
/// `beta^(-m) a_{D^9 H}(3^m n)` recovers `c (g - beta' g|V)(n)`.
fn eigen_extraction_case(rng: &mut ChaCha8Rng, w: &QSeries) -> Result<(), String> {
    let p = 3u64;
    let k = 10u32;
    let a = rng.gen_range(1..=4i64);
    let beta = rational_pow(3, a);
    let beta_prime = rational_pow(3, 9 - a);
    let c = random_rational(rng, 1000);
    let n = rng.gen_range(1..=5i64);
    let max_m = 6u32;
    let prec = (3i64.pow(max_m) * n + 1).min(w.prec());
    let unit: Vec<ExactRational> = (0..7).map(|_| random_rational(rng, 20)).collect();
    let g = synthetic_eigen(p, &beta, &beta_prime, &unit, prec);
    let stab = &g - &apply_v(&g, p).scale(&beta_prime).truncate(prec);
    // Small enough to take D^9 of the full expansion; beyond it the image is
    // read coefficientwise, D^9 E_f being f.
    let head = (&apply_d_inverse_pow(&stab.truncate(60), k - 1).scale(&c) + &w.truncate(60)).truncate(60);
    let head_image = apply_d_pow(&head, k - 1);
    let image = |idx: i64| -> Option<ExactRational> {
        if idx < head_image.prec() {
            return head_image.coefficient(idx).ok();
        }
        let s = stab.coefficient(idx).ok()?;
        let wc = w.coefficient(idx).ok()?;
        Some(s * &c + wc * rational_pow(idx, i64::from(k) - 1))
    };
    let ctx = PadicContext::new(p, 60).map_err(|e| e.to_string())?;
    let beta_p = PadicValue::from_rational(&beta, ctx);
    let limit = padic_limit(
        |m| {
            let Some(x) = image(3i64.pow(m) * n) else { return Ok(None) };
            Ok(Some(PadicValue::from_rational(&x, ctx).checked_div(&beta_p.pow(i64::from(m))?).map_err(LimitError::from)?))
        },
        0..=max_m,
        8,
    )
    .map_err(|e| e.to_string())?;
    let want = PadicValue::from_rational(&(stab.coefficient(n).map_err(|e| e.to_string())? * &c), ctx);
    expect(limit.is_converged() && limit.value.agrees_with(&want, 8), || format!("a = {a}, n = {n}: {limit:?}"))
}

fn random_level_one_form(rng: &mut impl Rng, prec: i64) -> (i64, QSeries) {
    let k = 2 * rng.gen_range(2..=12i64);
    let basis = miller_basis(k, prec).expect("even weight");
    let mut f = QSeries::rational_zero(prec);
    for b in &basis {
        f = &f + &b.scale(&rat(rng.gen_range(-100..=100), 1));
    }
    (k, f)
}

fn verify_suite(r: &mut Runner, cases: usize) {
    let range = 150;
    let ctx = PadicContext::new(3, 20).expect("valid");
    r.check("witness_soundness", cases / 4, |rng| {
        let (k, f) = random_level_one_form(rng, range);
        let m = rng.gen_range(1..=3u32);
        let w = check_padic_form(&f.to_padic(ctx), 3, m, k, range, &rat(1, 1)).map_err(|e| e.to_string())?;
        expect(w.matches(&f), || format!("weight {k} mod 3^{m}: witness differs at q^{:?}", w.first_difference(&f)))
    });

    r.check("ladder_nesting", cases / 4, |rng| {
        let (k, f) = random_level_one_form(rng, range);
        let fp = f.to_padic(ctx);
        let ws: Vec<_> = (1..=3u32)
            .map(|m| check_padic_form(&fp, 3, m, k, range, &rat(1, 1)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        expect(ws[2].reduce(2) == ws[1].expansion && ws[2].reduce(1) == ws[0].expansion, || format!("weight {k}: not nested"))
    });

    r.check("twist_identity", cases, |rng| {
        let d = [-3i64, -4, -7, -8, -11][rng.gen_range(0..5)];
        let cm = CmField::new(d).map_err(|e| e.to_string())?;
        let report = twist_lemma_check(&random_series(rng), &cm);
        expect(report.holds, || format!("D = {d}: fails at {:?}", report.first_failure))
    });

    r.check("euler_congruence_eta6", 3, {
        let g = eta_power_cm(2501);
        let mut m = 0;
        move |_| {
            m += 1;
            let rep = euler_congruence_check(&g, 2, m, 3).map_err(|e| e.to_string())?;
            expect(rep.holds && rep.checked >= 2000, || format!("m = {m}: {rep:?}"))
        }
    });

    r.check("eichler_denominator_growth", 1, |_| {
        let e = eichler_integral(&delta(800), 730);
        let rep = denominator_witness(&e, 3, 12, 1..=6).map_err(|e| e.to_string())?;
        let bounded = rep.orders.iter().all(|&(m, o)| o.is_some_and(|o| o <= 6 * i64::from(m)));
        expect(bounded && rep.best_constant > 30, || format!("{rep:?}"))
    });

    r.check("table_stable_under_precision", 1, |_| {
        let ctx = PadicContext::new(3, 100).map_err(|e| e.to_string())?;
        let spec = TableSpec {
            gamma: PadicValue::from_rational(&crate::demo::reference_gamma(), ctx),
            delta: PadicValue::from_rational(&crate::demo::reference_delta(), ctx),
            scale: rat_int(crate::exactnum::factorial(11)),
            indices: vec![3, 9, 27, 81, 243],
            terms: 6,
            expected: Vec::new(),
        };
        let render = |prec| -> Result<Vec<String>, String> {
            let seed = delta_seed(prec);
            let roots = crate::demo::seed_roots(&seed, 3, 100).map_err(|e| e.to_string())?;
            Ok(digit_table(&seed, &roots, &spec).map_err(|e| e.to_string())?.rows.into_iter().map(|r| r.rendered).collect())
        };
        let (low, high) = (render(250)?, render(730)?);
        expect(low == high, || "renderings changed with precision".into())
    });
}

/// Every prime in `2..=bound`, for callers choosing exploratory primes.
pub fn small_primes(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suite("nope", &SuiteConfig::default()).is_none());
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig { seed: 3, cases: 10 };
        let a = run_suite("qseries", &cfg).unwrap();
        let b = run_suite("qseries", &cfg).unwrap();
        assert!(a.passed(), "{}", a.to_text());
        assert_eq!(a.checks.iter().map(|c| c.failed).collect::<Vec<_>>(), b.checks.iter().map(|c| c.failed).collect::<Vec<_>>());
    }

    #[test]
    fn synthetic_eigen_values() {
        let g = synthetic_eigen(2, &rat(2, 1), &rat(4, 1), &[rat(1, 1)], 10);
        assert_eq!(g.coefficient(1).unwrap(), rat(1, 1));
        assert_eq!(g.coefficient(2).unwrap(), rat(6, 1));
        assert_eq!(g.coefficient(4).unwrap(), rat(28, 1));
    }
}
