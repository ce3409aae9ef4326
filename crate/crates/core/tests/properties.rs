use mockpadic::exactnum::{rat, rational_pow, render_digits, ExactRational, PadicContext, PadicValue};
use mockpadic::heckeops::{apply_b, apply_b_factored, apply_d_pow, apply_t, apply_u, apply_v};
use mockpadic::limits::padic_limit;
use mockpadic::modforms::{eisenstein, CmField, DirichletCharacter};
use mockpadic::qseries::{read_series, write_series, QSeries};
use mockpadic::verify::{check_padic_form, twist_lemma_check};
use num_traits::{One, Zero};
use proptest::prelude::*;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn coeff() -> impl Strategy<Value = ExactRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

/// Laurent series with a pole of order at most 2 and 20 to 60 known terms.
fn series() -> impl Strategy<Value = QSeries> {
    (-2i64..=0, prop::collection::vec(coeff(), 20..60))
        .prop_map(|(lowest, c)| QSeries::from_rationals(lowest, lowest + c.len() as i64, c).unwrap())
}

/// Power series with a nonzero constant term.
fn unit_series() -> impl Strategy<Value = QSeries> {
    (coeff().prop_filter("unit", |c| !c.is_zero()), prop::collection::vec(coeff(), 10..30)).prop_map(|(c0, rest)| {
        let mut c = vec![c0];
        c.extend(rest);
        let prec = c.len() as i64;
        QSeries::from_rationals(0, prec, c).unwrap()
    })
}

/// Equality on exponents known to both series.
fn agree(a: &QSeries, b: &QSeries) -> Result<(), TestCaseError> {
    let lo = a.lowest().min(b.lowest());
    let hi = a.prec().min(b.prec());
    prop_assert!(hi > lo, "no shared range");
    for n in lo..hi {
        prop_assert_eq!(a.coefficient(n).unwrap(), b.coefficient(n).unwrap(), "q^{}", n);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn u_after_v_is_identity(h in series(), i in 0usize..4) {
        let p = PRIMES[i];
        agree(&apply_u(&apply_v(&h, p), p), &h)?;
    }

    #[test]
    fn v_intertwines_d(h in series(), i in 0usize..4, j in 1u32..6) {
        let p = PRIMES[i];
        let left = apply_d_pow(&apply_v(&h, p), j);
        let right = apply_v(&apply_d_pow(&h, j), p).scale(&rational_pow(p as i64, i64::from(j)));
        agree(&left, &right)?;
    }

    #[test]
    fn u_intertwines_d(h in series(), i in 0usize..4, j in 1u32..6) {
        let p = PRIMES[i];
        let left = apply_d_pow(&apply_u(&h, p), j);
        let right = apply_u(&apply_d_pow(&h, j), p).scale(&rational_pow(p as i64, -i64::from(j)));
        agree(&left, &right)?;
    }

    #[test]
    fn hecke_operators_commute(h in series(), m in 1u64..7, n in 1u64..7, k in -10i64..=12) {
        let chi = DirichletCharacter::trivial(1);
        let mn = apply_t(&apply_t(&h, n, k, &chi).unwrap(), m, k, &chi).unwrap();
        let nm = apply_t(&apply_t(&h, m, k, &chi).unwrap(), n, k, &chi).unwrap();
        agree(&mn, &nm)?;
    }

    #[test]
    fn b_factored_matches_expanded(h in series(), i in 0usize..3, k in 4u32..14, s in 0u32..3) {
        // Rational roots beta = p^s, beta' = p^(k-1-s) of x^2 - a_p x + p^(k-1).
        let p = PRIMES[i];
        let beta = rational_pow(p as i64, i64::from(s));
        let beta_prime = rational_pow(p as i64, i64::from(k - 1 - s));
        let a_p = &beta + &beta_prime;
        let expanded = apply_b(&h, p, &a_p, &ExactRational::one(), k);
        let factored = apply_b_factored(&h, p, &beta, &beta_prime, k);
        agree(&expanded, &factored)?;
    }

    #[test]
    fn product_with_inverse_is_one(f in unit_series(), shift in -3i64..=3) {
        let f = f.shift(shift);
        let one = &f * &f.invert().unwrap();
        let expected = QSeries::from_rationals(0, one.prec(), vec![rat(1, 1)]).unwrap();
        agree(&one, &expected)?;
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        agree(&(&a * &b), &(&b * &a))?;
        agree(&(&(&a * &b) * &c), &(&a * &(&b * &c)))?;
    }

    #[test]
    fn text_form_roundtrips(h in series()) {
        let back: QSeries = read_series(&write_series(&h)).unwrap();
        prop_assert_eq!(back.prec(), h.prec());
        agree(&back, &h)?;
    }

    #[test]
    fn twist_lemma_holds(h in series()) {
        prop_assert!(twist_lemma_check(&h, &CmField::gaussian()).holds);
    }

    #[test]
    fn padic_ring_operations_match_rationals(a in coeff(), b in coeff(), i in 0usize..4) {
        let ctx = PadicContext::new(PRIMES[i], 30).unwrap();
        let (x, y) = (PadicValue::from_rational(&a, ctx), PadicValue::from_rational(&b, ctx));
        let sum = PadicValue::from_rational(&(&a + &b), ctx);
        let product = PadicValue::from_rational(&(&a * &b), ctx);
        let s = x.checked_add(&y).unwrap();
        prop_assert!(s.agrees_with(&sum, s.absolute_precision().unwrap_or(30)));
        let prod = x.checked_mul(&y).unwrap();
        prop_assert!(prod.agrees_with(&product, prod.absolute_precision().unwrap_or(30)));
        if !b.is_zero() {
            let q = x.checked_div(&y).unwrap();
            prop_assert!(q.agrees_with(&PadicValue::from_rational(&(&a / &b), ctx), q.absolute_precision().unwrap_or(30)));
        }
    }

    #[test]
    fn digits_roundtrip(v in -5i64..5, digits in prop::collection::vec(0u32..3, 1..20)) {
        let ctx = PadicContext::new(3, 40).unwrap();
        let mut digits = digits;
        digits[0] = digits[0].max(1);
        let x = PadicValue::from_digits(v, &digits, ctx);
        let y = PadicValue::from_digits(v, &x.unit_digits(), ctx);
        prop_assert_eq!(render_digits(&x, 8), render_digits(&y, 8));
        prop_assert_eq!(x.valuation().finite(), Some(v));
    }

    #[test]
    fn geometric_limit_is_certified(i in 0usize..4, c in 1i64..50) {
        // sum_{j < m} c p^j -> c / (1 - p), one digit per step.
        let p = PRIMES[i];
        let ctx = PadicContext::new(p, 60).unwrap();
        let limit = padic_limit(
            |m| {
                let partial: ExactRational = (0..m).map(|j| rat(c, 1) * rational_pow(p as i64, i64::from(j))).sum();
                Ok(Some(PadicValue::from_rational(&partial, ctx)))
            },
            1..=25,
            10,
        ).unwrap();
        prop_assert!(limit.is_converged());
        let exact = PadicValue::from_rational(&rat(c, 1 - p as i64), ctx);
        prop_assert!(limit.value.agrees_with(&exact, limit.certified_precision()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witness_reproduces_integral_forms(a in -20i64..20, b in -20i64..20, m in 1u32..3) {
        // a E4^3 + b E6^2 is integral of weight 12.
        let range = 80;
        let e4 = eisenstein(4, range as usize + 1).unwrap();
        let e6 = eisenstein(6, range as usize + 1).unwrap();
        let h = &(&(&e4 * &e4) * &e4).scale(&rat(a, 1)) + &(&e6 * &e6).scale(&rat(b, 1));
        let ctx = PadicContext::new(3, 30).unwrap();
        let w = check_padic_form(&h.to_padic(ctx), 3, m, 12, range, &rat(1, 1)).unwrap();
        prop_assert!(w.matches(&h));
        prop_assert_eq!((w.weight - 12).rem_euclid(2 * 3i64.pow(m - 1)), 0);
    }
}
