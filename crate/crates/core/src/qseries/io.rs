//! Text serialization: a header `lowest prec domain`, then `n value` per
//! nonzero coefficient.

use std::fmt::Write as _;

use super::{Coefficient, LaurentSeries, SeriesError};

pub fn write_series<C: Coefficient>(s: &LaurentSeries<C>) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", s.lowest(), s.prec(), C::domain_tag(s.domain())).unwrap();
    for (n, c) in s.iter() {
        if !c.is_exact_zero() {
            writeln!(out, "{n} {}", c.serialize()).unwrap();
        }
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> SeriesError {
    SeriesError::Parse { line, message: message.into() }
}

pub fn read_series<C: Coefficient>(text: &str) -> Result<LaurentSeries<C>, SeriesError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [lowest, prec, tag] = fields[..] else {
        return Err(parse_err(1, "header must be `lowest prec domain`"));
    };
    let lowest: i64 = lowest.parse().map_err(|_| parse_err(1, "bad lowest"))?;
    let prec: i64 = prec.parse().map_err(|_| parse_err(1, "bad prec"))?;
    let domain = C::parse_domain(tag).ok_or_else(|| parse_err(1, format!("unknown domain {tag}")))?;
    let mut series = LaurentSeries::<C>::zero(prec, domain.clone());
    if lowest >= prec {
        return Err(SeriesError::InvalidPrecision { lowest, prec });
    }
    let mut coeffs = vec![C::zero_in(&domain); (prec - lowest) as usize];
    for (i, line) in lines {
        let (n, value) = line
            .trim()
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse_err(i + 1, "expected `n value`"))?;
        let n: i64 = n.parse().map_err(|_| parse_err(i + 1, "bad exponent"))?;
        if n < lowest || n >= prec {
            return Err(parse_err(i + 1, format!("exponent {n} outside [{lowest}, {prec})")));
        }
        let c = C::parse(value.trim(), &domain).ok_or_else(|| parse_err(i + 1, "bad coefficient"))?;
        coeffs[(n - lowest) as usize] = c;
    }
    series = LaurentSeries::from_coeffs(lowest, prec, coeffs, domain).map(|s| s.with_meta(series.meta))?;
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ExactRational, PadicContext, PadicValue};
    use crate::qseries::QSeries;

    #[test]
    fn rational_round_trip() {
        let s = QSeries::from_rationals(-1, 6, vec![rat(1, 1), rat(0, 1), rat(-7, 3), rat(5, 2)]).unwrap();
        let text = write_series(&s);
        assert!(text.starts_with("-1 6 rational\n-1 1/1\n1 -7/3\n"));
        let back: QSeries = read_series(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn padic_round_trip() {
        let ctx = PadicContext::new(3, 12).unwrap();
        let s = QSeries::from_rationals(0, 4, vec![rat(1, 9), rat(0, 1), rat(18, 5)]).unwrap().to_padic(ctx);
        let mut coeffs = s.coeffs().to_vec();
        coeffs[3] = PadicValue::inexact_zero(ctx, 4);
        let s = LaurentSeries::from_coeffs(0, 4, coeffs, ctx).unwrap();
        let back: LaurentSeries<PadicValue> = read_series(&write_series(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn bad_lines_are_located() {
        let err = read_series::<ExactRational>("0 5 rational\n1 1/2\n7 1/1\n").unwrap_err();
        assert!(matches!(err, SeriesError::Parse { line: 3, .. }));
    }
}
