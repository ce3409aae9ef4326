//! Text format for externally computed forms.
//!
//! ```text
//! k N [mockplus]
//! d chi_order chi_exponent      (one line per residue d mod N)
//!
//! n num/den                     (one line per coefficient)
//! ```
//!
//! Omitted coefficients between the smallest and largest listed exponent are
//! zero; the series is known up to the largest listed exponent.

use std::fmt::Write as _;
use std::path::Path;

use super::newform::{CyclotomicValue, DirichletCharacter, NewformData};
use super::ModFormError;
use crate::exactnum::{format_rational, parse_rational, ExactRational};
use crate::qseries::{QSeries, SeriesMeta};

/// Rational data of a mock modular form's holomorphic part.
#[derive(Clone, Debug, PartialEq)]
pub struct MockPlusData {
    pub weight: u32,
    pub level: u64,
    pub character: DirichletCharacter,
    pub series: QSeries,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ingested {
    Newform(NewformData),
    MockPlus(MockPlusData),
}

fn err(line: usize, message: impl Into<String>) -> ModFormError {
    ModFormError::Parse { line, message: message.into() }
}

pub fn parse_form_file(text: &str) -> Result<Ingested, ModFormError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.find(|(_, l)| !l.is_empty()).ok_or_else(|| err(1, "empty file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (k, n, mockplus) = match fields[..] {
        [k, n] => (k, n, false),
        [k, n, "mockplus"] => (k, n, true),
        _ => return Err(err(1, "header must be `k N` or `k N mockplus`")),
    };
    let weight: u32 = k.parse().map_err(|_| err(1, "bad weight"))?;
    let level: u64 = n.parse().map_err(|_| err(1, "bad level"))?;
    if level == 0 {
        return Err(err(1, "level must be positive"));
    }

    let mut values = vec![None; level as usize];
    for (i, line) in lines.by_ref() {
        if line.is_empty() {
            break;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [d, order, exponent] = parts[..] else {
            return Err(err(i, "expected `d chi_order chi_exponent`"));
        };
        let d: u64 = d.parse().map_err(|_| err(i, "bad residue"))?;
        let order: u32 = order.parse().map_err(|_| err(i, "bad order"))?;
        let exponent: u32 = exponent.parse().map_err(|_| err(i, "bad exponent"))?;
        if d >= level {
            return Err(err(i, format!("residue {d} not below {level}")));
        }
        values[d as usize] = Some(CyclotomicValue { order, exponent });
    }
    let values: Vec<CyclotomicValue> = values
        .into_iter()
        .enumerate()
        .map(|(d, v)| v.ok_or_else(|| err(0, format!("missing character value at {d}"))))
        .collect::<Result<_, _>>()?;
    let character = DirichletCharacter::from_values(level, values)?;

    let mut entries: Vec<(i64, ExactRational)> = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let (n, value) = line.split_once(char::is_whitespace).ok_or_else(|| err(i, "expected `n num/den`"))?;
        let n: i64 = n.parse().map_err(|_| err(i, "bad index"))?;
        let value = parse_rational(value).ok_or_else(|| err(i, "bad rational"))?;
        if let Some(&(last, _)) = entries.last() {
            if n <= last {
                return Err(err(i, "indices must increase"));
            }
        }
        entries.push((n, value));
    }
    let (Some(&(lowest, _)), Some(&(highest, _))) = (entries.first(), entries.last()) else {
        return Err(err(0, "no coefficients"));
    };
    let mut coeffs = vec![ExactRational::default(); (highest - lowest + 1) as usize];
    for (n, v) in entries {
        coeffs[(n - lowest) as usize] = v;
    }
    let series = QSeries::from_rationals(lowest, highest + 1, coeffs)?;

    if mockplus {
        let meta = SeriesMeta { weight: Some(2 - weight as i64), level: Some(level), character: Some(character.label()) };
        return Ok(Ingested::MockPlus(MockPlusData { weight, level, character, series: series.with_meta(meta) }));
    }
    if lowest != 1 {
        return Err(ModFormError::InvariantViolation { index: lowest, message: "newform data must start at n = 1".into() });
    }
    Ok(Ingested::Newform(NewformData::new(weight, level, character, series)?))
}

pub fn ingest_newform(path: &Path) -> Result<NewformData, ModFormError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModFormError::Io(e.to_string()))?;
    match parse_form_file(&text)? {
        Ingested::Newform(g) => Ok(g),
        Ingested::MockPlus(_) => Err(err(1, "expected a newform file, found mockplus data")),
    }
}

pub fn ingest_file(path: &Path) -> Result<Ingested, ModFormError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModFormError::Io(e.to_string()))?;
    parse_form_file(&text)
}

fn write_header(out: &mut String, weight: u32, character: &DirichletCharacter, flag: &str) {
    writeln!(out, "{weight} {}{flag}", character.modulus()).unwrap();
    for (d, v) in character.values().iter().enumerate() {
        writeln!(out, "{d} {} {}", v.order, v.exponent).unwrap();
    }
    out.push('\n');
}

pub fn write_newform(g: &NewformData) -> String {
    let mut out = String::new();
    write_header(&mut out, g.weight, &g.character, "");
    for (n, c) in g.series().iter() {
        writeln!(out, "{n} {}", format_rational(c)).unwrap();
    }
    out
}

pub fn write_mockplus(data: &MockPlusData) -> String {
    let mut out = String::new();
    write_header(&mut out, data.weight, &data.character, " mockplus");
    for (n, c) in data.series.iter() {
        writeln!(out, "{n} {}", format_rational(c)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::{delta, eta_power_cm};

    #[test]
    fn delta_round_trip() {
        let d = delta(50);
        let text = write_newform(&d);
        assert!(text.starts_with("12 1\n0 1 0\n\n1 1/1\n2 -24/1\n3 252/1\n"));
        match parse_form_file(&text).unwrap() {
            Ingested::Newform(g) => assert_eq!(g, d),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eta_round_trip() {
        let g = eta_power_cm(120);
        match parse_form_file(&write_newform(&g)).unwrap() {
            Ingested::Newform(h) => assert_eq!(h, g),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn multiplicativity_violation_located() {
        let text = write_newform(&delta(10)).replace("6 -6048/1", "6 1/1");
        let e = parse_form_file(&text).unwrap_err();
        assert!(matches!(e, ModFormError::InvariantViolation { index: 6, .. }), "{e:?}");
    }

    #[test]
    fn malformed_header() {
        assert!(matches!(parse_form_file("12\n"), Err(ModFormError::Parse { line: 1, .. })));
    }
}
