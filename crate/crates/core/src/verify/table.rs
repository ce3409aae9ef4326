//! Digit tables of corrected series at prime-power indices.

use std::fmt::Write as _;

use serde::Serialize;

use super::VerifyError;
use crate::exactnum::{digit_terms, render_digits_spaced, ExactRational, FrobeniusRoots, PadicValue};
use crate::mockcorrect::{f_alpha, f_alpha_delta, f_alpha_star, MockSeed};
use crate::qseries::PadicSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TableSeries {
    /// `F_{a_M(1)}`.
    C,
    /// `F*_{a_M(1)}`.
    CStar,
    CAlpha,
    CAlphaStar,
    CAlphaDelta,
}

impl TableSeries {
    pub const ALL: [TableSeries; 5] =
        [TableSeries::C, TableSeries::CStar, TableSeries::CAlpha, TableSeries::CAlphaStar, TableSeries::CAlphaDelta];

    pub fn label(self) -> &'static str {
        match self {
            TableSeries::C => "c",
            TableSeries::CStar => "c*",
            TableSeries::CAlpha => "c_alpha",
            TableSeries::CAlphaStar => "c*_alpha",
            TableSeries::CAlphaDelta => "c_alpha,delta",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Match,
    Mismatch,
    /// Fewer certified digits than the comparison needs, or the index lies
    /// beyond the seed.
    OutOfPrecision,
    /// No pinned expectation for this row.
    Unpinned,
}

/// What to tabulate.
#[derive(Clone, Debug)]
pub struct TableSpec {
    pub gamma: PadicValue,
    pub delta: PadicValue,
    /// Multiplier applied before rendering, `(k-1)!` for the Delta table.
    pub scale: ExactRational,
    pub indices: Vec<u64>,
    /// Number of leading digit terms compared and shown.
    pub terms: usize,
    /// Pinned renderings, as `(series, index, "t1 + t2 + t3 + ...")`.
    pub expected: Vec<(TableSeries, u64, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DigitRow {
    pub series: TableSeries,
    pub index: u64,
    #[serde(skip)]
    pub value: Option<PadicValue>,
    pub valuation: Option<i64>,
    pub digits: Vec<u32>,
    pub rendered: String,
    pub expected: Option<String>,
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DigitTable {
    pub rows: Vec<DigitRow>,
}

impl DigitTable {
    pub fn row(&self, series: TableSeries, index: u64) -> Option<&DigitRow> {
        self.rows.iter().find(|r| r.series == series && r.index == index)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DigitRow> {
        self.rows.iter().filter(|r| matches!(r.status, RowStatus::Mismatch | RowStatus::OutOfPrecision) && r.expected.is_some())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let name = format!("{}({})", r.series.label(), r.index);
            let status = match r.status {
                RowStatus::Match => "match",
                RowStatus::Mismatch => "MISMATCH",
                RowStatus::OutOfPrecision => "out of precision",
                RowStatus::Unpinned => "unpinned",
            };
            write!(out, "{name:<22} = {:<42} [{status}]", r.rendered).unwrap();
            if r.status == RowStatus::Mismatch {
                write!(out, " expected {}", r.expected.as_deref().unwrap_or("")).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

fn compare(value: &PadicValue, expected: Option<&str>, terms: usize) -> RowStatus {
    let Some(expected) = expected else {
        return RowStatus::Unpinned;
    };
    let got = digit_terms(value, terms);
    let want: Vec<&str> = expected.split(" + ").filter(|t| *t != "...").take(terms).collect();
    let known = got.len().min(want.len());
    if got[..known].iter().zip(&want).any(|(g, w)| g != w) {
        RowStatus::Mismatch
    } else if got.len() < want.len() {
        RowStatus::OutOfPrecision
    } else {
        RowStatus::Match
    }
}

/// Tabulates the five corrected series of `seed` at `spec.indices`.
pub fn digit_table(seed: &MockSeed, roots: &FrobeniusRoots, spec: &TableSpec) -> Result<DigitTable, VerifyError> {
    let max_index = spec.indices.iter().copied().max().unwrap_or(0) as i64;
    let prec = (max_index + 1).min(seed.prec());
    let ctx = spec.gamma.context();
    let zero = PadicValue::zero(ctx);
    let series: Vec<(TableSeries, PadicSeries)> = vec![
        (TableSeries::C, f_alpha(seed, &zero, prec)),
        (TableSeries::CStar, f_alpha_star(seed, &zero, roots, prec)?),
        (TableSeries::CAlpha, f_alpha(seed, &spec.gamma, prec)),
        (TableSeries::CAlphaStar, f_alpha_star(seed, &spec.gamma, roots, prec)?),
        (TableSeries::CAlphaDelta, f_alpha_delta(seed, &spec.gamma, &spec.delta, roots, prec)?),
    ];
    let mut rows = Vec::new();
    for (kind, s) in &series {
        for &index in &spec.indices {
            let expected = spec
                .expected
                .iter()
                .find(|(k, i, _)| k == kind && *i == index)
                .map(|(_, _, e)| e.clone());
            let value = s.coefficient(index as i64).ok().map(|c| c.scale_rational(&spec.scale));
            let row = match value {
                Some(v) => DigitRow {
                    series: *kind,
                    index,
                    valuation: v.valuation().finite(),
                    digits: v.unit_digits(),
                    rendered: render_digits_spaced(&v, spec.terms),
                    status: compare(&v, expected.as_deref(), spec.terms),
                    value: Some(v),
                    expected,
                },
                None => DigitRow {
                    series: *kind,
                    index,
                    value: None,
                    valuation: None,
                    digits: Vec::new(),
                    rendered: "beyond seed precision".to_string(),
                    status: if expected.is_some() { RowStatus::OutOfPrecision } else { RowStatus::Unpinned },
                    expected,
                },
            };
            rows.push(row);
        }
    }
    Ok(DigitTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::PadicContext;

    #[test]
    fn comparison_rules() {
        let ctx = PadicContext::new(3, 10).unwrap();
        let v = PadicValue::from_digits(5, &[1, 1, 0, 1], ctx);
        assert_eq!(compare(&v, Some("3^5 + 3^6 + 3^8 + ..."), 3), RowStatus::Match);
        assert_eq!(compare(&v, Some("3^5 + 2(3^6) + 3^8 + ..."), 3), RowStatus::Mismatch);
        let short = PadicValue::from_digits(5, &[1, 1], ctx);
        assert_eq!(compare(&short, Some("3^5 + 3^6 + 3^8 + ..."), 3), RowStatus::OutOfPrecision);
        assert_eq!(compare(&v, None, 3), RowStatus::Unpinned);
    }
}
