//! Concrete modular forms: Eisenstein series, eta products, level one bases,
//! and newform data.

mod basis;
mod eisenstein;
mod eta;
mod ingest;
mod newform;

pub use basis::{decompose_in_basis, level_one_dimension, miller_basis, weakly_holomorphic_solve};
pub use eisenstein::{bernoulli_numbers, divisor_sums, eisenstein};
pub use eta::{delta_power, eta_quotient, euler_power};
pub use ingest::{
    ingest_file, ingest_newform, parse_form_file, write_mockplus, write_newform, Ingested, MockPlusData,
};
pub use newform::{
    delta, eta_power_cm, factorize, kronecker_symbol, CmField, CyclotomicValue, DirichletCharacter,
    NewformData,
};

use thiserror::Error;

use crate::qseries::{QSeries, SeriesError, SeriesMeta};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModFormError {
    #[error("invalid weight {0}")]
    InvalidWeight(i64),
    #[error("constraint at positive exponent {0} is not part of a principal part")]
    InvalidConstraint(i64),
    #[error("no form satisfies the constraints")]
    Obstructed,
    #[error("constraints have rank {rank} in a space of dimension {dim}")]
    Underdetermined { rank: usize, dim: usize },
    #[error("{0} is not a fundamental imaginary quadratic discriminant")]
    InvalidDiscriminant(i64),
    #[error("character value at {0} is not rational")]
    NonRealCharacter(u64),
    #[error("coefficient a({0}) is not available")]
    InsufficientData(u64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invariant violated at n = {index}: {message}")]
    InvariantViolation { index: i64, message: String },
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `j = E_4^3 / Delta`.
pub fn j_invariant(prec: i64) -> QSeries {
    let e4 = eisenstein(4, (prec + 1) as usize).expect("weight 4");
    let cube = e4.pow(3).expect("rational series");
    let j = &cube * &delta_power(-1, prec);
    j.truncate(prec).with_meta(SeriesMeta { weight: Some(0), level: Some(1), character: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn j_expansion() {
        let j = j_invariant(4);
        assert_eq!(j.lowest(), -1);
        assert_eq!(j.coefficient(-1).unwrap(), rat(1, 1));
        assert_eq!(j.coefficient(0).unwrap(), rat(744, 1));
        assert_eq!(j.coefficient(1).unwrap(), rat(196884, 1));
    }

    #[test]
    fn ramanujan_identity() {
        let e4 = eisenstein(4, 60).unwrap();
        let e6 = eisenstein(6, 60).unwrap();
        let lhs = &e4.pow(3).unwrap() - &e6.pow(2).unwrap();
        let rhs = delta_power(1, 60).scale(&rat(1728, 1));
        assert!((&lhs - &rhs).is_zero());
    }
}
