//! Congruence checks, digit tables and non-p-adicity evidence.

mod congruence;
mod table;
mod witness;

pub use congruence::{check_padic_form, CongruenceWitness};
pub use table::{digit_table, DigitRow, DigitTable, RowStatus, TableSeries, TableSpec};
pub use witness::{
    denominator_witness, euler_congruence_check, twist_lemma_check, DenominatorReport, EulerReport, TwistReport,
};

use thiserror::Error;

use crate::exactnum::ExactNumError;
use crate::mockcorrect::MockError;
use crate::modforms::ModFormError;
use crate::qseries::SeriesError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("no witness found; weights tried: {schedule:?}")]
    NoWitness { schedule: Vec<i64> },
    #[error("coefficient at n = {index} is not p-integral")]
    NonIntegral { index: i64 },
    #[error("coefficient at n = {index} is not known modulo p^{needed}")]
    InsufficientPrecision { index: i64, needed: u32 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    ModForm(#[from] ModFormError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Mock(#[from] MockError),
    #[error(transparent)]
    Arithmetic(#[from] ExactNumError),
}
