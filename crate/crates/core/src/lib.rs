//! Exact q-series, p-adic limits and congruence checks for corrected mock
//! modular forms.

pub mod demo;
pub mod exactnum;
pub mod heckeops;
pub mod limits;
pub mod mockcorrect;
pub mod modforms;
pub mod qseries;
pub mod suites;
pub mod verify;
