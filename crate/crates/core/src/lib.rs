//! Matrix analysis toolkit for operator inequalities: Löwner order, operator
//! means, positive maps and their grades, and numerical checks of
//! Cauchy–Schwarz and Hua type operator inequalities.

pub mod error;
pub mod harness;
pub mod inequalities;
pub mod linalg;
pub mod maps;
pub mod means;
pub mod outcome;
pub mod positivity;

pub use error::{Error, Result};
