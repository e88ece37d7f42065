//! α(mZ), α-tables, Waldschmidt bounds and the conjecture checks.

mod alpha;
mod bounds;
mod report;

use thiserror::Error;

use crate::exactla::LinalgError;
use crate::fields::FieldError;
use crate::interpolation::InterpolationError;

pub use alpha::{AlphaTable, AlphaValue, ConfigRef, Engine, RankMode, RankWitness, TableIssue};
pub use bounds::{
    bounds_report, demailly_check, demailly_ratio, els_degree_check, ev_check, ev_ratio,
    floor_root, main_theorem_check, ratio, to_decimal, BoundsReport, DemaillyVerdict, ElsVerdict,
    EvVerdict, MainTheoremVerdict, Ratio,
};
pub use report::{render_table, Status, TableReport, TableRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Interpolation(#[from] InterpolationError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("kernel certificate for m = {m}, degree {d} failed re-verification")]
    CertificateRejected { m: u32, d: u32 },
    #[error("table invariants violated: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvariantViolation(Vec<TableIssue>),
    #[error("internal error: {0}")]
    Internal(String),
}
