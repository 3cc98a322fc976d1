// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::circuit::Violation;

/// Errors shared by every stage of the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid circuit: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("gate {index} ({gate}) is not classical; use the exact-unitary semantics instead")]
    NotClassical { index: usize, gate: String },

    #[error("gate `{0}` is not registered")]
    UnknownGate(String),

    #[error("gate `{0}` has no registered inverse")]
    NoInverse(String),

    #[error("gate {gate} cannot be expanded: {reason}")]
    Unexpandable { gate: String, reason: String },

    #[error("width {width} exceeds the exact-unitary cap of {cap} lines")]
    TooWide { width: usize, cap: usize },

    #[error("width mismatch: {left} lines vs {right} lines")]
    WidthMismatch { left: usize, right: usize },

    #[error("truth table is not reversible: {0}")]
    NotReversible(String),

    #[error("truth table shape mismatch: {inputs} inputs vs {outputs} outputs")]
    ShapeMismatch { inputs: usize, outputs: usize },

    #[error("embedding infeasible: {0}")]
    Infeasible(String),

    #[error("certification failed for `{name}`: {reason}")]
    Certification { name: String, reason: String },

    #[error("sequential circuit error: {0}")]
    Sequential(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
