//! Outcome records for identity checks.

use std::fmt;

use serde_json::json;

use crate::error::Error;

/// Result of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// Passed after comparing `checked` coefficients (or instances).
    Pass { checked: usize },
    /// Failed; the witness names the first offending coefficient.
    Fail { witness: String },
    /// The window was too small to decide.
    InsufficientPrecision { detail: String },
}

/// A named check over a stated window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    pub check: String,
    pub window: String,
    pub status: Status,
    /// Recognized objects and other by-products, one line each.
    pub details: Vec<String>,
}

impl ConstraintReport {
    pub fn pass(check: impl Into<String>, window: impl Into<String>, checked: usize) -> Self {
        ConstraintReport {
            check: check.into(),
            window: window.into(),
            status: Status::Pass { checked },
            details: Vec::new(),
        }
    }

    /// Turns an error into a failing (or undecided) report.
    pub fn from_error(check: impl Into<String>, window: impl Into<String>, e: &Error) -> Self {
        let status = match e {
            Error::InsufficientPrecision(d) => Status::InsufficientPrecision { detail: d.clone() },
            other => Status::Fail { witness: other.to_string() },
        };
        ConstraintReport { check: check.into(), window: window.into(), status, details: Vec::new() }
    }

    /// Runs `f`, mapping its count to a pass and its error to a failure.
    pub fn run(
        check: impl Into<String>,
        window: impl Into<String>,
        f: impl FnOnce() -> crate::Result<usize>,
    ) -> Self {
        let (check, window) = (check.into(), window.into());
        match f() {
            Ok(n) => Self::pass(check, window, n),
            Err(e) => Self::from_error(check, window, &e),
        }
    }

    pub fn with_details(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass { .. })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (status, info) = match &self.status {
            Status::Pass { checked } => ("pass", json!(checked)),
            Status::Fail { witness } => ("fail", json!(witness)),
            Status::InsufficientPrecision { detail } => ("insufficient-precision", json!(detail)),
        };
        json!({
            "check": self.check,
            "window": self.window,
            "status": status,
            "info": info,
            "details": self.details,
        })
    }
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Pass { checked } => {
                write!(f, "PASS {} [{}] ({checked} checked)", self.check, self.window)
            }
            Status::Fail { witness } => write!(f, "FAIL {} [{}]: {witness}", self.check, self.window),
            Status::InsufficientPrecision { detail } => {
                write!(f, "UNDECIDED {} [{}]: {detail}", self.check, self.window)
            }
        }
    }
}
