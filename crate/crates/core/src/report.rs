//! Named residual checks and the reports the verification suites return.

use serde::{Deserialize, Serialize};

/// One verified identity: its name, the measured residual, and the tolerance
/// it was held to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl RelationCheck {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            pass: residual <= tol,
            tol,
        }
    }
}

/// Outcome of a verification suite: per-relation maximum absolute residuals
/// on the interior subspace actually asserted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationReport {
    /// Highest level included in the checks (inclusive).
    pub interior_top: usize,
    /// Levels excluded below the truncation boundary.
    pub guard: usize,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn new(interior_top: usize, guard: usize) -> Self {
        Self {
            interior_top,
            guard,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        self.checks.push(RelationCheck::new(name, residual, tol));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    /// Residual of a named check; panics if the name is unknown.
    pub fn residual_of(&self, name: &str) -> f64 {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("no check named {name}"))
            .residual
    }
}
