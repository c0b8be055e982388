//! Numerical tolerances shared across the crate.
//!
//! Three tiers: constraint surfaces (points on the hyperboloid, unit tangents),
//! derived quantities (distances, levels, residuals) and comparisons between
//! two independent geometric constructions.

use serde::{Deserialize, Serialize};

/// Distinctness and constraint-surface tolerance.
pub const CONSTRAINT: f64 = 1e-12;
/// Derived-property tolerance.
pub const DERIVED: f64 = 1e-10;
/// Tolerance for comparing two geometric constructions.
pub const CONSTRUCTION: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub constraint: f64,
    pub derived: f64,
    pub construction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            constraint: CONSTRAINT,
            derived: DERIVED,
            construction: CONSTRUCTION,
        }
    }
}

impl Tolerances {
    pub fn is_valid(&self) -> bool {
        [self.constraint, self.derived, self.construction]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0)
    }
}
