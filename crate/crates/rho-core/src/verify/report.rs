//! Uniform result record for the property batteries.

use serde::Serialize;

/// Outcome of one property battery. `pass` holds exactly when
/// `worst_violation <= threshold`.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub samples: usize,
    /// Signed worst violation across the samples; negative values mean the
    /// property held with margin.
    pub worst_violation: f64,
    pub threshold: f64,
    pub pass: bool,
    pub diagnostics: Vec<String>,
}

impl PropertyReport {
    pub fn new(
        property: impl Into<String>,
        samples: usize,
        worst_violation: f64,
        threshold: f64,
        diagnostics: Vec<String>,
    ) -> Self {
        PropertyReport {
            property: property.into(),
            samples,
            worst_violation,
            threshold,
            pass: worst_violation <= threshold,
            diagnostics,
        }
    }
}
