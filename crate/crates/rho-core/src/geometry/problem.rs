//! The full problem data `(ambient X, region Ω ⊆ X, frame ω)` and its
//! validation.

use serde::{Deserialize, Serialize};

use crate::error::RhoError;
use crate::types::Cx;

use super::domain::DomainSpec;
use super::frame::FrameSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub ambient: DomainSpec,
    pub region: DomainSpec,
    pub frame: FrameSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ValidationIssue {
    /// A structural invariant of a domain or frame variant fails.
    Malformed(String),
    /// The frame vanishes or is singular somewhere on the ambient domain.
    FrameIncompatible(String),
    /// A sample of the region falls outside the ambient domain.
    RegionNotInAmbient(String),
    /// Product domain and split frame have different factor counts, or one
    /// side is a product and the other is not.
    ArityMismatch { domain_dim: usize, frame_dim: usize },
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationIssue::Malformed(s) => write!(f, "malformed: {s}"),
            ValidationIssue::FrameIncompatible(s) => write!(f, "frame: {s}"),
            ValidationIssue::RegionNotInAmbient(s) => write!(f, "region: {s}"),
            ValidationIssue::ArityMismatch { domain_dim, frame_dim } => write!(
                f,
                "arity mismatch: domain has {domain_dim} factor(s), frame has {frame_dim}"
            ),
        }
    }
}

/// Outcome of [`ProblemSpec::validate`]; an empty issue list means valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.issues.is_empty() {
            write!(f, "valid")
        } else {
            for (i, issue) in self.issues.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{issue}")?;
            }
            Ok(())
        }
    }
}

impl ProblemSpec {
    pub fn new(ambient: DomainSpec, region: DomainSpec, frame: FrameSpec) -> Self {
        ProblemSpec { ambient, region, frame }
    }

    pub fn dim(&self) -> usize {
        self.region.dim()
    }

    pub fn is_product(&self) -> bool {
        matches!(self.region, DomainSpec::Product { .. })
    }

    /// Splits a product problem into its one-dimensional factor problems.
    /// A one-dimensional problem yields itself.
    pub fn split_factors(&self) -> Vec<ProblemSpec> {
        if !self.is_product() {
            return vec![self.clone()];
        }
        let ambients = self.ambient.factors();
        let regions = self.region.factors();
        let frames = self.frame.factors();
        regions
            .iter()
            .enumerate()
            .map(|(i, r)| ProblemSpec {
                ambient: ambients.get(i).cloned().unwrap_or(DomainSpec::Plane),
                region: r.clone(),
                frame: frames.get(i).cloned().unwrap_or(FrameSpec::ConstOne),
            })
            .collect()
    }

    /// Collects every violation; an empty report means the spec is usable.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();

        for d in [&self.ambient, &self.region] {
            if let Err(e) = d.check_well_formed() {
                issues.push(ValidationIssue::Malformed(e.to_string()));
            }
        }
        if let Err(e) = self.frame.check_well_formed() {
            issues.push(ValidationIssue::Malformed(e.to_string()));
        }
        if !issues.is_empty() {
            return ValidationReport { issues };
        }

        let ddim = self.region.dim();
        let fdim = self.frame.dim();
        if ddim != fdim || self.ambient.dim() != ddim {
            issues.push(ValidationIssue::ArityMismatch {
                domain_dim: ddim.max(self.ambient.dim()),
                frame_dim: fdim,
            });
            return ValidationReport { issues };
        }
        let product_sides = [
            matches!(self.region, DomainSpec::Product { .. }),
            matches!(self.ambient, DomainSpec::Product { .. }),
            matches!(self.frame, FrameSpec::SplitProduct { .. }),
        ];
        if product_sides.iter().any(|&p| p) && !product_sides.iter().all(|&p| p) {
            issues.push(ValidationIssue::ArityMismatch { domain_dim: ddim, frame_dim: fdim });
            return ValidationReport { issues };
        }

        if self.is_product() {
            for (i, factor) in self.split_factors().iter().enumerate() {
                for issue in factor.validate().issues {
                    issues.push(match issue {
                        ValidationIssue::FrameIncompatible(s) => {
                            ValidationIssue::FrameIncompatible(format!("factor {i}: {s}"))
                        }
                        ValidationIssue::RegionNotInAmbient(s) => {
                            ValidationIssue::RegionNotInAmbient(format!("factor {i}: {s}"))
                        }
                        other => other,
                    });
                }
            }
            return ValidationReport { issues };
        }

        for msg in self.frame.incompatibilities(&self.ambient) {
            issues.push(ValidationIssue::FrameIncompatible(msg));
        }

        if !self.region.is_subset_of(&self.ambient) {
            issues.push(ValidationIssue::RegionNotInAmbient(
                "region is not contained in the ambient domain".into(),
            ));
        }

        ValidationReport { issues }
    }

    /// Validation as a hard error, for engine entry points.
    pub fn require_valid(&self) -> Result<(), RhoError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(RhoError::InvalidSpec(report.to_string().replace('\n', "; ")))
        }
    }

    /// Membership check for a basepoint, with product dimension handling.
    pub fn region_contains(&self, a: &[Cx]) -> Result<bool, RhoError> {
        self.region.contains_point(a)
    }
}
