//! Nonvanishing holomorphic 1-forms `ω = g(z) dz` given symbolically.

use serde::{Deserialize, Serialize};

use crate::error::RhoError;
use crate::types::Cx;

use super::domain::DomainSpec;

/// The coefficient `g` of a frame `ω = g(z) dz`, as a symbolic variant.
///
/// Symbolic frames make three things exact that a black-box callback could
/// not: nonvanishing validation against the ambient domain, the derivative
/// `g'` used by the singular-direction predictor, and the zero structure
/// that fixes the predictor's multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FrameSpec {
    /// `ω = dz`
    ConstOne,
    /// `ω = e^z dz`
    Exp,
    /// `ω = z^k dz`, `k ≠ −1`
    Monomial { k: i32 },
    /// `ω = dz / z`
    InvZ,
    /// `ω = c · inner`, `c ≠ 0`
    Scaled { c: Cx, inner: Box<FrameSpec> },
    /// One frame per product factor.
    SplitProduct { factors: Vec<FrameSpec> },
}

impl FrameSpec {
    pub fn scaled(c: Cx, inner: FrameSpec) -> Self {
        FrameSpec::Scaled { c, inner: Box::new(inner) }
    }

    pub fn dim(&self) -> usize {
        match self {
            FrameSpec::SplitProduct { factors } => factors.len(),
            _ => 1,
        }
    }

    pub fn factors(&self) -> &[FrameSpec] {
        match self {
            FrameSpec::SplitProduct { factors } => factors,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn check_well_formed(&self) -> Result<(), RhoError> {
        match self {
            FrameSpec::Monomial { k } => {
                if *k == -1 {
                    return Err(RhoError::Invalid(
                        "monomial exponent -1 is the inv_z frame; use that variant".into(),
                    ));
                }
            }
            FrameSpec::Scaled { c, inner } => {
                if c.norm_sqr() == 0.0 || !c.is_finite() {
                    return Err(RhoError::Invalid("scale factor must be finite and nonzero".into()));
                }
                inner.check_well_formed()?;
            }
            FrameSpec::SplitProduct { factors } => {
                if factors.is_empty() {
                    return Err(RhoError::Invalid("split product needs at least one factor".into()));
                }
                for f in factors {
                    if matches!(f, FrameSpec::SplitProduct { .. }) {
                        return Err(RhoError::Invalid(
                            "split-product factors must be one-dimensional".into(),
                        ));
                    }
                    f.check_well_formed()?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Evaluates `g(z)` for a one-dimensional frame.
    pub fn eval(&self, z: Cx) -> Cx {
        match self {
            FrameSpec::ConstOne => Cx::new(1.0, 0.0),
            FrameSpec::Exp => z.exp(),
            FrameSpec::Monomial { k } => z.powi(*k),
            FrameSpec::InvZ => z.inv(),
            FrameSpec::Scaled { c, inner } => c * inner.eval(z),
            FrameSpec::SplitProduct { .. } => {
                panic!("split-product frames have no scalar evaluation")
            }
        }
    }

    /// Evaluates `g'(z)`.
    pub fn eval_derivative(&self, z: Cx) -> Cx {
        match self {
            FrameSpec::ConstOne => Cx::new(0.0, 0.0),
            FrameSpec::Exp => z.exp(),
            FrameSpec::Monomial { k } => Cx::new(f64::from(*k), 0.0) * z.powi(*k - 1),
            FrameSpec::InvZ => -(z * z).inv(),
            FrameSpec::Scaled { c, inner } => c * inner.eval_derivative(z),
            FrameSpec::SplitProduct { .. } => {
                panic!("split-product frames have no scalar evaluation")
            }
        }
    }

    /// Multiplicity for the singular-direction predictor.
    ///
    /// Where the continuation can die at a zero of `g` (including the
    /// effective zero at `z = ∞` reached in finite `ζ`-time), the pulled-back
    /// coefficient `G(ζ) = g(z(ζ))` vanishes like `(ζ − ζ*)^m`. A damped
    /// Newton step `Δζ = −m · G/G' = −m · g(z)² / g'(z)` then targets `ζ*`
    /// exactly for every frame in this family. Frames whose continuation
    /// never approaches a zero of `g` in finite time return `None`.
    pub(crate) fn singular_multiplicity(&self) -> Option<f64> {
        match self {
            FrameSpec::ConstOne => None,
            FrameSpec::Exp => Some(1.0),
            FrameSpec::Monomial { k } => {
                let k = f64::from(*k);
                // k >= 1: zero of order k at the origin; k <= -2: z escapes
                // to infinity where g ~ z^k vanishes. Both give m = k/(k+1).
                Some(k / (k + 1.0))
            }
            FrameSpec::InvZ => None,
            FrameSpec::Scaled { inner, .. } => inner.singular_multiplicity(),
            FrameSpec::SplitProduct { .. } => None,
        }
    }

    /// Points of the plane where `g` vanishes.
    fn zeros(&self) -> Vec<Cx> {
        match self {
            FrameSpec::Monomial { k } if *k >= 1 => vec![Cx::new(0.0, 0.0)],
            FrameSpec::Scaled { inner, .. } => inner.zeros(),
            _ => Vec::new(),
        }
    }

    /// Whether `g` has a pole at `p`. A trajectory of `dz/dζ = 1/g` can
    /// only creep toward a pole: the remaining `ζ`-length `∫|g||dz|`
    /// diverges, so such a point is never reached at finite radius.
    pub(crate) fn has_pole_at(&self, p: Cx) -> bool {
        self.poles().iter().any(|q| (q - p).norm() == 0.0)
    }

    /// Points of the plane where `g` has a pole (is not defined).
    fn poles(&self) -> Vec<Cx> {
        match self {
            FrameSpec::Monomial { k } if *k <= -1 => vec![Cx::new(0.0, 0.0)],
            FrameSpec::InvZ => vec![Cx::new(0.0, 0.0)],
            FrameSpec::Scaled { inner, .. } => inner.poles(),
            _ => Vec::new(),
        }
    }

    /// Checks that the frame is holomorphic and nonvanishing on `ambient`;
    /// returns human-readable violations.
    pub fn incompatibilities(&self, ambient: &DomainSpec) -> Vec<String> {
        let mut out = Vec::new();
        for z in self.zeros() {
            if ambient.contains(z) {
                out.push(format!("frame vanishes at {z} inside the ambient domain"));
            }
        }
        for z in self.poles() {
            if ambient.contains(z) {
                out.push(format!("frame is singular at {z} inside the ambient domain"));
            }
        }
        out
    }
}
