//! Shared scalar types: complex coordinates and possibly-unbounded radii.

use serde::{Deserialize, Serialize};

/// Complex coordinate. All domain data is finite; points at infinity are
/// never stored, only reported through [`Rho::Unbounded`].
pub type Cx = num_complex::Complex64;

/// A radius value that may be unbounded.
///
/// `Unbounded` is always an honest bracket ("no failure up to the engine
/// cap"), never a proof of infinity; see
/// [`EngineConfig::t_cap`](crate::continuation::EngineConfig::t_cap).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rho {
    Finite(f64),
    #[serde(with = "unbounded_tag")]
    Unbounded,
}

impl Rho {
    /// Collapses to `f64`, mapping `Unbounded` to `+∞`.
    pub fn as_f64(self) -> f64 {
        match self {
            Rho::Finite(v) => v,
            Rho::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Rho::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Rho::Finite(v) => Some(v),
            Rho::Unbounded => None,
        }
    }

    /// Minimum under the convention `Unbounded = +∞`.
    pub fn min(self, other: Rho) -> Rho {
        match (self, other) {
            (Rho::Finite(a), Rho::Finite(b)) => Rho::Finite(a.min(b)),
            (Rho::Finite(a), Rho::Unbounded) | (Rho::Unbounded, Rho::Finite(a)) => Rho::Finite(a),
            (Rho::Unbounded, Rho::Unbounded) => Rho::Unbounded,
        }
    }

    /// Relative difference against a reference value, treating a pair of
    /// `Unbounded` as exact agreement and a mixed pair as infinite error.
    pub fn rel_err(self, reference: Rho) -> f64 {
        match (self, reference) {
            (Rho::Finite(a), Rho::Finite(b)) => {
                let scale = b.abs().max(f64::MIN_POSITIVE);
                (a - b).abs() / scale
            }
            (Rho::Unbounded, Rho::Unbounded) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl From<f64> for Rho {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Rho::Finite(v)
        } else {
            Rho::Unbounded
        }
    }
}

impl std::fmt::Display for Rho {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rho::Finite(v) => write!(f, "{v}"),
            Rho::Unbounded => write!(f, "unbounded"),
        }
    }
}

mod unbounded_tag {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("unbounded")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let tag = String::deserialize(d)?;
        if tag == "unbounded" {
            Ok(())
        } else {
            Err(D::Error::custom("expected \"unbounded\""))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_treats_unbounded_as_infinity() {
        assert_eq!(Rho::Unbounded.min(Rho::Finite(2.0)), Rho::Finite(2.0));
        assert_eq!(Rho::Unbounded.min(Rho::Unbounded), Rho::Unbounded);
        assert_eq!(Rho::Finite(1.0).min(Rho::Finite(2.0)), Rho::Finite(1.0));
    }

    #[test]
    fn rel_err_mixed_is_infinite() {
        assert_eq!(Rho::Unbounded.rel_err(Rho::Finite(1.0)), f64::INFINITY);
        assert_eq!(Rho::Unbounded.rel_err(Rho::Unbounded), 0.0);
        assert!(Rho::Finite(1.01).rel_err(Rho::Finite(1.0)) < 0.011);
    }

    #[test]
    fn serde_round_trip() {
        let s = serde_json::to_string(&Rho::Finite(2.5)).unwrap();
        assert_eq!(s, "2.5");
        let s = serde_json::to_string(&Rho::Unbounded).unwrap();
        assert_eq!(s, "\"unbounded\"");
        let back: Rho = serde_json::from_str(&s).unwrap();
        assert_eq!(back, Rho::Unbounded);
    }
}
