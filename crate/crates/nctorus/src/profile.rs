//! Transition profiles used by ramp and bump segments.
//!
//! A profile is a continuous map `d: [0,1] -> [0,1]` with `d(0) = 0` and
//! `d(1) = 1`. The projection recipes never need more than continuity, so
//! linear ramps are accepted alongside the smooth variants; the choice is
//! recorded in every serialized segment.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("profile endpoints must satisfy d(0) = 0 and d(1) = 1 exactly, got d(0) = {at0}, d(1) = {at1}")]
    BadEndpoints { at0: f64, at1: f64 },
    #[error("profile leaves [0, 1] at t = {t} (value {value})")]
    OutOfRange { t: f64, value: f64 },
}

/// Continuous transition map on `[0, 1]` fixing the endpoints 0 and 1.
#[derive(Clone, Default)]
pub enum BumpProfile {
    /// `d(t) = t`
    Linear,
    /// `d(t) = 3t^2 - 2t^3`
    #[default]
    Smoothstep,
    /// `d(t) = (1 - cos(pi t)) / 2`
    Cosine,
    /// Caller-supplied evaluator, validated at construction.
    Custom(CustomProfile),
}

/// A named, validated user profile. Not serializable in closed form:
/// segments using one fall back to dense samples on write.
#[derive(Clone)]
pub struct CustomProfile {
    name: Arc<str>,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for BumpProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl BumpProfile {
    /// Wrap a user evaluator, checking the endpoint and range invariants
    /// (range is sampled on a 1025-point grid).
    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, ProfileError> {
        let at0 = eval(0.0);
        let at1 = eval(1.0);
        if at0 != 0.0 || at1 != 1.0 {
            return Err(ProfileError::BadEndpoints { at0, at1 });
        }
        for i in 0..=1024 {
            let t = i as f64 / 1024.0;
            let value = eval(t);
            if !(-1e-12..=1.0 + 1e-12).contains(&value) {
                return Err(ProfileError::OutOfRange { t, value });
            }
        }
        Ok(BumpProfile::Custom(CustomProfile {
            name: Arc::from(name.into()),
            eval: Arc::new(eval),
        }))
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match self {
            BumpProfile::Linear => t,
            BumpProfile::Smoothstep => t * t * (3.0 - 2.0 * t),
            BumpProfile::Cosine => 0.5 * (1.0 - (std::f64::consts::PI * t).cos()),
            BumpProfile::Custom(c) => (c.eval)(t).clamp(0.0, 1.0),
        }
    }

    /// Antiderivative of the profile, when it has a closed form.
    pub(crate) fn antiderivative(&self, u: f64) -> Option<f64> {
        match self {
            BumpProfile::Linear => Some(0.5 * u * u),
            BumpProfile::Smoothstep => Some(u * u * u - 0.5 * u * u * u * u),
            BumpProfile::Cosine => {
                Some(0.5 * (u - (std::f64::consts::PI * u).sin() / std::f64::consts::PI))
            }
            BumpProfile::Custom(_) => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            BumpProfile::Linear => "linear",
            BumpProfile::Smoothstep => "smoothstep",
            BumpProfile::Cosine => "cosine",
            BumpProfile::Custom(c) => &c.name,
        }
    }

    /// Parse one of the built-in profile names.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "linear" => Some(BumpProfile::Linear),
            "smoothstep" => Some(BumpProfile::Smoothstep),
            "cosine" => Some(BumpProfile::Cosine),
            _ => None,
        }
    }

    pub fn is_custom(&self) -> bool {
        matches!(self, BumpProfile::Custom(_))
    }
}

impl serde::Serialize for BumpProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for BumpProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        BumpProfile::from_name(&name).ok_or_else(|| {
            serde::de::Error::custom(format!(
                "unknown profile name {name:?}; custom profiles cannot be read back from JSON"
            ))
        })
    }
}
