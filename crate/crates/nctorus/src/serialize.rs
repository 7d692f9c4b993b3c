//! JSON representations of circle functions, elements, and build specs.
//!
//! Structural segments round-trip exactly; composite closures and custom
//! profiles serialize as dense samples and the enclosing function is marked
//! `"approximate": true`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::TorusElement;
use crate::builders::ProjectionSpec;
use crate::circlefn::{CircleFunction, SegmentKind};
use crate::profile::BumpProfile;

/// Sample density used when a segment has no closed form.
pub const SAMPLE_GRID_PER_UNIT: usize = 4096;

#[derive(Debug, Error)]
pub enum SerializeError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad function payload: {0}")]
    BadFunction(String),
    #[error("bad element payload: {0}")]
    BadElement(String),
}

fn one_f64() -> f64 {
    1.0
}

/// Bit-exact float fields. The stock serde_json float text path is not
/// round-trip exact on this toolchain (a shortest-repr print can parse back
/// one ulp off), so element payloads write numbers through std's formatter
/// and read them back through std's parser, both of which guarantee
/// round-trips.
mod exact_f64 {
    use serde::de::Error as DeError;
    use serde::ser::Error as SerError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::value::RawValue;

    pub fn to_raw<E: SerError>(v: f64) -> Result<Box<RawValue>, E> {
        if !v.is_finite() {
            return Err(E::custom(format!("non-finite value {v}")));
        }
        RawValue::from_string(format!("{v:?}")).map_err(E::custom)
    }

    pub fn parse<E: DeError>(raw: &RawValue) -> Result<f64, E> {
        raw.get().trim().parse::<f64>().map_err(E::custom)
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_raw::<S::Error>(*v)?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let raw = Box::<RawValue>::deserialize(d)?;
        parse(&raw)
    }
}

mod exact_f64_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::value::RawValue;

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let raws: Vec<Box<RawValue>> = v
            .iter()
            .map(|x| super::exact_f64::to_raw::<S::Error>(*x))
            .collect::<Result<_, _>>()?;
        raws.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raws = Vec::<Box<RawValue>>::deserialize(d)?;
        raws.iter().map(|r| super::exact_f64::parse(r)).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
enum SegmentRepr {
    Zero,
    One,
    Const {
        #[serde(with = "exact_f64")]
        value: f64,
    },
    /// `amplitude * P(u)`
    RampUp {
        profile: BumpProfile,
        #[serde(with = "exact_f64")]
        u0: f64,
        #[serde(with = "exact_f64")]
        du: f64,
        #[serde(default = "one_f64", with = "exact_f64")]
        amplitude: f64,
    },
    /// `1 - amplitude * P(u)`
    RampDown {
        profile: BumpProfile,
        #[serde(with = "exact_f64")]
        u0: f64,
        #[serde(with = "exact_f64")]
        du: f64,
        #[serde(default = "one_f64", with = "exact_f64")]
        amplitude: f64,
    },
    /// `offset + scale * P(u)`
    AffineProfile {
        profile: BumpProfile,
        #[serde(with = "exact_f64")]
        u0: f64,
        #[serde(with = "exact_f64")]
        du: f64,
        #[serde(with = "exact_f64")]
        offset: f64,
        #[serde(with = "exact_f64")]
        scale: f64,
    },
    /// `sqrt(v (1 - v))` with `v = amplitude * P(u)`
    SqrtBump {
        profile: BumpProfile,
        #[serde(with = "exact_f64")]
        u0: f64,
        #[serde(with = "exact_f64")]
        du: f64,
        #[serde(default = "one_f64", with = "exact_f64")]
        amplitude: f64,
    },
    /// `offset + scale * sqrt(v (1 - v))` with `v = amp * P(u)`
    SqrtAffine {
        profile: BumpProfile,
        #[serde(with = "exact_f64")]
        u0: f64,
        #[serde(with = "exact_f64")]
        du: f64,
        #[serde(with = "exact_f64")]
        amp: f64,
        #[serde(with = "exact_f64")]
        offset: f64,
        #[serde(with = "exact_f64")]
        scale: f64,
    },
    /// dense grid over the segment, linearly interpolated
    Samples {
        #[serde(with = "exact_f64_vec")]
        values: Vec<f64>,
        #[serde(with = "exact_f64")]
        u0: f64,
        #[serde(with = "exact_f64")]
        du: f64,
        approximate: bool,
    },
}

/// Serialized form of a [`CircleFunction`]: parallel breakpoint and segment
/// lists; `segments[i]` covers `[breakpoints[i], breakpoints[i+1])`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleFunctionRepr {
    #[serde(with = "exact_f64_vec")]
    breakpoints: Vec<f64>,
    segments: Vec<SegmentRepr>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    approximate: bool,
}

fn sample_segment(kind: &SegmentKind, start: f64, end: f64) -> SegmentRepr {
    let len = end - start;
    let n = ((len * SAMPLE_GRID_PER_UNIT as f64).ceil() as usize).max(8);
    let values: Vec<f64> = (0..=n)
        .map(|j| kind.eval(start + len * j as f64 / n as f64, start))
        .collect();
    SegmentRepr::Samples {
        values,
        u0: 0.0,
        du: 1.0 / len,
        approximate: true,
    }
}

fn segment_to_repr(kind: &SegmentKind, start: f64, end: f64) -> SegmentRepr {
    match kind {
        SegmentKind::Const(c) if *c == 0.0 => SegmentRepr::Zero,
        SegmentKind::Const(c) if *c == 1.0 => SegmentRepr::One,
        SegmentKind::Const(c) => SegmentRepr::Const { value: *c },
        SegmentKind::Profile {
            profile,
            u0,
            du,
            offset,
            scale,
        } => {
            if profile.is_custom() {
                return sample_segment(kind, start, end);
            }
            if *offset == 0.0 && *scale >= 0.0 {
                SegmentRepr::RampUp {
                    profile: profile.clone(),
                    u0: *u0,
                    du: *du,
                    amplitude: *scale,
                }
            } else if *offset == 1.0 && *scale <= 0.0 {
                SegmentRepr::RampDown {
                    profile: profile.clone(),
                    u0: *u0,
                    du: *du,
                    amplitude: -*scale,
                }
            } else {
                SegmentRepr::AffineProfile {
                    profile: profile.clone(),
                    u0: *u0,
                    du: *du,
                    offset: *offset,
                    scale: *scale,
                }
            }
        }
        SegmentKind::SqrtBump {
            profile,
            u0,
            du,
            amp,
            offset,
            scale,
        } => {
            if profile.is_custom() {
                return sample_segment(kind, start, end);
            }
            if *offset == 0.0 && *scale == 1.0 {
                SegmentRepr::SqrtBump {
                    profile: profile.clone(),
                    u0: *u0,
                    du: *du,
                    amplitude: *amp,
                }
            } else {
                SegmentRepr::SqrtAffine {
                    profile: profile.clone(),
                    u0: *u0,
                    du: *du,
                    amp: *amp,
                    offset: *offset,
                    scale: *scale,
                }
            }
        }
        SegmentKind::Sampled { values, u0, du } => SegmentRepr::Samples {
            values: values.as_ref().clone(),
            u0: *u0,
            du: *du,
            approximate: true,
        },
        SegmentKind::Composite(_) => sample_segment(kind, start, end),
    }
}

fn segment_from_repr(repr: SegmentRepr) -> SegmentKind {
    match repr {
        SegmentRepr::Zero => SegmentKind::Const(0.0),
        SegmentRepr::One => SegmentKind::Const(1.0),
        SegmentRepr::Const { value } => SegmentKind::Const(value),
        SegmentRepr::RampUp {
            profile,
            u0,
            du,
            amplitude,
        } => SegmentKind::Profile {
            profile,
            u0,
            du,
            offset: 0.0,
            scale: amplitude,
        },
        SegmentRepr::RampDown {
            profile,
            u0,
            du,
            amplitude,
        } => SegmentKind::Profile {
            profile,
            u0,
            du,
            offset: 1.0,
            scale: -amplitude,
        },
        SegmentRepr::AffineProfile {
            profile,
            u0,
            du,
            offset,
            scale,
        } => SegmentKind::Profile {
            profile,
            u0,
            du,
            offset,
            scale,
        },
        SegmentRepr::SqrtBump {
            profile,
            u0,
            du,
            amplitude,
        } => SegmentKind::SqrtBump {
            profile,
            u0,
            du,
            amp: amplitude,
            offset: 0.0,
            scale: 1.0,
        },
        SegmentRepr::SqrtAffine {
            profile,
            u0,
            du,
            amp,
            offset,
            scale,
        } => SegmentKind::SqrtBump {
            profile,
            u0,
            du,
            amp,
            offset,
            scale,
        },
        SegmentRepr::Samples { values, u0, du, .. } => SegmentKind::Sampled {
            values: Arc::new(values),
            u0,
            du,
        },
    }
}

pub fn circlefn_to_repr(f: &CircleFunction) -> CircleFunctionRepr {
    let c = f.canonical();
    let pieces = c.pieces();
    let n = pieces.len();
    let mut breakpoints = Vec::with_capacity(n);
    let mut segments = Vec::with_capacity(n);
    for (i, p) in pieces.iter().enumerate() {
        let end = if i + 1 < n { pieces[i + 1].start } else { 1.0 };
        breakpoints.push(p.start);
        segments.push(segment_to_repr(&p.kind, p.start, end));
    }
    let approximate = segments
        .iter()
        .any(|s| matches!(s, SegmentRepr::Samples { .. }));
    CircleFunctionRepr {
        breakpoints,
        segments,
        approximate,
    }
}

pub fn circlefn_from_repr(repr: CircleFunctionRepr) -> Result<CircleFunction, SerializeError> {
    if repr.breakpoints.len() != repr.segments.len() {
        return Err(SerializeError::BadFunction(format!(
            "{} breakpoints vs {} segments",
            repr.breakpoints.len(),
            repr.segments.len()
        )));
    }
    let parts: Vec<(f64, SegmentKind)> = repr
        .breakpoints
        .into_iter()
        .zip(repr.segments.into_iter().map(segment_from_repr))
        .collect();
    CircleFunction::from_pieces(parts).map_err(|e| SerializeError::BadFunction(e.to_string()))
}

/// Serialized element: `{"theta": t, "coeffs": {"-1": {...}, "0": {...}}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementRepr {
    #[serde(with = "exact_f64")]
    pub theta: f64,
    pub coeffs: BTreeMap<String, CircleFunctionRepr>,
}

pub fn element_to_repr(p: &TorusElement) -> ElementRepr {
    ElementRepr {
        theta: p.theta(),
        coeffs: p
            .bands()
            .map(|(k, f)| (k.to_string(), circlefn_to_repr(f)))
            .collect(),
    }
}

pub fn element_from_repr(repr: ElementRepr) -> Result<TorusElement, SerializeError> {
    let mut coeffs = BTreeMap::new();
    for (key, func) in repr.coeffs {
        let k: i32 = key
            .parse()
            .map_err(|_| SerializeError::BadElement(format!("bad band index {key:?}")))?;
        coeffs.insert(k, circlefn_from_repr(func)?);
    }
    Ok(TorusElement::new(repr.theta, coeffs))
}

pub fn element_to_json(p: &TorusElement) -> Result<String, SerializeError> {
    Ok(serde_json::to_string_pretty(&element_to_repr(p))?)
}

pub fn element_from_json(s: &str) -> Result<TorusElement, SerializeError> {
    element_from_repr(serde_json::from_str(s)?)
}

pub fn spec_to_json(spec: &ProjectionSpec) -> Result<String, SerializeError> {
    Ok(serde_json::to_string_pretty(spec)?)
}

pub fn spec_from_json(s: &str) -> Result<ProjectionSpec, SerializeError> {
    Ok(serde_json::from_str(s)?)
}
