//! Constructive recipes for projections: the base two-band family plus
//! trace-raising glue, trace-lowering cut, bump enrichment of free bands,
//! complement, and the linear bump deformation.
//!
//! Every recipe fixes the zeroth coefficient as a piecewise ramp/plateau
//! profile and derives each nonzero band as `sqrt(d (1 - d))` over the
//! matching ramp, with the negative bands induced by self-adjointness.
//! Feasibility of the width parameters is checked before any element is
//! assembled: the ramp widths must fit below `theta` once all nonzero bands
//! are translated back to `[0, theta]`, and the total support must stay
//! inside one period.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::TorusElement;
use crate::circlefn::{frac, CircleFnError, CircleFunction, SegmentKind};
use crate::profile::BumpProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsilonRule {
    /// sum of ramp widths must stay strictly below theta
    SumBelowTheta,
    /// sum of ramp widths plus n*theta must stay strictly below 1
    SumPlusTraceBelowOne,
    /// base ramp width must stay strictly below frac(M*theta)
    BelowThetaPrime,
    /// base ramp width plus frac(M*theta) must stay strictly below 1
    PlusThetaPrimeBelowOne,
}

impl std::fmt::Display for EpsilonRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EpsilonRule::SumBelowTheta => "sum(eps) < theta",
            EpsilonRule::SumPlusTraceBelowOne => "sum(eps) + n*theta < 1",
            EpsilonRule::BelowThetaPrime => "eps_M < frac(M*theta)",
            EpsilonRule::PlusThetaPrimeBelowOne => "eps_M + frac(M*theta) < 1",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum BuilderError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("infeasible epsilon, violated {rule}: {detail}")]
    InfeasibleEpsilon { rule: EpsilonRule, detail: String },
    #[error("band {k} already carries a nonzero coefficient")]
    BandCollision { k: i32 },
    #[error("placement error: {0}")]
    PlacementError(String),
    #[error("no bump edit with boundary value one to deform")]
    NoBumpToDeform,
    #[error("edit {index}: {source}")]
    AtEdit {
        index: usize,
        #[source]
        source: Box<BuilderError>,
    },
}

impl From<CircleFnError> for BuilderError {
    fn from(e: CircleFnError) -> Self {
        BuilderError::InvalidParameter(e.to_string())
    }
}

/// Which constant the zeroth coefficient takes at the ends of a bump.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BumpBoundary {
    Zero,
    #[default]
    One,
}

/// One surgery applied on top of the base projection.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Edit {
    Glue {
        k: i32,
        eps: f64,
        #[serde(default)]
        profile: BumpProfile,
    },
    Cut {
        k: i32,
        eps: f64,
        #[serde(default)]
        profile: BumpProfile,
    },
    Bump {
        k: i32,
        eps: f64,
        /// Left end of the bump interval; omitted means the first feasible
        /// slot is selected automatically.
        #[serde(default)]
        delta: Option<f64>,
        #[serde(default)]
        profile: BumpProfile,
        #[serde(default)]
        boundary: BumpBoundary,
    },
}

impl Edit {
    pub fn band(&self) -> i32 {
        match self {
            Edit::Glue { k, .. } | Edit::Cut { k, .. } | Edit::Bump { k, .. } => *k,
        }
    }
}

/// The base two-band projection data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseSpec {
    #[serde(rename = "M")]
    pub m: i32,
    pub eps: f64,
    #[serde(default)]
    pub profile: BumpProfile,
}

/// Declarative recipe: base data, ordered edits, optional complement and
/// bump deformation parameter.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectionSpec {
    pub theta: f64,
    pub base: BaseSpec,
    #[serde(default)]
    pub edits: Vec<Edit>,
    #[serde(default)]
    pub complement: bool,
    #[serde(default)]
    pub homotopy_t: Option<f64>,
}

// ---------------------------------------------------------------------------
// feasibility predicates

/// Both width inequalities, strictly: `sum(eps) < theta` and
/// `sum(eps) + n*theta < 1`.
pub fn epsilon_feasible(theta: f64, eps_list: &[f64], n_total: i32) -> bool {
    let sum: f64 = eps_list.iter().sum();
    sum < theta && sum + n_total as f64 * theta < 1.0
}

/// Diagnostics the builders attach to a spec (currently: near-rational theta).
pub fn spec_warnings(spec: &ProjectionSpec) -> Vec<String> {
    let mut out = Vec::new();
    if let Some((p, q)) = crate::algebra::near_rational(spec.theta, 64) {
        out.push(format!(
            "theta = {} is within 1e-12 of {p}/{q}; shifts by theta are nearly periodic and the construction degenerates",
            spec.theta
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// structural helpers on the zeroth coefficient

fn piece_spans(f: &CircleFunction) -> Vec<(f64, f64, SegmentKind)> {
    let c = f.canonical();
    let pieces = c.pieces();
    let n = pieces.len();
    pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let end = if i + 1 < n { pieces[i + 1].start } else { 1.0 };
            (p.start, end, p.kind.clone())
        })
        .collect()
}

fn const_spans(f: &CircleFunction, value: f64) -> Vec<(f64, f64)> {
    piece_spans(f)
        .into_iter()
        .filter_map(|(a, b, k)| match k {
            SegmentKind::Const(c) if c == value => Some((a, b)),
            _ => None,
        })
        .collect()
}

/// Start of the trailing constant-zero piece of `p0`.
fn trailing_zero_start(p0: &CircleFunction) -> Option<f64> {
    let spans = piece_spans(p0);
    let (a, b, kind) = spans.last()?;
    match kind {
        SegmentKind::Const(c) if *c == 0.0 && *b == 1.0 => Some(*a),
        _ => None,
    }
}

/// Merged support intervals of the non-constant pieces of a coefficient.
fn ramp_spans(f: &CircleFunction) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b, kind) in piece_spans(f) {
        if kind.as_const_value().is_some() {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.1 == a => last.1 = b,
            _ => out.push((a, b)),
        }
    }
    out
}

trait KindConst {
    fn as_const_value(&self) -> Option<f64>;
}

impl KindConst for SegmentKind {
    fn as_const_value(&self) -> Option<f64> {
        match self {
            SegmentKind::Const(c) => Some(*c),
            _ => None,
        }
    }
}

/// Total ramp width across the positive bands (the running epsilon ledger).
fn eps_ledger(p: &TorusElement) -> f64 {
    p.bands()
        .filter(|(k, _)| *k > 0)
        .flat_map(|(_, f)| ramp_spans(f))
        .map(|(a, b)| b - a)
        .sum()
}

/// Trace as an integer multiple of theta, required by glue and cut: those
/// surgeries only apply to unwrapped chains where the support end equals
/// `n*theta + sum(eps)`.
fn trace_multiple(p: &TorusElement) -> Result<i32, BuilderError> {
    let tau = p.trace();
    let theta = p.theta();
    let n = (tau / theta).round();
    if (n * theta - tau).abs() > 1e-9 || n < 0.0 {
        return Err(BuilderError::InvalidParameter(format!(
            "base trace {tau} is not an integer multiple of theta = {theta}; glue/cut apply only to unwrapped chains"
        )));
    }
    Ok(n as i32)
}

fn check_band_free(p: &TorusElement, k: i32) -> Result<(), BuilderError> {
    let m = p.order_bound();
    if k < 1 {
        return Err(BuilderError::InvalidParameter(format!(
            "band index k = {k} must be positive"
        )));
    }
    if p.coeff_ref(k).is_some() || p.coeff_ref(-k).is_some() {
        return Err(BuilderError::BandCollision { k });
    }
    if k >= m {
        return Err(BuilderError::InvalidParameter(format!(
            "band index k = {k} must lie in 1..{} (strictly below the order M = {m})",
            m - 1
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// interval arithmetic mod 1 for the non-intersection requirement

type Iv = (f64, f64);

fn shift_mod_one(ivs: &[Iv], s: f64) -> Vec<Iv> {
    let mut out = Vec::new();
    for &(a, b) in ivs {
        let len = b - a;
        let a2 = frac(a + s);
        if a2 + len > 1.0 {
            out.push((a2, 1.0));
            out.push((0.0, a2 + len - 1.0));
        } else {
            out.push((a2, a2 + len));
        }
    }
    out
}

fn overlap_len(x: Iv, y: Iv) -> f64 {
    (x.1.min(y.1) - x.0.max(y.0)).max(0.0)
}

/// Every product `p_m(x + a*theta) * p_a(x)` with `m, a` nonzero and
/// `m + a != 0` must vanish identically, i.e. the support of `p_m` pulled
/// back by `a*theta` must not meet the support of `p_a`.
fn summand_supports_ok(bands: &[(i32, Vec<Iv>)], theta: f64) -> Result<(), String> {
    let mut all: Vec<(i32, Vec<Iv>)> = Vec::with_capacity(bands.len() * 2);
    for (k, ivs) in bands {
        all.push((*k, ivs.clone()));
        all.push((-*k, shift_mod_one(ivs, *k as f64 * theta)));
    }
    for (m, sm) in &all {
        for (a, sa) in &all {
            if m + a == 0 {
                continue;
            }
            let pulled = shift_mod_one(sm, -(*a as f64) * theta);
            for x in &pulled {
                for y in sa {
                    if overlap_len(*x, *y) > 1e-12 {
                        return Err(format!(
                            "supports of bands {m} (pulled back by {a}*theta) and {a} overlap on [{:.6}, {:.6}]",
                            x.0.max(y.0),
                            x.1.min(y.1)
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn positive_band_supports(p: &TorusElement) -> Vec<(i32, Vec<Iv>)> {
    p.bands()
        .filter(|(k, _)| *k > 0)
        .map(|(k, f)| (k, ramp_spans(f)))
        .collect()
}

// ---------------------------------------------------------------------------
// piece assembly helpers

fn profile_piece(profile: &BumpProfile, eps: f64, rising: bool) -> SegmentKind {
    SegmentKind::Profile {
        profile: profile.clone(),
        u0: 0.0,
        du: 1.0 / eps,
        offset: if rising { 0.0 } else { 1.0 },
        scale: if rising { 1.0 } else { -1.0 },
    }
}

fn sqrt_piece(profile: &BumpProfile, eps: f64) -> SegmentKind {
    SegmentKind::SqrtBump {
        profile: profile.clone(),
        u0: 0.0,
        du: 1.0 / eps,
        amp: 1.0,
        offset: 0.0,
        scale: 1.0,
    }
}

/// Two tent halves covering `[x0, x0 + eps]`: value `base + signed_amp * B`
/// where `B` rises from 0 to 1 at the midpoint and back.
fn tent_pieces(
    profile: &BumpProfile,
    x0: f64,
    eps: f64,
    base: f64,
    signed_amp: f64,
) -> Vec<(f64, SegmentKind)> {
    let du = 2.0 / eps;
    vec![
        (
            x0,
            SegmentKind::Profile {
                profile: profile.clone(),
                u0: 0.0,
                du,
                offset: base,
                scale: signed_amp,
            },
        ),
        (
            x0 + eps / 2.0,
            SegmentKind::Profile {
                profile: profile.clone(),
                u0: 1.0,
                du: -du,
                offset: base,
                scale: signed_amp,
            },
        ),
    ]
}

fn sqrt_tent_pieces(profile: &BumpProfile, x0: f64, eps: f64, amp: f64) -> Vec<(f64, SegmentKind)> {
    let du = 2.0 / eps;
    vec![
        (
            x0,
            SegmentKind::SqrtBump {
                profile: profile.clone(),
                u0: 0.0,
                du,
                amp,
                offset: 0.0,
                scale: 1.0,
            },
        ),
        (
            x0 + eps / 2.0,
            SegmentKind::SqrtBump {
                profile: profile.clone(),
                u0: 1.0,
                du: -du,
                amp,
                offset: 0.0,
                scale: 1.0,
            },
        ),
    ]
}

/// Band function equal to `kinds` over their span and zero elsewhere.
fn band_function(
    kinds: Vec<(f64, SegmentKind)>,
    span_end: f64,
) -> Result<CircleFunction, BuilderError> {
    let mut parts = Vec::with_capacity(kinds.len() + 2);
    let span_start = kinds[0].0;
    if span_start > 0.0 {
        parts.push((0.0, SegmentKind::Const(0.0)));
    }
    parts.extend(kinds);
    if span_end < 1.0 {
        parts.push((span_end, SegmentKind::Const(0.0)));
    }
    Ok(CircleFunction::from_pieces(parts)?)
}

/// Nudge `y` onto the closest of `points` when it sits within float noise
/// of one; placement arithmetic like `(c - k*theta) + k*theta` must land
/// exactly on the breakpoint it targets.
fn snap(y: f64, points: impl Iterator<Item = f64>) -> f64 {
    let mut best = y;
    let mut dist = 5e-10;
    for p in points {
        let d = (p - y).abs();
        if d < dist {
            dist = d;
            best = p;
        }
    }
    best
}

/// Replace part of a constant-`base` piece of `f` by a tent.
fn insert_tent(
    f: &CircleFunction,
    x0: f64,
    eps: f64,
    profile: &BumpProfile,
    base: f64,
    signed_amp: f64,
) -> Result<CircleFunction, BuilderError> {
    let spans = piece_spans(f);
    let host = spans
        .iter()
        .find(|(a, b, k)| k.as_const_value() == Some(base) && *a <= x0 && x0 + eps <= *b)
        .map(|(a, b, _)| (*a, *b));
    let (ha, hb) = host.ok_or_else(|| {
        BuilderError::PlacementError(format!(
            "interval [{x0}, {}] does not lie inside a region where the zeroth coefficient is constant {base}",
            x0 + eps
        ))
    })?;
    let mut parts: Vec<(f64, SegmentKind)> = Vec::with_capacity(spans.len() + 3);
    for (a, b, kind) in &spans {
        if (*a, *b) == (ha, hb) {
            if *a < x0 {
                parts.push((*a, SegmentKind::Const(base)));
            }
            parts.extend(tent_pieces(profile, x0, eps, base, signed_amp));
            if x0 + eps < *b {
                parts.push((x0 + eps, SegmentKind::Const(base)));
            }
        } else {
            parts.push((*a, kind.clone()));
        }
    }
    Ok(CircleFunction::from_pieces(parts)?)
}

// ---------------------------------------------------------------------------
// the builders

/// Base projection of order `m`: bands `{0, +-m}` only, built on the
/// fractional part of `m*theta`, with trace `frac(m*theta)`.
pub fn power_rieffel(
    theta: f64,
    m: i32,
    eps_m: f64,
    profile: &BumpProfile,
) -> Result<TorusElement, BuilderError> {
    if !(0.0 < theta && theta < 1.0) {
        return Err(BuilderError::InvalidParameter(format!(
            "theta = {theta} must lie in (0, 1)"
        )));
    }
    if m < 1 {
        return Err(BuilderError::InvalidParameter(format!(
            "order M = {m} must be a positive integer"
        )));
    }
    if !(eps_m > 0.0) {
        return Err(BuilderError::InvalidParameter(format!(
            "eps_M = {eps_m} must be positive"
        )));
    }
    let tp = frac(m as f64 * theta);
    if tp == 0.0 {
        return Err(BuilderError::InvalidParameter(format!(
            "M*theta = {} is an integer; the construction degenerates",
            m as f64 * theta
        )));
    }
    if eps_m >= tp {
        return Err(BuilderError::InfeasibleEpsilon {
            rule: EpsilonRule::BelowThetaPrime,
            detail: format!("eps_M = {eps_m} >= frac(M*theta) = {tp}"),
        });
    }
    if eps_m + tp >= 1.0 {
        return Err(BuilderError::InfeasibleEpsilon {
            rule: EpsilonRule::PlusThetaPrimeBelowOne,
            detail: format!("eps_M + frac(M*theta) = {} >= 1", eps_m + tp),
        });
    }

    let p0 = CircleFunction::from_pieces(vec![
        (0.0, profile_piece(profile, eps_m, true)),
        (eps_m, SegmentKind::Const(1.0)),
        (tp, profile_piece(profile, eps_m, false)),
        (tp + eps_m, SegmentKind::Const(0.0)),
    ])?;
    let pm = band_function(vec![(0.0, sqrt_piece(profile, eps_m))], eps_m)?;
    let pminus = pm.shift(-(m as f64) * theta);

    let mut coeffs = std::collections::BTreeMap::new();
    coeffs.insert(0, p0);
    coeffs.insert(m, pm);
    coeffs.insert(-m, pminus);
    Ok(TorusElement::new(theta, coeffs))
}

/// Attach a trace `k*theta` block at the end of the current support,
/// raising the trace by `k*theta`.
pub fn glue(
    base: &TorusElement,
    k: i32,
    eps_k: f64,
    profile: &BumpProfile,
) -> Result<TorusElement, BuilderError> {
    check_band_free(base, k)?;
    if !(eps_k > 0.0) {
        return Err(BuilderError::InvalidParameter(format!(
            "eps_k = {eps_k} must be positive"
        )));
    }
    let theta = base.theta();
    let n_cur = trace_multiple(base)?;
    let n_new = n_cur + k;
    let eps_sum = eps_ledger(base) + eps_k;
    if eps_sum >= theta {
        return Err(BuilderError::InfeasibleEpsilon {
            rule: EpsilonRule::SumBelowTheta,
            detail: format!("sum(eps) = {eps_sum} >= theta = {theta}"),
        });
    }
    if eps_sum + n_new as f64 * theta >= 1.0 {
        return Err(BuilderError::InfeasibleEpsilon {
            rule: EpsilonRule::SumPlusTraceBelowOne,
            detail: format!(
                "sum(eps) + n*theta = {} >= 1 with n = {n_new}",
                eps_sum + n_new as f64 * theta
            ),
        });
    }

    let p0 = base.coeff(0);
    let support_end = trailing_zero_start(&p0).ok_or_else(|| {
        BuilderError::PlacementError(
            "the zeroth coefficient has no trailing zero region to glue onto".into(),
        )
    })?;
    let kt = k as f64 * theta;
    let spans = piece_spans(&p0);
    let mut parts: Vec<(f64, SegmentKind)> = spans
        .iter()
        .take(spans.len() - 1)
        .map(|(a, _, kind)| (*a, kind.clone()))
        .collect();
    parts.push((support_end, profile_piece(profile, eps_k, true)));
    parts.push((support_end + eps_k, SegmentKind::Const(1.0)));
    parts.push((support_end + kt, profile_piece(profile, eps_k, false)));
    parts.push((support_end + kt + eps_k, SegmentKind::Const(0.0)));
    let p0_new = CircleFunction::from_pieces(parts)?;

    let pk = band_function(
        vec![(support_end, sqrt_piece(profile, eps_k))],
        support_end + eps_k,
    )?;
    let pminus = pk.shift(-kt);

    let mut out = base.with_coeff(0, p0_new);
    out = out.with_coeff(k, pk);
    out = out.with_coeff(-k, pminus);
    Ok(out)
}

/// Remove a trace `k*theta` block from the start of the first plateau,
/// lowering the trace by `k*theta`.
pub fn cut(
    base: &TorusElement,
    k: i32,
    eps_k: f64,
    profile: &BumpProfile,
) -> Result<TorusElement, BuilderError> {
    check_band_free(base, k)?;
    if !(eps_k > 0.0) {
        return Err(BuilderError::InvalidParameter(format!(
            "eps_k = {eps_k} must be positive"
        )));
    }
    let theta = base.theta();
    let n_cur = trace_multiple(base)?;
    if n_cur - k < 1 {
        return Err(BuilderError::InvalidParameter(format!(
            "cutting k = {k} from a trace {n_cur}*theta projection would not leave a positive trace"
        )));
    }
    let eps_sum = eps_ledger(base) + eps_k;
    if eps_sum >= theta {
        return Err(BuilderError::InfeasibleEpsilon {
            rule: EpsilonRule::SumBelowTheta,
            detail: format!("sum(eps) = {eps_sum} >= theta = {theta}"),
        });
    }
    if eps_sum + n_cur as f64 * theta >= 1.0 {
        return Err(BuilderError::InfeasibleEpsilon {
            rule: EpsilonRule::SumPlusTraceBelowOne,
            detail: format!(
                "sum(eps) + n*theta = {} >= 1 with n = {n_cur}",
                eps_sum + n_cur as f64 * theta
            ),
        });
    }

    let p0 = base.coeff(0);
    let spans = piece_spans(&p0);
    let kt = k as f64 * theta;
    let plateau = spans
        .iter()
        .find(|(_, _, kind)| kind.as_const_value() == Some(1.0))
        .map(|(a, b, _)| (*a, *b))
        .ok_or_else(|| {
            BuilderError::PlacementError(
                "the zeroth coefficient has no plateau at height one to cut".into(),
            )
        })?;
    let (s, e) = plateau;
    if s + kt + eps_k > e {
        return Err(BuilderError::InfeasibleEpsilon {
            rule: EpsilonRule::SumBelowTheta,
            detail: format!(
                "cut span k*theta + eps = {} exceeds the plateau [{s}, {e}]",
                kt + eps_k
            ),
        });
    }

    let mut parts: Vec<(f64, SegmentKind)> = Vec::with_capacity(spans.len() + 4);
    for (a, _, kind) in &spans {
        if *a == s {
            parts.push((s, profile_piece(profile, eps_k, false)));
            parts.push((s + eps_k, SegmentKind::Const(0.0)));
            parts.push((s + kt, profile_piece(profile, eps_k, true)));
            if s + kt + eps_k < e {
                parts.push((s + kt + eps_k, SegmentKind::Const(1.0)));
            }
        } else {
            parts.push((*a, kind.clone()));
        }
    }
    let p0_new = CircleFunction::from_pieces(parts)?;

    let pk = band_function(vec![(s, sqrt_piece(profile, eps_k))], s + eps_k)?;
    let pminus = pk.shift(-kt);

    let mut out = base.with_coeff(0, p0_new);
    out = out.with_coeff(k, pk);
    out = out.with_coeff(-k, pminus);
    Ok(out)
}

/// Enrich a free band `k` with a bump of width `eps_k`: the zeroth
/// coefficient picks up a tent at `[delta, delta + eps]` and the
/// complementary tent on its `k*theta` translate; the trace is unchanged.
///
/// With `delta = None` the first feasible slot is selected. `amplitude`
/// scales the tent (1 is the plain bump; smaller values realize the linear
/// deformation `t*d + (1 - t)` of a boundary-one bump).
pub fn add_bump(
    base: &TorusElement,
    k: i32,
    delta: Option<f64>,
    eps_k: f64,
    profile: &BumpProfile,
    boundary: BumpBoundary,
    amplitude: f64,
) -> Result<TorusElement, BuilderError> {
    check_band_free(base, k)?;
    if !(eps_k > 0.0) {
        return Err(BuilderError::InvalidParameter(format!(
            "eps_k = {eps_k} must be positive"
        )));
    }
    if !(0.0..=1.0).contains(&amplitude) {
        return Err(BuilderError::InvalidParameter(format!(
            "bump amplitude {amplitude} must lie in [0, 1]"
        )));
    }
    let theta = base.theta();
    let eps_sum = eps_ledger(base) + eps_k;
    if eps_sum >= theta {
        return Err(BuilderError::InfeasibleEpsilon {
            rule: EpsilonRule::SumBelowTheta,
            detail: format!("sum(eps) = {eps_sum} >= theta = {theta}"),
        });
    }

    let p0 = base.coeff(0);
    let kt = k as f64 * theta;
    let host_value = match boundary {
        BumpBoundary::One => 1.0,
        BumpBoundary::Zero => 0.0,
    };
    let hosts = const_spans(&p0, host_value);
    let targets = const_spans(&p0, 1.0 - host_value);

    let breakpoints = p0.breakpoints();
    let placement_ok = |d: f64| -> Result<f64, String> {
        let d_end = d + eps_k;
        if !hosts.iter().any(|(a, b)| *a <= d && d_end <= *b) {
            return Err(format!(
                "bump interval [{d}, {d_end}] is not inside a constant-{host_value} region of the zeroth coefficient"
            ));
        }
        let y = snap(frac(d + kt), breakpoints.iter().copied());
        if y + eps_k > 1.0 {
            return Err(format!(
                "shifted interval [{y}, {}] crosses the wrap point",
                y + eps_k
            ));
        }
        if !targets.iter().any(|(a, b)| *a <= y && y + eps_k <= *b) {
            return Err(format!(
                "shifted interval [{y}, {}] is not inside a constant-{} region of the zeroth coefficient",
                y + eps_k,
                1.0 - host_value
            ));
        }
        let mut bands = positive_band_supports(base);
        bands.push((k, vec![(d, d_end)]));
        summand_supports_ok(&bands, theta)?;
        Ok(y)
    };

    let (delta, shifted) = match delta {
        Some(d) => {
            if !(0.0..1.0).contains(&d) || d + eps_k > 1.0 {
                return Err(BuilderError::PlacementError(format!(
                    "bump interval [{d}, {}] leaves [0, 1)",
                    d + eps_k
                )));
            }
            let y = placement_ok(d).map_err(BuilderError::PlacementError)?;
            (d, y)
        }
        None => {
            let mut candidates: Vec<f64> = Vec::new();
            for (a, b) in &hosts {
                for (c, e) in &targets {
                    for wrap in [0.0, 1.0] {
                        let lo = snap(a.max(c + wrap - kt), breakpoints.iter().copied());
                        let hi = b.min(e + wrap - kt) - eps_k;
                        if hi >= lo {
                            candidates.push(lo);
                        }
                    }
                }
            }
            candidates.sort_by(f64::total_cmp);
            candidates.dedup();
            let mut found = None;
            for d in candidates {
                if let Ok(y) = placement_ok(d) {
                    found = Some((d, y));
                    break;
                }
            }
            found.ok_or_else(|| {
                BuilderError::PlacementError(format!(
                    "no feasible slot for a width {eps_k} bump on band {k}"
                ))
            })?
        }
    };

    let signed = match boundary {
        BumpBoundary::One => -amplitude,
        BumpBoundary::Zero => amplitude,
    };
    let p0_new = insert_tent(&p0, delta, eps_k, profile, host_value, signed)?;
    let p0_new = insert_tent(&p0_new, shifted, eps_k, profile, 1.0 - host_value, -signed)?;

    let pk = band_function(
        sqrt_tent_pieces(profile, delta, eps_k, amplitude),
        delta + eps_k,
    )?;
    let pminus = pk.shift(-kt);

    let mut out = base.with_coeff(0, p0_new);
    out = out.with_coeff(k, pk);
    out = out.with_coeff(-k, pminus);
    Ok(out)
}

/// Complement `1 - p` in the manner that keeps the nonzero bands: the zeroth
/// coefficient flips to `1 - p_0` and every other band is left as it is.
pub fn complement(p: &TorusElement) -> TorusElement {
    p.with_coeff(0, p.coeff(0).affine(1.0, -1.0))
}

/// Build with the bump amplitude forced to `t` (boundary-one bumps only).
pub fn homotopy(spec: &ProjectionSpec, t: f64) -> Result<TorusElement, BuilderError> {
    let mut deformed = spec.clone();
    deformed.homotopy_t = Some(t);
    build(&deformed)
}

/// Apply the base recipe, then the edits in order, then the optional
/// complement; `homotopy_t` deforms every boundary-one bump.
pub fn build(spec: &ProjectionSpec) -> Result<TorusElement, BuilderError> {
    let t = match spec.homotopy_t {
        Some(t) => {
            if !(0.0..=1.0).contains(&t) {
                return Err(BuilderError::InvalidParameter(format!(
                    "homotopy parameter t = {t} must lie in [0, 1]"
                )));
            }
            let eligible = spec.edits.iter().any(|e| {
                matches!(
                    e,
                    Edit::Bump {
                        boundary: BumpBoundary::One,
                        ..
                    }
                )
            });
            if !eligible {
                return Err(BuilderError::NoBumpToDeform);
            }
            t
        }
        None => 1.0,
    };

    let mut element = power_rieffel(spec.theta, spec.base.m, spec.base.eps, &spec.base.profile)?;
    for (index, edit) in spec.edits.iter().enumerate() {
        element = match edit {
            Edit::Glue { k, eps, profile } => glue(&element, *k, *eps, profile),
            Edit::Cut { k, eps, profile } => cut(&element, *k, *eps, profile),
            Edit::Bump {
                k,
                eps,
                delta,
                profile,
                boundary,
            } => {
                let amp = match boundary {
                    BumpBoundary::One => t,
                    BumpBoundary::Zero => 1.0,
                };
                add_bump(&element, *k, *delta, *eps, profile, *boundary, amp)
            }
        }
        .map_err(|source| BuilderError::AtEdit {
            index,
            source: Box::new(source),
        })?;
    }
    if spec.complement {
        element = complement(&element);
    }
    Ok(element)
}
