//! Piecewise continuous real functions on the circle `R/Z`.
//!
//! A [`CircleFunction`] is a subdivision of `[0, 1)` into pieces, each with a
//! closed-form evaluator, plus a lazily applied shift (`phase`). Shifting only
//! adds to the phase, so chained shifts compose exactly; the piece table is
//! rewritten (`canonical`) only when an operation needs aligned breakpoints.
//!
//! Pointwise sums and products keep closed forms where a structural
//! simplification applies (constants absorb or rescale a piece) and otherwise
//! fall back to composite closures, which still evaluate exactly at arbitrary
//! points. Composites serialize as dense samples and are marked approximate.

use std::sync::Arc;

use thiserror::Error;

use crate::profile::BumpProfile;
use crate::quad;

/// Reduce to the canonical representative in `[0, 1)`.
pub(crate) fn frac(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

#[derive(Debug, Error)]
pub enum CircleFnError {
    #[error("segment interval [{x0}, {x1}] does not fit inside [0, 1]")]
    BadInterval { x0: f64, x1: f64 },
    #[error("piece starts must begin at 0 and increase strictly inside [0, 1)")]
    BadSubdivision,
}

pub type SharedFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closed-form evaluator for one piece of the subdivision.
///
/// Parametrized kinds map the point through `u(x) = u0 + (x - start) * du`,
/// so splitting a piece (at a wrap or a refinement point) only adjusts `u0`.
#[derive(Clone)]
pub enum SegmentKind {
    /// Constant value.
    Const(f64),
    /// `offset + scale * P(u)`.
    Profile {
        profile: BumpProfile,
        u0: f64,
        du: f64,
        offset: f64,
        scale: f64,
    },
    /// `offset + scale * sqrt(v (1 - v))` with `v = amp * P(u)`.
    SqrtBump {
        profile: BumpProfile,
        u0: f64,
        du: f64,
        amp: f64,
        offset: f64,
        scale: f64,
    },
    /// Dense samples over `u` in `[0, 1]`, linearly interpolated.
    Sampled {
        values: Arc<Vec<f64>>,
        u0: f64,
        du: f64,
    },
    /// Arbitrary evaluator in canonical coordinates; produced by pointwise
    /// combinations that have no structural form.
    Composite(SharedFn),
}

impl SegmentKind {
    pub(crate) fn eval(&self, y: f64, start: f64) -> f64 {
        match self {
            SegmentKind::Const(c) => *c,
            SegmentKind::Profile {
                profile,
                u0,
                du,
                offset,
                scale,
            } => {
                let u = (u0 + (y - start) * du).clamp(0.0, 1.0);
                offset + scale * profile.eval(u)
            }
            SegmentKind::SqrtBump {
                profile,
                u0,
                du,
                amp,
                offset,
                scale,
            } => {
                let u = (u0 + (y - start) * du).clamp(0.0, 1.0);
                let v = amp * profile.eval(u);
                offset + scale * (v * (1.0 - v)).max(0.0).sqrt()
            }
            SegmentKind::Sampled { values, u0, du } => {
                let u = (u0 + (y - start) * du).clamp(0.0, 1.0);
                let n = values.len();
                if n == 1 {
                    return values[0];
                }
                let t = u * (n - 1) as f64;
                let i = (t.floor() as usize).min(n - 2);
                let w = t - i as f64;
                values[i] * (1.0 - w) + values[i + 1] * w
            }
            SegmentKind::Composite(f) => f(y),
        }
    }

    /// Re-anchor the piece at a new start covering the same points.
    fn rebase(&self, old_start: f64, new_start: f64) -> SegmentKind {
        let delta = new_start - old_start;
        self.advance_u(delta)
    }

    /// Advance the parameter anchor by `delta` in x.
    fn advance_u(&self, delta: f64) -> SegmentKind {
        match self {
            SegmentKind::Profile {
                profile,
                u0,
                du,
                offset,
                scale,
            } => SegmentKind::Profile {
                profile: profile.clone(),
                u0: u0 + delta * du,
                du: *du,
                offset: *offset,
                scale: *scale,
            },
            SegmentKind::SqrtBump {
                profile,
                u0,
                du,
                amp,
                offset,
                scale,
            } => SegmentKind::SqrtBump {
                profile: profile.clone(),
                u0: u0 + delta * du,
                du: *du,
                amp: *amp,
                offset: *offset,
                scale: *scale,
            },
            SegmentKind::Sampled { values, u0, du } => SegmentKind::Sampled {
                values: values.clone(),
                u0: u0 + delta * du,
                du: *du,
            },
            other => other.clone(),
        }
    }

    /// `mul * self + add`, exactly where the kind allows it.
    fn scale_add(&self, mul: f64, add: f64) -> SegmentKind {
        match self {
            SegmentKind::Const(c) => SegmentKind::Const(mul * c + add),
            SegmentKind::Profile {
                profile,
                u0,
                du,
                offset,
                scale,
            } => SegmentKind::Profile {
                profile: profile.clone(),
                u0: *u0,
                du: *du,
                offset: mul * offset + add,
                scale: mul * scale,
            },
            SegmentKind::SqrtBump {
                profile,
                u0,
                du,
                amp,
                offset,
                scale,
            } => SegmentKind::SqrtBump {
                profile: profile.clone(),
                u0: *u0,
                du: *du,
                amp: *amp,
                offset: mul * offset + add,
                scale: mul * scale,
            },
            SegmentKind::Sampled { values, u0, du } => SegmentKind::Sampled {
                values: Arc::new(values.iter().map(|v| mul * v + add).collect()),
                u0: *u0,
                du: *du,
            },
            SegmentKind::Composite(f) => {
                let f = f.clone();
                SegmentKind::Composite(Arc::new(move |y| mul * f(y) + add))
            }
        }
    }

    fn as_const(&self) -> Option<f64> {
        match self {
            SegmentKind::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_exact(&self) -> bool {
        !matches!(self, SegmentKind::Composite(_))
    }

    fn integral(&self, start: f64, end: f64) -> f64 {
        let len = end - start;
        if len <= 0.0 {
            return 0.0;
        }
        match self {
            SegmentKind::Const(c) => c * len,
            SegmentKind::Profile {
                profile,
                u0,
                du,
                offset,
                scale,
            } => {
                let u1 = u0 + len * du;
                if let (Some(f1), Some(f0)) =
                    (profile.antiderivative(u1), profile.antiderivative(*u0))
                {
                    offset * len + scale * (f1 - f0) / du
                } else {
                    quad::adaptive(&|y| self.eval(y, start), start, end, 1e-12)
                }
            }
            _ => quad::adaptive(&|y| self.eval(y, start), start, end, 1e-12),
        }
    }
}

impl std::fmt::Debug for SegmentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SegmentKind::Const(c) => write!(f, "Const({c})"),
            SegmentKind::Profile {
                profile,
                u0,
                du,
                offset,
                scale,
            } => write!(
                f,
                "Profile({:?}, u0={u0}, du={du}, offset={offset}, scale={scale})",
                profile
            ),
            SegmentKind::SqrtBump {
                profile,
                u0,
                du,
                amp,
                offset,
                scale,
            } => write!(
                f,
                "SqrtBump({:?}, u0={u0}, du={du}, amp={amp}, offset={offset}, scale={scale})",
                profile
            ),
            SegmentKind::Sampled { values, .. } => write!(f, "Sampled({} values)", values.len()),
            SegmentKind::Composite(_) => f.write_str("Composite(..)"),
        }
    }
}

/// One piece of the subdivision: evaluator valid on `[start, next_start)`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub start: f64,
    pub kind: SegmentKind,
}

/// A piecewise function on `R/Z` with exact pointwise evaluation.
///
/// Immutable after construction; every operation returns a new value, so
/// instances are safe to share and send across threads.
#[derive(Clone, Debug)]
pub struct CircleFunction {
    /// Pieces in canonical coordinates, starts strictly increasing, first at 0.
    pieces: Vec<Piece>,
    /// Lazy shift: the value at `x` is the canonical value at `frac(x + phase)`.
    phase: f64,
}

fn piece_index(pieces: &[Piece], y: f64) -> usize {
    match pieces.binary_search_by(|p| p.start.total_cmp(&y)) {
        Ok(i) => i,
        Err(0) => pieces.len() - 1, // wrap guard; canonical tables start at 0
        Err(i) => i - 1,
    }
}

impl CircleFunction {
    pub fn constant(c: f64) -> Self {
        CircleFunction {
            pieces: vec![Piece {
                start: 0.0,
                kind: SegmentKind::Const(c),
            }],
            phase: 0.0,
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// Function assembled from `(start, kind)` pairs tiling `[0, 1)`.
    pub fn from_pieces(parts: Vec<(f64, SegmentKind)>) -> Result<Self, CircleFnError> {
        if parts.is_empty() {
            return Err(CircleFnError::BadSubdivision);
        }
        let mut pieces: Vec<Piece> = parts
            .into_iter()
            .map(|(start, kind)| Piece { start, kind })
            .collect();
        pieces.sort_by(|a, b| a.start.total_cmp(&b.start));
        // drop zero-length pieces (a later piece starting at the same point wins)
        let mut dedup: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if let Some(last) = dedup.last() {
                if last.start == p.start {
                    dedup.pop();
                }
            }
            dedup.push(p);
        }
        if dedup[0].start != 0.0 || dedup.iter().any(|p| !(0.0..1.0).contains(&p.start)) {
            return Err(CircleFnError::BadSubdivision);
        }
        Ok(CircleFunction {
            pieces: dedup,
            phase: 0.0,
        })
    }

    fn on_interval(x0: f64, eps: f64, kind: SegmentKind) -> Result<Self, CircleFnError> {
        if !(eps > 0.0) || x0 < 0.0 || x0 + eps > 1.0 {
            return Err(CircleFnError::BadInterval { x0, x1: x0 + eps });
        }
        let mut parts = Vec::new();
        if x0 > 0.0 {
            parts.push((0.0, SegmentKind::Const(0.0)));
        }
        parts.push((x0, kind));
        if x0 + eps < 1.0 {
            parts.push((x0 + eps, SegmentKind::Const(0.0)));
        }
        Self::from_pieces(parts)
    }

    /// `P((x - x0)/eps)` on `[x0, x0 + eps]`, zero elsewhere.
    pub fn ramp_up(profile: &BumpProfile, x0: f64, eps: f64) -> Result<Self, CircleFnError> {
        Self::on_interval(
            x0,
            eps,
            SegmentKind::Profile {
                profile: profile.clone(),
                u0: 0.0,
                du: 1.0 / eps,
                offset: 0.0,
                scale: 1.0,
            },
        )
    }

    /// `1 - P((x - x0)/eps)` on `[x0, x0 + eps]`, zero elsewhere.
    pub fn ramp_down(profile: &BumpProfile, x0: f64, eps: f64) -> Result<Self, CircleFnError> {
        Self::on_interval(
            x0,
            eps,
            SegmentKind::Profile {
                profile: profile.clone(),
                u0: 0.0,
                du: 1.0 / eps,
                offset: 1.0,
                scale: -1.0,
            },
        )
    }

    /// `sqrt(d (1 - d))` with `d = P((x - x0)/eps)` on `[x0, x0 + eps]`,
    /// zero elsewhere.
    pub fn sqrt_bump(profile: &BumpProfile, x0: f64, eps: f64) -> Result<Self, CircleFnError> {
        Self::on_interval(
            x0,
            eps,
            SegmentKind::SqrtBump {
                profile: profile.clone(),
                u0: 0.0,
                du: 1.0 / eps,
                amp: 1.0,
                offset: 0.0,
                scale: 1.0,
            },
        )
    }

    /// Single-piece function backed by a closure of the circle coordinate.
    pub fn from_closure(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CircleFunction {
            pieces: vec![Piece {
                start: 0.0,
                kind: SegmentKind::Composite(Arc::new(f)),
            }],
            phase: 0.0,
        }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let y = frac(x + self.phase);
        let i = piece_index(&self.pieces, y);
        self.pieces[i].kind.eval(y, self.pieces[i].start)
    }

    /// `g(x) = f(x + s)`. Pure phase bookkeeping: chained shifts compose
    /// exactly and a shift followed by its inverse is the identity bitwise.
    pub fn shift(&self, s: f64) -> Self {
        CircleFunction {
            pieces: self.pieces.clone(),
            phase: self.phase + s,
        }
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Pieces in canonical coordinates (apply `phase` to map to absolute x).
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Rewrite with phase 0: breakpoints move to absolute positions and a
    /// piece straddling the wrap splits in two.
    pub fn canonical(&self) -> Self {
        if self.phase == 0.0 {
            return self.clone();
        }
        let phi = self.phase;
        let whole = Arc::new(self.clone());
        let n = self.pieces.len();
        let mut out: Vec<Piece> = Vec::with_capacity(n + 1);
        for (i, p) in self.pieces.iter().enumerate() {
            let end = if i + 1 < n {
                self.pieces[i + 1].start
            } else {
                1.0
            };
            let len = end - p.start;
            if len <= 0.0 {
                continue;
            }
            let kind = match &p.kind {
                SegmentKind::Composite(_) => {
                    let w = whole.clone();
                    SegmentKind::Composite(Arc::new(move |y| w.evaluate(y)))
                }
                k => k.clone(),
            };
            let a = frac(p.start - phi);
            if a + len > 1.0 + 1e-15 {
                // piece wraps past 1: split at the seam
                out.push(Piece {
                    start: a,
                    kind: kind.advance_u(0.0),
                });
                out.push(Piece {
                    start: 0.0,
                    kind: kind.advance_u(1.0 - a),
                });
            } else {
                out.push(Piece { start: a, kind });
            }
        }
        out.sort_by(|a, b| a.start.total_cmp(&b.start));
        let mut dedup: Vec<Piece> = Vec::with_capacity(out.len());
        for p in out {
            if let Some(last) = dedup.last() {
                if last.start == p.start {
                    dedup.pop();
                }
            }
            dedup.push(p);
        }
        CircleFunction {
            pieces: dedup,
            phase: 0.0,
        }
    }

    /// Absolute breakpoint positions, sorted, in `[0, 1)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        if self.phase == 0.0 {
            self.pieces.iter().map(|p| p.start).collect()
        } else {
            self.canonical().breakpoints()
        }
    }

    /// True when every piece is the exact constant zero.
    pub fn is_structurally_zero(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| matches!(p.kind, SegmentKind::Const(c) if c == 0.0))
    }

    /// True when no piece is a composite closure (serializes exactly).
    pub fn is_exact(&self) -> bool {
        self.pieces.iter().all(|p| p.kind.is_exact())
    }

    /// `add + mul * f`, exact on every structural piece.
    pub fn affine(&self, add: f64, mul: f64) -> Self {
        CircleFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    start: p.start,
                    kind: p.kind.scale_add(mul, add),
                })
                .collect(),
            phase: self.phase,
        }
    }

    pub fn pointwise_scale(&self, c: f64) -> Self {
        self.affine(0.0, c)
    }

    pub fn pointwise_add(&self, other: &Self) -> Self {
        combine(self, other, CombineOp::Add)
    }

    pub fn pointwise_sub(&self, other: &Self) -> Self {
        combine(self, other, CombineOp::Sub)
    }

    pub fn pointwise_mul(&self, other: &Self) -> Self {
        combine(self, other, CombineOp::Mul)
    }

    /// Integral over one period. Independent of the phase, so it is exactly
    /// invariant under `shift`.
    pub fn integrate(&self) -> f64 {
        let n = self.pieces.len();
        let mut total = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            let end = if i + 1 < n {
                self.pieces[i + 1].start
            } else {
                1.0
            };
            total += p.kind.integral(p.start, end);
        }
        total
    }

    /// Max of `|f|` over a per-segment grid that includes all breakpoints.
    /// A lower bound on the true sup-norm; `samples` is per segment, min 2.
    pub fn sup_norm(&self, samples: usize) -> f64 {
        let s = samples.max(2);
        let n = self.pieces.len();
        let mut best = 0.0_f64;
        for (i, p) in self.pieces.iter().enumerate() {
            let end = if i + 1 < n {
                self.pieces[i + 1].start
            } else {
                1.0
            };
            for j in 0..s {
                let y = p.start + (end - p.start) * j as f64 / (s - 1) as f64;
                best = best.max(p.kind.eval(y, p.start).abs());
            }
        }
        best
    }

    /// Max of `|f|` over roughly `per_unit` points per unit length of each
    /// piece (min 3 per piece), plus the breakpoints themselves.
    pub fn sup_norm_dense(&self, per_unit: usize) -> f64 {
        let n = self.pieces.len();
        let mut best = 0.0_f64;
        for (i, p) in self.pieces.iter().enumerate() {
            let end = if i + 1 < n {
                self.pieces[i + 1].start
            } else {
                1.0
            };
            let len = end - p.start;
            let s = (((len * per_unit as f64).ceil() as usize) + 1).max(3);
            for j in 0..s {
                let y = p.start + len * j as f64 / (s - 1) as f64;
                best = best.max(p.kind.eval(y, p.start).abs());
            }
        }
        best
    }

    /// Max of `|self - other|` over a uniform grid of `per_unit` points
    /// joined with both functions' breakpoints.
    pub fn max_abs_diff(&self, other: &Self, per_unit: usize) -> f64 {
        let mut xs: Vec<f64> = (0..per_unit).map(|i| i as f64 / per_unit as f64).collect();
        xs.extend(self.breakpoints());
        xs.extend(other.breakpoints());
        xs.iter()
            .map(|&x| (self.evaluate(x) - other.evaluate(x)).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
enum CombineOp {
    Add,
    Sub,
    Mul,
}

fn combine(f: &CircleFunction, g: &CircleFunction, op: CombineOp) -> CircleFunction {
    let fc = f.canonical();
    let gc = g.canonical();
    let mut starts: Vec<f64> = fc
        .pieces
        .iter()
        .chain(gc.pieces.iter())
        .map(|p| p.start)
        .collect();
    starts.sort_by(f64::total_cmp);
    starts.dedup();

    // Shared fallback closure, built once.
    let fa = Arc::new(fc.clone());
    let ga = Arc::new(gc.clone());
    let fallback: SharedFn = match op {
        CombineOp::Add => Arc::new(move |y| fa.evaluate(y) + ga.evaluate(y)),
        CombineOp::Sub => Arc::new(move |y| fa.evaluate(y) - ga.evaluate(y)),
        CombineOp::Mul => Arc::new(move |y| fa.evaluate(y) * ga.evaluate(y)),
    };

    let m = starts.len();
    let mut pieces = Vec::with_capacity(m);
    for (i, &lo) in starts.iter().enumerate() {
        let hi = if i + 1 < m { starts[i + 1] } else { 1.0 };
        let mid = lo + 0.5 * (hi - lo);
        let pf = &fc.pieces[piece_index(&fc.pieces, mid)];
        let pg = &gc.pieces[piece_index(&gc.pieces, mid)];
        let kf = pf.kind.rebase(pf.start, lo);
        let kg = pg.kind.rebase(pg.start, lo);
        let kind = match (op, kf.as_const(), kg.as_const()) {
            (CombineOp::Add, Some(a), Some(b)) => SegmentKind::Const(a + b),
            (CombineOp::Sub, Some(a), Some(b)) => SegmentKind::Const(a - b),
            (CombineOp::Mul, Some(a), Some(b)) => SegmentKind::Const(a * b),
            (CombineOp::Add, Some(a), None) => kg.scale_add(1.0, a),
            (CombineOp::Add, None, Some(b)) => kf.scale_add(1.0, b),
            (CombineOp::Sub, None, Some(b)) => kf.scale_add(1.0, -b),
            (CombineOp::Sub, Some(a), None) => kg.scale_add(-1.0, a),
            (CombineOp::Mul, Some(a), None) => {
                if a == 0.0 {
                    SegmentKind::Const(0.0)
                } else {
                    kg.scale_add(a, 0.0)
                }
            }
            (CombineOp::Mul, None, Some(b)) => {
                if b == 0.0 {
                    SegmentKind::Const(0.0)
                } else {
                    kf.scale_add(b, 0.0)
                }
            }
            _ => SegmentKind::Composite(fallback.clone()),
        };
        pieces.push(Piece { start: lo, kind });
    }
    CircleFunction { pieces, phase: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smoothstep() -> BumpProfile {
        BumpProfile::Smoothstep
    }

    #[test]
    fn constant_evaluation() {
        assert_eq!(CircleFunction::one().evaluate(0.3), 1.0);
        assert_eq!(CircleFunction::zero().evaluate(0.99), 0.0);
    }

    #[test]
    fn linear_ramp_midpoint() {
        let f = CircleFunction::ramp_up(&BumpProfile::Linear, 0.0, 0.1).unwrap();
        assert!((f.evaluate(0.05) - 0.5).abs() < 1e-15);
        assert_eq!(f.evaluate(0.5), 0.0);
    }

    #[test]
    fn sqrt_bump_midpoint_is_half() {
        // sqrt(d(1-d)) with d = 0.5
        let f = CircleFunction::sqrt_bump(&BumpProfile::Linear, 0.0, 0.1).unwrap();
        assert!((f.evaluate(0.05) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn shift_is_exact_group_action() {
        let f = CircleFunction::ramp_up(&smoothstep(), 0.2, 0.3).unwrap();
        let a = 0.7368921;
        let b = -1.4142;
        let lhs = f.shift(a).shift(b);
        let rhs = f.shift(a + b);
        for i in 0..1000 {
            let x = i as f64 / 1000.0;
            assert_eq!(lhs.evaluate(x), rhs.evaluate(x));
        }
    }

    #[test]
    fn shift_round_trip_is_identity() {
        let f = CircleFunction::sqrt_bump(&smoothstep(), 0.13, 0.21).unwrap();
        let g = f.shift(0.377).shift(-0.377);
        for i in 0..1000 {
            let x = i as f64 / 999.0;
            assert_eq!(f.evaluate(x), g.evaluate(x));
        }
    }

    #[test]
    fn shift_of_constant_is_constant() {
        let f = CircleFunction::one().shift(0.37);
        for i in 0..100 {
            assert_eq!(f.evaluate(i as f64 / 100.0), 1.0);
        }
    }

    #[test]
    fn canonical_matches_phased_evaluation() {
        let f = CircleFunction::ramp_up(&smoothstep(), 0.6, 0.3)
            .unwrap()
            .shift(0.55);
        let c = f.canonical();
        assert_eq!(c.phase(), 0.0);
        for i in 0..2000 {
            let x = i as f64 / 2000.0;
            assert!((f.evaluate(x) - c.evaluate(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn mul_by_zero_absorbs() {
        let f = CircleFunction::ramp_up(&smoothstep(), 0.1, 0.5).unwrap();
        let p = CircleFunction::zero().pointwise_mul(&f);
        assert!(p.is_structurally_zero());
    }

    #[test]
    fn additive_inverse_is_pointwise_zero() {
        let f = CircleFunction::sqrt_bump(&smoothstep(), 0.2, 0.4).unwrap();
        let z = f.pointwise_add(&f.pointwise_scale(-1.0));
        for i in 0..500 {
            assert_eq!(z.evaluate(i as f64 / 500.0), 0.0);
        }
    }

    #[test]
    fn scaled_ramp_midpoint() {
        let eps = 0.3;
        let f = CircleFunction::ramp_up(&BumpProfile::Linear, 0.0, eps).unwrap();
        let g = f.pointwise_mul(&CircleFunction::constant(2.0));
        assert!((g.evaluate(eps / 2.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn integrate_constant_and_triangle() {
        assert!((CircleFunction::one().integrate() - 1.0).abs() < 1e-12);
        let tri = CircleFunction::ramp_up(&BumpProfile::Linear, 0.0, 0.2).unwrap();
        assert!((tri.integrate() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn integral_is_shift_invariant() {
        let f = CircleFunction::ramp_down(&BumpProfile::Cosine, 0.4, 0.25).unwrap();
        let base = f.integrate();
        for s in [0.1, 0.37, 0.925, -2.3] {
            assert_eq!(f.shift(s).integrate(), base);
            // invariance also survives materialization
            assert!((f.shift(s).canonical().integrate() - base).abs() < 2e-10);
        }
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(CircleFunction::zero().sup_norm(100), 0.0);
        assert_eq!(CircleFunction::constant(-0.5).sup_norm(100), 0.5);
        let f = CircleFunction::sqrt_bump(&BumpProfile::Linear, 0.0, 0.1).unwrap();
        assert!((f.sup_norm(1000) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn profile_halves_integrate_to_interval_length() {
        for profile in [
            BumpProfile::Linear,
            BumpProfile::Smoothstep,
            BumpProfile::Cosine,
        ] {
            for eps in [0.05, 0.2, 0.618] {
                let up = CircleFunction::ramp_up(&profile, 0.0, eps).unwrap();
                let down = CircleFunction::ramp_down(&profile, 0.0, eps).unwrap();
                let total = up.integrate() + down.integrate();
                assert!(
                    (total - eps).abs() < 1e-10,
                    "{:?} eps={eps}: {total}",
                    profile
                );
            }
        }
    }

    #[test]
    fn continuity_at_breakpoints() {
        let f = CircleFunction::from_pieces(vec![
            (
                0.0,
                SegmentKind::Profile {
                    profile: BumpProfile::Smoothstep,
                    u0: 0.0,
                    du: 10.0,
                    offset: 0.0,
                    scale: 1.0,
                },
            ),
            (0.1, SegmentKind::Const(1.0)),
            (
                0.5,
                SegmentKind::Profile {
                    profile: BumpProfile::Smoothstep,
                    u0: 0.0,
                    du: 10.0,
                    offset: 1.0,
                    scale: -1.0,
                },
            ),
            (0.6, SegmentKind::Const(0.0)),
        ])
        .unwrap();
        let delta = 1e-8;
        for b in f.breakpoints() {
            let jump = (f.evaluate(b - delta) - f.evaluate(b + delta)).abs();
            assert!(jump < 1e-6, "jump {jump} at {b}");
        }
    }

    #[test]
    fn wrap_splitting_keeps_values() {
        // ramp on [0.8, 1.1) via shift, then canonicalize
        let f = CircleFunction::ramp_up(&smoothstep(), 0.0, 0.3)
            .unwrap()
            .shift(-0.8);
        let c = f.canonical();
        assert_eq!(c.pieces()[0].start, 0.0);
        for i in 0..3000 {
            let x = i as f64 / 3000.0;
            assert!((f.evaluate(x) - c.evaluate(x)).abs() < 1e-13);
        }
    }
}
