//! Elements of the rotation algebra A_theta as finite sums of bands.
//!
//! An element is stored as its coefficient functions `p_k` for finitely many
//! integer bands `k`; the generators satisfy `VU = e^{2 pi i theta} UV`, which
//! turns multiplication into the twisted rule
//!
//! ```text
//! (ab)_k(x) = sum over m + j = k of a_m(x + j*theta) * b_j(x)
//! ```
//!
//! The canonical trace integrates the zeroth coefficient over one period and
//! labels the K0 class of a projection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circlefn::CircleFunction;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("theta mismatch: {0} vs {1} (elements live in different algebras)")]
    ThetaMismatch(f64, f64),
}

/// K0 class labeled by the trace value `m + n*theta` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Class {
    pub m: i64,
    pub n: i64,
}

impl K0Class {
    pub fn trace_value(&self, theta: f64) -> f64 {
        self.m as f64 + self.n as f64 * theta
    }
}

#[derive(Debug, Error)]
pub enum K0Error {
    #[error("no K0 label (m, n) with |m|, |n| <= {max_coeff} matches trace {trace} within {tol}")]
    NoClassFound {
        trace: f64,
        max_coeff: i64,
        tol: f64,
    },
    #[error("ambiguous K0 label near trace {trace}: ({0}, {1}) and ({2}, {3}) are separated by less than {sep}", .candidates.0.m, .candidates.0.n, .candidates.1.m, .candidates.1.n)]
    AmbiguousClass {
        trace: f64,
        candidates: (K0Class, K0Class),
        sep: f64,
    },
}

/// Finite sum `a = sum_k U^k a_k(V)` with real coefficient functions.
///
/// Immutable; all operations are pure and safe to run concurrently.
#[derive(Clone, Debug)]
pub struct TorusElement {
    theta: f64,
    coeffs: BTreeMap<i32, CircleFunction>,
}

impl TorusElement {
    /// Build an element, dropping structurally-zero coefficients and storing
    /// every remaining one in canonical (phase-0) form.
    pub fn new(theta: f64, coeffs: BTreeMap<i32, CircleFunction>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(_, f)| !f.is_structurally_zero())
            .map(|(k, f)| (k, f.canonical()))
            .collect();
        TorusElement { theta, coeffs }
    }

    pub fn zero(theta: f64) -> Self {
        TorusElement {
            theta,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(theta: f64) -> Self {
        Self::monomial(theta, 0, CircleFunction::one())
    }

    /// `U^k f(V)`.
    pub fn monomial(theta: f64, k: i32, f: CircleFunction) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, f);
        Self::new(theta, coeffs)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Largest `|k|` carrying a stored coefficient (0 for scalars).
    pub fn order_bound(&self) -> i32 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn bands(&self) -> impl Iterator<Item = (i32, &CircleFunction)> {
        self.coeffs.iter().map(|(k, f)| (*k, f))
    }

    pub fn coeff_ref(&self, k: i32) -> Option<&CircleFunction> {
        self.coeffs.get(&k)
    }

    /// Coefficient at band `k`; the zero function when absent.
    pub fn coeff(&self, k: i32) -> CircleFunction {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(CircleFunction::zero)
    }

    /// Replace one band (used to build deliberately corrupted elements).
    pub fn with_coeff(&self, k: i32, f: CircleFunction) -> Self {
        let mut coeffs = self.coeffs.clone();
        if f.is_structurally_zero() {
            coeffs.remove(&k);
        } else {
            coeffs.insert(k, f.canonical());
        }
        TorusElement {
            theta: self.theta,
            coeffs,
        }
    }

    fn check_theta(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.theta.to_bits() != other.theta.to_bits() {
            return Err(AlgebraError::ThetaMismatch(self.theta, other.theta));
        }
        Ok(())
    }

    /// Twisted product; the result's order bound is at most the sum of the
    /// operands' bounds.
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_theta(other)?;
        let theta = self.theta;
        let mut acc: BTreeMap<i32, CircleFunction> = BTreeMap::new();
        for (&m, fm) in &self.coeffs {
            for (&j, gj) in &other.coeffs {
                let term = fm.shift(j as f64 * theta).pointwise_mul(gj);
                acc.entry(m + j)
                    .and_modify(|f| *f = f.pointwise_add(&term))
                    .or_insert(term);
            }
        }
        Ok(Self::new(theta, acc))
    }

    /// Involution: `(a*)_k(x) = conj(a_{-k}(x + k*theta))`; conjugation is the
    /// identity for the real coefficients used here.
    pub fn adjoint(&self) -> Self {
        let theta = self.theta;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&j, f)| (-j, f.shift(-(j as f64) * theta)))
            .collect();
        Self::new(theta, coeffs)
    }

    /// Canonical trace: integral of the zeroth coefficient.
    pub fn trace(&self) -> f64 {
        self.coeffs.get(&0).map(|f| f.integrate()).unwrap_or(0.0)
    }

    /// Largest `|k|` whose coefficient exceeds `tol` in sup-norm.
    pub fn order(&self, tol: f64) -> i32 {
        self.coeffs
            .iter()
            .filter(|(_, f)| f.sup_norm(64) > tol)
            .map(|(k, _)| k.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_theta(other)?;
        let mut coeffs = self.coeffs.clone();
        for (&k, g) in &other.coeffs {
            coeffs
                .entry(k)
                .and_modify(|f| *f = f.pointwise_add(g))
                .or_insert_with(|| g.clone());
        }
        Ok(Self::new(self.theta, coeffs))
    }

    pub fn subtract(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, f)| (k, f.pointwise_scale(c)))
            .collect();
        Self::new(self.theta, coeffs)
    }
}

/// Closest rational `p/q` with `q <= max_den`, when within `1e-12` of theta.
/// Constructions degenerate near such points because shifts by theta then
/// have a short period.
pub fn near_rational(theta: f64, max_den: u32) -> Option<(i64, u32)> {
    for q in 1..=max_den {
        let p = (theta * q as f64).round();
        if (theta - p / q as f64).abs() < 1e-12 {
            return Some((p as i64, q));
        }
    }
    None
}

/// The unique label `(m, n)` with `|m + n*theta - trace| < tol` and
/// `m + n*theta` in `[0, 1]`, searched over `|m|, |n| <= max_coeff`.
pub fn k0_from_trace(trace: f64, theta: f64, max_coeff: i64, tol: f64) -> Result<K0Class, K0Error> {
    let mut hits: Vec<(f64, K0Class)> = Vec::new();
    for n in -max_coeff..=max_coeff {
        for m in -max_coeff..=max_coeff {
            let value = m as f64 + n as f64 * theta;
            if !(-1e-12..=1.0 + 1e-12).contains(&value) {
                continue;
            }
            let residual = (value - trace).abs();
            if residual < tol {
                hits.push((value, K0Class { m, n }));
            }
        }
    }
    hits.sort_by(|a, b| (a.0 - trace).abs().total_cmp(&(b.0 - trace).abs()));
    let best = match hits.first() {
        None => {
            return Err(K0Error::NoClassFound {
                trace,
                max_coeff,
                tol,
            })
        }
        Some(h) => *h,
    };
    // a second candidate whose trace value sits within 10*tol of the best
    // one cannot be told apart numerically
    for other in hits.iter().skip(1) {
        if other.1 != best.1 && (other.0 - best.0).abs() < 10.0 * tol {
            return Err(K0Error::AmbiguousClass {
                trace,
                candidates: (best.1, other.1),
                sep: (other.0 - best.0).abs(),
            });
        }
    }
    Ok(best.1)
}
