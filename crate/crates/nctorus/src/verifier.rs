//! Residual checks of the defining equations, trace and K0 labeling, and a
//! representation-based idempotency oracle.
//!
//! The equation checks build each residual as a circle function through the
//! coefficient arithmetic and take its sup over a dense grid that contains
//! every breakpoint. The oracle instead lets the element act on smooth test
//! functions through pointwise evaluation and shifts only, so the two code
//! paths share nothing past the element itself.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{k0_from_trace, K0Class, K0Error, TorusElement};
use crate::circlefn::{frac, CircleFunction};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("element is not in base form: {0}")]
    NotPowerRieffelForm(String),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// residual tolerance for the pass verdict
    pub tol: f64,
    /// sample density per unit interval (breakpoints are always included)
    pub samples: usize,
    pub oracle_trials: usize,
    pub oracle_probes: usize,
    /// seed fixing the oracle test-function phases and probe points
    pub seed: u64,
    /// sup-norm threshold deciding whether a band counts as nonzero
    pub order_tol: f64,
    pub k0_max_coeff: i64,
    pub k0_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tol: 1e-9,
            samples: 4096,
            oracle_trials: 100,
            oracle_probes: 100,
            seed: 0x6e63746f,
            order_tol: 1e-12,
            k0_max_coeff: 20,
            k0_tol: 1e-6,
        }
    }
}

/// Per-equation residuals and derived invariants of one element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub residual_selfadjoint: f64,
    pub residual_idempotent_in_band: f64,
    pub residual_idempotent_overflow: f64,
    #[serde(rename = "residual_eqK")]
    pub residual_eq_k: f64,
    #[serde(rename = "residual_eq0")]
    pub residual_eq_0: f64,
    pub oracle_residual: Option<f64>,
    pub trace: f64,
    pub k0: Option<K0Class>,
    pub order: i32,
    pub pass: bool,
    pub tolerance: f64,
    pub samples: usize,
    pub oracle_trials: usize,
    pub oracle_probes: usize,
    pub oracle_seed: u64,
}

/// Max over bands and points of `|p_k(x) - p_{-k}(x + k*theta)|`.
pub fn check_selfadjoint(p: &TorusElement, samples: usize) -> f64 {
    let theta = p.theta();
    let m = p.order_bound();
    let mut worst = 0.0_f64;
    for k in -m..=m {
        let lhs = p.coeff(k);
        let rhs = p.coeff(-k).shift(k as f64 * theta);
        worst = worst.max(lhs.pointwise_sub(&rhs).sup_norm_dense(samples));
    }
    worst
}

/// Residuals of the idempotency equations: within the original bands,
/// `sup |(p^2)_k - p_k|` for `|k| <= M`; beyond them, `sup |(p^2)_k|` for
/// `M < |k| <= 2M`. The product is always expanded up to order `2M`.
pub fn check_idempotent(p: &TorusElement, samples: usize) -> (f64, f64) {
    let q = p.multiply(p).expect("same theta");
    let m = p.order_bound();
    let mut in_band = 0.0_f64;
    let mut overflow = 0.0_f64;
    for k in -2 * m..=2 * m {
        let qk = q.coeff_ref(k);
        let pk = p.coeff_ref(k);
        if qk.is_none() && pk.is_none() {
            continue;
        }
        let residual = q
            .coeff(k)
            .pointwise_sub(&p.coeff(k))
            .sup_norm_dense(samples);
        if k.abs() <= m {
            in_band = in_band.max(residual);
        } else {
            overflow = overflow.max(residual);
        }
    }
    (in_band, overflow)
}

/// Residuals of the split-form conditions: for each band `k = 1..M`,
/// `sup |p_k(x) (p_0(x) + p_0(x + k*theta) - 1)|`, and the zero-band sum
/// `sup |sum_k [p_k^2(x - k*theta) + p_k^2(x)] + p_0(x)(p_0(x) - 1)|`.
pub fn check_split_conditions(p: &TorusElement, samples: usize) -> (f64, f64) {
    let theta = p.theta();
    let m = p.order_bound();
    let p0 = p.coeff(0);
    let minus_one = CircleFunction::constant(-1.0);

    let mut eq_k = 0.0_f64;
    for k in 1..=m {
        let pk = p.coeff(k);
        if pk.is_structurally_zero() {
            continue;
        }
        let bracket = p0
            .pointwise_add(&p0.shift(k as f64 * theta))
            .pointwise_add(&minus_one);
        eq_k = eq_k.max(pk.pointwise_mul(&bracket).sup_norm_dense(samples));
    }

    let mut sum = p0.pointwise_mul(&p0.pointwise_add(&minus_one));
    for k in 1..=m {
        let pk = p.coeff(k);
        if pk.is_structurally_zero() {
            continue;
        }
        let shifted = pk.shift(-(k as f64) * theta);
        sum = sum
            .pointwise_add(&pk.pointwise_mul(&pk))
            .pointwise_add(&shifted.pointwise_mul(&shifted));
    }
    (eq_k, sum.sup_norm_dense(samples))
}

/// Residual of the base-form equations for an element with bands `{0, +-M}`
/// only: the order-`M` self-product, the zero-band sum, and the bracket
/// condition. Elements with intermediate bands are rejected.
pub fn check_power_rieffel(p: &TorusElement, samples: usize, tol: f64) -> Result<f64, VerifyError> {
    let m = p.order(tol);
    if m == 0 {
        return Err(VerifyError::NotPowerRieffelForm(
            "order 0: no top band to check".into(),
        ));
    }
    for (k, f) in p.bands() {
        if k != 0 && k.abs() != m && f.sup_norm(64) > tol {
            return Err(VerifyError::NotPowerRieffelForm(format!(
                "intermediate band {k} is nonzero"
            )));
        }
    }
    let theta = p.theta();
    let mt = m as f64 * theta;
    let p0 = p.coeff(0);
    let pm = p.coeff(m);
    let minus_one = CircleFunction::constant(-1.0);

    let r1 = pm.shift(mt).pointwise_mul(&pm).sup_norm_dense(samples);
    let shifted = pm.shift(-mt);
    let r2 = pm
        .pointwise_mul(&pm)
        .pointwise_add(&shifted.pointwise_mul(&shifted))
        .pointwise_add(&p0.pointwise_mul(&p0.pointwise_add(&minus_one)))
        .sup_norm_dense(samples);
    let bracket = CircleFunction::one()
        .pointwise_sub(&p0)
        .pointwise_sub(&p0.shift(mt));
    let r3 = pm.pointwise_mul(&bracket).sup_norm_dense(samples);
    Ok(r1.max(r2).max(r3))
}

/// K0 label of a projection from its trace.
pub fn k0_class(p: &TorusElement, max_coeff: i64, tol: f64) -> Result<K0Class, K0Error> {
    k0_from_trace(p.trace(), p.theta(), max_coeff, tol)
}

fn smooth_bump(y: f64) -> f64 {
    let y = frac(y);
    if y <= 0.0 || y >= 1.0 {
        return 0.0;
    }
    let w = y * (1.0 - y);
    (4.0 - 1.0 / w).exp()
}

/// Max over trials and probes of `|(p(p xi))(x) - (p xi)(x)|`, where the
/// element acts on a test function by
/// `(p xi)(x) = sum_m p_m(x - m*theta) xi(x - m*theta)`.
///
/// Pure pointwise evaluation and shifts; independent of the coefficient
/// convolution used by [`check_idempotent`].
pub fn oracle_idempotency(p: &TorusElement, trials: usize, probes: usize, seed: u64) -> f64 {
    let theta = p.theta();
    let bands: Vec<(f64, CircleFunction)> = p
        .bands()
        .map(|(k, f)| (k as f64 * theta, f.clone()))
        .collect();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for trial in 0..trials {
        let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let j = (trial % 6 + 1) as f64;
        let use_bump = trial % 6 == 5;
        let xi = move |x: f64| -> f64 {
            if use_bump {
                smooth_bump(x)
            } else {
                (std::f64::consts::TAU * j * x + phase).sin()
            }
        };
        let p_xi = |x: f64| -> f64 {
            bands
                .iter()
                .map(|(sh, f)| f.evaluate(x - sh) * xi(x - sh))
                .sum()
        };
        let pp_xi = |x: f64| -> f64 {
            bands
                .iter()
                .map(|(sh, f)| f.evaluate(x - sh) * p_xi(x - sh))
                .sum()
        };
        for _ in 0..probes {
            let x: f64 = rng.random();
            worst = worst.max((pp_xi(x) - p_xi(x)).abs());
        }
    }
    worst
}

/// Run every check and assemble the report. The verdict compares the five
/// equation residuals against `config.tol`; the oracle residual is reported
/// alongside as an independent cross-check.
pub fn verify(p: &TorusElement, config: &VerifyConfig) -> VerificationReport {
    let residual_selfadjoint = check_selfadjoint(p, config.samples);
    let (residual_idempotent_in_band, residual_idempotent_overflow) =
        check_idempotent(p, config.samples);
    let (residual_eq_k, residual_eq_0) = check_split_conditions(p, config.samples);
    let trace = p.trace();
    let order = p.order(config.order_tol);
    let k0 = k0_from_trace(trace, p.theta(), config.k0_max_coeff, config.k0_tol).ok();
    let oracle_residual = if config.oracle_trials > 0 {
        Some(oracle_idempotency(
            p,
            config.oracle_trials,
            config.oracle_probes,
            config.seed,
        ))
    } else {
        None
    };
    let tol = config.tol;
    let pass = residual_selfadjoint <= tol
        && residual_idempotent_in_band <= tol
        && residual_idempotent_overflow <= tol
        && residual_eq_k <= tol
        && residual_eq_0 <= tol;
    VerificationReport {
        residual_selfadjoint,
        residual_idempotent_in_band,
        residual_idempotent_overflow,
        residual_eq_k,
        residual_eq_0,
        oracle_residual,
        trace,
        k0,
        order,
        pass,
        tolerance: tol,
        samples: config.samples,
        oracle_trials: config.oracle_trials,
        oracle_probes: config.oracle_probes,
        oracle_seed: config.seed,
    }
}
