//! Explicit projections in the noncommutative 2-torus algebra and the
//! machinery to verify them numerically.
//!
//! The algebra is generated by two unitaries with `VU = e^{2 pi i theta} UV`;
//! its elements live here as finite sums `sum_k U^k p_k(V)` over piecewise
//! circle functions ([`circlefn`], [`algebra`]). The [`builders`] module
//! constructs the classical two-band projections together with their glue,
//! cut, and bump generalisations, and [`verifier`] checks every defining
//! equation of a projection, computes the canonical trace, and labels the
//! K0 class, cross-validated by a representation-based oracle.

pub mod algebra;
pub mod builders;
pub mod circlefn;
pub mod profile;
pub(crate) mod quad;
pub mod serialize;
pub mod verifier;

pub use algebra::{k0_from_trace, near_rational, AlgebraError, K0Class, K0Error, TorusElement};
pub use builders::{
    add_bump, build, complement, cut, epsilon_feasible, glue, homotopy, power_rieffel,
    spec_warnings, BaseSpec, BuilderError, BumpBoundary, Edit, EpsilonRule, ProjectionSpec,
};
pub use circlefn::{CircleFnError, CircleFunction, Piece, SegmentKind};
pub use profile::{BumpProfile, ProfileError};
pub use serialize::{
    circlefn_from_repr, circlefn_to_repr, element_from_json, element_from_repr, element_to_json,
    element_to_repr, spec_from_json, spec_to_json, CircleFunctionRepr, ElementRepr, SerializeError,
};
pub use verifier::{
    check_idempotent, check_power_rieffel, check_selfadjoint, check_split_conditions, k0_class,
    oracle_idempotency, verify, VerificationReport, VerifyConfig, VerifyError,
};
