//! Shared fixtures for the benchmark targets.

use nctorus::{add_bump, glue, power_rieffel, BumpBoundary, BumpProfile, TorusElement};

pub fn base_projection(m: i32) -> TorusElement {
    power_rieffel(0.70710678, m, 0.02, &BumpProfile::Smoothstep).unwrap()
}

/// Order-3 projection with every band filled: glue then bumps.
pub fn rich_projection() -> TorusElement {
    let smooth = BumpProfile::Smoothstep;
    let base = power_rieffel(0.17677670, 3, 0.04, &smooth).unwrap();
    let p = add_bump(&base, 1, None, 0.03, &smooth, BumpBoundary::One, 1.0).unwrap();
    add_bump(&p, 2, None, 0.03, &smooth, BumpBoundary::One, 1.0).unwrap()
}

pub fn glued_projection() -> TorusElement {
    let smooth = BumpProfile::Smoothstep;
    let base = power_rieffel(0.28867513, 2, 0.05, &smooth).unwrap();
    glue(&base, 1, 0.05, &smooth).unwrap()
}
