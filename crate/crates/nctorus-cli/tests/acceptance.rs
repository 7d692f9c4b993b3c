//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every tolerance is pinned in the assertions below; run with
//! `cargo test -p nctorus-cli --test acceptance` (add `-- --nocapture` to
//! see the per-criterion lines on success).

use std::collections::BTreeMap;
use std::process::Command;

use nctorus::{
    build, complement, cut, glue, homotopy, oracle_idempotency, power_rieffel, verify, BaseSpec,
    BumpBoundary, BumpProfile, CircleFunction, Edit, K0Class, ProjectionSpec, TorusElement,
    VerifyConfig,
};

const TOL: f64 = 1e-9;

fn full_config() -> VerifyConfig {
    VerifyConfig {
        tol: TOL,
        ..VerifyConfig::default()
    }
}

fn equations_only() -> VerifyConfig {
    VerifyConfig {
        tol: TOL,
        oracle_trials: 0,
        ..VerifyConfig::default()
    }
}

fn smooth() -> BumpProfile {
    BumpProfile::Smoothstep
}

fn pass(criterion: u32, detail: &str) {
    println!("[acceptance] criterion {criterion}: PASS - {detail}");
}

// the five headline elements reused by criteria 6 and 8
fn element_c1() -> TorusElement {
    power_rieffel(0.70710678, 1, 0.1, &smooth()).unwrap()
}

fn element_c2_top() -> TorusElement {
    power_rieffel(0.70710678, 10, 0.02, &smooth()).unwrap()
}

fn element_c3() -> TorusElement {
    let base = power_rieffel(0.28867513, 2, 0.05, &smooth()).unwrap();
    glue(&base, 1, 0.05, &smooth()).unwrap()
}

fn element_c4() -> TorusElement {
    let base = power_rieffel(0.17677670, 3, 0.04, &smooth()).unwrap();
    cut(&base, 1, 0.04, &smooth()).unwrap()
}

fn spec_c5() -> ProjectionSpec {
    ProjectionSpec {
        theta: 0.17677670,
        base: BaseSpec {
            m: 3,
            eps: 0.04,
            profile: smooth(),
        },
        edits: vec![
            Edit::Bump {
                k: 1,
                eps: 0.03,
                delta: None,
                profile: smooth(),
                boundary: BumpBoundary::One,
            },
            Edit::Bump {
                k: 2,
                eps: 0.03,
                delta: None,
                profile: smooth(),
                boundary: BumpBoundary::One,
            },
        ],
        complement: false,
        homotopy_t: None,
    }
}

fn element_c5() -> TorusElement {
    build(&spec_c5()).unwrap()
}

fn corpus() -> Vec<(&'static str, TorusElement)> {
    vec![
        ("criterion-1 base projection", element_c1()),
        ("criterion-2 order-10 projection", element_c2_top()),
        ("criterion-3 glued projection", element_c3()),
        ("criterion-4 cut projection", element_c4()),
        ("criterion-5 bump-enriched projection", element_c5()),
    ]
}

#[test]
fn criterion_01_power_rieffel_build() {
    let theta = 0.70710678;
    let p = element_c1();
    let report = verify(&p, &full_config());
    assert!(report.pass, "{report:?}");
    assert!(
        (report.trace - theta).abs() <= TOL,
        "trace {} vs theta {theta}",
        report.trace
    );
    assert_eq!(report.k0, Some(K0Class { m: 0, n: 1 }));
    pass(
        1,
        &format!(
            "base projection verifies at 1e-9, trace = {:.9}, K0 = (0, 1)",
            report.trace
        ),
    );
}

#[test]
fn criterion_02_ten_distinct_classes() {
    let theta = 0.70710678;
    let cfg = equations_only();
    let mut traces = Vec::new();
    let mut labels = Vec::new();
    for m in 1..=10 {
        let p = power_rieffel(theta, m, 0.02, &smooth()).unwrap();
        let report = verify(&p, &cfg);
        assert!(report.pass, "M = {m}: {report:?}");
        let expect = (m as f64 * theta).fract();
        assert!(
            (report.trace - expect).abs() <= TOL,
            "M = {m}: trace {} vs frac(M*theta) {expect}",
            report.trace
        );
        traces.push(report.trace);
        labels.push(report.k0.expect("labeled"));
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..10 {
        for j in 0..i {
            min_gap = min_gap.min((traces[i] - traces[j]).abs());
            assert!(
                labels[i] != labels[j],
                "labels collide for M = {}, {}",
                i + 1,
                j + 1
            );
        }
    }
    assert!(min_gap > 1e-3, "min pairwise trace gap {min_gap}");
    pass(
        2,
        &format!("ten verified projections, min trace gap {min_gap:.6}, ten distinct labels"),
    );
}

#[test]
fn criterion_03_glue() {
    let theta = 0.28867513;
    let p = element_c3();
    let report = verify(&p, &full_config());
    assert!(report.pass, "{report:?}");
    assert!(
        (report.trace - 3.0 * theta).abs() <= TOL,
        "trace {} vs 3*theta {}",
        report.trace,
        3.0 * theta
    );
    assert_eq!(report.order, 2);
    assert!(p.coeff(1).sup_norm(256) > 1e-3, "glued band vanished");
    pass(
        3,
        &format!(
            "glued projection verifies, trace = 3*theta = {:.9}, order 2, p1 nonzero",
            report.trace
        ),
    );
}

#[test]
fn criterion_04_cut() {
    let theta = 0.17677670;
    let p = element_c4();
    let report = verify(&p, &full_config());
    assert!(report.pass, "{report:?}");
    assert!(
        (report.trace - 2.0 * theta).abs() <= TOL,
        "trace {} vs 2*theta {}",
        report.trace,
        2.0 * theta
    );
    assert_eq!(report.order, 3);
    pass(
        4,
        &format!(
            "cut projection verifies, trace = 2*theta = {:.9}, order 3",
            report.trace
        ),
    );
}

#[test]
fn criterion_05_bump_enrichment() {
    let theta = 0.17677670_f64;
    let base_trace = power_rieffel(theta, 3, 0.04, &smooth()).unwrap().trace();
    let p = element_c5();
    let report = verify(&p, &full_config());
    assert!(report.pass, "{report:?}");
    for k in 0..=3 {
        let sup = p.coeff(k).sup_norm(256);
        assert!(sup > 1e-3, "band {k} has sup-norm {sup}");
    }
    assert!(
        (report.trace - base_trace).abs() <= TOL,
        "trace moved: {} vs {base_trace}",
        report.trace
    );
    pass(
        5,
        &format!(
            "all bands 0..3 filled, trace unchanged at {:.9}",
            report.trace
        ),
    );
}

#[test]
fn criterion_06_complement_duality() {
    let cfg = equations_only();
    for (name, p) in corpus() {
        let kept = complement(&p);
        let one_minus = TorusElement::one(p.theta()).subtract(&p).unwrap();
        for (label, q) in [("complement", &kept), ("1 - p", &one_minus)] {
            let report = verify(q, &cfg);
            assert!(report.pass, "{name} / {label}: {report:?}");
            assert!(
                (p.trace() + report.trace - 1.0).abs() <= TOL,
                "{name} / {label}: traces sum to {}",
                p.trace() + report.trace
            );
        }
    }
    pass(
        6,
        "complements of the criterion 1-5 elements verify and traces sum to one",
    );
}

#[test]
fn criterion_07_homotopy_sweep() {
    let spec = spec_c5();
    let cfg = equations_only();
    for step in 0..11 {
        let t = step as f64 / 10.0;
        let p = homotopy(&spec, t).unwrap();
        let report = verify(&p, &cfg);
        assert!(report.pass, "t = {t}: {report:?}");
    }
    // the flattened endpoint coincides with the plain base projection
    let flat = homotopy(&spec, 0.0).unwrap();
    let base = power_rieffel(spec.theta, spec.base.m, spec.base.eps, &smooth()).unwrap();
    let m = flat.order_bound().max(base.order_bound());
    for k in -m..=m {
        let diff = flat.coeff(k).max_abs_diff(&base.coeff(k), 4096);
        assert!(diff <= 1e-10, "band {k}: endpoint differs by {diff}");
    }
    pass(
        7,
        "all 11 deformation steps verify; t = 0 equals the base projection within 1e-10",
    );
}

#[test]
fn criterion_08_oracle_equivalence() {
    let mut worst = 0.0_f64;
    for (name, p) in corpus() {
        let residual = oracle_idempotency(&p, 100, 100, 0x6e63746f);
        assert!(residual <= 1e-8, "{name}: oracle residual {residual}");
        worst = worst.max(residual);
    }
    // corrupting the top band must be caught by both code paths
    let p = element_c1();
    let corrupted = p.with_coeff(1, p.coeff(1).pointwise_scale(1.1));
    let oracle = oracle_idempotency(&corrupted, 100, 100, 0x6e63746f);
    assert!(oracle >= 1e-3, "oracle missed the corruption: {oracle}");
    let report = verify(&corrupted, &equations_only());
    assert!(
        report.residual_idempotent_in_band >= 1e-3,
        "the convolution check missed the corruption: {report:?}"
    );
    assert!(!report.pass);
    pass(
        8,
        &format!(
            "oracle residual <= {worst:.2e} on the corpus; both paths flag the corrupted element"
        ),
    );
}

#[test]
fn criterion_09_algebra_laws() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const TAU: f64 = std::f64::consts::TAU;
    let theta = 0.70710678;
    let mut rng = StdRng::seed_from_u64(0x616c6773);

    let random_element = |rng: &mut StdRng| -> TorusElement {
        let m = rng.random_range(1..=3);
        let mut coeffs = BTreeMap::new();
        for k in -m..=m {
            let a1 = rng.random_range(-1.0..1.0);
            let b1 = rng.random_range(-1.0..1.0);
            let a2 = rng.random_range(-0.5..0.5);
            coeffs.insert(
                k,
                CircleFunction::from_closure(move |x: f64| {
                    a1 * (TAU * x).cos() + b1 * (TAU * x).sin() + a2 * (2.0 * TAU * x).cos()
                }),
            );
        }
        TorusElement::new(theta, coeffs)
    };

    let probes: Vec<f64> = (0..5).map(|i| (i as f64 + 0.31) / 5.0).collect();
    for round in 0..100 {
        let a = random_element(&mut rng);
        let b = random_element(&mut rng);
        let c = random_element(&mut rng);

        // associativity at random (band, point) probes
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        let m = left.order_bound().max(right.order_bound());
        for _ in 0..5 {
            let k = rng.random_range(-m..=m);
            let x: f64 = rng.random();
            let d = (left.coeff(k).evaluate(x) - right.coeff(k).evaluate(x)).abs();
            assert!(
                d <= 1e-9,
                "round {round}: associativity residual {d} at band {k}"
            );
        }

        // adjoint involution and anti-multiplicativity
        let aa = a.adjoint().adjoint();
        for k in -m..=m {
            for &x in &probes {
                let d = (aa.coeff(k).evaluate(x) - a.coeff(k).evaluate(x)).abs();
                assert!(d <= 1e-12, "round {round}: involution residual {d}");
            }
        }
        let lhs = a.multiply(&b).unwrap().adjoint();
        let rhs = b.adjoint().multiply(&a.adjoint()).unwrap();
        for k in -m..=m {
            for &x in &probes {
                let d = (lhs.coeff(k).evaluate(x) - rhs.coeff(k).evaluate(x)).abs();
                assert!(
                    d <= 1e-10,
                    "round {round}: anti-multiplicativity residual {d}"
                );
            }
        }

        // trace property
        let tab = a.multiply(&b).unwrap().trace();
        let tba = b.multiply(&a).unwrap().trace();
        assert!(
            (tab - tba).abs() <= 1e-8,
            "round {round}: trace(ab) = {tab} vs trace(ba) = {tba}"
        );
    }
    pass(
        9,
        "100 random rounds: associativity, involution, anti-multiplicativity, cyclic trace",
    );
}

#[test]
fn criterion_10_infeasibility_gates() {
    use nctorus::{BuilderError, EpsilonRule};

    // rule 1: sum(eps) >= theta
    let base = power_rieffel(0.2, 2, 0.08, &smooth()).unwrap();
    match glue(&base, 1, 0.13, &smooth()) {
        Err(BuilderError::InfeasibleEpsilon { rule, .. }) => {
            assert_eq!(rule, EpsilonRule::SumBelowTheta)
        }
        other => panic!("expected infeasible epsilon, got {other:?}"),
    }

    // rule 2: sum(eps) + n*theta >= 1
    let base = power_rieffel(0.3, 2, 0.05, &smooth()).unwrap();
    match glue(&base, 1, 0.11, &smooth()) {
        Err(BuilderError::InfeasibleEpsilon { rule, .. }) => {
            assert_eq!(rule, EpsilonRule::SumPlusTraceBelowOne)
        }
        other => panic!("expected infeasible epsilon, got {other:?}"),
    }

    // the CLI rejects the same violations with exit 2 and writes no file
    let dir = tempfile::tempdir().unwrap();
    for (name, edit_eps) in [("sum_vs_theta", 0.13), ("support_vs_one", 0.11)] {
        let theta = if edit_eps == 0.13 { 0.2 } else { 0.3 };
        let base_eps = if edit_eps == 0.13 { 0.08 } else { 0.05 };
        let spec = format!(
            r#"{{"theta": {theta}, "base": {{"M": 2, "eps": {base_eps}}},
               "edits": [{{"kind": "glue", "k": 1, "eps": {edit_eps}}}]}}"#
        );
        let spec_path = dir.path().join(format!("{name}.json"));
        let out_path = dir.path().join(format!("{name}.element.json"));
        std::fs::write(&spec_path, spec).unwrap();
        let output = Command::new(env!("CARGO_BIN_EXE_nctorus"))
            .args(["build"])
            .arg(&spec_path)
            .arg("--out")
            .arg(&out_path)
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(2), "{name}");
        let stderr = String::from_utf8_lossy(&output.stderr);
        assert!(
            stderr.contains("sum(eps)"),
            "{name}: inequality not named in {stderr}"
        );
        assert!(!out_path.exists(), "{name}: element file was written");
    }
    pass(
        10,
        "both width inequalities produce the named error; no element file is written",
    );
}
