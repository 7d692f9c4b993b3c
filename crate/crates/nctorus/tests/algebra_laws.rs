//! Property tests for the algebra laws on random elements with smooth
//! trigonometric coefficients.

use std::collections::BTreeMap;

use proptest::prelude::*;

use nctorus::{CircleFunction, TorusElement};

const TAU: f64 = std::f64::consts::TAU;

#[derive(Clone, Debug)]
struct TrigCoeff {
    a1: f64,
    b1: f64,
    a2: f64,
    b2: f64,
}

fn trig_fn(c: &TrigCoeff) -> CircleFunction {
    let TrigCoeff { a1, b1, a2, b2 } = *c;
    CircleFunction::from_closure(move |x| {
        a1 * (TAU * x).cos()
            + b1 * (TAU * x).sin()
            + a2 * (2.0 * TAU * x).cos()
            + b2 * (2.0 * TAU * x).sin()
    })
}

fn coeff_strategy() -> impl Strategy<Value = TrigCoeff> {
    (-1.0f64..1.0, -1.0f64..1.0, -0.5f64..0.5, -0.5f64..0.5)
        .prop_map(|(a1, b1, a2, b2)| TrigCoeff { a1, b1, a2, b2 })
}

fn element_strategy(theta: f64) -> impl Strategy<Value = TorusElement> {
    (1i32..=3, proptest::collection::vec(coeff_strategy(), 7)).prop_map(move |(m, cs)| {
        let mut coeffs = BTreeMap::new();
        for (i, c) in cs.iter().enumerate().take((2 * m + 1) as usize) {
            let k = i as i32 - m;
            coeffs.insert(k, trig_fn(c));
        }
        TorusElement::new(theta, coeffs)
    })
}

fn probe_points(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| (i as f64 + 0.37) / n as f64)
}

const THETA: f64 = 0.70710678;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplication_is_associative_at_probes(
        a in element_strategy(THETA),
        b in element_strategy(THETA),
        c in element_strategy(THETA),
    ) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        let m = left.order_bound().max(right.order_bound());
        for k in -m..=m {
            let lf = left.coeff(k);
            let rf = right.coeff(k);
            for x in probe_points(7) {
                prop_assert!((lf.evaluate(x) - rf.evaluate(x)).abs() < 1e-9,
                    "band {} at {}: {} vs {}", k, x, lf.evaluate(x), rf.evaluate(x));
            }
        }
    }

    #[test]
    fn trace_is_cyclic(
        a in element_strategy(THETA),
        b in element_strategy(THETA),
    ) {
        let ab = a.multiply(&b).unwrap().trace();
        let ba = b.multiply(&a).unwrap().trace();
        prop_assert!((ab - ba).abs() <= 1e-8, "{ab} vs {ba}");
    }

    #[test]
    fn adjoint_is_involutive(a in element_strategy(THETA)) {
        let aa = a.adjoint().adjoint();
        let m = a.order_bound();
        for k in -m..=m {
            let f = a.coeff(k);
            let g = aa.coeff(k);
            for x in probe_points(11) {
                prop_assert!((f.evaluate(x) - g.evaluate(x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_is_anti_multiplicative(
        a in element_strategy(THETA),
        b in element_strategy(THETA),
    ) {
        let lhs = a.multiply(&b).unwrap().adjoint();
        let rhs = b.adjoint().multiply(&a.adjoint()).unwrap();
        let m = lhs.order_bound().max(rhs.order_bound());
        for k in -m..=m {
            let lf = lhs.coeff(k);
            let rf = rhs.coeff(k);
            for x in probe_points(7) {
                prop_assert!((lf.evaluate(x) - rf.evaluate(x)).abs() < 1e-10,
                    "band {} at {}", k, x);
            }
        }
    }

    #[test]
    fn shift_acts_as_a_group(
        s in -2.0f64..2.0,
        t in -2.0f64..2.0,
        c in coeff_strategy(),
    ) {
        let f = trig_fn(&c);
        let once = f.shift(s).shift(t);
        let direct = f.shift(s + t);
        for x in probe_points(17) {
            prop_assert_eq!(once.evaluate(x), direct.evaluate(x));
        }
    }

    #[test]
    fn integral_is_shift_invariant(s in -2.0f64..2.0, c in coeff_strategy()) {
        let f = trig_fn(&c);
        prop_assert!((f.shift(s).integrate() - f.integrate()).abs() <= 2e-10);
    }
}
