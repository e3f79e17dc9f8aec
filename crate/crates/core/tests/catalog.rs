mod common;

use proptest::prelude::*;
use qhj::catalog::{MaxLevel, SpecJson};
use qhj::{Family, PotentialSpec, UnitSystem};

#[test]
fn spec_examples() {
    let osc = PotentialSpec::harmonic(1.0).unwrap();
    assert_eq!(osc.potential_value(0.0).unwrap(), 0.0);
    assert_eq!(osc.classical_momentum_sq(0.5, 0.0).unwrap(), 1.0);
    assert!(osc.classical_momentum_sq(0.5, 1.0).unwrap().abs() < 1e-15);
    assert_eq!(osc.turning_points(2.0).unwrap(), vec![-2.0, 2.0]);
    assert_eq!(osc.closed_form_energy(3).unwrap(), 3.5);
    assert_eq!(osc.superpotential_value(0.0).unwrap(), 0.0);
    assert_eq!(osc.max_level(), MaxLevel::Unbounded);

    let half = PotentialSpec::half_line_oscillator(1.0).unwrap();
    assert_eq!(half.turning_points(2.0).unwrap(), vec![0.0, 2.0]);
    assert_eq!(half.potential_value(-1.0).unwrap_err().code(), "domain");

    let well = PotentialSpec::square_well(1.0).unwrap();
    assert_eq!(well.potential_value(0.5).unwrap(), 0.0);
    assert_eq!(well.turning_points(3.0).unwrap(), vec![0.0, 1.0]);
    let e1 = well.closed_form_energy(1).unwrap();
    assert!((e1 - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);

    let eckart = PotentialSpec::eckart(1.0, 4.0, 1.0).unwrap();
    assert!((eckart.potential_value(20.0).unwrap() - 9.0).abs() < 1e-12);
    assert!((eckart.superpotential_value(20.0).unwrap() - 3.0).abs() < 1e-12);
    let near = eckart.superpotential_value(1e-4).unwrap();
    assert!((near / (-1.0 / 1e-4) - 1.0).abs() < 0.01);
    assert!(eckart.closed_form_energy(0).unwrap().abs() < 1e-13);
    assert_eq!(eckart.max_level(), MaxLevel::Finite(1));
    assert_eq!(
        eckart.closed_form_energy(2).unwrap_err().code(),
        "no_such_level"
    );
    assert_eq!(
        eckart.turning_points(-100.0).unwrap_err().code(),
        "no_classical_region"
    );
    for x in [0.3, 1.0, 4.0] {
        let v = eckart.potential_value(x).unwrap();
        assert_eq!(eckart.classical_momentum_sq(0.0, x).unwrap(), -2.0 * v);
    }
}

#[test]
fn validation_reports() {
    let err = PotentialSpec::eckart(1.0, 0.5, 1.0).unwrap_err();
    assert_eq!(err.code(), "invalid_parameters");
    assert!(err.to_string().contains("B > A^2"));
    assert_eq!(
        PotentialSpec::harmonic(-1.0).unwrap_err().code(),
        "invalid_parameters"
    );
    assert_eq!(
        PotentialSpec::square_well(0.0).unwrap_err().code(),
        "invalid_parameters"
    );
    assert_eq!(
        Family::from_name("morse").unwrap_err().code(),
        "unknown_family"
    );
    assert_eq!(
        UnitSystem::new(0.0, 1.0).unwrap_err().code(),
        "invalid_parameters"
    );
    let extra = [("omega".to_string(), 1.0), ("L".to_string(), 1.0)].into();
    assert_eq!(
        PotentialSpec::new(Family::HarmonicOscillator, &extra, UnitSystem::default())
            .unwrap_err()
            .code(),
        "contract"
    );
}

#[test]
fn json_round_trip() {
    let spec = PotentialSpec::eckart(1.0, 4.0, 1.0)
        .unwrap()
        .with_units(0.5, 2.0)
        .unwrap();
    let text = serde_json::to_string(&spec).unwrap();
    assert_eq!(
        text,
        r#"{"family":"eckart","params":{"A":1.0,"B":4.0,"alpha":1.0},"hbar":0.5,"mass":2.0}"#
    );
    let back: PotentialSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back, spec);
    let defaults: PotentialSpec =
        serde_json::from_str(r#"{"family":"harmonic","params":{"omega":2.0}}"#).unwrap();
    assert_eq!(defaults.units(), UnitSystem::default());
    let wire: SpecJson =
        serde_json::from_str(r#"{"family":"eckart","params":{"A":1,"B":0.5,"alpha":1}}"#).unwrap();
    assert!(PotentialSpec::try_from(wire).is_err());
}

fn susy_spec() -> impl Strategy<Value = PotentialSpec> {
    let fam = prop::sample::select(
        Family::ALL
            .iter()
            .copied()
            .filter(|f| f.is_shape_invariant())
            .collect::<Vec<_>>(),
    );
    (
        fam,
        0.3f64..4.0,
        -3.0f64..12.0,
        0.2f64..2.0,
        0.3f64..3.0,
        0.3f64..3.0,
    )
        .prop_filter_map("valid parameters", |(f, a, b, alpha, hbar, mass)| {
            PotentialSpec::shape_invariant(f, a, b, alpha)
                .ok()?
                .with_units(hbar, mass)
                .ok()
        })
}

fn any_spec() -> impl Strategy<Value = PotentialSpec> {
    prop_oneof![
        (0.2f64..5.0, 0.3f64..3.0).prop_map(|(w, h)| PotentialSpec::harmonic(w)
            .unwrap()
            .with_units(h, 1.0)
            .unwrap()),
        (0.2f64..5.0).prop_map(|w| PotentialSpec::half_line_oscillator(w).unwrap()),
        (0.2f64..5.0).prop_map(|l| PotentialSpec::square_well(l).unwrap()),
        susy_spec(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn potential_from_superpotential(spec in susy_spec(), t in 0.02f64..0.98) {
        let (lo, hi) = spec.scan_interval();
        let x = lo + t * (hi - lo);
        let k = spec.units().k();
        let (Ok(v), Ok(w), Ok(dw)) =
            (spec.potential_value(x), spec.superpotential_value(x), spec.superpotential_derivative(x))
        else {
            return Ok(());
        };
        prop_assert!((v - w * w + k * dw).abs() <= 1e-10 * (1.0 + v.abs()), "{v} vs {}", w * w - k * dw);
        let h = 1e-5 * spec.length_scale();
        if let (Ok(wp), Ok(wm)) = (spec.superpotential_value(x + h), spec.superpotential_value(x - h)) {
            let fd = (wp - wm) / (2.0 * h);
            prop_assert!((fd - dw).abs() <= 1e-6 * (1.0 + dw.abs()), "{fd} vs {dw}");
        }
    }

    #[test]
    fn closed_forms_increase(spec in any_spec()) {
        let top = spec.max_level().clamp_count(51);
        let mut last = f64::NEG_INFINITY;
        for n in 0..top {
            let e = spec.closed_form_energy(n).unwrap();
            prop_assert!(e > last, "n = {n}: {e} after {last}");
            prop_assert!((e - common::expected_energy(&spec, n)).abs() <= 1e-12 * (1.0 + e.abs()));
            last = e;
        }
    }

    #[test]
    fn turning_points_bracket_the_classical_region(spec in any_spec()) {
        let top = spec.max_level().clamp_count(4);
        for n in 0..top {
            let e = spec.closed_form_energy(n).unwrap();
            if e <= spec.potential_infimum().1 {
                continue;
            }
            let tp = spec.turning_points(e).unwrap();
            prop_assert_eq!(tp.len(), 2);
            let d = 1e-6 * spec.length_scale();
            for (i, x) in tp.iter().enumerate() {
                let inside = if i == 0 { x + d } else { x - d };
                prop_assert!(spec.classical_momentum_sq(e, inside).unwrap() > 0.0);
                let outside = if i == 0 { x - d } else { x + d };
                if let Ok(p2) = spec.classical_momentum_sq(e, outside) {
                    prop_assert!(p2 < 0.0, "outside {outside}: {p2}");
                }
            }
        }
    }

    #[test]
    fn shape_invariant_ground_state_is_zero(spec in susy_spec()) {
        prop_assert!(spec.closed_form_energy(0).unwrap().abs() <= 1e-12 * spec.energy_scale());
    }
}
