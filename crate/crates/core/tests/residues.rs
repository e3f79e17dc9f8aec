mod common;

use common::{table_finite_pole, table_points, table_regular_sq};
use num_complex::Complex64;
use proptest::prelude::*;
use qhj::quantizer::real_window;
use qhj::residues::{
    fixed_poles, gamma_contribution, infinity_contribution, laurent_branch, report_scale,
    residue_candidates, select_branch, PoleKind,
};
use qhj::{Family, PotentialSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn pole_locations() {
    let locs = |spec: &PotentialSpec| -> Vec<String> {
        fixed_poles(spec).iter().map(|p| p.label()).collect()
    };
    let eckart = PotentialSpec::eckart(1.0, 4.0, 1.0).unwrap();
    let mut got = locs(&eckart);
    got.sort();
    assert_eq!(got, ["y=-1", "y=0", "y=1", "y=inf"]);
    let scarf = PotentialSpec::shape_invariant(Family::ScarfII, 2.0, 1.0, 1.0).unwrap();
    let mut got = locs(&scarf);
    got.sort();
    assert_eq!(got, ["y=-1i", "y=0", "y=1i", "y=inf"]);
    let osc = PotentialSpec::harmonic(1.0).unwrap();
    let poles = fixed_poles(&osc);
    assert_eq!(poles.len(), 1);
    assert_eq!(poles[0].kind, PoleKind::Infinity);
}

#[test]
fn eckart_candidates_and_selection() {
    let spec = PotentialSpec::eckart(1.0, 4.0, 1.0).unwrap();
    let pole = fixed_poles(&spec)
        .into_iter()
        .find(|p| p.label() == "y=1")
        .unwrap();
    let mut cands = residue_candidates(&pole, &spec).unwrap().to_vec();
    cands.sort_by(|a, b| a.im.total_cmp(&b.im));
    let r2 = 2f64.sqrt();
    assert!((cands[0] - c(0.0, -r2)).norm() < 1e-12);
    assert!((cands[1] - c(0.0, r2 - 1.0)).norm() < 1e-12);
    let chosen = select_branch(&pole, &spec, [cands[0], cands[1]]).unwrap();
    assert!((chosen - c(0.0, -r2)).norm() < 1e-12);
    let g = gamma_contribution(&pole, &spec, 2.0).unwrap();
    assert!((g - c(r2, 0.0)).norm() < 1e-12, "{g}");
}

#[test]
fn walls_and_oscillator_infinity() {
    let half = PotentialSpec::half_line_oscillator(1.0)
        .unwrap()
        .with_units(0.3, 1.0)
        .unwrap();
    let wall = fixed_poles(&half)
        .into_iter()
        .find(|p| p.kind == PoleKind::BoundaryWall)
        .unwrap();
    let mut cands = residue_candidates(&wall, &half).unwrap().to_vec();
    cands.sort_by(|a, b| a.im.total_cmp(&b.im));
    assert!((cands[0] - c(0.0, -0.3)).norm() < 1e-14);
    assert!(cands[1].norm() < 1e-14);
    assert!((laurent_branch(&wall, &half, 1.0).unwrap().selected - c(0.0, -0.3)).norm() < 1e-14);
    assert!((gamma_contribution(&wall, &half, 1.0).unwrap() - c(0.3, 0.0)).norm() < 1e-14);

    let osc = PotentialSpec::harmonic(2.0)
        .unwrap()
        .with_units(1.0, 1.5)
        .unwrap();
    let inf = fixed_poles(&osc)[0];
    let b = laurent_branch(&inf, &osc, 1.0).unwrap();
    assert!((b.selected - c(0.0, 3.0)).norm() < 1e-12);
    // (2E − ħω)/(2ω)
    let i = infinity_contribution(&osc, 4.0).unwrap();
    assert!((i - c(1.5, 0.0)).norm() < 1e-12, "{i}");
    assert_eq!(
        residue_candidates(
            &fixed_poles(&PotentialSpec::eckart(1.0, 4.0, 1.0).unwrap())[2],
            &osc
        )
        .map(|_| ())
        .unwrap_err()
        .code(),
        "contract"
    );
}

#[test]
fn eckart_energy_dependent_terms() {
    let spec = PotentialSpec::eckart(1.0, 4.0, 1.0).unwrap();
    let e = 3.0;
    // (αI)² = −2m(E − W²) at both ends, W² = 9 at y = ∞ and 25 at y = 0
    let inf = infinity_contribution(&spec, e).unwrap();
    assert!(
        (inf * inf - c(-2.0 * (e - 9.0), 0.0)).norm() < 1e-10,
        "{inf}"
    );
    assert!(inf.im.abs() < 1e-14);
    let origin = fixed_poles(&spec)
        .into_iter()
        .find(|p| p.kind == PoleKind::Origin)
        .unwrap();
    let g = gamma_contribution(&origin, &spec, e).unwrap();
    assert!((g * g - c(-2.0 * (e - 25.0), 0.0)).norm() < 1e-10, "{g}");
    assert!(g.im.abs() < 1e-14);
}

#[test]
fn tabulated_pole_terms() {
    for f in Family::TABULATED {
        for (a, b, alpha) in table_points(f) {
            let spec = PotentialSpec::shape_invariant(f, a, b, alpha).unwrap();
            assert_eq!(report_scale(&spec), alpha);
            let e = common::expected_energy(&spec, 1);
            let mut finite = 0;
            for pole in fixed_poles(&spec) {
                let got = match pole.kind {
                    PoleKind::Infinity => infinity_contribution(&spec, e).unwrap(),
                    _ => gamma_contribution(&pole, &spec, e).unwrap(),
                } * alpha;
                match pole.kind {
                    PoleKind::Origin | PoleKind::Infinity => {
                        let want = table_regular_sq(f, a, b, e, pole.kind == PoleKind::Origin);
                        assert!(
                            (got * got - want).norm() < 1e-10 * (1.0 + want.norm()),
                            "{f} {}: {got}",
                            pole.label()
                        );
                    }
                    _ => {
                        let want = table_finite_pole(f, a, b, pole.y).unwrap();
                        assert!(
                            (got - want).norm() < 1e-10,
                            "{f} {}: {got} vs {want}",
                            pole.label()
                        );
                        finite += 1;
                    }
                }
            }
            assert_eq!(finite, 2, "{f}");
        }
    }
}

fn any_spec() -> impl Strategy<Value = PotentialSpec> {
    let fam = prop::sample::select(Family::ALL.to_vec());
    (
        fam,
        0.2f64..4.0,
        -3.0f64..12.0,
        0.2f64..2.0,
        0.3f64..3.0,
        0.3f64..3.0,
    )
        .prop_filter_map("valid parameters", |(f, a, b, alpha, hbar, mass)| {
            let spec = match f {
                Family::HarmonicOscillator | Family::HalfLineOscillator => {
                    PotentialSpec::new(f, &[("omega".to_string(), a)].into(), Default::default())
                }
                Family::SquareWell => PotentialSpec::square_well(a),
                _ => PotentialSpec::shape_invariant(f, a, b, alpha),
            };
            spec.ok()?.with_units(hbar, mass).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn candidates_satisfy_the_quadratic(spec in any_spec()) {
        let hbar = spec.units().hbar;
        for pole in fixed_poles(&spec) {
            if !matches!(pole.kind, PoleKind::PotentialSingularity | PoleKind::BoundaryWall) {
                continue;
            }
            let Ok(cands) = residue_candidates(&pole, &spec) else { continue };
            for b in cands {
                let r = b * b + Complex64::i() * hbar * pole.sigma * b - pole.c2;
                prop_assert!(r.norm() <= 1e-12 * (1.0 + pole.c2.norm() + (hbar * pole.sigma * b).norm()), "{r}");
            }
        }
    }

    #[test]
    fn finite_pole_terms_do_not_depend_on_energy(spec in any_spec()) {
        let w = real_window(&spec);
        let (lo, hi) = match (w.e_lo.is_finite(), w.e_hi.is_finite()) {
            (true, true) => (w.e_lo, w.e_hi),
            (true, false) => (w.e_lo, w.e_lo + 10.0 * spec.energy_scale()),
            (false, true) => (w.e_hi - 10.0 * spec.energy_scale(), w.e_hi),
            (false, false) => (0.0, 10.0 * spec.energy_scale()),
        };
        for pole in fixed_poles(&spec) {
            if !matches!(pole.kind, PoleKind::PotentialSingularity | PoleKind::BoundaryWall) {
                continue;
            }
            let values: Vec<Complex64> = (1..=5)
                .map(|k| lo + (hi - lo) * k as f64 / 6.0)
                .map(|e| gamma_contribution(&pole, &spec, e).unwrap())
                .collect();
            for v in &values {
                prop_assert_eq!(*v, values[0]);
            }
        }
    }

    #[test]
    fn wall_residue_is_minus_i_hbar(hbar in 0.01f64..10.0, l in 0.1f64..10.0) {
        let spec = PotentialSpec::half_line_oscillator(l).unwrap().with_units(hbar, 1.0).unwrap();
        let wall = fixed_poles(&spec).into_iter().find(|p| p.kind == PoleKind::BoundaryWall).unwrap();
        let b = laurent_branch(&wall, &spec, 1.0).unwrap();
        prop_assert!((b.selected - c(0.0, -hbar)).norm() <= 1e-14 * hbar);
    }
}
