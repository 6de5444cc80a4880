mod common;

use common::{c, hi};
use proptest::prelude::*;
use subplanck::hw::{self, HwLabel, HwState};
use subplanck::su2::{self, Su2Label, Su2State};
use subplanck::Complex64;

fn complex(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn terms(radius: f64) -> impl Strategy<Value = Vec<(Complex64, Complex64)>> {
    prop::collection::vec((complex(1.0).prop_filter("nonzero weight", |w| w.norm() > 0.05), complex(radius)), 1..=4)
}

fn hw_state(t: &[(Complex64, Complex64)], phase: f64) -> Option<HwState> {
    let rot = Complex64::from_polar(1.0, phase);
    HwState::custom("p", t.iter().map(|(w, a)| (*w, HwLabel::new(a * rot))).collect()).ok()
}

fn su2_state(twice: i64, t: &[(Complex64, Complex64)], phase: f64) -> Option<Su2State> {
    let rot = Complex64::from_polar(1.0, phase);
    Su2State::custom(hi(twice), "p", t.iter().map(|(w, g)| (*w, Su2Label::new(g * rot))).collect()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hw_overlap_symmetric_and_bounded(t in terms(3.0), d in complex(4.0)) {
        let Some(s) = hw_state(&t, 0.0) else { return Ok(()) };
        let (f, g) = (hw::overlap(&s, d).unwrap(), hw::overlap(&s, -d).unwrap());
        prop_assert!((f - g).abs() < 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!((hw::overlap(&s, c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hw_rotation_covariance(t in terms(3.0), phase in 0.0..std::f64::consts::TAU, r in complex(4.0)) {
        let (Some(s), Some(s_rot)) = (hw_state(&t, 0.0), hw_state(&t, phase)) else { return Ok(()) };
        let rot = Complex64::from_polar(1.0, phase);
        prop_assert!((hw::overlap(&s_rot, r * rot).unwrap() - hw::overlap(&s, r).unwrap()).abs() < 1e-12);
        prop_assert!((hw::wigner_at(&s_rot, r * rot).unwrap() - hw::wigner_at(&s, r).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn su2_overlap_symmetric_and_bounded(twice in 1i64..=30, t in terms(2.0), d in complex(3.0)) {
        let Some(s) = su2_state(twice, &t, 0.0) else { return Ok(()) };
        let (f, g) = (su2::overlap(&s, d).unwrap(), su2::overlap(&s, -d).unwrap());
        prop_assert!((f - g).abs() < 1e-11, "{} vs {}", f, g);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!((su2::overlap(&s, c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn su2_rotation_covariance(
        twice in 1i64..=20,
        t in terms(2.0),
        phase in 0.0..std::f64::consts::TAU,
        g in complex(2.0),
    ) {
        let (Some(s), Some(s_rot)) = (su2_state(twice, &t, 0.0), su2_state(twice, &t, phase)) else { return Ok(()) };
        let rot = Complex64::from_polar(1.0, phase);
        prop_assert!((su2::overlap(&s_rot, g * rot).unwrap() - su2::overlap(&s, g).unwrap()).abs() < 1e-11);
        let (a, b) = (su2::wigner_at(&s_rot, g * rot).unwrap(), su2::wigner_at(&s, g).unwrap());
        prop_assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn su2_coherent_overlap_is_unit_at_equal_labels(twice in 0i64..=60, g in complex(5.0)) {
        let ov = su2::coherent_overlap(hi(twice), g, g);
        prop_assert!((ov - 1.0).norm() < 1e-12);
    }

    #[test]
    fn composition_is_consistent_with_displaced_elements(g1 in complex(2.0), g2 in complex(2.0), twice in 1i64..=8) {
        // D(γ1) D(γ2) |j,j⟩ = D(γ3) R(φ)|j,j⟩ = e^{ijφ} |γ3⟩
        let comp = su2::compose(g1, g2).unwrap();
        let j = hi(twice);
        let probe = c(0.3, -0.1);
        let lhs = su2::displaced_matrix_element(j, probe, g1, g2);
        let rhs = Complex64::from_polar(1.0, j.value() * comp.varphi) * su2::coherent_overlap(j, probe, comp.gamma3);
        prop_assert!((lhs - rhs).norm() < 1e-11, "{} vs {}", lhs, rhs);
    }
}
