use abqt_core::fock::{apply_bps_fock, apply_displacement_fock, apply_phase_fock, encode};
use abqt_core::measurement::{project_photon_number, PatternEvaluator};
use abqt_core::optics::{apply_bps, apply_displacement, apply_phase};
use abqt_core::{coherent_overlap, fidelity, DetectionPattern, OutcomeClass, StateVector, C64};
use proptest::prelude::*;

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn state(modes: usize, max_terms: usize, r: f64) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((complex(1.0), prop::collection::vec(complex(r), modes)), 1..=max_terms)
        .prop_map(move |terms| StateVector::from_terms(modes, terms))
        .prop_filter("nonzero", |s| s.norm_sqr() > 1e-6)
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

/// `||a - b||^2` through the coherent Gram sum.
fn distance_sqr(a: &StateVector, b: &StateVector) -> f64 {
    a.add(&b.scale(C64::new(-1.0, 0.0))).unwrap().norm_sqr()
}

fn weight(s: &StateVector, m: usize, c: OutcomeClass) -> f64 {
    PatternEvaluator::new(s, &[m])
        .unwrap()
        .weight(&DetectionPattern::new(vec![c]))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn overlap_magnitude_at_most_one(b in complex(4.0), d in complex(4.0)) {
        prop_assert!(coherent_overlap(b, d).norm() <= 1.0 + 1e-15);
        prop_assert!(close(coherent_overlap(b, b), C64::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn inner_product_is_hermitian(a in state(2, 4, 2.0), b in state(2, 4, 2.0)) {
        let ab = a.inner(&b).unwrap();
        let ba = b.inner(&a).unwrap();
        prop_assert!(close(ab, ba.conj(), 1e-12));
    }

    #[test]
    fn cauchy_schwarz_and_positive_norm(a in state(2, 4, 2.0), b in state(2, 4, 2.0)) {
        prop_assert!(a.norm_sqr() >= 0.0);
        let ab = a.inner(&b).unwrap().norm_sqr();
        prop_assert!(ab <= a.norm_sqr() * b.norm_sqr() * (1.0 + 1e-10) + 1e-14);
    }

    #[test]
    fn canonicalization_preserves_the_vector(a in state(2, 5, 1.5)) {
        let dup = a.add(&a).unwrap();
        let c = dup.canonical();
        prop_assert!(c.terms().len() <= a.terms().len());
        prop_assert!(distance_sqr(&dup, &c) <= 1e-10 * dup.norm_sqr());
    }

    #[test]
    fn gates_are_unitary(a in state(2, 3, 1.5), b in state(2, 3, 1.5), psi in -7.0..7.0f64, beta in complex(1.5)) {
        let ab = a.inner(&b).unwrap();
        for (ga, gb) in [
            (apply_bps(&a, 0, 1).unwrap(), apply_bps(&b, 0, 1).unwrap()),
            (apply_phase(&a, 1, psi).unwrap(), apply_phase(&b, 1, psi).unwrap()),
            (apply_displacement(&a, 0, beta).unwrap(), apply_displacement(&b, 0, beta).unwrap()),
        ] {
            prop_assert!(close(ga.inner(&gb).unwrap(), ab, 1e-10));
            prop_assert!((ga.norm_sqr() - a.norm_sqr()).abs() <= 1e-10 * (1.0 + a.norm_sqr()));
        }
    }

    #[test]
    fn gates_are_linear(a in state(2, 3, 1.5), b in state(2, 3, 1.5), s in complex(2.0), beta in complex(1.5)) {
        let sum = a.scale(s).add(&b).unwrap();
        let gate = |x: &StateVector| apply_displacement(&apply_bps(x, 0, 1).unwrap(), 1, beta).unwrap();
        let lhs = gate(&sum);
        let rhs = gate(&a).scale(s).add(&gate(&b)).unwrap();
        prop_assert!(distance_sqr(&lhs, &rhs) <= 1e-10 * (1.0 + lhs.norm_sqr()));
    }

    #[test]
    fn gate_composition(a in state(2, 3, 1.5), p in -4.0..4.0f64, q in -4.0..4.0f64, b in complex(1.0), d in complex(1.0)) {
        let twice = apply_bps(&apply_bps(&a, 0, 1).unwrap(), 0, 1).unwrap();
        prop_assert!(distance_sqr(&twice, &a) <= 1e-10 * a.norm_sqr());

        let pp = apply_phase(&apply_phase(&a, 0, p).unwrap(), 0, q).unwrap();
        prop_assert!(distance_sqr(&pp, &apply_phase(&a, 0, p + q).unwrap()) <= 1e-10 * a.norm_sqr());

        // D(b) D(d) = exp((b d* - b* d)/2) D(b + d)
        let dd = apply_displacement(&apply_displacement(&a, 1, d).unwrap(), 1, b).unwrap();
        let phase = ((b * d.conj() - b.conj() * d) / 2.0).exp();
        let single = apply_displacement(&a, 1, b + d).unwrap().scale(phase);
        prop_assert!(distance_sqr(&dd, &single) <= 1e-10 * a.norm_sqr());
    }

    #[test]
    fn classes_are_complete(a in state(2, 4, 2.0), m in 0usize..2) {
        let total: f64 = OutcomeClass::ALL.iter().map(|&c| weight(&a, m, c)).sum();
        prop_assert!((total - a.norm_sqr()).abs() <= 1e-10 * (1.0 + a.norm_sqr()));
        for c in OutcomeClass::ALL {
            prop_assert!(weight(&a, m, c) >= -1e-12 * (1.0 + a.norm_sqr()));
        }
    }

    #[test]
    fn parity_identity(a in state(2, 4, 2.0), m in 0usize..2) {
        let even = weight(&a, m, OutcomeClass::Zero) + weight(&a, m, OutcomeClass::EvenNonzero);
        let odd = weight(&a, m, OutcomeClass::Odd);
        let parity = a.inner(&apply_phase(&a, m, std::f64::consts::PI).unwrap()).unwrap();
        prop_assert!((even - odd - parity.re).abs() <= 1e-10 * (1.0 + a.norm_sqr()));
        prop_assert!(parity.im.abs() <= 1e-10 * (1.0 + a.norm_sqr()));
    }

    #[test]
    fn truncated_count_sums_match_classes(a in state(2, 3, 1.5), m in 0usize..2) {
        let mut sums = [0.0; 3];
        for n in 0..60u32 {
            let w = project_photon_number(&a, m, n).unwrap().norm_sqr();
            sums[OutcomeClass::ALL.iter().position(|&c| c.contains(n)).unwrap()] += w;
        }
        for (k, c) in OutcomeClass::ALL.iter().enumerate() {
            prop_assert!((sums[k] - weight(&a, m, *c)).abs() <= 1e-9 * (1.0 + a.norm_sqr()));
        }
    }

    #[test]
    fn number_basis_gates_agree(a in state(2, 3, 1.0), psi in -4.0..4.0f64, beta in complex(0.7)) {
        let cutoff = 40;
        let f = encode(&a, cutoff, 1e-10).unwrap();
        let checks = [
            (apply_bps_fock(&f, 0, 1).unwrap(), apply_bps(&a, 0, 1).unwrap()),
            (apply_phase_fock(&f, 1, psi).unwrap(), apply_phase(&a, 1, psi).unwrap()),
            (apply_displacement_fock(&f, 0, beta, 1e-10).unwrap(), apply_displacement(&a, 0, beta).unwrap()),
        ];
        for (fock, engine) in checks {
            let e = encode(&engine, cutoff, 1e-10).unwrap();
            let scale = 1.0 + e.norm_sqr();
            prop_assert!(close(fock.inner(&e).unwrap(), C64::new(e.norm_sqr(), 0.0), 1e-9 * scale));
        }
    }

    #[test]
    fn fidelity_is_bounded(a in state(1, 3, 2.0), b in state(1, 3, 2.0)) {
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
    }
}
