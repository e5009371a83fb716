//! Ideal linear-optical gates acting on coherent labels.
//!
//! Coherent states are closed under all three gates, so each gate rewrites
//! labels (and, for displacement, coefficients) term by term.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coherent::{CoherentTerm, StateVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// Symmetric beam splitter with phase shifter on modes `(i, j)`.
    Bps { i: usize, j: usize },
    /// Phase shift `label -> e^{i psi} label` on one mode.
    Phase { mode: usize, psi: f64 },
    /// Displacement `D(beta)` on one mode.
    Displace { mode: usize, beta: C64 },
}

impl Gate {
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        match *self {
            Gate::Bps { i, j } => apply_bps(state, i, j),
            Gate::Phase { mode, psi } => apply_phase(state, mode, psi),
            Gate::Displace { mode, beta } => apply_displacement(state, mode, beta),
        }
    }
}

fn check_mode(state: &StateVector, m: usize) -> Result<()> {
    if m >= state.mode_count() {
        return Err(Error::GateWiring(format!(
            "mode {m} out of range for a {}-mode state",
            state.mode_count()
        )));
    }
    Ok(())
}

fn map_terms<F>(state: &StateVector, mut f: F) -> StateVector
where
    F: FnMut(&CoherentTerm) -> CoherentTerm,
{
    let terms = state.terms().iter().map(&mut f).collect();
    StateVector::new(state.mode_count(), terms).expect("gate preserves label counts")
}

/// `|beta>_i |gamma>_j -> |(beta+gamma)/sqrt2>_i |(beta-gamma)/sqrt2>_j`.
pub fn apply_bps(state: &StateVector, i: usize, j: usize) -> Result<StateVector> {
    check_mode(state, i)?;
    check_mode(state, j)?;
    if i == j {
        return Err(Error::GateWiring(format!(
            "beam splitter needs two distinct modes, got ({i}, {j})"
        )));
    }
    Ok(map_terms(state, |t| {
        let mut labels = t.labels.clone();
        let (b, g) = (t.labels[i], t.labels[j]);
        labels[i] = (b + g) * FRAC_1_SQRT_2;
        labels[j] = (b - g) * FRAC_1_SQRT_2;
        CoherentTerm::new(t.coeff, labels)
    }))
}

/// Multiplies the label at `m` by `e^{i psi}`.
pub fn apply_phase(state: &StateVector, m: usize, psi: f64) -> Result<StateVector> {
    check_mode(state, m)?;
    let rot = C64::from_polar(1.0, psi);
    Ok(map_terms(state, |t| {
        let mut labels = t.labels.clone();
        labels[m] *= rot;
        CoherentTerm::new(t.coeff, labels)
    }))
}

/// `D(beta)|delta> = exp[(beta conj(delta) - conj(beta) delta)/2] |beta + delta>`.
pub fn apply_displacement(state: &StateVector, m: usize, beta: C64) -> Result<StateVector> {
    check_mode(state, m)?;
    Ok(map_terms(state, |t| {
        let delta = t.labels[m];
        let phase = ((beta * delta.conj() - beta.conj() * delta) / 2.0).exp();
        let mut labels = t.labels.clone();
        labels[m] = beta + delta;
        CoherentTerm::new(t.coeff * phase, labels)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::fidelity;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn bps_on_equal_and_opposite_labels() {
        let a = 0.8;
        let s = apply_bps(&StateVector::coherent(&[c(a), c(a)]), 0, 1).unwrap();
        assert!(close(s.terms()[0].labels[0], c(SQRT_2 * a), 1e-15));
        assert!(close(s.terms()[0].labels[1], c(0.0), 1e-15));
        let s = apply_bps(&StateVector::coherent(&[c(a), c(-a)]), 0, 1).unwrap();
        assert!(close(s.terms()[0].labels[0], c(0.0), 1e-15));
        assert!(close(s.terms()[0].labels[1], c(SQRT_2 * a), 1e-15));
    }

    #[test]
    fn bps_is_an_involution() {
        let s = StateVector::from_terms(
            2,
            [
                (C64::new(0.3, 0.1), vec![C64::new(0.2, -0.7), c(1.1)]),
                (c(-0.5), vec![c(-0.4), C64::new(0.0, 0.9)]),
            ],
        );
        let back = apply_bps(&apply_bps(&s, 0, 1).unwrap(), 0, 1).unwrap();
        for (x, y) in back.terms().iter().zip(s.terms()) {
            assert_eq!(x.coeff, y.coeff);
            for (l, m) in x.labels.iter().zip(&y.labels) {
                assert!(close(*l, *m, 1e-12));
            }
        }
    }

    #[test]
    fn bps_wiring_errors() {
        let s = StateVector::vacuum(2);
        assert!(matches!(apply_bps(&s, 0, 0), Err(Error::GateWiring(_))));
        assert!(matches!(apply_bps(&s, 0, 2), Err(Error::GateWiring(_))));
        assert!(matches!(apply_phase(&s, 5, 0.1), Err(Error::GateWiring(_))));
        assert!(matches!(apply_displacement(&s, 2, c(0.1)), Err(Error::GateWiring(_))));
    }

    #[test]
    fn phase_examples() {
        let s = StateVector::coherent(&[c(1.3)]);
        assert!(close(
            apply_phase(&s, 0, PI).unwrap().terms()[0].labels[0],
            c(-1.3),
            1e-15
        ));
        assert!(close(
            apply_phase(&s, 0, 0.0).unwrap().terms()[0].labels[0],
            c(1.3),
            0.0
        ));
        let one = StateVector::coherent(&[c(1.0)]);
        let q = apply_phase(&one, 0, FRAC_PI_2).unwrap();
        assert!(close(q.terms()[0].labels[0], C64::new(0.0, 1.0), 1e-15));
    }

    #[test]
    fn displacement_examples() {
        let beta = C64::new(0.4, -0.2);
        let d = apply_displacement(&StateVector::vacuum(1), 0, beta).unwrap();
        assert!(close(d.terms()[0].coeff, c(1.0), 1e-15));
        assert!(close(d.terms()[0].labels[0], beta, 0.0));

        // beta = i pi/2, delta = 1: beta conj(delta) - conj(beta) delta = i pi
        let d = apply_displacement(&StateVector::coherent(&[c(1.0)]), 0, C64::new(0.0, FRAC_PI_2)).unwrap();
        assert!(close(d.terms()[0].coeff, C64::new(0.0, 1.0), 1e-15));
        assert!(close(d.terms()[0].labels[0], C64::new(1.0, FRAC_PI_2), 1e-15));

        let s = StateVector::from_terms(1, [(c(0.6), vec![c(1.0)]), (c(0.8), vec![c(-1.0)])]);
        let there = apply_displacement(&s, 0, beta).unwrap();
        let back = apply_displacement(&there, 0, -beta).unwrap();
        assert!((fidelity(&back, &s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_preparation_identity() {
        let a = 0.9;
        let input = StateVector::from_terms(
            2,
            [
                (c(1.0), vec![c(SQRT_2 * a), c(0.0)]),
                (c(1.0), vec![c(-SQRT_2 * a), c(0.0)]),
            ],
        )
        .normalize()
        .unwrap();
        let out = apply_bps(&input, 0, 1).unwrap();
        let bell = StateVector::from_terms(2, [(c(1.0), vec![c(a), c(a)]), (c(1.0), vec![c(-a), c(-a)])]);
        assert!((fidelity(&out, &bell).unwrap() - 1.0).abs() < 1e-12);
    }
}
