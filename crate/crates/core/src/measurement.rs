//! Photon-number-resolving detection on coherent superpositions.
//!
//! Detector outcomes are grouped into three classes (zero, even nonzero, odd).
//! Class probabilities are exact: each class is a finite combination of the
//! identity, the parity operator `Π` and the vacuum projector, all of which have
//! closed-form coherent matrix elements:
//!
//! * `<b|Π|d> = <b|-d>`
//! * `<b|0><0|d> = exp(-(|b|^2 + |d|^2)/2)`
//! * even nonzero `= (I + Π)/2 - |0><0|`, odd `= (I - Π)/2`

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::coherent::{coherent_overlap, fidelity, CoherentTerm, StateVector, NORMALIZED_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutcomeClass {
    Zero,
    EvenNonzero,
    Odd,
}

impl OutcomeClass {
    pub const ALL: [OutcomeClass; 3] = [OutcomeClass::Zero, OutcomeClass::EvenNonzero, OutcomeClass::Odd];

    pub fn of(n: u32) -> Self {
        if n == 0 {
            OutcomeClass::Zero
        } else if n % 2 == 0 {
            OutcomeClass::EvenNonzero
        } else {
            OutcomeClass::Odd
        }
    }

    pub fn contains(self, n: u32) -> bool {
        Self::of(n) == self
    }

    /// The two smallest counts in the class (one for `Zero`).
    pub fn representatives(self) -> &'static [u32] {
        match self {
            OutcomeClass::Zero => &[0],
            OutcomeClass::EvenNonzero => &[2, 4],
            OutcomeClass::Odd => &[1, 3],
        }
    }

    pub fn is_nonzero(self) -> bool {
        self != OutcomeClass::Zero
    }

    /// Single-mode matrix element `<b| class |d>`.
    pub fn matrix_element(self, b: C64, d: C64) -> C64 {
        let ov = coherent_overlap(b, d);
        let par = coherent_overlap(b, -d);
        let vac = C64::new((-(b.norm_sqr() + d.norm_sqr()) / 2.0).exp(), 0.0);
        match self {
            OutcomeClass::Zero => vac,
            OutcomeClass::EvenNonzero => (ov + par) / 2.0 - vac,
            OutcomeClass::Odd => (ov - par) / 2.0,
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            OutcomeClass::Zero => "0",
            OutcomeClass::EvenNonzero => "E",
            OutcomeClass::Odd => "O",
        }
    }
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeClass::Zero => "ZERO",
            OutcomeClass::EvenNonzero => "EVEN",
            OutcomeClass::Odd => "ODD",
        })
    }
}

/// One outcome class per measured mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DetectionPattern(pub Vec<OutcomeClass>);

impl DetectionPattern {
    pub fn new(classes: Vec<OutcomeClass>) -> Self {
        Self(classes)
    }

    pub fn classes(&self) -> &[OutcomeClass] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `3^len` patterns in lexicographic class order.
    pub fn all(len: usize) -> Vec<DetectionPattern> {
        let total = 3usize.pow(len as u32);
        (0..total)
            .map(|mut code| {
                let mut v = vec![OutcomeClass::Zero; len];
                for slot in v.iter_mut().rev() {
                    *slot = OutcomeClass::ALL[code % 3];
                    code /= 3;
                }
                DetectionPattern(v)
            })
            .collect()
    }
}

impl fmt::Display for DetectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(c.short())?;
        }
        Ok(())
    }
}

fn ln_factorial(n: u32) -> f64 {
    // 20! still fits in a u64
    if n <= 20 {
        ((1..=n as u64).product::<u64>() as f64).ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `<n|alpha> = e^{-|alpha|^2/2} alpha^n / sqrt(n!)`.
pub fn fock_amplitude(n: u32, alpha: C64) -> C64 {
    let r2 = alpha.norm_sqr();
    if r2 == 0.0 {
        return if n == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    let log_mag = -r2 / 2.0 + n as f64 * 0.5 * r2.ln() - 0.5 * ln_factorial(n);
    C64::from_polar(log_mag.exp(), n as f64 * alpha.arg())
}

fn check_measured(state: &StateVector, modes: &[usize]) -> Result<()> {
    for (k, &m) in modes.iter().enumerate() {
        if m >= state.mode_count() {
            return Err(Error::MeasurementWiring(format!(
                "mode {m} out of range for a {}-mode state",
                state.mode_count()
            )));
        }
        if modes[..k].contains(&m) {
            return Err(Error::MeasurementWiring(format!("mode {m} measured twice")));
        }
    }
    Ok(())
}

/// Projects several modes onto exact photon numbers and removes them. The result
/// is unnormalized; its squared norm is the joint probability for a normalized input.
pub fn project_counts(state: &StateVector, counts: &[(usize, u32)]) -> Result<StateVector> {
    let modes: Vec<usize> = counts.iter().map(|&(m, _)| m).collect();
    check_measured(state, &modes)?;
    let keep: Vec<usize> = (0..state.mode_count()).filter(|m| !modes.contains(m)).collect();
    let terms = state
        .terms()
        .iter()
        .map(|t| {
            let amp: C64 = counts.iter().map(|&(m, n)| fock_amplitude(n, t.labels[m])).product();
            CoherentTerm::new(t.coeff * amp, keep.iter().map(|&k| t.labels[k]).collect())
        })
        .collect();
    // drop negligible terms relative to the largest one, not absolutely
    let raw = StateVector::new(keep.len(), terms)?;
    let m = raw.max_coeff();
    if m > 0.0 {
        Ok(raw.scale(C64::new(1.0 / m, 0.0)).canonical().scale(C64::new(m, 0.0)))
    } else {
        Ok(raw.canonical())
    }
}

pub fn project_photon_number(state: &StateVector, m: usize, n: u32) -> Result<StateVector> {
    project_counts(state, &[(m, n)])
}

/// Precomputed Gram factors for repeated class-probability queries on one state.
pub struct PatternEvaluator {
    measured: Vec<usize>,
    n_terms: usize,
    /// `conj(c_s) c_t` times the overlap product over unmeasured modes.
    base: Vec<C64>,
    /// `[measured index][class][s * n_terms + t]`
    elements: Vec<[Vec<C64>; 3]>,
    norm_sqr: f64,
}

impl PatternEvaluator {
    pub fn new(state: &StateVector, measured_modes: &[usize]) -> Result<Self> {
        check_measured(state, measured_modes)?;
        let terms = state.terms();
        let n = terms.len();
        let mut base = vec![C64::new(0.0, 0.0); n * n];
        let mut elements: Vec<[Vec<C64>; 3]> = measured_modes
            .iter()
            .map(|_| {
                [
                    vec![C64::new(0.0, 0.0); n * n],
                    vec![C64::new(0.0, 0.0); n * n],
                    vec![C64::new(0.0, 0.0); n * n],
                ]
            })
            .collect();
        for (s, ts) in terms.iter().enumerate() {
            for (t, tt) in terms.iter().enumerate() {
                let idx = s * n + t;
                let mut b = ts.coeff.conj() * tt.coeff;
                for m in 0..state.mode_count() {
                    if !measured_modes.contains(&m) {
                        b *= coherent_overlap(ts.labels[m], tt.labels[m]);
                    }
                }
                base[idx] = b;
                for (k, &m) in measured_modes.iter().enumerate() {
                    for (ci, class) in OutcomeClass::ALL.iter().enumerate() {
                        elements[k][ci][idx] = class.matrix_element(ts.labels[m], tt.labels[m]);
                    }
                }
            }
        }
        Ok(Self {
            measured: measured_modes.to_vec(),
            n_terms: n,
            base,
            elements,
            norm_sqr: state.norm_sqr(),
        })
    }

    pub fn measured_modes(&self) -> &[usize] {
        &self.measured
    }

    /// `<psi| ⊗_k class_k |psi>` without normalization.
    pub fn weight(&self, pattern: &DetectionPattern) -> Result<f64> {
        if pattern.len() != self.measured.len() {
            return Err(Error::MeasurementWiring(format!(
                "pattern has {} entries for {} measured modes",
                pattern.len(),
                self.measured.len()
            )));
        }
        let class_idx: Vec<usize> = pattern
            .classes()
            .iter()
            .map(|c| OutcomeClass::ALL.iter().position(|x| x == c).expect("class"))
            .collect();
        let mut acc = 0.0;
        for idx in 0..self.n_terms * self.n_terms {
            let mut v = self.base[idx];
            for (k, &ci) in class_idx.iter().enumerate() {
                v *= self.elements[k][ci][idx];
            }
            acc += v.re;
        }
        Ok(acc)
    }

    /// Class probability, i.e. the weight divided by the state's squared norm.
    pub fn probability(&self, pattern: &DetectionPattern) -> Result<f64> {
        Ok(self.weight(pattern)? / self.norm_sqr)
    }
}

/// Exact probability of a detection pattern on a normalized state.
pub fn class_probability(state: &StateVector, pattern: &DetectionPattern, measured_modes: &[usize]) -> Result<f64> {
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORMALIZED_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    PatternEvaluator::new(state, measured_modes)?.weight(pattern)
}

#[derive(Debug, Clone)]
pub struct Herald {
    /// Normalized conditional state on the unmeasured modes.
    pub state: StateVector,
    pub probability: f64,
}

/// Fails unless every label on mode `m` is `0`, `+g` or `-g` for one `g`.
pub fn check_grid(state: &StateVector, m: usize) -> Result<()> {
    let labels: Vec<C64> = state.terms().iter().map(|t| t.labels[m]).collect();
    let gamma = labels
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_default();
    let tol = 1e-9 * gamma.norm().max(1.0);
    let on_grid = labels
        .iter()
        .all(|&l| l.norm() <= tol || (l - gamma).norm() <= tol || (l + gamma).norm() <= tol);
    if on_grid {
        Ok(())
    } else {
        Err(Error::HeterogeneousClass { mode: m })
    }
}

/// Pure conditional state for a class pattern.
///
/// Requires every measured mode's labels to lie on a `{+g, -g, 0}` grid, which
/// makes the normalized conditional state the same for every count in a class.
/// That is verified by comparing the two smallest counts of each nonzero class.
pub fn herald_class(state: &StateVector, pattern: &DetectionPattern, measured_modes: &[usize]) -> Result<Herald> {
    let projected = herald_state(state, pattern, measured_modes)?;
    let probability = PatternEvaluator::new(state, measured_modes)?.probability(pattern)?;
    Ok(Herald {
        state: projected,
        probability,
    })
}

/// The normalized conditional state of [`herald_class`], without the probability.
pub fn herald_state(state: &StateVector, pattern: &DetectionPattern, measured_modes: &[usize]) -> Result<StateVector> {
    check_measured(state, measured_modes)?;
    if pattern.len() != measured_modes.len() {
        return Err(Error::MeasurementWiring(format!(
            "pattern has {} entries for {} measured modes",
            pattern.len(),
            measured_modes.len()
        )));
    }
    for &m in measured_modes {
        check_grid(state, m)?;
    }
    let first: Vec<(usize, u32)> = measured_modes
        .iter()
        .zip(pattern.classes())
        .map(|(&m, c)| (m, c.representatives()[0]))
        .collect();
    let projected = project_counts(state, &first)?.rescaled().normalize()?;
    for (k, class) in pattern.classes().iter().enumerate() {
        if let Some(&alt) = class.representatives().get(1) {
            let mut counts = first.clone();
            counts[k].1 = alt;
            let other = project_counts(state, &counts)?.rescaled();
            if other.is_empty() {
                return Err(Error::InconsistentHerald { fidelity: 0.0 });
            }
            let f = fidelity(&projected, &other)?;
            if (f - 1.0).abs() > 1e-10 {
                return Err(Error::InconsistentHerald { fidelity: f });
            }
        }
    }
    Ok(projected)
}
