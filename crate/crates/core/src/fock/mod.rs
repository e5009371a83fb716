//! Brute-force photon-number-basis simulator used to cross-check the coherent engine.
//!
//! Nothing here evolves states through the coherent-label algebra; coherent
//! states enter only as number-basis expansions computed locally.

mod factored;
mod verify;

pub use factored::FactoredProtocol;
pub use verify::{verify_protocol, GateCheck, OutcomeCheck, VerifyConfig, VerifyReport};

use crate::coherent::StateVector;
use crate::error::{Error, Result};
use crate::measurement::{DetectionPattern, OutcomeClass};
use crate::C64;

/// Default truncation tolerance on the mass beyond the cutoff.
pub const DEFAULT_EPS: f64 = 1e-10;

/// Largest dense tensor we agree to allocate.
pub const MAX_ENTRIES: usize = 1 << 26;

/// `8 ceil(|a|^2) + 16`
pub fn default_cutoff(amplitude: f64) -> usize {
    8 * (amplitude * amplitude).ceil() as usize + 16
}

/// `<n|z>` by the ratio recurrence `a_n = a_{n-1} z / sqrt(n)`.
pub fn number_amplitudes(z: C64, cutoff: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut a = C64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
    out.push(a);
    for n in 1..=cutoff {
        a = a * z / (n as f64).sqrt();
        out.push(a);
    }
    out
}

/// Poisson mass of `|z>` above the cutoff, summed directly to avoid cancellation.
pub fn truncation_tail(z: C64, cutoff: usize) -> f64 {
    let mean = z.norm_sqr();
    let mut p = (-mean).exp();
    for n in 1..=cutoff {
        p *= mean / n as f64;
    }
    let mut tail = 0.0;
    let mut n = cutoff + 1;
    loop {
        p *= mean / n as f64;
        tail += p;
        if p < 1e-18 * tail.max(1e-300) || p == 0.0 || n > cutoff + 10_000 {
            break;
        }
        n += 1;
    }
    tail
}

/// Smallest cutoff that keeps the tail of `|z>` under `eps`.
pub fn suggested_cutoff(amplitude: f64, eps: f64) -> usize {
    let z = C64::new(amplitude, 0.0);
    let mut n = 1;
    while truncation_tail(z, n) > eps {
        n += 1;
    }
    n.max(default_cutoff(amplitude).min(n + 8))
}

pub(crate) fn check_label_tail(z: C64, cutoff: usize, eps: f64) -> Result<()> {
    let tail = truncation_tail(z, cutoff);
    if tail > eps {
        return Err(Error::CutoffTooSmall {
            cutoff,
            tail,
            eps,
            suggested: suggested_cutoff(z.norm(), eps),
        });
    }
    Ok(())
}

fn ln_fact(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn ln_fact_table(max: usize) -> Vec<f64> {
    let mut t = vec![0.0; max + 1];
    for k in 1..=max {
        t[k] = t[k - 1] + (k as f64).ln();
    }
    t
}

/// Dense amplitudes over `(cutoff+1)^mode_count` number states, last mode fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTensor {
    mode_count: usize,
    cutoff: usize,
    amps: Vec<C64>,
}

impl FockTensor {
    pub fn zeros(mode_count: usize, cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
        }
        let len = (cutoff + 1)
            .checked_pow(mode_count as u32)
            .filter(|&l| l <= MAX_ENTRIES)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "{mode_count} modes at cutoff {cutoff} exceed the dense tensor limit"
                ))
            })?;
        Ok(Self {
            mode_count,
            cutoff,
            amps: vec![C64::new(0.0, 0.0); len],
        })
    }

    pub fn from_amplitudes(mode_count: usize, cutoff: usize, amps: Vec<C64>) -> Result<Self> {
        let t = Self::zeros(mode_count, cutoff)?;
        if amps.len() != t.amps.len() {
            return Err(Error::DimensionMismatch {
                left: amps.len(),
                right: t.amps.len(),
            });
        }
        Ok(Self { amps, ..t })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn index(&self, counts: &[usize]) -> usize {
        counts.iter().fold(0, |acc, &n| acc * self.dim() + n)
    }

    pub fn counts(&self, mut idx: usize) -> Vec<usize> {
        let d = self.dim();
        let mut out = vec![0; self.mode_count];
        for k in (0..self.mode_count).rev() {
            out[k] = idx % d;
            idx /= d;
        }
        out
    }

    pub fn amplitude(&self, counts: &[usize]) -> C64 {
        self.amps[self.index(counts)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, ket: &FockTensor) -> Result<C64> {
        if self.mode_count != ket.mode_count || self.cutoff != ket.cutoff {
            return Err(Error::DimensionMismatch {
                left: self.amps.len(),
                right: ket.amps.len(),
            });
        }
        Ok(self.amps.iter().zip(&ket.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn fidelity(&self, other: &FockTensor) -> Result<f64> {
        let (na, nb) = (self.norm_sqr(), other.norm_sqr());
        if na == 0.0 || nb == 0.0 {
            return Err(Error::DegenerateState {
                norm: na.min(nb).sqrt(),
            });
        }
        Ok(self.inner(other)?.norm_sqr() / (na * nb))
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::DegenerateState { norm: 0.0 });
        }
        Ok(Self {
            amps: self.amps.iter().map(|a| a / n).collect(),
            ..self.clone()
        })
    }

    /// Mass on states where some mode sits at the cutoff.
    pub fn tail_mass(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| self.counts(*i).contains(&self.cutoff))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn check_mode(&self, m: usize) -> Result<()> {
        if m >= self.mode_count {
            return Err(Error::GateWiring(format!(
                "mode {m} out of range for a {}-mode tensor",
                self.mode_count
            )));
        }
        Ok(())
    }

    /// Stride of mode `m` in the flat index.
    fn stride(&self, m: usize) -> usize {
        self.dim().pow((self.mode_count - 1 - m) as u32)
    }
}

/// Number-basis expansion of a coherent superposition.
pub fn encode(state: &StateVector, cutoff: usize, eps: f64) -> Result<FockTensor> {
    let mut t = FockTensor::zeros(state.mode_count(), cutoff)?;
    for term in state.terms() {
        for &z in &term.labels {
            check_label_tail(z, cutoff, eps)?;
        }
    }
    let d = cutoff + 1;
    for term in state.terms() {
        let per_mode: Vec<Vec<C64>> = term.labels.iter().map(|&z| number_amplitudes(z, cutoff)).collect();
        let mut acc = vec![term.coeff];
        for amps in &per_mode {
            let mut next = Vec::with_capacity(acc.len() * d);
            for a in &acc {
                next.extend(amps.iter().map(|b| a * b));
            }
            acc = next;
        }
        for (slot, v) in t.amps.iter_mut().zip(acc) {
            *slot += v;
        }
    }
    Ok(t)
}

/// `|m, n> -> sum_p c_p |p, m+n-p>` from `a^+ -> (c^+ + d^+)/sqrt2`, `b^+ -> (c^+ - d^+)/sqrt2`.
fn bps_row(m: usize, n: usize, lf: &[f64]) -> Vec<(usize, f64)> {
    let total = m + n;
    let mut coeffs = vec![0.0; total + 1];
    let norm = -0.5 * (lf[m] + lf[n]) - 0.5 * total as f64 * std::f64::consts::LN_2;
    for j in 0..=m {
        for k in 0..=n {
            let p = j + k;
            let q = total - p;
            let ln = lf[m] - lf[j] - lf[m - j] + lf[n] - lf[k] - lf[n - k] + 0.5 * (lf[p] + lf[q]) + norm;
            let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[p] += sign * ln.exp();
        }
    }
    coeffs.into_iter().enumerate().collect()
}

pub fn apply_bps_fock(t: &FockTensor, i: usize, j: usize) -> Result<FockTensor> {
    t.check_mode(i)?;
    t.check_mode(j)?;
    if i == j {
        return Err(Error::GateWiring(format!(
            "beam splitter needs two distinct modes, got ({i}, {j})"
        )));
    }
    let d = t.dim();
    let lf = ln_fact_table(2 * d);
    let table: Vec<Vec<(usize, f64)>> = (0..d * d).map(|mn| bps_row(mn / d, mn % d, &lf)).collect();
    let (si, sj) = (t.stride(i), t.stride(j));
    let mut out = FockTensor::zeros(t.mode_count, t.cutoff)?;
    for (idx, &amp) in t.amps.iter().enumerate() {
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        let m = (idx / si) % d;
        let n = (idx / sj) % d;
        let base = idx - m * si - n * sj;
        for &(p, c) in &table[m * d + n] {
            let q = m + n - p;
            if p < d && q < d {
                out.amps[base + p * si + q * sj] += amp * c;
            }
        }
    }
    Ok(out)
}

/// `|n> -> e^{i n psi} |n>`, the number-basis form of `label -> e^{i psi} label`.
pub fn apply_phase_fock(t: &FockTensor, m: usize, psi: f64) -> Result<FockTensor> {
    t.check_mode(m)?;
    let (d, s) = (t.dim(), t.stride(m));
    let mut out = t.clone();
    for (idx, a) in out.amps.iter_mut().enumerate() {
        let n = (idx / s) % d;
        *a *= C64::from_polar(1.0, n as f64 * psi);
    }
    Ok(out)
}

/// Generalized Laguerre `L_n^{(k)}(x)` by the three-term recurrence.
fn laguerre(n: usize, k: usize, x: f64) -> f64 {
    let k = k as f64;
    let (mut prev, mut cur) = (1.0, 1.0 + k - x);
    if n == 0 {
        return prev;
    }
    for i in 1..n {
        let i = i as f64;
        let next = ((2.0 * i + 1.0 + k - x) * cur - (i + k) * prev) / (i + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `<p|D(beta)|n>`.
fn displacement_element(p: usize, n: usize, beta: C64) -> C64 {
    let x = beta.norm_sqr();
    let damp = (-x / 2.0).exp();
    if p >= n {
        let r = (0.5 * (ln_fact(n) - ln_fact(p))).exp();
        beta.powu((p - n) as u32) * (r * damp * laguerre(n, p - n, x))
    } else {
        let r = (0.5 * (ln_fact(p) - ln_fact(n))).exp();
        (-beta.conj()).powu((n - p) as u32) * (r * damp * laguerre(p, n - p, x))
    }
}

/// Displacement in the truncated space. Mass pushed past the cutoff is lost;
/// more than `eps` of it is reported as a too-small cutoff.
pub fn apply_displacement_fock(t: &FockTensor, m: usize, beta: C64, eps: f64) -> Result<FockTensor> {
    t.check_mode(m)?;
    let (d, s) = (t.dim(), t.stride(m));
    let matrix: Vec<C64> = (0..d * d)
        .map(|pn| displacement_element(pn / d, pn % d, beta))
        .collect();
    let mut out = FockTensor::zeros(t.mode_count, t.cutoff)?;
    for (idx, &amp) in t.amps.iter().enumerate() {
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        let n = (idx / s) % d;
        let base = idx - n * s;
        for p in 0..d {
            out.amps[base + p * s] += matrix[p * d + n] * amp;
        }
    }
    let lost = t.norm_sqr() - out.norm_sqr();
    if lost > eps {
        let mean: f64 = t
            .amps
            .iter()
            .enumerate()
            .map(|(idx, a)| ((idx / s) % d) as f64 * a.norm_sqr())
            .sum::<f64>()
            / t.norm_sqr();
        return Err(Error::CutoffTooSmall {
            cutoff: t.cutoff,
            tail: lost,
            eps,
            suggested: suggested_cutoff(mean.sqrt() + beta.norm(), eps),
        });
    }
    Ok(out)
}

fn check_measured(t: &FockTensor, modes: &[usize]) -> Result<()> {
    for (k, &m) in modes.iter().enumerate() {
        t.check_mode(m)?;
        if modes[..k].contains(&m) {
            return Err(Error::MeasurementWiring(format!("mode {m} measured twice")));
        }
    }
    Ok(())
}

/// Class-pattern probability by explicit summation (the tensor's own norm is not divided out).
pub fn pattern_probability(t: &FockTensor, pattern: &DetectionPattern, measured: &[usize]) -> Result<f64> {
    check_measured(t, measured)?;
    if pattern.len() != measured.len() {
        return Err(Error::MeasurementWiring(format!(
            "pattern has {} entries for {} measured modes",
            pattern.len(),
            measured.len()
        )));
    }
    let (d, classes) = (t.dim(), pattern.classes());
    let strides: Vec<usize> = measured.iter().map(|&m| t.stride(m)).collect();
    Ok(t.amps
        .iter()
        .enumerate()
        .filter(|(idx, _)| {
            strides
                .iter()
                .zip(classes)
                .all(|(&s, c): (&usize, &OutcomeClass)| c.contains(((idx / s) % d) as u32))
        })
        .map(|(_, a)| a.norm_sqr())
        .sum())
}

/// Unnormalized slice at exact counts; the measured modes are removed.
pub fn herald_fock(t: &FockTensor, counts: &[(usize, usize)]) -> Result<FockTensor> {
    let modes: Vec<usize> = counts.iter().map(|&(m, _)| m).collect();
    check_measured(t, &modes)?;
    if let Some(&(_, n)) = counts.iter().find(|&&(_, n)| n > t.cutoff) {
        return Err(Error::InvalidParameter(format!(
            "count {n} exceeds cutoff {}",
            t.cutoff
        )));
    }
    let keep: Vec<usize> = (0..t.mode_count).filter(|m| !modes.contains(m)).collect();
    if keep.is_empty() {
        return Err(Error::MeasurementWiring("every mode is measured".into()));
    }
    let mut out = FockTensor::zeros(keep.len(), t.cutoff)?;
    let mut full = vec![0; t.mode_count];
    for &(m, n) in counts {
        full[m] = n;
    }
    for (idx, slot) in out.amps.iter_mut().enumerate() {
        let rest = {
            let mut r = vec![0; keep.len()];
            let mut i = idx;
            for k in (0..keep.len()).rev() {
                r[k] = i % t.dim();
                i /= t.dim();
            }
            r
        };
        for (k, &m) in keep.iter().enumerate() {
            full[m] = rest[k];
        }
        *slot = t.amps[t.index(&full)];
    }
    Ok(out)
}
