//! Finite superpositions of multimode coherent states.
//!
//! A [`StateVector`] is a list of [`CoherentTerm`]s, each a complex coefficient
//! times a product of coherent states `|l_0, l_1, ..., l_{m-1}>`. Because
//! coherent states are not orthogonal, every contraction goes through the Gram
//! sum of pairwise overlaps; nothing here expands into a number basis.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Labels closer than this (componentwise) are merged by [`StateVector::canonical`].
pub const MERGE_TOL: f64 = 1e-9;
/// Terms whose coefficient magnitude falls below this are dropped on canonicalization.
pub const DROP_TOL: f64 = 1e-13;
/// Below this norm a state is treated as the zero vector.
pub const SINGULAR_TOL: f64 = 1e-14;
/// Tolerance for the "normalized" predicate on `|<psi|psi> - 1|`.
pub const NORMALIZED_TOL: f64 = 1e-10;

/// `<beta|delta> = exp[-(|beta|^2 + |delta|^2 - 2 conj(beta) delta) / 2]`.
pub fn coherent_overlap(beta: C64, delta: C64) -> C64 {
    let exponent = -(beta.norm_sqr() + delta.norm_sqr() - 2.0 * beta.conj() * delta) / 2.0;
    exponent.exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentTerm {
    pub coeff: C64,
    pub labels: Vec<C64>,
}

impl CoherentTerm {
    pub fn new(coeff: C64, labels: Vec<C64>) -> Self {
        Self { coeff, labels }
    }

    fn is_finite(&self) -> bool {
        self.coeff.is_finite() && self.labels.iter().all(|l| l.is_finite())
    }

    fn labels_close(&self, other: &CoherentTerm, tol: f64) -> bool {
        self.labels
            .iter()
            .zip(&other.labels)
            .all(|(a, b)| (a.re - b.re).abs() <= tol && (a.im - b.im).abs() <= tol)
    }

    /// Product of single-mode overlaps with another term's labels, coefficients excluded.
    pub fn label_overlap(&self, ket: &CoherentTerm) -> C64 {
        self.labels
            .iter()
            .zip(&ket.labels)
            .map(|(&b, &k)| coherent_overlap(b, k))
            .product()
    }
}

/// Immutable superposition of coherent product states over a fixed number of modes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateVector {
    mode_count: usize,
    terms: Vec<CoherentTerm>,
}

impl StateVector {
    pub fn new(mode_count: usize, terms: Vec<CoherentTerm>) -> Result<Self> {
        for t in &terms {
            if t.labels.len() != mode_count {
                return Err(Error::LabelCount {
                    expected: mode_count,
                    got: t.labels.len(),
                });
            }
            if !t.is_finite() {
                return Err(Error::NonFinite("coherent term"));
            }
        }
        Ok(Self { mode_count, terms })
    }

    /// The 0-mode state carrying a bare scalar; the identity for [`tensor`](Self::tensor).
    pub fn scalar(coeff: C64) -> Self {
        Self {
            mode_count: 0,
            terms: vec![CoherentTerm::new(coeff, Vec::new())],
        }
    }

    /// A single product state `|labels>` with unit coefficient.
    pub fn coherent(labels: &[C64]) -> Self {
        Self {
            mode_count: labels.len(),
            terms: vec![CoherentTerm::new(C64::new(1.0, 0.0), labels.to_vec())],
        }
    }

    pub fn vacuum(mode_count: usize) -> Self {
        Self::coherent(&vec![C64::new(0.0, 0.0); mode_count])
    }

    pub fn zero(mode_count: usize) -> Self {
        Self {
            mode_count,
            terms: Vec::new(),
        }
    }

    /// Builds a state from `(coeff, labels)` pairs. Panics on inconsistent label counts,
    /// so it is meant for literals whose shape is known at the call site.
    pub fn from_terms<I>(mode_count: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (C64, Vec<C64>)>,
    {
        let terms = terms.into_iter().map(|(c, l)| CoherentTerm::new(c, l)).collect();
        Self::new(mode_count, terms).expect("literal state with consistent label counts")
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn terms(&self) -> &[CoherentTerm] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<CoherentTerm> {
        self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `<self|ket>` as the Gram sum over term pairs.
    pub fn inner(&self, ket: &StateVector) -> Result<C64> {
        if self.mode_count != ket.mode_count {
            return Err(Error::DimensionMismatch {
                left: self.mode_count,
                right: ket.mode_count,
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for s in &self.terms {
            for t in &ket.terms {
                acc += s.coeff.conj() * t.coeff * s.label_overlap(t);
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = 0.0;
        for (i, s) in self.terms.iter().enumerate() {
            acc += s.coeff.norm_sqr();
            for t in &self.terms[i + 1..] {
                acc += 2.0 * (s.coeff.conj() * t.coeff * s.label_overlap(t)).re;
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().max(0.0).sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORMALIZED_TOL
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if !(norm > SINGULAR_TOL) {
            return Err(Error::DegenerateState { norm });
        }
        Ok(self.scale(C64::new(1.0 / norm, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            mode_count: self.mode_count,
            terms: self
                .terms
                .iter()
                .map(|t| CoherentTerm::new(s * t.coeff, t.labels.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &StateVector) -> Result<Self> {
        if self.mode_count != other.mode_count {
            return Err(Error::DimensionMismatch {
                left: self.mode_count,
                right: other.mode_count,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            mode_count: self.mode_count,
            terms,
        })
    }

    /// `self ⊗ other`, with `self`'s modes first.
    pub fn tensor(&self, other: &StateVector) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut labels = Vec::with_capacity(self.mode_count + other.mode_count);
                labels.extend_from_slice(&a.labels);
                labels.extend_from_slice(&b.labels);
                terms.push(CoherentTerm::new(a.coeff * b.coeff, labels));
            }
        }
        Self {
            mode_count: self.mode_count + other.mode_count,
            terms,
        }
    }

    /// Merges terms whose label vectors agree within `tol` and drops near-zero terms.
    pub fn canonicalize(&self, tol: f64) -> Self {
        let mut merged: Vec<CoherentTerm> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            match merged.iter_mut().find(|m| m.labels_close(t, tol)) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t.clone()),
            }
        }
        merged.retain(|t| t.coeff.norm() >= DROP_TOL);
        Self {
            mode_count: self.mode_count,
            terms: merged,
        }
    }

    /// Largest coefficient magnitude, 0 for the empty state.
    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    /// Rescaled so the largest coefficient has magnitude 1. Keeps heavily
    /// damped projections away from the absolute drop and singular tolerances.
    pub fn rescaled(&self) -> Self {
        let m = self.max_coeff();
        if m > 0.0 && m.is_finite() {
            self.scale(C64::new(1.0 / m, 0.0))
        } else {
            self.clone()
        }
    }

    pub fn canonical(&self) -> Self {
        self.canonicalize(MERGE_TOL)
    }

    /// Reorders modes so that new mode `k` is old mode `order[k]`.
    pub fn permute_modes(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.mode_count];
        if order.len() != self.mode_count {
            return Err(Error::DimensionMismatch {
                left: self.mode_count,
                right: order.len(),
            });
        }
        for &o in order {
            if o >= self.mode_count || seen[o] {
                return Err(Error::GateWiring(format!("invalid mode permutation {order:?}")));
            }
            seen[o] = true;
        }
        let terms = self
            .terms
            .iter()
            .map(|t| CoherentTerm::new(t.coeff, order.iter().map(|&o| t.labels[o]).collect()))
            .collect();
        Ok(Self {
            mode_count: self.mode_count,
            terms,
        })
    }

    /// Factors `self` as `left ⊗ right` across the first `left_modes` modes.
    ///
    /// Distinct coherent product states are linearly independent, so after
    /// canonicalization the state is a product exactly when its coefficient
    /// matrix (rows: left label vectors, columns: right label vectors) has rank one.
    /// The reconstruction is then checked by fidelity.
    pub fn split_product(&self, left_modes: usize) -> Result<(StateVector, StateVector)> {
        if left_modes > self.mode_count {
            return Err(Error::DimensionMismatch {
                left: left_modes,
                right: self.mode_count,
            });
        }
        let canon = self.canonical();
        if canon.is_empty() {
            return Err(Error::DegenerateState { norm: 0.0 });
        }
        let left_idx: Vec<usize> = (0..left_modes).collect();
        let right_idx: Vec<usize> = (left_modes..self.mode_count).collect();

        let mut rows: Vec<CoherentTerm> = Vec::new();
        let mut cols: Vec<CoherentTerm> = Vec::new();
        let mut entries: Vec<(usize, usize, C64)> = Vec::new();
        for t in canon.terms() {
            let l = CoherentTerm::new(C64::new(1.0, 0.0), left_idx.iter().map(|&i| t.labels[i]).collect());
            let r = CoherentTerm::new(C64::new(1.0, 0.0), right_idx.iter().map(|&i| t.labels[i]).collect());
            let j = position_or_push(&mut rows, l);
            let k = position_or_push(&mut cols, r);
            entries.push((j, k, t.coeff));
        }
        let mut matrix = vec![vec![C64::new(0.0, 0.0); cols.len()]; rows.len()];
        for (j, k, c) in entries {
            matrix[j][k] += c;
        }
        let (j0, k0) = (0..rows.len())
            .flat_map(|j| (0..cols.len()).map(move |k| (j, k)))
            .max_by(|&(a, b), &(c, d)| matrix[a][b].norm().total_cmp(&matrix[c][d].norm()))
            .expect("non-empty matrix");
        let pivot = matrix[j0][k0];

        let left = StateVector {
            mode_count: left_modes,
            terms: rows
                .iter()
                .enumerate()
                .map(|(j, r)| CoherentTerm::new(matrix[j][k0], r.labels.clone()))
                .collect(),
        };
        let right = StateVector {
            mode_count: self.mode_count - left_modes,
            terms: cols
                .iter()
                .enumerate()
                .map(|(k, c)| CoherentTerm::new(matrix[j0][k] / pivot, c.labels.clone()))
                .collect(),
        };
        let f = fidelity(&left.tensor(&right), self)?;
        if f < 1.0 - 1e-10 {
            return Err(Error::Factorization { fidelity: f });
        }
        Ok((left, right))
    }
}

fn position_or_push(list: &mut Vec<CoherentTerm>, item: CoherentTerm) -> usize {
    match list.iter().position(|x| x.labels_close(&item, MERGE_TOL)) {
        Some(p) => p,
        None => {
            list.push(item);
            list.len() - 1
        }
    }
}

pub fn inner_product(bra: &StateVector, ket: &StateVector) -> Result<C64> {
    bra.inner(ket)
}

/// `|<a|b>|^2` between the normalized inputs.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    let na = a.norm();
    let nb = b.norm();
    if !(na > SINGULAR_TOL) {
        return Err(Error::DegenerateState { norm: na });
    }
    if !(nb > SINGULAR_TOL) {
        return Err(Error::DegenerateState { norm: nb });
    }
    let ov = a.inner(b)?;
    Ok(ov.norm_sqr() / (na * na * nb * nb))
}
