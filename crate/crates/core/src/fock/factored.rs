//! The full nine-mode protocol in the number basis.
//!
//! A dense nine-mode tensor is out of reach at useful cutoffs, but before the
//! detectors fire the state is a sum of 64 products: three two-mode blocks
//! (each beam splitter acts inside one block) times single-mode outputs 4, 5, 6.
//! Every block and single is evolved densely; probabilities and heralded
//! states are assembled from the products.

use crate::error::{Error, Result};
use crate::measurement::OutcomeClass;
use crate::protocol::{AliceInfo, BobInfo, ChannelSpec};
use crate::C64;

use super::{apply_bps_fock, check_label_tail, number_amplitudes, suggested_cutoff, FockTensor};

/// Class filter per detector; `None` leaves the detector unobserved.
pub type ClassFilter = Option<OutcomeClass>;

fn filter_index(f: ClassFilter) -> usize {
    match f {
        None => 0,
        Some(OutcomeClass::Zero) => 1,
        Some(OutcomeClass::EvenNonzero) => 2,
        Some(OutcomeClass::Odd) => 3,
    }
}

fn passes(slot: usize, n: usize) -> bool {
    match slot {
        0 => true,
        1 => OutcomeClass::Zero.contains(n as u32),
        2 => OutcomeClass::EvenNonzero.contains(n as u32),
        _ => OutcomeClass::Odd.contains(n as u32),
    }
}

/// Sign index: 0 for `+alpha`, 1 for `-alpha`.
fn sign_index(s: f64) -> usize {
    usize::from(s < 0.0)
}

#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: C64,
    /// Block per beam splitter, `2 * info_sign + channel_sign`.
    blocks: [usize; 3],
    /// Output label sign per mode 4, 5, 6.
    singles: [usize; 3],
}

#[derive(Debug, Clone)]
pub struct FactoredProtocol {
    alpha: f64,
    cutoff: usize,
    terms: Vec<Term>,
    /// Beam-splitter output for input labels `(+-alpha, +-alpha)`.
    blocks: Vec<FockTensor>,
    singles: [Vec<C64>; 2],
    /// `<block b| Pi_{c1} x Pi_{c2} |block b'>`, indexed `[4 b + b'][c1][c2]`.
    block_overlaps: Vec<[[C64; 4]; 4]>,
    single_overlaps: [[C64; 2]; 2],
    norm_sqr: f64,
}

impl FactoredProtocol {
    pub fn new(alice: &AliceInfo, bob: &BobInfo, spec: &ChannelSpec, cutoff: usize, eps: f64) -> Result<Self> {
        let alpha = spec.alpha;
        let a = C64::new(alpha, 0.0);
        check_label_tail(a, cutoff, eps)?;
        check_label_tail(a * std::f64::consts::SQRT_2, cutoff, eps)?;

        let plus = number_amplitudes(a, cutoff);
        let minus = number_amplitudes(-a, cutoff);
        let single = |s: usize| if s == 0 { plus.clone() } else { minus.clone() };

        let mut blocks = Vec::with_capacity(4);
        for b in 0..4 {
            let (u, w) = (single(b / 2), single(b % 2));
            let amps = u.iter().flat_map(|x| w.iter().map(move |y| x * y)).collect();
            let input = FockTensor::from_amplitudes(2, cutoff, amps)?;
            let out = apply_bps_fock(&input, 0, 1)?;
            let lost = input.norm_sqr() - out.norm_sqr();
            if lost > eps {
                return Err(Error::CutoffTooSmall {
                    cutoff,
                    tail: lost,
                    eps,
                    suggested: suggested_cutoff(std::f64::consts::SQRT_2 * alpha, eps),
                });
            }
            blocks.push(out);
        }

        let mut terms = Vec::with_capacity(64);
        for (i, &ai) in alice.a.iter().enumerate() {
            let (s, s2) = AliceInfo::signs(i);
            for (j, &bj) in bob.b.iter().enumerate() {
                let t = if j == 0 { 1.0 } else { -1.0 };
                for sigma in 0..8usize {
                    let chan = [sigma >> 2 & 1, sigma >> 1 & 1, sigma & 1];
                    let info = [sign_index(s), sign_index(s2), sign_index(t)];
                    let mut singles = [0; 3];
                    for k in 0..3 {
                        // partner label is partner_sign times the channel label
                        let chan_sign = if chan[k] == 0 { 1.0 } else { -1.0 };
                        singles[k] = sign_index(chan_sign * spec.variants[k].partner_sign());
                    }
                    terms.push(Term {
                        coeff: ai * bj,
                        blocks: [2 * info[0] + chan[0], 2 * info[1] + chan[1], 2 * info[2] + chan[2]],
                        singles,
                    });
                }
            }
        }

        let d = cutoff + 1;
        let mut block_overlaps = vec![[[C64::new(0.0, 0.0); 4]; 4]; 16];
        for b in 0..4 {
            for b2 in 0..4 {
                let slot = &mut block_overlaps[4 * b + b2];
                for (idx, (x, y)) in blocks[b].amplitudes().iter().zip(blocks[b2].amplitudes()).enumerate() {
                    let v = x.conj() * y;
                    let (m, n) = (idx / d, idx % d);
                    for c1 in 0..4 {
                        if !passes(c1, m) {
                            continue;
                        }
                        for c2 in 0..4 {
                            if passes(c2, n) {
                                slot[c1][c2] += v;
                            }
                        }
                    }
                }
            }
        }
        let singles = [plus, minus];
        let mut single_overlaps = [[C64::new(0.0, 0.0); 2]; 2];
        for u in 0..2 {
            for w in 0..2 {
                single_overlaps[u][w] = singles[u].iter().zip(&singles[w]).map(|(x, y)| x.conj() * y).sum();
            }
        }

        let mut out = Self {
            alpha,
            cutoff,
            terms,
            blocks,
            singles,
            block_overlaps,
            single_overlaps,
            norm_sqr: 1.0,
        };
        let n = out.raw_weight(&[None; 6]);
        if !(n > 0.0) {
            return Err(Error::DegenerateState {
                norm: n.max(0.0).sqrt(),
            });
        }
        out.norm_sqr = n;
        Ok(out)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn raw_weight(&self, filters: &[ClassFilter; 6]) -> f64 {
        let slots: [usize; 6] = std::array::from_fn(|k| filter_index(filters[k]));
        let mut acc = C64::new(0.0, 0.0);
        for s in &self.terms {
            for t in &self.terms {
                let mut v = s.coeff.conj() * t.coeff;
                for k in 0..3 {
                    v *= self.block_overlaps[4 * s.blocks[k] + t.blocks[k]][slots[2 * k]][slots[2 * k + 1]];
                    v *= self.single_overlaps[s.singles[k]][t.singles[k]];
                }
                acc += v;
            }
        }
        acc.re
    }

    /// Probability of a class filter on detectors 7..12 (pattern order).
    pub fn probability(&self, filters: &[ClassFilter; 6]) -> f64 {
        self.raw_weight(filters) / self.norm_sqr
    }

    /// Normalized conditional state of modes 4, 5, 6 at exact detector counts.
    pub fn herald(&self, counts: &[usize; 6]) -> Result<FockTensor> {
        if let Some(&n) = counts.iter().find(|&&n| n > self.cutoff) {
            return Err(Error::InvalidParameter(format!(
                "count {n} exceeds cutoff {}",
                self.cutoff
            )));
        }
        let d = self.cutoff + 1;
        let mut amps = vec![C64::new(0.0, 0.0); d * d * d];
        for t in &self.terms {
            let mut c = t.coeff;
            for k in 0..3 {
                c *= self.blocks[t.blocks[k]].amplitude(&[counts[2 * k], counts[2 * k + 1]]);
            }
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let [u, v, w] = t.singles.map(|s| &self.singles[s]);
            let mut idx = 0;
            for x in u {
                let cx = c * x;
                for y in v {
                    let cxy = cx * y;
                    for z in w {
                        amps[idx] += cxy * z;
                        idx += 1;
                    }
                }
            }
        }
        FockTensor::from_amplitudes(3, self.cutoff, amps)?.normalized()
    }
}
