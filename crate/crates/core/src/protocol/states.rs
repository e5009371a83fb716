//! Input states, the six-mode channel and the mixed nine-mode state.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::coherent::StateVector;
use crate::error::{Error, Result};
use crate::measurement::check_grid;
use crate::optics::apply_bps;
use crate::C64;

use super::modes::{input_index, BPS_WIRING, MEASURED, MIXED_ORDER};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn check_finite(values: &[C64], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Alice's amplitudes on `|a,a>, |a,-a>, |-a,a>, |-a,-a>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AliceInfo {
    pub a: [C64; 4],
}

impl AliceInfo {
    pub fn new(a: [C64; 4]) -> Result<Self> {
        check_finite(&a, "Alice amplitudes")?;
        if a.iter().all(|x| x.norm() == 0.0) {
            return Err(Error::InvalidParameter("Alice amplitudes are all zero".into()));
        }
        Ok(Self { a })
    }

    /// `A = (cos theta, sin theta, cos phi, sin phi)`.
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        Self::new([c(theta.cos()), c(theta.sin()), c(phi.cos()), c(phi.sin())])
    }

    /// Label sign of Alice's term `i` on modes (A, A').
    pub fn signs(i: usize) -> (f64, f64) {
        [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)][i]
    }

    /// Normalized two-mode state `sum_i A_i |s_i a, s'_i a>`.
    pub fn state(&self, alpha: f64) -> Result<StateVector> {
        let terms = (0..4).map(|i| {
            let (s, t) = Self::signs(i);
            (self.a[i], vec![c(s * alpha), c(t * alpha)])
        });
        StateVector::from_terms(2, terms).normalize()
    }
}

/// Bob's amplitudes on `|a>, |-a>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BobInfo {
    pub b: [C64; 2],
}

impl BobInfo {
    pub fn new(b: [C64; 2]) -> Result<Self> {
        check_finite(&b, "Bob amplitudes")?;
        if b.iter().all(|x| x.norm() == 0.0) {
            return Err(Error::InvalidParameter("Bob amplitudes are both zero".into()));
        }
        Ok(Self { b })
    }

    /// `B = (cos theta1, sin theta1)`.
    pub fn from_angle(theta1: f64) -> Result<Self> {
        Self::new([c(theta1.cos()), c(theta1.sin())])
    }

    pub fn state(&self, alpha: f64) -> Result<StateVector> {
        StateVector::from_terms(1, [(self.b[0], vec![c(alpha)]), (self.b[1], vec![c(-alpha)])]).normalize()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BellVariant {
    /// `|a,a> + |-a,-a>`
    Plus,
    /// `|a,-a> + |-a,a>`
    Shifted,
}

impl BellVariant {
    pub const ALL: [BellVariant; 2] = [BellVariant::Plus, BellVariant::Shifted];

    /// Sign of the partner label relative to the first one.
    pub fn partner_sign(self) -> f64 {
        match self {
            BellVariant::Plus => 1.0,
            BellVariant::Shifted => -1.0,
        }
    }
}

/// Variant for pairs (1,4), (2,5), (3,6). Only this choice reproduces the
/// case-I heralded state with unflipped labels (see the bootstrap test).
pub const DEFAULT_BELL_VARIANTS: [BellVariant; 3] = [BellVariant::Shifted; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub alpha: f64,
    pub variants: [BellVariant; 3],
}

impl ChannelSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_variants(alpha, DEFAULT_BELL_VARIANTS)
    }

    pub fn with_variants(alpha: f64, variants: [BellVariant; 3]) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, variants })
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    if alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

pub fn build_bell(alpha: f64, variant: BellVariant) -> Result<StateVector> {
    check_alpha(alpha)?;
    let s = variant.partner_sign();
    StateVector::from_terms(
        2,
        [
            (c(1.0), vec![c(alpha), c(s * alpha)]),
            (c(1.0), vec![c(-alpha), c(-s * alpha)]),
        ],
    )
    .normalize()
}

/// Normalized six-mode channel in mode order 1..6.
pub fn build_channel(spec: &ChannelSpec) -> Result<StateVector> {
    let [p, q, r] = spec.variants;
    let pairs = build_bell(spec.alpha, p)?
        .tensor(&build_bell(spec.alpha, q)?)
        .tensor(&build_bell(spec.alpha, r)?);
    // pair order is (1,4,2,5,3,6)
    pairs.permute_modes(&[0, 2, 4, 1, 3, 5])?.normalize()
}

/// The channel normalization as printed next to the channel definition, and
/// the one the Gram sum of the unnormalized three-pair product actually gives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelNormCheck {
    pub printed: f64,
    pub gram: f64,
    pub matches: bool,
}

pub fn channel_norm_check(spec: &ChannelSpec) -> Result<ChannelNormCheck> {
    check_alpha(spec.alpha)?;
    let a2 = spec.alpha * spec.alpha;
    let e = |k: f64| (-k * a2).exp();
    let printed = (8.0 * (1.0 + e(12.0) + 3.0 * e(8.0) + e(6.0) + 2.0 * e(4.0))).powf(-0.5);
    let mut raw = StateVector::scalar(c(1.0));
    for v in spec.variants {
        let s = v.partner_sign();
        raw = raw.tensor(&StateVector::from_terms(
            2,
            [
                (c(1.0), vec![c(spec.alpha), c(s * spec.alpha)]),
                (c(1.0), vec![c(-spec.alpha), c(-s * spec.alpha)]),
            ],
        ));
    }
    let gram = raw.norm_sqr().powf(-0.5);
    Ok(ChannelNormCheck {
        printed,
        gram,
        matches: (printed - gram).abs() <= 1e-12 * gram,
    })
}

/// Global input state in [`super::modes::INPUT_ORDER`], passed through the
/// three beam splitters and reordered to [`MIXED_ORDER`].
pub fn assemble_and_mix(alice: &AliceInfo, bob: &BobInfo, spec: &ChannelSpec) -> Result<StateVector> {
    let global = alice
        .state(spec.alpha)?
        .tensor(&bob.state(spec.alpha)?)
        .tensor(&build_channel(spec)?);
    let mut mixed = global;
    for (info, chan, _, _) in BPS_WIRING {
        let i = input_index(info).expect("registered mode");
        let j = input_index(chan).expect("registered mode");
        mixed = apply_bps(&mixed, i, j)?;
    }
    // after mixing, A holds 7, channel 1 holds 8, and so on
    let order: Vec<usize> = MIXED_ORDER
        .iter()
        .map(|&m| {
            let src = BPS_WIRING
                .iter()
                .find_map(|&(info, chan, sum, diff)| {
                    if m == sum {
                        Some(info)
                    } else if m == diff {
                        Some(chan)
                    } else {
                        None
                    }
                })
                .unwrap_or(m);
            input_index(src).expect("registered mode")
        })
        .collect();
    let mixed = mixed.permute_modes(&order)?;
    for m in MEASURED {
        check_grid(&mixed, m)?;
    }
    Ok(mixed)
}

/// Grid spacing `sqrt(2) alpha` of the measured labels.
pub fn detector_amplitude(alpha: f64) -> f64 {
    SQRT_2 * alpha
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::fidelity;
    use crate::optics::apply_phase;
    use std::f64::consts::PI;

    #[test]
    fn bell_examples() {
        let plus = build_bell(1.0, BellVariant::Plus).unwrap();
        let n = (2.0 * (1.0 + (-4.0f64).exp())).powf(-0.5);
        assert!((plus.terms()[0].coeff.re - n).abs() < 1e-12);
        assert!((n - 0.7006).abs() < 2e-4);

        let shifted = apply_phase(&plus, 1, PI).unwrap();
        let f = fidelity(&shifted, &build_bell(1.0, BellVariant::Shifted).unwrap()).unwrap();
        assert!((f - 1.0).abs() < 1e-12);

        let big = build_bell(6.0, BellVariant::Plus).unwrap();
        assert!((big.terms()[0].coeff.re - 0.5f64.sqrt()).abs() < 1e-10);
        assert!(build_bell(0.0, BellVariant::Plus).is_err());
    }

    #[test]
    fn channel_structure() {
        let spec = ChannelSpec::with_variants(1.0, [BellVariant::Plus; 3]).unwrap();
        let ch = build_channel(&spec).unwrap();
        assert_eq!(ch.terms().len(), 8);
        assert!((ch.norm() - 1.0).abs() < 1e-12);
        for t in ch.terms() {
            for k in 0..3 {
                assert_eq!(t.labels[k], t.labels[k + 3]);
            }
        }
        let ch = build_channel(&ChannelSpec::new(1.0).unwrap()).unwrap();
        for t in ch.terms() {
            for k in 0..3 {
                assert_eq!(t.labels[k], -t.labels[k + 3]);
            }
        }
    }

    #[test]
    fn printed_channel_norm_differs_from_gram() {
        let check = channel_norm_check(&ChannelSpec::new(0.7).unwrap()).unwrap();
        let y = (-4.0 * 0.49f64).exp();
        assert!((check.gram - (8.0 * (1.0 + y).powi(3)).powf(-0.5)).abs() < 1e-14);
        assert!(!check.matches);
        // the two agree once every overlap is negligible
        let check = channel_norm_check(&ChannelSpec::new(6.0).unwrap()).unwrap();
        assert!(check.matches);
    }

    #[test]
    fn mixing_examples() {
        let alpha = 0.8;
        let alice = AliceInfo::from_angles(0.3, 0.9).unwrap();
        let bob = BobInfo::from_angle(0.7).unwrap();
        let mixed = assemble_and_mix(&alice, &bob, &ChannelSpec::new(alpha).unwrap()).unwrap();
        assert_eq!(mixed.terms().len(), 64);
        assert!((mixed.norm() - 1.0).abs() < 1e-12);
        let g = detector_amplitude(alpha);
        for t in mixed.terms() {
            for m in MEASURED {
                let l = t.labels[m];
                assert!(l.norm() < 1e-12 || (l.norm() - g).abs() < 1e-12, "{l}");
            }
        }

        // channel-aligned term of the PLUS channel: (A,1) = (a,a) -> (sqrt2 a, 0)
        let a0 = AliceInfo::new([c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let b0 = BobInfo::new([c(1.0), c(0.0)]).unwrap();
        let spec = ChannelSpec::with_variants(alpha, [BellVariant::Plus; 3]).unwrap();
        let mixed = assemble_and_mix(&a0, &b0, &spec).unwrap();
        let aligned = mixed
            .terms()
            .iter()
            .find(|t| (t.labels[6] - c(alpha)).norm() < 1e-12 && (t.labels[0] - c(g)).norm() < 1e-12)
            .expect("aligned term");
        assert!(aligned.labels[1].norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(AliceInfo::new([c(0.0); 4]).is_err());
        assert!(BobInfo::new([c(0.0); 2]).is_err());
        assert!(BobInfo::new([c(f64::NAN), c(1.0)]).is_err());
        assert!(ChannelSpec::new(-1.0).is_err());
        assert!(ChannelSpec::new(f64::INFINITY).is_err());
    }
}
