//! Cross-check of the coherent engine against the number-basis oracle.

use rayon::prelude::*;
use serde::Serialize;

use crate::coherent::StateVector;
use crate::error::Result;
use crate::measurement::{DetectionPattern, OutcomeClass, PatternEvaluator};
use crate::optics::Gate;
use crate::protocol::cases::correction_amplitude;
use crate::protocol::modes::MEASURED;
use crate::protocol::{pattern_for, split_pattern, AliceInfo, BobInfo, CaseId, ChannelSpec, Protocol, RowParities};
use crate::C64;

use super::factored::ClassFilter;
use super::{
    apply_bps_fock, apply_displacement_fock, apply_phase_fock, default_cutoff, encode, FactoredProtocol, FockTensor,
    DEFAULT_EPS,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub theta: f64,
    pub phi: f64,
    pub theta1: f64,
    pub alpha: f64,
    /// `None` picks [`default_cutoff`].
    pub cutoff: Option<usize>,
    pub eps: f64,
    pub tolerance: f64,
}

impl VerifyConfig {
    pub fn new(theta: f64, phi: f64, theta1: f64, alpha: f64) -> Self {
        Self {
            theta,
            phi,
            theta1,
            alpha,
            cutoff: None,
            eps: DEFAULT_EPS,
            tolerance: 1e-8,
        }
    }

    pub fn with_cutoff(self, cutoff: usize) -> Self {
        Self {
            cutoff: Some(cutoff),
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateCheck {
    pub gate: String,
    pub cutoff: usize,
    /// `|<fock|engine> - 1|` on normalized states, so phases count too.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeCheck {
    pub case: CaseId,
    pub row: usize,
    pub engine_probability: f64,
    pub fock_probability: f64,
    /// `1 - F` between the engine's heralded state and the oracle's.
    pub infidelity: f64,
    /// `1 - F` between the oracle's heralded states at the two smallest counts of each class.
    pub class_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub cutoff: usize,
    pub gates: Vec<GateCheck>,
    /// Largest deviation over the 9 class pairs of each detector pair.
    pub marginal_max_dev: f64,
    /// Largest deviation over all 729 class patterns.
    pub pattern_max_dev: f64,
    pub fock_total_probability: f64,
    pub outcomes: Vec<OutcomeCheck>,
    pub max_deviation: f64,
    pub passed: bool,
}

fn filters(pattern: &DetectionPattern) -> [ClassFilter; 6] {
    std::array::from_fn(|k| Some(pattern.classes()[k]))
}

fn unit_overlap_dev(fock: &FockTensor, engine: &StateVector, cutoff: usize, eps: f64) -> Result<f64> {
    let e = encode(engine, cutoff, eps)?.normalized()?;
    Ok((fock.normalized()?.inner(&e)? - C64::new(1.0, 0.0)).norm())
}

fn gate_checks(alpha: f64, cutoff: usize, eps: f64) -> Result<Vec<GateCheck>> {
    let a = C64::new(alpha, 0.0);
    let cat = StateVector::from_terms(1, [(C64::new(0.6, 0.0), vec![a]), (C64::new(0.0, 0.8), vec![-a])]);
    let pair = cat.tensor(&StateVector::coherent(&[a * 0.5]));
    let beta = correction_amplitude(alpha);
    let gates = [
        (Gate::Bps { i: 0, j: 1 }, pair.clone()),
        (
            Gate::Phase {
                mode: 0,
                psi: std::f64::consts::PI,
            },
            cat.clone(),
        ),
        (Gate::Phase { mode: 0, psi: 1.1 }, cat.clone()),
        (Gate::Displace { mode: 0, beta }, cat.clone()),
    ];
    let mut out = Vec::with_capacity(gates.len());
    for (gate, input) in gates {
        let cut = match gate {
            Gate::Displace { beta, .. } => cutoff.max(default_cutoff(alpha + beta.norm())),
            _ => cutoff,
        };
        let f = encode(&input, cut, eps)?;
        let evolved = match gate {
            Gate::Bps { i, j } => apply_bps_fock(&f, i, j)?,
            Gate::Phase { mode, psi } => apply_phase_fock(&f, mode, psi)?,
            Gate::Displace { mode, beta } => apply_displacement_fock(&f, mode, beta, eps)?,
        };
        out.push(GateCheck {
            gate: format!("{gate:?}"),
            cutoff: cut,
            deviation: unit_overlap_dev(&evolved, &gate.apply(&input)?, cut, eps)?,
        });
    }
    Ok(out)
}

fn counts_at(pattern: &DetectionPattern, alt: Option<usize>) -> [usize; 6] {
    std::array::from_fn(|k| {
        let reps = pattern.classes()[k].representatives();
        let i = if alt == Some(k) && reps.len() > 1 { 1 } else { 0 };
        reps[i] as usize
    })
}

pub fn verify_protocol(config: &VerifyConfig) -> Result<VerifyReport> {
    let alice = AliceInfo::from_angles(config.theta, config.phi)?;
    let bob = BobInfo::from_angle(config.theta1)?;
    let spec = ChannelSpec::new(config.alpha)?;
    let cutoff = config.cutoff.unwrap_or_else(|| default_cutoff(config.alpha));
    let eps = config.eps;

    let gates = gate_checks(config.alpha, cutoff, eps)?;
    let engine = Protocol::new(alice, bob, spec)?;
    let fock = FactoredProtocol::new(&alice, &bob, &spec, cutoff, eps)?;

    let mut marginal_max_dev: f64 = 0.0;
    for k in 0..3 {
        let ev = PatternEvaluator::new(engine.mixed_state(), &[MEASURED[2 * k], MEASURED[2 * k + 1]])?;
        for c1 in OutcomeClass::ALL {
            for c2 in OutcomeClass::ALL {
                let p = ev.probability(&DetectionPattern::new(vec![c1, c2]))?;
                let mut f = [None; 6];
                f[2 * k] = Some(c1);
                f[2 * k + 1] = Some(c2);
                marginal_max_dev = marginal_max_dev.max((p - fock.probability(&f)).abs());
            }
        }
    }

    let patterns = DetectionPattern::all(6);
    let devs: Vec<(f64, f64)> = patterns
        .par_iter()
        .map(|p| Ok((engine.pattern_probability(p)?, fock.probability(&filters(p)))))
        .collect::<Result<_>>()?;
    let pattern_max_dev = devs.iter().map(|(e, f)| (e - f).abs()).fold(0.0, f64::max);
    let fock_total_probability = devs.iter().map(|(_, f)| f).sum();

    let cases: Vec<(CaseId, RowParities)> = CaseId::CASES
        .iter()
        .flat_map(|&c| RowParities::ROWS.iter().map(move |&r| (c, r)))
        .collect();
    let outcomes: Vec<OutcomeCheck> = cases
        .par_iter()
        .map(|&(case, row)| {
            let pattern = pattern_for(case, row)?;
            debug_assert_eq!(split_pattern(&pattern), Some((case, row)));
            let first = fock.herald(&counts_at(&pattern, None))?;
            let mut class_spread: f64 = 0.0;
            for k in 0..6 {
                if pattern.classes()[k].representatives().len() > 1 {
                    let other = fock.herald(&counts_at(&pattern, Some(k)))?;
                    class_spread = class_spread.max(1.0 - first.fidelity(&other)?);
                }
            }
            let engine_state = encode(&engine.herald(&pattern)?, cutoff, eps)?;
            Ok(OutcomeCheck {
                case,
                row: row.number(),
                engine_probability: engine.pattern_probability(&pattern)?,
                fock_probability: fock.probability(&filters(&pattern)),
                infidelity: 1.0 - first.fidelity(&engine_state)?,
                class_spread,
            })
        })
        .collect::<Result<_>>()?;

    let max_deviation = gates
        .iter()
        .map(|g| g.deviation)
        .chain([marginal_max_dev, pattern_max_dev])
        .chain(outcomes.iter().flat_map(|o| {
            [
                (o.engine_probability - o.fock_probability).abs(),
                o.infidelity.abs(),
                o.class_spread.abs(),
            ]
        }))
        .fold(0.0, f64::max);
    Ok(VerifyReport {
        config: *config,
        cutoff,
        gates,
        marginal_max_dev,
        pattern_max_dev,
        fock_total_probability,
        outcomes,
        max_deviation,
        passed: max_deviation <= config.tolerance,
    })
}
