//! Heralding, correction and scoring of every detection outcome.

use rayon::prelude::*;
use serde::Serialize;

use crate::coherent::{fidelity, StateVector};
use crate::error::{Error, Result};
use crate::measurement::{herald_state, DetectionPattern, PatternEvaluator};

use super::cases::{lookup_correction, pattern_for, split_pattern, CaseId, CorrectionPlan, RowParities};
use super::modes::MEASURED;
use super::states::{assemble_and_mix, AliceInfo, BobInfo, ChannelSpec};

/// Fidelities within this distance of 1 count as faithful.
pub const FAITHFUL_TOL: f64 = 1e-10;

/// Patterns below this probability are not heralded.
pub const MIN_PROBABILITY: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    Faithful,
    NearFaithful,
}

impl Classification {
    pub fn of(fidelity: f64) -> Self {
        if (fidelity - 1.0).abs() <= FAITHFUL_TOL {
            Classification::Faithful
        } else {
            Classification::NearFaithful
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Classification::Faithful => "F",
            Classification::NearFaithful => "NF",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolOutcome {
    pub pattern: DetectionPattern,
    pub case: CaseId,
    pub row: RowParities,
    pub probability: f64,
    pub plan: CorrectionPlan,
    /// Normalized state of modes 4, 5, 6.
    pub heralded: StateVector,
    pub corrected_bob: StateVector,
    pub corrected_alice: StateVector,
    pub f_ab: f64,
    pub f_ba: f64,
    /// Fidelities of the heralded factors before any correction.
    pub raw_f_ab: f64,
    pub raw_f_ba: f64,
    pub class_ab: Classification,
    pub class_ba: Classification,
}

/// Splits the heralded (4,5)|(6) product and applies the plan to each side.
pub fn apply_correction(heralded: &StateVector, plan: &CorrectionPlan) -> Result<(StateVector, StateVector)> {
    if heralded.mode_count() != 3 {
        return Err(Error::DimensionMismatch {
            left: heralded.mode_count(),
            right: 3,
        });
    }
    let (mut bob, mut alice) = heralded.split_product(2)?;
    for g in plan.bob_ops() {
        bob = g.apply(&bob)?;
    }
    for g in plan.alice_ops() {
        alice = g.apply(&alice)?;
    }
    Ok((bob.normalize()?, alice.normalize()?))
}

/// Fidelity of the corrected outputs against the two input states.
pub fn outcome_fidelities(
    corrected_bob: &StateVector,
    corrected_alice: &StateVector,
    alice: &AliceInfo,
    bob: &BobInfo,
    alpha: f64,
) -> Result<(f64, f64)> {
    Ok((
        fidelity(corrected_bob, &alice.state(alpha)?)?,
        fidelity(corrected_alice, &bob.state(alpha)?)?,
    ))
}

/// A fully specified protocol run: inputs, channel and the mixed nine-mode state.
pub struct Protocol {
    pub alice: AliceInfo,
    pub bob: BobInfo,
    pub channel: ChannelSpec,
    mixed: StateVector,
    evaluator: PatternEvaluator,
    alice_target: StateVector,
    bob_target: StateVector,
}

impl Protocol {
    pub fn new(alice: AliceInfo, bob: BobInfo, channel: ChannelSpec) -> Result<Self> {
        let mixed = assemble_and_mix(&alice, &bob, &channel)?;
        let evaluator = PatternEvaluator::new(&mixed, &MEASURED)?;
        Ok(Self {
            alice_target: alice.state(channel.alpha)?,
            bob_target: bob.state(channel.alpha)?,
            alice,
            bob,
            channel,
            mixed,
            evaluator,
        })
    }

    pub fn from_angles(theta: f64, phi: f64, theta1: f64, alpha: f64) -> Result<Self> {
        Self::new(
            AliceInfo::from_angles(theta, phi)?,
            BobInfo::from_angle(theta1)?,
            ChannelSpec::new(alpha)?,
        )
    }

    pub fn alpha(&self) -> f64 {
        self.channel.alpha
    }

    pub fn mixed_state(&self) -> &StateVector {
        &self.mixed
    }

    pub fn pattern_probability(&self, pattern: &DetectionPattern) -> Result<f64> {
        self.evaluator.probability(pattern)
    }

    /// Normalized conditional state of modes 4, 5, 6.
    pub fn herald(&self, pattern: &DetectionPattern) -> Result<StateVector> {
        herald_state(&self.mixed, pattern, &MEASURED)
    }

    pub fn outcome(&self, case: CaseId, row: RowParities) -> Result<ProtocolOutcome> {
        let pattern = pattern_for(case, row)?;
        let probability = self.pattern_probability(&pattern)?;
        self.outcome_with(pattern, case, row, probability)
    }

    fn outcome_with(
        &self,
        pattern: DetectionPattern,
        case: CaseId,
        row: RowParities,
        probability: f64,
    ) -> Result<ProtocolOutcome> {
        let heralded = self.herald(&pattern)?;
        let plan = lookup_correction(case, row, self.alpha())?;
        let (raw_bob, raw_alice) = heralded.split_product(2)?;
        let (corrected_bob, corrected_alice) = apply_correction(&heralded, &plan)?;
        let f_ab = fidelity(&corrected_bob, &self.alice_target)?;
        let f_ba = fidelity(&corrected_alice, &self.bob_target)?;
        Ok(ProtocolOutcome {
            pattern,
            case,
            row,
            probability,
            plan,
            raw_f_ab: fidelity(&raw_bob, &self.alice_target)?,
            raw_f_ba: fidelity(&raw_alice, &self.bob_target)?,
            heralded,
            corrected_bob,
            corrected_alice,
            class_ab: Classification::of(f_ab),
            class_ba: Classification::of(f_ba),
            f_ab,
            f_ba,
        })
    }

    /// Every detection class, scored. Non-ambiguous classes are heralded and
    /// corrected; ambiguous ones only contribute probability mass.
    pub fn enumerate(&self) -> Result<Enumeration> {
        let patterns = DetectionPattern::all(MEASURED.len());
        let probs: Vec<f64> = patterns
            .iter()
            .map(|p| self.pattern_probability(p))
            .collect::<Result<_>>()?;
        let mut heralded = Vec::new();
        let mut ambiguous = Vec::new();
        for (p, &prob) in patterns.into_iter().zip(&probs) {
            match split_pattern(&p) {
                Some((case, row)) => {
                    if prob > MIN_PROBABILITY {
                        heralded.push((p, case, row, prob));
                    }
                }
                None => ambiguous.push((p, prob)),
            }
        }
        let mut outcomes: Vec<ProtocolOutcome> = heralded
            .into_par_iter()
            .map(|(p, case, row, prob)| self.outcome_with(p, case, row, prob))
            .collect::<Result<_>>()?;
        outcomes.sort_by_key(|o| (o.case, o.row.number()));
        Ok(Enumeration {
            alpha: self.alpha(),
            outcomes,
            ambiguous,
            total_probability: probs.iter().sum(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Enumeration {
    pub alpha: f64,
    /// Non-ambiguous outcomes, ordered by case then table row.
    pub outcomes: Vec<ProtocolOutcome>,
    /// Patterns where some pair does not have exactly one silent detector.
    pub ambiguous: Vec<(DetectionPattern, f64)>,
    /// Probability summed over all patterns.
    pub total_probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessSummary {
    /// The eight all-even rows.
    pub faithful: f64,
    /// All 64 table rows.
    pub rows: f64,
    pub ambiguous: f64,
}

impl Enumeration {
    pub fn get(&self, case: CaseId, row: RowParities) -> Option<&ProtocolOutcome> {
        self.outcomes.iter().find(|o| o.case == case && o.row == row)
    }

    pub fn ambiguous_mass(&self) -> f64 {
        self.ambiguous.iter().map(|(_, p)| p).sum()
    }

    pub fn success(&self) -> SuccessSummary {
        SuccessSummary {
            faithful: self
                .outcomes
                .iter()
                .filter(|o| o.row == RowParities::ALL_EVEN)
                .map(|o| o.probability)
                .sum(),
            rows: self.outcomes.iter().map(|o| o.probability).sum(),
            ambiguous: self.ambiguous_mass(),
        }
    }

    /// Probability-weighted fidelities over the table rows, `(A->B, B->A)`.
    pub fn average_fidelity(&self) -> (f64, f64) {
        self.outcomes.iter().fold((0.0, 0.0), |(ab, ba), o| {
            (ab + o.f_ab * o.probability, ba + o.f_ba * o.probability)
        })
    }
}

pub fn enumerate_outcomes(alice: &AliceInfo, bob: &BobInfo, spec: &ChannelSpec) -> Result<Enumeration> {
    Protocol::new(*alice, *bob, *spec)?.enumerate()
}

pub fn total_success_probability(alice: &AliceInfo, bob: &BobInfo, spec: &ChannelSpec) -> Result<SuccessSummary> {
    Ok(enumerate_outcomes(alice, bob, spec)?.success())
}

pub fn average_fidelity(alice: &AliceInfo, bob: &BobInfo, spec: &ChannelSpec) -> Result<(f64, f64)> {
    Ok(enumerate_outcomes(alice, bob, spec)?.average_fidelity())
}
