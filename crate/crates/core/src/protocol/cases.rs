//! Detection cases, parity rows and the correction each row calls for.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{DetectionPattern, OutcomeClass};
use crate::optics::Gate;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    Ambiguous,
}

impl CaseId {
    pub const CASES: [CaseId; 8] = [
        CaseId::I,
        CaseId::II,
        CaseId::III,
        CaseId::IV,
        CaseId::V,
        CaseId::VI,
        CaseId::VII,
        CaseId::VIII,
    ];

    /// For each detector pair (7,8), (9,10), (11,12): is the first detector the silent one?
    pub fn zero_first(self) -> Option<[bool; 3]> {
        Some(match self {
            CaseId::I => [true, true, true],
            CaseId::II => [false, false, false],
            CaseId::III => [false, false, true],
            CaseId::IV => [false, true, false],
            CaseId::V => [false, true, true],
            CaseId::VI => [true, false, false],
            CaseId::VII => [true, false, true],
            CaseId::VIII => [true, true, false],
            CaseId::Ambiguous => return None,
        })
    }

    pub fn from_zero_first(z: [bool; 3]) -> CaseId {
        *Self::CASES
            .iter()
            .find(|c| c.zero_first() == Some(z))
            .expect("every flag triple names a case")
    }

    /// 1-based table number.
    pub fn number(self) -> Option<usize> {
        Self::CASES.iter().position(|&c| c == self).map(|p| p + 1)
    }

    pub fn roman(self) -> &'static str {
        match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
            CaseId::IV => "IV",
            CaseId::V => "V",
            CaseId::VI => "VI",
            CaseId::VII => "VII",
            CaseId::VIII => "VIII",
            CaseId::Ambiguous => "AMBIGUOUS",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "Even",
            Parity::Odd => "Odd",
        }
    }

    fn class(self) -> OutcomeClass {
        match self {
            Parity::Even => OutcomeClass::EvenNonzero,
            Parity::Odd => OutcomeClass::Odd,
        }
    }
}

/// Parities of the firing detector in each pair; one row of a case table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RowParities(pub [Parity; 3]);

impl RowParities {
    /// Rows in table order.
    pub const ROWS: [RowParities; 8] = {
        use Parity::{Even as E, Odd as O};
        [
            RowParities([O, O, O]),
            RowParities([O, O, E]),
            RowParities([O, E, O]),
            RowParities([E, O, O]),
            RowParities([E, E, E]),
            RowParities([E, E, O]),
            RowParities([E, O, E]),
            RowParities([O, E, E]),
        ]
    };

    pub const ALL_EVEN: RowParities = RowParities([Parity::Even; 3]);

    /// 1-based row number within a case table.
    pub fn number(self) -> usize {
        Self::ROWS.iter().position(|&r| r == self).expect("all 8 rows listed") + 1
    }

    pub fn from_number(row: usize) -> Option<RowParities> {
        row.checked_sub(1).and_then(|r| Self::ROWS.get(r)).copied()
    }

    pub fn is_odd(self, pair: usize) -> bool {
        self.0[pair] == Parity::Odd
    }

    pub fn label(self) -> String {
        self.0.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
    }
}

/// Case of a six-entry pattern over detectors 7..12.
pub fn classify_case(pattern: &DetectionPattern) -> CaseId {
    split_pattern(pattern).map_or(CaseId::Ambiguous, |(case, _)| case)
}

/// Case and parity row, or `None` when some pair does not have exactly one silent detector.
pub fn split_pattern(pattern: &DetectionPattern) -> Option<(CaseId, RowParities)> {
    let p = pattern.classes();
    if p.len() != 6 {
        return None;
    }
    let mut zero_first = [false; 3];
    let mut parities = [Parity::Even; 3];
    for k in 0..3 {
        let (first, second) = (p[2 * k], p[2 * k + 1]);
        let fired = match (first, second) {
            (OutcomeClass::Zero, c) if c.is_nonzero() => {
                zero_first[k] = true;
                c
            }
            (c, OutcomeClass::Zero) if c.is_nonzero() => c,
            _ => return None,
        };
        parities[k] = if fired == OutcomeClass::Odd {
            Parity::Odd
        } else {
            Parity::Even
        };
    }
    Some((CaseId::from_zero_first(zero_first), RowParities(parities)))
}

pub fn pattern_for(case: CaseId, row: RowParities) -> Result<DetectionPattern> {
    let z = case.zero_first().ok_or(Error::NoCorrectionDefined)?;
    let mut classes = Vec::with_capacity(6);
    for k in 0..3 {
        let fired = row.0[k].class();
        if z[k] {
            classes.extend([OutcomeClass::Zero, fired]);
        } else {
            classes.extend([fired, OutcomeClass::Zero]);
        }
    }
    Ok(DetectionPattern::new(classes))
}

/// Correction on one output mode: an optional `P(pi)` followed by an optional displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeCorrection {
    pub phase_pi: bool,
    pub displace: Option<C64>,
}

impl ModeCorrection {
    pub fn is_identity(&self) -> bool {
        !self.phase_pi && self.displace.is_none()
    }

    fn gates(&self, mode: usize) -> Vec<Gate> {
        let mut g = Vec::new();
        if self.phase_pi {
            g.push(Gate::Phase { mode, psi: PI });
        }
        if let Some(beta) = self.displace {
            g.push(Gate::Displace { mode, beta });
        }
        g
    }

    /// Operator as it would appear in a table cell, e.g. `D_4 P_4` or `I_6`.
    pub fn symbol(&self, mode_number: u8) -> String {
        let mut parts = Vec::new();
        if self.displace.is_some() {
            parts.push(format!("D_{mode_number}"));
        }
        if self.phase_pi {
            parts.push(format!("P_{mode_number}"));
        }
        if parts.is_empty() {
            format!("I_{mode_number}")
        } else {
            parts.join(" ")
        }
    }
}

/// Local corrections for output modes 4, 5 (Bob) and 6 (Alice).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectionPlan {
    pub modes: [ModeCorrection; 3],
}

impl CorrectionPlan {
    pub fn identity() -> Self {
        let id = ModeCorrection {
            phase_pi: false,
            displace: None,
        };
        Self { modes: [id; 3] }
    }

    /// Gates on Bob's two-mode state (local modes 0, 1 = modes 4, 5).
    pub fn bob_ops(&self) -> Vec<Gate> {
        let mut g = self.modes[0].gates(0);
        g.extend(self.modes[1].gates(1));
        g
    }

    /// Gates on Alice's one-mode state (mode 6).
    pub fn alice_ops(&self) -> Vec<Gate> {
        self.modes[2].gates(0)
    }

    pub fn alice_symbol(&self) -> String {
        self.modes[2].symbol(6)
    }

    pub fn bob_symbol(&self) -> String {
        format!("{} ⊗ {}", self.modes[1].symbol(5), self.modes[0].symbol(4))
    }
}

/// Displacement amplitude used by every odd-parity correction.
pub fn correction_amplitude(alpha: f64) -> C64 {
    C64::new(0.0, PI / (2.0 * alpha))
}

/// A silent second detector flips the output label, undone by `P(pi)`; an odd
/// count leaves a relative sign, which the tables treat with `D(i pi / 2 alpha)`.
pub fn lookup_correction(case: CaseId, row: RowParities, alpha: f64) -> Result<CorrectionPlan> {
    let z = case.zero_first().ok_or(Error::NoCorrectionDefined)?;
    super::states::check_alpha(alpha)?;
    let beta = correction_amplitude(alpha);
    let mut plan = CorrectionPlan::identity();
    for k in 0..3 {
        plan.modes[k] = ModeCorrection {
            phase_pi: !z[k],
            displace: row.is_odd(k).then_some(beta),
        };
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use OutcomeClass::{EvenNonzero as E, Odd as O, Zero as Z};

    #[test]
    fn classify_examples() {
        assert_eq!(classify_case(&DetectionPattern::new(vec![Z, E, Z, E, Z, E])), CaseId::I);
        assert_eq!(
            classify_case(&DetectionPattern::new(vec![O, Z, O, Z, O, Z])),
            CaseId::II
        );
        assert_eq!(
            classify_case(&DetectionPattern::new(vec![Z, Z, Z, E, Z, E])),
            CaseId::Ambiguous
        );
        assert_eq!(
            classify_case(&DetectionPattern::new(vec![E, O, Z, E, Z, E])),
            CaseId::Ambiguous
        );
        assert_eq!(
            classify_case(&DetectionPattern::new(vec![Z, E, Z, E])),
            CaseId::Ambiguous
        );
    }

    #[test]
    fn sixty_four_unambiguous_patterns() {
        let mut seen = std::collections::HashSet::new();
        for p in DetectionPattern::all(6) {
            if let Some((case, row)) = split_pattern(&p) {
                assert_eq!(pattern_for(case, row).unwrap(), p);
                assert!(seen.insert((case, row)));
            }
        }
        assert_eq!(seen.len(), 64);
    }

    #[test]
    fn row_numbering() {
        for (i, r) in RowParities::ROWS.iter().enumerate() {
            assert_eq!(r.number(), i + 1);
            assert_eq!(RowParities::from_number(i + 1), Some(*r));
        }
        assert_eq!(RowParities::ALL_EVEN.number(), 5);
        assert_eq!(RowParities::from_number(0), None);
        assert_eq!(RowParities::from_number(9), None);
    }

    #[test]
    fn lookup_examples() {
        let id = lookup_correction(CaseId::I, RowParities::ALL_EVEN, 1.0).unwrap();
        assert_eq!(id, CorrectionPlan::identity());
        assert_eq!(id.alice_symbol(), "I_6");
        assert_eq!(id.bob_symbol(), "I_5 ⊗ I_4");

        let p = lookup_correction(CaseId::II, RowParities::ALL_EVEN, 1.0).unwrap();
        assert_eq!(p.alice_symbol(), "P_6");
        assert_eq!(p.bob_symbol(), "P_5 ⊗ P_4");

        let d = lookup_correction(CaseId::I, RowParities::ROWS[0], 2.0).unwrap();
        assert_eq!(d.alice_symbol(), "D_6");
        assert_eq!(d.bob_symbol(), "D_5 ⊗ D_4");
        assert_eq!(d.modes[0].displace, Some(C64::new(0.0, PI / 4.0)));

        let both = lookup_correction(CaseId::II, RowParities::ROWS[0], 1.0).unwrap();
        assert_eq!(both.alice_ops().len(), 2);
        assert!(matches!(both.alice_ops()[0], Gate::Phase { .. }));
        assert_eq!(both.bob_ops().len(), 4);

        assert_eq!(
            lookup_correction(CaseId::Ambiguous, RowParities::ALL_EVEN, 1.0),
            Err(Error::NoCorrectionDefined)
        );
    }
}
