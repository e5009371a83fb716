//! Printed closed-form fidelities and probabilities for the eight rows of a
//! case table, transcribed as printed, plus audits comparing them with the engine.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

use super::cases::{CaseId, RowParities};
use super::outcome::{Enumeration, Protocol};
use super::states::check_alpha;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

impl Direction {
    pub fn arrow(self) -> &'static str {
        match self {
            Direction::AliceToBob => "A->B",
            Direction::BobToAlice => "B->A",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub f_ab: f64,
    pub f_ba: f64,
    pub p_ab: f64,
    pub p_ba: f64,
    /// Equation numbers for the A->B and B->A values.
    pub eq_ab: u8,
    pub eq_ba: u8,
}

/// Equation numbers `(A->B, B->A)` for a table row.
pub fn equation_numbers(row: RowParities) -> (u8, u8) {
    [
        (12, 13),
        (14, 15),
        (16, 17),
        (18, 19),
        (20, 21),
        (22, 23),
        (25, 24),
        (27, 26),
    ][row.number() - 1]
}

/// The printed formulas. Every case shares them; `case` only has to be a real case.
pub fn closed_form_reference(
    case: CaseId,
    row: RowParities,
    theta: f64,
    phi: f64,
    theta1: f64,
    alpha: f64,
) -> Result<ClosedForm> {
    if case == CaseId::Ambiguous {
        return Err(Error::NoCorrectionDefined);
    }
    check_alpha(alpha)?;
    let a = [theta.cos(), theta.sin(), phi.cos(), phi.sin()];
    let b = [theta1.cos(), theta1.sin()];
    let a2 = alpha * alpha;
    let x = (-2.0 * a2).exp();
    let y = (-4.0 * a2).exp();
    let sa: f64 = a.iter().map(|v| v * v).sum();
    let sb = b[0] * b[0] + b[1] * b[1];
    let cross03_12 = a[0] * a[3] + a[1] * a[2];

    let n_aa =
        (sa + 2.0 * x * (a[0] * a[2] + a[1] * a[3] + a[0] * a[1] + a[2] * a[3]) + 2.0 * y * cross03_12).powf(-0.5);
    let n_b = (sb + 2.0 * x * b[0] * b[1]).powf(-0.5);

    let n_a_12 =
        (sa - 2.0 * x * (a[0] * a[1] + a[0] * a[2] + a[1] * a[3] + a[2] * a[3]) + 2.0 * y * cross03_12).powf(-0.5);
    let n_a_38 =
        (sa + 2.0 * x * (a[0] * a[1] + a[2] * a[3] - a[0] * a[2] - a[1] * a[3]) - 2.0 * y * cross03_12).powf(-0.5);
    let n_a_47 =
        (sa - 2.0 * x * (a[0] * a[1] + a[0] * a[2] + a[1] * a[3] - a[2] * a[3]) + 2.0 * y * cross03_12).powf(-0.5);
    let n_b_minus = (sb - 2.0 * x * b[0] * b[1]).powf(-0.5);

    let e4 = (-PI * PI / (4.0 * a2)).exp();
    let e8 = (-PI * PI / (8.0 * a2)).exp();
    let odd_ratio = (1.0 - x) / (1.0 + x);
    let even_ratio = (1.0 + y) / (1.0 - y);

    let f_ab_with = |n: f64, exp: f64, inner: f64| (n * n_aa).powi(2) * exp * inner * inner;
    let p_ab_with = |n: f64| (n_aa / (8.0 * n)).powi(2);
    // every near-faithful B->A entry has the same printed shape
    let f_ba_nf = |n: f64| (n * n_b).powi(2) * e8 * (sb + 2.0 * x * b[0] * b[1]).powi(2);
    let p_ba_nf = |n: f64| (n_b / (8.0 * n)).powi(2);
    let faithful = (1.0, 1.0 / 64.0);

    let inner_ab_03 = sa + 2.0 * x * (a[0] * a[1] + a[2] * a[3]);
    let inner_ab_02 = sa + 2.0 * x * (a[0] * a[2] + a[1] * a[3]);

    let ((f_ab, p_ab), (f_ba, p_ba)) = match row.number() {
        1 => (
            (
                f_ab_with(n_a_12, e4, sa + 2.0 * y * (a[1] * a[2] - a[0] * a[3])),
                p_ab_with(n_a_12) * odd_ratio * odd_ratio,
            ),
            (f_ba_nf(n_b_minus), p_ba_nf(n_b_minus)),
        ),
        2 => (
            (
                f_ab_with(n_a_12, e4, sa + 2.0 * x * (a[1] * a[2] - a[0] * a[3])),
                p_ab_with(n_a_12) * odd_ratio * odd_ratio,
            ),
            faithful,
        ),
        3 => (
            (
                f_ab_with(n_a_38, e8, inner_ab_03),
                p_ab_with(n_a_38) * even_ratio * even_ratio,
            ),
            (f_ba_nf(n_b_minus), p_ba_nf(n_b_minus)),
        ),
        4 => (
            (f_ab_with(n_a_47, e8, inner_ab_02), p_ab_with(n_a_47) * even_ratio),
            (f_ba_nf(n_b_minus), p_ba_nf(n_b_minus)),
        ),
        5 => (faithful, faithful),
        6 => (faithful, (f_ba_nf(n_b_minus), p_ba_nf(n_b_minus))),
        7 => (
            (f_ab_with(n_a_47, e8, inner_ab_02), p_ab_with(n_a_47) * even_ratio),
            faithful,
        ),
        8 => ((f_ab_with(n_a_38, e8, inner_ab_03), p_ab_with(n_a_38)), faithful),
        _ => unreachable!("rows are numbered 1..=8"),
    };
    let (eq_ab, eq_ba) = equation_numbers(row);
    Ok(ClosedForm {
        f_ab,
        f_ba,
        p_ab,
        p_ba,
        eq_ab,
        eq_ba,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Quantity {
    Fidelity,
    Probability,
}

/// Printed values known to disagree with the engine before any audit ran: the
/// squared and unsquared probability ratios of the first and fourth rows, and
/// the first/third row displacement exponents that cannot both follow from one
/// displacement recipe.
pub const REGISTERED_MISMATCHES: [(u8, Quantity); 4] = [
    (12, Quantity::Fidelity),
    (12, Quantity::Probability),
    (16, Quantity::Fidelity),
    (18, Quantity::Probability),
];

/// Printed probabilities are compared only from this amplitude on, as limits.
pub const ASYMPTOTIC_ALPHA: f64 = 5.0;
pub const FIDELITY_TOL: f64 = 1e-9;
pub const PROBABILITY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    pub equation: u8,
    pub quantity: Quantity,
    pub direction: Direction,
    pub case: CaseId,
    pub row: usize,
    pub printed: f64,
    pub engine: f64,
    /// `false` for probabilities below [`ASYMPTOTIC_ALPHA`], which are listed but not judged.
    pub compared: bool,
    pub matches: bool,
    pub registered: bool,
}

impl AuditEntry {
    pub fn is_unexpected(&self) -> bool {
        self.compared && !self.matches && !self.registered
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub theta: f64,
    pub phi: f64,
    pub theta1: f64,
    pub alpha: f64,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| e.compared && !e.matches)
    }

    pub fn unexpected(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| e.is_unexpected())
    }

    /// Equations with at least one compared mismatch, sorted.
    pub fn mismatching_equations(&self) -> Vec<u8> {
        let mut eqs: Vec<u8> = self.mismatches().map(|e| e.equation).collect();
        eqs.sort_unstable();
        eqs.dedup();
        eqs
    }

    pub fn passes(&self) -> bool {
        self.unexpected().next().is_none()
    }
}

/// Every printed value of every case table against the engine.
pub fn formula_audit(theta: f64, phi: f64, theta1: f64, alpha: f64) -> Result<AuditReport> {
    let protocol = Protocol::from_angles(theta, phi, theta1, alpha)?;
    let mut entries = Vec::new();
    for case in CaseId::CASES {
        for row in RowParities::ROWS {
            let outcome = protocol.outcome(case, row)?;
            let cf = closed_form_reference(case, row, theta, phi, theta1, alpha)?;
            let values = [
                (
                    cf.eq_ab,
                    Quantity::Fidelity,
                    Direction::AliceToBob,
                    cf.f_ab,
                    outcome.f_ab,
                ),
                (
                    cf.eq_ba,
                    Quantity::Fidelity,
                    Direction::BobToAlice,
                    cf.f_ba,
                    outcome.f_ba,
                ),
                (
                    cf.eq_ab,
                    Quantity::Probability,
                    Direction::AliceToBob,
                    cf.p_ab,
                    outcome.probability,
                ),
                (
                    cf.eq_ba,
                    Quantity::Probability,
                    Direction::BobToAlice,
                    cf.p_ba,
                    outcome.probability,
                ),
            ];
            for (equation, quantity, direction, printed, engine) in values {
                let (compared, tol) = match quantity {
                    Quantity::Fidelity => (true, FIDELITY_TOL),
                    Quantity::Probability => (alpha >= ASYMPTOTIC_ALPHA, PROBABILITY_TOL),
                };
                entries.push(AuditEntry {
                    equation,
                    quantity,
                    direction,
                    case,
                    row: row.number(),
                    printed,
                    engine,
                    compared,
                    matches: (printed - engine).abs() <= tol,
                    registered: REGISTERED_MISMATCHES.contains(&(equation, quantity)),
                });
            }
        }
    }
    Ok(AuditReport {
        theta,
        phi,
        theta1,
        alpha,
        entries,
    })
}

/// Rows whose fidelities are printed as equal across all eight cases.
pub const EQUALITY_GROUPS: [(Direction, &[usize]); 6] = [
    (Direction::AliceToBob, &[1, 2]),
    (Direction::AliceToBob, &[3, 8]),
    (Direction::AliceToBob, &[4, 7]),
    (Direction::AliceToBob, &[5, 6]),
    (Direction::BobToAlice, &[1, 3, 4, 6]),
    (Direction::BobToAlice, &[2, 5, 7, 8]),
];

pub const EQUALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct EqualityGroup {
    pub direction: Direction,
    pub rows: Vec<usize>,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    pub flagged: bool,
}

impl EqualityGroup {
    pub fn name(&self) -> String {
        let rows: Vec<String> = self.rows.iter().map(|r| format!("F_{r}")).collect();
        format!("{} {{{}}}", self.direction.arrow(), rows.join(", "))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EqualityReport {
    pub groups: Vec<EqualityGroup>,
    /// Pairs of distinct groups (indices into `groups`) whose values also coincide.
    pub coincident: Vec<(usize, usize)>,
}

impl EqualityReport {
    pub fn all_hold(&self) -> bool {
        self.groups.iter().all(|g| !g.flagged)
    }
}

pub fn fidelity_equality_report(enumeration: &Enumeration) -> Result<EqualityReport> {
    let mut groups = Vec::new();
    for (direction, rows) in EQUALITY_GROUPS {
        let mut values = Vec::new();
        for case in CaseId::CASES {
            for &r in rows {
                let row = RowParities::from_number(r).expect("valid row");
                let o = enumeration.get(case, row).ok_or_else(|| {
                    Error::InvalidParameter(format!("outcome ({case}, row {r}) has zero probability"))
                })?;
                values.push(match direction {
                    Direction::AliceToBob => o.f_ab,
                    Direction::BobToAlice => o.f_ba,
                });
            }
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        groups.push(EqualityGroup {
            direction,
            rows: rows.to_vec(),
            min,
            max,
            spread: max - min,
            flagged: max - min >= EQUALITY_TOL,
        });
    }
    let mut coincident = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let (g, h) = (&groups[i], &groups[j]);
            if g.direction == h.direction
                && (g.max - h.min).abs() < EQUALITY_TOL
                && (h.max - g.min).abs() < EQUALITY_TOL
            {
                coincident.push((i, j));
            }
        }
    }
    Ok(EqualityReport { groups, coincident })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faithful_entries() {
        let cf = closed_form_reference(CaseId::I, RowParities::ALL_EVEN, 0.3, 0.9, 0.7, 1.0).unwrap();
        assert_eq!((cf.f_ab, cf.p_ab, cf.f_ba, cf.p_ba), (1.0, 1.0 / 64.0, 1.0, 1.0 / 64.0));
        assert_eq!((cf.eq_ab, cf.eq_ba), (20, 21));
        let cf = closed_form_reference(CaseId::IV, RowParities::ROWS[1], 0.3, 0.9, 0.7, 1.0).unwrap();
        assert_eq!((cf.f_ba, cf.p_ba, cf.eq_ba), (1.0, 1.0 / 64.0, 15));
    }

    #[test]
    fn printed_first_row_backward_fidelity_at_degenerate_angle() {
        let cf = closed_form_reference(CaseId::I, RowParities::ROWS[0], 0.0, 0.0, 0.0, 2.0).unwrap();
        let expected = (-PI * PI / 32.0).exp();
        assert!((cf.f_ba - expected).abs() < 1e-15);
        assert!((cf.f_ba - 0.7346).abs() < 1e-4);
    }

    #[test]
    fn rejects_ambiguous_case() {
        assert!(closed_form_reference(CaseId::Ambiguous, RowParities::ALL_EVEN, 0.0, 0.0, 0.0, 1.0).is_err());
    }
}
