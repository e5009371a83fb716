//! Case tables regenerated from the engine.
//!
//! Heralded-state signs come from running the protocol on basis inputs
//! (Alice `e_i`, Bob `e_j`): each run heralds a single coherent term whose
//! labels and sign give one entry of the printed superposition.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

use super::cases::{pattern_for, CaseId, RowParities};
use super::outcome::{Classification, Protocol};
use super::states::{AliceInfo, BobInfo, ChannelSpec};

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub case: CaseId,
    pub row: usize,
    pub parities: RowParities,
    /// Sign of `A_i` relative to `A_0`, and its (mode 4, mode 5) labels in units of alpha.
    pub alice_terms: [(f64, [f64; 2]); 4],
    /// Sign of `B_j` relative to `B_0`, and its mode-6 label in units of alpha.
    pub bob_terms: [(f64, f64); 2],
    pub alice_op: String,
    pub bob_op: String,
    /// Alice's lab (B->A) and Bob's lab (A->B).
    pub class_alice_lab: Classification,
    pub class_bob_lab: Classification,
}

fn ket(labels: &[f64]) -> String {
    let parts: Vec<&str> = labels.iter().map(|&l| if l > 0.0 { "α" } else { "-α" }).collect();
    format!("|{}⟩", parts.join(","))
}

fn signed(first: bool, sign: f64, body: String) -> String {
    match (first, sign > 0.0) {
        (true, true) => body,
        (true, false) => format!("-{body}"),
        (false, true) => format!(" + {body}"),
        (false, false) => format!(" - {body}"),
    }
}

impl TableRow {
    pub fn tag(&self) -> String {
        let (a, b) = (self.class_alice_lab.tag(), self.class_bob_lab.tag());
        if a == b {
            a.to_string()
        } else {
            format!("{a}/{b}")
        }
    }

    pub fn parity_label(&self) -> String {
        self.parities.label()
    }

    pub fn heralded_expression(&self) -> String {
        let mut a = String::new();
        for (i, (s, l)) in self.alice_terms.iter().enumerate() {
            a.push_str(&signed(i == 0, *s, format!("A_{i}{}", ket(l))));
        }
        let mut b = String::new();
        for (j, (s, l)) in self.bob_terms.iter().enumerate() {
            b.push_str(&signed(j == 0, *s, format!("B_{j}{}", ket(&[*l]))));
        }
        format!("N_AA'({a})_{{4,5}} ⊗ N_B({b})_6")
    }
}

fn unit<const N: usize>(k: usize) -> [C64; N] {
    let mut v = [C64::new(0.0, 0.0); N];
    v[k] = C64::new(1.0, 0.0);
    v
}

/// Single heralded term `(coefficient, labels / alpha)` for a basis run.
fn basis_term(protocol: &Protocol, case: CaseId, row: RowParities) -> Result<(f64, [f64; 3])> {
    let state = protocol.herald(&pattern_for(case, row)?)?.canonical();
    let [t] = state.terms() else {
        return Err(Error::InvalidParameter(format!(
            "basis run heralded {} terms for ({case}, row {})",
            state.terms().len(),
            row.number()
        )));
    };
    let alpha = protocol.alpha();
    let l = |k: usize| t.labels[k].re / alpha;
    Ok((t.coeff.re, [l(0), l(1), l(2)]))
}

/// All 64 rows. Signs and operators do not depend on the amplitudes; the
/// F/NF column is read from a run at the given angles and `alpha`.
pub fn generate_tables(theta: f64, phi: f64, theta1: f64, alpha: f64) -> Result<Vec<TableRow>> {
    let spec = ChannelSpec::new(alpha)?;
    let mut runs = Vec::with_capacity(8);
    for i in 0..4 {
        for j in 0..2 {
            runs.push(Protocol::new(AliceInfo::new(unit(i))?, BobInfo::new(unit(j))?, spec)?);
        }
    }
    let run = |i: usize, j: usize| &runs[2 * i + j];
    let generic = Protocol::from_angles(theta, phi, theta1, alpha)?;

    let mut rows = Vec::with_capacity(64);
    for case in CaseId::CASES {
        for parities in RowParities::ROWS {
            let (c00, _) = basis_term(run(0, 0), case, parities)?;
            let mut alice_terms = [(0.0, [0.0; 2]); 4];
            for (i, slot) in alice_terms.iter_mut().enumerate() {
                let (c, l) = basis_term(run(i, 0), case, parities)?;
                *slot = ((c / c00).signum(), [l[0], l[1]]);
            }
            let mut bob_terms = [(0.0, 0.0); 2];
            for (j, slot) in bob_terms.iter_mut().enumerate() {
                let (c, l) = basis_term(run(0, j), case, parities)?;
                *slot = ((c / c00).signum(), l[2]);
            }
            let outcome = generic.outcome(case, parities)?;
            rows.push(TableRow {
                case,
                row: parities.number(),
                parities,
                alice_terms,
                bob_terms,
                alice_op: outcome.plan.alice_symbol(),
                bob_op: outcome.plan.bob_symbol(),
                class_alice_lab: outcome.class_ba,
                class_bob_lab: outcome.class_ab,
            });
        }
    }
    Ok(rows)
}
