//! Runs a parsed circuit on the coherent engine.

use abqt_core::measurement::{herald_state, PatternEvaluator};
use abqt_core::optics::Gate;
use abqt_core::{fidelity, DetectionPattern, OutcomeClass, StateVector, C64};
use serde::Serialize;

use super::parse::{Diagnostic, DiagnosticKind, Program, Statement, Term};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct CircuitReport {
    pub alpha: f64,
    pub modes: usize,
    pub gates: usize,
    pub measured: Vec<(usize, OutcomeClass)>,
    pub probability: Option<f64>,
    /// Unmeasured modes in ascending order.
    pub output_modes: Vec<usize>,
    /// `(coefficient, labels)` of the normalized output state.
    pub output: Vec<(C64, Vec<C64>)>,
    pub fidelity: Option<f64>,
}

fn diag(line: usize, message: String) -> CliError {
    CliError::Circuit(vec![Diagnostic {
        line,
        column: 1,
        kind: DiagnosticKind::Order,
        message,
    }])
}

fn build(terms: &[Term], alpha: f64) -> StateVector {
    let width = terms.first().map_or(0, |t| t.labels.len());
    StateVector::from_terms(
        width,
        terms.iter().map(|t| {
            (
                C64::new(t.coeff, 0.0),
                t.labels.iter().map(|l| l.value(alpha)).collect(),
            )
        }),
    )
}

/// `new[k] = old[position of wanted[k] in have]`.
fn reorder(state: &StateVector, have: &[usize], wanted: &[usize]) -> CliResult<StateVector> {
    let order: Vec<usize> = wanted
        .iter()
        .map(|w| have.iter().position(|h| h == w).expect("same mode set"))
        .collect();
    Ok(state.permute_modes(&order)?)
}

pub fn evaluate(program: &Program, alpha: f64) -> CliResult<CircuitReport> {
    let Some(n) = program.mode_count() else {
        return Err(diag(1, "program declares no modes".into()));
    };
    if !alpha.is_finite() {
        return Err(CliError::config("alpha", "must be finite"));
    }

    let mut state = StateVector::scalar(C64::new(1.0, 0.0));
    let mut have = Vec::new();
    let mut gates = Vec::new();
    let mut measured = Vec::new();
    let mut target = None;
    for (s, &line) in program.statements.iter().zip(&program.lines) {
        match s {
            Statement::Modes(_) => {}
            Statement::State { modes, terms } => {
                let part = build(terms, alpha);
                if part.norm_sqr() <= 0.0 {
                    return Err(diag(line, "prepared state has zero norm".into()));
                }
                state = state.tensor(&part.normalize()?);
                have.extend(modes);
            }
            Statement::Bps(i, j) => gates.push(Gate::Bps { i: *i, j: *j }),
            Statement::Phase { mode, psi } => gates.push(Gate::Phase { mode: *mode, psi: *psi }),
            Statement::Disp { mode, beta } => gates.push(Gate::Displace {
                mode: *mode,
                beta: *beta,
            }),
            Statement::Measure { mode, class } => measured.push((*mode, *class)),
            Statement::Target { modes, terms } => target = Some((line, modes.clone(), terms.clone())),
        }
    }
    for m in 0..n {
        if !have.contains(&m) {
            state = state.tensor(&StateVector::vacuum(1));
            have.push(m);
        }
    }
    let all: Vec<usize> = (0..n).collect();
    state = reorder(&state, &have, &all)?;
    let gate_count = gates.len();
    // measurements only forbid later gates on their own mode, so they commute to the end
    for g in gates {
        state = g.apply(&state)?;
    }

    let output_modes: Vec<usize> = all
        .iter()
        .copied()
        .filter(|m| !measured.iter().any(|(k, _)| k == m))
        .collect();
    let (probability, output) = if measured.is_empty() {
        (None, state.canonical().normalize()?)
    } else {
        let modes: Vec<usize> = measured.iter().map(|&(m, _)| m).collect();
        let pattern = DetectionPattern::new(measured.iter().map(|&(_, c)| c).collect());
        let p = PatternEvaluator::new(&state, &modes)?.probability(&pattern)?;
        if output_modes.is_empty() {
            (Some(p), StateVector::scalar(C64::new(1.0, 0.0)))
        } else {
            (Some(p), herald_state(&state, &pattern, &modes)?)
        }
    };

    let fidelity = match target {
        None => None,
        Some((line, modes, terms)) => {
            let mut sorted = modes.clone();
            sorted.sort_unstable();
            if sorted != output_modes {
                return Err(diag(
                    line,
                    format!("TARGET must list exactly the unmeasured modes {output_modes:?}"),
                ));
            }
            let t = build(&terms, alpha);
            if t.norm_sqr() <= 0.0 {
                return Err(diag(line, "target state has zero norm".into()));
            }
            Some(fidelity(&reorder(&output, &output_modes, &modes)?, &t)?)
        }
    };

    Ok(CircuitReport {
        alpha,
        modes: n,
        gates: gate_count,
        measured,
        probability,
        output_modes,
        output: output.terms().iter().map(|t| (t.coeff, t.labels.clone())).collect(),
        fidelity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    fn run(text: &str, alpha: f64) -> CircuitReport {
        evaluate(&parse_circuit(text).unwrap(), alpha).unwrap()
    }

    #[test]
    fn beam_splitter_on_a_product() {
        let r = run(
            "MODES 2\nSTATE 0 = |a>\nBPS 0 1\nTARGET 0 1 = |0.7071067811865476a,0.7071067811865476a>",
            1.3,
        );
        assert!((r.fidelity.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.output.len(), 1);
    }

    #[test]
    fn cat_parity() {
        let even = "MODES 1\nSTATE 0 = |a> + |-a>\nMEASURE 0 ODD";
        assert!(run(even, 1.0).probability.unwrap().abs() < 1e-14);
        // an odd count on one half of |a,a> - |-a,-a> leaves the even cat
        let r = run(
            "MODES 2\nSTATE 0 1 = |a,a> - |-a,-a>\nMEASURE 0 ODD\nTARGET 1 = |a> + |-a>",
            1.0,
        );
        assert!((r.fidelity.unwrap() - 1.0).abs() < 1e-12);
        let r = run(
            "MODES 2\nSTATE 0 1 = |a,a> - |-a,-a>\nMEASURE 0 EVEN\nTARGET 1 = |a> + |-a>",
            1.0,
        );
        assert!(r.fidelity.unwrap() < 1e-12);
    }

    #[test]
    fn target_must_cover_outputs() {
        let p = parse_circuit("MODES 2\nMEASURE 0 ZERO\nTARGET 0 1 = |0,0>").unwrap();
        assert!(matches!(evaluate(&p, 1.0), Err(CliError::Circuit(d)) if d[0].line == 3));
    }

    #[test]
    fn target_order_is_respected() {
        let r = run("MODES 2\nSTATE 0 1 = |a,0.5a>\nTARGET 1 0 = |0.5a,a>", 1.0);
        assert!((r.fidelity.unwrap() - 1.0).abs() < 1e-14);
    }
}
