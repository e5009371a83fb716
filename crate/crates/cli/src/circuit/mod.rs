mod eval;
mod parse;

pub use eval::{evaluate, CircuitReport};
pub use parse::{parse_circuit, Diagnostic, DiagnosticKind, Label, Program, Statement, Term, MAX_MODES};
