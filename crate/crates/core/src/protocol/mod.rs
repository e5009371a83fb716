//! The bidirectional teleportation protocol: Alice sends a two-mode entangled
//! coherent state to Bob while Bob sends a one-mode cat state to Alice, over a
//! six-mode channel of three Bell-type pairs.
//!
//! Mode labels follow [`modes`]; detector pairs (7,8), (9,10), (11,12) herald
//! outputs 4, 5 (Bob) and 6 (Alice).

pub mod cases;
pub mod modes;
pub mod outcome;
pub mod reference;
pub mod states;
pub mod tables;

pub use cases::{
    classify_case, correction_amplitude, lookup_correction, pattern_for, split_pattern, CaseId, CorrectionPlan,
    ModeCorrection, Parity, RowParities,
};
pub use outcome::{
    apply_correction, average_fidelity, enumerate_outcomes, outcome_fidelities, total_success_probability,
    Classification, Enumeration, Protocol, ProtocolOutcome, SuccessSummary,
};
pub use reference::{closed_form_reference, fidelity_equality_report, formula_audit, ClosedForm, Direction};
pub use states::{
    assemble_and_mix, build_bell, build_channel, channel_norm_check, AliceInfo, BellVariant, BobInfo, ChannelSpec,
    DEFAULT_BELL_VARIANTS,
};
pub use tables::{generate_tables, TableRow};
