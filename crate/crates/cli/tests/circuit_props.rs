use abqt_cli::circuit::{parse_circuit, Label, Program, Statement, Term};
use abqt_core::{OutcomeClass, C64};
use proptest::prelude::*;

const VOCAB: &[&str] = &[
    "MODES",
    "STATE",
    "BPS",
    "PHASE",
    "DISP",
    "MEASURE",
    "TARGET",
    "ZERO",
    "EVEN",
    "ODD",
    "modes",
    "pi",
    "-pi/2",
    "0",
    "1",
    "2",
    "7",
    "99999999999999999999999",
    "1e400",
    "-0.5",
    ".5",
    "1e-3",
    "=",
    "|",
    ">",
    ",",
    "+",
    "-",
    "*",
    "/",
    "a",
    "-a",
    "ia",
    "0.5ia",
    "|a>",
    "|a,-a>",
    "#",
    "\n",
    "\r\n",
    "\t",
    "é",
    "∞",
    "NaN",
    "inf",
    "()",
];

fn soup() -> impl Strategy<Value = String> {
    prop::collection::vec(
        (prop::sample::select(VOCAB), prop::sample::select(&[" ", "", "\n"][..])),
        0..30,
    )
    .prop_map(|parts| parts.into_iter().map(|(a, b)| format!("{a}{b}")).collect())
}

/// Every diagnostic must point into the input.
fn check_total(text: &str) -> Result<(), TestCaseError> {
    let lines: Vec<&str> = text.split('\n').collect();
    match parse_circuit(text) {
        Ok(p) => {
            let again = parse_circuit(&p.to_string());
            prop_assert_eq!(again.as_ref().ok(), Some(&p));
        }
        Err(diags) => {
            prop_assert!(!diags.is_empty());
            for d in diags {
                prop_assert!(d.line >= 1 && d.line <= lines.len(), "{d:?}");
                let width = lines[d.line - 1].chars().count();
                prop_assert!(
                    d.column >= 1 && d.column <= width + 1,
                    "{d:?} in {:?}",
                    lines[d.line - 1]
                );
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn parser_is_total_on_arbitrary_text(text in any::<String>()) {
        check_total(&text)?;
    }

    #[test]
    fn parser_is_total_on_token_soup(text in soup()) {
        check_total(&text)?;
    }

    #[test]
    fn parser_is_total_after_a_header(text in soup()) {
        check_total(&format!("MODES 3\n{text}"))?;
    }
}

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        Just(-1.0),
        -10.0..10.0f64,
        prop::num::f64::NORMAL,
        prop::num::f64::SUBNORMAL,
    ]
}

fn label() -> impl Strategy<Value = Label> {
    (real(), real(), real(), real()).prop_map(|(a, b, c, d)| Label {
        scale: C64::new(a, b),
        offset: C64::new(c, d),
    })
}

fn terms(width: usize) -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(
        (real(), prop::collection::vec(label(), width)).prop_map(|(coeff, labels)| Term { coeff, labels }),
        1..4,
    )
}

fn class() -> impl Strategy<Value = OutcomeClass> {
    prop::sample::select(OutcomeClass::ALL.to_vec())
}

fn program() -> impl Strategy<Value = Program> {
    (2usize..6).prop_flat_map(|n| {
        let modes = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        let gate = prop_oneof![
            (0..n, 0..n)
                .prop_filter("distinct", |(i, j)| i != j)
                .prop_map(|(i, j)| Statement::Bps(i, j)),
            (0..n, real()).prop_map(|(mode, psi)| Statement::Phase { mode, psi }),
            (0..n, real(), real()).prop_map(|(mode, re, im)| Statement::Disp {
                mode,
                beta: C64::new(re, im)
            }),
        ];
        (
            modes,
            1..=n,
            prop::collection::vec(gate, 0..6),
            0..n,
            prop::collection::vec(class(), n),
            any::<bool>(),
        )
            .prop_flat_map(move |(order, k, gates, measured, classes, with_target)| {
                let prepared: Vec<usize> = order[..k].to_vec();
                let outputs: Vec<usize> = order[measured..].to_vec();
                (terms(prepared.len()), terms(outputs.len().max(1))).prop_map(move |(st, tt)| {
                    let mut statements = vec![Statement::Modes(n)];
                    statements.push(Statement::State {
                        modes: prepared.clone(),
                        terms: st,
                    });
                    statements.extend(gates.clone());
                    for (&m, &c) in order[..measured].iter().zip(&classes) {
                        statements.push(Statement::Measure { mode: m, class: c });
                    }
                    if with_target && !outputs.is_empty() {
                        statements.push(Statement::Target {
                            modes: outputs.clone(),
                            terms: tt,
                        });
                    }
                    let lines = (1..=statements.len()).collect();
                    Program { statements, lines }
                })
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn pretty_print_round_trips(p in program()) {
        let text = p.to_string();
        let parsed = parse_circuit(&text).map_err(|d| TestCaseError::fail(format!("{d:?}\n{text}")))?;
        prop_assert_eq!(&parsed, &p, "{}", text);
        prop_assert_eq!(parsed.to_string(), text);
    }
}
