use std::fmt::Write as _;

use abqt_core::fock::{verify_protocol, VerifyConfig, VerifyReport};
use abqt_core::protocol::{generate_tables, CaseId, Protocol, RowParities, TableRow};
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::CircuitReport;
use crate::config::{OutputFormat, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::output::{csv_line, json, num, MarkdownTable};

#[derive(Debug, Clone, Serialize)]
pub struct RunRow {
    pub pattern: String,
    pub case: CaseId,
    pub row: usize,
    pub probability: f64,
    pub f_ab: f64,
    pub f_ba: f64,
    pub class_ab: &'static str,
    pub class_ba: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub alpha: f64,
    pub alice: [f64; 4],
    pub bob: [f64; 2],
    pub rows: Vec<RunRow>,
    /// The eight all-even rows.
    pub faithful_total: f64,
    pub table_total: f64,
    pub ambiguous_mass: f64,
    pub total_probability: f64,
    pub average_f_ab: f64,
    pub average_f_ba: f64,
}

pub fn cmd_run(cfg: &ScenarioConfig) -> CliResult<RunReport> {
    cfg.validate()?;
    let alice = cfg.alice_info(cfg.theta, cfg.phi)?;
    let bob = cfg.bob_info()?;
    let e = Protocol::new(alice, bob, cfg.channel(cfg.alpha)?)?.enumerate()?;
    let success = e.success();
    let (average_f_ab, average_f_ba) = e.average_fidelity();
    Ok(RunReport {
        alpha: cfg.alpha,
        alice: alice.a.map(|c| c.re),
        bob: bob.b.map(|c| c.re),
        rows: e
            .outcomes
            .iter()
            .map(|o| RunRow {
                pattern: o.pattern.to_string(),
                case: o.case,
                row: o.row.number(),
                probability: o.probability,
                f_ab: o.f_ab,
                f_ba: o.f_ba,
                class_ab: o.class_ab.tag(),
                class_ba: o.class_ba.tag(),
            })
            .collect(),
        faithful_total: success.faithful,
        table_total: success.rows,
        ambiguous_mass: success.ambiguous,
        total_probability: e.total_probability,
        average_f_ab,
        average_f_ba,
    })
}

pub fn render_run(r: &RunReport, format: OutputFormat) -> String {
    let summary = [
        ("faithful_total", r.faithful_total),
        ("table_total", r.table_total),
        ("ambiguous_mass", r.ambiguous_mass),
        ("total_probability", r.total_probability),
        ("average_f_ab", r.average_f_ab),
        ("average_f_ba", r.average_f_ba),
    ];
    match format {
        OutputFormat::Json => json(r),
        OutputFormat::Csv => {
            let mut out = String::new();
            for (k, v) in summary {
                let _ = writeln!(out, "# {k}={}", num(v));
            }
            out.push_str("pattern,case,row,probability,f_ab,f_ba,class_ab,class_ba\n");
            for row in &r.rows {
                out.push_str(&csv_line(&[
                    row.pattern.clone(),
                    row.case.to_string(),
                    row.row.to_string(),
                    num(row.probability),
                    num(row.f_ab),
                    num(row.f_ba),
                    row.class_ab.into(),
                    row.class_ba.into(),
                ]));
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = format!("alpha = {}, A = {:?}, B = {:?}\n\n", r.alpha, r.alice, r.bob);
            let mut t = MarkdownTable::new(&["pattern", "case", "row", "P", "F A->B", "F B->A", "A->B", "B->A"]);
            for row in &r.rows {
                t.row(&[
                    row.pattern.clone(),
                    row.case.to_string(),
                    row.row.to_string(),
                    format!("{:.6e}", row.probability),
                    format!("{:.10}", row.f_ab),
                    format!("{:.10}", row.f_ba),
                    row.class_ab.into(),
                    row.class_ba.into(),
                ]);
            }
            out.push_str(&t.finish());
            out.push('\n');
            for (k, v) in summary {
                let _ = writeln!(out, "- {k}: {v:.12}");
            }
            out
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub phi: f64,
    pub theta1: f64,
    pub alpha: f64,
    pub quantity: &'static str,
    pub value: f64,
}

/// Surface quantities: case-I rows 1, 3 and 4, Alice to Bob.
pub const SURFACE_QUANTITIES: [(&str, usize); 3] = [("F1_AB", 1), ("F3_AB", 3), ("F4_AB", 4)];

pub const CURVE_QUANTITIES: [&str; 6] = ["F1_AB", "F1_BA", "F3_AB", "F4_AB", "FAV_AB", "FAV_BA"];

fn case_one(row: usize) -> RowParities {
    RowParities::from_number(row).expect("rows 1..=8")
}

/// Surfaces over the angle grid, then the alpha curves. Points run in
/// parallel; rows come out in grid order.
pub fn cmd_sweep(cfg: &ScenarioConfig) -> CliResult<Vec<SweepRow>> {
    cfg.validate_sweep()?;
    let bob = cfg.bob_info()?;
    let theta1 = cfg.theta1;
    let thetas = cfg.sweep.theta.values();
    let phis = cfg.sweep.phi.values();
    let mut points = Vec::with_capacity(cfg.sweep.alphas.len() * thetas.len() * phis.len());
    for &alpha in &cfg.sweep.alphas {
        for &theta in &thetas {
            for &phi in &phis {
                points.push((alpha, theta, phi));
            }
        }
    }
    let surfaces: Vec<Vec<SweepRow>> = points
        .par_iter()
        .map(|&(alpha, theta, phi)| {
            let alice = abqt_core::protocol::AliceInfo::from_angles(theta, phi)?;
            let p = Protocol::new(alice, bob, cfg.channel(alpha)?)?;
            SURFACE_QUANTITIES
                .iter()
                .map(|&(quantity, row)| {
                    Ok(SweepRow {
                        theta,
                        phi,
                        theta1,
                        alpha,
                        quantity,
                        value: p.outcome(CaseId::I, case_one(row))?.f_ab,
                    })
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<_>>()?;

    let alice = cfg.alice_info(cfg.theta, cfg.phi)?;
    let curves: Vec<Vec<SweepRow>> = cfg
        .sweep
        .curve_alphas
        .par_iter()
        .map(|&alpha| {
            let e = Protocol::new(alice, bob, cfg.channel(alpha)?)?.enumerate()?;
            let get = |row: usize| {
                e.get(CaseId::I, case_one(row))
                    .ok_or_else(|| CliError::Internal(format!("case I row {row} was not heralded at alpha {alpha}")))
            };
            let (fav_ab, fav_ba) = e.average_fidelity();
            let values = [get(1)?.f_ab, get(1)?.f_ba, get(3)?.f_ab, get(4)?.f_ab, fav_ab, fav_ba];
            Ok(CURVE_QUANTITIES
                .iter()
                .zip(values)
                .map(|(&quantity, value)| SweepRow {
                    theta: cfg.theta,
                    phi: cfg.phi,
                    theta1,
                    alpha,
                    quantity,
                    value,
                })
                .collect())
        })
        .collect::<CliResult<_>>()?;
    Ok(surfaces.into_iter().chain(curves).flatten().collect())
}

pub fn render_sweep(rows: &[SweepRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => {
            let mut out = String::with_capacity(rows.len() * 120);
            out.push_str("theta,phi,theta1,alpha,quantity,value\n");
            for r in rows {
                out.push_str(&csv_line(&[
                    num(r.theta),
                    num(r.phi),
                    num(r.theta1),
                    num(r.alpha),
                    r.quantity.into(),
                    num(r.value),
                ]));
            }
            out
        }
        OutputFormat::Markdown => {
            let mut t = MarkdownTable::new(&["theta", "phi", "theta1", "alpha", "quantity", "value"]);
            for r in rows {
                t.row(&[
                    format!("{:.6}", r.theta),
                    format!("{:.6}", r.phi),
                    format!("{:.6}", r.theta1),
                    format!("{}", r.alpha),
                    r.quantity.into(),
                    format!("{:.12}", r.value),
                ]);
            }
            t.finish()
        }
    }
}

pub fn cmd_tables(cfg: &ScenarioConfig) -> CliResult<Vec<TableRow>> {
    cfg.validate()?;
    Ok(generate_tables(cfg.theta, cfg.phi, cfg.theta1, cfg.alpha)?)
}

#[derive(Serialize)]
struct TableRecord<'a> {
    table: usize,
    case: CaseId,
    row: usize,
    parities: String,
    heralded_state: String,
    alice_op: &'a str,
    bob_op: &'a str,
    tag: String,
}

pub fn render_tables(rows: &[TableRow], format: OutputFormat) -> String {
    let records: Vec<TableRecord> = rows
        .iter()
        .map(|r| TableRecord {
            table: r.case.number().unwrap_or(0),
            case: r.case,
            row: r.row,
            parities: r.parity_label(),
            heralded_state: r.heralded_expression(),
            alice_op: &r.alice_op,
            bob_op: &r.bob_op,
            tag: r.tag(),
        })
        .collect();
    match format {
        OutputFormat::Json => json(&records),
        OutputFormat::Csv => {
            let mut out = String::from("table,case,row,parities,heralded_state,alice_op,bob_op,tag\n");
            for r in &records {
                out.push_str(&csv_line(&[
                    r.table.to_string(),
                    r.case.to_string(),
                    r.row.to_string(),
                    r.parities.clone(),
                    r.heralded_state.clone(),
                    r.alice_op.into(),
                    r.bob_op.into(),
                    r.tag.clone(),
                ]));
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = String::new();
            for chunk in records.chunks(8) {
                let first = &chunk[0];
                let _ = writeln!(out, "## Table {} (Case {})\n", first.table, first.case);
                let mut t = MarkdownTable::new(&["Parities", "Heralded state", "Alice", "Bob", "F/NF"]);
                for r in chunk {
                    t.row(&[
                        r.parities.clone(),
                        r.heralded_state.clone(),
                        r.alice_op.into(),
                        r.bob_op.into(),
                        r.tag.clone(),
                    ]);
                }
                out.push_str(&t.finish());
                out.push('\n');
            }
            out
        }
    }
}

pub fn cmd_verify(cfg: &ScenarioConfig) -> CliResult<VerifyReport> {
    cfg.validate()?;
    if cfg.alice.is_some() || cfg.bob.is_some() {
        return Err(CliError::config(
            "alice",
            "verify takes angles, not explicit amplitudes",
        ));
    }
    let vc = VerifyConfig {
        cutoff: cfg.oracle.cutoff,
        eps: cfg.oracle.eps,
        tolerance: cfg.oracle.tolerance,
        ..VerifyConfig::new(cfg.theta, cfg.phi, cfg.theta1, cfg.alpha)
    };
    Ok(verify_protocol(&vc)?)
}

pub fn render_verify(r: &VerifyReport, format: OutputFormat) -> String {
    let max_prob = r
        .outcomes
        .iter()
        .map(|o| (o.engine_probability - o.fock_probability).abs())
        .fold(r.pattern_max_dev, f64::max);
    let max_herald = r.outcomes.iter().map(|o| o.infidelity.abs()).fold(0.0, f64::max);
    let max_class = r.outcomes.iter().map(|o| o.class_spread.abs()).fold(0.0, f64::max);
    let max_gate = r.gates.iter().map(|g| g.deviation).fold(0.0, f64::max);
    let status = if r.passed { "PASS" } else { "FAIL" };
    let lines = [
        ("pair marginals", r.marginal_max_dev),
        ("pattern probabilities", max_prob),
        ("heralded fidelities", max_herald),
        ("class consistency", max_class),
        ("gates", max_gate),
    ];
    match format {
        OutputFormat::Json => json(r),
        OutputFormat::Csv => {
            let mut out = String::from("quantity,max_deviation\n");
            for (k, v) in lines {
                out.push_str(&csv_line(&[k.into(), num(v)]));
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = format!(
                "{status}: alpha {}, cutoff {}, tolerance {:e}, max deviation {:.3e}\n\n",
                r.config.alpha, r.cutoff, r.config.tolerance, r.max_deviation
            );
            let mut t = MarkdownTable::new(&["quantity", "max deviation"]);
            for (k, v) in lines {
                t.row(&[k.into(), format!("{v:.3e}")]);
            }
            out.push_str(&t.finish());
            let _ = writeln!(out, "\noracle total probability: {:.15}", r.fock_total_probability);
            out
        }
    }
}

pub fn render_circuit(r: &CircuitReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(r),
        OutputFormat::Csv => {
            let mut out = String::from("quantity,value\n");
            if let Some(p) = r.probability {
                out.push_str(&csv_line(&["probability".into(), num(p)]));
            }
            if let Some(f) = r.fidelity {
                out.push_str(&csv_line(&["fidelity".into(), num(f)]));
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = format!("{} modes, {} gates, alpha {}\n", r.modes, r.gates, r.alpha);
            if !r.measured.is_empty() {
                let m: Vec<String> = r.measured.iter().map(|(k, c)| format!("{k}:{}", c.short())).collect();
                let _ = writeln!(out, "measured {}", m.join(" "));
            }
            if let Some(p) = r.probability {
                let _ = writeln!(out, "probability {p:.15}");
            }
            let _ = writeln!(out, "output modes {:?}", r.output_modes);
            for (c, labels) in &r.output {
                let l: Vec<String> = labels.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
                let _ = writeln!(out, "  ({:.9}{:+.9}i) |{}>", c.re, c.im, l.join(", "));
            }
            if let Some(f) = r.fidelity {
                let _ = writeln!(out, "fidelity {f:.15}");
            }
            out
        }
    }
}
