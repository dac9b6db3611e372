use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use qqm::chsh::{chsh_value, BRASSARD_THRESHOLD, CLASSICAL_BOUND, TSIRELSON_BOUND};
use qqm::commcomplex::{verify_exhaustive, verify_sampled, BooleanFunction, VanDam};
use qqm::nlbox::{outcome_index, QuaternionicBox, INPUTS};
use qqm::qlinalg::QVector;
use qqm::qsystem::{self, gates, Tick};
use qqm::{QMatrix, Quat, Register, ScheduledOp};

use crate::strategy::Strategy;

/// Tolerance for comparing computed CHSH values with their reference.
const VALUE_TOL: f64 = 1e-9;
/// Tolerance for per-cell `x ⊕ y = ab` checks and perfect-box success.
const CELL_TOL: f64 = 1e-10;
/// Tolerance for the orthogonality / equality checks of the ordering demo.
const STATE_TOL: f64 = 1e-12;

pub struct Report {
    pub json: Value,
    pub csv: String,
    pub text: String,
    pub passed: bool,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

fn bit(b: bool) -> u8 {
    u8::from(b)
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct CellCheck {
    a: u8,
    b: u8,
    win_probability: f64,
    pr_condition: &'static str,
}

#[derive(Serialize)]
struct ScheduleRow {
    a: u8,
    b: u8,
    alice_r_i_at: u64,
    bob_r_j_at: u64,
    measure_at: u64,
    pre_measurement_state: &'static str,
}

pub fn run_prbox(strategy: Strategy, seed: u64, samples: Option<usize>) -> Report {
    let behavior = strategy.behavior();
    let game = chsh_value(&behavior);
    let expected = strategy.expected_chsh();
    let passed = (game.win_probability - expected).abs() <= VALUE_TOL;

    let cells: Vec<CellCheck> = INPUTS
        .iter()
        .map(|&(a, b)| {
            let w = game.cell(a, b);
            CellCheck {
                a: bit(a),
                b: bit(b),
                win_probability: w,
                pr_condition: status((w - 1.0).abs() <= CELL_TOL),
            }
        })
        .collect();

    let schedule = (strategy == Strategy::Quaternionic).then(|| {
        let qbox = QuaternionicBox::default();
        let plus = qsystem::bell_phi::<f64>(Quat::new(1.0, 0.0, 0.0, 0.0)).expect("unit");
        INPUTS
            .iter()
            .map(|&(a, b)| {
                let state = qbox.pre_measurement_state::<f64>(a, b);
                ScheduleRow {
                    a: bit(a),
                    b: bit(b),
                    alice_r_i_at: qbox.schedule.alice_time(a).0,
                    bob_r_j_at: qbox.schedule.bob_time(b).0,
                    measure_at: qbox.schedule.measurement_time().0,
                    pre_measurement_state: if state.approx_eq(&plus, STATE_TOL) {
                        "phi+"
                    } else {
                        "phi-"
                    },
                }
            })
            .collect::<Vec<_>>()
    });

    let empirical = samples.map(|n| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut freq = serde_json::Map::new();
        for (a, b) in INPUTS {
            let mut counts = [0usize; 4];
            for _ in 0..n {
                let (x, y) = behavior.sample(a, b, &mut rng);
                counts[outcome_index(x, y)] += 1;
            }
            let entries: Vec<Value> = counts
                .iter()
                .enumerate()
                .map(|(xy, c)| {
                    json!({"x": xy >> 1, "y": xy & 1, "frequency": *c as f64 / n.max(1) as f64})
                })
                .collect();
            freq.insert(format!("{},{}", bit(a), bit(b)), Value::Array(entries));
        }
        json!({"samples": n, "seed": seed, "frequencies": freq})
    });

    let mut json = json!({
        "subcommand": "prbox",
        "strategy": strategy.to_string(),
        "behavior": behavior.to_json(),
        "chsh": game,
        "expected_value": expected,
        "cells": cells,
        "status": status(passed),
    });
    if let Some(rows) = &schedule {
        json["schedule"] = serde_json::to_value(rows).expect("serializable");
    }
    if let Some(e) = empirical {
        json["empirical"] = e;
    }

    let mut csv = String::from("a,b,x,y,probability\n");
    for (a, b) in INPUTS {
        for x in [false, true] {
            for y in [false, true] {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    bit(a),
                    bit(b),
                    bit(x),
                    bit(y),
                    behavior.prob(a, b, x, y)
                );
            }
        }
    }

    let mut text = format!("strategy: {strategy}\n");
    text.push_str(" a b |  P(00)   P(01)   P(10)   P(11)  | P[x^y=ab]    | x^y=ab\n");
    for (cell, (a, b)) in cells.iter().zip(INPUTS) {
        let _ = writeln!(
            text,
            " {} {} | {:.4}  {:.4}  {:.4}  {:.4} | {:.10} | {}",
            cell.a,
            cell.b,
            behavior.prob(a, b, false, false),
            behavior.prob(a, b, false, true),
            behavior.prob(a, b, true, false),
            behavior.prob(a, b, true, true),
            cell.win_probability,
            cell.pr_condition
        );
    }
    if let Some(rows) = &schedule {
        text.push_str("schedule (t1 < t2 < t3 < t4 < t5):\n");
        for r in rows {
            let _ = writeln!(
                text,
                " a={} b={}: Alice R_i at t{}, Bob R_j at t{}, measure at t{} -> {}",
                r.a, r.b, r.alice_r_i_at, r.bob_r_j_at, r.measure_at, r.pre_measurement_state
            );
        }
    }
    if let Some(n) = samples {
        let _ = writeln!(
            text,
            "empirical frequencies: {n} samples per cell, seed {seed} (see json)"
        );
    }
    let _ = writeln!(
        text,
        "CHSH win probability: {:.10} (expected {:.10}) {}",
        game.win_probability,
        expected,
        status(passed)
    );

    Report {
        json,
        csv,
        text,
        passed,
    }
}

pub fn run_chsh(strategy: Option<Strategy>) -> Report {
    let strategies = match strategy {
        Some(s) => vec![s],
        None => vec![
            Strategy::Classical,
            Strategy::Complex,
            Strategy::Quaternionic,
            Strategy::Ideal,
        ],
    };
    let mut results = Vec::new();
    let mut csv = String::from("strategy,a,b,win_probability\n");
    let mut text = String::new();
    let mut passed = true;

    for s in &strategies {
        let game = chsh_value(&s.behavior());
        let ok = (game.win_probability - s.expected_chsh()).abs() <= VALUE_TOL;
        passed &= ok;
        let mut entry = serde_json::to_value(game).expect("serializable");
        entry["strategy"] = json!(s.to_string());
        entry["expected_value"] = json!(s.expected_chsh());
        entry["status"] = json!(status(ok));
        results.push(entry);
        for (a, b) in INPUTS {
            let _ = writeln!(csv, "{s},{},{},{}", bit(a), bit(b), game.cell(a, b));
        }
        if strategies.len() == 1 {
            let _ = writeln!(text, "strategy: {s}\n{game}\n{}", status(ok));
        }
    }

    if strategies.len() > 1 {
        text.push_str("strategy        P[win]        reference\n");
        for entry in &results {
            let _ = writeln!(
                text,
                "{:<14}  {:.10}  {:.10} {}",
                entry["strategy"].as_str().unwrap_or_default(),
                entry["win_probability"].as_f64().unwrap_or(f64::NAN),
                entry["expected_value"].as_f64().unwrap_or(f64::NAN),
                entry["status"].as_str().unwrap_or_default()
            );
        }
        let _ = writeln!(
            text,
            "classical bound {CLASSICAL_BOUND}, Cirel'son bound cos^2(pi/8) = {TSIRELSON_BOUND:.10}, \
             Brassard et al. threshold ~{BRASSARD_THRESHOLD}"
        );
    }

    let json = json!({
        "subcommand": "chsh",
        "results": results,
        "constants": {
            "classical_bound": CLASSICAL_BOUND,
            "tsirelson_bound": TSIRELSON_BOUND,
            "brassard_threshold": BRASSARD_THRESHOLD,
        },
        "status": status(passed),
    });
    Report {
        json,
        csv,
        text,
        passed,
    }
}

/// Built-in name, or path to a truth-table JSON file.
pub fn resolve_function(spec: &str) -> Result<(String, BooleanFunction), ConfigError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {spec}: {e}")))?;
        let f =
            BooleanFunction::from_json(&text).map_err(|e| ConfigError(format!("{spec}: {e}")))?;
        return Ok((spec.to_owned(), f));
    }
    BooleanFunction::by_name(spec)
        .map(|f| (spec.to_ascii_uppercase(), f))
        .map_err(|e| ConfigError(e.to_string()))
}

const CC_NOTE: &str = "Box-free communication cost is not computed. For inner product it is known to be the full input length.";

pub fn run_vandam(
    name: &str,
    f: &BooleanFunction,
    strategy: Strategy,
    seed: u64,
    samples: Option<usize>,
) -> Result<Report, ConfigError> {
    let behavior = strategy.behavior();
    let protocol = VanDam::new(f);
    let report = verify_exhaustive(f, &behavior).map_err(|e| ConfigError(e.to_string()))?;
    let sampled = match samples {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Some(
                verify_sampled(f, &behavior, n, &mut rng)
                    .map_err(|e| ConfigError(e.to_string()))?,
            )
        }
        None => None,
    };
    let passed = !strategy.is_perfect() || (1.0 - report.min_success) <= CELL_TOL;

    let mut json = json!({
        "subcommand": "vandam",
        "function": name,
        "n_alice": f.n_alice(),
        "n_bob": f.n_bob(),
        "anf": protocol.anf().to_string(),
        "strategy": strategy.to_string(),
        "inputs": report.inputs,
        "success_rate": report.success_rate,
        "min_success": report.min_success,
        "boxes_used": report.boxes_used,
        "bits_bob_to_alice": report.bits_bob_to_alice,
        "bits_alice_to_bob": report.bits_alice_to_bob,
        "note": CC_NOTE,
        "status": status(passed),
    });
    if let Some(s) = &sampled {
        json["sampled"] = json!({
            "seed": seed,
            "runs": s.runs,
            "correct": s.correct,
            "empirical_success": s.empirical_success,
            "failing_inputs": s.failing_inputs,
        });
    }

    let csv = format!(
        "function,strategy,inputs,success_rate,min_success,boxes_used,bits_bob_to_alice,bits_alice_to_bob\n\
         {name},{strategy},{},{},{},{},{},{}\n",
        report.inputs,
        report.success_rate,
        report.min_success,
        report.boxes_used,
        report.bits_bob_to_alice,
        report.bits_alice_to_bob
    );

    let mut text = format!(
        "function: {name} ({} + {} bits)\nANF: {}\nstrategy: {strategy}\n\
         inputs checked: {}\nsuccess rate: {:.10} (worst input {:.10})\n\
         boxes used: {}\nbits Bob -> Alice: {}\nbits Alice -> Bob: {}\n",
        f.n_alice(),
        f.n_bob(),
        protocol.anf(),
        report.inputs,
        report.success_rate,
        report.min_success,
        report.boxes_used,
        report.bits_bob_to_alice,
        report.bits_alice_to_bob
    );
    if let Some(s) = &sampled {
        let _ = writeln!(
            text,
            "sampled: {}/{} correct ({:.6}), seed {seed}",
            s.correct, s.runs, s.empirical_success
        );
    }
    let _ = writeln!(text, "note: {CC_NOTE}\n{}", status(passed));

    Ok(Report {
        json,
        csv,
        text,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GateSet {
    /// `R_i` on party 0, `R_j` on party 1.
    Quaternion,
    /// `R_i` on both parties.
    Complex,
}

pub fn run_order_demo(gate_set: GateSet) -> Report {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Quat::default();
    let start = Register::new(
        2,
        QVector::new(vec![Quat::real(s), zero, zero, Quat::real(s)]).expect("non-empty"),
    )
    .expect("normalized");
    let (alice_gate, bob_gate, labels): (QMatrix, QMatrix, [&str; 2]) = match gate_set {
        GateSet::Quaternion => (gates::r_i(), gates::r_j(), ["R_i", "R_j"]),
        GateSet::Complex => (gates::r_i(), gates::r_i(), ["R_i", "R_i"]),
    };
    let ordered = |alice_at: u64, bob_at: u64| {
        let ops = [
            ScheduledOp::new(Tick(alice_at), 0, alice_gate.clone()).expect("unitary"),
            ScheduledOp::new(Tick(bob_at), 1, bob_gate.clone()).expect("unitary"),
        ];
        qsystem::run_schedule(&start, &ops).expect("distinct ticks")
    };
    let alice_first = ordered(1, 2);
    let bob_first = ordered(2, 1);
    let overlap = alice_first.inner(&bob_first).expect("same dimension");

    let (relation, passed) = match gate_set {
        GateSet::Quaternion => ("orthogonal", overlap.norm() <= STATE_TOL),
        GateSet::Complex => (
            "identical",
            alice_first.approx_eq(&bob_first, STATE_TOL)
                && overlap.approx_eq(Quat::real(1.0), STATE_TOL),
        ),
    };

    let json = json!({
        "subcommand": "order-demo",
        "gates": {"party0": labels[0], "party1": labels[1]},
        "initial_state": start.dump(),
        "alice_first": alice_first.dump(),
        "bob_first": bob_first.dump(),
        "inner_product": overlap.to_array(),
        "expected_relation": relation,
        "status": status(passed),
    });

    let mut csv = String::from("ordering,basis,w,x,y,z\n");
    for (tag, reg) in [("alice_first", &alice_first), ("bob_first", &bob_first)] {
        for e in reg.dump() {
            let [w, x, y, z] = e.amplitude;
            let _ = writeln!(csv, "{tag},{},{w},{x},{y},{z}", e.basis);
        }
    }

    let render = |reg: &Register| {
        (0..4)
            .filter(|&idx| reg.amplitude(idx).norm() > 0.0)
            .map(|idx| format!("({:.4})|{}>", reg.amplitude(idx), reg.label(idx)))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let text = format!(
        "initial state: {}\n\
         {a} on party 0 then {b} on party 1: {}\n\
         {b} on party 1 then {a} on party 0: {}\n\
         inner product: {:.12}\n\
         expected: {relation} {}\n",
        render(&start),
        render(&alice_first),
        render(&bob_first),
        overlap,
        status(passed),
        a = labels[0],
        b = labels[1],
    );

    Report {
        json,
        csv,
        text,
        passed,
    }
}
