use std::fmt::Write;

use entangle_core::entanglement::{par_l_exact_lp, MeasurementTrajectory, StepAction};
use entangle_core::state::StateVector;
use entangle_core::transforms::{apply_hadamards, hi_string, parse_hi_string};
use serde_json::{json, Value};

use crate::input::{real, Failure, Loaded};

pub struct Request<'a> {
    pub basis: Option<&'a str>,
    pub order: Option<&'a [usize]>,
    pub outcomes: Option<&'a [u8]>,
}

/// Measurement frame: `--basis` applied to the input, else the input itself
/// when it is already a code indicator, else the maximum-PAR HI transform of
/// the graph form.
fn frame(input: &Loaded, basis: Option<&str>) -> Result<(StateVector, String), Failure> {
    let n = input.n();
    if let Some(text) = basis {
        let (m, mask) = parse_hi_string(text)?;
        if m != n {
            return Err(Failure::precondition(format!(
                "basis {text} has {m} qubits, input has {n}"
            )));
        }
        return Ok((apply_hadamards(&input.state, mask)?, text.to_string()));
    }
    if input.is_indicator {
        return Ok((input.state.clone(), hi_string(0, n)));
    }
    let a = input
        .graph
        .as_ref()
        .map_err(|why| Failure::precondition(format!("no default basis: {why}")))?;
    let mask = par_l_exact_lp(a)?
        .witness_mask()
        .ok_or_else(|| Failure::precondition("exact PAR_l returned no HI witness"))?;
    Ok((apply_hadamards(&input.state, mask)?, hi_string(mask, n)))
}

pub fn run(input: &Loaded, req: &Request) -> Result<(MeasurementTrajectory, String), Failure> {
    let (b, basis) = frame(input, req.basis)?;
    let t = match req.order {
        Some(order) => MeasurementTrajectory::follow(&b, order, req.outcomes)?,
        None => MeasurementTrajectory::most_destructive(&b)?,
    };
    Ok((t, basis))
}

pub fn to_json(t: &MeasurementTrajectory, basis: &str) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| {
            json!({
                "q": s.q,
                "gates": s.gates,
                "action": s.action,
                "qubit": s.qubit,
                "outcome": s.outcome,
                "par": real(&s.par_after),
                "m_q": s.m_q,
                "codewords": s.codewords,
                "order": s.order,
            })
        })
        .collect();
    json!({ "schema": "1", "n": t.n, "basis": basis, "steps": steps, "beta": t.beta })
}

pub fn to_table(t: &MeasurementTrajectory, basis: &str) -> String {
    let mut out = format!("basis {basis}\n");
    let _ = writeln!(
        out,
        "{:<16} {:<8} {:<13} {:>6} {:>4} {:>9} {:>5}",
        "Q", "gates", "action", "PAR", "m_Q", "codewords", "order"
    );
    for s in &t.steps {
        let q: Vec<String> = s.q.iter().map(usize::to_string).collect();
        let action = match (s.action, s.qubit, s.outcome) {
            (StepAction::Start, ..) => "start".to_string(),
            (StepAction::Measure, Some(v), Some(o)) => format!("measure {v}={o}"),
            (StepAction::Free, Some(v), _) => format!("free {v}"),
            _ => "?".to_string(),
        };
        let _ = writeln!(
            out,
            "{:<16} {:<8} {:<13} {:>6} {:>4} {:>9} {:>5}",
            format!("{{{}}}", q.join(",")),
            s.gates,
            action,
            s.par_after.to_string(),
            s.m_q,
            s.codewords,
            s.order
        );
    }
    let beta: Vec<String> = t.beta.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "beta {}", beta.join(" "));
    out
}
