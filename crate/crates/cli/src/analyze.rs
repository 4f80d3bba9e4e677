use std::time::Instant;

use entangle_core::entanglement::{
    crypto_profile, par_l_exact_lp, par_l_optimize, se_search, state_order,
    weight_hierarchy_spectral, ParlConfig, ParlResult, Witness, MAX_OPTIMIZE_QUBITS,
};
use entangle_core::gf2::{word_string, MAX_ORACLE_DIMENSION};
use entangle_core::state::StateVector;
use entangle_core::transforms::{hi_multispectra, hi_string};
use entangle_core::Error;
use serde_json::{json, Map, Value};

use crate::input::{real, reals, Failure, Loaded, SideArg};

#[derive(Clone, Copy, Debug, Default)]
pub struct Sections {
    pub multispectra: bool,
    pub parl: bool,
    pub hierarchy: bool,
    pub se: bool,
    pub crypto: bool,
}

impl Sections {
    /// No flag selects everything.
    pub fn or_all(self) -> Self {
        if self.multispectra || self.parl || self.hierarchy || self.se || self.crypto {
            self
        } else {
            Sections {
                multispectra: true,
                parl: true,
                hierarchy: true,
                se: true,
                crypto: true,
            }
        }
    }
}

pub struct Options {
    pub sections: Sections,
    pub float: bool,
    pub seed: u64,
    pub side: SideArg,
    pub timings: bool,
}

fn skipped(reason: impl Into<String>) -> Value {
    json!({ "skipped": reason.into() })
}

/// Turns guard and precondition errors into a skipped section; cross-check
/// failures abort the run.
fn section(result: Result<Value, Error>) -> Result<Value, Failure> {
    match result {
        Ok(v) => Ok(v),
        Err(e @ Error::CrossCheck(_)) => Err(e.into()),
        Err(e) => Ok(skipped(e.to_string())),
    }
}

pub fn analyze(input: &Loaded, opts: &Options) -> Result<Value, Failure> {
    let sections = opts.sections.or_all();
    let state = if opts.float {
        input.state.to_float()
    } else {
        input.state.clone()
    };
    let n = input.n();
    let mut timings = Map::new();
    let mut report = Map::new();
    report.insert("schema".into(), json!("1"));
    report.insert("input".into(), input.descriptor());
    report.insert("n".into(), json!(n));
    report.insert(
        "arithmetic".into(),
        json!(if opts.float { "float" } else { "exact" }),
    );

    let mut timed =
        |name: &str, f: &mut dyn FnMut() -> Result<Value, Failure>| -> Result<Value, Failure> {
            let start = Instant::now();
            let v = f();
            timings.insert(name.into(), json!(start.elapsed().as_secs_f64() * 1e3));
            v
        };

    let state_section = timed("state", &mut || section(state_summary(&state)))?;
    report.insert("state".into(), state_section);
    report.insert(
        "graph".into(),
        match &input.graph {
            Ok(a) => json!({ "anf": a.to_string(), "same_as_input": input.graph_is_input }),
            Err(why) => skipped(why.clone()),
        },
    );
    report.insert(
        "code".into(),
        match &input.code {
            Ok(code) => section(code_summary(code, input, opts.side))?,
            Err(why) => skipped(why.clone()),
        },
    );
    if sections.multispectra {
        let v = timed("multispectra", &mut || section(multispectra(&state)))?;
        report.insert("multispectra".into(), v);
    }
    if sections.parl {
        let v = timed("parl", &mut || section(parl(input, &state, opts.seed)))?;
        report.insert("parl".into(), v);
    }
    if sections.hierarchy {
        let v = timed("hierarchy", &mut || match &input.code {
            Ok(code) => section(hierarchy(code)),
            Err(why) => Ok(skipped(format!("no code: {why}"))),
        })?;
        report.insert("hierarchy".into(), v);
    }
    if sections.se {
        let v = timed("se", &mut || {
            match &input.graph {
            Ok(a) => section(se_search(a).map(|r| {
                json!({
                    "beta": r.beta,
                    "k_prime": r.k_prime,
                    "patterns": r.patterns,
                    "trajectory": {
                        "gates": r.trajectory.steps.iter().map(|s| s.gates.clone()).collect::<Vec<_>>(),
                        "par": reals(&r.trajectory.par_column()),
                        "m_q": r.trajectory.m_q_column(),
                        "beta": r.trajectory.beta,
                    },
                })
            })),
            Err(why) => Ok(skipped(format!("needs a bipartite graph state: {why}"))),
        }
        })?;
        report.insert("se".into(), v);
    }
    if sections.crypto {
        let v = timed("crypto", &mut || {
            section(crypto_profile(&state).map(|p| {
                json!({
                    "nonlinear_order": real(&p.nonlinear_order),
                    "correlation_immunity": p.ci_order,
                    "parl_log2_bounds": reals(&p.parl_log2_bounds),
                    "parl_log2_bounds_plain": reals(&p.parl_log2_bounds_plain),
                })
            }))
        })?;
        report.insert("crypto".into(), v);
    }
    if opts.timings {
        report.insert("timings_ms".into(), Value::Object(timings));
    }
    Ok(Value::Object(report))
}

fn state_summary(s: &StateVector) -> Result<Value, Error> {
    Ok(json!({ "par": real(&s.par()?), "entanglement_order": state_order(s)? }))
}

fn code_summary(
    code: &entangle_core::gf2::LinearCode,
    input: &Loaded,
    side: SideArg,
) -> Result<Value, Error> {
    let rows: Vec<String> = code
        .generator_rows()
        .iter()
        .map(|&r| word_string(r, code.n()))
        .collect();
    let mut v = json!({
        "n": code.n(),
        "k": code.k(),
        "d": code.min_distance()?,
        "generator": rows,
    });
    if input.graph_is_input {
        v["side"] = json!(side.name());
    }
    Ok(v)
}

fn multispectra(s: &StateVector) -> Result<Value, Error> {
    let table = hi_multispectra(s)?;
    let n = s.n();
    let (max_mask, max) = table.max();
    let (min_mask, min) = table.min();
    let at_max = table.entries().iter().filter(|&&v| v == max).count();
    let mut entries = Map::new();
    if n <= 8 {
        for (m, v) in table.entries().iter().enumerate() {
            entries.insert(hi_string(m as u64, n), real(v));
        }
    }
    let mut v = json!({
        "max": { "value": real(&max), "gates": hi_string(max_mask, n) },
        "min": { "value": real(&min), "gates": hi_string(min_mask, n) },
        "count_at_max": at_max,
        "exact": table.is_exact(),
    });
    if n <= 8 {
        v["table"] = Value::Object(entries);
    }
    Ok(v)
}

fn parl_json(r: &ParlResult) -> Value {
    let witness = match &r.witness {
        Witness::HiSubset { gates, .. } => json!({ "gates": gates }),
        Witness::Angles(a) => json!({ "angles": a }),
    };
    json!({
        "par_l": real(&r.par_l),
        "le": real(&r.le),
        "method": r.method,
        "witness": witness,
    })
}

fn parl(input: &Loaded, s: &StateVector, seed: u64) -> Result<Value, Error> {
    if let Ok(a) = &input.graph {
        let mut v = parl_json(&par_l_exact_lp(a)?);
        v["relative_to"] = json!(if input.graph_is_input {
            "input"
        } else {
            "graph"
        });
        return Ok(v);
    }
    if s.n() > MAX_OPTIMIZE_QUBITS {
        return Err(Error::Precondition(format!(
            "not a bipartite graph state and {} qubits is above the optimizer limit of {MAX_OPTIMIZE_QUBITS}",
            s.n()
        )));
    }
    let cfg = ParlConfig {
        seed,
        ..ParlConfig::default()
    };
    let mut v = parl_json(&par_l_optimize(s, &cfg)?);
    v["relative_to"] = json!("input");
    v["lower_bound_only"] = json!(true);
    Ok(v)
}

fn hierarchy(code: &entangle_core::gf2::LinearCode) -> Result<Value, Error> {
    let spectral = weight_hierarchy_spectral(code)?;
    let checked = code.k() <= MAX_ORACLE_DIMENSION;
    if checked {
        let oracle = code.weight_hierarchy_oracle()?;
        if oracle != spectral {
            return Err(Error::CrossCheck(format!(
                "spectral hierarchy {:?} differs from the GF(2) oracle {:?}",
                spectral.as_slice(),
                oracle.as_slice()
            )));
        }
    }
    Ok(json!({ "d": spectral.as_slice(), "oracle_checked": checked }))
}
