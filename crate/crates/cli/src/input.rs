use std::fmt;
use std::io::Read;
use std::path::Path;

use clap::ValueEnum;
use entangle_core::anf::Anf;
use entangle_core::apf::{Apf, Side};
use entangle_core::gf2::LinearCode;
use entangle_core::real::Real;
use entangle_core::state::StateVector;
use entangle_core::Error;
use serde_json::{json, Value};

/// Process exit status with a message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

impl Failure {
    pub fn parse(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Failure {
            code: 3,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => 2,
            Error::CrossCheck(_) => 4,
            _ => 3,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Anf,
    Code,
    Vector,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Anf => "anf",
            Format::Code => "code",
            Format::Vector => "vector",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    C,
    CPerp,
}

impl SideArg {
    pub fn side(self) -> Side {
        match self {
            SideArg::C => Side::C,
            SideArg::CPerp => Side::CPerp,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SideArg::C => "C",
            SideArg::CPerp => "C-perp",
        }
    }
}

/// Comment line carrying the information set of a converted code.
const INFO_TAG: &str = "# information set:";

/// Reads `arg` as a file, `-` as standard input, and anything else as the
/// literal text.
pub fn read_source(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::parse(format!("reading standard input: {e}")))?;
        return Ok(text);
    }
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path)
            .map_err(|e| Failure::parse(format!("reading {arg}: {e}")));
    }
    Ok(arg.to_string())
}

/// Code text from a file or a literal with rows separated by `,` or `;`.
pub fn parse_code(text: &str) -> Result<LinearCode, Failure> {
    Ok(LinearCode::parse(&text.replace([',', ';'], "\n"))?)
}

/// Information set written by `convert --to code`, if present.
pub fn info_line(text: &str) -> Result<Option<Vec<usize>>, Failure> {
    let Some(line) = text.lines().find_map(|l| l.trim().strip_prefix(INFO_TAG)) else {
        return Ok(None);
    };
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Failure::parse(format!("bad information set entry {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

pub fn code_text(code: &LinearCode, info: &[usize]) -> String {
    let list: Vec<String> = info.iter().map(usize::to_string).collect();
    format!("{INFO_TAG} {}\n{}", list.join(" "), code.to_text())
}

/// Everything derived from one input.
pub struct Loaded {
    pub format: Format,
    pub source: String,
    pub state: StateVector,
    /// Bipartite graph form, equal to the input for ANF and ±1 inputs and
    /// locally equivalent to it for code inputs.
    pub graph: Result<Apf, String>,
    pub graph_is_input: bool,
    pub code: Result<LinearCode, String>,
    /// The input is already a flat code indicator.
    pub is_indicator: bool,
}

impl Loaded {
    pub fn load(
        text: &str,
        format: Format,
        qubits: Option<usize>,
        side: SideArg,
    ) -> Result<Self, Failure> {
        let source = text.trim().to_string();
        match format {
            Format::Anf => {
                let a = Apf::parse(text.trim(), qubits)?;
                let state = a.expand()?;
                let (graph, code) = match a.is_lp() {
                    Some(_) => (
                        Ok(a.clone()),
                        a.graph_code(side.side()).map_err(|e| e.to_string()),
                    ),
                    None => {
                        let why = format!("{a} is not a bipartite quadratic bipolar form");
                        (Err(why.clone()), Err(why))
                    }
                };
                Ok(Loaded {
                    format,
                    source,
                    state,
                    graph,
                    graph_is_input: true,
                    code,
                    is_indicator: false,
                })
            }
            Format::Code => {
                let code = parse_code(text)?;
                let state = StateVector::indicator_from_code(&code)?;
                let graph = match info_line(text)? {
                    Some(info) => Apf::from_code_with_info(&code, &info),
                    None => Apf::from_code(&code),
                }
                .map_err(|e| e.to_string());
                Ok(Loaded {
                    format,
                    source,
                    state,
                    graph,
                    graph_is_input: false,
                    code: Ok(code),
                    is_indicator: true,
                })
            }
            Format::Vector => {
                let state = StateVector::parse(text)?;
                let n = state.n();
                if let Some(apf) = bipolar_form(&state)? {
                    let (graph, code) = match apf.is_lp() {
                        Some(_) => (
                            Ok(apf.clone()),
                            apf.graph_code(side.side()).map_err(|e| e.to_string()),
                        ),
                        None => {
                            let why = format!(
                                "±1 vector with phase {} is not bipartite quadratic",
                                apf.phase()
                            );
                            (Err(why.clone()), Err(why))
                        }
                    };
                    return Ok(Loaded {
                        format,
                        source,
                        state,
                        graph,
                        graph_is_input: true,
                        code,
                        is_indicator: false,
                    });
                }
                match linear_support(&state, n) {
                    Some(code) => {
                        let graph = Apf::from_code(&code).map_err(|e| e.to_string());
                        Ok(Loaded {
                            format,
                            source,
                            state,
                            graph,
                            graph_is_input: false,
                            code: Ok(code),
                            is_indicator: true,
                        })
                    }
                    None => {
                        let why = "vector is neither ±1 nor a linear-code indicator".to_string();
                        Ok(Loaded {
                            format,
                            source,
                            state,
                            graph: Err(why.clone()),
                            graph_is_input: false,
                            code: Err(why),
                            is_indicator: false,
                        })
                    }
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.state.n()
    }

    pub fn descriptor(&self) -> Value {
        json!({ "format": self.format.name(), "source": self.source })
    }
}

/// Phase form of a real ±m vector, up to a global sign.
fn bipolar_form(s: &StateVector) -> Result<Option<Apf>, Failure> {
    let Some(v) = s.integer_amps() else {
        return Ok(None);
    };
    let m = v[0].abs();
    if m == 0 || v.iter().any(|x| x.abs() != m) {
        return Ok(None);
    }
    let table: Vec<u8> = v
        .iter()
        .map(|&x| u8::from(x.signum() != v[0].signum()))
        .collect();
    Ok(Some(Apf::phase_only(
        s.n(),
        Anf::from_truth_table(s.n(), &table)?,
    )?))
}

/// Code whose indicator is proportional to `s`, if any.
fn linear_support(s: &StateVector, n: usize) -> Option<LinearCode> {
    let v = s.integer_amps()?;
    let support = s.support();
    let peak = v[*support.first()?];
    if peak <= 0 || support.iter().any(|&i| v[i] != peak) || v[0] != peak {
        return None;
    }
    let words: Vec<u64> = support.iter().map(|&i| i as u64).collect();
    let code = LinearCode::from_spanning(n, &words).ok()?;
    (1usize << code.k() == support.len()).then_some(code)
}

/// Exact values as `"p/q"` strings, floats tagged as `{"float": x}`.
pub fn real(r: &Real) -> Value {
    match r {
        Real::Exact(_) => Value::String(r.to_string()),
        Real::Float(v) => json!({ "float": v }),
    }
}

pub fn reals(rs: &[Real]) -> Value {
    Value::Array(rs.iter().map(real).collect())
}
