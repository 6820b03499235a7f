//! JSON machine definitions.
//!
//! ```json
//! {
//!   "name": "count-5",
//!   "states": ["c0", "c1", "H"],
//!   "start": "c0",
//!   "halt": "H",
//!   "blank": "0",
//!   "transitions": [
//!     ["c0", "0", "c1", "0", "R"]
//!   ]
//! }
//! ```
//!
//! `name` is optional. [`to_json`] always writes this exact layout, so
//! saving a loaded canonical file reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use hyperhalt_core::halting::{MachineSpec, Move, Rule, TuringMachine};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum MachineFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed machine JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid machine: {0}")]
    Invalid(#[from] hyperhalt_core::Error),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMachine {
    #[serde(default)]
    name: Option<String>,
    states: Vec<String>,
    start: String,
    halt: String,
    blank: String,
    transitions: Vec<(String, String, String, String, String)>,
}

pub fn from_json(text: &str) -> Result<TuringMachine, MachineFileError> {
    let raw: RawMachine = serde_json::from_str(text)?;
    let rules = raw
        .transitions
        .into_iter()
        .map(|(state, symbol, next, write, shift)| {
            Ok(Rule { state, symbol, next, write, shift: Move::parse(&shift)? })
        })
        .collect::<Result<Vec<_>, hyperhalt_core::Error>>()?;
    let spec = MachineSpec {
        name: raw.name,
        states: raw.states,
        start: raw.start,
        halt: raw.halt,
        blank: raw.blank,
        rules,
    };
    Ok(TuringMachine::new(spec)?)
}

fn quoted(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub fn to_json(machine: &TuringMachine) -> String {
    let spec = machine.spec();
    let mut out = String::from("{\n");
    if let Some(name) = &spec.name {
        writeln!(out, "  \"name\": {},", quoted(name)).unwrap();
    }
    let states: Vec<String> = spec.states.iter().map(|s| quoted(s)).collect();
    writeln!(out, "  \"states\": [{}],", states.join(", ")).unwrap();
    writeln!(out, "  \"start\": {},", quoted(&spec.start)).unwrap();
    writeln!(out, "  \"halt\": {},", quoted(&spec.halt)).unwrap();
    writeln!(out, "  \"blank\": {},", quoted(&spec.blank)).unwrap();
    out.push_str("  \"transitions\": [");
    for (i, r) in spec.rules.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        write!(
            out,
            "    [{}, {}, {}, {}, {}]",
            quoted(&r.state),
            quoted(&r.symbol),
            quoted(&r.next),
            quoted(&r.write),
            quoted(r.shift.as_str())
        )
        .unwrap();
    }
    out.push_str(if spec.rules.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    out
}

pub fn load(path: &Path) -> Result<TuringMachine, MachineFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| MachineFileError::Io { path: path.display().to_string(), source })?;
    from_json(&text)
}

pub fn save(machine: &TuringMachine, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, to_json(machine))
}

/// A bundled corpus name, or else a path to a machine file.
pub fn resolve(name_or_path: &str) -> Result<TuringMachine, MachineFileError> {
    match hyperhalt_core::corpus_machine(name_or_path) {
        Some(m) => Ok(m),
        None => load(Path::new(name_or_path)),
    }
}
