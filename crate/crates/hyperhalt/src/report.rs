//! Result records and their JSON, CSV and gnuplot renderings.

use std::io::Write;
use std::path::Path;

use hyperhalt_core::{Bound, Proportion};
use serde::Serialize;

use crate::config::RunConfig;

/// One Monte Carlo experiment. `analytic_bound` and `posterior_bound` are
/// `null` when the formula is not yet informative (above 1 or undefined).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub command: String,
    pub config: RunConfig,
    pub seed: u64,
    pub trials: u64,
    pub clicks: u64,
    pub non_clicks: u64,
    pub empirical_fraction: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub analytic_bound: Option<f64>,
    pub posterior_bound: Option<f64>,
    /// Command-specific values such as the time `T` or the swept `ε`.
    pub details: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl ExperimentRecord {
    /// `non_clicks` is the proportion the record reports on.
    pub fn new(command: &str, config: &RunConfig, seed: u64, non_clicks: &Proportion) -> Self {
        ExperimentRecord {
            command: command.to_string(),
            config: config.clone(),
            seed,
            trials: non_clicks.trials,
            clicks: non_clicks.trials - non_clicks.hits,
            non_clicks: non_clicks.hits,
            empirical_fraction: non_clicks.fraction,
            ci_low: non_clicks.ci_low,
            ci_high: non_clicks.ci_high,
            analytic_bound: None,
            posterior_bound: None,
            details: serde_json::Value::Object(Default::default()),
            wall_time_ms: None,
        }
    }

    pub fn with_bounds(mut self, analytic: Bound, posterior: Option<Bound>) -> Self {
        self.analytic_bound = analytic.value();
        self.posterior_bound = posterior.and_then(Bound::value);
        self
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = details;
        self
    }

    /// The record without its wall-clock field, for reproducibility checks.
    pub fn numeric(&self) -> Self {
        ExperimentRecord { wall_time_ms: None, ..self.clone() }
    }
}

/// Pretty JSON array with a trailing newline; an empty list gives `[]`.
pub fn records_json(records: &[ExperimentRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

/// Writes `text` to `path`, or to stdout when there is no path.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// A table destined for CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    /// Values use the shortest form that reads back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:?}"))).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// Gnuplot data: one block per named column against the first column,
    /// blocks separated by two blank lines so `index` selects them. Missing
    /// values (NaN) are left out of their block.
    pub fn to_plot_data(&self, columns: &[&str]) -> String {
        let mut out = String::new();
        for (b, name) in columns.iter().enumerate() {
            let k = self.header.iter().position(|h| h == name).expect("known column");
            if b > 0 {
                out.push_str("\n\n");
            }
            out.push_str(&format!("# {} {}\n", self.header[0], name));
            for row in self.rows.iter().filter(|r| !r[k].is_nan()) {
                out.push_str(&format!("{:?} {:?}\n", row[0], row[k]));
            }
        }
        out
    }
}
