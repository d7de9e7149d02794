//! Machine-readable command output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use kakeya_core::martingale::Trace;
use kakeya_core::numeric::fmt_rat;
use kakeya_core::Rat;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// One comparison. Both sides are exact values rendered as `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub pass: bool,
    /// Reported-only checks never affect the exit code.
    pub asserted: bool,
}

impl Check {
    fn compare(name: impl Into<String>, lhs: &Rat, relation: &str, rhs: &Rat, pass: bool, asserted: bool) -> Check {
        Check {
            name: name.into(),
            lhs: fmt_rat(lhs),
            relation: relation.into(),
            rhs: fmt_rat(rhs),
            pass,
            asserted,
        }
    }

    pub fn le(name: impl Into<String>, lhs: &Rat, rhs: &Rat) -> Check {
        Check::compare(name, lhs, "<=", rhs, lhs <= rhs, true)
    }

    pub fn lt(name: impl Into<String>, lhs: &Rat, rhs: &Rat) -> Check {
        Check::compare(name, lhs, "<", rhs, lhs < rhs, true)
    }

    pub fn ge(name: impl Into<String>, lhs: &Rat, rhs: &Rat) -> Check {
        Check::compare(name, lhs, ">=", rhs, lhs >= rhs, true)
    }

    pub fn eq(name: impl Into<String>, lhs: &Rat, rhs: &Rat) -> Check {
        Check::compare(name, lhs, "==", rhs, lhs == rhs, true)
    }

    /// A comparison kept for information only.
    pub fn reported(self) -> Check {
        Check { asserted: false, ..self }
    }

    /// Integer counts, e.g. sampled points or squares.
    pub fn count_eq(name: impl Into<String>, lhs: u64, rhs: u64) -> Check {
        Check {
            name: name.into(),
            lhs: lhs.to_string(),
            relation: "==".into(),
            rhs: rhs.to_string(),
            pass: lhs == rhs,
            asserted: true,
        }
    }

    /// A level that must exist and not exceed `limit`.
    pub fn found_by(name: impl Into<String>, found: Option<u32>, limit: u32) -> Check {
        Check {
            name: name.into(),
            lhs: found.map_or_else(|| "none".into(), |r| r.to_string()),
            relation: "<=".into(),
            rhs: limit.to_string(),
            pass: found.is_some_and(|r| r <= limit),
            asserted: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecordJson {
    pub r: u32,
    pub u: u64,
    pub v: u64,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceJson {
    pub point: [String; 2],
    pub spec: serde_json::Value,
    pub records: Vec<TraceRecordJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<String>,
}

impl TraceJson {
    pub fn new(trace: &Trace, spec: serde_json::Value) -> TraceJson {
        TraceJson {
            point: [fmt_rat(&trace.point.x), fmt_rat(&trace.point.y)],
            spec,
            records: trace
                .records
                .iter()
                .map(|r| TraceRecordJson { r: r.r, u: r.square.u, v: r.square.v, value: fmt_rat(&r.value) })
                .collect(),
            truncated: trace.truncated.as_ref().map(|e| e.to_string()),
        }
    }
}

/// A file produced alongside the report, such as an SVG figure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Some asserted check failed.
    Fail,
    /// Every asserted check passed but some work was refused by a cap.
    Infeasible,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Infeasible => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub traces: Vec<TraceJson>,
    pub notes: Vec<String>,
    pub infeasible: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
    #[serde(skip)]
    pub artifacts: Vec<Artifact>,
}

impl Report {
    pub fn new(command: &str, cfg: &RunConfig) -> Report {
        Report {
            command: command.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            tables: Vec::new(),
            traces: Vec::new(),
            notes: Vec::new(),
            infeasible: Vec::new(),
            timings_ms: cfg.timings.then(BTreeMap::new),
            artifacts: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn timing(&mut self, key: &str, ms: u64) {
        if let Some(t) = &mut self.timings_ms {
            t.insert(key.into(), ms);
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn outcome(&self) -> Outcome {
        if self.checks.iter().any(|c| c.asserted && !c.pass) {
            Outcome::Fail
        } else if !self.infeasible.is_empty() {
            Outcome::Infeasible
        } else {
            Outcome::Pass
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn table_csv(table: &Table) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    /// Human-readable summary for the terminal.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "== {} ==", self.command);
        for (k, v) in &self.parameters {
            let _ = writeln!(s, "  {k} = {v}");
        }
        for t in &self.tables {
            let _ = writeln!(s, "-- {} --", t.name);
            let _ = writeln!(s, "{}", t.columns.join("\t"));
            for row in &t.rows {
                let _ = writeln!(s, "{}", row.join("\t"));
            }
        }
        for c in &self.checks {
            let tag = match (c.asserted, c.pass) {
                (true, true) => "PASS",
                (true, false) => "FAIL",
                (false, true) => "info",
                (false, false) => "info*",
            };
            let _ = writeln!(s, "[{tag}] {}: {} {} {}", c.name, c.lhs, c.relation, c.rhs);
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for i in &self.infeasible {
            let _ = writeln!(s, "infeasible: {i}");
        }
        if let Some(t) = &self.timings_ms {
            for (k, ms) in t {
                let _ = writeln!(s, "time {k}: {ms} ms");
            }
        }
        let verdict = match self.outcome() {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::Infeasible => "infeasible",
        };
        let _ = writeln!(s, "result: {verdict}");
        s
    }

    /// Writes the report, its tables and its artifacts under `dir` in the
    /// configured formats. Returns the paths written.
    pub fn write_to(&self, dir: &Path, cfg: &RunConfig) -> Result<Vec<String>, CliError> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: String, contents: &str| -> Result<(), CliError> {
            let path = dir.join(&name);
            fs::write(&path, contents)?;
            written.push(path.display().to_string());
            Ok(())
        };
        if cfg.wants(Format::Json) {
            put(format!("{}.json", self.command), &self.to_json()?)?;
        }
        if cfg.wants(Format::Csv) {
            for t in &self.tables {
                put(format!("{}_{}.csv", self.command, t.name), &Report::table_csv(t)?)?;
            }
        }
        for a in &self.artifacts {
            let is_svg = a.file_name.ends_with(".svg");
            if (is_svg && cfg.wants(Format::Svg)) || (!is_svg && cfg.wants(Format::Json)) {
                put(a.file_name.clone(), &a.contents)?;
            }
        }
        Ok(written)
    }
}
