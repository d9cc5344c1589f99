//! Schema-versioned report and its text rendering.

use serde::Serialize;
use serde_json::Value;

use crate::config::JobConfig;
use crate::jobs::{CheckOutcome, Outcome, Status};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub job: JobConfig,
    pub status: Status,
    pub checks: Vec<CheckOutcome>,
    pub result: Value,
    pub timings: Timings,
}

impl Report {
    pub fn new(job: JobConfig, outcome: Outcome, total_ms: f64) -> Self {
        let status = if outcome.checks.iter().all(CheckOutcome::passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            schema_version: SCHEMA_VERSION,
            job,
            status,
            checks: outcome.checks,
            result: outcome.result,
            timings: Timings { total_ms },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let job = serde_json::to_value(&self.job).expect("job serializes");
        out.push_str(&format!("cocycles report (schema {})\n", self.schema_version));
        out.push_str(&format!("job     {}\n", inline(&job)));
        out.push_str(&format!("status  {}\n", if self.passed() { "PASS" } else { "FAIL" }));
        out.push_str("checks\n");
        for c in &self.checks {
            let mark = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}", c.name));
            if let Some(d) = &c.detail {
                out.push_str(&format!(": {d}"));
            }
            out.push('\n');
            if let Some(x) = &c.counterexample {
                out.push_str(&format!("         counterexample {x}\n"));
            }
        }
        if let Value::Object(map) = &self.result {
            out.push_str("result\n");
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in map {
                out.push_str(&format!("  {k:width$}  {}\n", abbreviate(&v.to_string(), 100)));
            }
        }
        out.push_str(&format!("time    {:.1} ms\n", self.timings.total_ms));
        out
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                _ => format!("{k}={v}"),
            })
            .collect::<Vec<_>>()
            .join(" "),
        _ => v.to_string(),
    }
}

fn abbreviate(s: &str, max: usize) -> String {
    if s.chars().count() <= max {
        s.to_string()
    } else {
        let head: String = s.chars().take(max).collect();
        format!("{head}...")
    }
}
