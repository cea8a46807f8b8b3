//! Report assembly and rendering.

use std::time::Instant;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

pub const REPORT_SCHEMA: &str = "moufang.report/1";

/// One named result. `passed` is `None` for purely informational sections.
#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub name: String,
    pub passed: Option<bool>,
    pub data: Value,
    pub elapsed_ms: f64,
}

impl Section {
    /// Runs `f`, timing it. Errors become a failed section carrying the
    /// message rather than aborting the report.
    pub fn run<T: Serialize>(name: &str, f: impl FnOnce() -> Result<(Option<bool>, T)>) -> Section {
        let start = Instant::now();
        let (passed, data) = match f() {
            Ok((passed, data)) => (passed, serde_json::to_value(data).unwrap_or(Value::Null)),
            Err(e) => (Some(false), serde_json::json!({ "error": format!("{e:#}") })),
        };
        Section { name: name.to_string(), passed, data, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 }
    }

    /// Like [`Section::run`], but an error is informational: the check
    /// did not apply to this loop.
    pub fn info<T: Serialize>(name: &str, f: impl FnOnce() -> Result<T>) -> Section {
        let mut s = Section::run(name, || Ok((None, f()?)));
        if s.data.get("error").is_some() {
            s.passed = None;
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(rename = "loop", skip_serializing_if = "Option::is_none")]
    pub loop_spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loop_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub seed: u64,
    pub samples: u64,
    pub sections: Vec<Section>,
    pub passed: bool,
    pub total_ms: f64,
}

impl Report {
    pub fn new(command: &str, seed: u64, samples: u64) -> Report {
        Report {
            schema: REPORT_SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            loop_spec: None,
            loop_name: None,
            order: None,
            seed,
            samples,
            sections: Vec::new(),
            passed: true,
            total_ms: 0.0,
        }
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    /// Sets the overall verdict: every non-informational section passed.
    pub fn finish(&mut self, start: Instant) {
        self.passed = self.sections.iter().all(|s| s.passed != Some(false));
        self.total_ms = start.elapsed().as_secs_f64() * 1e3;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Human-readable summary, one line per section.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let title = match (&self.loop_name, self.order) {
            (Some(name), Some(n)) => format!("{} on {name} (order {n})", self.command),
            _ => self.command.clone(),
        };
        out.push_str(&format!("{title}  [seed {:#x}, {} samples]\n", self.seed, self.samples));
        for s in &self.sections {
            let tag = match s.passed {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "INFO",
            };
            out.push_str(&format!("{tag}  {:<28} {}  ({:.0} ms)\n", s.name, summarize(&s.data), s.elapsed_ms));
        }
        out.push_str(if self.passed { "overall: PASS\n" } else { "overall: FAIL\n" });
        out
    }
}

/// Compact one-line rendering of section data.
fn summarize(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(map) => map
            .iter()
            .filter(|(_, v)| !v.is_null())
            .map(|(k, v)| format!("{k}={}", summarize(v)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::Array(items) => format!("[{}]", items.iter().map(summarize).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_fail_the_section() {
        let s = Section::run::<()>("x", || anyhow::bail!("boom"));
        assert_eq!(s.passed, Some(false));
        assert_eq!(s.data["error"], "boom");
    }

    #[test]
    fn info_errors_stay_informational() {
        let s = Section::info::<()>("x", || anyhow::bail!("size guard"));
        assert_eq!(s.passed, None);
    }

    #[test]
    fn overall_verdict_ignores_info() {
        let mut r = Report::new("verify", 1, 10);
        r.push(Section::run("a", || Ok((Some(true), 1))));
        r.push(Section::info("b", || Ok(2)));
        r.finish(Instant::now());
        assert!(r.passed);
        r.push(Section::run("c", || Ok((Some(false), 3))));
        r.finish(Instant::now());
        assert!(!r.passed);
        assert!(r.to_text().contains("FAIL  c"));
    }
}
