//! The machine-readable report and the human summary derived from it.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub ring: String,
    pub settings: Settings,
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Settings {
    pub bound: usize,
    pub replay: bool,
    pub probe_extra: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub name: String,
    pub kind: String,
    pub line: usize,
    pub decomposition: String,
    pub structure: Value,
    pub verdicts: Vec<VerdictEntry>,
    pub evaluations: Vec<EvaluationEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplayStatus {
    Ok,
    Failed,
    Skipped,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub probes: usize,
    pub sample: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictEntry {
    pub predicate: String,
    /// `true`, `false`, `undetermined(K=..)` or `error`.
    pub value: String,
    pub witness: Value,
    pub bounds: Bounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
    pub replay: ReplayStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Internal errors (inconsistent oracles, failed replays) make the run fail.
    #[serde(skip)]
    pub internal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvaluationEntry {
    pub functor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<String>,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn internal_failures(&self) -> Vec<String> {
        self.items
            .iter()
            .flat_map(|it| {
                it.verdicts.iter().filter(|v| v.internal || v.replay == ReplayStatus::Failed).map(move |v| {
                    format!("{}: {}: {}", it.name, v.predicate, v.error.as_deref().unwrap_or("witness did not replay"))
                })
            })
            .collect()
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "ring {}  (bound K={}, replay {})",
            self.ring,
            self.settings.bound,
            if self.settings.replay { "on" } else { "off" }
        );
        for it in &self.items {
            let _ = writeln!(out, "\n{} {} (line {}): {}", it.kind, it.name, it.line, it.decomposition);
            for v in &it.verdicts {
                let kind = v.witness.get("kind").and_then(Value::as_str).unwrap_or("none");
                let replay = match v.replay {
                    ReplayStatus::Ok => "replayed",
                    ReplayStatus::Failed => "REPLAY FAILED",
                    ReplayStatus::Skipped => "not replayed",
                    ReplayStatus::NotApplicable => "",
                };
                let _ = write!(out, "  {:<22} {:<18} {:<22} {}", v.predicate, v.value, kind, replay);
                if let Some(e) = &v.error {
                    let _ = write!(out, " ({e})");
                }
                out.push('\n');
            }
            for e in &it.evaluations {
                match &e.probe {
                    Some(p) => {
                        let _ = writeln!(out, "  {}({}) = {}", e.functor, p, e.value);
                    }
                    None => {
                        let _ = writeln!(out, "  {} = {}", e.functor, e.value);
                    }
                }
            }
        }
        out
    }
}
