//! Resumable checkpoint files, replaced atomically.

use std::fs;
use std::path::Path;

use serde_json::{json, Value as Json};

use crate::error::CliError;
use crate::formats::{report_counts_from_json, u128_from_json, u128_to_json};
use crate::runner::Progress;

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub job: Json,
    pub progress: Progress,
}

impl Checkpoint {
    pub fn to_json(&self) -> Json {
        let p = &self.progress;
        json!({
            "job": self.job,
            "last_subset_integer": u128_to_json(p.next),
            "partial_counts": p.counts,
            "report": {
                "kind": p.kind,
                "visited": u128_to_json(p.visited),
                "counts": p.counts,
                "findings": p.findings,
            },
        })
    }

    pub fn from_json(v: &Json) -> Result<Self, CliError> {
        let bad = |m: &str| CliError::Format(format!("checkpoint: {m}"));
        let job = v.get("job").cloned().ok_or_else(|| bad("missing \"job\""))?;
        let next = u128_from_json(v.get("last_subset_integer").ok_or_else(|| bad("missing \"last_subset_integer\""))?)?;
        let report = v.get("report").ok_or_else(|| bad("missing \"report\""))?;
        let kind = report.get("kind").and_then(Json::as_str).ok_or_else(|| bad("missing report kind"))?;
        let visited = u128_from_json(report.get("visited").ok_or_else(|| bad("missing visited"))?)?;
        let findings = report.get("findings").and_then(Json::as_array).ok_or_else(|| bad("missing findings"))?.clone();
        Ok(Checkpoint {
            job,
            progress: Progress { kind: kind.into(), next, visited, counts: report_counts_from_json(report)?, findings },
        })
    }

    /// Writes to a sibling temporary file, then renames it over `path`.
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let shown = path.display().to_string();
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let text = serde_json::to_string_pretty(&self.to_json()).expect("json serializes");
        fs::write(&tmp, text + "\n").map_err(|e| CliError::io(&shown, e))?;
        fs::rename(&tmp, path).map_err(|e| CliError::io(&shown, e))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| CliError::io(&shown, e))?;
        let v: Json = serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{shown}: {e}")))?;
        Self::from_json(&v)
    }
}
