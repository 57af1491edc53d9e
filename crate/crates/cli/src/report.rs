use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "vbh-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
            Status::Skipped => "SKIP",
        };
        f.pad(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub udeg_bound: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub name: String,
    pub kind: String,
    pub group: String,
    pub status: Status,
    pub outputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub f: Vec<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub scenario: String,
    pub structure: StructureReport,
    pub tasks: Vec<TaskReport>,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.structure.status == Status::Pass && self.tasks.iter().all(|t| t.status == Status::Pass)
    }

    /// The report with every timing field zeroed, for comparisons.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        r.structure.elapsed_ms = 0.0;
        for t in &mut r.tasks {
            t.elapsed_ms = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn tally(&mut self) {
        let mut s = Summary::default();
        for t in &self.tasks {
            match t.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Error => s.errors += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        self.summary = s;
    }
}

const PREVIEW: usize = 160;

fn preview(s: &str) -> String {
    if s.chars().count() <= PREVIEW {
        s.to_string()
    } else {
        let head: String = s.chars().take(PREVIEW).collect();
        format!("{head}...")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.scenario)?;
        let st = &self.structure;
        write!(
            f,
            "{:5} structure n={} f=({})",
            st.status,
            st.n,
            st.f.join(", ")
        )?;
        if let Some(e) = &st.error {
            write!(f, " {e}")?;
        }
        if let Some(m) = &st.message {
            write!(f, ": {m}")?;
        }
        writeln!(f)?;
        for t in &self.tasks {
            write!(f, "{:5} {} [{}]", t.status, t.name, t.kind)?;
            if let Some(e) = &t.error {
                write!(f, " {e}")?;
            }
            if let Some(m) = &t.message {
                write!(f, ": {m}")?;
            }
            writeln!(f)?;
            for (k, v) in &t.outputs {
                writeln!(f, "      {k} = {}", preview(v))?;
            }
        }
        let s = &self.summary;
        write!(
            f,
            "{} passed, {} failed, {} errors, {} skipped",
            s.passed, s.failed, s.errors, s.skipped
        )
    }
}
