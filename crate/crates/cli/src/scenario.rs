//! Scenario documents: a structure block followed by an ordered task list.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use vbh::coeffs::{RatFunc, Rational};
use vbh::syntax::{parse_lam_expr, parse_rational, parse_scalar};

pub const SCENARIO_SCHEMA: &str = "vbh-scenario/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub name: String,
    pub structure: Structure,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

/// Rationals may be written as JSON numbers or as strings such as `"-3/2"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn value(&self) -> Result<Rational, String> {
        match self {
            Num::Int(k) => Ok(Rational::from_int(*k)),
            Num::Text(t) => parse_rational(t).map_err(|e| format!("{t:?}: {e}")),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conformal {
    pub lambda0: Num,
    pub lambda1: Num,
    pub mu: Num,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Structure {
    pub n: usize,
    pub f: Vec<String>,
    #[serde(default)]
    pub conformal: Option<Conformal>,
    #[serde(default)]
    pub c: Option<Vec<String>>,
}

impl Structure {
    pub fn metric(&self) -> Result<Vec<RatFunc>, String> {
        scalars(&self.f, self.n)
    }

    pub fn central(&self) -> Result<Option<Vec<RatFunc>>, String> {
        self.c.as_ref().map(|c| scalars(c, self.n)).transpose()
    }
}

pub fn scalars(items: &[String], n: usize) -> Result<Vec<RatFunc>, String> {
    items
        .iter()
        .map(|t| parse_scalar(t, Some(n)).map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ProbeMode {
    Kernel2,
    Coboundary,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskKind {
    CheckBihamiltonian,
    Schouten {
        p: String,
        q: String,
        #[serde(default)]
        expect: Option<String>,
    },
    Derivation {
        p: String,
        #[serde(default)]
        expect_u: Option<Vec<String>>,
        #[serde(default)]
        expect_th: Option<Vec<String>>,
    },
    Lie {
        p: String,
        form: String,
        #[serde(default)]
        expect: Option<String>,
    },
    Indices {
        form: String,
        #[serde(default)]
        expect: Option<Vec<String>>,
    },
    Tau {
        #[serde(default)]
        c: Option<Vec<String>>,
        #[serde(default)]
        expect: Option<String>,
    },
    Normalize {
        form: String,
        #[serde(default)]
        expect: Option<String>,
    },
    Conformal {
        #[serde(default)]
        expect: Option<Vec<Num>>,
    },
    Euler,
    CentralInvariants {
        #[serde(default)]
        c: Option<Vec<String>>,
        #[serde(default)]
        expect_m: Option<Vec<Num>>,
        #[serde(default = "yes")]
        expect_zero: bool,
    },
    DeltaMinusOne {
        form: String,
    },
    Window {
        p: usize,
        d: usize,
        #[serde(default)]
        expect_zero: Option<bool>,
    },
    Atlas {
        space: String,
        p_max: usize,
        d_max: usize,
    },
    Probe {
        p: usize,
        d: usize,
        #[serde(default)]
        udeg_bound: Option<u32>,
        mode: ProbeMode,
        #[serde(default)]
        target: Option<String>,
        #[serde(default)]
        expect_trivial: Option<bool>,
    },
}

fn opt(o: &Option<String>) -> Vec<&str> {
    o.as_deref().into_iter().collect()
}

fn list(o: &Option<Vec<String>>) -> Vec<&str> {
    o.iter().flatten().map(String::as_str).collect()
}

fn yes() -> bool {
    true
}

impl TaskKind {
    pub fn label(&self) -> &'static str {
        match self {
            TaskKind::CheckBihamiltonian => "check-bihamiltonian",
            TaskKind::Schouten { .. } => "schouten",
            TaskKind::Derivation { .. } => "derivation",
            TaskKind::Lie { .. } => "lie",
            TaskKind::Indices { .. } => "indices",
            TaskKind::Tau { .. } => "tau",
            TaskKind::Normalize { .. } => "normalize",
            TaskKind::Conformal { .. } => "conformal",
            TaskKind::Euler => "euler",
            TaskKind::CentralInvariants { .. } => "central-invariants",
            TaskKind::DeltaMinusOne { .. } => "delta-minus-one",
            TaskKind::Window { .. } => "window",
            TaskKind::Atlas { .. } => "atlas",
            TaskKind::Probe { .. } => "probe",
        }
    }

    /// Expression fields, including references to earlier outputs.
    fn expressions(&self) -> Vec<&str> {
        let mut v: Vec<&str> = Vec::new();
        match self {
            TaskKind::Schouten { p, q, expect } => {
                v.extend([p.as_str(), q.as_str()]);
                v.extend(opt(expect));
            }
            TaskKind::Derivation {
                p,
                expect_u,
                expect_th,
            } => {
                v.push(p);
                v.extend(list(expect_u));
                v.extend(list(expect_th));
            }
            TaskKind::Lie { p, form, expect } => {
                v.extend([p.as_str(), form.as_str()]);
                v.extend(opt(expect));
            }
            TaskKind::Indices { form, expect } => {
                v.push(form);
                v.extend(list(expect));
            }
            TaskKind::Tau { c, expect } => {
                v.extend(list(c));
                v.extend(opt(expect));
            }
            TaskKind::Normalize { form, expect } => {
                v.push(form);
                v.extend(opt(expect));
            }
            TaskKind::CentralInvariants { c, .. } => v.extend(list(c)),
            TaskKind::DeltaMinusOne { form } => v.push(form),
            TaskKind::Probe { target, .. } => v.extend(opt(target)),
            _ => {}
        }
        v
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Task {
    pub name: String,
    #[serde(default = "main_group")]
    pub group: String,
    #[serde(flatten)]
    pub kind: TaskKind,
}

fn main_group() -> String {
    "main".into()
}

/// `$name` refers to the output of an earlier task.
pub fn reference(text: &str) -> Option<&str> {
    text.strip_prefix('$')
}

/// Tasks whose output can be referenced later.
fn produces_form(k: &TaskKind) -> bool {
    matches!(
        k,
        TaskKind::Tau { .. } | TaskKind::Normalize { .. } | TaskKind::Lie { .. }
    )
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let s: Scenario =
            serde_json::from_str(text).map_err(|e| format!("invalid scenario: {e}"))?;
        if s.schema != SCENARIO_SCHEMA {
            return Err(format!(
                "unsupported schema {:?}, expected {SCENARIO_SCHEMA:?}",
                s.schema
            ));
        }
        Ok(s)
    }

    /// Static checks run before any task: unique names, resolvable
    /// references, parseable expressions and task-specific bidegrees.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.structure.n;
        if n == 0 {
            return Err("structure.n must be positive".into());
        }
        if self.structure.f.len() != n {
            return Err(format!(
                "structure.f has {} entries, n = {n}",
                self.structure.f.len()
            ));
        }
        self.structure.metric()?;
        if let Some(c) = &self.structure.c {
            if c.len() != n {
                return Err(format!("structure.c has {} entries, n = {n}", c.len()));
            }
            self.structure.central()?;
        }
        if let Some(cf) = &self.structure.conformal {
            for x in [&cf.lambda0, &cf.lambda1, &cf.mu] {
                x.value()?;
            }
        }
        let mut seen = BTreeSet::new();
        let mut forms = BTreeSet::new();
        for t in &self.tasks {
            if !seen.insert(t.name.as_str()) {
                return Err(format!("duplicate task name {:?}", t.name));
            }
            for e in t.kind.expressions() {
                match reference(e) {
                    Some(r) if !forms.contains(r) => {
                        return Err(format!(
                            "task {:?}: {e:?} does not name an earlier form output",
                            t.name
                        ))
                    }
                    Some(_) => {}
                    None => {
                        parse_lam_expr(e, Some(n))
                            .map_err(|err| format!("task {:?}: {e:?}: {err}", t.name))?;
                    }
                }
            }
            self.validate_task(t)?;
            if produces_form(&t.kind) {
                forms.insert(t.name.as_str());
            }
        }
        Ok(())
    }

    fn validate_task(&self, t: &Task) -> Result<(), String> {
        let n = self.structure.n;
        let err = |m: String| Err(format!("task {:?}: {m}", t.name));
        match &t.kind {
            TaskKind::Tau { c: Some(c), .. } | TaskKind::CentralInvariants { c: Some(c), .. }
                if c.len() != n =>
            {
                err(format!("c has {} entries, n = {n}", c.len()))
            }
            TaskKind::Tau { c: None, .. } if self.structure.c.is_none() => {
                err("no c given here or in the structure".into())
            }
            TaskKind::Euler | TaskKind::CentralInvariants { .. }
                if self.structure.conformal.is_none() =>
            {
                err("needs structure.conformal".into())
            }
            TaskKind::Derivation {
                expect_u,
                expect_th,
                ..
            } if expect_u.as_ref().is_some_and(|v| v.len() != n)
                || expect_th.as_ref().is_some_and(|v| v.len() != n) =>
            {
                err(format!("expected images need {n} entries"))
            }
            TaskKind::Indices {
                expect: Some(v), ..
            } if v.len() != n => err(format!("expect needs {n} entries")),
            TaskKind::Probe {
                mode: ProbeMode::Coboundary,
                target: None,
                ..
            } => err("coboundary probe needs a target".into()),
            TaskKind::Probe {
                p,
                d,
                mode: ProbeMode::Coboundary,
                ..
            } if *p < 2 || *d < 2 => err(format!(
                "coboundary probe at ({p},{d}) has no source bidegree"
            )),
            TaskKind::Atlas { space, .. } => match space.parse::<vbh::cohomolab::Space>() {
                Ok(_) => Ok(()),
                Err(e) => err(e.to_string()),
            },
            _ => self.validate_bidegrees(t),
        }
    }

    // Bidegree requirements are checkable only on literal expressions.
    fn validate_bidegrees(&self, t: &Task) -> Result<(), String> {
        let n = self.structure.n;
        let want = |text: &str, pd: (i32, i32)| -> Result<(), String> {
            if reference(text).is_some() {
                return Ok(());
            }
            let w = vbh::syntax::parse_reduced(text, Some(n))
                .map_err(|e| format!("task {:?}: {e}", t.name))?;
            match w.bidegree() {
                Ok(None) => Ok(()),
                Ok(Some(got)) if got == pd => Ok(()),
                Ok(Some(got)) => Err(format!(
                    "task {:?}: form has bidegree {got:?}, expected {pd:?}",
                    t.name
                )),
                Err(e) => Err(format!("task {:?}: {e}", t.name)),
            }
        };
        match &t.kind {
            TaskKind::Indices { form, .. } | TaskKind::Normalize { form, .. } => want(form, (1, 2)),
            TaskKind::Probe {
                p,
                d,
                target: Some(x),
                ..
            } => want(x, (*p as i32, *d as i32)),
            _ => Ok(()),
        }
    }
}
