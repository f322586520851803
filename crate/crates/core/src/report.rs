use std::fmt;

use serde::Serialize;

/// Outcome of one named check, with the first counterexample on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    /// Records a check that passes iff `counterexample` is `None`.
    pub fn check_first<T>(&mut self, name: &str, counterexample: Option<T>, describe: impl FnOnce(T) -> String) {
        let detail = counterexample.map(describe);
        self.push(name, detail.is_none(), detail);
    }

    pub fn extend(&mut self, other: Report) {
        let prefix = other.title;
        self.checks.extend(
            other
                .checks
                .into_iter()
                .map(|c| Check { name: if prefix.is_empty() { c.name } else { format!("{prefix}: {}", c.name) }, ..c }),
        );
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.title.is_empty() {
            writeln!(f, "{}", self.title)?;
        }
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            match &c.detail {
                Some(d) => writeln!(f, "  [{mark}] {} ({d})", c.name)?,
                None => writeln!(f, "  [{mark}] {}", c.name)?,
            }
        }
        Ok(())
    }
}
