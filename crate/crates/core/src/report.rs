//! Check results shared by the verifiers and the command line.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }

    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One compared page, series or clause.
#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub label: String,
    pub status: Status,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    /// Stated under a hypothesis; left out of combined verdicts.
    pub conditional: bool,
    pub items: Vec<Item>,
    pub details: Vec<(String, String)>,
}

impl CheckResult {
    pub fn new(id: impl Into<String>) -> CheckResult {
        CheckResult {
            id: id.into(),
            status: Status::Pass,
            conditional: false,
            items: Vec::new(),
            details: Vec::new(),
        }
    }

    pub fn item(
        &mut self,
        label: impl Into<String>,
        ok: bool,
        note: impl Into<String>,
    ) -> &mut Self {
        if !ok {
            self.status = Status::Fail;
        }
        self.items.push(Item {
            label: label.into(),
            status: Status::of(ok),
            note: note.into(),
        });
        self
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.details.push((key.into(), value.to_string()));
        self
    }

    pub fn ok(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn text(&self) -> String {
        let mut out = format!("{} {}", self.id, self.status.label());
        if self.conditional {
            out.push_str(" (conditional)");
        }
        out.push('\n');
        for it in &self.items {
            out.push_str(&format!("  {} {}", it.status.label(), it.label));
            if !it.note.is_empty() {
                out.push_str(&format!(" {}", it.note));
            }
            out.push('\n');
        }
        for (k, v) in &self.details {
            out.push_str(&format!("  {k}={v}\n"));
        }
        out
    }
}

/// Verdict over unconditional results.
pub fn roll_up(results: &[CheckResult]) -> bool {
    results
        .iter()
        .filter(|r| !r.conditional)
        .all(CheckResult::ok)
}
