//! Pass/fail tables for checked identities.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub title: String,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Self::default()
        }
    }

    /// Records `lhs == rhs`.
    pub fn compare<T: PartialEq + fmt::Display>(&mut self, identity: impl Into<String>, lhs: T, rhs: T) -> bool {
        let pass = lhs == rhs;
        self.checks.push(CheckResult {
            identity: identity.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
            note: None,
        });
        pass
    }

    /// Records a boolean check with a free-form description of both sides.
    pub fn assert(
        &mut self,
        identity: impl Into<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        pass: bool,
    ) -> bool {
        self.checks.push(CheckResult {
            identity: identity.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            pass,
            note: None,
        });
        pass
    }

    /// Attaches a note to the last check.
    pub fn note(&mut self, note: impl Into<String>) {
        if let Some(last) = self.checks.last_mut() {
            last.note = Some(note.into());
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// `identity | lhs | rhs | pass` table with padded columns.
    pub fn to_table(&self) -> String {
        let header = ["identity", "lhs", "rhs", "pass"];
        let rows: Vec<[String; 4]> = self
            .checks
            .iter()
            .map(|c| {
                let identity = match &c.note {
                    Some(n) => format!("{} ({n})", c.identity),
                    None => c.identity.clone(),
                };
                [identity, c.lhs.clone(), c.rhs.clone(), if c.pass { "yes" } else { "NO" }.into()]
            })
            .collect();
        let mut widths = header.map(str::len);
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: [&str; 4]| {
            let mut s = String::new();
            for (i, cell) in cells.iter().enumerate() {
                if i > 0 {
                    s.push_str(" | ");
                }
                s.push_str(cell);
                if i < 3 {
                    s.push_str(&" ".repeat(widths[i] - cell.chars().count()));
                }
            }
            s.push('\n');
            s
        };
        let mut out = format!("# {}\n", self.title);
        out.push_str(&line(header));
        for r in &rows {
            out.push_str(&line([&r[0], &r[1], &r[2], &r[3]]));
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        if let Some(v) = &self.verdict {
            out.push_str(&format!("verdict: {v}\n"));
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}
