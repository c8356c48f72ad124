//! Line-oriented `key=value` reports with a trailing summary block.

use std::fmt::Display;

use nlverify::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Ok = 0,
    Tolerance = 1,
    InvalidStructure = 2,
    InvalidAlgebra = 3,
    InvalidFlag = 4,
    /// Unreadable or malformed input, or parameters out of range.
    BadInput = 5,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Ok => "ok",
            Outcome::Tolerance => "tolerance_failure",
            Outcome::InvalidStructure => "invalid_structure",
            Outcome::InvalidAlgebra => "invalid_algebra",
            Outcome::InvalidFlag => "invalid_flag",
            Outcome::BadInput => "bad_input",
        }
    }

    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::InvalidStructure(_) => Outcome::InvalidStructure,
            Error::InvalidAlgebra(_) | Error::InvalidPair(_) | Error::OddDimension(_) => {
                Outcome::InvalidAlgebra
            }
            Error::InvalidFlag(_) => Outcome::InvalidFlag,
            Error::InvalidK0(_) => Outcome::Tolerance,
            Error::Shape(_)
            | Error::Invertibility(_)
            | Error::InvalidInput(_)
            | Error::Parse { .. } => Outcome::BadInput,
        }
    }
}

/// 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    checks: usize,
    failed: Vec<String>,
    outcome: Option<Outcome>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn section(&mut self, name: &str) {
        if !self.lines.is_empty() {
            self.lines.push(String::new());
        }
        self.lines.push(format!("[{name}]"));
    }

    pub fn value(&mut self, key: &str, v: impl Display) {
        self.lines.push(format!("{key}={v}"));
    }

    pub fn real(&mut self, key: &str, x: f64) {
        self.value(key, float(x));
    }

    /// Records a pass/fail line that counts toward the summary.
    pub fn check(&mut self, key: &str, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failed.push(key.to_string());
        }
        self.value(key, if ok { "pass" } else { "fail" });
    }

    /// Records an error that stops the current command.
    pub fn error(&mut self, context: &str, e: &Error) {
        let outcome = Outcome::from_error(e);
        self.value(&format!("{context}.error"), e);
        eprintln!("{context}: {e}");
        self.raise(outcome);
    }

    pub fn raise(&mut self, outcome: Outcome) {
        self.outcome = Some(self.outcome.map_or(outcome, |o| o.max(outcome)));
    }

    pub fn outcome(&self) -> Outcome {
        let base = if self.failed.is_empty() {
            Outcome::Ok
        } else {
            Outcome::Tolerance
        };
        self.outcome.map_or(base, |o| o.max(base))
    }

    pub fn render(&self, command: &str) -> String {
        let outcome = self.outcome();
        let mut out = self.lines.join("\n");
        if !out.is_empty() {
            out.push_str("\n\n");
        }
        out.push_str("[summary]\n");
        out.push_str(&format!("command={command}\n"));
        out.push_str(&format!("checks={}\n", self.checks));
        out.push_str(&format!("failed={}\n", self.failed.len()));
        if !self.failed.is_empty() {
            out.push_str(&format!("failed_checks={}\n", self.failed.join(",")));
        }
        out.push_str(&format!("status={}\n", outcome.label()));
        out.push_str(&format!("exit_code={}\n", outcome.code()));
        out
    }
}
