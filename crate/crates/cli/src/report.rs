//! CSV output and the verification report.

use std::fmt::Write as _;
use std::path::Path;

use pretentious_core::Verdict;

use crate::error::{HarnessError, Result};

/// Largest magnitude printed in integer form.
const INTEGER_CUTOFF: f64 = 9.007_199_254_740_992e15;

/// Formats a real with 17 significant digits. Integral values print as
/// integers so that exact sums stay readable; `-0` prints as `0`.
pub fn fmt_real(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else if v == v.trunc() && v.abs() < INTEGER_CUTOFF {
        format!("{}", v as i64)
    } else {
        format!("{v:.16e}")
    }
}

/// Keeps free text inside one CSV field.
pub fn csv_text(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

/// Accumulates a CSV document with a mandatory header row.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            first = false;
            self.text.push_str(f.as_ref());
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, self.text.as_bytes())
    }
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        }
    }
    std::fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub status: Verdict,
    pub measured: f64,
    /// Error budget or threshold the measurement was compared against.
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub lines: Vec<CheckLine>,
    pub config_hash: String,
}

impl VerificationReport {
    pub fn any_fail(&self) -> bool {
        self.lines.iter().any(|l| l.status == Verdict::Fail)
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.lines.iter().filter(|l| l.status == v).count()
    }

    pub fn line(&self, name: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn to_csv(&self) -> Csv {
        let mut csv = Csv::new(&["check_name", "status", "measured", "budget"]);
        for l in &self.lines {
            csv.row([
                csv_text(&l.name),
                l.status.name().to_string(),
                fmt_real(l.measured),
                fmt_real(l.budget),
            ]);
        }
        csv
    }

    /// Plain-text summary for the terminal.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let _ = writeln!(
                out,
                "{:<13} {:<48} measured {:<24} budget {}",
                l.status.name(),
                l.name,
                fmt_real(l.measured),
                fmt_real(l.budget)
            );
        }
        let _ = writeln!(
            out,
            "{} pass, {} fail, {} inconclusive; config {}",
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Inconclusive),
            self.config_hash
        );
        out
    }
}
