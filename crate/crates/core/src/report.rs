use std::fmt;

use serde::Serialize;

/// One failed instance of a law: its inputs and the two sides that differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub inputs: String,
    pub left: String,
    pub right: String,
}

/// Outcome of checking a family of laws over a set of instances.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Counts one check; on failure `sides` gives `(inputs, left, right)`.
    pub(crate) fn record(&mut self, ok: bool, law: &str, sides: impl FnOnce() -> (String, String, String)) {
        self.checked += 1;
        if !ok {
            let (inputs, left, right) = sides();
            self.violations.push(Violation { law: law.to_string(), inputs, left, right });
        }
    }

    pub fn merge(&mut self, other: LawReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} checks, {} violations", self.checked, self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {}: {}: {} vs {}", v.law, v.inputs, v.left, v.right)?;
        }
        Ok(())
    }
}
