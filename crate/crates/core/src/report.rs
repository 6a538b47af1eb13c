//! Three-valued verdicts for sufficient-condition checkers.

use serde::{Deserialize, Serialize};

/// Outcome of a checker.
///
/// `Pass` means every hypothesis of a sufficient condition was verified, so
/// its conclusion is certified. `Inconclusive` means some hypothesis failed;
/// nothing is claimed about the conclusion. `Fail` is only produced by
/// necessary-and-sufficient tests, where hypothesis failure does refute the
/// conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Hypothesis {
    pub fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            holds,
            detail: detail.into(),
        }
    }
}

/// A verdict together with the hypotheses that produced it and the result
/// tags it relies on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub claim: Option<String>,
    pub cites: Vec<String>,
    pub hypotheses: Vec<Hypothesis>,
    pub notes: Vec<String>,
}

impl CheckReport {
    /// `Pass` with `claim` when every hypothesis holds, `Inconclusive`
    /// otherwise.
    pub fn sufficient(
        claim: impl Into<String>,
        cites: &[&str],
        hypotheses: Vec<Hypothesis>,
    ) -> Self {
        let all = hypotheses.iter().all(|h| h.holds);
        Self {
            verdict: if all { Verdict::Pass } else { Verdict::Inconclusive },
            claim: all.then(|| claim.into()),
            cites: cites.iter().map(|s| s.to_string()).collect(),
            hypotheses,
            notes: Vec::new(),
        }
    }

    pub fn all_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}
