use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a check at a fixed resolution and horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "proved-at-resolution", alias = "proved")]
    Proved,
    #[serde(rename = "refuted-at-resolution", alias = "refuted")]
    Refuted,
    #[serde(rename = "unresolved")]
    Unresolved,
}

impl Verdict {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Proved
        } else {
            Verdict::Refuted
        }
    }

    pub fn is_proved(self) -> bool {
        self == Verdict::Proved
    }

    pub fn is_refuted(self) -> bool {
        self == Verdict::Refuted
    }

    /// Conjunction over sub-checks: any refutation refutes, otherwise any
    /// unresolved part leaves the whole unresolved.
    pub fn all<I: IntoIterator<Item = Verdict>>(parts: I) -> Verdict {
        let mut out = Verdict::Proved;
        for v in parts {
            match v {
                Verdict::Refuted => return Verdict::Refuted,
                Verdict::Unresolved => out = Verdict::Unresolved,
                Verdict::Proved => {}
            }
        }
        out
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Proved => "proved-at-resolution",
            Verdict::Refuted => "refuted-at-resolution",
            Verdict::Unresolved => "unresolved",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
