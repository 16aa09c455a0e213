//! Witnessed pass/fail reports produced by every verifier.
//!
//! Verifiers never raise on a mathematical failure. Each failed check carries
//! a concrete witness so a pipeline can log exactly what went wrong.

use std::fmt;

/// Concrete evidence attached to a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Point(u32),
    Pair(u32, u32),
    Classes(usize, usize),
    Class(usize),
    Block(usize),
    Cell(u32, u32),
    Group(usize),
    Text(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point(p) => write!(f, "point {p}"),
            Witness::Pair(a, b) => write!(f, "pair {{{a}, {b}}}"),
            Witness::Classes(i, j) => write!(f, "classes {i} and {j}"),
            Witness::Class(i) => write!(f, "class {i}"),
            Witness::Block(b) => write!(f, "block label {b}"),
            Witness::Cell(r, c) => write!(f, "cell ({r}, {c})"),
            Witness::Group(g) => write!(f, "group {g}"),
            Witness::Text(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<Witness>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed: true,
            witness: None,
            detail: String::new(),
        });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: Witness, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed: false,
            witness: Some(witness),
            detail: detail.into(),
        });
    }

    /// Records `failure` if present, otherwise a pass.
    pub fn record(&mut self, name: &str, failure: Option<(Witness, String)>) {
        match failure {
            None => self.pass(name),
            Some((w, d)) => self.fail(name, w, d),
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// Appends `other` with every check name prefixed.
    pub fn extend_prefixed(&mut self, prefix: &str, other: VerificationReport) {
        self.checks.extend(other.checks.into_iter().map(|mut c| {
            c.name = format!("{prefix}.{}", c.name);
            c
        }));
    }

    /// Conjunction of all checks. An empty report passes.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Turns a failing report into an error naming `what`.
    pub fn into_result(self, what: &str) -> crate::Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(crate::Error::verification(what, self))
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "PASS {}", c.name)?;
            } else {
                let w = c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
                writeln!(f, "FAIL {}: {} ({})", c.name, c.detail, w)?;
            }
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
