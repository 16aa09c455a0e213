//! Outcome and budget types shared by the deterministic searches.

/// `Exhausted` means the whole normalized space was scanned without success;
/// `OutOfBudget` is inconclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Exhausted,
    OutOfBudget,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found(t) => SearchOutcome::Found(f(t)),
            SearchOutcome::Exhausted => SearchOutcome::Exhausted,
            SearchOutcome::OutOfBudget => SearchOutcome::OutOfBudget,
        }
    }
}

/// Candidate-count budget. Counting candidates rather than time keeps every
/// search reproducible.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Charges one candidate; false once the limit is reached.
    #[inline]
    pub fn spend(&mut self) -> bool {
        if self.used >= self.limit {
            return false;
        }
        self.used += 1;
        true
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
