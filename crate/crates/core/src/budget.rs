use std::time::Duration;

#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;

/// Returned when a charge would overrun the budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhausted;

/// Counts objective evaluations against an optional cap and deadline.
#[derive(Debug, Clone)]
pub struct BudgetLedger {
    max_calls: Option<u64>,
    calls_used: u64,
    wall_clock_limit: Option<Duration>,
    #[cfg(not(target_arch = "wasm32"))]
    started: Option<Instant>,
}

impl BudgetLedger {
    pub fn new(max_calls: Option<u64>) -> Self {
        Self {
            max_calls,
            calls_used: 0,
            wall_clock_limit: None,
            #[cfg(not(target_arch = "wasm32"))]
            started: None,
        }
    }

    pub fn unlimited() -> Self {
        Self::new(None)
    }

    /// Adds a deadline measured from this call. Ignored on wasm32.
    pub fn with_wall_clock_limit(mut self, limit: Duration) -> Self {
        self.wall_clock_limit = Some(limit);
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.started = Some(Instant::now());
        }
        self
    }

    pub fn max_calls(&self) -> Option<u64> {
        self.max_calls
    }

    pub fn calls_used(&self) -> u64 {
        self.calls_used
    }

    pub fn wall_clock_limit(&self) -> Option<Duration> {
        self.wall_clock_limit
    }

    pub fn remaining(&self) -> Option<u64> {
        self.max_calls.map(|m| m - self.calls_used)
    }

    fn out_of_time(&self) -> bool {
        #[cfg(not(target_arch = "wasm32"))]
        if let (Some(limit), Some(started)) = (self.wall_clock_limit, self.started) {
            return started.elapsed() >= limit;
        }
        false
    }

    /// True if `n` more calls fit in the budget and the deadline has not passed.
    pub fn can_spend(&self, n: u64) -> bool {
        !self.out_of_time() && self.remaining().is_none_or(|r| n <= r)
    }

    /// Charges `n` calls. On overrun nothing is charged.
    pub fn record(&mut self, n: u64) -> Result<u64, Exhausted> {
        if !self.can_spend(n) {
            return Err(Exhausted);
        }
        self.calls_used += n;
        Ok(self.calls_used)
    }

    /// Marks the budget fully spent. Used when a remote endpoint reports more
    /// calls than were left.
    pub fn saturate(&mut self) {
        if let Some(max) = self.max_calls {
            self.calls_used = max;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ledger(used: u64, max: Option<u64>) -> BudgetLedger {
        let mut l = BudgetLedger::new(max);
        l.calls_used = used;
        l
    }

    #[test]
    fn boundary_admit() {
        let mut l = ledger(7999, Some(8000));
        assert_eq!(l.record(1), Ok(8000));
        assert_eq!(l.calls_used(), 8000);
    }

    #[test]
    fn boundary_reject_leaves_count() {
        let mut l = ledger(8000, Some(8000));
        assert_eq!(l.record(1), Err(Exhausted));
        assert_eq!(l.calls_used(), 8000);
        let mut l = ledger(7999, Some(8000));
        assert_eq!(l.record(2), Err(Exhausted));
        assert_eq!(l.calls_used(), 7999);
    }

    #[test]
    fn unlimited_budget() {
        let mut l = ledger(5, None);
        assert_eq!(l.record(100), Ok(105));
        assert_eq!(l.remaining(), None);
    }

    #[test]
    fn zero_budget_rejects_everything() {
        let mut l = BudgetLedger::new(Some(0));
        assert!(!l.can_spend(1));
        assert_eq!(l.record(1), Err(Exhausted));
    }

    #[test]
    fn expired_deadline_exhausts() {
        let mut l = BudgetLedger::unlimited().with_wall_clock_limit(Duration::ZERO);
        assert_eq!(l.record(1), Err(Exhausted));
    }

    #[test]
    fn saturate_caps_at_max() {
        let mut l = ledger(3, Some(10));
        l.saturate();
        assert_eq!(l.calls_used(), 10);
        let mut l = ledger(3, None);
        l.saturate();
        assert_eq!(l.calls_used(), 3);
    }
}
