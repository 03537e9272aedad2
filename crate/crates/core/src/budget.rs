use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Step counter shared by Gröbner and elimination loops.
///
/// A budget without a limit never fails. Steps are counted atomically so a
/// budget can be shared between threads, although every operation in this
/// crate charges it from a single thread.
#[derive(Debug, Default)]
pub struct Budget {
    limit: Option<u64>,
    used: AtomicU64,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn new(limit: u64) -> Self {
        Budget {
            limit: Some(limit),
            used: AtomicU64::new(0),
        }
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn charge(&self, steps: u64) -> Result<()> {
        let used = self.used.fetch_add(steps, Ordering::Relaxed) + steps;
        match self.limit {
            Some(limit) if used > limit => Err(Error::BudgetExhausted(limit)),
            _ => Ok(()),
        }
    }
}
