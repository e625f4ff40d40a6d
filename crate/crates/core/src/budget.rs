use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Resource limits shared by the enumeration and search kernels.
///
/// These are configuration, not constants: raising them makes larger
/// groups reachable at the cost of time and memory.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Largest group order a direct product may have.
    pub max_group_order: usize,
    /// Largest group order handed to the automorphism search.
    pub max_automorphism_order: usize,
    /// Cap on the number of subgroups a single enumeration may produce.
    pub max_subgroups: usize,
    /// Cap on the number of biset products tried by one span search.
    pub max_products: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_group_order: 4096,
            max_automorphism_order: 64,
            max_subgroups: 500_000,
            max_products: None,
            deadline: None,
        }
    }
}

impl Budget {
    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn check_time(&self, what: &str, count: usize) -> Result<()> {
        if self.expired() {
            Err(Error::budget(format!("{what} (time limit)"), count))
        } else {
            Ok(())
        }
    }
}
