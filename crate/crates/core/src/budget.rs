//! Wall-clock budgets for searches.

use std::time::{Duration, Instant};

pub const ENV_VAR: &str = "PILAB_BUDGET_MS";

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    start: Instant,
    limit: Option<Duration>,
}

impl Budget {
    /// A budget of `ms` milliseconds (`None`: unlimited), overridden by the
    /// `PILAB_BUDGET_MS` environment variable when it is set.
    pub fn new(ms: Option<u64>) -> Self {
        let env = std::env::var(ENV_VAR).ok().and_then(|v| v.trim().parse::<u64>().ok());
        Budget { start: Instant::now(), limit: env.or(ms).map(Duration::from_millis) }
    }

    /// Ignores the environment.
    pub fn exact(ms: Option<u64>) -> Self {
        Budget { start: Instant::now(), limit: ms.map(Duration::from_millis) }
    }

    pub fn unlimited() -> Self {
        Budget { start: Instant::now(), limit: None }
    }

    pub fn exceeded(&self) -> bool {
        self.limit.is_some_and(|l| self.start.elapsed() >= l)
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        assert!(!Budget::unlimited().exceeded());
        assert!(Budget::exact(Some(0)).exceeded());
        assert!(!Budget::exact(Some(60_000)).exceeded());
    }
}
