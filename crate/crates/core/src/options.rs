use serde::Serialize;

/// Default cap on the number of morphisms any single scan may visit.
pub const DEFAULT_HOM_BUDGET: u64 = 1 << 25;

/// Environment variable overriding [`DEFAULT_HOM_BUDGET`].
pub const BUDGET_ENV: &str = "ABELKIT_HOM_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Options {
    pub budget: u64,
    /// Run every decider that has two independent paths down both and fail
    /// loudly if they disagree.
    pub paranoid: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            budget: DEFAULT_HOM_BUDGET,
            paranoid: false,
        }
    }
}

impl Options {
    pub fn with_budget(budget: u64) -> Self {
        Options {
            budget,
            ..Self::default()
        }
    }

    pub fn paranoid(mut self, on: bool) -> Self {
        self.paranoid = on;
        self
    }

    /// Defaults, with the budget taken from the environment when set.
    pub fn from_env() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_HOM_BUDGET);
        Options::with_budget(budget)
    }
}
