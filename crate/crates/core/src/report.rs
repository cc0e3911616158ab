//! Per-check accumulators and deterministic per-trial seeding.

/// Default relative slack in the violation rule `ratio > cap · (1 + slack)`.
pub const DEFAULT_SLACK: f64 = 1e-10;

/// Running worst case of one check over a batch of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub trials: usize,
    pub max_ratio: f64,
    pub cap: f64,
    pub slack: f64,
    pub violations: usize,
    pub worst_seed: u64,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, cap: f64) -> Self {
        Self::with_slack(name, cap, DEFAULT_SLACK)
    }

    pub fn with_slack(name: impl Into<String>, cap: f64, slack: f64) -> Self {
        CheckRecord {
            name: name.into(),
            trials: 0,
            max_ratio: f64::NEG_INFINITY,
            cap,
            slack,
            violations: 0,
            worst_seed: 0,
        }
    }

    pub fn violates(&self, ratio: f64) -> bool {
        !(ratio <= self.cap * (1.0 + self.slack))
    }

    /// Adds one trial. NaN ratios count as violations.
    pub fn record(&mut self, ratio: f64, seed: u64) {
        self.trials += 1;
        if self.violates(ratio) {
            self.violations += 1;
        }
        if ratio > self.max_ratio || (ratio.is_nan() && !self.max_ratio.is_nan()) || self.trials == 1 {
            self.max_ratio = ratio;
            self.worst_seed = seed;
        }
    }

    /// Combines two records of the same check. Ties in `max_ratio` keep the
    /// smaller seed, so merging is order-independent.
    pub fn merge(&mut self, other: &CheckRecord) {
        if other.trials == 0 {
            return;
        }
        if self.trials == 0
            || other.max_ratio > self.max_ratio
            || (other.max_ratio == self.max_ratio && other.worst_seed < self.worst_seed)
        {
            self.max_ratio = other.max_ratio;
            self.worst_seed = other.worst_seed;
        }
        self.trials += other.trials;
        self.violations += other.violations;
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable seed for trial `index` of the check labelled `label` under `base`.
pub fn trial_seed(base: u64, label: &str, index: u64) -> u64 {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(splitmix64(base ^ h).wrapping_add(index))
}
