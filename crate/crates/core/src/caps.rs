//! Size caps for the exponential enumerations. Everything here is
//! configurable; the defaults keep desk-scale runs fast and refuse
//! anything that would blow up.

/// Enumeration limits threaded through the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest monoid any operation accepts.
    pub monoid_size: usize,
    /// Largest |H| and |N| for a full classification run.
    pub classify_size: usize,
    /// Largest |H| for the raw cosetal-extension oracle, which scans
    /// |N|^(|H|^2) factor-set tables.
    pub oracle_h_size: usize,
    /// Upper bound on candidate tables visited by a single enumeration.
    pub enumeration_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            monoid_size: crate::monoid::DEFAULT_SIZE_CAP,
            classify_size: 4,
            oracle_h_size: 3,
            enumeration_budget: 20_000_000,
        }
    }
}

impl Caps {
    /// Caps with every limit raised to `size` (used by `--max-size`).
    pub fn with_max_size(size: usize) -> Self {
        Caps {
            monoid_size: size.max(crate::monoid::DEFAULT_SIZE_CAP),
            classify_size: size,
            oracle_h_size: size,
            ..Caps::default()
        }
    }
}
