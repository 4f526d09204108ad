use crate::poly::DEFAULT_SEED;

/// Knobs shared by the search and enumeration routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Seed for randomized polynomial factorization. Results do not depend on it.
    pub seed: u64,
    /// Upper bound on enumeration work for the brute-force oracle.
    pub budget: u128,
    /// Largest `p` for which the four-parameter substitution search runs.
    pub lemma2_bound: u32,
}

pub const DEFAULT_BUDGET: u128 = 10_000_000;
pub const DEFAULT_LEMMA2_BOUND: u32 = 13;

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: DEFAULT_SEED,
            budget: DEFAULT_BUDGET,
            lemma2_bound: DEFAULT_LEMMA2_BOUND,
        }
    }
}
