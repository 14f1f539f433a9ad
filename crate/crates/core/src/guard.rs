//! Enumeration guards shared by every exhaustive routine.

use crate::{Error, Result};

/// Environment variable overriding [`DEFAULT_LIMIT`].
pub const ENV_VAR: &str = "ROBREDUX_MAX_ENUM";

pub const DEFAULT_LIMIT: u128 = 1 << 30;

pub fn limit() -> u128 {
    std::env::var(ENV_VAR)
        .ok()
        .and_then(|s| s.trim().parse::<u128>().ok())
        .unwrap_or(DEFAULT_LIMIT)
}

pub fn check(what: &'static str, needed: u128) -> Result<()> {
    let limit = limit();
    if needed > limit {
        Err(Error::TooLarge {
            what,
            needed,
            limit,
        })
    } else {
        Ok(())
    }
}

/// 2^bits saturating at `u128::MAX`.
pub fn pow2(bits: usize) -> u128 {
    if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

/// Number of subsets of an `n`-set with at most `k` elements.
pub fn subsets_up_to(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for j in 0..=k.min(n) {
        total = total.saturating_add(term);
        term = term.saturating_mul((n - j) as u128) / (j as u128 + 1);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_sums() {
        assert_eq!(subsets_up_to(5, 0), 1);
        assert_eq!(subsets_up_to(5, 2), 1 + 5 + 10);
        assert_eq!(subsets_up_to(4, 9), 16);
    }
}
