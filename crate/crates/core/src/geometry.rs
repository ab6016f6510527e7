//! Degree-of-freedom counts for `k` states in `n` dimensions.
//!
//! `nu(k, n) = k(2n - 2) - (n^2 - 1)` real parameters fix the states up to a
//! unitary; `tau(k, n) = sum_{i=2}^{n} C(k, i)` volume invariants are available.
//! They agree for `k <= 3` and the invariants over-count beyond.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// One row of the degree-of-freedom table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofEntry {
    pub k: u32,
    pub n: u32,
    pub nu: i64,
    pub tau: u128,
}

/// Reference `(k, n, nu, tau)` values for `2 <= n <= k <= 5`.
pub const REFERENCE_TABLE: [(u32, u32, i64, u128); 10] = [
    (2, 2, 1, 1),
    (3, 2, 3, 3),
    (3, 3, 4, 4),
    (4, 2, 5, 6),
    (4, 3, 8, 10),
    (4, 4, 9, 11),
    (5, 2, 7, 10),
    (5, 3, 12, 20),
    (5, 4, 15, 25),
    (5, 5, 16, 26),
];

/// Real degrees of freedom of `k` states in `n` dimensions modulo unitaries and phases.
pub fn nu(k: u32, n: u32) -> Result<i64> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if k < n {
        return Err(Error::KBelowN { k: k as usize, n: n as usize });
    }
    let (k, n) = (k as i64, n as i64);
    Ok(k * (2 * n - 2) - (n * n - 1))
}

/// Number of volume invariants `alpha_u` with `2 <= |u| <= n`.
pub fn tau(k: u32, n: u32) -> Result<u128> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    if k < n {
        return Err(Error::KBelowN { k: k as usize, n: n as usize });
    }
    let mut total: u128 = 0;
    for i in 2..=n {
        let c = math::binomial(k as u64, i as u64)
            .ok_or_else(|| Error::InvalidArgument("binomial overflow".into()))?;
        total = total
            .checked_add(c)
            .ok_or_else(|| Error::InvalidArgument("tau overflow".into()))?;
    }
    Ok(total)
}

/// All entries with `2 <= n <= k <= k_max`, ordered by `k` then `n`.
pub fn dof_table(k_max: u32) -> Result<Vec<DofEntry>> {
    if k_max < 2 {
        return Err(Error::InvalidArgument("k_max must be at least 2".into()));
    }
    let mut rows = Vec::new();
    for k in 2..=k_max {
        for n in 2..=k {
            rows.push(DofEntry {
                k,
                n,
                nu: nu(k, n)?,
                tau: tau(k, n)?,
            });
        }
    }
    Ok(rows)
}

/// Entries of `table` that disagree with [`REFERENCE_TABLE`] (missing rows count as mismatches).
pub fn reference_mismatches(table: &[DofEntry]) -> Vec<(u32, u32)> {
    REFERENCE_TABLE
        .iter()
        .filter(|&&(k, n, nu, tau)| {
            !table
                .iter()
                .any(|e| e.k == k && e.n == n && e.nu == nu && e.tau == tau)
        })
        .map(|&(k, n, _, _)| (k, n))
        .collect()
}
