//! Closed-form query bounds. Half-integer expressions are evaluated over
//! integers with an explicit denominator of two; no floating point.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("bound requires n >= 2, got n = {0}")]
    TooSmall(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundName {
    /// Lie-free max and min: `ceil(3n/2) - 2`.
    PohlMaxMin,
    /// Maximum with `k` lies: `(k+1)n - 1`.
    RglMax,
    /// Max and min with `k` lies, lower bound `ceil((k+1.5)(n-1) - 0.5)`.
    Thm1MaxMinLower,
    /// Any nontrivial search with `k` lies needs `2k + 1` queries.
    Corollary2kPlus1,
}

impl BoundName {
    pub fn evaluate(self, n: u64, k: u64) -> Result<u64, BoundError> {
        match self {
            BoundName::PohlMaxMin => pohl(n),
            BoundName::RglMax => Ok(rgl_max(n, k)),
            BoundName::Thm1MaxMinLower => thm1_lower(n, k),
            BoundName::Corollary2kPlus1 => Ok(2 * k + 1),
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundName::PohlMaxMin => "pohl",
            BoundName::RglMax => "rgl_max",
            BoundName::Thm1MaxMinLower => "thm1_lower",
            BoundName::Corollary2kPlus1 => "corollary_2k_plus_1",
        })
    }
}

/// `ceil(numerator / 2)` for a non-negative numerator.
fn ceil_half(numerator: u64) -> u64 {
    numerator.div_ceil(2)
}

pub fn pohl(n: u64) -> Result<u64, BoundError> {
    if n < 2 {
        return Err(BoundError::TooSmall(n));
    }
    Ok(ceil_half(3 * n) - 2)
}

/// `(k+1)n - 1`, except that a single element needs no queries.
pub fn rgl_max(n: u64, k: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        (k + 1) * n - 1
    }
}

/// `ceil((k+1.5)(n-1) - 0.5) = ceil(((2k+3)(n-1) - 1) / 2)`.
pub fn thm1_lower(n: u64, k: u64) -> Result<u64, BoundError> {
    if n < 2 {
        return Err(BoundError::TooSmall(n));
    }
    Ok(ceil_half((2 * k + 3) * (n - 1) - 1))
}

/// `ceil((k+1.5)n) - k - 2`, the alternative closed form.
pub fn thm1_alternative_form(n: u64, k: u64) -> u64 {
    ceil_half((2 * k + 3) * n) - k - 2
}

pub fn thm1_identity_check(n: u64, k: u64) -> bool {
    match thm1_lower(n, k) {
        Ok(lower) => lower == thm1_alternative_form(n, k),
        Err(_) => false,
    }
}

/// One row of the bounds table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundRow {
    pub n: u64,
    pub k: u64,
    pub pohl: u64,
    pub rgl_max: u64,
    pub thm1_lower: u64,
    pub identity_ok: bool,
}

pub fn bound_table(n_max: u64, k_max: u64) -> Vec<BoundRow> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        for k in 0..=k_max {
            rows.push(BoundRow {
                n,
                k,
                pohl: pohl(n).expect("n >= 2"),
                rgl_max: rgl_max(n, k),
                thm1_lower: thm1_lower(n, k).expect("n >= 2"),
                identity_ok: thm1_identity_check(n, k),
            });
        }
    }
    rows
}

/// Result of auditing the alternative closed form over a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityAudit {
    pub points_checked: usize,
    /// `(n, k, thm1_lower, alternative form)` wherever the two disagree.
    pub false_points: Vec<(u64, u64, u64, u64)>,
    /// Even `n` where `thm1_lower(n, 0) != pohl(n)`.
    pub pohl_mismatches: Vec<u64>,
}

pub fn identity_audit(n_range: std::ops::RangeInclusive<u64>, k_max: u64) -> IdentityAudit {
    let mut audit = IdentityAudit {
        points_checked: 0,
        false_points: Vec::new(),
        pohl_mismatches: Vec::new(),
    };
    for n in n_range.filter(|&n| n >= 2) {
        for k in 0..=k_max {
            audit.points_checked += 1;
            if !thm1_identity_check(n, k) {
                let lower = thm1_lower(n, k).expect("n >= 2");
                audit
                    .false_points
                    .push((n, k, lower, thm1_alternative_form(n, k)));
            }
        }
        if n % 2 == 0 && thm1_lower(n, 0) != pohl(n) {
            audit.pohl_mismatches.push(n);
        }
    }
    audit
}
