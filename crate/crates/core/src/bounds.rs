//! Lower bounds on `d(n, k)`, the largest shortest-reset-word length over
//! synchronizing basic DFAs with `n` states and `k` symbols.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::families::padding_bound;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSource {
    /// `C_{n-m}` padded with `m` extra states.
    Padding,
    /// The five-symbol family and its restrictions, `k = 3, 4, 5`.
    AlphabetFamily,
    /// `C_{n-1}` plus one extra state that lengthens the word by one, `k = 3`.
    ExtraState,
    /// The `k`-symbol family on `n - 1` states padded with one state.
    PaddedFamily { base_alphabet: usize },
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundSource::Padding => write!(f, "padded Cerny automaton"),
            BoundSource::AlphabetFamily => write!(f, "alphabet-size family"),
            BoundSource::ExtraState => write!(f, "Cerny automaton with an extra state"),
            BoundSource::PaddedFamily { base_alphabet } => {
                write!(f, "{base_alphabet}-symbol family padded by one state")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundLine {
    pub source: BoundSource,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub n: usize,
    pub k: u64,
    pub lines: Vec<BoundLine>,
    /// Exact value where enumeration data is available.
    pub known: Option<u64>,
}

impl BoundsReport {
    pub fn best(&self) -> Option<u64> {
        self.lines.iter().map(|l| l.value).max()
    }
}

/// `n^2 - 3n + c` for the family restricted to `k` symbols.
fn family_value(n: u64, k: u64) -> Option<u64> {
    let extra = match k {
        3 => 4,
        4 => 3,
        5 => 2,
        _ => return None,
    };
    Some(n * n - 3 * n + extra)
}

/// Every applicable lower bound for `d(n, k)`.
pub fn lower_bounds(n: usize, k: u64) -> Result<BoundsReport> {
    if n < 2 {
        return Err(Error::invalid(format!("need n >= 2, got {n}")));
    }
    if k == 0 {
        return Err(Error::invalid("alphabet size must be positive"));
    }
    let nu = n as u64;
    let mut lines = Vec::new();
    if let Ok(v) = padding_bound(n, &BigUint::from(k)) {
        lines.push(BoundLine {
            source: BoundSource::Padding,
            value: v,
        });
    }
    if n >= 3 {
        if let Some(v) = family_value(nu, k) {
            lines.push(BoundLine {
                source: BoundSource::AlphabetFamily,
                value: v,
            });
        }
        if k == 3 {
            lines.push(BoundLine {
                source: BoundSource::ExtraState,
                value: (nu - 2) * (nu - 2) + 1,
            });
        }
    }
    // The j-symbol family on n - 1 >= 3 states, padded by one state, keeps
    // its length for every alphabet size j..=(j + 1) n - 1.
    if n >= 4 {
        let best = (3..=5u64)
            .filter(|&j| j <= k && k < (j + 1) * nu)
            .filter_map(|j| family_value(nu - 1, j).map(|v| (j, v)))
            .max_by_key(|&(_, v)| v);
        if let Some((j, v)) = best {
            lines.push(BoundLine {
                source: BoundSource::PaddedFamily {
                    base_alphabet: j as usize,
                },
                value: v,
            });
        }
    }
    Ok(BoundsReport {
        n,
        k,
        lines,
        known: known_max_length(n, k),
    })
}

/// Exact `d(n, k)` from exhaustive enumeration, for `n <= 6` and the
/// alphabet sizes where it has been determined.
pub fn known_max_length(n: usize, k: u64) -> Option<u64> {
    // (largest k of the run, value), runs in increasing k starting at 1.
    let runs: &[(u64, u64)] = match n {
        2 => &[(3, 1)],
        3 => &[(1, 2), (5, 4), (9, 3), (23, 2), (26, 1)],
        4 => &[(1, 3), (5, 9), (8, 8), (17, 7), (41, 5)],
        5 => &[
            (1, 4),
            (3, 16),
            (6, 15),
            (13, 14),
            (15, 13),
            (23, 12),
            (29, 11),
            (41, 10),
        ],
        6 => &[
            (1, 5),
            (2, 25),
            (3, 23),
            (11, 22),
            (15, 21),
            (21, 20),
            (41, 19),
        ],
        _ => return None,
    };
    runs.iter().find(|&&(last, _)| k <= last).map(|&(_, v)| v)
}
