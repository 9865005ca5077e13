//! Periodic-chart bookkeeping on top of the tower's quantum numbers:
//! Madelung subshell ordering, chart rows of `2n^2` slots, element-to-slot
//! assignment, and the commuting-operator census for the product of the
//! conformal-type algebra with spin su(2).

use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Domain violations of the commuting-count formula.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChartError {
    #[error("commuting-count formula needs order >= 3*rank; got order {order}, rank {rank}")]
    OrderBelowRank { order: u32, rank: u32 },
    #[error("order - 3*rank must be even; got order {order}, rank {rank}")]
    OddParity { order: u32, rank: u32 },
}

/// One `(n, l)` subshell; holds `2(2l+1)` spin-orbitals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Subshell {
    pub n: u32,
    pub l: u32,
}

const ORBITAL_LETTERS: [char; 8] = ['s', 'p', 'd', 'f', 'g', 'h', 'i', 'k'];

impl Subshell {
    pub fn new(n: u32, l: u32) -> Self {
        assert!(n >= 1 && l < n, "subshell needs 1 <= l + 1 <= n, got n = {n}, l = {l}");
        Subshell { n, l }
    }

    /// `2(2l + 1)`.
    pub fn capacity(&self) -> u32 {
        2 * (2 * self.l + 1)
    }
}

impl fmt::Display for Subshell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match ORBITAL_LETTERS.get(self.l as usize) {
            Some(letter) => write!(f, "{}{}", self.n, letter),
            None => write!(f, "{}(l={})", self.n, self.l),
        }
    }
}

/// All subshells in Madelung order: `(n + l)` ascending, ties broken by
/// `n` ascending.  The stream is infinite; callers truncate.
fn subshell_stream() -> impl Iterator<Item = Subshell> {
    (1u32..).flat_map(|s| ((s + 1).div_ceil(2)..=s).map(move |n| Subshell::new(n, s - n)))
}

/// First `count` subshells in Madelung order.
pub fn madelung_sequence(count: usize) -> Vec<Subshell> {
    subshell_stream().take(count).collect()
}

/// One occupied chart slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChartEntry {
    #[serde(rename = "Z")]
    pub z: u32,
    pub n: u32,
    pub l: u32,
    pub m: i32,
    /// Twice the spin projection: -1 or +1.
    pub two_m_s: i8,
    /// Chart row = n; one row may span several chemical periods.
    pub chart_row: u32,
    /// Zero-based position of the subshell in the Madelung sequence.
    pub madelung_index: u32,
}

/// CSV header matching [`ChartEntry::csv_line`].
pub const CSV_HEADER: &str = "Z,n,l,m,two_m_s,chart_row,madelung_index";

impl ChartEntry {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.z, self.n, self.l, self.m, self.two_m_s, self.chart_row, self.madelung_index
        )
    }
}

/// Assign element numbers `1..=z_max` to slots in Madelung order; within a
/// subshell `m` runs ascending and the spin slot `m_s = -1/2` fills before
/// `m_s = +1/2` (a fixed convention, echoed in output metadata).
pub fn assign_elements(z_max: u32) -> Vec<ChartEntry> {
    let mut out = Vec::with_capacity(z_max as usize);
    let mut z = 0u32;
    for (index, shell) in subshell_stream().enumerate() {
        for m in -(shell.l as i32)..=(shell.l as i32) {
            for two_m_s in [-1i8, 1] {
                if z == z_max {
                    return out;
                }
                z += 1;
                out.push(ChartEntry {
                    z,
                    n: shell.n,
                    l: shell.l,
                    m,
                    two_m_s,
                    chart_row: shell.n,
                    madelung_index: index as u32,
                });
            }
        }
    }
    unreachable!("the subshell stream is infinite")
}

/// Sizes of the first `n_rows` chart rows: row `n` holds `2n^2` slots.
pub fn chart_rows(n_rows: u32) -> Vec<u64> {
    (1..=u64::from(n_rows)).map(|n| 2 * n * n).collect()
}

/// Element numbers at which chemical periods close (cumulative capacity
/// after `1s` and after each `p` subshell), up to `z_max`.
pub fn period_boundaries(z_max: u32) -> Vec<u32> {
    let mut boundaries = Vec::new();
    let mut filled = 0u32;
    for shell in subshell_stream() {
        if filled >= z_max {
            break;
        }
        filled += shell.capacity();
        if (shell.l == 1 || (shell.n == 1 && shell.l == 0)) && filled <= z_max {
            boundaries.push(filled);
        }
    }
    boundaries
}

/// Number of additional commuting operators needed beyond the Cartan and
/// Casimir families: `(order - 3 * rank) / 2`.
pub fn racah_count(order: u32, rank: u32) -> Result<u32, ChartError> {
    if order < 3 * rank {
        return Err(ChartError::OrderBelowRank { order, rank });
    }
    if (order - 3 * rank) % 2 != 0 {
        return Err(ChartError::OddParity { order, rank });
    }
    Ok((order - 3 * rank) / 2)
}

/// Commuting-operator bookkeeping for one simple factor.
#[derive(Clone, Debug, Serialize)]
pub struct CensusComponent {
    pub algebra: String,
    pub order: u32,
    pub rank: u32,
    pub cartan: u32,
    pub casimir: u32,
    pub racah: u32,
    pub subtotal: u32,
}

impl CensusComponent {
    fn new(algebra: &str, order: u32, rank: u32) -> Self {
        let racah = racah_count(order, rank).expect("census components are in-domain");
        CensusComponent {
            algebra: algebra.to_string(),
            order,
            rank,
            cartan: rank,
            casimir: rank,
            racah,
            subtotal: 2 * rank + racah,
        }
    }
}

/// The full labeling census for the chart group.
#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub components: Vec<CensusComponent>,
    pub total: u32,
}

/// Count the commuting operators that label a chart slot: the rank-3,
/// order-15 conformal-type factor contributes 3 Cartan + 3 Casimir +
/// 3 additional, spin su(2) contributes 1 + 1 + 0, eleven in all.
pub fn commuting_set_census() -> Census {
    let components =
        vec![CensusComponent::new("so(4,2)", 15, 3), CensusComponent::new("su(2)", 3, 1)];
    let total = components.iter().map(|c| c.subtotal).sum();
    Census { components, total }
}

/// JSON chart: conventions metadata plus per-row entry arrays.
pub fn chart_json(z_max: u32) -> serde_json::Value {
    let entries = assign_elements(z_max);
    let mut rows: Vec<serde_json::Value> = Vec::new();
    let max_row = entries.iter().map(|e| e.chart_row).max().unwrap_or(0);
    for n in 1..=max_row {
        let members: Vec<&ChartEntry> =
            entries.iter().filter(|e| e.chart_row == n).collect();
        rows.push(serde_json::json!({
            "row": n,
            "size_limit": 2 * u64::from(n) * u64::from(n),
            "occupied": members.len(),
            "entries": members,
        }));
    }
    serde_json::json!({
        "conventions": {
            "row_index": "principal quantum number n (a row may span several chemical periods)",
            "column_key": "(l, m, m_s)",
            "spin_order": "m_s = -1/2 fills before m_s = +1/2",
            "fiber_orientation": "(exp(i theta), exp(-i theta))",
        },
        "period_boundaries": period_boundaries(z_max),
        "rows": rows,
    })
}
