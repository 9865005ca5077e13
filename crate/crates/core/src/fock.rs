//! Truncated multi-mode boson Fock space and a small sparse-operator
//! algebra on it.
//!
//! The basis keeps every occupation vector `(n_1, ..., n_m)` with
//! `sum n_i <= n_max`, graded-lexicographically ordered (by total occupation,
//! then lexicographically).  Ladder operators carry the usual amplitudes
//! `a|n> = sqrt(n)|n-1>`, `a^+|n> = sqrt(n+1)|n+1>`; transitions that would
//! leave the truncated space are dropped.  Creation operators are built as
//! the exact conjugate transpose of annihilation operators, so truncation
//! preserves Hermiticity bit for bit.
//!
//! Operator identities on a truncated space only hold away from the
//! boundary: an identity built from operators of total ladder degree `d`
//! is exact on columns (input states) with total occupation
//! `<= n_max - d`.  Verification helpers therefore restrict to such "safe"
//! columns.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// Entries with magnitude below this are dropped after every arithmetic
/// operation; they are floating-point dust, not signal.
pub const DROP_TOL: f64 = 1e-14;

/// Default absolute tolerance for operator identity checks, applied after
/// normalizing by the largest magnitude entering the comparison.
pub const CMP_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FockError {
    #[error("mode index {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("operators live on different bases ({0} vs {1} modes/cutoff)")]
    BasisMismatch(String, String),
    #[error("vector length {got} does not match basis size {want}")]
    VectorLength { got: usize, want: usize },
}

/// Occupation-number basis of `modes` boson modes truncated at total
/// occupation `n_max`.
#[derive(Debug)]
pub struct FockBasis {
    modes: usize,
    n_max: u32,
    states: Vec<Vec<u32>>,
    totals: Vec<u32>,
    index: HashMap<Vec<u32>, u32>,
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes && self.n_max == other.n_max
    }
}

impl FockBasis {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn size(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    /// Total occupation of basis state `i`.
    pub fn total(&self, i: usize) -> u32 {
        self.totals[i]
    }

    pub fn index_of(&self, occ: &[u32]) -> Option<u32> {
        self.index.get(occ).copied()
    }

    fn key(&self) -> String {
        format!("{}@{}", self.modes, self.n_max)
    }
}

/// Enumerate the truncated basis in graded-lexicographic order.
pub fn enumerate_basis(modes: usize, n_max: u32) -> Arc<FockBasis> {
    assert!(modes >= 1, "need at least one mode");
    let mut states = Vec::new();
    let mut prefix = Vec::with_capacity(modes);
    for total in 0..=n_max {
        compositions(total, modes, &mut prefix, &mut states);
    }
    let totals: Vec<u32> = states.iter().map(|s| s.iter().sum()).collect();
    let index = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as u32))
        .collect();
    Arc::new(FockBasis { modes, n_max, states, totals, index })
}

/// Push all compositions of `total` into `modes` parts, lexicographically.
fn compositions(total: u32, modes: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if modes == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(total - first, modes - 1, prefix, out);
        prefix.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Create,
    Annihilate,
}

/// Sparse operator on a truncated Fock basis, stored row-major with columns
/// sorted inside each row.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    basis: Arc<FockBasis>,
    rows: Vec<Vec<(u32, Complex64)>>,
}

impl SparseOperator {
    pub fn zero(basis: &Arc<FockBasis>) -> Self {
        SparseOperator { basis: Arc::clone(basis), rows: vec![Vec::new(); basis.size()] }
    }

    pub fn identity(basis: &Arc<FockBasis>) -> Self {
        let mut op = SparseOperator::zero(basis);
        for r in 0..basis.size() {
            op.rows[r].push((r as u32, Complex64::new(1.0, 0.0)));
        }
        op
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.size()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    fn check_basis(&self, other: &SparseOperator) -> Result<(), FockError> {
        if self.basis != other.basis {
            return Err(FockError::BasisMismatch(self.basis.key(), other.basis.key()));
        }
        Ok(())
    }

    /// Insert `value` at `(row, col)`, accumulating duplicates.
    pub fn add_entry(&mut self, row: u32, col: u32, value: Complex64) {
        let r = &mut self.rows[row as usize];
        match r.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(pos) => {
                r[pos].1 += value;
                if r[pos].1.norm() < DROP_TOL {
                    r.remove(pos);
                }
            }
            Err(pos) => {
                if value.norm() >= DROP_TOL {
                    r.insert(pos, (col, value));
                }
            }
        }
    }

    pub fn entry(&self, row: u32, col: u32) -> Complex64 {
        let r = &self.rows[row as usize];
        match r.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(pos) => r[pos].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn scale(&self, factor: Complex64) -> SparseOperator {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(c, v)| (c, v * factor))
                    .filter(|(_, v)| v.norm() >= DROP_TOL)
                    .collect()
            })
            .collect();
        SparseOperator { basis: Arc::clone(&self.basis), rows }
    }

    pub fn add(&self, other: &SparseOperator) -> Result<SparseOperator, FockError> {
        self.check_basis(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge_rows(a, b, 1.0))
            .collect();
        Ok(SparseOperator { basis: Arc::clone(&self.basis), rows })
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<SparseOperator, FockError> {
        self.check_basis(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge_rows(a, b, -1.0))
            .collect();
        Ok(SparseOperator { basis: Arc::clone(&self.basis), rows })
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn mul(&self, other: &SparseOperator) -> Result<SparseOperator, FockError> {
        self.check_basis(other)?;
        let dim = self.dim();
        let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
        let mut touched: Vec<u32> = Vec::new();
        let mut rows = Vec::with_capacity(dim);
        for a_row in &self.rows {
            for &(k, a) in a_row {
                for &(c, b) in &other.rows[k as usize] {
                    let cell = &mut scratch[c as usize];
                    if cell.norm_sqr() == 0.0 {
                        touched.push(c);
                    }
                    *cell += a * b;
                }
            }
            touched.sort_unstable();
            let mut row = Vec::with_capacity(touched.len());
            for &c in &touched {
                let v = scratch[c as usize];
                scratch[c as usize] = Complex64::new(0.0, 0.0);
                if v.norm() >= DROP_TOL {
                    row.push((c, v));
                }
            }
            touched.clear();
            rows.push(row);
        }
        Ok(SparseOperator { basis: Arc::clone(&self.basis), rows })
    }

    /// Exact conjugate transpose.
    pub fn dagger(&self) -> SparseOperator {
        let mut out = SparseOperator::zero(&self.basis);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                out.rows[c as usize].push((r as u32, v.conj()));
            }
        }
        for row in &mut out.rows {
            row.sort_unstable_by_key(|&(c, _)| c);
        }
        out
    }

    /// Apply to a state vector.
    pub fn apply(&self, vec: &[Complex64]) -> Result<Vec<Complex64>, FockError> {
        if vec.len() != self.dim() {
            return Err(FockError::VectorLength { got: vec.len(), want: self.dim() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(c, v) in row {
                acc += v * vec[c as usize];
            }
            out[r] = acc;
        }
        Ok(out)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|&(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude over columns whose input state has total
    /// occupation `<= max_total` (the safe subspace for identity checks).
    pub fn max_abs_on_safe_columns(&self, max_total: u32) -> f64 {
        let mut best = 0.0f64;
        for row in &self.rows {
            for &(c, v) in row {
                if self.basis.total(c as usize) <= max_total {
                    best = best.max(v.norm());
                }
            }
        }
        best
    }

    /// Entries sorted by `(row, col)` as `(row, col, re, im)` tuples.
    pub fn entries_sorted(&self) -> Vec<(u32, u32, f64, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                out.push((r as u32, c, v.re, v.im));
            }
        }
        out
    }

    /// JSON form: basis parameters plus `(row, col, re, im)` entries sorted
    /// by `(row, col)`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct BasisMeta {
            modes: usize,
            n_max: u32,
        }
        #[derive(Serialize)]
        struct OperatorJson {
            basis: BasisMeta,
            entries: Vec<(u32, u32, f64, f64)>,
        }
        serde_json::to_value(OperatorJson {
            basis: BasisMeta { modes: self.basis.modes(), n_max: self.basis.n_max() },
            entries: self.entries_sorted(),
        })
        .expect("operator serialization cannot fail")
    }
}

fn merge_rows(
    a: &[(u32, Complex64)],
    b: &[(u32, Complex64)],
    b_sign: f64,
) -> Vec<(u32, Complex64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&(ca, va)), Some(&(cb, vb))) => {
                if ca < cb {
                    i += 1;
                    (ca, va)
                } else if cb < ca {
                    j += 1;
                    (cb, vb * b_sign)
                } else {
                    i += 1;
                    j += 1;
                    (ca, va + vb * b_sign)
                }
            }
            (Some(&(ca, va)), None) => {
                i += 1;
                (ca, va)
            }
            (None, Some(&(cb, vb))) => {
                j += 1;
                (cb, vb * b_sign)
            }
            (None, None) => unreachable!(),
        };
        if next.1.norm() >= DROP_TOL {
            out.push(next);
        }
    }
    out
}

/// Single-mode ladder operator on the truncated basis.
pub fn ladder(
    kind: LadderKind,
    mode: usize,
    basis: &Arc<FockBasis>,
) -> Result<SparseOperator, FockError> {
    if mode >= basis.modes() {
        return Err(FockError::ModeOutOfRange { mode, modes: basis.modes() });
    }
    // Build annihilation directly; creation is its exact conjugate
    // transpose, which also implements the truncation rule (transitions
    // leaving the space simply have no transposed entry).
    let mut lower = SparseOperator::zero(basis);
    for (i, s) in basis.states().iter().enumerate() {
        let n = s[mode];
        if n == 0 {
            continue;
        }
        let mut target = s.clone();
        target[mode] -= 1;
        let t = basis.index_of(&target).expect("lowering stays inside the basis");
        lower.add_entry(t, i as u32, Complex64::new(f64::sqrt(n as f64), 0.0));
    }
    Ok(match kind {
        LadderKind::Annihilate => lower,
        LadderKind::Create => lower.dagger(),
    })
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator, FockError> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    ab.sub(&ba)
}

/// Apply an operator to a vector (free-function form of
/// [`SparseOperator::apply`]).
pub fn apply(op: &SparseOperator, vec: &[Complex64]) -> Result<Vec<Complex64>, FockError> {
    op.apply(vec)
}
