//! Representation decompositions of the bound tower: so(4) levels into
//! so(3) angular blocks, the full tower into its so(4) and so(3) content,
//! and the parity split under the ten-generator so(3,2) subalgebra.
//!
//! Each decomposition is computed combinatorially and cross-checked against
//! the explicit Fock realization from [`crate::so42`], so the closed
//! formulas and the operator content certify each other.

use crate::so42::{bracket_residual, inner, AlgebraError, GeneratorSet, LabeledState, GENERATOR_PAIRS};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Branching failures.
#[derive(Debug, Error)]
pub enum BranchingError {
    #[error("only balanced labels (j = k) restrict here; got 2j = {twice_j}, 2k = {twice_k}")]
    UnbalancedLabel { twice_j: u32, twice_k: u32 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An irreducible `(j, k)` label of so(4), stored as twice the spins so
/// half-integers stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct So4Label {
    pub twice_j: u32,
    pub twice_k: u32,
}

fn half_string(twice: u32) -> String {
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        format!("{twice}/2")
    }
}

impl So4Label {
    pub fn new(twice_j: u32, twice_k: u32) -> Self {
        So4Label { twice_j, twice_k }
    }

    /// The `(j, j)` label carried by level `n` of the tower (`2j = n - 1`).
    pub fn balanced(twice_j: u32) -> Self {
        So4Label { twice_j, twice_k: twice_j }
    }

    pub fn is_balanced(&self) -> bool {
        self.twice_j == self.twice_k
    }

    /// `(2j + 1)(2k + 1)`.
    pub fn dimension(&self) -> u64 {
        u64::from(self.twice_j + 1) * u64::from(self.twice_k + 1)
    }
}

impl fmt::Display for So4Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", half_string(self.twice_j), half_string(self.twice_k))
    }
}

/// Restriction of a balanced so(4) label `(j, j)` to so(3): the angular
/// momenta `l = 0, 1, ..., 2j`, each once.  Unbalanced labels are out of
/// scope (the tower only carries balanced ones).
pub fn so4_to_so3(label: So4Label) -> Result<Vec<u32>, BranchingError> {
    if !label.is_balanced() {
        return Err(BranchingError::UnbalancedLabel {
            twice_j: label.twice_j,
            twice_k: label.twice_k,
        });
    }
    Ok((0..=label.twice_j).collect())
}

/// so(4) content of the bound tower through level `n_top`: one balanced
/// label `((n-1)/2, (n-1)/2)` per level `n`.
pub fn tower_so4_content(n_top: u32) -> Vec<So4Label> {
    (1..=n_top).map(|n| So4Label::balanced(n - 1)).collect()
}

/// so(3) content of the bound tower through level `n_top`, as
/// `(l, multiplicity)` pairs: `l` appears once for every level `n > l`,
/// i.e. with multiplicity `n_top - l`.
pub fn tower_so3_content(n_top: u32) -> Vec<(u32, u32)> {
    (0..n_top).map(|l| (l, n_top - l)).collect()
}

/// One line of a branching table.
#[derive(Clone, Debug, Serialize)]
pub struct Constituent {
    pub label: String,
    pub multiplicity: u64,
    pub dim: u64,
}

/// A parent representation with its decomposition, ready for JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct BranchingTable {
    pub parent: String,
    pub constituents: Vec<Constituent>,
}

impl BranchingTable {
    /// Sum of `multiplicity * dim` over the constituents.
    pub fn total_dimension(&self) -> u64 {
        self.constituents.iter().map(|c| c.multiplicity * c.dim).sum()
    }
}

/// Table form of [`so4_to_so3`].
pub fn so4_to_so3_table(label: So4Label) -> Result<BranchingTable, BranchingError> {
    let constituents = so4_to_so3(label)?
        .into_iter()
        .map(|l| Constituent {
            label: format!("l={l}"),
            multiplicity: 1,
            dim: u64::from(2 * l + 1),
        })
        .collect();
    Ok(BranchingTable { parent: format!("so(4) {label}"), constituents })
}

/// Table form of [`tower_so4_content`].
pub fn tower_so4_table(n_top: u32) -> BranchingTable {
    BranchingTable {
        parent: format!("bound tower, levels 1..={n_top}"),
        constituents: tower_so4_content(n_top)
            .into_iter()
            .map(|label| Constituent {
                label: label.to_string(),
                multiplicity: 1,
                dim: label.dimension(),
            })
            .collect(),
    }
}

/// Table form of [`tower_so3_content`].
pub fn tower_so3_table(n_top: u32) -> BranchingTable {
    BranchingTable {
        parent: format!("bound tower, levels 1..={n_top}"),
        constituents: tower_so3_content(n_top)
            .into_iter()
            .map(|(l, mult)| Constituent {
                label: format!("l={l}"),
                multiplicity: u64::from(mult),
                dim: u64::from(2 * l + 1),
            })
            .collect(),
    }
}

/// Outcome of the parity-split check for the ten-generator subalgebra with
/// indices in `{1, 2, 3, 5, 6}` (index 4 dropped; restricted metric
/// signature (-, -, -, +, +)).
#[derive(Clone, Debug, Serialize)]
pub struct ParitySplit {
    /// Worst normalized bracket residual among the 45 subalgebra pairs.
    pub closure_max_residual: f64,
    /// Worst fraction of norm leaked to opposite `(n + l)` parity by the ten
    /// generators.
    pub parity_leak: f64,
    /// Smallest opposite-parity fraction produced by the excluded generator
    /// `J_14` (expected close to 1: it flips the parity).
    pub control_leak: f64,
}

/// Check that the ten generators avoiding index 4 close among themselves and
/// preserve the parity of `n + l`, while the excluded Runge-Lenz component
/// flips it.
pub fn so32_parity_split(
    gen: &GeneratorSet,
    states: &[LabeledState],
    tol: f64,
) -> Result<ParitySplit, AlgebraError> {
    let sub: Vec<(u8, u8)> = GENERATOR_PAIRS
        .iter()
        .copied()
        .filter(|&(a, b)| a != 4 && b != 4)
        .collect();
    assert_eq!(sub.len(), 10);

    let mut closure_max = 0.0f64;
    for (idx, &l) in sub.iter().enumerate() {
        for &r in &sub[idx + 1..] {
            closure_max = closure_max.max(bracket_residual(gen, l, r)?);
        }
    }

    let n_top = states.iter().map(|s| s.n).max().unwrap_or(0);
    if n_top < 2 {
        return Err(AlgebraError::Labeling(
            "the parity check needs labeled states through at least level 2".into(),
        ));
    }
    let mut parity_leak = 0.0f64;
    let mut control_leak = f64::INFINITY;
    let mut checked_control = false;
    for (pairs, is_control) in [(sub.as_slice(), false), (&[(1u8, 4u8)][..], true)] {
        for &(a, b) in pairs {
            let op = gen.op(a, b)?;
            for s in states.iter().filter(|s| s.n < n_top) {
                let w = op.apply(&s.vector)?;
                let total = inner(&w, &w).re;
                if total < tol {
                    continue;
                }
                let mut same = 0.0;
                let mut opposite = 0.0;
                for t in states.iter().filter(|t| t.n.abs_diff(s.n) <= 1) {
                    let amp = inner(&t.vector, &w).norm_sqr();
                    if (t.n + t.l) % 2 == (s.n + s.l) % 2 {
                        same += amp;
                    } else {
                        opposite += amp;
                    }
                }
                if (total - same - opposite).abs() > tol * total.max(1.0) {
                    return Err(AlgebraError::Labeling(format!(
                        "J{a}{b} moved ({}, {}, {}) beyond the neighboring levels",
                        s.n, s.l, s.m
                    )));
                }
                let frac = (opposite / total).sqrt();
                if is_control {
                    control_leak = control_leak.min(frac);
                    checked_control = true;
                } else {
                    parity_leak = parity_leak.max(frac);
                }
            }
        }
    }
    if !checked_control {
        return Err(AlgebraError::Labeling(
            "the excluded generator never produced a nonzero image".into(),
        ));
    }
    Ok(ParitySplit { closure_max_residual: closure_max, parity_leak, control_leak })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so42::label_states;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    #[test]
    fn balanced_restriction_enumerates_each_l_once() {
        assert_eq!(so4_to_so3(So4Label::balanced(0)).unwrap(), vec![0]);
        assert_eq!(so4_to_so3(So4Label::balanced(2)).unwrap(), vec![0, 1, 2]);
        let spin_three_halves = so4_to_so3(So4Label::balanced(3)).unwrap();
        let dims: u64 = spin_three_halves.iter().map(|&l| u64::from(2 * l + 1)).sum();
        assert_eq!(dims, 16);
    }

    #[test]
    fn unbalanced_labels_are_rejected() {
        let err = so4_to_so3(So4Label::new(2, 4)).unwrap_err();
        assert!(matches!(err, BranchingError::UnbalancedLabel { twice_j: 2, twice_k: 4 }));
    }

    #[test]
    fn labels_render_halves_exactly() {
        assert_eq!(So4Label::balanced(0).to_string(), "(0, 0)");
        assert_eq!(So4Label::balanced(1).to_string(), "(1/2, 1/2)");
        assert_eq!(So4Label::balanced(2).to_string(), "(1, 1)");
        assert_eq!(So4Label::new(3, 4).to_string(), "(3/2, 2)");
    }

    #[test]
    fn tower_so4_content_is_one_balanced_label_per_level() {
        assert_eq!(tower_so4_content(1), vec![So4Label::balanced(0)]);
        assert_eq!(
            tower_so4_content(3),
            vec![So4Label::balanced(0), So4Label::balanced(1), So4Label::balanced(2)]
        );
        let total: u64 = tower_so4_content(4).iter().map(So4Label::dimension).sum();
        assert_eq!(total, 30);
    }

    #[test]
    fn tower_so3_content_counts_levels_above_l() {
        assert_eq!(tower_so3_content(1), vec![(0, 1)]);
        assert_eq!(tower_so3_content(3), vec![(0, 3), (1, 2), (2, 1)]);
    }

    #[test]
    fn branching_tables_conserve_dimension() {
        for n_top in 1..=8u32 {
            let tower: u64 = (1..=u64::from(n_top)).map(|n| n * n).sum();
            assert_eq!(tower_so4_table(n_top).total_dimension(), tower);
            assert_eq!(tower_so3_table(n_top).total_dimension(), tower);
        }
        let table = so4_to_so3_table(So4Label::balanced(3)).unwrap();
        assert_eq!(table.total_dimension(), So4Label::balanced(3).dimension());
        assert_eq!(table.parent, "so(4) (3/2, 3/2)");
    }

    #[test]
    fn combinatorial_content_matches_the_operator_labeling() {
        // Cross-module oracle: the (n, l, m) labels computed by explicit
        // diagonalization of the realized generators must reproduce both
        // decompositions through level 4.
        let gen = GeneratorSet::build(8).unwrap();
        let states = label_states(&gen, 4, 1e-8).unwrap();
        let mut level_sizes = BTreeMap::new();
        let mut l_counts = BTreeMap::new();
        for s in &states {
            *level_sizes.entry(s.n).or_insert(0u64) += 1;
            if s.m == 0 {
                // one so(3) block per (n, l), counted once at m = 0
                *l_counts.entry(s.l).or_insert(0u32) += 1;
            }
        }
        for label in tower_so4_content(4) {
            let n = label.twice_j + 1;
            assert_eq!(level_sizes[&n], label.dimension(), "level {n}");
            let ls = so4_to_so3(label).unwrap();
            let present: Vec<u32> =
                states.iter().filter(|s| s.n == n && s.m == 0).map(|s| s.l).collect();
            assert_eq!(present, ls, "so(3) blocks inside level {n}");
        }
        let expected: BTreeMap<u32, u32> = tower_so3_content(4).into_iter().collect();
        assert_eq!(l_counts, expected);
    }

    #[test]
    fn index_four_split_preserves_parity() {
        let gen = GeneratorSet::build(8).unwrap();
        let states = label_states(&gen, 5, 1e-8).unwrap();
        let split = so32_parity_split(&gen, &states, 1e-8).unwrap();
        assert!(split.closure_max_residual < 1e-12);
        assert!(split.parity_leak < 1e-8, "parity leak {}", split.parity_leak);
        assert!(split.control_leak > 0.99, "control leak {}", split.control_leak);
    }

    proptest! {
        /// Dimension conservation for the balanced restriction.
        #[test]
        fn restriction_conserves_dimension(twice_j in 0u32..=20) {
            let label = So4Label::balanced(twice_j);
            let total: u64 = so4_to_so3(label)
                .unwrap()
                .iter()
                .map(|&l| u64::from(2 * l + 1))
                .sum();
            prop_assert_eq!(total, label.dimension());
        }

        /// The two tower decompositions always account for the same states.
        #[test]
        fn tower_decompositions_agree(n_top in 1u32..=30) {
            let by_levels: u64 = tower_so4_content(n_top).iter().map(So4Label::dimension).sum();
            let by_l: u64 = tower_so3_content(n_top)
                .iter()
                .map(|&(l, mult)| u64::from(mult) * u64::from(2 * l + 1))
                .sum();
            prop_assert_eq!(by_levels, by_l);
        }
    }
}
