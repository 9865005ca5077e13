//! Computational engine for the so(4,2) dynamical symmetry of the
//! hydrogen-like atom.
//!
//! The crate builds the fifteen generators of so(4,2) as bilinears in four
//! boson modes (two Schwinger pairs), verifies the commutation table against
//! the metric `g = diag(-1,-1,-1,-1,+1,+1)`, evaluates the three invariant
//! operators on the bound-state tower, and derives the same algebra a second
//! way: as the centralizer of the Kustaanheimo-Stiefel fiber rotation inside
//! sp(8,R), computed in exact rational arithmetic.  Around that core sit the
//! closed-form spectrum/degeneracy formulas in N dimensions, SO(4) -> SO(3)
//! branching, the KS map itself, and the Madelung construction of the
//! periodic chart.
//!
//! Modules:
//! - [`fock`]: truncated multi-mode Fock space, ladder operators, sparse
//!   operator algebra.
//! - [`exact`]: rational-complex scalars and exact linear algebra (kernels,
//!   solving, signatures of symmetric forms).
//! - [`bilinear`]: symbolic normal-ordered boson bilinears, their bracket,
//!   the sp(8,R) basis, structure constants, and the Fock realization map.
//! - [`so42`]: the fifteen generators, commutator verification, Casimir
//!   operators, physical-subspace labeling, and lowest-state orbit spans.
//! - [`constraint`]: centralizers, quotients, Killing forms, rank, and
//!   invariant matching for structure-constant tensors.
//! - [`spectrum`]: hydrogen and oscillator energies/degeneracies in N
//!   dimensions and the 4-oscillator/hydrogen state-count bridge.
//! - [`branching`]: SO(4) -> SO(3) reduction of the bound-state content and
//!   the so(3,2) parity split.
//! - [`ks`]: the Kustaanheimo-Stiefel quadratic map, its fiber circle, and
//!   the constraint 1-form.
//! - [`chart`]: Madelung (n+l, n) ordering, electron configurations, chart
//!   rows, and the commuting-set census.

pub mod bilinear;
pub mod branching;
pub mod chart;
pub mod constraint;
pub mod exact;
pub mod fock;
pub mod ks;
pub mod so42;
pub mod spectrum;
