//! Exact symmetry descent for Lie algebras given by rational structure
//! constants: centralizers, central quotients, Killing forms, rank, and
//! invariant-based isomorphism certificates.
//!
//! The flagship computation ([`fiber_descent`]) starts from the
//! 36-dimensional algebra of symmetrized boson bilinears in four modes
//! ([`sp8_basis`]), takes the centralizer of the quantized
//! Kustaanheimo-Stiefel fiber rotation ([`fiber_rotation`]), and quotients
//! by the rotation itself.  The result is a 15-dimensional simple algebra
//! whose exact invariants — Killing signature `(8, 7, 0)`, rank 3, trivial
//! center — match the canonical 6x6 matrix algebra preserving a quadratic
//! form of signature (4, 2), i.e. su(2,2) ~ so(4,2).
//!
//! Every rank, kernel, and signature decision in this module is exact
//! rational arithmetic; floating point never enters.

use crate::bilinear::{
    expand_in_basis, fiber_rotation, sp8_basis, structure_constants, BilinearError, BilinearForm,
    StructureConstants,
};
use crate::exact::{symmetric_signature, LinSolver, Rat, RatC, RatMat};
use crate::so42::{Metric, GENERATOR_PAIRS};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Failures of the descent machinery.
#[derive(Debug, Error)]
pub enum ConstraintError {
    #[error("element has {got} coordinates but the algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero element is not a valid constraint generator")]
    ZeroElement,
    #[error("basis vectors are linearly dependent (rank {rank} of {count})")]
    DependentVectors { rank: usize, count: usize },
    #[error("bracket of subalgebra basis elements {i} and {j} escapes their span")]
    NotClosed { i: usize, j: usize },
    #[error("ideal vector {index} lies outside the subalgebra")]
    OutsideSubalgebra { index: usize },
    #[error("ideal vector {index} is not central in the subalgebra")]
    NotCentral { index: usize },
    #[error("Killing form is degenerate ({zero_directions} null directions); rank needs a semisimple algebra")]
    DegenerateKilling { zero_directions: usize },
    #[error("element does not lie in the real span of the basis")]
    OutsideRealSpan,
    #[error(transparent)]
    Bilinear(#[from] BilinearError),
}

fn complex_vec(v: &[Rat]) -> Vec<RatC> {
    v.iter().map(|r| RatC::new(r.clone(), Rat::zero())).collect()
}

fn real_vec(v: &[RatC]) -> Option<Vec<Rat>> {
    v.iter().map(|c| c.is_real().then(|| c.re.clone())).collect()
}

/// Columns-are-basis-vectors matrix for membership solves.
fn basis_columns(vectors: &[Vec<Rat>], ambient_dim: usize) -> RatMat {
    let mut m = RatMat::zeros(ambient_dim, vectors.len());
    for (col, v) in vectors.iter().enumerate() {
        for (row, x) in v.iter().enumerate() {
            *m.at_mut(row, col) = RatC::new(x.clone(), Rat::zero());
        }
    }
    m
}

/// A bracket-closed subspace of a parent algebra, carrying its own
/// structure constants in the given basis.
///
/// Construction proves the two defining invariants exactly: the basis
/// vectors are linearly independent, and every pairwise bracket stays in
/// their span.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    parent: StructureConstants,
    basis_vectors: Vec<Vec<Rat>>,
    restricted: StructureConstants,
}

impl Subalgebra {
    /// Wrap `basis_vectors` (coordinates in the parent basis) as a
    /// subalgebra, verifying independence and closure and computing the
    /// restricted structure constants.
    ///
    /// A basis vector proportional to a single parent basis element keeps
    /// that element's label; mixed directions are labeled `v{index}`.
    pub fn new(
        parent: StructureConstants,
        basis_vectors: Vec<Vec<Rat>>,
    ) -> Result<Self, ConstraintError> {
        let ambient = parent.dim();
        for v in &basis_vectors {
            if v.len() != ambient {
                return Err(ConstraintError::DimensionMismatch { expected: ambient, got: v.len() });
            }
        }
        let k = basis_vectors.len();
        let columns = basis_columns(&basis_vectors, ambient);
        let solver = LinSolver::new(&columns);
        if solver.rank() != k {
            return Err(ConstraintError::DependentVectors { rank: solver.rank(), count: k });
        }
        let labels: Vec<String> = basis_vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let nonzero: Vec<usize> =
                    (0..ambient).filter(|&j| !v[j].is_zero()).collect();
                match nonzero.as_slice() {
                    [j] => parent.labels()[*j].clone(),
                    _ => format!("v{i}"),
                }
            })
            .collect();
        let mut dense = vec![vec![vec![Rat::zero(); k]; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                let w = parent.bracket_vec(&basis_vectors[i], &basis_vectors[j]);
                let coords = solver
                    .solve(&complex_vec(&w))
                    .and_then(|c| real_vec(&c))
                    .ok_or(ConstraintError::NotClosed { i, j })?;
                for (m, x) in coords.into_iter().enumerate() {
                    dense[i][j][m] = x.clone();
                    dense[j][i][m] = -x;
                }
            }
        }
        let restricted = StructureConstants::new(labels, dense)?;
        Ok(Subalgebra { parent, basis_vectors, restricted })
    }

    pub fn parent(&self) -> &StructureConstants {
        &self.parent
    }

    pub fn dim(&self) -> usize {
        self.basis_vectors.len()
    }

    /// Basis vectors as coordinates in the parent algebra.
    pub fn basis_vectors(&self) -> &[Vec<Rat>] {
        &self.basis_vectors
    }

    /// Structure constants in the subalgebra's own basis.
    pub fn structure_constants(&self) -> &StructureConstants {
        &self.restricted
    }

    /// Express a parent-coordinate vector in the subalgebra basis;
    /// `None` when it lies outside the span.
    pub fn coordinates_in(&self, parent_vector: &[Rat]) -> Option<Vec<Rat>> {
        if parent_vector.len() != self.parent.dim() {
            return None;
        }
        let columns = basis_columns(&self.basis_vectors, self.parent.dim());
        let solver = LinSolver::new(&columns);
        solver.solve(&complex_vec(parent_vector)).and_then(|c| real_vec(&c))
    }
}

/// Exact centralizer `{x : [z, x] = 0}` of `z` (coordinates in the basis of
/// `sc`), returned as a [`Subalgebra`].  The result is automatically
/// bracket-closed; closure is nevertheless re-certified by construction.
pub fn centralizer(sc: &StructureConstants, z: &[Rat]) -> Result<Subalgebra, ConstraintError> {
    if z.len() != sc.dim() {
        return Err(ConstraintError::DimensionMismatch { expected: sc.dim(), got: z.len() });
    }
    if z.iter().all(Rat::is_zero) {
        return Err(ConstraintError::ZeroElement);
    }
    let kernel = sc.ad(z).null_space();
    let vectors = kernel
        .iter()
        .map(|v| real_vec(v))
        .collect::<Option<Vec<_>>>()
        .expect("kernel of a real matrix has a real basis");
    Subalgebra::new(sc.clone(), vectors)
}

/// Quotient of `sub` by the span of `ideal` (vectors in *parent*
/// coordinates, all of which must lie inside `sub` and be central in it).
/// Returns structure constants on a complement basis; antisymmetry and the
/// Jacobi identity are re-verified exactly on construction.
pub fn quotient(
    sub: &Subalgebra,
    ideal: &[Vec<Rat>],
) -> Result<StructureConstants, ConstraintError> {
    let k = sub.dim();
    // Ideal vectors in subalgebra coordinates, then an independent row basis.
    let mut rows = Vec::new();
    for (index, v) in ideal.iter().enumerate() {
        let coords = sub
            .coordinates_in(v)
            .ok_or(ConstraintError::OutsideSubalgebra { index })?;
        rows.push(complex_vec(&coords));
    }
    let mut ideal_mat = RatMat::from_rows(rows);
    let pivots = if ideal.is_empty() { Vec::new() } else { ideal_mat.row_reduce() };
    let m = pivots.len();
    let ideal_basis: Vec<Vec<Rat>> = (0..m)
        .map(|r| real_vec(ideal_mat.row(r)).expect("real row basis"))
        .collect();
    let restricted = sub.structure_constants();
    for (index, w) in ideal_basis.iter().enumerate() {
        for j in 0..k {
            let mut e = vec![Rat::zero(); k];
            e[j] = Rat::one();
            if restricted.bracket_vec(w, &e).iter().any(|x| !x.is_zero()) {
                return Err(ConstraintError::NotCentral { index });
            }
        }
    }
    // Complement basis: coordinate directions away from the ideal pivots.
    let complement: Vec<usize> = (0..k).filter(|j| !pivots.contains(j)).collect();
    let mut change = RatMat::zeros(k, k);
    for (col, w) in ideal_basis.iter().enumerate() {
        for (row, x) in w.iter().enumerate() {
            *change.at_mut(row, col) = RatC::new(x.clone(), Rat::zero());
        }
    }
    for (col, &j) in complement.iter().enumerate() {
        *change.at_mut(j, m + col) = RatC::one();
    }
    let solver = LinSolver::new(&change);
    let q = complement.len();
    let labels: Vec<String> =
        complement.iter().map(|&j| restricted.labels()[j].clone()).collect();
    let mut dense = vec![vec![vec![Rat::zero(); q]; q]; q];
    for a in 0..q {
        for b in (a + 1)..q {
            let mut x = vec![Rat::zero(); k];
            let mut y = vec![Rat::zero(); k];
            x[complement[a]] = Rat::one();
            y[complement[b]] = Rat::one();
            let w = restricted.bracket_vec(&x, &y);
            let coords = solver
                .solve(&complex_vec(&w))
                .and_then(|c| real_vec(&c))
                .expect("bracket expands in a full basis");
            // Coefficients on the ideal part are dropped: that is the quotient.
            for (idx, v) in coords[m..].iter().enumerate() {
                dense[a][b][idx] = v.clone();
                dense[b][a][idx] = -v.clone();
            }
        }
    }
    Ok(StructureConstants::new(labels, dense)?)
}

/// Killing form `B(e_i, e_j) = trace(ad e_i . ad e_j)` together with its
/// exact inertia `(positive, negative, zero)`.
#[derive(Clone, Debug)]
pub struct KillingForm {
    pub matrix: RatMat,
    pub signature: (usize, usize, usize),
}

impl KillingForm {
    pub fn is_nondegenerate(&self) -> bool {
        self.signature.2 == 0
    }
}

/// Exact Killing form of `sc`: `B_ij = sum_{m,k} c_im^k c_jk^m`.
pub fn killing(sc: &StructureConstants) -> KillingForm {
    let dim = sc.dim();
    let mut matrix = RatMat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..=i {
            let mut b = Rat::zero();
            for m in 0..dim {
                for &(kk, ref v) in sc.bracket_basis(i, m) {
                    let w = sc.coeff(j, kk, m);
                    if !w.is_zero() {
                        b += v * &w;
                    }
                }
            }
            *matrix.at_mut(i, j) = RatC::new(b.clone(), Rat::zero());
            *matrix.at_mut(j, i) = RatC::new(b, Rat::zero());
        }
    }
    let signature = symmetric_signature(&matrix);
    debug_assert_eq!(signature.0 + signature.1 + signature.2, dim);
    KillingForm { matrix, signature }
}

/// Number of independent draws used by [`rank`]; the minimum centralizer
/// dimension over the draws guards against a non-generic sample.
const RANK_PROBES: usize = 8;
const RANK_PROBE_SEED: u64 = 0x4C1E_A16B;

/// Rank of a semisimple algebra: the dimension of the centralizer of a
/// generic element.  Draws small random rational elements from a fixed seed
/// and takes the minimal (exact) kernel dimension of their adjoint maps; a
/// non-generic draw can only enlarge the kernel, never shrink it below the
/// rank, so the minimum over several draws is correct unless every draw is
/// degenerate.
///
/// Errors when the Killing form is degenerate (the algebra is not
/// semisimple, and a generic centralizer need not be a Cartan subalgebra).
pub fn rank(sc: &StructureConstants) -> Result<usize, ConstraintError> {
    let kf = killing(sc);
    if !kf.is_nondegenerate() {
        return Err(ConstraintError::DegenerateKilling { zero_directions: kf.signature.2 });
    }
    let dim = sc.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(RANK_PROBE_SEED);
    let mut best = dim;
    for _ in 0..RANK_PROBES {
        let z: Vec<Rat> = loop {
            let draw: Vec<Rat> =
                (0..dim).map(|_| Rat::from_integer(rng.gen_range(-9i64..=9).into())).collect();
            if draw.iter().any(|x| !x.is_zero()) {
                break draw;
            }
        };
        best = best.min(dim - sc.ad(&z).rank());
    }
    Ok(best)
}

/// Dimension of the derived algebra `[g, g]`: the rank of the span of all
/// pairwise basis brackets.
pub fn derived_dimension(sc: &StructureConstants) -> usize {
    let dim = sc.dim();
    let mut rows = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let sparse = sc.bracket_basis(i, j);
            if sparse.is_empty() {
                continue;
            }
            let mut row = vec![RatC::zero(); dim];
            for &(k, ref v) in sparse {
                row[k] = RatC::new(v.clone(), Rat::zero());
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return 0;
    }
    RatMat::from_rows(rows).rank()
}

/// Exact basis of the center `{x : [e_i, x] = 0 for all i}`.
pub fn center(sc: &StructureConstants) -> Vec<Vec<Rat>> {
    let dim = sc.dim();
    let mut stacked = RatMat::zeros(dim * dim, dim);
    for i in 0..dim {
        let mut e = vec![Rat::zero(); dim];
        e[i] = Rat::one();
        let ad = sc.ad(&e);
        for r in 0..dim {
            for c in 0..dim {
                *stacked.at_mut(i * dim + r, c) = ad.at(r, c).clone();
            }
        }
    }
    stacked
        .null_space()
        .iter()
        .map(|v| real_vec(v).expect("kernel of a real matrix has a real basis"))
        .collect()
}

/// The canonical 6x6 matrix realization of the rank-3 algebra preserving
/// the diagonal quadratic form with signature (4, 2): fifteen real matrices
/// `(M_ab)_ij = g_aa d_ai d_bj - g_bb d_bi d_aj` for `a < b`, each
/// satisfying `M^T g + g M = 0` exactly.  Serves as the reference against
/// which descent quotients are compared.
pub fn defining_rep() -> StructureConstants {
    let (labels, mats) = defining_matrices();
    let vectorized: Vec<Vec<Rat>> = mats
        .iter()
        .map(|mat| {
            let mut v = Vec::with_capacity(36);
            for r in 0..6 {
                for c in 0..6 {
                    v.push(mat.at(r, c).re.clone());
                }
            }
            v
        })
        .collect();
    let solver = LinSolver::new(&basis_columns(&vectorized, 36));
    assert_eq!(solver.rank(), 15, "defining matrices are independent");
    let mut dense = vec![vec![vec![Rat::zero(); 15]; 15]; 15];
    for i in 0..15 {
        for j in (i + 1)..15 {
            let comm = mats[i].commutator(&mats[j]);
            let mut w = Vec::with_capacity(36);
            for r in 0..6 {
                for c in 0..6 {
                    w.push(comm.at(r, c).clone());
                }
            }
            let coords = solver
                .solve(&w)
                .and_then(|c| real_vec(&c))
                .expect("matrix commutators close over the reals");
            for (k, v) in coords.into_iter().enumerate() {
                dense[i][j][k] = v.clone();
                dense[j][i][k] = -v;
            }
        }
    }
    StructureConstants::new(labels, dense).expect("matrix algebra satisfies Jacobi")
}

/// The fifteen generator matrices of [`defining_rep`] with their labels.
pub fn defining_matrices() -> (Vec<String>, Vec<RatMat>) {
    let metric = Metric::standard();
    let mut labels = Vec::with_capacity(15);
    let mut mats = Vec::with_capacity(15);
    for &(a, b) in GENERATOR_PAIRS.iter() {
        let mut m = RatMat::zeros(6, 6);
        *m.at_mut((a - 1) as usize, (b - 1) as usize) = RatC::from_int(metric.sign(a));
        *m.at_mut((b - 1) as usize, (a - 1) as usize) = RatC::from_int(-metric.sign(b));
        labels.push(format!("M{a}{b}"));
        mats.push(m);
    }
    (labels, mats)
}

/// Side-by-side structural invariants of two algebras.  `rank` is `None`
/// when the Killing form is degenerate.  `matches` requires equality of
/// dimension, Killing signature, rank, and derived-algebra dimension.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub dimension: (usize, usize),
    pub killing_signature: ((usize, usize, usize), (usize, usize, usize)),
    pub rank: (Option<usize>, Option<usize>),
    pub derived_dimension: (usize, usize),
    pub matches: bool,
}

/// Compare the isomorphism invariants of two algebras.  The four invariants
/// (dimension, Killing signature, rank, derived dimension) separate the
/// real forms at issue in this crate; agreement on all four is reported as
/// a match.
pub fn match_invariants(a: &StructureConstants, b: &StructureConstants) -> InvariantReport {
    let ra = rank(a).ok();
    let rb = rank(b).ok();
    let ka = killing(a).signature;
    let kb = killing(b).signature;
    let da = derived_dimension(a);
    let db = derived_dimension(b);
    let matches = a.dim() == b.dim() && ka == kb && ra == rb && da == db;
    InvariantReport {
        dimension: (a.dim(), b.dim()),
        killing_signature: (ka, kb),
        rank: (ra, rb),
        derived_dimension: (da, db),
        matches,
    }
}

/// Summary of one full descent chain, serialized for reports.
#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub parent_dim: usize,
    pub centralizer_dim: usize,
    pub quotient_dim: usize,
    pub killing_signature: (usize, usize, usize),
    pub rank: usize,
    #[serde(rename = "match")]
    pub matches_reference: bool,
}

/// Full result of a descent chain: centralizer, central quotient, and the
/// quotient's structural invariants compared against [`defining_rep`].
#[derive(Clone, Debug)]
pub struct Descent {
    pub centralizer: Subalgebra,
    pub quotient: StructureConstants,
    pub quotient_killing: KillingForm,
    pub quotient_rank: usize,
    pub quotient_center_dim: usize,
    pub comparison: InvariantReport,
}

impl Descent {
    pub fn report(&self) -> DescentReport {
        DescentReport {
            parent_dim: self.centralizer.parent().dim(),
            centralizer_dim: self.centralizer.dim(),
            quotient_dim: self.quotient.dim(),
            killing_signature: self.quotient_killing.signature,
            rank: self.quotient_rank,
            matches_reference: self.comparison.matches,
        }
    }
}

/// Run the descent chain through `z`: centralizer of `z` in `sc`, quotient
/// by `span{z}`, then exact invariants of the quotient.
pub fn descend(sc: &StructureConstants, z: &[Rat]) -> Result<Descent, ConstraintError> {
    let cent = centralizer(sc, z)?;
    let quot = quotient(&cent, std::slice::from_ref(&z.to_vec()))?;
    let quotient_killing = killing(&quot);
    let quotient_rank = rank(&quot)?;
    let quotient_center_dim = center(&quot).len();
    let comparison = match_invariants(&quot, &defining_rep());
    Ok(Descent {
        centralizer: cent,
        quotient: quot,
        quotient_killing,
        quotient_rank,
        quotient_center_dim,
        comparison,
    })
}

/// Real coordinates of a bilinear form in a basis of forms; errors when the
/// form lies outside the real span.
pub fn element_coordinates(
    form: &BilinearForm,
    basis: &[BilinearForm],
) -> Result<Vec<Rat>, ConstraintError> {
    expand_in_basis(form, basis)
        .as_deref()
        .and_then(real_vec)
        .ok_or(ConstraintError::OutsideRealSpan)
}

/// The flagship chain: sp(8,R) as four-mode boson bilinears, descended
/// through the quantized Kustaanheimo-Stiefel fiber rotation.  Dimensions
/// fall 36 -> 16 -> 15 and the quotient's invariants match
/// [`defining_rep`].
pub fn fiber_descent() -> Result<Descent, ConstraintError> {
    let (labels, basis) = sp8_basis();
    let sc = structure_constants(&labels, &basis)?;
    let z = element_coordinates(&fiber_rotation(), &basis)?;
    descend(&sc, &z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::number_difference;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    /// so(3) in its compact cyclic basis: [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2.
    fn su2_toy() -> StructureConstants {
        let labels = vec!["J1".into(), "J2".into(), "J3".into()];
        let mut dense = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            dense[i][j][k] = Rat::one();
            dense[j][i][k] = -Rat::one();
        }
        StructureConstants::new(labels, dense).unwrap()
    }

    fn abelian_toy(n: usize) -> StructureConstants {
        let labels = (0..n).map(|i| format!("t{i}")).collect();
        let dense = vec![vec![vec![Rat::zero(); n]; n]; n];
        StructureConstants::new(labels, dense).unwrap()
    }

    /// u(1) + su(2): e0 central, e1..e3 the cyclic so(3) triple.
    fn u1_plus_su2_toy() -> StructureConstants {
        let labels = vec!["Q".into(), "J1".into(), "J2".into(), "J3".into()];
        let mut dense = vec![vec![vec![Rat::zero(); 4]; 4]; 4];
        for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            dense[i][j][k] = Rat::one();
            dense[j][i][k] = -Rat::one();
        }
        StructureConstants::new(labels, dense).unwrap()
    }

    fn unit(dim: usize, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); dim];
        v[i] = Rat::one();
        v
    }

    fn whole(sc: &StructureConstants) -> Subalgebra {
        let dim = sc.dim();
        Subalgebra::new(sc.clone(), (0..dim).map(|i| unit(dim, i)).collect()).unwrap()
    }

    fn sp8() -> (StructureConstants, Vec<BilinearForm>) {
        let (labels, basis) = sp8_basis();
        (structure_constants(&labels, &basis).unwrap(), basis)
    }

    /// Same-sense elliptic generator: the sum over modes of pair-creator
    /// plus pair-annihilator (each mode's `K+ + K-`, with `ad^2 = -4` on
    /// its su(1,1) triple), whose centralizer is a maximal compact
    /// subalgebra.
    fn compact_rotation() -> BilinearForm {
        let mut f = BilinearForm::zero();
        for k in 0..4 {
            f = f
                .add(&BilinearForm::pair_create_monomial(k, k, RatC::one()))
                .add(&BilinearForm::pair_annih_monomial(k, k, RatC::one()));
        }
        f
    }

    #[test]
    fn centralizer_of_cartan_in_su2_is_the_cartan() {
        let su2 = su2_toy();
        let cent = centralizer(&su2, &unit(3, 2)).unwrap();
        assert_eq!(cent.dim(), 1);
        assert_eq!(cent.basis_vectors()[0], unit(3, 2));
        assert_eq!(cent.structure_constants().labels(), ["J3"]);
    }

    #[test]
    fn centralizer_in_an_abelian_algebra_is_everything() {
        let ab = abelian_toy(5);
        for i in 0..5 {
            assert_eq!(centralizer(&ab, &unit(5, i)).unwrap().dim(), 5);
        }
    }

    #[test]
    fn centralizer_rejects_zero_and_mis_sized_elements() {
        let su2 = su2_toy();
        assert!(matches!(
            centralizer(&su2, &[Rat::zero(), Rat::zero(), Rat::zero()]),
            Err(ConstraintError::ZeroElement)
        ));
        assert!(matches!(
            centralizer(&su2, &unit(4, 0)),
            Err(ConstraintError::DimensionMismatch { expected: 3, got: 4 })
        ));
    }

    #[test]
    fn subalgebra_construction_rejects_non_closed_spans() {
        let su2 = su2_toy();
        // span{J1, J2} is not closed: [J1, J2] = J3.
        let err = Subalgebra::new(su2, vec![unit(3, 0), unit(3, 1)]).unwrap_err();
        assert!(matches!(err, ConstraintError::NotClosed { i: 0, j: 1 }));
    }

    #[test]
    fn subalgebra_construction_rejects_dependent_vectors() {
        let su2 = su2_toy();
        let twice: Vec<Rat> = unit(3, 2).iter().map(|x| x * Rat::from_integer(2.into())).collect();
        let err = Subalgebra::new(su2, vec![unit(3, 2), twice]).unwrap_err();
        assert!(matches!(err, ConstraintError::DependentVectors { rank: 1, count: 2 }));
    }

    #[test]
    fn quotient_by_the_zero_ideal_is_the_identity() {
        let su2 = su2_toy();
        let q = quotient(&whole(&su2), &[]).unwrap();
        assert_eq!(q.to_json(), su2.to_json());
    }

    #[test]
    fn quotient_of_u1_plus_su2_by_the_u1_recovers_su2() {
        let g = u1_plus_su2_toy();
        let q = quotient(&whole(&g), &[unit(4, 0)]).unwrap();
        assert_eq!(q.dim(), 3);
        assert_eq!(q.labels(), ["J1", "J2", "J3"]);
        assert_eq!(q.to_json(), su2_toy().to_json());
    }

    #[test]
    fn quotient_rejects_non_central_ideals() {
        let su2 = su2_toy();
        let err = quotient(&whole(&su2), &[unit(3, 2)]).unwrap_err();
        assert!(matches!(err, ConstraintError::NotCentral { index: 0 }));
    }

    #[test]
    fn quotient_rejects_ideals_outside_the_subalgebra() {
        let g = u1_plus_su2_toy();
        let sub = Subalgebra::new(g, vec![unit(4, 0)]).unwrap();
        let err = quotient(&sub, &[unit(4, 3)]).unwrap_err();
        assert!(matches!(err, ConstraintError::OutsideSubalgebra { index: 0 }));
    }

    #[test]
    fn killing_form_of_su2_is_negative_definite() {
        // ad-matrix oracle: tr(ad e_i ad e_j) = -2 delta_ij for the cyclic basis.
        let kf = killing(&su2_toy());
        assert_eq!(kf.signature, (0, 3, 0));
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { RatC::from_int(-2) } else { RatC::zero() };
                assert_eq!(*kf.matrix.at(i, j), expect);
            }
        }
    }

    #[test]
    fn killing_form_of_an_abelian_algebra_is_zero() {
        let kf = killing(&abelian_toy(4));
        assert!(kf.matrix.is_zero());
        assert_eq!(kf.signature, (0, 0, 4));
        assert!(!kf.is_nondegenerate());
    }

    #[test]
    fn rank_of_su2_is_one_and_abelian_rank_is_rejected() {
        assert_eq!(rank(&su2_toy()).unwrap(), 1);
        assert!(matches!(
            rank(&abelian_toy(3)),
            Err(ConstraintError::DegenerateKilling { zero_directions: 3 })
        ));
    }

    #[test]
    fn derived_dimension_and_center_of_the_toys() {
        let su2 = su2_toy();
        assert_eq!(derived_dimension(&su2), 3);
        assert!(center(&su2).is_empty());
        let g = u1_plus_su2_toy();
        assert_eq!(derived_dimension(&g), 3);
        let z = center(&g);
        assert_eq!(z.len(), 1);
        assert_eq!(z[0], unit(4, 0));
        assert_eq!(derived_dimension(&abelian_toy(2)), 0);
        assert_eq!(center(&abelian_toy(2)).len(), 2);
    }

    #[test]
    fn defining_matrices_preserve_the_quadratic_form() {
        let metric = Metric::standard();
        let mut g = RatMat::zeros(6, 6);
        for a in 1..=6u8 {
            *g.at_mut((a - 1) as usize, (a - 1) as usize) = RatC::from_int(metric.sign(a));
        }
        let (_, mats) = defining_matrices();
        assert_eq!(mats.len(), 15);
        for m in &mats {
            let residue = m.transpose().mul_mat(&g).add(&g.mul_mat(m));
            assert!(residue.is_zero(), "M^T g + g M must vanish exactly");
        }
    }

    #[test]
    fn defining_rep_brackets_follow_the_metric_contraction_table() {
        // Independent derivation: commutators of the matrices must equal
        // g_bc M_ad - g_ac M_bd + g_ad M_bc - g_bd M_ac with M_yx = -M_xy.
        let metric = Metric::standard();
        let (_, mats) = defining_matrices();
        let index_of = |x: u8, y: u8| GENERATOR_PAIRS.iter().position(|&p| p == (x, y));
        let signed = |x: u8, y: u8| -> RatMat {
            if x == y {
                return RatMat::zeros(6, 6);
            }
            match index_of(x.min(y), x.max(y)) {
                Some(p) if x < y => mats[p].clone(),
                Some(p) => mats[p].scale(&RatC::from_int(-1)),
                None => unreachable!("all pairs are enumerated"),
            }
        };
        for (p, &(a, b)) in GENERATOR_PAIRS.iter().enumerate() {
            for &(c, d) in GENERATOR_PAIRS.iter() {
                let lhs = mats[p].commutator(&signed(c, d));
                let rhs = signed(a, d)
                    .scale(&RatC::from_int(metric.g(b, c)))
                    .add(&signed(b, d).scale(&RatC::from_int(-metric.g(a, c))))
                    .add(&signed(b, c).scale(&RatC::from_int(metric.g(a, d))))
                    .add(&signed(a, c).scale(&RatC::from_int(-metric.g(b, d))));
                assert!(lhs.sub(&rhs).is_zero(), "table mismatch at ({a}{b}),({c}{d})");
            }
        }
    }

    #[test]
    fn defining_rep_invariants_are_the_expected_ones() {
        let reference = defining_rep();
        assert_eq!(reference.dim(), 15);
        assert_eq!(killing(&reference).signature, (8, 7, 0));
        assert_eq!(rank(&reference).unwrap(), 3);
        assert_eq!(derived_dimension(&reference), 15);
        assert!(center(&reference).is_empty());
    }

    #[test]
    fn boson_bilinears_have_symplectic_invariants() {
        // dim 36, Killing signature (20, 16, 0) (16 compact directions =
        // the maximal compact u(4)), rank 4, perfect, centerless.
        let (sc, _) = sp8();
        assert_eq!(sc.dim(), 36);
        assert_eq!(killing(&sc).signature, (20, 16, 0));
        assert_eq!(rank(&sc).unwrap(), 4);
        assert_eq!(derived_dimension(&sc), 36);
        assert!(center(&sc).is_empty());
    }

    #[test]
    fn constraint_candidates_split_by_adjoint_type() {
        // The number-difference generator is hyperbolic (real ad spectrum
        // {0, +-2}), the fiber rotation elliptic (spectrum {0, +-2i}); each
        // satisfies its own cubic minimal identity and fails the other's.
        let (sc, basis) = sp8();
        for (form, own_sign, name) in [
            (number_difference(), -4i64, "number difference"),
            (fiber_rotation(), 4, "fiber rotation"),
        ] {
            let z = element_coordinates(&form, &basis).unwrap();
            let ad = sc.ad(&z);
            let cube = ad.mul_mat(&ad).mul_mat(&ad);
            let own = cube.add(&ad.scale(&RatC::from_int(own_sign)));
            let other = cube.sub(&ad.scale(&RatC::from_int(own_sign)));
            assert!(own.is_zero(), "{name}: cubic identity ad^3 = {}ad", -own_sign);
            assert!(!other.is_zero(), "{name}: must not satisfy the opposite identity");
        }
    }

    #[test]
    fn both_constraint_candidates_centralize_sixteen_dimensions() {
        let (sc, basis) = sp8();
        for form in [number_difference(), fiber_rotation()] {
            let z = element_coordinates(&form, &basis).unwrap();
            assert_eq!(centralizer(&sc, &z).unwrap().dim(), 16);
        }
    }

    #[test]
    fn fiber_descent_lands_on_the_conformal_real_form() {
        let d = fiber_descent().unwrap();
        assert_eq!(d.centralizer.parent().dim(), 36);
        assert_eq!(d.centralizer.dim(), 16);
        assert_eq!(d.quotient.dim(), 15);
        assert_eq!(d.quotient_killing.signature, (8, 7, 0));
        assert_eq!(d.quotient_rank, 3);
        assert_eq!(d.quotient_center_dim, 0);
        assert!(d.comparison.matches);
        let report = serde_json::to_value(d.report()).unwrap();
        assert_eq!(
            report,
            serde_json::json!({
                "parent_dim": 36,
                "centralizer_dim": 16,
                "quotient_dim": 15,
                "killing_signature": [8, 7, 0],
                "rank": 3,
                "match": true,
            })
        );
    }

    #[test]
    fn number_difference_descent_lands_on_the_split_real_form() {
        // The hyperbolic candidate produces the same dimension drop but the
        // split real form sl(4,R): Killing signature (9, 6, 0), so the
        // invariant match against the (8, 7, 0) reference fails.
        let (sc, basis) = sp8();
        let z = element_coordinates(&number_difference(), &basis).unwrap();
        let d = descend(&sc, &z).unwrap();
        assert_eq!(d.centralizer.dim(), 16);
        assert_eq!(d.quotient.dim(), 15);
        assert_eq!(d.quotient_killing.signature, (9, 6, 0));
        assert_eq!(d.quotient_rank, 3);
        assert_eq!(d.quotient_center_dim, 0);
        assert!(!d.comparison.matches);
    }

    #[test]
    fn compact_rotation_descent_lands_on_the_compact_real_form() {
        // The same-sense rotation is ad-conjugate to the positive complex
        // structure: its centralizer is the maximal compact u(4) and the
        // quotient su(4) has negative-definite Killing form.
        let (sc, basis) = sp8();
        let z = element_coordinates(&compact_rotation(), &basis).unwrap();
        let d = descend(&sc, &z).unwrap();
        assert_eq!(d.centralizer.dim(), 16);
        assert_eq!(d.quotient.dim(), 15);
        assert_eq!(d.quotient_killing.signature, (0, 15, 0));
        assert_eq!(d.quotient_rank, 3);
        assert!(!d.comparison.matches);
    }

    #[test]
    fn descent_is_invariant_under_rescaling_the_generator() {
        let (sc, basis) = sp8();
        let z = element_coordinates(&fiber_rotation(), &basis).unwrap();
        let scaled: Vec<Rat> = z.iter().map(|x| x * crate::exact::rat(-7, 3)).collect();
        let a = descend(&sc, &z).unwrap();
        let b = descend(&sc, &scaled).unwrap();
        assert_eq!(
            serde_json::to_value(a.report()).unwrap(),
            serde_json::to_value(b.report()).unwrap()
        );
        // Same centralizer subspace: each basis vector of one expands in the other.
        for v in b.centralizer.basis_vectors() {
            assert!(a.centralizer.coordinates_in(v).is_some());
        }
    }

    #[test]
    fn match_invariants_separates_the_toy_algebras() {
        let su2 = su2_toy();
        assert!(match_invariants(&su2, &su2_toy()).matches);
        let report = match_invariants(&su2, &abelian_toy(3));
        assert!(!report.matches);
        assert_eq!(report.dimension, (3, 3));
        assert_ne!(report.killing_signature.0, report.killing_signature.1);
        assert_eq!(report.rank, (Some(1), None));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// Centralizers of arbitrary elements are bracket-closed (certified
        /// by construction), contain the element, and are at least
        /// rank-sized.
        #[test]
        fn centralizers_are_closed_and_contain_their_element(
            coords in proptest::collection::vec(-2i64..=2, 36),
        ) {
            prop_assume!(coords.iter().any(|&x| x != 0));
            let (sc, _) = sp8();
            let z: Vec<Rat> = coords.iter().map(|&x| Rat::from_integer(x.into())).collect();
            let cent = centralizer(&sc, &z).unwrap();
            prop_assert!(cent.dim() >= 4);
            prop_assert!(cent.coordinates_in(&z).is_some());
        }
    }
}
