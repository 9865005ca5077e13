//! Exact symbolic algebra of normal-ordered boson bilinears in four modes.
//!
//! A [`BilinearForm`] is
//!
//! ```text
//!   sum_ij cross[i][j] a_i^+ a_j            (mixers)
//! + sum_ij pc[i][j]    a_i^+ a_j^+          (pair creators, pc symmetric)
//! + sum_ij pa[i][j]    a_i a_j              (pair annihilators, pa symmetric)
//! + scalar
//! ```
//!
//! with exact rational-complex coefficients.  The commutator of two such
//! forms is again such a form; the bracket below implements the four
//! normal-ordering rules that follow from `[a_i, a_j^+] = delta_ij`:
//!
//! ```text
//! [a_i^+ a_j,   a_k^+ a_l]   =  d_jk a_i^+ a_l  -  d_il a_k^+ a_j
//! [a_i^+ a_j,   a_k^+ a_l^+] =  d_jk a_i^+ a_l^+  +  d_jl a_i^+ a_k^+
//! [a_i^+ a_j,   a_k a_l]     = -d_ik a_l a_j  -  d_il a_k a_j
//! [a_i^+ a_j^+, a_k a_l]     = -d_li a_j^+ a_k - d_lj a_i^+ a_k
//!                              -d_ki a_j^+ a_l - d_kj a_i^+ a_l
//!                              -d_li d_kj - d_lj d_ki
//! ```
//!
//! (creators commute among themselves, annihilators likewise, scalars are
//! central).  The 36 symmetrized quadratics -- 16 mixers
//! `(a_i^+ a_j + a_j a_i^+)/2`, 10 pair creators and 10 pair annihilators --
//! close under this bracket with *real* rational structure constants and
//! realize sp(8,R); in that symmetrized basis all scalar terms cancel.
//!
//! [`realize`] maps a form to its sparse matrix on a truncated Fock space.
//! Hermitian-symmetric forms realize to exactly Hermitian matrices because
//! ladder amplitudes are shared between an entry and its transpose.

use crate::exact::{LinSolver, Rat, RatC, RatMat};
use crate::fock::{ladder, FockBasis, FockError, LadderKind, SparseOperator};
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Number of boson modes in this realization (two Schwinger pairs).
pub const MODES: usize = 4;

#[derive(Debug, Error)]
pub enum BilinearError {
    #[error("basis is linearly dependent (rank {rank} for {dim} elements)")]
    DependentBasis { rank: usize, dim: usize },
    #[error("bracket [{i}, {j}] does not lie in the span of the basis")]
    NotClosed { i: String, j: String },
    #[error("bracket [{i}, {j}] needs complex coefficients: not a real Lie algebra in this basis")]
    ComplexStructure { i: String, j: String },
    #[error("structure constants fail {check} at indices ({i}, {j}, {k})")]
    BadTensor { check: &'static str, i: usize, j: usize, k: usize },
    #[error("the realization needs a 4-mode basis, got {0} modes")]
    WrongModeCount(usize),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Normal-ordered quadratic in four boson modes with exact coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BilinearForm {
    cross: [[RatC; MODES]; MODES],
    pair_create: [[RatC; MODES]; MODES],
    pair_annih: [[RatC; MODES]; MODES],
    scalar: RatC,
}

impl fmt::Debug for BilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for i in 0..MODES {
            for j in 0..MODES {
                if !self.cross[i][j].is_zero() {
                    terms.push(format!("({:?}) a{}^+ a{}", self.cross[i][j], i + 1, j + 1));
                }
            }
        }
        for i in 0..MODES {
            for j in i..MODES {
                let pc = self.pair_monomial_coeff(&self.pair_create, i, j);
                if !pc.is_zero() {
                    terms.push(format!("({pc:?}) a{}^+ a{}^+", i + 1, j + 1));
                }
                let pa = self.pair_monomial_coeff(&self.pair_annih, i, j);
                if !pa.is_zero() {
                    terms.push(format!("({pa:?}) a{} a{}", i + 1, j + 1));
                }
            }
        }
        if !self.scalar.is_zero() {
            terms.push(format!("({:?})", self.scalar));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl BilinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self == &Self::default()
    }

    /// Constant form.
    pub fn constant(c: RatC) -> Self {
        let mut f = Self::zero();
        f.scalar = c;
        f
    }

    /// `coeff * a_i^+ a_j` (modes 0-based).
    pub fn cross_monomial(i: usize, j: usize, coeff: RatC) -> Self {
        let mut f = Self::zero();
        f.cross[i][j] = coeff;
        f
    }

    /// Symmetrized mixer `(a_i^+ a_j + a_j a_i^+)/2 = a_i^+ a_j + d_ij/2`.
    pub fn mixer(i: usize, j: usize) -> Self {
        let mut f = Self::cross_monomial(i, j, RatC::one());
        if i == j {
            f.scalar = RatC::from_ratio(1, 2);
        }
        f
    }

    /// `coeff * a_i^+ a_j^+`.
    pub fn pair_create_monomial(i: usize, j: usize, coeff: RatC) -> Self {
        let mut f = Self::zero();
        f.add_pair(Pair::Create, i, j, coeff);
        f
    }

    /// `coeff * a_i a_j`.
    pub fn pair_annih_monomial(i: usize, j: usize, coeff: RatC) -> Self {
        let mut f = Self::zero();
        f.add_pair(Pair::Annihilate, i, j, coeff);
        f
    }

    fn pair_array_mut(&mut self, which: Pair) -> &mut [[RatC; MODES]; MODES] {
        match which {
            Pair::Create => &mut self.pair_create,
            Pair::Annihilate => &mut self.pair_annih,
        }
    }

    /// Accumulate `coeff * (pair monomial i,j)` into the symmetric array.
    fn add_pair(&mut self, which: Pair, i: usize, j: usize, coeff: RatC) {
        let arr = self.pair_array_mut(which);
        if i == j {
            arr[i][i] += coeff;
        } else {
            let half = &coeff * &RatC::from_ratio(1, 2);
            arr[i][j] += half.clone();
            arr[j][i] += half;
        }
    }

    /// Coefficient of the monomial `a_i^(+) a_j^(+)` (`i <= j`) in a
    /// symmetric pair array.
    fn pair_monomial_coeff(&self, arr: &[[RatC; MODES]; MODES], i: usize, j: usize) -> RatC {
        if i == j {
            arr[i][i].clone()
        } else {
            arr[i][j].clone() + &arr[j][i]
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..MODES {
            for j in 0..MODES {
                out.cross[i][j] += other.cross[i][j].clone();
                out.pair_create[i][j] += other.pair_create[i][j].clone();
                out.pair_annih[i][j] += other.pair_annih[i][j].clone();
            }
        }
        out.scalar += other.scalar.clone();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&RatC::from_int(-1)))
    }

    pub fn scale(&self, factor: &RatC) -> Self {
        let mut out = Self::zero();
        for i in 0..MODES {
            for j in 0..MODES {
                out.cross[i][j] = &self.cross[i][j] * factor;
                out.pair_create[i][j] = &self.pair_create[i][j] * factor;
                out.pair_annih[i][j] = &self.pair_annih[i][j] * factor;
            }
        }
        out.scalar = &self.scalar * factor;
        out
    }

    /// Hermitian conjugate: mixers transpose-conjugate, creators and
    /// annihilators swap with conjugated coefficients.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..MODES {
            for j in 0..MODES {
                out.cross[i][j] = self.cross[j][i].conj();
                out.pair_create[i][j] = self.pair_annih[i][j].conj();
                out.pair_annih[i][j] = self.pair_create[i][j].conj();
            }
        }
        out.scalar = self.scalar.conj();
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self == &self.dagger()
    }

    /// Commutator of two forms, exactly normal ordered.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        // mixer-mixer: [a_i^+ a_j, a_k^+ a_l] = d_jk a_i^+ a_l - d_il a_k^+ a_j
        for (i, j, x) in nonzero(&self.cross) {
            for (k, l, y) in nonzero(&other.cross) {
                let w = &x * &y;
                if j == k {
                    out.cross[i][l] += w.clone();
                }
                if i == l {
                    out.cross[k][j] -= w;
                }
            }
        }
        // mixer-creator and (negated) creator-mixer
        for (sign, cross, pairs) in [
            (1i64, &self.cross, &other.pair_create),
            (-1, &other.cross, &self.pair_create),
        ] {
            let s = RatC::from_int(sign);
            for (i, j, x) in nonzero(cross) {
                for (k, l, y) in nonzero(pairs) {
                    // [a_i^+ a_j, a_k^+ a_l^+] = d_jk a_i^+ a_l^+ + d_jl a_i^+ a_k^+
                    let w = &(&x * &y) * &s;
                    if j == k {
                        out.add_pair(Pair::Create, i, l, w.clone());
                    }
                    if j == l {
                        out.add_pair(Pair::Create, i, k, w.clone());
                    }
                }
            }
        }
        // mixer-annihilator and (negated) annihilator-mixer
        for (sign, cross, pairs) in [
            (1i64, &self.cross, &other.pair_annih),
            (-1, &other.cross, &self.pair_annih),
        ] {
            let s = RatC::from_int(sign);
            for (i, j, x) in nonzero(cross) {
                for (k, l, y) in nonzero(pairs) {
                    // [a_i^+ a_j, a_k a_l] = -d_ik a_l a_j - d_il a_k a_j
                    let w = &(&x * &y) * &s;
                    if i == k {
                        out.add_pair(Pair::Annihilate, l, j, -w.clone());
                    }
                    if i == l {
                        out.add_pair(Pair::Annihilate, k, j, -w.clone());
                    }
                }
            }
        }
        // creator-annihilator and (negated) annihilator-creator
        for (sign, creators, annihs) in [
            (1i64, &self.pair_create, &other.pair_annih),
            (-1, &other.pair_create, &self.pair_annih),
        ] {
            let s = RatC::from_int(sign);
            for (i, j, x) in nonzero(creators) {
                for (k, l, y) in nonzero(annihs) {
                    // [a_i^+ a_j^+, a_k a_l] = -d_li a_j^+ a_k - d_lj a_i^+ a_k
                    //                          -d_ki a_j^+ a_l - d_kj a_i^+ a_l
                    //                          -d_li d_kj - d_lj d_ki
                    let w = &(&x * &y) * &s;
                    if l == i {
                        out.cross[j][k] -= w.clone();
                    }
                    if l == j {
                        out.cross[i][k] -= w.clone();
                    }
                    if k == i {
                        out.cross[j][l] -= w.clone();
                    }
                    if k == j {
                        out.cross[i][l] -= w.clone();
                    }
                    if l == i && k == j {
                        out.scalar -= w.clone();
                    }
                    if l == j && k == i {
                        out.scalar -= w.clone();
                    }
                }
            }
        }
        out
    }

    /// Linear coordinates: 16 mixer slots (row-major), 10 pair-creator
    /// monomials (`i <= j`, lexicographic), 10 pair-annihilator monomials,
    /// and the scalar -- 37 in total.
    pub fn coordinates(&self) -> Vec<RatC> {
        let mut v = Vec::with_capacity(37);
        for i in 0..MODES {
            for j in 0..MODES {
                v.push(self.cross[i][j].clone());
            }
        }
        for i in 0..MODES {
            for j in i..MODES {
                v.push(self.pair_monomial_coeff(&self.pair_create, i, j));
            }
        }
        for i in 0..MODES {
            for j in i..MODES {
                v.push(self.pair_monomial_coeff(&self.pair_annih, i, j));
            }
        }
        v.push(self.scalar.clone());
        v
    }
}

#[derive(Clone, Copy)]
enum Pair {
    Create,
    Annihilate,
}

fn nonzero(arr: &[[RatC; MODES]; MODES]) -> Vec<(usize, usize, RatC)> {
    let mut out = Vec::new();
    for (i, row) in arr.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                out.push((i, j, v.clone()));
            }
        }
    }
    out
}

/// The 36-element symmetrized quadratic basis of sp(8,R): mixers `M_ij`
/// row-major, then pair creators `C_ij` (`i <= j`), then pair annihilators
/// `A_ij` (`i <= j`).  Labels use 1-based mode numbers.
pub fn sp8_basis() -> (Vec<String>, Vec<BilinearForm>) {
    let mut labels = Vec::with_capacity(36);
    let mut forms = Vec::with_capacity(36);
    for i in 0..MODES {
        for j in 0..MODES {
            labels.push(format!("M{}{}", i + 1, j + 1));
            forms.push(BilinearForm::mixer(i, j));
        }
    }
    for i in 0..MODES {
        for j in i..MODES {
            labels.push(format!("C{}{}", i + 1, j + 1));
            forms.push(BilinearForm::pair_create_monomial(i, j, RatC::one()));
        }
    }
    for i in 0..MODES {
        for j in i..MODES {
            labels.push(format!("A{}{}", i + 1, j + 1));
            forms.push(BilinearForm::pair_annih_monomial(i, j, RatC::one()));
        }
    }
    (labels, forms)
}

/// Number-difference constraint `(N1 + N2) - (N3 + N4)`.  Its kernel on the
/// Fock space is the physical subspace of the boson realization, and every
/// so(4,2) generator commutes with it.
pub fn number_difference() -> BilinearForm {
    let one = RatC::one;
    BilinearForm::cross_monomial(0, 0, one())
        .add(&BilinearForm::cross_monomial(1, 1, one()))
        .sub(&BilinearForm::cross_monomial(2, 2, one()))
        .sub(&BilinearForm::cross_monomial(3, 3, one()))
}

/// Generator of the Kustaanheimo-Stiefel fiber circle in the real-span
/// (anti-Hermitian) convention: the quantization of the classical momentum
/// function `p . xi(u)` of the fiber field `xi = (-u2, u1, u4, -u3)`, i.e.
/// `-i (L12 - L34)` written as a real combination of mixers.  Its adjoint
/// action is elliptic: `ad^3 = -4 ad` exactly.
pub fn fiber_rotation() -> BilinearForm {
    let one = RatC::one;
    BilinearForm::cross_monomial(1, 0, one())
        .sub(&BilinearForm::cross_monomial(0, 1, one()))
        .add(&BilinearForm::cross_monomial(2, 3, one()))
        .sub(&BilinearForm::cross_monomial(3, 2, one()))
}

/// Antisymmetric structure-constant tensor `[e_i, e_j] = sum_k c_ijk e_k`
/// over exact rationals, validated (antisymmetry and the Jacobi identity)
/// at construction.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    labels: Vec<String>,
    /// `c[i][j]` is the sparse expansion of `[e_i, e_j]`, sorted by k.
    c: Vec<Vec<Vec<(usize, Rat)>>>,
}

impl StructureConstants {
    /// Build from a dense tensor, verifying antisymmetry and Jacobi.
    pub fn new(labels: Vec<String>, dense: Vec<Vec<Vec<Rat>>>) -> Result<Self, BilinearError> {
        let dim = labels.len();
        assert_eq!(dense.len(), dim, "tensor leading dimension");
        let mut c = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if !dense[i][j][k].is_zero() {
                        c[i][j].push((k, dense[i][j][k].clone()));
                    }
                }
            }
        }
        let sc = StructureConstants { labels, c };
        sc.validate()?;
        Ok(sc)
    }

    fn from_sparse(labels: Vec<String>, c: Vec<Vec<Vec<(usize, Rat)>>>) -> Result<Self, BilinearError> {
        let sc = StructureConstants { labels, c };
        sc.validate()?;
        Ok(sc)
    }

    fn validate(&self) -> Result<(), BilinearError> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                for &(k, ref v) in &self.c[i][j] {
                    if self.coeff(j, i, k) != -v.clone() {
                        return Err(BilinearError::BadTensor { check: "antisymmetry", i, j, k });
                    }
                }
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    // [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0
                    let mut acc = vec![Rat::zero(); dim];
                    for &(a, b, c3) in &[(i, j, k), (j, k, i), (k, i, j)] {
                        for &(m, ref w) in &self.c[b][c3] {
                            for &(l, ref v) in &self.c[a][m] {
                                acc[l] += w * v;
                            }
                        }
                    }
                    if let Some(l) = acc.iter().position(|v| !v.is_zero()) {
                        return Err(BilinearError::BadTensor { check: "jacobi", i, j, k: l });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Coefficient of `e_k` in `[e_i, e_j]`.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Rat {
        match self.c[i][j].binary_search_by_key(&k, |&(idx, _)| idx) {
            Ok(pos) => self.c[i][j][pos].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    /// Sparse expansion of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.c[i][j]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket_vec(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let dim = self.dim();
        let mut out = vec![Rat::zero(); dim];
        for i in 0..dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                if y[j].is_zero() {
                    continue;
                }
                let w = &x[i] * &y[j];
                for &(k, ref v) in &self.c[i][j] {
                    out[k] += &w * v;
                }
            }
        }
        out
    }

    /// Matrix of `ad_z : x -> [z, x]` in the given basis.
    pub fn ad(&self, z: &[Rat]) -> RatMat {
        let dim = self.dim();
        let mut m = RatMat::zeros(dim, dim);
        for i in 0..dim {
            if z[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                for &(k, ref v) in &self.c[i][j] {
                    *m.at_mut(k, j) += RatC::new(&z[i] * v, Rat::zero());
                }
            }
        }
        m
    }

    /// JSON form: labels plus all nonzero `c[i][j][k]` as
    /// `[i, j, k, numerator, denominator]`, sorted by `(i, j, k)`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for &(k, ref v) in &self.c[i][j] {
                    entries.push(serde_json::json!([
                        i,
                        j,
                        k,
                        v.numer().to_i64().expect("structure constant numerator fits i64"),
                        v.denom().to_i64().expect("structure constant denominator fits i64"),
                    ]));
                }
            }
        }
        serde_json::json!({
            "dim": self.dim(),
            "labels": self.labels,
            "entries": entries,
        })
    }
}

/// Expand `target` in the linear span of `basis`; exact, `None` when the
/// form lies outside the span.
pub fn expand_in_basis(target: &BilinearForm, basis: &[BilinearForm]) -> Option<Vec<RatC>> {
    let solver = LinSolver::new(&coordinate_matrix(basis));
    solver.solve(&target.coordinates())
}

fn coordinate_matrix(basis: &[BilinearForm]) -> RatMat {
    let coords: Vec<Vec<RatC>> = basis.iter().map(BilinearForm::coordinates).collect();
    let rows = coords[0].len();
    let mut m = RatMat::zeros(rows, basis.len());
    for (col, v) in coords.iter().enumerate() {
        for (row, x) in v.iter().enumerate() {
            *m.at_mut(row, col) = x.clone();
        }
    }
    m
}

/// Structure constants of a list of forms that closes under the bracket
/// with real rational coefficients.
pub fn structure_constants(
    labels: &[String],
    basis: &[BilinearForm],
) -> Result<StructureConstants, BilinearError> {
    assert_eq!(labels.len(), basis.len(), "one label per basis form");
    let dim = basis.len();
    let solver = LinSolver::new(&coordinate_matrix(basis));
    if solver.rank() < dim {
        return Err(BilinearError::DependentBasis { rank: solver.rank(), dim });
    }
    let mut c = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let br = basis[i].bracket(&basis[j]);
            let x = solver.solve(&br.coordinates()).ok_or_else(|| BilinearError::NotClosed {
                i: labels[i].clone(),
                j: labels[j].clone(),
            })?;
            let mut sparse = Vec::new();
            for (k, v) in x.into_iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                if !v.is_real() {
                    return Err(BilinearError::ComplexStructure {
                        i: labels[i].clone(),
                        j: labels[j].clone(),
                    });
                }
                sparse.push((k, v.re));
            }
            c[j][i] = sparse.iter().map(|&(k, ref v)| (k, -v.clone())).collect();
            c[i][j] = sparse;
        }
    }
    StructureConstants::from_sparse(labels.to_vec(), c)
}

/// Realize a form as a sparse operator on a truncated 4-mode Fock space.
pub fn realize(
    form: &BilinearForm,
    basis: &Arc<FockBasis>,
) -> Result<SparseOperator, BilinearError> {
    if basis.modes() != MODES {
        return Err(BilinearError::WrongModeCount(basis.modes()));
    }
    let up: Vec<SparseOperator> = (0..MODES)
        .map(|m| ladder(LadderKind::Create, m, basis))
        .collect::<Result<_, _>>()?;
    let down: Vec<SparseOperator> = (0..MODES)
        .map(|m| ladder(LadderKind::Annihilate, m, basis))
        .collect::<Result<_, _>>()?;
    let mut out = SparseOperator::zero(basis);
    for i in 0..MODES {
        for j in 0..MODES {
            if !form.cross[i][j].is_zero() {
                let term = up[i].mul(&down[j])?.scale(form.cross[i][j].to_c64());
                out = out.add(&term)?;
            }
        }
    }
    for i in 0..MODES {
        for j in i..MODES {
            let pc = form.pair_monomial_coeff(&form.pair_create, i, j);
            if !pc.is_zero() {
                let term = up[i].mul(&up[j])?.scale(pc.to_c64());
                out = out.add(&term)?;
            }
            let pa = form.pair_monomial_coeff(&form.pair_annih, i, j);
            if !pa.is_zero() {
                let term = down[i].mul(&down[j])?.scale(pa.to_c64());
                out = out.add(&term)?;
            }
        }
    }
    if !form.scalar.is_zero() {
        out = out.add(&SparseOperator::identity(basis).scale(form.scalar.to_c64()))?;
    }
    Ok(out)
}
