//! Exact rational and rational-complex arithmetic with the small amount of
//! linear algebra the symmetry-descent chain needs: echelon reduction,
//! kernels, consistent solves against a fixed basis matrix, and signatures
//! of symmetric bilinear forms by congruence.  Everything here is exact;
//! floating point never enters.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Exact rational scalar.
pub type Rat = BigRational;

/// Rational from an integer pair; panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Rational-complex scalar `re + i*im` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatC {
    pub re: Rat,
    pub im: Rat,
}

impl RatC {
    pub fn new(re: Rat, im: Rat) -> Self {
        RatC { re, im }
    }

    pub fn zero() -> Self {
        RatC::default()
    }

    pub fn one() -> Self {
        RatC::new(Rat::one(), Rat::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        RatC::new(Rat::zero(), Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        RatC::new(rat_int(n), Rat::zero())
    }

    /// `num/den` as a real rational-complex scalar.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        RatC::new(rat(num, den), Rat::zero())
    }

    /// `(num/den) * i`.
    pub fn from_imag_ratio(num: i64, den: i64) -> Self {
        RatC::new(Rat::zero(), rat(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        RatC::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        let norm = &self.re * &self.re + &self.im * &self.im;
        assert!(!norm.is_zero(), "division by zero RatC");
        RatC::new(&self.re / &norm, -(&self.im / &norm))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().expect("rational out of f64 range"),
            self.im.to_f64().expect("rational out of f64 range"),
        )
    }
}

impl fmt::Debug for RatC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
        }
    }
}

impl Add for RatC {
    type Output = RatC;
    fn add(self, rhs: RatC) -> RatC {
        RatC::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<'a> Add<&'a RatC> for RatC {
    type Output = RatC;
    fn add(self, rhs: &'a RatC) -> RatC {
        RatC::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}

impl AddAssign<RatC> for RatC {
    fn add_assign(&mut self, rhs: RatC) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign<RatC> for RatC {
    fn sub_assign(&mut self, rhs: RatC) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl Sub for RatC {
    type Output = RatC;
    fn sub(self, rhs: RatC) -> RatC {
        RatC::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for RatC {
    type Output = RatC;
    fn mul(self, rhs: RatC) -> RatC {
        &self * &rhs
    }
}

impl<'a, 'b> Mul<&'b RatC> for &'a RatC {
    type Output = RatC;
    fn mul(self, rhs: &'b RatC) -> RatC {
        RatC::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for RatC {
    type Output = RatC;
    fn neg(self) -> RatC {
        RatC::new(-self.re, -self.im)
    }
}

/// Dense matrix over [`RatC`], row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<RatC>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![RatC::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for k in 0..n {
            *m.at_mut(k, k) = RatC::one();
        }
        m
    }

    /// Build from row vectors; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<RatC>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, r: usize, c: usize) -> &RatC {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut RatC {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[RatC] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix product.
    pub fn mul_mat(&self, rhs: &RatMat) -> RatMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = RatMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    *out.at_mut(i, j) += a * b;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[RatC]) -> Vec<RatC> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = RatC::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += self.at(i, j) * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn commutator(&self, rhs: &RatMat) -> RatMat {
        let mut ab = self.mul_mat(rhs);
        let ba = rhs.mul_mat(self);
        for (x, y) in ab.data.iter_mut().zip(ba.data) {
            *x -= y;
        }
        ab
    }

    pub fn transpose(&self) -> RatMat {
        let mut out = RatMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn add(&self, rhs: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&rhs.data) {
            *x += y.clone();
        }
        out
    }

    pub fn sub(&self, rhs: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&rhs.data) {
            *x -= y.clone();
        }
        out
    }

    pub fn scale(&self, factor: &RatC) -> RatMat {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = &*x * factor;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatC::is_zero)
    }

    /// Reduce to row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.at(r, c).inv();
            for j in c..self.cols {
                let v = self.at(r, j).clone();
                *self.at_mut(r, j) = &v * &inv;
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in c..self.cols {
                        let sub = &f * self.at(r, j);
                        *self.at_mut(i, j) -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the right kernel `{x : Mx = 0}`.
    pub fn null_space(&self) -> Vec<Vec<RatC>> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![RatC::zero(); self.cols];
                v[fc] = RatC::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.at(row, fc).clone();
                }
                v
            })
            .collect()
    }
}

/// Prefactored solver for repeated consistent solves `A x = b` against a
/// fixed (not necessarily square) matrix `A`.
pub struct LinSolver {
    /// Echelon form of `A` with the reducing transform applied to `I`.
    echelon: RatMat,
    transform: RatMat,
    pivots: Vec<usize>,
    rows: usize,
    cols: usize,
}

impl LinSolver {
    pub fn new(a: &RatMat) -> Self {
        // Reduce [A | I] so the same row operations can be replayed on any b.
        let mut aug = RatMat::zeros(a.rows, a.cols + a.rows);
        for r in 0..a.rows {
            for c in 0..a.cols {
                *aug.at_mut(r, c) = a.at(r, c).clone();
            }
            *aug.at_mut(r, a.cols + r) = RatC::one();
        }
        // Row-reduce using only the first `a.cols` columns for pivots.
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&i| !aug.at(i, c).is_zero()) else {
                continue;
            };
            aug.swap_rows(row, p);
            let inv = aug.at(row, c).inv();
            for j in 0..aug.cols {
                let v = aug.at(row, j).clone();
                *aug.at_mut(row, j) = &v * &inv;
            }
            for i in 0..a.rows {
                if i != row && !aug.at(i, c).is_zero() {
                    let f = aug.at(i, c).clone();
                    for j in 0..aug.cols {
                        let sub = &f * aug.at(row, j);
                        *aug.at_mut(i, j) -= sub;
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        let mut echelon = RatMat::zeros(a.rows, a.cols);
        let mut transform = RatMat::zeros(a.rows, a.rows);
        for r in 0..a.rows {
            for c in 0..a.cols {
                *echelon.at_mut(r, c) = aug.at(r, c).clone();
            }
            for c in 0..a.rows {
                *transform.at_mut(r, c) = aug.at(r, a.cols + c).clone();
            }
        }
        LinSolver { echelon, transform, pivots, rows: a.rows, cols: a.cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solve `A x = b` exactly; `None` when the system is inconsistent.
    pub fn solve(&self, b: &[RatC]) -> Option<Vec<RatC>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let y = self.transform.mul_vec(b);
        let mut x = vec![RatC::zero(); self.cols];
        for (row, &pc) in self.pivots.iter().enumerate() {
            x[pc] = y[row].clone();
        }
        // Rows past the pivot count must have vanished for consistency.
        for (row, yv) in y.iter().enumerate() {
            if row >= self.pivots.len() && !yv.is_zero() {
                return None;
            }
        }
        // Echelon rows are fully reduced (RREF), so pivot assignment solves
        // the system provided the free columns of the echelon form are zero
        // on every pivot row paired with a nonzero coefficient; verify by
        // substitution to stay honest even for degenerate bases.
        let residual_ok = {
            let mut ok = true;
            'rows: for r in 0..self.rows {
                let mut acc = RatC::zero();
                for c in 0..self.cols {
                    if !x[c].is_zero() {
                        acc += self.echelon.at(r, c) * &x[c];
                    }
                }
                let rhs = &y[r];
                if acc != *rhs {
                    ok = false;
                    break 'rows;
                }
            }
            ok
        };
        if residual_ok {
            Some(x)
        } else {
            None
        }
    }
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix with real
/// rational entries, computed by exact congruence diagonalization.
pub fn symmetric_signature(m: &RatMat) -> (usize, usize, usize) {
    let n = m.rows;
    assert_eq!(m.rows, m.cols, "signature needs a square matrix");
    let mut a = vec![vec![Rat::zero(); n]; n];
    for r in 0..n {
        for c in 0..n {
            let v = m.at(r, c);
            assert!(v.is_real(), "signature needs a real symmetric matrix");
            a[r][c] = v.re.clone();
        }
    }
    for r in 0..n {
        for c in 0..n {
            assert_eq!(a[r][c], a[c][r], "matrix not symmetric");
        }
    }
    let (mut pos, mut neg) = (0usize, 0usize);
    for k in 0..n {
        if a[k][k].is_zero() {
            // Bring a nonzero onto the diagonal: prefer a later diagonal
            // entry, otherwise fold in a row with a nonzero off-diagonal.
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // Congruence by (row_k += row_j; col_k += col_j) turns the
                // zero diagonal into 2*a[k][j] != 0 (characteristic zero).
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                continue; // row and column k are identically zero
            }
        }
        let d = a[k][k].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &d;
            for c in 0..n {
                let sub = &f * &a[k][c];
                a[r][c] -= sub;
            }
            for c in 0..n {
                let sub = &f * &a[c][k];
                a[c][r] -= sub.clone();
            }
        }
    }
    (pos, neg, n - pos - neg)
}
