//! Dense complex matrices and the handful of linear-algebra routines the rest
//! of the crate is built on.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Absolute and relative tolerance pair.
///
/// Two matrices agree when `|a - b|_F <= abs + rel * |b|_F`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !(abs >= 0.0 && rel >= 0.0) || (abs == 0.0 && rel == 0.0) || !abs.is_finite() || !rel.is_finite() {
            return Err(Error::Parse(format!("bad tolerance abs={abs} rel={rel}")));
        }
        Ok(Self { abs, rel })
    }

    pub fn accepts(&self, diff_norm: f64, reference_norm: f64) -> bool {
        diff_norm <= self.abs + self.rel * reference_norm
    }

    pub fn matrices_agree(&self, a: &CMatrix, b: &CMatrix) -> bool {
        a.shape() == b.shape() && self.accepts((a - b).norm(), b.norm())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-9 }
    }
}

/// Dense complex matrix in double precision.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| r(rows[i][j]))
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        Self::diag(&entries.iter().map(|&x| r(x)).collect::<Vec<_>>())
    }

    pub fn column(entries: &[C64]) -> Self {
        Self::from_fn(entries.len(), 1, |i, _| entries[i])
    }

    pub fn from_inner(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.0[(i, j)] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn col(&self, j: usize) -> Self {
        Self(self.0.columns(j, 1).into_owned())
    }

    pub fn columns(&self, start: usize, count: usize) -> Self {
        Self(self.0.columns(start, count).into_owned())
    }

    /// Horizontal concatenation of column blocks.
    pub fn hstack(blocks: &[CMatrix]) -> Self {
        let rows = blocks.first().map_or(0, CMatrix::rows);
        assert!(blocks.iter().all(|b| b.rows() == rows), "hstack row mismatch");
        let cols: usize = blocks.iter().map(CMatrix::cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            out.0.columns_mut(offset, b.cols()).copy_from(&b.0);
            offset += b.cols();
        }
        out
    }

    /// `self^dagger * other` for column vectors, i.e. the inner product.
    pub fn inner_product(&self, other: &CMatrix) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { op: "inverse", rows: self.rows(), cols: self.cols() });
        }
        let inv = self.0.clone().try_inverse().ok_or(Error::Singular("inverse"))?;
        let out = Self(inv);
        if !out.is_finite() {
            return Err(Error::Singular("inverse"));
        }
        Ok(out)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        (self - &self.dagger()).norm()
    }

    /// `|U U^dagger - I|_F`.
    pub fn unitarity_deviation(&self) -> f64 {
        (&(self * &self.dagger()) - &Self::identity(self.rows())).norm()
    }

    pub fn commutator(&self, other: &CMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.rows());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Row-major list of `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| [self.get(i, j).re, self.get(i, j).im]).collect())
            .collect()
    }
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.to_pairs();
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            let cells: Vec<String> = (0..self.cols()).map(|j| fmt_c(self.get(i, j))).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Compact complex formatting with near-zero parts suppressed.
pub fn fmt_c(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:>10.6}")
    } else if re == 0.0 {
        format!("{im:>9.6}i")
    } else {
        format!("{re:.6}{im:+.6}i")
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $f(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $f(self, rhs: CMatrix) -> CMatrix {
                CMatrix(self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<C64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, s: C64) -> CMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, s: f64) -> CMatrix {
        self.scale(r(s))
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix(a.0.kronecker(&b.0))
}

/// Relative Frobenius residual `|a - b| / max(1, |b|)`.
pub fn residual(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::Shape { op: "residual", left: a.shape(), right: b.shape() });
    }
    Ok((a - b).norm() / b.norm().max(1.0))
}

/// Operator on an `n_sites` spin-1 chain.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ChainOperator {
    pub n_sites: usize,
    pub matrix: CMatrix,
    pub label: String,
}

impl ChainOperator {
    pub fn new(n_sites: usize, matrix: CMatrix, label: impl Into<String>) -> Self {
        let dim = 3usize.pow(n_sites as u32);
        assert_eq!(matrix.shape(), (dim, dim), "chain operator must be 3^n square");
        Self { n_sites, matrix, label: label.into() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

pub(crate) fn check_pair(k: usize, l: usize, n: usize) -> Result<()> {
    if k >= 1 && k < l && l <= n {
        Ok(())
    } else {
        Err(Error::SiteIndex { k, l, n })
    }
}

/// Permutation matrix exchanging tensor factors `a` and `b` (1-based) of an
/// n-fold product of 3-dimensional spaces. Site 1 is the most significant digit.
pub fn factor_swap(a: usize, b: usize, n: usize) -> Result<CMatrix> {
    let (lo, hi) = (a.min(b), a.max(b));
    if lo == hi {
        if lo == 0 || lo > n {
            return Err(Error::SiteIndex { k: a, l: b, n });
        }
        return Ok(CMatrix::identity(3usize.pow(n as u32)));
    }
    check_pair(lo, hi, n)?;
    let dim = 3usize.pow(n as u32);
    let stride = |site: usize| 3usize.pow((n - site) as u32);
    let (sa, sb) = (stride(lo), stride(hi));
    let mut p = CMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let da = (idx / sa) % 3;
        let db = (idx / sb) % 3;
        let swapped = idx - da * sa - db * sb + db * sa + da * sb;
        p.set(swapped, idx, r(1.0));
    }
    Ok(p)
}

/// Embeds a two-site (9x9) operator on sites `k < l` of an `n`-site chain.
///
/// Adjacent pairs use a plain Kronecker product; otherwise factor `l` is
/// first swapped next to `k`.
pub fn embed_pair(op: &CMatrix, k: usize, l: usize, n: usize) -> Result<CMatrix> {
    check_pair(k, l, n)?;
    if op.shape() != (9, 9) {
        return Err(Error::Shape { op: "embed_pair", left: op.shape(), right: (9, 9) });
    }
    let left = CMatrix::identity(3usize.pow((k - 1) as u32));
    let right = CMatrix::identity(3usize.pow((n - k - 1) as u32));
    let adjacent = kron(&kron(&left, op), &right);
    if l == k + 1 {
        return Ok(adjacent);
    }
    let p = factor_swap(k + 1, l, n)?;
    Ok(&(&p * &adjacent) * &p)
}

/// Embeds a single-site (3x3) operator on site `k` of an `n`-site chain.
pub fn embed_site(op: &CMatrix, k: usize, n: usize) -> Result<CMatrix> {
    if k == 0 || k > n {
        return Err(Error::SiteIndex { k, l: k, n });
    }
    let left = CMatrix::identity(3usize.pow((k - 1) as u32));
    let right = CMatrix::identity(3usize.pow((n - k) as u32));
    Ok(kron(&kron(&left, op), &right))
}

/// Fixes the phase of a vector: the first entry of largest modulus becomes
/// real and positive.
pub fn fix_phase(v: &mut [C64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap_or(0);
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascending; each
/// eigenvector column phase-fixed with [`fix_phase`].
pub fn eig_hermitian(a: &CMatrix, tol: Tolerance) -> Result<(Vec<f64>, CMatrix)> {
    if !a.is_square() {
        return Err(Error::NotSquare { op: "eig_hermitian", rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(Error::NoConvergence);
    }
    let deviation = a.hermitian_deviation();
    if !tol.accepts(deviation, a.norm()) {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = &(a + &a.dagger()) * 0.5;
    let n = a.rows();
    let eig = nalgebra::SymmetricEigen::try_new(sym.0, f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut v: Vec<C64> = eig.eigenvectors.column(src).iter().copied().collect();
        fix_phase(&mut v);
        for (i, z) in v.into_iter().enumerate() {
            vectors.set(i, dst, z);
        }
    }
    Ok((values, vectors))
}

/// Matrix exponential by scaling and squaring a truncated Taylor series.
/// Limited to small matrices (dimension at most 8).
pub fn matexp(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare { op: "matexp", rows: a.rows(), cols: a.cols() });
    }
    if a.rows() > 8 {
        return Err(Error::TooLarge { dim: a.rows(), max: 8 });
    }
    let n = a.rows();
    let norm = a.norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a * 2f64.powi(-squarings);
    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=40 {
        term = &(&term * &scaled) * (1.0 / k as f64);
        sum = &sum + &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn kron_identity_and_diagonal() {
        assert_eq!(kron(&CMatrix::identity(2), &CMatrix::identity(3)), CMatrix::identity(6));
        let k = kron(&CMatrix::real_diag(&[1.0, 2.0]), &CMatrix::identity(2));
        assert_eq!(k, CMatrix::real_diag(&[1.0, 1.0, 2.0, 2.0]));
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (a, b, cc, d) = (random(&mut rng, 2), random(&mut rng, 2), random(&mut rng, 2), random(&mut rng, 2));
        let lhs = &kron(&a, &b) * &kron(&cc, &d);
        let rhs = kron(&(&a * &cc), &(&b * &d));
        assert!(residual(&lhs, &rhs).unwrap() < 1e-14);
    }

    #[test]
    fn residual_examples() {
        let id = CMatrix::identity(3);
        assert_eq!(residual(&id, &id).unwrap(), 0.0);
        assert!((residual(&CMatrix::zeros(3, 3), &id).unwrap() - 1.0).abs() < 1e-15);
        assert!((residual(&id, &(&id * 2.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(residual(&id, &CMatrix::identity(2)).is_err());
    }

    #[test]
    fn embed_pair_examples() {
        let id9 = CMatrix::identity(9);
        assert_eq!(embed_pair(&id9, 1, 2, 2).unwrap(), id9);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let op = random(&mut rng, 9);
        assert_eq!(embed_pair(&op, 1, 2, 3).unwrap(), kron(&op, &CMatrix::identity(3)));
        let far = embed_pair(&op, 1, 3, 4).unwrap();
        assert!((far.trace() - op.trace() * 9.0).norm() < 1e-12);
        assert!(embed_pair(&op, 2, 2, 3).is_err());
        assert!(embed_pair(&op, 1, 4, 3).is_err());
        assert!(embed_pair(&CMatrix::identity(3), 1, 2, 2).is_err());
    }

    #[test]
    fn embed_pair_matches_site_products() {
        // a (x) b on sites (1,3) must equal a_1 b_3 built from single-site embeddings.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b) = (random(&mut rng, 3), random(&mut rng, 3));
        let pair = embed_pair(&kron(&a, &b), 1, 3, 4).unwrap();
        let direct = &embed_site(&a, 1, 4).unwrap() * &embed_site(&b, 3, 4).unwrap();
        assert!(residual(&pair, &direct).unwrap() < 1e-14);
        let pair = embed_pair(&kron(&a, &b), 2, 4, 4).unwrap();
        let direct = &embed_site(&a, 2, 4).unwrap() * &embed_site(&b, 4, 4).unwrap();
        assert!(residual(&pair, &direct).unwrap() < 1e-14);
    }

    #[test]
    fn disjoint_pairs_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (x, y) = (random(&mut rng, 9), random(&mut rng, 9));
        let a = embed_pair(&x, 1, 3, 4).unwrap();
        let b = embed_pair(&y, 2, 4, 4).unwrap();
        assert!(a.commutator(&b).norm() < 1e-12);
    }

    #[test]
    fn eig_examples() {
        let tol = Tolerance::default();
        let (vals, _) = eig_hermitian(&CMatrix::real_diag(&[3.0, 1.0, 2.0]), tol).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
        let px = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let (vals, _) = eig_hermitian(&px, tol).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-15 && (vals[1] - 1.0).abs() < 1e-15);
        let bad = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&bad, tol), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_reconstruction_random_9x9() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random(&mut rng, 9);
        let h = &x + &x.dagger();
        let (vals, v) = eig_hermitian(&h, Tolerance::default()).unwrap();
        let lam = CMatrix::real_diag(&vals);
        assert!(residual(&(&h * &v), &(&v * &lam)).unwrap() < 1e-12);
        assert!(v.unitarity_deviation() < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for j in 0..9 {
            let col: Vec<C64> = (0..9).map(|i| v.get(i, j)).collect();
            let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = col.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap();
            assert!(pivot.im.abs() < 1e-14 && pivot.re > 0.0);
        }
    }

    #[test]
    fn matexp_examples() {
        assert_eq!(matexp(&CMatrix::zeros(3, 3)).unwrap(), CMatrix::identity(3));
        let e = matexp(&CMatrix::diag(&[c(0.0, std::f64::consts::PI), r(0.0)])).unwrap();
        assert!(residual(&e, &CMatrix::real_diag(&[-1.0, 1.0])).unwrap() < 1e-14);
        assert!(matches!(matexp(&CMatrix::identity(9)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn matexp_derivative_consistency() {
        // d/dt exp(tA) at t = 1 equals A exp(A).
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random(&mut rng, 4);
        let h = 1e-5;
        let fwd = matexp(&(&a * (1.0 + h))).unwrap();
        let bwd = matexp(&(&a * (1.0 - h))).unwrap();
        let numeric = &(&fwd - &bwd) * (0.5 / h);
        let exact = &a * &matexp(&a).unwrap();
        assert!(residual(&numeric, &exact).unwrap() < 1e-8);
        let inv = matexp(&(-&a)).unwrap();
        assert!(residual(&(&matexp(&a).unwrap() * &inv), &CMatrix::identity(4)).unwrap() < 1e-13);
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(-1.0, 1e-9).is_err());
        assert!(Tolerance::new(1e-10, 0.0).is_ok());
    }
}
