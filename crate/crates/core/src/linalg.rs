//! Small dense complex linear-algebra helpers shared by the solvers.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
pub use nalgebra::Complex;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex<f64>>;

pub const LN_2: f64 = std::f64::consts::LN_2;

pub fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest absolute deviation of `a` from its conjugate transpose.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Replaces `a` by `(a + a^H) / 2`.
pub fn symmetrize(a: &mut CMatrix) {
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)] = c(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
}

pub fn trace_re(a: &CMatrix) -> f64 {
    (0..a.nrows()).map(|i| a[(i, i)].re).sum()
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order. Ties keep the solver's original column order.
pub fn hermitian_eigen_desc(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        eig.eigenvalues[y]
            .partial_cmp(&eig.eigenvalues[x])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Natural-log determinant of a Hermitian positive definite matrix.
pub fn ln_det_hpd(a: CMatrix) -> Option<f64> {
    let chol = Cholesky::new(a)?;
    let l = chol.l_dirty();
    Some((0..l.nrows()).map(|i| 2.0 * l[(i, i)].re.ln()).sum())
}

/// `a b a^H` for Hermitian `b`, symmetrized.
pub fn congruence(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = a * b * a.adjoint();
    symmetrize(&mut out);
    out
}
