//! Complex rotation modeling of transmit covariance matrices.
//!
//! A covariance `Q = V Λ V^H` is described by `m` power weights (the
//! diagonal of `Λ`) and `m(m-1)/2` complex Givens rotations whose ordered
//! product is the unitary `V`:
//!
//! ```text
//! V = V(1,2) V(1,3) ... V(1,m) V(2,3) ... V(m-1,m)
//! ```
//!
//! Each rotation `V(i,j)` is the identity except for the block
//!
//! ```text
//! [ cos θ             -exp(-iφ) sin θ ]
//! [ exp(iφ) sin θ      cos θ          ]
//! ```
//!
//! on rows/columns `i` and `j`. The semidefinite and trace constraints on `Q`
//! become the linear constraints `λ ≥ 0`, `Σλ ≤ P`, and the angles are free.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, Complex};

/// Absolute tolerance for the Hermitian check, scaled by `max(1, max|q_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;
/// Slack allowed on the trace budget.
pub const TRACE_TOL: f64 = 1e-9;

/// Number of index pairs `(i, j)` with `i < j` for `m` antennas.
pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Iterates the index pairs in product order (`i` outer, `j` inner), 0-based.
pub fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |i| ((i + 1)..m).map(move |j| (i, j)))
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a % (2.0 * PI);
    if w <= -PI {
        w += 2.0 * PI;
    } else if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Rotation parameter vector `r = [λ, θ, φ]`.
///
/// Stored flat in that order so optimizers can address every coordinate by a
/// single index. Feasibility (`λ ≥ 0`, `Σλ ≤ P`) is not enforced by the type.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationParams {
    m: usize,
    values: Vec<f64>,
}

impl RotationParams {
    pub fn new(lambdas: Vec<f64>, thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        let m = lambdas.len();
        if m == 0 {
            return Err(Error::InvalidArgument("at least one antenna is required".into()));
        }
        let p = pair_count(m);
        if thetas.len() != p || phis.len() != p {
            return Err(Error::Dimension(format!(
                "{m} antennas need {p} theta and {p} phi angles, got {} and {}",
                thetas.len(),
                phis.len()
            )));
        }
        let mut values = lambdas;
        values.extend(thetas);
        values.extend(phis);
        Ok(Self { m, values })
    }

    /// All angles zero, all weights zero.
    pub fn zeros(m: usize) -> Self {
        assert!(m > 0, "at least one antenna is required");
        Self { m, values: vec![0.0; m * m] }
    }

    /// Builds parameters from the flat `[λ, θ, φ]` vector of length `m²`.
    pub fn from_vector(m: usize, values: Vec<f64>) -> Result<Self> {
        if m == 0 || values.len() != m * m {
            return Err(Error::Dimension(format!(
                "parameter vector for {m} antennas must have {} entries, got {}",
                m * m,
                values.len()
            )));
        }
        Ok(Self { m, values })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Total number of real parameters, `m + m(m-1)`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vector(self) -> Vec<f64> {
        self.values
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.values[..self.m]
    }

    pub fn lambdas_mut(&mut self) -> &mut [f64] {
        &mut self.values[..self.m]
    }

    pub fn thetas(&self) -> &[f64] {
        let p = pair_count(self.m);
        &self.values[self.m..self.m + p]
    }

    pub fn phis(&self) -> &[f64] {
        let p = pair_count(self.m);
        &self.values[self.m + p..]
    }

    /// Number of rotation angles, `m(m-1)`.
    pub fn angle_count(&self) -> usize {
        2 * pair_count(self.m)
    }

    pub fn total_power(&self) -> f64 {
        self.lambdas().iter().sum()
    }

    /// Copy with every angle wrapped into `(-π, π]`.
    pub fn wrapped(&self) -> Self {
        let mut out = self.clone();
        for a in &mut out.values[self.m..] {
            *a = wrap_angle(*a);
        }
        out
    }

    /// The unitary `V` for these angles.
    pub fn unitary(&self) -> CMatrix {
        let m = self.m;
        let mut v = linalg::identity(m);
        for ((i, j), (&theta, &phi)) in pairs(m).zip(self.thetas().iter().zip(self.phis())) {
            right_rotate(&mut v, i, j, theta, phi);
        }
        v
    }

    /// `V Λ V^H` without any feasibility check on `λ`.
    pub fn covariance_matrix(&self) -> CMatrix {
        let v = self.unitary();
        covariance_from(&v, self.lambdas())
    }
}

/// `V diag(λ) V^H`, assembled Hermitian by construction.
pub(crate) fn covariance_from(v: &CMatrix, lambdas: &[f64]) -> CMatrix {
    let m = v.nrows();
    let mut q = CMatrix::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let mut acc = Complex::new(0.0, 0.0);
            for (k, &lam) in lambdas.iter().enumerate() {
                acc += v[(a, k)] * v[(b, k)].conj() * lam;
            }
            if a == b {
                q[(a, a)] = c(acc.re, 0.0);
            } else {
                q[(a, b)] = acc;
                q[(b, a)] = acc.conj();
            }
        }
    }
    q
}

/// `v <- v · G(i, j)`, touching only columns `i` and `j`.
fn right_rotate(v: &mut CMatrix, i: usize, j: usize, theta: f64, phi: f64) {
    let (s, co) = theta.sin_cos();
    let e = Complex::from_polar(1.0, phi);
    let to_i = e * s; // G[j, i]
    let to_j = -e.conj() * s; // G[i, j]
    for r in 0..v.nrows() {
        let vi = v[(r, i)];
        let vj = v[(r, j)];
        v[(r, i)] = vi * co + vj * to_i;
        v[(r, j)] = vi * to_j + vj * co;
    }
}

/// The `m × m` complex Givens block `V(i, j)`; indices are 1-based.
pub fn givens_block(m: usize, i: usize, j: usize, theta: f64, phi: f64) -> Result<CMatrix> {
    if i < 1 || i >= j || j > m {
        return Err(Error::InvalidArgument(format!(
            "rotation indices must satisfy 1 <= i < j <= {m}, got ({i}, {j})"
        )));
    }
    let (s, co) = theta.sin_cos();
    let e = Complex::from_polar(1.0, phi);
    let mut g = linalg::identity(m);
    let (a, b) = (i - 1, j - 1);
    g[(a, a)] = c(co, 0.0);
    g[(a, b)] = -e.conj() * s;
    g[(b, a)] = e * s;
    g[(b, b)] = c(co, 0.0);
    Ok(g)
}

/// Ordered product of Givens blocks for `params`.
pub fn build_unitary(params: &RotationParams) -> CMatrix {
    params.unitary()
}

/// Hermitian positive semidefinite transmit covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariance {
    matrix: CMatrix,
    budget: Option<f64>,
}

impl Covariance {
    /// Validates that `matrix` is square, Hermitian and PSD. The stored matrix
    /// is symmetrized so downstream code sees an exactly Hermitian value.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let (r, cols) = matrix.shape();
        if r != cols || r == 0 {
            return Err(Error::Dimension(format!("covariance must be square, got {r}x{cols}")));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("covariance has non-finite entries".into()));
        }
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL * linalg::max_abs(&matrix).max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        let mut matrix = matrix;
        linalg::symmetrize(&mut matrix);
        let min_eig = nalgebra::SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_TOL {
            return Err(Error::NotPsd(min_eig));
        }
        Ok(Self { matrix, budget: None })
    }

    /// Like [`Covariance::new`], additionally checking `trace ≤ budget`.
    pub fn with_budget(matrix: CMatrix, budget: f64) -> Result<Self> {
        let mut cov = Self::new(matrix)?;
        let tr = cov.trace();
        if tr > budget + TRACE_TOL {
            return Err(Error::Infeasible(format!("trace {tr} exceeds power budget {budget}")));
        }
        cov.budget = Some(budget);
        Ok(cov)
    }

    /// The `m × m` zero covariance.
    pub fn zeros(m: usize) -> Self {
        Self { matrix: CMatrix::zeros(m, m), budget: None }
    }

    pub(crate) fn from_hermitian_unchecked(matrix: CMatrix) -> Self {
        Self { matrix, budget: None }
    }

    pub fn m(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn budget(&self) -> Option<f64> {
        self.budget
    }

    pub fn trace(&self) -> f64 {
        linalg::trace_re(&self.matrix)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen_desc(&self.matrix).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    pub fn tagged(mut self, budget: f64) -> Self {
        self.budget = Some(budget);
        self
    }
}

/// `Q = V Λ V^H` for a feasible parameter vector.
pub fn build_covariance(params: &RotationParams) -> Result<Covariance> {
    if let Some((i, &l)) = params.lambdas().iter().enumerate().find(|(_, &l)| l < 0.0 || !l.is_finite()) {
        return Err(Error::Infeasible(format!("power weight lambda[{i}] = {l} must be >= 0")));
    }
    if params.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("rotation angles must be finite".into()));
    }
    Ok(Covariance::from_hermitian_unchecked(params.covariance_matrix()))
}

/// Gradient with respect to `r = [λ, θ, φ]` of a function of `Q(r)` whose
/// Euclidean gradient in `Q` is the Hermitian matrix `grad_q`, meaning
/// `df = Re tr(grad_q · dQ)`.
///
/// Writing `V = L_p G_p R_p` around block `p`, the angle derivatives are
/// `2 Re tr(M_p ∂G_p)` with `M_p = R_p Λ V^H grad_q L_p`. The matrices obey
/// `M_1 = G_1^H Q grad_q` and `M_{p+1} = G_{p+1}^H M_p G_p`, so the whole
/// gradient costs one matrix product plus two rotations per block.
pub fn covariance_chain_rule(params: &RotationParams, grad_q: &CMatrix) -> Vec<f64> {
    let m = params.m();
    let p = pair_count(m);
    let v = params.unitary();
    let q = covariance_from(&v, params.lambdas());
    let mut out = vec![0.0; m * m];

    let vgv = v.adjoint() * grad_q * &v;
    for i in 0..m {
        out[i] = vgv[(i, i)].re;
    }

    let mut acc = q * grad_q;
    for (k, (i, j)) in pairs(m).enumerate() {
        let theta = params.thetas()[k];
        let phi = params.phis()[k];
        left_rotate_adjoint(&mut acc, i, j, theta, phi);
        let (s, co) = theta.sin_cos();
        let e = Complex::from_polar(1.0, phi);
        let (mii, mij, mji, mjj) = (acc[(i, i)], acc[(i, j)], acc[(j, i)], acc[(j, j)]);
        // ∂G/∂θ = [[-s, -e* c], [e c, -s]];  ∂G/∂φ = [[0, i e* s], [i e s, 0]].
        let d_theta = (mii + mjj) * (-s) + mij * (e * co) + mji * (-e.conj() * co);
        let iu = Complex::new(0.0, 1.0);
        let d_phi = mij * (iu * e * s) + mji * (iu * e.conj() * s);
        out[m + k] = 2.0 * d_theta.re;
        out[m + p + k] = 2.0 * d_phi.re;
        right_rotate(&mut acc, i, j, theta, phi);
    }
    out
}

/// Recovers rotation parameters reproducing `q` under [`build_covariance`].
///
/// The eigenvectors of `q` (eigenvalues descending) form a unitary `U`.
/// Applying `G(i,j)^H` from the left in product order clears column `i`
/// below the diagonal one entry at a time, with pivot row `i`. What remains
/// is a diagonal of unit phases, which are absorbed into the eigenvector
/// phase freedom, so `V Λ V^H = U Λ U^H`.
pub fn decompose_covariance(q: &Covariance) -> Result<RotationParams> {
    let m = q.m();
    let dev = linalg::hermitian_deviation(q.matrix());
    if dev > HERMITIAN_TOL * linalg::max_abs(q.matrix()).max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let (values, mut u) = linalg::hermitian_eigen_desc(q.matrix());
    if let Some(&min) = values.last() {
        if min < PSD_TOL {
            return Err(Error::NotPsd(min));
        }
    }
    let lambdas: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    let p = pair_count(m);
    let mut thetas = Vec::with_capacity(p);
    let mut phis = Vec::with_capacity(p);
    for (i, j) in pairs(m) {
        // Column i is the one being reduced at this stage.
        let a = u[(i, i)];
        let b = u[(j, i)];
        let (theta, phi) = solve_rotation(a, b);
        left_rotate_adjoint(&mut u, i, j, theta, phi);
        thetas.push(theta);
        phis.push(phi);
    }
    RotationParams::new(lambdas, thetas, phis)
}

/// Angles such that `G^H` maps `(a, b)` on rows `(i, j)` to `(·, 0)`.
fn solve_rotation(a: Complex<f64>, b: Complex<f64>) -> (f64, f64) {
    let (ra, rb) = (a.norm(), b.norm());
    if rb == 0.0 {
        return (0.0, 0.0);
    }
    let theta = rb.atan2(ra);
    let phi = if ra == 0.0 { b.arg() } else { wrap_angle(b.arg() - a.arg()) };
    (theta, phi)
}

/// `u <- G(i, j)^H · u`, touching only rows `i` and `j`.
fn left_rotate_adjoint(u: &mut CMatrix, i: usize, j: usize, theta: f64, phi: f64) {
    let (s, co) = theta.sin_cos();
    let e = Complex::from_polar(1.0, phi);
    for col in 0..u.ncols() {
        let ui = u[(i, col)];
        let uj = u[(j, col)];
        u[(i, col)] = ui * co + e.conj() * s * uj;
        u[(j, col)] = -e * s * ui + uj * co;
    }
}

/// Linear constraint system `A r ≤ b` of the rotation model.
///
/// Rows `1..m` encode `-λ_i ≤ 0` and row `m+1` encodes `Σλ_i ≤ P`; every
/// angle column is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraintSystem {
    m: usize,
    a: DMatrix<f64>,
    b: DVector<f64>,
}

impl LinearConstraintSystem {
    pub fn new(m: usize, power: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("at least one antenna is required".into()));
        }
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::InvalidArgument(format!("power budget must be positive, got {power}")));
        }
        let n = m * m;
        let mut a = DMatrix::zeros(m + 1, n);
        for i in 0..m {
            a[(i, i)] = -1.0;
            a[(m, i)] = 1.0;
        }
        let mut b = DVector::zeros(m + 1);
        b[m] = power;
        Ok(Self { m, a, b })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn power(&self) -> f64 {
        self.b[self.m]
    }

    /// `A r - b`; non-positive entries are satisfied rows.
    pub fn residuals(&self, params: &RotationParams) -> Vec<f64> {
        let r = DVector::from_column_slice(params.as_slice());
        (&self.a * r - &self.b).iter().copied().collect()
    }

    pub fn is_satisfied(&self, params: &RotationParams, tol: f64) -> bool {
        params.m() == self.m && self.residuals(params).iter().all(|&x| x <= tol)
    }

    /// Euclidean projection of the λ-block onto `{λ ≥ 0, Σλ ≤ P}`.
    pub fn project(&self, params: &mut RotationParams) {
        project_capped_simplex(params.lambdas_mut(), self.power());
    }
}

/// Projects `x` onto `{x ≥ 0, Σx ≤ cap}` in place.
pub fn project_capped_simplex(x: &mut [f64], cap: f64) {
    let clipped: f64 = x.iter().map(|v| v.max(0.0)).sum();
    if clipped <= cap {
        for v in x.iter_mut() {
            *v = v.max(0.0);
        }
        return;
    }
    // Sort-based projection onto the simplex {x ≥ 0, Σx = cap}.
    let mut sorted: Vec<f64> = x.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumulative = 0.0;
    let mut tau = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let t = (cumulative - cap) / (k as f64 + 1.0);
        if v - t > 0.0 {
            tau = t;
        }
    }
    for v in x.iter_mut() {
        *v = (*v - tau).max(0.0);
    }
}
