//! Shared generators and independent reference solvers for integration tests.
//!
//! The reference solvers work on the covariance matrix directly (projected
//! gradient over `{Q ⪰ 0, tr Q ≤ P}`) and share no code with the rotation
//! parameterization under test.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use crm_precoder::linalg::CMatrix;
use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller.
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

/// Circularly-symmetric complex Gaussian matrix with unit-variance entries.
pub fn random_channel<R: Rng>(rng: &mut R, n: usize, m: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, m, |_, _| Complex::new(s * gaussian(rng), s * gaussian(rng)))
}

/// Random PSD matrix `A A^H` with the given rank, scaled to `trace`.
pub fn random_psd<R: Rng>(rng: &mut R, m: usize, rank: usize, trace: f64) -> CMatrix {
    let a = random_channel(rng, m, rank.max(1));
    let mut q = &a * a.adjoint();
    let t: f64 = (0..m).map(|i| q[(i, i)].re).sum();
    q *= Complex::new(trace / t, 0.0);
    hermitize(&mut q);
    q
}

pub fn hermitize(q: &mut CMatrix) {
    let h = (q.clone() + q.adjoint()) * Complex::new(0.5, 0.0);
    *q = h;
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `log2 det(I + H Q H^H)` via the eigenvalues of the Hermitian product.
pub fn rate(q: &CMatrix, h: &CMatrix) -> f64 {
    let n = h.nrows();
    let mut s = CMatrix::identity(n, n) + h * q * h.adjoint();
    hermitize(&mut s);
    let eig = nalgebra::SymmetricEigen::new(s);
    eig.eigenvalues.iter().map(|&l| l.max(f64::MIN_POSITIVE).log2()).sum()
}

/// `η tr(H Q H^H)`.
pub fn energy(q: &CMatrix, h: &CMatrix, eta: f64) -> f64 {
    let s = h * q * h.adjoint();
    eta * (0..s.nrows()).map(|i| s[(i, i)].re).sum::<f64>()
}

/// Euclidean projection onto `{x ≥ 0, Σx ≤ cap}` by bisection on the shift.
pub fn project_simplex(x: &[f64], cap: f64) -> Vec<f64> {
    let clipped: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= cap {
        return clipped;
    }
    let (mut lo, mut hi) = (0.0, x.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let s: f64 = x.iter().map(|v| (v - mid).max(0.0)).sum();
        if s > cap {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    x.iter().map(|v| (v - hi).max(0.0)).collect()
}

/// Projection of a Hermitian matrix onto `{Q ⪰ 0, tr Q ≤ cap}`.
pub fn project_psd(q: &CMatrix, cap: f64) -> CMatrix {
    let mut h = q.clone();
    hermitize(&mut h);
    let eig = nalgebra::SymmetricEigen::new(h);
    let lam = project_simplex(eig.eigenvalues.as_slice(), cap);
    let v = &eig.eigenvectors;
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        lam.len(),
        lam.iter().map(|&l| Complex::new(l, 0.0)),
    ));
    let mut out = v * d * v.adjoint();
    hermitize(&mut out);
    out
}

fn inner(a: &CMatrix, b: &CMatrix) -> f64 {
    // Re tr(A^H B)
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Maximizes `log2 det(I + H Q H^H) + tr(L Q)` over `{Q ⪰ 0, tr Q ≤ P}` by
/// projected gradient with an adaptive step and a sufficient-ascent test.
/// `linear` may be zero. Returns the maximizer.
pub fn projected_gradient(h: &CMatrix, linear: &CMatrix, power: f64, iters: usize) -> CMatrix {
    let m = h.ncols();
    let objective = |q: &CMatrix| rate(q, h) + inner(linear, q);
    let gradient = |q: &CMatrix| {
        let n = h.nrows();
        let s = CMatrix::identity(n, n) + h * q * h.adjoint();
        let inv = s.try_inverse().expect("I + HQH^H is invertible");
        let mut g = h.adjoint() * inv * h * Complex::new(1.0 / std::f64::consts::LN_2, 0.0) + linear;
        hermitize(&mut g);
        g
    };
    let mut q = CMatrix::identity(m, m) * Complex::new(power / m as f64, 0.0);
    let mut f = objective(&q);
    let mut step = 1.0;
    for _ in 0..iters {
        let g = gradient(&q);
        let mut accepted = false;
        for _ in 0..60 {
            let cand = project_psd(&(q.clone() + g.clone() * Complex::new(step, 0.0)), power);
            let d = &cand - &q;
            let fc = objective(&cand);
            // Quadratic lower model for an L-smooth concave function, L = 1/step.
            if fc >= f + inner(&g, &d) - frobenius(&d).powi(2) / (2.0 * step) {
                let moved = frobenius(&d);
                q = cand;
                f = fc;
                accepted = true;
                step *= 2.0;
                if moved < 1e-13 {
                    return q;
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    q
}

/// Capacity `max log2 det(I + H Q H^H)` by projected gradient.
pub fn wit_reference(h: &CMatrix, power: f64) -> f64 {
    let m = h.ncols();
    let q = projected_gradient(h, &CMatrix::zeros(m, m), power, 20_000);
    rate(&q, h)
}

/// Lagrange dual of the energy-constrained rate problem,
/// `D(ν) = max_Q R(Q) + ν (E(Q) - Ē)`. Every `D(ν)` bounds the primal
/// optimum from above and the minimum over `ν ≥ 0` equals it.
pub fn swipt_dual(h1: &CMatrix, h2: &CMatrix, eta: f64, power: f64, threshold: f64, nu: f64) -> (f64, f64) {
    let a = h2.adjoint() * h2 * Complex::new(eta * nu, 0.0);
    let q = projected_gradient(h1, &a, power, 5_000);
    let e = energy(&q, h2, eta);
    (rate(&q, h1) + nu * (e - threshold), e)
}

/// `min_ν D(ν)` by bracketing followed by golden-section search.
pub fn swipt_reference(h1: &CMatrix, h2: &CMatrix, eta: f64, power: f64, threshold: f64) -> f64 {
    let d = |nu: f64| swipt_dual(h1, h2, eta, power, threshold, nu);
    if d(0.0).1 >= threshold {
        return d(0.0).0;
    }
    let mut hi = 1e-3;
    while d(hi).1 < threshold && hi < 1e6 {
        hi *= 2.0;
    }
    let (mut a, mut b) = (0.0, hi);
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - gr * (b - a);
    let mut e = a + gr * (b - a);
    let (mut fc, mut fe) = (d(c).0, d(e).0);
    for _ in 0..60 {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - gr * (b - a);
            fc = d(c).0;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + gr * (b - a);
            fe = d(e).0;
        }
    }
    fc.min(fe)
}

/// Brute-force water-filling check: the best allocation on a simplex grid
/// with `steps` divisions per unit of power.
pub fn grid_best_allocation(gains: &[f64], power: f64, steps: usize) -> f64 {
    fn recurse(gains: &[f64], left: usize, unit: f64, acc: f64, best: &mut f64) {
        if gains.len() == 1 {
            let v = acc + (1.0 + gains[0] * left as f64 * unit).log2();
            *best = best.max(v);
            return;
        }
        for k in 0..=left {
            let v = acc + (1.0 + gains[0] * k as f64 * unit).log2();
            recurse(&gains[1..], left - k, unit, v, best);
        }
    }
    let mut best = f64::NEG_INFINITY;
    recurse(gains, steps, power / steps as f64, 0.0, &mut best);
    best
}

/// Central differences of `f` at `x` with absolute step `h`.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Unitary from rotation angles, written out independently of the library:
/// the complex Givens factors are multiplied in `(1,2), (1,3), ..., (m-1,m)` order.
pub fn reference_unitary(m: usize, thetas: &[f64], phis: &[f64]) -> CMatrix {
    let mut v = CMatrix::identity(m, m);
    let mut k = 0;
    for i in 0..m {
        for j in i + 1..m {
            let mut g = CMatrix::identity(m, m);
            let (c, s) = (thetas[k].cos(), thetas[k].sin());
            g[(i, i)] = Complex::new(c, 0.0);
            g[(j, j)] = Complex::new(c, 0.0);
            g[(i, j)] = -Complex::from_polar(s, -phis[k]);
            g[(j, i)] = Complex::from_polar(s, phis[k]);
            v *= g;
            k += 1;
        }
    }
    v
}

/// Rate `log2 det(I + H V Λ V^H H^H)` from a flat `[λ, θ, φ]` vector, using
/// only the reference unitary.
pub fn reference_rate_of_params(h: &CMatrix, x: &[f64]) -> f64 {
    let m = h.ncols();
    let pairs = m * (m - 1) / 2;
    let (lam, rest) = x.split_at(m);
    let (th, ph) = rest.split_at(pairs);
    let v = reference_unitary(m, th, ph);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(m, lam.iter().map(|&l| Complex::new(l, 0.0))));
    let q = &v * d * v.adjoint();
    rate(&q, h)
}
