//! Spectral norms of dense and matrix-free operators.
//!
//! The norm is the square root of the top eigenvalue of `A*A`, found by
//! restarted Lanczos iteration with full reorthogonalisation. Each call runs
//! from a fixed-seed start vector and again from a second, independently
//! seeded start, keeping the larger estimate.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub const DEFAULT_NORM_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 10_000;

const START_SEED: u64 = 0x51e7_a11c_e0f0_0001;
const RESTART_SEED: u64 = 0x51e7_a11c_e0f0_0002;
/// Largest Krylov basis kept before an explicit restart.
const MAX_BASIS: usize = 96;

/// Scalar types the norm routines accept: `f64` and `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy {}
impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// A linear map `C^ncols -> C^nrows` with access to its adjoint.
pub trait LinearOp<T: Scalar> {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &DVector<T>) -> DVector<T>;
    fn apply_adjoint(&self, y: &DVector<T>) -> DVector<T>;
}

impl<T: Scalar> LinearOp<T> for DMatrix<T> {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn apply(&self, x: &DVector<T>) -> DVector<T> {
        self * x
    }

    fn apply_adjoint(&self, y: &DVector<T>) -> DVector<T> {
        self.ad_mul(y)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NormOptions {
    /// Relative tolerance on the top eigenvalue of `A*A`.
    pub tol: f64,
    /// Cap on the total number of `A*A` products per start vector.
    pub max_iter: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions { tol: DEFAULT_NORM_TOL, max_iter: DEFAULT_MAX_ITER }
    }
}

/// Result of a single Lanczos run: `sigma` is the norm estimate and `vector`
/// an approximate top right singular vector.
#[derive(Clone, Debug)]
pub struct TopSingular<T: Scalar> {
    pub sigma: f64,
    pub vector: DVector<T>,
    pub iterations: usize,
}

/// Largest singular value of `op` to relative tolerance `tol`.
pub fn spectral_norm<T: Scalar, A: LinearOp<T> + ?Sized>(op: &A, tol: f64) -> Result<f64> {
    spectral_norm_with(op, NormOptions { tol, ..NormOptions::default() })
}

pub fn spectral_norm_with<T: Scalar, A: LinearOp<T> + ?Sized>(op: &A, opts: NormOptions) -> Result<f64> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let n = op.ncols();
    if n == 0 || op.nrows() == 0 {
        return Ok(0.0);
    }
    let first = top_singular(op, &seeded_start(n, START_SEED), opts)?;
    let second = top_singular(op, &seeded_start(n, RESTART_SEED), opts)?;
    let sigma = first.sigma.max(second.sigma);
    if !sigma.is_finite() {
        return Err(Error::InvalidArgument("operator has non-finite entries".into()));
    }
    Ok(sigma)
}

/// Runs restarted Lanczos on `A*A` from `start`. Used directly for
/// warm-started re-evaluation after small perturbations of `A`.
pub fn top_singular<T: Scalar, A: LinearOp<T> + ?Sized>(
    op: &A,
    start: &DVector<T>,
    opts: NormOptions,
) -> Result<TopSingular<T>> {
    let n = op.ncols();
    assert_eq!(start.len(), n, "start vector has the wrong length");
    let mut v = start.clone();
    let nv = v.norm();
    if nv == 0.0 || !nv.is_finite() {
        v = seeded_start(n, START_SEED);
    } else {
        v.unscale_mut(nv);
    }
    let gram = |x: &DVector<T>| op.apply_adjoint(&op.apply(x));
    let basis_cap = n.min(MAX_BASIS);

    let mut used = 0usize;
    loop {
        let mut basis: Vec<DVector<T>> = Vec::with_capacity(basis_cap);
        let mut alpha: Vec<f64> = Vec::with_capacity(basis_cap);
        let mut beta: Vec<f64> = Vec::with_capacity(basis_cap);
        basis.push(v.clone());
        let mut step = 0;
        loop {
            let q = &basis[step];
            let mut w = gram(q);
            used += 1;
            let a = q.dotc(&w).real();
            alpha.push(a);
            // full reorthogonalisation, applied twice
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dotc(&w);
                    w.axpy(-c, b, T::one());
                }
            }
            let b_next = w.norm();
            beta.push(b_next);
            step += 1;

            let exhausted = step == basis_cap || used >= opts.max_iter;
            let check = step <= 8 || step % 4 == 0 || exhausted;
            let (theta, coeffs) = if check || b_next == 0.0 {
                top_tridiagonal(&alpha, &beta[..step - 1])
            } else {
                basis.push(w.unscale(b_next));
                continue;
            };
            let scale = theta.abs().max(f64::MIN_POSITIVE);
            let residual = b_next * coeffs[step - 1].abs();
            let invariant = b_next <= 1e-14 * alpha.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
            if residual <= opts.tol * scale || invariant || theta == 0.0 {
                let vec = ritz_vector(&basis, &coeffs);
                return Ok(TopSingular { sigma: theta.max(0.0).sqrt(), vector: vec, iterations: used });
            }
            if exhausted {
                if used >= opts.max_iter {
                    return Err(Error::NonConvergence { iterations: used, residual: residual / scale });
                }
                v = ritz_vector(&basis, &coeffs);
                break;
            }
            basis.push(w.unscale(b_next));
        }
    }
}

fn ritz_vector<T: Scalar>(basis: &[DVector<T>], coeffs: &[f64]) -> DVector<T> {
    let mut y = DVector::<T>::zeros(basis[0].len());
    for (b, &c) in basis.iter().zip(coeffs) {
        y.axpy(T::from_real(c), b, T::one());
    }
    let norm = y.norm();
    if norm > 0.0 {
        y.unscale_mut(norm);
    }
    y
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`, together with its unit eigenvector.
fn top_tridiagonal(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = t.symmetric_eigen();
    let (idx, theta) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, x)| if x > best.1 { (i, x) } else { best });
    (theta, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// Unit start vector with i.i.d. Gaussian entries from a fixed seed.
pub fn seeded_start<T: Scalar>(n: usize, seed: u64) -> DVector<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::<T>::from_fn(n, |_, _| {
        let x: f64 = StandardNormal.sample(&mut rng);
        T::from_real(x)
    });
    let norm = v.norm();
    v.unscale_mut(norm);
    v
}

/// Self-adjoint dilation `[[0, A*], [A, 0]]`, which has the same norm as `A`.
pub fn dilate<T: Scalar>(a: &DMatrix<T>) -> DMatrix<T> {
    let (r, c) = a.shape();
    let mut out = DMatrix::<T>::zeros(r + c, r + c);
    out.view_mut((0, c), (c, r)).copy_from(&a.adjoint());
    out.view_mut((c, 0), (r, c)).copy_from(a);
    out
}

/// True when `a` equals its adjoint to within `tol` entrywise.
pub fn is_self_adjoint<T: Scalar>(a: &DMatrix<T>, tol: f64) -> bool {
    a.is_square() && (a - a.adjoint()).iter().all(|x| x.modulus() <= tol)
}
