//! Gaussian Cayley matrices and Monte Carlo estimates of their expected norm.
//!
//! Every trial draws from its own ChaCha stream `(master_seed, trial)`, so an
//! estimate depends only on its inputs and not on how trials are scheduled
//! across threads. Reductions run sequentially in trial order.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{spectral_norm, LinearOp, Scalar, DEFAULT_NORM_TOL};
use crate::repr::IrrepSpectrum;
use crate::stats::mean_and_stderr;

pub const DEFAULT_TRIALS: usize = 1000;

/// A Gaussian matrix series `X = Σ_i x_i A_i`.
#[derive(Clone, Debug)]
pub enum GaussianSeries<'a> {
    /// `Σ_g x_g ρ(g)` with real standard Gaussian `x_g`.
    RealCayley(&'a FiniteGroup),
    /// `Σ_g z_g ρ(g)` with independent standard Gaussian real and imaginary parts.
    ComplexCayley(&'a FiniteGroup),
    /// Explicit coefficient matrices with real Gaussian weights.
    Explicit(Vec<DMatrix<Complex64>>),
}

impl<'a> GaussianSeries<'a> {
    /// Explicit series; all coefficients must be square of the same size.
    pub fn explicit(coefficients: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let first = coefficients.first().ok_or_else(|| Error::InvalidArgument("empty coefficient list".into()))?;
        let shape = first.shape();
        if shape.0 != shape.1 || coefficients.iter().any(|a| a.shape() != shape) {
            return Err(Error::InvalidArgument("coefficients must be square and share dimensions".into()));
        }
        Ok(GaussianSeries::Explicit(coefficients))
    }

    /// The Cayley family `{ρ(g)}` written out as dense coefficients.
    pub fn explicit_cayley(group: &FiniteGroup) -> Self {
        let n = group.order();
        let coefficients = (0..n)
            .map(|g| {
                let mut m = DMatrix::zeros(n, n);
                for (h, &gh) in group.row(g).iter().enumerate() {
                    m[(gh as usize, h)] = Complex64::new(1.0, 0.0);
                }
                m
            })
            .collect();
        GaussianSeries::Explicit(coefficients)
    }

    pub fn group(&self) -> Option<&'a FiniteGroup> {
        match self {
            GaussianSeries::RealCayley(g) | GaussianSeries::ComplexCayley(g) => Some(g),
            GaussianSeries::Explicit(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            GaussianSeries::RealCayley(g) | GaussianSeries::ComplexCayley(g) => g.order(),
            GaussianSeries::Explicit(c) => c[0].nrows(),
        }
    }

    /// One dense sample of `X`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DMatrix<Complex64> {
        match self {
            GaussianSeries::RealCayley(g) => {
                let x = real_gaussians(g.order(), rng);
                cayley_dense(g, &x).map(|v| Complex64::new(v, 0.0))
            }
            GaussianSeries::ComplexCayley(g) => cayley_dense(g, &complex_gaussians(g.order(), rng)),
            GaussianSeries::Explicit(coeffs) => {
                let d = coeffs[0].nrows();
                let mut out = DMatrix::zeros(d, d);
                for a in coeffs {
                    let x: f64 = rng.sample(StandardNormal);
                    out += a * Complex64::new(x, 0.0);
                }
                out
            }
        }
    }
}

/// Estimation route for `E‖X‖`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Norm of a sampled real Cayley matrix (or explicit series).
    DirectReal,
    /// Norm of a sampled complex Cayley matrix.
    DirectComplex,
    /// `√n · max_π ‖Z_π‖/√d_π` over independent complex Ginibre blocks,
    /// equal in distribution to the complex Cayley norm.
    Block,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::DirectReal => "direct_real",
            Method::DirectComplex => "direct_complex",
            Method::Block => "block",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct_real" | "real" => Ok(Method::DirectReal),
            "direct_complex" | "complex" => Ok(Method::DirectComplex),
            "block" => Ok(Method::Block),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

/// Monte Carlo estimate of an expected spectral norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
    pub method: Method,
}

/// Cayley matrix `Σ_g x_g ρ(g)` as a matrix-free operator.
/// Entry `(i, j)` is `x_{i j⁻¹}`.
pub struct CayleyOp<'a, T: Scalar> {
    group: &'a FiniteGroup,
    coeffs: &'a [T],
}

impl<'a, T: Scalar> CayleyOp<'a, T> {
    pub fn new(group: &'a FiniteGroup, coeffs: &'a [T]) -> Self {
        assert_eq!(coeffs.len(), group.order(), "one coefficient per group element");
        CayleyOp { group, coeffs }
    }
}

impl<T: Scalar> LinearOp<T> for CayleyOp<'_, T> {
    fn nrows(&self) -> usize {
        self.group.order()
    }

    fn ncols(&self) -> usize {
        self.group.order()
    }

    fn apply(&self, u: &DVector<T>) -> DVector<T> {
        let n = self.group.order();
        let mut out = DVector::<T>::zeros(n);
        for (g, &x) in self.coeffs.iter().enumerate() {
            // (ρ(g)u)_{gh} = u_h
            for (h, &gh) in self.group.row(g).iter().enumerate() {
                out[gh as usize] += x * u[h];
            }
        }
        out
    }

    fn apply_adjoint(&self, u: &DVector<T>) -> DVector<T> {
        let n = self.group.order();
        let mut out = DVector::<T>::zeros(n);
        for (g, &x) in self.coeffs.iter().enumerate() {
            let xc = x.conjugate();
            for (h, &gh) in self.group.row(g).iter().enumerate() {
                out[h] += xc * u[gh as usize];
            }
        }
        out
    }
}

/// Dense `Σ_g x_g ρ(g)`.
pub fn cayley_dense<T: Scalar>(group: &FiniteGroup, coeffs: &[T]) -> DMatrix<T> {
    let n = group.order();
    let mut m = DMatrix::<T>::zeros(n, n);
    for (g, &x) in coeffs.iter().enumerate() {
        for (h, &gh) in group.row(g).iter().enumerate() {
            m[(gh as usize, h)] = x;
        }
    }
    m
}

/// Dense sample of a Cayley-mode series. Explicit series are sampled as-is.
pub fn sample_cayley<R: Rng + ?Sized>(series: &GaussianSeries<'_>, rng: &mut R) -> DMatrix<Complex64> {
    series.sample(rng)
}

pub fn real_gaussians<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn complex_gaussians<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

/// RNG for trial `trial` under `master_seed`.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// One draw of `√n · max_π ‖Z_π‖/√d_π`.
pub fn sample_block_norm<R: Rng + ?Sized>(spectrum: &IrrepSpectrum, rng: &mut R) -> Result<f64> {
    let n = spectrum.sum_of_squares() as f64;
    let mut best: f64 = 0.0;
    for &d in &spectrum.degrees {
        let norm = if d == 1 {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)).norm()
        } else {
            let z = DMatrix::from_vec(d, d, complex_gaussians(d * d, rng));
            spectral_norm(&z, DEFAULT_NORM_TOL)?
        };
        best = best.max(norm / (d as f64).sqrt());
    }
    Ok(n.sqrt() * best)
}

/// One draw of `‖X‖` for the given series and direct method.
pub fn sample_direct_norm<R: Rng + ?Sized>(series: &GaussianSeries<'_>, rng: &mut R) -> Result<f64> {
    match series {
        GaussianSeries::RealCayley(g) => {
            let x = real_gaussians(g.order(), rng);
            spectral_norm(&CayleyOp::new(g, &x), DEFAULT_NORM_TOL)
        }
        GaussianSeries::ComplexCayley(g) => {
            let z = complex_gaussians(g.order(), rng);
            spectral_norm(&CayleyOp::new(g, &z), DEFAULT_NORM_TOL)
        }
        GaussianSeries::Explicit(_) => spectral_norm(&series.sample(rng), DEFAULT_NORM_TOL),
    }
}

/// Per-trial norms in trial order; trial `t` uses stream `(master_seed, t)`.
pub fn sample_norms(
    series: &GaussianSeries<'_>,
    trials: usize,
    method: Method,
    spectrum: Option<&IrrepSpectrum>,
    master_seed: u64,
) -> Result<Vec<f64>> {
    match (method, series) {
        (Method::DirectReal, GaussianSeries::RealCayley(_) | GaussianSeries::Explicit(_)) => {}
        (Method::DirectComplex, GaussianSeries::ComplexCayley(_)) => {}
        (Method::Block, GaussianSeries::ComplexCayley(g)) => {
            let s = spectrum.ok_or(Error::MissingSpectrum)?;
            if s.sum_of_squares() != g.order() {
                return Err(Error::InvalidArgument(format!(
                    "spectrum for order {} used with a group of order {}",
                    s.sum_of_squares(),
                    g.order()
                )));
            }
        }
        (Method::Block, _) if spectrum.is_none() => return Err(Error::MissingSpectrum),
        (m, _) => return Err(Error::InvalidArgument(format!("method {m} does not apply to this series"))),
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(master_seed, t);
            match method {
                Method::Block => sample_block_norm(spectrum.expect("checked above"), &mut rng),
                _ => sample_direct_norm(series, &mut rng),
            }
        })
        .collect()
}

/// Monte Carlo estimate of `E‖X‖`.
pub fn estimate_expected_norm(
    series: &GaussianSeries<'_>,
    trials: usize,
    method: Method,
    spectrum: Option<&IrrepSpectrum>,
    master_seed: u64,
) -> Result<NormEstimate> {
    if trials < 2 {
        return Err(Error::InvalidArgument("at least two trials are required".into()));
    }
    let norms = sample_norms(series, trials, method, spectrum, master_seed)?;
    let (mean, std_error) = mean_and_stderr(&norms);
    Ok(NormEstimate { mean, std_error, trials, method })
}

/// Series matching a method: real Cayley for `direct_real`, complex otherwise.
pub fn series_for(group: &FiniteGroup, method: Method) -> GaussianSeries<'_> {
    match method {
        Method::DirectReal => GaussianSeries::RealCayley(group),
        Method::DirectComplex | Method::Block => GaussianSeries::ComplexCayley(group),
    }
}
