//! Matrix-variance parameters and the `m(G)` functional.
//!
//! For Cayley families the quantities have closed forms (`σ = √n`,
//! `v = √(2n)`); generic routines for explicit coefficient lists are kept
//! alongside so the closed forms can be checked against direct computation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{dilate, is_self_adjoint, spectral_norm, LinearOp};
use crate::repr::IrrepSpectrum;
use crate::sampler::{CayleyOp, GaussianSeries};

/// Largest coefficient dimension accepted by [`sigma_of`] in explicit mode.
pub const SIGMA_DIM_CAP: usize = 256;
/// Largest (possibly dilated) dimension accepted by the generic covariance route.
pub const V_DIM_CAP: usize = 64;
/// Relative tolerance for the `‖S‖ = n` identity.
pub const S_NORM_REL_TOL: f64 = 1e-8;

const GRID_POINTS: usize = 10_000;
const NORM_TOL: f64 = 1e-12;

/// `σ(X) = ‖Σ Ã_i²‖^{1/2}` over the dilated family.
pub fn sigma_of(series: &GaussianSeries<'_>) -> Result<f64> {
    match series {
        GaussianSeries::RealCayley(g) | GaussianSeries::ComplexCayley(g) => Ok((g.order() as f64).sqrt()),
        GaussianSeries::Explicit(coeffs) => {
            let d = coeffs[0].nrows();
            if d > SIGMA_DIM_CAP {
                return Err(Error::DimensionCap { what: "sigma", dim: d, cap: SIGMA_DIM_CAP });
            }
            // Ã² = diag(A*A, AA*)
            let mut upper = DMatrix::<Complex64>::zeros(d, d);
            let mut lower = DMatrix::<Complex64>::zeros(d, d);
            for a in coeffs {
                upper += a.ad_mul(a);
                lower += a * a.adjoint();
            }
            let top = spectral_norm(&upper, NORM_TOL)?.max(spectral_norm(&lower, NORM_TOL)?);
            Ok(top.sqrt())
        }
    }
}

/// `Cov(X) = Σ_m vec(B_m) vec(B_m)*` applied without materialising the
/// `D² × D²` matrix. `Cov_{ij,kl} = E[X_ij conj(X_kl)]` for real Gaussian weights.
pub struct CovarianceOp {
    vecs: Vec<DVector<Complex64>>,
    dim: usize,
}

impl CovarianceOp {
    /// Covariance of `Σ x_m B_m`, with `B_m = Ã_m` when `dilated`.
    pub fn new(coeffs: &[DMatrix<Complex64>], dilated: bool) -> Result<Self> {
        let d = coeffs.first().map(|a| a.nrows()).unwrap_or(0);
        let big = if dilated { 2 * d } else { d };
        if big > V_DIM_CAP {
            return Err(Error::DimensionCap { what: "covariance", dim: big, cap: V_DIM_CAP });
        }
        let vecs = coeffs
            .iter()
            .map(|a| {
                let b = if dilated { dilate(a) } else { a.clone() };
                // row-major vec: index i·D + j holds B_ij
                DVector::from_iterator(big * big, b.transpose().iter().copied())
            })
            .collect();
        Ok(CovarianceOp { vecs, dim: big * big })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl LinearOp<Complex64> for CovarianceOp {
    fn nrows(&self) -> usize {
        self.dim
    }

    fn ncols(&self) -> usize {
        self.dim
    }

    fn apply(&self, u: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.dim);
        for v in &self.vecs {
            let c = v.dotc(u);
            out.axpy(c, v, Complex64::new(1.0, 0.0));
        }
        out
    }

    fn apply_adjoint(&self, u: &DVector<Complex64>) -> DVector<Complex64> {
        self.apply(u)
    }
}

/// `v(X) = ‖Cov(X)‖^{1/2}` by direct construction. `dilated` selects whether
/// the coefficients are dilated first.
pub fn v_generic(coeffs: &[DMatrix<Complex64>], dilated: bool) -> Result<f64> {
    let cov = CovarianceOp::new(coeffs, dilated)?;
    Ok(spectral_norm(&cov, NORM_TOL)?.sqrt())
}

/// `v(X)`: `√(2n)` for Cayley families. Explicit families are dilated
/// unless every coefficient is already self-adjoint.
pub fn v_of(series: &GaussianSeries<'_>) -> Result<f64> {
    match series {
        GaussianSeries::RealCayley(g) | GaussianSeries::ComplexCayley(g) => Ok((2.0 * g.order() as f64).sqrt()),
        GaussianSeries::Explicit(coeffs) => {
            let self_adjoint = coeffs.iter().all(|a| is_self_adjoint(a, 0.0));
            v_generic(coeffs, !self_adjoint)
        }
    }
}

/// The lower-bound certificate `(n‖S‖)^{1/4}` for the alignment parameter,
/// with `S = Σ_g ρ(g²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WCertificate {
    pub value: f64,
    /// Achieved `‖S‖`.
    pub s_norm: f64,
}

/// Computes `(n‖S‖)^{1/4}` and checks `‖S‖ = n` to [`S_NORM_REL_TOL`].
pub fn w_certificate(group: &FiniteGroup) -> Result<WCertificate> {
    let n = group.order();
    // S = Σ_h #{g : g² = h} ρ(h)
    let mut counts = vec![0.0f64; n];
    for g in 0..n {
        counts[group.square_element(g)] += 1.0;
    }
    let s_norm = spectral_norm(&CayleyOp::new(group, &counts), NORM_TOL)?;
    let nf = n as f64;
    if (s_norm - nf).abs() > S_NORM_REL_TOL * nf {
        return Err(Error::IdentityViolation(format!("‖S‖ = {s_norm} but n = {n}")));
    }
    Ok(WCertificate { value: (nf * s_norm).powf(0.25), s_norm })
}

/// `f(s) = s + Σ_π d_π^{-1/2} e^{-d_π s²/2}`.
pub fn m_objective(spectrum: &IrrepSpectrum, s: f64) -> f64 {
    s + spectrum
        .multiplicities()
        .iter()
        .map(|&(d, count)| {
            let d = d as f64;
            count as f64 * (-d * s * s / 2.0).exp() / d.sqrt()
        })
        .sum::<f64>()
}

/// `m(G) = inf_{s ≥ 0} f(s)` and the minimiser `s*`.
///
/// `f` can have several local minima, so the search is a dense grid over
/// `[0, √(2 ln n) + 2]` followed by golden-section refinement inside the
/// cells adjacent to the best grid point.
pub fn m_of_group(spectrum: &IrrepSpectrum) -> Result<(f64, f64)> {
    if spectrum.degrees.is_empty() {
        return Err(Error::InvalidArgument("empty degree multiset".into()));
    }
    let n = spectrum.sum_of_squares() as f64;
    let upper = (2.0 * n.ln()).sqrt() + 2.0;
    let h = upper / (GRID_POINTS - 1) as f64;
    let f = |s: f64| m_objective(spectrum, s);
    let (best_i, best_f) = (0..GRID_POINTS)
        .map(|i| (i, f(i as f64 * h)))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let lo = best_i.saturating_sub(1) as f64 * h;
    let hi = ((best_i + 1).min(GRID_POINTS - 1)) as f64 * h;
    let (s_ref, f_ref) = golden_section(f, lo, hi, 1e-10);
    if f_ref < best_f {
        Ok((f_ref, s_ref))
    } else {
        Ok((best_f, best_i as f64 * h))
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let s = (a + b) / 2.0;
    (s, f(s))
}

/// Lower and upper bounds on `m(G)` from the isolated trivial representation
/// and from the choice `s = √(2 ln n)`.
pub fn m_bounds(n: usize) -> (f64, f64) {
    ((-0.5f64).exp(), (2.0 * (n as f64).ln()).sqrt() + 1.0)
}

/// Number of irreducible degrees below `ε · ln n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallDegreeCount {
    pub epsilon: f64,
    pub threshold: f64,
    pub count: usize,
}

pub fn small_degree_counts(spectrum: &IrrepSpectrum, epsilons: &[f64]) -> Vec<SmallDegreeCount> {
    let ln_n = (spectrum.sum_of_squares() as f64).ln();
    epsilons
        .iter()
        .map(|&epsilon| {
            let threshold = epsilon * ln_n;
            SmallDegreeCount { epsilon, threshold, count: spectrum.count_below(threshold) }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsChecks {
    /// `w_certificate = σ` to [`S_NORM_REL_TOL`].
    pub w_equals_sigma: bool,
    /// `e^{-1/2} ≤ m ≤ √(2 ln n) + 1`.
    pub m_within_bounds: bool,
}

/// All bound ingredients for the Cayley family of one group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub group: String,
    pub n: usize,
    pub sigma: f64,
    pub v: f64,
    pub w_certificate: f64,
    pub s_norm: f64,
    pub m_of_g: f64,
    pub s_star: f64,
    /// `σ`, the lower envelope of the Khintchine bound.
    pub nck_lower: f64,
    /// `σ √(ln 2n)`, the upper envelope at the dilated dimension.
    pub nck_upper: f64,
    pub small_degrees: Vec<SmallDegreeCount>,
    pub checks: BoundsChecks,
}

/// One CSV row: `group,n,sigma,v,w_cert,m,s_star`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsCsvRow<'a> {
    pub group: &'a str,
    pub n: usize,
    pub sigma: f64,
    pub v: f64,
    pub w_cert: f64,
    pub m: f64,
    pub s_star: f64,
}

impl BoundsReport {
    pub fn csv_row(&self) -> BoundsCsvRow<'_> {
        BoundsCsvRow {
            group: &self.group,
            n: self.n,
            sigma: self.sigma,
            v: self.v,
            w_cert: self.w_certificate,
            m: self.m_of_g,
            s_star: self.s_star,
        }
    }
}

pub fn bounds_report(group: &FiniteGroup, spectrum: &IrrepSpectrum) -> Result<BoundsReport> {
    let n = group.order();
    if spectrum.sum_of_squares() != n {
        return Err(Error::InvalidArgument("spectrum does not belong to this group".into()));
    }
    let series = GaussianSeries::RealCayley(group);
    let sigma = sigma_of(&series)?;
    let v = v_of(&series)?;
    let w = w_certificate(group)?;
    let (m_of_g, s_star) = m_of_group(spectrum)?;
    let (m_lo, m_hi) = m_bounds(n);
    let checks = BoundsChecks {
        w_equals_sigma: (w.value - sigma).abs() <= S_NORM_REL_TOL * sigma,
        m_within_bounds: m_lo <= m_of_g && m_of_g <= m_hi + 1e-12,
    };
    Ok(BoundsReport {
        group: group.name().to_string(),
        n,
        sigma,
        v,
        w_certificate: w.value,
        s_norm: w.s_norm,
        m_of_g,
        s_star,
        nck_lower: sigma,
        nck_upper: sigma * (2.0 * n as f64).ln().sqrt(),
        small_degrees: small_degree_counts(spectrum, &[0.25, 0.5, 1.0]),
        checks,
    })
}
