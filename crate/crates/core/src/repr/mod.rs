//! The left regular representation and the multiset of irreducible degrees.
//!
//! Degrees are read off the spectrum of a random Hermitian central element
//! `M = Σ_K (c_K C_K + conj(c_K) C_{K⁻¹})` of the group algebra. `M` acts on
//! the isotypic component of each irreducible `π` as a scalar, so its
//! eigenvalues come in clusters of size `d_π²`, one cluster per `π`.

mod dixon;

pub use dixon::{dixon_oracle, DIXON_ORDER_CAP};

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ConjugacyClasses, FiniteGroup};

/// Coefficient redraws before `irrep_degrees` gives up.
pub const SPECTRUM_RETRIES: usize = 5;
/// Eigenvalues closer than this fraction of the spectral radius share a cluster.
pub const CLUSTER_REL_TOL: f64 = 1e-6;

/// `ρ(g) e_h = e_{gh}` on `C^n`, stored as the permutations `h ↦ gh`.
#[derive(Clone, Copy, Debug)]
pub struct RegularRep<'a> {
    group: &'a FiniteGroup,
}

impl<'a> RegularRep<'a> {
    pub fn new(group: &'a FiniteGroup) -> Self {
        RegularRep { group }
    }

    pub fn group(&self) -> &'a FiniteGroup {
        self.group
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    /// `perm(g)[h] = gh`, i.e. column `h` of `ρ(g)` has its unit entry in row `gh`.
    pub fn perm(&self, g: usize) -> &'a [u32] {
        self.group.row(g)
    }

    /// Dense `ρ(g)`.
    pub fn matrix(&self, g: usize) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (h, &gh) in self.perm(g).iter().enumerate() {
            m[(gh as usize, h)] = 1.0;
        }
        m
    }

    /// `ρ(g)ρ(h) = ρ(gh)` and `ρ(g)ᵀ = ρ(g⁻¹)`, checked on index arrays.
    /// Exhaustive for `n ≤ 64`, otherwise on `pairs` seeded random pairs.
    pub fn check_homomorphism(&self, pairs: usize, seed: u64) -> bool {
        let g = self.group;
        let n = g.order();
        let check = |a: usize, b: usize| {
            let (pa, pb, pab) = (self.perm(a), self.perm(b), self.perm(g.multiply(a, b)));
            (0..n).all(|x| pa[pb[x] as usize] == pab[x])
        };
        let transpose_ok = (0..n).all(|a| {
            let (pa, pinv) = (self.perm(a), self.perm(g.inverse(a)));
            (0..n).all(|x| pinv[pa[x] as usize] as usize == x)
        });
        if !transpose_ok {
            return false;
        }
        if n <= 64 {
            (0..n).all(|a| (0..n).all(|b| check(a, b)))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..pairs).all(|_| check(rng.random_range(0..n), rng.random_range(0..n)))
        }
    }
}

/// Degrees `d_π` of the irreducible representations, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrepSpectrum {
    pub group: String,
    pub degrees: Vec<usize>,
}

impl IrrepSpectrum {
    pub fn new(group: impl Into<String>, mut degrees: Vec<usize>) -> Self {
        degrees.sort_unstable();
        IrrepSpectrum { group: group.into(), degrees }
    }

    /// Spectrum of an abelian group of order `n`: `n` degrees equal to 1.
    pub fn abelian(group: impl Into<String>, n: usize) -> Self {
        IrrepSpectrum::new(group, vec![1; n])
    }

    pub fn sum_of_squares(&self) -> usize {
        self.degrees.iter().map(|d| d * d).sum()
    }

    pub fn linear_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d == 1).count()
    }

    /// `(degree, multiplicity)` pairs in increasing degree.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut counts = BTreeMap::new();
        for &d in &self.degrees {
            *counts.entry(d).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }

    /// Number of degrees strictly below `threshold`.
    pub fn count_below(&self, threshold: f64) -> usize {
        self.degrees.iter().filter(|&&d| (d as f64) < threshold).count()
    }

    /// Checks `Σ d² = n`, `|degrees| = #classes` and
    /// `#{d = 1} = |G/[G,G]|`.
    pub fn check_against(&self, group: &FiniteGroup, class_count: usize, commutator_index: usize) -> Result<()> {
        if self.sum_of_squares() != group.order() {
            return Err(Error::IdentityViolation(format!(
                "sum of squared degrees {} != order {}",
                self.sum_of_squares(),
                group.order()
            )));
        }
        if self.degrees.len() != class_count {
            return Err(Error::IdentityViolation(format!(
                "{} degrees but {class_count} conjugacy classes",
                self.degrees.len()
            )));
        }
        if self.linear_count() != commutator_index {
            return Err(Error::IdentityViolation(format!(
                "{} linear degrees but |G/[G,G]| = {commutator_index}",
                self.linear_count()
            )));
        }
        Ok(())
    }
}

/// Class sum `C_K = Σ_{g∈K} ρ(g)`. Errors unless `class` is exactly one
/// conjugacy class.
pub fn class_sum_matrix(rep: &RegularRep<'_>, class: &[usize]) -> Result<DMatrix<f64>> {
    let group = rep.group();
    let n = group.order();
    let classes = group.conjugacy_classes();
    let first = *class.first().ok_or(Error::NotAConjugacyClass)?;
    if first >= n {
        return Err(Error::NotAConjugacyClass);
    }
    let mut given: Vec<usize> = class.to_vec();
    given.sort_unstable();
    given.dedup();
    if given.len() != class.len() || given != classes.classes[classes.class_of[first]] {
        return Err(Error::NotAConjugacyClass);
    }
    let mut m = DMatrix::zeros(n, n);
    for &g in &given {
        for (h, &gh) in rep.perm(g).iter().enumerate() {
            m[(gh as usize, h)] += 1.0;
        }
    }
    Ok(m)
}

/// `S = Σ_g ρ(g²)`, an integer matrix returned in floating point.
pub fn s_matrix(rep: &RegularRep<'_>) -> DMatrix<f64> {
    let group = rep.group();
    let n = group.order();
    let mut s = DMatrix::zeros(n, n);
    for g in 0..n {
        let sq = group.square_element(g);
        for (h, &x) in rep.perm(sq).iter().enumerate() {
            s[(x as usize, h)] += 1.0;
        }
    }
    s
}

/// Irreducible degrees from the spectrum of a random Hermitian central
/// element. Draws are redrawn up to [`SPECTRUM_RETRIES`] times if the
/// clustering fails the structural checks.
pub fn irrep_degrees(rep: &RegularRep<'_>, seed: u64) -> Result<IrrepSpectrum> {
    let group = rep.group();
    let classes = group.conjugacy_classes();
    let commutator_index = group.commutator_index();
    let mut last_reason = String::new();
    for attempt in 0..SPECTRUM_RETRIES {
        let m = central_element(group, &classes, seed, attempt as u64);
        let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        if eig.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonConvergence { iterations: 0, residual: f64::NAN });
        }
        eig.sort_by(f64::total_cmp);
        let degrees = match cluster_degrees(&eig) {
            Ok(d) => d,
            Err(reason) => {
                last_reason = reason;
                continue;
            }
        };
        let spectrum = IrrepSpectrum::new(group.name(), degrees);
        match spectrum.check_against(group, classes.len(), commutator_index) {
            Ok(()) => return Ok(spectrum),
            Err(e) => last_reason = e.to_string(),
        }
    }
    Err(Error::DegenerateSpectrum { attempts: SPECTRUM_RETRIES, reason: last_reason })
}

/// Irreducible degrees with a shortcut for abelian groups, where every
/// degree is 1 and no eigen-decomposition is needed.
pub fn irrep_spectrum(group: &FiniteGroup, seed: u64) -> Result<IrrepSpectrum> {
    if group.is_abelian() {
        return Ok(IrrepSpectrum::abelian(group.name(), group.order()));
    }
    irrep_degrees(&RegularRep::new(group), seed)
}

/// Dense Hermitian `M` with `M[i][j] = a(i j⁻¹)`, where `a` is constant on
/// classes and `a(K⁻¹) = conj(a(K))`.
fn central_element(group: &FiniteGroup, classes: &ConjugacyClasses, seed: u64, attempt: u64) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    let inverse_class = classes.inverse_classes(group);
    let mut coeff = vec![Complex64::new(0.0, 0.0); classes.len()];
    for k in 0..classes.len() {
        let partner = inverse_class[k];
        if partner < k {
            continue;
        }
        let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        if partner == k {
            coeff[k] = c + c.conj();
        } else {
            coeff[k] = c;
            coeff[partner] = c.conj();
        }
    }
    let n = group.order();
    let per_element: Vec<Complex64> = (0..n).map(|g| coeff[classes.class_of[g]]).collect();
    DMatrix::from_fn(n, n, |i, j| per_element[group.multiply(i, group.inverse(j))])
}

/// Splits sorted eigenvalues at relative gaps and converts each cluster size
/// `d²` to `d`.
fn cluster_degrees(sorted: &[f64]) -> std::result::Result<Vec<usize>, String> {
    let radius = sorted.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tau = CLUSTER_REL_TOL * radius.max(f64::MIN_POSITIVE);
    let mut sizes = Vec::new();
    let mut run = 1usize;
    for w in sorted.windows(2) {
        if w[1] - w[0] > tau {
            sizes.push(run);
            run = 1;
        } else {
            run += 1;
        }
    }
    if !sorted.is_empty() {
        sizes.push(run);
    }
    let root_of: HashMap<usize, usize> = (1..=sorted.len()).map(|d| (d * d, d)).take_while(|(sq, _)| *sq <= sorted.len()).collect();
    sizes
        .into_iter()
        .map(|s| root_of.get(&s).copied().ok_or_else(|| format!("cluster of size {s} is not a square")))
        .collect()
}
