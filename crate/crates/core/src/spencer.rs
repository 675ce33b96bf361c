//! Searches for sign vectors `ε` with small `‖Σ_g ε_g ρ(g)‖`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{seeded_start, spectral_norm, top_singular, NormOptions};
use crate::sampler::{trial_rng, CayleyOp};
use crate::stats::{mean_and_stderr, std_dev};

/// Largest order accepted by [`brute_force`].
pub const BRUTE_FORCE_MAX_ORDER: usize = 16;
/// A flip is accepted only if it lowers the objective by more than this.
pub const IMPROVEMENT_THRESHOLD: f64 = 1e-9;
/// Relative agreement required between the character sup-norm and the spectral norm.
pub const REDUCTION_REL_TOL: f64 = 1e-6;

const EVAL_TOL: f64 = 1e-12;
const WARM_MIX_SEED: u64 = 0x5eed_f11b;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpencerMethod {
    BruteForce,
    RandomBestOfK,
    LocalSearch,
    AbelianReduction,
}

impl fmt::Display for SpencerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpencerMethod::BruteForce => "brute_force",
            SpencerMethod::RandomBestOfK => "random_best_of_k",
            SpencerMethod::LocalSearch => "local_search",
            SpencerMethod::AbelianReduction => "abelian_reduction",
        })
    }
}

impl FromStr for SpencerMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" | "brute_force" => Ok(SpencerMethod::BruteForce),
            "random" | "random_best_of_k" => Ok(SpencerMethod::RandomBestOfK),
            "local" | "local_search" => Ok(SpencerMethod::LocalSearch),
            "abelian" | "abelian_reduction" => Ok(SpencerMethod::AbelianReduction),
            _ => Err(Error::Parse { spec: s.into(), reason: "unknown spencer method".into() }),
        }
    }
}

/// A sign vector together with its achieved norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coloring {
    pub group: String,
    pub method: SpencerMethod,
    pub seed: Option<u64>,
    pub norm: f64,
    #[serde(rename = "ratio")]
    pub discrepancy_ratio: f64,
    pub signs: Vec<i8>,
    /// Mean and standard deviation of the random draws, for `random_best_of_k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_std: Option<f64>,
}

impl Coloring {
    fn new(group: &FiniteGroup, method: SpencerMethod, seed: Option<u64>, mut signs: Vec<i8>, norm: f64) -> Self {
        canonicalize(group, &mut signs);
        Coloring {
            group: group.name().to_string(),
            method,
            seed,
            norm,
            discrepancy_ratio: norm / (group.order() as f64).sqrt(),
            signs,
            random_mean: None,
            random_std: None,
        }
    }
}

/// Flips all signs if needed so that `ε_identity = +1`.
pub fn canonicalize(group: &FiniteGroup, signs: &mut [i8]) {
    if signs[group.identity()] < 0 {
        signs.iter_mut().for_each(|s| *s = -*s);
    }
}

fn as_coeffs(signs: &[i8]) -> Vec<f64> {
    signs.iter().map(|&s| s as f64).collect()
}

fn check_signs(group: &FiniteGroup, signs: &[i8]) -> Result<()> {
    if signs.len() != group.order() || signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidArgument(format!("expected {} signs in {{-1, +1}}", group.order())));
    }
    Ok(())
}

/// `‖Σ_g ε_g ρ(g)‖`.
pub fn signed_norm(group: &FiniteGroup, signs: &[i8]) -> Result<f64> {
    check_signs(group, signs)?;
    let coeffs = as_coeffs(signs);
    spectral_norm(&CayleyOp::new(group, &coeffs), EVAL_TOL)
}

pub fn random_signs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i8> {
    (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()
}

/// Exact minimiser over the `2^{n-1}` patterns with `ε_identity = +1`.
pub fn brute_force(group: &FiniteGroup) -> Result<Coloring> {
    let n = group.order();
    if n > BRUTE_FORCE_MAX_ORDER {
        return Err(Error::OrderCap { order: n, cap: BRUTE_FORCE_MAX_ORDER });
    }
    let id = group.identity();
    let others: Vec<usize> = (0..n).filter(|&g| g != id).collect();
    let pattern = |bits: u64| -> Vec<i8> {
        let mut signs = vec![1i8; n];
        for (k, &g) in others.iter().enumerate() {
            if bits >> k & 1 == 1 {
                signs[g] = -1;
            }
        }
        signs
    };
    let evaluated: Vec<(f64, u64)> = (0..1u64 << others.len())
        .into_par_iter()
        .map(|bits| signed_norm(group, &pattern(bits)).map(|v| (v, bits)))
        .collect::<Result<_>>()?;
    let (norm, bits) = evaluated.into_iter().fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
    Ok(Coloring::new(group, SpencerMethod::BruteForce, None, pattern(bits), norm))
}

/// Best of `k` uniform sign vectors; draw `j` uses stream `(seed, j)`.
pub fn random_best_of_k(group: &FiniteGroup, k: usize, seed: u64) -> Result<Coloring> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = group.order();
    let draws: Vec<(f64, Vec<i8>)> = (0..k as u64)
        .into_par_iter()
        .map(|j| {
            let signs = random_signs(n, &mut trial_rng(seed, j));
            signed_norm(group, &signs).map(|v| (v, signs))
        })
        .collect::<Result<_>>()?;
    let norms: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let (mean, _) = mean_and_stderr(&norms);
    let best = draws.into_iter().enumerate().fold(None::<(usize, (f64, Vec<i8>))>, |acc, (j, d)| match acc {
        Some((_, ref b)) if b.0 <= d.0 => acc,
        _ => Some((j, d)),
    });
    let (_, (norm, signs)) = best.expect("k >= 1");
    let mut c = Coloring::new(group, SpencerMethod::RandomBestOfK, Some(seed), signs, norm);
    c.random_mean = Some(mean);
    c.random_std = Some(if k > 1 { std_dev(&norms) } else { 0.0 });
    Ok(c)
}

/// First-improvement single-flip descent from `init`, scanning coordinates
/// in an order shuffled by `seed` on every sweep.
pub fn local_search(group: &FiniteGroup, init: &[i8], seed: u64) -> Result<Coloring> {
    let mut rng = trial_rng(seed, 0);
    descend(group, init.to_vec(), &mut rng, Some(seed))
}

fn descend<R: Rng + ?Sized>(group: &FiniteGroup, init: Vec<i8>, rng: &mut R, seed: Option<u64>) -> Result<Coloring> {
    check_signs(group, &init)?;
    let n = group.order();
    let mut coeffs = as_coeffs(&init);
    let mut current = spectral_norm(&CayleyOp::new(group, &coeffs), EVAL_TOL)?;
    let opts = NormOptions { tol: EVAL_TOL, ..NormOptions::default() };
    let mix: DVector<f64> = seeded_start(n, WARM_MIX_SEED);
    let mut warm = seeded_start::<f64>(n, 0);
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        order.shuffle(rng);
        let mut improved = false;
        for &g in &order {
            coeffs[g] = -coeffs[g];
            // A Krylov space started inside one isotypic block never leaves it,
            // so the previous top vector is blended with a fixed generic vector.
            let start = &warm + &mix * 0.1;
            let trial = top_singular(&CayleyOp::new(group, &coeffs), &start, opts)?;
            if trial.sigma < current - IMPROVEMENT_THRESHOLD {
                // Ritz values only underestimate; confirm from cold starts.
                let confirmed = spectral_norm(&CayleyOp::new(group, &coeffs), EVAL_TOL)?;
                if confirmed < current - IMPROVEMENT_THRESHOLD {
                    current = confirmed;
                    warm = trial.vector;
                    improved = true;
                    continue;
                }
            }
            coeffs[g] = -coeffs[g];
        }
        if !improved {
            break;
        }
    }
    let signs: Vec<i8> = coeffs.iter().map(|&c| if c > 0.0 { 1 } else { -1 }).collect();
    Ok(Coloring::new(group, SpencerMethod::LocalSearch, seed, signs, current))
}

/// Local search from `restarts` random starts run in parallel. Restart `r`
/// draws its start and scan orders from stream `(seed, r)`; the smallest
/// norm wins and ties go to the lower restart index.
pub fn local_search_restarts(group: &FiniteGroup, restarts: usize, seed: u64) -> Result<Coloring> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let results: Vec<Coloring> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(seed, r);
            let init = random_signs(group.order(), &mut rng);
            descend(group, init, &mut rng, Some(seed))
        })
        .collect::<Result<_>>()?;
    Ok(pick_best(results))
}

fn pick_best(results: Vec<Coloring>) -> Coloring {
    results.into_iter().reduce(|best, c| if c.norm < best.norm { c } else { best }).expect("nonempty")
}

/// Characters of an abelian group as homomorphisms into `Z_e`, `e` the
/// exponent: `χ(g) = exp(2πi · values[χ][g] / e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub exponent: usize,
    pub values: Vec<Vec<usize>>,
}

impl CharacterTable {
    /// `max_χ |Σ_g ε_g χ(g)|`.
    pub fn sup_norm(&self, signs: &[i8]) -> f64 {
        let roots = self.roots();
        self.values
            .iter()
            .map(|chi| chi.iter().zip(signs).map(|(&k, &s)| roots[k] * s as f64).sum::<Complex64>().norm())
            .fold(0.0, f64::max)
    }

    fn roots(&self) -> Vec<Complex64> {
        let e = self.exponent as f64;
        (0..self.exponent).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / e)).collect()
    }
}

/// Builds all `n` characters by extending from the trivial subgroup one
/// element at a time.
pub fn abelian_characters(group: &FiniteGroup) -> Result<CharacterTable> {
    if !group.is_abelian() {
        return Err(Error::NotAbelian(group.name().to_string()));
    }
    let n = group.order();
    let e = group.exponent();
    let id = group.identity();
    // members of the current subgroup H, and each character restricted to H
    let mut members = vec![id];
    let mut in_h = vec![false; n];
    in_h[id] = true;
    let mut chars: Vec<Vec<usize>> = vec![vec![0; n]];
    while members.len() < n {
        let g = (0..n).find(|&x| !in_h[x]).expect("subgroup is proper");
        // smallest t with g^t ∈ H
        let mut t = 1;
        let mut gt = g;
        while !in_h[gt] {
            gt = group.multiply(gt, g);
            t += 1;
        }
        let mut powers = vec![id];
        for j in 1..t {
            powers.push(group.multiply(powers[j - 1], g));
        }
        let mut next_members = Vec::with_capacity(members.len() * t);
        for &p in &powers {
            for &h in &members {
                next_members.push(group.multiply(h, p));
            }
        }
        let mut next_chars = Vec::with_capacity(chars.len() * t);
        for chi in &chars {
            let target = chi[gt];
            if target % t != 0 {
                return Err(Error::InvalidTable("character extension failed".into()));
            }
            for j in 0..t {
                let a = (target / t + j * (e / t)) % e;
                let mut ext = chi.clone();
                for (jp, &p) in powers.iter().enumerate().skip(1) {
                    for &h in &members {
                        ext[group.multiply(h, p)] = (chi[h] + jp * a) % e;
                    }
                }
                next_chars.push(ext);
            }
        }
        for &x in &next_members {
            in_h[x] = true;
        }
        members = next_members;
        chars = next_chars;
    }
    Ok(CharacterTable { exponent: e, values: chars })
}

/// Minimises `max_χ max(|Re ẑ_χ|, |Im ẑ_χ|)` with `ẑ = Σ ε_g a_g` by local
/// search from `restarts` random starts, then reports the exact spectral
/// norm of the winner after checking it against the character sup-norm.
pub fn abelian_reduction(group: &FiniteGroup, restarts: usize, seed: u64) -> Result<Coloring> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let table = abelian_characters(group)?;
    let roots = table.roots();
    let n = group.order();
    // a[g][χ]
    let a: Vec<Vec<Complex64>> = (0..n).map(|g| table.values.iter().map(|chi| roots[chi[g]]).collect()).collect();
    let split_sup = |z: &[Complex64]| z.iter().fold(0.0f64, |m, c| m.max(c.re.abs()).max(c.im.abs()));

    let runs: Vec<(f64, Vec<i8>)> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(seed, r);
            let mut signs = random_signs(n, &mut rng);
            let mut z: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n];
            for (g, &s) in signs.iter().enumerate() {
                for (zc, ac) in z.iter_mut().zip(&a[g]) {
                    *zc += ac * s as f64;
                }
            }
            let mut current = split_sup(&z);
            let mut order: Vec<usize> = (0..n).collect();
            let mut trial = z.clone();
            loop {
                order.shuffle(&mut rng);
                let mut improved = false;
                for &g in &order {
                    let delta = -2.0 * signs[g] as f64;
                    for ((t, zc), ac) in trial.iter_mut().zip(&z).zip(&a[g]) {
                        *t = zc + ac * delta;
                    }
                    let value = split_sup(&trial);
                    if value < current - IMPROVEMENT_THRESHOLD {
                        current = value;
                        signs[g] = -signs[g];
                        z.copy_from_slice(&trial);
                        improved = true;
                    }
                }
                if !improved {
                    break;
                }
            }
            let sup = z.iter().map(|c| c.norm()).fold(0.0, f64::max);
            (sup, signs)
        })
        .collect();
    let (sup, signs) = runs.into_iter().reduce(|best, r| if r.0 < best.0 { r } else { best }).expect("nonempty");
    let norm = signed_norm(group, &signs)?;
    if (sup - norm).abs() > REDUCTION_REL_TOL * norm.max(1.0) {
        return Err(Error::IdentityViolation(format!("character sup-norm {sup} differs from spectral norm {norm}")));
    }
    Ok(Coloring::new(group, SpencerMethod::AbelianReduction, Some(seed), signs, norm))
}

/// Dispatches on method. `budget` is the number of draws for
/// `random_best_of_k` and of restarts for the local searches.
pub fn search(group: &FiniteGroup, method: SpencerMethod, budget: usize, seed: u64) -> Result<Coloring> {
    match method {
        SpencerMethod::BruteForce => brute_force(group),
        SpencerMethod::RandomBestOfK => random_best_of_k(group, budget, seed),
        SpencerMethod::LocalSearch => local_search_restarts(group, budget, seed),
        SpencerMethod::AbelianReduction => abelian_reduction(group, budget, seed),
    }
}
