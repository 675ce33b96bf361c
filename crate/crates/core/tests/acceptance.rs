//! End-to-end acceptance checks. Runs as a plain binary so that one
//! PASS/FAIL line per criterion is always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cayley_core::bounds::{m_bounds, m_of_group, sigma_of, v_generic, v_of, w_certificate};
use cayley_core::experiment::{theorem1_sweep, SpectrumCache, SweepFamily};
use cayley_core::group::{make_group, FiniteGroup, GroupFamily, DEFAULT_ORDER_CAP};
use cayley_core::repr::{dixon_oracle, irrep_degrees, irrep_spectrum, IrrepSpectrum, RegularRep};
use cayley_core::sampler::{
    estimate_expected_norm, sample_norms, series_for, trial_rng, GaussianSeries, Method, NormEstimate,
};
use cayley_core::spencer::{
    abelian_characters, brute_force, local_search_restarts, random_best_of_k, random_signs, signed_norm,
};
use cayley_core::stats::ks_two_sample;
use num_complex::Complex64;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn build(spec: &str) -> FiniteGroup {
    make_group(&spec.parse().unwrap(), DEFAULT_ORDER_CAP).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn c1_group_laws() -> Check {
    let start = Instant::now();
    let mut families: Vec<GroupFamily> = Vec::new();
    families.extend((1..=64).chain([100, 128, 210, 360]).map(GroupFamily::Cyclic));
    for f in [vec![2, 2, 2], vec![2, 6], vec![3, 3, 4], vec![2, 2, 2, 2, 2, 2], vec![6, 60], vec![3, 5, 7]] {
        families.push(GroupFamily::Abelian(f));
    }
    families.extend((1..=30).chain([90, 180]).map(GroupFamily::Dihedral));
    families.extend((1..=5).map(GroupFamily::Symmetric));
    families.extend((3..=6).map(GroupFamily::Alternating));
    families.extend([3, 5, 7].map(GroupFamily::Psl2));
    families.push(GroupFamily::FromGenerators(vec![vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]]));
    for (i, fam) in families.iter().enumerate() {
        let g = make_group(fam, DEFAULT_ORDER_CAP).map_err(|e| format!("{fam}: {e}"))?;
        ensure(g.order() <= 360, format!("{fam} has order {}", g.order()))?;
        g.validate(i as u64).map_err(|e| format!("{fam}: {e}"))?;
    }
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("{} groups in {:.2?}", families.len(), start.elapsed()))
}

fn c2_degrees() -> Check {
    let start = Instant::now();
    let mut specs: Vec<String> = (2..=24).map(|n| format!("cyclic:{n}")).collect();
    specs.push("abelian:2x2x2".into());
    specs.extend((3..=8).map(|m| format!("dihedral:{m}")));
    specs.extend((3..=5).map(|k| format!("sym:{k}")));
    specs.extend((4..=5).map(|k| format!("alt:{k}")));
    specs.extend(["psl2:5".to_string(), "psl2:7".to_string()]);
    for spec in &specs {
        let g = build(spec);
        let numeric = irrep_degrees(&RegularRep::new(&g), 17).map_err(|e| format!("{spec}: {e}"))?;
        let exact = dixon_oracle(&g).map_err(|e| format!("{spec}: {e}"))?;
        ensure(numeric.degrees == exact.degrees, format!("{spec}: {:?} vs {:?}", numeric.degrees, exact.degrees))?;
    }
    let a6 = build("alt:6");
    let s = irrep_degrees(&RegularRep::new(&a6), 17).map_err(|e| e.to_string())?;
    let classes = a6.conjugacy_classes().len();
    ensure(s.sum_of_squares() == 360, format!("alt:6 sum of squares {}", s.sum_of_squares()))?;
    ensure(s.degrees.len() == classes, format!("alt:6 has {} degrees, {classes} classes", s.degrees.len()))?;
    within_time(start, Duration::from_secs(120))?;
    Ok(format!("{} groups match the exact oracle; alt:6 {:?} in {:.1?}", specs.len(), s.degrees, start.elapsed()))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn c3_identities() -> Check {
    let specs = [
        "trivial", "cyclic:2", "cyclic:3", "cyclic:16", "abelian:2x2x2", "dihedral:5", "sym:3", "sym:4", "alt:4",
        "alt:5", "psl2:7", "sym:5", "alt:6",
    ];
    let mut worst: f64 = 0.0;
    for spec in specs {
        let g = build(spec);
        let root = (g.order() as f64).sqrt();
        let w = w_certificate(&g).map_err(|e| format!("{spec}: {e}"))?;
        let sigma = sigma_of(&GaussianSeries::RealCayley(&g)).map_err(|e| e.to_string())?;
        for (what, value, target) in [("‖S‖", w.s_norm, g.order() as f64), ("w", w.value, root), ("sigma", sigma, root)] {
            let r = rel(value, target);
            worst = worst.max(r);
            ensure(r <= 1e-8, format!("{spec}: {what} = {value}, expected {target}"))?;
        }
    }
    for n in 2..=16 {
        let g = build(&format!("cyclic:{n}"));
        let GaussianSeries::Explicit(coeffs) = GaussianSeries::explicit_cayley(&g) else { unreachable!() };
        let generic = v_generic(&coeffs, true).map_err(|e| e.to_string())?;
        let analytic = v_of(&GaussianSeries::RealCayley(&g)).map_err(|e| e.to_string())?;
        let r = rel(generic, analytic);
        worst = worst.max(r);
        ensure(r <= 1e-8, format!("cyclic:{n}: generic v {generic} vs analytic {analytic}"))?;
        ensure(rel(analytic, (2.0 * n as f64).sqrt()) <= 1e-15, "analytic v is not √(2n)")?;
    }
    Ok(format!("{} groups, v for cyclic:2..16, worst relative error {worst:.1e}", specs.len()))
}

/// Minimum of `s + Σ d^{-1/2} e^{-d s²/2}` over a uniform grid.
fn grid_m(degrees: &[usize], points: usize) -> f64 {
    let n: usize = degrees.iter().map(|d| d * d).sum();
    let upper = (2.0 * (n as f64).ln()).sqrt() + 2.0;
    (0..points)
        .map(|i| {
            let s = upper * i as f64 / (points - 1) as f64;
            s + degrees.iter().map(|&d| (-(d as f64) * s * s / 2.0).exp() / (d as f64).sqrt()).sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

fn c4_m_values() -> Check {
    let (m1, _) = m_of_group(&IrrepSpectrum::abelian("trivial", 1)).map_err(|e| e.to_string())?;
    ensure((m1 - 1.0).abs() <= 1e-6, format!("m(trivial) = {m1}"))?;
    let mut detail = format!("m(trivial) = {m1:.6}");
    for (spec, target) in [("cyclic:16", 3.12), ("alt:5", 1.84)] {
        let g = build(spec);
        let s = irrep_spectrum(&g, 0).map_err(|e| e.to_string())?;
        let (m, _) = m_of_group(&s).map_err(|e| e.to_string())?;
        let oracle = grid_m(&s.degrees, 1_000_000);
        ensure((m - oracle).abs() <= 1e-2, format!("{spec}: m = {m}, grid oracle {oracle}"))?;
        ensure((m - target).abs() <= 1e-2, format!("{spec}: m = {m}, expected ≈ {target}"))?;
        detail += &format!(", m({spec}) = {m:.6} (grid {oracle:.6})");
    }
    let specs = ["cyclic:2", "cyclic:64", "cyclic:1024", "abelian:2x2x2x2", "dihedral:7", "sym:4", "sym:5", "alt:6", "psl2:7"];
    for spec in specs {
        let g = build(spec);
        let s = irrep_spectrum(&g, 0).map_err(|e| e.to_string())?;
        let (m, _) = m_of_group(&s).map_err(|e| e.to_string())?;
        let (lo, hi) = m_bounds(g.order());
        ensure(lo <= m && m <= hi, format!("{spec}: m = {m} outside [{lo}, {hi}]"))?;
    }
    Ok(detail)
}

fn c5_block_distribution() -> Check {
    let start = Instant::now();
    let mut detail = Vec::new();
    for spec in ["sym:3", "alt:4", "alt:5"] {
        let g = build(spec);
        let spectrum = irrep_spectrum(&g, 0).map_err(|e| e.to_string())?;
        let series = series_for(&g, Method::DirectComplex);
        let direct = sample_norms(&series, 2000, Method::DirectComplex, None, 101).map_err(|e| e.to_string())?;
        let block = sample_norms(&series, 2000, Method::Block, Some(&spectrum), 202).map_err(|e| e.to_string())?;
        let ks = ks_two_sample(&direct, &block, 0.01);
        ensure(!ks.rejects(), format!("{spec}: KS D = {:.4} > {:.4}", ks.statistic, ks.critical))?;
        detail.push(format!("{spec} D={:.4} p={:.2}", ks.statistic, ks.p_value));
    }
    within_time(start, Duration::from_secs(300))?;
    Ok(detail.join(", "))
}

fn estimate(g: &FiniteGroup, method: Method, trials: usize, seed: u64) -> Result<NormEstimate, String> {
    let spectrum = match method {
        Method::Block => Some(irrep_spectrum(g, 0).map_err(|e| e.to_string())?),
        _ => None,
    };
    estimate_expected_norm(&series_for(g, method), trials, method, spectrum.as_ref(), seed).map_err(|e| e.to_string())
}

fn c6_sandwich() -> Check {
    let mut detail = Vec::new();
    for spec in ["cyclic:16", "alt:5"] {
        let g = build(spec);
        let x = estimate(&g, Method::DirectReal, 1000, 7)?;
        let z = estimate(&g, Method::DirectComplex, 1000, 8)?;
        let lower_slack = 3.0 * (x.std_error.powi(2) + z.std_error.powi(2)).sqrt();
        let upper_slack = 3.0 * (z.std_error.powi(2) + 4.0 * x.std_error.powi(2)).sqrt();
        ensure(x.mean <= z.mean + lower_slack, format!("{spec}: E‖X‖ {} > E‖Z‖ {}", x.mean, z.mean))?;
        ensure(z.mean <= 2.0 * x.mean + upper_slack, format!("{spec}: E‖Z‖ {} > 2E‖X‖ {}", z.mean, 2.0 * x.mean))?;
        detail.push(format!("{spec} X={:.3} Z={:.3}", x.mean, z.mean));
    }
    Ok(detail.join(", "))
}

fn c7_abelian_scaling() -> Check {
    let start = Instant::now();
    let cache = SpectrumCache::disabled();
    let r = theorem1_sweep(SweepFamily::Cyclic, &[16, 64, 256, 1024], Method::Block, 1000, 11, &cache)
        .map_err(|e| e.to_string())?;
    let nlogn: Vec<f64> = r.rows.iter().map(|x| x.ratio_sqrt_nlogn).collect();
    let sqrt_n: Vec<f64> = r.rows.iter().map(|x| x.ratio_sqrt_n).collect();
    let spread = nlogn.iter().cloned().fold(f64::MIN, f64::max) / nlogn.iter().cloned().fold(f64::MAX, f64::min);
    ensure(spread <= 1.3, format!("mean/√(n ln n) spread {spread:.3}: {nlogn:?}"))?;
    ensure(sqrt_n.windows(2).all(|w| w[0] < w[1]), format!("mean/√n not increasing: {sqrt_n:?}"))?;
    within_time(start, Duration::from_secs(300))?;
    Ok(format!("spread {spread:.3}, mean/√n {:?}", sqrt_n.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>()))
}

fn c8_simple_scaling() -> Check {
    let cache = SpectrumCache::disabled();
    let r = theorem1_sweep(SweepFamily::Alternating, &[5, 6], Method::DirectReal, 1000, 13, &cache)
        .map_err(|e| e.to_string())?;
    let ratios: Vec<f64> = r.rows.iter().map(|x| x.ratio_sqrt_n).collect();
    let ms: Vec<f64> = r.rows.iter().map(|x| x.m).collect();
    ensure(ratios.iter().all(|&x| (1.0..=3.0).contains(&x)), format!("mean/√n outside [1, 3]: {ratios:?}"))?;
    let spread = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) / v.iter().cloned().fold(f64::MAX, f64::min);
    ensure(spread(&ratios) <= 1.2, format!("mean/√n varies by {:.3}", spread(&ratios)))?;
    ensure(spread(&ms) <= 1.15, format!("m varies by {:.3}: {ms:?}", spread(&ms)))?;
    Ok(format!(
        "mean/√n {:.3} {:.3}, m {:.3} {:.3}",
        ratios[0], ratios[1], ms[0], ms[1]
    ))
}

/// Exact optimum over all sign patterns of a cyclic group via its DFT.
fn cyclic_optimum(n: usize) -> f64 {
    let roots: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    (0..1u32 << (n - 1))
        .map(|bits| {
            (0..n)
                .map(|k| {
                    (0..n)
                        .map(|j| {
                            let s = if j > 0 && bits >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 };
                            roots[j * k % n] * s
                        })
                        .sum::<Complex64>()
                        .norm()
                })
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

fn c9_spencer() -> Check {
    let mut worst_gap: f64 = 0.0;
    for n in 2..=16 {
        let g = build(&format!("cyclic:{n}"));
        let exact = brute_force(&g).map_err(|e| e.to_string())?;
        let oracle = cyclic_optimum(n);
        ensure((exact.norm - oracle).abs() <= 1e-8 * oracle, format!("cyclic:{n}: brute force {} vs {oracle}", exact.norm))?;
        let local = local_search_restarts(&g, 20, n as u64).map_err(|e| e.to_string())?;
        worst_gap = worst_gap.max(local.norm / oracle - 1.0);
        ensure(local.norm <= 1.10 * oracle, format!("cyclic:{n}: local {} vs optimum {oracle}", local.norm))?;
    }
    let mut detail = format!("local search within {:.1}% of optimum on cyclic:2..16", 100.0 * worst_gap);
    for spec in ["alt:5", "abelian:2x2x2x2"] {
        let g = build(spec);
        let best = local_search_restarts(&g, 20, 3).map_err(|e| e.to_string())?;
        let random = random_best_of_k(&g, 200, 4).map_err(|e| e.to_string())?;
        let mean = random.random_mean.unwrap();
        let root = (g.order() as f64).sqrt();
        ensure(best.norm <= 3.0 * root, format!("{spec}: norm {} > 3√n", best.norm))?;
        ensure(best.norm < mean, format!("{spec}: norm {} not below random mean {mean}", best.norm))?;
        detail += &format!(", {spec} ratio {:.3} (random mean {:.3})", best.discrepancy_ratio, mean / root);
    }
    Ok(detail)
}

fn c10_reduction_identity() -> Check {
    let g = build("cyclic:8");
    let table = abelian_characters(&g).map_err(|e| e.to_string())?;
    let mut rng = trial_rng(99, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let signs = random_signs(8, &mut rng);
        let sup = table.sup_norm(&signs);
        let norm = signed_norm(&g, &signs).map_err(|e| e.to_string())?;
        let r = (sup - norm).abs() / norm.max(1.0);
        worst = worst.max(r);
        ensure(r <= 1e-6, format!("sup {sup} vs norm {norm}"))?;
    }
    Ok(format!("100 sign vectors, worst relative gap {worst:.1e}"))
}

fn c11_cli_reproducible() -> Check {
    let exe = env!("CARGO_BIN_EXE_cayley-lab");
    let runs: [&[&str]; 6] = [
        &["group-info", "--group", "sym:4"],
        &["estimate", "--group", "alt:5", "--trials", "200", "--seed", "5", "--method", "block"],
        &["estimate", "--group", "cyclic:16", "--trials", "100", "--seed", "5", "--format", "csv"],
        &["bounds", "--group", "alt:5", "--format", "csv"],
        &["theorem1-sweep", "--family", "cyclic", "--sizes", "16,64", "--trials", "100", "--seed", "2", "--format", "csv"],
        &["spencer", "--group", "alt:5", "--method", "local", "--budget", "4", "--seed", "6"],
    ];
    for args in runs {
        let run = || Command::new(exe).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        ensure(a.status.success(), format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr)))?;
        ensure(!a.stdout.is_empty() && a.stdout == b.stdout, format!("{args:?}: outputs differ"))?;
    }
    Ok(format!("{} commands byte-identical across runs", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("group laws", c1_group_laws),
        ("degree decomposition", c2_degrees),
        ("exact bound identities", c3_identities),
        ("m(G) values and bounds", c4_m_values),
        ("block sampler distribution", c5_block_distribution),
        ("real/complex sandwich", c6_sandwich),
        ("abelian scaling", c7_abelian_scaling),
        ("simple-group scaling", c8_simple_scaling),
        ("sign searches", c9_spencer),
        ("abelian reduction identity", c10_reduction_identity),
        ("CLI reproducibility", c11_cli_reproducible),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
