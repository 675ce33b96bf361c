//! Report types and drivers behind the `cayley-lab` command line.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_report, m_of_group, small_degree_counts, BoundsReport, SmallDegreeCount};
use crate::error::{Error, Result};
use crate::group::{make_group, FiniteGroup, GroupFamily, DEFAULT_ORDER_CAP};
use crate::repr::{irrep_spectrum, IrrepSpectrum};
use crate::sampler::{estimate_expected_norm, series_for, trial_rng, Method};
use crate::spencer::{self, Coloring, SpencerMethod};

/// Largest `k` accepted for alternating sweeps.
pub const ALTERNATING_SWEEP_MAX: usize = 7;
const SMALL_DEGREE_EPSILONS: [f64; 3] = [0.25, 0.5, 1.0];
const ROW_STREAM_BASE: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::InvalidArgument(format!("unknown format '{other}'"))),
        }
    }
}

pub fn build_group(spec: &str) -> Result<FiniteGroup> {
    let family: GroupFamily = spec.parse()?;
    make_group(&family, DEFAULT_ORDER_CAP)
}

/// Irreducible degree spectra stored as JSON files keyed by group name.
/// Without a directory every lookup recomputes.
#[derive(Clone, Debug, Default)]
pub struct SpectrumCache {
    dir: Option<PathBuf>,
}

impl SpectrumCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        SpectrumCache { dir }
    }

    pub fn disabled() -> Self {
        SpectrumCache { dir: None }
    }

    fn path_for(dir: &Path, name: &str) -> PathBuf {
        let file: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
        dir.join(format!("{file}.json"))
    }

    /// Cached spectrum for `group`, computing and storing it on a miss.
    /// Entries that do not match the group are recomputed.
    pub fn spectrum(&self, group: &FiniteGroup, seed: u64) -> Result<IrrepSpectrum> {
        let Some(dir) = &self.dir else {
            return irrep_spectrum(group, seed);
        };
        let path = Self::path_for(dir, group.name());
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(s) = serde_json::from_str::<IrrepSpectrum>(&text) {
                if s.group == group.name() && s.sum_of_squares() == group.order() {
                    return Ok(s);
                }
            }
        }
        let s = irrep_spectrum(group, seed)?;
        fs::create_dir_all(dir)?;
        fs::write(&path, serde_json::to_string(&s)?)?;
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub group: String,
    pub order: usize,
    pub class_count: usize,
    pub class_sizes: Vec<usize>,
    pub commutator_index: usize,
    pub degrees: Vec<usize>,
    pub sum_of_squares: usize,
    pub sum_of_squares_ok: bool,
    /// Counts of degrees below `ε ln n`.
    pub small_degrees: Vec<SmallDegreeCount>,
}

pub fn group_info(group: &FiniteGroup, spectrum: &IrrepSpectrum) -> GroupInfo {
    let classes = group.conjugacy_classes();
    GroupInfo {
        group: group.name().to_string(),
        order: group.order(),
        class_count: classes.len(),
        class_sizes: classes.sizes(),
        commutator_index: group.commutator_index(),
        degrees: spectrum.degrees.clone(),
        sum_of_squares: spectrum.sum_of_squares(),
        sum_of_squares_ok: spectrum.sum_of_squares() == group.order(),
        small_degrees: small_degree_counts(spectrum, &SMALL_DEGREE_EPSILONS),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub group: String,
    pub n: usize,
    pub method: Method,
    pub trials: usize,
    pub seed: u64,
    pub mean: f64,
    pub std_error: f64,
}

pub fn estimate(
    group: &FiniteGroup,
    method: Method,
    trials: usize,
    seed: u64,
    cache: &SpectrumCache,
) -> Result<EstimateReport> {
    let spectrum = match method {
        Method::Block => Some(cache.spectrum(group, seed)?),
        _ => None,
    };
    let est = estimate_expected_norm(&series_for(group, method), trials, method, spectrum.as_ref(), seed)?;
    Ok(EstimateReport {
        group: group.name().to_string(),
        n: group.order(),
        method,
        trials,
        seed,
        mean: est.mean,
        std_error: est.std_error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    /// Sizes are group orders `n`.
    Cyclic,
    /// Sizes are degrees `k` of `A_k`.
    Alternating,
}

impl fmt::Display for SweepFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepFamily::Cyclic => "cyclic",
            SweepFamily::Alternating => "alternating",
        })
    }
}

impl FromStr for SweepFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" | "cyclic_powers" => Ok(SweepFamily::Cyclic),
            "alternating" | "alt" | "alternating_range" => Ok(SweepFamily::Alternating),
            other => Err(Error::InvalidArgument(format!("unknown sweep family '{other}'"))),
        }
    }
}

/// One row of a scaling table. Logarithms are natural.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub group: String,
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    pub m: f64,
    pub ratio_sqrt_n: f64,
    pub ratio_sqrt_nlogn: f64,
}

impl ScalingRow {
    pub fn new(group: &str, n: usize, mean: f64, std_error: f64, m: f64) -> Self {
        let nf = n as f64;
        ScalingRow {
            group: group.to_string(),
            n,
            mean,
            std_error,
            m,
            ratio_sqrt_n: mean / nf.sqrt(),
            ratio_sqrt_nlogn: mean / (nf * nf.ln()).sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: SweepFamily,
    pub method: Method,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<ScalingRow>,
}

/// Seed for row `index` of a sweep under `master_seed`.
pub fn row_seed(master_seed: u64, index: usize) -> u64 {
    trial_rng(master_seed, ROW_STREAM_BASE + index as u64).next_u64()
}

/// Estimates `E‖X_G‖` and `m(G)` for each size; rows are sorted by `n`.
pub fn theorem1_sweep(
    family: SweepFamily,
    sizes: &[usize],
    method: Method,
    trials: usize,
    seed: u64,
    cache: &SpectrumCache,
) -> Result<SweepReport> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("no sizes given".into()));
    }
    let families: Vec<GroupFamily> = sizes
        .iter()
        .map(|&s| match family {
            SweepFamily::Cyclic => {
                if s == 0 || s > DEFAULT_ORDER_CAP {
                    return Err(Error::OrderCap { order: s, cap: DEFAULT_ORDER_CAP });
                }
                Ok(GroupFamily::Cyclic(s))
            }
            SweepFamily::Alternating => {
                if !(3..=ALTERNATING_SWEEP_MAX).contains(&s) {
                    return Err(Error::InvalidArgument(format!(
                        "alternating sweep degree {s} outside 3..={ALTERNATING_SWEEP_MAX}"
                    )));
                }
                Ok(GroupFamily::Alternating(s))
            }
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<ScalingRow> = families
        .par_iter()
        .enumerate()
        .map(|(i, fam)| {
            let group = make_group(fam, DEFAULT_ORDER_CAP)?;
            let spectrum = cache.spectrum(&group, seed)?;
            let (m, _) = m_of_group(&spectrum)?;
            let s = row_seed(seed, i);
            let block = (method == Method::Block).then_some(&spectrum);
            let est = estimate_expected_norm(&series_for(&group, method), trials, method, block, s)?;
            Ok(ScalingRow::new(group.name(), group.order(), est.mean, est.std_error, m))
        })
        .collect::<Result<_>>()?;
    rows.sort_by_key(|r| r.n);
    Ok(SweepReport { family, method, trials, seed, rows })
}

pub fn bounds(group: &FiniteGroup, cache: &SpectrumCache, seed: u64) -> Result<BoundsReport> {
    bounds_report(group, &cache.spectrum(group, seed)?)
}

pub fn spencer_search(group: &FiniteGroup, method: SpencerMethod, budget: usize, seed: u64) -> Result<Coloring> {
    spencer::search(group, method, budget, seed)
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(true).from_writer(out)
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Anything the command line can print.
pub enum Output {
    GroupInfo(GroupInfo),
    Estimate(EstimateReport),
    Bounds(BoundsReport),
    Sweep(SweepReport),
    Spencer(Coloring),
}

impl Output {
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => {
                let mut s = match self {
                    Output::GroupInfo(x) => serde_json::to_string_pretty(x)?,
                    Output::Estimate(x) => serde_json::to_string_pretty(x)?,
                    Output::Bounds(x) => serde_json::to_string_pretty(x)?,
                    Output::Sweep(x) => serde_json::to_string_pretty(x)?,
                    Output::Spencer(x) => serde_json::to_string_pretty(x)?,
                };
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv_writer(Vec::new());
        match self {
            Output::GroupInfo(x) => {
                w.write_record(["group", "order", "class_count", "commutator_index", "sum_of_squares", "degrees"])?;
                w.write_record([
                    x.group.clone(),
                    x.order.to_string(),
                    x.class_count.to_string(),
                    x.commutator_index.to_string(),
                    x.sum_of_squares.to_string(),
                    join(&x.degrees, " "),
                ])?;
            }
            Output::Estimate(x) => w.serialize(x)?,
            Output::Bounds(x) => w.serialize(x.csv_row())?,
            Output::Sweep(x) => {
                for row in &x.rows {
                    w.serialize(row)?;
                }
            }
            Output::Spencer(x) => {
                w.write_record(["group", "method", "seed", "norm", "ratio", "signs"])?;
                w.write_record([
                    x.group.clone(),
                    x.method.to_string(),
                    x.seed.map(|s| s.to_string()).unwrap_or_default(),
                    x.norm.to_string(),
                    x.discrepancy_ratio.to_string(),
                    join(&x.signs, " "),
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}
