use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cayley_core::experiment::{self, Output, OutputFormat, SpectrumCache, SweepFamily};
use cayley_core::sampler::{Method, DEFAULT_TRIALS};
use cayley_core::spencer::SpencerMethod;
use cayley_core::Result;

/// Numerical experiments on Gaussian Cayley matrices of finite groups.
#[derive(Parser)]
#[command(name = "cayley-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, conjugacy classes and irreducible degrees.
    GroupInfo {
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo estimate of the expected spectral norm.
    Estimate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// direct_real, direct_complex or block.
        #[arg(long, default_value = "direct_real")]
        method: Method,
    },
    /// Variance parameters, w certificate and m(G).
    Bounds {
        #[command(flatten)]
        common: Common,
    },
    /// Norm estimates and m(G) across a family of groups.
    #[command(name = "theorem1-sweep")]
    Sweep {
        /// cyclic (sizes are orders) or alternating (sizes are k in A_k).
        #[arg(long)]
        family: SweepFamily,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value = "block")]
        method: Method,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for signs with small discrepancy norm.
    Spencer {
        #[command(flatten)]
        common: Common,
        /// brute, random, local or abelian.
        #[arg(long, default_value = "local")]
        method: SpencerMethod,
        /// Random draws or search restarts.
        #[arg(long, default_value_t = 20)]
        budget: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Group spec such as cyclic:16, abelian:2x2x2, dihedral:5, sym:4, alt:5, psl2:7.
    #[arg(long)]
    group: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for cached irreducible degree spectra.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<()> {
    let (output, opts) = match cli.command {
        Command::GroupInfo { common } => {
            let g = experiment::build_group(&common.group)?;
            let spectrum = cache(&common.output).spectrum(&g, common.output.seed)?;
            (Output::GroupInfo(experiment::group_info(&g, &spectrum)), common.output)
        }
        Command::Estimate { common, trials, method } => {
            let g = experiment::build_group(&common.group)?;
            let report = experiment::estimate(&g, method, trials, common.output.seed, &cache(&common.output))?;
            (Output::Estimate(report), common.output)
        }
        Command::Bounds { common } => {
            let g = experiment::build_group(&common.group)?;
            let report = experiment::bounds(&g, &cache(&common.output), common.output.seed)?;
            (Output::Bounds(report), common.output)
        }
        Command::Sweep { family, sizes, trials, method, output } => {
            let report = experiment::theorem1_sweep(family, &sizes, method, trials, output.seed, &cache(&output))?;
            (Output::Sweep(report), output)
        }
        Command::Spencer { common, method, budget } => {
            let g = experiment::build_group(&common.group)?;
            let coloring = experiment::spencer_search(&g, method, budget, common.output.seed)?;
            (Output::Spencer(coloring), common.output)
        }
    };
    let text = output.render(opts.format)?;
    match &opts.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cache(opts: &OutputArgs) -> SpectrumCache {
    SpectrumCache::new(opts.cache_dir.clone())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
