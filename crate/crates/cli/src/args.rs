//! Command-line syntax and its resolution against an optional config file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fbsplit_core::imaging::{KernelSpec, PgmFormat};
use fbsplit_core::solvers::Schedule;
use fbsplit_core::Algorithm;

use crate::error::{CliError, CliResult};
use crate::experiment::{
    CompareOutputs, DegradeConfig, ExperimentConfig, RestoreOutputs, SolverSettings,
    DEFAULT_CHECKPOINTS, DEFAULT_NOISE_SIGMA, DEFAULT_SEED,
};
use crate::kv::KvFile;
use crate::lasso::LassoDemoConfig;

#[derive(Debug, Parser)]
#[command(
    name = "fbsplit",
    version,
    about = "Forward-backward splitting solvers and deblurring benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Blur an image, add seeded Gaussian noise, write it with a metadata sidecar.
    Degrade(DegradeArgs),
    /// Deblur with one algorithm, writing the restored image and a CSV trace.
    Restore(RestoreArgs),
    /// Run several algorithms on the same input and tabulate SNR at checkpoints.
    Compare(CompareArgs),
    /// Solve seeded random sparse-recovery problems and check optimality.
    LassoDemo(LassoDemoArgs),
}

#[derive(Debug, Args)]
pub struct DegradeArgs {
    /// Clean input image (PGM).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Degraded output image (PGM); a `.meta` sidecar is written next to it.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// `gaussian:size,sigma`, `motion:length,angle` or `delta`.
    #[arg(long)]
    pub kernel: Option<KernelSpec>,
    /// Standard deviation of the additive noise [default: 0.001].
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// Noise seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write ASCII (`P2`) instead of binary (`P5`) PGM.
    #[arg(long)]
    pub ascii: bool,
    /// `key = value` file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// l1 weight ρ [default: 0.0001; lasso-demo derives it from --rho-fraction].
    #[arg(long)]
    pub rho: Option<f64>,
    /// Constant step λ [default: 0.99].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Inertia schedule θₙ [default: const:0.1].
    #[arg(long)]
    pub theta: Option<Schedule>,
    /// Relaxation schedule αₙ [default: const:0.5].
    #[arg(long)]
    pub alpha: Option<Schedule>,
    /// Anchor weight schedule βₙ; `harmonic:c` means c/n [default: harmonic:0.1].
    #[arg(long)]
    pub beta: Option<Schedule>,
    /// Coefficient k of the contraction f(x) = kx [default: 0.99].
    #[arg(long)]
    pub contraction: Option<f64>,
    /// Cap θₙ so that Σ θₙ‖xₙ − xₙ₋₁‖ converges, with constant C.
    #[arg(long, value_name = "C")]
    pub summable_inertia: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ImagingArgs {
    /// Degraded image (PGM).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Pristine image the SNR is measured against (PGM).
    #[arg(long)]
    pub original: Option<PathBuf>,
    /// Blur kernel; read from the input's `.meta` sidecar when omitted.
    #[arg(long)]
    pub kernel: Option<KernelSpec>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Iteration count [default: the last checkpoint, or 1000].
    #[arg(long)]
    pub iters: Option<usize>,
    /// Strictly increasing iteration numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<usize>>,
    /// Write 0 in the elapsed_s column for reproducible traces.
    #[arg(long)]
    pub omit_timing: bool,
    /// Write ASCII (`P2`) instead of binary (`P5`) PGM.
    #[arg(long)]
    pub ascii: bool,
    /// `key = value` file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RestoreArgs {
    #[command(flatten)]
    pub common: ImagingArgs,
    /// fbs, prox-grad, moudafi-oliny, lorenz-pock, apfbnsm or new [default: new].
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    /// CSV trace output.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Restored image output (PGM).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: ImagingArgs,
    /// Comma-separated list, at least two [default: lorenz-pock,apfbnsm,new].
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Option<Vec<Algorithm>>,
    /// SNR table output (CSV).
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Directory for per-algorithm traces `<algorithm>.csv`.
    #[arg(long)]
    pub trace_dir: Option<PathBuf>,
    /// Directory for per-algorithm restored images `<algorithm>.pgm`.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LassoDemoArgs {
    /// Number of unknowns d [default: 50].
    #[arg(long)]
    pub dimension: Option<usize>,
    /// Nonzeros in the ground truth [default: 5].
    #[arg(long)]
    pub sparsity: Option<usize>,
    /// [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// [default: all six methods].
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Option<Vec<Algorithm>>,
    /// Iterations per algorithm [default: 10000].
    #[arg(long)]
    pub iters: Option<usize>,
    /// Measurement noise level [default: 0.001].
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// ρ as a fraction of ‖Aᵀb‖_∞, ignored when --rho is given [default: 0.1].
    #[arg(long)]
    pub rho_fraction: Option<f64>,
    /// Required KKT residual for every algorithm [default: 0.001].
    #[arg(long)]
    pub kkt_target: Option<f64>,
    /// Iteration cap for the reference solution [default: 1000000].
    #[arg(long)]
    pub reference_iters: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// `key = value` file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn required<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::usage(format!("missing required --{flag}")))
}

fn format(ascii: bool, file: &mut KvFile) -> CliResult<PgmFormat> {
    let ascii = ascii || file.take::<bool>("ascii")?.unwrap_or(false);
    Ok(if ascii {
        PgmFormat::Ascii
    } else {
        PgmFormat::Binary
    })
}

impl SolverArgs {
    /// Fills gaps from `file`; `rho` is optional so callers can choose its default.
    fn resolve(self, file: &mut KvFile) -> CliResult<(SolverSettings, Option<f64>)> {
        let d = SolverSettings::default();
        let rho = file.pick(self.rho, "rho")?;
        let settings = SolverSettings {
            rho: rho.unwrap_or(d.rho),
            lambda: file.pick(self.lambda, "lambda")?.unwrap_or(d.lambda),
            theta: file.pick(self.theta, "theta")?.unwrap_or(d.theta),
            alpha: file.pick(self.alpha, "alpha")?.unwrap_or(d.alpha),
            beta: file.pick(self.beta, "beta")?.unwrap_or(d.beta),
            contraction: file
                .pick(self.contraction, "contraction")?
                .unwrap_or(d.contraction),
            summable_inertia: file.pick(self.summable_inertia, "summable-inertia")?,
        };
        Ok((settings, rho))
    }
}

impl DegradeArgs {
    pub fn resolve(self) -> CliResult<DegradeConfig> {
        let mut file = KvFile::load_optional(self.config.as_deref())?;
        let cfg = DegradeConfig {
            input: required(file.pick(self.input, "input")?, "input")?,
            output: required(file.pick(self.output, "output")?, "output")?,
            kernel: required(file.pick(self.kernel, "kernel")?, "kernel")?,
            noise_sigma: file
                .pick(self.noise_sigma, "noise-sigma")?
                .unwrap_or(DEFAULT_NOISE_SIGMA),
            seed: file.pick(self.seed, "seed")?.unwrap_or(DEFAULT_SEED),
            format: format(self.ascii, &mut file)?,
        };
        file.finish()?;
        Ok(cfg)
    }
}

impl ImagingArgs {
    fn resolve(
        self,
        file: &mut KvFile,
        algorithms: Vec<Algorithm>,
        default_checkpoints: &[usize],
    ) -> CliResult<(ExperimentConfig, PgmFormat)> {
        let (solver, _) = self.solver.resolve(file)?;
        let checkpoints = file
            .pick_list(self.checkpoints, "checkpoints")?
            .unwrap_or_else(|| default_checkpoints.to_vec());
        let iters = file
            .pick(self.iters, "iters")?
            .or(checkpoints.last().copied())
            .unwrap_or(1000);
        let omit_timing = self.omit_timing || file.take::<bool>("omit-timing")?.unwrap_or(false);
        let cfg = ExperimentConfig {
            input: required(file.pick(self.input, "input")?, "input")?,
            original: required(file.pick(self.original, "original")?, "original").map_err(
                |_| {
                    CliError::usage(
                        "missing required --original (the SNR column needs the pristine image)",
                    )
                },
            )?,
            kernel: file.pick(self.kernel, "kernel")?,
            algorithms,
            solver,
            iters,
            checkpoints,
            omit_timing,
        };
        Ok((cfg, format(self.ascii, file)?))
    }
}

impl RestoreArgs {
    pub fn resolve(self) -> CliResult<(ExperimentConfig, RestoreOutputs)> {
        let mut file = KvFile::load_optional(self.common.config.as_deref())?;
        let algorithm = file
            .pick(self.algorithm, "algorithm")?
            .unwrap_or(Algorithm::New);
        let (cfg, fmt) = self.common.resolve(&mut file, vec![algorithm], &[])?;
        let out = RestoreOutputs {
            trace: file.pick(self.trace, "trace")?,
            output: file.pick(self.output, "output")?,
            format: fmt,
        };
        file.finish()?;
        Ok((cfg, out))
    }
}

impl CompareArgs {
    pub fn resolve(self) -> CliResult<(ExperimentConfig, CompareOutputs)> {
        let mut file = KvFile::load_optional(self.common.config.as_deref())?;
        let algorithms = file
            .pick_list(self.algorithms, "algorithms")?
            .unwrap_or_else(|| vec![Algorithm::LorenzPock, Algorithm::Apfbnsm, Algorithm::New]);
        let (cfg, fmt) = self
            .common
            .resolve(&mut file, algorithms, &DEFAULT_CHECKPOINTS)?;
        let out = CompareOutputs {
            table: required(file.pick(self.table, "table")?, "table")?,
            trace_dir: file.pick(self.trace_dir, "trace-dir")?,
            output_dir: file.pick(self.output_dir, "output-dir")?,
            format: fmt,
        };
        file.finish()?;
        Ok((cfg, out))
    }
}

impl LassoDemoArgs {
    pub fn resolve(self) -> CliResult<LassoDemoConfig> {
        let mut file = KvFile::load_optional(self.config.as_deref())?;
        let d = LassoDemoConfig::default();
        let (solver, rho) = self.solver.resolve(&mut file)?;
        let cfg = LassoDemoConfig {
            dimension: file
                .pick(self.dimension, "dimension")?
                .unwrap_or(d.dimension),
            sparsity: file.pick(self.sparsity, "sparsity")?.unwrap_or(d.sparsity),
            seed: file.pick(self.seed, "seed")?.unwrap_or(d.seed),
            algorithms: file
                .pick_list(self.algorithms, "algorithms")?
                .unwrap_or(d.algorithms),
            iters: file.pick(self.iters, "iters")?.unwrap_or(d.iters),
            noise_sigma: file
                .pick(self.noise_sigma, "noise-sigma")?
                .unwrap_or(d.noise_sigma),
            rho,
            rho_fraction: file
                .pick(self.rho_fraction, "rho-fraction")?
                .unwrap_or(d.rho_fraction),
            kkt_target: file
                .pick(self.kkt_target, "kkt-target")?
                .unwrap_or(d.kkt_target),
            reference_iters: file
                .pick(self.reference_iters, "reference-iters")?
                .unwrap_or(d.reference_iters),
            solver,
        };
        file.finish()?;
        Ok(cfg)
    }
}
