//! Resolved experiment configurations and the work behind each subcommand.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use fbsplit_core::imaging::{
    add_noise, load_pgm, make_blur_map, save_pgm, snr_db_slices, BlurMap, Image, KernelSpec,
    NoiseSpec, PgmFormat, SnrObserver,
};
use fbsplit_core::linalg::{operator_norm, Preconditioner, Vector};
use fbsplit_core::solvers::{
    fixed_point_residual, run_solver_from, validate_config, Contraction, Diagnostic, InertiaMode,
    ProxTerm, Schedule, Severity, SmoothTerm, SolverOutput,
};
use fbsplit_core::{Algorithm, LassoProblem, SolverConfig};

use crate::csv::{render_snr_table, render_trace, TraceRow};
use crate::error::{CliError, CliResult};
use crate::kv::{render_kv, KvFile};

pub const DEFAULT_CHECKPOINTS: [usize; 9] = [1, 5, 10, 25, 50, 100, 250, 500, 1000];
pub const DEFAULT_NOISE_SIGMA: f64 = 1e-3;
pub const DEFAULT_SEED: u64 = 42;

/// Parameters shared by every solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub rho: f64,
    pub lambda: f64,
    pub theta: Schedule,
    pub alpha: Schedule,
    pub beta: Schedule,
    pub contraction: f64,
    /// `Some(c)` switches on the summable inertia guard.
    pub summable_inertia: Option<f64>,
}

impl Default for SolverSettings {
    /// `ρ = 1e-4`, `λ = 0.99`, `θₙ = 1/10`, `αₙ = 1/2`, `βₙ = 1/(10n)`, `f(x) = 0.99x`.
    fn default() -> Self {
        Self {
            rho: 1e-4,
            lambda: 0.99,
            theta: Schedule::Constant(0.1),
            alpha: Schedule::Constant(0.5),
            beta: Schedule::Harmonic(0.1),
            contraction: 0.99,
            summable_inertia: None,
        }
    }
}

impl SolverSettings {
    /// Builds and validates a fixed-length run (no early stopping).
    pub fn solver_config(
        &self,
        algorithm: Algorithm,
        preconditioner: Preconditioner,
        iters: usize,
    ) -> CliResult<(SolverConfig, Vec<Diagnostic>)> {
        let mut cfg = SolverConfig::new(algorithm, preconditioner);
        cfg.lambda = Schedule::Constant(self.lambda);
        cfg.theta = self.theta.clone();
        cfg.alpha = self.alpha.clone();
        cfg.beta = self.beta.clone();
        cfg.contraction = Contraction::scaling(self.contraction)?;
        cfg.inertia = match self.summable_inertia {
            Some(c) => InertiaMode::Summable { c },
            None => InertiaMode::Scheduled,
        };
        cfg.max_iters = iters;
        cfg.stop_tol = 0.0;
        let diagnostics = validate_config(&cfg)?;
        Ok((cfg, diagnostics))
    }

    pub fn prox(&self) -> CliResult<ProxTerm> {
        Ok(ProxTerm::new(self.rho)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegradeConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub kernel: KernelSpec,
    pub noise_sigma: f64,
    pub seed: u64,
    pub format: PgmFormat,
}

/// What a degrade run records next to its output image.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradeMeta {
    pub kernel: KernelSpec,
    pub noise_sigma: f64,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub lipschitz: f64,
}

impl DegradeMeta {
    pub fn render(&self) -> String {
        render_kv(&[
            ("kernel", self.kernel.to_string()),
            ("noise_sigma", format!("{:e}", self.noise_sigma)),
            ("seed", self.seed.to_string()),
            ("width", self.width.to_string()),
            ("height", self.height.to_string()),
            ("lipschitz", format!("{:.17e}", self.lipschitz)),
        ])
    }

    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let mut f = KvFile::parse(text, origin)?;
        let missing = |k: &str| CliError::Io(format!("{origin}: missing `{k}`"));
        let meta = Self {
            kernel: f.take("kernel")?.ok_or_else(|| missing("kernel"))?,
            noise_sigma: f
                .take("noise_sigma")?
                .ok_or_else(|| missing("noise_sigma"))?,
            seed: f.take("seed")?.ok_or_else(|| missing("seed"))?,
            width: f.take("width")?.ok_or_else(|| missing("width"))?,
            height: f.take("height")?.ok_or_else(|| missing("height"))?,
            lipschitz: f.take("lipschitz")?.ok_or_else(|| missing("lipschitz"))?,
        };
        f.finish()?;
        Ok(meta)
    }
}

/// `image.pgm` → `image.pgm.meta`.
pub fn sidecar_path(image: &Path) -> PathBuf {
    let mut name = image.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

fn load_image(path: &Path) -> CliResult<Image> {
    load_pgm(path).map_err(|e| CliError::from(e).with_path(path))
}

fn save_image(img: &Image, path: &Path, format: PgmFormat) -> CliResult<()> {
    save_pgm(img, path, format).map_err(|e| CliError::from(e).with_path(path))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fbsplit_core::imaging::write_atomic(path, text.as_bytes())
        .map_err(|e| CliError::from(e).with_path(path))
}

fn blur_lipschitz(map: &BlurMap) -> CliResult<f64> {
    let norm = operator_norm(map)?;
    Ok(norm * norm)
}

/// Blurs, adds seeded noise, and writes the image plus its sidecar.
pub fn run_degrade(cfg: &DegradeConfig) -> CliResult<DegradeMeta> {
    let clean = load_image(&cfg.input)?;
    let kernel = cfg.kernel.build()?;
    let map = make_blur_map(kernel, clean.width(), clean.height())?;
    let noise = NoiseSpec::new(cfg.noise_sigma, cfg.seed)?;
    let degraded = add_noise(&map.blur(&clean)?, noise)?;
    let meta = DegradeMeta {
        kernel: cfg.kernel.clone(),
        noise_sigma: cfg.noise_sigma,
        seed: cfg.seed,
        width: clean.width(),
        height: clean.height(),
        lipschitz: blur_lipschitz(&map)?,
    };
    save_image(&degraded, &cfg.output, cfg.format)?;
    write_text(&sidecar_path(&cfg.output), &meta.render())?;
    Ok(meta)
}

/// Inputs shared by `restore` and `compare`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Degraded image.
    pub input: PathBuf,
    /// Pristine image for the SNR column.
    pub original: PathBuf,
    /// Falls back to the input's sidecar when absent.
    pub kernel: Option<KernelSpec>,
    pub algorithms: Vec<Algorithm>,
    pub solver: SolverSettings,
    pub iters: usize,
    /// Strictly increasing, all `≤ iters`.
    pub checkpoints: Vec<usize>,
    /// Writes `0` in the `elapsed_s` column so traces are reproducible.
    pub omit_timing: bool,
}

impl ExperimentConfig {
    pub fn check(&self) -> CliResult<()> {
        if self.algorithms.is_empty() {
            return Err(CliError::usage("at least one algorithm is required"));
        }
        check_checkpoints(&self.checkpoints, self.iters)
    }
}

pub fn check_checkpoints(checkpoints: &[usize], iters: usize) -> CliResult<()> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::usage(format!(
            "checkpoints must be strictly increasing, got {checkpoints:?}"
        )));
    }
    if let Some(&last) = checkpoints.last() {
        if last > iters {
            return Err(CliError::usage(format!(
                "checkpoint {last} exceeds the iteration count {iters}"
            )));
        }
    }
    Ok(())
}

/// The deblurring problem assembled from files, shared read-only by all runs.
#[derive(Debug, Clone)]
pub struct Deblurring {
    pub degraded: Image,
    pub original: Image,
    pub problem: LassoProblem,
    pub preconditioner: Preconditioner,
    pub kernel: KernelSpec,
    /// Noise seed recorded by `degrade`, when a sidecar was found.
    pub seed: Option<u64>,
}

impl Deblurring {
    pub fn load(cfg: &ExperimentConfig) -> CliResult<Self> {
        let side = sidecar_path(&cfg.input);
        let meta = if side.exists() {
            let text =
                std::fs::read_to_string(&side).map_err(|e| CliError::from(e).with_path(&side))?;
            Some(DegradeMeta::parse(&text, &side.display().to_string())?)
        } else {
            None
        };
        let kernel = match (&cfg.kernel, &meta) {
            (Some(k), _) => k.clone(),
            (None, Some(m)) => m.kernel.clone(),
            (None, None) => {
                return Err(CliError::usage(format!(
                    "no --kernel given and no sidecar {} to read it from",
                    side.display()
                )))
            }
        };
        let degraded = load_image(&cfg.input)?;
        let original = load_image(&cfg.original)?;
        if !degraded.same_shape(&original) {
            return Err(CliError::usage(format!(
                "degraded image is {}x{} but original is {}x{}",
                degraded.width(),
                degraded.height(),
                original.width(),
                original.height()
            )));
        }
        if original.pixels().iter().all(|p| *p == 0.0) {
            return Err(CliError::usage(
                "SNR is undefined for an all-black original",
            ));
        }
        let map = make_blur_map(kernel.build()?, degraded.width(), degraded.height())?;
        let lipschitz = blur_lipschitz(&map)?;
        let smooth = SmoothTerm::new(Arc::new(map), degraded.to_vector(), lipschitz)?;
        let problem = LassoProblem::new(smooth, cfg.solver.prox()?);
        let preconditioner = Preconditioner::scalar(degraded.len(), lipschitz)?;
        Ok(Self {
            degraded,
            original,
            problem,
            preconditioner,
            kernel,
            seed: meta.map(|m| m.seed),
        })
    }

    pub fn lipschitz(&self) -> f64 {
        self.problem.smooth.lipschitz()
    }

    /// Runs one algorithm from `x₀ = x₁ = degraded`.
    pub fn solve(
        &self,
        algorithm: Algorithm,
        solver: &SolverSettings,
        iters: usize,
    ) -> CliResult<Restoration> {
        let (cfg, diagnostics) =
            solver.solver_config(algorithm, self.preconditioner.clone(), iters)?;
        let start = self.degraded.to_vector();
        let start_row = self.start_row(&start, &cfg)?;
        let mut observer = SnrObserver::new(&self.original)?;
        let out = run_solver_from(&self.problem, &cfg, start, &mut observer)?;
        Ok(Restoration {
            algorithm,
            start_row,
            output: out,
            diagnostics,
        })
    }

    fn start_row(&self, x: &Vector, cfg: &SolverConfig) -> CliResult<TraceRow> {
        let lambda = cfg.lambda.value(1);
        Ok(TraceRow {
            iter: 0,
            snr_db: snr_db_slices(self.original.pixels(), x.as_slice())?,
            objective: self.problem.objective(x)?,
            residual_m_norm: fixed_point_residual(
                x,
                lambda,
                &self.preconditioner,
                &self.problem.smooth,
                &self.problem.prox,
            )?,
            elapsed_s: 0.0,
        })
    }
}

/// One finished run.
#[derive(Debug, Clone)]
pub struct Restoration {
    pub algorithm: Algorithm,
    /// Metrics at the starting point, reported as iteration 0.
    pub start_row: TraceRow,
    pub output: SolverOutput,
    pub diagnostics: Vec<Diagnostic>,
}

impl Restoration {
    /// Iteration 0 followed by every iteration, or only the listed ones.
    pub fn rows(&self, only: Option<&[usize]>, omit_timing: bool) -> Vec<TraceRow> {
        let mut rows = vec![self.start_row];
        rows.extend(
            self.output
                .trace
                .records
                .iter()
                .filter(|r| only.map_or(true, |c| c.binary_search(&r.iter).is_ok()))
                .map(|r| TraceRow {
                    iter: r.iter,
                    snr_db: r.snr_db.unwrap_or(f64::NAN),
                    objective: r.objective,
                    residual_m_norm: r.residual,
                    elapsed_s: if omit_timing { 0.0 } else { r.elapsed_s },
                }),
        );
        rows
    }

    /// SNR after each checkpoint iteration (iteration 0 is the start).
    pub fn snr_at(&self, checkpoints: &[usize]) -> Vec<f64> {
        checkpoints
            .iter()
            .map(|&c| {
                if c == 0 {
                    self.start_row.snr_db
                } else {
                    self.output.trace.records[c - 1].snr_db.unwrap_or(f64::NAN)
                }
            })
            .collect()
    }

    pub fn image(&self, width: usize, height: usize) -> CliResult<Image> {
        Ok(Image::from_vector(
            width,
            height,
            self.output.x_final.clone(),
        )?)
    }

    pub fn header(&self, lipschitz: f64, seed: Option<u64>) -> String {
        let mut text = render_kv(&[
            ("algorithm", self.algorithm.name().to_string()),
            ("lipschitz", format!("{lipschitz:.17e}")),
            ("config", self.output.trace.header.config.clone()),
        ]);
        if let Some(s) = seed {
            text.push_str(&render_kv(&[("seed", s.to_string())]));
        }
        text
    }
}

/// Reports warnings and notes on standard error.
pub fn print_diagnostics(algorithm: Algorithm, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        let tag = match d.severity {
            Severity::Warning => "warning",
            Severity::Note => "note",
        };
        eprintln!(
            "{tag}: {algorithm}: condition {}: {}",
            d.condition, d.message
        );
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestoreOutputs {
    pub trace: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: PgmFormat,
}

/// Runs the first listed algorithm and writes the restored image and trace.
pub fn run_restore(cfg: &ExperimentConfig, out: &RestoreOutputs) -> CliResult<Restoration> {
    cfg.check()?;
    let setup = Deblurring::load(cfg)?;
    let algorithm = cfg.algorithms[0];
    let run = setup.solve(algorithm, &cfg.solver, cfg.iters)?;
    print_diagnostics(algorithm, &run.diagnostics);
    if let Some(path) = &out.output {
        let img = run.image(setup.degraded.width(), setup.degraded.height())?;
        save_image(&img, path, out.format)?;
    }
    if let Some(path) = &out.trace {
        let only = (!cfg.checkpoints.is_empty()).then_some(cfg.checkpoints.as_slice());
        write_text(path, &render_trace(&run.rows(only, cfg.omit_timing)))?;
        write_text(
            &sidecar_path(path),
            &run.header(setup.lipschitz(), setup.seed),
        )?;
    }
    Ok(run)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareOutputs {
    pub table: PathBuf,
    pub trace_dir: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub format: PgmFormat,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub checkpoints: Vec<usize>,
    pub runs: Vec<Restoration>,
    pub table: String,
}

/// Runs every algorithm on its own thread from the same start, then writes
/// the checkpoint table and, optionally, per-algorithm traces and images.
pub fn run_compare(cfg: &ExperimentConfig, out: &CompareOutputs) -> CliResult<Comparison> {
    cfg.check()?;
    if cfg.algorithms.len() < 2 {
        return Err(CliError::usage("compare needs at least two algorithms"));
    }
    if cfg.checkpoints.is_empty() {
        return Err(CliError::usage("compare needs at least one checkpoint"));
    }
    for (i, a) in cfg.algorithms.iter().enumerate() {
        if cfg.algorithms[..i].contains(a) {
            return Err(CliError::usage(format!("algorithm `{a}` is listed twice")));
        }
    }
    let setup = Deblurring::load(cfg)?;
    // Reject bad parameters for every algorithm before starting any work.
    for &a in &cfg.algorithms {
        let (_, diagnostics) =
            cfg.solver
                .solver_config(a, setup.preconditioner.clone(), cfg.iters)?;
        print_diagnostics(a, &diagnostics);
    }

    let results: Vec<CliResult<Restoration>> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .algorithms
            .iter()
            .map(|&a| {
                let setup = &setup;
                s.spawn(move || setup.solve(a, &cfg.solver, cfg.iters))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let runs = results.into_iter().collect::<CliResult<Vec<_>>>()?;

    let names: Vec<&str> = cfg.algorithms.iter().map(|a| a.name()).collect();
    let columns: Vec<Vec<f64>> = runs.iter().map(|r| r.snr_at(&cfg.checkpoints)).collect();
    let table = render_snr_table(&names, &cfg.checkpoints, &columns);

    let (w, h) = (setup.degraded.width(), setup.degraded.height());
    if let Some(dir) = &out.trace_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::from(e).with_path(dir))?;
        for run in &runs {
            let path = dir.join(format!("{}.csv", run.algorithm));
            write_text(&path, &render_trace(&run.rows(None, cfg.omit_timing)))?;
            write_text(
                &sidecar_path(&path),
                &run.header(setup.lipschitz(), setup.seed),
            )?;
        }
    }
    if let Some(dir) = &out.output_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::from(e).with_path(dir))?;
        for run in &runs {
            save_image(
                &run.image(w, h)?,
                &dir.join(format!("{}.pgm", run.algorithm)),
                out.format,
            )?;
        }
    }
    write_text(&out.table, &table)?;
    Ok(Comparison {
        checkpoints: cfg.checkpoints.clone(),
        runs,
        table,
    })
}
