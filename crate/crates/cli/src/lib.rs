//! Command-line front end for `fbsplit-core`: image degradation, restoration
//! with CSV traces, multi-algorithm SNR tables and a sparse-recovery demo.
//!
//! Exit codes: 0 success, 1 lasso-demo targets missed, 2 argument or config
//! error, 3 I/O or file-format error, 4 numerical divergence.

pub mod args;
pub mod csv;
pub mod error;
pub mod experiment;
pub mod kv;
pub mod lasso;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command};
pub use csv::{format_sig9, parse_trace_csv, write_trace_csv, TraceRow};
pub use error::{CliError, CliResult};
pub use experiment::{
    run_compare, run_degrade, run_restore, DegradeConfig, ExperimentConfig, SolverSettings,
};
pub use lasso::{run_lasso_demo, LassoDemoConfig, LassoReport};

/// Exit status when lasso-demo finishes but some algorithm misses its target.
pub const EXIT_TARGET_MISSED: i32 = 1;

/// Executes a parsed command, returning the process exit status.
pub fn execute(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Degrade(a) => {
            let cfg = a.resolve()?;
            let meta = run_degrade(&cfg)?;
            println!(
                "wrote {} ({}x{}, kernel {}, sigma {}, seed {}, L_h {:.9})",
                cfg.output.display(),
                meta.width,
                meta.height,
                meta.kernel,
                meta.noise_sigma,
                meta.seed,
                meta.lipschitz
            );
            Ok(0)
        }
        Command::Restore(a) => {
            let (cfg, out) = a.resolve()?;
            let run = run_restore(&cfg, &out)?;
            let last = run.rows(None, true).last().copied().expect("start row");
            println!(
                "{}: {} iterations, snr {} dB, objective {}, residual {}",
                run.algorithm,
                last.iter,
                format_sig9(last.snr_db),
                format_sig9(last.objective),
                format_sig9(last.residual_m_norm)
            );
            Ok(0)
        }
        Command::Compare(a) => {
            let (cfg, out) = a.resolve()?;
            let cmp = run_compare(&cfg, &out)?;
            print!("{}", cmp.table);
            Ok(0)
        }
        Command::LassoDemo(a) => {
            let cfg = a.resolve()?;
            let report = run_lasso_demo(&cfg)?;
            print!("{}", report.render());
            Ok(if report.passed() {
                0
            } else {
                EXIT_TARGET_MISSED
            })
        }
    }
}

/// Parses `args` and runs; errors are printed to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
