//! Thin command-line front end; all logic lives in the library.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tkz::error::Error;
use tkz::harness::{cmd_deblur, cmd_synth_bench, BenchPlan, DeblurPlan};
use tkz::sampling::StrategyKind;
use tkz::solvers::{SolverKind, Truncation};
use tkz::verify::{run_verify, Fault, VerifyScale};

#[derive(Parser)]
#[command(name = "tkz", version, about = "Tensor Kaczmarz solvers with Gearhart-Koshy acceleration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seeded synthetic benchmark sweep with per-trial traces and
    /// percentile aggregates.
    SynthBench {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        /// Target rank of every frontal slice.
        #[arg(long)]
        r: usize,
        /// Condition-number bound for the slices.
        #[arg(long, default_value_t = 10.0)]
        kappa: f64,
        /// Comma-separated list from {tk,tkgk,gs,tri,takshbm}.
        #[arg(long, value_delimiter = ',', default_value = "gs")]
        solver: Vec<SolverKind>,
        #[arg(long, default_value = "so")]
        strategy: StrategyKind,
        /// Comma-separated window sizes; "inf" keeps the whole history.
        #[arg(long, value_delimiter = ',', default_value = "5")]
        tau: Vec<Truncation>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol_rse: f64,
        #[arg(long, default_value_t = 2000)]
        max_epochs: usize,
        /// Rows per block for the tAKSHBM baseline.
        #[arg(long, default_value_t = 15)]
        block_size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Blur a ground-truth tensor, solve from zero, and report PSNR.
    Deblur {
        /// Ground-truth tensor in TT3F format.
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value_t = 6)]
        band: usize,
        #[arg(long, default_value_t = 1.8)]
        sigma: f64,
        #[arg(long, value_delimiter = ',', default_value = "gs")]
        solver: Vec<SolverKind>,
        #[arg(long, default_value = "so")]
        strategy: StrategyKind,
        #[arg(long, default_value = "5")]
        tau: Truncation,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5e-3)]
        tol_rse: f64,
        #[arg(long, default_value_t = 2000)]
        max_epochs: usize,
        #[arg(long, default_value_t = 15)]
        block_size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification suite and emit a JSON report.
    Verify {
        #[arg(long, default_value = "small")]
        scale: VerifyScale,
        /// Deliberately corrupt a quantity to prove the checks can fail.
        #[arg(long)]
        inject_fault: Option<Fault>,
        #[arg(long, default_value_t = 1234)]
        seed: u64,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Parse { .. } | Error::Json(_) => 3,
        Error::InvalidArgument { .. }
        | Error::DimensionMismatch { .. }
        | Error::Unsupported { .. }
        | Error::SizeCap { .. }
        | Error::NonFinite { .. } => 2,
        Error::NumericalBreakdown { .. } | Error::InconsistentSystem { .. } => 1,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::SynthBench {
            m,
            l,
            n,
            p,
            r,
            kappa,
            solver,
            strategy,
            tau,
            trials,
            seed,
            tol_rse,
            max_epochs,
            block_size,
            out,
        } => {
            let plan = BenchPlan {
                m,
                l,
                n,
                p,
                r,
                kappa,
                solvers: solver,
                strategy,
                taus: tau,
                trials,
                seed,
                tol_rse,
                max_epochs,
                block_size,
                out_dir: out,
            };
            let output = cmd_synth_bench(&plan)?;
            for agg in &output.aggregates {
                println!(
                    "{}-{} tau={}: median {} full iterations (p25 {}, p75 {}), median wall {:.3}s",
                    agg.solver,
                    agg.strategy,
                    agg.tau,
                    agg.full_iterations.median,
                    agg.full_iterations.p25,
                    agg.full_iterations.p75,
                    agg.wall_s.median
                );
            }
            Ok(0)
        }
        Command::Deblur {
            truth,
            band,
            sigma,
            solver,
            strategy,
            tau,
            seed,
            tol_rse,
            max_epochs,
            block_size,
            out,
        } => {
            let plan = DeblurPlan {
                truth_path: truth,
                band,
                sigma,
                solvers: solver,
                strategy,
                tau,
                seed,
                tol_rse,
                max_epochs,
                block_size,
                out_dir: out,
            };
            let output = cmd_deblur(&plan)?;
            for rep in &output.reports {
                println!(
                    "{}-{}: {} full iterations, final RSE {:?}, PSNR blurred {:.2} dB -> recon {:.2} dB",
                    rep.summary.solver,
                    rep.summary.strategy,
                    rep.summary.full_iterations,
                    rep.summary.rse_final,
                    rep.psnr_blurred_mean,
                    rep.psnr_recon_mean
                );
            }
            Ok(0)
        }
        Command::Verify {
            scale,
            inject_fault,
            seed,
            out,
        } => {
            let report = run_verify(scale, seed, inject_fault)?;
            let json = serde_json::to_string_pretty(&report)?;
            match out {
                Some(path) => std::fs::write(path, &json)?,
                None => println!("{json}"),
            }
            for c in &report.checks {
                eprintln!(
                    "{} {}: measured {:.3e}, threshold {:.3e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.threshold
                );
            }
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
