//! Experiment harness behind the `tkz` command line: seeded synthetic
//! benchmarks with per-trial traces and percentile aggregates, and the
//! deblurring pipeline with per-frame PSNR reports.
//!
//! Every output is fully determined by the plan's seed; wall-clock columns
//! are the only fields that vary between reruns.

use crate::error::{Error, Result};
use crate::problems::{
    blur_instance, gen_synthetic, psnr, read_tensor, write_tensor, write_trace_csv, BlurSpec,
    ProblemInstance, RunSummary, SyntheticSpec,
};
use crate::sampling::StrategyKind;
use crate::solvers::{run_solver, SolverConfig, SolverKind, SolverRun, Truncation};
use crate::tensor::Tensor3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Plan for a synthetic benchmark sweep: every solver/tau pair runs
/// `trials` times; trial `t` draws instance seed `seed + t`, so all configs
/// face the same sequence of random instances.
#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub m: usize,
    pub l: usize,
    pub n: usize,
    pub p: usize,
    pub r: usize,
    pub kappa: f64,
    pub solvers: Vec<SolverKind>,
    pub strategy: StrategyKind,
    pub taus: Vec<Truncation>,
    pub trials: usize,
    pub seed: u64,
    pub tol_rse: f64,
    pub max_epochs: usize,
    pub block_size: usize,
    pub out_dir: PathBuf,
}

/// Five-number summary; quartiles use linear interpolation on the sorted
/// sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stats {
    pub median: f64,
    pub p25: f64,
    pub p75: f64,
    pub min: f64,
    pub max: f64,
}

pub fn stats(values: &[f64]) -> Stats {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite stats input"));
    let q = |p: f64| -> f64 {
        if sorted.len() == 1 {
            return sorted[0];
        }
        let pos = p * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    };
    Stats {
        median: q(0.5),
        p25: q(0.25),
        p75: q(0.75),
        min: sorted[0],
        max: *sorted.last().expect("nonempty"),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigAggregate {
    pub solver: String,
    pub strategy: String,
    pub tau: String,
    pub trials: usize,
    pub seed: u64,
    /// Full iterations to termination per trial (epochs for row methods).
    pub full_iterations: Stats,
    pub wall_s: Stats,
    pub rse_final_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchOutput {
    pub aggregates: Vec<ConfigAggregate>,
    pub runs: Vec<RunSummary>,
}

fn summary_of(run: &SolverRun, kind: SolverKind, strategy: StrategyKind, tau: &Truncation, seed: u64) -> RunSummary {
    RunSummary {
        solver: kind.as_str().to_string(),
        strategy: strategy.as_str().to_string(),
        tau: tau.to_string(),
        epochs: run.epochs(),
        full_iterations: run.full_iterations,
        rse_final: run.final_rse(),
        wall_s: run.records.last().map(|r| r.elapsed_s).unwrap_or(0.0),
        seed,
    }
}

/// Runs the synthetic benchmark plan, writing one trace CSV per
/// (solver, tau, trial), a `runs.json` with every run summary, and an
/// `aggregate.json` with the percentile statistics.
pub fn cmd_synth_bench(plan: &BenchPlan) -> Result<BenchOutput> {
    if plan.trials == 0 {
        return Err(Error::InvalidArgument {
            op: "synth-bench",
            msg: "trials must be at least 1".into(),
        });
    }
    std::fs::create_dir_all(&plan.out_dir)?;

    // one instance per trial, shared across configs
    let instances: Vec<ProblemInstance> = (0..plan.trials)
        .into_par_iter()
        .map(|t| {
            gen_synthetic(&SyntheticSpec {
                m: plan.m,
                l: plan.l,
                n: plan.n,
                p: plan.p,
                r: plan.r,
                kappa: plan.kappa,
                seed: plan.seed + t as u64,
            })
        })
        .collect::<Result<_>>()?;

    let mut configs = Vec::new();
    for kind in &plan.solvers {
        match kind {
            SolverKind::Tk | SolverKind::Takshbm => configs.push((*kind, Truncation::Finite(1))),
            _ => {
                for tau in &plan.taus {
                    configs.push((*kind, *tau));
                }
            }
        }
    }

    let mut jobs = Vec::new();
    for (kind, tau) in &configs {
        for t in 0..plan.trials {
            jobs.push((*kind, *tau, t));
        }
    }

    let results: Vec<(SolverKind, Truncation, usize, SolverRun)> = jobs
        .into_par_iter()
        .map(|(kind, tau, t)| {
            let mut cfg = SolverConfig::new(plan.strategy, tau, plan.seed + t as u64);
            cfg.tol_rse = Some(plan.tol_rse);
            cfg.max_epochs = plan.max_epochs;
            cfg.block_size = plan.block_size;
            let run = run_solver(&instances[t], &cfg, kind)?;
            Ok((kind, tau, t, run))
        })
        .collect::<Result<_>>()?;

    let mut runs = Vec::new();
    let mut aggregates = Vec::new();
    for (kind, tau) in &configs {
        let mut ordered: Vec<(usize, &SolverRun)> = results
            .iter()
            .filter(|(k, tv, _, _)| k == kind && tv == tau)
            .map(|(_, _, t, r)| (*t, r))
            .collect();
        ordered.sort_by_key(|(t, _)| *t);

        let mut fulls = Vec::new();
        let mut walls = Vec::new();
        let mut rse_max: f64 = 0.0;
        for (t, run) in &ordered {
            let name = format!("{}-{}-tau{}-trial{}.csv", kind.as_str(), plan.strategy.as_str(), tau, t);
            write_trace_csv(&plan.out_dir.join(name), &run.records)?;
            let summary = summary_of(run, *kind, plan.strategy, tau, plan.seed + *t as u64);
            fulls.push(run.full_iterations);
            walls.push(summary.wall_s);
            if let Some(r) = summary.rse_final {
                rse_max = rse_max.max(r);
            }
            runs.push(summary);
        }
        aggregates.push(ConfigAggregate {
            solver: kind.as_str().to_string(),
            strategy: plan.strategy.as_str().to_string(),
            tau: tau.to_string(),
            trials: plan.trials,
            seed: plan.seed,
            full_iterations: stats(&fulls),
            wall_s: stats(&walls),
            rse_final_max: rse_max,
        });
    }

    let output = BenchOutput { aggregates, runs };
    std::fs::write(
        plan.out_dir.join("runs.json"),
        serde_json::to_string_pretty(&output.runs)?,
    )?;
    std::fs::write(
        plan.out_dir.join("aggregate.json"),
        serde_json::to_string_pretty(&output.aggregates)?,
    )?;
    Ok(output)
}

#[derive(Debug, Clone)]
pub struct DeblurPlan {
    pub truth_path: PathBuf,
    pub band: usize,
    pub sigma: f64,
    pub solvers: Vec<SolverKind>,
    pub strategy: StrategyKind,
    pub tau: Truncation,
    pub seed: u64,
    pub tol_rse: f64,
    pub max_epochs: usize,
    pub block_size: usize,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeblurSolverReport {
    pub summary: RunSummary,
    pub psnr_blurred_mean: f64,
    pub psnr_recon_mean: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeblurOutput {
    pub reports: Vec<DeblurSolverReport>,
}

fn frame_psnrs(estimate: &Tensor3, reference: &Tensor3) -> Vec<f64> {
    (0..reference.depth())
        .map(|s| {
            let ref_frame = reference.frontal_slice(s);
            let peak = ref_frame.max();
            psnr(&estimate.frontal_slice(s), &ref_frame, peak)
        })
        .collect()
}

/// Runs the deblurring pipeline: builds the blur operator, blurs the ground
/// truth, solves from zero, and writes the reconstruction tensor, trace CSV,
/// and per-frame PSNR CSV per solver, plus a combined `summary.json`.
pub fn cmd_deblur(plan: &DeblurPlan) -> Result<DeblurOutput> {
    std::fs::create_dir_all(&plan.out_dir)?;
    let truth = read_tensor(&plan.truth_path)?;
    let spec = BlurSpec {
        l: truth.rows(),
        n: truth.depth(),
        band: plan.band,
        sigma: plan.sigma,
    };
    let instance = blur_instance(&spec, &truth, 1e-12)?;

    let mut reports = Vec::new();
    for kind in &plan.solvers {
        let mut cfg = SolverConfig::new(plan.strategy, plan.tau, plan.seed);
        cfg.tol_rse = Some(plan.tol_rse);
        cfg.max_epochs = plan.max_epochs;
        cfg.block_size = plan.block_size;
        let run = run_solver(&instance, &cfg, *kind)?;

        let base = format!("{}-{}", kind.as_str(), plan.strategy.as_str());
        write_trace_csv(&plan.out_dir.join(format!("{base}-trace.csv")), &run.records)?;
        write_tensor(&plan.out_dir.join(format!("{base}-recon.tt3f")), &run.final_x)?;

        let blurred_psnr = frame_psnrs(&instance.b, &truth);
        let recon_psnr = frame_psnrs(&run.final_x, &truth);
        let mut csv = String::from("frame,psnr_blurred,psnr_recon\n");
        for (i, (pb, pr)) in blurred_psnr.iter().zip(&recon_psnr).enumerate() {
            csv.push_str(&format!("{},{},{}\n", i + 1, pb, pr));
        }
        std::fs::write(plan.out_dir.join(format!("{base}-psnr.csv")), csv)?;

        reports.push(DeblurSolverReport {
            summary: summary_of(&run, *kind, plan.strategy, &plan.tau, plan.seed),
            psnr_blurred_mean: blurred_psnr.iter().sum::<f64>() / blurred_psnr.len() as f64,
            psnr_recon_mean: recon_psnr.iter().sum::<f64>() / recon_psnr.len() as f64,
        });
    }

    let output = DeblurOutput { reports };
    std::fs::write(
        plan.out_dir.join("summary.json"),
        serde_json::to_string_pretty(&output.reports)?,
    )?;
    Ok(output)
}

/// Compares two trace CSVs ignoring the wall-clock column; used by the
/// determinism check and handy in tests.
pub fn traces_equal_modulo_time(a: &Path, b: &Path) -> Result<bool> {
    let strip = |text: String| -> Vec<String> {
        text.lines()
            .map(|line| {
                let mut parts: Vec<&str> = line.split(',').collect();
                parts.pop();
                parts.join(",")
            })
            .collect()
    };
    let ta = strip(std::fs::read_to_string(a)?);
    let tb = strip(std::fs::read_to_string(b)?);
    Ok(ta == tb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::gen_video_like;

    #[test]
    fn percentile_stats_interpolate() {
        let s = stats(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.median, 2.5);
        assert_eq!(s.p25, 1.75);
        assert_eq!(s.p75, 3.25);
        assert_eq!(s.min, 1.0);
        assert_eq!(s.max, 4.0);
        let one = stats(&[7.0]);
        assert_eq!(one.median, 7.0);
    }

    #[test]
    fn bench_writes_traces_and_aggregates() {
        let dir = tempfile::tempdir().unwrap();
        let plan = BenchPlan {
            m: 10,
            l: 8,
            n: 2,
            p: 2,
            r: 8,
            kappa: 5.0,
            solvers: vec![SolverKind::Gs, SolverKind::Tk],
            strategy: StrategyKind::So,
            taus: vec![Truncation::Finite(1), Truncation::Finite(3)],
            trials: 2,
            seed: 5,
            tol_rse: 1e-12,
            max_epochs: 500,
            block_size: 15,
            out_dir: dir.path().to_path_buf(),
        };
        let out = cmd_synth_bench(&plan).unwrap();
        // gs with two taus + tk once
        assert_eq!(out.aggregates.len(), 3);
        assert!(dir.path().join("gs-so-tau3-trial1.csv").exists());
        assert!(dir.path().join("tk-so-tau1-trial0.csv").exists());
        assert!(dir.path().join("aggregate.json").exists());
        for agg in &out.aggregates {
            assert!(agg.rse_final_max <= 1e-12, "config {} did not converge", agg.tau);
        }
        // acceleration should not be slower than plain TK in epochs
        let tk = out.aggregates.iter().find(|a| a.solver == "tk").unwrap();
        let gs3 = out
            .aggregates
            .iter()
            .find(|a| a.solver == "gs" && a.tau == "3")
            .unwrap();
        assert!(gs3.full_iterations.median <= tk.full_iterations.median);
    }

    #[test]
    fn bench_is_deterministic_modulo_time() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let mk = |out: &Path| BenchPlan {
            m: 8,
            l: 6,
            n: 2,
            p: 2,
            r: 6,
            kappa: 5.0,
            solvers: vec![SolverKind::Gs],
            strategy: StrategyKind::Rr,
            taus: vec![Truncation::Finite(2)],
            trials: 2,
            seed: 11,
            tol_rse: 1e-10,
            max_epochs: 300,
            block_size: 15,
            out_dir: out.to_path_buf(),
        };
        cmd_synth_bench(&mk(dir_a.path())).unwrap();
        cmd_synth_bench(&mk(dir_b.path())).unwrap();
        for t in 0..2 {
            let name = format!("gs-rr-tau2-trial{t}.csv");
            assert!(traces_equal_modulo_time(&dir_a.path().join(&name), &dir_b.path().join(&name)).unwrap());
        }
    }

    #[test]
    fn deblur_pipeline_produces_reports() {
        let dir = tempfile::tempdir().unwrap();
        let truth = gen_video_like(12, 12, 4, 3);
        let truth_path = dir.path().join("truth.tt3f");
        write_tensor(&truth_path, &truth).unwrap();
        let plan = DeblurPlan {
            truth_path,
            band: 4,
            sigma: 1.2,
            solvers: vec![SolverKind::Gs],
            strategy: StrategyKind::So,
            tau: Truncation::Finite(5),
            seed: 1,
            tol_rse: 5e-3,
            max_epochs: 500,
            block_size: 15,
            out_dir: dir.path().to_path_buf(),
        };
        let out = cmd_deblur(&plan).unwrap();
        let report = &out.reports[0];
        assert!(report.summary.rse_final.unwrap() < 5e-3);
        assert!(
            report.psnr_recon_mean >= report.psnr_blurred_mean,
            "reconstruction should beat the blurred observation: {} vs {}",
            report.psnr_recon_mean,
            report.psnr_blurred_mean
        );
        assert!(dir.path().join("gs-so-recon.tt3f").exists());
        assert!(dir.path().join("gs-so-psnr.csv").exists());
        assert!(dir.path().join("summary.json").exists());
    }
}
