//! Iterative solvers for `A * X = B`: the plain tensor Kaczmarz sweep (TK),
//! the Gearhart-Koshy accelerated variants (direct normal equations,
//! Gram-Schmidt, tridiagonal), and the average-block heavy-ball baseline.
//!
//! One epoch is one full sweep of row projections in permutation order. The
//! accelerated variants then replace the sweep output with the point of the
//! window's affine hull closest to the solution; by Theorem-level
//! equivalence all three produce the same iterates, differing only in cost
//! and storage.

pub mod direct;
pub mod gram_schmidt;
pub mod projector;
pub mod takshbm;
pub mod tridiagonal;

pub use direct::DirectState;
pub use gram_schmidt::GsState;
pub use projector::{ProjectorBank, SweepResult};
pub use takshbm::TakshbmState;
pub use tridiagonal::TriState;

use crate::error::{Error, Result};
use crate::problems::{rse, EpochRecord, ProblemInstance};
use crate::sampling::{StrategyKind, StrategyState};
use crate::tensor::Tensor3;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Window size for the accelerated step: how many previous iterates span the
/// search hull. `Unbounded` keeps the whole history (the Krylov regime).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Finite(usize),
    Unbounded,
}

impl Truncation {
    pub fn as_option(&self) -> Option<usize> {
        match self {
            Truncation::Finite(t) => Some(*t),
            Truncation::Unbounded => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Truncation::Finite(t) = self {
            if *t < 1 {
                return Err(Error::InvalidArgument {
                    op: "truncation",
                    msg: "tau must be at least 1".into(),
                });
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for Truncation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Truncation::Finite(t) => write!(f, "{}", t),
            Truncation::Unbounded => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Truncation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "inf" | "unbounded" => Ok(Truncation::Unbounded),
            other => other
                .parse::<usize>()
                .ok()
                .filter(|t| *t >= 1)
                .map(Truncation::Finite)
                .ok_or(Error::InvalidArgument {
                    op: "truncation",
                    msg: format!("expected a positive integer or \"inf\", got {:?}", other),
                }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// Plain tensor Kaczmarz sweeps.
    Tk,
    /// Accelerated step through the dense normal equations.
    Tkgk,
    /// Accelerated step through Gram-Schmidt orthogonalization.
    Gs,
    /// Accelerated step through the closed-form tridiagonal inverse.
    Tri,
    /// Average-block Kaczmarz with heavy-ball momentum (baseline).
    Takshbm,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Tk => "tk",
            SolverKind::Tkgk => "tkgk",
            SolverKind::Gs => "gs",
            SolverKind::Tri => "tri",
            SolverKind::Takshbm => "takshbm",
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tk" => Ok(SolverKind::Tk),
            "tkgk" => Ok(SolverKind::Tkgk),
            "gs" => Ok(SolverKind::Gs),
            "tri" => Ok(SolverKind::Tri),
            "takshbm" => Ok(SolverKind::Takshbm),
            other => Err(Error::InvalidArgument {
                op: "solver",
                msg: format!("unknown solver {:?} (expected tk|tkgk|gs|tri|takshbm)", other),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub strategy: StrategyKind,
    pub tau: Truncation,
    /// Stop once `delta_k = ||P(X^k) - X^k||_F^2` falls to this level; the
    /// floating-point stand-in for the paper's exact `delta_k = 0` test.
    pub tol_delta: f64,
    /// Stop once the relative squared error reaches this level; needs a
    /// known least-norm solution.
    pub tol_rse: Option<f64>,
    pub max_epochs: usize,
    pub seed: u64,
    /// Per-slice relative rank cutoff for the row pseudoinverses.
    pub rank_tol: f64,
    /// Block size for the tAKSHBM baseline.
    pub block_size: usize,
}

impl SolverConfig {
    pub fn new(strategy: StrategyKind, tau: Truncation, seed: u64) -> Self {
        SolverConfig {
            strategy,
            tau,
            tol_delta: 1e-28,
            tol_rse: None,
            max_epochs: 1000,
            seed,
            rank_tol: 1e-12,
            block_size: 15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// `delta_k` reached `tol_delta`: the iterate solves the system.
    DeltaTol,
    RseTol,
    MaxEpochs,
}

#[derive(Debug, Clone)]
pub struct SolverRun {
    pub final_x: Tensor3,
    pub records: Vec<EpochRecord>,
    pub stop: StopReason,
    /// Breakdown restarts taken by the GS/tridiagonal windows.
    pub restarts: usize,
    /// Epochs for sweep solvers; `iterations * q / m` for the block
    /// baseline.
    pub full_iterations: f64,
}

impl SolverRun {
    /// Completed epochs (sweep count; iteration count for the baseline).
    pub fn epochs(&self) -> usize {
        self.records.last().map(|r| r.epoch).unwrap_or(0)
    }

    pub fn final_rse(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.rse)
    }
}

/// Full per-epoch capture for the analysis oracles.
#[derive(Debug, Clone)]
pub struct RunHistory {
    /// `X^0, X^1, ..., X^K`.
    pub iterates: Vec<Tensor3>,
    /// Sweep of `X^k` for each executed epoch.
    pub sweeps: Vec<SweepResult>,
    /// Step sizes `lambda_k` (accelerated variants only).
    pub lambdas: Vec<f64>,
}

enum Stepper {
    Tk(Tensor3),
    Direct(DirectState),
    Gs(GsState),
    Tri(TriState),
}

impl Stepper {
    fn new(kind: SolverKind, x0: Tensor3, tau: Option<usize>) -> Self {
        match kind {
            SolverKind::Tk => Stepper::Tk(x0),
            SolverKind::Tkgk => Stepper::Direct(DirectState::new(x0, tau)),
            SolverKind::Gs => Stepper::Gs(GsState::new(x0, tau)),
            SolverKind::Tri => Stepper::Tri(TriState::new(x0, tau)),
            SolverKind::Takshbm => unreachable!("block baseline uses its own loop"),
        }
    }

    fn current(&self) -> &Tensor3 {
        match self {
            Stepper::Tk(x) => x,
            Stepper::Direct(s) => s.current(),
            Stepper::Gs(s) => s.current(),
            Stepper::Tri(s) => s.current(),
        }
    }

    fn step(&mut self, sweep: &SweepResult) -> Result<()> {
        match self {
            Stepper::Tk(x) => {
                *x = sweep.projected.clone();
                Ok(())
            }
            Stepper::Direct(s) => s.step(sweep).map(|_| ()),
            Stepper::Gs(s) => {
                s.step(sweep);
                Ok(())
            }
            Stepper::Tri(s) => {
                s.step(sweep);
                Ok(())
            }
        }
    }

    fn last_lambda(&self) -> Option<f64> {
        match self {
            Stepper::Tk(_) => None,
            Stepper::Direct(_) => None,
            Stepper::Gs(s) => s.lambdas().last().copied(),
            Stepper::Tri(s) => s.lambdas().last().copied(),
        }
    }

    fn restarts(&self) -> usize {
        match self {
            Stepper::Gs(s) => s.restarts(),
            Stepper::Tri(s) => s.restarts(),
            _ => 0,
        }
    }
}

/// Runs a solver from the zero initial tensor.
pub fn run_solver(problem: &ProblemInstance, config: &SolverConfig, kind: SolverKind) -> Result<SolverRun> {
    let (l, p, n) = problem.solution_shape();
    run_solver_from(problem, config, kind, Tensor3::zeros(l, p, n))
}

/// Runs a solver from an explicit initial iterate.
pub fn run_solver_from(
    problem: &ProblemInstance,
    config: &SolverConfig,
    kind: SolverKind,
    x0: Tensor3,
) -> Result<SolverRun> {
    Ok(run_internal(problem, config, kind, x0, false)?.0)
}

/// Like [`run_solver_from`] but records every iterate and sweep for
/// desk-scale verification.
pub fn run_solver_with_history(
    problem: &ProblemInstance,
    config: &SolverConfig,
    kind: SolverKind,
    x0: Tensor3,
) -> Result<(SolverRun, RunHistory)> {
    let (run, hist) = run_internal(problem, config, kind, x0, true)?;
    Ok((run, hist.expect("capture requested")))
}

fn run_internal(
    problem: &ProblemInstance,
    config: &SolverConfig,
    kind: SolverKind,
    x0: Tensor3,
    capture: bool,
) -> Result<(SolverRun, Option<RunHistory>)> {
    config.tau.validate()?;
    if kind == SolverKind::Takshbm {
        let run = run_takshbm(problem, config, x0)?;
        return Ok((run, None));
    }

    let bank = ProjectorBank::build(&problem.a, &problem.b, config.rank_tol)?;
    let mut strategy = StrategyState::new(config.strategy, bank.row_count(), config.seed);
    let x_star = problem.x_star0.as_ref();
    let rse_of = |x: &Tensor3| x_star.and_then(|xs| rse(x, xs, &x0));

    let mut history = capture.then(|| RunHistory {
        iterates: vec![x0.clone()],
        sweeps: Vec::new(),
        lambdas: Vec::new(),
    });

    let mut records = vec![EpochRecord {
        epoch: 0,
        rse: rse_of(&x0),
        delta: None,
        gamma: None,
        elapsed_s: 0.0,
    }];

    if config.max_epochs == 0 {
        let run = SolverRun {
            final_x: x0,
            records,
            stop: StopReason::MaxEpochs,
            restarts: 0,
            full_iterations: 0.0,
        };
        return Ok((run, history));
    }

    let mut stepper = Stepper::new(kind, x0.clone(), config.tau.as_option());
    let start = Instant::now();
    let mut stop = StopReason::MaxEpochs;

    for k in 0..config.max_epochs {
        let pi = strategy.next_permutation();
        let sweep = bank.sweep(stepper.current(), &pi)?;
        if let Some(h) = history.as_mut() {
            h.sweeps.push(sweep.clone());
        }

        if sweep.delta <= config.tol_delta {
            records.push(EpochRecord {
                epoch: k + 1,
                rse: rse_of(stepper.current()),
                delta: Some(sweep.delta),
                gamma: Some(sweep.gamma),
                elapsed_s: start.elapsed().as_secs_f64(),
            });
            stop = StopReason::DeltaTol;
            break;
        }

        stepper.step(&sweep)?;
        if let Some(h) = history.as_mut() {
            h.iterates.push(stepper.current().clone());
            if let Some(l) = stepper.last_lambda() {
                h.lambdas.push(l);
            }
        }

        let r = rse_of(stepper.current());
        records.push(EpochRecord {
            epoch: k + 1,
            rse: r,
            delta: Some(sweep.delta),
            gamma: Some(sweep.gamma),
            elapsed_s: start.elapsed().as_secs_f64(),
        });

        if let (Some(rv), Some(tol)) = (r, config.tol_rse) {
            if rv <= tol {
                stop = StopReason::RseTol;
                break;
            }
        }
    }

    let epochs = records.last().map(|r| r.epoch).unwrap_or(0);
    let run = SolverRun {
        final_x: stepper.current().clone(),
        records,
        stop,
        restarts: stepper.restarts(),
        full_iterations: epochs as f64,
    };
    Ok((run, history))
}

/// Plain TK run; sweeps only.
pub fn tk_run(problem: &ProblemInstance, config: &SolverConfig) -> Result<SolverRun> {
    run_solver(problem, config, SolverKind::Tk)
}

fn run_takshbm(problem: &ProblemInstance, config: &SolverConfig, x0: Tensor3) -> Result<SolverRun> {
    let m = problem.a.rows();
    let q = config.block_size;
    let x_star = problem.x_star0.as_ref();
    let x0_copy = x0.clone();
    let rse_of = move |x: &Tensor3| x_star.and_then(|xs| rse(x, xs, &x0_copy));

    let mut records = vec![EpochRecord {
        epoch: 0,
        rse: rse_of(&x0),
        delta: None,
        gamma: None,
        elapsed_s: 0.0,
    }];

    // `max_epochs` caps the number of full iterations, so block steps get
    // the same sweep budget as the row methods.
    let max_iterations = (config.max_epochs as f64 * m as f64 / q as f64).ceil() as usize;
    if max_iterations == 0 {
        return Ok(SolverRun {
            final_x: x0,
            records,
            stop: StopReason::MaxEpochs,
            restarts: 0,
            full_iterations: 0.0,
        });
    }

    let mut state = TakshbmState::new(problem, x0, q, config.seed)?;
    let start = Instant::now();
    let mut stop = StopReason::MaxEpochs;
    for k in 0..max_iterations {
        state.step()?;
        let r = rse_of(state.current());
        records.push(EpochRecord {
            epoch: k + 1,
            rse: r,
            delta: None,
            gamma: None,
            elapsed_s: start.elapsed().as_secs_f64(),
        });
        if let (Some(rv), Some(tol)) = (r, config.tol_rse) {
            if rv <= tol {
                stop = StopReason::RseTol;
                break;
            }
        }
    }

    Ok(SolverRun {
        final_x: state.current().clone(),
        records,
        stop,
        restarts: 0,
        full_iterations: state.full_iterations(),
    })
}
