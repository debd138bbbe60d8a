//! Arnoldi structure of the unbounded-window run under a fixed permutation.
//!
//! With IS or SO ordering and no truncation, the orthogonal directions
//! satisfy `C * U_k = sum_i h_{i,k} U_i - (1/lambda_k) U_{k+1}` with
//! `C = I - T_pi`, so stacking them gives the tensor Arnoldi relation
//! `C * U^k = U^k * H_k + R_k * E_k^T`. The Hessenberg matrix is built with
//! exact zeros below the first subdiagonal and subdiagonal entries
//! `-1/lambda_{j-1}`; the residual coefficient is the next subdiagonal
//! entry, `-1/lambda_k`.

use super::rate::{compute_g_pi, compute_t_pi};
use super::check_cap;
use crate::error::{Error, Result};
use crate::problems::ProblemInstance;
use crate::sampling::{StrategyKind, StrategyState};
use crate::solvers::{run_solver_with_history, SolverConfig, SolverKind, Truncation};
use crate::tensor::{fro_norm, fro_norm2, inner, t_identity, t_product, Tensor3};
use nalgebra::{DMatrix, DVector};

/// Structure report of an Arnoldi-mode run.
#[derive(Debug, Clone)]
pub struct ArnoldiReport {
    /// `(k+1) x (k+1)` upper Hessenberg matrix of the run.
    pub hessenberg: DMatrix<f64>,
    /// Largest normalized inner product between distinct basis tensors.
    pub orth_error: f64,
    /// Relative Frobenius residual of the compact decomposition.
    pub decomposition_residual: f64,
    /// Step sizes `lambda_0..lambda_{k+1}`; the subdiagonal is
    /// `-1/lambda_{j-1}` by construction.
    pub lambdas: Vec<f64>,
}

fn fixed_permutation(problem: &ProblemInstance, config: &SolverConfig) -> Result<crate::sampling::Permutation> {
    match config.strategy {
        StrategyKind::Rr => Err(Error::Unsupported {
            op: "arnoldi_check",
            msg: "the decomposition needs a fixed permutation; use IS or SO, not RR".into(),
        }),
        kind => {
            let mut s = StrategyState::new(kind, problem.a.rows(), config.seed);
            Ok(s.next_permutation())
        }
    }
}

/// Reconstructs the orthogonal directions `U_0..U_{k_max+1}` and step sizes
/// from an unbounded-window Gram-Schmidt run of `k_max + 2` epochs.
fn basis_from_run(
    problem: &ProblemInstance,
    config: &SolverConfig,
    k_max: usize,
) -> Result<(Vec<Tensor3>, Vec<f64>)> {
    let mut cfg = config.clone();
    cfg.tau = Truncation::Unbounded;
    cfg.max_epochs = k_max + 2;
    cfg.tol_delta = 0.0;
    cfg.tol_rse = None;
    let (l, p, n) = problem.solution_shape();
    let (run, hist) = run_solver_with_history(problem, &cfg, SolverKind::Gs, Tensor3::zeros(l, p, n))?;
    if run.epochs() < k_max + 2 || hist.lambdas.len() < k_max + 2 {
        return Err(Error::NumericalBreakdown {
            op: "arnoldi_check",
            msg: format!(
                "run terminated after {} epochs; need {} for the order-{} report",
                run.epochs(),
                k_max + 2,
                k_max
            ),
        });
    }
    if run.restarts > 0 {
        return Err(Error::NumericalBreakdown {
            op: "arnoldi_check",
            msg: "breakdown restart during the run; the Arnoldi relation does not span restarts".into(),
        });
    }
    let mut basis = Vec::with_capacity(k_max + 2);
    for i in 0..=k_max + 1 {
        let diff = &hist.iterates[i + 1] - &hist.iterates[i];
        basis.push(diff.scale(1.0 / hist.lambdas[i]));
    }
    Ok((basis, hist.lambdas))
}

/// Runs `k_max + 2` unbounded-window epochs with a fixed permutation and
/// reports the Hessenberg structure of order `k_max`.
pub fn arnoldi_check(problem: &ProblemInstance, config: &SolverConfig, k_max: usize) -> Result<ArnoldiReport> {
    check_cap(&problem.a)?;
    let pi = fixed_permutation(problem, config)?;
    let (basis, lambdas) = basis_from_run(problem, config, k_max)?;

    let t = compute_t_pi(&problem.a, &pi, config.rank_tol)?;
    let c = &t_identity(problem.a.cols(), problem.a.depth()) - &t;

    // orthogonality over the whole basis
    let mut orth_error = 0.0f64;
    for i in 0..basis.len() {
        for j in 0..i {
            let cos = inner(&basis[i], &basis[j])?.abs() / (fro_norm(&basis[i]) * fro_norm(&basis[j]));
            orth_error = orth_error.max(cos);
        }
    }

    // H: upper triangle from projections of C * U_{j-1}, subdiagonal from
    // the step sizes, zeros below by construction
    let dim = k_max + 1;
    let mut h = DMatrix::zeros(dim, dim);
    let mut c_u = Vec::with_capacity(dim);
    for j in 0..dim {
        let w = t_product(&c, &basis[j])?;
        for i in 0..=j {
            h[(i, j)] = inner(&basis[i], &w)? / fro_norm2(&basis[i]);
        }
        c_u.push(w);
    }
    for j in 1..dim {
        h[(j, j - 1)] = -1.0 / lambdas[j - 1];
    }

    // residual of C * U^k = U^k * H_k + R_k * E_k^T, checked block-column
    // by block-column: column j of the right side is sum_i H[i,j] U_i, plus
    // the residual block R_k = -(1/lambda_k) U_{k+1} on the last column
    let mut num2 = 0.0;
    let mut den2 = 0.0;
    for j in 0..dim {
        let mut rhs = Tensor3::zeros(basis[0].rows(), basis[0].cols(), basis[0].depth());
        for i in 0..dim {
            if h[(i, j)] != 0.0 {
                rhs.axpy(h[(i, j)], &basis[i]);
            }
        }
        if j == dim - 1 {
            rhs.axpy(-1.0 / lambdas[k_max], &basis[k_max + 1]);
        }
        num2 += fro_norm2(&(&c_u[j] - &rhs));
        den2 += fro_norm2(&c_u[j]);
    }

    Ok(ArnoldiReport {
        hessenberg: h,
        orth_error,
        decomposition_residual: (num2 / den2).sqrt(),
        lambdas,
    })
}

/// Checks that every update stays in the Krylov space
/// `K_{k+1}(C, G - C * X^0)`: returns the largest relative residual of
/// projecting `X^{k+1} - X^0` onto the spanned subspace.
pub fn krylov_membership_check(problem: &ProblemInstance, config: &SolverConfig, epochs: usize) -> Result<f64> {
    check_cap(&problem.a)?;
    let pi = fixed_permutation(problem, config)?;

    let mut cfg = config.clone();
    cfg.tau = Truncation::Unbounded;
    cfg.max_epochs = epochs;
    cfg.tol_delta = 0.0;
    cfg.tol_rse = None;
    let (l, p, n) = problem.solution_shape();
    let x0 = Tensor3::zeros(l, p, n);
    let (_, hist) = run_solver_with_history(problem, &cfg, SolverKind::Gs, x0.clone())?;

    let t = compute_t_pi(&problem.a, &pi, config.rank_tol)?;
    let c = &t_identity(l, n) - &t;
    let g = compute_g_pi(&problem.a, &problem.b, &pi, config.rank_tol)?;
    // seed vector G - C * X^0
    let mut v = &g - &t_product(&c, &x0)?;

    // orthonormal Krylov basis, grown by one application of C per epoch
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut max_rel = 0.0f64;
    for k in 0..epochs.min(hist.iterates.len() - 1) {
        let mut w = DVector::from_column_slice(v.tv());
        for q in &basis {
            let coeff = q.dot(&w);
            w -= q * coeff;
        }
        let norm = w.norm();
        if norm > 1e-13 * fro_norm(&v).max(1.0) {
            basis.push(w / norm);
        }
        let target = &hist.iterates[k + 1] - &x0;
        let tvec = DVector::from_column_slice(target.tv());
        let mut residual = tvec.clone();
        for q in &basis {
            let coeff = q.dot(&residual);
            residual -= q * coeff;
        }
        let scale = tvec.norm();
        if scale > 0.0 {
            max_rel = max_rel.max(residual.norm() / scale);
        }
        v = t_product(&c, &v)?;
    }
    Ok(max_rel)
}
