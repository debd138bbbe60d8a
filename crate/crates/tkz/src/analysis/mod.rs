//! Desk-scale verification oracles for the solver theory: affine sweep
//! operators, contraction rates, rate quantities, the Arnoldi/Hessenberg
//! structure of the unbounded-window run, and brute-force least-squares
//! cross-checks. Everything here goes through dense `bcirc` matrices and
//! SVD; inputs are capped at `l * n, m * n <= 512` because these are
//! oracles, not production paths.

mod arnoldi;
mod dense;
mod oracle;
mod rate;

pub use arnoldi::{arnoldi_check, krylov_membership_check, ArnoldiReport};
pub use dense::{jacobi_svd, lstsq, pinv_dense, spectral_norm, JacobiSvd};
pub use oracle::{affine_argmin_oracle, affine_argmin_svd};
pub use rate::{pinv_range_residual, t_pinv_dense};
pub use rate::{compute_g_pi, compute_t_pi, rate_beta_zeta, rate_report_for_epoch, rho_pi, BetaZeta, RateReport};

use crate::error::{Error, Result};
use crate::tensor::Tensor3;

pub(crate) const DENSE_CAP: usize = 512;

pub(crate) fn check_cap(a: &Tensor3) -> Result<()> {
    let (m, l, n) = a.shape();
    for (what, got) in [("m * n", m * n), ("l * n", l * n)] {
        if got > DENSE_CAP {
            return Err(Error::SizeCap {
                what,
                got,
                cap: DENSE_CAP,
            });
        }
    }
    Ok(())
}
