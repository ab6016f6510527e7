//! Derivatives of the entropy with respect to the symmetric polynomials, the
//! `W_q` family, subentropy, and the simplex-integral cross-check.
//!
//! Every quantity here is a leading divided-difference coefficient of some
//! `x^m ln x` variant, computed by one kernel in [`divided`].

pub mod derivatives;
pub mod divided;
pub mod hermite;
pub mod subentropy;
pub mod wfun;

pub use derivatives::{
    default_step, ds_ds, gap_limited_step, ds_ds_chain_rule, dx_ds, entropy_at, finite_diff_ds_ds,
    finite_diff_dx_ds, lower_bound_ds_ds, power_identity_residual, PowerResidual,
};
pub use divided::{
    divided_difference, divided_difference_series, lagrange_sum, xm_logx_derivative,
    DividedDifferenceTable, Smooth, XPowLog, CONFLUENCE_TOL,
};
pub use hermite::{hermite_gennochi_estimate, Moments};
pub use subentropy::{chart_finite_difference, chart_step, ds_drn, ds_dt1, subentropy, VariableChart};
pub use wfun::{w, w_asymptotic_check, AsymptoticPoint};

use crate::ensemble::{self, Ensemble};
use crate::error::Result;
use crate::spectral::{self, Spectrum};

/// Eigenvalues of the ensemble's density matrix (length = ambient dimension).
pub fn ensemble_spectrum(e: &Ensemble) -> Result<Spectrum> {
    spectral::eigenvalues_hermitian(&ensemble::density_matrix(e))
}
