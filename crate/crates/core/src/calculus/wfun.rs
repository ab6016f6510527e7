//! The shifted family `W_q(a)`.
//!
//! `W_q(a)` is the divided difference of `g_q(y) = (-1)^q y^(n-q) ln y` on the
//! shifted nodes `x_k + a`, so `W_q(0) = dS/ds_q`. It decays like
//! `a^(1-q) B(q-1, n-q+1)` and satisfies `W_q' = -(n-q) W_(q+1)` and
//! `W_n' = -1 / prod (a + x_k)`.

use alloc::vec::Vec;

use crate::calculus::derivatives::{entropy_kernel, MIN_EIGENVALUE};
use crate::calculus::divided::{self, XPowLog};
use crate::error::{Error, Result};
use crate::math;
use crate::spectral::Spectrum;

/// Use the Taylor-series route once the nodes sit within this fraction of the
/// distance from their centre to the logarithm's branch point.
const SERIES_RATIO: f64 = 0.75;
const SERIES_TERMS: usize = 160;

/// `W_q(a)` for `2 <= q <= n`.
pub fn w(x: &Spectrum, q: usize, a: f64) -> Result<f64> {
    let n = x.len();
    if q < 2 || q > n {
        return Err(Error::IndexOutOfRange { index: q, lo: 2, hi: n });
    }
    let lowest = x.min() + a;
    if lowest < 0.0 {
        return Err(Error::InvalidArgument("shifted node below zero".into()));
    }
    if q == n && lowest < MIN_EIGENVALUE {
        return Err(Error::ZeroEigenvalue);
    }
    let nodes: Vec<f64> = x.values().iter().map(|&v| v + a).collect();
    let f = entropy_kernel(n, q);
    let hi = nodes.iter().copied().fold(f64::MIN, f64::max);
    let center = 0.5 * (hi + lowest);
    if hi - center <= SERIES_RATIO * center {
        // Far from the branch point the Newton table cancels catastrophically;
        // the expansion about the centre does not.
        series_about_center(&f, &nodes, center)
    } else {
        divided::divided_difference(&f, &nodes).map_err(|e| match e {
            Error::DerivativeUnavailable { x, .. } if x == 0.0 => Error::ZeroEigenvalue,
            other => other,
        })
    }
}

/// Series evaluation on the rescaled nodes `u = x / c`, expanded about 1.
///
/// `x^p (L ln x + P)` at `x = c u` is `c^p u^p (L ln u + L ln c + P)`, and a
/// divided difference on `n` nodes picks up `c^(1-n)` from the rescaling.
fn series_about_center(f: &XPowLog, nodes: &[f64], center: f64) -> Result<f64> {
    let g = XPowLog {
        power: f.power,
        log_coef: f.log_coef,
        pow_coef: f.log_coef * math::ln(center) + f.pow_coef,
    };
    let u: Vec<f64> = nodes.iter().map(|v| v / center).collect();
    let dd = divided::divided_difference_series(&g, &u, 1.0, SERIES_TERMS)?;
    Ok(dd * math::powi(center, f.power - (nodes.len() as i32 - 1)))
}

/// One point of the large-`a` comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPoint {
    pub a: f64,
    /// `W_q(a) a^(q-1)`.
    pub scaled: f64,
    /// `B(q-1, n-q+1)`.
    pub beta: f64,
    pub ratio: f64,
}

/// Compares `W_q(a) a^(q-1)` with its limit `B(q-1, n-q+1)`.
pub fn w_asymptotic_check(x: &Spectrum, q: usize, a_values: &[f64]) -> Result<Vec<AsymptoticPoint>> {
    let n = x.len();
    if q < 2 || q > n {
        return Err(Error::IndexOutOfRange { index: q, lo: 2, hi: n });
    }
    let beta = math::beta_int(q - 1, n - q + 1);
    a_values
        .iter()
        .map(|&a| {
            let scaled = w(x, q, a)? * math::powi(a, q as i32 - 1);
            Ok(AsymptoticPoint {
                a,
                scaled,
                beta,
                ratio: scaled / beta,
            })
        })
        .collect()
}
