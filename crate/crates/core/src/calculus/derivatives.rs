//! Entropy as a function of the symmetric polynomials.
//!
//! Differentiating `p(x_k) = 0` with respect to `s_q` gives
//! `dx_k/ds_q = (-1)^(q+1) x_k^(n-q) / prod_{i != k} (x_k - x_i)`, and the chain
//! rule turns `dS/ds_q` into the divided difference of
//! `g_q(x) = (-1)^q x^(n-q) ln x` on the spectrum. That form is what lets the
//! computation continue through coincident eigenvalues.

use crate::calculus::divided::{self, XPowLog};
use crate::error::{Error, Result};
use alloc::vec::Vec;

use crate::linalg;
use crate::math;
use crate::spectral::{self, Spectrum, SymmetricPolys};

/// Smallest eigenvalue accepted where `ln x` itself enters (`q = n`).
pub const MIN_EIGENVALUE: f64 = 1e-12;

fn sign(q: usize) -> f64 {
    if q % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_q(q: usize, n: usize) -> Result<()> {
    if q < 2 || q > n {
        return Err(Error::IndexOutOfRange { index: q, lo: 2, hi: n });
    }
    Ok(())
}

/// `g_q(x) = (-1)^q x^(n-q) ln x`.
pub fn entropy_kernel(n: usize, q: usize) -> XPowLog {
    XPowLog::xm_logx((n - q) as u32).scaled(sign(q))
}

/// `dS/ds_q` for `2 <= q <= n`; always positive on a valid spectrum.
pub fn ds_ds(x: &Spectrum, q: usize) -> Result<f64> {
    let n = x.len();
    check_q(q, n)?;
    if q == n && x.min() < MIN_EIGENVALUE {
        return Err(Error::ZeroEigenvalue);
    }
    divided::divided_difference(&entropy_kernel(n, q), x.values()).map_err(|e| match e {
        Error::DerivativeUnavailable { x, .. } if x == 0.0 => Error::ZeroEigenvalue,
        other => other,
    })
}

/// `sum_k x_k^(n-q) / prod_{i != k} (x_k - x_i)`, zero for `2 <= q <= n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerResidual {
    pub sum: f64,
    /// Largest term magnitude, the natural scale for the residual.
    pub scale: f64,
}

pub fn power_identity_residual(x: &Spectrum, q: usize) -> Result<PowerResidual> {
    let n = x.len();
    check_q(q, n)?;
    let v = x.values();
    divided::check_distinct(v)?;
    let mut sum = 0.0;
    let mut scale = 0.0f64;
    for k in 0..n {
        let term = math::powi(v[k], (n - q) as i32) / divided::node_product(v, k);
        sum += term;
        scale = scale.max(math::abs(term));
    }
    Ok(PowerResidual { sum, scale })
}

/// `dx_k/ds_q` for the `k`-th (0-based, descending) eigenvalue, `1 <= q <= n`.
pub fn dx_ds(x: &Spectrum, k: usize, q: usize) -> Result<f64> {
    let n = x.len();
    if q < 1 || q > n {
        return Err(Error::IndexOutOfRange { index: q, lo: 1, hi: n });
    }
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, lo: 0, hi: n - 1 });
    }
    let v = x.values();
    divided::check_distinct(v)?;
    Ok(-sign(q) * math::powi(v[k], (n - q) as i32) / divided::node_product(v, k))
}

/// `dS/ds_q` assembled from `sum_k (dS/dx_k)(dx_k/ds_q)` with `dS/dx_k = -(1 + ln x_k)`.
pub fn ds_ds_chain_rule(x: &Spectrum, q: usize) -> Result<f64> {
    let n = x.len();
    check_q(q, n)?;
    if x.min() <= 0.0 {
        return Err(Error::ZeroEigenvalue);
    }
    let mut total = 0.0;
    for (k, &xk) in x.values().iter().enumerate() {
        total += -(1.0 + math::ln(xk)) * dx_ds(x, k, q)?;
    }
    Ok(total)
}

/// Entropy at the spectrum whose symmetric polynomials are `s`.
pub fn entropy_at(s: &SymmetricPolys) -> Result<f64> {
    Ok(spectral::von_neumann_entropy(&spectral::roots_from_symmetric_polys(s)?))
}

/// Default central-difference step for coordinate value `v`.
pub fn default_step(v: f64) -> f64 {
    1e-6 * math::abs(v)
}

/// Central-difference step in `s_q` that moves every root by at most a
/// thousandth of the smallest eigenvalue gap: `min(1e-6 |s_q|, 1e-3 gap / max_k |dx_k/ds_q|)`.
pub fn gap_limited_step(x: &Spectrum, q: usize) -> Result<f64> {
    let n = x.len();
    let s = spectral::symmetric_polys(x);
    let mut speed = 0.0f64;
    for k in 0..n {
        speed = speed.max(math::abs(dx_ds(x, k, q)?));
    }
    let by_gap = if n > 1 { 1e-3 * x.min_gap() / speed } else { f64::INFINITY };
    Ok(default_step(s.get(q)).min(by_gap))
}

/// Central difference `(S(s + h e_q) - S(s - h e_q)) / 2h`.
///
/// A perturbation that leaves the realizable region surfaces as
/// [`Error::NotAValidSpectrum`].
pub fn finite_diff_ds_ds(x: &Spectrum, q: usize, h: f64) -> Result<f64> {
    let n = x.len();
    if q < 1 || q > n {
        return Err(Error::IndexOutOfRange { index: q, lo: 1, hi: n });
    }
    let s = spectral::symmetric_polys(x);
    let (plus, hp) = polished_roots(&s, q, h)?;
    let (minus, hm) = polished_roots(&s, q, -h)?;
    // -x ln x differenced as -(d ln x+ + x- ln(1 + d/x-)), d = x+ - x-.
    let mut diff = 0.0;
    for (&(p, dp), &(m, dm)) in plus.iter().zip(&minus) {
        let d = (p - m) + (dp - dm);
        let xm = m + dm;
        if xm <= 0.0 || p <= 0.0 {
            return Err(Error::NotAValidSpectrum("perturbed root is not positive".into()));
        }
        diff -= d * math::ln(p + dp) + xm * math::ln_1p(d / xm);
    }
    Ok(diff / (hp - hm))
}

/// Roots of `s` with `s_q` moved by `delta`, each polished in double-double,
/// together with the perturbation actually stored.
fn polished_roots(s: &SymmetricPolys, q: usize, delta: f64) -> Result<(Vec<(f64, f64)>, f64)> {
    let moved = s.perturbed(q, delta);
    let stored = moved.get(q) - s.get(q);
    let r = spectral::roots_from_symmetric_polys(&moved)?;
    let coeffs = spectral::monic_coefficients(&moved);
    let roots = r
        .values()
        .iter()
        .map(|&v| linalg::refine_real_root_dd(&coeffs, v))
        .collect();
    Ok((roots, stored))
}

/// Central-difference `dx_k/ds_q` by re-rooting the perturbed polynomial.
///
/// Each perturbed root is polished in double-double so that shifts below one
/// ulp of `x_k` survive the subtraction, and the divisor is the perturbation
/// actually stored in `s_q`.
pub fn finite_diff_dx_ds(x: &Spectrum, k: usize, q: usize, h: f64) -> Result<f64> {
    let n = x.len();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, lo: 0, hi: n - 1 });
    }
    let s = spectral::symmetric_polys(x);
    let (plus, hp) = polished_roots(&s, q, h)?;
    let (minus, hm) = polished_roots(&s, q, -h)?;
    let ((p, dp), (m, dm)) = (plus[k], minus[k]);
    Ok(((p - m) + (dp - dm)) / (hp - hm))
}

/// Lower bound on `dS/ds_q` for a probability spectrum of length `n`.
///
/// With `j = n - q + 1` the bound reads `n^(n-j) / (j * C(n-1, j))`.
pub fn lower_bound_ds_ds(n: usize, q: usize) -> Result<f64> {
    check_q(q, n)?;
    let j = n - q + 1;
    let num = math::powi(n as f64, (n - j) as i32);
    let c = math::binomial((n - 1) as u64, j as u64)
        .ok_or_else(|| Error::InvalidArgument("binomial overflow".into()))?;
    Ok(num / (j as f64 * c as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::lifted(v.to_vec()).unwrap()
    }

    #[test]
    fn two_level_closed_form() {
        let x = spec(&[0.6, 0.4]);
        let want = (0.6f64.ln() - 0.4f64.ln()) / 0.2;
        let got = ds_ds(&x, 2).unwrap();
        assert!((got - want).abs() < 1e-13);
        assert!((got - 2.027_325_540_540_822).abs() < 1e-12);
        assert!(got >= lower_bound_ds_ds(2, 2).unwrap());
    }

    #[test]
    fn q_range_enforced() {
        let x = spec(&[0.5, 0.3, 0.2]);
        assert!(ds_ds(&x, 1).is_err());
        assert!(ds_ds(&x, 4).is_err());
        assert!(power_identity_residual(&x, 1).is_err());
    }

    #[test]
    fn zero_eigenvalue_for_top_index() {
        let x = spec(&[0.7, 0.3, 0.0]);
        assert_eq!(ds_ds(&x, 3), Err(Error::ZeroEigenvalue));
        // Lower indices keep a finite limit.
        assert!(ds_ds(&x, 2).unwrap() > 0.0);
    }

    #[test]
    fn power_identity_small() {
        let r = power_identity_residual(&spec(&[0.6, 0.4]), 2).unwrap();
        assert!(r.sum.abs() <= 1e-9 * r.scale);
        assert!((r.scale - 5.0).abs() < 1e-12);
    }

    #[test]
    fn q_equal_one_is_not_zero() {
        // The identity needs q >= 2: for q = 1 the sum is the divided difference of x^(n-1), i.e. 1.
        let nodes = [0.5, 0.3, 0.2];
        let l = divided::lagrange_sum(&XPowLog::monomial(2), &nodes).unwrap();
        assert!((l - 1.0).abs() < 1e-13);
    }

    #[test]
    fn dx_ds_instance() {
        let x = spec(&[0.6, 0.4]);
        assert!((dx_ds(&x, 0, 2).unwrap() + 5.0).abs() < 1e-12);
        assert!(matches!(dx_ds(&spec(&[0.5, 0.5]), 0, 2), Err(Error::CoincidentNodes(..))));
    }

    #[test]
    fn bound_index_translation() {
        assert_eq!(lower_bound_ds_ds(2, 2).unwrap(), 2.0);
        assert_eq!(lower_bound_ds_ds(3, 3).unwrap(), 4.5);
        assert_eq!(lower_bound_ds_ds(3, 2).unwrap(), 1.5);
        // The q = n case is n^(n-1)/(n-1) and q = n-1 is n^(n-2)/((n-1)(n-2)).
        for n in 3..=8usize {
            let nf = n as f64;
            let top = nf.powi(n as i32 - 1) / (nf - 1.0);
            assert!((lower_bound_ds_ds(n, n).unwrap() - top).abs() < 1e-9 * top);
            let next = nf.powi(n as i32 - 2) / ((nf - 1.0) * (nf - 2.0));
            assert!((lower_bound_ds_ds(n, n - 1).unwrap() - next).abs() < 1e-9 * next);
        }
        assert!(lower_bound_ds_ds(3, 1).is_err());
    }

    #[test]
    fn fd_two_level() {
        let x = spec(&[0.6, 0.4]);
        let fd = finite_diff_ds_ds(&x, 2, 1e-7).unwrap();
        assert!((fd - 2.02733).abs() < 1e-5);
    }

    #[test]
    fn fd_three_level() {
        let x = spec(&[0.5, 0.3, 0.2]);
        let exact = ds_ds(&x, 3).unwrap();
        let h = default_step(spectral::symmetric_polys(&x).get(3));
        let fd = finite_diff_ds_ds(&x, 3, h).unwrap();
        assert!((fd - exact).abs() < 1e-4 * exact);
    }

    #[test]
    fn chain_rule_matches() {
        let x = spec(&[0.45, 0.3, 0.15, 0.1]);
        for q in 2..=4 {
            let a = ds_ds(&x, q).unwrap();
            let b = ds_ds_chain_rule(&x, q).unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs(), "q={q}: {a} vs {b}");
        }
    }
}
