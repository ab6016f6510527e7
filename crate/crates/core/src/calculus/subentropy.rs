//! Subentropy and the rescaled charts in which it appears as a derivative.
//!
//! Dividing the characteristic polynomial by `s_1` gives coordinates
//! `t_1 = 1/s_1, t_q = s_q/s_1` and `dS/dt_1 = s_1 (s_1 - Q)`; dividing by `s_n`
//! gives `r_q = s_(n-q)/s_n` and `dS/dr_n = s_n (s_1 - Q)`. On the probability
//! simplex the first reads `Q = 1 - dS/dt_1`.

use alloc::vec::Vec;

use crate::calculus::derivatives::{default_step, dx_ds, entropy_at};
use crate::math;
use crate::calculus::divided::{self, XPowLog};
use crate::error::{Error, Result};
use crate::spectral::{self, Spectrum, SymmetricPolys};

fn positive(x: &Spectrum) -> Result<()> {
    if x.is_empty() {
        return Err(Error::Empty);
    }
    if x.min() <= 0.0 {
        return Err(Error::ZeroEigenvalue);
    }
    Ok(())
}

/// `Q = -sum_k x_k^n ln x_k / prod_{i != k} (x_k - x_i)`, the divided difference
/// of `-x^n ln x`; coincident eigenvalues go through the confluent table.
pub fn subentropy(x: &Spectrum) -> Result<f64> {
    positive(x)?;
    let n = x.len() as u32;
    divided::divided_difference(&XPowLog::xm_logx(n).scaled(-1.0), x.values())
}

/// `sum_k (1 + ln x_k) x_k^n / prod_{i != k} (x_k - x_i)`, the divided difference of `x^n (1 + ln x)`.
fn implicit_sum(x: &Spectrum) -> Result<f64> {
    let n = x.len() as i32;
    let f = XPowLog {
        power: n,
        log_coef: 1.0,
        pow_coef: 1.0,
    };
    divided::divided_difference(&f, x.values())
}

/// `dS/dt_1` holding `t_2..t_n`, from implicit differentiation of the rescaled polynomial.
///
/// Equals `s_1 (s_1 - Q)`.
pub fn ds_dt1(x: &Spectrum) -> Result<f64> {
    positive(x)?;
    Ok(x.sum() * implicit_sum(x)?)
}

/// `dS/dr_n` holding `r_1..r_(n-1)`; equals `s_n (s_1 - Q)`.
pub fn ds_drn(x: &Spectrum) -> Result<f64> {
    positive(x)?;
    let s = spectral::symmetric_polys(x);
    Ok(s.get(x.len()) * implicit_sum(x)?)
}

/// Coordinates on the space of monic real-rooted polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableChart {
    /// `s_1, ..., s_n`.
    S,
    /// `t_1 = 1/s_1`, `t_q = s_q/s_1`.
    T,
    /// `r_q = s_(n-q)/s_n`; the simplex condition reads `r_n = r_(n-1)`.
    R,
}

impl VariableChart {
    /// Coordinates `c_1..c_n` (stored 0-based).
    pub fn coordinates(self, s: &SymmetricPolys) -> Result<Vec<f64>> {
        let n = s.degree();
        match self {
            VariableChart::S => Ok((1..=n).map(|q| s.get(q)).collect()),
            VariableChart::T => {
                let s1 = s.get(1);
                if s1 == 0.0 {
                    return Err(Error::InvalidArgument("s_1 = 0 has no T coordinates".into()));
                }
                Ok((1..=n)
                    .map(|q| if q == 1 { 1.0 / s1 } else { s.get(q) / s1 })
                    .collect())
            }
            VariableChart::R => {
                let sn = s.get(n);
                if sn == 0.0 {
                    return Err(Error::ZeroEigenvalue);
                }
                Ok((1..=n).map(|q| s.get(n - q) / sn).collect())
            }
        }
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn to_symmetric(self, c: &[f64]) -> Result<SymmetricPolys> {
        let n = c.len();
        let mut s = alloc::vec![0.0; n + 1];
        s[0] = 1.0;
        match self {
            VariableChart::S => s[1..].copy_from_slice(c),
            VariableChart::T => {
                let s1 = 1.0 / c[0];
                s[1] = s1;
                for q in 2..=n {
                    s[q] = c[q - 1] * s1;
                }
            }
            VariableChart::R => {
                let sn = 1.0 / c[n - 1];
                s[n] = sn;
                for j in 1..n {
                    s[j] = c[n - j - 1] * sn;
                }
            }
        }
        SymmetricPolys::new(s)
    }
}

/// Step along chart coordinate `coord` that moves every root by at most a
/// thousandth of the smallest gap, capped at `1e-6 |c|`.
pub fn chart_step(x: &Spectrum, chart: VariableChart, coord: usize) -> Result<f64> {
    let n = x.len();
    if coord < 1 || coord > n {
        return Err(Error::IndexOutOfRange { index: coord, lo: 1, hi: n });
    }
    let c = chart.coordinates(&spectral::symmetric_polys(x))?;
    let cap = default_step(c[coord - 1]);
    // ds_j/dc by a central difference of the (rational) coordinate map.
    let shifted = |d: f64| -> Result<SymmetricPolys> {
        let mut v = c.clone();
        v[coord - 1] += d;
        chart.to_symmetric(&v)
    };
    let (plus, minus) = (shifted(cap)?, shifted(-cap)?);
    let mut speed = 0.0f64;
    for k in 0..n {
        let mut v = 0.0;
        for j in 1..=n {
            v += dx_ds(x, k, j)? * (plus.get(j) - minus.get(j)) / (2.0 * cap);
        }
        speed = speed.max(math::abs(v));
    }
    let by_gap = if n > 1 { 1e-3 * x.min_gap() / speed } else { f64::INFINITY };
    Ok(cap.min(by_gap))
}

/// Central difference of `S` along chart coordinate `coord` (1-based), others held fixed.
pub fn chart_finite_difference(x: &Spectrum, chart: VariableChart, coord: usize, h: f64) -> Result<f64> {
    let n = x.len();
    if coord < 1 || coord > n {
        return Err(Error::IndexOutOfRange { index: coord, lo: 1, hi: n });
    }
    let base = chart.coordinates(&spectral::symmetric_polys(x))?;
    let eval = |delta: f64| -> Result<f64> {
        let mut c = base.clone();
        c[coord - 1] += delta;
        entropy_at(&chart.to_symmetric(&c)?)
    };
    Ok((eval(h)? - eval(-h)?) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn two_level_subentropy() {
        let x = Spectrum::new(vec![0.6, 0.4]).unwrap();
        let want = -(0.36 * 0.6f64.ln() - 0.16 * 0.4f64.ln()) / 0.2;
        assert!((subentropy(&x).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn near_pure_state() {
        let eps = 1e-6;
        let x = Spectrum::new(vec![1.0 - eps, eps]).unwrap();
        assert!(subentropy(&x).unwrap().abs() < 1e-4);
    }

    #[test]
    fn zero_eigenvalue_rejected() {
        let x = Spectrum::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(subentropy(&x), Err(Error::ZeroEigenvalue));
        assert_eq!(ds_dt1(&x), Err(Error::ZeroEigenvalue));
    }

    #[test]
    fn charts_round_trip() {
        let x = Spectrum::new(vec![0.5, 0.3, 0.2]).unwrap();
        let s = spectral::symmetric_polys(&x);
        for chart in [VariableChart::S, VariableChart::T, VariableChart::R] {
            let c = chart.coordinates(&s).unwrap();
            let back = chart.to_symmetric(&c).unwrap();
            for q in 0..=3 {
                assert!((back.get(q) - s.get(q)).abs() < 1e-15);
            }
        }
        let r = VariableChart::R.coordinates(&s).unwrap();
        // On the simplex r_n = r_(n-1).
        assert!((r[2] - r[1]).abs() < 1e-12);
        let t = VariableChart::T.coordinates(&s).unwrap();
        assert!((t[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn theorem_two_instance() {
        let x = Spectrum::new(vec![0.6, 0.4]).unwrap();
        let q = subentropy(&x).unwrap();
        assert!((ds_dt1(&x).unwrap() - (1.0 - q)).abs() < 1e-13);
        assert!((ds_drn(&x).unwrap() - 0.24 * (1.0 - q)).abs() < 1e-13);
    }
}
