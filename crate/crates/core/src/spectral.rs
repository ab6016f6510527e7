//! Spectra, von Neumann entropy and elementary symmetric polynomials.
//!
//! The eigenvalues `x_1..x_n` are the roots of
//! `p(x) = sum_i (-1)^(n-i) s_(n-i) x^i`, so a spectrum and its symmetric
//! polynomials `s_0 = 1, s_1, ..., s_n` carry the same information when the
//! roots are distinct. [`roots_from_symmetric_polys`] inverts the map, which is
//! what finite-difference checks in `s`-space need.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::math;

/// Values within this distance below zero (or above one) are treated as roundoff.
pub const CLAMP_TOL: f64 = 1e-10;
/// Tolerance on the Hermiticity of matrices handed to the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Largest imaginary part (and most negative real part) accepted from the root finder.
pub const ROOT_TOL: f64 = 1e-8;

/// Nonnegative eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// A probability-like spectrum: every value in `[-1e-10, 1 + 1e-10]`,
    /// clamped to `[0, 1]`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let mut out = Vec::with_capacity(values.len());
        for v in values {
            if !v.is_finite() || v < -CLAMP_TOL || v > 1.0 + CLAMP_TOL {
                return Err(Error::InvalidSpectrumValue(v));
            }
            out.push(v.clamp(0.0, 1.0));
        }
        Ok(Self::sorted(out))
    }

    /// A spectrum without the unit upper bound, for points off `s_1 = 1`.
    pub fn lifted(values: Vec<f64>) -> Result<Self> {
        let mut out = Vec::with_capacity(values.len());
        for v in values {
            if !v.is_finite() || v < -CLAMP_TOL {
                return Err(Error::InvalidSpectrumValue(v));
            }
            out.push(v.max(0.0));
        }
        Ok(Self::sorted(out))
    }

    fn sorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Smallest gap between neighbouring values.
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min)
    }

    /// The values above `tol`.
    pub fn nonzero(&self, tol: f64) -> Spectrum {
        Spectrum {
            values: self.values.iter().copied().filter(|&v| v > tol).collect(),
        }
    }
}

/// `s_0..s_n`, with `s_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPolys {
    s: Vec<f64>,
}

impl SymmetricPolys {
    pub fn new(s: Vec<f64>) -> Result<Self> {
        match s.first() {
            Some(&s0) if s0 == 1.0 => Ok(Self { s }),
            Some(&s0) => Err(Error::BadLeadingCoefficient(s0)),
            None => Err(Error::BadLeadingCoefficient(f64::NAN)),
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.s
    }

    /// Degree `n`.
    pub fn degree(&self) -> usize {
        self.s.len() - 1
    }

    /// `s_q`, zero beyond the degree.
    pub fn get(&self, q: usize) -> f64 {
        self.s.get(q).copied().unwrap_or(0.0)
    }

    /// Copy with `s_q` shifted by `delta` (`q >= 1`).
    pub fn perturbed(&self, q: usize, delta: f64) -> SymmetricPolys {
        let mut s = self.s.clone();
        s[q] += delta;
        SymmetricPolys { s }
    }
}

/// Real eigenvalues of a Hermitian matrix, as a [`Spectrum`].
pub fn eigenvalues_hermitian(m: &CMatrix) -> Result<Spectrum> {
    linalg::check_square(m)?;
    let dev = linalg::hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Spectrum::new(linalg::hermitian_eigenvalues(m))
}

/// `-sum x ln x` in nats, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(x: &Spectrum) -> f64 {
    entropy_of(x.values())
}

/// Entropy of raw values (no validation).
pub fn entropy_of(values: &[f64]) -> f64 {
    -values.iter().map(|&v| math::xlogx(v)).sum::<f64>()
}

/// Elementary symmetric polynomials by expanding `prod (t + x_i)` one factor at a time.
pub fn symmetric_polys(x: &Spectrum) -> SymmetricPolys {
    SymmetricPolys {
        s: elementary_symmetric(x.values()),
    }
}

pub(crate) fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut s = alloc::vec![0.0; values.len() + 1];
    s[0] = 1.0;
    for (m, &v) in values.iter().enumerate() {
        for q in (1..=m + 1).rev() {
            s[q] += v * s[q - 1];
        }
    }
    s
}

/// `c_0..c_(n-1)` of `p(x) = x^n + c_(n-1) x^(n-1) + ... + c_0`, `c_i = (-1)^(n-i) s_(n-i)`.
pub fn monic_coefficients(s: &SymmetricPolys) -> Vec<f64> {
    let n = s.degree();
    (0..n)
        .map(|i| {
            let sign = if (n - i) % 2 == 0 { 1.0 } else { -1.0 };
            sign * s.get(n - i)
        })
        .collect()
}

/// Recovers the spectrum whose symmetric polynomials are `s`.
///
/// Roots come from the companion matrix of `p(x)`, refined by a few
/// simultaneous Aberth steps and then one root at a time by Newton with
/// compensated evaluation. The result must be real and nonnegative up to
/// [`ROOT_TOL`]; anything else means `s` lies outside the realizable region.
pub fn roots_from_symmetric_polys(s: &SymmetricPolys) -> Result<Spectrum> {
    let coeffs = monic_coefficients(s);
    let mut roots = linalg::companion_roots(&coeffs);
    linalg::aberth_polish(&coeffs, &mut roots, 50);

    let mut values = Vec::with_capacity(coeffs.len());
    for z in roots {
        if math::abs(z.im) > ROOT_TOL {
            return Err(Error::NotAValidSpectrum(format!(
                "complex root {} {:+}i",
                z.re, z.im
            )));
        }
        if z.re < -ROOT_TOL {
            return Err(Error::NotAValidSpectrum(format!("negative root {}", z.re)));
        }
        let x = linalg::refine_real_root(&coeffs, z.re, 1e-9 * (1.0 + math::abs(z.re)));
        values.push(x.max(0.0));
    }
    Spectrum::lifted(values)
}
