//! Monte Carlo evaluation of divided differences over the probability simplex.
//!
//! `f[x_1, ..., x_n] = integral over {p >= 0, sum p = 1} of f^(n-1)(p . x) dp`,
//! where the simplex carries Lebesgue measure of total mass `1/(n-1)!`. With
//! uniform simplex samples the estimate is `mean(f^(n-1)(p . x)) / (n-1)!`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::derivatives::entropy_kernel;
use crate::calculus::divided::Smooth;
use crate::ensemble::random_simplex_point;
use crate::error::{Error, Result};
use crate::math;
use crate::spectral::Spectrum;

/// Samples per independently seeded chunk. Chunking is fixed so results do
/// not depend on how chunks are spread across workers.
pub const CHUNK: usize = 1 << 14;

/// Running sums for one chunk.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn merge(self, other: Moments) -> Moments {
        Moments {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    /// `(mean, standard error of the mean)`.
    pub fn estimate(&self) -> (f64, f64) {
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = if self.count > 1 {
            ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        (mean, math::sqrt(var / n))
    }
}

fn check(x: &Spectrum, q: usize) -> Result<()> {
    let n = x.len();
    if q < 2 || q > n {
        return Err(Error::IndexOutOfRange { index: q, lo: 2, hi: n });
    }
    if x.min() <= 0.0 {
        return Err(Error::ZeroEigenvalue);
    }
    Ok(())
}

/// Number of chunks covering `samples`.
pub fn chunk_count(samples: usize) -> usize {
    samples.div_ceil(CHUNK)
}

/// Moments of the scaled integrand `g_q^(n-1)(p . x) / (n-1)!` over chunk `index`.
pub fn hermite_gennochi_chunk(x: &Spectrum, q: usize, samples: usize, seed: u64, index: usize) -> Result<Moments> {
    check(x, q)?;
    let n = x.len();
    let start = index * CHUNK;
    let len = CHUNK.min(samples.saturating_sub(start));
    let f = entropy_kernel(n, q);
    let norm = math::factorial(n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(math::derive_seed(seed, index as u64));
    let mut m = Moments::default();
    for _ in 0..len {
        let p = random_simplex_point(&mut rng, n);
        let y: f64 = p.iter().zip(x.values()).map(|(a, b)| a * b).sum();
        let v = f
            .derivative(n - 1, y)
            .ok_or(Error::DerivativeUnavailable { order: n - 1, x: y })?
            / norm;
        m.count += 1;
        m.sum += v;
        m.sum_sq += v * v;
    }
    Ok(m)
}

/// Estimate of `dS/ds_q` as a simplex integral: `(mean, stderr)`.
pub fn hermite_gennochi_estimate(x: &Spectrum, q: usize, samples: usize, seed: u64) -> Result<(f64, f64)> {
    check(x, q)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let mut total = Moments::default();
    for index in 0..chunk_count(samples) {
        total = total.merge(hermite_gennochi_chunk(x, q, samples, seed, index)?);
    }
    Ok(total.estimate())
}
