//! Pure-state ensembles and the matrices built from them.
//!
//! An [`Ensemble`] is `k` normalized states in `C^n` with strictly positive
//! probabilities. From it we build the overlap matrix `A` (`a_ij = <psi_i|psi_j>`),
//! the Gram matrix `G = Q A Q` with `Q = diag(sqrt p)`, and the density matrix
//! `rho = sum_i p_i |psi_i><psi_i|`. `G` and `rho` share their nonzero spectrum.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::math;

/// Tolerance on state norms and probability sums.
pub const NORM_TOL: f64 = 1e-12;
/// Smallest eigenvalue tolerated for a matrix that should be PSD.
pub const PSD_TOL: f64 = 1e-10;
/// Pivot threshold for the reconstruction factorization.
pub const RANK_TOL: f64 = 1e-10;

/// A normalized vector of amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Accepts amplitudes whose Euclidean norm is 1 within `1e-12`.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if amplitudes.is_empty() || math::abs(norm - 1.0) > NORM_TOL {
            return Err(Error::NotNormalized { index: 0, norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm. Fails only for the zero vector.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if amplitudes.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { index: 0, norm });
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Multiply by a global phase `e^{i theta}`.
    pub fn with_phase(&self, theta: f64) -> PureState {
        let phase = C64::new(math::cos(theta), math::sin(theta));
        PureState {
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }
}

fn norm(v: &[C64]) -> f64 {
    math::sqrt(v.iter().map(|a| a.norm_sqr()).sum())
}

/// `k` pure states of a common dimension with strictly positive probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    states: Vec<PureState>,
    probs: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<PureState>, probs: Vec<f64>) -> Result<Self> {
        let first = states.first().ok_or(Error::Empty)?;
        let dim = first.dimension();
        for (index, s) in states.iter().enumerate() {
            if s.dimension() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    found: s.dimension(),
                });
            }
        }
        validate_probs(&probs, states.len())?;
        Ok(Self { states, probs })
    }

    /// Builds states from raw amplitude vectors, checking normalization.
    pub fn from_amplitudes(amplitudes: Vec<Vec<C64>>, probs: Vec<f64>) -> Result<Self> {
        let states = amplitudes
            .into_iter()
            .enumerate()
            .map(|(index, a)| {
                PureState::new(a).map_err(|e| match e {
                    Error::NotNormalized { norm, .. } => Error::NotNormalized { index, norm },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(states, probs)
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of states `k`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Ambient dimension `n`.
    pub fn dimension(&self) -> usize {
        self.states[0].dimension()
    }

    /// `k x n` matrix whose rows are the state amplitudes.
    pub fn coordinate_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.len(), self.dimension(), |i, j| {
            self.states[i].amplitudes[j]
        })
    }

    /// Dimension of the span of the states.
    pub fn span_dimension(&self) -> usize {
        linalg::pivoted_cholesky(overlap_matrix(self).as_matrix(), RANK_TOL).rank()
    }

    /// Same states, each multiplied by its own phase.
    pub fn with_phases(&self, phases: &[f64]) -> Ensemble {
        let states = self
            .states
            .iter()
            .zip(phases)
            .map(|(s, &t)| s.with_phase(t))
            .collect();
        Ensemble {
            states,
            probs: self.probs.clone(),
        }
    }

    /// Same states with different probabilities.
    pub fn with_probs(&self, probs: Vec<f64>) -> Result<Ensemble> {
        Ensemble::new(self.states.clone(), probs)
    }
}

pub(crate) fn validate_probs(probs: &[f64], states: usize) -> Result<()> {
    if probs.len() != states {
        return Err(Error::ProbabilityCount {
            count: probs.len(),
            states,
        });
    }
    for (index, &value) in probs.iter().enumerate() {
        if !(value > NORM_TOL) || !value.is_finite() {
            return Err(Error::NonPositiveProbability { index, value });
        }
    }
    let total: f64 = probs.iter().sum();
    if math::abs(total - 1.0) > NORM_TOL {
        return Err(Error::ProbabilitySum(total));
    }
    Ok(())
}

/// Matrix of raw inner products `a_ij = <psi_i|psi_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix(CMatrix);

impl OverlapMatrix {
    /// Validates Hermiticity, unit diagonal and positive semidefiniteness.
    pub fn new(entries: CMatrix) -> Result<Self> {
        linalg::check_square(&entries)?;
        let dev = linalg::hermitian_deviation(&entries);
        if dev > NORM_TOL {
            return Err(Error::NotHermitian(dev));
        }
        for i in 0..entries.nrows() {
            let d = entries[(i, i)];
            if math::abs(d.re - 1.0) > NORM_TOL || math::abs(d.im) > NORM_TOL {
                return Err(Error::NotUnitDiagonal { index: i, value: d.re });
            }
        }
        let min = linalg::hermitian_eigenvalues(&entries)
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self(entries))
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Number of states `k`.
    pub fn size(&self) -> usize {
        self.0.nrows()
    }
}

/// `G_ij = sqrt(p_i p_j) a_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(CMatrix);

impl GramMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        linalg::check_square(&entries)?;
        let dev = linalg::hermitian_deviation(&entries);
        if dev > NORM_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let trace: f64 = (0..entries.nrows()).map(|i| entries[(i, i)].re).sum();
        if math::abs(trace - 1.0) > NORM_TOL {
            return Err(Error::ProbabilitySum(trace));
        }
        let min = linalg::hermitian_eigenvalues(&entries)
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self(entries))
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.0.nrows()).map(|i| self.0[(i, i)].re).sum()
    }
}

fn raw_overlaps(e: &Ensemble) -> CMatrix {
    let k = e.len();
    let mut a = CMatrix::zeros(k, k);
    for i in 0..k {
        a[(i, i)] = C64::new(1.0, 0.0);
        for j in i + 1..k {
            let v = e.states[i].inner(&e.states[j]);
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    a
}

/// The overlap matrix `A` of an ensemble.
pub fn overlap_matrix(e: &Ensemble) -> OverlapMatrix {
    // Entries are exact Hermitian with unit diagonal by construction and a Gram
    // matrix of unit vectors is PSD, so validation is skipped on this path.
    OverlapMatrix(raw_overlaps(e))
}

/// The Gram matrix `G = Q A Q`.
pub fn gram_matrix(e: &Ensemble) -> GramMatrix {
    let a = raw_overlaps(e);
    let q: Vec<f64> = e.probs.iter().map(|&p| math::sqrt(p)).collect();
    let k = e.len();
    let g = CMatrix::from_fn(k, k, |i, j| a[(i, j)] * (q[i] * q[j]));
    GramMatrix(g)
}

/// `rho = sum_i p_i |psi_i><psi_i|`, an `n x n` Hermitian matrix.
pub fn density_matrix(e: &Ensemble) -> CMatrix {
    let n = e.dimension();
    let mut rho = CMatrix::zeros(n, n);
    for (s, &p) in e.states.iter().zip(&e.probs) {
        for r in 0..n {
            for c in 0..n {
                rho[(r, c)] += s.amplitudes[r] * s.amplitudes[c].conj() * p;
            }
        }
    }
    rho
}

/// Realizes a PSD unit-diagonal matrix as the overlap matrix of an ensemble.
///
/// The states are the conjugated rows of the pivoted lower-triangular factor
/// `A = L L^dagger`, so they live in dimension `rank(A)` and the pivot row of
/// each step has a nonnegative real leading coordinate.
pub fn ensemble_from_overlaps(a: &OverlapMatrix, probs: &[f64]) -> Result<Ensemble> {
    let k = a.size();
    validate_probs(probs, k)?;
    let chol = linalg::pivoted_cholesky(a.as_matrix(), RANK_TOL);
    let rank = chol.rank().max(1);
    let mut states = Vec::with_capacity(k);
    for i in 0..k {
        let mut amps: Vec<C64> = chol.row_of(i).into_iter().map(|z| z.conj()).collect();
        amps.resize(rank, C64::new(0.0, 0.0));
        states.push(PureState::normalized(amps)?);
    }
    Ensemble::new(states, probs.to_vec())
}

/// How probabilities are assigned by [`random_ensemble`].
#[derive(Debug, Clone, PartialEq)]
pub enum ProbMode {
    Uniform,
    /// Uniform on the simplex (normalized exponential draws).
    Dirichlet,
    Fixed(Vec<f64>),
}

/// Draws a uniformly distributed probability vector of length `k`.
pub fn random_simplex_point<R: rand::Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    loop {
        let draws: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 && draws.iter().all(|&d| d > 0.0) {
            return draws.into_iter().map(|d| d / total).collect();
        }
    }
}

/// Haar-random state: a complex Gaussian vector, normalized, with the phase
/// fixed so the first nonzero amplitude is real and positive.
pub fn random_state<R: rand::Rng>(rng: &mut R, n: usize) -> PureState {
    loop {
        let amps: Vec<C64> = (0..n)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let Some(lead) = amps.iter().find(|a| a.norm() > 0.0).copied() else {
            continue;
        };
        let phase = lead.conj() / lead.norm();
        let amps = amps.into_iter().map(|a| a * phase).collect();
        if let Ok(s) = PureState::normalized(amps) {
            return s;
        }
    }
}

/// Deterministic random ensemble for a given seed.
pub fn random_ensemble(k: usize, n: usize, mode: &ProbMode, seed: u64) -> Result<Ensemble> {
    if k == 0 || n == 0 {
        return Err(Error::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = (0..k).map(|_| random_state(&mut rng, n)).collect();
    let probs = match mode {
        ProbMode::Uniform => alloc::vec![1.0 / k as f64; k],
        ProbMode::Dirichlet => random_simplex_point(&mut rng, k),
        ProbMode::Fixed(p) => p.clone(),
    };
    Ensemble::new(states, probs)
}
