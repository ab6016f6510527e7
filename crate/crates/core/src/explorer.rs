//! Constructive witnesses.
//!
//! * Three states whose pairwise overlaps all grow while the entropy also
//!   grows: overlaps fix only the moduli `|a_ij|`, and the remaining phase
//!   freedom moves `alpha_123 = det A`.
//! * Four states where any parameter set containing the six pair volumes
//!   loses monotonicity: with the moduli `r_ij` frozen, moving the triple-product
//!   phases `u, v, w` leaves `s_2` fixed but can drive `dS` negative.
//!
//! Phase gauge for four states: `a_12, a_13, a_14` real and nonnegative, then
//! `u = arg(a_12 a_23 a_31) = arg a_23`, `v = arg(a_14 a_21 a_42) = -arg a_24`,
//! `w = arg(a_13 a_34 a_41) = arg a_34`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::calculus;
use crate::ensemble::{self, Ensemble, OverlapMatrix, PureState};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::math;
use crate::spectral::{self, Spectrum, SymmetricPolys};
use crate::volumes;

/// Pair order used for the six moduli: 12, 13, 14, 23, 24, 34.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_slot(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    PAIRS.iter().position(|&p| p == (i, j)).expect("valid pair")
}

/// Moduli, triple phases and probabilities of a four-state ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseParams {
    /// `r_12, r_13, r_14, r_23, r_24, r_34`.
    pub r: [f64; 6],
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub probs: [f64; 4],
}

impl PhaseParams {
    pub fn r(&self, i: usize, j: usize) -> f64 {
        self.r[pair_slot(i - 1, j - 1)]
    }

    /// Same moduli and probabilities, phases moved by `t * direction`.
    pub fn moved(&self, direction: [f64; 3], t: f64) -> PhaseParams {
        PhaseParams {
            u: self.u + t * direction[0],
            v: self.v + t * direction[1],
            w: self.w + t * direction[2],
            ..self.clone()
        }
    }

    /// The overlap matrix in the fixed gauge (not validated).
    pub fn overlap_entries(&self) -> CMatrix {
        let polar = |r: f64, theta: f64| C64::new(r * math::cos(theta), r * math::sin(theta));
        let mut a = CMatrix::identity(4, 4);
        let mut set = |i: usize, j: usize, z: C64| {
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        };
        set(0, 1, polar(self.r[0], 0.0));
        set(0, 2, polar(self.r[1], 0.0));
        set(0, 3, polar(self.r[2], 0.0));
        set(1, 2, polar(self.r[3], self.u));
        set(1, 3, polar(self.r[4], -self.v));
        set(2, 3, polar(self.r[5], self.w));
        a
    }

    /// Validated overlap matrix, or the unrealizability diagnostic.
    pub fn overlap_matrix(&self) -> Result<OverlapMatrix> {
        let a = self.overlap_entries();
        let min = linalg::hermitian_eigenvalues(&a).last().copied().unwrap_or(0.0);
        if min < -ensemble::PSD_TOL {
            return Err(Error::Unrealizable(min));
        }
        OverlapMatrix::new(a)
    }

    /// `alpha_123 = 1 - r12^2 - r23^2 - r31^2 + 2 r12 r23 r31 cos u`.
    pub fn alpha123_closed_form(&self) -> f64 {
        let (a, b, c) = (self.r(1, 2), self.r(2, 3), self.r(1, 3));
        1.0 - a * a - b * b - c * c + 2.0 * a * b * c * math::cos(self.u)
    }
}

/// Builds the four states realizing `p` (gauge above).
pub fn ensemble_from_phase_params(p: &PhaseParams) -> Result<Ensemble> {
    let a = p.overlap_matrix()?;
    ensemble::ensemble_from_overlaps(&a, &p.probs)
}

/// Reads `(r, u, v, w)` back off a four-state overlap matrix (any gauge).
pub fn phase_params_from_overlaps(a: &OverlapMatrix, probs: [f64; 4]) -> Result<PhaseParams> {
    if a.size() != 4 {
        return Err(Error::InvalidArgument("four states required".into()));
    }
    let m = a.as_matrix();
    let mut r = [0.0; 6];
    for (slot, &(i, j)) in PAIRS.iter().enumerate() {
        r[slot] = m[(i, j)].norm();
    }
    let arg = |z: C64| math::atan2(z.im, z.re);
    Ok(PhaseParams {
        r,
        u: arg(m[(0, 1)] * m[(1, 2)] * m[(2, 0)]),
        v: arg(m[(0, 3)] * m[(1, 0)] * m[(3, 1)]),
        w: arg(m[(0, 2)] * m[(2, 3)] * m[(3, 0)]),
        probs,
    })
}

/// `ds_3/dx` at `u = v = w = pi/2` for phase velocities `(u_x, v_x, w_x)`.
pub fn ds3_dx_formula(p: &PhaseParams, direction: [f64; 3]) -> Result<f64> {
    for (name, angle) in [("u", p.u), ("v", p.v), ("w", p.w)] {
        if math::abs(math::wrap_angle(angle - FRAC_PI_2)) > 1e-9 {
            return Err(Error::WrongEvaluationPoint(alloc::format!(
                "{name} = {angle}, formula holds at pi/2"
            )));
        }
    }
    let [p1, p2, p3, p4] = p.probs;
    let [ux, vx, wx] = direction;
    Ok(-2.0 * (p1 * p2 * p3) * (p.r(1, 2) * p.r(2, 3) * p.r(1, 3)) * ux
        - 2.0 * (p1 * p2 * p4) * (p.r(1, 4) * p.r(1, 2) * p.r(2, 4)) * vx
        - 2.0 * (p1 * p3 * p4) * (p.r(1, 3) * p.r(3, 4) * p.r(1, 4)) * wx
        + 2.0 * (p2 * p3 * p4) * (p.r(2, 3) * p.r(3, 4) * p.r(2, 4)) * (ux + vx + wx))
}

/// Symmetric polynomials from the spectrum of the reconstructed ensemble.
pub fn spectral_polys(p: &PhaseParams) -> Result<SymmetricPolys> {
    let e = ensemble_from_phase_params(p)?;
    let x = spectral::eigenvalues_hermitian(ensemble::gram_matrix(&e).as_matrix())?;
    Ok(spectral::symmetric_polys(&x))
}

/// Symmetric polynomials straight from the minors of the gauge matrix.
pub fn volume_polys(p: &PhaseParams) -> Result<SymmetricPolys> {
    let a = p.overlap_matrix()?;
    let v = volumes::all_alphas(&a, 4)?;
    volumes::symmetric_polys_from_alphas(&v, &p.probs)
}

/// Entropy of the reconstructed ensemble.
pub fn entropy_of_params(p: &PhaseParams) -> Result<f64> {
    let e = ensemble_from_phase_params(p)?;
    let x = spectral::eigenvalues_hermitian(ensemble::gram_matrix(&e).as_matrix())?;
    Ok(spectral::von_neumann_entropy(&x))
}

/// Central difference of `ds_3/dx` along the reconstructed-ensemble curve.
pub fn ds3_dx_finite_difference(p: &PhaseParams, direction: [f64; 3], h: f64) -> Result<f64> {
    let plus = spectral_polys(&p.moved(direction, h))?.get(3);
    let minus = spectral_polys(&p.moved(direction, -h))?.get(3);
    Ok((plus - minus) / (2.0 * h))
}

/// The two routes to `dS/dx` along a phase direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDerivative {
    /// `ds_q/dx` for `q = 2, 3, 4` (`q = 3` from the closed form).
    pub ds_dx: [f64; 3],
    /// `dS/ds_q` for `q = 2, 3, 4`.
    pub ds_dsq: [f64; 3],
    /// `sum_q (dS/ds_q)(ds_q/dx)`.
    pub chain: f64,
    /// Central difference of `S` along the curve.
    pub direct: f64,
}

/// Step used for the curve finite differences.
pub const CURVE_STEP: f64 = 1e-5;

/// `dS/dx` at `p` (which must sit at `u = v = w = pi/2`) along `direction`.
pub fn phase_derivative(p: &PhaseParams, direction: [f64; 3]) -> Result<PhaseDerivative> {
    let h = CURVE_STEP;
    let plus = p.moved(direction, h);
    let minus = p.moved(direction, -h);
    let ds2 = (spectral_polys(&plus)?.get(2) - spectral_polys(&minus)?.get(2)) / (2.0 * h);
    let ds3 = ds3_dx_formula(p, direction)?;
    let ds4 = (volume_polys(&plus)?.get(4) - volume_polys(&minus)?.get(4)) / (2.0 * h);

    let e = ensemble_from_phase_params(p)?;
    let x = calculus::ensemble_spectrum(&e)?;
    let mut ds_dsq = [0.0; 3];
    for (slot, q) in (2..=4).enumerate() {
        ds_dsq[slot] = calculus::ds_ds(&x, q)?;
    }
    let ds_dx = [ds2, ds3, ds4];
    let chain = ds_dsq.iter().zip(&ds_dx).map(|(a, b)| a * b).sum();
    let direct = (entropy_of_params(&plus)? - entropy_of_params(&minus)?) / (2.0 * h);
    Ok(PhaseDerivative {
        ds_dx,
        ds_dsq,
        chain,
        direct,
    })
}

/// A verified non-monotone direction.
#[derive(Debug, Clone, PartialEq)]
pub struct NonmonotonicityWitness {
    pub params: PhaseParams,
    pub direction: [f64; 3],
    /// 0-based index of the state given the small probability.
    pub small_index: usize,
    pub derivative: PhaseDerivative,
    pub entropy_base: f64,
    /// Entropy after a forward step of [`CURVE_STEP`].
    pub entropy_step: f64,
    /// Chain-rule `dS/dx` for the same states and direction at uniform probabilities.
    pub uniform_chain: Option<f64>,
    pub candidates: usize,
    pub seed: u64,
}

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome<T> {
    Found(T),
    Exhausted { candidates: usize, seed: u64 },
}

impl<T> SearchOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

/// Threshold a witness derivative must clear.
pub const WITNESS_MARGIN: f64 = 1e-6;
/// Largest `|ds_2/dx|` accepted along a pure-phase direction.
pub const S2_FLATNESS: f64 = 1e-8;

/// Which probability to shrink for a given phase direction.
///
/// All velocities negative: the three terms carrying `p_1` are positive and
/// the fourth negative, so `p_1` is made small. Otherwise a positive velocity
/// makes its own term negative and the probability absent from that term is
/// made small (`u_x -> p_4`, `v_x -> p_3`, `w_x -> p_2`).
pub fn small_probability_index(direction: [f64; 3]) -> usize {
    if direction.iter().all(|&d| d < 0.0) {
        0
    } else if direction[0] > 0.0 {
        3
    } else if direction[1] > 0.0 {
        2
    } else {
        1
    }
}

fn unit_direction<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let d: [f64; 3] = core::array::from_fn(|_| StandardNormal.sample(rng));
        let norm = math::sqrt(d.iter().map(|v| v * v).sum());
        if norm > 1e-3 {
            return d.map(|v| v / norm);
        }
    }
}

/// Searches for a realizable four-state point and phase direction with
/// `ds_2/dx = 0` along which the entropy decreases.
pub fn nonmonotonicity_demo(p_small: f64, seed: u64, budget: usize) -> Result<SearchOutcome<NonmonotonicityWitness>> {
    if !(p_small > 0.0 && p_small <= 0.1) {
        return Err(Error::InvalidArgument("p_small must lie in (0, 0.1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for candidate in 1..=budget {
        let direction = unit_direction(&mut rng);
        let small = small_probability_index(direction);
        let rest = ensemble::random_simplex_point(&mut rng, 3);
        let mut probs = [0.0; 4];
        let mut it = rest.iter();
        for (i, slot) in probs.iter_mut().enumerate() {
            *slot = if i == small {
                p_small
            } else {
                // The others never drop below the small one.
                p_small + (1.0 - 4.0 * p_small) * it.next().unwrap()
            };
        }
        let r: [f64; 6] = core::array::from_fn(|_| rng.random_range(0.05..0.5));
        let params = PhaseParams {
            r,
            u: FRAC_PI_2,
            v: FRAC_PI_2,
            w: FRAC_PI_2,
            probs,
        };
        let Ok(derivative) = phase_derivative(&params, direction) else {
            continue;
        };
        let entropy_base = entropy_of_params(&params)?;
        let entropy_step = match entropy_of_params(&params.moved(direction, CURVE_STEP)) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let ok = derivative.chain < -WITNESS_MARGIN
            && derivative.direct < -WITNESS_MARGIN
            && math::abs(derivative.ds_dx[0]) <= S2_FLATNESS
            && entropy_step < entropy_base;
        if ok {
            let uniform = PhaseParams {
                probs: [0.25; 4],
                ..params.clone()
            };
            let uniform_chain = phase_derivative(&uniform, direction).ok().map(|d| d.chain);
            return Ok(SearchOutcome::Found(NonmonotonicityWitness {
                params,
                direction,
                small_index: small,
                derivative,
                entropy_base,
                entropy_step,
                uniform_chain,
                candidates: candidate,
                seed,
            }));
        }
    }
    Ok(SearchOutcome::Exhausted {
        candidates: budget,
        seed,
    })
}

/// A pair of ensembles where every overlap grew and so did the entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub base: Ensemble,
    pub perturbed: Ensemble,
    /// `|<psi_i|psi_j>|` for `i < j` in lexicographic order.
    pub base_overlaps: Vec<f64>,
    pub perturbed_overlaps: Vec<f64>,
    pub base_entropy: f64,
    pub perturbed_entropy: f64,
    /// Candidate evaluations spent up to and including the witness.
    pub evaluations: usize,
    pub seed: u64,
}

/// Slack allowed on "not decreased" and margin required on "strictly increased".
pub const OVERLAP_SLACK: f64 = 1e-12;
pub const STRICT_MARGIN: f64 = 1e-6;

/// Pairwise overlap moduli in `i < j` order.
pub fn overlap_moduli(e: &Ensemble) -> Vec<f64> {
    let s = e.states();
    let mut out = Vec::new();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            out.push(s[i].inner(&s[j]).norm());
        }
    }
    out
}

/// Entropy through the Gram matrix.
fn gram_entropy(e: &Ensemble) -> f64 {
    spectral::entropy_of(&linalg::hermitian_eigenvalues(ensemble::gram_matrix(e).as_matrix()))
}

/// Entropy through the density matrix, used for independent re-scoring.
fn density_entropy(e: &Ensemble) -> f64 {
    spectral::entropy_of(&linalg::hermitian_eigenvalues(&ensemble::density_matrix(e)))
}

fn satisfies(base: &[f64], pert: &[f64], s0: f64, s1: f64) -> bool {
    let weakly = base.iter().zip(pert).all(|(b, p)| *p >= b - OVERLAP_SLACK);
    let strictly = base.iter().zip(pert).any(|(b, p)| *p >= b + STRICT_MARGIN);
    weakly && strictly && s1 >= s0 + STRICT_MARGIN
}

/// Re-derives every inequality of a report from the raw state vectors.
pub fn verify_counterexample(report: &CounterexampleReport) -> bool {
    if report.base.probs() != report.perturbed.probs() {
        return false;
    }
    let b = overlap_moduli(&report.base);
    let p = overlap_moduli(&report.perturbed);
    satisfies(&b, &p, density_entropy(&report.base), density_entropy(&report.perturbed))
}

/// Number of independent shards a search budget is split into.
pub const SHARDS: usize = 8;

/// Budget of shard `index` when `budget` is split across [`SHARDS`].
pub fn shard_budget(budget: usize, index: usize) -> usize {
    budget / SHARDS + usize::from(index < budget % SHARDS)
}

const ATTEMPTS_PER_BASE: usize = 240;
const INITIAL_STEP: f64 = 0.2;

/// One shard of the overlap/entropy search over `k` states in `k` dimensions.
///
/// Draws a random base ensemble, then tries random perturbations with a step
/// that halves every 60 rejections; a fresh base is drawn after
/// 240 rejections. Returns the witness and the evaluations it took.
pub fn overlap_entropy_shard(
    k: usize,
    probs: &[f64],
    seed: u64,
    shard: usize,
    budget: usize,
) -> Result<Option<(CounterexampleReport, usize)>> {
    ensemble::validate_probs(probs, k)?;
    let shard_seed = math::derive_seed(seed, shard as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(shard_seed);
    let mut evaluations = 0usize;
    while evaluations < budget {
        let states: Vec<PureState> = (0..k).map(|_| ensemble::random_state(&mut rng, k)).collect();
        let base = Ensemble::new(states, probs.to_vec())?;
        let base_r = overlap_moduli(&base);
        let base_s = gram_entropy(&base);
        let mut step = INITIAL_STEP;
        for attempt in 0..ATTEMPTS_PER_BASE {
            if evaluations >= budget {
                break;
            }
            if attempt > 0 && attempt % 60 == 0 {
                step *= 0.5;
            }
            evaluations += 1;
            let states = base
                .states()
                .iter()
                .map(|s| {
                    let amps = s
                        .amplitudes()
                        .iter()
                        .map(|a| {
                            let d = C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
                            a + d * step
                        })
                        .collect();
                    PureState::normalized(amps)
                })
                .collect::<Result<Vec<_>>>()?;
            let cand = Ensemble::new(states, probs.to_vec())?;
            let cand_r = overlap_moduli(&cand);
            if !satisfies(&base_r, &cand_r, base_s, gram_entropy(&cand)) {
                continue;
            }
            let report = CounterexampleReport {
                base_overlaps: base_r.clone(),
                perturbed_overlaps: cand_r,
                base_entropy: density_entropy(&base),
                perturbed_entropy: density_entropy(&cand),
                base: base.clone(),
                perturbed: cand,
                evaluations,
                seed,
            };
            if verify_counterexample(&report) {
                return Ok(Some((report, evaluations)));
            }
        }
    }
    Ok(None)
}

/// Sequential driver over all shards; the lowest-index shard with a witness wins.
pub fn overlap_entropy_search(k: usize, probs: &[f64], seed: u64, budget: usize) -> Result<SearchOutcome<CounterexampleReport>> {
    let mut spent = 0;
    for shard in 0..SHARDS {
        let b = shard_budget(budget, shard);
        if let Some((mut report, used)) = overlap_entropy_shard(k, probs, seed, shard, b)? {
            report.evaluations = spent + used;
            return Ok(SearchOutcome::Found(report));
        }
        spent += b;
    }
    Ok(SearchOutcome::Exhausted {
        candidates: spent,
        seed,
    })
}

/// Three states in three dimensions at uniform probabilities.
pub fn js_counterexample_search(seed: u64, budget: usize) -> Result<SearchOutcome<CounterexampleReport>> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    overlap_entropy_search(3, &[1.0 / 3.0; 3], seed, budget)
}

/// Entropy spectrum of a phase-parameter point (for reports).
pub fn spectrum_of_params(p: &PhaseParams) -> Result<Spectrum> {
    calculus::ensemble_spectrum(&ensemble_from_phase_params(p)?)
}
