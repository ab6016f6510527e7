//! Randomized property suites.
//!
//! Every trial draws from its own generator seeded by `(suite seed, trial)`,
//! so results do not depend on the thread count or on which other suites ran.

use std::time::{Duration, Instant};

use ensemble_vol_core::calculus::{self, divided, VariableChart, XPowLog};
use ensemble_vol_core::ensemble::{self, ProbMode};
use ensemble_vol_core::math;
use ensemble_vol_core::spectral::{self, Spectrum};
use ensemble_vol_core::volumes;
use ensemble_vol_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::format::{num, opt, Doc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Theorem1,
    Bounds,
    Identities,
    Gradients,
    Subentropy,
    WFunction,
    HermiteGennochi,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Theorem1,
        Suite::Bounds,
        Suite::Identities,
        Suite::Gradients,
        Suite::Subentropy,
        Suite::WFunction,
        Suite::HermiteGennochi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Bounds => "bounds",
            Suite::Identities => "identities",
            Suite::Gradients => "gradients",
            Suite::Subentropy => "subentropy",
            Suite::WFunction => "w-function",
            Suite::HermiteGennochi => "hermite-gennochi",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Trials when `--trials` is absent. For `theorem1` and `bounds` this is
    /// per spectrum size `n = 2..=6`.
    pub fn default_trials(self) -> usize {
        match self {
            Suite::Theorem1 | Suite::Bounds => 10_000,
            Suite::HermiteGennochi => 100,
            _ => 1_000,
        }
    }

    fn stream(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub trials: Option<usize>,
    pub seed: u64,
    /// Replaces the residual tolerances (not positivity, bound, statistical
    /// or asymptotic thresholds).
    pub tolerance: Option<f64>,
}

impl VerifyConfig {
    pub fn new(seed: u64) -> Self {
        VerifyConfig {
            trials: None,
            seed,
            tolerance: None,
        }
    }

    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Worst {
    Largest,
    Smallest,
}

/// One named inequality checked on every trial.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    /// The threshold each sample is compared with.
    pub threshold: f64,
    worst_is: Worst,
    pub count: usize,
    pub violations: usize,
    pub worst: Option<f64>,
    pub worst_trial: Option<usize>,
}

impl Check {
    /// Samples must not exceed `threshold`.
    fn at_most(name: &'static str, threshold: f64) -> Check {
        Check::new(name, threshold, Worst::Largest)
    }

    /// Samples must exceed `threshold` (strictly for zero, else at least).
    fn at_least(name: &'static str, threshold: f64) -> Check {
        Check::new(name, threshold, Worst::Smallest)
    }

    fn new(name: &'static str, threshold: f64, worst_is: Worst) -> Check {
        Check {
            name,
            threshold,
            worst_is,
            count: 0,
            violations: 0,
            worst: None,
            worst_trial: None,
        }
    }

    fn accepts(&self, v: f64) -> bool {
        match self.worst_is {
            Worst::Largest => v <= self.threshold,
            Worst::Smallest if self.threshold == 0.0 => v > 0.0,
            Worst::Smallest => v >= self.threshold,
        }
    }

    fn record(&mut self, trial: usize, v: f64) {
        self.count += 1;
        if !self.accepts(v) {
            self.violations += 1;
        }
        let worse = match (self.worst, self.worst_is) {
            (None, _) => true,
            (Some(_), _) if v.is_nan() => true,
            (Some(w), _) if w.is_nan() => false,
            (Some(w), Worst::Largest) => v > w,
            (Some(w), Worst::Smallest) => v < w,
        };
        if worse {
            self.worst = Some(v);
            self.worst_trial = Some(trial);
        }
    }

    fn document(&self) -> Value {
        let kind = match self.worst_is {
            Worst::Largest => "max",
            Worst::Smallest => "min",
        };
        Doc::new()
            .put("check", self.name)
            .put("bound", kind)
            .put("threshold", num(self.threshold))
            .put("samples", self.count)
            .put("violations", self.violations)
            .put("worst", opt(self.worst))
            .put("worst_trial", self.worst_trial.map_or(Value::Null, Value::from))
            .build()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub errors: usize,
    /// First few library errors, with their trial index.
    pub error_samples: Vec<(usize, String)>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.errors == 0 && self.checks.iter().all(|c| c.violations == 0 && c.count > 0)
    }

    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Runtime is left out so the document is reproducible.
    pub fn document(&self) -> Value {
        Doc::new()
            .put("suite", self.suite.name())
            .put("passed", self.passed())
            .put("trials", self.trials)
            .put("seed", self.seed)
            .put("errors", self.errors)
            .put(
                "error_samples",
                self.error_samples
                    .iter()
                    .map(|(t, m)| Doc::new().put("trial", *t).put("error", m.as_str()).build())
                    .collect::<Vec<_>>(),
            )
            .put("checks", self.checks.iter().map(Check::document).collect::<Vec<_>>())
            .build()
    }
}

/// Summary document for a list of suite results.
pub fn summary_document(seed: u64, results: &[SuiteResult]) -> Value {
    Doc::new()
        .put("seed", seed)
        .put("passed", results.iter().all(SuiteResult::passed))
        .put("suites", results.iter().map(SuiteResult::document).collect::<Vec<_>>())
        .build()
}

type Samples = Vec<(usize, f64)>;

fn run_trials<F>(suite: Suite, cfg: &VerifyConfig, trials: usize, mut checks: Vec<Check>, f: F) -> SuiteResult
where
    F: Fn(usize, &mut ChaCha8Rng, &mut Samples) -> Result<(), Error> + Sync,
{
    let start = Instant::now();
    let seed = math::derive_seed(cfg.seed, suite.stream());
    let outcomes: Vec<(Samples, Option<String>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(math::derive_seed(seed, i as u64));
            let mut out = Vec::new();
            let err = f(i, &mut rng, &mut out).err().map(|e| e.to_string());
            (out, err)
        })
        .collect();
    let mut errors = 0;
    let mut error_samples = Vec::new();
    for (trial, (samples, err)) in outcomes.into_iter().enumerate() {
        for (c, v) in samples {
            checks[c].record(trial, v);
        }
        if let Some(e) = err {
            errors += 1;
            if error_samples.len() < 5 {
                error_samples.push((trial, e));
            }
        }
    }
    SuiteResult {
        suite,
        trials,
        seed: cfg.seed,
        checks,
        errors,
        error_samples,
        elapsed: start.elapsed(),
    }
}

/// Probability spectrum of length `n`, descending, with every entry at least
/// `floor` and neighbouring entries at least `gap` apart.
pub fn random_spectrum<R: Rng>(rng: &mut R, n: usize, floor: f64, gap: f64) -> Spectrum {
    loop {
        let mut v = ensemble::random_simplex_point(rng, n);
        v.sort_by(|a, b| b.total_cmp(a));
        if v[n - 1] >= floor && v.windows(2).all(|w| w[0] - w[1] >= gap) {
            if let Ok(x) = Spectrum::new(v) {
                return x;
            }
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Spectrum sizes cycled through by the per-trial suites.
const SIZES: [usize; 5] = [2, 3, 4, 5, 6];

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteResult {
    let trials = cfg.trials.unwrap_or(suite.default_trials());
    match suite {
        Suite::Theorem1 => theorem1(cfg, trials),
        Suite::Bounds => bounds(cfg, trials),
        Suite::Identities => identities(cfg, trials),
        Suite::Gradients => gradients(cfg, trials),
        Suite::Subentropy => subentropy(cfg, trials),
        Suite::WFunction => w_function(cfg, trials),
        Suite::HermiteGennochi => hermite_gennochi(cfg, trials),
    }
}

/// Positivity of `dS/ds_q` on spectra and of `dS/d alpha_u` on ensembles.
fn theorem1(cfg: &VerifyConfig, per_n: usize) -> SuiteResult {
    let checks = vec![
        Check::at_least("dS_ds > 0", 0.0),
        Check::at_least("dS_dalpha > 0", 0.0),
    ];
    run_trials(Suite::Theorem1, cfg, per_n * SIZES.len(), checks, |i, rng, out| {
        let n = SIZES[i % SIZES.len()];
        let x = random_spectrum(rng, n, 1e-4, 1e-4);
        for q in 2..=n {
            out.push((0, calculus::ds_ds(&x, q)?));
        }
        let k = n + rng.random_range(0..2);
        let e = ensemble::random_ensemble(k, n, &ProbMode::Dirichlet, rng.random())?;
        let y = calculus::ensemble_spectrum(&e)?;
        for size in 2..=n {
            let d = calculus::ds_ds(&y, size)?;
            for labels in volumes::subsets(k, size) {
                let weight: f64 = labels.iter().map(|&l| e.probs()[l - 1]).product();
                out.push((1, weight * d));
            }
        }
        Ok(())
    })
}

/// `dS/ds_q` against its lower bound, which the uniform spectrum attains.
fn bounds(cfg: &VerifyConfig, per_n: usize) -> SuiteResult {
    let checks = vec![
        Check::at_least("dS_ds / bound", 1.0 - 1e-12),
        Check::at_most("uniform spectrum attains bound (rel)", 1e-9),
    ];
    run_trials(Suite::Bounds, cfg, per_n * SIZES.len(), checks, |i, rng, out| {
        let n = SIZES[i % SIZES.len()];
        let x = random_spectrum(rng, n, 1e-4, 1e-4);
        for q in 2..=n {
            let b = calculus::lower_bound_ds_ds(n, q)?;
            out.push((0, calculus::ds_ds(&x, q)? / b));
        }
        if i < SIZES.len() {
            let u = Spectrum::new(vec![1.0 / n as f64; n])?;
            for q in 2..=n {
                let b = calculus::lower_bound_ds_ds(n, q)?;
                out.push((1, rel(calculus::ds_ds(&u, q)?, b)));
            }
        }
        Ok(())
    })
}

fn identities(cfg: &VerifyConfig, trials: usize) -> SuiteResult {
    let tol = cfg.tol(1e-9);
    let checks = vec![
        Check::at_most("power identity residual / scale", tol),
        Check::at_most("sum x^n / prod = s_1 (rel)", tol),
        Check::at_most("volume route vs spectral route |ds|", tol),
    ];
    run_trials(Suite::Identities, cfg, trials, checks, |i, rng, out| {
        let n = SIZES[i % SIZES.len()];
        let x = random_spectrum(rng, n, 1e-4, 1e-4);
        for q in 2..=n {
            let r = calculus::power_identity_residual(&x, q)?;
            out.push((0, r.sum.abs() / r.scale));
        }
        let h1 = divided::lagrange_sum(&XPowLog::monomial(n as u32), x.values())?;
        out.push((1, rel(h1, x.sum())));

        let k = rng.random_range(1..=7);
        let dim = rng.random_range(1..=5);
        let e = ensemble::random_ensemble(k, dim, &ProbMode::Dirichlet, rng.random())?;
        let alphas = volumes::ensemble_alphas(&e)?;
        let s_vol = volumes::symmetric_polys_from_alphas(&alphas, e.probs())?;
        let s_spec = spectral::symmetric_polys(&calculus::ensemble_spectrum(&e)?);
        out.push((2, crate::report::route_discrepancy(s_vol.as_slice(), s_spec.as_slice())));
        Ok(())
    })
}

/// Closed-form derivatives against central differences.
fn gradients(cfg: &VerifyConfig, trials: usize) -> SuiteResult {
    let tol = cfg.tol(1e-4);
    let checks = vec![
        Check::at_most("dS_ds vs finite difference (rel)", tol),
        Check::at_most("dx_ds vs re-rooted finite difference (rel)", tol),
        Check::at_most("dS_dt1 vs chart finite difference (rel)", tol),
        Check::at_most("dS_drn vs chart finite difference (rel)", tol),
    ];
    run_trials(Suite::Gradients, cfg, trials, checks, |i, rng, out| {
        let n = SIZES[i % SIZES.len()];
        let x = random_spectrum(rng, n, GRADIENT_FLOOR, GRADIENT_GAP);
        for q in 2..=n {
            let h = calculus::gap_limited_step(&x, q)?;
            out.push((0, rel(calculus::finite_diff_ds_ds(&x, q, h)?, calculus::ds_ds(&x, q)?)));
        }
        for q in 1..=n {
            let h = calculus::gap_limited_step(&x, q)?;
            for k in 0..n {
                let fd = calculus::finite_diff_dx_ds(&x, k, q, h)?;
                out.push((1, rel(fd, calculus::dx_ds(&x, k, q)?)));
            }
        }
        let h = calculus::chart_step(&x, VariableChart::T, 1)?;
        let fd = calculus::chart_finite_difference(&x, VariableChart::T, 1, h)?;
        out.push((2, rel(fd, calculus::ds_dt1(&x)?)));
        let h = calculus::chart_step(&x, VariableChart::R, n)?;
        let fd = calculus::chart_finite_difference(&x, VariableChart::R, n, h)?;
        out.push((3, rel(fd, calculus::ds_drn(&x)?)));
        Ok(())
    })
}

/// Minimum eigenvalue and neighbour gap of the gradient-suite spectra.
pub const GRADIENT_FLOOR: f64 = 1e-3;
pub const GRADIENT_GAP: f64 = 1e-3;

/// Offsets used to push two eigenvalues together, down to exact coincidence.
const NEAR_COINCIDENT: [f64; 5] = [0.0, 1e-13, 1e-10, 1e-8, 1e-6];

fn subentropy(cfg: &VerifyConfig, trials: usize) -> SuiteResult {
    let tol = cfg.tol(1e-6);
    let checks = vec![
        Check::at_most("|Q - (1 - dS_dt1)|", tol),
        Check::at_most("|dS_drn - s_n (1 - Q)|", tol),
    ];
    run_trials(Suite::Subentropy, cfg, trials, checks, |i, rng, out| {
        let n = SIZES[i % SIZES.len()];
        let mut x = random_spectrum(rng, n, 1e-3, 0.0);
        if i % 2 == 1 {
            // Pull a neighbouring pair together, keeping unit trace.
            let mut v = x.values().to_vec();
            let j = rng.random_range(0..n - 1);
            let mid = 0.5 * (v[j] + v[j + 1]);
            let d = NEAR_COINCIDENT[rng.random_range(0..NEAR_COINCIDENT.len())];
            v[j] = mid + 0.5 * d;
            v[j + 1] = mid - 0.5 * d;
            x = Spectrum::new(v)?;
        }
        let q = calculus::subentropy(&x)?;
        out.push((0, (q - (1.0 - calculus::ds_dt1(&x)?)).abs()));
        let sn = spectral::symmetric_polys(&x).get(n);
        out.push((1, (calculus::ds_drn(&x)? - sn * (1.0 - q)).abs()));
        Ok(())
    })
}

/// Two-level Richardson extrapolation of the central difference.
fn derivative<F: Fn(f64) -> Result<f64, Error>>(f: F, a: f64, h: f64) -> Result<f64, Error> {
    let d = |h: f64| -> Result<f64, Error> { Ok((f(a + h)? - f(a - h)?) / (2.0 * h)) };
    let (d1, d2, d3) = (d(h)?, d(h / 2.0)?, d(h / 4.0)?);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    Ok((16.0 * r2 - r1) / 15.0)
}

fn w_function(cfg: &VerifyConfig, trials: usize) -> SuiteResult {
    let tol = cfg.tol(1e-6);
    let checks = vec![
        Check::at_most("dW_q/da = -(n-q) W_(q+1) (rel)", tol),
        Check::at_most("dW_n/da = -1/prod(a + x) (rel)", tol),
        Check::at_most("|W_q a^(q-1) / B - 1| at a = 1e3 max x", 0.02),
    ];
    run_trials(Suite::WFunction, cfg, trials, checks, |i, rng, out| {
        let n = SIZES[i % SIZES.len()];
        let x = random_spectrum(rng, n, 1e-3, 1e-3);
        let a: f64 = rng.random_range(0.0..5.0);
        let h = 0.05 * (a + x.min());
        for q in 2..=n {
            let fd = derivative(|b| calculus::w(&x, q, b), a, h)?;
            if q < n {
                let want = -((n - q) as f64) * calculus::w(&x, q + 1, a)?;
                out.push((0, rel(fd, want)));
            } else {
                let prod: f64 = x.values().iter().map(|v| a + v).product();
                out.push((1, rel(fd, -1.0 / prod)));
            }
        }
        let big = 1e3 * x.values()[0];
        for p in calculus::w_asymptotic_check(&x, rng.random_range(2..=n), &[big])? {
            out.push((2, (p.ratio - 1.0).abs()));
        }
        Ok(())
    })
}

pub const HG_SAMPLES: usize = 100_000;
pub const HG_FLOOR: f64 = 0.02;

fn hermite_gennochi(cfg: &VerifyConfig, trials: usize) -> SuiteResult {
    let checks = vec![
        Check::at_most("|MC - DD| / stderr", 4.0),
        Check::at_least("(-1)^q d^(n-1)/dx^(n-1) x^(n-q) ln x on grid", 0.0),
    ];
    run_trials(Suite::HermiteGennochi, cfg, trials, checks, |i, rng, out| {
        let n = rng.random_range(2..=5);
        let q = rng.random_range(2..=n);
        let x = random_spectrum(rng, n, HG_FLOOR, 1e-3);
        let (mean, se) = calculus::hermite_gennochi_estimate(&x, q, HG_SAMPLES, rng.random())?;
        let exact = calculus::ds_ds(&x, q)?;
        out.push((0, (mean - exact).abs() / se));
        if i == 0 {
            for n in 2..=8usize {
                for q in 2..=n {
                    for j in 1..1000 {
                        let y = j as f64 / 1000.0;
                        let d = calculus::xm_logx_derivative((n - q) as u32, n - 1, y)?;
                        out.push((1, if q % 2 == 0 { d } else { -d }));
                    }
                }
            }
        }
        Ok(())
    })
}
