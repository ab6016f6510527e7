//! Fixed reference values computed independently at 40-digit precision, plus
//! limit and moment checks that do not go through the library's own kernels.

use ensemble_vol_core::calculus::{self, divided, Smooth, XPowLog};
use ensemble_vol_core::ensemble::{self, random_state};
use ensemble_vol_core::explorer::{self, PhaseParams};
use ensemble_vol_core::linalg;
use ensemble_vol_core::math;
use ensemble_vol_core::spectral::{self, Spectrum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

#[test]
fn three_level_constants() {
    let x = Spectrum::new(vec![0.5, 0.3, 0.2]).unwrap();
    assert!(close(calculus::ds_ds(&x, 2).unwrap(), 1.5537794773288264802, 1e-13));
    assert!(close(calculus::ds_ds(&x, 3).unwrap(), 5.0017432075056346792, 1e-13));
    assert!(close(calculus::subentropy(&x).unwrap(), 0.24787678364229923781, 1e-12));
    assert!(close(calculus::w(&x, 2, 1.0).unwrap(), 0.37581278407537621561, 1e-12));
}

#[test]
fn four_level_constants() {
    let x = Spectrum::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
    let want = [1.3932402509977199111, 3.0575011695625481786, 28.316506132566245483];
    for (q, w) in (2..=4).zip(want) {
        assert!(close(calculus::ds_ds(&x, q).unwrap(), w, 1e-12), "q={q}");
    }
    assert!(close(calculus::subentropy(&x).unwrap(), 0.28259117687373371294, 1e-12));
}

#[test]
fn two_level_closed_form() {
    let x = Spectrum::new(vec![0.6, 0.4]).unwrap();
    assert!(close(calculus::ds_ds(&x, 2).unwrap(), 2.027325540540822, 1e-14));
}

/// Richardson extrapolation of distinct-node divided differences toward a
/// coincident pair, compared with the confluent table.
#[test]
fn confluent_limit() {
    let f = XPowLog::xm_logx(3);
    let base = [0.45, 0.3, 0.25];
    let confluent = divided::divided_difference(&f, &[0.45, 0.3, 0.3, 0.25]).unwrap();
    let at = |h: f64| divided::divided_difference(&f, &[base[0], base[1], base[1] + h, base[2]]).unwrap();
    // The error expands in integer powers of h.
    let (h1, h2, h3) = (1e-2, 5e-3, 2.5e-3);
    let r1 = 2.0 * at(h2) - at(h1);
    let r2 = 2.0 * at(h3) - at(h2);
    let extrap = (4.0 * r2 - r1) / 3.0;
    assert!(close(confluent, extrap, 1e-6), "{confluent} vs {extrap}");

    // Fully confluent: f^(n-1)(x)/(n-1)!.
    let triple = divided::divided_difference(&f, &[0.3, 0.3, 0.3]).unwrap();
    let d2 = f.derivative(2, 0.3).unwrap() / 2.0;
    assert!(close(triple, d2, 1e-12));
    // (x^3 ln x)'' = 6x ln x + 5x
    assert!(close(d2, (6.0 * 0.3 * 0.3f64.ln() + 5.0 * 0.3) / 2.0, 1e-14));
}

#[test]
fn near_coincident_is_continuous() {
    let f = XPowLog::xm_logx(2).scaled(-1.0);
    let exact = divided::divided_difference(&f, &[0.5, 0.25, 0.25]).unwrap();
    for h in [1e-4, 1e-6, 1e-9, 1e-12] {
        let v = divided::divided_difference(&f, &[0.5, 0.25, 0.25 + h]).unwrap();
        assert!(close(v, exact, 1e-3), "h={h}: {v} vs {exact}");
    }
}

/// Companion-matrix roots against eigenvalues of a diagonal Hermitian matrix.
#[test]
fn companion_roots_match_eigenvalues() {
    let vals = [0.41, 0.27, 0.19, 0.08, 0.05];
    let mut m = linalg::CMatrix::zeros(5, 5);
    for (i, v) in vals.iter().enumerate() {
        m[(i, i)] = linalg::C64::new(*v, 0.0);
    }
    let eig = spectral::eigenvalues_hermitian(&m).unwrap();
    let s = spectral::symmetric_polys(&eig);
    let roots = spectral::roots_from_symmetric_polys(&s).unwrap();
    for (a, b) in roots.values().iter().zip(vals) {
        assert!((a - b).abs() < 1e-12);
    }
}

/// `E|<e_1|psi>|^2 = 1/n` and `E|<e_1|psi>|^4 = 2/(n(n+1))` under the Haar measure.
#[test]
fn haar_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2usize, 3, 5] {
        let trials = 200_000;
        let (mut m2, mut m4) = (0.0, 0.0);
        for _ in 0..trials {
            let s = random_state(&mut rng, n);
            let p = s.amplitudes()[0].norm_sqr();
            m2 += p;
            m4 += p * p;
        }
        m2 /= trials as f64;
        m4 /= trials as f64;
        let nf = n as f64;
        assert!((m2 - 1.0 / nf).abs() < 5e-3, "n={n} m2={m2}");
        assert!((m4 - 2.0 / (nf * (nf + 1.0))).abs() < 5e-3, "n={n} m4={m4}");
    }
}

#[test]
fn dirichlet_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = 4;
    let mut acc = vec![0.0; k];
    let trials = 100_000;
    for _ in 0..trials {
        for (a, p) in acc.iter_mut().zip(ensemble::random_simplex_point(&mut rng, k)) {
            *a += p;
        }
    }
    assert!(acc.iter().all(|a| (a / trials as f64 - 0.25).abs() < 3e-3));
}

#[test]
fn power_identity_small_case() {
    // n = 2, q = 2: 1/(x1 - x2) + 1/(x2 - x1) = 0.
    let x = Spectrum::new(vec![0.7, 0.3]).unwrap();
    let r = calculus::power_identity_residual(&x, 2).unwrap();
    assert!(r.sum.abs() <= 1e-12 * r.scale);
}

#[test]
fn phase_formula_against_curve() {
    let p = PhaseParams {
        r: [0.3, 0.25, 0.2, 0.35, 0.15, 0.3],
        u: FRAC_PI_2,
        v: FRAC_PI_2,
        w: FRAC_PI_2,
        probs: [0.4, 0.3, 0.2, 0.1],
    };
    for d in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.3, -0.5, 0.8]] {
        let formula = explorer::ds3_dx_formula(&p, d).unwrap();
        let fd = explorer::ds3_dx_finite_difference(&p, d, 1e-5).unwrap();
        assert!(close(fd, formula, 1e-5), "{d:?}: {fd} vs {formula}");
    }
}

#[test]
fn hermite_gennochi_matches_table() {
    let x = Spectrum::new(vec![0.45, 0.35, 0.2]).unwrap();
    for q in 2..=3 {
        let (mean, se) = calculus::hermite_gennochi_estimate(&x, q, 100_000, 21).unwrap();
        let exact = calculus::ds_ds(&x, q).unwrap();
        assert!((mean - exact).abs() <= 4.0 * se, "q={q}: {mean} +- {se} vs {exact}");
    }
}

#[test]
fn kernel_derivative_sign_grid() {
    for n in 2..=8usize {
        for q in 2..=n {
            for i in 1..1000 {
                let x = i as f64 / 1000.0;
                let d = calculus::xm_logx_derivative((n - q) as u32, n - 1, x).unwrap();
                let signed = if q % 2 == 0 { d } else { -d };
                assert!(signed > 0.0, "n={n} q={q} x={x}");
            }
        }
    }
    assert_eq!(math::binomial(10, 3), Some(120));
}
