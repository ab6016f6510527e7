use ensemble_vol_core::calculus::{self, divided, XPowLog};
use ensemble_vol_core::ensemble::{self, random_ensemble, ProbMode};
use ensemble_vol_core::linalg;
use ensemble_vol_core::spectral::{self, Spectrum};
use ensemble_vol_core::volumes::{self, SubsetIndex};
use proptest::prelude::*;

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Probability spectrum with minimum `floor` and pairwise gaps at least `gap`.
fn spread_spectrum(raw: &[f64], floor: f64, gap: f64) -> Option<Spectrum> {
    let total: f64 = raw.iter().sum();
    let mut v: Vec<f64> = raw.iter().map(|r| r / total).collect();
    v = sorted_desc(v);
    if v.last().copied()? < floor || v.windows(2).any(|w| w[0] - w[1] < gap) {
        return None;
    }
    Spectrum::new(v).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruction_round_trip(seed in any::<u64>(), k in 1usize..6, n in 1usize..5) {
        let e = random_ensemble(k, n, &ProbMode::Dirichlet, seed).unwrap();
        let a = ensemble::overlap_matrix(&e);
        let back = ensemble::ensemble_from_overlaps(&a, e.probs()).unwrap();
        let a2 = ensemble::overlap_matrix(&back);
        prop_assert!((a.as_matrix() - a2.as_matrix()).norm() < 1e-9);
        prop_assert!(back.dimension() <= n.min(k));
        let s1 = spectral::von_neumann_entropy(&calculus::ensemble_spectrum(&e).unwrap());
        let s2 = spectral::von_neumann_entropy(&calculus::ensemble_spectrum(&back).unwrap());
        prop_assert!((s1 - s2).abs() < 1e-9);
    }

    #[test]
    fn gram_and_density_share_spectrum(seed in any::<u64>(), k in 1usize..7, n in 1usize..6) {
        let e = random_ensemble(k, n, &ProbMode::Dirichlet, seed).unwrap();
        let g = sorted_desc(linalg::hermitian_eigenvalues(ensemble::gram_matrix(&e).as_matrix()));
        let r = sorted_desc(linalg::hermitian_eigenvalues(&ensemble::density_matrix(&e)));
        let m = k.min(n);
        for i in 0..m {
            prop_assert!((g[i] - r[i]).abs() < 1e-10);
        }
        prop_assert!(g[m..].iter().chain(&r[m..]).all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn phases_leave_invariants_alone(seed in any::<u64>(), k in 2usize..6, n in 2usize..5, t in proptest::collection::vec(-6.3f64..6.3, 6)) {
        let e = random_ensemble(k, n, &ProbMode::Dirichlet, seed).unwrap();
        let f = e.with_phases(&t[..k]);
        let va = volumes::ensemble_alphas(&e).unwrap();
        let vb = volumes::ensemble_alphas(&f).unwrap();
        for ((u, a), (_, b)) in va.iter().zip(vb.iter()) {
            prop_assert!((a - b).abs() < 1e-12, "{}", u);
        }
        let sa = spectral::von_neumann_entropy(&calculus::ensemble_spectrum(&e).unwrap());
        let sb = spectral::von_neumann_entropy(&calculus::ensemble_spectrum(&f).unwrap());
        prop_assert!((sa - sb).abs() < 1e-12);
    }

    #[test]
    fn volume_route_matches_spectrum(seed in any::<u64>(), k in 1usize..8, n in 1usize..6) {
        let e = random_ensemble(k, n, &ProbMode::Dirichlet, seed).unwrap();
        let v = volumes::ensemble_alphas(&e).unwrap();
        let s_alpha = volumes::symmetric_polys_from_alphas(&v, e.probs()).unwrap();
        let s_spec = spectral::symmetric_polys(&calculus::ensemble_spectrum(&e).unwrap());
        for q in 0..=n {
            prop_assert!((s_alpha.get(q) - s_spec.get(q)).abs() <= 1e-9 * s_spec.get(q).abs().max(1e-3));
        }
    }

    #[test]
    fn alphas_lie_in_unit_interval(seed in any::<u64>(), k in 2usize..7, n in 2usize..5) {
        let e = random_ensemble(k, n, &ProbMode::Uniform, seed).unwrap();
        for (_, a) in volumes::ensemble_alphas(&e).unwrap().iter() {
            prop_assert!(a > -1e-12 && a < 1.0 + 1e-12);
        }
    }

    #[test]
    fn roots_round_trip(raw in proptest::collection::vec(0.05f64..1.0, 2..7)) {
        let Some(x) = spread_spectrum(&raw, 1e-3, 1e-3) else { return Ok(()) };
        let s = spectral::symmetric_polys(&x);
        let back = spectral::roots_from_symmetric_polys(&s).unwrap();
        for (a, b) in x.values().iter().zip(back.values()) {
            prop_assert!((a - b).abs() < 1e-8, "{:?} vs {:?}", x.values(), back.values());
        }
    }

    #[test]
    fn divided_difference_is_symmetric(raw in proptest::collection::vec(0.01f64..1.0, 2..7), m in 0u32..6, rot in 0usize..6) {
        let f = XPowLog::xm_logx(m);
        let base = divided::divided_difference(&f, &raw).unwrap();
        let mut perm = raw.clone();
        perm.rotate_left(rot % raw.len());
        perm.reverse();
        let other = divided::divided_difference(&f, &perm).unwrap();
        prop_assert!((base - other).abs() <= 1e-7 * base.abs().max(1.0));
    }

    #[test]
    fn volume_derivatives_positive(seed in any::<u64>(), k in 2usize..6, n in 2usize..5) {
        let e = random_ensemble(k, n, &ProbMode::Dirichlet, seed).unwrap();
        let x = calculus::ensemble_spectrum(&e).unwrap();
        let top = n.min(k);
        for size in 2..=top {
            if size == x.len() && x.min() < 1e-12 {
                continue;
            }
            for labels in volumes::subsets(k, size) {
                let u = SubsetIndex::new(labels, k).unwrap();
                let d = match volumes::ds_dalpha(&e, &u) {
                    Ok(d) => d,
                    Err(ensemble_vol_core::Error::ZeroEigenvalue) => continue,
                    Err(other) => panic!("{other}"),
                };
                prop_assert!(d > 0.0, "{} {}", u, d);
            }
        }
    }

    #[test]
    fn theorem_one_bound(raw in proptest::collection::vec(0.05f64..1.0, 2..7)) {
        let Some(x) = spread_spectrum(&raw, 1e-4, 1e-4) else { return Ok(()) };
        let n = x.len();
        for q in 2..=n {
            let d = calculus::ds_ds(&x, q).unwrap();
            prop_assert!(d > 0.0);
            prop_assert!(d >= calculus::lower_bound_ds_ds(n, q).unwrap() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn chain_rule_agrees(raw in proptest::collection::vec(0.05f64..1.0, 2..6)) {
        let Some(x) = spread_spectrum(&raw, 1e-2, 1e-2) else { return Ok(()) };
        for q in 2..=x.len() {
            let a = calculus::ds_ds(&x, q).unwrap();
            let b = calculus::ds_ds_chain_rule(&x, q).unwrap();
            prop_assert!((a - b).abs() <= 1e-8 * a);
        }
    }
}
