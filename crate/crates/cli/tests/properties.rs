use ensemble_vol::format::{self, sig12};
use ensemble_vol::io::EnsembleFile;
use ensemble_vol::{report, table};
use ensemble_vol_core::ensemble::random_ensemble;
use ensemble_vol_core::geometry::dof_table;
use ensemble_vol_core::ProbMode;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sig12_is_idempotent_and_close(x in prop::num::f64::NORMAL) {
        let r = sig12(x);
        prop_assert_eq!(sig12(r), r);
        prop_assert!(((r - x) / x).abs() <= 5e-12);
    }

    #[test]
    fn ensemble_file_round_trip(k in 1usize..6, n in 1usize..5, seed: u64) {
        let e = random_ensemble(k, n, &ProbMode::Dirichlet, seed).unwrap();
        let text = serde_json::to_string(&EnsembleFile::from_ensemble(&e)).unwrap();
        let back = EnsembleFile::parse(&text).unwrap().to_ensemble(false).unwrap();
        prop_assert_eq!(back.probs(), e.probs());
        prop_assert_eq!(EnsembleFile::from_ensemble(&back), EnsembleFile::from_ensemble(&e));
    }

    #[test]
    fn analyze_routes_agree(k in 1usize..6, n in 1usize..5, seed: u64) {
        let e = random_ensemble(k, n, &ProbMode::Dirichlet, seed).unwrap();
        let doc = report::analyze(&e, false).unwrap();
        prop_assert!(doc["symmetric_polys"]["max_discrepancy"].as_f64().unwrap() <= 1e-9);
        let s = doc["entropy"]["nats"].as_f64().unwrap();
        prop_assert!(s >= 0.0 && s <= (k.min(n) as f64).ln() + 1e-9);
        // Rendering is a pure function of the document.
        prop_assert_eq!(format::render(&doc), format::render(&report::analyze(&e, false).unwrap()));
    }

    #[test]
    fn table_has_one_row_per_pair(k_max in 2u32..12) {
        let rows = dof_table(k_max).unwrap();
        let text = table::rows_text(&rows);
        prop_assert_eq!(text.lines().count() as u32, k_max * (k_max - 1) / 2);
        let grid = table::grid_text(&rows);
        prop_assert_eq!(grid.lines().count() as u32, k_max);
    }
}
