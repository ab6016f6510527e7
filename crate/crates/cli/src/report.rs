use ensemble_vol_core::calculus;
use ensemble_vol_core::ensemble::Ensemble;
use ensemble_vol_core::spectral;
use ensemble_vol_core::volumes;
use serde_json::Value;

use crate::format::{self, num, nums, opt, Doc};

/// Largest gap between the volume route and the spectral route to `s`.
pub fn route_discrepancy(volume: &[f64], spectral: &[f64]) -> f64 {
    volume
        .iter()
        .zip(spectral)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Full analysis of one ensemble. Quantities that are undefined for the
/// spectrum at hand (a zero eigenvalue under a logarithm) are `null`.
pub fn analyze(e: &Ensemble, bits: bool) -> Result<Value, ensemble_vol_core::Error> {
    let n = e.dimension();
    let x = calculus::ensemble_spectrum(e)?;
    let s_spec = spectral::symmetric_polys(&x);
    let alphas = volumes::ensemble_alphas(e)?;
    let s_vol = volumes::symmetric_polys_from_alphas(&alphas, e.probs())?;

    let ensemble = Doc::new()
        .put("states", e.len())
        .put("dimension", n)
        .put("span", e.span_dimension())
        .put("probs", nums(e.probs()));

    let mut alpha_doc = Doc::new();
    let mut dalpha_doc = Doc::new();
    for (u, a) in alphas.iter() {
        alpha_doc.insert(u.to_string(), num(a));
        dalpha_doc.insert(u.to_string(), opt(volumes::ds_dalpha(e, u).ok()));
    }

    let mut dsds = Doc::new();
    for q in 2..=n {
        dsds.insert(q.to_string(), opt(calculus::ds_ds(&x, q).ok()));
    }

    let q_val = calculus::subentropy(&x).ok();
    let dt1 = calculus::ds_dt1(&x).ok();
    let residual = match (q_val, dt1) {
        (Some(q), Some(d)) => Some((q - (x.sum() - d / x.sum())).abs()),
        _ => None,
    };

    let polys = Doc::new()
        .put("spectral", nums(s_spec.as_slice()))
        .put("volume", nums(s_vol.as_slice()))
        .put(
            "max_discrepancy",
            num(route_discrepancy(s_vol.as_slice(), s_spec.as_slice())),
        );

    Ok(Doc::new()
        .put("ensemble", ensemble.build())
        .put("spectrum", nums(x.values()))
        .put("entropy", format::entropy(spectral::von_neumann_entropy(&x), bits))
        .put("symmetric_polys", polys.build())
        .put("alpha", alpha_doc.build())
        .put("dS_ds", dsds.build())
        .put("dS_dalpha", dalpha_doc.build())
        .put("subentropy", opt(q_val))
        .put("dS_dt1", opt(dt1))
        .put("subentropy_residual", opt(residual))
        .build())
}
