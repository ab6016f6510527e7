//! Parallel drivers for the explorer searches and their report documents.

use ensemble_vol_core::explorer::{
    self, CounterexampleReport, NonmonotonicityWitness, SearchOutcome, SHARDS,
};
use ensemble_vol_core::Error;
use rayon::prelude::*;
use serde_json::Value;

use crate::format::{self, num, nums, opt, Doc};
use crate::io::EnsembleFile;

/// Runs every shard in parallel. The lowest-index shard holding a witness
/// wins, so the result equals the sequential driver's.
pub fn overlap_entropy_search(k: usize, probs: &[f64], seed: u64, budget: usize) -> Result<SearchOutcome<CounterexampleReport>, Error> {
    let shards: Vec<_> = (0..SHARDS)
        .into_par_iter()
        .map(|s| explorer::overlap_entropy_shard(k, probs, seed, s, explorer::shard_budget(budget, s)))
        .collect::<Result<_, _>>()?;
    let mut spent = 0;
    for (s, found) in shards.into_iter().enumerate() {
        if let Some((mut report, used)) = found {
            report.evaluations = spent + used;
            return Ok(SearchOutcome::Found(report));
        }
        spent += explorer::shard_budget(budget, s);
    }
    Ok(SearchOutcome::Exhausted { candidates: spent, seed })
}

/// Three states in three dimensions at uniform probabilities.
pub fn js_counterexample(seed: u64, budget: usize) -> Result<SearchOutcome<CounterexampleReport>, Error> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    overlap_entropy_search(3, &[1.0 / 3.0; 3], seed, budget)
}

/// Embedded ensembles keep full precision so the pair re-verifies exactly.
fn ensemble_value(e: &ensemble_vol_core::Ensemble) -> Value {
    serde_json::to_value(EnsembleFile::from_ensemble(e)).expect("plain data")
}

pub fn counterexample_document(r: &CounterexampleReport, bits: bool) -> Value {
    Doc::new()
        .put("kind", "js-counterexample")
        .put("found", true)
        .put("seed", r.seed)
        .put("evaluations", r.evaluations)
        .put("verified", explorer::verify_counterexample(r))
        .put("base", ensemble_value(&r.base))
        .put("perturbed", ensemble_value(&r.perturbed))
        .put("base_overlaps", nums(&r.base_overlaps))
        .put("perturbed_overlaps", nums(&r.perturbed_overlaps))
        .put("base_entropy", format::entropy(r.base_entropy, bits))
        .put("perturbed_entropy", format::entropy(r.perturbed_entropy, bits))
        .put("entropy_increase", num(r.perturbed_entropy - r.base_entropy))
        .build()
}

pub fn nonmonotone_document(w: &NonmonotonicityWitness, bits: bool) -> Value {
    let p = &w.params;
    let pairs = Doc::new()
        .put("12", num(p.r[0]))
        .put("13", num(p.r[1]))
        .put("14", num(p.r[2]))
        .put("23", num(p.r[3]))
        .put("24", num(p.r[4]))
        .put("34", num(p.r[5]));
    let d = &w.derivative;
    let derivatives = Doc::new()
        .put("ds2_dx", num(d.ds_dx[0]))
        .put("ds3_dx", num(d.ds_dx[1]))
        .put("ds4_dx", num(d.ds_dx[2]))
        .put("dS_ds", nums(&d.ds_dsq))
        .put("dS_dx_chain_rule", num(d.chain))
        .put("dS_dx_finite_difference", num(d.direct));
    let reconstructed = explorer::ensemble_from_phase_params(p)
        .map(|e| ensemble_value(&e))
        .unwrap_or(Value::Null);
    Doc::new()
        .put("kind", "nonmonotone")
        .put("found", true)
        .put("seed", w.seed)
        .put("candidates", w.candidates)
        .put("r", pairs.build())
        .put("u", num(p.u))
        .put("v", num(p.v))
        .put("w", num(p.w))
        .put("probs", nums(&p.probs))
        .put("small_probability_state", w.small_index + 1)
        .put("direction", nums(&w.direction))
        .put("derivatives", derivatives.build())
        .put("entropy", format::entropy(w.entropy_base, bits))
        .put("entropy_after_step", format::entropy(w.entropy_step, bits))
        .put("step", num(explorer::CURVE_STEP))
        .put("uniform_probs_chain_rule", opt(w.uniform_chain))
        .put("ensemble", reconstructed)
        .build()
}

pub fn exhausted_document(kind: &str, seed: u64, budget: usize, candidates: usize) -> Value {
    Doc::new()
        .put("kind", kind)
        .put("found", false)
        .put("seed", seed)
        .put("budget", budget)
        .put("candidates", candidates)
        .build()
}
