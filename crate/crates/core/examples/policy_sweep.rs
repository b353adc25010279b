//! Runs the single-dimension sweeps and the staged presets on a desk-scale
//! synthetic campus and prints week-12 campus infections for each.

use campus_core::engine::{run_ensemble, ModelParams, Simulation};
use campus_core::policy::{experiment_presets, sunrise_presets};
use campus_core::synthetic::{generate_synthetic_campus, SyntheticCampusParams};
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let runs: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let campus = generate_synthetic_campus(&SyntheticCampusParams::default(), 2020).expect("campus");
    let base = Simulation::new(Arc::new(campus.network), Default::default(), ModelParams::default());
    for preset in experiment_presets().into_iter().chain(sunrise_presets(84)) {
        let start = Instant::now();
        let sim = base.with_policy(preset.policy);
        let ens = run_ensemble(&sim, runs, 1, 8, &preset.name, &|_| {});
        let (m, ci) = ens.result.campus.at_day(84).unwrap();
        let (a, _) = ens.result.all_sources.at_day(84).unwrap();
        println!("{:<22} campus {m:>8.1} ± {ci:>6.1}   all {a:>8.1}   ({:.2?})", preset.name, start.elapsed());
    }
}
