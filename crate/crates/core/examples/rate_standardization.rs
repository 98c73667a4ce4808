//! Crude and age/gender-adjusted incidence rates, and the coverage filter.
//!
//! ```text
//! cargo run --example rate_standardization
//! ```

use nb2::rates::{
    adjusted_rate, build_rate_field, crude_rate, Coverage, Gender, RateOptions, StandardPopulation, StratifiedCounts,
    Stratum, STRATA,
};
use nb2::synth::Lattice;

fn main() -> nb2::Result<()> {
    // 5 cases among 1,000 records over 8 years
    println!("crude: {:?} per 100,000 person-years", crude_rate(5, 1000, 8.0));

    // two strata holding a quarter and three quarters of the standard population
    let mut pop = [0; STRATA];
    pop[Stratum::new(1, Gender::F).unwrap().index()] = 250;
    pop[Stratum::new(1, Gender::M).unwrap().index()] = 750;
    let std = StandardPopulation::new(pop)?;
    let mut crude = [None; STRATA];
    crude[Stratum::new(1, Gender::F).unwrap().index()] = Some(100.0);
    crude[Stratum::new(1, Gender::M).unwrap().index()] = Some(200.0);
    println!("adjusted: {:?}", adjusted_rate(&crude, &std, false));

    // a 3x4 lattice where code "250" is recorded in 8 of 12 regions
    let graph = Lattice::new(3, 4, 0.5).graph()?;
    let mut counts = StratifiedCounts::new();
    for (k, r) in graph.regions().iter().enumerate() {
        for s in Stratum::all() {
            counts.set_total(&r.id, s, 10_000);
            if k < 8 {
                counts.set_cases("250", &r.id, s, 1 + k as u64)?;
            }
        }
    }
    let uniform = StandardPopulation::uniform();
    for threshold in [2.0 / 3.0, 0.75] {
        let opts = RateOptions {
            coverage_threshold: threshold,
            ..RateOptions::default()
        };
        match build_rate_field(&counts, &uniform, "250", &graph, &opts)? {
            Coverage::Accepted(f) => println!(
                "threshold {threshold:.3}: accepted, {} regions, first log rate {:.4}",
                f.observed_count(),
                f.values.values().next().unwrap()
            ),
            Coverage::Rejected { fraction, .. } => println!("threshold {threshold:.3}: rejected at {fraction:.3}"),
        }
    }
    Ok(())
}
