//! How much NB2 statistics move between M = 100 and M = 1000.
//!
//! ```text
//! cargo run --release --example stability
//! ```

use nb2::nb2::{compare_statistics, nb2_both};
use nb2::synth::{corpus, FieldKind, Lattice, SyntheticFieldSpec};
use nb2::Nb2Config;

fn main() -> nb2::Result<()> {
    let graph = Lattice::new(20, 30, 0.3).graph()?;
    let specs: Vec<_> = (0..10)
        .map(|k| {
            SyntheticFieldSpec::new(
                format!("f{k}"),
                FieldKind::ExponentialGp {
                    length_km: 100.0,
                    sill: 1.0,
                },
                5,
            )
            .with_nugget(0.05 * 20f64.powf(k as f64 / 9.0))
        })
        .collect();
    let fields = corpus(&specs, graph.regions())?;

    let mut runs = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for f in &fields {
        let code = f.field.code.clone();
        for (slot, (m, seed)) in [(1000, 1), (100, 2)].into_iter().enumerate() {
            let (t, odds) = nb2_both(
                &f.field,
                &graph,
                &Nb2Config {
                    repetitions: m,
                    master_seed: seed,
                    ..Default::default()
                },
            )?;
            runs[slot].push((code.clone(), t.statistic));
            runs[slot + 2].push((code.clone(), odds.statistic));
        }
    }
    for (name, reference, other) in [("nb2_t", &runs[0], &runs[1]), ("nb2_odds", &runs[2], &runs[3])] {
        let r = compare_statistics(reference, other);
        println!(
            "{name}: {} codes, mean relative difference {:.2}%, max {:.2}%, ranks identical {}",
            r.codes,
            100.0 * r.mean_relative_difference,
            100.0 * r.max_relative_difference,
            r.rank_identical
        );
    }
    Ok(())
}
