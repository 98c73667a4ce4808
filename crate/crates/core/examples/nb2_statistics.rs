//! Both NB2 statistics on a clustered field and on a shuffled copy.
//!
//! ```text
//! cargo run --release --example nb2_statistics
//! ```

use nb2::nb2::nb2_both;
use nb2::synth::{generate, permute, FieldKind, Lattice, SyntheticFieldSpec};
use nb2::Nb2Config;

fn main() -> nb2::Result<()> {
    let graph = Lattice::new(20, 30, 0.3).graph()?;
    let spec = SyntheticFieldSpec::new(
        "gp",
        FieldKind::ExponentialGp {
            length_km: 150.0,
            sill: 1.0,
        },
        1,
    )
    .with_nugget(0.2);
    let field = generate(&spec, graph.regions())?;
    let shuffled = permute(&field, 2);

    let cfg = Nb2Config {
        repetitions: 500,
        master_seed: 11,
        ..Default::default()
    };
    for f in [&field, &shuffled] {
        let (t, odds) = nb2_both(f, &graph, &cfg)?;
        println!(
            "{:>8}: nb2_t {:7.3}  nb2_odds {:7.4}  (N = {}, M = {}, flags [{}])",
            if std::ptr::eq(f, &field) {
                "clustered"
            } else {
                "shuffled"
            },
            t.statistic,
            odds.statistic,
            t.n_effective,
            t.repetitions,
            t.flag_string()
        );
    }

    // same seed, same numbers, whatever the thread count
    let again = nb2_both(&field, &graph, &Nb2Config { threads: 1, ..cfg })?;
    println!(
        "repeatable: {}",
        again.0.statistic == nb2_both(&field, &graph, &cfg)?.0.statistic
    );
    Ok(())
}
