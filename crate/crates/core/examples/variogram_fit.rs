//! Empirical semivariogram and exponential fit for a field with known range.
//!
//! ```text
//! cargo run --release --example variogram_fit
//! ```

use nb2::pipeline::{fit_variogram, VariogramSettings};
use nb2::synth::{generate, scatter_regions, FieldKind, SyntheticFieldSpec};

fn main() -> nb2::Result<()> {
    let regions = scatter_regions(800, (30.0, 45.0), (-110.0, -85.0), 3)?;
    let a = 120.0;
    let spec = SyntheticFieldSpec::new(
        "gp",
        FieldKind::ExponentialGp {
            length_km: a,
            sill: 0.8,
        },
        9,
    )
    .with_nugget(0.2);
    let field = generate(&spec, &regions)?;

    let (emp, model) = fit_variogram(&field, &regions, &VariogramSettings::default())?;
    println!("{:>9} {:>9} {:>9} {:>7}", "lag_km", "gamma", "model", "pairs");
    for b in emp.bins.iter().step_by(4) {
        println!(
            "{:9.1} {:9.4} {:9.4} {:7}",
            b.lag_km,
            b.semivariance,
            model.gamma(b.lag_km),
            b.pairs
        );
    }
    println!(
        "nugget {:.3}, sill {:.3}, practical range {:.0} km (true {:.0}), converged {}",
        model.nugget,
        model.sill,
        model.practical_range_km,
        3.0 * a,
        model.converged
    );
    Ok(())
}
