//! Ranks codes three ways and summarizes variogram properties of the top N.
//!
//! ```text
//! cargo run --example ranking_report
//! ```

use nb2::ranker::{category_summary, rank, top_n_curve, CodeStatistics, Method};
use nb2::VariogramModel;

fn code(code: &str, category: &str, t: f64, odds: f64, moran: f64, range_km: f64, sill: f64) -> CodeStatistics {
    let mut model = VariogramModel::new(0.1, sill, range_km / 3.0);
    model.converged = true;
    CodeStatistics {
        code: code.into(),
        name: None,
        category: Some(category.into()),
        nb2_t: Some(t),
        nb2_odds: Some(odds),
        moran: Some(moran),
        variogram: Some(model),
    }
}

fn main() -> nb2::Result<()> {
    let stats = vec![
        code("250", "endocrine", 22.0, 1.9, 0.61, 450.0, 0.30),
        code("401", "circulatory", 9.5, 0.8, 0.35, 900.0, 0.12),
        code("493", "respiratory", 15.2, 1.1, 0.44, 300.0, 0.41),
        code("714", "musculoskeletal", 3.1, 0.2, 0.08, 150.0, 0.55),
        code("715", "musculoskeletal", 11.0, 1.4, 0.52, 1200.0, 0.09),
        code("780", "symptoms", 5.3, 0.4, 0.15, 200.0, 0.60),
    ];
    let table = rank(&stats)?;
    table.write(std::io::stdout())?;

    for m in Method::ALL {
        for p in top_n_curve(&table, m, &[2, 4, 6]) {
            println!(
                "{m:>8} top {}: range {:.0} km, sill {:.3}",
                p.n, p.mean_range_km, p.mean_sill
            );
        }
    }
    for c in category_summary(&table) {
        println!("{}: {} codes, median range {:.0} km", c.category, c.count, c.median);
    }
    Ok(())
}
