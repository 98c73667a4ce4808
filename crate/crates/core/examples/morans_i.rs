//! Moran's I under binary and row-standardized weights.
//!
//! ```text
//! cargo run --example morans_i
//! ```

use nb2::synth::{generate, Axis, FieldKind, Lattice, SyntheticFieldSpec};
use nb2::{morans_i, WeightScheme};

fn main() -> nb2::Result<()> {
    let lattice = Lattice::new(12, 12, 0.5);
    let graph = lattice.graph()?;
    // queen neighbors include the diagonals, which match on a checkerboard,
    // so it lands near zero rather than at -1
    let fields = [
        ("gradient", FieldKind::Gradient { axis: Axis::Lat }),
        ("checkerboard", FieldKind::Checkerboard { cell_deg: 0.5 }),
        (
            "blobs",
            FieldKind::GaussianBlobs {
                count: 3,
                width_km: 80.0,
                amplitude: 1.0,
            },
        ),
    ];
    for (code, kind) in fields {
        let f = generate(&SyntheticFieldSpec::new(code, kind, 4), graph.regions())?;
        let b = morans_i(&f, &graph, WeightScheme::Binary)?;
        let r = morans_i(&f, &graph, WeightScheme::RowStandardized)?;
        println!("{code:>12}: I = {:7.4} (binary), {:7.4} (row)", b.i, r.i);
    }
    Ok(())
}
