//! Queen contiguity from polygons, plus the edge-list round trip.
//!
//! ```text
//! cargo run --example queen_contiguity
//! ```

use std::collections::BTreeMap;

use nb2::region_graph::{
    parse_geojson, queen_contiguity, regions_from_polygons, write_edges, Polygon, DEFAULT_SNAP_DEGREES,
};

fn main() -> nb2::Result<()> {
    // 3x3 block of unit squares: the center touches all eight others,
    // corners touch three
    let mut polygons = BTreeMap::new();
    for r in 0..3 {
        for c in 0..3 {
            let (x, y) = (-100.0 + c as f64, 40.0 + r as f64);
            polygons.insert(format!("{r}{c}"), vec![Polygon::rect(x, y, x + 1.0, y + 1.0)]);
        }
    }
    let regions = regions_from_polygons(&polygons)?;
    let graph = queen_contiguity(regions, &polygons, DEFAULT_SNAP_DEGREES)?;
    for id in ["00", "01", "11"] {
        println!("{id}: {:?}", graph.neighbor_ids(id).unwrap());
    }
    println!(
        "{} edges, {} component(s)",
        graph.edge_count(),
        graph.connected_components()
    );

    // the same from GeoJSON; two squares meeting at a single corner are still neighbors
    let geojson = r#"{"type": "FeatureCollection", "features": [
      {"type": "Feature", "properties": {"GEOID": "a"},
       "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
      {"type": "Feature", "properties": {"GEOID": "b"},
       "geometry": {"type": "Polygon", "coordinates": [[[1,1],[2,1],[2,2],[1,2],[1,1]]]}},
      {"type": "Feature", "properties": {"GEOID": "island"},
       "geometry": {"type": "Polygon", "coordinates": [[[5,5],[6,5],[6,6],[5,6],[5,5]]]}}
    ]}"#;
    let shapes = parse_geojson(geojson, "GEOID")?;
    let graph = queen_contiguity(regions_from_polygons(&shapes)?, &shapes, DEFAULT_SNAP_DEGREES)?;
    println!("isolated: {:?}", graph.isolated_ids());

    println!("edge list:");
    write_edges(&graph, std::io::stdout())
}
