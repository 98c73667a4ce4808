//! Queen contiguity from polygon boundaries.
//!
//! Two regions are neighbors when their boundaries share at least one point.
//! Coordinates are snapped to an integer grid first, so the shared-point test
//! is exact: shared vertices are found through a hash of snapped vertices, and
//! a vertex of one region lying in the interior of another region's boundary
//! segment (a T-junction) is found with an integer cross product.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};

use super::{NeighborGraph, Region, RegionSet};

/// Default snapping grid, in coordinate units (degrees for lon/lat input).
pub const DEFAULT_SNAP_DEGREES: f64 = 1e-9;

/// One polygon: an exterior ring followed by any holes. Points are `[x, y]`,
/// i.e. `[lon, lat]` for geographic input.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub rings: Vec<Vec<[f64; 2]>>,
}

impl Polygon {
    pub fn new(exterior: Vec<[f64; 2]>) -> Self {
        Polygon { rings: vec![exterior] }
    }

    /// Axis-aligned rectangle as a closed ring.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Polygon::new(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]])
    }
}

/// All parts of one region's geometry.
pub type RegionGeometry = Vec<Polygon>;

type Snapped = (i64, i64);

struct Shape {
    bbox: [i64; 4],
    vertices: Vec<Snapped>,
    segments: Vec<(Snapped, Snapped)>,
}

fn snap(p: [f64; 2], grid: f64) -> Snapped {
    ((p[0] / grid).round() as i64, (p[1] / grid).round() as i64)
}

fn build_shape(id: &str, geometry: &RegionGeometry, grid: f64) -> Result<Shape> {
    if geometry.is_empty() {
        return Err(Error::DegenerateGeometry(id.to_string()));
    }
    let mut vertices = Vec::new();
    let mut segments = Vec::new();
    for polygon in geometry {
        let Some(exterior) = polygon.rings.first() else {
            return Err(Error::DegenerateGeometry(id.to_string()));
        };
        let distinct: HashSet<Snapped> = exterior.iter().map(|&p| snap(p, grid)).collect();
        if distinct.len() < 3 {
            return Err(Error::DegenerateGeometry(id.to_string()));
        }
        for ring in &polygon.rings {
            let pts: Vec<Snapped> = ring.iter().map(|&p| snap(p, grid)).collect();
            for k in 0..pts.len() {
                let a = pts[k];
                let b = pts[(k + 1) % pts.len()];
                vertices.push(a);
                if a != b {
                    segments.push((a, b));
                }
            }
        }
    }
    vertices.sort_unstable();
    vertices.dedup();
    let mut bbox = [i64::MAX, i64::MAX, i64::MIN, i64::MIN];
    for &(x, y) in &vertices {
        bbox[0] = bbox[0].min(x);
        bbox[1] = bbox[1].min(y);
        bbox[2] = bbox[2].max(x);
        bbox[3] = bbox[3].max(y);
    }
    Ok(Shape {
        bbox,
        vertices,
        segments,
    })
}

fn on_segment(p: Snapped, (a, b): (Snapped, Snapped)) -> bool {
    let (px, py) = (p.0 as i128, p.1 as i128);
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    let (bx, by) = (b.0 as i128, b.1 as i128);
    let cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    if cross != 0 {
        return false;
    }
    px >= ax.min(bx) && px <= ax.max(bx) && py >= ay.min(by) && py <= ay.max(by)
}

fn in_box(p: Snapped, b: &[i64; 4]) -> bool {
    p.0 >= b[0] && p.0 <= b[2] && p.1 >= b[1] && p.1 <= b[3]
}

fn segment_meets_box(s: &(Snapped, Snapped), b: &[i64; 4]) -> bool {
    let (lo_x, hi_x) = (s.0 .0.min(s.1 .0), s.0 .0.max(s.1 .0));
    let (lo_y, hi_y) = (s.0 .1.min(s.1 .1), s.0 .1.max(s.1 .1));
    lo_x <= b[2] && hi_x >= b[0] && lo_y <= b[3] && hi_y >= b[1]
}

fn touches_by_junction(a: &Shape, b: &Shape) -> bool {
    let overlap = [
        a.bbox[0].max(b.bbox[0]),
        a.bbox[1].max(b.bbox[1]),
        a.bbox[2].min(b.bbox[2]),
        a.bbox[3].min(b.bbox[3]),
    ];
    let one_way = |p: &Shape, q: &Shape| {
        let segs: Vec<_> = q.segments.iter().filter(|s| segment_meets_box(s, &overlap)).collect();
        p.vertices
            .iter()
            .filter(|&&v| in_box(v, &overlap))
            .any(|&v| segs.iter().any(|&&s| on_segment(v, s)))
    };
    one_way(a, b) || one_way(b, a)
}

/// Builds the Queen-contiguity graph over `regions` from their polygons.
///
/// Every region needs a geometry and every geometry a region. `snap` is the
/// coordinate grid used for the exact shared-point test.
pub fn queen_contiguity(
    regions: RegionSet,
    polygons: &BTreeMap<String, RegionGeometry>,
    snap: f64,
) -> Result<NeighborGraph> {
    if !(snap > 0.0) {
        return Err(Error::Config(format!("snap grid must be positive, got {snap}")));
    }
    if let Some(id) = polygons.keys().find(|id| regions.index_of(id).is_none()) {
        return Err(Error::Geometry(format!("polygon for unknown region `{id}`")));
    }
    let shapes = regions
        .iter()
        .map(|r| {
            let geometry = polygons
                .get(&r.id)
                .ok_or_else(|| Error::Geometry(format!("no polygon for region `{}`", r.id)))?;
            build_shape(&r.id, geometry, snap)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut by_vertex: HashMap<Snapped, Vec<usize>> = HashMap::new();
    for (i, s) in shapes.iter().enumerate() {
        for &v in &s.vertices {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for owners in by_vertex.values() {
        for (k, &a) in owners.iter().enumerate() {
            for &b in &owners[k + 1..] {
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }

    // Sweep over bounding boxes for T-junction contacts.
    let mut order: Vec<usize> = (0..shapes.len()).collect();
    order.sort_by_key(|&i| shapes[i].bbox[0]);
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if shapes[b].bbox[0] > shapes[a].bbox[2] {
                break;
            }
            let (lo, hi) = (a.min(b), a.max(b));
            if edges.contains(&(lo, hi)) {
                continue;
            }
            let (sa, sb) = (&shapes[a].bbox, &shapes[b].bbox);
            if sa[1] > sb[3] || sb[1] > sa[3] {
                continue;
            }
            if touches_by_junction(&shapes[a], &shapes[b]) {
                edges.insert((lo, hi));
            }
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    NeighborGraph::from_index_edges(regions, edges)
}

fn parse_ring(v: &Value) -> Result<Vec<[f64; 2]>> {
    let pts = v
        .as_array()
        .ok_or_else(|| Error::Geometry("ring is not an array".into()))?;
    pts.iter()
        .map(|p| {
            let xy = p.as_array().filter(|a| a.len() >= 2);
            match xy.map(|a| (a[0].as_f64(), a[1].as_f64())) {
                Some((Some(x), Some(y))) => Ok([x, y]),
                _ => Err(Error::Geometry(format!("bad position {p}"))),
            }
        })
        .collect()
}

fn parse_polygon(v: &Value) -> Result<Polygon> {
    let rings = v
        .as_array()
        .ok_or_else(|| Error::Geometry("polygon is not an array of rings".into()))?;
    Ok(Polygon {
        rings: rings.iter().map(parse_ring).collect::<Result<_>>()?,
    })
}

fn parse_geometry(g: &Value) -> Result<Vec<Polygon>> {
    let coords = &g["coordinates"];
    match g["type"].as_str() {
        Some("Polygon") => Ok(vec![parse_polygon(coords)?]),
        Some("MultiPolygon") => coords
            .as_array()
            .ok_or_else(|| Error::Geometry("MultiPolygon coordinates not an array".into()))?
            .iter()
            .map(parse_polygon)
            .collect(),
        other => Err(Error::Geometry(format!(
            "unsupported geometry type {other:?} (need Polygon or MultiPolygon)"
        ))),
    }
}

/// Parses a GeoJSON FeatureCollection, keyed by the `id_property` of each
/// feature. Features sharing an id are merged into one multipart geometry.
pub fn parse_geojson(text: &str, id_property: &str) -> Result<BTreeMap<String, RegionGeometry>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Geometry(format!("invalid JSON: {e}")))?;
    if doc["type"] != "FeatureCollection" {
        return Err(Error::Geometry("expected a FeatureCollection".into()));
    }
    let features = doc["features"]
        .as_array()
        .ok_or_else(|| Error::Geometry("missing `features` array".into()))?;
    let mut out: BTreeMap<String, RegionGeometry> = BTreeMap::new();
    for (k, f) in features.iter().enumerate() {
        let id = match &f["properties"][id_property] {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(Error::Geometry(format!("feature {k} has no `{id_property}` property"))),
        };
        let parts = parse_geometry(&f["geometry"])?;
        out.entry(id).or_default().extend(parts);
    }
    Ok(out)
}

pub fn read_geojson(path: &Path, id_property: &str) -> Result<BTreeMap<String, RegionGeometry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_geojson(&text, id_property)
}

/// Signed area and area centroid of a closed ring (shoelace).
fn ring_moments(ring: &[[f64; 2]]) -> (f64, f64, f64) {
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for k in 0..ring.len() {
        let [x0, y0] = ring[k];
        let [x1, y1] = ring[(k + 1) % ring.len()];
        let c = x0 * y1 - x1 * y0;
        a += c;
        cx += (x0 + x1) * c;
        cy += (y0 + y1) * c;
    }
    (a / 2.0, cx / 6.0, cy / 6.0)
}

/// Regions located at the area centroids of their exterior rings, with zero
/// population. Useful when only polygons are available.
pub fn regions_from_polygons(polygons: &BTreeMap<String, RegionGeometry>) -> Result<RegionSet> {
    let regions = polygons
        .iter()
        .map(|(id, parts)| {
            let (mut area, mut mx, mut my) = (0.0, 0.0, 0.0);
            for p in parts {
                if let Some(ring) = p.rings.first() {
                    let (a, cx, cy) = ring_moments(ring);
                    area += a;
                    mx += cx;
                    my += cy;
                }
            }
            if area.abs() < f64::EPSILON {
                return Err(Error::DegenerateGeometry(id.clone()));
            }
            Ok(Region::new(id.clone(), my / area, mx / area))
        })
        .collect::<Result<Vec<_>>>()?;
    RegionSet::new(regions)
}
