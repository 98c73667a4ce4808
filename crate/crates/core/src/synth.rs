//! Synthetic regions and log-rate fields with known spatial structure.
//!
//! Fields are generated directly as log rates. [`stratified_counts`] turns a
//! set of fields back into case and record counts when the rate pipeline
//! needs exercising end to end.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nb2::splitmix64;
use crate::rates::{RateField, StratifiedCounts, Stratum};
use crate::region_graph::{NeighborGraph, Polygon, Region, RegionGeometry, RegionSet};
use crate::variogram::haversine_km;

/// Largest region count accepted for dense Gaussian-process draws.
pub const MAX_GP_REGIONS: usize = 5000;
const GP_JITTER: f64 = 1e-10;

/// Square cells on a lon/lat grid, numbered row-major from the south-west
/// corner, optionally truncated to the first `count` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    pub rows: usize,
    pub cols: usize,
    /// Cell side, degrees.
    pub cell_deg: f64,
    pub origin_lat: f64,
    pub origin_lon: f64,
    #[serde(default)]
    pub count: Option<usize>,
}

impl Lattice {
    pub fn new(rows: usize, cols: usize, cell_deg: f64) -> Self {
        Lattice {
            rows,
            cols,
            cell_deg,
            origin_lat: 30.0,
            origin_lon: -110.0,
            count: None,
        }
    }

    /// Roughly county-sized cells (0.45 degrees) covering `count` regions in
    /// rows of 71, the shape used for continental-scale tests.
    pub fn continental(count: usize) -> Self {
        let cols = 71;
        Lattice {
            rows: count.div_ceil(cols),
            cols,
            cell_deg: 0.45,
            origin_lat: 27.0,
            origin_lon: -118.0,
            count: Some(count),
        }
    }

    pub fn len(&self) -> usize {
        self.count.unwrap_or(usize::MAX).min(self.rows * self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn id(row: usize, col: usize) -> String {
        format!("R{row:03}C{col:03}")
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).map(|k| (k / self.cols, k % self.cols))
    }

    pub fn regions(&self) -> Result<RegionSet> {
        RegionSet::new(
            self.cells()
                .map(|(r, c)| Region {
                    id: Self::id(r, c),
                    lat: self.origin_lat + (r as f64 + 0.5) * self.cell_deg,
                    lon: self.origin_lon + (c as f64 + 0.5) * self.cell_deg,
                    population: 10_000,
                    category: None,
                })
                .collect(),
        )
    }

    pub fn polygons(&self) -> BTreeMap<String, RegionGeometry> {
        self.cells()
            .map(|(r, c)| {
                let x = self.origin_lon + c as f64 * self.cell_deg;
                let y = self.origin_lat + r as f64 * self.cell_deg;
                (
                    Self::id(r, c),
                    vec![Polygon::rect(x, y, x + self.cell_deg, y + self.cell_deg)],
                )
            })
            .collect()
    }

    /// Queen contiguity by grid arithmetic; agrees with running the polygon
    /// test on [`Lattice::polygons`].
    pub fn graph(&self) -> Result<NeighborGraph> {
        let regions = self.regions()?;
        let n = self.len();
        let index = |r: usize, c: usize| r * self.cols + c;
        let mut edges = Vec::new();
        for (r, c) in self.cells() {
            let k = index(r, c);
            for (dr, dc) in [(0, 1), (1, -1), (1, 0), (1, 1)] {
                let (rr, cc) = (r as i64 + dr, c as i64 + dc);
                if cc < 0 || cc >= self.cols as i64 {
                    continue;
                }
                let j = index(rr as usize, cc as usize);
                if j < n {
                    edges.push((k, j));
                }
            }
        }
        NeighborGraph::from_index_edges(regions, edges)
    }
}

/// `count` regions with centroids uniform in a lat/lon box.
pub fn scatter_regions(count: usize, lat: (f64, f64), lon: (f64, f64), seed: u64) -> Result<RegionSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RegionSet::new(
        (0..count)
            .map(|k| {
                Region::new(
                    format!("P{k:05}"),
                    rng.random_range(lat.0..lat.1),
                    rng.random_range(lon.0..lon.1),
                )
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    #[default]
    Lat,
    Lon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldKind {
    /// +1 / -1 by parity of the cell index `(row + col)`, cells of
    /// `cell_deg` counted from the south-west-most centroid.
    Checkerboard { cell_deg: f64 },
    /// Position along an axis, scaled to [0, 1].
    Gradient {
        #[serde(default)]
        axis: Axis,
    },
    /// Sum of Gaussian bumps of the given width centered on randomly chosen
    /// regions.
    GaussianBlobs {
        count: usize,
        width_km: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Zero-mean process with covariance `sill * exp(-h / length_km)`.
    ExponentialGp { length_km: f64, sill: f64 },
    /// The base field's values randomly reassigned across regions.
    Permuted { base: Box<SyntheticFieldSpec> },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticFieldSpec {
    pub code: String,
    #[serde(flatten)]
    pub kind: FieldKind,
    /// Variance of independent noise added to every region.
    #[serde(default)]
    pub nugget: f64,
    /// Constant added to every value.
    #[serde(default)]
    pub mean: f64,
    /// Fraction of regions that keep a value; the rest are left unobserved.
    #[serde(default)]
    pub coverage: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Free-form label carried into reports (used as the code's category).
    #[serde(default)]
    pub label: Option<String>,
}

impl SyntheticFieldSpec {
    pub fn new(code: impl Into<String>, kind: FieldKind, seed: u64) -> Self {
        SyntheticFieldSpec {
            code: code.into(),
            kind,
            nugget: 0.0,
            mean: 0.0,
            coverage: None,
            seed,
            label: None,
        }
    }

    pub fn with_nugget(mut self, nugget: f64) -> Self {
        self.nugget = nugget;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_mean(mut self, mean: f64) -> Self {
        self.mean = mean;
        self
    }

    pub fn with_coverage(mut self, coverage: f64) -> Self {
        self.coverage = Some(coverage);
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Generation(format!("{}: {m}", self.code)));
        match &self.kind {
            FieldKind::Checkerboard { cell_deg } if !(*cell_deg > 0.0) => {
                return bad(format!("cell_deg must be positive, got {cell_deg}"))
            }
            FieldKind::GaussianBlobs { count, width_km, .. } if *count == 0 || !(*width_km > 0.0) => {
                return bad("blobs need count >= 1 and a positive width".into())
            }
            FieldKind::ExponentialGp { length_km, sill } if !(*length_km > 0.0) || !(*sill >= 0.0) => {
                return bad("gp needs a positive length and a non-negative sill".into())
            }
            FieldKind::Permuted { base } => base.validate()?,
            _ => {}
        }
        if !(self.nugget >= 0.0) {
            return bad(format!("nugget must be non-negative, got {}", self.nugget));
        }
        if let Some(c) = self.coverage {
            if !(c > 0.0 && c <= 1.0) {
                return bad(format!("coverage {c} outside (0, 1]"));
            }
        }
        Ok(())
    }
}

fn stream(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(tag)))
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn raw_values(spec: &SyntheticFieldSpec, regions: &RegionSet) -> Result<Vec<f64>> {
    let n = regions.len();
    let rs = regions.as_slice();
    Ok(match &spec.kind {
        FieldKind::Checkerboard { cell_deg } => {
            let lat0 = rs.iter().map(|r| r.lat).fold(f64::INFINITY, f64::min);
            let lon0 = rs.iter().map(|r| r.lon).fold(f64::INFINITY, f64::min);
            rs.iter()
                .map(|r| {
                    let i = ((r.lat - lat0) / cell_deg).round() as i64;
                    let j = ((r.lon - lon0) / cell_deg).round() as i64;
                    if (i + j) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                })
                .collect()
        }
        FieldKind::Gradient { axis } => {
            let coord = |r: &Region| match axis {
                Axis::Lat => r.lat,
                Axis::Lon => r.lon,
            };
            let lo = rs.iter().map(coord).fold(f64::INFINITY, f64::min);
            let hi = rs.iter().map(coord).fold(f64::NEG_INFINITY, f64::max);
            let span = if hi > lo { hi - lo } else { 1.0 };
            rs.iter().map(|r| (coord(r) - lo) / span).collect()
        }
        FieldKind::GaussianBlobs {
            count,
            width_km,
            amplitude,
        } => {
            let mut rng = stream(spec.seed, 1);
            let centers: Vec<(f64, f64)> = (0..*count)
                .map(|_| {
                    let r = &rs[rng.random_range(0..n)];
                    (r.lat, r.lon)
                })
                .collect();
            rs.iter()
                .map(|r| {
                    centers
                        .iter()
                        .map(|&c| {
                            let h = haversine_km((r.lat, r.lon), c);
                            amplitude * (-h * h / (2.0 * width_km * width_km)).exp()
                        })
                        .sum()
                })
                .collect()
        }
        FieldKind::ExponentialGp { length_km, sill } => gp_draw(regions, *length_km, *sill, spec.nugget, spec.seed)?,
        FieldKind::Permuted { base } => {
            let mut v = raw_values(base, regions)?;
            add_noise_and_mean(base, &mut v);
            v.shuffle(&mut stream(spec.seed, 4));
            v
        }
    })
}

fn gp_draw(regions: &RegionSet, length_km: f64, sill: f64, nugget: f64, seed: u64) -> Result<Vec<f64>> {
    let n = regions.len();
    if n > MAX_GP_REGIONS {
        return Err(Error::Generation(format!(
            "exponential_gp supports at most {MAX_GP_REGIONS} regions, got {n}"
        )));
    }
    let pts: Vec<(f64, f64)> = regions.iter().map(|r| (r.lat, r.lon)).collect();
    let cov = DMatrix::from_fn(n, n, |i, j| {
        let c = sill * (-haversine_km(pts[i], pts[j]) / length_km).exp();
        if i == j {
            c + nugget + GP_JITTER
        } else {
            c
        }
    });
    let chol = cov
        .cholesky()
        .ok_or_else(|| Error::Generation("covariance is not positive definite".into()))?;
    let mut rng = stream(seed, 2);
    let eps = DVector::from_fn(n, |_, _| normal(&mut rng));
    Ok((chol.l() * eps).iter().copied().collect())
}

fn add_noise_and_mean(spec: &SyntheticFieldSpec, values: &mut [f64]) {
    let gp = matches!(spec.kind, FieldKind::ExponentialGp { .. });
    if spec.nugget > 0.0 && !gp {
        let sd = spec.nugget.sqrt();
        let mut rng = stream(spec.seed, 3);
        for v in values.iter_mut() {
            *v += sd * normal(&mut rng);
        }
    }
    for v in values.iter_mut() {
        *v += spec.mean;
    }
}

/// Generates one field over `regions`.
pub fn generate(spec: &SyntheticFieldSpec, regions: &RegionSet) -> Result<RateField> {
    spec.validate()?;
    if regions.is_empty() {
        return Err(Error::Generation("no regions".into()));
    }
    let mut values = raw_values(spec, regions)?;
    if !matches!(spec.kind, FieldKind::Permuted { .. }) {
        add_noise_and_mean(spec, &mut values);
    } else {
        for v in values.iter_mut() {
            *v += spec.mean;
        }
    }
    let mut keep = vec![true; regions.len()];
    if let Some(c) = spec.coverage {
        let drop = regions.len() - (c * regions.len() as f64).round() as usize;
        let mut order: Vec<usize> = (0..regions.len()).collect();
        order.shuffle(&mut stream(spec.seed, 5));
        for &i in &order[..drop] {
            keep[i] = false;
        }
    }
    let map = regions
        .iter()
        .zip(values)
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|((r, v), _)| (r.id.clone(), v))
        .collect();
    RateField::new(spec.code.clone(), map)
}

/// Returns a copy of `field` with its values shuffled across its regions.
pub fn permute(field: &RateField, seed: u64) -> RateField {
    let ids: Vec<&String> = field.values.keys().collect();
    let mut vals: Vec<f64> = field.values.values().copied().collect();
    vals.shuffle(&mut stream(seed, 4));
    RateField {
        code: field.code.clone(),
        values: ids.into_iter().cloned().zip(vals).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledField {
    pub field: RateField,
    pub label: Option<String>,
    pub spec: SyntheticFieldSpec,
}

/// Generates a batch of fields; codes must be unique.
pub fn corpus(specs: &[SyntheticFieldSpec], regions: &RegionSet) -> Result<Vec<LabeledField>> {
    let mut seen = BTreeSet::new();
    for s in specs {
        if !seen.insert(s.code.as_str()) {
            return Err(Error::DuplicateCode(s.code.clone()));
        }
    }
    specs
        .iter()
        .map(|s| {
            Ok(LabeledField {
                field: generate(s, regions)?,
                label: s.label.clone(),
                spec: s.clone(),
            })
        })
        .collect()
}

/// Case and record counts whose crude rates reproduce `exp(log_rate)` in
/// expectation, with `records` records in every stratum of every region.
/// Regions a field leaves unobserved get zero cases.
pub fn stratified_counts(
    fields: &[RateField],
    regions: &RegionSet,
    records: u64,
    years: f64,
    seed: u64,
) -> Result<StratifiedCounts> {
    let mut counts = StratifiedCounts::new();
    for r in regions.iter() {
        for s in Stratum::all() {
            counts.set_total(&r.id, s, records);
        }
    }
    for (k, f) in fields.iter().enumerate() {
        let mut rng = stream(seed, 100 + k as u64);
        for (id, &log_rate) in &f.values {
            if regions.index_of(id).is_none() {
                return Err(Error::Contract(format!("field region `{id}` not in region set")));
            }
            let p = (log_rate.exp() * years / 100_000.0).clamp(0.0, 1.0);
            let binom = Binomial::new(records, p).map_err(|e| Error::Generation(e.to_string()))?;
            for s in Stratum::all() {
                let cases = binom.sample(&mut rng);
                if cases > 0 {
                    counts.set_cases(&f.code, id, s, cases)?;
                }
            }
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moran::{morans_i, WeightScheme};
    use crate::region_graph::{queen_contiguity, DEFAULT_SNAP_DEGREES};

    #[test]
    fn lattice_graph_matches_polygons() {
        let lat = Lattice {
            count: Some(23),
            ..Lattice::new(5, 6, 0.5)
        };
        let by_index = lat.graph().unwrap();
        let by_geometry = queen_contiguity(lat.regions().unwrap(), &lat.polygons(), DEFAULT_SNAP_DEGREES).unwrap();
        assert_eq!(by_index, by_geometry);
        assert_eq!(by_index.n(), 23);
    }

    #[test]
    fn continental_lattice_size() {
        let l = Lattice::continental(3109);
        assert_eq!(l.regions().unwrap().len(), 3109);
        assert_eq!(l.graph().unwrap().connected_components(), 1);
    }

    #[test]
    fn checkerboard_morans_i() {
        let lat = Lattice::new(4, 4, 1.0);
        let g = lat.graph().unwrap();
        // rook neighbors only for this check
        let rook_edges: Vec<(usize, usize)> = g
            .edges()
            .filter(|&(i, j)| {
                let (a, b) = (&g.regions()[i], &g.regions()[j]);
                (a.lat - b.lat).abs() < 1e-9 || (a.lon - b.lon).abs() < 1e-9
            })
            .collect();
        let rook = NeighborGraph::from_index_edges(g.regions().clone(), rook_edges).unwrap();
        let spec = SyntheticFieldSpec::new("cb", FieldKind::Checkerboard { cell_deg: 1.0 }, 0);
        let f = generate(&spec, rook.regions()).unwrap();
        assert_eq!(morans_i(&f, &rook, WeightScheme::Binary).unwrap().i, -1.0);
    }

    #[test]
    fn gradient_morans_i_high() {
        let lat = Lattice::new(20, 20, 0.5);
        let g = lat.graph().unwrap();
        let f = generate(
            &SyntheticFieldSpec::new("g", FieldKind::Gradient { axis: Axis::Lat }, 0),
            g.regions(),
        )
        .unwrap();
        let i = morans_i(&f, &g, WeightScheme::Binary).unwrap().i;
        assert!(i > 0.8, "{i}");
        let vals: Vec<f64> = f.values.values().copied().collect();
        assert_eq!(vals.iter().copied().fold(f64::INFINITY, f64::min), 0.0);
        assert_eq!(vals.iter().copied().fold(f64::NEG_INFINITY, f64::max), 1.0);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let rs = Lattice::new(8, 8, 0.5).regions().unwrap();
        let kinds = [
            FieldKind::GaussianBlobs {
                count: 3,
                width_km: 40.0,
                amplitude: 2.0,
            },
            FieldKind::ExponentialGp {
                length_km: 80.0,
                sill: 1.0,
            },
        ];
        for kind in kinds {
            let spec = SyntheticFieldSpec::new("x", kind, 11).with_nugget(0.1);
            assert_eq!(generate(&spec, &rs).unwrap(), generate(&spec, &rs).unwrap());
            let other = SyntheticFieldSpec {
                seed: 12,
                ..spec.clone()
            };
            assert_ne!(generate(&spec, &rs).unwrap(), generate(&other, &rs).unwrap());
        }
    }

    #[test]
    fn permuted_keeps_multiset() {
        let rs = Lattice::new(6, 6, 0.5).regions().unwrap();
        let base = SyntheticFieldSpec::new("b", FieldKind::Gradient { axis: Axis::Lon }, 0);
        let p = generate(
            &SyntheticFieldSpec::new(
                "p",
                FieldKind::Permuted {
                    base: Box::new(base.clone()),
                },
                9,
            ),
            &rs,
        )
        .unwrap();
        let b = generate(&base, &rs).unwrap();
        let mut x: Vec<f64> = b.values.values().copied().collect();
        let mut y: Vec<f64> = p.values.values().copied().collect();
        assert_ne!(x, y);
        x.sort_by(f64::total_cmp);
        y.sort_by(f64::total_cmp);
        assert_eq!(x, y);
        let q = permute(&b, 9);
        assert_eq!(q.values.len(), b.values.len());
    }

    #[test]
    fn gp_variance_matches_sill_plus_nugget() {
        // 1,000 regions, 50 seeds: pooled sample variance within 10%
        let rs = scatter_regions(1000, (30.0, 45.0), (-110.0, -85.0), 1).unwrap();
        let mut total = 0.0;
        let mut count = 0.0;
        for seed in 0..50 {
            let spec = SyntheticFieldSpec::new(
                "gp",
                FieldKind::ExponentialGp {
                    length_km: 100.0,
                    sill: 0.8,
                },
                seed,
            )
            .with_nugget(0.2);
            let f = generate(&spec, &rs).unwrap();
            // the process mean is known to be zero
            total += f.values.values().map(|v| v * v).sum::<f64>();
            count += f.values.len() as f64;
        }
        let var = total / count;
        assert!((var - 1.0).abs() < 0.1, "{var}");
    }

    #[test]
    fn coverage_drops_regions() {
        let rs = Lattice::new(10, 10, 0.5).regions().unwrap();
        let spec = SyntheticFieldSpec::new("c", FieldKind::Gradient { axis: Axis::Lat }, 3).with_coverage(0.5);
        assert_eq!(generate(&spec, &rs).unwrap().observed_count(), 50);
    }

    #[test]
    fn corpus_rules() {
        let rs = Lattice::new(4, 4, 0.5).regions().unwrap();
        assert!(corpus(&[], &rs).unwrap().is_empty());
        let s = SyntheticFieldSpec::new("dup", FieldKind::Gradient { axis: Axis::Lat }, 0);
        assert!(matches!(corpus(&[s.clone(), s], &rs), Err(Error::DuplicateCode(_))));
        let lengths = [25.0, 50.0, 100.0, 200.0, 400.0];
        let specs: Vec<_> = (0..20)
            .map(|k| {
                SyntheticFieldSpec::new(
                    format!("gp{k:02}"),
                    FieldKind::ExponentialGp {
                        length_km: lengths[k % 5],
                        sill: 1.0,
                    },
                    k as u64,
                )
                .with_label(format!("a{}", lengths[k % 5]))
            })
            .collect();
        let c = corpus(&specs, &rs).unwrap();
        assert_eq!(c.len(), 20);
        assert_eq!(c[3].label.as_deref(), Some("a200"));
    }

    #[test]
    fn invalid_specs() {
        let rs = Lattice::new(4, 4, 0.5).regions().unwrap();
        let bad = [
            FieldKind::Checkerboard { cell_deg: 0.0 },
            FieldKind::GaussianBlobs {
                count: 0,
                width_km: 10.0,
                amplitude: 1.0,
            },
            FieldKind::ExponentialGp {
                length_km: -1.0,
                sill: 1.0,
            },
        ];
        for kind in bad {
            assert!(generate(&SyntheticFieldSpec::new("x", kind, 0), &rs).is_err());
        }
        let big = scatter_regions(MAX_GP_REGIONS + 1, (30.0, 40.0), (-100.0, -90.0), 0).unwrap();
        let gp = SyntheticFieldSpec::new(
            "x",
            FieldKind::ExponentialGp {
                length_km: 10.0,
                sill: 1.0,
            },
            0,
        );
        assert!(generate(&gp, &big).is_err());
    }

    #[test]
    fn spec_toml_round_trip() {
        let text = r#"
            code = "perm"
            kind = "permuted"
            seed = 4
            [base]
            code = "b"
            kind = "gaussian_blobs"
            count = 3
            width_km = 40.0
            nugget = 0.05
        "#;
        let spec: SyntheticFieldSpec = toml::from_str(text).unwrap();
        match &spec.kind {
            FieldKind::Permuted { base } => {
                assert_eq!(base.nugget, 0.05);
                assert!(matches!(base.kind, FieldKind::GaussianBlobs { amplitude, .. } if amplitude == 1.0));
            }
            other => panic!("{other:?}"),
        }
        let back: SyntheticFieldSpec = toml::from_str(&toml::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn counts_reproduce_rates() {
        let rs = Lattice::new(5, 5, 0.5).regions().unwrap();
        let f = generate(
            &SyntheticFieldSpec::new("250", FieldKind::Gradient { axis: Axis::Lat }, 1).with_mean(5.0),
            &rs,
        )
        .unwrap();
        let counts = stratified_counts(std::slice::from_ref(&f), &rs, 200_000, 8.0, 3).unwrap();
        let std = crate::rates::StandardPopulation::uniform();
        let opts = crate::rates::RateOptions::default();
        for (id, &v) in &f.values {
            let adj = counts.adjusted("250", id, &std, &opts).unwrap();
            // 38 strata x 200k records, expected ~ thousands of cases
            assert!((adj.ln() - v).abs() < 0.05, "{id}: {} vs {v}", adj.ln());
        }
    }
}
