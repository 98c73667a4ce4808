//! Empirical semivariograms over region centroids and exponential model fits.

mod fit;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rates::RateField;
use crate::region_graph::RegionSet;

pub use fit::{fit_exponential, initial_parameters, weighted_rss, FitOptions, FitWeighting};

/// Mean Earth radius in km (IUGG).
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// Great-circle distance between two `(lat, lon)` points in degrees.
pub fn haversine_km(p: (f64, f64), q: (f64, f64)) -> f64 {
    let (lat1, lon1) = (p.0.to_radians(), p.1.to_radians());
    let (lat2, lon2) = (q.0.to_radians(), q.1.to_radians());
    let a = ((lat2 - lat1) / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * ((lon2 - lon1) / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * a.sqrt().min(1.0).asin()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagBin {
    /// Bin center, km.
    pub lag_km: f64,
    pub semivariance: f64,
    pub pairs: u64,
}

/// Binned semivariances. Only bins holding at least one pair are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalVariogram {
    pub bins: Vec<LagBin>,
    pub max_lag_km: f64,
    pub bin_width_km: f64,
}

/// Binning used when none is given: `bins` equal bins up to a fraction of the
/// largest pairwise distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Binning {
    pub bins: usize,
    pub max_lag_fraction: f64,
}

impl Default for Binning {
    fn default() -> Self {
        Binning {
            bins: 40,
            max_lag_fraction: 1.0 / 3.0,
        }
    }
}

impl Binning {
    /// `(bin_width, max_lag)` for a set of points.
    pub fn resolve(&self, points: &[(f64, f64)]) -> Result<(f64, f64)> {
        if self.bins == 0 || !(self.max_lag_fraction > 0.0) {
            return Err(Error::Config(
                "binning needs bins > 0 and a positive lag fraction".into(),
            ));
        }
        let max_lag = max_pairwise_distance(points) * self.max_lag_fraction;
        if !(max_lag > 0.0) {
            return Err(Error::InsufficientData {
                observed: points.len(),
                required: 2,
            });
        }
        Ok((max_lag / self.bins as f64, max_lag))
    }
}

pub fn max_pairwise_distance(points: &[(f64, f64)]) -> f64 {
    points
        .par_iter()
        .enumerate()
        .map(|(i, &p)| points[i + 1..].iter().map(|&q| haversine_km(p, q)).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max)
}

// Rows per parallel work unit. Fixed, so the summation order and therefore
// the output bits do not depend on the worker count.
const ROW_CHUNK: usize = 32;

/// Empirical variogram of raw `(point, value)` observations.
pub fn empirical_from_points(
    points: &[(f64, f64)],
    values: &[f64],
    bin_width_km: f64,
    max_lag_km: f64,
) -> Result<EmpiricalVariogram> {
    if points.len() != values.len() {
        return Err(Error::Contract("points and values differ in length".into()));
    }
    if points.len() < 2 {
        return Err(Error::InsufficientData {
            observed: points.len(),
            required: 2,
        });
    }
    if !(bin_width_km > 0.0) || !(max_lag_km > 0.0) {
        return Err(Error::Config(format!(
            "bin width ({bin_width_km}) and max lag ({max_lag_km}) must be positive"
        )));
    }
    let nbins = ((max_lag_km / bin_width_km).ceil() as usize).max(1);
    let n = points.len();
    let chunks: Vec<(Vec<f64>, Vec<u64>)> = (0..n.div_ceil(ROW_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut sums = vec![0.0; nbins];
            let mut counts = vec![0u64; nbins];
            for i in c * ROW_CHUNK..((c + 1) * ROW_CHUNK).min(n) {
                for j in i + 1..n {
                    let h = haversine_km(points[i], points[j]);
                    if h > max_lag_km {
                        continue;
                    }
                    let b = ((h / bin_width_km) as usize).min(nbins - 1);
                    let d = values[i] - values[j];
                    sums[b] += 0.5 * d * d;
                    counts[b] += 1;
                }
            }
            (sums, counts)
        })
        .collect();
    let mut sums = vec![0.0; nbins];
    let mut counts = vec![0u64; nbins];
    for (s, k) in &chunks {
        for b in 0..nbins {
            sums[b] += s[b];
            counts[b] += k[b];
        }
    }
    let bins: Vec<LagBin> = (0..nbins)
        .filter(|&b| counts[b] > 0)
        .map(|b| LagBin {
            lag_km: (b as f64 + 0.5) * bin_width_km,
            semivariance: sums[b] / counts[b] as f64,
            pairs: counts[b],
        })
        .collect();
    if bins.is_empty() {
        return Err(Error::UndefinedStatistic("no pairs within the maximum lag"));
    }
    Ok(EmpiricalVariogram {
        bins,
        max_lag_km,
        bin_width_km,
    })
}

/// Centroids and values of the regions observed in `field`, in region order.
pub fn observations(field: &RateField, regions: &RegionSet) -> (Vec<(f64, f64)>, Vec<f64>) {
    regions
        .iter()
        .filter_map(|r| field.values.get(&r.id).map(|&v| ((r.lat, r.lon), v)))
        .unzip()
}

/// Empirical variogram of `field`, located at the region centroids.
pub fn empirical_variogram(
    field: &RateField,
    regions: &RegionSet,
    bin_width_km: f64,
    max_lag_km: f64,
) -> Result<EmpiricalVariogram> {
    let (points, values) = observations(field, regions);
    empirical_from_points(&points, &values, bin_width_km, max_lag_km)
}

/// Fitted exponential model
/// `gamma(h) = nugget + (sill - nugget) * (1 - exp(-h / a))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariogramModel {
    pub nugget: f64,
    /// Total sill (plateau).
    pub sill: f64,
    /// Length parameter `a`, km.
    pub length_km: f64,
    /// Distance at which 95% of the rise is reached, `3a`.
    pub practical_range_km: f64,
    pub converged: bool,
    pub rss: f64,
}

impl VariogramModel {
    pub fn new(nugget: f64, sill: f64, length_km: f64) -> Self {
        VariogramModel {
            nugget,
            sill,
            length_km,
            practical_range_km: 3.0 * length_km,
            converged: true,
            rss: f64::NAN,
        }
    }

    pub fn gamma(&self, h: f64) -> f64 {
        self.nugget + (self.sill - self.nugget) * (1.0 - (-h / self.length_km).exp())
    }
}

pub fn write_empirical(code: &str, emp: &EmpiricalVariogram, w: &mut csv::Writer<impl Write>) -> Result<()> {
    for b in &emp.bins {
        w.write_record([
            code.to_string(),
            format!("{:?}", b.lag_km),
            format!("{:?}", b.semivariance),
            b.pairs.to_string(),
        ])?;
    }
    Ok(())
}
