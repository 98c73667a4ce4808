//! Global Moran's I.
//!
//! `I = (n / S0) * sum_ij w_ij (y_i - m)(y_j - m) / sum_i (y_i - m)^2`, where
//! `S0` is the sum of all weights. Binary weights put 1 on every neighbor
//! pair; row-standardized weights put `1 / degree(i)` on each of `i`'s
//! neighbors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rates::RateField;
use crate::region_graph::NeighborGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    #[default]
    Binary,
    RowStandardized,
}

impl WeightScheme {
    pub fn name(self) -> &'static str {
        match self {
            WeightScheme::Binary => "binary",
            WeightScheme::RowStandardized => "row_standardized",
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(WeightScheme::Binary),
            "row" | "row_standardized" => Ok(WeightScheme::RowStandardized),
            other => Err(Error::Config(format!("unknown weight scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoranResult {
    pub code: String,
    pub i: f64,
    pub n: usize,
    pub scheme: WeightScheme,
}

/// Moran's I of a dense value vector aligned with `graph`'s regions.
pub fn morans_i_values(values: &[f64], graph: &NeighborGraph, scheme: WeightScheme) -> Result<f64> {
    let n = graph.n();
    if values.len() != n {
        return Err(Error::Contract(format!("{} values for {n} regions", values.len())));
    }
    if n < 2 {
        return Err(Error::UndefinedStatistic("fewer than two regions"));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let denom: f64 = dev.iter().map(|d| d * d).sum();
    if denom == 0.0 {
        return Err(Error::UndefinedStatistic("constant field"));
    }
    let mut s0 = 0.0;
    let mut cross = 0.0;
    for i in 0..n {
        let ns = graph.neighbors(i);
        if ns.is_empty() {
            continue;
        }
        let w = match scheme {
            WeightScheme::Binary => 1.0,
            WeightScheme::RowStandardized => 1.0 / ns.len() as f64,
        };
        let lag: f64 = ns.iter().map(|&j| dev[j]).sum();
        cross += w * dev[i] * lag;
        s0 += w * ns.len() as f64;
    }
    if s0 == 0.0 {
        return Err(Error::UndefinedStatistic("no neighbor pairs"));
    }
    Ok(n as f64 / s0 * cross / denom)
}

/// Moran's I of `field` over `graph`, which should already be restricted to
/// the field's observed regions.
pub fn morans_i(field: &RateField, graph: &NeighborGraph, scheme: WeightScheme) -> Result<MoranResult> {
    let values = field
        .aligned(graph.regions())
        .ok_or_else(|| Error::Contract(format!("field `{}` does not cover every graph region", field.code)))?;
    Ok(MoranResult {
        code: field.code.clone(),
        i: morans_i_values(&values, graph, scheme)?,
        n: graph.n(),
        scheme,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region_graph::{Region, RegionSet};
    use proptest::prelude::*;

    fn rook(rows: usize, cols: usize) -> NeighborGraph {
        let rs = RegionSet::new(
            (0..rows * cols)
                .map(|k| Region::new(format!("{k:04}"), (k / cols) as f64, (k % cols) as f64))
                .collect(),
        )
        .unwrap();
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let k = r * cols + c;
                if c + 1 < cols {
                    e.push((k, k + 1));
                }
                if r + 1 < rows {
                    e.push((k, k + cols));
                }
            }
        }
        NeighborGraph::from_index_edges(rs, e).unwrap()
    }

    /// Direct double sum over a dense weight matrix.
    fn naive(values: &[f64], graph: &NeighborGraph, scheme: WeightScheme) -> f64 {
        let n = values.len();
        let mut w = vec![vec![0.0; n]; n];
        for i in 0..n {
            for &j in graph.neighbors(i) {
                w[i][j] = match scheme {
                    WeightScheme::Binary => 1.0,
                    WeightScheme::RowStandardized => 1.0 / graph.degree(i) as f64,
                };
            }
        }
        let ybar = values.iter().sum::<f64>() / n as f64;
        let (mut s0, mut num, mut den) = (0.0, 0.0, 0.0);
        for i in 0..n {
            den += (values[i] - ybar).powi(2);
            for j in 0..n {
                s0 += w[i][j];
                num += w[i][j] * (values[i] - ybar) * (values[j] - ybar);
            }
        }
        n as f64 / s0 * num / den
    }

    #[test]
    fn checkerboard_is_minus_one() {
        let g = rook(4, 4);
        let v: Vec<f64> = (0..16)
            .map(|k| if (k / 4 + k % 4) % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        assert_eq!(morans_i_values(&v, &g, WeightScheme::Binary).unwrap(), -1.0);
        assert_eq!(naive(&v, &g, WeightScheme::Binary), -1.0);
    }

    #[test]
    fn two_regions() {
        let rs = RegionSet::new(vec![Region::new("a", 0.0, 0.0), Region::new("b", 0.0, 1.0)]).unwrap();
        let g = NeighborGraph::from_index_edges(rs, [(0, 1)]).unwrap();
        assert_eq!(morans_i_values(&[-1.0, 1.0], &g, WeightScheme::Binary).unwrap(), -1.0);
    }

    #[test]
    fn undefined_cases() {
        let g = rook(3, 3);
        assert!(matches!(
            morans_i_values(&[2.0; 9], &g, WeightScheme::Binary),
            Err(Error::UndefinedStatistic(_))
        ));
        let rs = RegionSet::new(vec![Region::new("a", 0.0, 0.0), Region::new("b", 0.0, 1.0)]).unwrap();
        let g = NeighborGraph::isolated(rs);
        assert!(matches!(
            morans_i_values(&[0.0, 1.0], &g, WeightScheme::Binary),
            Err(Error::UndefinedStatistic(_))
        ));
    }

    #[test]
    fn regular_graph_schemes_agree() {
        // a ring: every degree is 2
        let n = 11;
        let rs = RegionSet::new((0..n).map(|k| Region::new(format!("{k:02}"), 0.0, k as f64)).collect()).unwrap();
        let g = NeighborGraph::from_index_edges(rs, (0..n).map(|k| (k, (k + 1) % n))).unwrap();
        let v: Vec<f64> = (0..n).map(|k| ((k * 7) % 5) as f64 + 0.3 * k as f64).collect();
        let b = morans_i_values(&v, &g, WeightScheme::Binary).unwrap();
        let r = morans_i_values(&v, &g, WeightScheme::RowStandardized).unwrap();
        assert!((b - r).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn affine_invariance(
            vals in proptest::collection::vec(-10.0f64..10.0, 25),
            a in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
            b in -100.0f64..100.0,
        ) {
            let g = rook(5, 5);
            let i0 = morans_i_values(&vals, &g, WeightScheme::Binary).unwrap();
            let moved: Vec<f64> = vals.iter().map(|v| a * v + b).collect();
            let i1 = morans_i_values(&moved, &g, WeightScheme::Binary).unwrap();
            prop_assert!((i0 - i1).abs() < 1e-12, "{} vs {}", i0, i1);
            prop_assert!((i0 - naive(&vals, &g, WeightScheme::Binary)).abs() < 1e-12);
            let r = morans_i_values(&vals, &g, WeightScheme::RowStandardized).unwrap();
            prop_assert!((r - naive(&vals, &g, WeightScheme::RowStandardized)).abs() < 1e-12);
        }
    }
}
