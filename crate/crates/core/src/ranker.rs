//! Rankings of codes by each statistic, top-N variogram curves and
//! per-category range summaries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{descending_average_ranks, mean, quantile_sorted};
use crate::variogram::VariogramModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Nb2T,
    Nb2Odds,
    Moran,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Nb2T, Method::Nb2Odds, Method::Moran];

    pub fn name(self) -> &'static str {
        match self {
            Method::Nb2T => "nb2_t",
            Method::Nb2Odds => "nb2_odds",
            Method::Moran => "moran",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    PracticalRange,
    Sill,
}

/// Everything known about one code before ranking.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CodeStatistics {
    pub code: String,
    pub name: Option<String>,
    pub category: Option<String>,
    pub nb2_t: Option<f64>,
    pub nb2_odds: Option<f64>,
    pub moran: Option<f64>,
    pub variogram: Option<VariogramModel>,
}

impl CodeStatistics {
    pub fn new(code: impl Into<String>) -> Self {
        CodeStatistics {
            code: code.into(),
            ..Default::default()
        }
    }

    pub fn statistic(&self, m: Method) -> Option<f64> {
        match m {
            Method::Nb2T => self.nb2_t,
            Method::Nb2Odds => self.nb2_odds,
            Method::Moran => self.moran,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingRow {
    pub code: String,
    pub name: Option<String>,
    pub category: Option<String>,
    pub statistics: [Option<f64>; 3],
    pub ranks: [Option<f64>; 3],
    /// Present only for converged variogram fits.
    pub range_km: Option<f64>,
    pub sill: Option<f64>,
}

impl RankingRow {
    pub fn rank(&self, m: Method) -> Option<f64> {
        self.ranks[m.slot()]
    }

    pub fn statistic(&self, m: Method) -> Option<f64> {
        self.statistics[m.slot()]
    }

    fn property(&self, p: Property) -> Option<f64> {
        match p {
            Property::PracticalRange => self.range_km,
            Property::Sill => self.sill,
        }
    }
}

/// Rows in input order; rank 1 is the largest statistic of a method.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankingTable {
    pub rows: Vec<RankingRow>,
}

/// Ranks every method independently. A code without a statistic for a method
/// (or with NaN) gets no rank there; ties share the average rank.
pub fn rank(results: &[CodeStatistics]) -> Result<RankingTable> {
    let mut seen = BTreeSet::new();
    for r in results {
        if !seen.insert(r.code.as_str()) {
            return Err(Error::DuplicateCode(r.code.clone()));
        }
    }
    let mut rows: Vec<RankingRow> = results
        .iter()
        .map(|r| {
            let fit = r.variogram.as_ref().filter(|v| v.converged);
            RankingRow {
                code: r.code.clone(),
                name: r.name.clone(),
                category: r.category.clone(),
                statistics: Method::ALL.map(|m| r.statistic(m).filter(|v| !v.is_nan())),
                ranks: [None; 3],
                range_km: fit.map(|v| v.practical_range_km),
                sill: fit.map(|v| v.sill),
            }
        })
        .collect();
    for m in Method::ALL {
        let present: Vec<(usize, f64)> = rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.statistic(m).map(|v| (i, v)))
            .collect();
        let values: Vec<f64> = present.iter().map(|p| p.1).collect();
        for ((i, _), rk) in present.iter().zip(descending_average_ranks(&values)) {
            rows[*i].ranks[m.slot()] = Some(rk);
        }
    }
    Ok(RankingTable { rows })
}

impl RankingTable {
    /// Rows with a rank for `m`, best first; ties keep input order.
    pub fn ordered(&self, m: Method) -> Vec<&RankingRow> {
        let mut rows: Vec<&RankingRow> = self.rows.iter().filter(|r| r.rank(m).is_some()).collect();
        rows.sort_by(|a, b| a.rank(m).unwrap().total_cmp(&b.rank(m).unwrap()));
        rows
    }

    /// `code,name,rank_nb2_t,rank_nb2_odds,rank_moran,range_km,sill`, rows in
    /// input order, blanks for missing values.
    pub fn write(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "code",
            "name",
            "rank_nb2_t",
            "rank_nb2_odds",
            "rank_moran",
            "range_km",
            "sill",
        ])?;
        for r in &self.rows {
            let mut rec = vec![r.code.clone(), r.name.clone().unwrap_or_default()];
            rec.extend(r.ranks.iter().map(|v| opt(*v)));
            rec.push(opt(r.range_km));
            rec.push(opt(r.sill));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("ranking", e))
    }
}

pub(crate) fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub method: Method,
    pub n: usize,
    pub mean_range_km: f64,
    pub mean_sill: f64,
}

/// Mean practical range and sill over the `N` best-ranked codes with a
/// converged variogram, for each `N` in `n_values`. `N` beyond the number of
/// such codes is truncated to it; repeated thresholds are reported once.
pub fn top_n_curve(table: &RankingTable, method: Method, n_values: &[usize]) -> Vec<CurvePoint> {
    let usable: Vec<&RankingRow> = table
        .ordered(method)
        .into_iter()
        .filter(|r| r.range_km.is_some() && r.sill.is_some())
        .collect();
    if let Some(n) = n_values.iter().filter(|&&n| n > usable.len()).max() {
        warn!(
            "{method}: N up to {n} exceeds the {} converged codes, truncated",
            usable.len()
        );
    }
    let mut done = BTreeSet::new();
    n_values
        .iter()
        .filter_map(|&n| {
            let k = n.min(usable.len());
            if k == 0 || !done.insert(k) {
                return None;
            }
            let top = &usable[..k];
            let avg = |p: Property| mean(&top.iter().map(|r| r.property(p).unwrap()).collect::<Vec<_>>());
            Some(CurvePoint {
                method,
                n: k,
                mean_range_km: avg(Property::PracticalRange),
                mean_sill: avg(Property::Sill),
            })
        })
        .collect()
}

/// Single-property convenience over [`top_n_curve`].
pub fn top_n_property(
    table: &RankingTable,
    method: Method,
    property: Property,
    n_values: &[usize],
) -> Vec<(usize, f64)> {
    top_n_curve(table, method, n_values)
        .into_iter()
        .map(|p| {
            let v = match property {
                Property::PracticalRange => p.mean_range_km,
                Property::Sill => p.mean_sill,
            };
            (p.n, v)
        })
        .collect()
}

pub fn write_curves<'a>(points: impl IntoIterator<Item = &'a CurvePoint>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "N", "mean_range_km", "mean_sill"])?;
    for p in points {
        w.write_record([
            p.method.name().to_string(),
            p.n.to_string(),
            format!("{:?}", p.mean_range_km),
            format!("{:?}", p.mean_sill),
        ])?;
    }
    w.flush().map_err(|e| Error::io("curves", e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategorySummary {
    pub category: String,
    pub count: usize,
    pub mean_range_km: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Ranges beyond 1.5 IQR from the quartiles, ascending.
    pub outliers: Vec<f64>,
}

/// Practical-range distribution per category over converged fits, ordered by
/// increasing mean range. Rows without a category are ignored.
pub fn category_summary(table: &RankingTable) -> Vec<CategorySummary> {
    let mut by_cat: BTreeMap<&str, Vec<Option<f64>>> = BTreeMap::new();
    for r in &table.rows {
        if let Some(c) = &r.category {
            by_cat.entry(c).or_default().push(r.range_km);
        }
    }
    let mut out: Vec<CategorySummary> = by_cat
        .into_iter()
        .filter_map(|(cat, ranges)| {
            let mut v: Vec<f64> = ranges.into_iter().flatten().collect();
            if v.is_empty() {
                warn!("category `{cat}` has no converged variogram fits, omitted");
                return None;
            }
            v.sort_by(f64::total_cmp);
            let (q1, q3) = (quantile_sorted(&v, 0.25), quantile_sorted(&v, 0.75));
            let fence = 1.5 * (q3 - q1);
            Some(CategorySummary {
                category: cat.to_string(),
                count: v.len(),
                mean_range_km: mean(&v),
                q1,
                median: quantile_sorted(&v, 0.5),
                q3,
                outliers: v
                    .iter()
                    .copied()
                    .filter(|&x| x < q1 - fence || x > q3 + fence)
                    .collect(),
            })
        })
        .collect();
    out.sort_by(|a, b| {
        a.mean_range_km
            .total_cmp(&b.mean_range_km)
            .then_with(|| a.category.cmp(&b.category))
    });
    out
}

/// `category,count,mean_range_km,q1,median,q3,outliers`; outliers are
/// `;`-separated.
pub fn write_categories<'a>(rows: impl IntoIterator<Item = &'a CategorySummary>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["category", "count", "mean_range_km", "q1", "median", "q3", "outliers"])?;
    for c in rows {
        let outliers: Vec<String> = c.outliers.iter().map(|x| format!("{x:?}")).collect();
        w.write_record([
            c.category.clone(),
            c.count.to_string(),
            format!("{:?}", c.mean_range_km),
            format!("{:?}", c.q1),
            format!("{:?}", c.median),
            format!("{:?}", c.q3),
            outliers.join(";"),
        ])?;
    }
    w.flush().map_err(|e| Error::io("categories", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn code(c: &str, t: f64, range: Option<f64>) -> CodeStatistics {
        CodeStatistics {
            nb2_t: Some(t),
            variogram: Some(match range {
                Some(r) => VariogramModel::new(0.0, 1.0, r / 3.0),
                None => VariogramModel {
                    converged: false,
                    ..VariogramModel::new(0.0, 1.0, 10.0)
                },
            }),
            ..CodeStatistics::new(c)
        }
    }

    fn ranks_of(t: &RankingTable, m: Method) -> Vec<Option<f64>> {
        t.rows.iter().map(|r| r.rank(m)).collect()
    }

    #[test]
    fn descending_and_ties() {
        let t = rank(&[code("A", 3.0, None), code("B", 1.0, None), code("C", 2.0, None)]).unwrap();
        assert_eq!(ranks_of(&t, Method::Nb2T), [Some(1.0), Some(3.0), Some(2.0)]);
        assert_eq!(ranks_of(&t, Method::Moran), [None, None, None]);
        let t = rank(&[code("A", 2.0, None), code("B", 2.0, None)]).unwrap();
        assert_eq!(ranks_of(&t, Method::Nb2T), [Some(1.5), Some(1.5)]);
    }

    #[test]
    fn duplicate_code_rejected() {
        assert!(matches!(
            rank(&[code("A", 1.0, None), code("A", 2.0, None)]),
            Err(Error::DuplicateCode(_))
        ));
    }

    #[test]
    fn non_converged_blank_but_kept() {
        let t = rank(&[code("A", 1.0, None)]).unwrap();
        assert_eq!(t.rows[0].range_km, None);
        let mut buf = Vec::new();
        t.write(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "code,name,rank_nb2_t,rank_nb2_odds,rank_moran,range_km,sill\nA,,1.0,,,,\n"
        );
    }

    #[test]
    fn curve_single_code_and_truncation() {
        let t = rank(&[code("A", 1.0, Some(300.0))]).unwrap();
        let c = top_n_curve(&t, Method::Nb2T, &[1, 5]);
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].n, c[0].mean_range_km), (1, 300.0));
    }

    #[test]
    fn curve_skips_non_converged() {
        let t = rank(&[
            code("A", 5.0, None),
            code("B", 4.0, Some(100.0)),
            code("C", 3.0, Some(200.0)),
            code("D", 2.0, Some(600.0)),
        ])
        .unwrap();
        let c = top_n_property(&t, Method::Nb2T, Property::PracticalRange, &[1, 2, 3]);
        assert_eq!(c, [(1, 100.0), (2, 150.0), (3, 300.0)]);
    }

    #[test]
    fn categories() {
        let mut rows = Vec::new();
        for (i, r) in [100.0, 200.0, 300.0].into_iter().enumerate() {
            rows.push(CodeStatistics {
                category: Some("b".into()),
                ..code(&format!("b{i}"), 1.0, Some(r))
            });
        }
        for (i, r) in [10.0, 20.0, 30.0, 1000.0].into_iter().enumerate() {
            rows.push(CodeStatistics {
                category: Some("a".into()),
                ..code(&format!("a{i}"), 1.0, Some(r))
            });
        }
        rows.push(CodeStatistics {
            category: Some("z".into()),
            ..code("z0", 1.0, None)
        });
        let s = category_summary(&rank(&rows).unwrap());
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].category, "b");
        assert_eq!((s[0].mean_range_km, s[0].median), (200.0, 200.0));
        assert_eq!(s[1].count, 4);
        assert_eq!(s[1].outliers, [1000.0]);
    }

    #[test]
    fn write_formats() {
        let p = CurvePoint {
            method: Method::Moran,
            n: 2,
            mean_range_km: 150.0,
            mean_sill: 1.0,
        };
        let mut buf = Vec::new();
        write_curves([&p], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "method,N,mean_range_km,mean_sill\nmoran,2,150.0,1.0\n"
        );
    }

    proptest! {
        #[test]
        fn monotone_transform_invariant(v in proptest::collection::vec(-5i32..5, 1..30)) {
            let rows: Vec<_> = v.iter().enumerate().map(|(i, &x)| code(&format!("c{i}"), x as f64, None)).collect();
            let moved: Vec<_> = rows.iter().map(|r| CodeStatistics { nb2_t: r.nb2_t.map(|x| (x / 3.0).exp() + 7.0), ..r.clone() }).collect();
            prop_assert_eq!(ranks_of(&rank(&rows).unwrap(), Method::Nb2T), ranks_of(&rank(&moved).unwrap(), Method::Nb2T));
        }

        #[test]
        fn full_curve_is_unconditional_mean(v in proptest::collection::vec((0.0f64..10.0, 0.0f64..10.0, proptest::option::of(10.0f64..900.0)), 1..30)) {
            let rows: Vec<_> = v.iter().enumerate().map(|(i, &(t, m, r))| CodeStatistics { moran: Some(m), ..code(&format!("c{i}"), t, r) }).collect();
            let table = rank(&rows).unwrap();
            let k = v.iter().filter(|x| x.2.is_some()).count();
            prop_assume!(k > 0);
            let a = top_n_curve(&table, Method::Nb2T, &[k]);
            let b = top_n_curve(&table, Method::Moran, &[k]);
            let all = mean(&v.iter().filter_map(|x| x.2).collect::<Vec<_>>());
            prop_assert!((a[0].mean_range_km - all).abs() < 1e-9 * all);
            prop_assert!((b[0].mean_range_km - all).abs() < 1e-9 * all);
        }
    }
}
