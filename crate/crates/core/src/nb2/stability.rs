//! Sensitivity of NB2 statistics to the repetition count.

use crate::stats::descending_average_ranks;

/// Agreement between statistics computed at two repetition counts.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// Codes present in both inputs with a finite, nonzero reference value.
    pub codes: usize,
    /// Mean of `|other - reference| / |reference|`.
    pub mean_relative_difference: f64,
    pub max_relative_difference: f64,
    /// Whether both statistics order the shared codes identically
    /// (average ranks, ties included).
    pub rank_identical: bool,
}

/// Compares `(code, statistic)` lists; codes are matched by name and the
/// inputs need not be in the same order.
pub fn compare_statistics(reference: &[(String, f64)], other: &[(String, f64)]) -> StabilityReport {
    let lookup: std::collections::HashMap<&str, f64> = other.iter().map(|(c, v)| (c.as_str(), *v)).collect();
    let mut pairs: Vec<(&str, f64, f64)> = reference
        .iter()
        .filter_map(|(c, r)| lookup.get(c.as_str()).map(|&o| (c.as_str(), *r, o)))
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(b.0));

    let rel: Vec<f64> = pairs
        .iter()
        .filter(|(_, r, o)| r.is_finite() && o.is_finite() && *r != 0.0)
        .map(|(_, r, o)| (o - r).abs() / r.abs())
        .collect();
    let refs: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let others: Vec<f64> = pairs.iter().map(|p| p.2).collect();
    StabilityReport {
        codes: rel.len(),
        mean_relative_difference: crate::stats::mean(&rel),
        max_relative_difference: rel.iter().copied().fold(f64::NAN, f64::max),
        rank_identical: descending_average_ranks(&refs) == descending_average_ranks(&others),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(v: &[(&str, f64)]) -> Vec<(String, f64)> {
        v.iter().map(|(c, x)| (c.to_string(), *x)).collect()
    }

    #[test]
    fn differences_and_ranks() {
        let a = list(&[("a", 10.0), ("b", 5.0), ("c", -2.0)]);
        let b = list(&[("c", -2.2), ("a", 10.1), ("b", 5.0)]);
        let r = compare_statistics(&a, &b);
        assert_eq!(r.codes, 3);
        assert!((r.mean_relative_difference - (0.01 + 0.0 + 0.1) / 3.0).abs() < 1e-12);
        assert!((r.max_relative_difference - 0.1).abs() < 1e-12);
        assert!(r.rank_identical);

        let c = list(&[("a", 4.0), ("b", 5.0), ("c", -2.0)]);
        assert!(!compare_statistics(&a, &c).rank_identical);
    }
}
