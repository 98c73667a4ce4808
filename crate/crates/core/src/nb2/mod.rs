//! Neighbor-based bootstrapping.
//!
//! One repetition draws `N` anchor regions with replacement. For an anchor
//! `Y` with `n` neighbors it averages the values of `n` neighbors drawn with
//! replacement (the neighbor estimate) and of `n` regions drawn with
//! replacement from the whole graph (the random estimate). Each repetition is
//! reduced to a paired t statistic on the absolute errors of the two
//! estimates, and to the count `u` of anchors where the neighbor estimate is
//! strictly closer. Over `M` repetitions the t-test variant reports the median
//! t and the log-odds variant reports `ln(median(u) / (N - median(u)))`.
//!
//! Random draw order within a repetition is fixed: anchor index, then the
//! anchor's neighbor draws, then its random draws, anchor after anchor.

mod seed;
mod stability;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rates::RateField;
use crate::region_graph::NeighborGraph;
use crate::stats;

pub use seed::{repetition_rng, repetition_seed, splitmix64, SEED_DERIVATION};
pub use stability::{compare_statistics, StabilityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    TTest,
    LogOdds,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::TTest => "t_test",
            Variant::LogOdds => "log_odds",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t_test" | "ttest" => Ok(Variant::TTest),
            "log_odds" | "odds" => Ok(Variant::LogOdds),
            other => Err(Error::Config(format!("unknown variant `{other}`"))),
        }
    }
}

/// Errors fed to the paired t-test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMode {
    /// `|estimate - actual|`
    #[default]
    Absolute,
    /// `estimate - actual`, for comparison.
    Signed,
}

/// How an exact tie between the two absolute errors is scored in the
/// log-odds count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    #[default]
    Failure,
    Success,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Nb2Config {
    pub repetitions: usize,
    pub master_seed: u64,
    pub variant: Variant,
    /// Worker threads; 0 uses the ambient rayon pool.
    pub threads: usize,
    pub errors: ErrorMode,
    pub ties: TieRule,
}

impl Default for Nb2Config {
    fn default() -> Self {
        Nb2Config {
            repetitions: 1000,
            master_seed: 0,
            variant: Variant::TTest,
            threads: 0,
            errors: ErrorMode::Absolute,
            ties: TieRule::Failure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nb2Flag {
    /// At least one repetition had zero spread with nonzero mean difference.
    InfiniteT,
    /// `median(u)` was 0 or N; the continuity-corrected odds were used.
    OddsClamped,
    SignedErrors,
    TiesAsSuccess,
}

impl Nb2Flag {
    pub fn name(self) -> &'static str {
        match self {
            Nb2Flag::InfiniteT => "t_infinite",
            Nb2Flag::OddsClamped => "odds_clamped",
            Nb2Flag::SignedErrors => "signed_errors",
            Nb2Flag::TiesAsSuccess => "ties_success",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nb2Result {
    pub code: String,
    pub variant: Variant,
    pub statistic: f64,
    /// `t^m` or `u^m` for every repetition, in repetition order.
    pub per_repetition: Vec<f64>,
    /// Regions entering the bootstrap (`N`).
    pub n_effective: usize,
    pub repetitions: usize,
    pub master_seed: u64,
    pub seed_derivation: &'static str,
    pub flags: Vec<Nb2Flag>,
}

impl Nb2Result {
    /// Flags joined with `;`, empty when none.
    pub fn flag_string(&self) -> String {
        self.flags.iter().map(|f| f.name()).collect::<Vec<_>>().join(";")
    }

    /// Re-derives the statistic from the stored per-repetition values.
    pub fn recompute_statistic(&self) -> f64 {
        match self.variant {
            Variant::TTest => stats::median(&self.per_repetition),
            Variant::LogOdds => log_odds_of_median(stats::median(&self.per_repetition), self.n_effective).0,
        }
    }
}

/// The three values behind one anchor draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorDraw {
    pub anchor: usize,
    pub actual: f64,
    pub neighbor: f64,
    pub random: f64,
}

/// Values aligned to a graph whose regions all have a neighbor.
struct Prepared<'a> {
    values: Vec<f64>,
    graph: &'a NeighborGraph,
}

impl<'a> Prepared<'a> {
    fn new(field: &RateField, graph: &'a NeighborGraph) -> Result<Self> {
        let values = field.aligned(graph.regions()).ok_or_else(|| {
            Error::Contract(format!(
                "field `{}` does not cover every graph region; use the observed subgraph",
                field.code
            ))
        })?;
        if graph.n() < 2 {
            return Err(Error::InsufficientData {
                observed: graph.n(),
                required: 2,
            });
        }
        if let Some(i) = (0..graph.n()).find(|&i| graph.degree(i) == 0) {
            return Err(Error::Contract(format!(
                "region `{}` has no neighbors; use the observed subgraph",
                graph.regions()[i].id
            )));
        }
        Ok(Prepared { values, graph })
    }

    fn draw(&self, rng: &mut impl Rng, out: &mut Vec<AnchorDraw>) {
        let n = self.values.len();
        out.clear();
        for _ in 0..n {
            let y = rng.random_range(0..n);
            let neighbors = self.graph.neighbors(y);
            let k = neighbors.len();
            let mut sum_n = 0.0;
            for _ in 0..k {
                sum_n += self.values[neighbors[rng.random_range(0..k)]];
            }
            let mut sum_r = 0.0;
            for _ in 0..k {
                sum_r += self.values[rng.random_range(0..n)];
            }
            out.push(AnchorDraw {
                anchor: y,
                actual: self.values[y],
                neighbor: sum_n / k as f64,
                random: sum_r / k as f64,
            });
        }
    }
}

/// One bootstrap repetition, fully determined by `rep_seed`.
pub fn bootstrap_repetition(field: &RateField, graph: &NeighborGraph, rep_seed: u64) -> Result<Vec<AnchorDraw>> {
    use rand::SeedableRng;
    let prepared = Prepared::new(field, graph)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(rep_seed);
    let mut out = Vec::with_capacity(graph.n());
    prepared.draw(&mut rng, &mut out);
    Ok(out)
}

/// Paired t statistic on `delta_i = d_random_i - d_neighbor_i`, with the
/// sample standard deviation (`l - 1` denominator). Positive when the
/// neighbor errors are smaller.
///
/// Zero spread gives 0 if the mean difference is also 0 and a signed
/// infinity otherwise.
pub fn paired_t_statistic(d_neighbor: &[f64], d_random: &[f64]) -> Result<f64> {
    if d_neighbor.len() != d_random.len() {
        return Err(Error::Contract(format!(
            "paired samples differ in length ({} vs {})",
            d_neighbor.len(),
            d_random.len()
        )));
    }
    let l = d_neighbor.len();
    if l < 2 {
        return Err(Error::InsufficientData {
            observed: l,
            required: 2,
        });
    }
    let deltas: Vec<f64> = d_random.iter().zip(d_neighbor).map(|(r, n)| r - n).collect();
    let mean = stats::mean(&deltas);
    let sd = stats::sample_variance(&deltas).sqrt();
    Ok(if sd > 0.0 {
        mean * (l as f64).sqrt() / sd
    } else if mean == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(mean)
    })
}

/// `ln(median / (N - median))`, continuity-corrected at 0 and N. The flag
/// reports whether the correction was applied.
pub fn log_odds_of_median(median_u: f64, n: usize) -> (f64, bool) {
    let n = n as f64;
    if median_u <= 0.0 || median_u >= n {
        (((median_u + 0.5) / (n - median_u + 0.5)).ln(), true)
    } else {
        ((median_u / (n - median_u)).ln(), false)
    }
}

/// Per-repetition outputs of both variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepetitionSummary {
    pub t: f64,
    pub u: usize,
}

fn summarize(draws: &[AnchorDraw], cfg: &Nb2Config, dn: &mut Vec<f64>, dr: &mut Vec<f64>) -> RepetitionSummary {
    dn.clear();
    dr.clear();
    let mut u = 0;
    for d in draws {
        let en = (d.neighbor - d.actual).abs();
        let er = (d.random - d.actual).abs();
        if en < er || (cfg.ties == TieRule::Success && en == er) {
            u += 1;
        }
        match cfg.errors {
            ErrorMode::Absolute => {
                dn.push(en);
                dr.push(er);
            }
            ErrorMode::Signed => {
                dn.push(d.neighbor - d.actual);
                dr.push(d.random - d.actual);
            }
        }
    }
    let t = paired_t_statistic(dn, dr).expect("anchor count >= 2");
    RepetitionSummary { t, u }
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs the `M` repetitions of `cfg` (variant ignored) and returns their
/// summaries in repetition order.
pub fn run_repetitions(field: &RateField, graph: &NeighborGraph, cfg: &Nb2Config) -> Result<Vec<RepetitionSummary>> {
    if cfg.repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    let prepared = Prepared::new(field, graph)?;
    with_pool(cfg.threads, || {
        (0..cfg.repetitions as u64)
            .into_par_iter()
            .map_init(
                || (Vec::new(), Vec::new(), Vec::new()),
                |(draws, dn, dr), m| {
                    let mut rng = repetition_rng(cfg.master_seed, m);
                    prepared.draw(&mut rng, draws);
                    summarize(draws, cfg, dn, dr)
                },
            )
            .collect()
    })
}

fn finish(code: &str, variant: Variant, reps: &[RepetitionSummary], n: usize, cfg: &Nb2Config) -> Nb2Result {
    let mut flags = Vec::new();
    if cfg.errors == ErrorMode::Signed && variant == Variant::TTest {
        flags.push(Nb2Flag::SignedErrors);
    }
    if cfg.ties == TieRule::Success && variant == Variant::LogOdds {
        flags.push(Nb2Flag::TiesAsSuccess);
    }
    let (per_repetition, statistic) = match variant {
        Variant::TTest => {
            let ts: Vec<f64> = reps.iter().map(|r| r.t).collect();
            if ts.iter().any(|t| t.is_infinite()) {
                flags.push(Nb2Flag::InfiniteT);
            }
            let s = stats::median(&ts);
            (ts, s)
        }
        Variant::LogOdds => {
            let us: Vec<f64> = reps.iter().map(|r| r.u as f64).collect();
            let (s, clamped) = log_odds_of_median(stats::median(&us), n);
            if clamped {
                flags.push(Nb2Flag::OddsClamped);
            }
            (us, s)
        }
    };
    flags.sort();
    Nb2Result {
        code: code.to_string(),
        variant,
        statistic,
        per_repetition,
        n_effective: n,
        repetitions: reps.len(),
        master_seed: cfg.master_seed,
        seed_derivation: SEED_DERIVATION,
        flags,
    }
}

/// NB2 statistic for one field. `graph` must be the observed subgraph of
/// `field`: every region observed and every region with a neighbor.
pub fn nb2(field: &RateField, graph: &NeighborGraph, cfg: &Nb2Config) -> Result<Nb2Result> {
    let reps = run_repetitions(field, graph, cfg)?;
    Ok(finish(&field.code, cfg.variant, &reps, graph.n(), cfg))
}

/// Both variants from a single set of repetitions. Identical to calling
/// [`nb2`] once per variant, at half the cost.
pub fn nb2_both(field: &RateField, graph: &NeighborGraph, cfg: &Nb2Config) -> Result<(Nb2Result, Nb2Result)> {
    let reps = run_repetitions(field, graph, cfg)?;
    Ok((
        finish(&field.code, Variant::TTest, &reps, graph.n(), cfg),
        finish(&field.code, Variant::LogOdds, &reps, graph.n(), cfg),
    ))
}
