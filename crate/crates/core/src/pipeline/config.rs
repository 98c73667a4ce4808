use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moran::WeightScheme;
use crate::nb2::{ErrorMode, TieRule, Variant};
use crate::rates::RateOptions;
use crate::variogram::{Binning, FitOptions, FitWeighting};

/// Which NB2 variants a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantSelection {
    #[default]
    Both,
    Ttest,
    Odds,
}

impl VariantSelection {
    pub fn variants(self) -> &'static [Variant] {
        match self {
            VariantSelection::Both => &[Variant::TTest, Variant::LogOdds],
            VariantSelection::Ttest => &[Variant::TTest],
            VariantSelection::Odds => &[Variant::LogOdds],
        }
    }
}

/// Where the regions, graph and fields come from. Exactly one field source
/// is used: `synthetic`, then `fields`, then `counts` + `totals`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputConfig {
    pub regions: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub polygons: Option<PathBuf>,
    pub id_property: Option<String>,
    pub counts: Option<PathBuf>,
    pub totals: Option<PathBuf>,
    /// Uniform weights when absent.
    pub standard_population: Option<PathBuf>,
    /// Precomputed `id,code,log_rate` fields.
    pub fields: Option<PathBuf>,
    /// Synthetic spec file; replaces every other input.
    pub synthetic: Option<PathBuf>,
    /// Optional `code,name,category` labels.
    pub codes: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Nb2Settings {
    pub repetitions: usize,
    pub master_seed: u64,
    pub variant: VariantSelection,
    pub errors: ErrorMode,
    pub ties: TieRule,
    /// Write `nb2_reps.csv` with every per-repetition value.
    pub dump_repetitions: bool,
    /// Rerun at this M and report how far the statistics move.
    pub stability_reference: Option<usize>,
}

impl Default for Nb2Settings {
    fn default() -> Self {
        Nb2Settings {
            repetitions: 1000,
            master_seed: 0,
            variant: VariantSelection::Both,
            errors: ErrorMode::Absolute,
            ties: TieRule::Failure,
            dump_repetitions: false,
            stability_reference: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VariogramSettings {
    pub bins: usize,
    pub max_lag_fraction: f64,
    pub weighting: FitWeighting,
    pub max_iterations: usize,
}

impl Default for VariogramSettings {
    fn default() -> Self {
        let b = Binning::default();
        let f = FitOptions::default();
        VariogramSettings {
            bins: b.bins,
            max_lag_fraction: b.max_lag_fraction,
            weighting: f.weighting,
            max_iterations: f.max_iterations,
        }
    }
}

impl VariogramSettings {
    pub fn binning(&self) -> Binning {
        Binning {
            bins: self.bins,
            max_lag_fraction: self.max_lag_fraction,
        }
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions {
            weighting: self.weighting,
            max_iterations: self.max_iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RankingSettings {
    pub curve_n: Vec<usize>,
}

impl Default for RankingSettings {
    fn default() -> Self {
        RankingSettings {
            curve_n: vec![5, 10, 25, 50, 100],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Worker threads; 0 uses every core.
    pub threads: usize,
    pub output: Option<PathBuf>,
    pub input: InputConfig,
    pub rates: RateOptions,
    pub nb2: Nb2Settings,
    pub weights: WeightScheme,
    pub variogram: VariogramSettings,
    pub ranking: RankingSettings,
}

#[derive(Deserialize)]
struct ManifestShape {
    config: RunConfig,
}

impl RunConfig {
    /// Reads a config file, or the `[config]` table of a run manifest.
    /// Relative paths are resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let value: toml::Table =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = if value.contains_key("config") {
            toml::from_str::<ManifestShape>(&text).map(|m| m.config)
        } else {
            toml::from_str::<RunConfig>(&text)
        }
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(x) = p {
                if x.is_relative() {
                    *x = base.join(&*x);
                }
            }
        };
        let i = &mut self.input;
        for p in [
            &mut i.regions,
            &mut i.edges,
            &mut i.polygons,
            &mut i.counts,
            &mut i.totals,
            &mut i.standard_population,
            &mut i.fields,
            &mut i.synthetic,
            &mut i.codes,
            &mut self.output,
        ] {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.nb2.repetitions == 0 {
            return bad("nb2.repetitions must be at least 1");
        }
        if self.nb2.stability_reference == Some(0) {
            return bad("nb2.stability_reference must be at least 1");
        }
        let t = self.rates.coverage_threshold;
        if !(t > 0.0 && t <= 1.0) {
            return bad("rates.coverage_threshold must lie in (0, 1]");
        }
        if !(self.rates.years > 0.0) {
            return bad("rates.years must be positive");
        }
        if let Some(e) = self.rates.zero_offset {
            if !(e > 0.0) {
                return bad("rates.zero_offset must be positive");
            }
        }
        if self.variogram.bins == 0 || !(self.variogram.max_lag_fraction > 0.0) {
            return bad("variogram binning needs bins >= 1 and a positive max_lag_fraction");
        }
        if self.input.synthetic.is_none() {
            if self.input.regions.is_none() {
                return bad("input.regions is required unless input.synthetic is set");
            }
            if self.input.edges.is_none() && self.input.polygons.is_none() {
                return bad("one of input.edges or input.polygons is required");
            }
            if self.input.fields.is_none() && (self.input.counts.is_none() || self.input.totals.is_none()) {
                return bad("input needs either fields or counts + totals");
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }
}
