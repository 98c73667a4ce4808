//! Spatial autocorrelation for areal data.
//!
//! The centerpiece is neighbor-based bootstrapping (NB2): for every region,
//! compare an estimate of its value built from its contiguous neighbors with
//! an estimate built from randomly chosen regions, and summarize how much the
//! neighbors help either as a median paired t statistic or as a log odds.
//! Alongside it the crate ships the reference methods NB2 is usually judged
//! against (global Moran's I, exponential semivariogram fits), direct age and
//! gender rate standardization, ranking reports, and a synthetic field
//! generator for verification.
//!
//! Module map:
//!
//! * [`region_graph`] regions, Queen contiguity, observed subgraphs
//! * [`rates`] crude and adjusted rates, coverage filter
//! * [`nb2`] the bootstrap engine (t-test and log-odds variants)
//! * [`moran`] global Moran's I
//! * [`variogram`] empirical semivariograms and exponential model fits
//! * [`synth`] synthetic regions, fields and corpora
//! * [`ranker`] rankings, top-N curves, category summaries
//! * [`pipeline`] the batch driver behind the `nb2` binary

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod moran;
pub mod nb2;
pub mod pipeline;
pub mod ranker;
pub mod rates;
pub mod region_graph;
pub mod stats;
pub mod synth;
pub mod variogram;

pub use error::{Error, Result};
pub use moran::{morans_i, MoranResult, WeightScheme};
pub use nb2::{nb2, Nb2Config, Nb2Result, Variant};
pub use rates::RateField;
pub use region_graph::{NeighborGraph, Region, RegionSet};
pub use variogram::{EmpiricalVariogram, VariogramModel};
