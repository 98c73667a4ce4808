//! Weighted least-squares fit of the exponential variogram model.
//!
//! For a fixed length parameter the model is linear in the nugget and the
//! partial sill, so those two are solved exactly (non-negative least squares
//! over two unknowns). The remaining one-dimensional problem in `ln a` is
//! minimized with Nelder-Mead started from the initial guess.

use serde::{Deserialize, Serialize};

use super::{EmpiricalVariogram, VariogramModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitWeighting {
    /// `pairs / lag^2`
    #[default]
    PairsOverLagSquared,
    Pairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitOptions {
    pub weighting: FitWeighting,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            weighting: FitWeighting::PairsOverLagSquared,
            max_iterations: 200,
        }
    }
}

/// Starting point `(nugget, sill, length)`: the first bin's semivariance, the
/// field variance (never below the nugget), and a ninth of the maximum lag.
pub fn initial_parameters(emp: &EmpiricalVariogram, field_variance: f64) -> (f64, f64, f64) {
    let nugget = emp.bins.first().map_or(0.0, |b| b.semivariance);
    (nugget, field_variance.max(nugget), emp.max_lag_km / 9.0)
}

struct Problem {
    lags: Vec<f64>,
    gammas: Vec<f64>,
    weights: Vec<f64>,
}

impl Problem {
    fn new(emp: &EmpiricalVariogram, weighting: FitWeighting) -> Self {
        let lags: Vec<f64> = emp.bins.iter().map(|b| b.lag_km).collect();
        let gammas = emp.bins.iter().map(|b| b.semivariance).collect();
        let weights = emp
            .bins
            .iter()
            .map(|b| match weighting {
                FitWeighting::PairsOverLagSquared => b.pairs as f64 / (b.lag_km * b.lag_km),
                FitWeighting::Pairs => b.pairs as f64,
            })
            .collect();
        Problem { lags, gammas, weights }
    }

    fn rss(&self, nugget: f64, partial: f64, a: f64) -> f64 {
        self.lags
            .iter()
            .zip(&self.gammas)
            .zip(&self.weights)
            .map(|((&h, &g), &w)| {
                let r = g - nugget - partial * (1.0 - (-h / a).exp());
                w * r * r
            })
            .sum()
    }

    /// Best non-negative `(nugget, partial)` for a fixed length, with its RSS.
    fn solve_linear(&self, a: f64) -> (f64, f64, f64) {
        let (mut sw, mut sf, mut sff, mut sg, mut sfg) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for ((&h, &g), &w) in self.lags.iter().zip(&self.gammas).zip(&self.weights) {
            let f = 1.0 - (-h / a).exp();
            sw += w;
            sf += w * f;
            sff += w * f * f;
            sg += w * g;
            sfg += w * f * g;
        }
        let mut candidates = Vec::with_capacity(3);
        let det = sw * sff - sf * sf;
        if det > 0.0 {
            let partial = (sw * sfg - sf * sg) / det;
            let nugget = (sg - partial * sf) / sw;
            if partial >= 0.0 && nugget >= 0.0 {
                candidates.push((nugget, partial));
            }
        }
        if sff > 0.0 {
            candidates.push((0.0, (sfg / sff).max(0.0)));
        }
        if sw > 0.0 {
            candidates.push(((sg / sw).max(0.0), 0.0));
        }
        candidates
            .into_iter()
            .map(|(c0, c1)| (c0, c1, self.rss(c0, c1, a)))
            .min_by(|x, y| x.2.total_cmp(&y.2))
            .unwrap_or((0.0, 0.0, f64::INFINITY))
    }
}

/// Fits the exponential model. `init` is `(nugget, sill, length_km)`; when
/// absent the pair-weighted mean semivariance stands in for the field
/// variance in [`initial_parameters`].
///
/// Never fails: `converged` is false when the search never left its starting
/// length, ran out of iterations, ended on a bound, or found no structure
/// (zero partial sill). Too few bins (< 4) also yields `converged = false`.
pub fn fit_exponential(emp: &EmpiricalVariogram, init: Option<(f64, f64, f64)>, opts: &FitOptions) -> VariogramModel {
    let (nugget0, sill0, a0) = init.unwrap_or_else(|| {
        let pairs: f64 = emp.bins.iter().map(|b| b.pairs as f64).sum();
        let mean = emp.bins.iter().map(|b| b.semivariance * b.pairs as f64).sum::<f64>() / pairs;
        initial_parameters(emp, mean)
    });
    let problem = Problem::new(emp, opts.weighting);
    let a0 = if a0 > 0.0 { a0 } else { emp.max_lag_km / 9.0 };
    let sill0 = sill0.max(nugget0);
    let rss_init = problem.rss(nugget0, sill0 - nugget0, a0);

    if emp.bins.len() < 4 {
        return VariogramModel {
            nugget: nugget0,
            sill: sill0,
            length_km: a0,
            practical_range_km: 3.0 * a0,
            converged: false,
            rss: rss_init,
        };
    }

    let lo = (emp.bin_width_km / 10.0).ln();
    let hi = (emp.max_lag_km * 10.0).ln();
    let x0 = a0.ln().clamp(lo, hi);
    let objective = |x: f64| problem.solve_linear(x.exp()).2;

    let (best_x, iterations) = nelder_mead_1d(objective, x0, 1.0, lo, hi, opts.max_iterations);
    let a = best_x.exp();
    let (nugget, partial, rss) = problem.solve_linear(a);

    let at_bound = best_x <= lo + 1e-6 || best_x >= hi - 1e-6;
    let converged = best_x != x0 && !at_bound && iterations < opts.max_iterations && partial > 0.0;

    // only reachable when the starting length lies outside the search bounds
    if rss_init < rss {
        return VariogramModel {
            nugget: nugget0,
            sill: sill0,
            length_km: a0,
            practical_range_km: 3.0 * a0,
            converged: false,
            rss: rss_init,
        };
    }
    VariogramModel {
        nugget,
        sill: nugget + partial,
        length_km: a,
        practical_range_km: 3.0 * a,
        converged,
        rss,
    }
}

/// Weighted RSS of a model against an empirical variogram.
pub fn weighted_rss(emp: &EmpiricalVariogram, model: &VariogramModel, weighting: FitWeighting) -> f64 {
    Problem::new(emp, weighting).rss(model.nugget, model.sill - model.nugget, model.length_km)
}

/// Returns `(argmin, iterations)`; the search is confined to `[lo, hi]`.
fn nelder_mead_1d(f: impl Fn(f64) -> f64, x0: f64, step: f64, lo: f64, hi: f64, max_iterations: usize) -> (f64, usize) {
    let clamp = |x: f64| x.clamp(lo, hi);
    let x1 = if x0 + step <= hi { x0 + step } else { x0 - step };
    let mut pts = [(x0, f(x0)), (clamp(x1), f(clamp(x1)))];
    let mut it = 0;
    while it < max_iterations {
        if pts[1].1 < pts[0].1 {
            pts.swap(0, 1);
        }
        let (best, worst) = (pts[0], pts[1]);
        let fscale = best.1.abs().max(1e-300);
        if (worst.0 - best.0).abs() < 1e-7 || (worst.1 - best.1).abs() <= 1e-12 * fscale {
            break;
        }
        it += 1;
        let xr = clamp(best.0 + (best.0 - worst.0));
        let fr = f(xr);
        if fr < best.1 {
            let xe = clamp(best.0 + 2.0 * (best.0 - worst.0));
            let fe = f(xe);
            pts[1] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < worst.1 {
            pts[1] = (xr, fr);
        } else {
            let xc = best.0 + 0.5 * (worst.0 - best.0);
            pts[1] = (xc, f(xc));
        }
    }
    if pts[1].1 < pts[0].1 {
        pts.swap(0, 1);
    }
    (pts[0].0, it)
}
