//! Monte-Carlo outage rates under i.i.d. Rayleigh fading.
//!
//! Draw `t` under seed `s` always produces the same channel, so every SNR
//! point of a sweep reuses the same fading realizations.

mod mimo;
mod twoway;

pub use mimo::{mimo_cut_set, mimo_strategy_rates, rank_failure, Matrix2, MimoRates};
pub use twoway::{twoway_strategy_rates, TwoWayRates};

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Snr;
use crate::error::{Error, Result};
use crate::streams::{stream, Purpose};

/// Column order of the distributed MIMO curve.
pub const MIMO_COLUMNS: [&str; 5] = ["comp", "comp_nz", "df", "cf", "upper"];
/// Column order of the two-way relay curve.
pub const TWOWAY_COLUMNS: [&str; 4] = ["comp", "df", "af", "upper"];

/// Largest rate whose empirical outage probability is at most `rho`: the
/// `(floor(rho N) + 1)`-th smallest sample.
pub fn outage_rate(samples: &[f64], rho: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("outage rate of an empty sample".into()));
    }
    check_rho(rho)?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let idx = ((rho * samples.len() as f64).floor() as usize).min(samples.len() - 1);
    Ok(sorted[idx])
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("outage probability must lie in (0, 1), got {rho}")))
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidConfig("trials must be at least 1".into()))
    }
}

/// Four i.i.d. unit-variance circularly symmetric complex Gaussian gains of draw `trial`.
pub fn fading_draw(seed: u64, trial: u64) -> [Complex64; 4] {
    let mut rng = stream(seed, Purpose::Fading, trial);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut g = [Complex64::new(0.0, 0.0); 4];
    for x in g.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *x = Complex64::new(re * scale, im * scale);
    }
    g
}

/// Channel matrix of draw `trial`, rows `[h11, h12]` and `[h21, h22]`.
pub fn mimo_draw(seed: u64, trial: u64) -> Matrix2 {
    let g = fading_draw(seed, trial);
    [[g[0], g[1]], [g[2], g[3]]]
}

/// Distributed MIMO sweep settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MimoConfig {
    /// Bit-pipe rate from each relay to the destination.
    pub c: f64,
    pub rho: f64,
    pub trials: u64,
    pub seed: u64,
}

impl MimoConfig {
    pub fn validate(&self) -> Result<()> {
        check_rho(self.rho)?;
        check_trials(self.trials)?;
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidConfig(format!("pipe rate must be finite and nonnegative, got {}", self.c)));
        }
        Ok(())
    }
}

/// Two-way relay sweep settings; the broadcast SNR is `bc_factor * SNR`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoWayConfig {
    pub bc_factor: f64,
    pub rho: f64,
    pub trials: u64,
    pub seed: u64,
}

impl TwoWayConfig {
    pub fn validate(&self) -> Result<()> {
        check_rho(self.rho)?;
        check_trials(self.trials)?;
        if !(self.bc_factor >= 0.0 && self.bc_factor.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "broadcast factor must be finite and nonnegative, got {}",
                self.bc_factor
            )));
        }
        Ok(())
    }
}

/// Outage rates of several strategies over an SNR grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageCurve {
    pub columns: Vec<String>,
    pub rows: Vec<OutageRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageRow {
    pub snr_db: f64,
    pub values: Vec<f64>,
}

impl OutageCurve {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    pub fn snr_db(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.snr_db).collect()
    }

    /// Header `snr_db,<columns>` then one line per grid point, values in
    /// shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{}", row.snr_db).expect("write to string");
            for v in &row.values {
                write!(out, ",{v}").expect("write to string");
            }
            out.push('\n');
        }
        out
    }
}

fn par_draws<T: Send>(trials: u64, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..trials).into_par_iter().map(f).collect()
}

fn outage_columns(rho: f64, columns: &[Vec<f64>]) -> Result<Vec<f64>> {
    columns.iter().map(|c| outage_rate(c, rho)).collect()
}

/// Per-draw rates of the distributed MIMO network at one SNR.
pub fn mimo_draws(cfg: &MimoConfig, snr: Snr) -> Result<Vec<MimoRates>> {
    cfg.validate()?;
    par_draws(cfg.trials, |t| mimo_strategy_rates(&mimo_draw(cfg.seed, t), snr, cfg.c))
}

/// Outage curve of the distributed MIMO network, columns `MIMO_COLUMNS`.
pub fn sweep_mimo(cfg: &MimoConfig, snr_db_grid: &[f64]) -> Result<OutageCurve> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(snr_db_grid.len());
    for &db in snr_db_grid {
        let draws = mimo_draws(cfg, Snr::from_db(db)?)?;
        let cols: Vec<Vec<f64>> = vec![
            draws.iter().map(|d| d.comp).collect(),
            draws.iter().map(|d| d.comp_nz).collect(),
            draws.iter().map(|d| d.df).collect(),
            draws.iter().map(|d| d.cf).collect(),
            draws.iter().map(|d| d.upper).collect(),
        ];
        rows.push(OutageRow { snr_db: db, values: outage_columns(cfg.rho, &cols)? });
    }
    Ok(OutageCurve { columns: MIMO_COLUMNS.iter().map(|s| s.to_string()).collect(), rows })
}

/// Channel gains `(h11, h12, h3, h4)` of two-way draw `trial`.
pub fn twoway_draw(seed: u64, trial: u64) -> [Complex64; 4] {
    fading_draw(seed, trial)
}

/// Per-draw rates of the two-way relay channel at one SNR.
pub fn twoway_draws(cfg: &TwoWayConfig, snr: Snr) -> Result<Vec<TwoWayRates>> {
    cfg.validate()?;
    let snr_bc = snr.scaled(cfg.bc_factor)?;
    par_draws(cfg.trials, |t| {
        let g = twoway_draw(cfg.seed, t);
        twoway_strategy_rates(g[0], g[1], g[2], g[3], snr, snr_bc)
    })
}

/// Two-way sweep plus, per grid point, the number of draws where
/// compute-and-forward falls below decode-and-forward by more than 1e-9.
pub fn sweep_twoway_detailed(cfg: &TwoWayConfig, snr_db_grid: &[f64]) -> Result<(OutageCurve, Vec<u64>)> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(snr_db_grid.len());
    let mut below = Vec::with_capacity(snr_db_grid.len());
    for &db in snr_db_grid {
        let draws = twoway_draws(cfg, Snr::from_db(db)?)?;
        below.push(draws.iter().filter(|d| d.comp < d.df - 1e-9).count() as u64);
        let cols: Vec<Vec<f64>> = vec![
            draws.iter().map(|d| d.comp).collect(),
            draws.iter().map(|d| d.df).collect(),
            draws.iter().map(|d| d.af).collect(),
            draws.iter().map(|d| d.upper).collect(),
        ];
        rows.push(OutageRow { snr_db: db, values: outage_columns(cfg.rho, &cols)? });
    }
    let curve = OutageCurve { columns: TWOWAY_COLUMNS.iter().map(|s| s.to_string()).collect(), rows };
    Ok((curve, below))
}

/// Outage curve of the two-way relay channel, columns `TWOWAY_COLUMNS`.
pub fn sweep_twoway(cfg: &TwoWayConfig, snr_db_grid: &[f64]) -> Result<OutageCurve> {
    Ok(sweep_twoway_detailed(cfg, snr_db_grid)?.0)
}

/// Fraction of MIMO draws whose relay equations are singular over C. A relay
/// with no positive-rate equation counts as a failure.
pub fn rank_failure_probability(snr: Snr, trials: u64, seed: u64, constrained: bool) -> Result<f64> {
    check_trials(trials)?;
    let fails = par_draws(trials, |t| rank_failure(&mimo_draw(seed, t), snr, constrained))?;
    Ok(fails.iter().filter(|&&f| f).count() as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_statistic_estimator() {
        let s: Vec<f64> = (1..=10).map(|x| x as f64).collect();
        assert_eq!(outage_rate(&s, 0.25).unwrap(), 3.0);
        assert_eq!(outage_rate(&[2.5; 7], 0.4).unwrap(), 2.5);
        assert!(outage_rate(&[], 0.5).is_err());
        assert!(outage_rate(&s, 1.0).is_err());
    }

    #[test]
    fn csv_layout() {
        let curve = OutageCurve {
            columns: vec!["comp".into(), "df".into()],
            rows: vec![OutageRow { snr_db: 5.0, values: vec![0.1, 2.0] }],
        };
        assert_eq!(curve.to_csv(), "snr_db,comp,df\n5,0.1,2\n");
    }
}
