//! Seeded synthetic market data: a block-correlated t copula coupling
//! ARMA-GARCH margins, with sector labels and optional gaps.

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{prices_from_returns, PriceMatrix, ReturnMatrix, SectorMap};
use crate::dependence::simulate_t_copula;
use crate::distributions::ScaledT;
use crate::error::{Error, Result};
use crate::margins::ArmaGarchParams;

/// Lag of the serial contamination; an ARMA(1,1) filter cannot absorb it.
pub const CONTAMINATION_LAG: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub d: usize,
    /// Number of returns; prices have one more row.
    pub t: usize,
    pub sectors: usize,
    pub copula_nu: f64,
    pub rho_within: f64,
    pub rho_cross: f64,
    /// Column whose returns get an extra lag-5 autoregressive component.
    pub contaminate: Option<usize>,
    pub contamination: f64,
    /// Probability that an individual price is missing.
    pub missing_rate: f64,
    /// Number of trailing columns missing their first 30% of prices.
    pub late_starts: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            d: 10,
            t: 1000,
            sectors: 3,
            copula_nu: 4.0,
            rho_within: 0.6,
            rho_cross: 0.25,
            contaminate: None,
            contamination: 0.35,
            missing_rate: 0.0,
            late_starts: 0,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthData {
    pub prices: PriceMatrix,
    /// Returns before any gaps were punched into the prices.
    pub returns: ReturnMatrix,
    pub sectors: SectorMap,
    pub margins: Vec<ArmaGarchParams>,
    pub correlation: Vec<Vec<f64>>,
}

pub fn ticker(j: usize, d: usize) -> String {
    let width = d.saturating_sub(1).to_string().len().max(2);
    format!("S{j:0width$}")
}

pub fn sector_name(k: usize) -> String {
    format!("Sector{:02}", k + 1)
}

/// `n` consecutive weekdays starting at 2000-01-03.
pub fn business_days(n: usize) -> Vec<String> {
    let mut day = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date");
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(day.format("%Y-%m-%d").to_string());
        }
        day += Duration::days(1);
    }
    out
}

/// Block correlation: `rho_within` inside a sector, `rho_cross` across.
pub fn block_correlation(d: usize, sectors: usize, within: f64, cross: f64) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        1.0
                    } else if i % sectors == j % sectors {
                        within
                    } else {
                        cross
                    }
                })
                .collect()
        })
        .collect()
}

/// Runs the ARMA-GARCH recursion on given unit-variance innovations.
pub fn garch_path(p: &ArmaGarchParams, z: &[f64], burn: usize) -> Vec<f64> {
    let mut sigma2 = p.alpha0 / (1.0 - p.alpha1 - p.beta);
    let (mut prev_x, mut prev_mu, mut prev_eps) = (p.mu, p.mu, 0.0);
    let mut out = Vec::with_capacity(z.len().saturating_sub(burn));
    for (t, &zt) in z.iter().enumerate() {
        let mu_t = p.mu + p.phi * (prev_x - p.mu) + p.theta * (prev_x - prev_mu);
        sigma2 = p.alpha0 + p.alpha1 * prev_eps * prev_eps + p.beta * sigma2;
        let eps = sigma2.sqrt() * zt;
        let x = mu_t + eps;
        if t >= burn {
            out.push(x);
        }
        prev_x = x;
        prev_mu = mu_t;
        prev_eps = eps;
    }
    out
}

fn margin_params<R: Rng>(rng: &mut R) -> ArmaGarchParams {
    ArmaGarchParams {
        mu: rng.random_range(-2e-4..6e-4),
        phi: rng.random_range(-0.3..0.3),
        theta: rng.random_range(-0.15..0.15),
        alpha0: rng.random_range(1e-6..4e-6),
        alpha1: rng.random_range(0.04..0.12),
        beta: rng.random_range(0.80..0.88),
        nu: rng.random_range(4.0..8.0),
    }
}

pub fn synthesize(cfg: &SynthConfig) -> Result<SynthData> {
    if cfg.d < 2 || cfg.t < 2 {
        return Err(Error::InvalidArgument(format!(
            "need d >= 2 and t >= 2 (got d = {}, t = {})",
            cfg.d, cfg.t
        )));
    }
    if cfg.sectors == 0 || cfg.sectors > cfg.d {
        return Err(Error::InvalidArgument(format!(
            "sector count must lie in 1..={} (got {})",
            cfg.d, cfg.sectors
        )));
    }
    if !(cfg.rho_cross >= 0.0 && cfg.rho_cross <= cfg.rho_within && cfg.rho_within < 1.0) {
        return Err(Error::InvalidArgument(
            "need 0 <= rho_cross <= rho_within < 1".into(),
        ));
    }
    if !(0.0..1.0).contains(&cfg.missing_rate) || cfg.late_starts > cfg.d {
        return Err(Error::InvalidArgument("missing_rate must lie in [0, 1) and late_starts <= d".into()));
    }
    if let Some(c) = cfg.contaminate {
        if c >= cfg.d {
            return Err(Error::InvalidArgument(format!("contaminated column {c} out of range")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let burn = 500;
    let correlation = block_correlation(cfg.d, cfg.sectors, cfg.rho_within, cfg.rho_cross);
    let u = simulate_t_copula(&correlation, cfg.copula_nu, cfg.t + burn, &mut rng)?;
    let margins: Vec<ArmaGarchParams> = (0..cfg.d).map(|_| margin_params(&mut rng)).collect();

    let mut columns = Vec::with_capacity(cfg.d);
    for (j, p) in margins.iter().enumerate() {
        let dist = ScaledT::new(p.nu)?;
        let z: Vec<f64> = u[j].iter().map(|&v| dist.quantile(v)).collect();
        let mut x = garch_path(p, &z, burn);
        if cfg.contaminate == Some(j) {
            let base = x.clone();
            for t in CONTAMINATION_LAG..x.len() {
                x[t] += cfg.contamination * base[t - CONTAMINATION_LAG];
            }
        }
        columns.push(x);
    }

    let dates = business_days(cfg.t + 1);
    let tickers: Vec<String> = (0..cfg.d).map(|j| ticker(j, cfg.d)).collect();
    let returns = ReturnMatrix {
        dates: dates[1..].to_vec(),
        tickers: tickers.clone(),
        columns,
    };
    let start: Vec<f64> = (0..cfg.d).map(|_| rng.random_range(20.0..200.0)).collect();
    let mut prices = prices_from_returns(&start, &returns, &dates[0]);

    let late_from = cfg.d - cfg.late_starts;
    let rows = cfg.t + 1;
    for (j, col) in prices.columns.iter_mut().enumerate() {
        if j >= late_from {
            for v in col.iter_mut().take(rows * 3 / 10) {
                *v = None;
            }
        }
        if cfg.missing_rate > 0.0 {
            for v in col.iter_mut() {
                if rng.random::<f64>() < cfg.missing_rate {
                    *v = None;
                }
            }
        }
    }

    let mut sectors = SectorMap::default();
    for (j, t) in tickers.iter().enumerate() {
        let k = j % cfg.sectors;
        sectors.insert(t, &sector_name(k), &format!("{}-{}", sector_name(k), 1 + (j / cfg.sectors) % 2));
    }
    Ok(SynthData {
        prices,
        returns,
        sectors,
        margins,
        correlation,
    })
}
