use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StudentT as StudentTSampler};
use serde::{Deserialize, Serialize};

use crate::distributions::{chi_square_sf, ScaledT};
use crate::error::{Error, Result};
use crate::gof::{ad_pvalue, ad_statistic};

pub const DEFAULT_QQ_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticScore {
    pub column: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub lag: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Acf {
    /// `values[k]` is the lag-`k` autocorrelation, `values[0] == 1`.
    pub values: Vec<f64>,
    /// Half-width of the white-noise band, `1.96 / sqrt(n)`.
    pub band: f64,
    pub n: usize,
}

/// Sample autocorrelations up to `max_lag`.
pub fn acf(x: &[f64], max_lag: usize) -> Result<Acf> {
    let n = x.len();
    if max_lag == 0 || max_lag >= n {
        return Err(Error::InvalidArgument(format!(
            "max_lag must lie in 1..{n} (got {max_lag})"
        )));
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let c0: f64 = centered.iter().map(|v| v * v).sum();
    if !(c0 > 0.0) {
        return Err(Error::Degenerate("zero variance series".into()));
    }
    let mut values = Vec::with_capacity(max_lag + 1);
    values.push(1.0);
    for k in 1..=max_lag {
        let ck: f64 = centered[k..]
            .iter()
            .zip(&centered[..n - k])
            .map(|(a, b)| a * b)
            .sum();
        values.push(ck / c0);
    }
    Ok(Acf {
        values,
        band: 1.96 / (n as f64).sqrt(),
        n,
    })
}

fn ljung_box_from_acf(acf: &[f64], n: usize, lag: usize) -> (f64, f64) {
    let t = n as f64;
    let q = t
        * (t + 2.0)
        * (1..=lag)
            .map(|k| acf[k] * acf[k] / (t - k as f64))
            .sum::<f64>();
    (q, chi_square_sf(q, lag as f64).clamp(0.0, 1.0))
}

/// Ljung-Box portmanteau test at `lag`.
pub fn ljung_box(x: &[f64], lag: usize) -> Result<DiagnosticScore> {
    if lag == 0 {
        return Err(Error::InvalidArgument("lag must be positive".into()));
    }
    let a = acf(x, lag)?;
    let (q, p) = ljung_box_from_acf(&a.values, x.len(), lag);
    Ok(DiagnosticScore {
        column: 0,
        statistic: q,
        p_value: p,
        lag: Some(lag),
    })
}

/// Scores every column by its smallest Ljung-Box p-value over lags
/// `1..=max_lag` (optionally on squared values) and returns the scores
/// sorted ascending, ties by column index.
pub fn serial_dependence_order(
    columns: &[Vec<f64>],
    max_lag: usize,
    squared: bool,
) -> Result<Vec<DiagnosticScore>> {
    if max_lag == 0 {
        return Err(Error::InvalidArgument("max_lag must be at least 1".into()));
    }
    let mut scores = Vec::with_capacity(columns.len());
    for (j, col) in columns.iter().enumerate() {
        let series: Vec<f64> = if squared {
            col.iter().map(|v| v * v).collect()
        } else {
            col.clone()
        };
        let a = acf(&series, max_lag).map_err(|e| e.context(format!("column {j}")))?;
        let mut best = DiagnosticScore {
            column: j,
            statistic: f64::NAN,
            p_value: f64::INFINITY,
            lag: None,
        };
        for lag in 1..=max_lag {
            let (q, p) = ljung_box_from_acf(&a.values, series.len(), lag);
            if p < best.p_value {
                best.statistic = q;
                best.p_value = p;
                best.lag = Some(lag);
            }
        }
        scores.push(best);
    }
    scores.sort_by(|a, b| a.p_value.total_cmp(&b.p_value).then(a.column.cmp(&b.column)));
    Ok(scores)
}

/// Anderson-Darling statistic of `residuals` against the unit-variance t
/// with `nu_hat` degrees of freedom.
pub fn ad_t_statistic(residuals: &[f64], nu_hat: f64) -> Result<DiagnosticScore> {
    if !(nu_hat > 2.0) {
        return Err(Error::InvalidArgument(format!("nu must exceed 2 (got {nu_hat})")));
    }
    let dist = ScaledT::new(nu_hat)?;
    let a2 = ad_statistic(residuals, |x| dist.cdf(x))?;
    Ok(DiagnosticScore {
        column: 0,
        statistic: a2,
        p_value: ad_pvalue(a2),
        lag: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QQBand {
    pub level: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Pointwise simulated envelopes for the order statistics of a sample of
/// size `n` from the unit-variance t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QQEnvelope {
    pub nu_hat: f64,
    pub n: usize,
    pub nsim: usize,
    pub seed: u64,
    pub bands: Vec<QQBand>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    /// Theoretical quantiles at `(i - 0.5) / n`.
    pub theoretical: Vec<f64>,
}

/// Type-7 sample quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn qq_envelope(nu_hat: f64, n: usize, nsim: usize, levels: &[f64], seed: u64) -> Result<QQEnvelope> {
    if nsim < 100 {
        return Err(Error::InvalidArgument(format!("nsim must be at least 100 (got {nsim})")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be positive".into()));
    }
    if let Some(l) = levels.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
        return Err(Error::InvalidArgument(format!("coverage level {l} outside (0,1)")));
    }
    let dist = ScaledT::new(nu_hat)?;
    let sampler = StudentTSampler::new(nu_hat)
        .map_err(|e| Error::InvalidArgument(format!("nu: {e}")))?;
    let scale = ((nu_hat - 2.0) / nu_hat).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // by_order[i][s] = i-th order statistic of simulation s
    let mut by_order = vec![Vec::with_capacity(nsim); n];
    let mut sample = vec![0.0; n];
    for _ in 0..nsim {
        for v in sample.iter_mut() {
            *v = sampler.sample(&mut rng) * scale;
        }
        sample.sort_by(f64::total_cmp);
        for (col, v) in by_order.iter_mut().zip(&sample) {
            col.push(*v);
        }
    }
    let mut sorted_levels = levels.to_vec();
    sorted_levels.sort_by(f64::total_cmp);
    let mut bands: Vec<QQBand> = sorted_levels
        .iter()
        .map(|&level| QQBand {
            level,
            lower: Vec::with_capacity(n),
            upper: Vec::with_capacity(n),
        })
        .collect();
    let mut min = Vec::with_capacity(n);
    let mut max = Vec::with_capacity(n);
    for col in by_order.iter_mut() {
        col.sort_by(f64::total_cmp);
        for b in bands.iter_mut() {
            let tail = 0.5 * (1.0 - b.level);
            b.lower.push(quantile_sorted(col, tail));
            b.upper.push(quantile_sorted(col, 1.0 - tail));
        }
        min.push(col[0]);
        max.push(col[nsim - 1]);
    }
    let theoretical = (1..=n)
        .map(|i| dist.quantile((i as f64 - 0.5) / n as f64))
        .collect();
    Ok(QQEnvelope {
        nu_hat,
        n,
        nsim,
        seed,
        bands,
        min,
        max,
        theoretical,
    })
}
