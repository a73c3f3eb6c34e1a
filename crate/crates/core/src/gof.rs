//! Goodness of fit for t copulas: the bivariate Rosenblatt transform, the
//! chi-square aggregation map, Anderson-Darling tests and the comparison of
//! pairwise fits against the bivariate margins of a joint fit.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dependence::{all_pairs, par_map, JointTCopulaFit, PairFit, PseudoObsMatrix};
use crate::distributions::{chi_square_cdf, clamp_prob, normal_quantile, ScaledT, StudentT};
use crate::error::{Error, Result};
use crate::margins::DiagnosticScore;

pub const DEFAULT_THRESHOLD: f64 = 0.05;

/// Anderson-Darling `A^2` of `x` against the continuous CDF `cdf`, with
/// probabilities clamped away from 0 and 1 so the statistic stays finite.
pub fn ad_statistic(x: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::NoObservations);
    }
    if x.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("NaN in Anderson-Darling sample".into()));
    }
    let mut f: Vec<f64> = x.iter().map(|&v| clamp_prob(cdf(v))).collect();
    f.sort_by(f64::total_cmp);
    let n = f.len();
    let s: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (f[i].ln() + (1.0 - f[n - 1 - i]).ln()))
        .sum();
    Ok(-(n as f64) - s / n as f64)
}

/// Asymptotic upper-tail probability of `A^2` for a fully specified null
/// (Marsaglia and Marsaglia's `ADinf` approximation).
pub fn ad_pvalue(a2: f64) -> f64 {
    if !(a2 > 0.0) {
        return 1.0;
    }
    let z = a2;
    let cdf = if z < 2.0 {
        (-1.233_714_1 / z).exp() / z.sqrt()
            * (2.00012
                + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z)
                    * z)
    } else {
        (-(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z)
            .exp())
        .exp()
    };
    (1.0 - cdf).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RefDist {
    ChiSquared { k: f64 },
    ScaledT { nu: f64 },
    Uniform,
}

impl RefDist {
    fn cdf_fn(self) -> Result<Box<dyn Fn(f64) -> f64>> {
        Ok(match self {
            RefDist::ChiSquared { k } => {
                if !(k > 0.0) {
                    return Err(Error::InvalidArgument(format!("chi-square k must be positive (got {k})")));
                }
                Box::new(move |x| chi_square_cdf(x, k))
            }
            RefDist::ScaledT { nu } => {
                let d = ScaledT::new(nu)?;
                Box::new(move |x| d.cdf(x))
            }
            RefDist::Uniform => Box::new(|x: f64| x.clamp(0.0, 1.0)),
        })
    }
}

pub fn anderson_darling(x: &[f64], reference: RefDist) -> Result<DiagnosticScore> {
    let a2 = ad_statistic(x, reference.cdf_fn()?)?;
    Ok(DiagnosticScore {
        column: 0,
        statistic: a2,
        p_value: ad_pvalue(a2),
        lag: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RosenblattPair {
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
}

/// Rosenblatt transform under a bivariate t copula conditioning on `u1`:
/// `v1 = u1`, `v2 = C(u2 | u1)`.
pub fn rosenblatt_biv_t(u1: &[f64], u2: &[f64], rho: f64, nu: f64) -> Result<RosenblattPair> {
    if u1.len() != u2.len() {
        return Err(Error::DimensionMismatch {
            expected: u1.len(),
            got: u2.len(),
        });
    }
    if !(rho > -1.0 && rho < 1.0) {
        return Err(Error::InvalidArgument(format!("rho must lie in (-1, 1) (got {rho})")));
    }
    if u1.iter().chain(u2).any(|u| !(*u > 0.0 && *u < 1.0)) {
        return Err(Error::InvalidArgument("Rosenblatt input must lie in (0,1)".into()));
    }
    let t = StudentT::new(nu)?;
    let t1 = StudentT::new(nu + 1.0)?;
    let one_m = 1.0 - rho * rho;
    let v2 = u1
        .iter()
        .zip(u2)
        .map(|(&a, &b)| {
            let x1 = t.quantile(a);
            let x2 = t.quantile(b);
            let s = ((nu + 1.0) / ((nu + x1 * x1) * one_m)).sqrt();
            t1.cdf((x2 - rho * x1) * s)
        })
        .collect();
    Ok(RosenblattPair {
        v1: u1.to_vec(),
        v2,
    })
}

/// `w = Phi^{-1}(v1)^2 + Phi^{-1}(v2)^2` row by row; chi-square with two
/// degrees of freedom when the hypothesized copula is correct.
pub fn chisq_map(v: &RosenblattPair) -> Vec<f64> {
    v.v1.iter()
        .zip(&v.v2)
        .map(|(&a, &b)| {
            let (za, zb) = (normal_quantile(clamp_prob(a)), normal_quantile(clamp_prob(b)));
            za * za + zb * zb
        })
        .collect()
}

/// Which variate of a pair the Rosenblatt transform conditions on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditioningOrder {
    #[default]
    LowerFirst,
    HigherFirst,
}

/// AD p-value of the chi-square-mapped Rosenblatt transform of a pair
/// under `(rho, nu)`.
pub fn pair_gof_pvalue(u: &[f64], v: &[f64], rho: f64, nu: f64, order: ConditioningOrder) -> Result<f64> {
    let r = match order {
        ConditioningOrder::LowerFirst => rosenblatt_biv_t(u, v, rho, nu)?,
        ConditioningOrder::HigherFirst => rosenblatt_biv_t(v, u, rho, nu)?,
    };
    Ok(anderson_darling(&chisq_map(&r), RefDist::ChiSquared { k: 2.0 })?.p_value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GofCategory {
    BothPoor,
    PairwiseOkJointPoor,
    JointOkPairwisePoor,
    BothOk,
    Missing,
}

impl GofCategory {
    pub fn classify(p_pairwise: Option<f64>, p_joint: Option<f64>, threshold: f64) -> Self {
        match (p_pairwise, p_joint) {
            (Some(pp), Some(pj)) => match (pp < threshold, pj < threshold) {
                (true, true) => GofCategory::BothPoor,
                (false, true) => GofCategory::PairwiseOkJointPoor,
                (true, false) => GofCategory::JointOkPairwisePoor,
                (false, false) => GofCategory::BothOk,
            },
            _ => GofCategory::Missing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairGofReport {
    pub i: usize,
    pub j: usize,
    pub ticker_i: String,
    pub ticker_j: String,
    pub p_pairwise: Option<f64>,
    pub p_joint: Option<f64>,
    pub category: GofCategory,
    /// p-values are not corrected for testing many pairs.
    pub uncorrected: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl PairGofReport {
    pub fn min_p(&self) -> f64 {
        match (self.p_pairwise, self.p_joint) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => f64::INFINITY,
        }
    }
}

/// Tests every pair twice, once under its own bivariate fit and once under
/// the bivariate margin `(P_ij, nu)` of the joint fit, and sorts the
/// reports by the smaller p-value (ties by pair).
pub fn compare_models(
    u: &PseudoObsMatrix,
    pairwise: &[PairFit],
    joint: &JointTCopulaFit,
    threshold: f64,
    order: ConditioningOrder,
    threads: usize,
) -> Result<Vec<PairGofReport>> {
    let d = u.cols();
    if joint.p.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: joint.p.len(),
        });
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidArgument(format!("threshold must lie in [0, 1] (got {threshold})")));
    }
    let index: HashMap<(usize, usize), &PairFit> =
        pairwise.iter().map(|p| ((p.i, p.j), p)).collect();
    let lookup = |i: usize, j: usize| index.get(&(i, j)).copied();
    let pairs = all_pairs(d);
    let mut reports = par_map(&pairs, threads, |&(i, j)| {
        let (a, b) = (&u.columns[i], &u.columns[j]);
        let mut errors = Vec::new();
        let p_pairwise = match lookup(i, j) {
            Some(PairFit { fit: Some(f), .. }) => pair_gof_pvalue(a, b, f.rho, f.nu, order)
                .map_err(|e| errors.push(format!("pairwise: {e}")))
                .ok(),
            Some(PairFit { error: Some(e), .. }) => {
                errors.push(format!("pairwise fit: {e}"));
                None
            }
            _ => {
                errors.push("pairwise fit not available".into());
                None
            }
        };
        let p_joint = pair_gof_pvalue(a, b, joint.p[i][j], joint.nu, order)
            .map_err(|e| errors.push(format!("joint: {e}")))
            .ok();
        PairGofReport {
            i,
            j,
            ticker_i: u.tickers[i].clone(),
            ticker_j: u.tickers[j].clone(),
            p_pairwise,
            p_joint,
            category: GofCategory::classify(p_pairwise, p_joint, threshold),
            uncorrected: true,
            error: (!errors.is_empty()).then(|| errors.join("; ")),
        }
    })?;
    reports.sort_by(|a, b| {
        a.min_p()
            .total_cmp(&b.min_p())
            .then((a.i, a.j).cmp(&(b.i, b.j)))
    });
    Ok(reports)
}
