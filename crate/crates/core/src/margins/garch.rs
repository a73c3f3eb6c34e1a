//! ARMA(1,1)-GARCH(1,1) with unit-variance t innovations, fitted by
//! quasi maximum likelihood.
//!
//! ```text
//! X_t       = mu_t + sigma_t Z_t
//! mu_t      = mu + phi (X_{t-1} - mu) + theta (X_{t-1} - mu_{t-1})
//! sigma_t^2 = alpha0 + alpha1 (X_{t-1} - mu_{t-1})^2 + beta sigma_{t-1}^2
//! ```
//!
//! The series is standardized before optimization and the parameters are
//! mapped back afterwards; the optimizer works on an unconstrained vector
//! so every candidate it proposes satisfies the stationarity constraints.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT as StudentTSampler};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::optim::{nelder_mead, NelderMeadOptions};

pub const MIN_FIT_LENGTH: usize = 100;
const RESTARTS: usize = 3;
const RESTART_SEED: u64 = 0x7a65_6e73_636f_7065;
const MAX_POLISH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmaGarchParams {
    pub mu: f64,
    pub phi: f64,
    pub theta: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta: f64,
    pub nu: f64,
}

impl ArmaGarchParams {
    pub fn as_array(&self) -> [f64; 7] {
        [
            self.mu,
            self.phi,
            self.theta,
            self.alpha0,
            self.alpha1,
            self.beta,
            self.nu,
        ]
    }

    pub fn from_array(v: [f64; 7]) -> Self {
        Self {
            mu: v[0],
            phi: v[1],
            theta: v[2],
            alpha0: v[3],
            alpha1: v[4],
            beta: v[5],
            nu: v[6],
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.mu.is_finite()
            && self.phi.abs() < 1.0
            && self.theta.abs() < 1.0
            && self.alpha0 > 0.0
            && self.alpha1 >= 0.0
            && self.beta >= 0.0
            && self.alpha1 + self.beta < 1.0
            && self.nu > 2.0
            && self.nu.is_finite()
    }

    /// Rescales a fit on `(x - center) / scale` back to the original units.
    fn unstandardize(&self, center: f64, scale: f64) -> Self {
        Self {
            mu: center + scale * self.mu,
            alpha0: self.alpha0 * scale * scale,
            ..*self
        }
    }

    fn standardize(&self, center: f64, scale: f64) -> Self {
        Self {
            mu: (self.mu - center) / scale,
            alpha0: self.alpha0 / (scale * scale),
            ..*self
        }
    }

    fn to_unbounded(self) -> [f64; 7] {
        let rest = 1.0 - self.alpha1 - self.beta;
        [
            self.mu,
            self.phi.atanh(),
            self.theta.atanh(),
            (self.alpha1.max(1e-12) / rest).ln(),
            (self.beta.max(1e-12) / rest).ln(),
            self.alpha0.ln(),
            (self.nu - 2.0).ln(),
        ]
    }

    fn from_unbounded(u: &[f64]) -> Self {
        let (ec, ed) = (u[3].exp(), u[4].exp());
        let denom = 1.0 + ec + ed;
        Self {
            mu: u[0],
            phi: u[1].tanh(),
            theta: u[2].tanh(),
            alpha1: ec / denom,
            beta: ed / denom,
            alpha0: u[5].exp(),
            nu: 2.0 + u[6].exp(),
        }
    }
}

/// Result of fitting one return series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalFit {
    pub mu: f64,
    pub phi: f64,
    pub theta: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta: f64,
    pub nu: f64,
    /// Standardized residuals `(X_t - mu_t) / sigma_t`.
    pub residuals: Vec<f64>,
    pub loglik: f64,
    pub converged: bool,
}

impl MarginalFit {
    pub fn params(&self) -> ArmaGarchParams {
        ArmaGarchParams {
            mu: self.mu,
            phi: self.phi,
            theta: self.theta,
            alpha0: self.alpha0,
            alpha1: self.alpha1,
            beta: self.beta,
            nu: self.nu,
        }
    }

    fn from_parts(p: ArmaGarchParams, residuals: Vec<f64>, loglik: f64, converged: bool) -> Self {
        Self {
            mu: p.mu,
            phi: p.phi,
            theta: p.theta,
            alpha0: p.alpha0,
            alpha1: p.alpha1,
            beta: p.beta,
            nu: p.nu,
            residuals,
            loglik,
            converged,
        }
    }
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
    (m, v)
}

/// Runs the mean/variance recursion. Returns the log-likelihood and, when
/// `residuals` is given, fills it with the standardized residuals.
fn filter(p: &ArmaGarchParams, x: &[f64], mut residuals: Option<&mut Vec<f64>>) -> f64 {
    let (mean, var) = mean_var(x);
    let nu = p.nu;
    let log_c = ln_gamma(0.5 * (nu + 1.0))
        - ln_gamma(0.5 * nu)
        - 0.5 * (std::f64::consts::PI * (nu - 2.0)).ln();
    let half_nu1 = 0.5 * (nu + 1.0);
    let inv_nu2 = 1.0 / (nu - 2.0);

    let mut prev_x = mean;
    let mut prev_mu = mean;
    let mut prev_eps = 0.0;
    let mut sigma2 = var;
    let mut ll = 0.0;
    if let Some(r) = residuals.as_deref_mut() {
        r.clear();
        r.reserve(x.len());
    }
    for (t, &xt) in x.iter().enumerate() {
        let mu_t = p.mu + p.phi * (prev_x - p.mu) + p.theta * (prev_x - prev_mu);
        if t > 0 {
            sigma2 = p.alpha0 + p.alpha1 * prev_eps * prev_eps + p.beta * sigma2;
        }
        let eps = xt - mu_t;
        let z2 = eps * eps / sigma2;
        ll += log_c - half_nu1 * (z2 * inv_nu2).ln_1p() - 0.5 * sigma2.ln();
        if let Some(r) = residuals.as_deref_mut() {
            r.push(eps / sigma2.sqrt());
        }
        prev_x = xt;
        prev_mu = mu_t;
        prev_eps = eps;
    }
    ll
}

/// Quasi log-likelihood of `x` under `p` with the standard recursion start.
pub fn log_likelihood(p: &ArmaGarchParams, x: &[f64]) -> f64 {
    filter(p, x, None)
}

/// Standardized residuals of `x` under `p`.
pub fn residuals(p: &ArmaGarchParams, x: &[f64]) -> Vec<f64> {
    let mut r = Vec::new();
    filter(p, x, Some(&mut r));
    r
}

fn default_start() -> ArmaGarchParams {
    ArmaGarchParams {
        mu: 0.0,
        phi: 0.0,
        theta: 0.0,
        alpha0: 0.04,
        alpha1: 0.08,
        beta: 0.88,
        nu: 8.0,
    }
}

struct Run {
    u: Vec<f64>,
    f: f64,
    converged: bool,
}

fn run_from(objective: &dyn Fn(&[f64]) -> f64, start: &[f64], opts: &NelderMeadOptions) -> Run {
    let mut m = nelder_mead(objective, start, opts);
    // Restarting the simplex at the incumbent until the value stops moving
    // guards against premature collapse in the flat ARMA directions.
    for _ in 0..MAX_POLISH {
        let again = nelder_mead(objective, &m.x, opts);
        let gain = m.f - again.f;
        let converged = again.converged;
        if again.f <= m.f {
            m = again;
        }
        if gain <= 1e-10 * (1.0 + m.f.abs()) {
            m.converged = converged;
            break;
        }
    }
    Run {
        u: m.x,
        f: m.f,
        converged: m.converged,
    }
}

/// Fits ARMA(1,1)-GARCH(1,1) with scaled-t innovations to `x`.
///
/// The optimizer starts from `init` (or a generic stationary start) plus
/// three seeded random restarts; the best run is kept. When no run meets
/// the convergence tolerance the error carries the best point found.
pub fn fit_arma_garch(x: &[f64], init: Option<&ArmaGarchParams>) -> Result<MarginalFit> {
    if x.len() < MIN_FIT_LENGTH {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_FIT_LENGTH} observations to fit (got {})",
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("series contains non-finite values".into()));
    }
    let (center, var) = mean_var(x);
    if !(var > 0.0) || var.sqrt() <= 1e-14 * center.abs().max(1e-300) {
        return Err(Error::Degenerate("constant series".into()));
    }
    let scale = var.sqrt();
    let y: Vec<f64> = x.iter().map(|v| (v - center) / scale).collect();
    let log_scale_total = x.len() as f64 * scale.ln();

    let objective = |u: &[f64]| -> f64 {
        let p = ArmaGarchParams::from_unbounded(u);
        if !p.is_admissible() {
            return f64::INFINITY;
        }
        -filter(&p, &y, None)
    };
    let opts = NelderMeadOptions::default();

    let base = match init {
        Some(p) if p.is_admissible() => p.standardize(center, scale),
        Some(p) => {
            return Err(Error::InvalidArgument(format!(
                "initial parameters violate the model constraints: {p:?}"
            )))
        }
        None => default_start(),
    };
    let base_u = base.to_unbounded();

    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    let mut starts = vec![base_u.to_vec()];
    for _ in 0..RESTARTS {
        starts.push(
            base_u
                .iter()
                .map(|v| v + 0.5 * rng.sample::<f64, _>(StandardNormal))
                .collect(),
        );
    }

    let mut best: Option<Run> = None;
    for s in &starts {
        let run = run_from(&objective, s, &opts);
        let better = match &best {
            None => true,
            Some(b) => run.f < b.f,
        };
        if better {
            best = Some(run);
        }
    }
    let best = best.expect("at least one start");
    let base_f = objective(&base_u);

    // When the caller's start already beats every run (it can only tie in
    // exact arithmetic), keep it so refits are reproducible.
    let (u, f, converged) = if init.is_some() && base_f <= best.f {
        (base_u.to_vec(), base_f, true)
    } else {
        (best.u, best.f, best.converged)
    };
    let p_std = ArmaGarchParams::from_unbounded(&u);
    let params = p_std.unstandardize(center, scale);
    let res = residuals(&p_std, &y);
    let loglik = -f - log_scale_total;

    if !f.is_finite() {
        return Err(Error::OptimizerFailed {
            message: "no finite likelihood found".into(),
            best: None,
        });
    }
    let fit = MarginalFit::from_parts(params, res, loglik, converged);
    if !converged {
        return Err(Error::OptimizerFailed {
            message: "no restart met the convergence tolerance".into(),
            best: Some(Box::new(fit)),
        });
    }
    Ok(fit)
}

/// Asymptotic standard errors from the inverse observed information
/// (central-difference Hessian of the log-likelihood in natural parameters).
/// Entries are `None` when the Hessian is not negative definite there.
pub fn asymptotic_std_errors(x: &[f64], p: &ArmaGarchParams) -> Vec<Option<f64>> {
    let theta = p.as_array();
    let ll = |v: [f64; 7]| {
        let q = ArmaGarchParams::from_array(v);
        if q.is_admissible() {
            log_likelihood(&q, x)
        } else {
            f64::NAN
        }
    };
    let h: Vec<f64> = theta
        .iter()
        .map(|v| 1e-4 * v.abs().max(1e-2))
        .collect();
    let f0 = ll(theta);
    let mut hess = DMatrix::<f64>::zeros(7, 7);
    for i in 0..7 {
        for j in i..7 {
            let val = if i == j {
                let mut up = theta;
                let mut dn = theta;
                up[i] += h[i];
                dn[i] -= h[i];
                (ll(up) - 2.0 * f0 + ll(dn)) / (h[i] * h[i])
            } else {
                let shift = |si: f64, sj: f64| {
                    let mut v = theta;
                    v[i] += si * h[i];
                    v[j] += sj * h[j];
                    ll(v)
                };
                (shift(1.0, 1.0) - shift(1.0, -1.0) - shift(-1.0, 1.0) + shift(-1.0, -1.0))
                    / (4.0 * h[i] * h[j])
            };
            hess[(i, j)] = val;
            hess[(j, i)] = val;
        }
    }
    let info = -hess;
    match info.clone().cholesky() {
        Some(ch) => {
            let cov = ch.inverse();
            (0..7)
                .map(|i| {
                    let v = cov[(i, i)];
                    (v.is_finite() && v > 0.0).then(|| v.sqrt())
                })
                .collect()
        }
        None => vec![None; 7],
    }
}

/// Simulates `n` observations after a burn-in of `burn` steps.
pub fn simulate<R: Rng + ?Sized>(p: &ArmaGarchParams, n: usize, burn: usize, rng: &mut R) -> Vec<f64> {
    let t_dist = StudentTSampler::new(p.nu).expect("nu > 2");
    let z_scale = ((p.nu - 2.0) / p.nu).sqrt();
    let uncond = p.alpha0 / (1.0 - p.alpha1 - p.beta);
    let mut sigma2 = uncond;
    let mut prev_x = p.mu;
    let mut prev_mu = p.mu;
    let mut prev_eps = 0.0;
    let mut out = Vec::with_capacity(n);
    for t in 0..n + burn {
        let mu_t = p.mu + p.phi * (prev_x - p.mu) + p.theta * (prev_x - prev_mu);
        sigma2 = p.alpha0 + p.alpha1 * prev_eps * prev_eps + p.beta * sigma2;
        let z: f64 = t_dist.sample(rng) * z_scale;
        let eps = sigma2.sqrt() * z;
        let xt = mu_t + eps;
        if t >= burn {
            out.push(xt);
        }
        prev_x = xt;
        prev_mu = mu_t;
        prev_eps = eps;
    }
    out
}

/// `(mean, variance)` of the standardized residuals with divisor `T`.
pub fn standardized_residual_moments(fit: &MarginalFit) -> (f64, f64) {
    if fit.residuals.is_empty() {
        return (0.0, 0.0);
    }
    mean_var(&fit.residuals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truth() -> ArmaGarchParams {
        ArmaGarchParams {
            mu: 0.0,
            phi: 0.5,
            theta: 0.2,
            alpha0: 0.01,
            alpha1: 0.10,
            beta: 0.85,
            nu: 5.0,
        }
    }

    #[test]
    fn unbounded_round_trip() {
        let p = truth();
        let q = ArmaGarchParams::from_unbounded(&p.to_unbounded());
        for (a, b) in p.as_array().iter().zip(q.as_array()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_and_short_series_rejected() {
        assert!(matches!(
            fit_arma_garch(&[0.3; 200], None),
            Err(Error::Degenerate(_))
        ));
        assert!(fit_arma_garch(&[0.1, 0.2, 0.3], None).is_err());
    }

    #[test]
    fn moments_of_simple_residuals() {
        let mut fit = MarginalFit::from_parts(truth(), vec![0.0; 5], 0.0, true);
        assert_eq!(standardized_residual_moments(&fit), (0.0, 0.0));
        fit.residuals = vec![-1.0, 1.0];
        assert_eq!(standardized_residual_moments(&fit), (0.0, 1.0));
    }

    #[test]
    fn fit_recovers_simulated_parameters_and_is_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = simulate(&truth(), 2000, 500, &mut rng);
        let fit = fit_arma_garch(&x, None).unwrap();
        assert!(fit.params().is_admissible());
        assert!(fit.loglik >= log_likelihood(&truth(), &x) - 1e-6);
        assert!((fit.phi - 0.5).abs() < 0.2, "{fit:?}");
        let (m, v) = standardized_residual_moments(&fit);
        assert!(m.abs() < 0.1 && (0.8..1.2).contains(&v));

        let refit = fit_arma_garch(&x, Some(&fit.params())).unwrap();
        assert!((refit.loglik - fit.loglik).abs() <= 1e-8, "{} vs {}", refit.loglik, fit.loglik);
    }

    #[test]
    fn loglik_reported_in_original_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = simulate(&truth(), 400, 200, &mut rng)
            .into_iter()
            .map(|v| 0.01 * v)
            .collect();
        let fit = fit_arma_garch(&x, None).unwrap();
        let direct = log_likelihood(&fit.params(), &x);
        assert!((direct - fit.loglik).abs() < 1e-6 * direct.abs().max(1.0));
    }
}
