//! Marginal modelling: ARMA(1,1)-GARCH(1,1) fits, standardized residuals
//! and the serial/marginal diagnostics used to order zenpaths.

mod diagnostics;
mod garch;

pub use diagnostics::{
    acf, ad_t_statistic, ljung_box, qq_envelope, serial_dependence_order, Acf, DiagnosticScore,
    QQBand, QQEnvelope, DEFAULT_QQ_LEVELS,
};
pub use garch::{
    asymptotic_std_errors, fit_arma_garch, log_likelihood, residuals, simulate,
    standardized_residual_moments, ArmaGarchParams, MarginalFit, MIN_FIT_LENGTH,
};

use serde::{Deserialize, Serialize};

/// JSON record for one fitted column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub ticker: String,
    pub mu: f64,
    pub phi: f64,
    pub theta: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta: f64,
    pub nu: f64,
    pub loglik: f64,
    pub converged: bool,
}

impl FitRecord {
    pub fn new(ticker: &str, fit: &MarginalFit) -> Self {
        Self {
            ticker: ticker.to_string(),
            mu: fit.mu,
            phi: fit.phi,
            theta: fit.theta,
            alpha0: fit.alpha0,
            alpha1: fit.alpha1,
            beta: fit.beta,
            nu: fit.nu,
            loglik: fit.loglik,
            converged: fit.converged,
        }
    }
}
