//! Student t copulas: the tail-dependence closed form, bivariate and joint
//! fits by Kendall-tau inversion plus a profile likelihood for the degrees
//! of freedom, and simulation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::rank::{kendall_tau, PseudoObsMatrix};
use crate::distributions::{clamp_prob, StudentT};
use crate::error::{Error, Result};
use crate::optim::golden_section_max;

pub const NU_MIN: f64 = 1.0;
pub const NU_MAX: f64 = 300.0;
/// Width of the final golden-section bracket on the log-nu scale, i.e. a
/// relative tolerance on nu.
const LOG_NU_TOL: f64 = 1e-4;
const EIGEN_FLOOR: f64 = 1e-8;
pub const MIN_BIV_ROWS: usize = 30;

/// Upper (= lower) tail-dependence coefficient of the t copula,
/// `2 t_{nu+1}(-sqrt((nu+1)(1-rho)/(1+rho)))`.
pub fn lambda_from_rho_nu(rho: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0) || nu.is_infinite() {
        return Err(Error::InvalidArgument(format!("nu must be positive (got {nu})")));
    }
    if rho.is_nan() || rho < -1.0 || rho > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!("rho must lie in [-1, 1] (got {rho})")));
    }
    if rho >= 1.0 {
        return Ok(1.0);
    }
    if rho == -1.0 {
        return Ok(0.0);
    }
    let arg = -((nu + 1.0) * (1.0 - rho) / (1.0 + rho)).sqrt();
    Ok((2.0 * StudentT::new(nu + 1.0)?.cdf(arg)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivTCopulaFit {
    pub rho: f64,
    pub nu: f64,
    pub tau_hat: f64,
    pub loglik: f64,
    pub lambda: f64,
    /// The profile maximum sits on the edge of the nu search interval; at
    /// the upper edge the fit is effectively Gaussian.
    pub nu_at_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointTCopulaFit {
    pub tickers: Vec<String>,
    /// Row-major `d x d` correlation matrix.
    pub p: Vec<Vec<f64>>,
    pub nu: f64,
    pub loglik: f64,
    pub nu_at_bound: bool,
    /// Whether the tau-inverted matrix needed the eigenvalue projection.
    pub projected: bool,
    pub min_eigenvalue_before: f64,
}

/// Quantiles `t_nu^{-1}(u)` for every entry of `cols`. Pseudo-observations
/// repeat the same grid of values in every column, so each distinct value
/// is inverted once.
fn t_scores(cols: &[&[f64]], dist: &StudentT) -> Vec<Vec<f64>> {
    let mut uniq: Vec<f64> = cols.iter().flat_map(|c| c.iter().copied()).collect();
    uniq.sort_by(f64::total_cmp);
    uniq.dedup();
    let q: Vec<f64> = uniq.iter().map(|&u| dist.quantile(clamp_prob(u))).collect();
    cols.iter()
        .map(|c| {
            c.iter()
                .map(|u| q[uniq.binary_search_by(|x| x.total_cmp(u)).expect("value present")])
                .collect()
        })
        .collect()
}

fn check_unit(cols: &[&[f64]]) -> Result<()> {
    if cols.iter().any(|c| c.iter().any(|v| !(*v > 0.0 && *v < 1.0))) {
        return Err(Error::InvalidArgument("pseudo-observations must lie in (0,1)".into()));
    }
    Ok(())
}

/// Log-density of the bivariate t copula summed over rows.
pub fn biv_t_loglik(u: &[f64], v: &[f64], rho: f64, nu: f64) -> Result<f64> {
    check_unit(&[u, v])?;
    let dist = StudentT::new(nu)?;
    let x = t_scores(&[u, v], &dist);
    Ok(biv_loglik_scores(&x[0], &x[1], rho, &dist))
}

fn biv_loglik_scores(x1: &[f64], x2: &[f64], rho: f64, dist: &StudentT) -> f64 {
    let nu = dist.nu();
    let one_m = 1.0 - rho * rho;
    let c = ln_gamma(0.5 * (nu + 2.0)) - ln_gamma(0.5 * nu) - (nu * PI).ln() - 0.5 * one_m.ln();
    x1.iter()
        .zip(x2)
        .map(|(&a, &b)| {
            let q = (a * a - 2.0 * rho * a * b + b * b) / (nu * one_m);
            c - 0.5 * (nu + 2.0) * q.ln_1p() - dist.ln_pdf(a) - dist.ln_pdf(b)
        })
        .sum()
}

/// Profile search for nu on `[NU_MIN, NU_MAX]` on the log scale.
fn profile_nu(mut ll: impl FnMut(f64) -> f64) -> (f64, f64, bool) {
    let r = golden_section_max(|lnu| ll(lnu.exp()), NU_MIN.ln(), NU_MAX.ln(), LOG_NU_TOL);
    let nu = r.x.exp();
    let at_bound = r.x - NU_MIN.ln() < 2.0 * LOG_NU_TOL || NU_MAX.ln() - r.x < 2.0 * LOG_NU_TOL;
    (nu, r.f, at_bound)
}

/// Fits a bivariate t copula: `rho = sin(pi tau / 2)` from Kendall's tau,
/// then nu maximizing the pseudo-likelihood with rho held fixed.
pub fn fit_biv_t(u: &[f64], v: &[f64]) -> Result<BivTCopulaFit> {
    if u.len() < MIN_BIV_ROWS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_BIV_ROWS} rows (got {})",
            u.len()
        )));
    }
    check_unit(&[u, v])?;
    let tau = kendall_tau(u, v)?;
    if tau.abs() >= 1.0 {
        return Err(Error::Degenerate(format!("|tau| = 1 (tau = {tau})")));
    }
    let rho = (PI * tau / 2.0).sin();
    let (nu, loglik, nu_at_bound) = profile_nu(|nu| match StudentT::new(nu) {
        Ok(dist) => {
            let x = t_scores(&[u, v], &dist);
            biv_loglik_scores(&x[0], &x[1], rho, &dist)
        }
        Err(_) => f64::NAN,
    });
    Ok(BivTCopulaFit {
        rho,
        nu,
        tau_hat: tau,
        loglik,
        lambda: lambda_from_rho_nu(rho, nu)?,
        nu_at_bound,
    })
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Nearest correlation matrix by eigenvalue clipping: negative (and tiny)
/// eigenvalues are raised to `floor`, the result is symmetrized and
/// rescaled to unit diagonal.
pub fn project_to_correlation(m: &DMatrix<f64>, floor: f64) -> Result<DMatrix<f64>> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Projection("non-finite entries".into()));
    }
    let eig = SymmetricEigen::new(m.clone());
    let clipped = eig.eigenvalues.map(|l| l.max(floor));
    let q = &eig.eigenvectors;
    let mut r = q * DMatrix::from_diagonal(&clipped) * q.transpose();
    r = (&r + r.transpose()) * 0.5;
    let d = r.nrows();
    let scale: Vec<f64> = (0..d).map(|i| 1.0 / r[(i, i)].sqrt()).collect();
    if scale.iter().any(|s| !s.is_finite()) {
        return Err(Error::Projection("non-positive diagonal after clipping".into()));
    }
    for i in 0..d {
        for j in 0..d {
            r[(i, j)] *= scale[i] * scale[j];
        }
        r[(i, i)] = 1.0;
    }
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::Projection("non-finite entries after projection".into()));
    }
    Ok(r)
}

/// Correlation matrix from pairwise Kendall-tau inversion.
pub fn tau_inversion_matrix(u: &PseudoObsMatrix) -> Result<DMatrix<f64>> {
    let d = u.cols();
    let mut p = DMatrix::<f64>::identity(d, d);
    for i in 0..d {
        for j in i + 1..d {
            let tau = kendall_tau(&u.columns[i], &u.columns[j])
                .map_err(|e| e.context(format!("pair ({}, {})", u.tickers[i], u.tickers[j])))?;
            let r = (PI * tau / 2.0).sin();
            p[(i, j)] = r;
            p[(j, i)] = r;
        }
    }
    Ok(p)
}

/// Joint t-copula log pseudo-likelihood given the Cholesky factor of P.
fn joint_loglik(x: &[Vec<f64>], chol: &DMatrix<f64>, dist: &StudentT) -> f64 {
    let d = x.len();
    let t = x[0].len();
    let nu = dist.nu();
    let df = d as f64;
    let log_det: f64 = 2.0 * (0..d).map(|i| chol[(i, i)].ln()).sum::<f64>();
    let c = ln_gamma(0.5 * (nu + df)) - ln_gamma(0.5 * nu) - 0.5 * df * (nu * PI).ln() - 0.5 * log_det;
    let mut z = vec![0.0; d];
    let mut total = 0.0;
    for row in 0..t {
        let mut quad = 0.0;
        let mut marg = 0.0;
        for i in 0..d {
            let xi = x[i][row];
            let mut s = xi;
            for k in 0..i {
                s -= chol[(i, k)] * z[k];
            }
            z[i] = s / chol[(i, i)];
            quad += z[i] * z[i];
            marg += dist.ln_pdf(xi);
        }
        total += c - 0.5 * (nu + df) * (quad / nu).ln_1p() - marg;
    }
    total
}

/// Fits a d-dimensional t copula: P by Kendall-tau inversion (projected to
/// a correlation matrix when not positive definite), nu by profile
/// likelihood.
pub fn fit_joint_t(u: &PseudoObsMatrix) -> Result<JointTCopulaFit> {
    let d = u.cols();
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 columns (got {d})")));
    }
    let cols: Vec<&[f64]> = u.columns.iter().map(Vec::as_slice).collect();
    check_unit(&cols)?;
    let raw = tau_inversion_matrix(u)?;
    let min_before = min_eigenvalue(&raw);
    let projected = !(min_before >= EIGEN_FLOOR);
    let p = if projected {
        project_to_correlation(&raw, EIGEN_FLOOR)?
    } else {
        raw
    };
    let chol = p
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Projection("projected matrix is not positive definite".into()))?
        .l();
    let (nu, loglik, nu_at_bound) = profile_nu(|nu| match StudentT::new(nu) {
        Ok(dist) => joint_loglik(&t_scores(&cols, &dist), &chol, &dist),
        Err(_) => f64::NAN,
    });
    Ok(JointTCopulaFit {
        tickers: u.tickers.clone(),
        p: (0..d).map(|i| (0..d).map(|j| p[(i, j)]).collect()).collect(),
        nu,
        loglik,
        nu_at_bound,
        projected,
        min_eigenvalue_before: min_before,
    })
}

/// Draws `n` rows from the t copula with correlation `p` (row-major) and
/// `nu` degrees of freedom; returns columns of uniforms.
pub fn simulate_t_copula<R: Rng + ?Sized>(
    p: &[Vec<f64>],
    nu: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let d = p.len();
    let m = DMatrix::from_fn(d, d, |i, j| p[i][j]);
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::InvalidArgument("correlation matrix is not positive definite".into()))?
        .l();
    let dist = StudentT::new(nu)?;
    let chi = ChiSquared::new(nu).map_err(|e| Error::InvalidArgument(format!("nu: {e}")))?;
    let mut cols = vec![Vec::with_capacity(n); d];
    let mut g = vec![0.0; d];
    for _ in 0..n {
        for gi in g.iter_mut() {
            *gi = rng.sample(StandardNormal);
        }
        let w: f64 = chi.sample(rng);
        let s = (nu / w).sqrt();
        for i in 0..d {
            let z: f64 = (0..=i).map(|k| chol[(i, k)] * g[k]).sum();
            cols[i].push(clamp_prob(dist.cdf(z * s)));
        }
    }
    Ok(cols)
}

/// Upper tail-dependence matrix implied by a joint fit.
pub fn lambda_matrix_from_joint(fit: &JointTCopulaFit) -> Result<super::DependenceMatrix> {
    let d = fit.p.len();
    let mut values = vec![vec![1.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            if i != j {
                values[i][j] = lambda_from_rho_nu(fit.p[i][j].clamp(-1.0, 1.0), fit.nu)?;
            }
        }
    }
    Ok(super::DependenceMatrix {
        measure: super::Measure::LambdaT,
        tickers: fit.tickers.clone(),
        values,
        aux: Some(vec![vec![fit.nu; d]; d]),
        failures: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependence::pseudo_observations;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn corr2(r: f64) -> Vec<Vec<f64>> {
        vec![vec![1.0, r], vec![r, 1.0]]
    }

    fn pobs(cols: Vec<Vec<f64>>) -> PseudoObsMatrix {
        let names: Vec<String> = (0..cols.len()).map(|i| format!("V{i}")).collect();
        pseudo_observations(&names, &cols).unwrap()
    }

    #[test]
    fn lambda_edge_cases() {
        assert_eq!(lambda_from_rho_nu(1.0, 4.0).unwrap(), 1.0);
        assert_eq!(lambda_from_rho_nu(-1.0, 4.0).unwrap(), 0.0);
        assert!(lambda_from_rho_nu(-0.999_999, 4.0).unwrap() < 1e-6);
        assert!(lambda_from_rho_nu(-1.1, 4.0).is_err());
        assert!(lambda_from_rho_nu(0.5, 0.0).is_err());
        let expected = 2.0 * StudentT::new(5.0).unwrap().cdf(-(5.0f64 / 3.0).sqrt());
        assert!((lambda_from_rho_nu(0.5, 4.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn itau_inversion_of_half() {
        assert!(((PI * 0.5 / 2.0).sin() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn comonotone_pair_is_rejected() {
        let u: Vec<f64> = (1..=50).map(|i| i as f64 / 51.0).collect();
        assert!(matches!(fit_biv_t(&u, &u), Err(Error::Degenerate(_))));
    }

    #[test]
    fn biv_fit_recovers_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let sim = simulate_t_copula(&corr2(0.5), 4.0, 2000, &mut rng).unwrap();
        let u = pobs(sim);
        let fit = fit_biv_t(&u.columns[0], &u.columns[1]).unwrap();
        assert!((fit.rho - 0.5).abs() < 0.05, "{fit:?}");
        assert!((2.8..=5.7).contains(&fit.nu), "{fit:?}");
        assert!((fit.lambda - lambda_from_rho_nu(fit.rho, fit.nu).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn joint_matches_pairwise_in_two_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = pobs(simulate_t_copula(&corr2(0.6), 5.0, 1500, &mut rng).unwrap());
        let biv = fit_biv_t(&u.columns[0], &u.columns[1]).unwrap();
        let joint = fit_joint_t(&u).unwrap();
        assert_eq!(joint.p[0][1], biv.rho);
        assert!(!joint.projected);
        assert!((joint.nu / biv.nu - 1.0).abs() < 0.10);
    }

    #[test]
    fn projection_repairs_indefinite_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.9, -0.9, 0.9, 1.0, 0.9, -0.9, 0.9, 1.0]);
        assert!(min_eigenvalue(&m) < 0.0);
        let r = project_to_correlation(&m, EIGEN_FLOOR).unwrap();
        assert!(min_eigenvalue(&r) >= 0.0);
        for i in 0..3 {
            assert_eq!(r[(i, i)], 1.0);
            for j in 0..3 {
                assert_eq!(r[(i, j)], r[(j, i)]);
            }
        }
        let bad = DMatrix::from_element(2, 2, f64::NAN);
        assert!(matches!(project_to_correlation(&bad, 1e-8), Err(Error::Projection(_))));
    }

    #[test]
    fn joint_lambda_matrix_monotone_in_correlation() {
        let fit = JointTCopulaFit {
            tickers: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            p: vec![
                vec![1.0, 0.1, 0.5, 0.9],
                vec![0.1, 1.0, 0.2, 0.3],
                vec![0.5, 0.2, 1.0, 0.4],
                vec![0.9, 0.3, 0.4, 1.0],
            ],
            nu: 6.0,
            loglik: 0.0,
            nu_at_bound: false,
            projected: false,
            min_eigenvalue_before: 0.1,
        };
        let m = lambda_matrix_from_joint(&fit).unwrap();
        let row = &m.values[0];
        assert!(row[1] < row[2] && row[2] < row[3]);
        assert!(m.values.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
    }

    proptest! {
        #[test]
        fn lambda_monotone(r1 in -0.95f64..0.95, dr in 0.001f64..0.04, nu in 1.0f64..60.0) {
            let a = lambda_from_rho_nu(r1, nu).unwrap();
            let b = lambda_from_rho_nu(r1 + dr, nu).unwrap();
            prop_assert!(b > a || a < 1e-300);
            let c = lambda_from_rho_nu(r1, nu * 1.5).unwrap();
            prop_assert!(c < a || a < 1e-300);
        }
    }
}
