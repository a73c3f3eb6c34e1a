//! Pseudo-observations, concordance measures, t-copula fits, tail
//! dependence and the pairwise dependence matrix.

mod nonparam;
mod rank;
mod tcopula;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use nonparam::{lambda_nonparam, DEFAULT_CORNER, MIN_CORNER_ROWS};
pub use rank::{average_ranks, kendall_tau, pseudo_observations, spearman_rho, PseudoObsMatrix};
pub use tcopula::{
    biv_t_loglik, fit_biv_t, fit_joint_t, lambda_from_rho_nu, lambda_matrix_from_joint,
    min_eigenvalue, project_to_correlation, simulate_t_copula, tau_inversion_matrix,
    BivTCopulaFit, JointTCopulaFit, MIN_BIV_ROWS, NU_MAX, NU_MIN,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Tau,
    RhoS,
    LambdaT,
    LambdaEmp,
}

impl Measure {
    pub fn tag(self) -> &'static str {
        match self {
            Measure::Tau => "tau",
            Measure::RhoS => "rho_s",
            Measure::LambdaT => "lambda_t",
            Measure::LambdaEmp => "lambda_emp",
        }
    }

    /// Name used on the command line and in file names.
    pub fn cli_name(self) -> &'static str {
        match self {
            Measure::Tau => "tau",
            Measure::RhoS => "rho",
            Measure::LambdaT => "lambda-t",
            Measure::LambdaEmp => "lambda-emp",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(Measure::Tau),
            "rho" | "rho_s" => Ok(Measure::RhoS),
            "lambda-t" | "lambda_t" => Ok(Measure::LambdaT),
            "lambda-emp" | "lambda_emp" => Ok(Measure::LambdaEmp),
            other => Err(Error::InvalidArgument(format!(
                "unknown measure \"{other}\" (expected tau, rho, lambda-t or lambda-emp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairFailure {
    pub i: usize,
    pub j: usize,
    pub reason: String,
}

/// Symmetric `d x d` matrix of a pairwise measure. Missing entries are NaN
/// and listed in `failures`.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceMatrix {
    pub measure: Measure,
    pub tickers: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Fitted degrees of freedom per pair for `lambda_t`.
    pub aux: Option<Vec<Vec<f64>>>,
    pub failures: Vec<PairFailure>,
}

impl DependenceMatrix {
    pub fn dim(&self) -> usize {
        self.tickers.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let v = self.values[i][j];
        v.is_finite().then_some(v)
    }

    pub fn to_json_repr(&self) -> DependenceMatrixJson {
        let lower = |m: &Vec<Vec<f64>>| -> Vec<Option<f64>> {
            (0..self.dim())
                .flat_map(|i| (0..=i).map(move |j| (i, j)))
                .map(|(i, j)| Some(m[i][j]).filter(|v| v.is_finite()))
                .collect()
        };
        DependenceMatrixJson {
            measure: self.measure,
            tickers: self.tickers.clone(),
            values: lower(&self.values),
            aux: self.aux.as_ref().map(lower),
            failures: self.failures.clone(),
        }
    }

    pub fn from_json_repr(j: DependenceMatrixJson) -> Result<Self> {
        let d = j.tickers.len();
        let expected = d * (d + 1) / 2;
        let unpack = |flat: &[Option<f64>]| -> Result<Vec<Vec<f64>>> {
            if flat.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    got: flat.len(),
                });
            }
            let mut m = vec![vec![f64::NAN; d]; d];
            let mut k = 0;
            for i in 0..d {
                for jj in 0..=i {
                    let v = flat[k].unwrap_or(f64::NAN);
                    m[i][jj] = v;
                    m[jj][i] = v;
                    k += 1;
                }
            }
            Ok(m)
        };
        Ok(Self {
            measure: j.measure,
            values: unpack(&j.values)?,
            aux: j.aux.as_deref().map(unpack).transpose()?,
            tickers: j.tickers,
            failures: j.failures,
        })
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        crate::io::write_json(path, &self.to_json_repr())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Self::from_json_repr(crate::io::read_json(path)?)
    }

    /// Full symmetric grid; missing entries are empty cells.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("ticker");
        for t in &self.tickers {
            out.push(',');
            out.push_str(t);
        }
        out.push('\n');
        for (t, row) in self.tickers.iter().zip(&self.values) {
            out.push_str(t);
            for v in row {
                out.push(',');
                if v.is_finite() {
                    out.push_str(&v.to_string());
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| crate::io::io_err(path, e))?;
        f.write_all(self.to_csv_string().as_bytes())
            .map_err(|e| crate::io::io_err(path, e))
    }
}

/// JSON form: lower triangle (diagonal included) in row-major order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DependenceMatrixJson {
    pub measure: Measure,
    pub tickers: Vec<String>,
    pub values: Vec<Option<f64>>,
    pub aux: Option<Vec<Option<f64>>>,
    pub failures: Vec<PairFailure>,
}

/// All unordered pairs `(i, j)`, `i < j`, in row-major order.
pub fn all_pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect()
}

/// Runs `f` over `items` on a pool of `threads` workers; results come back
/// in input order.
pub fn par_map<T, R, F>(items: &[T], threads: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if threads <= 1 {
        return Ok(items.iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairFit {
    pub i: usize,
    pub j: usize,
    pub fit: Option<BivTCopulaFit>,
    pub error: Option<String>,
}

/// Bivariate t-copula fits for every pair.
pub fn fit_all_pairs(u: &PseudoObsMatrix, threads: usize) -> Result<Vec<PairFit>> {
    let pairs = all_pairs(u.cols());
    par_map(&pairs, threads, |&(i, j)| {
        match fit_biv_t(&u.columns[i], &u.columns[j]) {
            Ok(fit) => PairFit {
                i,
                j,
                fit: Some(fit),
                error: None,
            },
            Err(e) => PairFit {
                i,
                j,
                fit: None,
                error: Some(e.to_string()),
            },
        }
    })
}

fn assemble(
    measure: Measure,
    tickers: &[String],
    results: Vec<((usize, usize), std::result::Result<(f64, Option<f64>), String>)>,
) -> DependenceMatrix {
    let d = tickers.len();
    let mut values = vec![vec![f64::NAN; d]; d];
    let mut aux = (measure == Measure::LambdaT).then(|| vec![vec![f64::NAN; d]; d]);
    let mut failures = Vec::new();
    for i in 0..d {
        values[i][i] = 1.0;
    }
    for ((i, j), r) in results {
        match r {
            Ok((v, a)) => {
                values[i][j] = v;
                values[j][i] = v;
                if let (Some(m), Some(a)) = (aux.as_mut(), a) {
                    m[i][j] = a;
                    m[j][i] = a;
                }
            }
            Err(reason) => failures.push(PairFailure { i, j, reason }),
        }
    }
    DependenceMatrix {
        measure,
        tickers: tickers.to_vec(),
        values,
        aux,
        failures,
    }
}

/// Computes `measure` for every unordered pair of columns of `u`.
/// Per-pair failures become missing entries; the output does not depend on
/// the number of threads.
pub fn dependence_matrix(u: &PseudoObsMatrix, measure: Measure, threads: usize) -> Result<DependenceMatrix> {
    let d = u.cols();
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 columns (got {d})")));
    }
    let pairs = all_pairs(d);
    let results = par_map(&pairs, threads, |&(i, j)| {
        let (a, b) = (&u.columns[i], &u.columns[j]);
        let r = match measure {
            Measure::Tau => kendall_tau(a, b).map(|v| (v, None)),
            Measure::RhoS => spearman_rho(a, b).map(|v| (v, None)),
            Measure::LambdaT => fit_biv_t(a, b).map(|f| (f.lambda, Some(f.nu))),
            Measure::LambdaEmp => lambda_nonparam(a, b, DEFAULT_CORNER).map(|v| (v, None)),
        };
        ((i, j), r.map_err(|e| e.to_string()))
    })?;
    Ok(assemble(measure, &u.tickers, results))
}

/// Tail-dependence matrix from precomputed pairwise fits.
pub fn lambda_matrix_from_pairs(tickers: &[String], fits: &[PairFit]) -> DependenceMatrix {
    let results = fits
        .iter()
        .map(|pf| {
            let r = match (&pf.fit, &pf.error) {
                (Some(f), _) => Ok((f.lambda, Some(f.nu))),
                (None, Some(e)) => Err(e.clone()),
                (None, None) => Err("no fit".to_string()),
            };
            ((pf.i, pf.j), r)
        })
        .collect();
    assemble(Measure::LambdaT, tickers, results)
}
