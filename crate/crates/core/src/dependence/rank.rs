use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column-major matrix of pseudo-observations in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoObsMatrix {
    pub tickers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl PseudoObsMatrix {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Wraps columns that are already on the copula scale.
    pub fn from_columns(tickers: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if tickers.len() != columns.len() {
            return Err(Error::DimensionMismatch {
                expected: tickers.len(),
                got: columns.len(),
            });
        }
        let t = columns.first().map_or(0, Vec::len);
        for (name, c) in tickers.iter().zip(&columns) {
            if c.len() != t {
                return Err(Error::DimensionMismatch {
                    expected: t,
                    got: c.len(),
                });
            }
            if c.iter().any(|v| !(*v > 0.0 && *v < 1.0)) {
                return Err(Error::InvalidArgument(format!(
                    "column \"{name}\" has entries outside (0,1)"
                )));
            }
        }
        Ok(Self { tickers, columns })
    }
}

/// Average ranks (1-based) of `x`.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        // positions i..j share the average of ranks i+1..=j
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &idx[i..j] {
            ranks[k] = avg;
        }
        i = j;
    }
    ranks
}

/// Columnwise ranks divided by `T + 1`, average ranks on ties.
pub fn pseudo_observations(tickers: &[String], columns: &[Vec<f64>]) -> Result<PseudoObsMatrix> {
    if tickers.len() != columns.len() {
        return Err(Error::DimensionMismatch {
            expected: tickers.len(),
            got: columns.len(),
        });
    }
    let t = columns.first().map_or(0, Vec::len);
    if t < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 rows (got {t})")));
    }
    let mut out = Vec::with_capacity(columns.len());
    for (name, c) in tickers.iter().zip(columns) {
        if c.len() != t {
            return Err(Error::DimensionMismatch {
                expected: t,
                got: c.len(),
            });
        }
        if c.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidArgument(format!("column \"{name}\" contains NaN")));
        }
        let denom = (t + 1) as f64;
        out.push(average_ranks(c).into_iter().map(|r| r / denom).collect());
    }
    Ok(PseudoObsMatrix {
        tickers: tickers.to_vec(),
        columns: out,
    })
}

fn check_pair(u: &[f64], v: &[f64]) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    if u.len() < 2 {
        return Err(Error::InvalidArgument("need at least 2 observations".into()));
    }
    if u.iter().chain(v).any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("NaN in input".into()));
    }
    Ok(())
}

/// Number of tied pairs, `sum g(g-1)/2` over runs of equal values in a
/// sorted slice.
fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sorts `v` with a stable merge sort and returns the number of swaps
/// (inversions) it performed.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(left, bl) + merge_count(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Kendall's tau-b in `O(n log n)` (Knight's merge-sort algorithm).
pub fn kendall_tau(u: &[f64], v: &[f64]) -> Result<f64> {
    check_pair(u, v)?;
    // adding zero folds -0.0 into 0.0 so sorting and equality agree
    let u: Vec<f64> = u.iter().map(|x| x + 0.0).collect();
    let v: Vec<f64> = v.iter().map(|x| x + 0.0).collect();
    let n = u.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| u[a].total_cmp(&u[b]).then(v[a].total_cmp(&v[b])));

    let us: Vec<f64> = idx.iter().map(|&k| u[k]).collect();
    let pairs: Vec<(f64, f64)> = idx.iter().map(|&k| (u[k], v[k])).collect();
    let ties_u = tied_pairs(&us);
    let ties_joint = tied_pairs(&pairs);

    let mut vs: Vec<f64> = idx.iter().map(|&k| v[k]).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut vs, &mut buf);
    let ties_v = tied_pairs(&vs);

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    if ties_u == n0 || ties_v == n0 {
        return Err(Error::Degenerate("constant input to kendall_tau".into()));
    }
    let s = n0 as i64 - ties_u as i64 - ties_v as i64 + ties_joint as i64 - 2 * swaps as i64;
    Ok(tau_b(s, n0 - ties_u, n0 - ties_v))
}

/// `s / sqrt(a b)`, shared with the brute-force reference so both produce
/// bit-identical results from the same integer counts.
pub(crate) fn tau_b(s: i64, a: u64, b: u64) -> f64 {
    s as f64 / ((a as f64) * (b as f64)).sqrt()
}

/// Spearman's rho: Pearson correlation of average ranks.
pub fn spearman_rho(u: &[f64], v: &[f64]) -> Result<f64> {
    check_pair(u, v)?;
    let ru = average_ranks(u);
    let rv = average_ranks(v);
    let n = u.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut suv, mut suu, mut svv) = (0.0, 0.0, 0.0);
    for (a, b) in ru.iter().zip(&rv) {
        let (da, db) = (a - mean, b - mean);
        suv += da * db;
        suu += da * da;
        svv += db * db;
    }
    if suu == 0.0 || svv == 0.0 {
        return Err(Error::Degenerate("constant input to spearman_rho".into()));
    }
    Ok((suv / (suu * svv).sqrt()).clamp(-1.0, 1.0))
}
