use crate::error::{Error, Result};

pub const DEFAULT_CORNER: f64 = 0.1;
pub const MIN_CORNER_ROWS: usize = 10;

/// Nonparametric upper tail dependence from the conditional Spearman's rho
/// of the `[1-p, 1]^2` corner.
///
/// With `W = 1 - U`, the corner statistic `A = mean((p - W1)+ (p - W2)+)`
/// equals `p^4/4` under independence and `p^3/3` under comonotonicity; the
/// estimate rescales `A` linearly between those limits and clamps to
/// `[0, 1]`.
pub fn lambda_nonparam(u: &[f64], v: &[f64], p: f64) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::InvalidArgument(format!("corner cutoff must lie in (0, 0.5] (got {p})")));
    }
    let mut corner = 0usize;
    let mut a = 0.0;
    for (&x, &y) in u.iter().zip(v) {
        let (wx, wy) = (1.0 - x, 1.0 - y);
        if wx <= p && wy <= p {
            corner += 1;
            a += (p - wx) * (p - wy);
        }
    }
    if corner < MIN_CORNER_ROWS {
        return Err(Error::InsufficientCornerMass {
            found: corner,
            needed: MIN_CORNER_ROWS,
        });
    }
    a /= u.len() as f64;
    let p3 = p * p * p;
    let p4 = p3 * p;
    let indep = p4 / 4.0;
    Ok(((a - indep) / (p3 / 3.0 - indep)).clamp(0.0, 1.0))
}
