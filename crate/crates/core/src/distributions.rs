//! Univariate distribution functions used throughout the crate.
//!
//! The Student t CDF is evaluated through the regularized incomplete beta
//! function; its quantile is a safeguarded Newton iteration on `ln F`
//! started from Hill's approximation. Log-gamma, the error function and the
//! regularized incomplete gamma come from `statrs`.

use statrs::function::erf::{erfc, erfc_inv};
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{Error, Result};

/// Probabilities are kept inside `[PROB_CLAMP, 1 - PROB_CLAMP]` before any
/// quantile or log transform that would otherwise return an infinity.
pub const PROB_CLAMP: f64 = 1e-16;

/// Above this many degrees of freedom the t distribution is evaluated with
/// its first-order expansion around the normal; the truncation error is
/// O(nu^-2).
const NU_ASYMPTOTIC: f64 = 1e5;

const CF_MAX_ITER: usize = 20_000;
const CF_EPS: f64 = 1e-16;
const FP_MIN: f64 = 1e-300;

pub fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FP_MIN {
        d = FP_MIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FP_MIN {
            d = FP_MIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FP_MIN {
            c = FP_MIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FP_MIN {
            d = FP_MIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FP_MIN {
            c = FP_MIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= CF_EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)` given both `x` and `y = 1 - x`
/// (passing `y` separately avoids cancellation when `x` is close to one).
/// `ln_b` must equal `ln B(a, b)`.
fn beta_reg_with(a: f64, b: f64, x: f64, y: f64, ln_b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let front = (a * x.ln() + b * y.ln() - ln_b).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, y) / b
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn beta_reg(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "incomplete beta needs a, b > 0 (got {a}, {b})"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "incomplete beta needs x in [0, 1] (got {x})"
        )));
    }
    Ok(beta_reg_with(a, b, x, 1.0 - x, ln_beta(a, b)))
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Upper tail `P(X > x)` of a chi-square variable with `k` degrees of freedom.
pub fn chi_square_sf(x: f64, k: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        gamma_ur(0.5 * k, 0.5 * x)
    }
}

pub fn chi_square_cdf(x: f64, k: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        gamma_lr(0.5 * k, 0.5 * x)
    }
}

/// Student t distribution with `nu` degrees of freedom. Construction
/// precomputes the normalizing constant so repeated evaluations at fixed
/// `nu` (as in likelihood profiling) stay cheap.
#[derive(Debug, Clone, Copy)]
pub struct StudentT {
    nu: f64,
    ln_b: f64,
}

impl StudentT {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "degrees of freedom must be positive and finite (got {nu})"
            )));
        }
        Ok(Self {
            nu,
            ln_b: ln_beta(0.5 * nu, 0.5),
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        let nu = self.nu;
        -self.ln_b - 0.5 * nu.ln() - 0.5 * (nu + 1.0) * (x * x / nu).ln_1p()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    /// `P(T > |x|)`.
    fn tail(&self, x: f64) -> f64 {
        let nu = self.nu;
        let x2 = x * x;
        if nu > NU_ASYMPTOTIC {
            let ax = x.abs();
            return normal_cdf(-ax) + normal_pdf(ax) * (ax * x2 + ax) / (4.0 * nu);
        }
        let z = nu / (nu + x2);
        let w = x2 / (nu + x2);
        0.5 * beta_reg_with(0.5 * nu, 0.5, z, w, self.ln_b)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x == 0.0 {
            return 0.5;
        }
        let t = self.tail(x);
        if x < 0.0 {
            t
        } else {
            1.0 - t
        }
    }

    /// Quantile function; `p` must lie in `[0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        if p.is_nan() {
            return f64::NAN;
        }
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        if p == 0.5 {
            return 0.0;
        }
        let lower = p < 0.5;
        let q = if lower { p } else { 1.0 - p };
        // Solve tail(x) = q for x > 0. Because 1 - p is exact only for p near
        // one, solving on the smaller tail keeps full relative accuracy.
        let x = self.upper_tail_quantile(q, if lower { None } else { Some(p) });
        if lower {
            -x
        } else {
            x
        }
    }

    fn upper_tail_quantile(&self, q: f64, p_upper: Option<f64>) -> f64 {
        let nu = self.nu;
        if (nu - 1.0).abs() < 1e-12 {
            return (std::f64::consts::PI * (0.5 - q)).tan();
        }
        if (nu - 2.0).abs() < 1e-12 {
            let pp = 2.0 * q;
            return (2.0 / (pp * (2.0 - pp)) - 2.0).sqrt();
        }
        let mut x = hill_guess(q, nu);
        if !x.is_finite() || x <= 0.0 {
            x = -normal_quantile(q);
        }
        // Newton on g(x) = ln tail(x) - ln q, which is decreasing in x.
        let target = q.ln();
        let mut lo = 0.0_f64;
        let mut hi = f64::INFINITY;
        for _ in 0..200 {
            let t = self.tail(x);
            if t > q {
                lo = x;
            } else {
                hi = x;
            }
            let g = t.ln() - target;
            let dg = -self.pdf(x) / t;
            let mut next = x - g / dg;
            if !next.is_finite() || next <= lo || next >= hi {
                next = if hi.is_finite() {
                    0.5 * (lo + hi)
                } else {
                    2.0 * x.max(1.0)
                };
            }
            let step = (next - x).abs();
            x = next;
            if step <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
        // For p > 0.5 the caller compares against p itself; nudge by an ulp
        // when that improves the match of the rounded CDF.
        if let Some(p) = p_upper {
            let err = |y: f64| (self.cdf(y) - p).abs();
            let mut best = x;
            for cand in [next_down(x), next_up(x)] {
                if err(cand) < err(best) {
                    best = cand;
                }
            }
            return best;
        }
        x
    }
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

fn next_down(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

/// Hill (1970) approximation to the upper-tail quantile of t_nu at tail
/// probability `q` (one-sided).
fn hill_guess(q: f64, nu: f64) -> f64 {
    let p2 = 2.0 * q;
    let a = 1.0 / (nu - 0.5);
    let b = 48.0 / (a * a);
    let mut c = ((20700.0 * a / b - 98.0) * a - 16.0) * a + 96.36;
    let d = ((94.5 / (b + c) - 3.0) / b + 1.0) * (a * std::f64::consts::FRAC_PI_2).sqrt() * nu;
    let mut y = (d * p2).powf(2.0 / nu);
    if y > 0.05 + a {
        let x = normal_quantile(0.5 * p2);
        y = x * x;
        if nu < 5.0 {
            c += 0.3 * (nu - 4.5) * (x + 0.6);
        }
        c = (((0.05 * d * x - 5.0) * x - 7.0) * x - 2.0) * x + b + c;
        y = (((((0.4 * y + 6.3) * y + 36.0) * y + 94.5) / c - y - 3.0) / b + 1.0) * x;
        y = (a * y * y).exp_m1();
    } else {
        y = ((1.0 / (((nu + 6.0) / (nu * y) - 0.089 * d - 0.822) * (nu + 2.0) * 3.0)
            + 0.5 / (nu + 4.0))
            * y
            - 1.0)
            * (nu + 1.0)
            / (nu + 2.0)
            + 1.0 / y;
    }
    (nu * y).sqrt()
}

/// CDF of the t distribution with `nu` degrees of freedom.
pub fn student_t_cdf(x: f64, nu: f64) -> Result<f64> {
    Ok(StudentT::new(nu)?.cdf(x))
}

/// Quantile of the t distribution with `nu` degrees of freedom, `p` in (0, 1).
pub fn student_t_quantile(p: f64, nu: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "quantile probability must lie in (0, 1) (got {p})"
        )));
    }
    Ok(StudentT::new(nu)?.quantile(p))
}

/// The t distribution rescaled to unit variance, `F(z) = t_nu(z sqrt(nu / (nu - 2)))`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledT {
    t: StudentT,
    scale: f64,
}

impl ScaledT {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > 2.0) {
            return Err(Error::InvalidArgument(format!(
                "scaled t needs nu > 2 (got {nu})"
            )));
        }
        Ok(Self {
            t: StudentT::new(nu)?,
            scale: (nu / (nu - 2.0)).sqrt(),
        })
    }

    pub fn nu(&self) -> f64 {
        self.t.nu
    }

    pub fn cdf(&self, z: f64) -> f64 {
        self.t.cdf(z * self.scale)
    }

    pub fn ln_pdf(&self, z: f64) -> f64 {
        self.t.ln_pdf(z * self.scale) + self.scale.ln()
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.t.quantile(p) / self.scale
    }
}
