//! Closed-form cokriging weights, exact finite-n prediction variances and
//! their small-1/n leading terms for the interleaved design under the
//! proportional exponential model.
//!
//! Every exponential below is evaluated directly as `exp(-k alpha / n)` for
//! integer k; the expressions are compared against the dense solver at 1e-10
//! and leave no budget for compounded powering error.
//!
//! Variances enter all formulas linearly through `sigma11`, the variance of
//! the predicted component (the unsquared reading of the sigma notation);
//! the dense solver confirms that convention on every grid.

use crate::covariance::Var;
use crate::error::{Error, Result};

/// The six weights carried by the cokriging predictor on the interleaved
/// design: b1, b2 on Y1(∓2/n); b3, b6 on Y2(∓2/n); b4, b5 on Y2(∓1/n).
/// Symmetry of the design about 0 forces b1 = b2, b3 = b6, b4 = b5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormWeights {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b5: f64,
    pub b6: f64,
}

impl ClosedFormWeights {
    /// The observations the six weights attach to, with sites computed
    /// exactly as the interleaved design computes them.
    pub fn support_keys(n: usize) -> [(Var, f64); 6] {
        let nf = n as f64;
        [
            (Var::Y1, -2.0 / nf),
            (Var::Y1, 2.0 / nf),
            (Var::Y2, -2.0 / nf),
            (Var::Y2, -1.0 / nf),
            (Var::Y2, 1.0 / nf),
            (Var::Y2, 2.0 / nf),
        ]
    }

    /// Weights in the order of [`ClosedFormWeights::support_keys`].
    pub fn values(&self) -> [f64; 6] {
        [self.b1, self.b2, self.b3, self.b4, self.b5, self.b6]
    }
}

fn check_grid_params(n: usize, alpha: f64, r: f64) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "n must be an even integer >= 2, got {n}"
        )));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be finite and > 0, got {alpha}"
        )));
    }
    if !(r.is_finite() && r.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "|r| < 1 required, got {r}"
        )));
    }
    Ok(())
}

/// Closed-form cokriging weights for the interleaved design of size n:
///
/// b1 = b2 = e^(-2a/n) / (e^(-4a/n) + 1)
/// b3 = b6 = -r e^(-2a/n) / (e^(-4a/n) + 1)
/// b4 = b5 =  r e^(-a/n)  / (e^(-2a/n) + 1)
pub fn cokrige_weights_closed(n: usize, alpha: f64, r: f64) -> Result<ClosedFormWeights> {
    check_grid_params(n, alpha, r)?;
    let nf = n as f64;
    let e1 = (-alpha / nf).exp();
    let e2 = (-2.0 * alpha / nf).exp();
    let e4 = (-4.0 * alpha / nf).exp();
    let b12 = e2 / (e4 + 1.0);
    let b36 = -r * e2 / (e4 + 1.0);
    let b45 = r * e1 / (e2 + 1.0);
    Ok(ClosedFormWeights {
        b1: b12,
        b2: b12,
        b3: b36,
        b4: b45,
        b5: b45,
        b6: b36,
    })
}

/// Exact cokriging prediction variance on the interleaved design:
///
/// -s11 (-2 e^(-4a/n) r² + e^(-6a/n) + 2 e^(-2a/n) r² + e^(-4a/n)
///       - e^(-2a/n) - 1) / ((e^(-4a/n) + 1)(e^(-2a/n) + 1))
///
/// which expands to s11 (2 - r²) a/n + o(1/n²).
pub fn cokrige_variance_closed(n: usize, alpha: f64, r: f64, sigma11: f64) -> Result<f64> {
    check_grid_params(n, alpha, r)?;
    if !(sigma11.is_finite() && sigma11 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sigma11 must be finite and > 0, got {sigma11}"
        )));
    }
    let nf = n as f64;
    let e2 = (-2.0 * alpha / nf).exp();
    let e4 = (-4.0 * alpha / nf).exp();
    let e6 = (-6.0 * alpha / nf).exp();
    let r2 = r * r;
    Ok(
        -sigma11 * (-2.0 * e4 * r2 + e6 + 2.0 * e2 * r2 + e4 - e2 - 1.0)
            / ((e4 + 1.0) * (e2 + 1.0)),
    )
}

/// Kriging variance from two neighbors at distance d on each side:
/// `sigma11 (1 - u²)/(1 + u²)` with `u = e^(-alpha d)`. Expands to
/// `2 sigma11 alpha d` for small d, i.e. `2 sigma11 alpha / n` at d = 2/n.
pub fn krige_variance_two_neighbor(d: f64, alpha: f64, sigma11: f64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "half-spacing d must be finite and > 0, got {d}"
        )));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be finite and > 0, got {alpha}"
        )));
    }
    if !(sigma11.is_finite() && sigma11 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sigma11 must be finite and > 0, got {sigma11}"
        )));
    }
    let u = (-alpha * d).exp();
    Ok(sigma11 * (1.0 - u * u) / (1.0 + u * u))
}
