//! Sufficient conditions for two bivariate Matérn Gaussian measures to be
//! equivalent on a bounded domain: matching microergodic parameters
//! `sigma² alpha^(2 nu)` for both marginals and matching cross-correlation.
//!
//! The checker is pure parameter arithmetic. A `true` verdict means the
//! sufficient conditions hold; `false` means they fail, with no claim about
//! necessity. The underlying result is stated for domains of dimension <= 3;
//! nothing dimensional enters the computation, so that restriction is not
//! enforced here.

use crate::error::{Error, Result};

/// Parameters of one bivariate Matérn measure: marginal variances, the
/// cross covariance at lag 0, and the shared scale and smoothness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateMaternSpec {
    sigma11: f64,
    sigma22: f64,
    sigma12: f64,
    alpha: f64,
    nu: f64,
}

impl BivariateMaternSpec {
    /// Requires positive variances/scale/smoothness and
    /// `|sigma12| <= sqrt(sigma11 sigma22)`.
    pub fn new(sigma11: f64, sigma22: f64, sigma12: f64, alpha: f64, nu: f64) -> Result<Self> {
        for (name, v) in [
            ("sigma11", sigma11),
            ("sigma22", sigma22),
            ("alpha", alpha),
            ("nu", nu),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        if !sigma12.is_finite() || sigma12.abs() > (sigma11 * sigma22).sqrt() {
            return Err(Error::InvalidParameter(format!(
                "|sigma12| <= sqrt(sigma11 sigma22) required, got sigma12 = {sigma12}"
            )));
        }
        Ok(Self {
            sigma11,
            sigma22,
            sigma12,
            alpha,
            nu,
        })
    }

    pub fn sigma11(&self) -> f64 {
        self.sigma11
    }

    pub fn sigma22(&self) -> f64 {
        self.sigma22
    }

    pub fn sigma12(&self) -> f64 {
        self.sigma12
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Cross-correlation coefficient `sigma12 / sqrt(sigma11 sigma22)`.
    pub fn cross_correlation(&self) -> f64 {
        self.sigma12 / (self.sigma11 * self.sigma22).sqrt()
    }
}

/// The microergodic parameter `sigma2 * alpha^(2 nu)` of one Matérn marginal
/// (sigma2 read as the variance).
pub fn microergodic(sigma2: f64, alpha: f64, nu: f64) -> f64 {
    sigma2 * alpha.powf(2.0 * nu)
}

/// Residuals of one matching condition.
#[derive(Debug, Clone)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// |lhs - rhs|
    pub abs_residual: f64,
    /// |lhs - rhs| / max(|lhs|, |rhs|); 0 when both sides are 0.
    pub rel_residual: f64,
    pub satisfied: bool,
}

/// Verdict of the sufficient-condition check with per-condition diagnostics.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub satisfied: bool,
    pub conditions: Vec<ConditionCheck>,
}

fn check_condition(name: &'static str, lhs: f64, rhs: f64, rel_tol: f64) -> ConditionCheck {
    let abs_residual = (lhs - rhs).abs();
    let scale = lhs.abs().max(rhs.abs());
    let rel_residual = if scale == 0.0 {
        0.0
    } else {
        abs_residual / scale
    };
    ConditionCheck {
        name,
        lhs,
        rhs,
        abs_residual,
        rel_residual,
        satisfied: rel_residual <= rel_tol,
    }
}

/// Checks the sufficient conditions against a relative tolerance (default
/// choice elsewhere: 1e-9; the condition is exact-parameter, the tolerance
/// only absorbs input roundoff). Both specs must share the smoothness.
pub fn check_equivalence_conditions(
    spec1: &BivariateMaternSpec,
    spec2: &BivariateMaternSpec,
    rel_tol: f64,
) -> Result<EquivalenceReport> {
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rel_tol must be finite and > 0, got {rel_tol}"
        )));
    }
    if spec1.nu != spec2.nu {
        return Err(Error::InvalidParameter(format!(
            "the sufficient conditions assume a common smoothness, got nu = {} vs {}",
            spec1.nu, spec2.nu
        )));
    }
    let conditions = vec![
        check_condition(
            "microergodic sigma11 alpha^2nu",
            microergodic(spec1.sigma11, spec1.alpha, spec1.nu),
            microergodic(spec2.sigma11, spec2.alpha, spec2.nu),
            rel_tol,
        ),
        check_condition(
            "microergodic sigma22 alpha^2nu",
            microergodic(spec1.sigma22, spec1.alpha, spec1.nu),
            microergodic(spec2.sigma22, spec2.alpha, spec2.nu),
            rel_tol,
        ),
        check_condition(
            "cross-correlation",
            spec1.cross_correlation(),
            spec2.cross_correlation(),
            rel_tol,
        ),
    ];
    Ok(EquivalenceReport {
        satisfied: conditions.iter().all(|c| c.satisfied),
        conditions,
    })
}
