//! Exact simple kriging and cokriging for the zero-mean bivariate model:
//! best-linear-predictor weights and prediction error variance from the SPD
//! covariance system, plus seeded Gaussian path sampling for Monte Carlo
//! validation.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::covariance::{cov_matrix_from_keys, joint_keys, BivariateModel, Var};
use crate::design::Design;
use crate::error::{Error, Result};
use crate::linalg::{dot_compensated, SpdFactor};

/// Weights with magnitude above this threshold count as the effective
/// support of a predictor. Far above the solve error at the condition
/// numbers reached here, far below any true weight on the studied designs.
pub const EFFECTIVE_SUPPORT_THRESHOLD: f64 = 1e-10;

/// One predictor weight, keyed by the observation it multiplies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight {
    pub var: Var,
    pub site: f64,
    pub value: f64,
}

/// Best-linear-predictor weights and the exact prediction error variance.
#[derive(Debug, Clone)]
pub struct Prediction {
    weights: Vec<Weight>,
    variance: f64,
    variance_clamped: bool,
}

impl Prediction {
    fn new(keys: Vec<(Var, f64)>, solution: DVector<f64>, variance: f64) -> Self {
        let weights = keys
            .into_iter()
            .zip(solution.iter())
            .map(|((var, site), &value)| Weight { var, site, value })
            .collect();
        let variance_clamped = variance < 0.0;
        Self {
            weights,
            variance: if variance_clamped { 0.0 } else { variance },
            variance_clamped,
        }
    }

    /// Weights in observation order: all Y1 sites, then all Y2 sites.
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Weight of a specific observation (exact site match), if present.
    pub fn weight_for(&self, var: Var, site: f64) -> Option<f64> {
        self.weights
            .iter()
            .find(|w| w.var == var && w.site == site)
            .map(|w| w.value)
    }

    /// Prediction error variance, clamped to 0 when roundoff drives it
    /// marginally negative (interpolation legitimately reaches 0).
    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// True when the raw variance was negative and has been clamped.
    pub fn variance_clamped(&self) -> bool {
        self.variance_clamped
    }

    /// Weights above the effective-support threshold.
    pub fn support(&self) -> Vec<&Weight> {
        self.weights
            .iter()
            .filter(|w| w.value.abs() > EFFECTIVE_SUPPORT_THRESHOLD)
            .collect()
    }
}

/// Covariances between Y1 at the target and each keyed observation.
fn target_cross_cov(keys: &[(Var, f64)], target: f64, m: &BivariateModel) -> DVector<f64> {
    DVector::from_fn(keys.len(), |i, _| {
        m.cov(Var::Y1, keys[i].0, target - keys[i].1)
    })
}

fn solve_prediction(keys: Vec<(Var, f64)>, m: &BivariateModel, target: f64) -> Result<Prediction> {
    let cov = cov_matrix_from_keys(&keys, m, 0.0);
    let c = target_cross_cov(&keys, target, m);
    let factor = SpdFactor::new(&cov)?;
    let w = factor.solve_refined(&cov, &c);
    let variance = m.sigma11() - dot_compensated(&c, &w);
    Ok(Prediction::new(keys, w, variance))
}

/// Simple kriging of Y1 at the design target from the Y1 observations only.
pub fn krige(design: &Design, m: &BivariateModel) -> Result<Prediction> {
    if design.sites1().is_empty() {
        return Err(Error::InvalidDesign(
            "kriging needs at least one Y1 observation".into(),
        ));
    }
    let keys: Vec<(Var, f64)> = design.sites1().iter().map(|&s| (Var::Y1, s)).collect();
    solve_prediction(keys, m, design.target())
}

/// Cokriging of Y1 at the design target from all observations of both
/// variables, solving the dense joint covariance system.
pub fn cokrige(design: &Design, m: &BivariateModel) -> Result<Prediction> {
    if design.is_empty() {
        return Err(Error::InvalidDesign(
            "cokriging needs at least one observation".into(),
        ));
    }
    solve_prediction(joint_keys(design), m, design.target())
}

/// Cokriging on a collocated design via the Kronecker structure `V ⊗ R`:
/// solves the 2x2 lag-0 matrix and the common correlation matrix separately
/// instead of the joint system. Cross-checked against [`cokrige`] in tests;
/// rejects non-collocated designs.
pub fn cokrige_kronecker(design: &Design, m: &BivariateModel) -> Result<Prediction> {
    if !design.is_collocated() {
        return Err(Error::InvalidDesign(
            "the Kronecker solve requires a collocated design".into(),
        ));
    }
    let sites = design.sites1();
    let n = sites.len();
    let corr = DMatrix::from_fn(n, n, |i, j| m.corr(sites[i] - sites[j]));
    let k = DVector::from_fn(n, |i, _| m.corr(design.target() - sites[i]));
    let factor = SpdFactor::new(&corr)?;
    let rw = factor.solve_refined(&corr, &k);

    // u = V^-1 (sigma11, sigma12)^T is exactly (1, 0): (sigma11, sigma12) is
    // the first row of V. All Y2 weights vanish identically on this path.
    let s11 = m.sigma11();
    let keys = joint_keys(design);
    let mut w = DVector::zeros(2 * n);
    for i in 0..n {
        w[i] = rw[i];
    }
    let variance = s11 - s11 * dot_compensated(&k, &rw);
    Ok(Prediction::new(keys, w, variance))
}

/// Kriging under the exponential model using only the two Y1 sites that
/// bracket the target, which the Markov property makes exact. The target must
/// lie strictly between the smallest and largest Y1 site; a target equal to
/// an observed site is its own predictor.
pub fn markov_krige(design: &Design, m: &BivariateModel) -> Result<Prediction> {
    if !m.is_exponential() {
        return Err(Error::InvalidParameter(
            "the two-neighbor property requires the exponential model (nu = 1/2)".into(),
        ));
    }
    let sites = design.sites1();
    if sites.is_empty() {
        return Err(Error::InvalidDesign(
            "kriging needs at least one Y1 observation".into(),
        ));
    }
    let t = design.target();
    let keys: Vec<(Var, f64)> = sites.iter().map(|&s| (Var::Y1, s)).collect();
    let mut w = DVector::zeros(sites.len());

    if let Some(hit) = sites.iter().position(|&s| s == t) {
        w[hit] = 1.0;
        return Ok(Prediction::new(keys, w, 0.0));
    }

    let min = sites.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sites.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(t > min && t < max) {
        return Err(Error::InvalidDesign(format!(
            "target {t} is not strictly inside the Y1 site range [{min}, {max}] required by the two-neighbor property"
        )));
    }
    let (mut il, mut ir) = (usize::MAX, usize::MAX);
    for (i, &s) in sites.iter().enumerate() {
        if s < t && (il == usize::MAX || s > sites[il]) {
            il = i;
        }
        if s > t && (ir == usize::MAX || s < sites[ir]) {
            ir = i;
        }
    }
    // 2x2 system with entries from the same covariance code as the dense path
    let u_l = m.corr(t - sites[il]);
    let u_r = m.corr(sites[ir] - t);
    let rho = m.corr(sites[ir] - sites[il]);
    let det = 1.0 - rho * rho;
    w[il] = (u_l - rho * u_r) / det;
    w[ir] = (u_r - rho * u_l) / det;
    let variance = m.sigma11() * (1.0 - w[il] * u_l - w[ir] * u_r);
    Ok(Prediction::new(keys, w, variance))
}

/// Joint Gaussian realizations of Y1 at the target and every observation in
/// the design, drawn as `L z` from the Cholesky factor of the extended
/// covariance. Deterministic for a fixed seed.
#[derive(Debug, Clone)]
pub struct SamplePaths {
    keys: Vec<(Var, f64)>,
    data: DMatrix<f64>,
}

impl SamplePaths {
    pub fn count(&self) -> usize {
        self.data.ncols()
    }

    /// The realized Y1 value at the prediction target in draw `k`.
    pub fn y1_target(&self, k: usize) -> f64 {
        self.data[(0, k)]
    }

    /// Realized observation values of draw `k`, Y1 sites then Y2 sites.
    pub fn observations(&self, k: usize) -> &[f64] {
        &self.draw(k)[1..]
    }

    /// Full column of draw `k`: Y1 at the target, then the observations.
    fn draw(&self, k: usize) -> &[f64] {
        let dim = self.keys.len();
        &self.data.as_slice()[k * dim..(k + 1) * dim]
    }

    /// Empirical mean squared prediction error of a predictor over all
    /// draws. Weights are matched to observations by (variable, site) key.
    pub fn empirical_mse(&self, prediction: &Prediction) -> f64 {
        let obs_keys = &self.keys[1..];
        let positions: Vec<usize> = prediction
            .weights()
            .iter()
            .map(|w| {
                obs_keys
                    .iter()
                    .position(|&(var, site)| var == w.var && site == w.site)
                    .expect("prediction weight keys must come from the sampled design")
            })
            .collect();
        let mut acc = 0.0;
        for k in 0..self.count() {
            let col = self.draw(k);
            let mut fitted = 0.0;
            for (w, &pos) in prediction.weights().iter().zip(&positions) {
                fitted += w.value * col[1 + pos];
            }
            let err = col[0] - fitted;
            acc += err * err;
        }
        acc / self.count() as f64
    }
}

/// Draws `count` joint realizations with the given seed.
pub fn sample_paths(
    design: &Design,
    m: &BivariateModel,
    seed: u64,
    count: usize,
) -> Result<SamplePaths> {
    if count < 1 {
        return Err(Error::InvalidParameter(
            "sample count must be at least 1".into(),
        ));
    }
    let mut keys = vec![(Var::Y1, design.target())];
    keys.extend(joint_keys(design));
    let cov = cov_matrix_from_keys(&keys, m, 0.0);
    let lower = SpdFactor::new(&cov)?.lower();
    let dim = keys.len();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut data = DMatrix::zeros(dim, count);
    let mut z = DVector::zeros(dim);
    for k in 0..count {
        for i in 0..dim {
            z[i] = rng.sample(StandardNormal);
        }
        data.column_mut(k).gemv(1.0, &lower, &z, 0.0);
    }
    Ok(SamplePaths { keys, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{collocated_design, interleaved_design, Design};
    use approx::assert_abs_diff_eq;

    fn exp_model(sigma11: f64, sigma22: f64, r: f64, alpha: f64) -> BivariateModel {
        BivariateModel::exponential(sigma11, sigma22, r, alpha).unwrap()
    }

    #[test]
    fn single_observation_closed_form() {
        // one site at distance d: weight e^{-alpha d}, variance
        // sigma11 (1 - e^{-2 alpha d})
        let m = exp_model(1.5, 1.0, 0.0, 2.0);
        let d = Design::new(vec![0.3], vec![], 0.0).unwrap();
        let p = krige(&d, &m).unwrap();
        assert_abs_diff_eq!(
            p.weight_for(Var::Y1, 0.3).unwrap(),
            0.5488116360940264,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(p.variance(), 1.048208682131697, epsilon = 1e-14);
    }

    #[test]
    fn two_symmetric_neighbors_closed_form() {
        // sites at ±d with u = e^{-alpha d}: weight u/(1+u²) each,
        // variance sigma11 (1-u²)/(1+u²)
        let m = exp_model(1.5, 1.0, 0.0, 2.0);
        let d = Design::new(vec![-0.3, 0.3], vec![], 0.0).unwrap();
        let p = krige(&d, &m).unwrap();
        for site in [-0.3, 0.3] {
            assert_abs_diff_eq!(
                p.weight_for(Var::Y1, site).unwrap(),
                0.4217753438109033,
                epsilon = 1e-14
            );
        }
        assert_abs_diff_eq!(p.variance(), 0.8055743504970533, epsilon = 1e-14);
    }

    #[test]
    fn target_on_observed_site_interpolates() {
        let m = exp_model(2.0, 1.0, 0.0, 3.0);
        let d = Design::new(vec![-0.5, 0.25, 0.8], vec![], 0.25).unwrap();
        let p = krige(&d, &m).unwrap();
        assert_abs_diff_eq!(p.weight_for(Var::Y1, 0.25).unwrap(), 1.0, epsilon = 1e-12);
        assert!(p.weight_for(Var::Y1, -0.5).unwrap().abs() < 1e-12);
        assert!(p.weight_for(Var::Y1, 0.8).unwrap().abs() < 1e-12);
        assert!(p.variance() < 1e-12);
    }

    #[test]
    fn krige_requires_y1_observations() {
        let m = exp_model(1.0, 1.0, 0.5, 2.0);
        let d = Design::new(vec![], vec![0.5], 0.0).unwrap();
        assert!(krige(&d, &m).is_err());
        // but cokriging from Y2 alone works
        let p = cokrige(&d, &m).unwrap();
        assert_eq!(p.weights().len(), 1);
        assert!(p.variance() < m.sigma11());
    }

    #[test]
    fn collocated_cokriging_equals_kriging() {
        let m = exp_model(1.3, 0.6, 0.7, 2.0);
        let d = collocated_design(&[-0.8, -0.1, 0.2, 0.9], 0.05).unwrap();
        let k = krige(&d, &m).unwrap();
        let ck = cokrige(&d, &m).unwrap();
        for w in ck.weights() {
            match w.var {
                Var::Y1 => assert_abs_diff_eq!(
                    w.value,
                    k.weight_for(Var::Y1, w.site).unwrap(),
                    epsilon = 1e-10
                ),
                Var::Y2 => assert!(w.value.abs() < 1e-10, "Y2 weight {}", w.value),
            }
        }
        assert_abs_diff_eq!(ck.variance(), k.variance(), epsilon = 1e-12);
    }

    #[test]
    fn kronecker_path_agrees_with_dense_path() {
        let m = exp_model(1.3, 0.6, 0.7, 2.0);
        let d = collocated_design(&[-0.8, -0.1, 0.2, 0.9], 0.05).unwrap();
        let dense = cokrige(&d, &m).unwrap();
        let kron = cokrige_kronecker(&d, &m).unwrap();
        for (a, b) in dense.weights().iter().zip(kron.weights()) {
            assert_eq!((a.var, a.site), (b.var, b.site));
            assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(dense.variance(), kron.variance(), epsilon = 1e-12);
        assert!(cokrige_kronecker(&interleaved_design(4).unwrap(), &m).is_err());
    }

    #[test]
    fn interleaved_support_is_six_weights() {
        // dense-solve weights checked against LAPACK values and against the
        // closed forms (n=10, alpha=2, r=0.5)
        let m = exp_model(1.0, 1.0, 0.5, 2.0);
        let d = interleaved_design(10).unwrap();
        let p = cokrige(&d, &m).unwrap();
        let support = p.support();
        assert_eq!(support.len(), 6);
        let expect = [
            (Var::Y1, -0.2, 0.4625037259528775),
            (Var::Y1, 0.2, 0.4625037259528775),
            (Var::Y2, -0.2, -0.23125186297643877),
            (Var::Y2, -0.1, 0.2450819994111813),
            (Var::Y2, 0.1, 0.2450819994111813),
            (Var::Y2, 0.2, -0.23125186297643877),
        ];
        for (var, site, value) in expect {
            assert_abs_diff_eq!(p.weight_for(var, site).unwrap(), value, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(p.variance(), 0.3343055517476447, epsilon = 1e-12);
    }

    #[test]
    fn uncorrelated_auxiliary_changes_nothing() {
        let m = exp_model(1.0, 2.0, 0.0, 2.0);
        let d = interleaved_design(8).unwrap();
        let k = krige(&d, &m).unwrap();
        let ck = cokrige(&d, &m).unwrap();
        for w in ck.weights() {
            if w.var == Var::Y2 {
                assert!(w.value.abs() < 1e-12);
            }
        }
        assert_abs_diff_eq!(ck.variance(), k.variance(), epsilon = 1e-12);
    }

    #[test]
    fn markov_krige_matches_dense_krige() {
        let m = exp_model(1.0, 1.0, 0.5, 2.0);
        let d = interleaved_design(10).unwrap();
        let mk = markov_krige(&d, &m).unwrap();
        let full = krige(&d, &m).unwrap();
        // two-neighbor closed form: u/(1+u²) with u = e^{-0.4} on Y1(±0.2)
        for site in [-0.2, 0.2] {
            assert_abs_diff_eq!(
                mk.weight_for(Var::Y1, site).unwrap(),
                0.46250372595287753,
                epsilon = 1e-14
            );
        }
        for w in full.weights() {
            assert_abs_diff_eq!(
                w.value,
                mk.weight_for(w.var, w.site).unwrap(),
                epsilon = 1e-10
            );
            if w.site.abs() != 0.2 {
                assert!(w.value.abs() < 1e-10, "non-bracketing weight {}", w.value);
            }
        }
        assert_abs_diff_eq!(mk.variance(), full.variance(), epsilon = 1e-10);
    }

    #[test]
    fn two_neighbor_property_is_specific_to_the_exponential() {
        // under nu = 3/2 distant sites keep non-negligible dense weights
        let m = BivariateModel::new(1.0, 1.0, 0.5, 2.0, 1.5).unwrap();
        let d = interleaved_design(10).unwrap();
        let full = krige(&d, &m).unwrap();
        let distant: f64 = full
            .weights()
            .iter()
            .filter(|w| w.site.abs() > 0.2)
            .map(|w| w.value.abs())
            .fold(0.0, f64::max);
        assert!(
            distant > 1e-6,
            "distant weights {distant} unexpectedly small"
        );
        assert!(markov_krige(&d, &m).is_err());
    }

    #[test]
    fn markov_krige_needs_a_bracketing_pair() {
        let m = exp_model(1.0, 1.0, 0.0, 2.0);
        let d = Design::new(vec![0.2, 0.4], vec![], 0.1).unwrap();
        assert!(markov_krige(&d, &m).is_err());
        let d = Design::new(vec![0.2, 0.4], vec![], 0.4).unwrap();
        // boundary target sits on an observed site: exact interpolation
        let p = markov_krige(&d, &m).unwrap();
        assert_eq!(p.weight_for(Var::Y1, 0.4).unwrap(), 1.0);
        assert_eq!(p.variance(), 0.0);
    }

    #[test]
    fn markov_krige_asymmetric_bracket() {
        let m = exp_model(1.0, 1.0, 0.0, 1.7);
        let d = Design::new(vec![-0.9, -0.3, 0.5, 0.7], vec![], 0.1).unwrap();
        let mk = markov_krige(&d, &m).unwrap();
        let full = krige(&d, &m).unwrap();
        for w in full.weights() {
            assert_abs_diff_eq!(
                w.value,
                mk.weight_for(w.var, w.site).unwrap(),
                epsilon = 1e-10
            );
        }
        assert_abs_diff_eq!(mk.variance(), full.variance(), epsilon = 1e-10);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let m = exp_model(1.0, 1.0, 0.5, 2.0);
        let d = interleaved_design(4).unwrap();
        let a = sample_paths(&d, &m, 42, 8).unwrap();
        let b = sample_paths(&d, &m, 42, 8).unwrap();
        for k in 0..8 {
            assert_eq!(a.y1_target(k).to_bits(), b.y1_target(k).to_bits());
            assert_eq!(a.observations(k), b.observations(k));
        }
        let c = sample_paths(&d, &m, 43, 8).unwrap();
        assert_ne!(a.y1_target(0).to_bits(), c.y1_target(0).to_bits());
    }

    #[test]
    fn sampling_rejects_singular_extensions() {
        // target duplicated in sites1 makes the extended covariance singular
        let m = exp_model(1.0, 1.0, 0.0, 2.0);
        let d = Design::new(vec![0.5], vec![], 0.5).unwrap();
        match sample_paths(&d, &m, 1, 4) {
            Err(Error::SingularModel { .. }) => {}
            other => panic!("expected SingularModel, got {other:?}"),
        }
        assert!(sample_paths(&interleaved_design(2).unwrap(), &m, 1, 0).is_err());
    }
}
