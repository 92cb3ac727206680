//! Property tests for the predictor invariants: cokriging dominance,
//! residual orthogonality, the collocated/subset identity, permutation
//! invariance, Markov sparsity, and the Kronecker assembly identity.

use cokrig::covariance::{build_joint_cov, build_joint_cov_kronecker, Var};
use cokrig::predictor::cokrige_kronecker;
use cokrig::{cokrige, collocated_design, interleaved_design, krige, BivariateModel, Design};
use proptest::prelude::*;

/// Strictly increasing sites in [-1, 1] with a minimum gap, so every random
/// covariance matrix stays comfortably factorizable.
fn gapped_sites(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_len)
        .prop_flat_map(|len| {
            (
                -1.0..0.0f64,
                proptest::collection::vec(0.04..0.25f64, len - 1),
            )
        })
        .prop_map(|(start, gaps)| {
            let mut sites = vec![start];
            for g in gaps {
                let next = sites.last().unwrap() + g;
                sites.push(next);
            }
            sites
        })
}

fn model_strategy() -> impl Strategy<Value = BivariateModel> {
    (0.25..4.0f64, 0.25..4.0f64, -0.95..0.95f64, 0.5..8.0f64)
        .prop_map(|(s11, s22, r, alpha)| BivariateModel::exponential(s11, s22, r, alpha).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Cokriging never predicts worse than kriging.
    #[test]
    fn cokriging_dominates_kriging(
        sites1 in gapped_sites(8),
        sites2 in gapped_sites(12),
        target in -1.2..1.2f64,
        m in model_strategy(),
    ) {
        let d = Design::new(sites1, sites2, target).unwrap();
        let k = krige(&d, &m).unwrap();
        let ck = cokrige(&d, &m).unwrap();
        prop_assert!(ck.variance() <= k.variance() + 1e-12,
            "cokriging variance {} above kriging variance {}", ck.variance(), k.variance());
    }

    /// The prediction error is uncorrelated with every observation: the
    /// covariance-model residual c - Sigma w vanishes.
    #[test]
    fn prediction_error_is_orthogonal_to_observations(
        sites1 in gapped_sites(8),
        sites2 in gapped_sites(12),
        target in -1.2..1.2f64,
        m in model_strategy(),
    ) {
        let d = Design::new(sites1, sites2, target).unwrap();
        let p = cokrige(&d, &m).unwrap();
        let cov = build_joint_cov(&d, &m);
        for (i, &(var, site)) in cov.keys().iter().enumerate() {
            let c_i = m.cov(Var::Y1, var, target - site);
            let mut fitted = 0.0;
            for (j, w) in p.weights().iter().enumerate() {
                fitted += cov.matrix()[(i, j)] * w.value;
            }
            prop_assert!((c_i - fitted).abs() < 1e-10,
                "residual {} at observation {var}({site})", c_i - fitted);
        }
    }

    /// Collocated designs: cokriging is identical to kriging.
    #[test]
    fn collocated_identity(
        sites in gapped_sites(10),
        target in -1.2..1.2f64,
        m in model_strategy(),
    ) {
        let d = collocated_design(&sites, target).unwrap();
        let k = krige(&d, &m).unwrap();
        let ck = cokrige(&d, &m).unwrap();
        for w in ck.weights() {
            match w.var {
                Var::Y1 => prop_assert!(
                    (w.value - k.weight_for(Var::Y1, w.site).unwrap()).abs() < 1e-10),
                Var::Y2 => prop_assert!(w.value.abs() < 1e-10),
            }
        }
        prop_assert!((ck.variance() - k.variance()).abs() < 1e-12);
    }

    /// The identity extends to Y2 observed at a subset of the Y1 sites: the
    /// auxiliary observations are redundant given the primary ones there.
    /// (The reverse inclusion is exactly where cokriging starts to win —
    /// that is the interleaved design.)
    #[test]
    fn subset_identity(
        sites1 in gapped_sites(12),
        mask in proptest::collection::vec(any::<bool>(), 12),
        target in -1.2..1.2f64,
        m in model_strategy(),
    ) {
        let sites2: Vec<f64> = sites1
            .iter()
            .zip(&mask)
            .filter(|&(_, &keep)| keep)
            .map(|(&s, _)| s)
            .collect();
        let d = Design::new(sites1, sites2, target).unwrap();
        let k = krige(&d, &m).unwrap();
        let ck = cokrige(&d, &m).unwrap();
        for w in ck.weights() {
            if w.var == Var::Y2 {
                prop_assert!(w.value.abs() < 1e-10, "Y2 weight {}", w.value);
            }
        }
        prop_assert!((ck.variance() - k.variance()).abs() < 1e-12);
    }

    /// Shuffling observation order leaves the prediction variance unchanged.
    #[test]
    fn variance_is_permutation_invariant(
        sites1 in gapped_sites(8),
        sites2 in gapped_sites(12),
        target in -1.2..1.2f64,
        m in model_strategy(),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let base = Design::new(sites1.clone(), sites2.clone(), target).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let mut shuffled1 = sites1;
        let mut shuffled2 = sites2;
        shuffled1.shuffle(&mut rng);
        shuffled2.shuffle(&mut rng);
        let shuffled = Design::new(shuffled1, shuffled2, target).unwrap();
        let a = cokrige(&base, &m).unwrap();
        let b = cokrige(&shuffled, &m).unwrap();
        prop_assert!((a.variance() - b.variance()).abs() < 1e-12);
        let ka = krige(&base, &m).unwrap();
        let kb = krige(&shuffled, &m).unwrap();
        prop_assert!((ka.variance() - kb.variance()).abs() < 1e-12);
    }

    /// Exponential kriging weights vanish off the two bracketing neighbors.
    #[test]
    fn markov_sparsity_of_exponential_kriging(
        sites in gapped_sites(10),
        t01 in 0.05..0.95f64,
        m in model_strategy(),
    ) {
        prop_assume!(sites.len() >= 2);
        // target strictly between two adjacent sites
        let lo = sites[0];
        let hi = *sites.last().unwrap();
        let target = lo + t01 * (hi - lo);
        prop_assume!(sites.iter().all(|&s| (s - target).abs() > 1e-6));
        let d = Design::new(sites.clone(), vec![], target).unwrap();
        let p = krige(&d, &m).unwrap();
        let left = sites.iter().cloned().filter(|&s| s < target).fold(f64::NEG_INFINITY, f64::max);
        let right = sites.iter().cloned().filter(|&s| s > target).fold(f64::INFINITY, f64::min);
        for w in p.weights() {
            if w.site != left && w.site != right {
                prop_assert!(w.value.abs() < 1e-10, "non-bracketing weight {} at {}", w.value, w.site);
            }
        }
    }

    /// Direct and Kronecker assembly agree entrywise on collocated designs.
    #[test]
    fn kronecker_identity(
        sites in gapped_sites(10),
        m in model_strategy(),
    ) {
        let d = collocated_design(&sites, 0.0).unwrap();
        let direct = build_joint_cov(&d, &m);
        let kron = build_joint_cov_kronecker(&d, &m).unwrap();
        for i in 0..direct.dim() {
            for j in 0..direct.dim() {
                prop_assert!((direct.matrix()[(i, j)] - kron.matrix()[(i, j)]).abs() < 1e-14);
            }
        }
        // and the Kronecker fast-path solve agrees with the dense solve
        let dense = cokrige(&d, &m).unwrap();
        let fast = cokrige_kronecker(&d, &m).unwrap();
        for (a, b) in dense.weights().iter().zip(fast.weights()) {
            prop_assert!((a.value - b.value).abs() < 1e-10);
        }
        prop_assert!((dense.variance() - fast.variance()).abs() < 1e-12);
    }
}

/// The joint covariance stays Cholesky-factorizable up to the largest design
/// size the library promises, at the strongest supported correlation.
#[test]
fn joint_covariance_is_spd_at_the_size_and_correlation_limits() {
    let m = BivariateModel::exponential(1.0, 1.0, 0.99, 2.0).unwrap();
    for n in [2usize, 64] {
        let d = interleaved_design(n).unwrap();
        let cov = build_joint_cov(&d, &m);
        assert!(
            nalgebra::Cholesky::new(cov.matrix().clone()).is_some(),
            "joint covariance not SPD at n={n}"
        );
    }
    // at the n = 2048 limit (6144-dimensional) go through the solver path
    let d = interleaved_design(2048).unwrap();
    assert!(cokrige(&d, &m).is_ok(), "joint solve failed at n=2048");
}
