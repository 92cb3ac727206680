//! Sampling designs: where each variable is observed and where to predict.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Observation sites for both variables plus the prediction target for Y1.
///
/// Sites live on the real line. Within each list sites are pairwise distinct
/// (exact floating-point equality); the target may or may not coincide with
/// an observed site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDesign")]
pub struct Design {
    sites1: Vec<f64>,
    sites2: Vec<f64>,
    target: f64,
}

/// Mirror of the JSON document; validated on conversion into [`Design`].
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDesign {
    sites1: Vec<f64>,
    sites2: Vec<f64>,
    target: f64,
}

impl TryFrom<RawDesign> for Design {
    type Error = Error;

    fn try_from(raw: RawDesign) -> Result<Self> {
        Design::new(raw.sites1, raw.sites2, raw.target)
    }
}

impl Design {
    /// General constructor; checks finiteness and within-list distinctness.
    pub fn new(sites1: Vec<f64>, sites2: Vec<f64>, target: f64) -> Result<Self> {
        for (name, sites) in [("sites1", &sites1), ("sites2", &sites2)] {
            if sites.iter().any(|s| !s.is_finite()) {
                return Err(Error::InvalidDesign(format!(
                    "{name} contains a non-finite coordinate"
                )));
            }
            if let Some(dup) = first_duplicate(sites) {
                return Err(Error::InvalidDesign(format!(
                    "{name} contains the site {dup} twice"
                )));
            }
        }
        if !target.is_finite() {
            return Err(Error::InvalidDesign("target is not finite".into()));
        }
        Ok(Self {
            sites1,
            sites2,
            target,
        })
    }

    /// Sites where Y1 is observed.
    pub fn sites1(&self) -> &[f64] {
        &self.sites1
    }

    /// Sites where Y2 is observed.
    pub fn sites2(&self) -> &[f64] {
        &self.sites2
    }

    /// Prediction site for Y1.
    pub fn target(&self) -> f64 {
        self.target
    }

    /// Total number of observations across both variables.
    pub fn len(&self) -> usize {
        self.sites1.len() + self.sites2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites1.is_empty() && self.sites2.is_empty()
    }

    /// Both variables observed at exactly the same sites, in the same order.
    pub fn is_collocated(&self) -> bool {
        !self.sites1.is_empty() && self.sites1 == self.sites2
    }

    /// Parses the JSON design document `{"sites1": [...], "sites2": [...], "target": ...}`.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Serializes to the JSON design document. Round-trips byte-identically
    /// through [`Design::from_json`].
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("design serialization cannot fail")
    }
}

fn first_duplicate(sites: &[f64]) -> Option<f64> {
    let mut sorted = sites.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("sites checked finite"));
    sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0])
}

/// The interleaved dense/sparse observation scheme: Y2 observed
/// on the grid `{i/n, i = ±1..±n}`, Y1 on the twice-coarser subset
/// `{2i/n, i = ±1..±n/2}`, predicting Y1 at 0.
///
/// `n` must be even and >= 2. Coordinates of the coarse grid reuse the exact
/// floating-point values of the dense grid, so subset tests can use exact
/// equality.
pub fn interleaved_design(n: usize) -> Result<Design> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidDesign(format!(
            "interleaved design needs an even n >= 2, got {n}"
        )));
    }
    let nf = n as f64;
    let grid = |i: i64| i as f64 / nf;
    let half = (n / 2) as i64;
    let sites2: Vec<f64> = (-(n as i64)..=n as i64)
        .filter(|&i| i != 0)
        .map(grid)
        .collect();
    let sites1: Vec<f64> = (-half..=half)
        .filter(|&i| i != 0)
        .map(|i| grid(2 * i))
        .collect();
    Design::new(sites1, sites2, 0.0)
}

/// Both variables observed at the same `sites`; predicts Y1 at `target`.
pub fn collocated_design(sites: &[f64], target: f64) -> Result<Design> {
    Design::new(sites.to_vec(), sites.to_vec(), target)
}
