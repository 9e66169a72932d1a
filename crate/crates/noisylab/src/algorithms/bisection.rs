//! Adaptive bisection over a finite cover of the image.
//!
//! The policy maintains an active set of cover balls guaranteed to contain
//! `S f`, at a radius that inflates slightly every time a noisy answer is
//! taken at face value. Each step probes the first half of the active set
//! with a capped, rescaled distance functional whose value lives in
//! `[-1, 2*delta_plus - 1]`:
//!
//! * an observation `y > -1 + delta` certifies the true distance is positive,
//!   so the image lies in the other half at the same radius;
//! * an observation `y <= -1 + delta` only certifies the distance is at most
//!   `delta * eta`, so the tested half is kept with its radius grown by that
//!   amount.
//!
//! After `n` steps starting from `N <= 2^n` balls a single ball remains, and
//! its center misses `S f` by at most `radius + n * delta * eta`.

use std::sync::Arc;

use crate::measurement::{Descriptor, Functional, FunctionalClass, Policy, Transcript};
use crate::spaces::{NormTag, Point};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BisectState {
    /// Indices into the original cover that may still contain the image.
    pub active: Vec<usize>,
    /// Current inflated ball radius.
    pub radius: f64,
}

pub struct CoverBisection {
    centers: Arc<Vec<Point>>,
    radius: f64,
    q: NormTag,
    steps: usize,
    delta: f64,
    delta_plus: f64,
    eta: f64,
}

impl CoverBisection {
    /// Policy with the default probe parameters: threshold midway between
    /// `delta` and 1, and a probe scale that keeps the total radius inflation
    /// at one percent of the initial radius.
    pub fn new(
        centers: Vec<Point>,
        radius: f64,
        q: NormTag,
        steps: usize,
        delta: f64,
    ) -> Result<Self> {
        let delta_plus = (1.0 + delta) / 2.0;
        let eta = if steps as f64 * delta > 0.0 && radius > 0.0 {
            0.01 * radius / (steps as f64 * delta)
        } else {
            1e-3
        };
        Self::with_params(centers, radius, q, steps, delta, delta_plus, eta)
    }

    pub fn with_params(
        centers: Vec<Point>,
        radius: f64,
        q: NormTag,
        steps: usize,
        delta: f64,
        delta_plus: f64,
        eta: f64,
    ) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidInput("bisection needs a nonempty cover".into()));
        }
        if !(radius >= 0.0) {
            return Err(Error::InvalidParameters(format!("negative cover radius {radius}")));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameters(format!("noise level {delta} outside [0, 1)")));
        }
        // delta_plus > delta makes a low observation certify a small distance
        // (the cap must not be what realized the minimum); <= 1 keeps the
        // probe inside [-1, 1].
        if !(delta_plus > delta && delta_plus <= 1.0) {
            return Err(Error::InvalidParameters(format!(
                "threshold must satisfy delta < delta_plus <= 1, got {delta_plus}"
            )));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameters(format!("probe scale eta must be positive, got {eta}")));
        }
        Ok(CoverBisection { centers: Arc::new(centers), radius, q, steps, delta, delta_plus, eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn delta_plus(&self) -> f64 {
        self.delta_plus
    }

    /// Active set and inflated radius after each observation, derived by
    /// replaying the transcript's decisions. Element 0 is the initial state;
    /// element `i + 1` follows observation `i`.
    pub fn states(&self, transcript: &Transcript) -> Vec<BisectState> {
        let mut active: Vec<usize> = (0..self.centers.len()).collect();
        let mut radius = self.radius;
        let mut out = vec![BisectState { active: active.clone(), radius }];
        for e in &transcript.entries {
            if active.len() <= 1 {
                break;
            }
            let half = active.len().div_ceil(2);
            if e.y <= -1.0 + self.delta {
                // distance to the tested half certified <= delta * eta
                active.truncate(half);
                radius += self.delta * self.eta;
            } else {
                // image certified outside the tested half
                active.drain(..half);
            }
            out.push(BisectState { active: active.clone(), radius });
        }
        out
    }

    fn current(&self, transcript: &Transcript) -> BisectState {
        self.states(transcript).pop().expect("states is never empty")
    }
}

impl Policy for CoverBisection {
    fn name(&self) -> &str {
        "cover_bisection"
    }

    fn budget(&self) -> usize {
        self.steps
    }

    fn is_adaptive(&self) -> bool {
        true
    }

    fn choose_next(&self, transcript: &Transcript) -> Option<Functional> {
        let state = self.current(transcript);
        if state.active.len() <= 1 {
            return None;
        }
        let half = state.active.len().div_ceil(2);
        let tested: Vec<Point> =
            state.active[..half].iter().map(|&i| self.centers[i].clone()).collect();
        Some(Functional {
            descriptor: Descriptor::DistToUnion {
                centers: Arc::new(tested),
                radius: state.radius,
                q: self.q,
                eta: self.eta,
                cap: self.delta_plus * self.eta,
            },
            declared_class: FunctionalClass::Continuous,
        })
    }

    fn reconstruct(&self, transcript: &Transcript) -> Result<Point> {
        let state = self.current(transcript);
        Ok(self.centers[state.active[0]].clone())
    }

    fn analytic_upper(&self, delta: f64) -> Option<f64> {
        let enough_steps =
            self.steps >= usize::BITS as usize - 1 || self.centers.len() <= 1usize << self.steps;
        if enough_steps && delta <= self.delta {
            Some(self.radius + self.steps as f64 * self.delta * self.eta)
        } else {
            None
        }
    }

    fn theory_ref(&self) -> &'static str {
        "bisection-inflation"
    }
}
