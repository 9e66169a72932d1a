//! Geometric interval refinement.
//!
//! One coordinate at a time, the policy tracks an interval that provably
//! contains the true value. Level `j` rescales the residual against the
//! current interval midpoint by `delta^(1-j)` — blowing the remaining
//! uncertainty up to full range — reads it through the noisy channel, and
//! contracts the interval by a factor `delta`: after `r` levels the interval
//! has half-width exactly `delta^r`. The same recursion applied to a single
//! arbitrary functional (instead of a coordinate) turns a channel of fixed
//! noise level `delta` into an estimate of the functional's value at any
//! target accuracy, at logarithmic cost.

use crate::measurement::{
    ensure_admissible, Descriptor, Functional, FunctionalClass, NoiseAdversary, Policy, Transcript,
};
use crate::spaces::{NormTag, Point, Problem, ProblemKind};
use crate::{Error, Result};

/// Midpoint of `[a - h, a + h]` intersected with `[-1, 1]`. The true value
/// lies in both intervals, so the midpoint misses it by at most the
/// half-width of the intersection, which is at most `h`.
fn clamped_midpoint(a: f64, h: f64) -> f64 {
    let lo = (a - h).max(-1.0);
    let hi = (a + h).min(1.0);
    if lo <= hi {
        (lo + hi) / 2.0
    } else {
        // only reachable under inadmissible noise; stay in range
        a.clamp(-1.0, 1.0)
    }
}

/// Running anchor after the observations `ys` of levels `1..=ys.len()`:
/// `a_j = a_{j-1} + delta^(j-1) * y_j`.
fn replay_anchor(ys: &[f64], delta: f64) -> f64 {
    let mut a = 0.0;
    for (k, y) in ys.iter().enumerate() {
        a += delta.powi(k as i32) * y;
    }
    a
}

/// Per-coordinate interval refinement, with an individual number of rounds
/// for every coordinate (coordinates with 0 rounds are estimated as 0). The
/// policy measures coordinate-major: all rounds of coordinate 0, then all of
/// coordinate 1, and so on, so each coordinate's observations are contiguous
/// in the transcript.
pub struct CoordinateRefinement {
    prob: Problem,
    rounds: Vec<u32>,
    delta: f64,
    upper: Option<f64>,
}

impl CoordinateRefinement {
    pub fn new(prob: &Problem, rounds: Vec<u32>, delta: f64) -> Result<Self> {
        if rounds.len() != prob.dim() {
            return Err(Error::InvalidInput(format!(
                "{} round counts for dimension {}",
                rounds.len(),
                prob.dim()
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameters(format!(
                "refinement is defined for 0 < delta < 1, got {delta}"
            )));
        }
        // the closed-form guarantee needs a sup-type target: every coordinate
        // contributes its own interval half-width independently
        let upper = match &prob.kind {
            ProblemKind::Identity { q: NormTag::Infinity, .. }
            | ProblemKind::Diagonal { p: NormTag::Infinity, .. } => {
                let mut worst = prob.tail_bound();
                for (i, r) in rounds.iter().enumerate() {
                    worst = worst.max(prob.sigma_at(i + 1) * delta.powi(*r as i32));
                }
                Some(worst)
            }
            _ => None,
        };
        Ok(CoordinateRefinement { prob: prob.clone(), rounds, delta, upper })
    }

    /// The same number of rounds for every coordinate.
    pub fn uniform(prob: &Problem, r: u32, delta: f64) -> Result<Self> {
        CoordinateRefinement::new(prob, vec![r; prob.dim()], delta)
    }

    pub fn rounds(&self) -> &[u32] {
        &self.rounds
    }

    /// Coordinate and 1-based level measured at transcript position `step`.
    fn locate(&self, step: usize) -> Option<(usize, u32)> {
        let mut offset = step;
        for (i, &r) in self.rounds.iter().enumerate() {
            if offset < r as usize {
                return Some((i, offset as u32 + 1));
            }
            offset -= r as usize;
        }
        None
    }

    /// Observations already made for coordinate `i` (contiguous by the
    /// measurement order).
    fn coord_values<'t>(&self, transcript: &'t Transcript, i: usize) -> Vec<f64> {
        let start: usize = self.rounds[..i].iter().map(|&r| r as usize).sum();
        let have = transcript.len().min(start + self.rounds[i] as usize);
        transcript.entries[start.min(have)..have].iter().map(|e| e.y).collect()
    }
}

impl Policy for CoordinateRefinement {
    fn name(&self) -> &str {
        "coordinate_refinement"
    }

    fn budget(&self) -> usize {
        self.rounds.iter().map(|&r| r as usize).sum()
    }

    fn is_adaptive(&self) -> bool {
        true
    }

    fn choose_next(&self, transcript: &Transcript) -> Option<Functional> {
        let (i, level) = self.locate(transcript.len())?;
        let anchor = replay_anchor(&self.coord_values(transcript, i), self.delta);
        Some(Functional::coord_refine(i, anchor, level, self.delta))
    }

    fn reconstruct(&self, transcript: &Transcript) -> Result<Point> {
        let mut x = Vec::with_capacity(self.rounds.len());
        for i in 0..self.rounds.len() {
            let ys = self.coord_values(transcript, i);
            if ys.is_empty() {
                x.push(0.0);
            } else {
                let anchor = replay_anchor(&ys, self.delta);
                x.push(clamped_midpoint(anchor, self.delta.powi(ys.len() as i32)));
            }
        }
        self.prob.map_point(&Point::new(x)?)
    }

    fn analytic_upper(&self, delta: f64) -> Option<f64> {
        if delta <= self.delta {
            self.upper
        } else {
            None
        }
    }

    fn theory_ref(&self) -> &'static str {
        "refinement-geometric"
    }
}

/// Outcome of correcting a single functional's noisy channel.
#[derive(Debug, Clone)]
pub struct NoiseCorrection {
    /// Estimate of the functional's true value, within `delta^rounds` of it.
    pub estimate: f64,
    pub rounds: u32,
    pub transcript: Transcript,
}

/// Estimate `lam(f)` to accuracy `eps` over a channel of noise level
/// `adv.delta()`, by refining the composition `clamp(a * lam + b)` instead of
/// a coordinate. Uses the minimal number of rounds `r` with
/// `delta^r <= eps`; a noiseless channel needs a single measurement.
pub fn noise_correct(
    lam: &Functional,
    prob: &Problem,
    f: &Point,
    eps: f64,
    adv: &NoiseAdversary,
) -> Result<NoiseCorrection> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameters(format!(
            "target accuracy must be in (0, 1), got {eps}"
        )));
    }
    ensure_admissible(lam, prob)?;
    let delta = adv.delta();
    let rounds = if delta == 0.0 {
        1
    } else {
        let mut r = crate::util::ceil_nudged(eps.ln() / delta.ln()).max(1.0) as u32;
        // canonical minimal r with delta^r <= eps, exact in f64
        while delta.powi(r as i32) > eps {
            r += 1;
        }
        while r > 1 && delta.powi(r as i32 - 1) <= eps {
            r -= 1;
        }
        r
    };
    let mut transcript = Transcript::default();
    let mut anchor = 0.0;
    for j in 1..=rounds {
        let scale = delta.powi(1 - j as i32); // j = 1 gives exactly 1.0
        let fun = Functional {
            descriptor: Descriptor::AffineClamp {
                inner: Box::new(lam.clone()),
                a: scale,
                b: -scale * anchor,
            },
            declared_class: match lam.declared_class {
                FunctionalClass::Arbitrary => FunctionalClass::Arbitrary,
                _ => FunctionalClass::Continuous,
            },
        };
        let t = fun.eval(prob, f)?;
        let y = adv.observe(t, transcript.len());
        transcript.push(fun, y);
        anchor += delta.powi(j as i32 - 1) * y;
    }
    let estimate = if delta == 0.0 {
        transcript.entries[0].y
    } else {
        clamped_midpoint(anchor, delta.powi(rounds as i32))
    };
    Ok(NoiseCorrection { estimate, rounds, transcript })
}
