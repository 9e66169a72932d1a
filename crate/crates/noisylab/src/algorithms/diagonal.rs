//! Closed-form error quantities for diagonal operators and the measurement
//! allocation that matches them constructively.
//!
//! A diagonal problem maps the unit ball of `lp` into `lp` by
//! `x -> (sigma_i x_i)`. Reading the first `n` coordinates through a channel
//! of noise level `delta` and truncating the rest has worst-case error
//! `(delta^p * sum_{i<=n} sigma_i^p + sigma_{n+1}^p)^(1/p)` — the noise term
//! on what was measured plus the largest surviving entry on what was not
//! (tail coordinates of a ball of `lp` carry at most unit mass, so only
//! `sigma_{n+1}` survives the supremum). [`allocate`] instead spends several
//! refinement rounds per coordinate so that every term is pushed below a
//! target `eps`, at total cost within `m` measurements of the ideal
//! logarithmic count.

use std::io::Write;

use crate::algorithms::refine::CoordinateRefinement;
use crate::measurement::{csv_err, Functional, Policy, Transcript};
use crate::spaces::{NormTag, Point, Problem, ProblemKind};
use crate::util::ceil_nudged;
use crate::{Error, Result};

fn require_diagonal(prob: &Problem) -> Result<NormTag> {
    match &prob.kind {
        ProblemKind::Diagonal { p, .. } => Ok(*p),
        ProblemKind::Identity { .. } => Err(Error::UnsupportedInstance(
            "closed forms are for diagonal operators".into(),
        )),
    }
}

/// Worst-case error of "read the first `n` coordinates to accuracy `delta`,
/// output 0 beyond": `(delta^p * sum_{i<=n} sigma_i^p + sigma_{n+1}^p)^(1/p)`,
/// with the max of the two ingredients at `p = infinity`. `n = 0` recovers
/// the initial error `sigma_1`.
pub fn truncation_error(prob: &Problem, n: usize, delta: f64) -> Result<f64> {
    let p = require_diagonal(prob)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameters(format!("noise level {delta} outside [0, 1]")));
    }
    let next = prob.sigma_at(n + 1);
    match p {
        NormTag::Infinity => {
            let noise = if n >= 1 { delta * prob.sigma_at(1) } else { 0.0 };
            Ok(noise.max(next))
        }
        NormTag::Finite(p) => {
            let noise: f64 = (1..=n).map(|i| (delta * prob.sigma_at(i)).powf(p)).sum();
            Ok((noise + next.powf(p)).powf(1.0 / p))
        }
    }
}

/// The policy whose worst case [`truncation_error`] states: read the first
/// `n` coordinates through the noisy channel and output
/// `(sigma_1 y_1, ..., sigma_n y_n, 0, ...)`. Nonadaptive and linear — the
/// functional sequence never depends on the answers, and the noisy reads are
/// passed through un-clamped.
pub struct DiagTruncation {
    prob: Problem,
    n: usize,
}

impl DiagTruncation {
    pub fn new(prob: &Problem, n: usize, delta: f64) -> Result<Self> {
        require_diagonal(prob)?;
        if n > prob.dim() {
            return Err(Error::InvalidInput(format!(
                "cannot read {n} coordinates of a {}-term truncation",
                prob.dim()
            )));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameters(format!("noise level {delta} outside [0, 1)")));
        }
        Ok(DiagTruncation { prob: prob.clone(), n })
    }
}

impl Policy for DiagTruncation {
    fn name(&self) -> &str {
        "diag_truncation"
    }

    fn budget(&self) -> usize {
        self.n
    }

    fn is_adaptive(&self) -> bool {
        false
    }

    fn choose_next(&self, transcript: &Transcript) -> Option<Functional> {
        if transcript.len() < self.n {
            Some(Functional::coordinate(self.prob.dim(), transcript.len()))
        } else {
            None
        }
    }

    fn reconstruct(&self, transcript: &Transcript) -> Result<Point> {
        let mut entries = vec![0.0; self.prob.dim()];
        for (i, y) in transcript.values().enumerate().take(entries.len()) {
            entries[i] = self.prob.sigma_at(i + 1) * y;
        }
        Point::new(entries)
    }

    fn analytic_upper(&self, delta: f64) -> Option<f64> {
        truncation_error(&self.prob, self.n, delta).ok()
    }

    fn theory_ref(&self) -> &'static str {
        "diagonal-truncation-closed-form"
    }
}

/// Benchmark value for `n` coordinate reads on an l2 diagonal problem when
/// the per-read perturbation `delta` is spread in Euclidean norm:
/// `sqrt(sigma_{n+1}^2 + (delta^2/n) * sum_{j<=n} (sigma_j^2 - sigma_{n+1}^2))`.
pub fn l2_noise_hat(prob: &Problem, n: usize, delta: f64) -> Result<f64> {
    let p = require_diagonal(prob)?;
    if p != NormTag::L2 {
        return Err(Error::UnsupportedInstance(format!(
            "the averaged-noise benchmark is an l2 quantity, problem has p={p}"
        )));
    }
    if !(delta >= 0.0) {
        return Err(Error::InvalidParameters(format!("negative noise level {delta}")));
    }
    let next2 = prob.sigma_at(n + 1).powi(2);
    if n == 0 {
        return Ok(prob.sigma_at(1));
    }
    let excess: f64 = (1..=n).map(|j| prob.sigma_at(j).powi(2) - next2).sum();
    Ok((next2 + delta * delta / n as f64 * excess).sqrt())
}

/// Two-sided bracket around the true worst-case value of `n` noisy reads in
/// the l2 setting: the single-level benchmark is exact up to replacing
/// `delta` by `delta * sqrt(n)`, so the pair `(hat(delta), hat(delta*sqrt n))`
/// brackets it.
pub fn l2_noise_sandwich(prob: &Problem, n: usize, delta: f64) -> Result<(f64, f64)> {
    let lo = l2_noise_hat(prob, n, delta)?;
    let hi = l2_noise_hat(prob, n, delta * (n.max(1) as f64).sqrt())?;
    Ok((lo, hi))
}

/// How many refinement rounds to spend on each kept coordinate so the
/// composite policy reaches accuracy `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationPlan {
    /// Number of coordinates measured at all; `sigma_{m+1} <= eps`.
    pub truncation: usize,
    /// Rounds per kept coordinate: minimal `n_i >= 1` with
    /// `sigma_i * delta^{n_i} <= eps`.
    pub rounds: Vec<u32>,
    /// Total measurement count, `sum n_i`.
    pub total: usize,
    /// The ideal fractional cost `sum ln(sigma_i/eps) / ln(1/delta)`.
    pub log_cost_term: f64,
    /// `total - log_cost_term`; always in `[0, truncation]` because each
    /// coordinate rounds its share up by less than one measurement.
    pub slack: f64,
    pub eps: f64,
    pub delta: f64,
}

/// Choose the truncation level and per-coordinate rounds for a sup-norm
/// diagonal problem. Requires `delta <= 1/2` so that a round at least
/// halves the uncertainty; fails with `InfeasibleTruncation` when even
/// discarding nothing leaves a tail above `eps`.
pub fn allocate(prob: &Problem, eps: f64, delta: f64) -> Result<AllocationPlan> {
    let p = require_diagonal(prob)?;
    if p != NormTag::Infinity {
        return Err(Error::UnsupportedInstance(format!(
            "allocation assumes a sup-norm target, problem has p={p}"
        )));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::InvalidParameters(format!(
            "allocation is defined for 0 < delta <= 1/2, got {delta}"
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameters(format!("target accuracy must be positive, got {eps}")));
    }
    let dim = prob.dim();
    let truncation = match (0..=dim).find(|&k| prob.sigma_at(k + 1) <= eps) {
        Some(k) => k,
        None => {
            return Err(Error::InfeasibleTruncation(format!(
                "tail bound {} stays above eps = {eps} at every truncation",
                prob.tail_bound()
            )))
        }
    };
    let mut rounds = Vec::with_capacity(truncation);
    let mut log_cost_term = 0.0;
    for i in 1..=truncation {
        let sigma = prob.sigma_at(i);
        let term = (sigma / eps).ln() / (1.0 / delta).ln();
        log_cost_term += term;
        let mut n_i = ceil_nudged(term).max(1.0) as u32;
        // canonical minimal n_i with sigma * delta^n_i <= eps, exact in f64
        while sigma * delta.powi(n_i as i32) > eps {
            n_i += 1;
        }
        while n_i > 1 && sigma * delta.powi(n_i as i32 - 1) <= eps {
            n_i -= 1;
        }
        rounds.push(n_i);
    }
    let total = rounds.iter().map(|&r| r as usize).sum();
    let slack = total as f64 - log_cost_term;
    Ok(AllocationPlan { truncation, rounds, total, log_cost_term, slack, eps, delta })
}

/// Realize a plan as a refinement policy over the full truncated dimension
/// (unmeasured coordinates get 0 rounds). Its analytic guarantee is at
/// most `eps` by construction.
pub fn composite_policy(prob: &Problem, plan: &AllocationPlan) -> Result<CoordinateRefinement> {
    require_diagonal(prob)?;
    let mut rounds = plan.rounds.clone();
    if rounds.len() > prob.dim() {
        return Err(Error::InvalidInput(format!(
            "plan keeps {} coordinates, problem has {}",
            rounds.len(),
            prob.dim()
        )));
    }
    rounds.resize(prob.dim(), 0);
    CoordinateRefinement::new(prob, rounds, plan.delta)
}

/// Write a plan as CSV rows `i,sigma_i,n_i` over the kept coordinates.
pub fn write_plan_csv<W: Write>(w: W, prob: &Problem, plan: &AllocationPlan) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["i", "sigma_i", "n_i"]).map_err(csv_err)?;
    for (i, n_i) in plan.rounds.iter().enumerate() {
        wtr.write_record([
            (i + 1).to_string(),
            prob.sigma_at(i + 1).to_string(),
            n_i.to_string(),
        ])
        .map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}
