//! Worst-case error search: drive a policy with a battery of admissible
//! adversaries over a battery of inputs and report the largest error found,
//! cross-checked against the policy's analytic guarantee and any certified
//! lower bound.

use crate::algorithms::quantizer_bits;
use crate::error::{Error, Result};
use crate::measurement::{run_session, NoiseAdversary, NoiseStrategy, Policy};
use crate::spaces::{domain_extreme_points, domain_grid, norm, Point, Problem};
use crate::util::symmetric_unit;

const CHECK_TOL: f64 = 1e-9;

/// Budgets for the search. Defaults keep every stage cheap enough for debug
/// builds while still hitting the known worst cases of the built-in
/// policies (which sit at extreme points under constant-shift noise).
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Dyadic exponent of the input grid (spacing `2^-grid_g`).
    pub grid_g: u32,
    /// Maximum number of grid points; the grid coarsens itself to fit.
    pub grid_cap: usize,
    /// Extra random inputs projected into the domain ball.
    pub random_draws: usize,
    pub seed: u64,
    /// Ceiling on sessions spent enumerating +-delta sign patterns; within
    /// it the noise-sign search is exhaustive.
    pub sign_budget: usize,
    /// Ceiling on sessions spent on coordinate ascent over shift schedules
    /// when the pattern space is too large to enumerate.
    pub ascent_budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_g: 4,
            grid_cap: 4096,
            random_draws: 48,
            seed: 7,
            sign_budget: 4096,
            ascent_budget: 2000,
        }
    }
}

/// Outcome of a worst-case search, with the witnesses that realized it.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub policy: String,
    /// Measurement budget of the policy.
    pub n: usize,
    pub delta: f64,
    pub estimated_worst_error: f64,
    pub analytic_upper: Option<f64>,
    pub certified_lower: Option<f64>,
    pub theory_ref: String,
    /// True when every +-delta sign pattern was tried on the worst input
    /// (always true for noiseless or measurement-free policies).
    pub exhaustive: bool,
    pub worst_f: Point,
    pub worst_strategy: NoiseStrategy,
}

fn candidate_inputs(prob: &Problem, cfg: &SearchConfig) -> Result<Vec<Point>> {
    let mut out = domain_extreme_points(prob);
    match domain_grid(prob, cfg.grid_g, cfg.grid_cap) {
        Ok(grid) => out.extend(grid),
        // In high dimension even the coarsest grid blows the cap; extremes
        // plus random draws still give the search something to chew on.
        Err(Error::BudgetExceeded(_)) => {}
        Err(e) => return Err(e),
    }
    let mut counter = 0u64;
    for _ in 0..cfg.random_draws {
        let coords: Vec<f64> = (0..prob.dim())
            .map(|_| {
                counter += 1;
                symmetric_unit(cfg.seed, counter)
            })
            .collect();
        let mut p = Point::new(coords)?;
        let nrm = norm(&p, prob.domain_tag())?;
        if nrm > 1.0 {
            p = p.scale((1.0 - 1e-12) / nrm);
        }
        out.push(p);
    }
    Ok(out)
}

struct Tracker {
    error: f64,
    f: Point,
    strategy: NoiseStrategy,
    sessions: usize,
}

impl Tracker {
    fn run(
        &mut self,
        policy: &dyn Policy,
        prob: &Problem,
        delta: f64,
        f: &Point,
        strategy: &NoiseStrategy,
    ) -> Result<f64> {
        let adv = NoiseAdversary::new(delta, strategy.clone())?;
        let res = run_session(policy, prob, f, &adv)?;
        self.sessions += 1;
        if res.error_value > self.error {
            self.error = res.error_value;
            self.f = f.clone();
            self.strategy = strategy.clone();
        }
        Ok(res.error_value)
    }
}

/// Estimate the worst-case error of `policy` at noise level `delta`.
///
/// Stage one runs a fixed family of adversaries (exact answers, constant
/// `+-delta` shifts, clamp-to-zero, coarsest admissible grid snap) against
/// extreme points, a dyadic grid, and random draws. Stage two attacks the
/// worst input found: every `+-delta` sign pattern when the budget permits
/// (the search is then sign-exhaustive), otherwise seeded shift schedules
/// improved by coordinate ascent over `{-delta, 0, +delta}`.
///
/// The estimate is checked against `policy.analytic_upper(delta)` and the
/// supplied certified lower bound; a violation of either is an
/// [`Error::Inconsistency`], because both sides carry proofs.
pub fn estimate_worst_error(
    policy: &dyn Policy,
    prob: &Problem,
    delta: f64,
    certified_lower: Option<f64>,
    cfg: &SearchConfig,
) -> Result<ErrorReport> {
    let candidates = candidate_inputs(prob, cfg)?;
    let budget = policy.budget();

    let mut base = vec![NoiseStrategy::Zero];
    if delta > 0.0 {
        base.push(NoiseStrategy::FixedShift(delta));
        base.push(NoiseStrategy::FixedShift(-delta));
        base.push(NoiseStrategy::ClampToZero);
        base.push(NoiseStrategy::GridSnap { bits: quantizer_bits(delta)? });
    }

    let mut tracker = Tracker {
        error: f64::NEG_INFINITY,
        f: Point::zeros(prob.dim()),
        strategy: NoiseStrategy::Zero,
        sessions: 0,
    };
    for f in &candidates {
        for s in &base {
            tracker.run(policy, prob, delta, f, s)?;
        }
    }

    let mut exhaustive = budget == 0 || delta == 0.0;
    if !exhaustive {
        let worst_f = tracker.f.clone();
        let patterns_fit = budget <= 16 && (1usize << budget) <= cfg.sign_budget;
        if patterns_fit {
            for mask in 0..(1u64 << budget) {
                let bits: Vec<bool> = (0..budget).map(|i| mask >> i & 1 == 1).collect();
                tracker.run(policy, prob, delta, &worst_f, &NoiseStrategy::SignPattern(bits))?;
            }
            exhaustive = true;
        } else {
            // Seeded shift schedules, then greedy per-step improvement.
            let mut best_shifts = vec![0.0f64; budget];
            let mut best_err = f64::NEG_INFINITY;
            let mut counter = 1u64 << 32;
            let mut spent = 0usize;
            for _ in 0..16 {
                let shifts: Vec<f64> = (0..budget)
                    .map(|_| {
                        counter += 1;
                        delta * symmetric_unit(cfg.seed, counter)
                    })
                    .collect();
                let e = tracker.run(
                    policy,
                    prob,
                    delta,
                    &worst_f,
                    &NoiseStrategy::SearchDriven { shifts: shifts.clone() },
                )?;
                spent += 1;
                if e > best_err {
                    best_err = e;
                    best_shifts = shifts;
                }
            }
            'ascent: loop {
                let mut improved = false;
                for i in 0..budget {
                    for v in [-delta, 0.0, delta] {
                        if spent >= cfg.ascent_budget {
                            break 'ascent;
                        }
                        let mut shifts = best_shifts.clone();
                        shifts[i] = v;
                        let e = tracker.run(
                            policy,
                            prob,
                            delta,
                            &worst_f,
                            &NoiseStrategy::SearchDriven { shifts: shifts.clone() },
                        )?;
                        spent += 1;
                        if e > best_err {
                            best_err = e;
                            best_shifts = shifts;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
        }
    }

    let analytic_upper = policy.analytic_upper(delta);
    if let Some(upper) = analytic_upper {
        if tracker.error > upper + CHECK_TOL {
            return Err(Error::Inconsistency(format!(
                "search found error {} above the analytic guarantee {upper} of policy {}",
                tracker.error,
                policy.name()
            )));
        }
    }
    if let Some(lower) = certified_lower {
        if lower > tracker.error + CHECK_TOL {
            return Err(Error::Inconsistency(format!(
                "certified lower bound {lower} exceeds the realized worst error {} of policy {}",
                tracker.error,
                policy.name()
            )));
        }
    }

    Ok(ErrorReport {
        policy: policy.name().to_string(),
        n: budget,
        delta,
        estimated_worst_error: tracker.error,
        analytic_upper,
        certified_lower,
        theory_ref: policy.theory_ref().to_string(),
        exhaustive,
        worst_f: tracker.f,
        worst_strategy: tracker.strategy,
    })
}
