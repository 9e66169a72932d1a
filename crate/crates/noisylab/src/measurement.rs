//! The information model.
//!
//! A policy learns about an unknown `f` in the domain ball only through
//! measurement functionals with values in `[-1, 1]`. The observed value of a
//! functional may deviate from the true one by at most `delta`, and the
//! deviation is chosen by an adversary, not by chance: every strategy here is
//! a deterministic function of the true value, the step index and (for seeded
//! strategies) a counter-based generator. The exact guarantee
//! `|y - lambda(f)| <= delta` is asserted on every observation.
//!
//! Functionals form a closed descriptor vocabulary so that transcripts can be
//! serialized and sessions replayed bit-for-bit.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::sync::Arc;

use crate::spaces::{dist_to_union, norm_slice, NormTag, Point, Problem};
use crate::util::{next_toward, symmetric_unit};
use crate::{Error, Result};

/// Slack accepted when checking analytic ranges against [-1, 1]; covers the
/// domain-membership tolerance propagated through a dual norm of 1.
const RANGE_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Functional descriptors
// ---------------------------------------------------------------------------

/// The measurement vocabulary. Everything a policy may ask is one of these,
/// so a transcript entry fully determines how to re-evaluate the functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Descriptor {
    /// `f -> sum_i w_i f_i`. Admissible as class `linear` when the dual norm
    /// of the weights (w.r.t. the domain norm) is at most 1.
    LinearForm { weights: Vec<f64> },
    /// `f -> (2/eta) * min(dist(S f, union of balls), cap) - 1`, the probe
    /// used by cover bisection. `cap = delta_plus * eta` keeps the value in
    /// `[-1, 2*delta_plus - 1]`.
    DistToUnion { centers: Arc<Vec<Point>>, radius: f64, q: NormTag, eta: f64, cap: f64 },
    /// Level-`j` coordinate probe: `f -> clamp(delta^(1-j) * (f_i - anchor))`.
    /// The ramp reaches +-1 exactly where the clamp takes over, so the
    /// functional is continuous with Lipschitz constant `delta^(1-j)`.
    CoordRefine { index: usize, anchor: f64, level: u32, delta: f64 },
    /// Digit `digit` (big-endian, base `2^bits`, `n_digits` wide) of the index
    /// of the cover cell nearest to `S f`, emitted as the quantizer level for
    /// that digit. Piecewise constant, hence class `arbitrary`.
    QuantizedCell { centers: Arc<Vec<Point>>, q: NormTag, digit: usize, n_digits: usize, bits: u32 },
    /// `f -> clamp(a * inner(f) + b)`: the rescaled-residual composition used
    /// by noise correction.
    AffineClamp { inner: Box<Functional>, a: f64, b: f64 },
}

/// Declared information class of a functional. Validation checks the
/// declaration against what the descriptor can actually guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FunctionalClass {
    Linear,
    Continuous,
    Lipschitz(f64),
    Arbitrary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    pub descriptor: Descriptor,
    pub declared_class: FunctionalClass,
}

impl Functional {
    pub fn linear(weights: Vec<f64>) -> Self {
        Functional { descriptor: Descriptor::LinearForm { weights }, declared_class: FunctionalClass::Linear }
    }

    /// The coordinate read `f -> f_i` as a linear form.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut weights = vec![0.0; dim];
        weights[i] = 1.0;
        Functional::linear(weights)
    }

    pub fn coord_refine(index: usize, anchor: f64, level: u32, delta: f64) -> Self {
        let lip = delta.powi(1 - level as i32);
        Functional {
            descriptor: Descriptor::CoordRefine { index, anchor, level, delta },
            declared_class: FunctionalClass::Lipschitz(lip),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.descriptor {
            Descriptor::LinearForm { .. } => "linear_form",
            Descriptor::DistToUnion { .. } => "dist_to_union",
            Descriptor::CoordRefine { .. } => "coord_refine",
            Descriptor::QuantizedCell { .. } => "quantized_cell",
            Descriptor::AffineClamp { .. } => "affine_clamp",
        }
    }

    /// Compact JSON of the parameters for transcript rows. Heavy payloads
    /// (center lists) are summarized by their cardinality.
    pub fn params_json(&self) -> String {
        let v = match &self.descriptor {
            Descriptor::LinearForm { weights } => serde_json::json!({ "weights": weights }),
            Descriptor::DistToUnion { centers, radius, q, eta, cap } => serde_json::json!({
                "centers": centers.len(),
                "radius": radius,
                "q": q.to_string(),
                "eta": eta,
                "cap": cap,
            }),
            Descriptor::CoordRefine { index, anchor, level, delta } => serde_json::json!({
                "index": index, "anchor": anchor, "level": level, "delta": delta,
            }),
            Descriptor::QuantizedCell { centers, digit, n_digits, bits, .. } => serde_json::json!({
                "cells": centers.len(), "digit": digit, "n_digits": n_digits, "bits": bits,
            }),
            Descriptor::AffineClamp { inner, a, b } => serde_json::json!({
                "a": a, "b": b, "inner": inner.kind_name(),
            }),
        };
        v.to_string()
    }

    /// Evaluate with the range contract enforced: the result is exactly in
    /// [-1, 1], and values that leave the interval by more than the tolerance
    /// are an error rather than silently clamped.
    pub fn eval(&self, prob: &Problem, f: &Point) -> Result<f64> {
        let v = self.eval_unclamped(prob, f)?;
        if v < -1.0 - RANGE_TOL || v > 1.0 + RANGE_TOL {
            return Err(Error::RangeViolation(format!(
                "{} produced {v} outside [-1, 1]",
                self.kind_name()
            )));
        }
        Ok(v.clamp(-1.0, 1.0))
    }

    /// Raw value without the final range enforcement. Descriptors whose
    /// definition includes a clamp still clamp; only values that a
    /// `LinearForm` genuinely takes can escape [-1, 1] here. This is what the
    /// unbounded-range exploit demo needs.
    pub fn eval_unclamped(&self, prob: &Problem, f: &Point) -> Result<f64> {
        match &self.descriptor {
            Descriptor::LinearForm { weights } => {
                if weights.len() != f.dim() {
                    return Err(Error::InvalidInput(format!(
                        "linear form on dimension {}, point has {}",
                        weights.len(),
                        f.dim()
                    )));
                }
                Ok(weights.iter().zip(f.entries()).map(|(w, x)| w * x).sum())
            }
            Descriptor::DistToUnion { centers, radius, q, eta, cap } => {
                let sf = prob.apply(f)?;
                let d = dist_to_union(&sf, centers, *radius, *q)?;
                Ok((2.0 / eta) * d.min(*cap) - 1.0)
            }
            Descriptor::CoordRefine { index, anchor, level, delta } => {
                if *index >= f.dim() {
                    return Err(Error::InvalidInput(format!(
                        "coordinate {index} out of range for dimension {}",
                        f.dim()
                    )));
                }
                let resid = f[*index] - anchor;
                let scale = delta.powi((*level as i32) - 1); // delta^(j-1)
                // Saturated branch only outside the ramp; the tie at
                // |resid| = delta^(j-1) uses the rescaled residual, which
                // coincides with the sign there.
                if resid.abs() <= scale {
                    Ok(resid / scale)
                } else {
                    Ok(resid.signum())
                }
            }
            Descriptor::QuantizedCell { centers, q, digit, n_digits, bits } => {
                let sf = prob.apply(f)?;
                let idx = nearest_center(&sf, centers, *q)?;
                let d = cell_digit(idx, *digit, *n_digits, *bits);
                Ok(level_value(d, *bits))
            }
            Descriptor::AffineClamp { inner, a, b } => {
                let v = inner.eval(prob, f)?;
                Ok((a * v + b).clamp(-1.0, 1.0))
            }
        }
    }
}

/// Index of the nearest center in the norm `q`; ties break to the lowest index.
pub(crate) fn nearest_center(y: &Point, centers: &[Point], q: NormTag) -> Result<usize> {
    if centers.is_empty() {
        return Err(Error::InvalidInput("no centers".into()));
    }
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, c) in centers.iter().enumerate() {
        let d = norm_slice(y.sub(c).entries(), q);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    Ok(best)
}

/// Digit `digit` (0 = most significant) of `idx` written in base `2^bits`
/// with `n_digits` digits.
pub(crate) fn cell_digit(idx: usize, digit: usize, n_digits: usize, bits: u32) -> usize {
    if bits == 0 {
        return 0;
    }
    let shift = bits as usize * (n_digits - 1 - digit);
    (idx >> shift) & ((1usize << bits) - 1)
}

/// Quantizer level for digit value `d` among `2^bits` equispaced levels in
/// [-1, 1]; a single level degenerates to 0.
pub(crate) fn level_value(d: usize, bits: u32) -> f64 {
    let count = 1usize << bits;
    if count == 1 {
        0.0
    } else {
        -1.0 + 2.0 * d as f64 / (count - 1) as f64
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// What static analysis can say about a functional on a given problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Analytic range sits inside [-1, 1] (up to tolerance).
    pub range_ok: bool,
    /// Exact dual norm of the weights for linear forms.
    pub dual_norm: Option<f64>,
    /// Analytic Lipschitz constant w.r.t. the domain norm, where one exists.
    pub lipschitz_estimate: Option<f64>,
    /// The declared class is justified by the descriptor.
    pub class_consistent: bool,
}

/// Exact dual norm of a weight vector w.r.t. the domain exponent `p`.
fn dual_norm(weights: &[f64], p: NormTag) -> f64 {
    norm_slice(weights, p.dual())
}

fn descriptor_is_continuous(d: &Descriptor) -> bool {
    match d {
        Descriptor::LinearForm { .. } | Descriptor::DistToUnion { .. } | Descriptor::CoordRefine { .. } => true,
        // A quantized cell is piecewise constant; it is continuous only in the
        // degenerate single-cell case.
        Descriptor::QuantizedCell { centers, bits, .. } => centers.len() <= 1 || *bits == 0,
        Descriptor::AffineClamp { inner, .. } => descriptor_is_continuous(&inner.descriptor),
    }
}

fn lipschitz_estimate(fun: &Functional, prob: &Problem) -> Option<f64> {
    match &fun.descriptor {
        Descriptor::LinearForm { weights } => Some(dual_norm(weights, prob.domain_tag())),
        // |dist(Sf, U) - dist(Sg, U)| <= |Sf - Sg|_G <= |S| * |f - g|_F, and
        // both min(.., cap) and the affine map are handled by the 2/eta factor
        Descriptor::DistToUnion { eta, .. } => Some(2.0 / eta * prob.operator_norm()),
        Descriptor::CoordRefine { level, delta, .. } => Some(delta.powi(1 - *level as i32)),
        Descriptor::QuantizedCell { .. } => None,
        Descriptor::AffineClamp { inner, a, .. } => {
            lipschitz_estimate(inner, prob).map(|l| a.abs() * l)
        }
    }
}

/// Analytic range of the raw value on the domain ball.
fn analytic_range(fun: &Functional, prob: &Problem) -> (f64, f64) {
    match &fun.descriptor {
        Descriptor::LinearForm { weights } => {
            let d = dual_norm(weights, prob.domain_tag()) * prob.domain_radius;
            (-d, d)
        }
        Descriptor::DistToUnion { eta, cap, .. } => (-1.0, 2.0 * cap / eta - 1.0),
        Descriptor::CoordRefine { .. } => (-1.0, 1.0),
        Descriptor::QuantizedCell { .. } => (-1.0, 1.0),
        Descriptor::AffineClamp { .. } => (-1.0, 1.0),
    }
}

/// Static admissibility analysis of a functional against a problem: range
/// certificate, exact dual norm for linear forms, Lipschitz estimate, and
/// whether the declared class is justified.
pub fn validate(fun: &Functional, prob: &Problem) -> ValidationReport {
    let (lo, hi) = analytic_range(fun, prob);
    let range_ok = lo >= -1.0 - RANGE_TOL && hi <= 1.0 + RANGE_TOL;
    let dual = match &fun.descriptor {
        Descriptor::LinearForm { weights } => Some(dual_norm(weights, prob.domain_tag())),
        _ => None,
    };
    let lip = lipschitz_estimate(fun, prob);
    let class_consistent = match fun.declared_class {
        FunctionalClass::Linear => {
            matches!(fun.descriptor, Descriptor::LinearForm { .. })
                && dual.map(|d| d <= 1.0 + RANGE_TOL).unwrap_or(false)
        }
        FunctionalClass::Continuous => descriptor_is_continuous(&fun.descriptor),
        FunctionalClass::Lipschitz(l) => {
            descriptor_is_continuous(&fun.descriptor)
                && lip.map(|est| est <= l * (1.0 + RANGE_TOL)).unwrap_or(false)
        }
        FunctionalClass::Arbitrary => true,
    };
    ValidationReport { range_ok, dual_norm: dual, lipschitz_estimate: lip, class_consistent }
}

/// Reject a functional whose declared class or range cannot be certified.
pub fn ensure_admissible(fun: &Functional, prob: &Problem) -> Result<()> {
    let report = validate(fun, prob);
    if !report.range_ok {
        return Err(Error::AdmissibilityViolation(format!(
            "{} can leave [-1, 1] on the domain (dual norm {:?})",
            fun.kind_name(),
            report.dual_norm
        )));
    }
    if !report.class_consistent {
        return Err(Error::AdmissibilityViolation(format!(
            "{} does not justify declared class {:?} (dual {:?}, lipschitz {:?})",
            fun.kind_name(),
            fun.declared_class,
            report.dual_norm,
            report.lipschitz_estimate
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Noise adversaries
// ---------------------------------------------------------------------------

/// How the adversary picks the observation inside `[t - delta, t + delta]`.
/// Every strategy is total and deterministic given `(true value, step)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NoiseStrategy {
    /// Faithful channel: y = t.
    Zero,
    /// Constant shift s with |s| <= delta.
    FixedShift(f64),
    /// Endpoint pattern: step i reads t + delta or t - delta according to the
    /// bit at `i mod len`.
    SignPattern(Vec<bool>),
    /// Shift drawn per step from the counter-based generator: the draw
    /// depends only on (seed, step), so equal seeds and histories coincide.
    SeededRandom { seed: u64 },
    /// Snap the true value to the midpoint grid `w_i = -1 + (2i-1) * 2^-bits`
    /// over half-open cells (top cell closed). Requires `2^-bits <= delta`.
    GridSnap { bits: u32 },
    /// Report the admissible value nearest to 0; realizes zero-information
    /// transcripts against small-valued functionals.
    ClampToZero,
    /// Per-step shift schedule; this is the vehicle the worst-case search
    /// optimizes over (its evaluation budget lives in the search config).
    /// Missing entries read as 0; entries are clamped to [-delta, delta].
    SearchDriven { shifts: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseAdversary {
    delta: f64,
    pub strategy: NoiseStrategy,
}

impl NoiseAdversary {
    pub fn new(delta: f64, strategy: NoiseStrategy) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameters(format!(
                "noise level must satisfy 0 <= delta < 1, got {delta}"
            )));
        }
        match &strategy {
            NoiseStrategy::FixedShift(s) => {
                if s.abs() > delta {
                    return Err(Error::InvalidParameters(format!(
                        "fixed shift {s} exceeds delta {delta}"
                    )));
                }
            }
            NoiseStrategy::SignPattern(bits) => {
                if bits.is_empty() {
                    return Err(Error::InvalidParameters("empty sign pattern".into()));
                }
            }
            NoiseStrategy::GridSnap { bits } => {
                if delta == 0.0 || 0.5f64.powi(*bits as i32) > delta {
                    return Err(Error::InvalidParameters(format!(
                        "grid with 2^-{bits} spacing is not admissible at delta {delta}"
                    )));
                }
            }
            _ => {}
        }
        Ok(NoiseAdversary { delta, strategy })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Observation for the given true value at the given step. The exact
    /// postcondition `|y - t| <= delta` holds in floating point, not just up
    /// to rounding.
    pub fn observe(&self, t: f64, step: usize) -> f64 {
        let y = match &self.strategy {
            NoiseStrategy::Zero => t,
            NoiseStrategy::FixedShift(s) => t + s,
            NoiseStrategy::SignPattern(bits) => {
                if bits[step % bits.len()] {
                    t + self.delta
                } else {
                    t - self.delta
                }
            }
            NoiseStrategy::SeededRandom { seed } => {
                t + self.delta * symmetric_unit(*seed, step as u64)
            }
            NoiseStrategy::GridSnap { bits } => grid_snap(t, *bits),
            NoiseStrategy::ClampToZero => {
                if t.abs() <= self.delta {
                    0.0
                } else {
                    t - self.delta * t.signum()
                }
            }
            NoiseStrategy::SearchDriven { shifts } => {
                t + shifts.get(step).copied().unwrap_or(0.0).clamp(-self.delta, self.delta)
            }
        };
        into_noise_band(y, t, self.delta)
    }
}

/// Pull `y` into `[t - delta, t + delta]` exactly, stepping by ulps when the
/// rounded endpoints overshoot. Grid values stay put because the snap already
/// lands within the band in exact arithmetic.
fn into_noise_band(mut y: f64, t: f64, delta: f64) -> f64 {
    y = y.clamp(t - delta, t + delta);
    while (y - t).abs() > delta {
        y = next_toward(y, t);
    }
    y
}

/// Nearest midpoint of the `2^bits` half-open cells covering [-1, 1], with the
/// floor rule (boundaries belong to the upper cell, the top cell is closed).
/// Grid values are exact dyadics, so `|w - t| <= 2^-bits` holds exactly.
fn grid_snap(t: f64, bits: u32) -> f64 {
    let cells = 1u64 << bits;
    let spacing = 0.5f64.powi(bits as i32); // half-width of a cell
    let u = (t + 1.0) / (2.0 * spacing);
    let mut i = (u.floor() as i64).clamp(0, cells as i64 - 1);
    let w = |i: i64| -1.0 + (2 * i + 1) as f64 * spacing;
    // guard against a rounded (t+1) crossing a cell edge
    for cand in [i - 1, i + 1] {
        if (0..cells as i64).contains(&cand) && (w(cand) - t).abs() < (w(i) - t).abs() {
            i = cand;
        }
    }
    w(i)
}

// ---------------------------------------------------------------------------
// Transcripts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub functional: Functional,
    pub y: f64,
}

/// The full record of a session: which functionals were asked and what came
/// back. Policies must be replayable from this alone.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, functional: Functional, y: f64) {
        self.entries.push(TranscriptEntry { functional, y });
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.y)
    }
}

/// Serialize a transcript as CSV rows
/// `sessionId,step,functionalKind,functionalParamsJSONText,y`.
pub fn write_transcript_csv<W: Write>(w: W, session_id: &str, t: &Transcript) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["sessionId", "step", "functionalKind", "functionalParamsJSONText", "y"])
        .map_err(csv_err)?;
    for (i, e) in t.entries.iter().enumerate() {
        wtr.write_record([
            session_id,
            &i.to_string(),
            e.functional.kind_name(),
            &e.functional.params_json(),
            &e.y.to_string(),
        ])
        .map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

// ---------------------------------------------------------------------------
// Policies and sessions
// ---------------------------------------------------------------------------

/// A recovery policy: chooses the next functional from the transcript so far
/// (adaptively or not), and reconstructs a point of the target space at the
/// end. Implementations must be pure functions of the transcript so that
/// replaying a transcript reproduces the same choices.
pub trait Policy {
    fn name(&self) -> &str;
    /// Maximum number of measurements.
    fn budget(&self) -> usize;
    /// Whether later functionals depend on earlier observations.
    fn is_adaptive(&self) -> bool;
    /// Next functional, or None to stop early.
    fn choose_next(&self, transcript: &Transcript) -> Option<Functional>;
    fn reconstruct(&self, transcript: &Transcript) -> Result<Point>;
    /// Worst-case error guarantee at noise level `delta`, where the
    /// construction provides one.
    fn analytic_upper(&self, _delta: f64) -> Option<f64> {
        None
    }
    /// Short tag naming the guarantee behind [`Policy::analytic_upper`],
    /// carried into reports and sweep rows.
    fn theory_ref(&self) -> &'static str {
        "none"
    }
}

/// Measurement-free baseline: always answers with a fixed point.
pub struct ConstantPolicy {
    pub output: Point,
}

impl ConstantPolicy {
    pub fn zeros(prob: &Problem) -> Self {
        ConstantPolicy { output: Point::zeros(prob.dim()) }
    }
}

impl Policy for ConstantPolicy {
    fn name(&self) -> &str {
        "constant"
    }
    fn budget(&self) -> usize {
        0
    }
    fn is_adaptive(&self) -> bool {
        false
    }
    fn choose_next(&self, _t: &Transcript) -> Option<Functional> {
        None
    }
    fn reconstruct(&self, _t: &Transcript) -> Result<Point> {
        Ok(self.output.clone())
    }
}

#[derive(Debug, Clone)]
pub struct SessionResult {
    pub transcript: Transcript,
    pub output: Point,
    /// Distance of the output to `S f` in the target norm.
    pub error_value: f64,
}

/// Run one complete session of a policy against an adversary on a fixed
/// input. Each proposed functional is validated before it is evaluated; a
/// failure aborts the session.
pub fn run_session(
    policy: &dyn Policy,
    prob: &Problem,
    f: &Point,
    adv: &NoiseAdversary,
) -> Result<SessionResult> {
    if !prob.contains(f) {
        return Err(Error::DomainViolation(format!(
            "session input outside the domain ball (|f| = {})",
            norm_slice(f.entries(), prob.domain_tag())
        )));
    }
    let mut transcript = Transcript::default();
    while transcript.len() < policy.budget() {
        let Some(fun) = policy.choose_next(&transcript) else { break };
        ensure_admissible(&fun, prob)?;
        let t = fun.eval(prob, f)?;
        let y = adv.observe(t, transcript.len());
        assert!(
            (y - t).abs() <= adv.delta(),
            "adversary broke the noise bound: |{y} - {t}| > {}",
            adv.delta()
        );
        transcript.push(fun, y);
    }
    let output = policy.reconstruct(&transcript)?;
    let sf = prob.apply(f)?;
    let error_value = prob.image_distance(&sf, &output)?;
    Ok(SessionResult { transcript, output, error_value })
}

/// Demonstration of why the range restriction matters: with the clamp
/// disabled, one measurement of `eta * lambda` at noise level `delta` recovers
/// `lambda(f)` to accuracy `delta1 = delta / eta`, arbitrarily better than
/// `delta`. Refuses to run unless the caller explicitly disables the clamp.
pub fn exploit_unbounded_range(
    lam: &Functional,
    prob: &Problem,
    f: &Point,
    delta1: f64,
    adv: &NoiseAdversary,
    clamp_disabled: bool,
) -> Result<f64> {
    if !clamp_disabled {
        return Err(Error::RangeViolation(
            "rescaling past [-1, 1] requires explicitly disabling the clamp (demo mode)".into(),
        ));
    }
    if !(delta1 > 0.0) {
        return Err(Error::InvalidParameters(format!("target accuracy must be positive, got {delta1}")));
    }
    let raw = lam.eval_unclamped(prob, f)?;
    let delta = adv.delta();
    if delta == 0.0 {
        return Ok(raw); // noiseless channel needs no rescaling
    }
    let eta = delta / delta1;
    let y1 = adv.observe(eta * raw, 0);
    Ok(y1 / eta)
}
