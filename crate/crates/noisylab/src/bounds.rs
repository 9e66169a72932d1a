//! Certified lower bounds on recovery error, and verifiers that realize them
//! against concrete policies.
//!
//! Two mechanisms are implemented. *Realized* bounds run a policy against an
//! explicit admissible adversary and report the worst error actually
//! observed — a lower bound for that policy with the witness attached.
//! *Indistinguishability floors* exhibit a pair of inputs that every
//! functional of a given class maps into overlapping noise bands, so some
//! single transcript is consistent with both; any output then errs by at
//! least half the image distance of the pair, for every policy of the class.

use crate::algorithms::quantizer_bits;
use crate::error::{Error, Result};
use crate::measurement::{
    ensure_admissible, run_session, NoiseAdversary, NoiseStrategy, Policy, Transcript,
};
use crate::spaces::{domain_extreme_points, domain_grid, modulus, Point, Problem, ProblemKind};
use crate::util::next_toward;

const FLOOR_TOL: f64 = 1e-9;
const SELF_CHECK_TOL: f64 = 1e-12;

/// A claimed error floor together with the pair of inputs witnessing it.
/// For realized (adversary) bounds both witnesses are the same point; for
/// indistinguishability floors they are the pair the transcript cannot
/// separate.
#[derive(Debug, Clone)]
pub struct LowerBoundCertificate {
    pub name: &'static str,
    pub claimed: f64,
    pub witnesses: (Point, Point),
    pub theory_ref: &'static str,
}

/// Worst error of `policy` over extreme points plus a dyadic grid of the
/// domain ball, under the coarsest admissible snap-to-grid adversary (exact
/// answers when `delta = 0`). The result is a certified lower bound on the
/// policy's worst-case error at noise level `delta`, with the worst input
/// attached as witness.
pub fn grid_adversary(
    policy: &dyn Policy,
    prob: &Problem,
    delta: f64,
    g: u32,
    cap: usize,
) -> Result<LowerBoundCertificate> {
    let strategy = if delta == 0.0 {
        NoiseStrategy::Zero
    } else {
        NoiseStrategy::GridSnap { bits: quantizer_bits(delta)? }
    };
    let adv = NoiseAdversary::new(delta, strategy)?;
    let mut candidates = domain_extreme_points(prob);
    candidates.extend(domain_grid(prob, g, cap)?);
    let mut worst: Option<(f64, Point)> = None;
    for f in candidates {
        let res = run_session(policy, prob, &f, &adv)?;
        if worst.as_ref().map_or(true, |(e, _)| res.error_value > *e) {
            worst = Some((res.error_value, f));
        }
    }
    let (claimed, witness) =
        worst.ok_or_else(|| Error::InvalidInput("no candidate inputs".into()))?;
    Ok(LowerBoundCertificate {
        name: "grid_adversary",
        claimed,
        witnesses: (witness.clone(), witness),
        theory_ref: "grid-snap-realized",
    })
}

fn check_noise(delta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParameters(format!(
            "noise level must satisfy 0 <= delta < 1, got {delta}"
        )));
    }
    Ok(())
}

/// Floor for policies using norm-one linear functionals: the witnesses
/// `+-delta * x_star` keep every such functional inside `[-delta, delta]`,
/// so answering zero throughout is admissible for both and no linear policy
/// can do better than half their image distance, which is
/// `delta * |S| = delta * operator_norm`.
pub fn linear_floor(prob: &Problem, delta: f64) -> Result<LowerBoundCertificate> {
    check_noise(delta)?;
    let x_star = match &prob.kind {
        ProblemKind::Identity { p, q, m } if p.value() > q.value() => {
            // The norm of the embedding is attained on the diagonal.
            let scale = (*m as f64).powf(-1.0 / p.value());
            Point::new(vec![scale; *m])?
        }
        _ => Point::unit(prob.dim(), 0, 1.0),
    };
    let f = x_star.scale(delta);
    let g = x_star.scale(-delta);
    let half = prob.image_distance(&prob.apply(&f)?, &prob.apply(&g)?)? / 2.0;
    let expected = delta * prob.operator_norm();
    if (half - expected).abs() > SELF_CHECK_TOL * (1.0 + expected) {
        return Err(Error::Inconsistency(format!(
            "linear floor self-check failed: witnesses give {half}, operator norm gives {expected}"
        )));
    }
    Ok(LowerBoundCertificate {
        name: "linear_floor",
        claimed: half,
        witnesses: (f, g),
        theory_ref: "zero-transcript-indistinguishable",
    })
}

/// Floor for policies using `lip`-Lipschitz functionals: witnesses at
/// `+-a e_1` with `2a = min(2 delta / lip, 2)` differ by at most `gamma` in
/// the domain, so every functional maps them within `2 delta` of each other
/// and a midpoint transcript is admissible for both. The floor is half the
/// modulus of continuity at `gamma`.
pub fn lipschitz_floor(prob: &Problem, lip: f64, delta: f64) -> Result<LowerBoundCertificate> {
    check_noise(delta)?;
    if !(lip > 0.0) || !lip.is_finite() {
        return Err(Error::InvalidParameters(format!(
            "Lipschitz constant must be positive and finite, got {lip}"
        )));
    }
    let gamma = 2.0 * delta / lip;
    let a = gamma.min(2.0 * prob.domain_radius) / 2.0;
    let f = Point::unit(prob.dim(), 0, a);
    let g = Point::unit(prob.dim(), 0, -a);
    let half = prob.image_distance(&prob.apply(&f)?, &prob.apply(&g)?)? / 2.0;
    let expected = modulus(prob, gamma)? / 2.0;
    if (half - expected).abs() > SELF_CHECK_TOL * (1.0 + expected) {
        return Err(Error::Inconsistency(format!(
            "Lipschitz floor self-check failed: witnesses give {half}, modulus gives {expected}"
        )));
    }
    Ok(LowerBoundCertificate {
        name: "lipschitz_floor",
        claimed: half,
        witnesses: (f, g),
        theory_ref: "midpoint-transcript-indistinguishable",
    })
}

/// Realize [`linear_floor`] against a concrete policy: replay the policy
/// answering zero to every question, after checking that each question it
/// asks indeed keeps both witnesses inside the zero-answer noise band. A
/// functional that separates the witnesses is reported as
/// [`Error::ClassMismatch`] — the floor simply does not apply to that
/// policy. Returns the realized worst error over the two witnesses.
pub fn verify_linear_floor(
    cert: &LowerBoundCertificate,
    policy: &dyn Policy,
    prob: &Problem,
    delta: f64,
) -> Result<f64> {
    check_noise(delta)?;
    let mut outputs = Vec::with_capacity(2);
    let mut realized = 0.0f64;
    for w in [&cert.witnesses.0, &cert.witnesses.1] {
        let mut transcript = Transcript::default();
        for _ in 0..policy.budget() {
            let Some(lam) = policy.choose_next(&transcript) else { break };
            ensure_admissible(&lam, prob)?;
            let t = lam.eval(prob, w)?;
            if t.abs() > delta + FLOOR_TOL {
                return Err(Error::ClassMismatch(format!(
                    "functional separates a witness from zero: |lambda(f)| = {} > delta = {delta}",
                    t.abs()
                )));
            }
            transcript.push(lam, 0.0);
        }
        let output = policy.reconstruct(&transcript)?;
        let err = prob.image_distance(&prob.apply(w)?, &output)?;
        realized = realized.max(err);
        outputs.push(output);
    }
    if outputs[0] != outputs[1] {
        return Err(Error::Inconsistency(
            "identical transcripts produced different outputs; policy is not replayable".into(),
        ));
    }
    if realized + FLOOR_TOL < cert.claimed {
        return Err(Error::Inconsistency(format!(
            "zero-transcript session realized {realized}, below the certified floor {}",
            cert.claimed
        )));
    }
    Ok(realized)
}

/// One session answered so that the same transcript is admissible for both
/// `f` and `g`: each observation is the midpoint of the two true values,
/// nudged into both noise bands exactly. Fails with
/// [`Error::ClassMismatch`] if any functional the policy asks separates the
/// pair by more than `2 delta` (the pair is then legitimately
/// distinguishable and no common transcript exists).
#[derive(Debug, Clone)]
pub struct PairedSession {
    pub transcript: Transcript,
    pub output: Point,
    pub error_f: f64,
    pub error_g: f64,
}

pub fn paired_session(
    policy: &dyn Policy,
    prob: &Problem,
    f: &Point,
    g: &Point,
    delta: f64,
) -> Result<PairedSession> {
    check_noise(delta)?;
    if !prob.contains(f) || !prob.contains(g) {
        return Err(Error::DomainViolation("paired inputs must lie in the domain ball".into()));
    }
    let mut transcript = Transcript::default();
    for _ in 0..policy.budget() {
        let Some(lam) = policy.choose_next(&transcript) else { break };
        ensure_admissible(&lam, prob)?;
        let tf = lam.eval(prob, f)?;
        let tg = lam.eval(prob, g)?;
        if (tf - tg).abs() > 2.0 * delta {
            return Err(Error::ClassMismatch(format!(
                "functional separates the pair by {} > 2 delta = {}",
                (tf - tg).abs(),
                2.0 * delta
            )));
        }
        let mut y = (tf + tg) / 2.0;
        for _ in 0..64 {
            let off_f = (y - tf).abs() > delta;
            let off_g = (y - tg).abs() > delta;
            if !off_f && !off_g {
                break;
            }
            y = next_toward(y, if off_f { tf } else { tg });
        }
        if (y - tf).abs() > delta || (y - tg).abs() > delta {
            return Err(Error::ClassMismatch(format!(
                "no single admissible observation exists for the pair at step {}",
                transcript.len()
            )));
        }
        transcript.push(lam, y);
    }
    let output = policy.reconstruct(&transcript)?;
    let error_f = prob.image_distance(&prob.apply(f)?, &output)?;
    let error_g = prob.image_distance(&prob.apply(g)?, &output)?;
    Ok(PairedSession { transcript, output, error_f, error_g })
}

/// Realize [`lipschitz_floor`] against a concrete policy via
/// [`paired_session`]. By the triangle inequality the worse of the two
/// errors is at least half the image distance of the witnesses, i.e. the
/// certified floor; anything less indicates a broken certificate or session
/// and is reported as [`Error::Inconsistency`].
pub fn verify_lipschitz_floor(
    cert: &LowerBoundCertificate,
    policy: &dyn Policy,
    prob: &Problem,
    delta: f64,
) -> Result<f64> {
    let session = paired_session(policy, prob, &cert.witnesses.0, &cert.witnesses.1, delta)?;
    let realized = session.error_f.max(session.error_g);
    if realized + FLOOR_TOL < cert.claimed {
        return Err(Error::Inconsistency(format!(
            "paired session realized {realized}, below the certified floor {}",
            cert.claimed
        )));
    }
    Ok(realized)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{CellEncoder, CoordinateRefinement};
    use crate::measurement::ConstantPolicy;
    use crate::spaces::NormTag;

    const INF: NormTag = NormTag::INF;

    #[test]
    fn linear_floor_matches_operator_norm() {
        let prob = Problem::identity(INF, INF, 2).unwrap();
        let cert = linear_floor(&prob, 0.3).unwrap();
        assert!((cert.claimed - 0.3).abs() < 1e-15);

        let diag = Problem::diagonal(vec![0.8, 0.4], 0.0, INF).unwrap();
        let cert = linear_floor(&diag, 0.3).unwrap();
        assert!((cert.claimed - 0.24).abs() < 1e-15);

        // Contractive embedding (p > q): norm m^(1/q - 1/p) attained on the
        // diagonal, here sqrt(4) = 2.
        let emb = Problem::identity(NormTag::L2, NormTag::L1, 4).unwrap();
        let cert = linear_floor(&emb, 0.3).unwrap();
        assert!((cert.claimed - 0.6).abs() < 1e-12);
    }

    #[test]
    fn linear_floor_realized_by_zero_policy() {
        let prob = Problem::identity(INF, INF, 2).unwrap();
        let cert = linear_floor(&prob, 0.25).unwrap();
        let policy = ConstantPolicy::zeros(&prob);
        let realized = verify_linear_floor(&cert, &policy, &prob, 0.25).unwrap();
        // Zero output sits exactly at the midpoint, so the floor is attained.
        assert_eq!(realized, cert.claimed);
    }

    #[test]
    fn linear_floor_rejects_super_linear_probes() {
        // Level-2 refinement probes have slope 1/delta > 1, which pushes the
        // witness evaluation outside [-delta, delta]: the floor must report
        // the class mismatch instead of a bogus bound.
        let prob = Problem::identity(INF, INF, 1).unwrap();
        let delta = 0.5;
        let cert = linear_floor(&prob, delta).unwrap();
        let policy = CoordinateRefinement::uniform(&prob, 2, delta).unwrap();
        let err = verify_linear_floor(&cert, &policy, &prob, delta).unwrap_err();
        assert!(matches!(err, Error::ClassMismatch(_)), "got {err:?}");
    }

    #[test]
    fn matched_lipschitz_floor_is_exact_for_refinement() {
        // r rounds of refinement use functionals of Lipschitz constant
        // delta^(1-r); the floor at that constant is exactly delta^r and the
        // midpoint transcript realizes it with equality.
        for (r, delta) in [(1u32, 0.5f64), (2, 0.5), (3, 0.5), (2, 0.25)] {
            let prob = Problem::identity(INF, INF, 1).unwrap();
            let lip = delta.powi(1 - r as i32);
            let cert = lipschitz_floor(&prob, lip, delta).unwrap();
            let expect = delta.powi(r as i32);
            assert_eq!(cert.claimed, expect, "r={r} delta={delta}");
            let policy = CoordinateRefinement::uniform(&prob, r, delta).unwrap();
            let realized = verify_lipschitz_floor(&cert, &policy, &prob, delta).unwrap();
            assert_eq!(realized, expect, "r={r} delta={delta}");
        }
    }

    #[test]
    fn paired_session_rejects_piecewise_constant_encoders() {
        // A cell encoder's digit functionals jump by whole quantizer levels
        // across the cell boundary between the witnesses, far more than
        // 2 * delta: the Lipschitz floor does not apply and must say so.
        let prob = Problem::identity(INF, INF, 1).unwrap();
        let delta = 0.25;
        let cert = lipschitz_floor(&prob, 1.0, delta).unwrap();
        let centers = vec![
            Point::from_slice(&[-0.5]).unwrap(),
            Point::from_slice(&[0.5]).unwrap(),
        ];
        let policy = CellEncoder::new(centers, INF, 2, 1).unwrap();
        let err = verify_lipschitz_floor(&cert, &policy, &prob, delta).unwrap_err();
        assert!(matches!(err, Error::ClassMismatch(_)), "got {err:?}");
    }

    #[test]
    fn grid_adversary_realizes_refinement_worst_case() {
        let prob = Problem::identity(INF, INF, 1).unwrap();
        let delta = 0.5;
        let policy = CoordinateRefinement::uniform(&prob, 1, delta).unwrap();
        let cert = grid_adversary(&policy, &prob, delta, 3, 4096).unwrap();
        // One round at delta = 1/2 has worst-case error exactly delta, and
        // the snap-to-half-integers adversary attains it on grid inputs.
        assert_eq!(cert.claimed, 0.5);
        assert_eq!(cert.theory_ref, "grid-snap-realized");
        // The witness is an input the policy really fails on.
        let adv = NoiseAdversary::new(delta, NoiseStrategy::GridSnap { bits: 1 }).unwrap();
        let res = run_session(&policy, &prob, &cert.witnesses.0, &adv).unwrap();
        assert_eq!(res.error_value, cert.claimed);
    }

    #[test]
    fn grid_adversary_on_constant_policy_finds_extremes() {
        let prob = Problem::identity(INF, INF, 2).unwrap();
        let policy = ConstantPolicy::zeros(&prob);
        let cert = grid_adversary(&policy, &prob, 0.0, 2, 4096).unwrap();
        assert_eq!(cert.claimed, 1.0);
    }

    #[test]
    fn floors_validate_parameters() {
        let prob = Problem::identity(INF, INF, 1).unwrap();
        assert!(linear_floor(&prob, 1.0).is_err());
        assert!(lipschitz_floor(&prob, 0.0, 0.5).is_err());
        assert!(lipschitz_floor(&prob, f64::INFINITY, 0.5).is_err());
        // gamma saturates at the diameter: claimed caps at operator_norm * r.
        let cert = lipschitz_floor(&prob, 1e-9, 0.5).unwrap();
        assert_eq!(cert.claimed, 1.0);
    }

    #[test]
    fn noiseless_floors_collapse_to_zero() {
        let prob = Problem::diagonal(vec![1.0, 0.5], 0.0, INF).unwrap();
        assert_eq!(linear_floor(&prob, 0.0).unwrap().claimed, 0.0);
        assert_eq!(lipschitz_floor(&prob, 2.0, 0.0).unwrap().claimed, 0.0);
    }
}
