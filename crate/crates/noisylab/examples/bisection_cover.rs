//! Adaptive bisection over a ball cover, with the containment invariant
//! traced step by step.
//!
//! Each step probes "how far is the image from the union of the first half
//! of the active balls", threshold-tests the noisy answer, and keeps the
//! half that must still contain the image — after inflating every radius by
//! a slack `delta * eta` that makes the test robust to noise. After n steps
//! one inflated ball of radius `r + n * delta * eta` remains.
//!
//! Run with: cargo run --example bisection_cover

use noisylab::algorithms::CoverBisection;
use noisylab::entropy::grid_cover_linf;
use noisylab::measurement::{run_session, NoiseAdversary, NoiseStrategy, Policy};
use noisylab::spaces::{NormTag, Point, Problem};

fn main() -> noisylab::Result<()> {
    let m = 2;
    let steps = 2;
    let delta = 0.3;
    let (centers, radius) = grid_cover_linf(m, steps as u64)?;
    let prob = Problem::identity(NormTag::INF, NormTag::INF, m)?;
    let pol = CoverBisection::new(centers.clone(), radius, NormTag::INF, steps, delta)?;
    println!(
        "{} balls of radius {radius}, {steps} steps, delta {delta}, threshold {}, probe scale {}",
        centers.len(),
        pol.delta_plus(),
        pol.eta()
    );
    println!("guaranteed error: {}", pol.analytic_upper(delta).unwrap());
    println!();

    // One session, narrated. The adversary pushes every answer upward.
    let f = Point::from_slice(&[0.7, -0.2])?;
    let adv = NoiseAdversary::new(delta, NoiseStrategy::FixedShift(delta))?;
    let res = run_session(&pol, &prob, &f, &adv)?;
    let sf = prob.apply(&f)?;
    println!("f = {:?}", f.entries());
    for (step, state) in pol.states(&res.transcript).iter().enumerate() {
        let dist_true = state
            .active
            .iter()
            .map(|&i| prob.image_distance(&sf, &centers[i]).unwrap())
            .fold(f64::INFINITY, f64::min);
        println!(
            "after step {step}: active balls {:?}, inflated radius {}, image distance {}",
            state.active, state.radius, dist_true
        );
        assert!(
            dist_true <= state.radius + 1e-12,
            "the image must stay inside the active union"
        );
    }
    println!("output {:?}, error {}", res.output.entries(), res.error_value);
    println!();

    // Worst case over every sign pattern and a grid of inputs.
    let mut worst = 0.0f64;
    let mut sessions = 0;
    for mask in 0u32..1 << steps {
        let pattern: Vec<bool> = (0..steps).map(|i| mask >> i & 1 == 1).collect();
        let adv = NoiseAdversary::new(delta, NoiseStrategy::SignPattern(pattern))?;
        for g in noisylab::spaces::domain_grid(&prob, 3, 10_000)? {
            let res = run_session(&pol, &prob, &g, &adv)?;
            worst = worst.max(res.error_value);
            sessions += 1;
        }
    }
    println!(
        "worst error over {sessions} exhaustive-pattern sessions: {worst} <= {}",
        pol.analytic_upper(delta).unwrap()
    );
    assert!(worst <= pol.analytic_upper(delta).unwrap() + 1e-12);
    Ok(())
}
