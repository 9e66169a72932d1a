//! Coordinate refinement: geometric error decay from a constant number of
//! bounded-range measurements per round.
//!
//! Round 1 reads x_i directly. Round j rescales the remaining uncertainty
//! interval of width 2*delta^(j-1) up to [-1, 1], reads the residual, and
//! shrinks the interval by another factor delta. After r rounds the interval
//! has width exactly 2*delta^r, and its clamped midpoint misses x_i by at
//! most delta^r — which is also exactly the worst case.
//!
//! Run with: cargo run --example coordinate_refinement

use noisylab::algorithms::CoordinateRefinement;
use noisylab::bounds::{lipschitz_floor, verify_lipschitz_floor};
use noisylab::harness::{estimate_worst_error, SearchConfig};
use noisylab::measurement::{run_session, NoiseAdversary, NoiseStrategy, Policy};
use noisylab::spaces::{NormTag, Point, Problem};

fn main() -> noisylab::Result<()> {
    let delta = 0.5;
    let rounds = 3;
    let prob = Problem::identity(NormTag::INF, NormTag::INF, 1)?;
    let pol = CoordinateRefinement::uniform(&prob, rounds, delta)?;
    println!(
        "1 coordinate, {rounds} rounds at delta {delta}: guaranteed error {}",
        pol.analytic_upper(delta).unwrap()
    );
    println!();

    // Narrate one session against the all-up adversary.
    let f = Point::from_slice(&[0.3])?;
    let adv = NoiseAdversary::new(delta, NoiseStrategy::FixedShift(delta))?;
    let res = run_session(&pol, &prob, &f, &adv)?;
    for (step, entry_y) in res.transcript.values().enumerate() {
        println!("round {}: observed {entry_y}", step + 1);
    }
    println!(
        "x = 0.3 reconstructed as {} (error {})",
        res.output.entries()[0],
        res.error_value
    );
    assert!(res.error_value <= delta.powi(rounds as i32) + 1e-15);
    println!();

    // Exhaustive adversarial search certifies the worst case is delta^r on
    // the nose, and the indistinguishability floor certifies no policy in
    // the same class can beat it: upper and lower bounds coincide.
    let lip = delta.powi(1 - rounds as i32);
    let floor = lipschitz_floor(&prob, lip, delta)?;
    let realized = verify_lipschitz_floor(&floor, &pol, &prob, delta)?;
    let report = estimate_worst_error(
        &pol,
        &prob,
        delta,
        Some(floor.claimed),
        &SearchConfig::default(),
    )?;
    println!("floor claims    {}", floor.claimed);
    println!("floor realized  {realized}");
    println!("searched worst  {} (exhaustive: {})", report.estimated_worst_error, report.exhaustive);
    println!("delta^r         {}", delta.powi(rounds as i32));
    assert_eq!(report.estimated_worst_error, delta.powi(rounds as i32));
    assert_eq!(floor.claimed, delta.powi(rounds as i32));
    Ok(())
}
