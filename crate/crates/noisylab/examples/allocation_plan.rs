//! Accuracy-driven measurement allocation for a diagonal operator on the
//! sup norm: keep only the coordinates whose singular value exceeds the
//! target, then refine each just enough.
//!
//! Run with: cargo run --example allocation_plan

use noisylab::algorithms::{allocate, composite_policy, write_plan_csv};
use noisylab::harness::{estimate_worst_error, SearchConfig};
use noisylab::measurement::Policy;
use noisylab::spaces::{power_sigma, NormTag, Problem};

fn main() -> noisylab::Result<()> {
    // sigma_j = 1/j, truncated at 8 terms; reach eps = 1/4 at delta = 1/2.
    let (sigma, tail) = power_sigma(1.0, 8)?;
    let prob = Problem::diagonal(sigma, tail, NormTag::INF)?;
    let eps = 0.25;
    let delta = 0.5;
    let plan = allocate(&prob, eps, delta)?;

    println!("target {eps} at noise {delta}:");
    println!("  keep {} coordinates (sigma_4 = 0.25 <= eps kills the tail)", plan.truncation);
    println!("  rounds per coordinate: {:?}", plan.rounds);
    println!("  total measurements: {}", plan.total);
    println!("  ideal fractional cost: {}", plan.log_cost_term);
    println!("  rounding slack: {} (always within one per kept coordinate)", plan.slack);
    assert_eq!(plan.rounds, vec![2, 1, 1]);
    assert_eq!(plan.total, 4);
    println!();

    let mut csv = Vec::new();
    write_plan_csv(&mut csv, &prob, &plan)?;
    print!("{}", String::from_utf8(csv).expect("csv is utf-8"));
    println!();

    // The composite policy spends those rounds coordinate by coordinate;
    // exhaustive sign-pattern search confirms the worst case stays at or
    // under eps.
    let pol = composite_policy(&prob, &plan)?;
    assert_eq!(pol.budget(), plan.total);
    let report = estimate_worst_error(&pol, &prob, delta, None, &SearchConfig::default())?;
    println!(
        "composite policy: searched worst error {} (exhaustive: {}), guarantee {}",
        report.estimated_worst_error,
        report.exhaustive,
        pol.analytic_upper(delta).unwrap()
    );
    assert!(report.estimated_worst_error <= eps + 1e-12);

    // Tighter targets spend more, but only logarithmically — until the
    // target drops below the tail bound 1/9, where no truncation of these
    // 8 terms can ever certify the accuracy and the planner refuses.
    println!();
    let plan = allocate(&prob, 0.125, delta)?;
    println!(
        "eps 0.125: keep {}, rounds {:?}, total {}",
        plan.truncation, plan.rounds, plan.total
    );
    let infeasible = allocate(&prob, 0.0625, delta);
    println!("eps 0.0625: {}", infeasible.unwrap_err());
    Ok(())
}
