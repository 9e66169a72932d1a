//! Machine-checkable lower bounds: every certificate names two witnesses
//! the policy provably cannot tell apart, then re-runs the policy to watch
//! the claimed error actually happen.
//!
//! Run with: cargo run --example lower_bound_floors

use noisylab::algorithms::CoordinateRefinement;
use noisylab::bounds::{
    grid_adversary, linear_floor, lipschitz_floor, verify_linear_floor, verify_lipschitz_floor,
};
use noisylab::measurement::{ConstantPolicy, Policy};
use noisylab::spaces::{NormTag, Problem};

fn main() -> noisylab::Result<()> {
    // Linear floor: small functionals lose +-delta*x entirely — the
    // adversary answers 0 to everything, so the two witnesses produce the
    // same transcript and one output must miss one of them by delta*|S|.
    let prob = Problem::identity(NormTag::INF, NormTag::L2, 2)?;
    let delta = 0.3;
    let cert = linear_floor(&prob, delta)?;
    let baseline = ConstantPolicy::zeros(&prob);
    let realized = verify_linear_floor(&cert, &baseline, &prob, delta)?;
    println!("linear floor on the sup ball into l2 (operator norm sqrt(2)):");
    println!("  claimed  {}", cert.claimed);
    println!("  realized {realized} against the zero policy");
    println!("  witnesses {:?} vs {:?}", cert.witnesses.0.entries(), cert.witnesses.1.entries());
    assert!(realized >= cert.claimed - 1e-9);
    println!();

    // Lipschitz floor, matched case: refinement with r rounds is built from
    // functionals of Lipschitz constant delta^(1-r), and the floor for that
    // class lands exactly on the error refinement achieves. Upper and lower
    // bounds meet; neither side can be improved.
    let prob = Problem::identity(NormTag::INF, NormTag::INF, 1)?;
    let delta = 0.5;
    println!("matched refinement floors (1 coordinate, delta {delta}):");
    for rounds in 1..=3u32 {
        let pol = CoordinateRefinement::uniform(&prob, rounds, delta)?;
        let lip = delta.powi(1 - rounds as i32);
        let cert = lipschitz_floor(&prob, lip, delta)?;
        let realized = verify_lipschitz_floor(&cert, &pol, &prob, delta)?;
        let achieved = pol.analytic_upper(delta).unwrap();
        println!(
            "  r = {rounds}: floor {} = achieved {} (realized {realized})",
            cert.claimed, achieved
        );
        assert_eq!(cert.claimed, achieved);
        assert_eq!(cert.claimed, delta.powi(rounds as i32));
    }
    println!();

    // Grid adversary: snap every observation to a midpoint grid no finer
    // than the noise allows, then search inputs. Whatever error it finds
    // has already been realized -- the certificate ships the witness.
    let pol = CoordinateRefinement::uniform(&prob, 1, delta)?;
    let cert = grid_adversary(&pol, &prob, delta, 3, 4096)?;
    println!("grid adversary vs 1-round refinement:");
    println!("  certified error {} at witness {:?}", cert.claimed, cert.witnesses.0.entries());
    assert_eq!(cert.claimed, 0.5);
    Ok(())
}
