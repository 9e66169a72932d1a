//! Why measurements must have range [-1, 1]: without the clamp, one
//! rescaled functional squeezes the noise arbitrarily low, and the whole
//! noise model collapses.
//!
//! Run with: cargo run --example unbounded_range_exploit

use noisylab::measurement::{
    ensure_admissible, exploit_unbounded_range, Functional, NoiseAdversary, NoiseStrategy,
};
use noisylab::spaces::{NormTag, Point, Problem};

fn main() -> noisylab::Result<()> {
    let prob = Problem::identity(NormTag::INF, NormTag::INF, 2)?;
    let lam = Functional::linear(vec![0.5, 0.5]);
    let f = Point::from_slice(&[0.21, -0.47])?;
    let truth = 0.5 * 0.21 + 0.5 * (-0.47);
    let delta = 0.3;
    let adv = NoiseAdversary::new(delta, NoiseStrategy::FixedShift(delta))?;

    // Inside the model: a functional scaled past the admissible range is
    // rejected before it ever reaches the channel.
    let oversized = Functional::linear(vec![50.0, 50.0]);
    assert!(ensure_admissible(&oversized, &prob).is_err());
    println!("a 100x-rescaled functional is refused: range and norm checks hold");

    // The exploit: measure eta * lambda with eta = delta / 0.001, divide the
    // answer by eta, and the effective noise is 0.001 — from one
    // measurement, at nominal noise level 0.3. This only "works" because
    // the clamp is explicitly disabled.
    let target = 0.001;
    let estimate = exploit_unbounded_range(&lam, &prob, &f, target, &adv, true)?;
    println!("truth {truth}, nominal noise {delta}");
    println!("unclamped estimate {estimate} (gap {})", (estimate - truth).abs());
    assert!((estimate - truth).abs() <= target + 1e-15);

    // Refusing to opt in keeps the model honest.
    assert!(exploit_unbounded_range(&lam, &prob, &f, target, &adv, false).is_err());
    println!("without the explicit opt-in the exploit refuses to run");
    println!();
    println!(
        "moral: noise that scales with nothing is only meaningful against \
         functionals that map into a fixed interval"
    );
    Ok(())
}
