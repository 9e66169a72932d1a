//! What each measurement class can certify on one problem at one noise
//! level — and which claims are only citations.
//!
//! Linear information hits a hard floor at delta * |S|. Continuous
//! functionals escape it via refinement at a constant-factor cost in
//! measurements. Arbitrary (discontinuous) functionals turn each
//! measurement into bits and ride the entropy numbers. Asymptotic rates
//! carry no number in this table: their value cell is empty and the
//! theory_ref starts with "cited:", so a finite-n reader can never mistake
//! a rate for a guarantee.
//!
//! Run with: cargo run --example compare_classes

use noisylab::harness::{compare_settings, write_compare_csv};
use noisylab::spaces::{power_sigma, NormTag, Problem};

fn main() -> noisylab::Result<()> {
    let prob = Problem::identity(NormTag::INF, NormTag::INF, 2)?;
    let rows = compare_settings(&prob, 0.25, 0.0625)?;
    println!("identity on the square, delta 0.25, target 0.0625:");
    let mut csv = Vec::new();
    write_compare_csv(&mut csv, &rows)?;
    print!("{}", String::from_utf8(csv).expect("csv is utf-8"));
    println!();

    for row in &rows {
        if row.theory_ref.starts_with("cited:") {
            assert!(row.value.is_none(), "citation rows must never carry numbers");
        }
    }
    println!("(every rate_in_n row is citation-only, as required)");
    println!();

    let (sigma, tail) = power_sigma(1.0, 8)?;
    let prob = Problem::diagonal(sigma, tail, NormTag::INF)?;
    let rows = compare_settings(&prob, 0.25, 0.25)?;
    println!("diagonal sigma_j = 1/j (8 terms), delta 0.25, target 0.25:");
    let mut csv = Vec::new();
    write_compare_csv(&mut csv, &rows)?;
    print!("{}", String::from_utf8(csv).expect("csv is utf-8"));
    Ok(())
}
