//! Entropy numbers squeezed from three sides: a constructive cover (upper
//! bound), a constructive packing (lower bound), and the closed-form value
//! with its guaranteed constant band.
//!
//! Run with: cargo run --example entropy_sandwich

use noisylab::entropy::{entropy_profile, formula_identity, grid_cover_linf, sandwich};
use noisylab::spaces::{NormTag, Problem};

fn main() -> noisylab::Result<()> {
    // Sup-norm cube: at n divisible by m the product grid cover is optimal
    // and all three sides agree exactly at 2^(-n/m).
    let prob = Problem::identity(NormTag::INF, NormTag::INF, 2)?;
    println!("identity on the square (sup norm):");
    println!("{:>4} {:>22} {:>22} {:>22}  band", "n", "lower", "upper", "formula");
    for s in entropy_profile(&prob, 6, 7, None)? {
        println!(
            "{:>4} {:>22} {:>22} {:>22}  ({}, {})",
            s.n, s.lower, s.upper, s.formula, s.band.0, s.band.1
        );
        if s.n % 2 == 0 {
            assert_eq!(s.lower, s.formula, "even n: the sandwich closes completely");
            assert_eq!(s.upper, s.formula);
        }
    }
    println!();

    // The optimal cover at n = 4 is the 4x4 grid of cell midpoints.
    let (centers, radius) = grid_cover_linf(2, 4)?;
    println!("n = 4 cover: {} cells, radius {radius}", centers.len());
    println!();

    // Diagonal operator: the formula max_k 2^(-n/k) (sigma_1...sigma_k)^(1/k)
    // is guaranteed inside a (1, 6) band of the truth.
    let prob = Problem::diagonal(vec![1.0, 0.5], 0.0, NormTag::INF)?;
    println!("diagonal (1, 0.5) on the sup norm:");
    for n in 1..=3u64 {
        let s = sandwich(&prob, n, 7, None)?;
        println!(
            "  n = {n}: {} <= e_n <= {}, formula {} in band ({}, {})",
            s.lower, s.upper, s.formula, s.band.0, s.band.1
        );
        assert!(s.band.0 * s.formula <= s.upper + 1e-9);
        assert!(s.lower <= s.band.1 * s.formula + 1e-9);
    }
    println!();

    // Embeddings between different exponents only have an order-of-growth
    // formula, valid in the regime log2(m) <= n <= m; outside it the value
    // is flagged rather than trusted.
    let inside = formula_identity(NormTag::L1, NormTag::INF, 64, 10)?;
    let outside = formula_identity(NormTag::L1, NormTag::INF, 64, 3)?;
    println!("l1 -> sup embedding, m = 64:");
    println!("  n = 10: value {} (in regime: {})", inside.value, inside.in_regime);
    println!("  n = 3:  value {} (in regime: {})", outside.value, outside.in_regime);
    assert!(inside.in_regime && !outside.in_regime);
    Ok(())
}
