//! Small numeric helpers shared across modules: the deterministic
//! counter-based generator used wherever "seeded" randomness is promised, and
//! nudged ceilings for count formulas that sit on representability edges.

/// Ceiling with a `1e-12` downward nudge.
///
/// Count formulas of the form `ceil(log(..)/log(..))` are meant to be exact at
/// dyadic parameter choices; the nudge keeps a value that is mathematically an
/// integer from being bumped to the next one by the last bit of a log.
pub(crate) fn ceil_nudged(x: f64) -> f64 {
    (x - 1e-12).ceil()
}

/// SplitMix64: the stable counter-based generator behind every seeded draw.
///
/// All "random" behavior in the library is a pure function of `(seed, counter)`
/// through this mix, so identical configurations reproduce identical runs on
/// any platform.
pub(crate) fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draw number `counter` from the stream identified by `seed`.
pub(crate) fn seeded_draw(seed: u64, counter: u64) -> u64 {
    splitmix64(seed ^ splitmix64(counter.wrapping_add(1)))
}

/// Map a draw to the unit interval [0, 1).
pub(crate) fn unit_from_bits(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform value in [-1, 1] from `(seed, counter)`.
pub(crate) fn symmetric_unit(seed: u64, counter: u64) -> f64 {
    2.0 * unit_from_bits(seeded_draw(seed, counter)) - 1.0
}

/// Step one representable value from `x` toward `target`.
pub(crate) fn next_toward(x: f64, target: f64) -> f64 {
    if x < target {
        x.next_up()
    } else if x > target {
        x.next_down()
    } else {
        x
    }
}

/// 2^(-n/k) with an exact dyadic fast path when k divides n.
pub(crate) fn exp2_neg_ratio(n: u64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if n % k == 0 {
        // 0.5^1075 already underflows to zero; saturating keeps the cast safe.
        0.5f64.powi((n / k).min(2048) as i32)
    } else {
        (-(n as f64) / (k as f64)).exp2()
    }
}
