//! Bit budgets for noisy reads of quantized values, and the nonadaptive cell
//! encoder built on them.
//!
//! A measurement whose true value is one of `2^k` equispaced levels in
//! `[-1, 1]` survives adversarial noise `delta` exactly when the levels'
//! delta-neighborhoods are disjoint, i.e. `delta < 1 / (2^k - 1)`. The two
//! constants here are the canonical bit counts on either side of that game:
//! [`quantizer_bits`] is the coarsest midpoint grid an adversary can answer
//! from while staying admissible, [`exact_decode_bits`] is the largest level
//! count a policy can push through the channel and still decode exactly.
//! Both are computed with a nudged ceiling and then post-corrected against
//! the defining inequality, so the floating-point results satisfy the exact
//! mathematical property, not an approximation of it.

use std::sync::Arc;

use crate::measurement::{level_value, nearest_center, Descriptor, Functional, FunctionalClass, Policy, Transcript};
use crate::spaces::{NormTag, Point};
use crate::util::ceil_nudged;
use crate::{Error, Result};

fn check_noise_level(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameters(format!(
            "bit budgets are defined for 0 < delta < 1, got {delta}"
        )));
    }
    Ok(())
}

/// Smallest `k` with `2^-k <= delta`: the adversary's grid resolution. A
/// midpoint grid with `2^k` cells over `[-1, 1]` moves any value by at most
/// `2^-k <= delta`, so snapping to it is admissible.
pub fn quantizer_bits(delta: f64) -> Result<u32> {
    check_noise_level(delta)?;
    let mut k = ceil_nudged((1.0 / delta).log2()).max(0.0) as u32;
    // restore the exact inequality and minimality in f64 arithmetic
    while 0.5f64.powi(k as i32) > delta {
        k += 1;
    }
    while k > 0 && 0.5f64.powi(k as i32 - 1) <= delta {
        k -= 1;
    }
    Ok(k)
}

/// Largest `k` with `delta < 1/(2^k - 1)`: how many bits one measurement can
/// carry with exact decoding. `2^k` levels spaced `2/(2^k - 1)` apart keep
/// their delta-neighborhoods disjoint, so the nearest level to any admissible
/// observation is the level that was sent.
pub fn exact_decode_bits(delta: f64) -> Result<u32> {
    check_noise_level(delta)?;
    let spacing_ok = |k: u32| {
        let denom = (k as f64).exp2() - 1.0;
        denom < 1.0 / delta // same as delta < 1/denom, safe at denom = 0
    };
    let mut k = ceil_nudged((1.0 / delta + 1.0).log2() - 1.0).max(0.0) as u32;
    while k > 0 && !spacing_ok(k) {
        k -= 1;
    }
    while spacing_ok(k + 1) {
        k += 1;
    }
    Ok(k)
}

/// The `2^bits` levels `-1 + 2i/(2^bits - 1)`; a single level degenerates
/// to `[0]`.
pub fn quantizer_levels(bits: u32) -> Vec<f64> {
    let count = 1usize << bits;
    (0..count).map(|i| level_value(i, bits)).collect()
}

/// Index of the level nearest to `y` (closed-form rounding, clamped to the
/// valid range). Inverse of [`quantizer_levels`] under noise below the
/// disjointness threshold.
pub fn decode_level(y: f64, bits: u32) -> usize {
    if bits == 0 {
        return 0;
    }
    let count = (1usize << bits) as f64;
    let idx = ((y + 1.0) * (count - 1.0) / 2.0).round();
    (idx.max(0.0) as usize).min(count as usize - 1)
}

/// Nonadaptive policy that transmits the index of the cover cell nearest to
/// `S f`, one base-`2^bits` digit per measurement. With `bits` at most
/// [`exact_decode_bits`] of the channel's noise level, every digit decodes
/// exactly and the output is the true nearest center, so the error is the
/// distance of `S f` to the cover — the cover radius at worst.
pub struct CellEncoder {
    centers: Arc<Vec<Point>>,
    q: NormTag,
    bits: u32,
    n_digits: usize,
    cover_radius: Option<f64>,
}

impl CellEncoder {
    pub fn new(centers: Vec<Point>, q: NormTag, bits: u32, n_digits: usize) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidInput("encoder needs at least one cell".into()));
        }
        let address_bits = bits as usize * n_digits;
        let capacity_ok =
            address_bits >= usize::BITS as usize - 1 || centers.len() <= 1usize << address_bits;
        if !capacity_ok {
            return Err(Error::InvalidParameters(format!(
                "{} cells do not fit in {n_digits} digits of {bits} bits",
                centers.len()
            )));
        }
        Ok(CellEncoder { centers: Arc::new(centers), q, bits, n_digits, cover_radius: None })
    }

    /// Encoder sized for a channel at noise level `delta`: each measurement
    /// carries [`exact_decode_bits`] bits.
    pub fn for_noise(centers: Vec<Point>, q: NormTag, delta: f64, n_digits: usize) -> Result<Self> {
        Self::new(centers, q, exact_decode_bits(delta)?, n_digits)
    }

    /// Record the cover radius so the policy can report its analytic error
    /// guarantee.
    pub fn with_cover_radius(mut self, radius: f64) -> Self {
        self.cover_radius = Some(radius);
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    /// The index the encoder transmits for this image point.
    pub fn cell_of(&self, sf: &Point) -> Result<usize> {
        nearest_center(sf, &self.centers, self.q)
    }

    /// Decode a complete transcript back to a cell index.
    pub fn decode_index(&self, transcript: &Transcript) -> usize {
        let mut idx = 0usize;
        for e in &transcript.entries {
            idx = (idx << self.bits) | decode_level(e.y, self.bits);
        }
        idx.min(self.centers.len() - 1)
    }
}

impl Policy for CellEncoder {
    fn name(&self) -> &str {
        "cell_encoder"
    }

    fn budget(&self) -> usize {
        self.n_digits
    }

    fn is_adaptive(&self) -> bool {
        false
    }

    fn choose_next(&self, transcript: &Transcript) -> Option<Functional> {
        if transcript.len() >= self.n_digits {
            return None;
        }
        Some(Functional {
            descriptor: Descriptor::QuantizedCell {
                centers: Arc::clone(&self.centers),
                q: self.q,
                digit: transcript.len(),
                n_digits: self.n_digits,
                bits: self.bits,
            },
            declared_class: FunctionalClass::Arbitrary,
        })
    }

    fn reconstruct(&self, transcript: &Transcript) -> Result<Point> {
        Ok(self.centers[self.decode_index(transcript)].clone())
    }

    fn analytic_upper(&self, delta: f64) -> Option<f64> {
        // the cover-radius guarantee stands only while decoding is exact
        let disjoint = self.bits == 0 || delta < 1.0 / ((self.bits as f64).exp2() - 1.0);
        match (disjoint, self.cover_radius) {
            (true, Some(r)) => Some(r),
            _ => None,
        }
    }

    fn theory_ref(&self) -> &'static str {
        "cover-radius-exact-decode"
    }
}
