//! Entropy numbers of the model operators: closed-form expressions where the
//! geometry admits them, plus constructive covering (upper) and packing
//! (lower) estimates computed from finite samples of the image ball.
//!
//! The n-th entropy number used throughout is the dyadic one: the smallest
//! radius at which `2^n` target-norm balls cover the image of the domain
//! ball. Constructive routines never report a radius they cannot certify:
//! covers built from a sample are inflated by the sample's fill distance,
//! and packing bounds come from explicitly separated point sets or from
//! volume comparison.

use crate::error::{Error, Result};
use crate::spaces::{
    domain_grid, effective_grid_g, NormTag, Point, Problem, ProblemKind,
};
use crate::util::exp2_neg_ratio;

/// Hard budget on constructive routines: `2^n` centers are materialised, so
/// `n` beyond this is refused rather than silently subsampled.
pub const MAX_CONSTRUCTIVE_N: u64 = 20;

const OVERLAP_TOL: f64 = 1e-9;

/// A value together with a flag saying whether the closed form is being used
/// inside the parameter regime where it is two-sidedly accurate. Outside the
/// regime the number is still returned (it is the natural extension of the
/// expression) but should be read as indicative only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeValue {
    pub value: f64,
    pub in_regime: bool,
}

fn check_sigma(sigma: &[f64], tail: f64) -> Result<()> {
    if sigma.is_empty() {
        return Err(Error::InvalidInput("sigma sequence must be nonempty".into()));
    }
    for w in sigma.windows(2) {
        if !(w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "sigma sequence must be nonincreasing".into(),
            ));
        }
    }
    let last = *sigma.last().unwrap();
    if !(sigma[0].is_finite() && sigma[0] >= 0.0) {
        return Err(Error::InvalidInput("sigma values must be finite and nonnegative".into()));
    }
    if !(0.0..=last).contains(&tail) || !tail.is_finite() {
        return Err(Error::InvalidInput(
            "tail bound must lie in [0, sigma_last]".into(),
        ));
    }
    Ok(())
}

/// Entropy number of a diagonal operator with weights `sigma` (and an
/// optional residual `tail` dominating all unlisted weights), acting between
/// sup-normed sequence balls:
///
/// ```text
/// e_n = max_k 2^(-n/k) * (sigma_1 * ... * sigma_k)^(1/k)
/// ```
///
/// with the maximum extended past the listed weights by the stationary value
/// `tail * exp(C / (m+1))` when the listed part still dominates (`C > 0`).
/// When `tail` is zero the maximum over the listed prefixes is exact up to
/// absolute constants; the all-equal prefix case is evaluated without any
/// rounding so dyadic inputs give dyadic outputs.
pub fn formula_diagonal(sigma: &[f64], tail: f64, n: u64) -> Result<f64> {
    check_sigma(sigma, tail)?;
    let m = sigma.len();
    let mut best = 0.0f64;
    // Running log-sum of weights; refreshed exactly on the all-equal prefix.
    let mut log_sum = 0.0f64;
    let mut all_equal = true;
    for (idx, &s) in sigma.iter().enumerate() {
        if s == 0.0 {
            break;
        }
        let k = (idx + 1) as u64;
        log_sum += s.ln();
        all_equal = all_equal && s == sigma[0];
        let candidate = if all_equal {
            // Geometric mean of k equal values is the value itself; pairing
            // it with the exact dyadic power avoids exp/ln noise entirely.
            sigma[0] * exp2_neg_ratio(n, k)
        } else {
            exp2_neg_ratio(n, k) * (log_sum / k as f64).exp()
        };
        if candidate > best {
            best = candidate;
        }
    }
    if tail > 0.0 {
        // Treat every unlisted weight as equal to `tail`. Appending j copies
        // multiplies the geometric mean by (tail)^{j/(k+j)}; the supremum
        // over j of 2^{-n/(m+j)} * gm is attained either at j = 0 (already
        // covered) or where the log-derivative vanishes. C collects the
        // fixed part of the exponent.
        let c = sigma
            .iter()
            .take_while(|s| **s > 0.0)
            .map(|s| (s / tail).ln())
            .sum::<f64>()
            - n as f64 * std::f64::consts::LN_2;
        let ext = if c > 0.0 {
            tail * (c / (m as f64 + 1.0)).exp()
        } else {
            tail
        };
        if ext > best {
            best = ext;
        }
    }
    Ok(best)
}

/// Closed-form entropy number of the identity between finite-dimensional
/// sequence-space balls. For `p == q` the value `2^(-n/m)` is two-sided for
/// every `n`; for `p < q` the logarithmic expression
/// `(ln(m/n + 1) / n)^(1/p - 1/q)` is two-sided in the window
/// `log2(m) <= n <= m` and returned with `in_regime = false` outside it.
pub fn formula_identity(p: NormTag, q: NormTag, m: usize, n: u64) -> Result<RegimeValue> {
    if m == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if p.value() == q.value() {
        return Ok(RegimeValue { value: exp2_neg_ratio(n, m as u64), in_regime: true });
    }
    if p.value() > q.value() {
        return Err(Error::UnsupportedInstance(
            "identity entropy formula requires p <= q".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidInput(
            "logarithmic identity formula needs n >= 1".into(),
        ));
    }
    let exponent = 1.0 / p.value() - 1.0 / q.value();
    let base = ((m as f64 / n as f64) + 1.0).ln() / n as f64;
    let value = base.powf(exponent);
    let in_regime = (m as f64).log2() <= n as f64 && n <= m as u64;
    Ok(RegimeValue { value, in_regime })
}

/// Product cover of the sup-norm ball `[-1,1]^m` by `2^n` congruent cells:
/// `2^(n/m)` midpoints per axis, radius exactly `2^(-n/m)`. Requires `m | n`
/// so the cell count splits evenly across axes.
pub fn grid_cover_linf(m: usize, n: u64) -> Result<(Vec<Point>, f64)> {
    if m == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if n % m as u64 != 0 {
        return Err(Error::InvalidInput(format!(
            "product cover needs the dimension {m} to divide n={n}"
        )));
    }
    if n > MAX_CONSTRUCTIVE_N {
        return Err(Error::BudgetExceeded(format!(
            "2^{n} cells exceed the constructive budget 2^{MAX_CONSTRUCTIVE_N}"
        )));
    }
    let bits = (n / m as u64) as u32;
    let per_axis = 1usize << bits;
    let radius = 0.5f64.powi(bits as i32);
    let mut centers = Vec::with_capacity(per_axis.pow(m as u32));
    let mut idx = vec![0usize; m];
    loop {
        let coords: Vec<f64> = idx
            .iter()
            .map(|&i| -1.0 + (2 * i + 1) as f64 * radius)
            .collect();
        debug_assert!(coords.iter().all(|c| c.abs() <= 1.0 - radius + 1e-15));
        centers.push(Point::new(coords)?);
        let mut axis = m;
        loop {
            if axis == 0 {
                return Ok((centers, radius));
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < per_axis {
                break;
            }
            idx[axis] = 0;
        }
    }
}

/// A constructive cover of the image ball. `radius` is the certified bound:
/// the radius measured against the finite sample (`sample_radius`) plus the
/// fill distance of that sample in the true image ball (`fill_bound`).
#[derive(Debug, Clone)]
pub struct Cover {
    pub centers: Vec<Point>,
    pub radius: f64,
    pub sample_radius: f64,
    pub fill_bound: f64,
}

fn target_dist(prob: &Problem, a: &Point, b: &Point) -> f64 {
    crate::spaces::distance(a, b, prob.target_tag()).expect("matched dims")
}

/// Sample of the image ball: extreme points plus a dyadic grid of the domain
/// ball pushed through the operator, deduplicated and sorted so downstream
/// greedy passes are order-independent. Returns the samples together with
/// the certified fill bound of the sample inside the image ball.
fn image_sample(prob: &Problem, g: u32, cap: usize) -> Result<(Vec<Point>, f64)> {
    let g_eff = effective_grid_g(prob.dim(), g, cap)?;
    let mut domain = crate::spaces::domain_extreme_points(prob);
    domain.extend(domain_grid(prob, g_eff, cap)?);
    let mut samples: Vec<Point> = domain
        .iter()
        .map(|x| prob.apply(x))
        .collect::<Result<_>>()?;
    samples.sort_by(|a, b| {
        a.entries()
            .iter()
            .zip(b.entries())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    samples.dedup_by(|a, b| a.entries() == b.entries());
    // Rounding each domain coordinate toward zero onto the spacing-2^-g grid
    // stays inside the ball and moves each coordinate by less than 2^-g, so
    // every domain point has a sample within this distance of its image.
    let spacing = 0.5f64.powi(g_eff as i32);
    let coord_factor = match prob.domain_tag() {
        NormTag::Infinity => 1.0,
        p => (prob.dim() as f64).powf(1.0 / p.value()),
    };
    let fill = prob.operator_norm() * spacing * coord_factor;
    Ok((samples, fill))
}

fn default_sample_g(m: usize) -> u32 {
    match m {
        0 | 1 => 9,
        2 => 5,
        3 => 3,
        _ => 2,
    }
}

const SAMPLE_CAP: usize = 6000;

fn max_radius(samples: &[Point], centers: &[Point], prob: &Problem) -> f64 {
    samples
        .iter()
        .map(|s| {
            centers
                .iter()
                .map(|c| target_dist(prob, s, c))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Greedy-plus-refinement cover of the image ball by `2^n` balls in the
/// target norm. Centers are seeded by farthest-point traversal of a finite
/// sample and improved by alternating nearest-center assignment with
/// coordinatewise midpoint recentering; the returned radius is certified for
/// the whole ball, not just the sample, via the sample's fill bound.
pub fn greedy_cover(prob: &Problem, n: u64, seed: u64, sample_g: Option<u32>) -> Result<Cover> {
    if n > MAX_CONSTRUCTIVE_N {
        return Err(Error::BudgetExceeded(format!(
            "2^{n} centers exceed the constructive budget 2^{MAX_CONSTRUCTIVE_N}"
        )));
    }
    let g = sample_g.unwrap_or_else(|| default_sample_g(prob.dim()));
    let (samples, fill_bound) = image_sample(prob, g, SAMPLE_CAP)?;
    let want = 1usize << n;
    if want >= samples.len() {
        let sample_radius = 0.0;
        return Ok(Cover {
            centers: samples,
            radius: sample_radius + fill_bound,
            sample_radius,
            fill_bound,
        });
    }

    // Seed: start nearest the bounding-box midpoint, then farthest-point.
    let dim = samples[0].dim();
    let mut mid = vec![0.0f64; dim];
    for d in 0..dim {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &samples {
            lo = lo.min(s[d]);
            hi = hi.max(s[d]);
        }
        mid[d] = (lo + hi) / 2.0;
    }
    let mid = Point::new(mid)?;
    let first = samples
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            target_dist(prob, a, &mid).total_cmp(&target_dist(prob, b, &mid))
        })
        .map(|(i, _)| i)
        .unwrap();
    let mut chosen = vec![first];
    let mut nearest: Vec<f64> = samples
        .iter()
        .map(|s| target_dist(prob, s, &samples[first]))
        .collect();
    while chosen.len() < want {
        let (next, _) = nearest
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.total_cmp(b))
            .unwrap();
        chosen.push(next);
        for (i, s) in samples.iter().enumerate() {
            let d = target_dist(prob, s, &samples[next]);
            if d < nearest[i] {
                nearest[i] = d;
            }
        }
    }
    let mut centers: Vec<Point> = chosen.iter().map(|&i| samples[i].clone()).collect();
    let mut best_centers = centers.clone();
    let mut best_radius = max_radius(&samples, &centers, prob);

    let mut reseed_counter = 0u64;
    for _round in 0..8 {
        // Assign each sample to its nearest center (lowest index on ties).
        let mut assignment = vec![0usize; samples.len()];
        for (i, s) in samples.iter().enumerate() {
            let mut best = (f64::INFINITY, 0usize);
            for (j, c) in centers.iter().enumerate() {
                let d = target_dist(prob, s, c);
                if d < best.0 {
                    best = (d, j);
                }
            }
            assignment[i] = best.1;
        }
        // Recenter each cluster at the coordinatewise midpoint of its span;
        // remember which clusters went empty.
        let mut empty = Vec::new();
        for j in 0..centers.len() {
            let mut lo = vec![f64::INFINITY; dim];
            let mut hi = vec![f64::NEG_INFINITY; dim];
            let mut size = 0usize;
            for (i, s) in samples.iter().enumerate() {
                if assignment[i] == j {
                    size += 1;
                    for d in 0..dim {
                        lo[d] = lo[d].min(s[d]);
                        hi[d] = hi[d].max(s[d]);
                    }
                }
            }
            if size == 0 {
                empty.push(j);
                continue;
            }
            let coords: Vec<f64> = (0..dim).map(|d| (lo[d] + hi[d]) / 2.0).collect();
            centers[j] = Point::new(coords)?;
        }
        // Dead clusters restart at the sample currently worst served,
        // falling back to a seeded pick if that sample is already a center.
        for j in empty {
            let worst = samples
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| {
                    let da = centers
                        .iter()
                        .map(|c| target_dist(prob, a, c))
                        .fold(f64::INFINITY, f64::min);
                    let db = centers
                        .iter()
                        .map(|c| target_dist(prob, b, c))
                        .fold(f64::INFINITY, f64::min);
                    da.total_cmp(&db)
                })
                .map(|(i, _)| i)
                .unwrap();
            let pick = if centers.iter().any(|c| c.entries() == samples[worst].entries()) {
                reseed_counter += 1;
                (crate::util::seeded_draw(seed, reseed_counter) % samples.len() as u64) as usize
            } else {
                worst
            };
            centers[j] = samples[pick].clone();
        }
        let radius = max_radius(&samples, &centers, prob);
        if radius < best_radius {
            best_radius = radius;
            best_centers = centers.clone();
        }
    }

    Ok(Cover {
        centers: best_centers,
        radius: best_radius + fill_bound,
        sample_radius: best_radius,
        fill_bound,
    })
}

/// Lower bound on the n-th entropy number: the better of a farthest-point
/// packing certificate (2^n + 1 sample points pairwise separated by `2r`
/// force radius `r` on any 2^n-ball cover) and a volume-comparison bound
/// where the geometry supports one (sup-norm cubes and boxes).
pub fn packing_lower(prob: &Problem, n: u64, sample_g: Option<u32>) -> Result<f64> {
    if n > MAX_CONSTRUCTIVE_N {
        return Err(Error::BudgetExceeded(format!(
            "packing at 2^{n} exceeds the constructive budget 2^{MAX_CONSTRUCTIVE_N}"
        )));
    }
    let g = sample_g.unwrap_or_else(|| default_sample_g(prob.dim()));
    let (samples, _) = image_sample(prob, g, SAMPLE_CAP)?;
    let want = (1usize << n) + 1;

    let mut packing = 0.0f64;
    if samples.len() >= want {
        // Farthest-point traversal starting from a max-norm sample; the
        // insertion distance of the last point separates all chosen pairs.
        let start = samples
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| {
                let na = crate::spaces::norm(a, prob.target_tag()).unwrap_or(0.0);
                let nb = crate::spaces::norm(b, prob.target_tag()).unwrap_or(0.0);
                na.total_cmp(&nb)
            })
            .map(|(i, _)| i)
            .unwrap();
        let mut nearest: Vec<f64> = samples
            .iter()
            .map(|s| target_dist(prob, s, &samples[start]))
            .collect();
        let mut last_insert = f64::INFINITY;
        let mut count = 1usize;
        while count < want {
            let (next, d) = nearest
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| a.total_cmp(b))
                .map(|(i, d)| (i, *d))
                .unwrap();
            if d <= 0.0 {
                last_insert = 0.0;
                break;
            }
            last_insert = d;
            count += 1;
            for (i, s) in samples.iter().enumerate() {
                let nd = target_dist(prob, s, &samples[next]);
                if nd < nearest[i] {
                    nearest[i] = nd;
                }
            }
        }
        if count == want {
            packing = last_insert / 2.0;
        }
    }

    let volume = match &prob.kind {
        ProblemKind::Identity { p, q, m } if p.value() == q.value() && *q == NormTag::Infinity => {
            exp2_neg_ratio(n, *m as u64)
        }
        ProblemKind::Diagonal { sigma, p, .. } if *p == NormTag::Infinity => {
            let positive: Vec<f64> = sigma.iter().copied().filter(|s| *s > 0.0).collect();
            if positive.is_empty() {
                0.0
            } else if positive.iter().all(|s| *s == positive[0]) {
                positive[0] * exp2_neg_ratio(n, positive.len() as u64)
            } else {
                let m_eff = positive.len() as f64;
                let log_vol: f64 = positive.iter().map(|s| (2.0 * s).ln()).sum();
                ((log_vol - n as f64 * std::f64::consts::LN_2) / m_eff).exp() / 2.0
            }
        }
        _ => 0.0,
    };

    Ok(packing.max(volume))
}

/// Two-sided certificate for one entropy number: a constructive lower bound,
/// a constructive upper bound, the closed-form value, and the band of
/// absolute constants within which the closed form is guaranteed to sit.
/// Construction fails with [`Error::Inconsistency`] if the three ever
/// disagree beyond tolerance.
#[derive(Debug, Clone)]
pub struct EntropySandwich {
    pub n: u64,
    pub lower: f64,
    pub upper: f64,
    pub formula: f64,
    /// `(lo, hi)`: the true entropy number is guaranteed inside
    /// `[formula / ?, ...]` — concretely `lo * formula <= e_n <= hi * formula`
    /// whenever `hi` is finite; `(0, inf)` means order-of-growth only.
    pub band: (f64, f64),
}

fn check_sandwich(s: &EntropySandwich) -> Result<()> {
    if s.lower > s.upper + OVERLAP_TOL {
        return Err(Error::Inconsistency(format!(
            "entropy bounds crossed at n={}: lower {} > upper {}",
            s.n, s.lower, s.upper
        )));
    }
    if s.band.1.is_finite() {
        if s.lower > s.band.1 * s.formula + OVERLAP_TOL {
            return Err(Error::Inconsistency(format!(
                "constructive lower bound {} exceeds formula band {} * {} at n={}",
                s.lower, s.band.1, s.formula, s.n
            )));
        }
        if s.band.0 * s.formula > s.upper + OVERLAP_TOL {
            return Err(Error::Inconsistency(format!(
                "formula band floor {} * {} exceeds constructive upper bound {} at n={}",
                s.band.0, s.formula, s.upper, s.n
            )));
        }
    }
    Ok(())
}

/// Compute the entropy sandwich at a single `n`. The constructive pair comes
/// from [`greedy_cover`] / [`packing_lower`] (or the exact product cover for
/// sup-norm identities when the dimension divides `n`); the closed form and
/// its constant band depend on the operator:
///
/// * diagonal operators: the prefix-maximum formula with band `(1, 6)`;
/// * identity on a common `p`: `2^(-n/m)` with band `(1, 3)` (exact `(1,1)`
///   in the sup-norm divisible case);
/// * identity with `p < q`: the logarithmic form, order-of-growth only.
pub fn sandwich(prob: &Problem, n: u64, seed: u64, sample_g: Option<u32>) -> Result<EntropySandwich> {
    let (formula, band) = match &prob.kind {
        ProblemKind::Diagonal { sigma, .. } => {
            // The constructive side covers the finitely listed coordinates,
            // i.e. the truncated operator, so the formula is evaluated with
            // no tail term regardless of the declared residual.
            (formula_diagonal(sigma, 0.0, n)?, (1.0, 6.0))
        }
        ProblemKind::Identity { p, q, m } => {
            if p.value() == q.value() {
                let exact = *q == NormTag::Infinity && n % *m as u64 == 0;
                let band = if exact { (1.0, 1.0) } else { (1.0, 3.0) };
                (exp2_neg_ratio(n, *m as u64), band)
            } else {
                (formula_identity(*p, *q, *m, n)?.value, (0.0, f64::INFINITY))
            }
        }
    };

    let upper = match &prob.kind {
        ProblemKind::Identity { p, q, m }
            if *p == NormTag::Infinity && *q == NormTag::Infinity && n % *m as u64 == 0 =>
        {
            grid_cover_linf(*m, n)?.1
        }
        _ => greedy_cover(prob, n, seed, sample_g)?.radius,
    };
    let lower = packing_lower(prob, n, sample_g)?;

    let s = EntropySandwich { n, lower, upper, formula, band };
    check_sandwich(&s)?;
    Ok(s)
}

/// Sandwiches for `n = 1..=n_max`, tightened by monotonicity: entropy
/// numbers are nonincreasing in `n`, so each upper bound also bounds all
/// later `n` and each lower bound bounds all earlier ones. The returned rows
/// carry the tightened values and are re-validated.
pub fn entropy_profile(
    prob: &Problem,
    n_max: u64,
    seed: u64,
    sample_g: Option<u32>,
) -> Result<Vec<EntropySandwich>> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        rows.push(sandwich(prob, n, seed, sample_g)?);
    }
    for i in 1..rows.len() {
        rows[i].upper = rows[i].upper.min(rows[i - 1].upper);
    }
    for i in (0..rows.len() - 1).rev() {
        rows[i].lower = rows[i].lower.max(rows[i + 1].lower);
    }
    for row in &rows {
        if row.lower > row.upper + OVERLAP_TOL {
            return Err(Error::Inconsistency(format!(
                "monotonized entropy bounds crossed at n={}",
                row.n
            )));
        }
    }
    Ok(rows)
}
