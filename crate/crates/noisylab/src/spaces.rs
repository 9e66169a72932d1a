//! Normed-space primitives: lp norms on finite-dimensional points, the two
//! supported problem families (identity embeddings between lp balls and
//! diagonal operators), distances to ball unions, and moduli of continuity.
//!
//! A problem's domain is always the unit ball of its domain norm; membership
//! checks accept a relative slack of [`DOMAIN_TOLERANCE`] so that points
//! produced by arithmetic on boundary points still count as inside.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::{Error, Result};

/// Relative tolerance for domain membership: `norm(x) <= r * (1 + tol)`.
pub const DOMAIN_TOLERANCE: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Norm tags
// ---------------------------------------------------------------------------

/// Which lp norm a quantity is measured in. `p = infinity` is its own variant
/// rather than a sentinel float so that matches stay explicit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormTag {
    Finite(f64),
    Infinity,
}

impl NormTag {
    pub const L1: NormTag = NormTag::Finite(1.0);
    pub const L2: NormTag = NormTag::Finite(2.0);
    pub const INF: NormTag = NormTag::Infinity;

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidInput(format!("norm index must be >= 1, got {p}")));
        }
        if p.is_infinite() {
            Ok(NormTag::Infinity)
        } else {
            Ok(NormTag::Finite(p))
        }
    }

    /// The exponent as a float; infinity for the sup norm.
    pub fn value(self) -> f64 {
        match self {
            NormTag::Finite(p) => p,
            NormTag::Infinity => f64::INFINITY,
        }
    }

    /// Hoelder conjugate: 1/p + 1/p' = 1.
    pub fn dual(self) -> NormTag {
        match self {
            NormTag::Infinity => NormTag::Finite(1.0),
            NormTag::Finite(p) if p == 1.0 => NormTag::Infinity,
            NormTag::Finite(p) => NormTag::Finite(p / (p - 1.0)),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(NormTag::Infinity);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::InvalidInput(format!("cannot parse norm index {s:?}")))?;
        NormTag::new(p)
    }
}

impl fmt::Display for NormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormTag::Finite(p) => write!(f, "{p}"),
            NormTag::Infinity => write!(f, "inf"),
        }
    }
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// A point of R^m with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    entries: Vec<f64>,
}

impl Point {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("point entries must be finite".into()));
        }
        Ok(Point { entries })
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        Point { entries: vec![0.0; dim] }
    }

    /// `scale * e_i` (0-based coordinate index).
    pub fn unit(dim: usize, i: usize, scale: f64) -> Self {
        let mut entries = vec![0.0; dim];
        entries[i] = scale;
        Point { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn sub(&self, other: &Point) -> Point {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Point {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Point {
        Point { entries: self.entries.iter().map(|a| a * c).collect() }
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

// ---------------------------------------------------------------------------
// Norms and distances
// ---------------------------------------------------------------------------

/// lp norm of a point. Dimension 0 is rejected so that "the norm of nothing"
/// never silently reads as 0.
pub fn norm(x: &Point, tag: NormTag) -> Result<f64> {
    if x.dim() == 0 {
        return Err(Error::InvalidInput("norm of a 0-dimensional point".into()));
    }
    Ok(norm_slice(x.entries(), tag))
}

pub(crate) fn norm_slice(xs: &[f64], tag: NormTag) -> f64 {
    match tag {
        NormTag::Infinity => xs.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        NormTag::Finite(p) if p == 1.0 => xs.iter().map(|v| v.abs()).sum(),
        NormTag::Finite(p) if p == 2.0 => xs.iter().map(|v| v * v).sum::<f64>().sqrt(),
        NormTag::Finite(p) => xs.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

pub fn distance(a: &Point, b: &Point, tag: NormTag) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidInput(format!(
            "distance between dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    norm(&a.sub(b), tag)
}

/// Operator norm of the identity embedding `lp^m -> lq^m`:
/// 1 when p <= q, and `m^(1/q - 1/p)` when p > q.
pub fn embedding_norm(p: NormTag, q: NormTag, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidInput("embedding norm needs m >= 1".into()));
    }
    if p.value() <= q.value() {
        Ok(1.0)
    } else {
        // 1/inf contributes 0 automatically.
        Ok((m as f64).powf(1.0 / q.value() - 1.0 / p.value()))
    }
}

/// Distance from `y` to a union of closed balls with common radius, in the
/// norm `q`: `min_i max(|y - c_i|_q - radius, 0)`.
pub fn dist_to_union(y: &Point, centers: &[Point], radius: f64, q: NormTag) -> Result<f64> {
    if centers.is_empty() {
        return Err(Error::InvalidInput("dist_to_union with no centers".into()));
    }
    if !(radius >= 0.0) {
        return Err(Error::InvalidInput(format!("negative radius {radius}")));
    }
    let mut best = f64::INFINITY;
    for c in centers {
        let d = (distance(y, c, q)? - radius).max(0.0);
        if d < best {
            best = d;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Problems
// ---------------------------------------------------------------------------

/// The two operator families the laboratory works with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProblemKind {
    /// Identity embedding of the unit ball of `lp^m` into `lq^m`.
    Identity { p: NormTag, q: NormTag, m: usize },
    /// Diagonal operator `x -> (sigma_1 x_1, sigma_2 x_2, ...)` on the unit
    /// ball of `lp`, stored as a finite truncation plus an explicit bound on
    /// every later entry.
    Diagonal { sigma: Arc<Vec<f64>>, tail_bound: f64, p: NormTag },
}

/// A solution operator together with its domain ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub kind: ProblemKind,
    /// Radius of the domain ball; 1 for every instance built here.
    pub domain_radius: f64,
}

impl Problem {
    pub fn identity(p: NormTag, q: NormTag, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("identity problem needs m >= 1".into()));
        }
        Ok(Problem { kind: ProblemKind::Identity { p, q, m }, domain_radius: 1.0 })
    }

    pub fn diagonal(sigma: Vec<f64>, tail_bound: f64, p: NormTag) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::InvalidInput("diagonal problem needs at least one entry".into()));
        }
        if sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidInput("sigma entries must be finite and nonnegative".into()));
        }
        if sigma.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("sigma must be nonincreasing".into()));
        }
        if !(tail_bound >= 0.0) || tail_bound > *sigma.last().unwrap() {
            return Err(Error::InvalidInput(format!(
                "tail bound {tail_bound} must satisfy 0 <= tail <= last sigma"
            )));
        }
        Ok(Problem {
            kind: ProblemKind::Diagonal { sigma: Arc::new(sigma), tail_bound, p },
            domain_radius: 1.0,
        })
    }

    /// Dimension of the (truncated) domain and target space.
    pub fn dim(&self) -> usize {
        match &self.kind {
            ProblemKind::Identity { m, .. } => *m,
            ProblemKind::Diagonal { sigma, .. } => sigma.len(),
        }
    }

    pub fn domain_tag(&self) -> NormTag {
        match &self.kind {
            ProblemKind::Identity { p, .. } => *p,
            ProblemKind::Diagonal { p, .. } => *p,
        }
    }

    pub fn target_tag(&self) -> NormTag {
        match &self.kind {
            ProblemKind::Identity { q, .. } => *q,
            ProblemKind::Diagonal { p, .. } => *p,
        }
    }

    /// `sigma_i` with 1-based index; the declared tail bound past the
    /// truncation. Identity instances read as sigma = (1, ..., 1, 0, ...).
    pub fn sigma_at(&self, i: usize) -> f64 {
        assert!(i >= 1, "sigma index is 1-based");
        match &self.kind {
            ProblemKind::Identity { m, .. } => {
                if i <= *m {
                    1.0
                } else {
                    0.0
                }
            }
            ProblemKind::Diagonal { sigma, tail_bound, .. } => {
                if i <= sigma.len() {
                    sigma[i - 1]
                } else {
                    *tail_bound
                }
            }
        }
    }

    pub fn tail_bound(&self) -> f64 {
        match &self.kind {
            ProblemKind::Identity { .. } => 0.0,
            ProblemKind::Diagonal { tail_bound, .. } => *tail_bound,
        }
    }

    /// Operator norm of S on the domain ball, which for both families is also
    /// the Lipschitz constant of S between the two norms.
    pub fn operator_norm(&self) -> f64 {
        match &self.kind {
            ProblemKind::Identity { p, q, m } => embedding_norm(*p, *q, *m).expect("m >= 1"),
            ProblemKind::Diagonal { sigma, .. } => sigma[0],
        }
    }

    /// Error of the best measurement-free policy (output 0): the radius of
    /// the image of the domain ball.
    pub fn initial_error(&self) -> f64 {
        self.operator_norm() * self.domain_radius
    }

    pub fn contains(&self, x: &Point) -> bool {
        x.dim() == self.dim()
            && norm_slice(x.entries(), self.domain_tag())
                <= self.domain_radius * (1.0 + DOMAIN_TOLERANCE)
    }

    /// Apply the operator; the input must lie in the (tolerance-widened)
    /// domain ball.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "operator on dimension {}, point has {}",
                self.dim(),
                x.dim()
            )));
        }
        if !self.contains(x) {
            return Err(Error::DomainViolation(format!(
                "|x|_p = {} exceeds domain radius {}",
                norm_slice(x.entries(), self.domain_tag()),
                self.domain_radius
            )));
        }
        self.map_point(x)
    }

    /// Apply the operator to any point of the right dimension, without the
    /// domain-ball check. Reconstructions assembled coordinatewise may sit
    /// slightly outside the ball and still need their image.
    pub fn map_point(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "operator on dimension {}, point has {}",
                self.dim(),
                x.dim()
            )));
        }
        match &self.kind {
            ProblemKind::Identity { .. } => Ok(x.clone()),
            ProblemKind::Diagonal { sigma, .. } => Point::new(
                x.entries().iter().zip(sigma.iter()).map(|(v, s)| v * s).collect(),
            ),
        }
    }

    /// Distance in the target norm.
    pub fn image_distance(&self, a: &Point, b: &Point) -> Result<f64> {
        distance(a, b, self.target_tag())
    }
}

// ---------------------------------------------------------------------------
// Moduli of continuity
// ---------------------------------------------------------------------------

/// Modulus of continuity `w(gamma) = sup { |S f - S g|_G : |f - g|_F <= gamma }`
/// over the domain ball, in closed form for the supported instances:
/// `min(gamma, 2r)` for identity embeddings with p = q, and
/// `sigma_1 * min(gamma, 2r)` for diagonal operators (the supremum puts the
/// whole difference on the first coordinate).
pub fn modulus(prob: &Problem, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidInput(format!("modulus needs gamma >= 0, got {gamma}")));
    }
    let diam = 2.0 * prob.domain_radius;
    match &prob.kind {
        ProblemKind::Identity { p, q, .. } if p == q => Ok(gamma.min(diam)),
        ProblemKind::Diagonal { sigma, .. } => Ok(sigma[0] * gamma.min(diam)),
        ProblemKind::Identity { p, q, .. } => Err(Error::UnsupportedInstance(format!(
            "no closed-form modulus for identity p={p}, q={q}; use modulus_sampled"
        ))),
    }
}

/// Single-scale modified modulus `w~(gamma) = gamma * sup { ratio of image to
/// domain distance over pairs at most gamma apart }`; for the supported
/// instances the ratio supremum is the operator norm, so `w~ = gamma * |S|`.
/// Always `modulus <= modified_modulus`.
pub fn modified_modulus(prob: &Problem, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidInput(format!("modulus needs gamma >= 0, got {gamma}")));
    }
    match &prob.kind {
        ProblemKind::Identity { p, q, .. } if p == q => Ok(gamma),
        ProblemKind::Diagonal { sigma, .. } => Ok(gamma * sigma[0]),
        ProblemKind::Identity { p, q, .. } => Err(Error::UnsupportedInstance(format!(
            "no closed-form modified modulus for identity p={p}, q={q}"
        ))),
    }
}

/// Brute-force estimate of the modulus by maximizing over sampled pairs.
/// Works for any instance (this is the only route for identity embeddings
/// with p != q) but is an estimate from below; it is also used in tests as an
/// independent check of the closed forms.
pub fn modulus_sampled(prob: &Problem, gamma: f64, grid_g: u32) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidInput(format!("modulus needs gamma >= 0, got {gamma}")));
    }
    let pts = domain_grid(prob, grid_g, 4000)?;
    let dom = prob.domain_tag();
    let mut best = 0.0_f64;
    for (i, a) in pts.iter().enumerate() {
        let sa = prob.apply(a)?;
        for b in pts.iter().skip(i + 1) {
            if distance(a, b, dom)? <= gamma * (1.0 + 1e-12) {
                let sb = prob.apply(b)?;
                best = best.max(prob.image_distance(&sa, &sb)?);
            }
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Deterministic domain samples
// ---------------------------------------------------------------------------

/// Extreme candidates of the domain ball: signed corners for the sup-norm
/// ball (capped at 2^12 corners), signed coordinate vectors always, and the
/// normalized all-ones diagonal. Deterministic order.
pub fn domain_extreme_points(prob: &Problem) -> Vec<Point> {
    let m = prob.dim();
    let mut out = Vec::new();
    out.push(Point::zeros(m));
    for i in 0..m {
        out.push(Point::unit(m, i, 1.0));
        out.push(Point::unit(m, i, -1.0));
    }
    let diag_scale = match prob.domain_tag() {
        NormTag::Infinity => 1.0,
        NormTag::Finite(p) => (m as f64).powf(-1.0 / p),
    };
    out.push(Point::new(vec![diag_scale; m]).unwrap());
    out.push(Point::new(vec![-diag_scale; m]).unwrap());
    if prob.domain_tag() == NormTag::Infinity && m <= 12 {
        for mask in 0..(1usize << m) {
            let entries: Vec<f64> =
                (0..m).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
            out.push(Point::new(entries).unwrap());
        }
    }
    out
}

/// The spacing exponent [`domain_grid`] will actually use: the requested `g`
/// reduced until the full grid fits under `cap`. Exposed so that callers can
/// turn a sample into a certified bound (the fill distance of the grid in the
/// ball is below its spacing `2^-g` per axis).
pub fn effective_grid_g(m: usize, g: u32, cap: usize) -> Result<u32> {
    if cap == 0 {
        return Err(Error::InvalidInput("domain grid cap must be positive".into()));
    }
    // A spacing below 2^-40 already exceeds any realistic cap; clamping keeps
    // the shift below the width of u128.
    let mut g = g.min(40);
    loop {
        let per_axis = (1u128 << (g + 1)) + 1;
        let total = per_axis.checked_pow(m as u32);
        match total {
            Some(t) if t <= cap as u128 => return Ok(g),
            _ if g == 0 => {
                return Err(Error::BudgetExceeded(format!(
                    "domain grid in dimension {m} exceeds cap {cap} even at g=0"
                )))
            }
            _ => g -= 1,
        }
    }
}

/// Dyadic grid over the domain ball with per-axis spacing `2^-g`, filtered to
/// the ball. If the full grid would exceed `cap` points, `g` is reduced until
/// it fits (so high dimensions fall back to coarse +-1/0 style grids).
pub fn domain_grid(prob: &Problem, g: u32, cap: usize) -> Result<Vec<Point>> {
    let m = prob.dim();
    let g = effective_grid_g(m, g, cap)?;
    let per_axis = (1usize << (g + 1)) + 1;
    let step = 0.5f64.powi(g as i32);
    let dom = prob.domain_tag();
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        let entries: Vec<f64> = idx.iter().map(|&i| -1.0 + i as f64 * step).collect();
        if norm_slice(&entries, dom) <= prob.domain_radius * (1.0 + DOMAIN_TOLERANCE) {
            out.push(Point::new(entries).unwrap());
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == m {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Sigma sequences
// ---------------------------------------------------------------------------

/// Power-law sequence `sigma_j = j^-s` of length `m`, with the natural tail
/// bound `(m+1)^-s`.
pub fn power_sigma(s: f64, m: usize) -> Result<(Vec<f64>, f64)> {
    if !(s >= 0.0) || m == 0 {
        return Err(Error::InvalidInput(format!("power sigma needs s >= 0 and m >= 1, got s={s}, m={m}")));
    }
    let sigma = (1..=m).map(|j| (j as f64).powf(-s)).collect();
    Ok((sigma, ((m + 1) as f64).powf(-s)))
}

/// Read a sigma file: one nonnegative decimal per line, nonincreasing; blank
/// lines and `#` comments are skipped. The file is taken as the complete
/// truncation, so the tail bound is 0.
pub fn load_sigma_file(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut sigma = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| {
            Error::InvalidInput(format!("{}:{}: not a decimal: {t:?}", path.display(), lineno + 1))
        })?;
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidInput(format!(
                "{}:{}: sigma entries must be finite and nonnegative",
                path.display(),
                lineno + 1
            )));
        }
        sigma.push(v);
    }
    if sigma.is_empty() {
        return Err(Error::InvalidInput(format!("{}: empty sigma file", path.display())));
    }
    if sigma.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput(format!("{}: sigma must be nonincreasing", path.display())));
    }
    Ok(sigma)
}

/// Resolve a `--sigma` argument: either `power:s` (needs the length `m`)
/// or a path to a sigma file. Returns the truncation and its tail bound.
pub fn parse_sigma_spec(spec: &str, m: usize) -> Result<(Vec<f64>, f64)> {
    if let Some(s) = spec.strip_prefix("power:") {
        let s: f64 = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad power exponent in {spec:?}")))?;
        power_sigma(s, m)
    } else {
        let sigma = load_sigma_file(Path::new(spec))?;
        Ok((sigma, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute-force oracle: maximize |x|_q over a sampled sphere of lp^m.
    /// Independent of the closed form in embedding_norm.
    fn embedding_norm_oracle(p: NormTag, q: NormTag, m: usize) -> f64 {
        let prob = Problem::identity(p, q, m).unwrap();
        let mut best = 0.0_f64;
        for x in domain_grid(&prob, 3, 200_000).unwrap() {
            let n = norm_slice(x.entries(), p);
            if n > 0.0 {
                // project to the sphere so the supremum is attained
                let y = x.scale(1.0 / n);
                best = best.max(norm_slice(y.entries(), q));
            }
        }
        best
    }

    #[test]
    fn norms_match_hand_values() {
        let x = Point::new(vec![3.0, -4.0]).unwrap();
        assert_eq!(norm(&x, NormTag::L2).unwrap(), 5.0);
        assert_eq!(norm(&x, NormTag::L1).unwrap(), 7.0);
        assert_eq!(norm(&x, NormTag::INF).unwrap(), 4.0);
        let p3 = norm(&x, NormTag::Finite(3.0)).unwrap();
        assert!((p3 - (27.0f64 + 64.0).powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_dimension_is_rejected() {
        let x = Point::new(vec![]).unwrap();
        assert!(matches!(norm(&x, NormTag::L2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        assert!(Point::new(vec![f64::NAN]).is_err());
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn embedding_norm_closed_form_matches_oracle() {
        // frozen oracle values: sup-norm corners of B_inf^4 have |x|_1 = 4;
        // the l2 sphere point (1/3,...)*3 in dimension 9 has |x|_1 = 3.
        assert_eq!(embedding_norm(NormTag::INF, NormTag::L1, 4).unwrap(), 4.0);
        assert!((embedding_norm(NormTag::L2, NormTag::L1, 9).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(embedding_norm(NormTag::L2, NormTag::INF, 7).unwrap(), 1.0);
        assert_eq!(embedding_norm(NormTag::L1, NormTag::L1, 5).unwrap(), 1.0);

        for (p, q, m) in [
            (NormTag::INF, NormTag::L1, 2),
            (NormTag::INF, NormTag::L2, 3),
            (NormTag::L2, NormTag::L1, 2),
            (NormTag::L1, NormTag::L2, 2),
            (NormTag::L2, NormTag::INF, 3),
        ] {
            let oracle = embedding_norm_oracle(p, q, m);
            let formula = embedding_norm(p, q, m).unwrap();
            assert!(
                oracle <= formula * (1.0 + 1e-9) && formula - oracle < 0.2,
                "p={p} q={q} m={m}: oracle {oracle}, formula {formula}"
            );
        }
    }

    #[test]
    fn dist_to_union_hand_case() {
        // point (2,2), balls of radius 1 at the origin and at (2,0), sup norm:
        // distances 2-1 and 2-1, so 1.
        let y = Point::new(vec![2.0, 2.0]).unwrap();
        let centers = vec![Point::zeros(2), Point::new(vec![2.0, 0.0]).unwrap()];
        assert_eq!(dist_to_union(&y, &centers, 1.0, NormTag::INF).unwrap(), 1.0);
        // inside a ball: 0
        let inside = Point::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(dist_to_union(&inside, &centers, 1.0, NormTag::INF).unwrap(), 0.0);
        assert!(dist_to_union(&y, &[], 1.0, NormTag::INF).is_err());
    }

    #[test]
    fn diagonal_validation() {
        assert!(Problem::diagonal(vec![1.0, 0.5], 0.1, NormTag::INF).is_ok());
        // increasing
        assert!(Problem::diagonal(vec![0.5, 1.0], 0.0, NormTag::INF).is_err());
        // tail above last entry
        assert!(Problem::diagonal(vec![1.0, 0.5], 0.6, NormTag::INF).is_err());
        // negative entry
        assert!(Problem::diagonal(vec![1.0, -0.5], 0.0, NormTag::INF).is_err());
        assert!(Problem::diagonal(vec![], 0.0, NormTag::INF).is_err());
    }

    #[test]
    fn apply_checks_domain_and_scales() {
        let prob = Problem::diagonal(vec![1.0, 0.5, 0.25], 0.0, NormTag::INF).unwrap();
        let x = Point::new(vec![1.0, -1.0, 1.0]).unwrap();
        let y = prob.apply(&x).unwrap();
        assert_eq!(y.entries(), &[1.0, -0.5, 0.25]);
        let outside = Point::new(vec![1.5, 0.0, 0.0]).unwrap();
        assert!(matches!(prob.apply(&outside), Err(Error::DomainViolation(_))));
        // boundary with tolerance slack passes
        let boundary = Point::new(vec![1.0 + 1e-10, 0.0, 0.0]).unwrap();
        assert!(prob.apply(&boundary).is_ok());
    }

    #[test]
    fn sigma_at_reads_tail_bound() {
        let prob = Problem::diagonal(vec![1.0, 0.5], 0.125, NormTag::INF).unwrap();
        assert_eq!(prob.sigma_at(1), 1.0);
        assert_eq!(prob.sigma_at(2), 0.5);
        assert_eq!(prob.sigma_at(3), 0.125);
        assert_eq!(prob.sigma_at(9), 0.125);
        let id = Problem::identity(NormTag::INF, NormTag::INF, 2).unwrap();
        assert_eq!(id.sigma_at(2), 1.0);
        assert_eq!(id.sigma_at(3), 0.0);
    }

    #[test]
    fn modulus_closed_forms_match_brute_force() {
        // frozen: brute-force sup over pairs in B_inf^2 at |f-g| <= 0.5 is 0.5
        let id = Problem::identity(NormTag::INF, NormTag::INF, 2).unwrap();
        assert_eq!(modulus(&id, 0.5).unwrap(), 0.5);
        let sampled = modulus_sampled(&id, 0.5, 2).unwrap();
        assert!((sampled - 0.5).abs() < 1e-12, "sampled modulus {sampled}");
        // saturation at the diameter
        assert_eq!(modulus(&id, 5.0).unwrap(), 2.0);

        let diag = Problem::diagonal(vec![0.5, 0.25], 0.0, NormTag::INF).unwrap();
        assert_eq!(modulus(&diag, 1.0).unwrap(), 0.5);
        let sampled = modulus_sampled(&diag, 1.0, 2).unwrap();
        assert!((sampled - 0.5).abs() < 1e-12);

        // p != q has no closed form
        let skew = Problem::identity(NormTag::L1, NormTag::L2, 2).unwrap();
        assert!(matches!(modulus(&skew, 1.0), Err(Error::UnsupportedInstance(_))));
        assert!(modulus_sampled(&skew, 1.0, 2).unwrap() > 0.0);
    }

    #[test]
    fn modified_modulus_dominates_modulus() {
        let diag = Problem::diagonal(vec![0.8, 0.2], 0.0, NormTag::INF).unwrap();
        for gamma in [0.0, 0.3, 1.0, 2.0, 3.0] {
            let w = modulus(&diag, gamma).unwrap();
            let wt = modified_modulus(&diag, gamma).unwrap();
            assert!(w <= wt + 1e-15, "gamma={gamma}: {w} > {wt}");
            assert!(wt <= gamma * diag.operator_norm() + 1e-15);
        }
    }

    #[test]
    fn power_sigma_and_file_loading() {
        let (sigma, tail) = power_sigma(1.0, 4).unwrap();
        assert_eq!(sigma, vec![1.0, 0.5, 1.0 / 3.0, 0.25]);
        assert_eq!(tail, 0.2);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sigma.txt");
        std::fs::write(&path, "# comment\n1.0\n0.5\n\n0.5\n0.125\n").unwrap();
        assert_eq!(load_sigma_file(&path).unwrap(), vec![1.0, 0.5, 0.5, 0.125]);

        std::fs::write(&path, "0.5\n1.0\n").unwrap();
        assert!(load_sigma_file(&path).is_err());

        let (s2, t2) = parse_sigma_spec("power:0.5", 3).unwrap();
        assert_eq!(s2.len(), 3);
        assert!((t2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn domain_grid_respects_ball_and_cap() {
        let prob = Problem::identity(NormTag::L1, NormTag::L2, 2).unwrap();
        let pts = domain_grid(&prob, 2, 10_000).unwrap();
        assert!(pts.iter().all(|x| norm_slice(x.entries(), NormTag::L1) <= 1.0 + 1e-9));
        // the l1 ball misses the corners of the bounding box
        let bigger = domain_grid(&Problem::identity(NormTag::INF, NormTag::L2, 2).unwrap(), 2, 10_000).unwrap();
        assert!(bigger.len() > pts.len());
        // cap forces a coarser grid rather than an error
        let coarse = domain_grid(&prob, 7, 50).unwrap();
        assert!(coarse.len() <= 50);
    }

    proptest! {
        #[test]
        fn norm_triangle_and_homogeneity(
            a in proptest::collection::vec(-1.0f64..1.0, 1..5),
            b in proptest::collection::vec(-1.0f64..1.0, 1..5),
            c in -3.0f64..3.0,
            pick in 0usize..4,
        ) {
            let dim = a.len().min(b.len());
            let tag = [NormTag::L1, NormTag::L2, NormTag::Finite(3.0), NormTag::INF][pick];
            let x = Point::new(a[..dim].to_vec()).unwrap();
            let y = Point::new(b[..dim].to_vec()).unwrap();
            let sum = Point::new(x.entries().iter().zip(y.entries()).map(|(u, v)| u + v).collect()).unwrap();
            let nx = norm(&x, tag).unwrap();
            let ny = norm(&y, tag).unwrap();
            let ns = norm(&sum, tag).unwrap();
            prop_assert!(ns <= nx + ny + 1e-12);
            let scaled = norm(&x.scale(c), tag).unwrap();
            prop_assert!((scaled - c.abs() * nx).abs() <= 1e-12 * (1.0 + nx));
        }

        #[test]
        fn lp_norms_decrease_in_p(v in proptest::collection::vec(-2.0f64..2.0, 1..5)) {
            let x = Point::new(v).unwrap();
            let n1 = norm(&x, NormTag::L1).unwrap();
            let n2 = norm(&x, NormTag::L2).unwrap();
            let ni = norm(&x, NormTag::INF).unwrap();
            prop_assert!(n1 >= n2 - 1e-12 && n2 >= ni - 1e-12);
        }

        #[test]
        fn dist_to_union_zero_iff_inside(
            y in proptest::collection::vec(-2.0f64..2.0, 2),
            cx in -1.0f64..1.0,
            r in 0.1f64..1.0,
        ) {
            let yp = Point::new(y).unwrap();
            let centers = vec![Point::new(vec![cx, 0.0]).unwrap()];
            let d = dist_to_union(&yp, &centers, r, NormTag::L2).unwrap();
            let direct = distance(&yp, &centers[0], NormTag::L2).unwrap();
            if direct <= r {
                prop_assert_eq!(d, 0.0);
            } else {
                prop_assert!((d - (direct - r)).abs() < 1e-12);
            }
        }
    }
}
