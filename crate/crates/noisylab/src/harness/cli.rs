//! Command-line front end. Every subcommand builds a problem instance and a
//! policy from flags, runs the relevant construction or certificate, and
//! prints results in full round-trip decimal precision.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a
//! verification check fails (a certificate is broken, a decode roundtrip
//! misses, or an invariant audit trips).
//!
//! A `--config path` file of `key=value` lines (with `#` comments) supplies
//! defaults for any flag; explicit flags win.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::algorithms::{
    allocate, exact_decode_bits, l2_noise_sandwich, quantizer_bits, truncation_error,
    write_plan_csv, CellEncoder, CoordinateRefinement, CoverBisection,
};
use crate::bounds::{
    grid_adversary, linear_floor, lipschitz_floor, verify_linear_floor, verify_lipschitz_floor,
    LowerBoundCertificate,
};
use crate::entropy::{entropy_profile, grid_cover_linf};
use crate::error::{Error, Result};
use crate::harness::compare::{compare_settings, rounds_to, write_compare_csv};
use crate::harness::search::{estimate_worst_error, SearchConfig};
use crate::harness::sweep::{run_sweep, write_sweep_csv};
use crate::measurement::{
    run_session, write_transcript_csv, ConstantPolicy, NoiseAdversary, NoiseStrategy, Policy,
    Transcript,
};
use crate::spaces::{domain_extreme_points, parse_sigma_spec, NormTag, Point, Problem};
use crate::util::symmetric_unit;

const AUDIT_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "noisylab", version, about = "Adaptive measurement under adversarial noise: \
covers, refinement policies, entropy sandwiches, and lower-bound certificates")]
struct Cli {
    /// File of key=value defaults for any flag; explicit flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the quantized cell encoder and audit its decode roundtrip
    /// against an adversary battery.
    Encode(EncodeArgs),
    /// Run cover bisection and audit the containment invariant per step.
    Bisect(BisectArgs),
    /// Coordinate refinement: achieved worst-case error vs the matched
    /// indistinguishability floor.
    Refine(RefineArgs),
    /// Diagonal-operator closed forms: truncation table and the
    /// accuracy-driven measurement allocation.
    Diag(DiagArgs),
    /// Entropy-number profile: constructive bounds against the closed form.
    Entropy(EntropyArgs),
    /// Compute and verify lower-bound certificates against a chosen policy.
    Floor(FloorArgs),
    /// Run the full deterministic experiment sweep and emit CSV.
    Sweep(SweepArgs),
    /// Per-measurement-class comparison table for one problem setting.
    Compare(CompareArgs),
}

/// Flag defaults read from the `--config` file.
struct Overlay(BTreeMap<String, String>);

impl Overlay {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let mut map = BTreeMap::new();
        if let Some(p) = path {
            let text = fs::read_to_string(p)?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((k, v)) = line.split_once('=') else {
                    return Err(Error::InvalidInput(format!(
                        "config line {}: expected key=value, got {line:?}",
                        i + 1
                    )));
                };
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Overlay(map))
    }

    /// Flag if present, else the parsed config value, else None.
    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                Error::InvalidInput(format!("config key {key} has unparsable value {raw:?}"))
            }),
        }
    }

    fn req<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T> {
        self.get(flag, key)?.ok_or_else(|| {
            Error::InvalidInput(format!("missing value for --{key} (flag or config file)"))
        })
    }

    fn or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }
}

/// Shared problem-selection flags: either an identity embedding
/// (`--m --p --q`) or a diagonal operator (`--sigma`, with `--m` for
/// `power:s` truncations and `--p` as the exponent of both spaces).
#[derive(Args)]
struct ProbArgs {
    /// Dimension (identity), or truncation length for `--sigma power:s`.
    #[arg(long)]
    m: Option<usize>,
    /// Domain norm exponent (identity) or the common exponent (diagonal);
    /// number or `inf`.
    #[arg(long)]
    p: Option<String>,
    /// Target norm exponent; identity instances only. Defaults to `--p`.
    #[arg(long)]
    q: Option<String>,
    /// Singular values: `power:s` for j^-s, or a path to a file of one
    /// value per line.
    #[arg(long)]
    sigma: Option<String>,
}

impl ProbArgs {
    fn build(&self, ov: &Overlay) -> Result<Problem> {
        let sigma_spec = ov.get(self.sigma.clone(), "sigma")?;
        let p_str = ov.or(self.p.clone(), "p", "inf".to_string())?;
        let p = NormTag::parse(&p_str)?;
        match sigma_spec {
            Some(spec) => {
                if self.q.is_some() {
                    return Err(Error::InvalidInput(
                        "--q does not apply to --sigma instances (a diagonal operator \
                         acts within a single space; use --p)"
                            .into(),
                    ));
                }
                let m = ov.get(self.m, "m")?;
                if spec.starts_with("power:") && m.is_none() {
                    return Err(Error::InvalidInput(
                        "--sigma power:s needs --m for the truncation length".into(),
                    ));
                }
                let (sigma, tail) = parse_sigma_spec(&spec, m.unwrap_or(0))?;
                Problem::diagonal(sigma, tail, p)
            }
            None => {
                let m = ov.req(self.m, "m")?;
                let q = match ov.get(self.q.clone(), "q")? {
                    Some(s) => NormTag::parse(&s)?,
                    None => p,
                };
                Problem::identity(p, q, m)
            }
        }
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap would exit 2 on usage errors; 2 is reserved for
            // verification failures here, so remap. --help/--version print
            // to stdout and succeed.
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_verification_failure() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let ov = Overlay::load(cli.config.as_ref())?;
    match cli.cmd {
        Cmd::Encode(a) => cmd_encode(a, &ov),
        Cmd::Bisect(a) => cmd_bisect(a, &ov),
        Cmd::Refine(a) => cmd_refine(a, &ov),
        Cmd::Diag(a) => cmd_diag(a, &ov),
        Cmd::Entropy(a) => cmd_entropy(a, &ov),
        Cmd::Floor(a) => cmd_floor(a, &ov),
        Cmd::Sweep(a) => cmd_sweep(a, &ov),
        Cmd::Compare(a) => cmd_compare(a, &ov),
    }
}

fn out_writer(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

/// Deterministic battery of inputs for roundtrip/containment audits:
/// domain extreme points, the given anchors, and seeded interior draws.
fn battery_inputs(prob: &Problem, anchors: &[Point], draws: usize, seed: u64) -> Vec<Point> {
    let mut inputs = domain_extreme_points(prob);
    // anchors (e.g. cell centers), strided to keep audits bounded
    let stride = anchors.len().div_ceil(4096).max(1);
    inputs.extend(anchors.iter().step_by(stride).cloned());
    let m = prob.dim();
    let mut ctr = 0u64;
    for _ in 0..draws {
        let coords: Vec<f64> = (0..m)
            .map(|_| {
                ctr += 1;
                symmetric_unit(seed, ctr)
            })
            .collect();
        // sup-ball points are admissible for every supported domain after
        // rescaling by the domain norm when needed
        match Point::new(coords) {
            Ok(pt) if prob.contains(&pt) => inputs.push(pt),
            Ok(pt) => {
                let n = crate::spaces::norm(&pt, prob.domain_tag()).unwrap_or(f64::INFINITY);
                if n > 0.0 && n.is_finite() {
                    inputs.push(pt.scale((1.0 - 1e-12) / n));
                }
            }
            Err(_) => {}
        }
    }
    inputs
}

fn noise_battery(delta: f64, seed: u64) -> Result<Vec<NoiseStrategy>> {
    let mut strategies = vec![NoiseStrategy::Zero];
    if delta > 0.0 {
        strategies.push(NoiseStrategy::FixedShift(delta));
        strategies.push(NoiseStrategy::FixedShift(-delta));
        strategies.push(NoiseStrategy::ClampToZero);
        strategies.push(NoiseStrategy::GridSnap { bits: quantizer_bits(delta)? });
        strategies.push(NoiseStrategy::SeededRandom { seed });
    }
    Ok(strategies)
}

/// Exhaustive sign patterns when the budget allows, else empty.
fn sign_patterns(steps: usize) -> Vec<NoiseStrategy> {
    if steps == 0 || steps > 12 {
        return Vec::new();
    }
    (0u64..1 << steps)
        .map(|mask| {
            NoiseStrategy::SignPattern((0..steps).map(|i| mask >> i & 1 == 1).collect())
        })
        .collect()
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    prob: ProbArgs,
    /// Number of measurements; n times the per-measurement bit count must be
    /// a multiple of the dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Noise level in (0, 1).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Interior draws per audit battery.
    #[arg(long)]
    draws: Option<usize>,
    /// Write the worst session's transcript CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_encode(a: EncodeArgs, ov: &Overlay) -> Result<()> {
    let m: usize = ov.req(a.prob.m, "m")?;
    let n: usize = ov.req(a.n, "n")?;
    let delta: f64 = ov.req(a.delta, "delta")?;
    let seed: u64 = ov.or(a.seed, "seed", 7)?;
    let draws: usize = ov.or(a.draws, "draws", 256)?;
    let q = match ov.get(a.prob.q.clone(), "q")? {
        Some(s) => NormTag::parse(&s)?,
        None => NormTag::INF,
    };
    if a.prob.sigma.is_some() || a.prob.p.is_some() {
        return Err(Error::InvalidInput(
            "encode works on the sup-norm ball; only --m --n --delta --q apply".into(),
        ));
    }

    let bits = exact_decode_bits(delta)?;
    let total_bits = n as u64 * bits as u64;
    if total_bits % m as u64 != 0 {
        return Err(Error::InvalidParameters(format!(
            "n * bits = {n} * {bits} = {total_bits} cells bits must split evenly over {m} axes; \
             pick n a multiple of {}",
            m as u64 / gcd(m as u64, bits.max(1) as u64)
        )));
    }
    let (centers, radius_sup) = grid_cover_linf(m, total_bits)?;
    let prob = Problem::identity(NormTag::INF, q, m)?;
    // a sup-norm cube of radius r has q-radius r * m^(1/q)
    let radius_q = radius_sup * (m as f64).powf(1.0 / q.value());
    let enc = CellEncoder::for_noise(centers.clone(), q, delta, n)?.with_cover_radius(radius_q);

    println!(
        "cells {}  bits/measurement {}  measurements {}  cover radius {}",
        centers.len(),
        bits,
        n,
        radius_q
    );

    let inputs = battery_inputs(&prob, &centers, draws, seed);
    let strategies = noise_battery(delta, seed ^ 0x9e37)?;
    let mut sessions = 0usize;
    let mut failures = 0usize;
    let mut worst: Option<(f64, Transcript)> = None;
    for f in &inputs {
        let sf = prob.apply(f)?;
        let truth = enc.cell_of(&sf)?;
        for strat in &strategies {
            let adv = NoiseAdversary::new(delta, strat.clone())?;
            let res = run_session(&enc, &prob, f, &adv)?;
            sessions += 1;
            if enc.decode_index(&res.transcript) != truth {
                failures += 1;
            }
            if worst.as_ref().is_none_or(|(e, _)| res.error_value > *e) {
                worst = Some((res.error_value, res.transcript));
            }
        }
    }
    let (worst_error, worst_transcript) = worst.expect("battery is never empty");
    println!("sessions {sessions}  decode failures {failures}  worst error {worst_error}");
    if let Some(path) = &a.out {
        write_transcript_csv(fs::File::create(path)?, "encode-worst", &worst_transcript)?;
        println!("transcript -> {}", path.display());
    }
    if failures > 0 {
        return Err(Error::Inconsistency(format!(
            "{failures} of {sessions} sessions decoded the wrong cell"
        )));
    }
    if worst_error > radius_q + AUDIT_TOL {
        return Err(Error::Inconsistency(format!(
            "worst error {worst_error} exceeds the cover radius {radius_q}"
        )));
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Args)]
struct BisectArgs {
    /// Dimension of the sup-norm ball; must divide n.
    #[arg(long)]
    m: Option<usize>,
    /// Bisection steps; the cover has 2^n balls.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// Threshold in (delta, 1]; defaults to (1 + delta) / 2.
    #[arg(long = "delta-plus")]
    delta_plus: Option<f64>,
    /// Probe scale > 0; defaults keep the radius inflation at one percent.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    draws: Option<usize>,
    /// Write the worst session's transcript CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_bisect(a: BisectArgs, ov: &Overlay) -> Result<()> {
    let m: usize = ov.req(a.m, "m")?;
    let n: usize = ov.req(a.n, "n")?;
    let delta: f64 = ov.req(a.delta, "delta")?;
    let seed: u64 = ov.or(a.seed, "seed", 7)?;
    let draws: usize = ov.or(a.draws, "draws", 128)?;

    let (centers, radius) = grid_cover_linf(m, n as u64)?;
    let prob = Problem::identity(NormTag::INF, NormTag::INF, m)?;
    let delta_plus: Option<f64> = ov.get(a.delta_plus, "delta-plus")?;
    let eta: Option<f64> = ov.get(a.eta, "eta")?;
    let pol = match (delta_plus, eta) {
        (None, None) => CoverBisection::new(centers.clone(), radius, NormTag::INF, n, delta)?,
        (dp, et) => {
            let dp = dp.unwrap_or((1.0 + delta) / 2.0);
            let et = et.unwrap_or_else(|| {
                if n as f64 * delta > 0.0 { 0.01 * radius / (n as f64 * delta) } else { 1e-3 }
            });
            CoverBisection::with_params(centers.clone(), radius, NormTag::INF, n, delta, dp, et)?
        }
    };
    let bound = pol.analytic_upper(delta);
    println!(
        "balls {}  radius {}  steps {}  delta+ {}  eta {}",
        centers.len(),
        radius,
        n,
        pol.delta_plus(),
        pol.eta()
    );

    let inputs = battery_inputs(&prob, &centers, draws, seed);
    let mut strategies = noise_battery(delta, seed ^ 0x51f1)?;
    strategies.extend(sign_patterns(n));
    let mut sessions = 0usize;
    let mut violations = 0usize;
    let mut worst: Option<(f64, Transcript)> = None;
    for f in &inputs {
        let sf = prob.apply(f)?;
        for strat in &strategies {
            let adv = NoiseAdversary::new(delta, strat.clone())?;
            let res = run_session(&pol, &prob, f, &adv)?;
            sessions += 1;
            for state in pol.states(&res.transcript) {
                let covered = state.active.iter().any(|&i| {
                    prob.image_distance(&sf, &centers[i])
                        .map(|d| d <= state.radius + AUDIT_TOL)
                        .unwrap_or(false)
                });
                if !covered {
                    violations += 1;
                }
            }
            if worst.as_ref().is_none_or(|(e, _)| res.error_value > *e) {
                worst = Some((res.error_value, res.transcript));
            }
        }
    }
    let (worst_error, worst_transcript) = worst.expect("battery is never empty");
    match bound {
        Some(b) => println!(
            "sessions {sessions}  containment violations {violations}  worst error {worst_error}  \
             bound {b}"
        ),
        None => println!(
            "sessions {sessions}  containment violations {violations}  worst error {worst_error}"
        ),
    }
    if let Some(path) = &a.out {
        write_transcript_csv(fs::File::create(path)?, "bisect-worst", &worst_transcript)?;
        println!("transcript -> {}", path.display());
    }
    if violations > 0 {
        return Err(Error::Inconsistency(format!(
            "image containment failed in {violations} step states"
        )));
    }
    if let Some(b) = bound {
        if worst_error > b + AUDIT_TOL {
            return Err(Error::Inconsistency(format!(
                "worst error {worst_error} exceeds the analytic bound {b}"
            )));
        }
    }
    Ok(())
}

#[derive(Args)]
struct RefineArgs {
    #[arg(long)]
    m: Option<usize>,
    /// Rounds per coordinate.
    #[arg(long)]
    n: Option<u32>,
    /// Target accuracy; picks the minimal rounds with delta^r <= eps.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write a demonstration transcript (constant +delta shift at f = 0).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_refine(a: RefineArgs, ov: &Overlay) -> Result<()> {
    let m: usize = ov.req(a.m, "m")?;
    let delta: f64 = ov.req(a.delta, "delta")?;
    let seed: u64 = ov.or(a.seed, "seed", 7)?;
    let r: u32 = match ov.get(a.n, "n")? {
        Some(r) => r,
        None => {
            let eps: f64 = ov.req(a.eps, "eps")?;
            rounds_to(eps, delta)
        }
    };
    let prob = Problem::identity(NormTag::INF, NormTag::INF, m)?;
    let pol = CoordinateRefinement::uniform(&prob, r, delta)?;

    let floor = if delta > 0.0 {
        let lip = delta.powi(1 - r as i32);
        let cert = lipschitz_floor(&prob, lip, delta)?;
        let realized = verify_lipschitz_floor(&cert, &pol, &prob, delta)?;
        Some((cert, realized))
    } else {
        None
    };
    let report = estimate_worst_error(
        &pol,
        &prob,
        delta,
        floor.as_ref().map(|(c, _)| c.claimed),
        &SearchConfig { seed, ..SearchConfig::default() },
    )?;

    println!("rounds/coordinate {r}  measurements {}  delta {delta}", pol.budget());
    if let Some(upper) = report.analytic_upper {
        println!("analytic worst case {upper}");
    }
    println!(
        "searched worst error {}  exhaustive {}",
        report.estimated_worst_error, report.exhaustive
    );
    if let Some((cert, realized)) = &floor {
        println!(
            "matched floor claims {}  realized on witnesses {}  ({})",
            cert.claimed, realized, cert.theory_ref
        );
    }
    if let Some(path) = &a.out {
        let adv = NoiseAdversary::new(delta, NoiseStrategy::FixedShift(delta))?;
        let res = run_session(&pol, &prob, &Point::zeros(m), &adv)?;
        write_transcript_csv(fs::File::create(path)?, "refine-demo", &res.transcript)?;
        println!("transcript -> {}", path.display());
    }
    Ok(())
}

#[derive(Args)]
struct DiagArgs {
    /// Singular values: `power:s` (with --m) or a file path.
    #[arg(long)]
    sigma: Option<String>,
    /// Truncation length for `power:s`.
    #[arg(long)]
    m: Option<usize>,
    /// Exponent of the common domain/target space; number or `inf`.
    #[arg(long)]
    p: Option<String>,
    /// Largest truncation level to tabulate.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// Target accuracy: solve the measurement allocation for it (sup norm,
    /// delta <= 1/2 only).
    #[arg(long)]
    eps: Option<f64>,
    /// Write the allocation plan CSV (rows i,sigma_i,n_i) here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_diag(a: DiagArgs, ov: &Overlay) -> Result<()> {
    let spec: String = ov.req(a.sigma.clone(), "sigma")?;
    let m: Option<usize> = ov.get(a.m, "m")?;
    if spec.starts_with("power:") && m.is_none() {
        return Err(Error::InvalidInput(
            "--sigma power:s needs --m for the truncation length".into(),
        ));
    }
    let p = NormTag::parse(&ov.or(a.p.clone(), "p", "inf".to_string())?)?;
    let delta: f64 = ov.req(a.delta, "delta")?;
    let (sigma, tail) = parse_sigma_spec(&spec, m.unwrap_or(0))?;
    let prob = Problem::diagonal(sigma, tail, p)?;
    let n: usize = ov.or(a.n, "n", prob.dim())?;

    let is_l2 = p == NormTag::L2;
    if is_l2 {
        println!("n,truncation_error,l2_noise_lower,l2_noise_upper");
    } else {
        println!("n,truncation_error");
    }
    for k in 0..=n.min(prob.dim()) {
        let err = truncation_error(&prob, k, delta)?;
        if is_l2 {
            let (lo, hi) = l2_noise_sandwich(&prob, k, delta)?;
            println!("{k},{err},{lo},{hi}");
        } else {
            println!("{k},{err}");
        }
    }

    let eps: Option<f64> = ov.get(a.eps, "eps")?;
    match eps {
        Some(eps) => {
            let plan = allocate(&prob, eps, delta)?;
            println!(
                "allocation: keep {}  rounds {:?}  total {}  ideal cost {}  slack {}",
                plan.truncation, plan.rounds, plan.total, plan.log_cost_term, plan.slack
            );
            if let Some(path) = &a.out {
                write_plan_csv(fs::File::create(path)?, &prob, &plan)?;
                println!("plan -> {}", path.display());
            }
        }
        None => {
            if a.out.is_some() {
                return Err(Error::InvalidInput(
                    "--out writes the allocation plan; it needs --eps".into(),
                ));
            }
        }
    }
    Ok(())
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    prob: ProbArgs,
    /// Largest entropy index to profile.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sample resolution override for the constructive bounds (grid level).
    #[arg(long)]
    budget: Option<u32>,
    /// Write the profile CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_entropy(a: EntropyArgs, ov: &Overlay) -> Result<()> {
    let n: u64 = ov.req(a.n, "n")?;
    let seed: u64 = ov.or(a.seed, "seed", 7)?;
    let budget: Option<u32> = ov.get(a.budget, "budget")?;
    let prob = a.prob.build(ov)?;
    let rows = entropy_profile(&prob, n, seed, budget)?;
    let mut w = out_writer(a.out.as_ref())?;
    writeln!(w, "n,lower,upper,formula,band_lo,band_hi")?;
    for s in &rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            s.n, s.lower, s.upper, s.formula, s.band.0, s.band.1
        )?;
    }
    w.flush()?;
    if let Some(path) = &a.out {
        println!("profile -> {}", path.display());
    }
    Ok(())
}

#[derive(Args)]
struct FloorArgs {
    #[command(flatten)]
    prob: ProbArgs,
    #[arg(long)]
    delta: Option<f64>,
    /// Lipschitz constant for the modulus floor.
    #[arg(long)]
    lipschitz: Option<f64>,
    /// Rounds per coordinate for --policy refine.
    #[arg(long)]
    n: Option<u32>,
    /// Policy to verify the certificates against: `constant` or `refine`.
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

fn witness_json(p: &Point) -> String {
    serde_json::to_string(p.entries()).expect("finite floats serialize")
}

fn floor_row(kind: &str, cert: &LowerBoundCertificate, realized: Option<f64>, note: &str) {
    println!(
        "{kind},{},{},{},{},{}",
        cert.claimed,
        realized.map(|v| v.to_string()).unwrap_or_default(),
        if note.is_empty() { cert.theory_ref.to_string() } else { note.to_string() },
        witness_json(&cert.witnesses.0),
        witness_json(&cert.witnesses.1),
    );
}

fn cmd_floor(a: FloorArgs, ov: &Overlay) -> Result<()> {
    let delta: f64 = ov.req(a.delta, "delta")?;
    let lip: f64 = ov.or(a.lipschitz, "lipschitz", 1.0)?;
    let seed: u64 = ov.or(a.seed, "seed", 7)?;
    let prob = a.prob.build(ov)?;
    let policy_name = ov.or(a.policy.clone(), "policy", "constant".to_string())?;
    let pol: Box<dyn Policy> = match policy_name.as_str() {
        "constant" => Box::new(ConstantPolicy::zeros(&prob)),
        "refine" => {
            let r: u32 = ov.or(a.n, "n", 1)?;
            Box::new(CoordinateRefinement::uniform(&prob, r, delta)?)
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown --policy {other:?}; use constant or refine"
            )))
        }
    };

    println!("kind,claimed,realized,theory_ref,witness_f,witness_g");

    let lin = linear_floor(&prob, delta)?;
    match verify_linear_floor(&lin, &*pol, &prob, delta) {
        Ok(realized) => floor_row("linear", &lin, Some(realized), ""),
        Err(Error::ClassMismatch(_)) => floor_row("linear", &lin, None, "does-not-apply"),
        Err(e) => return Err(e),
    }

    match lipschitz_floor(&prob, lip, delta) {
        Ok(cert) => match verify_lipschitz_floor(&cert, &*pol, &prob, delta) {
            Ok(realized) => floor_row("lipschitz", &cert, Some(realized), ""),
            Err(Error::ClassMismatch(_)) => floor_row("lipschitz", &cert, None, "does-not-apply"),
            Err(e) => return Err(e),
        },
        Err(Error::UnsupportedInstance(_)) => {
            println!("lipschitz,,,unsupported-geometry,,")
        }
        Err(e) => return Err(e),
    }

    let grid = grid_adversary(&*pol, &prob, delta, 3, 4096)?;
    floor_row("grid_adversary", &grid, Some(grid.claimed), "");
    let _ = seed; // reserved for future randomized certifiers
    Ok(())
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Write the sweep CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_sweep(a: SweepArgs, ov: &Overlay) -> Result<()> {
    let seed: u64 = ov.or(a.seed, "seed", 7)?;
    let rows = run_sweep(seed)?;
    write_sweep_csv(out_writer(a.out.as_ref())?, &rows)?;
    if let Some(path) = &a.out {
        println!("{} rows -> {}", rows.len(), path.display());
    }
    Ok(())
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    prob: ProbArgs,
    #[arg(long)]
    delta: Option<f64>,
    /// Target accuracy the measurement budgets must reach.
    #[arg(long)]
    eps: Option<f64>,
    /// Write the comparison CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_compare(a: CompareArgs, ov: &Overlay) -> Result<()> {
    let delta: f64 = ov.req(a.delta, "delta")?;
    let eps: f64 = ov.req(a.eps, "eps")?;
    let prob = a.prob.build(ov)?;
    let rows = compare_settings(&prob, delta, eps)?;
    write_compare_csv(out_writer(a.out.as_ref())?, &rows)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_overlay_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg");
        fs::write(&path, "# defaults\ndelta = 0.4\nm=2\n").unwrap();
        let ov = Overlay::load(Some(&path)).unwrap();
        // flag wins
        assert_eq!(ov.req(Some(0.2f64), "delta").unwrap(), 0.2);
        // file fills in
        assert_eq!(ov.req(None::<f64>, "delta").unwrap(), 0.4);
        assert_eq!(ov.req(None::<usize>, "m").unwrap(), 2);
        // absent everywhere
        assert!(ov.req(None::<u64>, "seed").is_err());
        assert_eq!(ov.or(None::<u64>, "seed", 7).unwrap(), 7);
    }

    #[test]
    fn config_rejects_malformed_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg");
        fs::write(&path, "delta 0.4\n").unwrap();
        assert!(Overlay::load(Some(&path)).is_err());
        fs::write(&path, "delta=not-a-number\n").unwrap();
        let ov = Overlay::load(Some(&path)).unwrap();
        assert!(ov.req(None::<f64>, "delta").is_err());
    }

    #[test]
    fn problem_selection_covers_both_shapes() {
        let ov = Overlay(BTreeMap::new());
        let ident = ProbArgs {
            m: Some(2),
            p: Some("inf".into()),
            q: Some("2".into()),
            sigma: None,
        };
        let prob = ident.build(&ov).unwrap();
        assert_eq!(prob.dim(), 2);
        assert_eq!(prob.target_tag(), NormTag::L2);

        let diag = ProbArgs {
            m: Some(4),
            p: None,
            q: None,
            sigma: Some("power:1".into()),
        };
        let prob = diag.build(&ov).unwrap();
        assert_eq!(prob.dim(), 4);
        assert_eq!(prob.sigma_at(2), 0.5);

        // q has no meaning for a diagonal instance
        let bad = ProbArgs {
            m: Some(4),
            p: None,
            q: Some("2".into()),
            sigma: Some("power:1".into()),
        };
        assert!(bad.build(&ov).is_err());

        // power:s without a length is underdetermined
        let bad = ProbArgs { m: None, p: None, q: None, sigma: Some("power:1".into()) };
        assert!(bad.build(&ov).is_err());
    }

    #[test]
    fn battery_respects_the_domain() {
        let prob = Problem::identity(NormTag::L2, NormTag::L2, 3).unwrap();
        for f in battery_inputs(&prob, &[], 64, 11) {
            assert!(prob.contains(&f));
        }
    }

    #[test]
    fn sign_pattern_battery_is_exhaustive_and_bounded() {
        assert_eq!(sign_patterns(3).len(), 8);
        assert!(sign_patterns(0).is_empty());
        assert!(sign_patterns(13).is_empty());
    }
}
