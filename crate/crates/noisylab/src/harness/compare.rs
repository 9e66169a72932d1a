//! Side-by-side comparison of the measurement classes on one problem at one
//! noise level: what each class can certify numerically, and which claims
//! are asymptotic statements that only make sense as citations. Asymptotic
//! rows carry no number at all — their `theory_ref` starts with `cited:` and
//! the value cell stays empty, so downstream tooling can never mistake a
//! rate for a finite-`n` guarantee.

use std::io::Write;

use crate::algorithms::{allocate, exact_decode_bits};
use crate::bounds::{linear_floor, lipschitz_floor};
use crate::entropy::{formula_diagonal, formula_identity};
use crate::error::{Error, Result};
use crate::measurement::csv_err;
use crate::spaces::{modulus, NormTag, Problem, ProblemKind};
use crate::util::ceil_nudged;

/// One comparison row. `value: None` means the quantity has no certified
/// finite number in this setting; the reason is in `theory_ref`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub class: &'static str,
    pub quantity: &'static str,
    pub value: Option<f64>,
    pub theory_ref: String,
}

/// Minimal `r >= 1` with `delta^r <= eps` (1 when `delta = 0`: a single
/// exact read suffices).
pub(crate) fn rounds_to(eps: f64, delta: f64) -> u32 {
    if delta == 0.0 {
        return 1;
    }
    let mut r = ceil_nudged(eps.ln() / delta.ln()).max(1.0) as u32;
    while delta.powi(r as i32) > eps {
        r += 1;
    }
    while r > 1 && delta.powi(r as i32 - 1) <= eps {
        r -= 1;
    }
    r
}

fn unsupported(class: &'static str, quantity: &'static str) -> CompareRow {
    CompareRow { class, quantity, value: None, theory_ref: "unsupported-geometry".into() }
}

/// Number of measurements the continuous-functional strategy needs to reach
/// accuracy `eps`, where the constructions provide one.
fn continuous_budget(prob: &Problem, delta: f64, eps: f64) -> CompareRow {
    const CLASS: &str = "continuous";
    const Q: &str = "measurements_to_eps";
    match &prob.kind {
        ProblemKind::Identity { p, q, m } if p.value() == q.value() => CompareRow {
            class: CLASS,
            quantity: Q,
            value: Some((*m as u32 * rounds_to(eps, delta)) as f64),
            theory_ref: "refinement-geometric".into(),
        },
        ProblemKind::Identity { .. } => unsupported(CLASS, Q),
        ProblemKind::Diagonal { sigma, p, .. } if *p == NormTag::Infinity => {
            if delta == 0.0 {
                // Exact reads: one per coordinate until the tail is small.
                match (0..=sigma.len()).find(|&k| prob.sigma_at(k + 1) <= eps) {
                    Some(k) => CompareRow {
                        class: CLASS,
                        quantity: Q,
                        value: Some(k as f64),
                        theory_ref: "truncation-exact-reads".into(),
                    },
                    None => CompareRow {
                        class: CLASS,
                        quantity: Q,
                        value: None,
                        theory_ref: "infeasible-at-eps".into(),
                    },
                }
            } else if delta > 0.5 {
                CompareRow {
                    class: CLASS,
                    quantity: Q,
                    value: None,
                    theory_ref: "requires-delta-at-most-half".into(),
                }
            } else {
                match allocate(prob, eps, delta) {
                    Ok(plan) => CompareRow {
                        class: CLASS,
                        quantity: Q,
                        value: Some(plan.total as f64),
                        theory_ref: "allocation-composite".into(),
                    },
                    Err(Error::InfeasibleTruncation(_)) => CompareRow {
                        class: CLASS,
                        quantity: Q,
                        value: None,
                        theory_ref: "infeasible-at-eps".into(),
                    },
                    Err(e) => CompareRow {
                        class: CLASS,
                        quantity: Q,
                        value: None,
                        theory_ref: format!("error:{e}"),
                    },
                }
            }
        }
        ProblemKind::Diagonal { .. } => unsupported(CLASS, Q),
    }
}

/// Entropy value at the budget the continuous class needs, i.e. the error
/// the arbitrary class would reach spending the same number of measurements
/// at `bits` reliably decodable bits each.
fn entropy_at_budget(prob: &Problem, budget: Option<f64>, bits: Option<u32>) -> CompareRow {
    const CLASS: &str = "arbitrary";
    const Q: &str = "entropy_error_at_eps_budget";
    let (Some(budget), Some(bits)) = (budget, bits) else {
        return CompareRow {
            class: CLASS,
            quantity: Q,
            value: None,
            theory_ref: "needs-feasible-budget".into(),
        };
    };
    let n = budget as u64 * bits as u64;
    let value = match &prob.kind {
        ProblemKind::Identity { p, q, m } => {
            if n == 0 && p.value() != q.value() {
                None
            } else {
                formula_identity(*p, *q, *m, n).ok().map(|rv| rv.value)
            }
        }
        ProblemKind::Diagonal { sigma, tail_bound, .. } => {
            formula_diagonal(sigma, *tail_bound, n).ok()
        }
    };
    match value {
        Some(v) => CompareRow {
            class: CLASS,
            quantity: Q,
            value: Some(v),
            theory_ref: "entropy-at-equal-budget".into(),
        },
        None => unsupported(CLASS, Q),
    }
}

/// Build the comparison table for one problem, noise level, and target
/// accuracy.
pub fn compare_settings(prob: &Problem, delta: f64, eps: f64) -> Result<Vec<CompareRow>> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParameters(format!(
            "noise level must satisfy 0 <= delta < 1, got {delta}"
        )));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameters(format!(
            "target accuracy must be positive and finite, got {eps}"
        )));
    }
    let mut rows = Vec::new();

    let lin = linear_floor(prob, delta)?;
    rows.push(CompareRow {
        class: "linear",
        quantity: "noise_floor",
        value: Some(lin.claimed),
        theory_ref: lin.theory_ref.into(),
    });
    rows.push(CompareRow {
        class: "linear",
        quantity: "rate_in_n",
        value: None,
        theory_ref: "cited:linear-noise-floor".into(),
    });

    match lipschitz_floor(prob, 1.0, delta) {
        Ok(cert) => rows.push(CompareRow {
            class: "lipschitz",
            quantity: "unit_class_floor",
            value: Some(cert.claimed),
            theory_ref: cert.theory_ref.into(),
        }),
        Err(Error::UnsupportedInstance(_)) => {
            rows.push(unsupported("lipschitz", "unit_class_floor"))
        }
        Err(e) => return Err(e),
    }
    rows.push(CompareRow {
        class: "lipschitz",
        quantity: "rate_in_n",
        value: None,
        theory_ref: "cited:lipschitz-noise-floor".into(),
    });

    let budget_row = continuous_budget(prob, delta, eps);
    let budget = budget_row.value;
    rows.push(budget_row);
    rows.push(CompareRow {
        class: "continuous",
        quantity: "rate_in_n",
        value: None,
        theory_ref: "cited:continuous-matches-noiseless-rate".into(),
    });

    let bits = if delta > 0.0 { Some(exact_decode_bits(delta)?) } else { None };
    rows.push(match bits {
        Some(b) => CompareRow {
            class: "arbitrary",
            quantity: "bits_per_measurement",
            value: Some(b as f64),
            theory_ref: "bits-exact-decode".into(),
        },
        None => CompareRow {
            class: "arbitrary",
            quantity: "bits_per_measurement",
            value: None,
            theory_ref: "noiseless-unbounded".into(),
        },
    });
    rows.push(entropy_at_budget(prob, budget, bits));
    rows.push(CompareRow {
        class: "arbitrary",
        quantity: "rate_in_n",
        value: None,
        theory_ref: "cited:entropy-rate-times-bits".into(),
    });

    match modulus(prob, 2.0 * delta) {
        Ok(v) => rows.push(CompareRow {
            class: "any",
            quantity: "delta_resolution_limit",
            value: Some(v / 2.0),
            theory_ref: "midpoint-transcript-indistinguishable".into(),
        }),
        Err(Error::UnsupportedInstance(_)) => {
            rows.push(unsupported("any", "delta_resolution_limit"))
        }
        Err(e) => return Err(e),
    }

    Ok(rows)
}

/// Serialize comparison rows with header `class,quantity,value,theory_ref`;
/// absent values print as empty cells.
pub fn write_compare_csv<W: Write>(w: W, rows: &[CompareRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["class", "quantity", "value", "theory_ref"]).map_err(csv_err)?;
    for r in rows {
        wtr.write_record([
            r.class.to_string(),
            r.quantity.to_string(),
            r.value.map(|v| v.to_string()).unwrap_or_default(),
            r.theory_ref.clone(),
        ])
        .map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}
