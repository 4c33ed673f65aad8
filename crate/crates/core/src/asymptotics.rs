//! Numerical estimates of `f0 = lim_{u->0+} f(u)/u` and
//! `finf = lim_{u->inf} f(u)/u`.
//!
//! The ratio `r(u) = f(u)/u` is sampled on decades approaching the limit
//! (`1e-1 .. 1e-8` or `1e1 .. 1e8`). The last three samples decide the class:
//!
//! 1. a final value below `1e-6` on a nonincreasing tail is `Zero`, above
//!    `1e6` on a nondecreasing tail is `Infinite`;
//! 2. otherwise a power-law tail `r ~ u^p` with a consistent local exponent
//!    `|p| >= 0.2` is classified by the sign of `p` (this catches slow
//!    algebraic trends such as `sqrt(u)/u` that never reach the thresholds);
//! 3. anything else is `Finite`, using an Aitken extrapolation of the tail.
//!
//! Samples that overflow are discarded; the first failing decade after a good
//! one is bisected on a quarter-decade grid so expressions like `exp(2u)`
//! still contribute points up to the overflow edge.

use serde::Serialize;

use crate::constants::AsymptoticValue;
use crate::error::{Error, Result};
use crate::exprlang::{EvalErrorKind, Expression};

const ZERO_THRESHOLD: f64 = 1e-6;
const INFINITE_THRESHOLD: f64 = 1e6;
const POWER_LAW_EXPONENT: f64 = 0.2;
const DRIFT_EXPONENT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Limit {
    Zero,
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticEstimate {
    pub value: AsymptoticValue,
    /// `(u, f(u)/u)` in order of approach to the limit.
    pub samples: Vec<(f64, f64)>,
    pub confident: bool,
    pub notes: Vec<String>,
}

pub fn estimate_f0(f: &Expression) -> Result<AsymptoticEstimate> {
    estimate(f, Limit::Zero)
}

pub fn estimate_finf(f: &Expression) -> Result<AsymptoticEstimate> {
    estimate(f, Limit::Infinity)
}

/// Uses the declared value verbatim when present, otherwise estimates.
pub fn resolve(
    f: &Expression,
    limit: Limit,
    declared: Option<AsymptoticValue>,
) -> Result<AsymptoticEstimate> {
    match declared {
        Some(value) => Ok(AsymptoticEstimate {
            value,
            samples: Vec::new(),
            confident: true,
            notes: vec!["declared".to_string()],
        }),
        None => estimate(f, limit),
    }
}

enum Sample {
    Good(f64),
    Discarded(String),
}

fn sample(f: &Expression, u: f64) -> Result<Sample> {
    match f.eval(u) {
        Ok(v) => {
            let r = v / u;
            if r.is_finite() {
                Ok(Sample::Good(r))
            } else {
                Ok(Sample::Discarded(format!(
                    "f({u:e})/u is not finite; sample discarded"
                )))
            }
        }
        Err(e)
            if matches!(
                e.kind,
                EvalErrorKind::NotANumber | EvalErrorKind::DivisionByZero
            ) =>
        {
            Ok(Sample::Discarded(format!("{e}; sample discarded")))
        }
        Err(e) => Err(Error::Eval(e)),
    }
}

pub fn estimate(f: &Expression, limit: Limit) -> Result<AsymptoticEstimate> {
    let sign = match limit {
        Limit::Zero => -1.0,
        Limit::Infinity => 1.0,
    };
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut notes = Vec::new();
    for k in 1..=8 {
        let u = 10f64.powf(sign * k as f64);
        match sample(f, u)? {
            Sample::Good(r) => samples.push((u, r)),
            Sample::Discarded(note) => {
                notes.push(note);
                if !samples.is_empty() {
                    // bisect the last good decade toward the failing one
                    for j in 1..=3 {
                        let u = 10f64.powf(sign * ((k - 1) as f64 + j as f64 / 4.0));
                        match sample(f, u)? {
                            Sample::Good(r) => samples.push((u, r)),
                            Sample::Discarded(note) => {
                                notes.push(note);
                                break;
                            }
                        }
                    }
                    break;
                }
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::NoSamples(match limit {
            Limit::Zero => "u = 0",
            Limit::Infinity => "u = infinity",
        }));
    }
    let (value, confident) = classify(&samples, limit, &mut notes);
    Ok(AsymptoticEstimate {
        value,
        samples,
        confident,
        notes,
    })
}

fn classify(
    samples: &[(f64, f64)],
    limit: Limit,
    notes: &mut Vec<String>,
) -> (AsymptoticValue, bool) {
    let tail = &samples[samples.len().saturating_sub(3)..];
    let r: Vec<f64> = tail.iter().map(|&(_, r)| r).collect();
    let last = *r.last().unwrap();
    let nonincreasing = r.windows(2).all(|w| w[1] <= w[0]);
    let nondecreasing = r.windows(2).all(|w| w[1] >= w[0]);
    let mut confident = tail.len() == 3 && (nonincreasing || nondecreasing);
    if tail.len() < 3 {
        notes.push(format!("only {} usable sample(s)", tail.len()));
    } else if !confident {
        notes.push("trend of f(u)/u is not monotone in the final samples".to_string());
    }

    if last < ZERO_THRESHOLD && nonincreasing {
        return (AsymptoticValue::Zero, confident);
    }
    if last > INFINITE_THRESHOLD && nondecreasing {
        return (AsymptoticValue::Infinite, confident);
    }

    if tail.len() >= 2 && r.iter().all(|&v| v > 0.0) {
        // local exponents p in r ~ u^p, oriented so p > 0 means r grows
        // toward the limit
        let orient = match limit {
            Limit::Zero => -1.0,
            Limit::Infinity => 1.0,
        };
        let slopes: Vec<f64> = tail
            .windows(2)
            .map(|w| orient * (w[1].1 / w[0].1).ln() / (w[1].0 / w[0].0).ln())
            .collect();
        let growing = slopes.iter().all(|&p| p >= POWER_LAW_EXPONENT);
        let decaying = slopes.iter().all(|&p| p <= -POWER_LAW_EXPONENT);
        if growing && nondecreasing {
            return (AsymptoticValue::Infinite, confident);
        }
        if decaying && nonincreasing {
            return (AsymptoticValue::Zero, confident);
        }
        let drift = slopes.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        if drift >= DRIFT_EXPONENT {
            confident = false;
            notes.push(format!(
                "f(u)/u still drifts (local exponent {drift:.3}); consider declaring the limit"
            ));
        }
    }

    let extrapolated = aitken(&r);
    if extrapolated > 0.0 {
        (AsymptoticValue::Finite(extrapolated), confident)
    } else {
        notes.push("extrapolated limit is not positive".to_string());
        (AsymptoticValue::Zero, false)
    }
}

/// Aitken delta-squared on the last three values, used only for a
/// contracting tail; falls back to the final value.
fn aitken(r: &[f64]) -> f64 {
    let last = *r.last().unwrap();
    if r.len() < 3 {
        return last;
    }
    let (x0, x1, x2) = (r[r.len() - 3], r[r.len() - 2], r[r.len() - 1]);
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let dd = d2 - d1;
    let scale = x0.abs().max(x1.abs()).max(x2.abs());
    if dd.abs() <= 64.0 * f64::EPSILON * scale || d1 * d2 <= 0.0 || d2.abs() >= d1.abs() {
        return last;
    }
    let ext = x2 - d2 * d2 / dd;
    if ext.is_finite() && (ext - x2).abs() <= 10.0 * d2.abs() {
        ext
    } else {
        last
    }
}
