//! The weight integrals `Lambda1`, `Lambda2` and the interval of `lambda`
//! on which a positive solution is guaranteed.
//!
//! With `f0 = lim_{u->0+} f(u)/u` and `finf = lim_{u->inf} f(u)/u`:
//!
//! * if `Lambda1 * f0 < Lambda2 * finf`, every `lambda` in
//!   `(1 / (Lambda2 * finf), 1 / (Lambda1 * f0))` admits a positive solution
//!   (superlinear-type growth);
//! * else if `Lambda1 * finf < Lambda2 * f0`, every `lambda` in
//!   `(1 / (Lambda2 * f0), 1 / (Lambda1 * finf))` does (sublinear-type).
//!
//! Zero and infinite limits are handled symbolically with `1/0 = inf` and
//! `1/inf = 0`; a product `0 * inf` is left undecided.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exprlang::Expression;
use crate::kernel::BvpParams;
use crate::quadrature::{try_integrate, QuadratureSettings};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaConstants {
    pub lambda1: f64,
    pub lambda2: f64,
}

/// `(1 / (1 - alpha*eta)) * int_0^1 (1 - s) a(s) ds`
pub fn compute_lambda1(p: &BvpParams, a: &Expression, q: &QuadratureSettings) -> Result<f64> {
    let integral = try_integrate(
        |s| -> Result<f64> { Ok((1.0 - s) * a.eval(s)?) },
        0.0,
        1.0,
        q,
    )?;
    Ok(integral / p.defect())
}

/// `(gamma / (2 (1 - alpha*eta))) * int_0^eta (2(1 - eta) + alpha (eta^2 - s^2)) a(s) ds`
pub fn compute_lambda2(p: &BvpParams, a: &Expression, q: &QuadratureSettings) -> Result<f64> {
    let (alpha, eta) = (p.alpha(), p.eta());
    let integral = try_integrate(
        |s| -> Result<f64> { Ok((2.0 * (1.0 - eta) + alpha * (eta * eta - s * s)) * a.eval(s)?) },
        0.0,
        eta,
        q,
    )?;
    Ok(p.gamma() / (2.0 * p.defect()) * integral)
}

pub fn compute_constants(
    p: &BvpParams,
    a: &Expression,
    q: &QuadratureSettings,
) -> Result<LambdaConstants> {
    Ok(LambdaConstants {
        lambda1: compute_lambda1(p, a, q)?,
        lambda2: compute_lambda2(p, a, q)?,
    })
}

/// Limit of `f(u)/u`, which may be zero, a positive number or infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticValue {
    Zero,
    Finite(f64),
    Infinite,
}

impl AsymptoticValue {
    /// Classifies a nonnegative number; `0` is `Zero` and `+inf` is `Infinite`.
    pub fn from_f64(v: f64) -> Option<AsymptoticValue> {
        if v == 0.0 {
            Some(AsymptoticValue::Zero)
        } else if v == f64::INFINITY {
            Some(AsymptoticValue::Infinite)
        } else if v > 0.0 && v.is_finite() {
            Some(AsymptoticValue::Finite(v))
        } else {
            None
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            AsymptoticValue::Finite(v) => Some(*v),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AsymptoticValue::Zero => "zero",
            AsymptoticValue::Finite(_) => "finite",
            AsymptoticValue::Infinite => "infinite",
        }
    }

    pub fn scaled(&self, c: f64) -> AsymptoticValue {
        match self {
            AsymptoticValue::Finite(v) => AsymptoticValue::Finite(v * c),
            other => *other,
        }
    }
}

impl fmt::Display for AsymptoticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticValue::Finite(v) => write!(f, "{v}"),
            other => f.write_str(other.kind()),
        }
    }
}

impl Serialize for AsymptoticValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AsymptoticValue::Finite(v) => serializer.serialize_f64(*v),
            other => serializer.serialize_str(other.kind()),
        }
    }
}

impl<'de> Deserialize<'de> for AsymptoticValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = AsymptoticValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(r#"a nonnegative number or "zero" / "infinite""#)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                AsymptoticValue::from_f64(v)
                    .ok_or_else(|| E::custom(format!("asymptotic value must be >= 0, got {v}")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                match v {
                    "zero" => Ok(AsymptoticValue::Zero),
                    "infinite" => Ok(AsymptoticValue::Infinite),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Nonnegative extended real.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Ext {
    Finite(f64),
    Infinite,
}

impl Ext {
    fn cmp(self, other: Ext) -> Ordering {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a.total_cmp(&b),
            (Ext::Finite(_), Ext::Infinite) => Ordering::Less,
            (Ext::Infinite, Ext::Finite(_)) => Ordering::Greater,
            (Ext::Infinite, Ext::Infinite) => Ordering::Equal,
        }
    }

    fn lt(self, other: Ext) -> bool {
        self.cmp(other) == Ordering::Less
    }
}

/// `big_lambda * f` with `Zero * x = 0` and `Infinite * x = inf` for `x > 0`.
/// `None` for the undecided `0 * inf`.
fn product(big_lambda: f64, f: AsymptoticValue) -> Option<Ext> {
    match f {
        AsymptoticValue::Zero => Some(Ext::Finite(0.0)),
        AsymptoticValue::Finite(v) => Some(Ext::Finite(big_lambda * v)),
        AsymptoticValue::Infinite if big_lambda > 0.0 => Some(Ext::Infinite),
        AsymptoticValue::Infinite => None,
    }
}

/// `1 / x` as a lower endpoint: `1/inf = 0`.
fn reciprocal_lower(x: Ext) -> f64 {
    match x {
        Ext::Finite(v) => 1.0 / v,
        Ext::Infinite => 0.0,
    }
}

/// `1 / x` as an upper endpoint: `1/0 = unbounded`, `1/inf = 0`.
fn reciprocal_upper(x: Ext) -> UpperBound {
    match x {
        Ext::Finite(0.0) => UpperBound::Unbounded,
        Ext::Finite(v) => UpperBound::Finite(1.0 / v),
        Ext::Infinite => UpperBound::Finite(0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperBound {
    Finite(f64),
    Unbounded,
}

impl UpperBound {
    pub fn value(&self) -> f64 {
        match self {
            UpperBound::Finite(v) => *v,
            UpperBound::Unbounded => f64::INFINITY,
        }
    }
}

impl Serialize for UpperBound {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            UpperBound::Finite(v) => serializer.serialize_f64(*v),
            UpperBound::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}

/// Which growth condition produced an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalSource {
    /// `Lambda1 * f0 < Lambda2 * finf`
    Superlinear,
    /// `Lambda1 * finf < Lambda2 * f0`
    Sublinear,
}

/// Open interval of `lambda` with a guaranteed positive solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaInterval {
    pub lo: Option<f64>,
    pub hi: Option<UpperBound>,
    pub source: Option<IntervalSource>,
    pub conclusive: bool,
}

impl LambdaInterval {
    pub fn inconclusive() -> Self {
        LambdaInterval {
            lo: None,
            hi: None,
            source: None,
            conclusive: false,
        }
    }

    /// Open-interval membership; always false when inconclusive.
    pub fn contains(&self, lambda: f64) -> bool {
        match (self.conclusive, self.lo, self.hi) {
            (true, Some(lo), Some(hi)) => lambda > lo && lambda < hi.value(),
            _ => false,
        }
    }
}

/// Truth values of the two growth conditions, `None` when a `0 * inf`
/// product makes a side undecidable.
pub fn growth_conditions(
    c: &LambdaConstants,
    f0: AsymptoticValue,
    finf: AsymptoticValue,
) -> (Option<bool>, Option<bool>) {
    let superlinear = match (product(c.lambda1, f0), product(c.lambda2, finf)) {
        (Some(l), Some(r)) => Some(l.lt(r)),
        _ => None,
    };
    let sublinear = match (product(c.lambda1, finf), product(c.lambda2, f0)) {
        (Some(l), Some(r)) => Some(l.lt(r)),
        _ => None,
    };
    (superlinear, sublinear)
}

pub fn eigenvalue_interval(
    c: &LambdaConstants,
    f0: AsymptoticValue,
    finf: AsymptoticValue,
) -> LambdaInterval {
    let usable =
        c.lambda2 > 0.0 && c.lambda1 >= 0.0 && c.lambda1.is_finite() && c.lambda2.is_finite();
    if !usable {
        return LambdaInterval::inconclusive();
    }
    let (superlinear, sublinear) = growth_conditions(c, f0, finf);
    let (source, lower_of, upper_of) = if superlinear == Some(true) {
        (
            IntervalSource::Superlinear,
            product(c.lambda2, finf),
            product(c.lambda1, f0),
        )
    } else if sublinear == Some(true) {
        (
            IntervalSource::Sublinear,
            product(c.lambda2, f0),
            product(c.lambda1, finf),
        )
    } else {
        return LambdaInterval::inconclusive();
    };
    let (Some(lower_of), Some(upper_of)) = (lower_of, upper_of) else {
        return LambdaInterval::inconclusive();
    };
    let lo = reciprocal_lower(lower_of);
    let hi = reciprocal_upper(upper_of);
    let separated = match hi {
        UpperBound::Unbounded => true,
        UpperBound::Finite(h) => h - lo >= 1e-15 * h.abs().max(1.0),
    };
    if !separated {
        return LambdaInterval::inconclusive();
    }
    LambdaInterval {
        lo: Some(lo),
        hi: Some(hi),
        source: Some(source),
        conclusive: true,
    }
}
