//! Adaptive Simpson quadrature with Richardson error control.
//!
//! Each panel compares Simpson on `[a, b]` against the two half-panel
//! Simpson sums; when `|S_fine - S_coarse| / 15` is within the panel's share
//! of the tolerance the extrapolated value `S_fine + (S_fine - S_coarse) / 15`
//! is accepted, otherwise the panel is bisected with half the tolerance.
//! The extrapolated value is exact for quintics, so polynomial integrands of
//! degree <= 3 are exact. The interval starts as at least eight panels
//! (fewer per piece when seams already cut it finely) and every initial
//! panel is bisected once. A child whose estimate is far smaller than its
//! parent's predicts is treated as a chance cancellation and refined.
//!
//! A panel is also accepted once the Richardson estimate falls below the
//! rounding level of its Simpson sums, so large integrands do not bisect
//! down to the depth limit chasing an unreachable absolute tolerance.
//!
//! [`integrate_split`] integrates piecewise-smooth functions by running the
//! adaptive rule separately on each piece between known kinks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            abs_tol: 1e-10,
            max_depth: 40,
        }
    }
}

impl QuadratureSettings {
    pub fn new(abs_tol: f64, max_depth: u32) -> Result<Self, QuadratureError> {
        let q = QuadratureSettings { abs_tol, max_depth };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(QuadratureError::InvalidSettings(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_depth < 1 {
            return Err(QuadratureError::InvalidSettings(
                "max_depth must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("adaptive bisection hit the depth limit: best estimate {estimate}, error bound {error_bound}")]
    DepthExceeded { estimate: f64, error_bound: f64 },
    #[error("integrand is not finite at {at}: {value}")]
    NonFinite { at: f64, value: f64 },
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid seams: {0}")]
    InvalidSeams(String),
    #[error("invalid quadrature settings: {0}")]
    InvalidSettings(String),
}

pub fn integrate<F>(
    mut h: F,
    a: f64,
    b: f64,
    q: &QuadratureSettings,
) -> Result<f64, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|s| Ok::<_, QuadratureError>(h(s)), a, b, q)
}

pub fn integrate_split<F>(
    mut h: F,
    a: f64,
    b: f64,
    seams: &[f64],
    q: &QuadratureSettings,
) -> Result<f64, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_split(|s| Ok::<_, QuadratureError>(h(s)), a, b, seams, q)
}

/// Like [`integrate`] for a fallible integrand; integrand errors pass through.
pub fn try_integrate<F, E>(h: F, a: f64, b: f64, q: &QuadratureSettings) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    try_integrate_split(h, a, b, &[], q)
}

/// Sums adaptive integrals over the pieces of `[a, b]` cut at `seams`.
///
/// Seams must be sorted and inside `[a, b]`; duplicates and seams on the
/// endpoints are allowed. Each piece receives a share of `abs_tol`
/// proportional to its length.
pub fn try_integrate_split<F, E>(
    mut h: F,
    a: f64,
    b: f64,
    seams: &[f64],
    q: &QuadratureSettings,
) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    q.validate()?;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(QuadratureError::InvalidInterval { a, b }.into());
    }
    if a == b {
        return Ok(0.0);
    }
    if seams.windows(2).any(|w| w[0] > w[1]) {
        return Err(QuadratureError::InvalidSeams("seams must be sorted".into()).into());
    }
    if let Some(&s) = seams.iter().find(|&&s| !(a <= s && s <= b)) {
        return Err(QuadratureError::InvalidSeams(format!("seam {s} outside [{a}, {b}]")).into());
    }

    let mut acc = Accumulator::default();
    let width = b - a;
    let mut lo = a;
    for &hi in seams.iter().chain(std::iter::once(&b)) {
        if hi > lo {
            let panels = ((MIN_PANELS as f64 * (hi - lo) / width).ceil() as usize).max(1);
            let step = (hi - lo) / panels as f64;
            for k in 0..panels {
                let pa = lo + k as f64 * step;
                let pb = if k + 1 == panels {
                    hi
                } else {
                    lo + (k + 1) as f64 * step
                };
                let tol = q.abs_tol * (pb - pa) / width;
                panel_start(&mut h, pa, pb, tol, q.max_depth, &mut acc)?;
            }
            lo = hi;
        }
    }
    acc.finish()
}

/// Initial panels across `[a, b]`; a single wide panel can pass the error
/// test by coincidence on oscillatory integrands.
const MIN_PANELS: usize = 8;

#[derive(Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
    depth_hit: bool,
    unresolved: f64,
}

impl Accumulator {
    // Neumaier summation keeps many small panel sums from drifting.
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn finish<E: From<QuadratureError>>(self) -> Result<f64, E> {
        let total = self.sum + self.comp;
        if self.depth_hit {
            return Err(QuadratureError::DepthExceeded {
                estimate: total,
                error_bound: self.unresolved,
            }
            .into());
        }
        Ok(total)
    }
}

fn eval_at<F, E>(h: &mut F, s: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    let v = h(s)?;
    if !v.is_finite() {
        return Err(QuadratureError::NonFinite { at: s, value: v }.into());
    }
    Ok(v)
}

fn panel_start<F, E>(
    h: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
    acc: &mut Accumulator,
) -> Result<(), E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    let fa = eval_at(h, a)?;
    let fb = eval_at(h, b)?;
    let m = 0.5 * (a + b);
    let fm = eval_at(h, m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(h, [a, m, b], [fa, fm, fb], whole, tol, max_depth, None, acc)
}

const ROUNDOFF_FACTOR: f64 = 64.0;

/// A child's estimate is expected near 1/32 of its parent's; one this many
/// times smaller comes from the fourth difference vanishing by chance.
const COINCIDENCE_RATIO: f64 = 2048.0;

#[allow(clippy::too_many_arguments)]
fn refine<F, E>(
    h: &mut F,
    [a, m, b]: [f64; 3],
    [fa, fm, fb]: [f64; 3],
    whole: f64,
    tol: f64,
    depth_left: u32,
    parent_err: Option<f64>,
    acc: &mut Accumulator,
) -> Result<(), E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval_at(h, lm)?;
    let frm = eval_at(h, rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let fine = left + right;
    let err = (fine - whole) / 15.0;
    // Differences below this are rounding noise in the Simpson sums.
    let noise = ROUNDOFF_FACTOR
        * f64::EPSILON
        * (b - a)
        * (fa.abs() + 4.0 * (flm.abs() + frm.abs()) + 2.0 * fm.abs() + fb.abs())
        / 12.0;
    // Stop when the panel can no longer be split in floating point.
    let degenerate = !(a < lm && lm < m && m < rm && rm < b);
    // Coarse and fine Simpson errors can cancel by coincidence, so the test
    // is only trusted below a parent whose estimate it is consistent with.
    let trusted = match parent_err {
        None => false,
        Some(pe) => !(pe.abs() > 2.0 * tol && err.abs() * COINCIDENCE_RATIO < pe.abs()),
    };
    let settled = err.abs() <= tol.max(noise) && trusted;
    if settled || degenerate {
        acc.add(fine + err);
        return Ok(());
    }
    if depth_left <= 1 {
        acc.depth_hit = true;
        acc.unresolved += err.abs();
        acc.add(fine + err);
        return Ok(());
    }
    refine(
        h,
        [a, lm, m],
        [fa, flm, fm],
        left,
        0.5 * tol,
        depth_left - 1,
        Some(err),
        acc,
    )?;
    refine(
        h,
        [m, rm, b],
        [fm, frm, fb],
        right,
        0.5 * tol,
        depth_left - 1,
        Some(err),
        acc,
    )
}
