//! Fixed points of `A_lambda u = lambda * int G(., s) a(s) f(u(s)) ds` on the
//! cone of nonnegative grid functions.
//!
//! [`picard_solve`] first runs damped Picard iteration from constant starts
//! `u0 = c` for every `c` in `init_scales`. Picard iteration only finds
//! attracting fixed points; when growth is superlinear-type the positive
//! fixed point repels it and iterates collapse to zero or blow up. In that
//! case the search switches to norm shooting: for a fixed sup-norm `rho` the
//! normalized iteration `v <- rho A(v) / ||A(v)||` converges to a profile
//! with `A(v) = mu(rho) v`, and a root of `mu(rho) = 1` in `log rho` is a
//! fixed point of `A`. Every candidate, from either route, has to pass the
//! independent verifier before it is reported as solved.

mod grid;
mod norm_search;
mod operator;

use serde::Serialize;

pub use grid::{GridFunction, MIN_INTERVALS};
pub use operator::{apply_operator, cone_membership, ConeCheck};

use crate::error::{Error, Result};
use crate::exprlang::Expression;
use crate::kernel::BvpParams;
use crate::quadrature::QuadratureSettings;
use crate::verifier::{verify, VerificationReport, VerifyTolerances};

/// Iterates above this sup-norm count as diverged.
pub const DIVERGENCE_NORM: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveSettings {
    /// Damping `theta` in `(0, 1]`.
    pub damping: f64,
    pub max_iters: usize,
    /// Relative fixed-point residual `||A u - u|| / ||u||` accepted as converged.
    pub conv_tol: f64,
    /// Converged fixed points with a smaller sup-norm are the trivial solution.
    pub trivial_threshold: f64,
    pub init_scales: Vec<f64>,
    /// Grid intervals.
    pub n: usize,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings {
            damping: 0.5,
            max_iters: 10_000,
            conv_tol: 1e-10,
            trivial_threshold: 1e-6,
            init_scales: vec![0.1, 1.0, 10.0],
            n: 200,
        }
    }
}

impl SolveSettings {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Settings(msg));
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return bad(format!("damping must lie in (0, 1], got {}", self.damping));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive".into());
        }
        if !(self.conv_tol > 0.0 && self.conv_tol < 1.0) {
            return bad(format!(
                "conv_tol must lie in (0, 1), got {}",
                self.conv_tol
            ));
        }
        if !(self.trivial_threshold > 0.0 && self.trivial_threshold.is_finite()) {
            return bad("trivial_threshold must be positive".into());
        }
        if self.init_scales.is_empty()
            || self
                .init_scales
                .iter()
                .any(|c| !(*c > 0.0 && c.is_finite()))
        {
            return bad("init_scales must be a nonempty list of positive numbers".into());
        }
        if self.n < MIN_INTERVALS || !self.n.is_multiple_of(2) {
            return bad(format!(
                "grid intervals must be even and >= {MIN_INTERVALS}, got {}",
                self.n
            ));
        }
        Ok(())
    }
}

/// Ordered from worst to best; the best attempt is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SolveStatus {
    /// The attempt stopped on an evaluation or quadrature error.
    Error,
    Diverged,
    MaxIters,
    Trivial,
    /// Converged to a nontrivial fixed point that failed verification.
    Unverified,
    Solved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    DampedPicard,
    NormShooting,
}

/// Summary of one search attempt.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attempt {
    pub strategy: Strategy,
    /// Initial constant for Picard, sup-norm of the candidate for shooting.
    pub scale: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub final_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub strategy: Strategy,
    /// Present exactly when `status == Solved`.
    pub solution: Option<GridFunction>,
    /// Operator applications in the reported attempt.
    pub iterations: usize,
    /// Sup-norms of the iterates of the reported attempt.
    pub history: Vec<f64>,
    /// Node values clamped to zero in the reported attempt.
    pub clamped: usize,
    /// `||A u - u|| / ||u||` of the reported candidate, when there is one.
    pub fixed_point_residual: Option<f64>,
    pub verification: Option<VerificationReport>,
    pub attempts: Vec<Attempt>,
}

/// Borrowed problem data for one `lambda`.
pub(crate) struct FixedPointProblem<'a> {
    pub params: &'a BvpParams,
    pub a: &'a Expression,
    pub f: &'a Expression,
    pub lambda: f64,
    pub quad: &'a QuadratureSettings,
    pub settings: &'a SolveSettings,
}

impl FixedPointProblem<'_> {
    pub(crate) fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        apply_operator(self.params, self.a, self.f, self.lambda, u, self.quad)
    }

    pub(crate) fn verify(&self, u: &GridFunction) -> VerificationReport {
        verify(
            self.params,
            self.a,
            self.f,
            self.lambda,
            u,
            &VerifyTolerances::default(),
        )
    }

    /// Relative fixed-point residual, given `A u` already computed.
    pub(crate) fn residual(u: &GridFunction, au: &GridFunction) -> f64 {
        u.distance(au) / u.sup_norm().max(f64::MIN_POSITIVE)
    }
}

/// Full record of one attempt, before it is ranked.
pub(crate) struct Run {
    pub attempt: Attempt,
    pub candidate: Option<GridFunction>,
    pub history: Vec<f64>,
    pub clamped: usize,
    pub fixed_point_residual: Option<f64>,
    pub verification: Option<VerificationReport>,
}

impl Run {
    fn into_outcome(self, attempts: Vec<Attempt>) -> SolveOutcome {
        let solved = self.attempt.status == SolveStatus::Solved;
        SolveOutcome {
            status: self.attempt.status,
            strategy: self.attempt.strategy,
            solution: if solved { self.candidate } else { None },
            iterations: self.attempt.iterations,
            history: self.history,
            clamped: self.clamped,
            fixed_point_residual: self.fixed_point_residual,
            verification: self.verification,
            attempts,
        }
    }
}

/// Searches for a verified positive fixed point of `A_lambda`.
///
/// Evaluation failures end the attempt they occur in; they are returned as
/// an error only if every attempt failed that way.
pub fn picard_solve(
    p: &BvpParams,
    a: &Expression,
    f: &Expression,
    lambda: f64,
    settings: &SolveSettings,
    q: &QuadratureSettings,
) -> Result<SolveOutcome> {
    settings.validate()?;
    q.validate()?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Settings(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let problem = FixedPointProblem {
        params: p,
        a,
        f,
        lambda,
        quad: q,
        settings,
    };

    let mut runs: Vec<Run> = Vec::new();
    let mut first_error: Option<Error> = None;
    for &scale in &settings.init_scales {
        let run = damped_picard(&problem, scale, &mut first_error);
        let solved = run.attempt.status == SolveStatus::Solved;
        runs.push(run);
        if solved {
            return Ok(finish(runs));
        }
    }
    for run in norm_search::shoot(&problem, &mut first_error) {
        let solved = run.attempt.status == SolveStatus::Solved;
        runs.push(run);
        if solved {
            break;
        }
    }
    if runs.iter().all(|r| r.attempt.status == SolveStatus::Error) {
        if let Some(e) = first_error {
            return Err(e);
        }
    }
    Ok(finish(runs))
}

fn finish(runs: Vec<Run>) -> SolveOutcome {
    let attempts: Vec<Attempt> = runs.iter().map(|r| r.attempt.clone()).collect();
    // best status wins; the earliest attempt among equals
    let best = runs
        .into_iter()
        .rev()
        .max_by_key(|r| r.attempt.status)
        .expect("at least one attempt");
    best.into_outcome(attempts)
}

fn error_run(
    strategy: Strategy,
    scale: f64,
    iterations: usize,
    history: Vec<f64>,
    clamped: usize,
    err: Error,
    first_error: &mut Option<Error>,
) -> Run {
    let run = Run {
        attempt: Attempt {
            strategy,
            scale,
            status: SolveStatus::Error,
            iterations,
            final_norm: history.last().copied().unwrap_or(f64::NAN),
            error: Some(err.to_string()),
        },
        candidate: None,
        history,
        clamped,
        fixed_point_residual: None,
        verification: None,
    };
    first_error.get_or_insert(err);
    run
}

fn damped_picard(
    problem: &FixedPointProblem<'_>,
    scale: f64,
    first_error: &mut Option<Error>,
) -> Run {
    let s = problem.settings;
    let theta = s.damping;
    let mut u = match GridFunction::constant(s.n, scale) {
        Ok(u) => u,
        Err(e) => {
            return error_run(Strategy::DampedPicard, scale, 0, vec![], 0, e, first_error);
        }
    };
    let mut history = vec![u.sup_norm()];
    let mut clamped = 0usize;
    let mut iterations = 0usize;

    let finish_run =
        |status, iterations, history: Vec<f64>, clamped, candidate, residual, verification| Run {
            attempt: Attempt {
                strategy: Strategy::DampedPicard,
                scale,
                status,
                iterations,
                final_norm: *history.last().unwrap(),
                error: None,
            },
            candidate,
            history,
            clamped,
            fixed_point_residual: residual,
            verification,
        };

    while iterations < s.max_iters {
        let au = match problem.apply(&u) {
            Ok(v) => v,
            Err(e) => {
                return error_run(
                    Strategy::DampedPicard,
                    scale,
                    iterations,
                    history,
                    clamped,
                    e,
                    first_error,
                );
            }
        };
        iterations += 1;
        let norm = u.sup_norm();
        if au.sup_norm() == 0.0 {
            history.push(0.0);
            return finish_run(
                SolveStatus::Trivial,
                iterations,
                history,
                clamped,
                None,
                None,
                None,
            );
        }
        let residual = FixedPointProblem::residual(&u, &au);
        if residual <= s.conv_tol {
            if norm <= s.trivial_threshold {
                return finish_run(
                    SolveStatus::Trivial,
                    iterations,
                    history,
                    clamped,
                    None,
                    Some(residual),
                    None,
                );
            }
            let report = problem.verify(&u);
            let status = if report.passed {
                SolveStatus::Solved
            } else {
                SolveStatus::Unverified
            };
            return finish_run(
                status,
                iterations,
                history,
                clamped,
                Some(u),
                Some(residual),
                Some(report),
            );
        }
        let next: Vec<f64> = u
            .values()
            .iter()
            .zip(au.values())
            .map(|(&x, &y)| {
                let v = (1.0 - theta) * x + theta * y;
                if v < 0.0 {
                    clamped += 1;
                    0.0
                } else {
                    v
                }
            })
            .collect();
        u = GridFunction::from_raw(next);
        let next_norm = u.sup_norm();
        history.push(next_norm);
        if !next_norm.is_finite() || next_norm > DIVERGENCE_NORM {
            return finish_run(
                SolveStatus::Diverged,
                iterations,
                history,
                clamped,
                None,
                None,
                None,
            );
        }
        if next_norm <= s.trivial_threshold {
            // collapsing onto the zero solution
            return finish_run(
                SolveStatus::Trivial,
                iterations,
                history,
                clamped,
                None,
                None,
                None,
            );
        }
    }
    finish_run(
        SolveStatus::MaxIters,
        iterations,
        history,
        clamped,
        None,
        None,
        None,
    )
}
