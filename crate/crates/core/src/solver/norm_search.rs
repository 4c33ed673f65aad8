//! Norm shooting: locate `rho` with `mu(rho) = 1`, where `mu(rho) v = A(rho v)`
//! for the normalized profile `v` at sup-norm `rho`.

use super::{error_run, Attempt, FixedPointProblem, GridFunction, Run, SolveStatus, Strategy};
use crate::error::{Error, Result};

const MAX_PROFILE_ITERS: usize = 500;
const MAX_ROOT_ITERS: usize = 100;
/// Largest sup-norm scanned.
const SCAN_TOP_DECADE: f64 = 6.0;
const SCAN_STEP_DECADES: f64 = 0.5;

struct Shooter<'p, 'a> {
    problem: &'p FixedPointProblem<'a>,
    /// Unit sup-norm profile, warm-started across evaluations.
    profile: GridFunction,
    applies: usize,
    history: Vec<f64>,
}

impl Shooter<'_, '_> {
    /// `mu(rho)`, updating the stored profile.
    fn mu(&mut self, rho: f64) -> Result<f64> {
        let tol = 0.1 * self.problem.settings.conv_tol;
        self.history.push(rho);
        let mut mu = 0.0;
        for _ in 0..MAX_PROFILE_ITERS {
            let scaled = self.profile.map_values(|v| rho * v);
            let w = self.problem.apply(&scaled)?;
            self.applies += 1;
            let m = w.sup_norm();
            if m == 0.0 {
                return Ok(0.0);
            }
            let next = w.map_values(|v| v / m);
            let change = next.distance(&self.profile);
            self.profile = next;
            mu = m / rho;
            if change <= tol {
                break;
            }
        }
        Ok(mu)
    }

    /// Illinois false position on `ln rho` for `mu - 1` over a sign change.
    fn refine(
        &mut self,
        (mut xa, mut fa): (f64, f64),
        (mut xb, mut fb): (f64, f64),
    ) -> Result<f64> {
        let tol = 0.1 * self.problem.settings.conv_tol;
        let mut side = 0i8;
        let mut best = if fa.abs() < fb.abs() { xa } else { xb };
        for _ in 0..MAX_ROOT_ITERS {
            let x = (xa * fb - xb * fa) / (fb - fa);
            let fx = self.mu(x.exp())? - 1.0;
            best = x;
            if fx.abs() <= tol || (xb - xa).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                break;
            }
            if (fx < 0.0) == (fa < 0.0) {
                xa = x;
                fa = fx;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                xb = x;
                fb = fx;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
        }
        Ok(best.exp())
    }

    fn candidate_run(&mut self, rho: f64) -> Result<Run> {
        let problem = self.problem;
        let u = self.profile.map_values(|v| rho * v);
        let au = problem.apply(&u)?;
        self.applies += 1;
        let residual = FixedPointProblem::residual(&u, &au);
        let norm = u.sup_norm();
        let (status, verification) = if residual > 10.0 * problem.settings.conv_tol {
            (SolveStatus::MaxIters, None)
        } else if norm <= problem.settings.trivial_threshold {
            (SolveStatus::Trivial, None)
        } else {
            let report = problem.verify(&u);
            let status = if report.passed {
                SolveStatus::Solved
            } else {
                SolveStatus::Unverified
            };
            (status, Some(report))
        };
        Ok(Run {
            attempt: Attempt {
                strategy: Strategy::NormShooting,
                scale: norm,
                status,
                iterations: self.applies,
                final_norm: norm,
                error: None,
            },
            candidate: Some(u),
            history: self.history.clone(),
            clamped: 0,
            fixed_point_residual: Some(residual),
            verification,
        })
    }
}

/// Scans `rho` upward on half-decade steps and refines every crossing of
/// `mu = 1` until one verifies. Returns one run per crossing tried, or a
/// single summary run when there is none.
pub(super) fn shoot(problem: &FixedPointProblem<'_>, first_error: &mut Option<Error>) -> Vec<Run> {
    let settings = problem.settings;
    let profile = match GridFunction::constant(settings.n, 1.0) {
        Ok(p) => p,
        Err(e) => {
            return vec![error_run(
                Strategy::NormShooting,
                1.0,
                0,
                vec![],
                0,
                e,
                first_error,
            )]
        }
    };
    let mut shooter = Shooter {
        problem,
        profile,
        applies: 0,
        history: Vec::new(),
    };

    let bottom = (settings.trivial_threshold * 10.0).log10();
    let steps = ((SCAN_TOP_DECADE - bottom) / SCAN_STEP_DECADES).floor() as usize;
    let mut runs = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    let (mut below, mut above) = (false, false);
    for k in 0..=steps {
        let rho = 10f64.powf(bottom + k as f64 * SCAN_STEP_DECADES);
        let phi = match shooter.mu(rho) {
            Ok(mu) => mu - 1.0,
            // overflow at large norms ends the scan
            Err(e) => {
                if prev.is_none() {
                    let history = shooter.history.clone();
                    runs.push(error_run(
                        Strategy::NormShooting,
                        rho,
                        shooter.applies,
                        history,
                        0,
                        e,
                        first_error,
                    ));
                }
                break;
            }
        };
        below |= phi < 0.0;
        above |= phi > 0.0;
        let x = rho.ln();
        if let Some((xp, fp)) = prev {
            if (fp < 0.0) != (phi < 0.0) || phi == 0.0 {
                let saved = shooter.profile.clone();
                let run = shooter
                    .refine((xp, fp), (x, phi))
                    .and_then(|root| shooter.candidate_run(root));
                match run {
                    Ok(run) => {
                        let solved = run.attempt.status == SolveStatus::Solved;
                        runs.push(run);
                        if solved {
                            return runs;
                        }
                    }
                    Err(e) => {
                        let history = shooter.history.clone();
                        runs.push(error_run(
                            Strategy::NormShooting,
                            rho,
                            shooter.applies,
                            history,
                            0,
                            e,
                            first_error,
                        ));
                    }
                }
                // resume the scan from the profile at this rho
                shooter.profile = saved;
            }
        }
        prev = Some((x, phi));
    }

    if runs.is_empty() {
        // no crossing: contraction at every norm means only the zero fixed
        // point was seen, expansion at every norm means growth without bound
        let status = match (below, above) {
            (true, false) => SolveStatus::Trivial,
            (false, true) => SolveStatus::Diverged,
            _ => SolveStatus::MaxIters,
        };
        let last = shooter.history.last().copied().unwrap_or(f64::NAN);
        runs.push(Run {
            attempt: Attempt {
                strategy: Strategy::NormShooting,
                scale: last,
                status,
                iterations: shooter.applies,
                final_norm: last,
                error: None,
            },
            candidate: None,
            history: shooter.history,
            clamped: 0,
            fixed_point_residual: None,
            verification: None,
        });
    }
    runs
}
