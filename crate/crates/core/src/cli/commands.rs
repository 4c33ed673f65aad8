use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::{eigenvalue_interval, AsymptoticValue, LambdaInterval};
use crate::error::{Error, Result};
use crate::kernel::{self, Branch, BvpParams};
use crate::problem::BvpProblem;
use crate::solver::{Attempt, GridFunction, SolveStatus, Strategy};
use crate::verifier::VerificationReport;

const LOAD_SAMPLES: usize = 1000;
const F_SAMPLE_RANGE: f64 = 10.0;
const WEIGHT_FLOOR: f64 = 1e-12;

/// Warnings about the sign hypotheses on `a` and `f`, found by sampling.
pub fn load_warnings(problem: &BvpProblem) -> Vec<String> {
    let mut warnings = Vec::new();
    let grid = |k: usize, top: f64| top * k as f64 / (LOAD_SAMPLES - 1) as f64;

    let mut a_negative = None;
    let mut a_error = None;
    for k in 0..LOAD_SAMPLES {
        let t = grid(k, 1.0);
        match problem.a.eval(t) {
            Ok(v) if v < 0.0 && a_negative.is_none() => a_negative = Some((t, v)),
            Err(e) if a_error.is_none() => a_error = Some(e),
            _ => {}
        }
    }
    if let Some((t, v)) = a_negative {
        warnings.push(format!(
            "a(t) is negative at t = {t} (a = {v}); the weight must satisfy a in C([0,1],[0,inf))"
        ));
    }
    if let Some(e) = a_error {
        warnings.push(format!(
            "a(t) could not be evaluated everywhere on [0,1]: {e}"
        ));
    }

    let eta = problem.params.eta();
    let max_head = (0..LOAD_SAMPLES)
        .filter_map(|k| problem.a.eval(grid(k, eta)).ok())
        .fold(f64::NEG_INFINITY, f64::max);
    if max_head < WEIGHT_FLOOR {
        warnings.push(format!(
            "a(t) vanishes on [0, eta] (max sampled value {max_head}); the weight must be positive somewhere on [0, eta]"
        ));
    }

    let mut f_negative = None;
    let mut f_error = None;
    for k in 0..LOAD_SAMPLES {
        let u = grid(k, F_SAMPLE_RANGE);
        match problem.f.eval(u) {
            Ok(v) if v < 0.0 && f_negative.is_none() => f_negative = Some((u, v)),
            Err(e) if f_error.is_none() => f_error = Some(e),
            _ => {}
        }
    }
    if let Some((u, v)) = f_negative {
        warnings.push(format!(
            "f(u) is negative at u = {u} (f = {v}); the nonlinearity must satisfy f in C([0,inf),[0,inf))"
        ));
    }
    if let Some(e) = f_error {
        warnings.push(format!(
            "f(u) could not be evaluated everywhere on [0, {F_SAMPLE_RANGE}]: {e}"
        ));
    }
    warnings
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalReport {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gamma: f64,
    pub f0: AsymptoticValue,
    pub finf: AsymptoticValue,
    pub interval: LambdaInterval,
    pub warnings: Vec<String>,
}

pub fn interval_report(problem: &BvpProblem) -> Result<IntervalReport> {
    let mut warnings = load_warnings(problem);
    let c = problem.constants()?;
    let (f0, finf) = problem.limits()?;
    for (name, est) in [("f0", &f0), ("finf", &finf)] {
        if !est.confident {
            warnings.push(format!(
                "{name} estimate {} is not confident ({}); declare `{name}` in the config to override",
                est.value,
                est.notes.join("; ")
            ));
        }
    }
    let interval = eigenvalue_interval(&c, f0.value, finf.value);
    if !interval.conclusive {
        warnings.push(if c.lambda2 > 0.0 {
            "neither growth condition holds; no lambda interval is guaranteed".to_string()
        } else {
            "Lambda2 = 0: the weight vanishes on [0, eta]; no lambda interval is guaranteed"
                .to_string()
        });
    }
    Ok(IntervalReport {
        lambda1: c.lambda1,
        lambda2: c.lambda2,
        gamma: problem.params.gamma(),
        f0: f0.value,
        finf: finf.value,
        interval,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub lambda: f64,
    pub status: SolveStatus,
    pub strategy: Strategy,
    pub iterations: usize,
    pub clamped: usize,
    pub norm: Option<f64>,
    pub fixed_point_residual: Option<f64>,
    pub verification: Option<VerificationReport>,
    pub history: Vec<f64>,
    pub attempts: Vec<Attempt>,
    pub warnings: Vec<String>,
}

pub fn solve_report(
    problem: &BvpProblem,
    lambda: f64,
) -> Result<(SolveReport, Option<GridFunction>)> {
    let warnings = load_warnings(problem);
    let outcome = problem.solve(lambda)?;
    let report = SolveReport {
        lambda,
        status: outcome.status,
        strategy: outcome.strategy,
        iterations: outcome.iterations,
        clamped: outcome.clamped,
        norm: outcome.solution.as_ref().map(GridFunction::sup_norm),
        fixed_point_residual: outcome.fixed_point_residual,
        verification: outcome.verification,
        history: outcome.history,
        attempts: outcome.attempts,
        warnings,
    };
    Ok((report, outcome.solution))
}

pub(crate) fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        ryu::Buffer::new().format_finite(v).to_string()
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// `t,u` header and one row per node.
pub fn solution_csv(u: &GridFunction) -> String {
    let mut out = String::from("t,u\n");
    for (t, v) in u.nodes().zip(u.values()) {
        out.push_str(&fmt_f64(t));
        out.push(',');
        out.push_str(&fmt_f64(*v));
        out.push('\n');
    }
    out
}

/// `lo:hi:steps` with `steps` evenly spaced values from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaGrid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl LambdaGrid {
    pub fn parse(spec: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("lambda grid must be lo:hi:steps, got `{spec}`"));
        };
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad lower bound `{lo}`"))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad upper bound `{hi}`"))?;
        let steps: usize = steps
            .trim()
            .parse()
            .map_err(|_| format!("bad step count `{steps}`"))?;
        if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(format!("need 0 < lo <= hi, got {lo}:{hi}"));
        }
        if steps == 0 {
            return Err("step count must be positive".into());
        }
        Ok(LambdaGrid { lo, hi, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * k as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub status: SolveStatus,
    pub norm: Option<f64>,
    pub ode_residual: Option<f64>,
    pub in_predicted_interval: bool,
}

impl SweepRow {
    fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        format!(
            "{},{:?},{},{},{}\n",
            fmt_f64(self.lambda),
            self.status,
            opt(self.norm),
            opt(self.ode_residual),
            self.in_predicted_interval
        )
    }
}

/// Solves at every grid value. Failures are recorded per row.
pub fn sweep(problem: &BvpProblem, grid: &LambdaGrid) -> (Vec<SweepRow>, Vec<String>) {
    let mut warnings = load_warnings(problem);
    let interval = match problem.interval() {
        Ok(iv) => iv,
        Err(e) => {
            warnings.push(format!("could not compute the predicted interval: {e}"));
            LambdaInterval::inconclusive()
        }
    };
    let rows = grid
        .values()
        .into_iter()
        .map(|lambda| {
            let in_predicted_interval = interval.contains(lambda);
            match problem.solve(lambda) {
                Ok(outcome) => {
                    let norm = outcome
                        .solution
                        .as_ref()
                        .map(GridFunction::sup_norm)
                        .or_else(|| outcome.history.last().copied());
                    SweepRow {
                        lambda,
                        status: outcome.status,
                        norm,
                        ode_residual: outcome.verification.map(|v| v.ode_residual_sup),
                        in_predicted_interval,
                    }
                }
                Err(e) => {
                    warnings.push(format!("lambda = {lambda}: {e}"));
                    SweepRow {
                        lambda,
                        status: SolveStatus::Error,
                        norm: None,
                        ode_residual: None,
                        in_predicted_interval,
                    }
                }
            }
        })
        .collect();
    (rows, warnings)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("lambda,status,norm,ode_residual,in_predicted_interval\n");
    for row in rows {
        out.push_str(&row.to_csv());
    }
    out
}

pub const KERNEL_CHECK_TOLERANCE: f64 = 1e-9;
const KERNEL_CHECK_SEED: u64 = 0x6b65_726e_656c;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCheckReport {
    pub alpha: f64,
    pub eta: f64,
    pub gamma: f64,
    pub samples: usize,
    pub points_checked: usize,
    /// `max(0, -G)`
    pub max_negativity: f64,
    /// `max(0, G - g)`
    pub max_envelope_excess: f64,
    /// `max(0, gamma g - G)` over `t <= eta`
    pub max_cone_deficit: f64,
    /// Largest disagreement of neighbouring branch formulas on `s = t`, `s = eta`.
    pub max_seam_mismatch: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn kernel_check(p: &BvpParams, samples: usize) -> KernelCheckReport {
    let samples = samples.max(2);
    let gamma = p.gamma();
    let mut r = KernelCheckReport {
        alpha: p.alpha(),
        eta: p.eta(),
        gamma,
        samples,
        points_checked: 0,
        max_negativity: 0.0,
        max_envelope_excess: 0.0,
        max_cone_deficit: 0.0,
        max_seam_mismatch: 0.0,
        tolerance: KERNEL_CHECK_TOLERANCE,
        passed: false,
    };
    let check = |t: f64, s: f64, r: &mut KernelCheckReport| {
        let g = kernel::green(p, t, s);
        let env = kernel::g_envelope(p, s);
        r.max_negativity = r.max_negativity.max(-g);
        r.max_envelope_excess = r.max_envelope_excess.max(g - env);
        if t <= p.eta() {
            r.max_cone_deficit = r.max_cone_deficit.max(gamma * env - g);
        }
        r.points_checked += 1;
    };
    let step = 1.0 / (samples - 1) as f64;
    for i in 0..samples {
        let t = i as f64 * step;
        for j in 0..samples {
            check(t, j as f64 * step, &mut r);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(KERNEL_CHECK_SEED);
    for _ in 0..samples {
        let t: f64 = rng.random_range(0.0..=1.0);
        let s: f64 = rng.random_range(0.0..=1.0);
        check(t, s, &mut r);
    }
    for i in 0..samples {
        let t = i as f64 * step;
        r.max_seam_mismatch = r.max_seam_mismatch.max(seam_mismatch(p, t));
    }
    r.max_negativity = r.max_negativity.max(0.0);
    r.max_envelope_excess = r.max_envelope_excess.max(0.0);
    r.max_cone_deficit = r.max_cone_deficit.max(0.0);
    r.passed = [
        r.max_negativity,
        r.max_envelope_excess,
        r.max_cone_deficit,
        r.max_seam_mismatch,
    ]
    .iter()
    .all(|&v| v <= KERNEL_CHECK_TOLERANCE);
    r
}

/// Both branch formulas adjacent to each seam through `(t, .)`, evaluated on it.
pub fn seam_mismatch(p: &BvpParams, t: f64) -> f64 {
    let eta = p.eta();
    let pair = |a: Branch, b: Branch, s: f64| {
        (kernel::green_branch(p, a, t, s) - kernel::green_branch(p, b, t, s)).abs()
    };
    let on_diagonal = if t <= eta {
        pair(Branch::BelowBoth, Branch::BetweenTEta, t)
    } else {
        pair(Branch::BetweenEtaT, Branch::AboveBoth, t)
    };
    let on_eta = if t >= eta {
        pair(Branch::BelowBoth, Branch::BetweenEtaT, eta)
    } else {
        pair(Branch::BetweenTEta, Branch::AboveBoth, eta)
    };
    on_diagonal.max(on_eta)
}

pub(crate) fn eval_exit_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Eval(_) | Error::Quadrature(_) | Error::NoSamples(_)
    )
}
