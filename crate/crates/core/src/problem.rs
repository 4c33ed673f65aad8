use crate::asymptotics::{self, AsymptoticEstimate, Limit};
use crate::constants::{self, AsymptoticValue, LambdaConstants, LambdaInterval};
use crate::error::Result;
use crate::exprlang::{parse, Expression};
use crate::kernel::{validate_params, BvpParams};
use crate::quadrature::QuadratureSettings;
use crate::solver::{picard_solve, GridFunction, SolveOutcome, SolveSettings};
use crate::verifier::{verify, VerificationReport, VerifyTolerances};

/// A complete problem: parameters, weight `a(t)`, nonlinearity `f(u)`,
/// optional declared limits and numeric settings.
#[derive(Debug, Clone)]
pub struct BvpProblem {
    pub params: BvpParams,
    pub a: Expression,
    pub f: Expression,
    pub f0: Option<AsymptoticValue>,
    pub finf: Option<AsymptoticValue>,
    pub quad: QuadratureSettings,
    pub solve: SolveSettings,
}

impl BvpProblem {
    /// Parses `a` in `t` and `f` in `u`, with default settings.
    pub fn new(alpha: f64, eta: f64, a: &str, f: &str) -> Result<Self> {
        Ok(BvpProblem {
            params: validate_params(alpha, eta)?,
            a: parse(a, "t")?,
            f: parse(f, "u")?,
            f0: None,
            finf: None,
            quad: QuadratureSettings::default(),
            solve: SolveSettings::default(),
        })
    }

    pub fn with_limits(
        mut self,
        f0: Option<AsymptoticValue>,
        finf: Option<AsymptoticValue>,
    ) -> Self {
        self.f0 = f0;
        self.finf = finf;
        self
    }

    pub fn constants(&self) -> Result<LambdaConstants> {
        constants::compute_constants(&self.params, &self.a, &self.quad)
    }

    /// `(f0, finf)`, declared values taking precedence over estimates.
    pub fn limits(&self) -> Result<(AsymptoticEstimate, AsymptoticEstimate)> {
        Ok((
            asymptotics::resolve(&self.f, Limit::Zero, self.f0)?,
            asymptotics::resolve(&self.f, Limit::Infinity, self.finf)?,
        ))
    }

    pub fn interval(&self) -> Result<LambdaInterval> {
        let c = self.constants()?;
        let (f0, finf) = self.limits()?;
        Ok(constants::eigenvalue_interval(&c, f0.value, finf.value))
    }

    pub fn solve(&self, lambda: f64) -> Result<SolveOutcome> {
        picard_solve(
            &self.params,
            &self.a,
            &self.f,
            lambda,
            &self.solve,
            &self.quad,
        )
    }

    pub fn verify(&self, lambda: f64, u: &GridFunction) -> VerificationReport {
        verify(
            &self.params,
            &self.a,
            &self.f,
            lambda,
            u,
            &VerifyTolerances::default(),
        )
    }
}
