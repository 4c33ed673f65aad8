//! JSON problem files.
//!
//! ```json
//! {
//!   "alpha": 2,
//!   "eta": "1/3",
//!   "a": "1",
//!   "f": "5*u*exp(2*u)/(8+exp(u)+exp(2*u))",
//!   "f0": 0.5,
//!   "finf": "infinite",
//!   "lambda": 0.8,
//!   "grid_n": 200,
//!   "quad_abs_tol": 1e-10,
//!   "quad_max_depth": 40,
//!   "solve": { "damping": 0.5, "max_iters": 10000, "conv_tol": 1e-10,
//!              "trivial_threshold": 1e-6, "init_scales": [0.1, 1, 10] }
//! }
//! ```
//!
//! `alpha` and `eta` take a number or a constant expression. Only `alpha`,
//! `eta`, `a` and `f` are required; unknown keys are rejected.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::constants::AsymptoticValue;
use crate::exprlang::{self, ParseError};
use crate::problem::BvpProblem;
use crate::quadrature::QuadratureSettings;
use crate::solver::SolveSettings;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {source}")]
    Expression {
        field: &'static str,
        source: ParseError,
    },
    #[error("field `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    fn resolve(&self, field: &'static str) -> Result<f64, ConfigError> {
        match self {
            Scalar::Number(v) => Ok(*v),
            Scalar::Text(src) => {
                let e = exprlang::parse(src, "x")
                    .map_err(|source| ConfigError::Expression { field, source })?;
                if !e.is_constant() {
                    return Err(ConfigError::Invalid {
                        field,
                        message: "must be a constant expression".into(),
                    });
                }
                e.eval(0.0).map_err(|err| ConfigError::Invalid {
                    field,
                    message: err.to_string(),
                })
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveOverrides {
    pub damping: Option<f64>,
    pub max_iters: Option<usize>,
    pub conv_tol: Option<f64>,
    pub trivial_threshold: Option<f64>,
    pub init_scales: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub alpha: Scalar,
    pub eta: Scalar,
    pub a: String,
    pub f: String,
    #[serde(default)]
    pub f0: Option<AsymptoticValue>,
    #[serde(default)]
    pub finf: Option<AsymptoticValue>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub grid_n: Option<usize>,
    #[serde(default)]
    pub quad_abs_tol: Option<f64>,
    #[serde(default)]
    pub quad_max_depth: Option<u32>,
    #[serde(default)]
    pub solve: Option<SolveOverrides>,
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Builds the problem; any failure here is a configuration error.
    pub fn to_problem(&self) -> Result<BvpProblem, ConfigError> {
        let alpha = self.alpha.resolve("alpha")?;
        let eta = self.eta.resolve("eta")?;
        let params =
            crate::kernel::validate_params(alpha, eta).map_err(|e| ConfigError::Invalid {
                field: if matches!(e, crate::error::ParamError::OutOfRange { name: "eta", .. }) {
                    "eta"
                } else {
                    "alpha"
                },
                message: e.to_string(),
            })?;
        let a = exprlang::parse(&self.a, "t")
            .map_err(|source| ConfigError::Expression { field: "a", source })?;
        let f = exprlang::parse(&self.f, "u")
            .map_err(|source| ConfigError::Expression { field: "f", source })?;

        let mut quad = QuadratureSettings::default();
        if let Some(tol) = self.quad_abs_tol {
            quad.abs_tol = tol;
        }
        if let Some(depth) = self.quad_max_depth {
            quad.max_depth = depth;
        }
        quad.validate().map_err(|e| ConfigError::Invalid {
            field: "quad_abs_tol",
            message: e.to_string(),
        })?;

        let mut solve = SolveSettings::default();
        if let Some(n) = self.grid_n {
            solve.n = n;
        }
        if let Some(o) = &self.solve {
            if let Some(v) = o.damping {
                solve.damping = v;
            }
            if let Some(v) = o.max_iters {
                solve.max_iters = v;
            }
            if let Some(v) = o.conv_tol {
                solve.conv_tol = v;
            }
            if let Some(v) = o.trivial_threshold {
                solve.trivial_threshold = v;
            }
            if let Some(v) = &o.init_scales {
                solve.init_scales = v.clone();
            }
        }
        solve.validate().map_err(|e| ConfigError::Invalid {
            field: "solve",
            message: e.to_string(),
        })?;

        if let Some(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(ConfigError::Invalid {
                    field: "lambda",
                    message: format!("must be positive, got {l}"),
                });
            }
        }

        Ok(BvpProblem {
            params,
            a,
            f,
            f0: self.f0,
            finf: self.finf,
            quad,
            solve,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg =
            ProblemConfig::from_json(r#"{"alpha": 1, "eta": 0.5, "a": "1/5", "f": "u"}"#).unwrap();
        let p = cfg.to_problem().unwrap();
        assert_eq!(p.params.alpha(), 1.0);
        assert_eq!(p.solve.n, 200);
        assert!(p.f0.is_none());
    }

    #[test]
    fn expression_scalars_and_overrides() {
        let cfg = ProblemConfig::from_json(
            r#"{"alpha": "2", "eta": "1/3", "a": "1", "f": "u^2", "f0": "zero",
                "finf": "infinite", "grid_n": 64, "quad_abs_tol": 1e-9,
                "solve": {"damping": 0.25, "init_scales": [2]}}"#,
        )
        .unwrap();
        let p = cfg.to_problem().unwrap();
        assert_eq!(p.params.eta(), 1.0 / 3.0);
        assert_eq!(p.f0, Some(AsymptoticValue::Zero));
        assert_eq!(p.finf, Some(AsymptoticValue::Infinite));
        assert_eq!(p.solve.n, 64);
        assert_eq!(p.solve.damping, 0.25);
        assert_eq!(p.solve.init_scales, vec![2.0]);
        assert_eq!(p.quad.abs_tol, 1e-9);
    }

    #[test]
    fn rejects_unknown_keys() {
        let r =
            ProblemConfig::from_json(r#"{"alpha": 1, "eta": 0.5, "a": "1", "f": "u", "lamda": 2}"#);
        assert!(matches!(r, Err(ConfigError::Json(_))));
        let r = ProblemConfig::from_json(
            r#"{"alpha": 1, "eta": 0.5, "a": "1", "f": "u", "solve": {"dampng": 0.1}}"#,
        );
        assert!(r.is_err());
    }

    #[test]
    fn rejects_invalid_values() {
        let bad = [
            r#"{"alpha": 5, "eta": 0.5, "a": "1", "f": "u"}"#,
            r#"{"alpha": 1, "eta": "t", "a": "1", "f": "u"}"#,
            r#"{"alpha": 1, "eta": 0.5, "a": "u", "f": "u"}"#,
            r#"{"alpha": 1, "eta": 0.5, "a": "1", "f": "u+"}"#,
            r#"{"alpha": 1, "eta": 0.5, "a": "1", "f": "u", "grid_n": 15}"#,
            r#"{"alpha": 1, "eta": 0.5, "a": "1", "f": "u", "lambda": -1}"#,
            r#"{"alpha": 1, "eta": 0.5, "a": "1", "f": "u", "quad_abs_tol": 0}"#,
        ];
        for text in bad {
            let r = ProblemConfig::from_json(text).and_then(|c| c.to_problem());
            assert!(r.is_err(), "{text}");
        }
    }
}
