//! Green's function of `u'' + y = 0`, `u'(0) = 0`, `u(1) = alpha * int_0^eta u`.
//!
//! The kernel is piecewise quadratic in `s` with seams on the lines `s = t`
//! and `s = eta`. It is nonnegative and dominated by the envelope
//! `g(s) = (1 - s) / (1 - alpha * eta)`, and on `[0, eta]` it is bounded
//! below by `gamma * g(s)` with `gamma = 1 - eta`.

use serde::Serialize;

use crate::error::ParamError;

/// Validated boundary-condition parameters.
///
/// Holds `0 < eta < 1` and `0 < alpha < 1 / eta`, so `1 - alpha * eta > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BvpParams {
    alpha: f64,
    eta: f64,
}

impl BvpParams {
    pub fn new(alpha: f64, eta: f64) -> Result<Self, ParamError> {
        validate_params(alpha, eta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `1 - alpha * eta`, strictly positive.
    pub fn defect(&self) -> f64 {
        1.0 - self.alpha * self.eta
    }

    pub fn green(&self, t: f64, s: f64) -> f64 {
        green(self, t, s)
    }

    pub fn envelope(&self, s: f64) -> f64 {
        g_envelope(self, s)
    }

    pub fn gamma(&self) -> f64 {
        gamma(self)
    }
}

/// Checks the parameter ranges with exact (strict) comparisons.
pub fn validate_params(alpha: f64, eta: f64) -> Result<BvpParams, ParamError> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(ParamError::OutOfRange {
            name: "eta",
            value: eta,
            bound: "0 < eta < 1".to_string(),
        });
    }
    let alpha_max = 1.0 / eta;
    // alpha * eta < 1 is the condition that matters; test it directly as well
    // since 1/eta rounds.
    if !(alpha > 0.0 && alpha < alpha_max && 1.0 - alpha * eta > 0.0) {
        return Err(ParamError::OutOfRange {
            name: "alpha",
            value: alpha,
            bound: format!("0 < alpha < 1/eta = {alpha_max}"),
        });
    }
    Ok(BvpParams { alpha, eta })
}

/// Which of the four closed regions of the kernel a point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `s <= min(eta, t)`
    BelowBoth,
    /// `t <= s <= eta`
    BetweenTEta,
    /// `eta <= s <= t`
    BetweenEtaT,
    /// `max(eta, t) <= s`
    AboveBoth,
}

/// First matching branch, in the listed order, using closed conditions.
pub fn branch_of(p: &BvpParams, t: f64, s: f64) -> Branch {
    let eta = p.eta;
    if s <= eta.min(t) {
        Branch::BelowBoth
    } else if t <= s && s <= eta {
        Branch::BetweenTEta
    } else if eta <= s && s <= t {
        Branch::BetweenEtaT
    } else {
        Branch::AboveBoth
    }
}

/// Evaluates a specific branch formula regardless of whether `(t, s)` lies in
/// its region. Used to check that neighbouring branches agree on the seams.
pub fn green_branch(p: &BvpParams, branch: Branch, t: f64, s: f64) -> f64 {
    let (alpha, eta) = (p.alpha, p.eta);
    let d = p.defect();
    let num = match branch {
        Branch::BelowBoth => 2.0 * (1.0 - s) - alpha * (eta - s) * (eta - s) - 2.0 * d * (t - s),
        Branch::BetweenTEta => 2.0 * (1.0 - s) - alpha * (eta - s) * (eta - s),
        Branch::BetweenEtaT => 2.0 * (1.0 - s) - 2.0 * d * (t - s),
        Branch::AboveBoth => 2.0 * (1.0 - s),
    };
    num / (2.0 * d)
}

/// `G(t, s)` for `t, s` in `[0, 1]`.
pub fn green(p: &BvpParams, t: f64, s: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s));
    green_branch(p, branch_of(p, t, s), t, s)
}

/// `g(s) = (1 - s) / (1 - alpha * eta)`.
pub fn g_envelope(p: &BvpParams, s: f64) -> f64 {
    (1.0 - s) / p.defect()
}

/// Cone constant `1 - eta`.
pub fn gamma(p: &BvpParams) -> f64 {
    1.0 - p.eta
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64, eta: f64) -> BvpParams {
        validate_params(alpha, eta).unwrap()
    }

    #[test]
    fn accepts_valid_ranges() {
        assert!(validate_params(2.0, 0.25).is_ok());
        assert!(validate_params(1.0, 0.5).is_ok());
        assert!(validate_params(2.0, 1.0 / 3.0).is_ok());
    }

    #[test]
    fn rejects_boundary_and_outside() {
        let err = validate_params(4.0, 0.25).unwrap_err();
        assert!(err.to_string().contains("alpha"), "{err}");
        assert!(validate_params(0.0, 0.5).is_err());
        assert!(validate_params(-1.0, 0.5).is_err());
        assert!(validate_params(1.0, 0.0).is_err());
        assert!(validate_params(1.0, 1.0).is_err());
        assert!(validate_params(1.0, f64::NAN).is_err());
        assert!(validate_params(f64::NAN, 0.5).is_err());
        let err = validate_params(0.5, 1.5).unwrap_err();
        assert!(err.to_string().contains("0 < eta < 1"), "{err}");
    }

    #[test]
    fn hand_evaluated_values() {
        assert!((green(&p(2.0, 0.25), 0.0, 0.0) - 1.875).abs() < 1e-15);
        assert!((green(&p(1.0, 0.5), 1.0, 0.5) - 0.5).abs() < 1e-15);
        for &(a, e) in &[(2.0, 0.25), (1.0, 0.5), (0.3, 0.9)] {
            let pp = p(a, e);
            for i in 0..=10 {
                let t = i as f64 / 10.0;
                assert_eq!(green(&pp, t, 1.0), 0.0);
            }
        }
    }

    #[test]
    fn envelope_and_gamma() {
        assert!((g_envelope(&p(2.0, 0.25), 0.0) - 2.0).abs() < 1e-15);
        assert_eq!(g_envelope(&p(2.0, 0.25), 1.0), 0.0);
        assert!((g_envelope(&p(1.0, 0.5), 0.5) - 1.0).abs() < 1e-15);
        assert!((gamma(&p(2.0, 1.0 / 3.0)) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(gamma(&p(1.0, 0.5)), 0.5);
        assert_eq!(gamma(&p(2.0, 0.25)), 0.75);
    }

    #[test]
    fn gamma_ignores_alpha() {
        let a = gamma(&p(0.1, 0.4));
        let b = gamma(&p(2.4, 0.4));
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn branches_agree_on_seams() {
        let pp = p(1.7, 0.35);
        for i in 0..=50 {
            let t = i as f64 / 50.0;
            // s = t
            let s = t;
            if s <= pp.eta() {
                let l = green_branch(&pp, Branch::BelowBoth, t, s);
                let r = green_branch(&pp, Branch::BetweenTEta, t, s);
                assert!((l - r).abs() < 1e-12);
            } else {
                let l = green_branch(&pp, Branch::BetweenEtaT, t, s);
                let r = green_branch(&pp, Branch::AboveBoth, t, s);
                assert!((l - r).abs() < 1e-12);
            }
            // s = eta
            let s = pp.eta();
            if t >= s {
                let l = green_branch(&pp, Branch::BelowBoth, t, s);
                let r = green_branch(&pp, Branch::BetweenEtaT, t, s);
                assert!((l - r).abs() < 1e-12);
            } else {
                let l = green_branch(&pp, Branch::BetweenTEta, t, s);
                let r = green_branch(&pp, Branch::AboveBoth, t, s);
                assert!((l - r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn continuous_across_seams() {
        let delta = 1e-8;
        for &(a, e) in &[(2.0, 0.25), (1.0, 0.5), (2.9, 1.0 / 3.0)] {
            let pp = p(a, e);
            for i in 1..20 {
                let t = i as f64 / 20.0;
                for x in [t, pp.eta()] {
                    let jump = (green(&pp, t, x + delta) - green(&pp, t, x - delta)).abs();
                    assert!(jump < 1e-6, "t={t} x={x} jump={jump}");
                }
            }
        }
    }
}
