use std::collections::HashMap;

use serde::Serialize;

use super::grid::GridFunction;
use crate::error::{Error, Result};
use crate::exprlang::Expression;
use crate::kernel::{green, BvpParams};
use crate::quadrature::{try_integrate_split, QuadratureSettings};

/// `(A u)(t_i) = lambda * int_0^1 G(t_i, s) a(s) f(u~(s)) ds` at every node,
/// where `u~` is the piecewise-linear interpolant of `u`.
///
/// The integrand has kinks at `s = t_i`, at `s = eta` and (through `u~`) at
/// every grid node, so all of those are passed as quadrature seams. The
/// factor `a(s) f(u~(s))` does not depend on `t_i` and is cached by abscissa.
pub fn apply_operator(
    p: &BvpParams,
    a: &Expression,
    f: &Expression,
    lambda: f64,
    u: &GridFunction,
    q: &QuadratureSettings,
) -> Result<GridFunction> {
    let seams = seams_for(u, p.eta());
    let mut cache: HashMap<u64, f64> = HashMap::with_capacity(8 * u.n());
    let mut source = |s: f64| -> Result<f64> {
        if let Some(&y) = cache.get(&s.to_bits()) {
            return Ok(y);
        }
        let y = a.eval(s)? * f.eval(u.interpolate(s))?;
        cache.insert(s.to_bits(), y);
        Ok(y)
    };
    let mut out = Vec::with_capacity(u.n() + 1);
    for t in u.nodes() {
        let integral = try_integrate_split::<_, Error>(
            |s| Ok(green(p, t, s) * source(s)?),
            0.0,
            1.0,
            &seams,
            q,
        )?;
        out.push(lambda * integral);
    }
    GridFunction::new(out)
}

/// Interior grid nodes plus `eta`, sorted.
fn seams_for(u: &GridFunction, eta: f64) -> Vec<f64> {
    let mut seams: Vec<f64> = (1..u.n()).map(|i| u.node(i)).collect();
    let at = seams.partition_point(|&s| s < eta);
    if seams.get(at) != Some(&eta) {
        seams.insert(at, eta);
    }
    seams
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeCheck {
    pub member: bool,
    /// `min_{t_i <= eta} u_i - gamma * ||u||`, lowered to `min_i u_i` when
    /// that is negative. Nonnegative exactly for members.
    pub margin: f64,
}

/// Discrete membership in `{u >= 0 : min_{[0, eta]} u >= gamma ||u||}`.
pub fn cone_membership(u: &GridFunction, gamma: f64, eta: f64) -> ConeCheck {
    let values = u.values();
    let norm = u.sup_norm();
    let min_head = u
        .nodes()
        .zip(values)
        .filter(|&(t, _)| t <= eta)
        .fold(f64::INFINITY, |m, (_, &v)| m.min(v));
    let min_all = values.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let mut margin = min_head - gamma * norm;
    if min_all < 0.0 {
        margin = margin.min(min_all);
    }
    ConeCheck {
        member: margin >= 0.0,
        margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprlang::parse;
    use crate::kernel::validate_params;

    fn e(src: &str, var: &str) -> Expression {
        parse(src, var).unwrap()
    }

    #[test]
    fn zero_nonlinearity_gives_zero() {
        let p = validate_params(1.0, 0.5).unwrap();
        let u = GridFunction::from_fn(16, |t| 1.0 + t).unwrap();
        let v = apply_operator(
            &p,
            &e("1", "t"),
            &e("0*u", "u"),
            3.0,
            &u,
            &Default::default(),
        )
        .unwrap();
        assert!(v.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn constant_source_closed_form() {
        // u'' + 1 = 0, u'(0) = 0, u(1) = int_0^{1/2} u  =>  u = 23/24 - t^2/2
        let p = validate_params(1.0, 0.5).unwrap();
        let u = GridFunction::constant(40, 0.3).unwrap();
        let v = apply_operator(
            &p,
            &e("1", "t"),
            &e("u*0+1", "u"),
            1.0,
            &u,
            &Default::default(),
        )
        .unwrap();
        assert!((v.values()[0] - 23.0 / 24.0).abs() < 1e-10);
        for (t, &x) in v.nodes().zip(v.values()) {
            assert!((x - (23.0 / 24.0 - t * t / 2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn proportional_in_lambda() {
        let p = validate_params(2.0, 1.0 / 3.0).unwrap();
        let u = GridFunction::from_fn(32, |t| 2.0 - t * t).unwrap();
        let f = e("5*u*exp(2*u)/(8+exp(u)+exp(2*u))", "u");
        let a = e("1", "t");
        let q = QuadratureSettings::default();
        let v1 = apply_operator(&p, &a, &f, 0.8, &u, &q).unwrap();
        let v2 = apply_operator(&p, &a, &f, 1.6, &u, &q).unwrap();
        for (x, y) in v1.values().iter().zip(v2.values()) {
            assert!((y - 2.0 * x).abs() <= 1e-12 * y.abs());
        }
    }

    #[test]
    fn negative_values_surface_as_eval_errors() {
        let p = validate_params(1.0, 0.5).unwrap();
        let u = GridFunction::from_fn(16, |t| 0.5 - t).unwrap();
        let r = apply_operator(
            &p,
            &e("1", "t"),
            &e("sqrt(u)", "u"),
            1.0,
            &u,
            &Default::default(),
        );
        assert!(matches!(r, Err(Error::Eval(_))));
    }

    #[test]
    fn cone_examples() {
        let one = GridFunction::constant(16, 1.0).unwrap();
        let c = cone_membership(&one, 0.5, 0.5);
        assert!(c.member);
        assert_eq!(c.margin, 0.5);

        let ramp = GridFunction::from_fn(16, |t| t).unwrap();
        assert!(!cone_membership(&ramp, 0.5, 0.5).member);

        let closed = GridFunction::from_fn(200, |t| 23.0 / 24.0 - t * t / 2.0).unwrap();
        let c = cone_membership(&closed, 0.5, 0.5);
        assert!(c.member);
        assert!((c.margin - 17.0 / 48.0).abs() < 1e-14);

        let dip = GridFunction::from_fn(16, |t| if t > 0.9 { -0.1 } else { 1.0 }).unwrap();
        let c = cone_membership(&dip, 0.5, 0.5);
        assert!(!c.member && c.margin < 0.0);
    }

    #[test]
    fn seams_include_eta_once() {
        let u = GridFunction::constant(16, 1.0).unwrap();
        let s = seams_for(&u, 0.5);
        assert_eq!(s.len(), 15);
        let s = seams_for(&u, 1.0 / 3.0);
        assert_eq!(s.len(), 16);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
}
