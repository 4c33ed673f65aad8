use serde::Serialize;

use crate::error::{Error, Result};

/// Values `u(t_i)` on the uniform grid `t_i = i / n`, `i = 0..=n`.
///
/// `n` is even and at least 16 so composite Simpson rules apply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    n: usize,
    values: Vec<f64>,
}

pub const MIN_INTERVALS: usize = 16;

fn check_n(n: usize) -> Result<()> {
    if n < MIN_INTERVALS || !n.is_multiple_of(2) {
        return Err(Error::Grid(format!(
            "number of intervals must be even and >= {MIN_INTERVALS}, got {n}"
        )));
    }
    Ok(())
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len().saturating_sub(1);
        check_n(n)?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Grid(format!("value at node {i} is not finite")));
        }
        Ok(GridFunction { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        check_n(n)?;
        Self::new((0..=n).map(|i| f(node(i, n))).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_fn(n, |_| c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node(&self, i: usize) -> f64 {
        node(i, self.n)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(|i| node(i, self.n))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sup-norm distance to another function on the same grid.
    pub fn distance(&self, other: &GridFunction) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Piecewise-linear interpolant at `s` in `[0, 1]`.
    pub fn interpolate(&self, s: f64) -> f64 {
        let x = s * self.n as f64;
        let i = (x.floor().max(0.0) as usize).min(self.n - 1);
        let w = x - i as f64;
        (1.0 - w) * self.values[i] + w * self.values[i + 1]
    }

    pub(crate) fn map_values(&self, f: impl FnMut(&f64) -> f64) -> GridFunction {
        GridFunction {
            n: self.n,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> GridFunction {
        GridFunction {
            n: values.len() - 1,
            values,
        }
    }
}

pub(crate) fn node(i: usize, n: usize) -> f64 {
    i as f64 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checks() {
        assert!(GridFunction::constant(16, 1.0).is_ok());
        assert!(GridFunction::constant(14, 1.0).is_err());
        assert!(GridFunction::constant(17, 1.0).is_err());
        assert!(GridFunction::new(vec![0.0; 3]).is_err());
        let mut v = vec![1.0; 17];
        v[3] = f64::NAN;
        assert!(GridFunction::new(v).is_err());
    }

    #[test]
    fn interpolation() {
        let u = GridFunction::from_fn(20, |t| 3.0 * t - 1.0).unwrap();
        for s in [0.0, 0.013, 0.5, 0.77777, 1.0] {
            assert!((u.interpolate(s) - (3.0 * s - 1.0)).abs() < 1e-14);
        }
        assert_eq!(u.node(20), 1.0);
        assert!((u.sup_norm() - 2.0).abs() < 1e-15);
    }
}
