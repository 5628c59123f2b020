//! Evaluation points and accuracy budgets shared by every evaluator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `(n, x)` evaluation point with `n >= 1` and `0 < x <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    n: u32,
    x: f64,
}

impl GridPoint {
    pub fn new(n: u32, x: f64) -> Result<Self> {
        check_order(n)?;
        check_scale(x)?;
        Ok(Self { n, x })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

pub(crate) fn check_order(n: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::domain(format!("n must satisfy n >= 1 (got {n})")));
    }
    Ok(())
}

pub(crate) fn check_scale(x: f64) -> Result<()> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(format!(
            "x must satisfy 0 < x <= 1 (got {x})"
        )));
    }
    Ok(())
}

/// Tolerances and truncation budgets for quadrature and series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub quad_rel_tol: f64,
    pub series_abs_tol: f64,
    pub max_series_terms: usize,
    pub max_quad_refinements: usize,
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            quad_rel_tol: 1e-12,
            series_abs_tol: 1e-15,
            max_series_terms: 200,
            max_quad_refinements: 12,
        }
    }
}

impl Accuracy {
    pub fn validate(&self) -> Result<()> {
        if !(self.quad_rel_tol > 0.0 && self.quad_rel_tol.is_finite()) {
            return Err(Error::domain("quadrature tolerance must be > 0"));
        }
        if !(self.series_abs_tol > 0.0 && self.series_abs_tol.is_finite()) {
            return Err(Error::domain("series tolerance must be > 0"));
        }
        if self.max_series_terms < 1 {
            return Err(Error::domain("max series terms must be >= 1"));
        }
        if self.max_quad_refinements < 1 {
            return Err(Error::domain("max quadrature refinements must be >= 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_budget() {
        let acc = Accuracy::default();
        assert_eq!(acc.quad_rel_tol, 1e-12);
        assert_eq!(acc.series_abs_tol, 1e-15);
        assert_eq!(acc.max_series_terms, 200);
        assert_eq!(acc.max_quad_refinements, 12);
        assert!(acc.validate().is_ok());
    }

    #[test]
    fn rejects_bad_budgets() {
        let acc = Accuracy {
            quad_rel_tol: 0.0,
            ..Accuracy::default()
        };
        assert!(acc.validate().is_err());
        let acc = Accuracy {
            max_series_terms: 0,
            ..Accuracy::default()
        };
        assert!(acc.validate().is_err());
        let acc = Accuracy {
            series_abs_tol: f64::NAN,
            ..Accuracy::default()
        };
        assert!(acc.validate().is_err());
    }

    #[test]
    fn grid_point_domain() {
        assert!(GridPoint::new(1, 0.5).is_ok());
        assert!(GridPoint::new(1, 1.0).is_ok());
        assert!(GridPoint::new(0, 0.5).is_err());
        assert!(GridPoint::new(1, 0.0).is_err());
        assert!(GridPoint::new(1, 1.5).is_err());
        assert!(GridPoint::new(1, f64::NAN).is_err());
        let msg = GridPoint::new(1, 0.0).unwrap_err().to_string();
        assert!(msg.contains("0 < x <= 1"), "{msg}");
    }
}
