//! Singular integrand kernels and a double-exponential quadrature engine on `(0, 1)`.
//!
//! The engine uses the substitution `u = 1 / (1 + exp(-pi sinh t))`, which is
//! `(1 + tanh(pi/2 sinh t)) / 2` written so that the distance to the nearer
//! endpoint never suffers cancellation. The trapezoid rule on the `t` axis
//! then converges double-exponentially even for integrands with logarithmic
//! endpoint singularities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::accuracy::Accuracy;
use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;

/// Integral estimate with its a-posteriori error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub err_estimate: f64,
    pub evaluations: usize,
}

/// `sin(pi t)` for `t` in `[0, 1]`, reflected about `1/2` so that arguments
/// close to 1 keep full relative accuracy.
#[inline]
fn sin_pi(t: f64) -> f64 {
    if t > 0.5 {
        (PI * (1.0 - t)).sin()
    } else {
        (PI * t).sin()
    }
}

#[inline]
fn cos_pi(t: f64) -> f64 {
    if t > 0.5 {
        -(PI * (1.0 - t)).cos()
    } else {
        (PI * t).cos()
    }
}

#[inline]
pub(crate) fn log_sin_unchecked(x: f64, u: f64) -> f64 {
    (2.0 * sin_pi(x * u)).ln()
}

/// `log(2 sin(pi x u))`.
///
/// Behaves like `log(2 pi x u)` as `u -> 0+`, an integrable singularity.
pub fn log_sin_kernel(x: f64, u: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(format!(
            "x must satisfy 0 < x <= 1 (got {x})"
        )));
    }
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::domain(format!(
            "u must satisfy 0 < u <= 1 (got {u})"
        )));
    }
    let s = sin_pi(x * u);
    if !(s > 0.0) {
        return Err(Error::domain(format!(
            "sin(pi x u) must be positive (x = {x}, u = {u})"
        )));
    }
    Ok((2.0 * s).ln())
}

/// Below this angle the cotangent kernel switches to its Taylor polynomial.
pub const COT_SERIES_SWITCH: f64 = 1e-4;

#[inline]
pub(crate) fn cot_unchecked(x: f64, u: f64) -> f64 {
    let t = x * u;
    let theta = PI * t;
    if theta < COT_SERIES_SWITCH {
        let t2 = theta * theta;
        1.0 - t2 / 3.0 - t2 * t2 / 45.0
    } else {
        theta * cos_pi(t) / sin_pi(t)
    }
}

/// `pi x u cot(pi x u)`, equal to 1 at `u = 0`.
pub fn cot_kernel(x: f64, u: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(format!(
            "x must satisfy 0 < x <= 1 (got {x})"
        )));
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!(
            "u must satisfy 0 <= u <= 1 (got {u})"
        )));
    }
    if x * u >= 1.0 {
        return Err(Error::domain(format!(
            "x u must satisfy x u < 1 (x = {x}, u = {u})"
        )));
    }
    Ok(cot_unchecked(x, u))
}

#[inline]
pub(crate) fn weight_unchecked(n: u32, u: f64) -> f64 {
    f64::from(n) * (1.0 - u).powi(n as i32 - 1)
}

/// Normalized moment weight `n (1 - u)^(n - 1)`; integrates to 1 on `[0, 1]`.
pub fn weight(n: u32, u: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain(format!("n must satisfy n >= 1 (got {n})")));
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!(
            "u must satisfy 0 <= u <= 1 (got {u})"
        )));
    }
    Ok(weight_unchecked(n, u))
}

/// Half-width of the truncated `t` axis. Past it the endpoint distance
/// `1 / (1 + exp(pi sinh t))` underflows.
const T_MAX: f64 = 6.5;

/// Convergence is not declared before this level, so that integrands
/// vanishing on the coarse nodes cannot fake agreement.
const MIN_LEVEL: usize = 3;

/// Integrates `f` over `(0, 1)` with tanh-sinh quadrature.
///
/// Level `k` uses step `2^-(k+1)` on the transformed axis; each level reuses the
/// previous sum and only evaluates the new odd nodes. Convergence is declared
/// once `|I_k - I_(k-1)| <= quad_rel_tol * max(|I_k|, 1)`. `f` is never
/// called at 0 or 1.
pub fn integrate_de<F>(f: F, acc: &Accuracy) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let mut evaluations = 0usize;
    let mut sample = |u: f64| -> Result<f64> {
        evaluations += 1;
        let v = f(u);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteSample { at: u })
        }
    };

    // Sum over nodes t = j h for j = first, first + stride, ... up to T_MAX.
    let mut level_sum = |h: f64, first: usize, stride: usize| -> Result<f64> {
        let mut s = CompensatedSum::new();
        let mut j = first;
        loop {
            let t = j as f64 * h;
            if t > T_MAX {
                break;
            }
            if t == 0.0 {
                s.add(PI / 4.0 * sample(0.5)?);
            } else {
                let e = (PI * t.sinh()).exp();
                let near = 1.0 / (1.0 + e);
                if near == 0.0 {
                    break;
                }
                let far = 1.0 - near;
                let w = PI * t.cosh() * near * far;
                s.add(w * sample(near)?);
                if far < 1.0 {
                    s.add(w * sample(far)?);
                }
            }
            j += stride;
        }
        Ok(s.value())
    };

    let max_level = acc.max_quad_refinements;
    let min_level = MIN_LEVEL.min(max_level);
    let mut h = 0.5;
    let mut raw = level_sum(h, 0, 1)?;
    let mut value = h * raw;
    let mut err_estimate = f64::INFINITY;
    for level in 1..=max_level {
        h *= 0.5;
        raw += level_sum(h, 1, 2)?;
        let next = h * raw;
        err_estimate = (next - value).abs();
        value = next;
        if level >= min_level && err_estimate <= acc.quad_rel_tol * value.abs().max(1.0) {
            return Ok(QuadResult {
                value,
                err_estimate,
                evaluations,
            });
        }
    }
    Err(Error::NonConvergence {
        value,
        err_estimate,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZETA3: f64 = 1.2020569031595942;

    #[test]
    fn log_sin_checkpoints() {
        assert!((log_sin_kernel(0.5, 0.5).unwrap() - 2f64.sqrt().ln()).abs() < 1e-15);
        assert!((log_sin_kernel(1.0, 0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        let v = log_sin_kernel(0.5, 1e-8).unwrap();
        assert!((v - (PI * 1e-8).ln()).abs() < 1e-12);
        assert!((v + 17.27).abs() < 0.01);
        assert!(log_sin_kernel(1.0, 1.0).is_err());
        assert!(log_sin_kernel(0.5, 0.0).is_err());
        assert!(log_sin_kernel(1.5, 0.5).is_err());
    }

    #[test]
    fn log_sin_small_angle_limit() {
        for &x in &[0.1, 0.5, 1.0] {
            for &u in &[1e-6, 1e-8] {
                let d = log_sin_kernel(x, u).unwrap() - (2.0 * PI * x * u).ln();
                assert!(d.abs() < 1e-10, "x = {x}, u = {u}: {d}");
            }
        }
    }

    #[test]
    fn cot_checkpoints() {
        assert_eq!(cot_kernel(0.3, 0.0).unwrap(), 1.0);
        assert!(cot_kernel(0.5, 1.0).unwrap().abs() < 1e-15);
        assert!((cot_kernel(0.5, 0.5).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!(cot_kernel(1.0, 1.0).is_err());
        assert!(cot_kernel(0.5, -0.1).is_err());
    }

    #[test]
    fn cot_switchover_is_continuous() {
        let u = COT_SERIES_SWITCH / PI;
        let below = cot_kernel(1.0, u * (1.0 - f64::EPSILON)).unwrap();
        let above = cot_kernel(1.0, u * (1.0 + f64::EPSILON)).unwrap();
        assert!((below - above).abs() < 1e-13);
    }

    #[test]
    fn weight_checkpoints() {
        assert_eq!(weight(1, 0.37).unwrap(), 1.0);
        assert_eq!(weight(2, 0.5).unwrap(), 1.0);
        assert_eq!(weight(5, 0.0).unwrap(), 5.0);
        assert!(weight(0, 0.5).is_err());
        assert!(weight(2, 1.5).is_err());
    }

    #[test]
    fn weight_is_normalized() {
        let acc = Accuracy::default();
        for n in 1..=50 {
            let r = integrate_de(|u| weight_unchecked(n, u), &acc).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12, "n = {n}: {}", r.value);
        }
    }

    #[test]
    fn constant_integrand() {
        let r = integrate_de(|_| 1.0, &Accuracy::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!(r.err_estimate <= 1e-14);
        assert!(r.evaluations >= 1);
    }

    #[test]
    fn polynomials_match_antiderivatives() {
        let acc = Accuracy::default();
        for deg in 0..=10 {
            // p(u) = sum_k (k + 1) u^k, integral = deg + 1
            let r = integrate_de(
                |u| (0..=deg).map(|k| f64::from(k + 1) * u.powi(k)).sum(),
                &acc,
            )
            .unwrap();
            assert!((r.value - f64::from(deg + 1)).abs() < 1e-12, "deg = {deg}");
        }
    }

    // log(2 sin(t/2)) = -sum cos(k t)/k integrates termwise over a half period.
    #[test]
    fn fourier_oracles() {
        let acc = Accuracy::default();
        let r = integrate_de(|u| log_sin_unchecked(0.5, u), &acc).unwrap();
        assert!(r.value.abs() < 1e-10, "{}", r.value);

        let r = integrate_de(|u| (1.0 - u) * log_sin_unchecked(0.5, u), &acc).unwrap();
        let expect = -7.0 * ZETA3 / (4.0 * PI * PI);
        assert!((r.value - expect).abs() < 1e-10, "{}", r.value);

        // full period, singular at both ends
        let r = integrate_de(|u| log_sin_unchecked(1.0, u), &acc).unwrap();
        assert!(r.value.abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn never_samples_endpoints() {
        let r = integrate_de(
            |u| {
                assert!(u > 0.0 && u < 1.0, "sampled u = {u}");
                u.ln() + (1.0 - u).ln()
            },
            &Accuracy::default(),
        )
        .unwrap();
        assert!((r.value + 2.0).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let acc = Accuracy {
            max_quad_refinements: 2,
            ..Accuracy::default()
        };
        match integrate_de(|u| (200.0 * u).cos(), &acc) {
            Err(Error::NonConvergence {
                value,
                err_estimate,
                evaluations,
            }) => {
                assert!(value.is_finite());
                assert!(err_estimate > 0.0);
                assert!(evaluations > 0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn reports_non_finite_samples() {
        let r = integrate_de(
            |u| if u > 0.5 { f64::NAN } else { 1.0 },
            &Accuracy::default(),
        );
        assert!(matches!(r, Err(Error::NonFiniteSample { .. })));
    }
}
