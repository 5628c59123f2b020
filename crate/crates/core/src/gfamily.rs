//! The four representations of `g_n(x)`.
//!
//! The integral representation
//!
//! ```text
//! g_n(x) = H_n - log(2 pi x) - n * int_0^1 (1-u)^(n-1) log(2 sin(pi x u)) du
//! ```
//!
//! is the canonical definition. The derivative (cotangent average and even-zeta
//! series), the ladder in `n` and the generating function are evaluated
//! independently so that the verification harness can compare them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accuracy::{check_order, check_scale, Accuracy, GridPoint};
use crate::error::{Error, Result};
use crate::numerics::{harmonic, zeta_even_cached, CompensatedSum};
use crate::quadrature::{
    cot_unchecked, integrate_de, log_sin_unchecked, weight_unchecked, QuadResult,
};

/// A value together with the error estimate inherited from its quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub err_estimate: f64,
}

/// Runs a quadrature and maps its result through an affine assembly
/// `value = offset + scale * integral`, including the partial value carried by
/// a non-convergence error.
fn assemble<F>(integrand: F, offset: f64, scale: f64, acc: &Accuracy) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    match integrate_de(integrand, acc) {
        Ok(QuadResult {
            value,
            err_estimate,
            ..
        }) => Ok(Estimate {
            value: offset + scale * value,
            err_estimate: scale.abs() * err_estimate,
        }),
        Err(Error::NonConvergence {
            value,
            err_estimate,
            evaluations,
        }) => Err(Error::NonConvergence {
            value: offset + scale * value,
            err_estimate: scale.abs() * err_estimate,
            evaluations,
        }),
        Err(e) => Err(e),
    }
}

/// `g_n(x)` from the integral representation.
pub fn eval_integral(p: GridPoint, acc: &Accuracy) -> Result<Estimate> {
    let (n, x) = (p.n(), p.x());
    let offset = harmonic(n)? - (2.0 * PI * x).ln();
    assemble(
        |u| weight_unchecked(n, u) * log_sin_unchecked(x, u),
        offset,
        -1.0,
        acc,
    )
}

/// `x g_n'(x) = -n int_0^1 (1-u)^(n-1) pi x u cot(pi x u) du - 1`.
///
/// At `x = 1` the integrand behaves like `-(1-u)^(n-2)` near `u = 1`, so the
/// value is finite only for `n >= 2`.
pub fn eval_derivative_cot(p: GridPoint, acc: &Accuracy) -> Result<Estimate> {
    let (n, x) = (p.n(), p.x());
    if n == 1 && x == 1.0 {
        return Err(Error::domain(
            "x g_1'(x) diverges at x = 1; x must satisfy 0 < x < 1 for n = 1",
        ));
    }
    assemble(
        |u| weight_unchecked(n, u) * cot_unchecked(x, u),
        -1.0,
        -1.0,
        acc,
    )
}

/// Additive constant closing the even-zeta series for `x g_n'(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantVariant {
    /// `-1`, the constant shared with the cotangent-average line.
    AsPrinted,
    /// `-2`, the constant produced by substituting
    /// `pi z cot(pi z) = 1 - 2 sum zeta(2m) z^(2m)` into the cotangent average.
    Corrected,
}

impl ConstantVariant {
    pub const ALL: [ConstantVariant; 2] = [ConstantVariant::AsPrinted, ConstantVariant::Corrected];

    pub fn constant(self) -> f64 {
        match self {
            ConstantVariant::AsPrinted => -1.0,
            ConstantVariant::Corrected => -2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstantVariant::AsPrinted => "as_printed",
            ConstantVariant::Corrected => "corrected",
        }
    }
}

impl std::fmt::Display for ConstantVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of a truncated power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub value: f64,
    /// Number of series terms summed.
    pub terms: usize,
    /// Last term added before the constant.
    pub last_term: f64,
    /// True when `max_series_terms` stopped the sum before a term fell below
    /// `series_abs_tol`.
    pub capped: bool,
}

/// `2 n! sum_{m>=1} (2m)!/(2m+n)! zeta(2m) x^(2m) + C` for `0 <= x < 1`.
///
/// The factorial ratio is carried as `prod_{j=1..n} j / (2m + j)`.
pub fn derivative_series(
    n: u32,
    x: f64,
    acc: &Accuracy,
    variant: ConstantVariant,
) -> Result<SeriesSum> {
    check_order(n)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(format!(
            "x must satisfy 0 <= x < 1 (got {x})"
        )));
    }
    if x >= 1.0 {
        return Err(Error::SeriesDivergent { x });
    }
    let x2 = x * x;
    let mut sum = CompensatedSum::new();
    let mut power = 1.0;
    let mut terms = 0;
    let mut last_term = 0.0;
    let mut capped = true;
    for m in 1..=acc.max_series_terms as u32 {
        power *= x2;
        let ratio: f64 = (1..=n)
            .map(|j| f64::from(j) / f64::from(2 * m + j))
            .product();
        let term = 2.0 * ratio * zeta_even_cached(m) * power;
        sum.add(term);
        terms += 1;
        last_term = term;
        if term.abs() < acc.series_abs_tol {
            capped = false;
            break;
        }
    }
    Ok(SeriesSum {
        value: sum.value() + variant.constant(),
        terms,
        last_term,
        capped,
    })
}

/// [`derivative_series`] at a grid point; `x` must be strictly below 1.
pub fn eval_derivative_series(
    p: GridPoint,
    acc: &Accuracy,
    variant: ConstantVariant,
) -> Result<SeriesSum> {
    derivative_series(p.n(), p.x(), acc, variant)
}

/// `g_(n+1)(x) - g_n(x) = 1/(n+1) - int_0^1 [(n+1)(1-u)^n - n(1-u)^(n-1)] log(2 sin(pi x u)) du`.
pub fn ladder_delta(n: u32, x: f64, acc: &Accuracy) -> Result<Estimate> {
    check_order(n)?;
    check_scale(x)?;
    let np1 = f64::from(n) + 1.0;
    // (n+1)(1-u)^n - n(1-u)^(n-1) = (1-u)^(n-1) (1 - (n+1) u)
    assemble(
        |u| (1.0 - u).powi(n as i32 - 1) * (1.0 - np1 * u) * log_sin_unchecked(x, u),
        1.0 / np1,
        -1.0,
        acc,
    )
}

/// `g_1(x) + sum_{k=1..n-1} (g_(k+1)(x) - g_k(x))` with each step from [`ladder_delta`].
pub fn eval_via_ladder(p: GridPoint, acc: &Accuracy) -> Result<Estimate> {
    let base = eval_integral(GridPoint::new(1, p.x())?, acc)?;
    let mut value = CompensatedSum::new();
    value.add(base.value);
    let mut err = base.err_estimate;
    for k in 1..p.n() {
        let d = ladder_delta(k, p.x(), acc)?;
        value.add(d.value);
        err += d.err_estimate;
    }
    Ok(Estimate {
        value: value.value(),
        err_estimate: err,
    })
}

/// Largest `|z|` accepted by the generating-function evaluators.
pub const MAX_UMBRAL_RADIUS: f64 = 0.9;

/// A generating-function argument: scale `x` in `(0, 1]`, `|z| <= 0.9`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenfuncPoint {
    x: f64,
    z: f64,
}

fn check_umbral(z: f64) -> Result<()> {
    if !(z.abs() <= MAX_UMBRAL_RADIUS) {
        return Err(Error::domain(format!(
            "z must satisfy |z| <= {MAX_UMBRAL_RADIUS} (got {z})"
        )));
    }
    Ok(())
}

impl GenfuncPoint {
    pub fn new(x: f64, z: f64) -> Result<Self> {
        check_scale(x)?;
        check_umbral(z)?;
        Ok(Self { x, z })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// Closed form of `sum_{n>=1} g_n(x) z^n`.
pub fn genfunc_closed(q: GenfuncPoint, acc: &Accuracy) -> Result<Estimate> {
    let (x, z) = (q.x, q.z);
    let one_minus = 1.0 - z;
    let offset = -(z / one_minus) * (2.0 * PI * x).ln() - (-z).ln_1p() / one_minus;
    assemble(
        |u| {
            let d = 1.0 - z * (1.0 - u);
            log_sin_unchecked(x, u) * z / (d * d)
        },
        offset,
        -1.0,
        acc,
    )
}

/// `g_1(x), ..., g_{n_max}(x)` from the integral representation, evaluated in
/// parallel and returned in order.
pub fn g_sequence(x: f64, n_max: u32, acc: &Accuracy) -> Result<Vec<Estimate>> {
    check_scale(x)?;
    (1..=n_max)
        .into_par_iter()
        .map(|n| eval_integral(GridPoint::new(n, x)?, acc))
        .collect()
}

/// `sum_{n=1..N} values[n-1] z^n`.
pub fn power_sum(values: &[f64], z: f64) -> f64 {
    let mut sum = CompensatedSum::new();
    let mut zn = 1.0;
    for &g in values {
        zn *= z;
        sum.add(g * zn);
    }
    sum.value()
}

/// Bound on the neglected tail of the partial sum to `terms`:
/// `max |g_n| * |z|^(terms+1) / (1 - |z|)`, the max taken over every supplied value.
pub fn genfunc_tail_bound(values: &[f64], z: f64, terms: u32) -> f64 {
    let g_max = values.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let r = z.abs();
    g_max * r.powi(terms as i32 + 1) / (1.0 - r)
}

/// `sum_{n=1..terms} g_n(x) z^n` with each `g_n` from [`eval_integral`].
pub fn genfunc_partial(x: f64, z: f64, terms: u32, acc: &Accuracy) -> Result<Estimate> {
    check_scale(x)?;
    check_umbral(z)?;
    if terms < 1 {
        return Err(Error::domain("number of terms N must satisfy N >= 1"));
    }
    let gs = g_sequence(x, terms, acc)?;
    let values: Vec<f64> = gs.iter().map(|e| e.value).collect();
    let err = power_sum(
        &gs.iter().map(|e| e.err_estimate).collect::<Vec<_>>(),
        z.abs(),
    );
    Ok(Estimate {
        value: power_sum(&values, z),
        err_estimate: err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZETA3: f64 = 1.2020569031595942;

    fn acc() -> Accuracy {
        Accuracy::default()
    }

    fn g(n: u32, x: f64) -> f64 {
        eval_integral(GridPoint::new(n, x).unwrap(), &acc())
            .unwrap()
            .value
    }

    #[test]
    fn integral_checkpoints() {
        assert!((g(1, 0.5) - (1.0 - PI.ln())).abs() < 1e-12);
        let g2 = 1.5 - PI.ln() + 7.0 * ZETA3 / (2.0 * PI * PI);
        assert!((g(2, 0.5) - g2).abs() < 1e-12);
        assert!((g(1, 1.0) - (1.0 - (2.0 * PI).ln())).abs() < 1e-12);
        // (1-u) log(2 sin(pi u)) integrates to half of the full-period integral, i.e. 0
        assert!((g(2, 1.0) - (1.5 - (2.0 * PI).ln())).abs() < 1e-12);
    }

    #[test]
    fn derivative_small_x_limit() {
        let d = eval_derivative_cot(GridPoint::new(1, 1e-6).unwrap(), &acc()).unwrap();
        assert!((d.value + 2.0).abs() < 1e-10);
    }

    #[test]
    fn derivative_at_unit_scale() {
        assert!(eval_derivative_cot(GridPoint::new(1, 1.0).unwrap(), &acc()).is_err());
        let d = eval_derivative_cot(GridPoint::new(2, 1.0).unwrap(), &acc()).unwrap();
        assert!(d.value.is_finite());
    }

    #[test]
    fn series_empty_sum_is_the_constant() {
        for v in ConstantVariant::ALL {
            let s = derivative_series(1, 0.0, &acc(), v).unwrap();
            assert_eq!(s.value, v.constant());
        }
        assert!(matches!(
            derivative_series(1, 1.0, &acc(), ConstantVariant::Corrected),
            Err(Error::SeriesDivergent { .. })
        ));
        assert!(eval_derivative_series(
            GridPoint::new(1, 1.0).unwrap(),
            &acc(),
            ConstantVariant::AsPrinted
        )
        .is_err());
    }

    #[test]
    fn series_constants_against_cotangent() {
        let p = GridPoint::new(1, 0.5).unwrap();
        let cot = eval_derivative_cot(p, &acc()).unwrap().value;
        let corrected = eval_derivative_series(p, &acc(), ConstantVariant::Corrected).unwrap();
        let printed = eval_derivative_series(p, &acc(), ConstantVariant::AsPrinted).unwrap();
        assert!(!corrected.capped);
        assert!((corrected.value - cot).abs() < 1e-9);
        assert!(((printed.value - cot) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn series_cap_is_honored() {
        let s = derivative_series(1, 0.95, &acc(), ConstantVariant::Corrected).unwrap();
        assert!(s.capped);
        assert_eq!(s.terms, 200);
    }

    #[test]
    fn ladder_checkpoints() {
        let d = ladder_delta(1, 0.5, &acc()).unwrap().value;
        assert!((d - (0.5 + 7.0 * ZETA3 / (2.0 * PI * PI))).abs() < 1e-12);
        assert!((d - (g(2, 0.5) - g(1, 0.5))).abs() < 1e-9);
        let d = ladder_delta(9, 0.3, &acc()).unwrap().value;
        assert!((d - (g(10, 0.3) - g(9, 0.3))).abs() < 1e-8);
        assert!(ladder_delta(0, 0.3, &acc()).is_err());
        assert!(ladder_delta(1, 1.3, &acc()).is_err());
    }

    #[test]
    fn ladder_path() {
        let one = eval_via_ladder(GridPoint::new(1, 0.7).unwrap(), &acc()).unwrap();
        assert_eq!(one.value, g(1, 0.7));
        let two = eval_via_ladder(GridPoint::new(2, 0.5).unwrap(), &acc()).unwrap();
        assert!((two.value - g(2, 0.5)).abs() < 1e-10);
        let ten = eval_via_ladder(GridPoint::new(10, 0.5).unwrap(), &acc()).unwrap();
        assert!((ten.value - g(10, 0.5)).abs() < 9e-12 + 1e-12);
    }

    #[test]
    fn genfunc_zero_argument() {
        for &x in &[0.2, 0.5, 1.0] {
            let q = GenfuncPoint::new(x, 0.0).unwrap();
            assert_eq!(genfunc_closed(q, &acc()).unwrap().value, 0.0);
            assert_eq!(genfunc_partial(x, 0.0, 5, &acc()).unwrap().value, 0.0);
        }
        assert!(GenfuncPoint::new(0.5, 0.95).is_err());
        assert!(GenfuncPoint::new(0.5, -0.91).is_err());
        assert!(genfunc_partial(0.5, 0.5, 0, &acc()).is_err());
    }

    #[test]
    fn genfunc_partial_checkpoints() {
        let one = genfunc_partial(0.5, 0.5, 1, &acc()).unwrap().value;
        assert!((one - 0.5 * (1.0 - PI.ln())).abs() < 1e-12);
        let two = genfunc_partial(0.5, 0.5, 2, &acc()).unwrap().value;
        assert!((two - (one + 0.25 * g(2, 0.5))).abs() < 1e-14);
    }

    #[test]
    fn genfunc_closed_matches_partial_sums() {
        for &(x, z) in &[(0.5, 0.5), (0.3, -0.5)] {
            let closed = genfunc_closed(GenfuncPoint::new(x, z).unwrap(), &acc())
                .unwrap()
                .value;
            let gs: Vec<f64> = g_sequence(x, 80, &acc())
                .unwrap()
                .iter()
                .map(|e| e.value)
                .collect();
            let partial = power_sum(&gs[..60], z);
            let tail = genfunc_tail_bound(&gs, z, 60);
            assert!((closed - partial).abs() <= 1e-9 + tail, "x = {x}, z = {z}");
        }
    }

    #[test]
    fn tail_bound_shape() {
        let b = genfunc_tail_bound(&[1.0, -3.0, 2.0], 0.5, 2);
        assert_eq!(b, 3.0 * 0.125 / 0.5);
    }
}
