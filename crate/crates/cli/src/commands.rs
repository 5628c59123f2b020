use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use mascheroni::gfamily::{
    eval_derivative_cot, eval_derivative_series, eval_integral, eval_via_ladder,
};
use mascheroni::verify::{
    audit_large_n, audit_small_x, audit_table, DEFAULT_LARGE_NS, DEFAULT_SMALL_XS,
};
use mascheroni::{Accuracy, ConstantVariant, Error, GridPoint, IdentityId, IdentityReport};

use crate::format::{Cell, OutputFormat, Records};
use crate::{Audit, Method};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NONCONVERGENCE: u8 = 3;

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            code: EXIT_OK,
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub code: u8,
    /// Output still emitted despite the failure.
    pub partial: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_numerical() {
                EXIT_NONCONVERGENCE
            } else {
                EXIT_USAGE
            },
            message: format!("error: {e}"),
            partial: None,
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

const EVAL_HEADER: [&str; 6] = ["n", "x", "method", "quantity", "value", "err_estimate"];

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Integral => "integral",
        Method::Ladder => "ladder",
        Method::DerivativeCot => "derivative-cot",
        Method::DerivativeSeries => "derivative-series",
    }
}

pub fn eval(
    n: u32,
    x: f64,
    method: Method,
    variant: ConstantVariant,
    acc: &Accuracy,
    format: OutputFormat,
) -> Result<Output, Failure> {
    let p = GridPoint::new(n, x)?;
    let (quantity, result) = match method {
        Method::Integral => (
            "g_n(x)",
            eval_integral(p, acc).map(|e| (e.value, e.err_estimate)),
        ),
        Method::Ladder => (
            "g_n(x)",
            eval_via_ladder(p, acc).map(|e| (e.value, e.err_estimate)),
        ),
        Method::DerivativeCot => (
            "x g_n'(x)",
            eval_derivative_cot(p, acc).map(|e| (e.value, e.err_estimate)),
        ),
        Method::DerivativeSeries => {
            let r = eval_derivative_series(p, acc, variant)?;
            if r.capped {
                eprintln!(
                    "warning: series stopped at the cap of {} terms; last term {:e}",
                    r.terms, r.last_term
                );
            }
            ("x g_n'(x)", Ok((r.value, r.last_term.abs())))
        }
    };
    let method_label = match method {
        Method::DerivativeSeries => format!("{}:{}", method_name(method), variant),
        _ => method_name(method).to_string(),
    };
    let record = |value: f64, err: f64| {
        let mut r = Records::new(&EVAL_HEADER);
        r.push(vec![
            n.into(),
            x.into(),
            method_label.clone().into(),
            quantity.into(),
            value.into(),
            err.into(),
        ]);
        r.render(format)
    };
    match result {
        Ok((value, err)) => Ok(Output::ok(record(value, err))),
        Err(Error::NonConvergence {
            value, err_estimate, ..
        }) => Err(Failure {
            message: format!(
                "warning: quadrature did not converge; printing best value (error estimate {err_estimate:e})"
            ),
            code: EXIT_NONCONVERGENCE,
            partial: Some(record(value, err_estimate)),
        }),
        Err(e) => Err(e.into()),
    }
}

pub const TABLE_HEADER: [&str; 6] = ["n", "x", "g_integral", "g_ladder", "abs_diff", "quad_err"];

pub fn table(
    ns: &[u32],
    xs: &[f64],
    acc: &Accuracy,
    format: OutputFormat,
) -> Result<Output, Failure> {
    if ns.is_empty() || xs.is_empty() {
        return Err(Error::EmptyGrid.into());
    }
    let points = ns
        .iter()
        .flat_map(|&n| xs.iter().map(move |&x| GridPoint::new(n, x)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut records = Records::new(&TABLE_HEADER);
    for p in points {
        let integral = eval_integral(p, acc)?;
        let ladder = eval_via_ladder(p, acc)?;
        records.push(vec![
            p.n().into(),
            p.x().into(),
            integral.value.into(),
            ladder.value.into(),
            (integral.value - ladder.value).abs().into(),
            integral.err_estimate.into(),
        ]);
    }
    Ok(Output::ok(records.render(format)))
}

const VERIFY_HEADER: [&str; 7] = [
    "identity_id",
    "passed",
    "max_abs_residual",
    "tolerance",
    "grid_points",
    "tolerance_provenance",
    "notes",
];

fn report_row(r: &IdentityReport) -> Vec<Cell> {
    vec![
        r.identity_id.as_str().into(),
        r.passed.into(),
        r.max_abs_residual.into(),
        r.tolerance.into(),
        Cell::Int(r.points.len() as i64),
        r.tolerance_provenance.clone().into(),
        r.notes.join("; ").into(),
    ]
}

pub fn verify(ids: &[IdentityId], acc: &Accuracy, format: OutputFormat) -> Result<Output, Failure> {
    let ids: Vec<IdentityId> = if ids.is_empty() {
        IdentityId::DEFAULT_SUITE.to_vec()
    } else {
        ids.to_vec()
    };
    let reports = ids
        .iter()
        .map(|id| id.run_default(acc))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().filter(|r| r.passed).count();
    let text = match format {
        OutputFormat::Plain => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "{r}");
            }
            let _ = writeln!(s, "{passed} of {} checks passed", reports.len());
            s
        }
        _ => {
            let mut records = Records::new(&VERIFY_HEADER);
            for r in &reports {
                records.push(report_row(r));
            }
            records.render(format)
        }
    };
    Ok(Output {
        text,
        code: if passed == reports.len() {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        },
    })
}

const AUDIT_HEADER: [&str; 5] = ["audit", "n", "x", "quantity", "value"];

fn tidy(
    records: &mut Records,
    audit: &str,
    n: Option<u32>,
    x: Option<f64>,
    quantity: &str,
    value: f64,
) {
    records.push(vec![
        audit.into(),
        n.map_or(Cell::Text(String::new()), Cell::from),
        x.map_or(Cell::Text(String::new()), Cell::from),
        quantity.into(),
        value.into(),
    ]);
}

pub fn audit(
    which: &[Audit],
    n: u32,
    x: f64,
    xs: &[f64],
    ns: &[u32],
    acc: &Accuracy,
    format: OutputFormat,
) -> Result<Output, Failure> {
    let mut which = if which.is_empty() {
        vec![Audit::Table, Audit::SmallX, Audit::LargeN]
    } else {
        which.to_vec()
    };
    which.sort();
    which.dedup();
    let xs = if xs.is_empty() {
        &DEFAULT_SMALL_XS[..]
    } else {
        xs
    };
    let ns = if ns.is_empty() {
        &DEFAULT_LARGE_NS[..]
    } else {
        ns
    };

    let mut plain = Vec::new();
    let mut records = Records::new(&AUDIT_HEADER);
    for a in which {
        match a {
            Audit::Table => {
                let t = audit_table(acc);
                plain.push(t.to_string());
                for (i, r) in t.rows.iter().enumerate() {
                    let (n, x) = (Some(r.n), Some(r.x));
                    tidy(
                        &mut records,
                        "table",
                        n,
                        x,
                        "published_series_value",
                        r.published_series_value,
                    );
                    tidy(
                        &mut records,
                        "table",
                        n,
                        x,
                        "published_integral_value",
                        r.published_integral_value,
                    );
                    tidy(
                        &mut records,
                        "table",
                        n,
                        x,
                        "computed_value",
                        r.computed_value,
                    );
                    tidy(
                        &mut records,
                        "table",
                        n,
                        x,
                        "residual_vs_published",
                        r.residual_vs_published,
                    );
                    tidy(&mut records, "table", n, x, "quad_err", r.quad_err);
                    let flagged = if t.flagged.contains(&i) { 1.0 } else { 0.0 };
                    tidy(&mut records, "table", n, x, "flagged", flagged);
                }
                tidy(
                    &mut records,
                    "table",
                    None,
                    None,
                    "max_residual",
                    t.max_residual,
                );
            }
            Audit::SmallX => {
                let s = audit_small_x(n, xs, acc)?;
                plain.push(s.to_string());
                for r in &s.rows {
                    let (n, x) = (Some(s.n), Some(r.x));
                    tidy(&mut records, "small-x", n, x, "g", r.g);
                    tidy(&mut records, "small-x", n, x, "g_over_x2", r.g_over_x2);
                    tidy(&mut records, "small-x", n, x, "comparison", r.comparison);
                    tidy(
                        &mut records,
                        "small-x",
                        n,
                        x,
                        "g_minus_comparison",
                        r.g_minus_comparison,
                    );
                    tidy(&mut records, "small-x", n, x, "quad_err", r.quad_err);
                }
                tidy(
                    &mut records,
                    "small-x",
                    Some(s.n),
                    None,
                    "log_slope",
                    s.log_slope,
                );
                tidy(
                    &mut records,
                    "small-x",
                    Some(s.n),
                    None,
                    "comparison_log_slope",
                    s.comparison_log_slope,
                );
            }
            Audit::LargeN => {
                let l = audit_large_n(x, ns, acc)?;
                plain.push(l.to_string());
                for r in &l.rows {
                    let (n, x) = (Some(r.n), Some(l.x));
                    tidy(&mut records, "large-n", n, x, "g", r.g);
                    tidy(&mut records, "large-n", n, x, "n_times_g", r.n_times_g);
                    tidy(&mut records, "large-n", n, x, "comparison", r.comparison);
                    tidy(
                        &mut records,
                        "large-n",
                        n,
                        x,
                        "g_minus_comparison",
                        r.g_minus_comparison,
                    );
                    tidy(&mut records, "large-n", n, x, "quad_err", r.quad_err);
                }
            }
        }
    }
    let text = match format {
        OutputFormat::Plain => plain.join("\n"),
        _ => records.render(format),
    };
    Ok(Output::ok(text))
}
