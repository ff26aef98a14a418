//! Command-line front end: flag parsing, the eight subcommands and their
//! JSON, CSV and text reports.
//!
//! Exit codes: 0 on success, 1 when a verification reports a failed check or a
//! computation does not converge, 2 for invalid flags or arguments.

mod output;
mod suites;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::parser::ValueSource;
use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::combinat::{enumerate_pairings, pairing_json_line};
use crate::error::Error;
use crate::jackson::{gamma_a_integral, gamma_q2_integral, normalized_moment};
use crate::perturb::{
    expand_action, graph_sum_by_monomial, integration_scaling, verify_against_integration,
    verify_graph_sum, CouplingSpec, GCoeff, GraphBounds, IntegrationReport, Mode,
};
use crate::qarith::rational::parse_rational;
use crate::qarith::{pochhammer_qk, qrat_limit_at_one, Rational};
use crate::qfunc::{
    c_factor, gamma_q2_closed, lambda_coeff, LambdaKind, LambdaTable, QContext, DEFAULT_MAX_TERMS,
    DEFAULT_TOL,
};
use crate::report::{float_value, sig17};

pub use output::{OutputFormat, Report};
pub use suites::{run_suites, SuiteResult, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable supplying the default `--tol`.
pub const TOL_ENV: &str = "QJACKSON_TOL";

#[derive(Debug, Clone, Parser)]
#[command(
    name = "qjackson",
    version,
    about = "q-calculus engine: Jackson integrals, q-gamma, weighted pairings and perturbative q-Gaussian integrals"
)]
pub struct RunConfig {
    /// report format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// truncation tolerance of infinite sums and products (float computations only)
    #[arg(long, global = true, env = TOL_ENV)]
    pub tol: Option<f64>,
    /// term budget of infinite sums and products
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    /// set when `--tol` came from the command line rather than the environment
    #[arg(skip)]
    pub tol_from_flag: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Lambda,
    Kappa,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run every identity suite; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        /// seed of the randomized property suite
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Gamma_{q,2}(t): closed form, Jackson integral and the c(a,t) bridge.
    Gamma {
        #[arg(long)]
        q: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0, 5.0])]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Normalized q-Gaussian moment mu_{2n} against [1]_{n,2}.
    Moments {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        n: usize,
    },
    /// Every pairing of [[2n]] with its weight exponent.
    Pairings {
        #[arg(long)]
        n: usize,
    },
    /// Exact addition-decomposition coefficient and its q -> 1 limit.
    Lambda {
        #[arg(long)]
        c: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Lambda)]
        kind: KindArg,
    },
    /// Perturbative expansion as a series in the couplings.
    Expand {
        /// largest interaction order
        #[arg(long = "J")]
        j_max: usize,
        /// largest g-degree
        #[arg(long = "D")]
        d_max: usize,
        /// q-adic truncation order (exact mode)
        #[arg(long = "M", default_value_t = 8)]
        order: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// required in float mode
        #[arg(long)]
        q: Option<f64>,
        /// vertex amplitudes h_1,...,h_J as rationals (default all 1)
        #[arg(long, value_delimiter = ',')]
        h: Vec<String>,
    },
    /// Sum over q-graph classes compared cell by cell with the expansion.
    Graphsum {
        #[arg(long)]
        cmax: usize,
        #[arg(long)]
        dmax: usize,
        /// largest j with 2j outer legs (default 2)
        #[arg(long)]
        jmax: Option<usize>,
        /// bound on c + j (default cmax + jmax)
        #[arg(long)]
        cjmax: Option<usize>,
        /// largest interaction order (default 2 jmax)
        #[arg(long = "J")]
        j_max: Option<usize>,
    },
    /// Normalized Jackson integral against the float expansion.
    Compare {
        #[arg(long)]
        q: f64,
        /// coupling as j=value, repeatable
        #[arg(long, required = true)]
        g: Vec<String>,
        #[arg(long = "D", default_value_t = 4)]
        d_max: usize,
        /// largest interaction order (default: largest coupling index)
        #[arg(long = "J")]
        j_max: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        h: Vec<String>,
        /// also rerun at doubled couplings and check the residual ratio
        #[arg(long)]
        scaling: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::SizeGuard { .. } => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Compute(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl RunConfig {
    /// Parses arguments, recording whether `--tol` was given explicitly.
    pub fn try_parse_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let matches = RunConfig::command().try_get_matches_from(args)?;
        let mut cfg = RunConfig::from_arg_matches(&matches)?;
        let sub_source = matches
            .subcommand()
            .and_then(|(_, m)| m.value_source("tol"));
        cfg.tol_from_flag = matches.value_source("tol") == Some(ValueSource::CommandLine)
            || sub_source == Some(ValueSource::CommandLine);
        Ok(cfg)
    }

    fn context(&self, q: f64) -> Result<QContext, CliError> {
        Ok(QContext::new(
            q,
            self.tol.unwrap_or(DEFAULT_TOL),
            self.max_terms.unwrap_or(DEFAULT_MAX_TERMS),
        )?)
    }
}

/// Parses `args`, runs the command and writes the report; returns the exit
/// code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_args(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match run(&cfg) {
        Ok(report) => {
            if let Err(e) = report.write(cfg.output, out) {
                let _ = writeln!(err, "error writing report: {e}");
                return EXIT_FAILURE;
            }
            if report.failed {
                EXIT_FAILURE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match &cfg.command {
        Command::Verify { q, seed } => verify(cfg, *q, *seed),
        Command::Gamma { q, t, a } => gamma(cfg, *q, t, *a),
        Command::Moments { q, n } => moments(cfg, *q, *n),
        Command::Pairings { n } => pairings(*n),
        Command::Lambda { c, d, kind } => lambda(*c, *d, *kind),
        Command::Expand {
            j_max,
            d_max,
            order,
            mode,
            q,
            h,
        } => expand(cfg, *j_max, *d_max, *order, *mode, *q, h),
        Command::Graphsum {
            cmax,
            dmax,
            jmax,
            cjmax,
            j_max,
        } => graphsum(*cmax, *dmax, *jmax, *cjmax, *j_max),
        Command::Compare {
            q,
            g,
            d_max,
            j_max,
            h,
            scaling,
        } => compare(cfg, *q, g, *d_max, *j_max, h, *scaling),
    }
}

fn verify(cfg: &RunConfig, q: f64, seed: u64) -> Result<Report, CliError> {
    let report = run_suites(&cfg.context(q)?, seed);
    let rows = report
        .suites
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                s.identity.clone(),
                s.checked.to_string(),
                s.failed.to_string(),
                s.passed.to_string(),
            ]
        })
        .collect();
    let mut text = String::new();
    for s in &report.suites {
        let status = if s.passed { "PASS" } else { "FAIL" };
        text += &format!(
            "{status} {} ({} checked, {} failed): {}\n",
            s.name, s.checked, s.failed, s.identity
        );
        for f in &s.failures {
            text += &format!("    {f}\n");
        }
    }
    text += &format!("{} checks, {} failed\n", report.checked, report.failed);
    Ok(Report::new(to_json(&report))
        .csv(
            vec!["suite", "identity", "checked", "failed", "passed"],
            rows,
        )
        .text(text)
        .failed(!report.passed))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn rel_err(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

fn gamma(cfg: &RunConfig, q: f64, ts: &[f64], a: f64) -> Result<Report, CliError> {
    let ctx = cfg.context(q)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut text = String::new();
    for &t in ts {
        let closed = gamma_q2_closed(&ctx, t)?;
        let integral = gamma_q2_integral(&ctx, t)?.value;
        let gamma_a = gamma_a_integral(&ctx, a, t)?.value;
        let c = c_factor(&ctx, a, t)?;
        let bridged = c * gamma_a;
        let (e1, e2) = (rel_err(integral, closed), rel_err(bridged, closed));
        let values = [t, closed, integral, gamma_a, c, bridged, e1, e2];
        rows.push(
            std::iter::once(sig17(q))
                .chain(std::iter::once(sig17(a)))
                .chain(values.iter().map(|v| sig17(*v)))
                .collect(),
        );
        json_rows.push(json!({
            "t": float_value(t),
            "closed": float_value(closed),
            "integral": float_value(integral),
            "gamma_a": float_value(gamma_a),
            "c_factor": float_value(c),
            "bridged": float_value(bridged),
            "rel_err_integral": float_value(e1),
            "rel_err_bridge": float_value(e2),
        }));
        text += &format!(
            "t = {}: closed {}, integral {}, c(a,t) gamma^(a) {}\n",
            sig17(t),
            sig17(closed),
            sig17(integral),
            sig17(bridged)
        );
    }
    let json =
        json!({"command": "gamma", "q": float_value(q), "a": float_value(a), "rows": json_rows});
    Ok(Report::new(json)
        .csv(
            vec![
                "q",
                "a",
                "t",
                "closed",
                "integral",
                "gamma_a",
                "c_factor",
                "bridged",
                "rel_err_integral",
                "rel_err_bridge",
            ],
            rows,
        )
        .text(text))
}

fn moments(cfg: &RunConfig, q: f64, n: usize) -> Result<Report, CliError> {
    let ctx = cfg.context(q)?;
    let value = normalized_moment(&ctx, n)?;
    let expected = pochhammer_qk(1, n, 2).eval_f64(q);
    let abs_err = (value - expected).abs();
    let json = json!({
        "command": "moments",
        "q": float_value(q),
        "n": n,
        "value": float_value(value),
        "expected": float_value(expected),
        "abs_err": float_value(abs_err),
    });
    let row = vec![
        sig17(q),
        n.to_string(),
        sig17(value),
        sig17(expected),
        sig17(abs_err),
    ];
    Ok(Report::new(json)
        .csv(vec!["q", "n", "value", "expected", "abs_err"], vec![row])
        .text(format!(
            "mu_{} = {} ([1]_{{{n},2}} = {})\n",
            2 * n,
            sig17(value),
            sig17(expected)
        )))
}

fn pairings(n: usize) -> Result<Report, CliError> {
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    for (i, alpha) in enumerate_pairings(n)?.enumerate() {
        lines.push(serde_json::from_str(&pairing_json_line(&alpha)).expect("valid JSON line"));
        let pairs: Vec<String> = alpha
            .pairs()
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect();
        rows.push(vec![
            n.to_string(),
            (i + 1).to_string(),
            pairs.join(" "),
            alpha.weight_exponent().to_string(),
        ]);
        text += &format!("{}  q^{}\n", pairs.join(" "), alpha.weight_exponent());
    }
    Ok(Report::lines(lines)
        .csv(vec!["n", "index", "pairs", "weight_exp"], rows)
        .text(text))
}

fn lambda(c: usize, d: usize, kind: KindArg) -> Result<Report, CliError> {
    let (kind, name) = match kind {
        KindArg::Lambda => (LambdaKind::Lambda, "lambda"),
        KindArg::Kappa => (LambdaKind::Kappa, "kappa"),
    };
    let v = lambda_coeff(&LambdaTable::new(kind), c, d);
    let limit = qrat_limit_at_one(&v)?;
    let coeffs = |p: &crate::qarith::QPolynomial| -> Vec<String> {
        p.coeffs().iter().map(|r| r.to_string()).collect()
    };
    let json = json!({
        "command": "lambda",
        "kind": name,
        "c": c,
        "d": d,
        "value": v.to_string(),
        "numerator": coeffs(v.num()),
        "denominator": coeffs(v.den()),
        "limit_q1": limit.to_string(),
    });
    let row = vec![
        name.to_string(),
        c.to_string(),
        d.to_string(),
        v.to_string(),
        limit.to_string(),
    ];
    Ok(Report::new(json)
        .csv(vec!["kind", "c", "d", "value", "limit_q1"], vec![row])
        .text(format!("{name}_{{{c},{d}}} = {v}\nq -> 1: {limit}\n")))
}

fn parse_h(h: &[String], j_max: usize) -> Result<Vec<Rational>, CliError> {
    if h.is_empty() {
        return Ok(vec![Rational::from_integer(1.into()); j_max]);
    }
    if h.len() != j_max {
        return Err(CliError::Usage(format!(
            "--h needs {j_max} values, got {}",
            h.len()
        )));
    }
    Ok(h.iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_, _>>()?)
}

fn expand(
    cfg: &RunConfig,
    j_max: usize,
    d_max: usize,
    order: usize,
    mode: ModeArg,
    q: Option<f64>,
    h: &[String],
) -> Result<Report, CliError> {
    let spec = CouplingSpec::with_h(j_max, parse_h(h, j_max)?, d_max, order)?;
    let mode = match (mode, q) {
        (ModeArg::Exact, _) if cfg.tol_from_flag => {
            return Err(CliError::Usage(
                "--tol is a float-mode control; exact mode truncates at --M".into(),
            ))
        }
        (ModeArg::Exact, Some(_)) => {
            return Err(CliError::Usage(
                "exact mode takes no --q; use --mode float".into(),
            ))
        }
        (ModeArg::Exact, None) => Mode::Exact,
        (ModeArg::Float, Some(q)) => Mode::Float(cfg.context(q)?),
        (ModeArg::Float, None) => return Err(CliError::Usage("float mode needs --q".into())),
    };
    let series = expand_action(&spec, mode)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for (m, c) in &series.terms {
        let (coeffs, value) = match c {
            GCoeff::Series(s) => (
                s.coeffs()
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
                String::new(),
            ),
            GCoeff::Value(v) => (String::new(), sig17(*v)),
            GCoeff::Limit(r) => (String::new(), r.to_string()),
        };
        let shown = match c {
            GCoeff::Series(s) => s.to_string(),
            GCoeff::Value(v) => sig17(*v),
            GCoeff::Limit(r) => r.to_string(),
        };
        text += &format!("{m}: {shown}\n");
        rows.push(vec![m.to_string(), order.to_string(), coeffs, value]);
    }
    let (mode_name, q_value) = match mode {
        Mode::Exact => ("exact", Value::Null),
        Mode::Float(ctx) => ("float", float_value(ctx.q())),
    };
    let json = json!({
        "command": "expand",
        "mode": mode_name,
        "q": q_value,
        "spec": to_json(&spec),
        "terms": to_json(&series),
    });
    Ok(Report::new(json)
        .csv(vec!["monomial", "order", "coeff_qseries", "value"], rows)
        .text(text))
}

fn graphsum(
    cmax: usize,
    dmax: usize,
    jmax: Option<usize>,
    cjmax: Option<usize>,
    j_max: Option<usize>,
) -> Result<Report, CliError> {
    let jmax = jmax.unwrap_or(2);
    let bounds = GraphBounds::new(cmax, dmax, jmax, cjmax.unwrap_or(cmax + jmax));
    let spec = CouplingSpec::new(j_max.unwrap_or((2 * jmax).max(1)), dmax, 2 * cmax)?;
    let report = verify_graph_sum(&spec, &bounds)?;
    let sums = graph_sum_by_monomial(&spec, &bounds)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut monomials = Vec::new();
    for (m, v) in &sums {
        rows.push(vec![m.to_string(), v.to_string()]);
        text += &format!("{m}: {v}\n");
        monomials.push(json!({"monomial": to_json(m), "value": v.to_string()}));
    }
    text += &format!(
        "{} cells, {} graph classes, {} mismatches\n",
        report.cells,
        report.items,
        report.failures.len()
    );
    let json = json!({
        "command": "graphsum",
        "bounds": to_json(&report.bounds),
        "cells": report.cells,
        "items": report.items.to_string(),
        "passed": report.passed(),
        "failures": to_json(&report.failures),
        "monomials": monomials,
    });
    Ok(Report::new(json)
        .csv(vec!["monomial", "graph_sum"], rows)
        .text(text)
        .failed(!report.passed()))
}

fn parse_couplings(g: &[String]) -> Result<BTreeMap<usize, f64>, CliError> {
    let mut out = BTreeMap::new();
    for s in g {
        let bad = || CliError::Usage(format!("--g expects j=value, got {s:?}"));
        let (j, v) = s.split_once('=').ok_or_else(bad)?;
        let j: usize = j.trim().parse().map_err(|_| bad())?;
        let v: f64 = v.trim().parse().map_err(|_| bad())?;
        if j == 0 || out.insert(j, v).is_some() {
            return Err(bad());
        }
    }
    Ok(out)
}

fn integration_row(r: &IntegrationReport) -> Vec<String> {
    let g: Vec<String> =
        r.g.iter()
            .map(|(j, v)| format!("{j}={}", sig17(*v)))
            .collect();
    vec![
        sig17(r.q),
        g.join(" "),
        r.d_max.to_string(),
        sig17(r.lhs),
        sig17(r.rhs),
        sig17(r.residual),
        sig17(r.truncation_estimate),
        sig17(r.rounding_floor),
        sig17(r.bound),
        r.passed.to_string(),
    ]
}

fn integration_text(r: &IntegrationReport) -> String {
    format!(
        "integral {}\nexpansion {}\nresidual {} (bound {}, {})\n",
        sig17(r.lhs),
        sig17(r.rhs),
        sig17(r.residual),
        sig17(r.bound),
        if r.passed { "pass" } else { "FAIL" }
    )
}

#[allow(clippy::too_many_arguments)]
fn compare(
    cfg: &RunConfig,
    q: f64,
    g: &[String],
    d_max: usize,
    j_max: Option<usize>,
    h: &[String],
    scaling: bool,
) -> Result<Report, CliError> {
    let g = parse_couplings(g)?;
    let j_max = j_max.unwrap_or_else(|| g.keys().copied().max().unwrap_or(1));
    let spec = CouplingSpec::with_h(j_max, parse_h(h, j_max)?, d_max, 0)?;
    let ctx = cfg.context(q)?;
    let header = vec![
        "q",
        "g",
        "d_max",
        "lhs",
        "rhs",
        "residual",
        "truncation_estimate",
        "rounding_floor",
        "bound",
        "passed",
    ];
    if scaling {
        let s = integration_scaling(&spec, &ctx, &g)?;
        let mut json = to_json(&s);
        json.as_object_mut()
            .expect("object")
            .insert("command".into(), "compare".into());
        let text = format!(
            "{}doubled couplings:\n{}residual ratio {} (expected {}, {})\n",
            integration_text(&s.base),
            integration_text(&s.doubled),
            sig17(s.ratio),
            sig17(s.expected),
            if s.passed { "pass" } else { "FAIL" }
        );
        let failed = !(s.passed && s.base.passed);
        return Ok(Report::new(json)
            .csv(
                header,
                vec![integration_row(&s.base), integration_row(&s.doubled)],
            )
            .text(text)
            .failed(failed));
    }
    let r = verify_against_integration(&spec, &ctx, &g)?;
    let mut json = to_json(&r);
    json.as_object_mut()
        .expect("object")
        .insert("command".into(), "compare".into());
    Ok(Report::new(json)
        .csv(header, vec![integration_row(&r)])
        .text(integration_text(&r))
        .failed(!r.passed))
}
