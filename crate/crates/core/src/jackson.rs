//! Jackson integration on the geometric node sets `{q^n b}` and
//! `{q^n / a : n in Z}`, the q-Gaussian integrals built on them, and the
//! normalized q-Gaussian moments.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result, Tail};
use crate::qfunc::{qexp, ExpForm, ExpKind, QContext};
use crate::report::serialize_f64;

/// Number of consecutive nodes inspected before a tail bound is trusted.
const WINDOW: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum IntegrationDomain {
    /// `[0, b]`
    Definite { b: f64 },
    /// `[0, inf/a)` on the bilateral node set `q^n / a`
    Improper { a: f64 },
    /// `[-b, b]`
    Symmetric { b: f64 },
}

impl IntegrationDomain {
    /// `[-nu, nu]` with `nu = ([2]_q / (1 - q^2))^(1/2)`.
    pub fn gaussian(ctx: &QContext) -> Self {
        IntegrationDomain::Symmetric { b: ctx.nu() }
    }

    /// `[0, inf/(a (1 - q^2)^(1/2)))`.
    pub fn gaussian_improper(ctx: &QContext, a: f64) -> Self {
        let q = ctx.q();
        IntegrationDomain::Improper {
            a: a * (1.0 - q * q).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    #[serde(serialize_with = "serialize_f64")]
    pub value: f64,
    pub terms_used: usize,
    #[serde(serialize_with = "serialize_f64")]
    pub tail_bound: f64,
}

fn check_finite(x: f64, fx: f64) -> Result<f64> {
    if fx.is_finite() {
        Ok(fx)
    } else {
        Err(Error::NonFinite { x })
    }
}

/// Bound on the rest of a series whose last `WINDOW` term magnitudes are in
/// `w`, assuming they keep shrinking at the worst ratio seen in the window.
/// `None` unless every ratio is below one; a window of zeros bounds by zero.
fn geometric_tail(w: &VecDeque<f64>) -> Option<f64> {
    let mut ratio: f64 = 0.0;
    for (a, b) in w.iter().zip(w.iter().skip(1)) {
        if *b == 0.0 {
            continue;
        }
        if *a == 0.0 {
            return None;
        }
        ratio = ratio.max(b / a);
    }
    (ratio < 1.0).then(|| w[w.len() - 1] * ratio / (1.0 - ratio))
}

/// `int_0^b f d_qx = (1-q) b sum_{n>=0} q^n f(q^n b)` with a fallible
/// integrand.
///
/// The sum stops once the summands `q^n f(q^n b)` over the last eight nodes
/// shrink geometrically and the implied remainder is below the tolerance.
/// Leading zeros, as for an integrand that underflows near `b`, do not stop
/// the sum.
pub fn try_jackson_definite<F>(ctx: &QContext, f: F, b: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(b > 0.0) {
        return Err(Error::Domain(format!(
            "upper limit b = {b} must be positive"
        )));
    }
    let q = ctx.q();
    let mut sum = 0.0;
    let mut qn = 1.0;
    let mut window: VecDeque<f64> = VecDeque::with_capacity(WINDOW + 1);
    let mut seen_nonzero = false;
    for n in 0..ctx.max_terms() {
        let x = qn * b;
        let fx = check_finite(x, f(x)?)?;
        sum += qn * fx;
        seen_nonzero |= fx != 0.0;
        window.push_back((qn * fx).abs());
        if window.len() > WINDOW {
            window.pop_front();
        }
        qn *= q;
        if window.len() == WINDOW && (seen_nonzero || qn < f64::EPSILON) {
            if let Some(rest) = geometric_tail(&window) {
                let tail = (1.0 - q) * b * rest;
                if tail < ctx.tol() {
                    return Ok(QuadratureResult {
                        value: (1.0 - q) * b * sum,
                        terms_used: n + 1,
                        tail_bound: tail,
                    });
                }
            }
        }
    }
    Err(Error::NonConvergence {
        what: format!("definite Jackson integral on [0, {b}]"),
        terms: ctx.max_terms(),
    })
}

pub fn jackson_definite<F: Fn(f64) -> f64>(
    ctx: &QContext,
    f: F,
    b: f64,
) -> Result<QuadratureResult> {
    try_jackson_definite(ctx, |x| Ok(f(x)), b)
}

/// `int_{-b}^{b} f d_qx`, summing `f(x) + f(-x)` at each node before scaling so
/// that odd integrands cancel exactly.
pub fn try_jackson_symmetric<F>(ctx: &QContext, f: F, b: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    try_jackson_definite(ctx, |x| Ok(f(x)? + f(-x)?), b)
}

pub fn jackson_symmetric<F: Fn(f64) -> f64>(
    ctx: &QContext,
    f: F,
    b: f64,
) -> Result<QuadratureResult> {
    try_jackson_symmetric(ctx, |x| Ok(f(x)), b)
}

struct TailSum {
    sum: f64,
    terms: usize,
    bound: f64,
}

/// One side of the bilateral sum: `sum_{m>=0} w_m f(x_m)` with `x_{m+1} = x_m * step`.
fn sum_tail<F>(ctx: &QContext, f: &F, x0: f64, step: f64, tail: Tail) -> Result<TailSum>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut sum = 0.0;
    let mut x = x0;
    let mut window: VecDeque<f64> = VecDeque::with_capacity(WINDOW + 1);
    for m in 0..ctx.max_terms() {
        let term = x * check_finite(x, f(x)?)?;
        sum += term;
        window.push_back(term.abs());
        if window.len() > WINDOW {
            window.pop_front();
        }
        x *= step;
        if window.len() == WINDOW {
            if let Some(bound) = geometric_tail(&window) {
                if bound < ctx.tol() {
                    return Ok(TailSum {
                        sum,
                        terms: m + 1,
                        bound,
                    });
                }
            }
        }
    }
    Err(Error::TailNonConvergence {
        tail,
        terms: ctx.max_terms(),
    })
}

/// `int_0^{inf/a} f d_qx = (1-q) sum_{n in Z} (q^n/a) f(q^n/a)`, summed outward
/// from `n = 0` with each tail truncated on its own.
///
/// Accepts integrands whose upper tail decays super-geometrically, such as
/// those built on the product form of `e_{q,2}`; nothing here detects a
/// slowly decaying integrand other than running out of terms.
pub fn try_jackson_improper<F>(ctx: &QContext, f: F, a: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a > 0.0) {
        return Err(Error::Domain(format!(
            "improper scale a = {a} must be positive"
        )));
    }
    let q = ctx.q();
    let lower = sum_tail(ctx, &f, 1.0 / a, q, Tail::Lower)?;
    let upper = sum_tail(ctx, &f, 1.0 / (a * q), 1.0 / q, Tail::Upper)?;
    Ok(QuadratureResult {
        value: (1.0 - q) * (lower.sum + upper.sum),
        terms_used: lower.terms + upper.terms,
        tail_bound: (1.0 - q) * (lower.bound + upper.bound),
    })
}

pub fn jackson_improper<F: Fn(f64) -> f64>(
    ctx: &QContext,
    f: F,
    a: f64,
) -> Result<QuadratureResult> {
    try_jackson_improper(ctx, |x| Ok(f(x)), a)
}

/// Bilateral improper integral over `(-inf/a, inf/a)`, node-paired like
/// [`try_jackson_symmetric`].
pub fn try_jackson_improper_symmetric<F>(ctx: &QContext, f: F, a: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    try_jackson_improper(ctx, |x| Ok(f(x)? + f(-x)?), a)
}

pub fn integrate<F>(ctx: &QContext, f: F, domain: IntegrationDomain) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    match domain {
        IntegrationDomain::Definite { b } => try_jackson_definite(ctx, f, b),
        IntegrationDomain::Improper { a } => try_jackson_improper(ctx, f, a),
        IntegrationDomain::Symmetric { b } => try_jackson_symmetric(ctx, f, b),
    }
}

/// `E_{q,2}^{-q^2 x^2 / [2]_q}` via the product form.
pub fn big_gaussian(ctx: &QContext, x: f64) -> Result<f64> {
    let q = ctx.q();
    qexp(
        ctx,
        ExpKind::BigE,
        -q * q * x * x / ctx.qint2(),
        ExpForm::Product,
    )
}

/// `e_{q,2}^{-x^2 / [2]_q}` via the product form.
pub fn small_gaussian(ctx: &QContext, x: f64) -> Result<f64> {
    qexp(ctx, ExpKind::SmallE, -x * x / ctx.qint2(), ExpForm::Product)
}

fn power(x: f64, e: f64) -> f64 {
    if e == e.trunc() && e.abs() < i32::MAX as f64 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

/// `Gamma_{q,2}(t) = int_0^nu x^{t-1} E_{q,2}^{-q^2 x^2/[2]_q} d_qx`
pub fn gamma_q2_integral(ctx: &QContext, t: f64) -> Result<QuadratureResult> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    try_jackson_definite(
        ctx,
        |x| Ok(power(x, t - 1.0) * big_gaussian(ctx, x)?),
        ctx.nu(),
    )
}

/// `gamma^{(a)}_{q,2}(t) = int_0^{inf/a(1-q^2)^(1/2)} x^{t-1} e_{q,2}^{-x^2/[2]_q} d_qx`
pub fn gamma_a_integral(ctx: &QContext, a: f64, t: f64) -> Result<QuadratureResult> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    integrate(
        ctx,
        |x| Ok(power(x, t - 1.0) * small_gaussian(ctx, x)?),
        IntegrationDomain::gaussian_improper(ctx, a),
    )
}

fn integer_exponent(t: f64) -> Result<i32> {
    let e = t - 1.0;
    if t > 0.0 && e == e.trunc() {
        Ok(e as i32)
    } else {
        Err(Error::Domain(format!(
            "x^(t-1) on a symmetric domain needs integer t > 0, got {t}"
        )))
    }
}

/// `G(t) = 1/2 int_{-nu}^{nu} x^{t-1} E_{q,2}^{-q^2 x^2/[2]_q} d_qx`
pub fn gauss_g(ctx: &QContext, t: f64) -> Result<f64> {
    let e = integer_exponent(t)?;
    let r = try_jackson_symmetric(ctx, |x| Ok(x.powi(e) * big_gaussian(ctx, x)?), ctx.nu())?;
    Ok(0.5 * r.value)
}

/// `G^{(a)}(t) = 1/2 int_{-eps}^{eps} x^{t-1} e_{q,2}^{-x^2/[2]_q} d_qx`, with
/// `eps = inf / a(1-q^2)^(1/2)`.
pub fn gauss_ga(ctx: &QContext, a: f64, t: f64) -> Result<f64> {
    let e = integer_exponent(t)?;
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a = {a} must be positive")));
    }
    let q = ctx.q();
    let scale = a * (1.0 - q * q).sqrt();
    let r =
        try_jackson_improper_symmetric(ctx, |x| Ok(x.powi(e) * small_gaussian(ctx, x)?), scale)?;
    Ok(0.5 * r.value)
}

/// `mu_{2n}`: the `x^{2n}` moment of `E_{q,2}^{-q^2 x^2/[2]_q}` on `[-nu, nu]`,
/// divided by the full symmetric integral of the weight. Equals `[1]_{n,2}`.
pub fn normalized_moment(ctx: &QContext, n: usize) -> Result<f64> {
    let e = 2 * n as i32;
    let nu = ctx.nu();
    let num = try_jackson_symmetric(ctx, |x| Ok(x.powi(e) * big_gaussian(ctx, x)?), nu)?;
    let den = try_jackson_symmetric(ctx, |x| big_gaussian(ctx, x), nu)?;
    Ok(num.value / den.value)
}

/// Unnormalized `int_{-nu}^{nu} x^p E_{q,2}^{-q^2x^2/[2]_q} d_qx` for any
/// integer power `p`; odd powers cancel node by node.
pub fn gaussian_moment_raw(ctx: &QContext, p: u32) -> Result<QuadratureResult> {
    try_jackson_symmetric(
        ctx,
        |x| Ok(x.powi(p as i32) * big_gaussian(ctx, x)?),
        ctx.nu(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::{pochhammer_qk, qint};
    use crate::qfunc::{c_factor, gamma_q2_closed};

    fn ctx(q: f64) -> QContext {
        QContext::with_q(q).unwrap()
    }

    #[test]
    fn definite_elementary() {
        let c = ctx(0.5);
        let r = jackson_definite(&c, |_| 1.0, 1.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!(r.tail_bound <= c.tol());
        // int_0^1 x d_qx = 1/[2]_q
        let r = jackson_definite(&c, |x| x, 1.0).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-14);
        assert!((r.value - 1.0 / qint(2).eval_f64(0.5)).abs() < 1e-14);
    }

    #[test]
    fn definite_rejects_bad_input() {
        let c = ctx(0.5);
        assert!(jackson_definite(&c, |x| x, 0.0).is_err());
        assert!(matches!(
            jackson_definite(&c, |x| 1.0 / (x - 0.25), 1.0),
            Err(Error::NonFinite { .. })
        ));
        let tight = QContext::new(0.5, 1e-15, 5).unwrap();
        assert!(matches!(
            jackson_definite(&tight, |x| x, 1.0),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn gamma_integral_matches_closed_form() {
        let c = ctx(0.5);
        let r = gamma_q2_integral(&c, 1.0).unwrap();
        let closed = gamma_q2_closed(&c, 1.0).unwrap();
        assert!((r.value - closed).abs() < 1e-9);
    }

    #[test]
    fn improper_compact_support_is_finite_sum() {
        let c = ctx(0.5);
        // nonzero only on the nodes 2^-1, 1, 2 (a = 1)
        let f = |x: f64| if (0.4..=2.5).contains(&x) { 1.0 } else { 0.0 };
        let r = jackson_improper(&c, f, 1.0).unwrap();
        let expected = 0.5 * (0.5 + 1.0 + 2.0);
        assert!((r.value - expected).abs() < 1e-15);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn improper_tails_reported_separately() {
        let c = QContext::new(0.5, 1e-15, 200).unwrap();
        // grows without bound on the upper tail
        match jackson_improper(&c, |x| (-x).exp() * 0.0 + 1.0 / (1.0 + x * x) * x, 1.0) {
            Err(Error::TailNonConvergence { tail, .. }) => assert_eq!(tail, Tail::Upper),
            other => panic!("expected upper tail failure, got {other:?}"),
        }
        // 1/x blows up towards the origin
        match jackson_improper(&c, |x| 1.0 / (x * x) * (-x).exp(), 1.0) {
            Err(Error::TailNonConvergence { tail, .. }) => assert_eq!(tail, Tail::Lower),
            other => panic!("expected lower tail failure, got {other:?}"),
        }
    }

    #[test]
    fn gamma_bridge() {
        for (q, a, t) in [(0.5, 1.0, 1.0), (0.5, 2.0, 3.0), (0.7, 1.0, 5.0)] {
            let c = ctx(q);
            let closed = gamma_q2_closed(&c, t).unwrap();
            let small = gamma_a_integral(&c, a, t).unwrap().value;
            let bridged = c_factor(&c, a, t).unwrap() * small;
            assert!((closed - bridged).abs() < 1e-8, "q={q} a={a} t={t}");
        }
    }

    #[test]
    fn symmetric_parity() {
        let c = ctx(0.5);
        let nu = c.nu();
        let odd = jackson_symmetric(&c, |x| x * x * x, nu).unwrap();
        assert_eq!(odd.value, 0.0);
        let even = jackson_symmetric(&c, |x| x * x + 1.0, nu).unwrap();
        let half = jackson_definite(&c, |x| x * x + 1.0, nu).unwrap();
        assert!((even.value - 2.0 * half.value).abs() < 1e-13);
        let g = try_jackson_symmetric(&c, |x| big_gaussian(&c, x), nu).unwrap();
        let closed = gamma_q2_closed(&c, 1.0).unwrap();
        assert!((g.value - 2.0 * closed).abs() < 1e-9);
    }

    #[test]
    fn gaussian_integrals() {
        let c = ctx(0.5);
        assert!(gauss_g(&c, 2.0).unwrap().abs() < 1e-12);
        assert!(gauss_g(&c, 4.0).unwrap().abs() < 1e-12);
        let g1 = gauss_g(&c, 1.0).unwrap();
        assert!((g1 - gamma_q2_closed(&c, 1.0).unwrap()).abs() < 1e-9);
        let p = pochhammer_qk(1, 2, 2).eval_f64(0.5);
        assert!((gauss_g(&c, 5.0).unwrap() / g1 - p).abs() < 1e-9);
        assert!(gauss_g(&c, 1.5).is_err());
        assert!(gauss_ga(&c, 1.0, 2.0).unwrap().abs() < 1e-12);
        // G^{(a)}(1) is the improper gamma integral (even integrand)
        let ga = gauss_ga(&c, 1.0, 1.0).unwrap();
        let direct = gamma_a_integral(&c, 1.0, 1.0).unwrap().value;
        assert!((ga - direct).abs() < 1e-12);
    }

    #[test]
    fn moments() {
        let c = ctx(0.5);
        assert!((normalized_moment(&c, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((normalized_moment(&c, 1).unwrap() - 1.0).abs() < 1e-12);
        for q in [0.3, 0.5, 0.8] {
            let c = ctx(q);
            let expected = 1.0 + q + q * q;
            assert!((normalized_moment(&c, 2).unwrap() - expected).abs() < 1e-9);
        }
        assert_eq!(gaussian_moment_raw(&c, 5).unwrap().value, 0.0);
    }

    #[test]
    fn leading_zeros_do_not_stop_the_sum() {
        let c = ctx(0.9);
        // zero on the first 20 nodes, then 1
        let r = jackson_definite(
            &c,
            |x| {
                if x < 0.9f64.powi(20) * 1.0001 {
                    1.0
                } else {
                    0.0
                }
            },
            1.0,
        )
        .unwrap();
        assert!((r.value - 0.9f64.powi(20)).abs() < 1e-12);
        let zero = jackson_definite(&c, |_| 0.0, 1.0).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn linearity() {
        let c = ctx(0.6);
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3);
        let g = |x: f64| x * x - 0.25 * x.powi(4);
        let (alpha, beta) = (0.7, -1.3);
        let lhs = jackson_definite(&c, |x| alpha * f(x) + beta * g(x), 1.7)
            .unwrap()
            .value;
        let rhs = alpha * jackson_definite(&c, f, 1.7).unwrap().value
            + beta * jackson_definite(&c, g, 1.7).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
